use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use super::config::CampaignConfig;
use super::record::{Status, VerificationRecord};
use super::run::execute;
use crate::arith::is_prime_u64;
use crate::error::{Error, Result};
use crate::symmetry::{Family, OrbitKey};

/// Verdict of the q-Chebotarev property for F_M.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChebotarevReport {
    pub order: u64,
    pub q: u64,
    pub holds: bool,
    pub orbits: usize,
    /// Orbit pairs whose norm q divides.
    pub witnesses: Vec<OrbitKey>,
}

fn norm_tables() -> &'static Mutex<HashMap<u64, Arc<Vec<VerificationRecord>>>> {
    static TABLES: OnceLock<Mutex<HashMap<u64, Arc<Vec<VerificationRecord>>>>> = OnceLock::new();
    TABLES.get_or_init(Default::default)
}

/// Characteristic-0 records of every all-pairs orbit of F_M, computed once per M.
pub fn all_pairs_norms(m: u64) -> Result<Arc<Vec<VerificationRecord>>> {
    if let Some(t) = norm_tables().lock().unwrap().get(&m) {
        return Ok(t.clone());
    }
    let cfg = CampaignConfig::new(m, Family::AllPairs).allow_nonsquarefree(true).record_norms(true).with_workers(rayon::current_num_threads());
    let run = execute(&cfg, None)?;
    let table = Arc::new(run.records);
    norm_tables().lock().unwrap().insert(m, table.clone());
    Ok(table)
}

/// Whether no minor norm of F_M is divisible by q. Sizes above ⌊M/2⌋ follow
/// by complementarity, which holds in characteristic q since q ∤ det F_M.
pub fn chebotarev_property(m: u64, q: u64) -> Result<ChebotarevReport> {
    if !is_prime_u64(q) {
        return Err(Error::NotPrime(q));
    }
    if m % q == 0 {
        return Err(Error::CharacteristicDividesOrder { q, n: m });
    }
    let table = all_pairs_norms(m)?;
    let witnesses: Vec<OrbitKey> = table
        .iter()
        .filter(|r| match r.status {
            Status::ZeroWitness => true,
            Status::Nonzero => r.norm_divisible_by(q).unwrap_or(false),
            Status::ApCertified | Status::SkippedByComplement => false,
        })
        .map(|r| r.orbit_key.clone())
        .collect();
    Ok(ChebotarevReport { order: m, q, holds: witnesses.is_empty(), orbits: table.len(), witnesses })
}
