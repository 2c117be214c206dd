use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::checkpoint::{load_checkpoint, CheckpointWriter};
use super::config::{sha256_hex, CampaignConfig, SCHEMA_VERSION};
use super::record::{factor_entries, Status, VerificationRecord};
use crate::arith::to_signed_hex;
use crate::error::{Error, Result};
use crate::factor::factorize;
use crate::minors::{fourier_minor, minor_is_zero, minor_norm_value, NormBackend};
use crate::symmetry::{ap_certificate, Family, FamilyAction, OrbitKey};

/// Orbits handed to the pool at a time; also the granularity of interruption.
pub const CHUNK: usize = 256;

/// Deterministic summary of a campaign: a pure function of the configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CampaignReport {
    pub config_digest: String,
    pub order: u64,
    pub family: Family,
    pub characteristic: u64,
    pub max_size: usize,
    pub orbits: usize,
    /// Members of the family covered by the recorded orbits.
    pub members: u64,
    pub counts: BTreeMap<Status, usize>,
    pub zero_witnesses: Vec<OrbitKey>,
    pub complete: bool,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.complete && self.zero_witnesses.is_empty()
    }

    pub fn digest(&self) -> String {
        sha256_hex(serde_json::to_string(self).expect("plain data").as_bytes())
    }

    pub fn count(&self, status: Status) -> usize {
        self.counts.get(&status).copied().unwrap_or(0)
    }
}

/// Orbits and records of a finished (or interrupted) run.
#[derive(Clone, Debug)]
pub struct CampaignRun {
    pub report: CampaignReport,
    pub records: Vec<VerificationRecord>,
}

/// Every orbit the campaign must cover, in canonical key order.
pub fn campaign_keys(cfg: &CampaignConfig) -> Result<Vec<OrbitKey>> {
    cfg.validate()?;
    let action = FamilyAction::new(cfg.order, cfg.family)?;
    let mut keys = Vec::new();
    for m in 1..=cfg.effective_max_size() {
        let rows = action.canonical_rows(m);
        let mut sized: Vec<OrbitKey> =
            rows.par_iter().flat_map_iter(|(a, stab)| action.orbits_for_row(*a, stab)).collect();
        keys.append(&mut sized);
    }
    Ok(keys)
}

struct Worker<'a> {
    cfg: &'a CampaignConfig,
    action: FamilyAction,
    digest: String,
}

impl Worker<'_> {
    fn record(&self, key: &OrbitKey, status: Status, norm: Option<&BigInt>, backend: &str, started: Instant) -> VerificationRecord {
        let factors = norm.filter(|v| !v.is_zero()).map(|v| factor_entries(&factorize(v.magnitude(), self.cfg.factor_budget)));
        VerificationRecord {
            schema_version: SCHEMA_VERSION,
            config_digest: self.digest.clone(),
            orbit_key: key.clone(),
            family: self.cfg.family,
            status,
            norm_hex: norm.map(to_signed_hex),
            factors,
            micros: started.elapsed().as_micros() as u64,
            backend: backend.to_string(),
            checksum: String::new(),
        }
        .sealed()
    }

    fn process(&self, key: &OrbitKey) -> Result<VerificationRecord> {
        let started = Instant::now();
        let n = self.cfg.order;
        if 2 * key.size() as u64 == n && self.action.complement_key(key) < *key {
            return Ok(self.record(key, Status::SkippedByComplement, None, "complement", started));
        }
        let spec = key.spec();
        // the certificate's norm has only prime factors dividing N, so it also
        // settles every admissible characteristic
        if ap_certificate(&spec).is_some() {
            return Ok(self.record(key, Status::ApCertified, None, "ap-certificate", started));
        }
        if !self.cfg.record_norms && !minor_is_zero(&spec) {
            return Ok(self.record(key, Status::Nonzero, None, "single-embedding", started));
        }
        let norm = minor_norm_value(&spec, NormBackend::Multimodular);
        let q = self.cfg.characteristic;
        let vanishes = if q == 0 { norm.is_zero() } else { (&norm % BigInt::from(q)).is_zero() };
        if !vanishes {
            return Ok(self.record(key, Status::Nonzero, Some(&norm), "multimodular", started));
        }
        if norm.is_zero() {
            if !fourier_minor(&spec).is_zero() {
                return Err(Error::BackendDisagreement(format!("modular norm of {spec} is 0 but D ≠ 0")));
            }
        } else {
            let symbolic = minor_norm_value(&spec, NormBackend::Symbolic);
            if symbolic != norm {
                return Err(Error::BackendDisagreement(format!("norms of {spec} differ: {norm} vs {symbolic}")));
            }
        }
        Ok(self.record(key, Status::ZeroWitness, Some(&norm), "multimodular+symbolic", started))
    }
}

/// Runs (or resumes) a campaign; `stop_after` caps the number of new records,
/// simulating an interruption.
pub fn execute(cfg: &CampaignConfig, stop_after: Option<usize>) -> Result<CampaignRun> {
    let keys = campaign_keys(cfg)?;
    let digest = cfg.digest();
    let mut done: HashMap<(Vec<u64>, Vec<u64>), VerificationRecord> = HashMap::new();
    let mut writer = None;
    if let Some(path) = &cfg.checkpoint {
        for rec in load_checkpoint(path, &digest)? {
            done.insert((rec.orbit_key.rows.clone(), rec.orbit_key.cols.clone()), rec);
        }
        writer = Some(CheckpointWriter::open(path)?);
    }
    let pending: Vec<&OrbitKey> =
        keys.iter().filter(|k| !done.contains_key(&(k.rows.clone(), k.cols.clone()))).collect();
    let budget = stop_after.unwrap_or(usize::MAX).min(pending.len());
    let worker = Worker { cfg, action: FamilyAction::new(cfg.order, cfg.family)?, digest: digest.clone() };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    for chunk in pending[..budget].chunks(CHUNK) {
        let fresh: Vec<VerificationRecord> =
            pool.install(|| chunk.par_iter().map(|k| worker.process(k)).collect::<Result<_>>())?;
        for rec in fresh {
            if let Some(w) = writer.as_mut() {
                w.append(&rec)?;
            }
            done.insert((rec.orbit_key.rows.clone(), rec.orbit_key.cols.clone()), rec);
        }
    }
    if let Some(w) = writer.as_mut() {
        w.flush()?;
    }
    let records: Vec<VerificationRecord> =
        keys.iter().filter_map(|k| done.remove(&(k.rows.clone(), k.cols.clone()))).collect();
    let mut counts: BTreeMap<Status, usize> = BTreeMap::new();
    for r in &records {
        *counts.entry(r.status).or_default() += 1;
    }
    let report = CampaignReport {
        config_digest: digest,
        order: cfg.order,
        family: cfg.family,
        characteristic: cfg.characteristic,
        max_size: cfg.effective_max_size(),
        orbits: keys.len(),
        members: records.iter().map(|r| r.orbit_key.orbit_size).sum(),
        zero_witnesses: records.iter().filter(|r| r.status == Status::ZeroWitness).map(|r| r.orbit_key.clone()).collect(),
        complete: records.len() == keys.len(),
        counts,
    };
    Ok(CampaignRun { report, records })
}

/// Exhaustive characteristic-0 check of one family.
pub fn verify_family(cfg: &CampaignConfig) -> Result<CampaignReport> {
    if cfg.characteristic != 0 {
        return Err(Error::InvalidArgument("verify_family runs in characteristic 0; use char_p_verify".into()));
    }
    Ok(execute(cfg, None)?.report)
}

/// Whether every minor of the family of F_{N′} stays nonzero modulo p, read as p ∤ N(D).
pub fn char_p_verify(n_prime: u64, p: u64, family: Family) -> Result<CampaignReport> {
    if n_prime % p == 0 {
        return Err(Error::CharacteristicDividesOrder { q: p, n: n_prime });
    }
    let cfg = CampaignConfig::new(n_prime, family).with_characteristic(p);
    Ok(execute(&cfg, None)?.report)
}

/// Continues the campaign recorded at `checkpoint`.
pub fn run_resume(cfg: &CampaignConfig, checkpoint: &std::path::Path) -> Result<CampaignReport> {
    let cfg = cfg.clone().with_checkpoint(checkpoint);
    Ok(execute(&cfg, None)?.report)
}
