use std::path::PathBuf;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::arith::{euler_phi, is_prime_u64, is_squarefree};
use crate::error::{Error, Result};
use crate::factor::DEFAULT_RHO_BUDGET;
use crate::symmetry::{Family, MAX_ORDER};

pub const SCHEMA_VERSION: u32 = 1;

/// Campaigns estimated above this many orbits are refused.
pub const ORBIT_LIMIT: f64 = 1e7;

#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub order: u64,
    pub family: Family,
    /// Largest subset size; `None` means ⌊N/2⌋.
    pub max_size: Option<usize>,
    /// 0, or a prime q ∤ N: then "nonzero" means q ∤ N(D).
    pub characteristic: u64,
    pub workers: usize,
    pub checkpoint: Option<PathBuf>,
    /// Pollard-rho iteration budget for factoring norms.
    pub factor_budget: u64,
    pub allow_nonsquarefree: bool,
    /// Record exact norms (and their factors). Without them a characteristic-0
    /// campaign settles nonzero orbits by one embedding modulo a prime.
    pub record_norms: bool,
}

/// The fields that determine results; worker count and paths are excluded.
#[derive(Serialize)]
struct DigestInput {
    schema_version: u32,
    order: u64,
    family: Family,
    max_size: usize,
    characteristic: u64,
    factor_budget: u64,
    allow_nonsquarefree: bool,
    record_norms: bool,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl CampaignConfig {
    pub fn new(order: u64, family: Family) -> Self {
        CampaignConfig {
            order,
            family,
            max_size: None,
            characteristic: 0,
            workers: 1,
            checkpoint: None,
            factor_budget: DEFAULT_RHO_BUDGET,
            allow_nonsquarefree: false,
            record_norms: true,
        }
    }

    pub fn with_characteristic(mut self, q: u64) -> Self {
        self.characteristic = q;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_checkpoint(mut self, path: impl Into<PathBuf>) -> Self {
        self.checkpoint = Some(path.into());
        self
    }

    pub fn with_max_size(mut self, m: usize) -> Self {
        self.max_size = Some(m);
        self
    }

    pub fn with_factor_budget(mut self, budget: u64) -> Self {
        self.factor_budget = budget;
        self
    }

    pub fn allow_nonsquarefree(mut self, allow: bool) -> Self {
        self.allow_nonsquarefree = allow;
        self
    }

    pub fn record_norms(mut self, record: bool) -> Self {
        self.record_norms = record;
        self
    }

    pub fn effective_max_size(&self) -> usize {
        self.max_size.unwrap_or((self.order / 2) as usize)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        if n == 0 || n > MAX_ORDER {
            return Err(Error::InvalidArgument(format!("order must lie in [1, {MAX_ORDER}]")));
        }
        if !self.allow_nonsquarefree && !is_squarefree(n) {
            return Err(Error::NotSquarefree { n });
        }
        if self.effective_max_size() as u64 > n / 2 {
            return Err(Error::InvalidArgument(format!("max size exceeds ⌊N/2⌋ = {}", n / 2)));
        }
        if self.characteristic != 0 {
            if !is_prime_u64(self.characteristic) {
                return Err(Error::NotPrime(self.characteristic));
            }
            if n % self.characteristic == 0 {
                return Err(Error::CharacteristicDividesOrder { q: self.characteristic, n });
            }
        }
        if self.characteristic != 0 && !self.record_norms {
            return Err(Error::InvalidArgument("characteristic checks need exact norms".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidArgument("need at least one worker".into()));
        }
        self.family.validate(n)?;
        let estimate = self.estimated_orbits();
        if estimate > ORBIT_LIMIT {
            return Err(Error::TooLarge { estimate, limit: ORBIT_LIMIT });
        }
        Ok(())
    }

    pub fn digest(&self) -> String {
        let input = DigestInput {
            schema_version: SCHEMA_VERSION,
            order: self.order,
            family: self.family,
            max_size: self.effective_max_size(),
            characteristic: self.characteristic,
            factor_budget: self.factor_budget,
            allow_nonsquarefree: self.allow_nonsquarefree,
            record_norms: self.record_norms,
        };
        sha256_hex(serde_json::to_string(&input).expect("plain data").as_bytes())
    }

    /// Members of the family divided by the order of its group: a close lower
    /// bound for the number of orbits.
    pub fn estimated_orbits(&self) -> f64 {
        let n = self.order;
        let d = self.family.modulus(n).max(1);
        let k = (n / d) as usize;
        let max = self.effective_max_size();
        // generating function Σ_c C(k,c)^2 x^c, raised to the d-th power
        let binom = |a: usize, b: usize| -> f64 { (0..b).fold(1.0, |acc, i| acc * (a - i) as f64 / (i + 1) as f64) };
        let base: Vec<f64> = (0..=k).map(|c| binom(k, c).powi(2)).collect();
        let mut poly = vec![1.0f64];
        for _ in 0..d {
            let mut next = vec![0.0; (poly.len() + k).min(max + 1)];
            for (i, &p) in poly.iter().enumerate() {
                for (c, &b) in base.iter().enumerate() {
                    if i + c < next.len() {
                        next[i + c] += p * b;
                    }
                }
            }
            poly = next;
        }
        let members: f64 = poly.iter().skip(1).sum();
        let group = if n <= 2 {
            1.0
        } else {
            let g = (n * euler_phi(n)) as f64;
            g * g / (d * euler_phi(d)) as f64
        };
        members / group
    }
}
