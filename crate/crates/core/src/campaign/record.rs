use std::fmt;

use num_bigint::BigInt;
use num_traits::Num;
use serde::{Deserialize, Serialize};

use super::config::sha256_hex;
use crate::arith::{from_signed_hex, to_signed_hex};
use crate::factor::Factorization;
use crate::symmetry::{Family, OrbitKey};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Nonzero,
    ZeroWitness,
    ApCertified,
    SkippedByComplement,
}

impl Status {
    pub const ALL: [Status; 4] = [Status::Nonzero, Status::ZeroWitness, Status::ApCertified, Status::SkippedByComplement];

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Nonzero => "nonzero",
            Status::ZeroWitness => "zero-witness",
            Status::ApCertified => "ap-certified",
            Status::SkippedByComplement => "skipped-by-complement",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A prime power of a factored norm; `composite` marks an unsplit cofactor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEntry {
    pub prime: String,
    pub exp: u32,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub composite: bool,
}

pub fn factor_entries(f: &Factorization) -> Vec<FactorEntry> {
    let mut out: Vec<FactorEntry> = f
        .primes
        .iter()
        .map(|(p, e)| FactorEntry { prime: p.to_str_radix(16), exp: *e, composite: false })
        .collect();
    if let Some(c) = &f.cofactor {
        out.push(FactorEntry { prime: c.to_str_radix(16), exp: 1, composite: true });
    }
    out
}

/// One line of a checkpoint file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub schema_version: u32,
    pub config_digest: String,
    pub orbit_key: OrbitKey,
    pub family: Family,
    pub status: Status,
    pub norm_hex: Option<String>,
    pub factors: Option<Vec<FactorEntry>>,
    pub micros: u64,
    pub backend: String,
    /// sha256 over the other fields; detects corrupted lines.
    #[serde(default)]
    pub checksum: String,
}

impl VerificationRecord {
    pub fn compute_checksum(&self) -> String {
        let mut value = serde_json::to_value(self).expect("plain data");
        value.as_object_mut().expect("record is an object").remove("checksum");
        sha256_hex(value.to_string().as_bytes())
    }

    pub fn sealed(mut self) -> Self {
        self.checksum = self.compute_checksum();
        self
    }

    pub fn checksum_ok(&self) -> bool {
        self.checksum == self.compute_checksum()
    }

    pub fn norm(&self) -> Option<BigInt> {
        self.norm_hex.as_deref().and_then(from_signed_hex)
    }

    pub fn set_norm(&mut self, norm: &BigInt) {
        self.norm_hex = Some(to_signed_hex(norm));
    }

    /// Norm modulo a small prime, from the stored hex.
    pub fn norm_divisible_by(&self, q: u64) -> Option<bool> {
        let hex = self.norm_hex.as_deref()?;
        let digits = hex.strip_prefix('-').unwrap_or(hex);
        let v = BigInt::from_str_radix(digits, 16).ok()?;
        Some((v % BigInt::from(q)) == BigInt::from(0))
    }
}
