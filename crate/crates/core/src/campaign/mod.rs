//! Exhaustive verification campaigns, checkpoints and certification.

mod certify;
mod chebotarev;
mod checkpoint;
mod config;
mod record;
mod run;

pub use certify::{certify, Attempt, Certificate, CertifyFailure, CertifyOutcome, Derivation, Rule, Strategy};
pub use chebotarev::{all_pairs_norms, chebotarev_property, ChebotarevReport};
pub use checkpoint::{load_checkpoint, CheckpointWriter, FLUSH_EVERY, FLUSH_EVERY_RECORDS};
pub use config::{sha256_hex, CampaignConfig, ORBIT_LIMIT, SCHEMA_VERSION};
pub use record::{factor_entries, FactorEntry, Status, VerificationRecord};
pub use run::{campaign_keys, char_p_verify, execute, run_resume, verify_family, CampaignReport, CampaignRun, CHUNK};
