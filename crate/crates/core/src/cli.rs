//! Command-line surface. Every verb builds one report value that is printed
//! either as text or, with `--json`, as a single JSON document.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{chain_threshold_holds, gamma, gamma_n, zhang_threshold_holds, ThresholdReport};
use crate::campaign::{
    certify, chebotarev_property, execute, CampaignConfig, CampaignReport, CertifyOutcome, ChebotarevReport, Status,
    Strategy,
};
use crate::det;
use crate::error::{Error, Result};
use crate::factor::{factorize, DEFAULT_RHO_BUDGET};
use crate::minors::{classify, fourier_minor, minor_norm_value, parse_set, MinorClassification, MinorSpec, NormBackend};
use crate::structure::{block_determinant, random_block_spec, verify_kron_equivalence};
use crate::symmetry::Family;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "dft-minors", version, about = "Exact nonvanishing checks for minors of discrete Fourier matrices")]
pub struct Cli {
    /// Emit one JSON document on standard output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct MinorArgs {
    /// Matrix order N.
    #[arg(long)]
    pub n: u64,
    /// Row indices, comma-separated.
    #[arg(long)]
    pub rows: String,
    /// Column indices, comma-separated; defaults to the rows.
    #[arg(long)]
    pub cols: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Principal,
    DPrincipal,
    NprimePrincipal,
    All,
}

#[derive(Args, Debug, Clone)]
pub struct CampaignArgs {
    /// Matrix order N.
    #[arg(long)]
    pub n: u64,
    #[arg(long, value_enum, default_value = "principal")]
    pub family: FamilyArg,
    /// Modulus for the d-principal family.
    #[arg(long)]
    pub d: Option<u64>,
    /// Prime p | N for the N′-principal family (N′ = N/p).
    #[arg(long)]
    pub p: Option<u64>,
    /// Largest subset size (default ⌊N/2⌋).
    #[arg(long)]
    pub max_size: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// JSONL checkpoint; an existing file is resumed.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Pollard-rho iteration budget for factoring norms.
    #[arg(long, default_value_t = DEFAULT_RHO_BUDGET)]
    pub factor_budget: u64,
    /// Permit orders that are not square-free (negative controls).
    #[arg(long)]
    pub allow_nonsquarefree: bool,
    /// Settle nonzero orbits by one modular embedding instead of exact norms
    /// (characteristic 0 only).
    #[arg(long)]
    pub no_norms: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Prime,
    Lift,
    Chain,
    Hadamard,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The minor D_{A,B} = det F_N[A,B] as an element of Z[ω_N].
    Minor(MinorArgs),
    /// The absolute norm N(D_{A,B}) with its factorization; N(D) = 0 iff D = 0.
    Norm {
        #[command(flatten)]
        minor: MinorArgs,
        #[arg(long, value_enum, default_value = "multimodular")]
        backend: BackendArg,
        #[arg(long, default_value_t = DEFAULT_RHO_BUDGET)]
        factor_budget: u64,
    },
    /// Principal, d-principal and d-Galois principal classification of a minor.
    Classify(MinorArgs),
    /// Exhaustive check over affine orbits that no minor of the family of F_N vanishes
    /// (for principal minors of square-free N this is the nonvanishing conjecture).
    Verify(CampaignArgs),
    /// Checks that every minor of the family of F_{N′} is nonzero in characteristic p,
    /// the hypothesis of the characteristic-p lifting theorem for N = p·N′.
    Charp {
        #[command(flatten)]
        campaign: CampaignArgs,
        /// The characteristic p, a prime not dividing N′.
        #[arg(long = "char")]
        characteristic: u64,
    },
    /// The q-Chebotarev property of F_M: no minor norm is divisible by q.
    Chebprop {
        /// The order M.
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
    },
    /// Certifies that all principal minors of F_N are nonzero: Chebotarev for primes,
    /// the characteristic-p lift, the prime threshold chain, or the Hadamard-bound lift.
    Certify {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
    },
    /// Γ_p, the largest generalized Vandermonde quotient s_a(1,…,1) over a_1 < … < a_n < p;
    /// with --n, only γ_n(p).
    Gamma {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Exact threshold comparisons: the prime chain p_next > (P/2)^(Pφ(P)/4) with
    /// --prefix/--next, or the generalized Zhang bound q^r > Γ_p^(p−1) with --p/--q.
    Threshold {
        /// Increasing primes p_1,…,p_j.
        #[arg(long)]
        prefix: Option<String>,
        #[arg(long)]
        next: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
    },
    /// Checks that F_{mn}, rows permuted by τ∘ρ and columns by ρ, equals F_m ⊗ F_n.
    KronCheck {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
    },
    /// Compares the block-triangular determinant formula with direct elimination
    /// on random block matrices.
    BlockCheck {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_blocks: usize,
        #[arg(long, default_value_t = 2)]
        max_width: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Symbolic,
    Multimodular,
}

/// A verb's result: serialized for `--json`, rendered for humans otherwise.
trait Report: Serialize {
    fn human(&self) -> String;
    fn success(&self) -> bool;
}

fn spec_of(args: &MinorArgs) -> Result<MinorSpec> {
    let rows = parse_set(&args.rows)?;
    let cols = match &args.cols {
        Some(c) => parse_set(c)?,
        None => rows.clone(),
    };
    MinorSpec::from_unsorted(args.n, rows, cols)
}

#[derive(Serialize)]
struct MinorReport {
    spec: String,
    /// Power-basis coefficients modulo Φ_N, as decimal strings.
    coeffs: Vec<String>,
    value: String,
    zero: bool,
}

impl Report for MinorReport {
    fn human(&self) -> String {
        format!("{}\nD = {}\n", self.spec, self.value)
    }
    fn success(&self) -> bool {
        !self.zero
    }
}

#[derive(Serialize)]
struct NormView {
    spec: String,
    backend: NormBackend,
    norm: String,
    factors: Vec<(String, u32)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unfactored: Option<String>,
    rendered: String,
}

impl Report for NormView {
    fn human(&self) -> String {
        let mut s = format!("{}\n", self.rendered);
        if let Some(c) = &self.unfactored {
            let _ = writeln!(s, "unfactored cofactor: {c}");
        }
        s
    }
    fn success(&self) -> bool {
        self.norm != "0"
    }
}

#[derive(Serialize)]
struct ClassifyView {
    spec: String,
    #[serde(flatten)]
    classification: MinorClassification,
}

impl Report for ClassifyView {
    fn human(&self) -> String {
        let c = &self.classification;
        let mut s = format!("{}\nprincipal: {}\n", self.spec, c.principal);
        for (d, p) in &c.d_principal {
            let galois = match c.d_galois.get(d).copied().flatten() {
                Some(k) => format!("s={k}"),
                None => "no".into(),
            };
            let _ = writeln!(s, "d={d}: d-principal {p}, d-Galois principal {galois}");
        }
        s
    }
    fn success(&self) -> bool {
        true
    }
}

impl Report for CampaignReport {
    fn human(&self) -> String {
        let mut s = format!(
            "N={} family={} characteristic={} max-size={}\norbits: {} ({})\nmembers covered: {}\n",
            self.order,
            self.family,
            self.characteristic,
            self.max_size,
            self.orbits,
            if self.complete { "complete" } else { "incomplete" },
            self.members,
        );
        for status in Status::ALL {
            let _ = writeln!(s, "  {status}: {}", self.count(status));
        }
        if !self.zero_witnesses.is_empty() {
            s.push_str("zero witnesses:\n");
            for k in &self.zero_witnesses {
                let _ = writeln!(s, "  {} (orbit size {})", k.label(), k.orbit_size);
            }
        }
        let _ = writeln!(s, "report digest: {}", self.digest());
        let _ = writeln!(s, "verdict: {}", if self.passed() { "PASS" } else { "FAIL" });
        s
    }
    fn success(&self) -> bool {
        self.passed()
    }
}

impl Report for ChebotarevReport {
    fn human(&self) -> String {
        let mut s = format!("F_{} over {} orbit pairs, q={}: {}\n", self.order, self.orbits, self.q, self.holds);
        for k in &self.witnesses {
            let _ = writeln!(s, "  witness {}", k.label());
        }
        s
    }
    fn success(&self) -> bool {
        self.holds
    }
}

impl Report for CertifyOutcome {
    fn human(&self) -> String {
        match self {
            CertifyOutcome::Certified(c) => {
                let mut s = format!("certified: {} (rule {})\n", c.claim, c.rule);
                c.derivation.render(1, &mut s);
                s
            }
            CertifyOutcome::Failed(f) => {
                let mut s = format!("no rule certifies N={}\n", f.order);
                for a in &f.attempts {
                    let _ = writeln!(s, "  [{}] {}", a.rule, a.detail);
                    if !a.witnesses.is_empty() {
                        let _ = writeln!(s, "    witnesses: {}", a.witnesses.join(" "));
                    }
                }
                s
            }
        }
    }
    fn success(&self) -> bool {
        self.certificate().is_some()
    }
}

#[derive(Serialize)]
struct GammaView {
    p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    value: String,
}

impl Report for GammaView {
    fn human(&self) -> String {
        match self.n {
            Some(n) => format!("γ_{n}({}) = {}\n", self.p, self.value),
            None => format!("Γ_{} = {}\n", self.p, self.value),
        }
    }
    fn success(&self) -> bool {
        true
    }
}

impl Report for ThresholdReport {
    fn human(&self) -> String {
        let mut s = format!("{}: {}\nlhs = {}\nrhs = {}\n", self.inequality, if self.holds { "holds" } else { "fails" }, self.lhs, self.rhs);
        if let Some(t) = &self.threshold {
            let _ = writeln!(s, "threshold = {t}");
        }
        if let (Some(r), Some(g)) = (self.r, &self.gamma) {
            let _ = writeln!(s, "r = {r}, Γ = {g}");
        }
        s
    }
    fn success(&self) -> bool {
        self.holds
    }
}

#[derive(Serialize)]
struct CheckView {
    check: String,
    trials: usize,
    agreed: usize,
    /// Trials where the formula does not apply (a vanishing leading minor).
    skipped: usize,
    holds: bool,
}

impl Report for CheckView {
    fn human(&self) -> String {
        let mut s = format!("{}: {}\n", self.check, if self.holds { "holds" } else { "FAILS" });
        if self.trials > 1 {
            let _ = writeln!(s, "{} of {} trials agree, {} skipped", self.agreed, self.trials, self.skipped);
        }
        s
    }
    fn success(&self) -> bool {
        self.holds
    }
}

fn family_of(args: &CampaignArgs) -> Result<Family> {
    let need = |v: Option<u64>, flag: &str| v.ok_or_else(|| Error::InvalidArgument(format!("this family needs --{flag}")));
    Ok(match args.family {
        FamilyArg::Principal => Family::Principal,
        FamilyArg::All => Family::AllPairs,
        FamilyArg::DPrincipal => Family::DPrincipal(need(args.d, "d")?),
        FamilyArg::NprimePrincipal => Family::NPrimePrincipal(need(args.p, "p")?),
    })
}

fn campaign_config(args: &CampaignArgs, characteristic: u64) -> Result<CampaignConfig> {
    let mut cfg = CampaignConfig::new(args.n, family_of(args)?)
        .with_characteristic(characteristic)
        .with_workers(args.workers)
        .with_factor_budget(args.factor_budget)
        .allow_nonsquarefree(args.allow_nonsquarefree)
        .record_norms(!args.no_norms);
    cfg.max_size = args.max_size;
    if let Some(path) = &args.checkpoint {
        cfg = cfg.with_checkpoint(path);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit<R: Report>(report: &R, json: bool, out: &mut dyn Write) -> Result<i32> {
    if json {
        serde_json::to_writer_pretty(&mut *out, report)?;
        out.write_all(b"\n")?;
    } else {
        out.write_all(report.human().as_bytes())?;
    }
    Ok(if report.success() { EXIT_OK } else { EXIT_FALSE })
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let json = cli.json;
    match cli.command {
        Command::Minor(args) => {
            let spec = spec_of(&args)?;
            let d = fourier_minor(&spec);
            let report = MinorReport {
                spec: spec.to_string(),
                coeffs: d.coeffs().iter().map(BigInt::to_string).collect(),
                value: d.to_string(),
                zero: d.is_zero(),
            };
            emit(&report, json, out)
        }
        Command::Norm { minor, backend, factor_budget } => {
            let spec = spec_of(&minor)?;
            let backend = match backend {
                BackendArg::Symbolic => NormBackend::Symbolic,
                BackendArg::Multimodular => NormBackend::Multimodular,
            };
            let norm = minor_norm_value(&spec, backend);
            let f = factorize(norm.magnitude(), factor_budget);
            let sign = if norm < BigInt::zero() { "-" } else { "" };
            let rendered = if norm.is_zero() { "0".to_string() } else { format!("{norm} = {sign}{}", f.render()) };
            let report = NormView {
                spec: spec.to_string(),
                backend,
                norm: norm.to_string(),
                factors: f.primes.iter().map(|(p, e)| (p.to_string(), *e)).collect(),
                unfactored: f.cofactor.as_ref().map(|c| c.to_string()),
                rendered,
            };
            emit(&report, json, out)
        }
        Command::Classify(args) => {
            let spec = spec_of(&args)?;
            emit(&ClassifyView { spec: spec.to_string(), classification: classify(&spec) }, json, out)
        }
        Command::Verify(args) => {
            let cfg = campaign_config(&args, 0)?;
            emit(&execute(&cfg, None)?.report, json, out)
        }
        Command::Charp { campaign, characteristic } => {
            if characteristic == 0 {
                return Err(Error::InvalidArgument("--char must be a prime".into()));
            }
            let cfg = campaign_config(&campaign, characteristic)?;
            emit(&execute(&cfg, None)?.report, json, out)
        }
        Command::Chebprop { n, q } => emit(&chebotarev_property(n, q)?, json, out),
        Command::Certify { n, strategy } => {
            let strategy = match strategy {
                StrategyArg::Auto => Strategy::Auto,
                StrategyArg::Prime => Strategy::PrimeOrder,
                StrategyArg::Lift => Strategy::CharacteristicLift,
                StrategyArg::Chain => Strategy::ThresholdChain,
                StrategyArg::Hadamard => Strategy::HadamardLift,
            };
            emit(&certify(n, strategy)?, json, out)
        }
        Command::Gamma { p, n } => {
            let value = match n {
                Some(n) => gamma_n(p, n)?,
                None => gamma(p)?,
            };
            emit(&GammaView { p, n, value: value.to_string() }, json, out)
        }
        Command::Threshold { prefix, next, p, q } => {
            let report = match (prefix, next, p, q) {
                (Some(prefix), Some(next), None, None) => chain_threshold_holds(&parse_set(&prefix)?, next)?,
                (None, None, Some(p), Some(q)) => zhang_threshold_holds(p, q)?,
                _ => return Err(Error::InvalidArgument("give either --prefix and --next, or --p and --q".into())),
            };
            emit(&report, json, out)
        }
        Command::KronCheck { m, n } => {
            let holds = verify_kron_equivalence(m, n)?;
            emit(&CheckView { check: format!("F_{} ≅ F_{m} ⊗ F_{n}", m * n), trials: 1, agreed: holds as usize, skipped: 0, holds }, json, out)
        }
        Command::BlockCheck { trials, seed, max_blocks, max_width } => {
            if max_blocks == 0 || max_width == 0 {
                return Err(Error::InvalidArgument("block counts and widths must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (mut agreed, mut skipped) = (0, 0);
            for _ in 0..trials {
                let spec = random_block_spec(&mut rng, max_blocks, max_width);
                match block_determinant(&spec) {
                    Ok(v) => agreed += (v == det::det(&spec.assemble(), 1)) as usize,
                    Err(Error::ZeroPivot { .. }) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
            let holds = agreed + skipped == trials;
            emit(&CheckView { check: "block determinant formula".into(), trials, agreed, skipped, holds }, json, out)
        }
    }
}

/// Parses `args` (program name first), runs the verb and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

