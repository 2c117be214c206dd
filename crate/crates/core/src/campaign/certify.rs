//! Derivations of "all principal minors of F_N are nonzero" from cheaper facts.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use super::config::CampaignConfig;
use super::run::{char_p_verify, verify_family, CampaignReport};
use crate::arith::{factor_u64, is_prime_u64, is_squarefree};
use crate::bounds::{chain_threshold_holds, hadamard_char_bound};
use crate::error::{Error, Result};
use crate::symmetry::Family;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Try every rule in order.
    #[default]
    Auto,
    PrimeOrder,
    CharacteristicLift,
    ThresholdChain,
    HadamardLift,
}

impl Strategy {
    fn allows(self, rule: Rule) -> bool {
        match self {
            Strategy::Auto => true,
            Strategy::PrimeOrder => rule == Rule::ChebotarevPrime,
            Strategy::CharacteristicLift => rule == Rule::CharacteristicLift,
            Strategy::ThresholdChain => rule == Rule::ThresholdChain,
            Strategy::HadamardLift => rule == Rule::HadamardLift,
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => Strategy::Auto,
            "prime" | "chebotarev-prime" => Strategy::PrimeOrder,
            "lift" | "characteristic-lift" => Strategy::CharacteristicLift,
            "chain" | "threshold-chain" => Strategy::ThresholdChain,
            "hadamard" | "hadamard-lift" => Strategy::HadamardLift,
            _ => return Err(Error::InvalidArgument(format!("unknown strategy {s:?}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    ChebotarevPrime,
    CharacteristicLift,
    ThresholdChain,
    HadamardLift,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::ChebotarevPrime => "chebotarev-prime",
            Rule::CharacteristicLift => "characteristic-lift",
            Rule::ThresholdChain => "threshold-chain",
            Rule::HadamardLift => "hadamard-lift",
        })
    }
}

/// One step of a derivation; leaves that rest on computation carry the digest
/// of the campaign report they cite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub rule: String,
    pub statement: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub campaign_digest: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<Derivation>,
}

impl Derivation {
    fn node(rule: impl Into<String>, statement: impl Into<String>, children: Vec<Derivation>) -> Self {
        Derivation { rule: rule.into(), statement: statement.into(), campaign_digest: None, children }
    }

    fn campaign(statement: impl Into<String>, report: &CampaignReport) -> Self {
        Derivation {
            rule: "campaign".into(),
            statement: statement.into(),
            campaign_digest: Some(report.digest()),
            children: Vec::new(),
        }
    }

    /// Indented text rendering.
    pub fn render(&self, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!("[{}] {}", self.rule, self.statement));
        if let Some(d) = &self.campaign_digest {
            out.push_str(&format!(" (report {})", &d[..16]));
        }
        out.push('\n');
        for c in &self.children {
            c.render(depth + 1, out);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub order: u64,
    pub claim: String,
    pub rule: Rule,
    pub derivation: Derivation,
}

/// A rule that was tried and did not go through.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Attempt {
    pub rule: Rule,
    pub detail: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifyFailure {
    pub order: u64,
    pub attempts: Vec<Attempt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum CertifyOutcome {
    Certified(Certificate),
    Failed(CertifyFailure),
}

impl CertifyOutcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            CertifyOutcome::Certified(c) => Some(c),
            CertifyOutcome::Failed(_) => None,
        }
    }
}

fn claim(n: u64) -> String {
    format!("all principal minors of F_{n} are nonzero")
}

fn chebotarev_leaf(p: u64) -> Derivation {
    Derivation::node(Rule::ChebotarevPrime.to_string(), format!("every minor of F_{p} is nonzero ({p} prime)"), Vec::new())
}

/// Campaign failures that only mean "this rule does not apply here".
fn soft(e: Error) -> Result<String> {
    match e {
        Error::TooLarge { .. } | Error::InvalidArgument(_) | Error::NotSquarefree { .. } => Ok(e.to_string()),
        other => Err(other),
    }
}

enum Step {
    Done(Derivation),
    Miss(Attempt),
}

fn characteristic_lift(n: u64, p: u64) -> Result<Step> {
    let n_prime = n / p;
    let report = match char_p_verify(n_prime, p, Family::Principal) {
        Ok(r) => r,
        Err(e) => {
            return Ok(Step::Miss(Attempt { rule: Rule::CharacteristicLift, detail: format!("N′={n_prime}, p={p}: {}", soft(e)?), witnesses: Vec::new() }))
        }
    };
    if !report.passed() {
        return Ok(Step::Miss(Attempt {
            rule: Rule::CharacteristicLift,
            detail: format!("N′={n_prime}, p={p}: {} principal orbit(s) of F_{n_prime} vanish in characteristic {p}", report.zero_witnesses.len()),
            witnesses: report.zero_witnesses.iter().map(|k| k.label()).collect(),
        }));
    }
    Ok(Step::Done(Derivation::node(
        Rule::CharacteristicLift.to_string(),
        format!("{n} = {p}·{n_prime} square-free and all principal minors of F_{n_prime} are nonzero in characteristic {p}, so every {n_prime}-principal (in particular every principal) minor of F_{n} is nonzero"),
        vec![Derivation::campaign(format!("principal minors of F_{n_prime}: no norm divisible by {p}"), &report)],
    )))
}

fn threshold_chain(primes: &[u64]) -> Result<Step> {
    let mut children = vec![chebotarev_leaf(primes[0])];
    for j in 1..primes.len() {
        let t = chain_threshold_holds(&primes[..j], primes[j])?;
        let product: u64 = primes[..j].iter().product();
        if !t.holds {
            let detail = match &t.threshold {
                Some(th) => format!("{} fails: need p > {th} after F_{product}", t.inequality),
                None => format!("{} fails after F_{product}", t.inequality),
            };
            return Ok(Step::Miss(Attempt { rule: Rule::ThresholdChain, detail, witnesses: Vec::new() }));
        }
        children.push(Derivation::node(
            "threshold",
            format!("{}: every principal minor of F_{product} is nonzero in characteristic {}, lifting to F_{}", t.inequality, primes[j], product * primes[j]),
            Vec::new(),
        ));
    }
    let n: u64 = primes.iter().product();
    Ok(Step::Done(Derivation::node(
        Rule::ThresholdChain.to_string(),
        format!("each prime of {n} exceeds (P/2)^(Pφ(P)/4) for the product P of the smaller ones"),
        children,
    )))
}

fn hadamard_lift(n: u64, p: u64) -> Result<Step> {
    let n_prime = n / p;
    for m in 1..=n_prime / 2 {
        let bound = hadamard_char_bound(m, n_prime)?;
        if bound >= BigUint::from(p) {
            return Ok(Step::Miss(Attempt {
                rule: Rule::HadamardLift,
                detail: format!("N′={n_prime}, p={p}: size-{m} norm bound {bound} ≥ {p}"),
                witnesses: Vec::new(),
            }));
        }
    }
    let report = match verify_family(&CampaignConfig::new(n_prime, Family::Principal)) {
        Ok(r) => r,
        Err(e) => return Ok(Step::Miss(Attempt { rule: Rule::HadamardLift, detail: format!("N′={n_prime}: {}", soft(e)?), witnesses: Vec::new() })),
    };
    if !report.passed() {
        return Ok(Step::Miss(Attempt {
            rule: Rule::HadamardLift,
            detail: format!("F_{n_prime} has vanishing principal minors"),
            witnesses: report.zero_witnesses.iter().map(|k| k.label()).collect(),
        }));
    }
    Ok(Step::Done(Derivation::node(
        Rule::HadamardLift.to_string(),
        format!("{n} = {p}·{n_prime}; nonzero principal-minor norms of F_{n_prime} are at most m^(mφ({n_prime})/2) < {p}, hence nonzero in characteristic {p}"),
        vec![Derivation::campaign(format!("principal minors of F_{n_prime} are nonzero"), &report)],
    )))
}

/// Tries the rules allowed by `strategy` in order: prime order, characteristic
/// lift (largest prime first), threshold chain, Hadamard lift.
pub fn certify(n: u64, strategy: Strategy) -> Result<CertifyOutcome> {
    if n < 2 {
        return Err(Error::InvalidArgument("N must be at least 2".into()));
    }
    if !is_squarefree(n) {
        return Err(Error::NotSquarefree { n });
    }
    let primes: Vec<u64> = factor_u64(n).into_iter().map(|(p, _)| p).collect();
    let mut attempts = Vec::new();
    let done = |rule: Rule, derivation: Derivation| {
        Ok(CertifyOutcome::Certified(Certificate { order: n, claim: claim(n), rule, derivation }))
    };

    if strategy.allows(Rule::ChebotarevPrime) {
        if is_prime_u64(n) {
            return done(Rule::ChebotarevPrime, chebotarev_leaf(n));
        }
        attempts.push(Attempt { rule: Rule::ChebotarevPrime, detail: format!("{n} is not prime"), witnesses: Vec::new() });
    }
    if strategy.allows(Rule::CharacteristicLift) {
        for &p in primes.iter().rev() {
            match characteristic_lift(n, p)? {
                Step::Done(d) => return done(Rule::CharacteristicLift, d),
                Step::Miss(a) => attempts.push(a),
            }
        }
    }
    if strategy.allows(Rule::ThresholdChain) {
        match threshold_chain(&primes)? {
            Step::Done(d) => return done(Rule::ThresholdChain, d),
            Step::Miss(a) => attempts.push(a),
        }
    }
    if strategy.allows(Rule::HadamardLift) {
        for &p in primes.iter().rev() {
            match hadamard_lift(n, p)? {
                Step::Done(d) => return done(Rule::HadamardLift, d),
                Step::Miss(a) => attempts.push(a),
            }
        }
    }
    Ok(CertifyOutcome::Failed(CertifyFailure { order: n, attempts }))
}
