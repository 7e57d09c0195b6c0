//! Homeomorphism verdicts for Vietoris solenoids and adic surfaces, and the
//! construction of return-equivalent but non-homeomorphic adic surfaces.
//!
//! | case                              | rule                                   |
//! |-----------------------------------|----------------------------------------|
//! | two Vietoris solenoids            | homeomorphic iff return equivalent     |
//! | adic surfaces, both genus 1       | homeomorphic iff return equivalent     |
//! | adic surfaces, genus 1 and > 1    | never homeomorphic (Euler obstruction) |
//! | adic surfaces, equal genus > 1    | homeomorphic iff equal characteristics |
//! | adic surfaces, distinct genus > 1 | not decided                            |

use std::fmt;

use crate::bundles::{euler_characteristic, AdicSurface};
use crate::error::{Error, Result};
use crate::supernatural::{
    characteristic, characteristics_equal, first_difference, infinite_prime_witness, is_prime,
    sequences_return_equivalent, BondingSequence,
};
use crate::toral::{MatrixChain, ToralScreen};

/// The classification result itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Homeomorphic,
    NotHomeomorphic,
    ConsistentAtDepth(usize),
    NotCoveredByTheory(String),
}

impl Outcome {
    /// Stable tag used in output records.
    pub fn tag(&self) -> &'static str {
        match self {
            Outcome::Homeomorphic => "Homeomorphic",
            Outcome::NotHomeomorphic => "NotHomeomorphic",
            Outcome::ConsistentAtDepth(_) => "ConsistentAtDepth",
            Outcome::NotCoveredByTheory(_) => "NotCoveredByTheory",
        }
    }
}

/// Which classification result decided the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Vietoris solenoids are homeomorphic iff their sequences are return equivalent.
    VietorisReturnEquivalence,
    /// Adic surfaces over the torus are homeomorphic iff return equivalent.
    TorusReturnEquivalence,
    /// A genus-1 and a higher-genus adic surface are never homeomorphic.
    EulerObstruction,
    /// Equal genus > 1: homeomorphic iff the characteristics agree.
    EqualGenusCharacteristic,
    /// Depth-bounded invariant-factor screen for toral chains.
    ToralInvariantFactors,
    /// No applicable result.
    Uncovered,
}

impl Rule {
    pub fn tag(&self) -> &'static str {
        match self {
            Rule::VietorisReturnEquivalence => "vietoris-return-equivalence",
            Rule::TorusReturnEquivalence => "torus-return-equivalence",
            Rule::EulerObstruction => "euler-characteristic-obstruction",
            Rule::EqualGenusCharacteristic => "equal-genus-characteristic",
            Rule::ToralInvariantFactors => "toral-invariant-factor-screen",
            Rule::Uncovered => "none",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// An outcome together with the rule and witness that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub rule: Rule,
    pub witness_prime: Option<u64>,
    pub certificate: String,
}

impl Verdict {
    fn new(outcome: Outcome, rule: Rule, witness_prime: Option<u64>, certificate: String) -> Self {
        debug_assert!(!matches!(&outcome, Outcome::NotCoveredByTheory(r) if r.is_empty()));
        Verdict { outcome, rule, witness_prime, certificate }
    }

    pub fn is_homeomorphic(&self) -> bool {
        self.outcome == Outcome::Homeomorphic
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] {}", self.outcome.tag(), self.rule, self.certificate)
    }
}

fn return_equivalence_verdict(a: &BondingSequence, b: &BondingSequence, rule: Rule) -> Verdict {
    let (ca, cb) = (characteristic(a), characteristic(b));
    if sequences_return_equivalent(a, b) {
        let primes: Vec<String> = ca.infinite_primes().iter().map(u64::to_string).collect();
        Verdict::new(Outcome::Homeomorphic, rule, None, format!("same infinite primes {{{}}}", primes.join(",")))
    } else {
        let p = infinite_prime_witness(&ca, &cb).expect("inequivalent sets differ somewhere");
        Verdict::new(
            Outcome::NotHomeomorphic,
            rule,
            Some(p),
            format!("C({p}) = {} vs {}", ca.exponent(p), cb.exponent(p)),
        )
    }
}

pub fn classify_vietoris(a: &BondingSequence, b: &BondingSequence) -> Verdict {
    return_equivalence_verdict(a, b, Rule::VietorisReturnEquivalence)
}

pub fn classify_adic_surfaces(a: &AdicSurface, b: &AdicSurface) -> Verdict {
    let (ga, gb) = (a.genus(), b.genus());
    match (ga, gb) {
        (1, 1) => return_equivalence_verdict(a.seq(), b.seq(), Rule::TorusReturnEquivalence),
        (1, _) | (_, 1) => {
            let chi = |g: u32| euler_characteristic(i64::from(g)).expect("genus >= 1");
            Verdict::new(
                Outcome::NotHomeomorphic,
                Rule::EulerObstruction,
                None,
                format!("euler characteristics {} and {}: covers of a torus stay at 0", chi(ga), chi(gb)),
            )
        }
        (g, h) if g == h => {
            let (ca, cb) = (characteristic(a.seq()), characteristic(b.seq()));
            if characteristics_equal(a.seq(), b.seq()) {
                Verdict::new(
                    Outcome::Homeomorphic,
                    Rule::EqualGenusCharacteristic,
                    None,
                    format!("C = {ca} on both sides"),
                )
            } else {
                let p = first_difference(&ca, &cb).expect("unequal characteristics differ somewhere");
                Verdict::new(
                    Outcome::NotHomeomorphic,
                    Rule::EqualGenusCharacteristic,
                    Some(p),
                    format!("C({p}) = {} vs {}", ca.exponent(p), cb.exponent(p)),
                )
            }
        }
        (g, h) => {
            let reason = format!("distinct genera {g} and {h} both above 1 are not classified");
            Verdict::new(Outcome::NotCoveredByTheory(reason.clone()), Rule::Uncovered, None, reason)
        }
    }
}

/// Genus plays no role: return equivalence only sees the `a1` holonomy.
pub fn adic_surfaces_return_equivalent(a: &AdicSurface, b: &AdicSurface) -> bool {
    sequences_return_equivalent(a.seq(), b.seq())
}

/// A pair of adic surfaces that are return equivalent but not homeomorphic,
/// with the prime used to build it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub prime: u64,
    pub original: AdicSurface,
    pub shifted: AdicSurface,
}

/// Picks the smallest prime `p >= 3` dividing no degree of `m` and prepends
/// it: `n_1 = p`, `n_{k+1} = m_k`. The two sequences share their infinite
/// primes but differ at `p`.
pub fn generate_counterexample(genus: u32, m: &BondingSequence) -> Result<Counterexample> {
    if genus < 2 {
        return Err(Error::InvalidGenus(i64::from(genus)));
    }
    let support = characteristic(m).support();
    let prime = (3u64..)
        .step_by(2)
        .find(|&p| is_prime(p) && !support.contains(&p))
        .expect("finitely many primes divide the degrees");
    let n = m.prepend(&[prime])?;
    Ok(Counterexample { prime, original: AdicSurface::new(genus, m.clone())?, shifted: AdicSurface::new(genus, n)? })
}

/// Screens two toral chains; only prime-witnessed refutations become
/// `NotHomeomorphic`.
pub fn classify_toral(a: &MatrixChain, b: &MatrixChain, depth: usize) -> Result<Verdict> {
    let screen = crate::toral::toral_consistency(a, b, depth)?;
    Ok(match screen {
        ToralScreen::ConsistentAtDepth { depth, horizon } => Verdict::new(
            Outcome::ConsistentAtDepth(depth),
            Rule::ToralInvariantFactors,
            None,
            format!("invariant factors interleave through level {depth} within horizon {horizon}"),
        ),
        ToralScreen::Refuted { side, level, witness_prime: Some(p), .. } => Verdict::new(
            Outcome::NotHomeomorphic,
            Rule::ToralInvariantFactors,
            Some(p),
            format!("{p} divides the {side} period determinants only; level {level} cannot interleave"),
        ),
        ToralScreen::Refuted { side, level, horizon, witness_prime: None } => {
            let reason = format!(
                "{side} level {level} does not interleave within horizon {horizon}; no prime obstruction, so undecided"
            );
            Verdict::new(Outcome::NotCoveredByTheory(reason.clone()), Rule::ToralInvariantFactors, None, reason)
        }
    })
}
