//! Bonding sequences of covering degrees and their supernatural-number
//! characteristic.
//!
//! A bonding sequence `m = (m_1, m_2, ...)` is stored as a finite prefix
//! followed by a period repeated forever. Every sequence of that shape has a
//! characteristic with finite support: primes dividing a period entry occur
//! with infinite exponent, primes dividing only prefix entries occur with the
//! (finite) sum of their exponents.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Eventually periodic sequence of covering degrees, each at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BondingSequence {
    prefix: Vec<u64>,
    period: Vec<u64>,
}

impl BondingSequence {
    pub fn new(prefix: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        for (i, &m) in prefix.iter().enumerate() {
            if m < 2 {
                return Err(Error::DegreeTooSmall { position: format!("prefix[{i}]"), value: m });
            }
        }
        for (i, &m) in period.iter().enumerate() {
            if m < 2 {
                return Err(Error::DegreeTooSmall { position: format!("period[{i}]"), value: m });
            }
        }
        Ok(BondingSequence { prefix, period })
    }

    /// Purely periodic sequence.
    pub fn periodic(period: Vec<u64>) -> Result<Self> {
        Self::new(Vec::new(), period)
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    /// The `i`-th covering degree `m_i`, 1-based.
    pub fn term(&self, i: usize) -> u64 {
        assert!(i >= 1, "bonding sequence terms are 1-based");
        let i = i - 1;
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// Iterator over `m_1, m_2, ...` (infinite).
    pub fn terms(&self) -> impl Iterator<Item = u64> + '_ {
        self.prefix.iter().copied().chain(self.period.iter().copied().cycle())
    }

    /// The same tail with the prefix removed.
    pub fn without_prefix(&self) -> BondingSequence {
        BondingSequence { prefix: Vec::new(), period: self.period.clone() }
    }

    /// Prepend `degrees` in front of the current prefix.
    pub fn prepend(&self, degrees: &[u64]) -> Result<BondingSequence> {
        let mut prefix = degrees.to_vec();
        prefix.extend_from_slice(&self.prefix);
        BondingSequence::new(prefix, self.period.clone())
    }

    /// Moves the first period entry into the prefix and rotates the period.
    /// Denotes the same infinite sequence.
    pub fn rotated(&self) -> BondingSequence {
        let mut prefix = self.prefix.clone();
        prefix.push(self.period[0]);
        let mut period = self.period.clone();
        period.rotate_left(1);
        BondingSequence { prefix, period }
    }

    /// `C_m`, the supernatural characteristic of the sequence.
    pub fn characteristic(&self) -> SupernaturalNumber {
        characteristic(self)
    }
}

impl fmt::Display for BondingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[u64]| xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "([{}],[{}])", join(&self.prefix), join(&self.period))
    }
}

/// Exponent of a prime in a supernatural number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exponent {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(e) => write!(f, "{e}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

/// Formal product of primes with exponents in `{0, 1, 2, ..., inf}`, restricted
/// to finite support.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SupernaturalNumber {
    finite: BTreeMap<u64, u64>,
    infinite: BTreeSet<u64>,
}

impl SupernaturalNumber {
    /// Builds a supernatural number, dropping zero exponents and letting an
    /// infinite exponent override a finite one.
    pub fn new(finite: BTreeMap<u64, u64>, infinite: BTreeSet<u64>) -> Self {
        let finite = finite.into_iter().filter(|(p, e)| *e > 0 && !infinite.contains(p)).collect();
        SupernaturalNumber { finite, infinite }
    }

    pub fn finite_part(&self) -> &BTreeMap<u64, u64> {
        &self.finite
    }

    pub fn infinite_primes(&self) -> &BTreeSet<u64> {
        &self.infinite
    }

    pub fn exponent(&self, p: u64) -> Exponent {
        if self.infinite.contains(&p) {
            Exponent::Infinite
        } else {
            Exponent::Finite(self.finite.get(&p).copied().unwrap_or(0))
        }
    }

    /// All primes with nonzero exponent, ascending.
    pub fn support(&self) -> BTreeSet<u64> {
        self.finite.keys().chain(self.infinite.iter()).copied().collect()
    }
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(u64, Exponent)> = self
            .finite
            .iter()
            .map(|(&p, &e)| (p, Exponent::Finite(e)))
            .chain(self.infinite.iter().map(|&p| (p, Exponent::Infinite)))
            .collect();
        parts.sort();
        if parts.is_empty() {
            return f.write_str("1");
        }
        let body: Vec<String> = parts.iter().map(|(p, e)| format!("{p}^{e}")).collect();
        f.write_str(&body.join(" * "))
    }
}

/// Prime factorization by trial division.
pub fn factor(n: u64) -> Result<BTreeMap<u64, u32>> {
    if n < 2 {
        return Err(Error::NotFactorable(n));
    }
    let mut out = BTreeMap::new();
    let mut rest = n;
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            out.insert(p, e);
        }
    };
    push(2, &mut rest);
    let mut d: u64 = 3;
    while (d as u128) * (d as u128) <= rest as u128 {
        push(d, &mut rest);
        d += 2;
    }
    if rest > 1 {
        out.insert(rest, 1);
    }
    Ok(out)
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    matches!(factor(n), Ok(f) if f.len() == 1 && f.values().all(|&e| e == 1))
}

pub fn characteristic(seq: &BondingSequence) -> SupernaturalNumber {
    let mut infinite = BTreeSet::new();
    for &m in &seq.period {
        infinite.extend(factor(m).expect("entries are >= 2").into_keys());
    }
    let mut finite: BTreeMap<u64, u64> = BTreeMap::new();
    for &m in &seq.prefix {
        for (p, e) in factor(m).expect("entries are >= 2") {
            *finite.entry(p).or_default() += u64::from(e);
        }
    }
    SupernaturalNumber::new(finite, infinite)
}

/// Return equivalence of two bonding sequences.
///
/// The general relation asks that the characteristics agree at all but
/// finitely many primes and have the same infinite primes. Characteristics of
/// eventually periodic sequences have finite support, so the first condition
/// always holds and the relation reduces to equality of the infinite-prime
/// sets.
pub fn sequences_return_equivalent(a: &BondingSequence, b: &BondingSequence) -> bool {
    characteristic(a).infinite == characteristic(b).infinite
}

/// Equality of characteristics as functions on all primes.
pub fn characteristics_equal(a: &BondingSequence, b: &BondingSequence) -> bool {
    characteristic(a) == characteristic(b)
}

/// Smallest prime lying in exactly one of the two infinite-prime sets.
pub fn infinite_prime_witness(a: &SupernaturalNumber, b: &SupernaturalNumber) -> Option<u64> {
    a.infinite.symmetric_difference(&b.infinite).min().copied()
}

/// Smallest prime at which the two characteristics differ.
pub fn first_difference(a: &SupernaturalNumber, b: &SupernaturalNumber) -> Option<u64> {
    a.support().union(&b.support()).copied().find(|&p| a.exponent(p) != b.exponent(p))
}
