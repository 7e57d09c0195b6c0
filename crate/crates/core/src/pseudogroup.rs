//! Translation actions restricted to clopen windows of an odometer fiber.
//!
//! A window `W` is collapsible when its translates `W + t` are either equal
//! or disjoint and together cover the fiber. For the cyclic group `Z/M` this
//! happens exactly when `W` is a coset of a subgroup, and the stabilizer of
//! `W` in `Z` is then `dZ` with `d = M / |W|`.
//!
//! Return equivalence of two odometers quantifies over every clopen set and
//! every pseudogroup element, so at finite depth it can only be refuted, not
//! certified. [`interleaving_check`] reports either a refutation or
//! consistency up to a stated depth.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::odometer::{ClopenSet, TruncatedTower};
use crate::supernatural::{factor, BondingSequence};

/// The action of `Z` (by powers of the adding machine) restricted to a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedAction {
    window: ClopenSet,
}

/// Stabilizer `dZ` of a collapsible window; its index in `Z` is `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropyDescriptor {
    pub index: BigUint,
    pub generator: BigUint,
}

impl RestrictedAction {
    pub fn new(tower: &Arc<TruncatedTower>, window: ClopenSet) -> Result<Self> {
        if window.tower() != tower {
            return Err(Error::TowerMismatch);
        }
        Ok(RestrictedAction { window })
    }

    pub fn on_window(window: ClopenSet) -> Self {
        RestrictedAction { window }
    }

    pub fn tower(&self) -> &Arc<TruncatedTower> {
        self.window.tower()
    }

    pub fn window(&self) -> &ClopenSet {
        &self.window
    }

    /// Candidate stabilizer generator `M_j / |W|` at the window's canonical
    /// level, if the division is exact.
    fn coset_step(&self) -> Option<(ClopenSet, BigUint)> {
        let w = self.window.canonicalize();
        let modulus = w.tower().modulus(w.level());
        let size = BigUint::from(w.residues().len());
        if !(modulus % &size).is_zero() {
            return None;
        }
        Some((w.clone(), modulus / size))
    }

    /// Whether the translates of the window partition the fiber.
    pub fn is_collapsible(&self) -> bool {
        let Some((w, step)) = self.coset_step() else {
            return false;
        };
        // |W| = M/d residues all congruent mod d fill the coset r + dZ
        let first = w.residues().iter().next().unwrap() % &step;
        w.residues().iter().all(|r| r % &step == first)
    }

    /// The distinct translates `W, W + 1, ..., W + (d - 1)`.
    pub fn translates_partition(&self) -> Result<Vec<ClopenSet>> {
        let iso = self.isotropy()?;
        let mut out = Vec::new();
        let mut t = BigUint::zero();
        while t < iso.generator {
            out.push(self.window.translate(&BigInt::from(t.clone())));
            t += 1u32;
        }
        Ok(out)
    }

    pub fn isotropy(&self) -> Result<IsotropyDescriptor> {
        if !self.is_collapsible() {
            return Err(Error::NotCollapsible);
        }
        let (_, step) = self.coset_step().expect("collapsible windows divide the modulus");
        Ok(IsotropyDescriptor { index: step.clone(), generator: step })
    }

    /// A collapsible clopen subset of the window: the full-depth cylinder
    /// through its smallest residue.
    pub fn collapsible_refinement(&self) -> ClopenSet {
        let r = self.window.residues().iter().next().unwrap().clone();
        let tower = Arc::clone(self.window.tower());
        let depth = tower.depth();
        ClopenSet::new(tower, depth, [r]).expect("residue below M_j is below M_k")
    }
}

/// Which side of an interleaving check failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Outcome of a depth-bounded interleaving test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Interleaving {
    /// Every level up to `depth` divides into the other tower within `horizon`.
    ConsistentAtDepth { depth: usize, horizon: usize },
    /// `M_level` of `side` divides no modulus of the other side within `horizon`.
    Refuted { side: Side, level: usize, horizon: usize },
}

impl Interleaving {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Interleaving::ConsistentAtDepth { .. })
    }
}

fn cumulative(seq: &BondingSequence, count: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(count + 1);
    out.push(BigUint::one());
    for m in seq.terms().take(count) {
        let next = out.last().unwrap() * m;
        out.push(next);
    }
    out
}

fn prime_exponents(entries: impl IntoIterator<Item = u64>) -> BTreeMap<u64, u64> {
    let mut out: BTreeMap<u64, u64> = BTreeMap::new();
    for m in entries {
        for (p, e) in factor(m).expect("entries are >= 2") {
            *out.entry(p).or_default() += u64::from(e);
        }
    }
    out
}

/// Number of terms of `to`'s tail needed so that every prime power of the
/// first `depth` tail terms of `from` is matched, for primes `to`'s period
/// contains. Primes missing from `to`'s period can never be matched and do
/// not contribute.
fn horizon_needed(from: &BondingSequence, to: &BondingSequence, depth: usize) -> usize {
    let demand = prime_exponents(from.period().iter().copied().cycle().take(depth));
    let supply = prime_exponents(to.period().iter().copied());
    let period_len = to.period().len() as u64;
    demand
        .iter()
        .filter_map(|(p, &need)| supply.get(p).map(|&per_period| period_len * need.div_ceil(per_period)))
        .max()
        .unwrap_or(0) as usize
}

/// Smallest horizon (at least `2 * depth`) that cannot produce a false
/// refutation: after it, every prime shared by both periods has accumulated
/// enough multiplicity on the receiving side.
pub fn sufficient_horizon(a: &BondingSequence, b: &BondingSequence, depth: usize) -> usize {
    (2 * depth).max(horizon_needed(a, b, depth)).max(horizon_needed(b, a, depth))
}

/// Depth-bounded interleaving of cumulative moduli after prefix deletion.
///
/// For every `j <= depth`, `M^a_j` must divide some `M^b_i` with
/// `i <= horizon`, and symmetrically. Cumulative moduli form a divisibility
/// chain, so "some `i <= horizon`" is the same as `i = horizon`.
pub fn interleaving_check(
    a: &BondingSequence,
    b: &BondingSequence,
    depth: usize,
    horizon: usize,
) -> Result<Interleaving> {
    if depth == 0 {
        return Err(Error::ZeroDepth);
    }
    let (a, b) = (a.without_prefix(), b.without_prefix());
    let ma = cumulative(&a, depth.max(horizon));
    let mb = cumulative(&b, depth.max(horizon));
    for j in 1..=depth {
        if !(&mb[horizon] % &ma[j]).is_zero() {
            return Ok(Interleaving::Refuted { side: Side::Left, level: j, horizon });
        }
        if !(&ma[horizon] % &mb[j]).is_zero() {
            return Ok(Interleaving::Refuted { side: Side::Right, level: j, horizon });
        }
    }
    Ok(Interleaving::ConsistentAtDepth { depth, horizon })
}

/// [`interleaving_check`] with the [`sufficient_horizon`].
///
/// A `false` result refutes return equivalence; `true` only means the data
/// agree up to `depth`.
pub fn interleaving_consistent(a: &BondingSequence, b: &BondingSequence, depth: usize) -> Result<bool> {
    let horizon = sufficient_horizon(a, b, depth);
    interleaving_check(a, b, depth, horizon).map(|r| r.is_consistent())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fiber6() -> Arc<TruncatedTower> {
        TruncatedTower::shared(BondingSequence::periodic(vec![2, 3]).unwrap(), 2).unwrap()
    }

    fn action(t: &Arc<TruncatedTower>, level: usize, rs: &[u64]) -> RestrictedAction {
        let w = ClopenSet::from_u64s(Arc::clone(t), level, rs).unwrap();
        RestrictedAction::new(t, w).unwrap()
    }

    fn seq(prefix: &[u64], period: &[u64]) -> BondingSequence {
        BondingSequence::new(prefix.to_vec(), period.to_vec()).unwrap()
    }

    fn as_vecs(sets: &[ClopenSet]) -> Vec<Vec<u64>> {
        sets.iter()
            .map(|w| {
                let w = w.refine_to(w.tower().depth()).unwrap();
                w.residues().iter().map(|r| u64::try_from(r).unwrap()).collect()
            })
            .collect()
    }

    #[test]
    fn collapsibility_examples() {
        let t = fiber6();
        assert!(action(&t, 2, &[0, 3]).is_collapsible());
        assert!(!action(&t, 2, &[0, 1]).is_collapsible());
        assert!(RestrictedAction::on_window(ClopenSet::full(Arc::clone(&t))).is_collapsible());
        // 4 does not divide 6
        assert!(!action(&t, 2, &[0, 1, 2, 3]).is_collapsible());
    }

    #[test]
    fn partition_examples() {
        let t = fiber6();
        let parts = action(&t, 2, &[0, 3]).translates_partition().unwrap();
        assert_eq!(as_vecs(&parts), vec![vec![0, 3], vec![1, 4], vec![2, 5]]);

        let d = TruncatedTower::shared(BondingSequence::periodic(vec![2]).unwrap(), 1).unwrap();
        let parts = action(&d, 1, &[0]).translates_partition().unwrap();
        assert_eq!(as_vecs(&parts), vec![vec![0], vec![1]]);

        let full = RestrictedAction::on_window(ClopenSet::full(Arc::clone(&t)));
        assert_eq!(full.translates_partition().unwrap().len(), 1);

        assert_eq!(action(&t, 2, &[0, 1]).translates_partition(), Err(Error::NotCollapsible));
    }

    #[test]
    fn isotropy_examples() {
        let t = fiber6();
        let iso = action(&t, 2, &[0, 3]).isotropy().unwrap();
        assert_eq!(iso.generator, BigUint::from(3u32));
        assert_eq!(iso.index, BigUint::from(3u32));

        let full = RestrictedAction::on_window(ClopenSet::full(Arc::clone(&t)));
        assert_eq!(full.isotropy().unwrap().generator, BigUint::one());

        let z4 = TruncatedTower::shared(BondingSequence::periodic(vec![2]).unwrap(), 2).unwrap();
        assert_eq!(action(&z4, 2, &[1]).isotropy().unwrap().index, BigUint::from(4u32));
        assert_eq!(action(&t, 2, &[0, 1]).isotropy(), Err(Error::NotCollapsible));
    }

    #[test]
    fn isotropy_of_coarse_window_counts_full_depth() {
        // {1} at level 1 of a depth-2 tower is {1,3,5} in Z/6
        let t = fiber6();
        let a = action(&t, 1, &[1]);
        let iso = a.isotropy().unwrap();
        assert_eq!(iso.index, BigUint::from(2u32));
        assert_eq!(iso.index * a.window().count_at(2).unwrap(), BigUint::from(6u32));
    }

    #[test]
    fn refinement_examples() {
        let t = fiber6();
        for (input, expect) in [(&[0u64, 1][..], 0u64), (&[0, 3], 0), (&[5], 5)] {
            let a = action(&t, 2, input);
            let r = a.collapsible_refinement();
            assert_eq!(r.level(), 2);
            assert_eq!(r.residues().iter().next().unwrap(), &BigUint::from(expect));
            assert!(RestrictedAction::on_window(r).is_collapsible());
        }
    }

    #[test]
    fn rejects_window_on_foreign_tower() {
        let t = fiber6();
        let other = TruncatedTower::shared(BondingSequence::periodic(vec![2]).unwrap(), 2).unwrap();
        let w = ClopenSet::from_u64s(other, 1, &[0]).unwrap();
        assert_eq!(RestrictedAction::new(&t, w), Err(Error::TowerMismatch));
    }

    #[test]
    fn interleaving_examples() {
        let dyadic = seq(&[], &[2]);
        assert!(interleaving_consistent(&dyadic, &seq(&[], &[4]), 5).unwrap());
        assert!(!interleaving_consistent(&dyadic, &seq(&[], &[3]), 1).unwrap());
        let s = seq(&[7, 5], &[6, 10]);
        for depth in 1..=8 {
            assert!(interleaving_consistent(&s, &s, depth).unwrap());
        }
        assert_eq!(interleaving_consistent(&dyadic, &dyadic, 0), Err(Error::ZeroDepth));
    }

    #[test]
    fn literal_linear_horizon_matches_worked_example() {
        // 2^j | 4^j and 4^j | 2^(2j)
        let r = interleaving_check(&seq(&[], &[2]), &seq(&[], &[4]), 5, 10).unwrap();
        assert_eq!(r, Interleaving::ConsistentAtDepth { depth: 5, horizon: 10 });
    }

    #[test]
    fn linear_horizon_can_misfire_where_sufficient_does_not() {
        // 8^4 = 2^12 needs twelve dyadic terms, more than 2 * 4
        let a = seq(&[], &[8]);
        let b = seq(&[], &[2]);
        let linear = interleaving_check(&a, &b, 4, 8).unwrap();
        assert_eq!(linear, Interleaving::Refuted { side: Side::Left, level: 3, horizon: 8 });
        assert_eq!(sufficient_horizon(&a, &b, 4), 12);
        assert!(interleaving_consistent(&a, &b, 4).unwrap());
    }

    #[test]
    fn prefix_is_ignored() {
        let a = seq(&[6], &[5]);
        let b = seq(&[], &[5]);
        assert!(interleaving_consistent(&a, &b, 6).unwrap());
        let r = interleaving_check(&seq(&[], &[2]), &seq(&[], &[6]), 3, 6).unwrap();
        assert_eq!(r, Interleaving::Refuted { side: Side::Right, level: 1, horizon: 6 });
    }
}
