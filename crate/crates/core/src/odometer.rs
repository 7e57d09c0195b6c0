//! Finite truncations of the profinite group of a bonding sequence, the
//! adding machine acting on them, and clopen sets built from cylinders.
//!
//! Level `j` of a tower is the cyclic group `Z/M_j` with `M_0 = 1` and
//! `M_j = m_1 * ... * m_j`. A point of the depth-`k` truncation is a residue
//! modulo `M_k`; its coordinate at level `j` is the reduction modulo `M_j`.
//! A clopen set at level `j` is a finite union of level-`j` cylinders, stored
//! as the set of residues modulo `M_j` it covers.
//!
//! Distances use the ultrametric `d(x, y) = 2^-j` where `j` is the largest
//! level at which `x` and `y` agree. Distinct points of the truncation can
//! only be told apart down to level `k`, so a singleton has diameter `2^-k`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::supernatural::BondingSequence;

/// The quotients `Z/M_0 <- Z/M_1 <- ... <- Z/M_k` of a bonding sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedTower {
    seq: BondingSequence,
    moduli: Vec<BigUint>,
}

impl TruncatedTower {
    pub fn new(seq: BondingSequence, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::ZeroDepth);
        }
        let mut moduli = Vec::with_capacity(depth + 1);
        moduli.push(BigUint::one());
        for m in seq.terms().take(depth) {
            let next = moduli.last().unwrap() * m;
            moduli.push(next);
        }
        Ok(TruncatedTower { seq, moduli })
    }

    /// Convenience wrapper returning a shared tower.
    pub fn shared(seq: BondingSequence, depth: usize) -> Result<Arc<Self>> {
        Self::new(seq, depth).map(Arc::new)
    }

    pub fn seq(&self) -> &BondingSequence {
        &self.seq
    }

    pub fn depth(&self) -> usize {
        self.moduli.len() - 1
    }

    /// `M_j`.
    pub fn modulus(&self, level: usize) -> &BigUint {
        &self.moduli[level]
    }

    /// `M_k` for the full depth.
    pub fn order(&self) -> &BigUint {
        self.moduli.last().unwrap()
    }

    pub fn moduli(&self) -> &[BigUint] {
        &self.moduli
    }

    /// `m_j = M_j / M_{j-1}` for `1 <= j <= depth`.
    pub fn degree(&self, level: usize) -> u64 {
        self.seq.term(level)
    }

    /// The same tower cut off at a smaller depth.
    pub fn truncate(&self, depth: usize) -> Result<TruncatedTower> {
        if depth > self.depth() {
            return Err(Error::LevelOutOfRange { level: depth, depth: self.depth() });
        }
        TruncatedTower::new(self.seq.clone(), depth)
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level > self.depth() {
            Err(Error::LevelOutOfRange { level, depth: self.depth() })
        } else {
            Ok(())
        }
    }
}

/// A point of the depth-`k` truncation, i.e. a residue modulo `M_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TowerPoint {
    tower: Arc<TruncatedTower>,
    residue: BigUint,
}

impl TowerPoint {
    pub fn new(tower: Arc<TruncatedTower>, residue: BigUint) -> Result<Self> {
        if &residue >= tower.order() {
            return Err(Error::ResidueOutOfRange { residue: residue.to_string(), modulus: tower.order().to_string() });
        }
        Ok(TowerPoint { tower, residue })
    }

    /// The image of an integer under the dense embedding `z -> ([z]_0, ..., [z]_k)`.
    pub fn from_integer(tower: Arc<TruncatedTower>, z: &BigInt) -> Self {
        let residue = reduce(z, tower.order());
        TowerPoint { tower, residue }
    }

    pub fn tower(&self) -> &Arc<TruncatedTower> {
        &self.tower
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    /// Coordinate at level `j`, the residue modulo `M_j`.
    pub fn coordinate(&self, level: usize) -> BigUint {
        &self.residue % self.tower.modulus(level)
    }

    /// Coherent coordinates `x_0, ..., x_k`.
    pub fn coordinates(&self) -> Vec<BigUint> {
        (0..=self.tower.depth()).map(|j| self.coordinate(j)).collect()
    }

    /// The adding machine: `+1` in every finite factor.
    pub fn add_one(&self) -> TowerPoint {
        let mut residue = &self.residue + 1u32;
        if &residue == self.tower.order() {
            residue = BigUint::zero();
        }
        TowerPoint { tower: Arc::clone(&self.tower), residue }
    }

    /// Translation by an arbitrary integer `t`, i.e. the `t`-th power of
    /// [`TowerPoint::add_one`].
    pub fn translate(&self, t: &BigInt) -> TowerPoint {
        let shifted = BigInt::from(self.residue.clone()) + t;
        TowerPoint::from_integer(Arc::clone(&self.tower), &shifted)
    }

    /// Image under the quotient map to the depth-`j` truncation.
    pub fn project(&self, depth: usize) -> Result<TowerPoint> {
        let tower = Arc::new(self.tower.truncate(depth)?);
        let residue = self.coordinate(depth);
        Ok(TowerPoint { tower, residue })
    }

    /// The whole `Z`-orbit starting here, in `add_one` order.
    pub fn orbit(&self) -> Vec<TowerPoint> {
        self.orbit_iter().collect()
    }

    pub fn orbit_iter(&self) -> Orbit {
        Orbit { next: Some(self.clone()), start: self.residue.clone() }
    }
}

impl fmt::Display for TowerPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

/// Iterator over an `add_one` orbit; stops after returning to the start.
pub struct Orbit {
    next: Option<TowerPoint>,
    start: BigUint,
}

impl Iterator for Orbit {
    type Item = TowerPoint;

    fn next(&mut self) -> Option<TowerPoint> {
        let current = self.next.take()?;
        let following = current.add_one();
        if following.residue != self.start {
            self.next = Some(following);
        }
        Some(current)
    }
}

pub(crate) fn reduce(z: &BigInt, modulus: &BigUint) -> BigUint {
    let m = BigInt::from(modulus.clone());
    z.mod_floor(&m).to_biguint().expect("mod_floor is nonnegative")
}

/// Diameter `2^-exponent` under the tower ultrametric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Diameter {
    exponent: usize,
}

impl Diameter {
    pub fn from_exponent(exponent: usize) -> Self {
        Diameter { exponent }
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::one() << self.exponent)
    }
}

impl PartialOrd for Diameter {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Diameter {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.exponent.cmp(&self.exponent)
    }
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ratio())
    }
}

/// A nonempty finite union of level-`j` cylinders.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClopenSet {
    tower: Arc<TruncatedTower>,
    level: usize,
    residues: BTreeSet<BigUint>,
    canonical: bool,
}

impl ClopenSet {
    pub fn new(tower: Arc<TruncatedTower>, level: usize, residues: impl IntoIterator<Item = BigUint>) -> Result<Self> {
        tower.check_level(level)?;
        let residues: BTreeSet<BigUint> = residues.into_iter().collect();
        if residues.is_empty() {
            return Err(Error::EmptyClopenSet);
        }
        let modulus = tower.modulus(level);
        if let Some(bad) = residues.iter().find(|r| *r >= modulus) {
            return Err(Error::ResidueOutOfRange { residue: bad.to_string(), modulus: modulus.to_string() });
        }
        Ok(Self::assemble(tower, level, residues))
    }

    /// Like [`ClopenSet::new`] with small residues.
    pub fn from_u64s(tower: Arc<TruncatedTower>, level: usize, residues: &[u64]) -> Result<Self> {
        Self::new(tower, level, residues.iter().map(|&r| BigUint::from(r)))
    }

    /// The whole fiber.
    pub fn full(tower: Arc<TruncatedTower>) -> Self {
        Self::assemble(tower, 0, BTreeSet::from([BigUint::zero()]))
    }

    /// The level-`j` cylinder through a point.
    pub fn cylinder(point: &TowerPoint, level: usize) -> Result<Self> {
        point.tower.check_level(level)?;
        let r = point.coordinate(level);
        Ok(Self::assemble(Arc::clone(&point.tower), level, BTreeSet::from([r])))
    }

    fn assemble(tower: Arc<TruncatedTower>, level: usize, residues: BTreeSet<BigUint>) -> Self {
        let canonical = canonical_level(&tower, level, &residues) == level;
        ClopenSet { tower, level, residues, canonical }
    }

    pub fn tower(&self) -> &Arc<TruncatedTower> {
        &self.tower
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn residues(&self) -> &BTreeSet<BigUint> {
        &self.residues
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn is_full(&self) -> bool {
        BigUint::from(self.residues.len()) == *self.tower.modulus(self.level)
    }

    /// Number of level-`level` residues the set covers, for `level` at least
    /// the set's own level.
    pub fn count_at(&self, level: usize) -> Result<BigUint> {
        self.tower.check_level(level)?;
        if level < self.level {
            return Err(Error::LevelTooCoarse { level, set_level: self.level });
        }
        let factor = self.tower.modulus(level) / self.tower.modulus(self.level);
        Ok(BigUint::from(self.residues.len()) * factor)
    }

    /// `z mod M_j` lies in the set.
    pub fn contains(&self, z: &BigInt) -> bool {
        self.residues.contains(&reduce(z, self.tower.modulus(self.level)))
    }

    pub fn contains_point(&self, p: &TowerPoint) -> bool {
        self.residues.contains(&p.coordinate(self.level))
    }

    /// Rewrites the set at a finer level `level >= self.level()`.
    pub fn refine_to(&self, level: usize) -> Result<ClopenSet> {
        self.tower.check_level(level)?;
        if level < self.level {
            return Err(Error::LevelTooCoarse { level, set_level: self.level });
        }
        let step = self.tower.modulus(self.level);
        let copies = self.tower.modulus(level) / step;
        let mut residues = BTreeSet::new();
        for r in &self.residues {
            let mut i = BigUint::zero();
            while i < copies {
                residues.insert(r + &i * step);
                i += 1u32;
            }
        }
        Ok(Self::assemble(Arc::clone(&self.tower), level, residues))
    }

    /// The coarsest level presentation with the same membership.
    pub fn canonicalize(&self) -> ClopenSet {
        if self.canonical {
            return self.clone();
        }
        let level = canonical_level(&self.tower, self.level, &self.residues);
        let residues = project_residues(&self.residues, self.tower.modulus(level));
        ClopenSet { tower: Arc::clone(&self.tower), level, residues, canonical: true }
    }

    /// `W + t`, canonicalized.
    pub fn translate(&self, t: &BigInt) -> ClopenSet {
        let modulus = self.tower.modulus(self.level);
        let shift = reduce(t, modulus);
        let residues = self.residues.iter().map(|r| (r + &shift) % modulus).collect();
        Self::assemble(Arc::clone(&self.tower), self.level, residues).canonicalize()
    }

    /// Same membership, possibly at different levels.
    pub fn same_membership(&self, other: &ClopenSet) -> bool {
        if self.tower != other.tower {
            return false;
        }
        let (a, b) = (self.canonicalize(), other.canonicalize());
        a.level == b.level && a.residues == b.residues
    }

    pub fn is_disjoint(&self, other: &ClopenSet) -> Result<bool> {
        if self.tower != other.tower {
            return Err(Error::TowerMismatch);
        }
        let level = self.level.max(other.level);
        let a = self.refine_to(level)?;
        let b = other.refine_to(level)?;
        Ok(a.residues.is_disjoint(&b.residues))
    }

    /// Largest pairwise distance, with the singleton convention `2^-k` at
    /// full depth.
    pub fn diameter(&self) -> Diameter {
        // largest level where every element agrees
        let exponent = (0..=self.level)
            .rev()
            .find(|&l| project_residues(&self.residues, self.tower.modulus(l)).len() == 1)
            .unwrap_or(0);
        Diameter::from_exponent(exponent)
    }
}

impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.residues.iter().map(BigUint::to_string).collect();
        write!(f, "{{{}}}", body.join(","))
    }
}

fn project_residues(residues: &BTreeSet<BigUint>, modulus: &BigUint) -> BTreeSet<BigUint> {
    residues.iter().map(|r| r % modulus).collect()
}

/// Smallest level whose preimage reproduces the set. The set always lies in
/// the preimage of its own projection, so equality holds exactly when the
/// sizes match.
fn canonical_level(tower: &TruncatedTower, level: usize, residues: &BTreeSet<BigUint>) -> usize {
    let size = BigUint::from(residues.len());
    let top = tower.modulus(level);
    (0..level)
        .find(|&l| {
            let m = tower.modulus(l);
            let projected = project_residues(residues, m);
            BigUint::from(projected.len()) * (top / m) == size
        })
        .unwrap_or(level)
}
