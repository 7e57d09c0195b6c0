//! Toral solenoids presented by chains of nonsingular integer matrices, and
//! the lattice invariants attached to them.
//!
//! The bonding data `A_1, A_2, ...` define the descending lattices
//! `L_k Z^n` with `L_k = A_1 A_2 ... A_k`. The finite quotient `Z^n / L_k Z^n`
//! is the level-`k` shadow of the fiber; its invariant factors are read off
//! the Smith normal form of `L_k`. Everything here is exact integer
//! elimination with explicit unimodular transforms.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::pseudogroup::Side;
use crate::supernatural::factor;

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, 1)
    }

    pub fn scalar(n: usize, k: i64) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::from(k);
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = BigInt::from(d);
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::RaggedMatrix);
        }
        let data = rows.iter().flat_map(|r| r.as_ref().iter().map(|&x| BigInt::from(x))).collect();
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    /// Matrix whose columns are the given vectors, each of length `n`.
    pub fn from_columns<C: AsRef<[i64]>>(n: usize, columns: &[C]) -> Result<Self> {
        let mut m = Self::zeros(n, columns.len());
        for (j, c) in columns.iter().enumerate() {
            let c = c.as_ref();
            if c.len() != n {
                return Err(Error::RaggedMatrix);
            }
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[BigInt]>::to_vec).collect()
    }

    /// Rows as `i64`, if every entry fits.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        self.to_rows().into_iter().map(|r| r.iter().map(ToPrimitive::to_i64).collect()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { left: self.cols, right: other.rows });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Fraction-free Gaussian elimination (Bareiss).
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap_rows(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    pub fn is_unimodular(&self) -> bool {
        matches!(self.determinant(), Ok(d) if d.abs().is_one())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] += c * row[source]`
    fn add_row(&mut self, target: usize, source: usize, c: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(source, j)] * c;
            self[(target, j)] += v;
        }
    }

    /// `col[target] += c * col[source]`
    fn add_col(&mut self, target: usize, source: usize, c: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, source)] * c;
            self[(i, target)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -&self[(i, j)];
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self[(i, j)] = -&self[(i, j)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .to_rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(BigInt::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal,
/// `d_1 | d_2 | ...`, all `d_i >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Diagonal entries greater than one: the torsion invariant factors.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| d > &BigInt::one()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

fn min_nonzero(m: &IntMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in from..m.rows {
        for j in from..m.cols {
            let v = m[(i, j)].abs();
            if v.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| v < *b) {
                best = Some(((i, j), v));
            }
        }
    }
    best.map(|(at, _)| at)
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = min_nonzero(&d, t) else {
                return SmithForm { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..m {
                let q = &d[(i, t)] / &pivot;
                if !q.is_zero() {
                    let q = -q;
                    d.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                }
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                let q = &d[(t, j)] / &pivot;
                if !q.is_zero() {
                    let q = -q;
                    d.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                }
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                // a smaller remainder now exists; pivot on it
                continue;
            }
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !d[(i, j)].is_multiple_of(&pivot));
            if let Some((i, _)) = offender {
                d.add_row(t, i, &BigInt::one());
                u.add_row(t, i, &BigInt::one());
                continue;
            }
            break;
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v }
}

/// Column-style Hermite form `H = A * V`: lower echelon, positive pivots,
/// entries left of each pivot reduced into `[0, pivot)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl HermiteForm {
    /// The nonzero columns, a basis of the column lattice.
    pub fn basis(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.h.rows, self.rank);
        for i in 0..self.h.rows {
            for j in 0..self.rank {
                out[(i, j)] = self.h[(i, j)].clone();
            }
        }
        out
    }
}

pub fn hermite_normal_form(a: &IntMatrix) -> HermiteForm {
    let (m, n) = (a.rows, a.cols);
    let mut h = a.clone();
    let mut v = IntMatrix::identity(n);
    let mut c = 0;
    for i in 0..m {
        if c == n {
            break;
        }
        loop {
            let best = (c..n).filter(|&j| !h[(i, j)].is_zero()).min_by_key(|&j| h[(i, j)].abs());
            let Some(j) = best else { break };
            h.swap_cols(c, j);
            v.swap_cols(c, j);
            let pivot = h[(i, c)].clone();
            let mut clean = true;
            for j in c + 1..n {
                let q = -h[(i, j)].div_floor(&pivot);
                if !q.is_zero() {
                    h.add_col(j, c, &q);
                    v.add_col(j, c, &q);
                }
                clean &= h[(i, j)].is_zero();
            }
            if clean {
                break;
            }
        }
        if h[(i, c)].is_zero() {
            continue;
        }
        if h[(i, c)].is_negative() {
            h.negate_col(c);
            v.negate_col(c);
        }
        let pivot = h[(i, c)].clone();
        for j in 0..c {
            let q = -h[(i, j)].div_floor(&pivot);
            if !q.is_zero() {
                h.add_col(j, c, &q);
                v.add_col(j, c, &q);
            }
        }
        c += 1;
    }
    HermiteForm { h, v, rank: c }
}

/// Rank of a sublattice of `Z^n` and the torsion of the quotient by it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeInvariants {
    pub rank: usize,
    pub torsion_rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

/// Invariants of the lattice spanned by the columns of `generators`.
pub fn lattice_invariants(generators: &IntMatrix) -> LatticeInvariants {
    let snf = smith_normal_form(generators);
    let invariant_factors = snf.invariant_factors();
    LatticeInvariants { rank: snf.rank(), torsion_rank: invariant_factors.len(), invariant_factors }
}

/// Eventually periodic chain of `n x n` bonding matrices, each with
/// `|det| >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatrixChain {
    dimension: usize,
    prefix: Vec<IntMatrix>,
    period: Vec<IntMatrix>,
}

impl MatrixChain {
    pub fn new(dimension: usize, prefix: Vec<IntMatrix>, period: Vec<IntMatrix>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        let tagged = prefix
            .iter()
            .enumerate()
            .map(|(i, m)| (format!("prefix[{i}]"), m))
            .chain(period.iter().enumerate().map(|(i, m)| (format!("period[{i}]"), m)));
        for (position, m) in tagged {
            if m.rows != dimension || m.cols != dimension {
                return Err(Error::DimensionMismatch { left: dimension, right: m.rows.max(m.cols) });
            }
            let det = m.determinant()?;
            if det.abs() < BigInt::from(2) {
                return Err(Error::DegenerateMatrix { position, det: det.to_string() });
            }
        }
        Ok(MatrixChain { dimension, prefix, period })
    }

    pub fn periodic(dimension: usize, period: Vec<IntMatrix>) -> Result<Self> {
        Self::new(dimension, Vec::new(), period)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn prefix(&self) -> &[IntMatrix] {
        &self.prefix
    }

    pub fn period(&self) -> &[IntMatrix] {
        &self.period
    }

    /// The `i`-th bonding matrix, 1-based.
    pub fn term(&self, i: usize) -> &IntMatrix {
        assert!(i >= 1, "chain terms are 1-based");
        let i = i - 1;
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    pub fn without_prefix(&self) -> MatrixChain {
        MatrixChain { dimension: self.dimension, prefix: Vec::new(), period: self.period.clone() }
    }

    /// `L_0 = I, L_1, ..., L_count` with `L_k = A_1 ... A_k`.
    pub fn cumulative(&self, count: usize) -> Vec<IntMatrix> {
        let mut out = Vec::with_capacity(count + 1);
        out.push(IntMatrix::identity(self.dimension));
        for k in 1..=count {
            let next = out[k - 1].mul(self.term(k)).expect("square matrices of equal size");
            out.push(next);
        }
        out
    }

    /// Primes dividing the determinant of some period matrix.
    pub fn period_primes(&self) -> Option<BTreeSet<u64>> {
        let mut out = BTreeSet::new();
        for m in &self.period {
            let det = m.determinant().ok()?.abs().to_u64()?;
            out.extend(factor(det).ok()?.into_keys());
        }
        Some(out)
    }
}

/// Full Smith diagonal of a nonsingular matrix, ones included.
fn padded_factors(m: &IntMatrix) -> Vec<BigInt> {
    smith_normal_form(m).diagonal()
}

/// Invariant factors (entries above one) of `Z^n / L_k Z^n` for `k = 1..=depth`.
pub fn quotient_invariants(c: &MatrixChain, depth: usize) -> Result<Vec<Vec<BigInt>>> {
    if depth == 0 {
        return Err(Error::ZeroDepth);
    }
    Ok(c.cumulative(depth)[1..].iter().map(|l| smith_normal_form(l).invariant_factors()).collect())
}

/// Hermite basis of `L_k Z^n`. The limiting kernel is the intersection over
/// all `k`, so each depth gives an over-approximation of it.
pub fn kernel_lattice_at_depth(c: &MatrixChain, depth: usize) -> Result<IntMatrix> {
    if depth == 0 {
        return Err(Error::ZeroDepth);
    }
    let l = c.cumulative(depth).pop().unwrap();
    Ok(hermite_normal_form(&l).basis())
}

/// Whether every invariant factor grows strictly across one full period
/// after the prefix. Evidence, not proof, that the lattices intersect to zero.
pub fn strict_shrinkage(c: &MatrixChain) -> bool {
    let start = c.prefix.len();
    let ls = c.cumulative(start + c.period.len());
    let before = padded_factors(&ls[start]);
    let after = padded_factors(&ls[start + c.period.len()]);
    before.iter().zip(&after).all(|(x, y)| y > x)
}

/// Outcome of the invariant-factor screen between two chains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ToralScreen {
    /// Level `level` of `side` has no quotient-compatible level on the other
    /// side within `horizon`. `witness_prime`, when present, divides the
    /// period determinants of `side` but none of the other side's, which
    /// rules out every horizon.
    Refuted {
        side: Side,
        level: usize,
        horizon: usize,
        witness_prime: Option<u64>,
    },
    ConsistentAtDepth {
        depth: usize,
        horizon: usize,
    },
}

impl ToralScreen {
    pub fn is_consistent(&self) -> bool {
        matches!(self, ToralScreen::ConsistentAtDepth { .. })
    }
}

fn divides_aligned(small: &[BigInt], big: &[BigInt]) -> bool {
    small.iter().zip(big).all(|(s, b)| if s.is_zero() { b.is_zero() } else { b.is_multiple_of(s) })
}

/// [`toral_consistency_within`] with horizon `2 * depth`.
pub fn toral_consistency(a: &MatrixChain, b: &MatrixChain, depth: usize) -> Result<ToralScreen> {
    toral_consistency_within(a, b, depth, 2 * depth)
}

/// After prefix deletion, each `Z^n / L^a_j` (`j <= depth`) must be a quotient
/// of some `Z^n / L^b_i` (`i <= horizon`) as far as invariant factors can
/// tell, and symmetrically. The quotients along a chain form a divisibility
/// chain of invariant factors, so testing `i = horizon` covers every `i`.
pub fn toral_consistency_within(a: &MatrixChain, b: &MatrixChain, depth: usize, horizon: usize) -> Result<ToralScreen> {
    if a.dimension != b.dimension {
        return Err(Error::DimensionMismatch { left: a.dimension, right: b.dimension });
    }
    if depth == 0 {
        return Err(Error::ZeroDepth);
    }
    let horizon = horizon.max(depth);
    let (a, b) = (a.without_prefix(), b.without_prefix());
    let fa: Vec<Vec<BigInt>> = a.cumulative(horizon).iter().map(padded_factors).collect();
    let fb: Vec<Vec<BigInt>> = b.cumulative(horizon).iter().map(padded_factors).collect();
    let witness = |from: &MatrixChain, to: &MatrixChain| -> Option<u64> {
        let (pf, pt) = (from.period_primes()?, to.period_primes()?);
        pf.difference(&pt).next().copied()
    };
    for j in 1..=depth {
        if !divides_aligned(&fa[j], &fb[horizon]) {
            let witness_prime = witness(&a, &b);
            return Ok(ToralScreen::Refuted { side: Side::Left, level: j, horizon, witness_prime });
        }
        if !divides_aligned(&fb[j], &fa[horizon]) {
            let witness_prime = witness(&b, &a);
            return Ok(ToralScreen::Refuted { side: Side::Right, level: j, horizon, witness_prime });
        }
    }
    Ok(ToralScreen::ConsistentAtDepth { depth, horizon })
}
