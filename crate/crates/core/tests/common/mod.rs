//! Brute-force oracles shared by the integration tests. None of these call
//! into the code paths they are used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;

/// Enumerates every translate `W + t` in `Z/m` and checks directly that the
/// distinct ones are pairwise disjoint and cover `Z/m`.
pub fn collapsible_by_translates(m: u64, w: &BTreeSet<u64>) -> bool {
    let translates: BTreeSet<BTreeSet<u64>> = (0..m).map(|t| w.iter().map(|r| (r + t) % m).collect()).collect();
    let mut covered = BTreeSet::new();
    for tr in &translates {
        for r in tr {
            if !covered.insert(*r) {
                return false;
            }
        }
    }
    covered.len() as u64 == m
}

/// Invariant factors (> 1) of `Z^2 / A Z^2` for nonsingular `A`, found by
/// enumerating element orders. The group has order `|det A|` and at most two
/// generators, so it is `Z/d1 x Z/d2` with `d2` the exponent.
pub fn quotient_factors_by_cosets(a: [[i64; 2]; 2]) -> Vec<i64> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    assert!(det != 0);
    let n = det.abs();
    // v lies in A Z^2 iff adj(A) v is divisible by det
    let in_lattice = |x: i64, y: i64| {
        let u = a[1][1] * x - a[0][1] * y;
        let v = -a[1][0] * x + a[0][0] * y;
        u % det == 0 && v % det == 0
    };
    let mut exponent = 1;
    for x in 0..n {
        for y in 0..n {
            let order = (1..=n).find(|&k| in_lattice(k * x, k * y)).expect("order divides |det|");
            exponent = exponent.max(order);
        }
    }
    [n / exponent, exponent].into_iter().filter(|&d| d > 1).collect()
}

/// Cumulative products of a period-only sequence, computed in `u128`.
pub fn cumulative_u128(period: &[u64], count: usize) -> Vec<u128> {
    let mut out = vec![1u128];
    for i in 0..count {
        let next = out[i] * u128::from(period[i % period.len()]);
        out.push(next);
    }
    out
}
