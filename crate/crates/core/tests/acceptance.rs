//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use solenoid_core::bundles::{h0, AdicSurface, Generator, SurfaceGroupWord};
use solenoid_core::classify::{
    adic_surfaces_return_equivalent, classify_adic_surfaces, classify_vietoris, generate_counterexample, Outcome,
};
use solenoid_core::odometer::{ClopenSet, TowerPoint, TruncatedTower};
use solenoid_core::pseudogroup::{interleaving_consistent, RestrictedAction};
use solenoid_core::supernatural::{sequences_return_equivalent, BondingSequence};
use solenoid_core::toral::{lattice_invariants, smith_normal_form, IntMatrix};

type Check = Result<String, String>;

fn seq(prefix: &[u64], period: &[u64]) -> BondingSequence {
    BondingSequence::new(prefix.to_vec(), period.to_vec()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn vietoris_table() -> Check {
    let cases = [
        (seq(&[], &[2]), seq(&[], &[4]), Outcome::Homeomorphic, None),
        (seq(&[], &[2]), seq(&[], &[3]), Outcome::NotHomeomorphic, Some(2)),
        (seq(&[6], &[5]), seq(&[], &[5]), Outcome::Homeomorphic, None),
        (seq(&[3], &[2]), seq(&[], &[2]), Outcome::Homeomorphic, None),
    ];
    for (a, b, outcome, witness) in &cases {
        let v = classify_vietoris(a, b);
        ensure(&v.outcome == outcome && &v.witness_prime == witness, || {
            format!("{a} vs {b}: got {v}, expected {outcome:?} witness {witness:?}")
        })?;
    }
    Ok(format!("{} fixtures match", cases.len()))
}

fn counterexample_reproduction() -> Check {
    let m = seq(&[], &[2]);
    let c = generate_counterexample(2, &m).map_err(|e| e.to_string())?;
    ensure(c.shifted.seq() == &seq(&[3], &[2]), || format!("n = {}", c.shifted.seq()))?;
    ensure(adic_surfaces_return_equivalent(&c.original, &c.shifted), || "pair not return equivalent".into())?;
    let v = classify_adic_surfaces(&c.original, &c.shifted);
    ensure(v.outcome == Outcome::NotHomeomorphic, || format!("genus 2 verdict {v}"))?;
    let torus_a = AdicSurface::new(1, c.original.seq().clone()).unwrap();
    let torus_b = AdicSurface::new(1, c.shifted.seq().clone()).unwrap();
    let v = classify_adic_surfaces(&torus_a, &torus_b);
    ensure(v.outcome == Outcome::Homeomorphic, || format!("genus 1 verdict {v}"))?;
    Ok("n = ([3],[2]); genus 2 NotHomeomorphic, genus 1 Homeomorphic".into())
}

fn collapsibility_oracle() -> Check {
    let tower = TruncatedTower::shared(seq(&[], &[2, 3]), 2).unwrap();
    let mut collapsible = 0;
    for mask in 1u32..64 {
        let w: BTreeSet<u64> = (0..6).filter(|i| mask & (1 << i) != 0).collect();
        let set = ClopenSet::new(Arc::clone(&tower), 2, w.iter().map(|&r| BigUint::from(r))).unwrap();
        let fast = RestrictedAction::new(&tower, set).unwrap().is_collapsible();
        let brute = common::collapsible_by_translates(6, &w);
        ensure(fast == brute, || format!("subset {w:?}: implementation {fast}, oracle {brute}"))?;
        collapsible += usize::from(fast);
    }
    ensure(collapsible == 12, || format!("{collapsible} collapsible subsets, expected 12"))?;
    Ok("63 subsets agree with oracle; 12 collapsible".into())
}

fn odometer_properties() -> Check {
    let towers: [&[u64]; 4] = [&[2], &[3], &[2, 3], &[5, 2]];
    let mut checked = 0usize;
    for period in towers {
        for depth in 1..=6 {
            let tower = TruncatedTower::shared(seq(&[], period), depth).unwrap();
            let order = u64::try_from(tower.order()).unwrap();
            let start = TowerPoint::new(Arc::clone(&tower), BigUint::from(0u32)).unwrap();
            let orbit = start.orbit();
            let distinct: BTreeSet<&BigUint> = orbit.iter().map(|p| p.residue()).collect();
            ensure(orbit.len() as u64 == order && distinct.len() as u64 == order, || {
                format!("{period:?} depth {depth}: orbit length {} of {order}", orbit.len())
            })?;
            for p in &orbit {
                let next = p.add_one();
                for j in 1..=depth {
                    let lhs = next.project(j).unwrap();
                    let rhs = p.project(j).unwrap().add_one();
                    ensure(lhs == rhs, || format!("{period:?} depth {depth}: projection to {j} fails at {p}"))?;
                }
                let diameters: Vec<usize> =
                    (0..=depth).map(|j| ClopenSet::cylinder(p, j).unwrap().diameter().exponent()).collect();
                ensure(diameters == (0..=depth).collect::<Vec<_>>(), || {
                    format!("{period:?} depth {depth}: cylinder diameters {diameters:?} at {p}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} points checked across 24 towers"))
}

fn random_det_bounded(rng: &mut StdRng) -> [[i64; 2]; 2] {
    loop {
        let a = [[rng.gen_range(-9..=9), rng.gen_range(-9..=9)], [rng.gen_range(-9..=9), rng.gen_range(-9..=9)]];
        let det: i64 = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if det != 0 && det.abs() <= 12 {
            return a;
        }
    }
}

fn smith_oracle() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5EED_0005);
    for _ in 0..500 {
        let a = random_det_bounded(&mut rng);
        let m = IntMatrix::from_rows(&a).unwrap();
        let s = smith_normal_form(&m);
        let back = s.u.mul(&m).unwrap().mul(&s.v).unwrap();
        ensure(back == s.d, || format!("U A V != D for {a:?}"))?;
        let fast: Vec<i64> = s.invariant_factors().iter().map(|x| i64::try_from(x).unwrap()).collect();
        let brute = common::quotient_factors_by_cosets(a);
        ensure(fast == brute, || format!("{a:?}: smith {fast:?}, cosets {brute:?}"))?;
    }
    Ok("500 matrices match coset enumeration; reconstruction exact".into())
}

fn lattice_inequality() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5EED_0006);
    for i in 0..200 {
        let n = if i % 2 == 0 { 2 } else { 3 };
        let gens = rng.gen_range(0..=4);
        let columns: Vec<Vec<i64>> = (0..gens).map(|_| (0..n).map(|_| rng.gen_range(-6..=6)).collect()).collect();
        let k = IntMatrix::from_columns(n, &columns).unwrap();
        let inv = lattice_invariants(&k);
        ensure(inv.torsion_rank <= inv.rank && inv.rank <= n, || {
            format!("columns {columns:?}: d = {}, r = {}, n = {n}", inv.torsion_rank, inv.rank)
        })?;
        ensure(inv.torsion_rank == inv.invariant_factors.len(), || "torsion rank mismatch".into())?;
    }
    Ok("0 <= d <= r <= n on 200 sublattices".into())
}

fn primes_of(x: u64) -> Vec<u64> {
    (2..=x).filter(|p| x.is_multiple_of(*p) && (2..*p).all(|q| p % q != 0)).collect()
}

fn random_sequence(rng: &mut StdRng) -> BondingSequence {
    let prefix = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(2..=30)).collect();
    let period = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(2..=30)).collect();
    BondingSequence::new(prefix, period).unwrap()
}

/// A sequence with the same period primes as `a`, built from random products
/// of those primes.
fn equivalent_partner(rng: &mut StdRng, a: &BondingSequence) -> BondingSequence {
    let primes: Vec<u64> = a.period().iter().flat_map(|&m| primes_of(m)).collect::<BTreeSet<_>>().into_iter().collect();
    let mut period: Vec<u64> = primes.iter().map(|&p| p.pow(rng.gen_range(1..=3))).collect();
    let shift = rng.gen_range(0..period.len());
    period.rotate_left(shift);
    if rng.gen_bool(0.5) {
        period.push(primes[rng.gen_range(0..primes.len())]);
    }
    let prefix = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(2..=30)).collect();
    BondingSequence::new(prefix, period).unwrap()
}

fn dynamics_consistency() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5EED_0007);
    let mut equivalent = 0;
    for i in 0..50 {
        let a = random_sequence(&mut rng);
        let b = if i % 2 == 0 { equivalent_partner(&mut rng, &a) } else { random_sequence(&mut rng) };
        if sequences_return_equivalent(&a, &b) {
            equivalent += 1;
            for depth in 1..=12 {
                let ok = interleaving_consistent(&a, &b, depth).unwrap();
                ensure(ok, || format!("false refutation of {a} vs {b} at depth {depth}"))?;
            }
        }
    }
    let refuted = !interleaving_consistent(&seq(&[], &[2]), &seq(&[], &[3]), 1).unwrap();
    ensure(refuted, || "dyadic vs triadic not refuted at depth 1".into())?;
    Ok(format!("{equivalent} equivalent pairs of 50 never refuted; dyadic/triadic refuted at depth 1"))
}

fn random_word(rng: &mut StdRng, genus: u32) -> SurfaceGroupWord {
    let letters = (0..rng.gen_range(0..8))
        .map(|_| {
            let i = rng.gen_range(1..=genus);
            let g = if rng.gen_bool(0.5) { Generator::Alpha(i) } else { Generator::Beta(i) };
            let e = loop {
                let e = rng.gen_range(-50..=50);
                if e != 0 {
                    break e;
                }
            };
            (g, e)
        })
        .collect();
    SurfaceGroupWord::new(genus, letters).unwrap()
}

fn h0_relator() -> Check {
    for g in 1..=5 {
        let r = SurfaceGroupWord::relator(g).unwrap();
        ensure(h0(&r) == 0, || format!("h0(relator genus {g}) = {}", h0(&r)))?;
    }
    let mut rng = StdRng::seed_from_u64(0x5EED_0008);
    for _ in 0..1000 {
        let genus = rng.gen_range(1..=5);
        let (u, v) = (random_word(&mut rng, genus), random_word(&mut rng, genus));
        let uv = u.concat(&v).unwrap();
        ensure(h0(&uv) == h0(&u) + h0(&v), || format!("h0 not additive on {u} . {v}"))?;
    }
    Ok("relator vanishes for genus 1-5; additive on 1000 concatenations".into())
}

type Criterion = (&'static str, Duration, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 vietoris classification table", Duration::from_secs(1), vietoris_table),
        ("2 counterexample construction", Duration::from_secs(1), counterexample_reproduction),
        ("3 collapsibility oracle", Duration::from_secs(1), collapsibility_oracle),
        ("4 odometer properties", Duration::from_secs(5), odometer_properties),
        ("5 smith form oracle", Duration::from_secs(30), smith_oracle),
        ("6 lattice invariant inequality", Duration::from_secs(10), lattice_inequality),
        ("7 dynamics/invariant consistency", Duration::from_secs(5), dynamics_consistency),
        ("8 h0 relator and additivity", Duration::from_secs(1), h0_relator),
    ];
    let mut failures = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > budget => Err(format!("{detail}, but took {elapsed:?} (budget {budget:?})")),
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS  criterion {name}: {detail} ({elapsed:.2?})"),
            Err(why) => {
                failures += 1;
                println!("FAIL  criterion {name}: {why} ({elapsed:.2?})");
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
