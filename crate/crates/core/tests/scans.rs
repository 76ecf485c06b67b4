// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use hopfdisc::analysis::{scan, FamilyContext, RunOptions, RunStatus};
use hopfdisc::families::{FamilyKind, FiberFamily, Point};
use hopfdisc::field::Fp;

fn context(kind: FamilyKind, ell: usize) -> FamilyContext {
    FamilyContext::new(FiberFamily::with_default_context(kind, ell, 2024).unwrap()).unwrap()
}

/// l-th powers of small integers, reduced mod p.
fn powers(ell: usize, p: u64, count: u64) -> Vec<u64> {
    (1..=count)
        .map(|t| Fp::new(t, p).pow(ell as u64).value())
        .collect()
}

#[test]
fn finite_family_all_orders() {
    for ell in 2..=6 {
        let ctx = context(FamilyKind::CentralExtFinite, ell);
        let pts: Vec<Point> = (0..ell as u64).map(|s| Point::Finite { s }).collect();
        let rep = scan(&ctx, &pts, &RunOptions::default());
        assert_eq!(
            rep.status,
            RunStatus::Success,
            "l = {ell}: {:?}",
            rep.failing_labels()
        );
        assert_eq!(rep.strata.len(), 1);
        assert_eq!(rep.strata[0].level, ell * ell + 1);
        assert_eq!(rep.summary.left_orbit_size, 1);
    }
}

#[test]
fn infinite_family_grid() {
    for ell in [2usize, 3, 6] {
        let ctx = context(FamilyKind::CentralExtInfinite, ell);
        let p = ctx.family.ctx.p;
        let mut values = BTreeMap::new();
        values.insert("u".to_string(), powers(ell, p, 4));
        values.insert("v".to_string(), powers(ell, p, 4));
        values.insert("s".to_string(), (0..ell as u64).collect());
        let pts = ctx.family.grid(&values).unwrap();
        let rep = scan(&ctx, &pts, &RunOptions::default());
        assert_eq!(
            rep.status,
            RunStatus::Success,
            "l = {ell}: {:?}",
            rep.failing_labels()
        );
        assert!(rep.records.iter().filter(|r| r.is_analyzed()).count() >= 16);
    }
}

#[test]
fn borel_family_grid() {
    for ell in [3usize, 5] {
        let ctx = context(FamilyKind::QuantumBorelRank1, ell);
        let p = ctx.family.ctx.p;
        let mut values = BTreeMap::new();
        values.insert("y".to_string(), powers(ell, p, 4));
        let mut xs = vec![0];
        xs.extend(powers(ell, p, 3));
        values.insert("x".to_string(), xs);
        let pts = ctx.family.grid(&values).unwrap();
        let rep = scan(&ctx, &pts, &RunOptions::default());
        assert_eq!(
            rep.status,
            RunStatus::Success,
            "l = {ell}: {:?}",
            rep.failing_labels()
        );
        let levels: Vec<usize> = rep.strata.iter().map(|s| s.level).collect();
        assert_eq!(levels, vec![ell + 1, ell * ell + 1]);
    }
}

#[test]
fn small_prime_infinite_fiber() {
    use hopfdisc::field::PrimeFieldContext;
    let ctx13 = PrimeFieldContext::with_prime(13, 3, 0).unwrap();
    let ctx =
        FamilyContext::new(FiberFamily::new(FamilyKind::CentralExtInfinite, 3, ctx13).unwrap())
            .unwrap();
    // the cubes mod 13 are 1, 5, 8, 12: (2, 3) has no roots and is skipped
    let opts = RunOptions::default();
    let skipped = ctx.analyze(&Point::Infinite { u: 2, v: 3, s: 1 }, &opts);
    assert!(skipped.skipped_reason.is_some());
    let rec = ctx.analyze(&Point::Infinite { u: 5, v: 8, s: 1 }, &opts);
    assert_eq!(rec.sd, Some(9));
    assert_eq!(rec.irr_dims, Some(vec![3]));
    assert!(rec.failed_checks().is_empty(), "{:?}", rec.checks);
}
