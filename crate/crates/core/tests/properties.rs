// SPDX-License-Identifier: Apache-2.0

use hopfdisc::analysis::{scan, FamilyContext, RunOptions};
use hopfdisc::chtrace::{discriminant_level, gram_matrix, TraceFunction};
use hopfdisc::families::{FamilyKind, FiberFamily, Point};
use hopfdisc::field::{find_prime, primitive_root_of_unity, Fp};
use hopfdisc::hopfsym::{is_maximally_stable, verify_primitive_quotient};
use hopfdisc::matrix::DenseMatrix;
use hopfdisc::par::Execution;
use hopfdisc::repmod::{hom_space, is_isomorphic};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn family(kind: FamilyKind, ell: usize) -> FiberFamily {
    FiberFamily::with_default_context(kind, ell, 1).unwrap()
}

/// A random point of the family whose fiber splits.
fn split_point(fam: &FiberFamily, a: u64, b: u64, s: u64) -> Point {
    let p = fam.ctx.p;
    let ell = fam.ell as u64;
    let lth = |t: u64| Fp::new(t % (p - 1) + 1, p).pow(ell).value();
    match fam.kind {
        FamilyKind::CentralExtFinite => Point::Finite { s: s % ell },
        FamilyKind::CentralExtInfinite => Point::Infinite {
            u: lth(a),
            v: lth(b),
            s: s % ell,
        },
        FamilyKind::QuantumBorelRank1 => Point::Borel {
            y: lth(a),
            x: if s.is_multiple_of(2) { 0 } else { lth(b) },
        },
    }
}

fn arb_family() -> impl Strategy<Value = (FamilyKind, usize)> {
    prop_oneof![
        (2usize..=5).prop_map(|l| (FamilyKind::CentralExtFinite, l)),
        (2usize..=4).prop_map(|l| (FamilyKind::CentralExtInfinite, l)),
        prop_oneof![Just(3usize), Just(5)].prop_map(|l| (FamilyKind::QuantumBorelRank1, l)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn roots_of_unity_have_exact_order(m in 2u64..40, bound in 0u64..2000) {
        let p = find_prime(m, bound).unwrap();
        let eps = primitive_root_of_unity(p, m).unwrap();
        for j in 1..m {
            prop_assert!(!eps.pow(j).is_one());
        }
        prop_assert!(eps.pow(m).is_one());
    }

    #[test]
    fn blocks_invariant_under_basis_permutation((kind, ell) in arb_family(), a in 0u64..1000, b in 0u64..1000, s in 0u64..6, seed in 0u64..1000) {
        let fam = family(kind, ell);
        let pt = split_point(&fam, a, b, s);
        let alg = fam.fiber_algebra(&pt).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..alg.dim()).collect();
        perm.shuffle(&mut rng);
        let shuffled = alg.permuted(&perm).unwrap();
        let lhs = alg.wedderburn_blocks(&mut rng).unwrap();
        let rhs = shuffled.wedderburn_blocks(&mut rng).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(lhs.sd, alg.sd().unwrap());
    }

    #[test]
    fn gram_rank_is_basis_independent((kind, ell) in arb_family(), a in 0u64..1000, b in 0u64..1000, s in 0u64..6, seed in 0u64..1000) {
        let fam = family(kind, ell);
        let pt = split_point(&fam, a, b, s);
        let alg = fam.fiber_algebra(&pt).unwrap();
        let tr = TraceFunction::regular(&alg);
        let g = gram_matrix(&alg, &tr);
        let p = alg.modulus();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = loop {
            let m = DenseMatrix::from_fn(alg.dim(), alg.dim(), p, |_, _| Fp::random(&mut rng, p));
            if m.is_invertible() {
                break m;
            }
        };
        let changed = &(&q.transpose() * &g) * &q;
        prop_assert_eq!(changed.rank(), g.rank());
        prop_assert!(discriminant_level(&alg, &tr).unwrap().agrees);
    }

    #[test]
    fn reports_constant_along_u_v(ell in 2usize..=4, a1 in 0u64..5000, b1 in 0u64..5000, a2 in 0u64..5000, b2 in 0u64..5000, s in 0u64..4) {
        let fam = family(FamilyKind::CentralExtInfinite, ell);
        let ctx = FamilyContext::new(fam.clone()).unwrap();
        let p1 = split_point(&fam, a1, b1, s);
        let p2 = split_point(&fam, a2, b2, s);
        let opts = RunOptions { mode: Execution::Sequential, ..RunOptions::default() };
        let r1 = ctx.analyze(&p1, &opts);
        let r2 = ctx.analyze(&p2, &opts);
        prop_assert_eq!((r1.sd, r1.level, &r1.irr_dims), (r2.sd, r2.level, &r2.irr_dims));
        prop_assert_eq!(r1.matches_expected, Some(true));
    }

    #[test]
    fn borel_reports_constant_on_strata(ell in prop_oneof![Just(3usize), Just(5)], a1 in 0u64..5000, a2 in 0u64..5000, b in 0u64..5000) {
        let fam = family(FamilyKind::QuantumBorelRank1, ell);
        let ctx = FamilyContext::new(fam.clone()).unwrap();
        let opts = RunOptions { mode: Execution::Sequential, ..RunOptions::default() };
        for parity in [0u64, 1] {
            let r1 = ctx.analyze(&split_point(&fam, a1, b, parity), &opts);
            let r2 = ctx.analyze(&split_point(&fam, a2, b.wrapping_mul(7), parity), &opts);
            prop_assert_eq!((r1.sd, r1.level, &r1.irr_dims, r1.all_max_stable), (r2.sd, r2.level, &r2.irr_dims, r2.all_max_stable));
        }
    }

    #[test]
    fn twisting_is_an_action((kind, ell) in arb_family(), a in 0u64..1000, b in 0u64..1000, s in 0u64..6, i in 0usize..64, j in 0usize..64) {
        let fam = family(kind, ell);
        let ctx = FamilyContext::new(fam.clone()).unwrap();
        let g0 = &ctx.g0;
        let (chi, theta) = (&g0[i % g0.len()], &g0[j % g0.len()]);
        let v = fam.seed_module(&split_point(&fam, a, b, s)).unwrap();
        let t = &fam.table;
        let lhs = t.twist(chi, &t.twist(theta, &v).unwrap()).unwrap();
        let rhs = t.twist(&t.product(chi, theta).unwrap(), &v).unwrap();
        prop_assert!(is_isomorphic(&lhs, &rhs).unwrap());
        // Hom between irreducibles is at most one-dimensional
        let hd = hom_space(&v, &t.twist(chi, &v).unwrap()).unwrap().dim();
        prop_assert!(hd <= 1);
        // maximal stability survives twisting
        let sv = t.stabilizer(&v, g0, Execution::Sequential).unwrap();
        let st = t.stabilizer(&t.twist(chi, &v).unwrap(), g0, Execution::Sequential).unwrap();
        prop_assert_eq!(
            is_maximally_stable(sv.order(), v.dim()).unwrap(),
            is_maximally_stable(st.order(), v.dim()).unwrap()
        );
    }

    #[test]
    fn cocycles_from_maximally_stable_seeds(ell in 2usize..=5, s in 0u64..5, seed in 0u64..100) {
        let fam = family(FamilyKind::CentralExtFinite, ell);
        let ctx = FamilyContext::new(fam.clone()).unwrap();
        let v = fam.seed_module(&Point::Finite { s: s % ell as u64 }).unwrap();
        let stab = fam.table.stabilizer(&v, &ctx.g0, Execution::Sequential).unwrap();
        prop_assert_eq!(stab.order(), v.dim() * v.dim());
        let table = fam.table.extract_cocycle(&stab).unwrap();
        table.check().unwrap();
        let q = verify_primitive_quotient(&table, &stab.witnesses, v.dim(), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(q.blocks.irreducible_dims, vec![v.dim()]);
    }
}

#[test]
fn sequential_and_parallel_scans_agree() {
    for (kind, ell) in [
        (FamilyKind::CentralExtFinite, 5),
        (FamilyKind::QuantumBorelRank1, 3),
    ] {
        let fam = family(kind, ell);
        let ctx = FamilyContext::new(fam.clone()).unwrap();
        let pts = fam.default_grid(3, &mut ChaCha8Rng::seed_from_u64(9));
        let seq = scan(
            &ctx,
            &pts,
            &RunOptions {
                mode: Execution::Sequential,
                ..RunOptions::default()
            },
        );
        let par = scan(&ctx, &pts, &RunOptions::default());
        assert_eq!(seq, par);
    }
}

#[test]
fn wrong_epsilon_is_caught() {
    // epsilon = 1 is not a primitive cube root: the twisted fibers become commutative
    let ctx = hopfdisc::field::PrimeFieldContext::new_unchecked(97, 3, 1, 0);
    let fam = FiberFamily::new(FamilyKind::CentralExtFinite, 3, ctx).unwrap();
    let fctx = FamilyContext::new(fam).unwrap();
    let pts: Vec<Point> = (0..3).map(|s| Point::Finite { s }).collect();
    let report = scan(&fctx, &pts, &RunOptions::default());
    assert_ne!(report.status, hopfdisc::analysis::RunStatus::Success);
    let failing = report.failing_labels();
    assert!(
        failing.contains(&"seed-module") || failing.contains(&"fiber-relations"),
        "{failing:?}"
    );
}
