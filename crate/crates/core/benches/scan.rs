// SPDX-License-Identifier: Apache-2.0

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hopfdisc::analysis::{scan, FamilyContext, RunOptions};
use hopfdisc::families::{FamilyKind, FiberFamily, Point};
use hopfdisc::par::Execution;

fn finite_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan-central-ext-finite");
    group.sample_size(10);
    for ell in [4usize, 6] {
        let ctx = FamilyContext::new(
            FiberFamily::with_default_context(FamilyKind::CentralExtFinite, ell, 1).unwrap(),
        )
        .unwrap();
        let points: Vec<Point> = (0..ell as u64).map(|s| Point::Finite { s }).collect();
        for mode in [Execution::Sequential, Execution::Parallel] {
            let opts = RunOptions {
                mode,
                ..RunOptions::default()
            };
            group.bench_with_input(
                BenchmarkId::new(format!("{mode:?}"), ell),
                &points,
                |b, pts| b.iter(|| scan(&ctx, pts, &opts)),
            );
        }
    }
    group.finish();
}

criterion_group!(benches, finite_scan);
criterion_main!(benches);
