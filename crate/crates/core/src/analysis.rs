// SPDX-License-Identifier: Apache-2.0

//! The per-fiber pipeline and grid scans: every computed invariant is recorded
//! next to the closed-form expectation and a named pass/fail check.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{AlgebraError, BlockReport};
use crate::chtrace::{
    cayley_hamilton_check, discriminant_level, sd_formula_check, TraceError, TraceFunction,
};
use crate::families::{ExpectedReport, FamilyError, FamilyKind, FiberFamily, Point};
use crate::field::{Fp, PrimeFieldContext};
use crate::hopfsym::{
    is_maximally_stable, verify_primitive_quotient, Character, HopfError, Side, Stabilizer, Winding,
};
use crate::par::{map_collect, Execution};
use crate::repmod::{check_relations, is_irreducible, is_isomorphic, GeneratorRep, RepError};

const PURPOSE_CH: u64 = 1;
const PURPOSE_BLOCKS: u64 = 2;
const PURPOSE_QUOTIENT: u64 = 3;

/// Check labels in the order they are reported.
pub const CHECK_LABELS: [&str; 18] = [
    "hopf-axioms",
    "identity-fiber-has-character",
    "winding-automorphism",
    "fiber-relations",
    "seed-module",
    "cayley-hamilton",
    "gram-rank-equals-sd",
    "stabilizer-bound",
    "sd-formula",
    "min-sd-equals-g0",
    "max-stable-iff-lowest",
    "basic-fiber-equivalences",
    "winding-orbit-in-lowest",
    "primitive-quotient",
    "tensor-multiplicities",
    "twist-invariance",
    "action-axiom",
    "orbit-transitivity",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

impl AnalysisError {
    fn algebra(&self) -> Option<&AlgebraError> {
        match self {
            AnalysisError::Algebra(e)
            | AnalysisError::Trace(TraceError::Algebra(e))
            | AnalysisError::Hopf(HopfError::Algebra(e)) => Some(e),
            _ => None,
        }
    }

    /// Failures of the method rather than of a mathematical statement.
    pub fn is_computational(&self) -> bool {
        matches!(
            self.algebra(),
            Some(
                AlgebraError::NonSplitBlock(_)
                    | AlgebraError::RetryExhausted { .. }
                    | AlgebraError::CharacteristicTooSmall { .. }
            )
        ) || matches!(
            self,
            AnalysisError::Trace(TraceError::CharacteristicTooSmall { .. })
                | AnalysisError::Hopf(HopfError::OrbitTooLarge(_))
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
}

impl Outcome {
    pub fn from_result<E: ToString>(r: Result<(), E>) -> Self {
        match r {
            Ok(()) => Outcome::Pass,
            Err(e) => Outcome::Fail(e.to_string()),
        }
    }

    fn check(ok: bool, reason: impl FnOnce() -> String) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail(reason())
        }
    }

    pub fn passed(&self) -> bool {
        matches!(self, Outcome::Pass)
    }
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Outcome::Pass => s.serialize_str("pass"),
            Outcome::Fail(msg) => s.serialize_str(&format!("fail: {msg}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CheckToggles {
    pub ch: bool,
    pub cocycles: bool,
    pub tensor: bool,
}

impl Default for CheckToggles {
    fn default() -> Self {
        CheckToggles {
            ch: true,
            cocycles: true,
            tensor: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RunOptions {
    pub mode: Execution,
    pub checks: CheckToggles,
    pub ch_samples: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            mode: Execution::Parallel,
            checks: CheckToggles::default(),
            ch_samples: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BasicConditions {
    pub has_character: bool,
    pub basic: bool,
    pub blocks_match_identity: bool,
    pub in_left_orbit: bool,
    pub in_right_orbit: bool,
}

impl BasicConditions {
    pub fn consistent(&self) -> bool {
        let v = [
            self.has_character,
            self.basic,
            self.blocks_match_identity,
            self.in_left_orbit,
            self.in_right_orbit,
        ];
        v.iter().all(|&b| b == v[0])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberRecord {
    pub point: Point,
    pub skipped_reason: Option<String>,
    pub error: Option<String>,
    pub error_kind: Option<&'static str>,
    pub dim: Option<usize>,
    pub radical_dim: Option<usize>,
    pub sd: Option<usize>,
    pub gram_rank: Option<usize>,
    pub level: Option<usize>,
    pub irr_dims: Option<Vec<usize>>,
    pub irr_count: Option<usize>,
    pub num_characters: Option<usize>,
    pub seed_dim: Option<usize>,
    pub stabilizer_order: Option<usize>,
    pub all_max_stable: Option<bool>,
    pub some_max_stable: Option<bool>,
    pub in_lowest_stratum: Option<bool>,
    pub in_winding_orbit_of_identity: Option<bool>,
    pub basic_conditions: Option<BasicConditions>,
    pub basic_equivalences_consistent: Option<bool>,
    pub tensor_multiplicities: Option<Vec<usize>>,
    pub expected_report: Option<ExpectedReport>,
    pub matches_expected: Option<bool>,
    pub checks: BTreeMap<&'static str, Outcome>,
}

impl FiberRecord {
    fn empty(point: Point) -> Self {
        FiberRecord {
            point,
            skipped_reason: None,
            error: None,
            error_kind: None,
            dim: None,
            radical_dim: None,
            sd: None,
            gram_rank: None,
            level: None,
            irr_dims: None,
            irr_count: None,
            num_characters: None,
            seed_dim: None,
            stabilizer_order: None,
            all_max_stable: None,
            some_max_stable: None,
            in_lowest_stratum: None,
            in_winding_orbit_of_identity: None,
            basic_conditions: None,
            basic_equivalences_consistent: None,
            tensor_multiplicities: None,
            expected_report: None,
            matches_expected: None,
            checks: BTreeMap::new(),
        }
    }

    fn set(&mut self, label: &'static str, outcome: Outcome) {
        // a label checked several times keeps its first failure
        match self.checks.get(label) {
            Some(Outcome::Fail(_)) => {}
            _ => {
                self.checks.insert(label, outcome);
            }
        }
    }

    pub fn is_analyzed(&self) -> bool {
        self.skipped_reason.is_none() && self.error.is_none()
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|(_, o)| !o.passed())
            .map(|(l, _)| *l)
            .collect()
    }
}

/// Family-wide data shared by every fiber: G0, the identity blocks and the winding orbits.
#[derive(Debug, Clone)]
pub struct FamilyContext {
    pub family: FiberFamily,
    pub identity: Point,
    pub identity_coords: Vec<Fp>,
    pub g0: Vec<Character>,
    pub identity_blocks: BlockReport,
    pub generators: Vec<Character>,
    pub left_orbit: BTreeSet<Vec<Fp>>,
    pub right_orbit: BTreeSet<Vec<Fp>>,
    pub checks: BTreeMap<&'static str, Outcome>,
}

impl FamilyContext {
    pub fn new(family: FiberFamily) -> Result<Self, AnalysisError> {
        let table = &family.table;
        let identity = family.identity_point();
        let identity_coords = family.coords(&identity);
        let mut checks = BTreeMap::new();
        checks.insert("hopf-axioms", Outcome::from_result(table.check_axioms()));

        let g0 = table.enumerate_characters(&family.fiber_relations(&identity));
        checks.insert(
            "identity-fiber-has-character",
            Outcome::check(!g0.is_empty(), || "identity fiber has no character".into()),
        );
        let identity_alg = family.fiber_algebra(&identity)?;
        let identity_blocks =
            identity_alg.wedderburn_blocks(&mut family.rng_for(&identity, PURPOSE_BLOCKS))?;

        let mut generators = family.global_character_generators();
        generators.extend(g0.iter().cloned());
        generators.sort();
        generators.dedup();
        let left_orbit =
            table.orbit_on_central_points(&generators, Side::Left, &identity_coords)?;
        let right_orbit =
            table.orbit_on_central_points(&generators, Side::Right, &identity_coords)?;

        let mut ctx = FamilyContext {
            family,
            identity,
            identity_coords,
            g0,
            identity_blocks,
            generators,
            left_orbit,
            right_orbit,
            checks,
        };
        let winding = ctx.check_windings();
        ctx.checks
            .insert("winding-automorphism", Outcome::from_result(winding));
        let sd_ok = ctx.identity_blocks.sd == ctx.g0.len();
        ctx.checks.insert(
            "min-sd-equals-g0",
            Outcome::check(sd_ok, || {
                format!(
                    "identity sd {} but |G0| = {}",
                    ctx.identity_blocks.sd,
                    ctx.g0.len()
                )
            }),
        );
        Ok(ctx)
    }

    pub fn g0_order(&self) -> usize {
        self.g0.len()
    }

    /// Each winding map sends the identity fiber onto the fiber it names, W(chi^-1) inverts W(chi),
    /// and chi -> W_l(chi) reverses products while chi -> W_r(chi) keeps them.
    fn check_windings(&self) -> Result<(), String> {
        let fam = &self.family;
        let table = &fam.table;
        let id = Winding::identity(table);
        for chi in &self.generators {
            let inv = table.inverse(chi).map_err(|e| e.to_string())?;
            for side in [Side::Left, Side::Right] {
                let w = table.winding(chi, side).map_err(|e| e.to_string())?;
                let target = table
                    .act_on_point(chi, side, &self.identity_coords)
                    .map_err(|e| e.to_string())?;
                let point = fam.point_from_coords(&target).ok_or_else(|| {
                    format!("winding image {target:?} is not a point of the family")
                })?;
                let alg = fam.fiber_algebra(&point).map_err(|e| e.to_string())?;
                table
                    .check_winding_automorphism(
                        &w,
                        &self.identity_coords,
                        &fam.regular_rep(&point, &alg),
                    )
                    .map_err(|e| format!("{side:?} winding of {:?}: {e}", chi.values))?;
                let w_inv = table.winding(&inv, side).map_err(|e| e.to_string())?;
                if w_inv.after(&w).map_err(|e| e.to_string())? != id {
                    return Err(format!("W({:?})^-1 is not W(chi^-1)", chi.values));
                }
            }
        }
        for chi in &self.g0 {
            let wl = table.winding(chi, Side::Left).map_err(|e| e.to_string())?;
            let wr = table.winding(chi, Side::Right).map_err(|e| e.to_string())?;
            for theta in &self.g0 {
                let prod = table.product(chi, theta).map_err(|e| e.to_string())?;
                let tl = table
                    .winding(theta, Side::Left)
                    .map_err(|e| e.to_string())?;
                let tr = table
                    .winding(theta, Side::Right)
                    .map_err(|e| e.to_string())?;
                let left_ok = table
                    .winding(&prod, Side::Left)
                    .map_err(|e| e.to_string())?
                    == tl.after(&wl).map_err(|e| e.to_string())?;
                let right_ok = table
                    .winding(&prod, Side::Right)
                    .map_err(|e| e.to_string())?
                    == wr.after(&tr).map_err(|e| e.to_string())?;
                if !left_ok || !right_ok {
                    return Err(format!(
                        "winding composition fails at {:?}, {:?}",
                        chi.values, theta.values
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn analyze(&self, point: &Point, opts: &RunOptions) -> FiberRecord {
        let mut rec = FiberRecord::empty(*point);
        if let Err(e) = self.family.validity(point) {
            rec.skipped_reason = Some(e.to_string());
            return rec;
        }
        rec.expected_report = Some(self.family.expected_report(point));
        if let Err(e) = self.run_pipeline(point, opts, &mut rec) {
            rec.error_kind = Some(if e.is_computational() {
                "computational"
            } else {
                "invariant"
            });
            rec.error = Some(e.to_string());
            return rec;
        }
        rec.matches_expected = rec
            .expected_report
            .as_ref()
            .map(|exp| matches_expected(&rec, exp));
        let matches = rec.matches_expected == Some(true);
        rec.set(
            "closed-form",
            Outcome::check(matches, || {
                "computed report differs from the closed form".into()
            }),
        );
        rec
    }

    fn run_pipeline(
        &self,
        point: &Point,
        opts: &RunOptions,
        rec: &mut FiberRecord,
    ) -> Result<(), AnalysisError> {
        let fam = &self.family;
        let table = &fam.table;
        let g0 = &self.g0;
        let ngens = table.generator_count();
        let mode = opts.mode;

        let alg = fam.fiber_algebra(point)?;
        let rels = fam.fiber_relations(point);
        let regular = fam.regular_rep(point, &alg);
        rec.set(
            "fiber-relations",
            Outcome::from_result(check_relations(&regular, &rels, ngens)),
        );
        rec.dim = Some(alg.dim());

        let tr = TraceFunction::regular(&alg);
        if opts.checks.ch {
            let ch = cayley_hamilton_check(
                &alg,
                &tr,
                alg.dim(),
                opts.ch_samples,
                &mut fam.rng_for(point, PURPOSE_CH),
            )?;
            let outcome = match &ch.failure {
                None => Outcome::Pass,
                Some(f) => Outcome::Fail(f.reason.clone()),
            };
            rec.set("cayley-hamilton", outcome);
        }
        let disc = discriminant_level(&alg, &tr)?;
        let blocks = alg.wedderburn_blocks(&mut fam.rng_for(point, PURPOSE_BLOCKS))?;
        rec.radical_dim = Some(blocks.radical_dim);
        rec.sd = Some(blocks.sd);
        rec.gram_rank = Some(disc.gram_rank);
        rec.level = Some(disc.lowest_vanishing_level);
        rec.irr_dims = Some(blocks.irreducible_dims.clone());
        rec.irr_count = Some(blocks.num_irreducibles);
        rec.set(
            "gram-rank-equals-sd",
            Outcome::check(disc.gram_rank == blocks.sd && disc.agrees, || {
                format!("Gram rank {} vs sd {}", disc.gram_rank, blocks.sd)
            }),
        );

        let chars = table.enumerate_characters(&rels);
        rec.num_characters = Some(chars.len());

        let seed = fam.seed_module(point)?;
        let seed_ok = check_relations(&seed, &rels, ngens)
            .map_err(|e| e.to_string())
            .and_then(|_| {
                if is_irreducible(&seed) {
                    Ok(())
                } else {
                    Err("seed module is reducible".into())
                }
            });
        rec.set("seed-module", Outcome::from_result(seed_ok));
        let dim = seed.dim();
        rec.seed_dim = Some(dim);

        // every twist chi (x) V of the seed, with its stabilizer
        let twists: Vec<GeneratorRep> = g0
            .iter()
            .map(|chi| table.twist(chi, &seed))
            .collect::<Result<_, _>>()?;
        let stabs: Vec<Stabilizer> = map_collect(mode, &twists, |v| {
            table.stabilizer(v, g0, Execution::Sequential)
        })
        .into_iter()
        .collect::<Result<_, _>>()?;
        let seed_stab = table.stabilizer(&seed, g0, Execution::Sequential)?;
        rec.stabilizer_order = Some(seed_stab.order());

        let mut flags = Vec::with_capacity(stabs.len() + 1);
        for (i, st) in std::iter::once(&seed_stab).chain(&stabs).enumerate() {
            match is_maximally_stable(st.order(), dim) {
                Ok(f) => {
                    flags.push(f);
                    rec.set("stabilizer-bound", Outcome::Pass);
                }
                Err(e) => {
                    flags.push(false);
                    rec.set("stabilizer-bound", Outcome::Fail(format!("twist {i}: {e}")));
                }
            }
            rec.set(
                "sd-formula",
                Outcome::check(
                    sd_formula_check(blocks.sd, st.order(), g0.len(), dim),
                    || {
                        format!(
                            "sd {} * |Stab| {} != |G0| {} * dim^2 {}",
                            blocks.sd,
                            st.order(),
                            g0.len(),
                            dim * dim
                        )
                    },
                ),
            );
        }
        let seed_max = flags[0];
        rec.set(
            "twist-invariance",
            Outcome::check(flags.iter().all(|&f| f == seed_max), || {
                "maximal stability changes under twisting".into()
            }),
        );

        // chi (x) (theta (x) V) = (chi theta) (x) V
        let pairs: Vec<(usize, usize)> = (0..g0.len())
            .flat_map(|i| (0..g0.len()).map(move |j| (i, j)))
            .collect();
        let axiom = map_collect(mode, &pairs, |&(i, j)| -> Result<bool, AnalysisError> {
            let lhs = table.twist(&g0[i], &twists[j])?;
            let rhs = table.twist(&table.product(&g0[i], &g0[j])?, &seed)?;
            Ok(is_isomorphic(&lhs, &rhs)?)
        });
        let mut axiom_ok = true;
        for r in axiom {
            axiom_ok &= r?;
        }
        let unit_ok = is_isomorphic(&table.twist(&table.counit_character(), &seed)?, &seed)?;
        rec.set(
            "action-axiom",
            Outcome::check(axiom_ok && unit_ok, || {
                "twisting is not an action of G0".into()
            }),
        );

        // classes of twists: one per coset of the stabilizer
        let stab_set: BTreeSet<&Character> = seed_stab.members.iter().collect();
        let mut reps: Vec<usize> = Vec::new();
        for (i, chi) in g0.iter().enumerate() {
            let mut covered = false;
            for &r in &reps {
                if stab_set.contains(&table.product(&table.inverse(&g0[r])?, chi)?) {
                    covered = true;
                    break;
                }
            }
            if !covered {
                reps.push(i);
            }
        }
        let mut distinct = true;
        for (a, &i) in reps.iter().enumerate() {
            for &j in &reps[a + 1..] {
                if is_isomorphic(&twists[i], &twists[j])? {
                    distinct = false;
                }
            }
        }
        let mut class_dims = vec![dim; reps.len()];
        class_dims.sort_unstable();
        let transitive = distinct
            && reps.iter().all(|&i| is_irreducible(&twists[i]))
            && class_dims == blocks.irreducible_dims;
        rec.set(
            "orbit-transitivity",
            Outcome::check(transitive, || {
                format!(
                    "G0-orbit of the seed gives dims {class_dims:?}, blocks give {:?}",
                    blocks.irreducible_dims
                )
            }),
        );

        let all_max = flags.iter().all(|&f| f);
        let some_max = flags.iter().any(|&f| f);
        let in_lowest = blocks.sd == g0.len();
        rec.all_max_stable = Some(all_max);
        rec.some_max_stable = Some(some_max);
        rec.in_lowest_stratum = Some(in_lowest);
        rec.set(
            "max-stable-iff-lowest",
            Outcome::check(all_max == some_max && some_max == in_lowest, || {
                format!("all max-stable {all_max}, some max-stable {some_max}, lowest {in_lowest}")
            }),
        );
        rec.set(
            "min-sd-equals-g0",
            Outcome::check(blocks.sd >= g0.len(), || {
                format!("sd {} below |G0| = {}", blocks.sd, g0.len())
            }),
        );

        if opts.checks.cocycles {
            for &i in &reps {
                let st = &stabs[i];
                if st.order() != dim * dim {
                    continue;
                }
                let mut rng = fam.rng_for(point, PURPOSE_QUOTIENT + i as u64);
                let res = table
                    .extract_cocycle(st)
                    .and_then(|c| verify_primitive_quotient(&c, &st.witnesses, dim, &mut rng))
                    .map(|_| ());
                rec.set("primitive-quotient", Outcome::from_result(res));
            }
        }

        if opts.checks.tensor {
            let report = table.tensor_character_multiplicities(&seed, g0, &seed_stab, mode)?;
            rec.tensor_multiplicities =
                Some(report.multiplicities.iter().map(|(_, m)| *m).collect());
            rec.set(
                "tensor-multiplicities",
                Outcome::check(report.consistent, || {
                    format!(
                        "multiplicities {:?} do not match the stabilizer",
                        rec.tensor_multiplicities
                    )
                }),
            );
        }

        let coords = fam.coords(point);
        let in_left = self.left_orbit.contains(&coords);
        let in_right = self.right_orbit.contains(&coords);
        rec.in_winding_orbit_of_identity = Some(in_left);
        let basic = BasicConditions {
            has_character: !chars.is_empty(),
            basic: blocks.irreducible_dims.iter().all(|&d| d == 1),
            blocks_match_identity: blocks == self.identity_blocks,
            in_left_orbit: in_left,
            in_right_orbit: in_right,
        };
        rec.basic_conditions = Some(basic);
        rec.basic_equivalences_consistent = Some(basic.consistent());
        rec.set(
            "basic-fiber-equivalences",
            Outcome::check(basic.consistent(), || format!("{basic:?}")),
        );
        rec.set(
            "winding-orbit-in-lowest",
            Outcome::check(!(in_left || in_right) || in_lowest, || {
                "orbit point outside the lowest stratum".into()
            }),
        );
        Ok(())
    }
}

fn matches_expected(rec: &FiberRecord, exp: &ExpectedReport) -> bool {
    rec.sd == Some(exp.sd)
        && rec.level == Some(exp.level)
        && rec.irr_dims.as_deref() == Some(exp.irr_dims.as_slice())
        && rec.irr_count == Some(exp.irr_count)
        && rec.num_characters == Some(exp.num_characters)
        && rec.all_max_stable == Some(exp.all_max_stable)
        && rec.in_lowest_stratum == Some(exp.in_lowest_stratum)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub level: usize,
    pub points: Vec<Point>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySummary {
    pub family: FamilyKind,
    pub ell: usize,
    pub identity_point: Point,
    pub g0_order: usize,
    pub identity_radical_dim: usize,
    pub left_orbit_size: usize,
    pub right_orbit_size: usize,
    pub checks: BTreeMap<&'static str, Outcome>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Success,
    Mismatch,
    ComputationalFailure,
}

impl RunStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Success => 0,
            RunStatus::Mismatch => 1,
            RunStatus::ComputationalFailure => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub field_context: PrimeFieldContext,
    pub summary: FamilySummary,
    pub records: Vec<FiberRecord>,
    pub strata: Vec<Stratum>,
    pub strata_match_expected: bool,
    pub suite_matrix: BTreeMap<&'static str, Tally>,
    pub status: RunStatus,
}

impl ScanReport {
    pub fn failing_labels(&self) -> Vec<&'static str> {
        self.suite_matrix
            .iter()
            .filter(|(_, t)| t.fail > 0)
            .map(|(l, _)| *l)
            .collect()
    }
}

/// Analyze every point, in sorted order regardless of the execution mode.
pub fn scan(ctx: &FamilyContext, points: &[Point], opts: &RunOptions) -> ScanReport {
    let mut sorted = points.to_vec();
    sorted.sort();
    sorted.dedup();
    let records = map_collect(opts.mode, &sorted, |p| ctx.analyze(p, opts));
    assemble(ctx, records)
}

pub fn assemble(ctx: &FamilyContext, records: Vec<FiberRecord>) -> ScanReport {
    let fam = &ctx.family;
    let mut by_level: BTreeMap<usize, Vec<Point>> = BTreeMap::new();
    let mut strata_match_expected = true;
    for r in records.iter().filter(|r| r.is_analyzed()) {
        let level = r.level.expect("analyzed records carry a level");
        by_level.entry(level).or_default().push(r.point);
        strata_match_expected &= r.expected_report.as_ref().map(|e| e.level) == Some(level);
    }
    let strata = by_level
        .into_iter()
        .map(|(level, points)| Stratum { level, points })
        .collect();

    let mut suite_matrix: BTreeMap<&'static str, Tally> = BTreeMap::new();
    let mut tally = |label: &'static str, o: &Outcome| {
        let t = suite_matrix.entry(label).or_default();
        if o.passed() {
            t.pass += 1;
        } else {
            t.fail += 1;
        }
    };
    for (l, o) in &ctx.checks {
        tally(l, o);
    }
    for r in &records {
        for (l, o) in &r.checks {
            tally(l, o);
        }
    }
    tally(
        "strata",
        &Outcome::check(strata_match_expected, || {
            "observed strata differ from the closed form".into()
        }),
    );

    let computational = records
        .iter()
        .any(|r| r.error_kind == Some("computational"));
    let mismatch = records
        .iter()
        .any(|r| r.error_kind == Some("invariant") || r.matches_expected == Some(false))
        || suite_matrix.values().any(|t| t.fail > 0);
    let status = if computational {
        RunStatus::ComputationalFailure
    } else if mismatch {
        RunStatus::Mismatch
    } else {
        RunStatus::Success
    };
    ScanReport {
        field_context: fam.ctx.clone(),
        summary: FamilySummary {
            family: fam.kind,
            ell: fam.ell,
            identity_point: ctx.identity,
            g0_order: ctx.g0.len(),
            identity_radical_dim: ctx.identity_blocks.radical_dim,
            left_orbit_size: ctx.left_orbit.len(),
            right_orbit_size: ctx.right_orbit.len(),
            checks: ctx.checks.clone(),
        },
        records,
        strata,
        strata_match_expected,
        suite_matrix,
        status,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn context(kind: FamilyKind, ell: usize) -> FamilyContext {
        FamilyContext::new(FiberFamily::with_default_context(kind, ell, 11).unwrap()).unwrap()
    }

    #[test]
    fn finite_fiber_records() {
        let ctx = context(FamilyKind::CentralExtFinite, 3);
        assert!(ctx.checks.values().all(Outcome::passed), "{:?}", ctx.checks);
        assert_eq!(ctx.g0_order(), 9);
        assert_eq!(ctx.left_orbit.len(), 1);
        let opts = RunOptions::default();
        let r = ctx.analyze(&Point::Finite { s: 1 }, &opts);
        assert_eq!((r.sd, r.level), (Some(9), Some(10)));
        assert_eq!(r.matches_expected, Some(true));
        assert!(r.failed_checks().is_empty(), "{:?}", r.checks);
        let r0 = ctx.analyze(&Point::Finite { s: 0 }, &opts);
        assert_eq!(r0.num_characters, Some(9));
        assert_eq!(r0.in_winding_orbit_of_identity, Some(true));
        assert!(r0.failed_checks().is_empty(), "{:?}", r0.checks);
    }

    #[test]
    fn borel_strata() {
        let ctx = context(FamilyKind::QuantumBorelRank1, 3);
        assert!(ctx.checks.values().all(Outcome::passed), "{:?}", ctx.checks);
        let pts = [
            Point::Borel { y: 1, x: 0 },
            Point::Borel { y: 1, x: 1 },
            Point::Borel { y: 8, x: 27 },
        ];
        let rep = scan(&ctx, &pts, &RunOptions::default());
        assert_eq!(rep.status, RunStatus::Success, "{:?}", rep.failing_labels());
        let levels: Vec<usize> = rep.strata.iter().map(|s| s.level).collect();
        assert_eq!(levels, vec![4, 10]);
        assert_eq!(rep.records[1].tensor_multiplicities, Some(vec![1, 1, 1]));
    }

    #[test]
    fn infinite_skips_points_without_roots() {
        let ctx = context(FamilyKind::CentralExtInfinite, 3);
        let p = ctx.family.ctx.p;
        let non_cube = (2..p).find(|&u| !Fp::new(u, p).is_nth_power(3)).unwrap();
        let rec = ctx.analyze(
            &Point::Infinite {
                u: non_cube,
                v: 1,
                s: 0,
            },
            &RunOptions::default(),
        );
        assert!(rec.skipped_reason.is_some());
        assert_eq!(rec.matches_expected, None);
        let rec = ctx.analyze(
            &Point::Infinite { u: 8, v: 27, s: 2 },
            &RunOptions::default(),
        );
        assert_eq!(rec.matches_expected, Some(true));
        assert!(rec.failed_checks().is_empty(), "{:?}", rec.checks);
    }

    #[test]
    fn modes_agree() {
        let ctx = context(FamilyKind::CentralExtFinite, 4);
        let pts: Vec<Point> = (0..4).map(|s| Point::Finite { s }).collect();
        let seq = RunOptions {
            mode: Execution::Sequential,
            ..RunOptions::default()
        };
        assert_eq!(
            scan(&ctx, &pts, &seq),
            scan(&ctx, &pts, &RunOptions::default())
        );
    }
}
