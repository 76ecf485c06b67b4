// SPDX-License-Identifier: Apache-2.0

//! The example families: fibers of the finite and infinite central extensions
//! of Z/l x Z/l, and the rank-one quantum Borel algebra at a root of unity.
//! Each fiber is a skew torus g^l = alpha, h^l = beta, h g = q g h.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{skew_torus, AlgebraError, StructureAlgebra};
use crate::field::{gcd, multiplicative_generator, Fp, PrimeFieldContext};
use crate::hopfsym::{Character, HopfSymbolTable};
use crate::matrix::DenseMatrix;
use crate::presentation::{Relation, Word, WordSum};
use crate::repmod::GeneratorRep;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("root order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("quantum Borel needs an odd root order, got {0}")]
    EvenOrder(usize),
    #[error("field context does not fit the family: {0}")]
    ContextMismatch(String),
    #[error("{0}")]
    RootUnavailable(String),
    #[error("point does not belong to this family: {0}")]
    WrongPoint(String),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    CentralExtFinite,
    CentralExtInfinite,
    QuantumBorelRank1,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 3] = [
        FamilyKind::CentralExtFinite,
        FamilyKind::CentralExtInfinite,
        FamilyKind::QuantumBorelRank1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::CentralExtFinite => "central-ext-finite",
            FamilyKind::CentralExtInfinite => "central-ext-infinite",
            FamilyKind::QuantumBorelRank1 => "quantum-borel-rank1",
        }
    }

    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            FamilyKind::CentralExtFinite => &["s"],
            FamilyKind::CentralExtInfinite => &["u", "v", "s"],
            FamilyKind::QuantumBorelRank1 => &["y", "x"],
        }
    }

    fn tag(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

/// A point of MaxSpec C by its raw parameters; s is an exponent of epsilon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(untagged)]
pub enum Point {
    Finite { s: u64 },
    Infinite { u: u64, v: u64, s: u64 },
    Borel { y: u64, x: u64 },
}

impl Point {
    /// (name, value) pairs in the family's parameter order.
    pub fn params(&self) -> Vec<(&'static str, u64)> {
        match *self {
            Point::Finite { s } => vec![("s", s)],
            Point::Infinite { u, v, s } => vec![("u", u), ("v", v), ("s", s)],
            Point::Borel { y, x } => vec![("y", y), ("x", x)],
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Point::Finite { s } => write!(f, "s={s}"),
            Point::Infinite { u, v, s } => write!(f, "u={u},v={v},s={s}"),
            Point::Borel { y, x } => write!(f, "y={y},x={x}"),
        }
    }
}

/// Closed-form description of a fiber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedReport {
    pub sd: usize,
    pub level: usize,
    pub irr_dims: Vec<usize>,
    pub irr_count: usize,
    pub num_characters: usize,
    pub all_max_stable: bool,
    pub in_lowest_stratum: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberFamily {
    pub kind: FamilyKind,
    pub ell: usize,
    pub ctx: PrimeFieldContext,
    pub table: HopfSymbolTable,
}

impl FiberFamily {
    /// Smallest admissible prime: p = 1 mod l and p > (l^2)^2.
    pub fn default_context(ell: usize, seed: u64) -> Result<PrimeFieldContext, FamilyError> {
        let bound = (ell as u64).pow(4);
        PrimeFieldContext::new(ell as u64, bound, seed)
            .map_err(|e| FamilyError::ContextMismatch(e.to_string()))
    }

    pub fn new(kind: FamilyKind, ell: usize, ctx: PrimeFieldContext) -> Result<Self, FamilyError> {
        if ell < 2 {
            return Err(FamilyError::OrderTooSmall(ell));
        }
        if kind == FamilyKind::QuantumBorelRank1 && ell.is_multiple_of(2) {
            return Err(FamilyError::EvenOrder(ell));
        }
        if ctx.m != ell as u64 {
            return Err(FamilyError::ContextMismatch(format!(
                "root order {} differs from l = {ell}",
                ctx.m
            )));
        }
        if ctx.p <= (ell * ell) as u64 {
            return Err(FamilyError::ContextMismatch(format!(
                "p = {} must exceed the fiber dimension {}",
                ctx.p,
                ell * ell
            )));
        }
        let table = match kind {
            FamilyKind::CentralExtFinite => central_ext_table(&ctx, ell, ["a", "b"], true),
            FamilyKind::CentralExtInfinite => central_ext_table(&ctx, ell, ["x", "y"], false),
            FamilyKind::QuantumBorelRank1 => borel_table(&ctx, ell),
        };
        Ok(FiberFamily {
            kind,
            ell,
            ctx,
            table,
        })
    }

    pub fn with_default_context(
        kind: FamilyKind,
        ell: usize,
        seed: u64,
    ) -> Result<Self, FamilyError> {
        Self::new(kind, ell, Self::default_context(ell, seed)?)
    }

    fn p(&self) -> u64 {
        self.ctx.p
    }

    fn fp(&self, v: u64) -> Fp {
        Fp::new(v, self.p())
    }

    pub fn fiber_dim(&self) -> usize {
        self.ell * self.ell
    }

    pub fn identity_point(&self) -> Point {
        match self.kind {
            FamilyKind::CentralExtFinite => Point::Finite { s: 0 },
            FamilyKind::CentralExtInfinite => Point::Infinite { u: 1, v: 1, s: 0 },
            FamilyKind::QuantumBorelRank1 => Point::Borel { y: 1, x: 0 },
        }
    }

    fn check_point(&self, point: &Point) -> Result<(), FamilyError> {
        let ok = matches!(
            (self.kind, point),
            (FamilyKind::CentralExtFinite, Point::Finite { .. })
                | (FamilyKind::CentralExtInfinite, Point::Infinite { .. })
                | (FamilyKind::QuantumBorelRank1, Point::Borel { .. })
        );
        if ok {
            Ok(())
        } else {
            Err(FamilyError::WrongPoint(point.to_string()))
        }
    }

    /// Values of the central words at the point.
    pub fn coords(&self, point: &Point) -> Vec<Fp> {
        match *point {
            Point::Finite { s } => vec![self.ctx.eps_pow(s as i64)],
            Point::Infinite { u, v, s } => vec![self.fp(u), self.fp(v), self.ctx.eps_pow(s as i64)],
            Point::Borel { y, x } => vec![self.fp(y), self.fp(x)],
        }
    }

    /// Inverse of `coords`, when the central values name a point of this family.
    pub fn point_from_coords(&self, coords: &[Fp]) -> Option<Point> {
        match (self.kind, coords) {
            (FamilyKind::CentralExtFinite, [c]) => Some(Point::Finite {
                s: self.ctx.eps_log(*c)?,
            }),
            (FamilyKind::CentralExtInfinite, [u, v, c]) => Some(Point::Infinite {
                u: u.value(),
                v: v.value(),
                s: self.ctx.eps_log(*c)?,
            }),
            (FamilyKind::QuantumBorelRank1, [y, x]) => Some(Point::Borel {
                y: y.value(),
                x: x.value(),
            }),
            _ => None,
        }
    }

    pub fn point_from_params(&self, params: &BTreeMap<String, u64>) -> Result<Point, FamilyError> {
        for key in params.keys() {
            if !self.kind.parameters().contains(&key.as_str()) {
                return Err(FamilyError::UnknownParameter(key.clone()));
            }
        }
        let get = |k: &str| {
            params
                .get(k)
                .copied()
                .ok_or_else(|| FamilyError::WrongPoint(format!("missing parameter `{k}`")))
        };
        let p = self.p();
        let ell = self.ell as u64;
        Ok(match self.kind {
            FamilyKind::CentralExtFinite => Point::Finite { s: get("s")? % ell },
            FamilyKind::CentralExtInfinite => Point::Infinite {
                u: get("u")? % p,
                v: get("v")? % p,
                s: get("s")? % ell,
            },
            FamilyKind::QuantumBorelRank1 => Point::Borel {
                y: get("y")? % p,
                x: get("x")? % p,
            },
        })
    }

    /// Default sample values of one parameter: all exponents for s, otherwise the
    /// distinguished values plus `samples` seeded l-th powers, so every default point splits.
    pub fn default_values<R: Rng + ?Sized>(
        &self,
        param: &str,
        samples: usize,
        rng: &mut R,
    ) -> Vec<u64> {
        let p = self.p();
        let mut vals: Vec<u64> = match param {
            "s" => return (0..self.ell as u64).collect(),
            "x" => vec![0, 1],
            _ => vec![1],
        };
        vals.extend((0..samples).map(|_| Fp::random_nonzero(rng, p).pow(self.ell as u64).value()));
        vals.sort_unstable();
        vals.dedup();
        vals
    }

    /// Cartesian product of per-parameter value lists, sorted.
    pub fn grid(&self, values: &BTreeMap<String, Vec<u64>>) -> Result<Vec<Point>, FamilyError> {
        let params = self.kind.parameters();
        let lists: Vec<&Vec<u64>> = params
            .iter()
            .map(|k| {
                values
                    .get(*k)
                    .ok_or_else(|| FamilyError::WrongPoint(format!("no values for `{k}`")))
            })
            .collect::<Result<_, _>>()?;
        let mut points = Vec::new();
        let mut idx = vec![0usize; params.len()];
        if lists.iter().any(|l| l.is_empty()) {
            return Ok(points);
        }
        loop {
            let assignment: BTreeMap<String, u64> = params
                .iter()
                .zip(&idx)
                .zip(&lists)
                .map(|((k, &i), l)| (k.to_string(), l[i]))
                .collect();
            points.push(self.point_from_params(&assignment)?);
            let mut pos = params.len();
            loop {
                if pos == 0 {
                    points.sort();
                    points.dedup();
                    return Ok(points);
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < lists[pos].len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    pub fn default_grid<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> Vec<Point> {
        let values = self
            .kind
            .parameters()
            .iter()
            .map(|k| (k.to_string(), self.default_values(k, samples, rng)))
            .collect();
        self.grid(&values)
            .expect("default values cover every parameter")
    }

    /// Deterministic RNG stream for work at one point.
    pub fn rng_for(&self, point: &Point, purpose: u64) -> rand_chacha::ChaCha8Rng {
        let mut label = vec![self.kind.tag(), self.ell as u64, purpose];
        label.extend(point.params().into_iter().map(|(_, v)| v));
        self.ctx.rng_for(&label)
    }

    /// Err(reason) when the fiber cannot be handled over F_p: a needed l-th root is missing
    /// or a parameter that must be invertible is zero.
    pub fn validity(&self, point: &Point) -> Result<(), FamilyError> {
        self.check_point(point)?;
        let ell = self.ell as u64;
        let need_root = |name: &str, v: u64, nonzero: bool| -> Result<(), FamilyError> {
            let x = self.fp(v);
            if nonzero && x.is_zero() {
                return Err(FamilyError::RootUnavailable(format!(
                    "{name} must be nonzero"
                )));
            }
            if !x.is_nth_power(ell) {
                return Err(FamilyError::RootUnavailable(format!(
                    "{name} = {v} has no {ell}-th root in F_{}",
                    self.p()
                )));
            }
            Ok(())
        };
        match *point {
            Point::Finite { .. } => Ok(()),
            Point::Infinite { u, v, .. } => {
                need_root("u", u, true)?;
                need_root("v", v, true)
            }
            Point::Borel { y, x } => {
                need_root("y", y, true)?;
                need_root("x", x, false)
            }
        }
    }

    fn torus_parameters(&self, point: &Point) -> (Fp, Fp, Fp) {
        let one = self.ctx.one();
        match *point {
            Point::Finite { s } => (self.ctx.eps_pow(s as i64), one, one),
            Point::Infinite { u, v, s } => (self.ctx.eps_pow(s as i64), self.fp(u), self.fp(v)),
            Point::Borel { y, x } => (self.ctx.eps_pow(2), self.fp(x), self.fp(y)),
        }
    }

    /// The l^2-dimensional fiber on the monomials g^i h^j (index i + l j).
    pub fn fiber_algebra(&self, point: &Point) -> Result<StructureAlgebra, AlgebraError> {
        let (q, alpha, beta) = self.torus_parameters(point);
        let names = (
            self.table.generators[0].as_str(),
            self.table.generators[1].as_str(),
        );
        skew_torus(self.ell, q, alpha, beta, names)
    }

    /// Generators as elements of the fiber algebra: g is g^1 h^0, h is g^0 h^1.
    pub fn generator_elements(&self, alg: &StructureAlgebra) -> Vec<Vec<Fp>> {
        vec![alg.basis_vector(1), alg.basis_vector(self.ell)]
    }

    /// The fiber acting on itself by left multiplication.
    pub fn regular_rep(&self, point: &Point, alg: &StructureAlgebra) -> GeneratorRep {
        let gens = self
            .generator_elements(alg)
            .iter()
            .map(|g| alg.left_regular_matrix(g))
            .collect();
        GeneratorRep::new(self.coords(point), gens, self.p()).expect("square regular matrices")
    }

    pub fn fiber_relations(&self, point: &Point) -> Vec<Relation> {
        self.table.fiber_relations(&self.coords(point))
    }

    fn root(&self, name: &str, v: u64) -> Result<Fp, FamilyError> {
        self.fp(v).nth_root(self.ell as u64).ok_or_else(|| {
            FamilyError::RootUnavailable(format!(
                "{name} = {v} has no {}-th root in F_{}",
                self.ell,
                self.p()
            ))
        })
    }

    /// An irreducible module of the fiber from explicit matrices.
    ///
    /// Central extensions: g e_t = r_g e_(t+1), h e_t = r_h eps^(s t) e_t on l / gcd(l, s) vectors,
    /// where r_g, r_h are l-th roots of the g^l, h^l parameters.
    /// Borel: a character when E^l = 0, otherwise K = tau diag(eps^(2r)), E = xi * shift.
    pub fn seed_module(&self, point: &Point) -> Result<GeneratorRep, FamilyError> {
        self.check_point(point)?;
        let p = self.p();
        let coords = self.coords(point);
        let mut rep = match *point {
            Point::Finite { s } => self.torus_module(s, self.ctx.one(), self.ctx.one()),
            Point::Infinite { u, v, s } => {
                self.torus_module(s, self.root("u", u)?, self.root("v", v)?)
            }
            Point::Borel { y, x } => {
                let tau = self.root("y", y)?;
                if x == 0 {
                    GeneratorRep::from_scalars(coords.clone(), &[Fp::zero(p), tau], p)
                } else {
                    let xi = self.root("x", x)?;
                    let q = self.ctx.eps_pow(2);
                    let n = self.ell;
                    let k = DenseMatrix::diagonal(
                        &(0..n).map(|r| tau * q.pow(r as u64)).collect::<Vec<_>>(),
                        p,
                    );
                    let e = shift(n, p).scale(xi);
                    GeneratorRep::new(coords.clone(), vec![e, k], p).expect("square")
                }
            }
        };
        rep.fiber = coords;
        Ok(rep)
    }

    fn torus_module(&self, s: u64, rg: Fp, rh: Fp) -> GeneratorRep {
        let p = self.p();
        let n = self.ell / gcd(self.ell as u64, s) as usize;
        let h = DenseMatrix::diagonal(
            &(0..n)
                .map(|t| rh * self.ctx.eps_pow((s as usize * t) as i64))
                .collect::<Vec<_>>(),
            p,
        );
        GeneratorRep::new(Vec::new(), vec![shift(n, p).scale(rg), h], p).expect("square")
    }

    pub fn expected_report(&self, point: &Point) -> ExpectedReport {
        let ell = self.ell;
        let torus = |s: u64| {
            let d = gcd(ell as u64, s) as usize;
            let n = ell / d;
            ExpectedReport {
                sd: ell * ell,
                level: ell * ell + 1,
                irr_dims: vec![n; d * d],
                irr_count: d * d,
                num_characters: if n == 1 { ell * ell } else { 0 },
                all_max_stable: true,
                in_lowest_stratum: true,
            }
        };
        match *point {
            Point::Finite { s } | Point::Infinite { s, .. } => torus(s),
            Point::Borel { x: 0, .. } => ExpectedReport {
                sd: ell,
                level: ell + 1,
                irr_dims: vec![1; ell],
                irr_count: ell,
                num_characters: ell,
                all_max_stable: true,
                in_lowest_stratum: true,
            },
            Point::Borel { .. } => ExpectedReport {
                sd: ell * ell,
                level: ell * ell + 1,
                irr_dims: vec![ell],
                irr_count: 1,
                num_characters: 0,
                all_max_stable: false,
                in_lowest_stratum: false,
            },
        }
    }

    /// Characters of the whole algebra that generate the winding action on central points:
    /// roots of unity where a generator has finite order, otherwise 1 and a generator of F_p^*.
    pub fn global_character_generators(&self) -> Vec<Character> {
        let p = self.p();
        let t = &self.table;
        let g0 = multiplicative_generator(p);
        let candidates: Vec<Vec<Fp>> = (0..t.generator_count())
            .map(|g| {
                if !t.is_group_like(g) {
                    vec![Fp::zero(p)]
                } else if has_pure_power(&t.base_relations, g) {
                    let chars = t.enumerate_characters(&t.base_relations);
                    let mut vals: Vec<Fp> = chars.iter().map(|c| c.values[g]).collect();
                    vals.sort();
                    vals.dedup();
                    vals
                } else {
                    vec![Fp::one(p), g0]
                }
            })
            .collect();
        let mut out = Vec::new();
        product_of(&candidates, &mut Vec::new(), &mut |vals| {
            let chi = Character {
                values: vals.to_vec(),
            };
            if t.satisfies(&chi, &t.base_relations) {
                out.push(chi);
            }
        });
        out.sort();
        out
    }
}

fn has_pure_power(relations: &[Relation], g: usize) -> bool {
    relations.iter().any(|r| match r.poly.terms() {
        [a, b] => {
            let pow = if a.is_scalar() { b } else { a };
            (a.is_scalar() || b.is_scalar())
                && matches!(pow.factors.as_slice(), [(h, k)] if *h == g && *k > 0)
        }
        _ => false,
    })
}

fn product_of(cands: &[Vec<Fp>], current: &mut Vec<Fp>, visit: &mut impl FnMut(&[Fp])) {
    if current.len() == cands.len() {
        visit(current);
        return;
    }
    for &v in &cands[current.len()] {
        current.push(v);
        product_of(cands, current, visit);
        current.pop();
    }
}

/// e_t -> e_(t+1 mod n).
fn shift(n: usize, p: u64) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, p, |i, j| Fp::new((i == (j + 1) % n) as u64, p))
}

/// h g h^-1 g^-1 on generators 0 = g, 1 = h.
fn commutator(p: u64) -> Word {
    Word::from_factors(Fp::one(p), &[(1, 1), (0, 1), (1, -1), (0, -1)])
}

fn central_ext_table(
    ctx: &PrimeFieldContext,
    ell: usize,
    names: [&str; 2],
    finite: bool,
) -> HopfSymbolTable {
    let p = ctx.p;
    let one = Word::one(p);
    let c = commutator(p);
    let l = ell as i32;
    let mut base = Vec::new();
    if finite {
        for (g, name) in names.iter().enumerate() {
            base.push(Relation::new(
                format!("{name}^{ell} = 1"),
                WordSum::difference(Word::power(g, l, p), one.clone()),
            ));
        }
    }
    for (g, name) in names.iter().enumerate() {
        let gw = Word::gen(g, p);
        base.push(Relation::new(
            format!("c {name} = {name} c"),
            WordSum::difference(c.mul(&gw), gw.mul(&c)),
        ));
    }
    let c_pow = (1..ell).fold(c.clone(), |acc, _| acc.mul(&c));
    base.push(Relation::new(
        format!("c^{ell} = 1"),
        WordSum::difference(c_pow, one),
    ));

    let mut central = Vec::new();
    if !finite {
        central.push((format!("{}^{ell}", names[0]), Word::power(0, l, p)));
        central.push((format!("{}^{ell}", names[1]), Word::power(1, l, p)));
    }
    central.push(("c".to_string(), c));

    HopfSymbolTable {
        generators: names.iter().map(|s| s.to_string()).collect(),
        invertible: vec![true, true],
        coproduct: (0..2)
            .map(|g| vec![(Word::gen(g, p), Word::gen(g, p))])
            .collect(),
        counit: vec![Fp::one(p); 2],
        antipode: (0..2)
            .map(|g| WordSum::word(Word::power(g, -1, p)))
            .collect(),
        base_relations: base,
        central_words: central,
        modulus: p,
    }
}

/// Generators E (index 0) and K (index 1) with K E = eps^2 E K.
fn borel_table(ctx: &PrimeFieldContext, ell: usize) -> HopfSymbolTable {
    let p = ctx.p;
    let one = Word::one(p);
    let e = Word::gen(0, p);
    let k = Word::gen(1, p);
    let q = ctx.eps_pow(2);
    let l = ell as i32;
    HopfSymbolTable {
        generators: vec!["E".into(), "K".into()],
        invertible: vec![false, true],
        coproduct: vec![
            vec![(e.clone(), one.clone()), (k.clone(), e.clone())],
            vec![(k.clone(), k.clone())],
        ],
        counit: vec![Fp::zero(p), Fp::one(p)],
        antipode: vec![
            WordSum::word(Word::from_factors(-Fp::one(p), &[(1, -1), (0, 1)])),
            WordSum::word(Word::power(1, -1, p)),
        ],
        base_relations: vec![Relation::new(
            "K E = q E K",
            WordSum::difference(k.mul(&e), e.mul(&k).scaled(q)),
        )],
        central_words: vec![
            (format!("K^{ell}"), Word::power(1, l, p)),
            (format!("E^{ell}"), Word::power(0, l, p)),
        ],
        modulus: p,
    }
}

/// a^l = b^l = 1, b a = eps a b: a single matrix block of size l.
pub fn quantum_torus(ell: usize, ctx: &PrimeFieldContext) -> Result<StructureAlgebra, FamilyError> {
    if ell == 0 || !ctx.m.is_multiple_of(ell as u64) {
        return Err(FamilyError::ContextMismatch(format!(
            "l = {ell} must divide the root order {}",
            ctx.m
        )));
    }
    let q = ctx.eps_pow((ctx.m / ell as u64) as i64);
    let one = ctx.one();
    skew_torus(ell, q, one, one, ("a", "b"))
        .map_err(|e| FamilyError::ContextMismatch(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repmod::{check_relations, is_irreducible};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn family(kind: FamilyKind, ell: usize) -> FiberFamily {
        FiberFamily::with_default_context(kind, ell, 7).unwrap()
    }

    #[test]
    fn default_primes() {
        assert_eq!(family(FamilyKind::CentralExtFinite, 3).ctx.p, 97);
        assert_eq!(family(FamilyKind::CentralExtFinite, 6).ctx.p, 1297);
        assert_eq!(family(FamilyKind::QuantumBorelRank1, 5).ctx.p, 631);
    }

    #[test]
    fn constructor_validation() {
        assert_eq!(
            FiberFamily::with_default_context(FamilyKind::QuantumBorelRank1, 4, 0),
            Err(FamilyError::EvenOrder(4))
        );
        assert_eq!(
            FiberFamily::with_default_context(FamilyKind::CentralExtFinite, 1, 0),
            Err(FamilyError::OrderTooSmall(1))
        );
        let ctx = PrimeFieldContext::with_prime(7, 3, 0).unwrap();
        assert!(matches!(
            FiberFamily::new(FamilyKind::CentralExtFinite, 3, ctx),
            Err(FamilyError::ContextMismatch(_))
        ));
    }

    #[test]
    fn hopf_tables_satisfy_axioms() {
        for kind in FamilyKind::ALL {
            family(kind, 3).table.check_axioms().unwrap();
        }
    }

    #[test]
    fn seeds_satisfy_relations_and_are_irreducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for (kind, ell) in [
            (FamilyKind::CentralExtFinite, 4),
            (FamilyKind::CentralExtInfinite, 3),
            (FamilyKind::QuantumBorelRank1, 3),
        ] {
            let fam = family(kind, ell);
            let mut checked = 0;
            for point in fam.default_grid(4, &mut rng) {
                if fam.validity(&point).is_err() {
                    assert!(
                        fam.seed_module(&point).is_err() || kind == FamilyKind::QuantumBorelRank1
                    );
                    continue;
                }
                let seed = fam.seed_module(&point).unwrap();
                check_relations(&seed, &fam.fiber_relations(&point), 2).unwrap();
                assert!(is_irreducible(&seed), "{kind} {point}");
                let alg = fam.fiber_algebra(&point).unwrap();
                check_relations(
                    &fam.regular_rep(&point, &alg),
                    &fam.fiber_relations(&point),
                    2,
                )
                .unwrap();
                assert_eq!(seed.dim(), fam.expected_report(&point).irr_dims[0]);
                checked += 1;
            }
            assert!(checked > 0);
        }
    }

    #[test]
    fn finite_rep_for_four_two() {
        let fam = family(FamilyKind::CentralExtFinite, 4);
        let v = fam.seed_module(&Point::Finite { s: 2 }).unwrap();
        let p = fam.ctx.p;
        assert_eq!(
            v.gens()[0],
            DenseMatrix::from_u64_rows(&[&[0, 1], &[1, 0]], p)
        );
        assert_eq!(
            v.gens()[1],
            DenseMatrix::diagonal(&[Fp::one(p), -Fp::one(p)], p)
        );
    }

    #[test]
    fn expected_reports() {
        let f6 = family(FamilyKind::CentralExtFinite, 6);
        let r = f6.expected_report(&Point::Finite { s: 4 });
        assert_eq!((r.sd, r.level, r.irr_count), (36, 37, 4));
        assert_eq!(r.irr_dims, vec![3; 4]);
        let b = family(FamilyKind::QuantumBorelRank1, 3);
        assert_eq!(b.expected_report(&Point::Borel { y: 1, x: 0 }).level, 4);
        let generic = b.expected_report(&Point::Borel { y: 1, x: 5 });
        assert_eq!(
            (
                generic.level,
                generic.all_max_stable,
                generic.in_lowest_stratum
            ),
            (10, false, false)
        );
    }

    #[test]
    fn fibers_match_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let fam = family(FamilyKind::CentralExtFinite, 4);
        let rep = fam
            .fiber_algebra(&Point::Finite { s: 2 })
            .unwrap()
            .wedderburn_blocks(&mut rng)
            .unwrap();
        assert_eq!(rep.irreducible_dims, vec![2, 2, 2, 2]);
        let b = family(FamilyKind::QuantumBorelRank1, 3);
        let id = b.fiber_algebra(&Point::Borel { y: 1, x: 0 }).unwrap();
        assert_eq!(id.radical().unwrap().len(), 6);
        let rep = b
            .fiber_algebra(&Point::Borel { y: 1, x: 1 })
            .unwrap()
            .wedderburn_blocks(&mut rng)
            .unwrap();
        assert_eq!(rep.irreducible_dims, vec![3]);
    }

    #[test]
    fn identity_characters() {
        let fam = family(FamilyKind::CentralExtFinite, 3);
        let id = fam.identity_point();
        assert_eq!(
            fam.table
                .enumerate_characters(&fam.fiber_relations(&id))
                .len(),
            9
        );
        assert!(fam
            .table
            .enumerate_characters(&fam.fiber_relations(&Point::Finite { s: 1 }))
            .is_empty());
    }

    #[test]
    fn global_generators() {
        assert_eq!(
            family(FamilyKind::CentralExtFinite, 3)
                .global_character_generators()
                .len(),
            9
        );
        assert_eq!(
            family(FamilyKind::CentralExtInfinite, 3)
                .global_character_generators()
                .len(),
            4
        );
        let b = family(FamilyKind::QuantumBorelRank1, 3).global_character_generators();
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|c| c.values[0].is_zero()));
    }

    #[test]
    fn quantum_tori_are_matrix_algebras() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for ell in [1usize, 2, 5] {
            let m = ell.max(2) as u64;
            let ctx = PrimeFieldContext::new(m, (ell * ell) as u64 + 1, 0).unwrap();
            let alg = quantum_torus(ell, &ctx).unwrap();
            assert_eq!(
                alg.wedderburn_blocks(&mut rng).unwrap().irreducible_dims,
                vec![ell]
            );
        }
    }

    #[test]
    fn points_round_trip() {
        let fam = family(FamilyKind::CentralExtInfinite, 3);
        let pt = Point::Infinite { u: 8, v: 27, s: 2 };
        assert_eq!(fam.point_from_coords(&fam.coords(&pt)), Some(pt));
        assert_eq!(
            "central_ext_finite".parse::<FamilyKind>(),
            Ok(FamilyKind::CentralExtFinite)
        );
        let mut params = BTreeMap::new();
        params.insert("w".to_string(), 1);
        assert!(matches!(
            fam.point_from_params(&params),
            Err(FamilyError::UnknownParameter(_))
        ));
    }
}
