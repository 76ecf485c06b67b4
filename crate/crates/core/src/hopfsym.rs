// SPDX-License-Identifier: Apache-2.0

//! Generator-level Hopf data: coproduct, counit, antipode, characters and
//! their convolution, winding automorphisms with their action on central
//! parameters, stabilizers of modules under twisting, and the cocycles and
//! twisted group algebras carried by maximally stable modules.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{twisted_group_algebra, AlgebraError, BlockReport};
use crate::field::Fp;
use crate::matrix::DenseMatrix;
use crate::par::{map_collect, Execution};
use crate::presentation::{GeneratorMatrices, PresentationError, Relation, Word, WordSum};
use crate::repmod::{self, GeneratorRep, RepError};

/// Orbits larger than this are refused rather than enumerated.
pub const ORBIT_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HopfError {
    #[error("Hopf axiom fails: {0}")]
    Axiom(String),
    #[error("winding image of `{0}` is not a rescaling of it")]
    NonDiagonalCentral(String),
    #[error("winding map does not preserve relation `{0}`")]
    WindingNotAutomorphism(String),
    #[error("character is not invertible")]
    SingularCharacter,
    #[error("orbit exceeds {0} points")]
    OrbitTooLarge(usize),
    #[error("stabilizer is not closed under the group law")]
    StabilizerNotSubgroup,
    #[error("stabilizer of order {order} exceeds dim^2 = {bound}")]
    StabilizerBound { order: usize, bound: usize },
    #[error("L_chi L_theta is not proportional to L_(chi theta) at pair ({0}, {1})")]
    WitnessInconsistency(usize, usize),
    #[error("stabilizer witnesses are linearly dependent")]
    WitnessesDependent,
    #[error("cocycle is not normalized at element {0}")]
    Normalization(usize),
    #[error("cocycle identity fails on triple ({0}, {1}, {2})")]
    CocycleIdentity(usize, usize, usize),
    #[error("primitive quotient check failed: {0}")]
    PrimitiveQuotient(String),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// An algebra map to F_p, by its values on the generators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Character {
    pub values: Vec<Fp>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfSymbolTable {
    pub generators: Vec<String>,
    pub invertible: Vec<bool>,
    /// Per generator, Delta(g) = sum of left (x) right.
    pub coproduct: Vec<Vec<(Word, Word)>>,
    pub counit: Vec<Fp>,
    pub antipode: Vec<WordSum>,
    /// Relations of the whole algebra, before fixing central parameters.
    pub base_relations: Vec<Relation>,
    /// Words generating the central subalgebra; a fiber fixes their values.
    pub central_words: Vec<(String, Word)>,
    pub modulus: u64,
}

/// Generator images of a winding automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Winding {
    pub images: Vec<WordSum>,
}

impl Winding {
    pub fn identity(table: &HopfSymbolTable) -> Self {
        Winding {
            images: (0..table.generators.len())
                .map(|g| WordSum::word(Word::gen(g, table.modulus)))
                .collect(),
        }
    }

    /// x -> self(other(x)).
    pub fn after(&self, other: &Winding) -> Result<Winding, HopfError> {
        Ok(Winding {
            images: other
                .images
                .iter()
                .map(|img| img.substitute(&self.images))
                .collect::<Result<_, _>>()?,
        })
    }
}

impl HopfSymbolTable {
    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn central_word_list(&self) -> Vec<Word> {
        self.central_words.iter().map(|(_, w)| w.clone()).collect()
    }

    pub fn is_group_like(&self, g: usize) -> bool {
        let w = Word::gen(g, self.modulus);
        self.coproduct[g] == [(w.clone(), w)]
    }

    /// Base relations plus `z_i - coords[i]` for each central word.
    pub fn fiber_relations(&self, coords: &[Fp]) -> Vec<Relation> {
        let mut rels = self.base_relations.clone();
        for ((label, z), &c) in self.central_words.iter().zip(coords) {
            rels.push(Relation::new(
                format!("{label} = {c}"),
                WordSum::difference(z.clone(), Word::scalar(c)),
            ));
        }
        rels
    }

    pub fn render(&self, w: &WordSum) -> String {
        w.render(&self.generators)
    }

    /// Counit kills the relations; counit and antipode axioms hold on each generator.
    pub fn check_axioms(&self) -> Result<(), HopfError> {
        for r in &self.base_relations {
            if r.poly.eval_scalars(&self.counit) != Some(Fp::zero(self.modulus)) {
                return Err(HopfError::Axiom(format!(
                    "counit does not kill `{}`",
                    r.label
                )));
            }
        }
        for g in 0..self.generator_count() {
            let gen = WordSum::word(Word::gen(g, self.modulus));
            let name = &self.generators[g];
            let eps = |w: &Word| {
                w.eval_scalars(&self.counit)
                    .ok_or(HopfError::SingularCharacter)
            };
            let mut left = Vec::new();
            let mut right = Vec::new();
            let mut s_left = WordSum::zero();
            let mut s_right = WordSum::zero();
            let antipode = |w: &Word| WordSum::word(w.clone()).substitute(&self.antipode);
            for (l, r) in &self.coproduct[g] {
                left.push(r.scaled(eps(l)?));
                right.push(l.scaled(eps(r)?));
                s_left = s_left.add(&antipode(l)?.mul(&WordSum::word(r.clone())));
                s_right = s_right.add(&WordSum::word(l.clone()).mul(&antipode(r)?));
            }
            if WordSum::new(left) != gen || WordSum::new(right) != gen {
                return Err(HopfError::Axiom(format!("counit axiom fails on {name}")));
            }
            let expected = WordSum::word(Word::scalar(self.counit[g]));
            if s_left != expected || s_right != expected {
                return Err(HopfError::Axiom(format!("antipode axiom fails on {name}")));
            }
        }
        Ok(())
    }

    pub fn counit_character(&self) -> Character {
        Character {
            values: self.counit.clone(),
        }
    }

    pub fn satisfies(&self, chi: &Character, relations: &[Relation]) -> bool {
        let zero = Fp::zero(self.modulus);
        relations
            .iter()
            .all(|r| r.poly.eval_scalars(&chi.values) == Some(zero))
    }

    /// Candidate values per generator, then every combination that satisfies `relations`.
    ///
    /// Non-group-like generators map to 0. A group-like generator ranges over the roots of a
    /// relation g^k = lambda when one is present, otherwise over all of F_p^*.
    pub fn enumerate_characters(&self, relations: &[Relation]) -> Vec<Character> {
        let p = self.modulus;
        let candidates: Vec<Vec<Fp>> = (0..self.generator_count())
            .map(|g| {
                if !self.is_group_like(g) {
                    return vec![Fp::zero(p)];
                }
                let mut vals = match pure_power(relations, g) {
                    Some((k, lambda)) => lambda.nth_roots(k as u64),
                    None => (1..p).map(|v| Fp::new(v, p)).collect(),
                };
                if self.invertible[g] {
                    vals.retain(|v| !v.is_zero());
                }
                vals
            })
            .collect();
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(candidates.len());
        cartesian(&candidates, &mut current, &mut |values| {
            let chi = Character {
                values: values.to_vec(),
            };
            if self.satisfies(&chi, relations) {
                out.push(chi);
            }
        });
        out.sort();
        out
    }

    /// Convolution: (chi theta)(g) = sum chi(left) theta(right) over Delta(g).
    pub fn product(&self, chi: &Character, theta: &Character) -> Result<Character, HopfError> {
        let p = self.modulus;
        let values = self
            .coproduct
            .iter()
            .map(|terms| {
                terms.iter().try_fold(Fp::zero(p), |acc, (l, r)| {
                    let a = l
                        .eval_scalars(&chi.values)
                        .ok_or(HopfError::SingularCharacter)?;
                    let b = r
                        .eval_scalars(&theta.values)
                        .ok_or(HopfError::SingularCharacter)?;
                    Ok(acc + a * b)
                })
            })
            .collect::<Result<_, HopfError>>()?;
        Ok(Character { values })
    }

    /// chi composed with the antipode.
    pub fn inverse(&self, chi: &Character) -> Result<Character, HopfError> {
        let values = self
            .antipode
            .iter()
            .map(|s| {
                s.eval_scalars(&chi.values)
                    .ok_or(HopfError::SingularCharacter)
            })
            .collect::<Result<_, _>>()?;
        Ok(Character { values })
    }

    /// Left: g -> sum chi(left) right. Right: g -> sum chi(right) left.
    pub fn winding(&self, chi: &Character, side: Side) -> Result<Winding, HopfError> {
        let images = self
            .coproduct
            .iter()
            .map(|terms| {
                let parts = terms
                    .iter()
                    .map(|(l, r)| {
                        let (scalar_of, keep) = match side {
                            Side::Left => (l, r),
                            Side::Right => (r, l),
                        };
                        let c = scalar_of
                            .eval_scalars(&chi.values)
                            .ok_or(HopfError::SingularCharacter)?;
                        Ok(keep.scaled(c))
                    })
                    .collect::<Result<Vec<_>, HopfError>>()?;
                Ok(WordSum::new(parts))
            })
            .collect::<Result<_, HopfError>>()?;
        Ok(Winding { images })
    }

    /// lambda_z with W(z) = lambda_z z for each central word z.
    pub fn central_rescaling(&self, winding: &Winding) -> Result<Vec<Fp>, HopfError> {
        self.central_words
            .iter()
            .map(|(label, z)| {
                let image = WordSum::word(z.clone()).substitute(&winding.images)?;
                match image.as_word() {
                    Some(w) if w.factors == z.factors => Ok(w.coeff / z.coeff),
                    None if image.is_zero() => Err(HopfError::NonDiagonalCentral(label.clone())),
                    _ => Err(HopfError::NonDiagonalCentral(label.clone())),
                }
            })
            .collect()
    }

    /// W(z - c) = lambda (z - c / lambda): the fiber at c moves to c / lambda.
    pub fn act_on_point(
        &self,
        chi: &Character,
        side: Side,
        coords: &[Fp],
    ) -> Result<Vec<Fp>, HopfError> {
        let scale = self.central_rescaling(&self.winding(chi, side)?)?;
        Ok(coords.iter().zip(scale).map(|(&c, l)| c / l).collect())
    }

    /// Closure of `start` under the winding maps of `generators`.
    pub fn orbit_on_central_points(
        &self,
        generators: &[Character],
        side: Side,
        start: &[Fp],
    ) -> Result<BTreeSet<Vec<Fp>>, HopfError> {
        let scales = generators
            .iter()
            .map(|chi| self.central_rescaling(&self.winding(chi, side)?))
            .collect::<Result<Vec<_>, _>>()?;
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.to_vec());
        queue.push_back(start.to_vec());
        while let Some(point) = queue.pop_front() {
            for scale in &scales {
                let next: Vec<Fp> = point.iter().zip(scale).map(|(&c, &l)| c / l).collect();
                if seen.insert(next.clone()) {
                    if seen.len() > ORBIT_LIMIT {
                        return Err(HopfError::OrbitTooLarge(ORBIT_LIMIT));
                    }
                    queue.push_back(next);
                }
            }
        }
        Ok(seen)
    }

    /// The winding map takes the fiber at `source` onto the fiber carried by `target`:
    /// the images of the generators, acting on `target`, satisfy every relation at `source`.
    pub fn check_winding_automorphism(
        &self,
        winding: &Winding,
        source: &[Fp],
        target: &GeneratorRep,
    ) -> Result<(), HopfError> {
        let mats = target.matrices()?;
        let images = winding
            .images
            .iter()
            .map(|w| w.eval_matrices(&mats))
            .collect::<Result<Vec<_>, _>>()?;
        let image_mats = GeneratorMatrices::new(&images, self.modulus)?;
        for r in self.fiber_relations(source) {
            let ok = r
                .poly
                .eval_matrices(&image_mats)
                .map(|m| m.is_zero())
                .unwrap_or(false);
            if !ok {
                return Err(HopfError::WindingNotAutomorphism(r.label));
            }
        }
        Ok(())
    }

    /// chi (x) V, realised as V precomposed with the left winding of chi.
    pub fn twist(&self, chi: &Character, v: &GeneratorRep) -> Result<GeneratorRep, HopfError> {
        let w = self.winding(chi, Side::Left)?;
        Ok(repmod::precompose(v, &w.images, &self.central_word_list())?)
    }

    pub fn dual(&self, v: &GeneratorRep) -> Result<GeneratorRep, HopfError> {
        Ok(repmod::dual(v, &self.antipode, &self.central_word_list())?)
    }

    pub fn tensor(&self, v: &GeneratorRep, w: &GeneratorRep) -> Result<GeneratorRep, HopfError> {
        Ok(repmod::tensor(
            v,
            w,
            &self.coproduct,
            &self.central_word_list(),
        )?)
    }

    pub fn character_module(&self, chi: &Character) -> Result<GeneratorRep, HopfError> {
        let mut rep = GeneratorRep::from_scalars(Vec::new(), &chi.values, self.modulus);
        rep.fiber = rep.central_values(&self.central_word_list())?;
        Ok(rep)
    }

    /// The members of `g0` that fix V under twisting, with normalized intertwiners V -> chi (x) V.
    pub fn stabilizer(
        &self,
        v: &GeneratorRep,
        g0: &[Character],
        mode: Execution,
    ) -> Result<Stabilizer, HopfError> {
        let found = map_collect(
            mode,
            g0,
            |chi| -> Result<Option<(Character, DenseMatrix)>, HopfError> {
                let twisted = self.twist(chi, v)?;
                Ok(repmod::isomorphism(v, &twisted)?.map(|x| (chi.clone(), normalize_witness(&x))))
            },
        );
        let mut members = Vec::new();
        let mut witnesses = Vec::new();
        for r in found {
            if let Some((chi, x)) = r? {
                members.push(chi);
                witnesses.push(x);
            }
        }
        let stab = Stabilizer { members, witnesses };
        let set: BTreeSet<&Character> = stab.members.iter().collect();
        for a in &stab.members {
            if !set.contains(&self.inverse(a)?) {
                return Err(HopfError::StabilizerNotSubgroup);
            }
            for b in &stab.members {
                if !set.contains(&self.product(a, b)?) {
                    return Err(HopfError::StabilizerNotSubgroup);
                }
            }
        }
        Ok(stab)
    }

    /// gamma(chi, theta) from L_chi L_theta = gamma L_(chi theta), checked as a normalized cocycle.
    pub fn extract_cocycle(&self, stab: &Stabilizer) -> Result<CocycleTable, HopfError> {
        let n = stab.members.len();
        let index: BTreeMap<&Character, usize> = stab
            .members
            .iter()
            .enumerate()
            .map(|(i, c)| (c, i))
            .collect();
        let identity = *index
            .get(&self.counit_character())
            .ok_or(HopfError::StabilizerNotSubgroup)?;
        let mut mul = vec![vec![0; n]; n];
        let mut gamma = vec![vec![Fp::zero(self.modulus); n]; n];
        for i in 0..n {
            for j in 0..n {
                let prod = self.product(&stab.members[i], &stab.members[j])?;
                let k = *index.get(&prod).ok_or(HopfError::StabilizerNotSubgroup)?;
                mul[i][j] = k;
                let lhs = &stab.witnesses[i] * &stab.witnesses[j];
                gamma[i][j] = proportionality(&lhs, &stab.witnesses[k])
                    .ok_or(HopfError::WitnessInconsistency(i, j))?;
            }
        }
        let table = CocycleTable {
            members: stab.members.clone(),
            identity,
            mul,
            gamma,
        };
        table.check()?;
        if witness_rank(&stab.witnesses, self.modulus) != n {
            return Err(HopfError::WitnessesDependent);
        }
        Ok(table)
    }

    /// For each chi in G0, the multiplicity of chi in V (x) V*.
    pub fn tensor_character_multiplicities(
        &self,
        v: &GeneratorRep,
        g0: &[Character],
        stab: &Stabilizer,
        mode: Execution,
    ) -> Result<MultiplicityReport, HopfError> {
        let vv = self.tensor(v, &self.dual(v)?)?;
        let counts = map_collect(mode, g0, |chi| -> Result<usize, HopfError> {
            let line = self.character_module(chi)?;
            Ok(repmod::hom_space(&line, &vv)?.dim())
        });
        let counts: Vec<usize> = counts.into_iter().collect::<Result<_, _>>()?;
        let stab_set: BTreeSet<&Character> = stab.members.iter().collect();
        let support_equals_stabilizer = g0
            .iter()
            .zip(&counts)
            .all(|(chi, &m)| (m >= 1) == stab_set.contains(chi));
        let total: usize = counts.iter().sum();
        let dim = v.dim();
        let maximally_stable = stab.members.len() == dim * dim;
        let indicator_exact = counts
            .iter()
            .zip(g0)
            .all(|(&m, chi)| m == usize::from(stab_set.contains(chi)));
        Ok(MultiplicityReport {
            multiplicities: g0.iter().cloned().zip(counts).collect(),
            total,
            support_equals_stabilizer,
            indicator_exact,
            consistent: support_equals_stabilizer
                && (!maximally_stable || (indicator_exact && total == dim * dim)),
        })
    }
}

fn pure_power(relations: &[Relation], g: usize) -> Option<(u32, Fp)> {
    relations.iter().find_map(|r| match r.poly.terms() {
        [a, b] => {
            let (pow, scalar) = if a.is_scalar() { (b, a) } else { (a, b) };
            match (pow.factors.as_slice(), scalar.is_scalar()) {
                ([(h, k)], true) if *h == g && *k > 0 => {
                    Some((*k as u32, -scalar.coeff / pow.coeff))
                }
                _ => None,
            }
        }
        _ => None,
    })
}

fn cartesian(cands: &[Vec<Fp>], current: &mut Vec<Fp>, visit: &mut impl FnMut(&[Fp])) {
    if current.len() == cands.len() {
        visit(current);
        return;
    }
    for &v in &cands[current.len()] {
        current.push(v);
        cartesian(cands, current, visit);
        current.pop();
    }
}

/// Scale so the first nonzero entry in row-major order is 1.
pub fn normalize_witness(x: &DenseMatrix) -> DenseMatrix {
    match x.entries().iter().find(|e| !e.is_zero()) {
        Some(&lead) => x.scale(lead.inv().expect("nonzero")),
        None => x.clone(),
    }
}

/// c with a = c b, when b is nonzero.
fn proportionality(a: &DenseMatrix, b: &DenseMatrix) -> Option<Fp> {
    let pos = b.entries().iter().position(|e| !e.is_zero())?;
    let c = a.entries()[pos] / b.entries()[pos];
    (a == &b.scale(c)).then_some(c)
}

fn witness_rank(ws: &[DenseMatrix], modulus: u64) -> usize {
    if ws.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<Fp>> = ws.iter().map(|w| w.entries().to_vec()).collect();
    DenseMatrix::from_rows(&rows, modulus).rank()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stabilizer {
    pub members: Vec<Character>,
    /// witnesses[i] intertwines V with members[i] (x) V.
    pub witnesses: Vec<DenseMatrix>,
}

impl Stabilizer {
    pub fn order(&self) -> usize {
        self.members.len()
    }
}

/// |Stab| <= dim^2 always; equality is maximal stability.
pub fn is_maximally_stable(stabilizer_order: usize, dim: usize) -> Result<bool, HopfError> {
    let bound = dim * dim;
    if stabilizer_order > bound {
        return Err(HopfError::StabilizerBound {
            order: stabilizer_order,
            bound,
        });
    }
    Ok(stabilizer_order == bound)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CocycleTable {
    pub members: Vec<Character>,
    pub identity: usize,
    pub mul: Vec<Vec<usize>>,
    pub gamma: Vec<Vec<Fp>>,
}

impl CocycleTable {
    pub fn check(&self) -> Result<(), HopfError> {
        let n = self.members.len();
        let e = self.identity;
        for g in 0..n {
            if !self.gamma[e][g].is_one() || !self.gamma[g][e].is_one() {
                return Err(HopfError::Normalization(g));
            }
        }
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    let lhs = self.gamma[g][h] * self.gamma[self.mul[g][h]][k];
                    let rhs = self.gamma[h][k] * self.gamma[g][self.mul[h][k]];
                    if lhs != rhs {
                        return Err(HopfError::CocycleIdentity(g, h, k));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimitiveQuotient {
    pub algebra_dim: usize,
    pub blocks: BlockReport,
}

/// k_gamma Stab maps onto End(V) through chi -> L_chi and is a single block of size dim V.
pub fn verify_primitive_quotient<R: Rng + ?Sized>(
    table: &CocycleTable,
    witnesses: &[DenseMatrix],
    module_dim: usize,
    rng: &mut R,
) -> Result<PrimitiveQuotient, HopfError> {
    table.check()?;
    let n = table.members.len();
    let modulus = witnesses
        .first()
        .map(|w| w.modulus())
        .ok_or_else(|| HopfError::PrimitiveQuotient("empty stabilizer".into()))?;
    let labels = (0..n).map(|i| format!("u{i}")).collect();
    let alg = twisted_group_algebra(labels, &table.mul, table.identity, &table.gamma)?;
    for i in 0..n {
        for j in 0..n {
            let lhs = &witnesses[i] * &witnesses[j];
            if lhs != witnesses[table.mul[i][j]].scale(table.gamma[i][j]) {
                return Err(HopfError::PrimitiveQuotient(format!(
                    "not an algebra map at ({i}, {j})"
                )));
            }
        }
    }
    if witness_rank(witnesses, modulus) != n {
        return Err(HopfError::PrimitiveQuotient(
            "map to End(V) is not injective".into(),
        ));
    }
    if n != module_dim * module_dim {
        return Err(HopfError::PrimitiveQuotient(format!(
            "|Stab| = {n} differs from dim(V)^2 = {}",
            module_dim * module_dim
        )));
    }
    let blocks = alg.wedderburn_blocks(rng)?;
    if blocks.irreducible_dims != [module_dim] {
        return Err(HopfError::PrimitiveQuotient(format!(
            "blocks {:?}, expected a single block of size {module_dim}",
            blocks.irreducible_dims
        )));
    }
    Ok(PrimitiveQuotient {
        algebra_dim: alg.dim(),
        blocks,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityReport {
    pub multiplicities: Vec<(Character, usize)>,
    pub total: usize,
    /// Multiplicity is positive exactly on the stabilizer.
    pub support_equals_stabilizer: bool,
    /// Multiplicities are the indicator function of the stabilizer.
    pub indicator_exact: bool,
    pub consistent: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::primitive_root_of_unity;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const P: u64 = 13;

    fn f(x: i64) -> Fp {
        Fp::from_i64(x, P)
    }

    fn chi(vals: &[i64]) -> Character {
        Character {
            values: vals.iter().map(|&v| f(v)).collect(),
        }
    }

    /// E, K with K^3 central, E^3 central, K E = q E K.
    fn borel(q: Fp) -> HopfSymbolTable {
        let one = Word::one(P);
        let e = Word::gen(0, P);
        let k = Word::gen(1, P);
        HopfSymbolTable {
            generators: vec!["E".into(), "K".into()],
            invertible: vec![false, true],
            coproduct: vec![
                vec![(e.clone(), one.clone()), (k.clone(), e.clone())],
                vec![(k.clone(), k.clone())],
            ],
            counit: vec![f(0), f(1)],
            antipode: vec![
                WordSum::word(Word::from_factors(f(-1), &[(1, -1), (0, 1)])),
                WordSum::word(Word::power(1, -1, P)),
            ],
            base_relations: vec![Relation::new(
                "KE = q EK",
                WordSum::difference(
                    Word::from_factors(f(1), &[(1, 1), (0, 1)]),
                    Word::from_factors(q, &[(0, 1), (1, 1)]),
                ),
            )],
            central_words: vec![
                ("K^3".into(), Word::power(1, 3, P)),
                ("E^3".into(), Word::power(0, 3, P)),
            ],
            modulus: P,
        }
    }

    fn eps() -> Fp {
        primitive_root_of_unity(P, 3).unwrap()
    }

    #[test]
    fn borel_axioms_hold() {
        let t = borel(eps() * eps());
        t.check_axioms().unwrap();
        let mut broken = t.clone();
        broken.coproduct[0] = vec![
            (Word::gen(0, P), Word::one(P)),
            (Word::one(P), Word::gen(0, P)),
        ];
        broken.antipode[0] = WordSum::word(Word::gen(0, P).scaled(f(-1)));
        assert!(
            broken.check_axioms().is_ok(),
            "primitive E is also a valid Hopf structure"
        );
        broken.counit[1] = f(2);
        assert!(matches!(broken.check_axioms(), Err(HopfError::Axiom(_))));
    }

    #[test]
    fn borel_identity_fiber_characters() {
        let t = borel(eps() * eps());
        let g0 = t.enumerate_characters(&t.fiber_relations(&[f(1), f(0)]));
        assert_eq!(g0.len(), 3);
        assert!(g0.iter().all(|c| c.values[0].is_zero()));
        let ks: BTreeSet<Fp> = g0.iter().map(|c| c.values[1]).collect();
        assert_eq!(ks, [f(1), eps(), eps() * eps()].into_iter().collect());
        // E^3 = 1 leaves no characters
        assert!(t
            .enumerate_characters(&t.fiber_relations(&[f(1), f(1)]))
            .is_empty());
    }

    #[test]
    fn convolution_and_inverse() {
        let t = borel(eps() * eps());
        let a = chi(&[0, 3]);
        let b = chi(&[0, 5]);
        assert_eq!(t.product(&a, &b).unwrap(), chi(&[0, 15]));
        assert_eq!(
            t.product(&a, &t.inverse(&a).unwrap()).unwrap(),
            t.counit_character()
        );
    }

    #[test]
    fn windings_on_borel() {
        let t = borel(eps() * eps());
        let c = chi(&[0, 4]);
        let l = t.winding(&c, Side::Left).unwrap();
        assert_eq!(l.images[0], WordSum::word(Word::gen(0, P).scaled(f(4))));
        assert_eq!(l.images[1], WordSum::word(Word::gen(1, P).scaled(f(4))));
        let r = t.winding(&c, Side::Right).unwrap();
        assert_eq!(r.images[0], WordSum::word(Word::gen(0, P)));
        // K^3 -> 64 K^3, so the point (y, x) moves to (y / 64, x / 64)
        assert_eq!(t.central_rescaling(&l).unwrap(), vec![f(64), f(64)]);
        assert_eq!(
            t.act_on_point(&c, Side::Left, &[f(1), f(0)]).unwrap(),
            vec![f(64).inv().unwrap(), f(0)]
        );
        // W_l is an antihomomorphism and W_l(chi^-1) inverts W_l(chi)
        let d = chi(&[0, 7]);
        let lhs = t.winding(&t.product(&c, &d).unwrap(), Side::Left).unwrap();
        let rhs = t.winding(&d, Side::Left).unwrap().after(&l).unwrap();
        assert_eq!(lhs, rhs);
        let inv = t.winding(&t.inverse(&c).unwrap(), Side::Left).unwrap();
        assert_eq!(inv.after(&l).unwrap(), Winding::identity(&t));
    }

    #[test]
    fn borel_orbit_is_cubes() {
        let t = borel(eps() * eps());
        let g = chi(&[0, 2]); // 2 generates F_13^*
        let orbit = t
            .orbit_on_central_points(&[g], Side::Left, &[f(1), f(0)])
            .unwrap();
        let cubes: BTreeSet<Vec<Fp>> = (1..P).map(|v| vec![f(v as i64).pow(3), f(0)]).collect();
        assert_eq!(orbit, cubes);
        let trivial = t
            .orbit_on_central_points(&[t.counit_character()], Side::Left, &[f(5), f(2)])
            .unwrap();
        assert_eq!(trivial.len(), 1);
    }

    fn borel_module(tau: Fp, xi: Fp) -> GeneratorRep {
        let q = eps() * eps();
        let k = DenseMatrix::diagonal(&(0..3).map(|r| tau * q.pow(r)).collect::<Vec<_>>(), P);
        let e = DenseMatrix::from_fn(3, 3, P, |i, j| if i == (j + 1) % 3 { xi } else { f(0) });
        let mut v = GeneratorRep::new(vec![], vec![e, k], P).unwrap();
        v.fiber = v.central_values(&borel(q).central_word_list()).unwrap();
        v
    }

    #[test]
    fn stabilizer_of_generic_borel_module() {
        let t = borel(eps() * eps());
        let v = borel_module(f(1), f(1));
        assert!(repmod::check_relations(&v, &t.fiber_relations(&v.fiber), 2).is_ok());
        let g0 = t.enumerate_characters(&t.fiber_relations(&[f(1), f(0)]));
        let stab = t.stabilizer(&v, &g0, Execution::Sequential).unwrap();
        assert_eq!(stab.order(), 3);
        assert!(!is_maximally_stable(stab.order(), 3).unwrap());
        assert!(matches!(
            is_maximally_stable(10, 3),
            Err(HopfError::StabilizerBound { .. })
        ));
        let m = t
            .tensor_character_multiplicities(&v, &g0, &stab, Execution::Sequential)
            .unwrap();
        assert_eq!(
            m.multiplicities.iter().map(|(_, k)| *k).collect::<Vec<_>>(),
            vec![1, 1, 1]
        );
        assert!(m.consistent);
        // witnesses are normalized and the identity gets the identity matrix
        let id = stab
            .members
            .iter()
            .position(|c| *c == t.counit_character())
            .unwrap();
        assert!(stab.witnesses[id].is_identity());
    }

    #[test]
    fn character_modules_have_trivial_stabilizer() {
        let t = borel(eps() * eps());
        let g0 = t.enumerate_characters(&t.fiber_relations(&[f(1), f(0)]));
        let line = t.character_module(&g0[1]).unwrap();
        let stab = t.stabilizer(&line, &g0, Execution::Parallel).unwrap();
        assert_eq!(stab.members, vec![t.counit_character()]);
        assert!(is_maximally_stable(1, 1).unwrap());
        let table = t.extract_cocycle(&stab).unwrap();
        assert_eq!(table.gamma, vec![vec![f(1)]]);
        let q = verify_primitive_quotient(
            &table,
            &stab.witnesses,
            1,
            &mut ChaCha8Rng::seed_from_u64(0),
        )
        .unwrap();
        assert_eq!(q.blocks.irreducible_dims, vec![1]);
    }

    #[test]
    fn corrupted_cocycle_is_reported() {
        let z3 = |g: usize, h: usize| (g + h) % 3;
        let mul: Vec<Vec<usize>> = (0..3).map(|g| (0..3).map(|h| z3(g, h)).collect()).collect();
        let table = CocycleTable {
            members: vec![chi(&[1]), chi(&[3]), chi(&[9])],
            identity: 0,
            mul,
            gamma: vec![vec![f(1); 3]; 3],
        };
        assert!(table.check().is_ok());
        let mut bad = table.clone();
        bad.gamma[0][1] = f(2);
        assert_eq!(bad.check(), Err(HopfError::Normalization(1)));
        let mut bad = table.clone();
        bad.gamma[1][2] = f(2);
        assert!(matches!(bad.check(), Err(HopfError::CocycleIdentity(..))));
    }
}
