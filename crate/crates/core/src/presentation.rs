// SPDX-License-Identifier: Apache-2.0

//! Noncommutative words in a finite generator set, with integer exponents
//! (negative ones need the generator to be invertible), and relations built
//! from them.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::Fp;
use crate::matrix::DenseMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("generator {0} has a singular matrix but appears with a negative exponent")]
    SingularGenerator(usize),
    #[error("expected {expected} generator matrices, got {got}")]
    GeneratorCount { expected: usize, got: usize },
    #[error("generator matrices must be square of one common size")]
    Shape,
    #[error("cannot invert a sum of {0} words")]
    NonMonomialInverse(usize),
}

/// coeff * g_{i1}^{e1} g_{i2}^{e2} ... ; adjacent factors on the same generator are merged.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Word {
    pub coeff: Fp,
    pub factors: Vec<(usize, i32)>,
}

impl Word {
    pub fn scalar(coeff: Fp) -> Self {
        Word {
            coeff,
            factors: Vec::new(),
        }
    }

    pub fn one(modulus: u64) -> Self {
        Word::scalar(Fp::one(modulus))
    }

    pub fn gen(g: usize, modulus: u64) -> Self {
        Word::power(g, 1, modulus)
    }

    pub fn power(g: usize, exp: i32, modulus: u64) -> Self {
        Word::from_factors(Fp::one(modulus), &[(g, exp)])
    }

    pub fn from_factors(coeff: Fp, factors: &[(usize, i32)]) -> Self {
        let mut w = Word::scalar(coeff);
        for &f in factors {
            w.push(f);
        }
        w
    }

    fn push(&mut self, (g, e): (usize, i32)) {
        if e == 0 {
            return;
        }
        match self.factors.last_mut() {
            Some((last, exp)) if *last == g => {
                *exp += e;
                if *exp == 0 {
                    self.factors.pop();
                }
            }
            _ => self.factors.push((g, e)),
        }
    }

    pub fn scaled(&self, c: Fp) -> Self {
        Word {
            coeff: self.coeff * c,
            factors: self.factors.clone(),
        }
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.scaled(other.coeff);
        for &f in &other.factors {
            w.push(f);
        }
        w
    }

    pub fn inverse(&self) -> Option<Word> {
        let coeff = self.coeff.inv()?;
        Some(Word::from_factors(
            coeff,
            &self
                .factors
                .iter()
                .rev()
                .map(|&(g, e)| (g, -e))
                .collect::<Vec<_>>(),
        ))
    }

    /// The word with coefficient 1.
    pub fn monomial(&self) -> Word {
        Word {
            coeff: Fp::one(self.coeff.modulus()),
            factors: self.factors.clone(),
        }
    }

    pub fn is_scalar(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn eval_matrices(
        &self,
        mats: &GeneratorMatrices,
    ) -> Result<DenseMatrix, PresentationError> {
        let mut acc = DenseMatrix::scalar(mats.dim, self.coeff);
        for &(g, e) in &self.factors {
            let base = if e > 0 {
                &mats.mats[g]
            } else {
                mats.inverses[g]
                    .as_ref()
                    .ok_or(PresentationError::SingularGenerator(g))?
            };
            for _ in 0..e.unsigned_abs() {
                acc = &acc * base;
            }
        }
        Ok(acc)
    }

    /// None when a zero value is raised to a negative power.
    pub fn eval_scalars(&self, values: &[Fp]) -> Option<Fp> {
        self.factors.iter().try_fold(self.coeff, |acc, &(g, e)| {
            Some(acc * values[g].powi(e as i64)?)
        })
    }

    pub fn render(&self, names: &[String]) -> String {
        let body: Vec<String> = self
            .factors
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    names[g].clone()
                } else {
                    format!("{}^{}", names[g], e)
                }
            })
            .collect();
        let c = self.coeff.value();
        match (body.is_empty(), c) {
            (true, _) => c.to_string(),
            (false, 1) => body.join(" "),
            (false, _) => format!("{c} {}", body.join(" ")),
        }
    }
}

/// A formal linear combination of words, kept with like monomials combined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSum {
    terms: Vec<Word>,
}

impl WordSum {
    pub fn new(terms: Vec<Word>) -> Self {
        let mut combined: BTreeMap<Vec<(usize, i32)>, Fp> = BTreeMap::new();
        for t in terms {
            let slot = combined
                .entry(t.factors)
                .or_insert(Fp::zero(t.coeff.modulus()));
            *slot += t.coeff;
        }
        WordSum {
            terms: combined
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(factors, coeff)| Word { coeff, factors })
                .collect(),
        }
    }

    pub fn word(w: Word) -> Self {
        WordSum::new(vec![w])
    }

    pub fn zero() -> Self {
        WordSum { terms: Vec::new() }
    }

    /// `lhs - rhs` as one relation.
    pub fn difference(lhs: Word, rhs: Word) -> Self {
        let neg = rhs.scaled(-Fp::one(rhs.coeff.modulus()));
        WordSum::new(vec![lhs, neg])
    }

    pub fn terms(&self) -> &[Word] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &WordSum) -> WordSum {
        WordSum::new(self.terms.iter().chain(&other.terms).cloned().collect())
    }

    pub fn mul(&self, other: &WordSum) -> WordSum {
        WordSum::new(
            self.terms
                .iter()
                .flat_map(|a| other.terms.iter().map(move |b| a.mul(b)))
                .collect(),
        )
    }

    pub fn scaled(&self, c: Fp) -> WordSum {
        WordSum::new(self.terms.iter().map(|t| t.scaled(c)).collect())
    }

    /// Some(w) when the sum is a single word.
    pub fn as_word(&self) -> Option<&Word> {
        match self.terms.as_slice() {
            [w] => Some(w),
            _ => None,
        }
    }

    pub fn eval_matrices(
        &self,
        mats: &GeneratorMatrices,
    ) -> Result<DenseMatrix, PresentationError> {
        let mut acc = DenseMatrix::zeros(mats.dim, mats.dim, mats.modulus);
        for t in &self.terms {
            acc = &acc + &t.eval_matrices(mats)?;
        }
        Ok(acc)
    }

    pub fn eval_scalars(&self, values: &[Fp]) -> Option<Fp> {
        let modulus = values.first().map(|v| v.modulus())?;
        self.terms.iter().try_fold(Fp::zero(modulus), |acc, t| {
            Some(acc + t.eval_scalars(values)?)
        })
    }

    /// Replace each generator g by `images[g]`; negative powers need single-word images.
    pub fn substitute(&self, images: &[WordSum]) -> Result<WordSum, PresentationError> {
        let mut out = WordSum::zero();
        for t in &self.terms {
            let mut acc = WordSum::word(Word::scalar(t.coeff));
            for &(g, e) in &t.factors {
                let base = if e > 0 {
                    images[g].clone()
                } else {
                    let w = images[g]
                        .as_word()
                        .ok_or(PresentationError::NonMonomialInverse(images[g].terms.len()))?;
                    WordSum::word(
                        w.inverse()
                            .ok_or(PresentationError::NonMonomialInverse(0))?,
                    )
                };
                for _ in 0..e.unsigned_abs() {
                    acc = acc.mul(&base);
                }
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|t| t.render(names))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub label: String,
    pub poly: WordSum,
}

impl Relation {
    pub fn new(label: impl Into<String>, poly: WordSum) -> Self {
        Relation {
            label: label.into(),
            poly,
        }
    }
}

/// Generator matrices with inverses precomputed for the generators that have them.
#[derive(Debug, Clone)]
pub struct GeneratorMatrices {
    dim: usize,
    modulus: u64,
    mats: Vec<DenseMatrix>,
    inverses: Vec<Option<DenseMatrix>>,
}

impl GeneratorMatrices {
    pub fn new(mats: &[DenseMatrix], modulus: u64) -> Result<Self, PresentationError> {
        let dim = mats.first().map_or(0, |m| m.rows());
        if mats.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(PresentationError::Shape);
        }
        Ok(GeneratorMatrices {
            dim,
            modulus,
            mats: mats.to_vec(),
            inverses: mats.iter().map(|m| m.inverse()).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[DenseMatrix] {
        &self.mats
    }

    pub fn has_inverse(&self, g: usize) -> bool {
        self.inverses[g].is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 13;

    fn f(x: i64) -> Fp {
        Fp::from_i64(x, P)
    }

    #[test]
    fn adjacent_factors_merge_and_cancel() {
        let w = Word::from_factors(f(1), &[(0, 2), (0, -2), (1, 1), (1, 1)]);
        assert_eq!(w.factors, vec![(1, 2)]);
        let k = Word::gen(1, P);
        assert!(k.mul(&k.inverse().unwrap()).is_scalar());
    }

    #[test]
    fn like_terms_combine() {
        let e = Word::gen(0, P);
        let s = WordSum::new(vec![e.clone(), e.scaled(f(-1))]);
        assert!(s.is_zero());
        let s = WordSum::new(vec![e.clone(), e.scaled(f(4))]);
        assert_eq!(s.terms(), &[e.scaled(f(5))]);
    }

    #[test]
    fn evaluation_on_matrices_and_scalars() {
        // b a b^-1 a^-1 on the 2-dim rep with a = swap, b = diag(1, -1)
        let a = DenseMatrix::from_u64_rows(&[&[0, 1], &[1, 0]], P);
        let b = DenseMatrix::diagonal(&[f(1), f(-1)], P);
        let mats = GeneratorMatrices::new(&[a, b], P).unwrap();
        let c = Word::from_factors(f(1), &[(1, 1), (0, 1), (1, -1), (0, -1)]);
        assert_eq!(c.eval_matrices(&mats).unwrap().as_scalar(), Some(f(-1)));
        assert_eq!(c.eval_scalars(&[f(3), f(5)]), Some(f(1)));
        assert_eq!(Word::power(0, -1, P).eval_scalars(&[f(0)]), None);
    }

    #[test]
    fn singular_generator_with_negative_power() {
        let e = DenseMatrix::from_u64_rows(&[&[0, 0], &[1, 0]], P);
        let mats = GeneratorMatrices::new(&[e], P).unwrap();
        assert_eq!(
            Word::power(0, -1, P).eval_matrices(&mats),
            Err(PresentationError::SingularGenerator(0))
        );
    }

    #[test]
    fn substitution_scales_monomials() {
        // g0 -> 2 g0, g1 -> 3 g1 sends g1 g0 g1^-1 to 2 g1 g0 g1^-1
        let images = vec![
            WordSum::word(Word::gen(0, P).scaled(f(2))),
            WordSum::word(Word::gen(1, P).scaled(f(3))),
        ];
        let w = WordSum::word(Word::from_factors(f(1), &[(1, 1), (0, 1), (1, -1)]));
        let img = w.substitute(&images).unwrap();
        assert_eq!(img, w.scaled(f(2)));
        let names = vec!["E".to_string(), "K".to_string()];
        assert_eq!(img.render(&names), "2 K E K^-1");
    }
}
