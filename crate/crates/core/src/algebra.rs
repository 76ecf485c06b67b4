// SPDX-License-Identifier: Apache-2.0

//! Finite-dimensional associative unital algebras given by structure constants.
//!
//! The radical is the kernel of the regular trace form (valid when p > dim),
//! and the semisimple quotient is split into blocks through the primitive
//! central idempotents obtained from a random central element.

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::field::Fp;
use crate::matrix::{DenseMatrix, LinearSpan};
use crate::poly::{Factorization, Poly};

/// Random central elements tried before giving up on splitting the center.
pub const CENTRAL_SPLIT_RETRIES: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("structure tensor has {got} entries, expected {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("associativity fails on basis triple ({i}, {j}, {k})")]
    Associativity { i: usize, j: usize, k: usize },
    #[error("unit is not a two-sided identity on basis element {index}")]
    NonIdentityUnit { index: usize },
    #[error("trace-form radical needs p > dim, got p = {p}, dim = {dim}")]
    CharacteristicTooSmall { p: u64, dim: usize },
    #[error("trace-form kernel is not a two-sided ideal")]
    RadicalNotIdeal,
    #[error("trace-form kernel contains a non-nilpotent element")]
    RadicalNotNilpotent,
    #[error("semisimple quotient does not split over F_p: {0}")]
    NonSplitBlock(String),
    #[error("no separating central element after {attempts} attempts")]
    RetryExhausted { attempts: usize },
    #[error("central idempotent check failed: {0}")]
    Idempotents(String),
}

/// b_i * b_j = sum_k c[i][j][k] b_k, stored sparsely per pair (i, j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureAlgebra {
    labels: Vec<String>,
    modulus: u64,
    products: Vec<Vec<(usize, Fp)>>,
    unit: Vec<Fp>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    /// Dimension of the Wedderburn factor, d^2.
    pub dim: usize,
    /// Size d of the matrix algebra, the dimension of its irreducible module.
    pub irreducible_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockReport {
    pub radical_dim: usize,
    /// Sorted by irreducible dimension.
    pub blocks: Vec<Block>,
    pub num_irreducibles: usize,
    pub irreducible_dims: Vec<usize>,
    pub sd: usize,
}

impl StructureAlgebra {
    /// Validates a dense N x N x N tensor indexed as `[(i * N + j) * N + k]`.
    pub fn build(
        labels: Vec<String>,
        structure_constants: &[Fp],
        unit: Vec<Fp>,
    ) -> Result<Self, AlgebraError> {
        let n = labels.len();
        if structure_constants.len() != n * n * n {
            return Err(AlgebraError::ShapeMismatch {
                expected: n * n * n,
                got: structure_constants.len(),
            });
        }
        let products = structure_constants
            .chunks(n.max(1))
            .take(n * n)
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, &c)| (k, c))
                    .collect()
            })
            .collect();
        Self::from_products(labels, products, unit)
    }

    /// Same as [`build`](Self::build) with the products already in sparse form.
    pub fn from_products(
        labels: Vec<String>,
        products: Vec<Vec<(usize, Fp)>>,
        unit: Vec<Fp>,
    ) -> Result<Self, AlgebraError> {
        let n = labels.len();
        if products.len() != n * n {
            return Err(AlgebraError::ShapeMismatch {
                expected: n * n,
                got: products.len(),
            });
        }
        if unit.len() != n {
            return Err(AlgebraError::ShapeMismatch {
                expected: n,
                got: unit.len(),
            });
        }
        let modulus = unit.first().map_or(2, |u| u.modulus());
        let alg = StructureAlgebra {
            labels,
            modulus,
            products,
            unit,
        };
        alg.check_unit()?;
        alg.check_associativity()?;
        Ok(alg)
    }

    fn check_unit(&self) -> Result<(), AlgebraError> {
        for index in 0..self.dim() {
            let b = self.basis_vector(index);
            if self.mul(&self.unit, &b) != b || self.mul(&b, &self.unit) != b {
                return Err(AlgebraError::NonIdentityUnit { index });
            }
        }
        Ok(())
    }

    fn check_associativity(&self) -> Result<(), AlgebraError> {
        let n = self.dim();
        let zero = Fp::zero(self.modulus);
        let mut lhs = vec![zero; n];
        let mut rhs = vec![zero; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    lhs.fill(zero);
                    rhs.fill(zero);
                    for &(m, c) in self.product(i, j) {
                        for &(t, d) in self.product(m, k) {
                            lhs[t] += c * d;
                        }
                    }
                    for &(m, c) in self.product(j, k) {
                        for &(t, d) in self.product(i, m) {
                            rhs[t] += c * d;
                        }
                    }
                    if lhs != rhs {
                        return Err(AlgebraError::Associativity { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[Fp] {
        &self.unit
    }

    /// Nonzero terms of b_i * b_j.
    #[inline]
    pub fn product(&self, i: usize, j: usize) -> &[(usize, Fp)] {
        &self.products[i * self.dim() + j]
    }

    /// Dense structure constant c[i][j][k].
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Fp {
        self.product(i, j)
            .iter()
            .find(|(t, _)| *t == k)
            .map_or(Fp::zero(self.modulus), |&(_, c)| c)
    }

    pub fn zero_vector(&self) -> Vec<Fp> {
        vec![Fp::zero(self.modulus); self.dim()]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Fp> {
        let mut v = self.zero_vector();
        v[i] = Fp::one(self.modulus);
        v
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Fp> {
        (0..self.dim())
            .map(|_| Fp::random(rng, self.modulus))
            .collect()
    }

    pub fn mul(&self, x: &[Fp], y: &[Fp]) -> Vec<Fp> {
        let n = self.dim();
        debug_assert!(x.len() == n && y.len() == n);
        let mut out = self.zero_vector();
        for (i, &xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for &(k, s) in self.product(i, j) {
                    out[k] += c * s;
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &[Fp], exp: usize) -> Vec<Fp> {
        (0..exp).fold(self.unit.clone(), |acc, _| self.mul(&acc, x))
    }

    /// Matrix of y -> x * y in the algebra basis.
    pub fn left_regular_matrix(&self, x: &[Fp]) -> DenseMatrix {
        let n = self.dim();
        let mut m = DenseMatrix::zeros(n, n, self.modulus);
        for (i, &xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..n {
                for &(k, c) in self.product(i, j) {
                    m[(k, j)] += xi * c;
                }
            }
        }
        m
    }

    /// Trace of left multiplication by each basis element.
    pub fn regular_trace_values(&self) -> Vec<Fp> {
        (0..self.dim())
            .map(|k| {
                (0..self.dim()).fold(Fp::zero(self.modulus), |acc, j| {
                    acc + self.structure_constant(k, j, j)
                })
            })
            .collect()
    }

    /// G[i][j] = t(b_i b_j) for a linear functional t given on the basis.
    pub fn trace_form(&self, trace_values: &[Fp]) -> DenseMatrix {
        let n = self.dim();
        DenseMatrix::from_fn(n, n, self.modulus, |i, j| {
            self.product(i, j)
                .iter()
                .fold(Fp::zero(self.modulus), |acc, &(k, c)| {
                    acc + c * trace_values[k]
                })
        })
    }

    /// Basis of the Jacobson radical as the kernel of the regular trace form.
    pub fn radical(&self) -> Result<Vec<Vec<Fp>>, AlgebraError> {
        if self.modulus <= self.dim() as u64 {
            return Err(AlgebraError::CharacteristicTooSmall {
                p: self.modulus,
                dim: self.dim(),
            });
        }
        let gram = self.trace_form(&self.regular_trace_values());
        let rad = gram.nullspace();
        self.check_nilpotent_ideal(&rad)?;
        Ok(rad)
    }

    fn check_nilpotent_ideal(&self, ideal: &[Vec<Fp>]) -> Result<(), AlgebraError> {
        if ideal.is_empty() {
            return Ok(());
        }
        let mut span = LinearSpan::new(self.dim(), self.modulus);
        for v in ideal {
            span.insert(v.clone());
        }
        for r in ideal {
            for i in 0..self.dim() {
                let b = self.basis_vector(i);
                if !span.contains(&self.mul(&b, r)) || !span.contains(&self.mul(r, &b)) {
                    return Err(AlgebraError::RadicalNotIdeal);
                }
            }
        }
        // a two-sided ideal of nilpotent elements: basis vectors plus a few fixed combinations
        let mut probes: Vec<Vec<Fp>> = ideal.to_vec();
        for shift in 1..=3u64 {
            let mut combo = self.zero_vector();
            for (idx, v) in ideal.iter().enumerate() {
                let c = Fp::new(idx as u64 * shift + 1, self.modulus);
                for (x, &y) in combo.iter_mut().zip(v) {
                    *x += c * y;
                }
            }
            probes.push(combo);
        }
        for v in &probes {
            if self.pow(v, self.dim()).iter().any(|x| !x.is_zero()) {
                return Err(AlgebraError::RadicalNotNilpotent);
            }
        }
        Ok(())
    }

    /// A / I for a two-sided ideal I, on the complement of the echelon pivots of I.
    /// Returns the quotient and the retained basis indices.
    pub fn quotient(&self, ideal: &[Vec<Fp>]) -> (StructureAlgebra, Vec<usize>) {
        let n = self.dim();
        let (echelon, pivots) = if ideal.is_empty() {
            (DenseMatrix::zeros(0, n, self.modulus), Vec::new())
        } else {
            DenseMatrix::from_rows(ideal, self.modulus).rref()
        };
        let kept: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let project = |v: &[Fp]| -> Vec<Fp> {
            let mut w = v.to_vec();
            for (row, &pc) in pivots.iter().enumerate() {
                let f = w[pc];
                if f.is_zero() {
                    continue;
                }
                for (x, &r) in w.iter_mut().zip(echelon.row(row)) {
                    *x -= f * r;
                }
            }
            kept.iter().map(|&k| w[k]).collect()
        };
        let mut products = Vec::with_capacity(kept.len() * kept.len());
        for &i in &kept {
            for &j in &kept {
                let mut full = self.zero_vector();
                for &(k, c) in self.product(i, j) {
                    full[k] += c;
                }
                let reduced = project(&full);
                products.push(
                    reduced
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .collect(),
                );
            }
        }
        let quotient = StructureAlgebra {
            labels: kept.iter().map(|&k| self.labels[k].clone()).collect(),
            modulus: self.modulus,
            products,
            unit: project(&self.unit),
        };
        (quotient, kept)
    }

    /// Basis of the center.
    pub fn center(&self) -> Vec<Vec<Fp>> {
        let n = self.dim();
        // unknown x; rows indexed by (i, k): coefficient of b_k in x b_i - b_i x
        let mut eqs = DenseMatrix::zeros(n * n, n, self.modulus);
        for i in 0..n {
            for j in 0..n {
                for &(k, c) in self.product(j, i) {
                    eqs[(i * n + k, j)] += c;
                }
                for &(k, c) in self.product(i, j) {
                    eqs[(i * n + k, j)] -= c;
                }
            }
        }
        eqs.nullspace()
    }

    pub fn is_central(&self, x: &[Fp]) -> bool {
        (0..self.dim()).all(|i| {
            let b = self.basis_vector(i);
            self.mul(x, &b) == self.mul(&b, x)
        })
    }

    /// Monic minimal polynomial of an element.
    pub fn element_minimal_polynomial(&self, x: &[Fp]) -> Poly {
        let mut span = LinearSpan::with_tracking(self.dim(), self.modulus);
        let mut power = self.unit.clone();
        loop {
            if let Some(rel) = span.insert_tracked(power.clone()) {
                return Poly::new(rel, self.modulus).monic();
            }
            power = self.mul(&power, x);
        }
    }

    pub fn sd(&self) -> Result<usize, AlgebraError> {
        Ok(self.dim() - self.radical()?.len())
    }

    /// Wedderburn decomposition of A / rad(A) into split matrix blocks.
    pub fn wedderburn_blocks<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
    ) -> Result<BlockReport, AlgebraError> {
        let rad = self.radical()?;
        let (semisimple, _) = self.quotient(&rad);
        let center = semisimple.center();
        let idempotents = semisimple.primitive_central_idempotents(&center, rng)?;

        let mut blocks = Vec::with_capacity(idempotents.len());
        for e in &idempotents {
            let dim = semisimple.left_regular_matrix(e).rank();
            let d = exact_sqrt(dim).ok_or_else(|| {
                AlgebraError::NonSplitBlock(format!("block of dimension {dim} is not a square"))
            })?;
            blocks.push(Block {
                dim,
                irreducible_dim: d,
            });
        }
        blocks.sort_by_key(|b| b.irreducible_dim);
        let total: usize = blocks.iter().map(|b| b.dim).sum();
        if total != semisimple.dim() {
            return Err(AlgebraError::Idempotents(format!(
                "blocks cover {total} of {} dimensions",
                semisimple.dim()
            )));
        }
        let irreducible_dims: Vec<usize> = blocks.iter().map(|b| b.irreducible_dim).collect();
        let sd = irreducible_dims.iter().map(|d| d * d).sum();
        Ok(BlockReport {
            radical_dim: rad.len(),
            num_irreducibles: blocks.len(),
            irreducible_dims,
            blocks,
            sd,
        })
    }

    /// Requires a semisimple algebra and a basis of its center. Each random central element
    /// splits the current idempotents along its eigenvalues until there are dim Z of them.
    fn primitive_central_idempotents<R: Rng + ?Sized>(
        &self,
        center: &[Vec<Fp>],
        rng: &mut R,
    ) -> Result<Vec<Vec<Fp>>, AlgebraError> {
        let zdim = center.len();
        let mut current = vec![self.unit.clone()];
        for _ in 0..CENTRAL_SPLIT_RETRIES {
            if current.len() == zdim {
                break;
            }
            let mut z = self.zero_vector();
            for v in center {
                let c = Fp::random(rng, self.modulus);
                for (x, &y) in z.iter_mut().zip(v) {
                    *x += c * y;
                }
            }
            let roots = match self.element_minimal_polynomial(&z).factor_into_linears(rng) {
                Factorization::NonSplit { degree, .. } => {
                    return Err(AlgebraError::NonSplitBlock(format!(
                        "central element has an irreducible factor of degree {degree}"
                    )))
                }
                Factorization::Split(roots) => roots,
            };
            if roots.iter().any(|&(_, k)| k != 1) {
                return Err(AlgebraError::Idempotents(
                    "central element is not semisimple".into(),
                ));
            }
            let lagrange: Vec<Vec<Fp>> = roots
                .iter()
                .map(|&(ri, _)| {
                    roots.iter().filter(|&&(rj, _)| rj != ri).fold(
                        self.unit.clone(),
                        |acc, &(rj, _)| {
                            let inv = (ri - rj).inv().expect("roots are distinct");
                            let factor: Vec<Fp> = z
                                .iter()
                                .zip(&self.unit)
                                .map(|(&zk, &uk)| (zk - rj * uk) * inv)
                                .collect();
                            self.mul(&acc, &factor)
                        },
                    )
                })
                .collect();
            current = current
                .iter()
                .flat_map(|e| lagrange.iter().map(move |f| self.mul(e, f)))
                .filter(|e| e.iter().any(|x| !x.is_zero()))
                .collect();
        }
        if current.len() != zdim {
            return Err(AlgebraError::RetryExhausted {
                attempts: CENTRAL_SPLIT_RETRIES,
            });
        }
        self.check_idempotents(&current)?;
        Ok(current)
    }

    fn check_idempotents(&self, es: &[Vec<Fp>]) -> Result<(), AlgebraError> {
        let zero = self.zero_vector();
        let mut sum = zero.clone();
        for (i, e) in es.iter().enumerate() {
            if !self.is_central(e) {
                return Err(AlgebraError::Idempotents(format!(
                    "idempotent {i} is not central"
                )));
            }
            for (j, f) in es.iter().enumerate() {
                let prod = self.mul(e, f);
                let expected = if i == j { e } else { &zero };
                if &prod != expected {
                    return Err(AlgebraError::Idempotents(format!(
                        "e{i} e{j} has the wrong value"
                    )));
                }
            }
            for (s, &x) in sum.iter_mut().zip(e) {
                *s += x;
            }
        }
        if sum != self.unit {
            return Err(AlgebraError::Idempotents(
                "idempotents do not sum to 1".into(),
            ));
        }
        Ok(())
    }

    /// Same algebra with basis element `perm[i]` of `self` placed at position i.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, AlgebraError> {
        let n = self.dim();
        let mut inverse = vec![0; n];
        for (i, &pi) in perm.iter().enumerate() {
            inverse[pi] = i;
        }
        let labels = perm.iter().map(|&i| self.labels[i].clone()).collect();
        let mut products = Vec::with_capacity(n * n);
        for &a in perm {
            for &b in perm {
                products.push(
                    self.product(a, b)
                        .iter()
                        .map(|&(k, c)| (inverse[k], c))
                        .collect(),
                );
            }
        }
        let unit = perm.iter().map(|&i| self.unit[i]).collect();
        Self::from_products(labels, products, unit)
    }
}

fn exact_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r.checked_mul(r) == Some(n)).then_some(r)
}

/// The algebra on monomials g^i h^j (0 <= i, j < ell) with
/// h g = q g h, g^ell = alpha, h^ell = beta.
///
/// Basis index of g^i h^j is i + ell * j.
pub fn skew_torus(
    ell: usize,
    q: Fp,
    alpha: Fp,
    beta: Fp,
    names: (&str, &str),
) -> Result<StructureAlgebra, AlgebraError> {
    let p = q.modulus();
    let index = |i: usize, j: usize| i + ell * j;
    let mut labels = vec![String::new(); ell * ell];
    for j in 0..ell {
        for i in 0..ell {
            labels[index(i, j)] = monomial_label(&[(names.0, i), (names.1, j)]);
        }
    }
    let mut products = vec![Vec::new(); ell * ell * ell * ell];
    for j in 0..ell {
        for i in 0..ell {
            for m in 0..ell {
                for k in 0..ell {
                    // (g^i h^j)(g^k h^m) = q^{jk} g^{i+k} h^{j+m}
                    let mut c = q.pow((j * k) as u64);
                    let (mut gi, mut hj) = (i + k, j + m);
                    if gi >= ell {
                        gi -= ell;
                        c *= alpha;
                    }
                    if hj >= ell {
                        hj -= ell;
                        c *= beta;
                    }
                    if !c.is_zero() {
                        products[index(i, j) * ell * ell + index(k, m)] = vec![(index(gi, hj), c)];
                    }
                }
            }
        }
    }
    let mut unit = vec![Fp::zero(p); ell * ell];
    unit[0] = Fp::one(p);
    StructureAlgebra::from_products(labels, products, unit)
}

pub(crate) fn monomial_label(parts: &[(&str, usize)]) -> String {
    let s: Vec<String> = parts
        .iter()
        .filter(|(_, e)| *e > 0)
        .map(|&(name, e)| {
            if e == 1 {
                name.to_string()
            } else {
                format!("{name}^{e}")
            }
        })
        .collect();
    if s.is_empty() {
        "1".into()
    } else {
        s.join(" ")
    }
}

/// Full matrix algebra M_n with basis E_ij (index i * n + j).
pub fn matrix_algebra(n: usize, modulus: u64) -> StructureAlgebra {
    let one = Fp::one(modulus);
    let labels = (0..n * n).map(|k| format!("E{}{}", k / n, k % n)).collect();
    let mut products = vec![Vec::new(); n.pow(4)];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                // E_ij E_jl = E_il
                products[(i * n + j) * n * n + j * n + l] = vec![(i * n + l, one)];
            }
        }
    }
    let mut unit = vec![Fp::zero(modulus); n * n];
    for i in 0..n {
        unit[i * n + i] = one;
    }
    StructureAlgebra::from_products(labels, products, unit).expect("matrix units are associative")
}

/// Twisted group algebra: basis indexed by group elements, b_g b_h = gamma(g, h) b_{gh}.
pub fn twisted_group_algebra(
    labels: Vec<String>,
    mul_table: &[Vec<usize>],
    identity: usize,
    gamma: &[Vec<Fp>],
) -> Result<StructureAlgebra, AlgebraError> {
    let n = labels.len();
    let modulus = gamma
        .first()
        .and_then(|r| r.first())
        .map_or(2, |x| x.modulus());
    let mut products = Vec::with_capacity(n * n);
    for g in 0..n {
        for h in 0..n {
            let c = gamma[g][h];
            products.push(if c.is_zero() {
                Vec::new()
            } else {
                vec![(mul_table[g][h], c)]
            });
        }
    }
    let mut unit = vec![Fp::zero(modulus); n];
    unit[identity] = gamma[identity][identity].inv().unwrap_or(Fp::zero(modulus));
    StructureAlgebra::from_products(labels, products, unit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::primitive_root_of_unity;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    fn cyclic_group_algebra(n: usize, p: u64) -> StructureAlgebra {
        let one = Fp::one(p);
        let labels = (0..n).map(|i| monomial_label(&[("g", i)])).collect();
        let table: Vec<Vec<usize>> = (0..n)
            .map(|g| (0..n).map(|h| (g + h) % n).collect())
            .collect();
        twisted_group_algebra(labels, &table, 0, &vec![vec![one; n]; n]).unwrap()
    }

    #[test]
    fn z2_group_algebra_is_valid() {
        let alg = cyclic_group_algebra(2, 5);
        assert_eq!(alg.dim(), 2);
        assert_eq!(
            alg.mul(&alg.basis_vector(1), &alg.basis_vector(1)),
            alg.basis_vector(0)
        );
    }

    #[test]
    fn corrupted_tensor_names_the_triple() {
        let p = 7;
        let alg = cyclic_group_algebra(3, p);
        let n = 3;
        let mut dense = vec![Fp::zero(p); n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    dense[(i * n + j) * n + k] = alg.structure_constant(i, j, k);
                }
            }
        }
        assert!(
            StructureAlgebra::build(alg.labels().to_vec(), &dense, alg.unit().to_vec()).is_ok()
        );
        // g * g = 2 g^2 instead of g^2
        dense[(n + 1) * n + 2] = Fp::new(2, p);
        let err = StructureAlgebra::build(alg.labels().to_vec(), &dense, alg.unit().to_vec())
            .unwrap_err();
        assert!(matches!(err, AlgebraError::Associativity { .. }), "{err:?}");
        let short =
            StructureAlgebra::build(alg.labels().to_vec(), &dense[1..], alg.unit().to_vec());
        assert!(matches!(short, Err(AlgebraError::ShapeMismatch { .. })));
    }

    #[test]
    fn bad_unit_is_rejected() {
        let p = 7;
        let alg = cyclic_group_algebra(3, p);
        let err = StructureAlgebra::from_products(
            alg.labels().to_vec(),
            alg.products.clone(),
            alg.basis_vector(1),
        )
        .unwrap_err();
        assert_eq!(err, AlgebraError::NonIdentityUnit { index: 0 });
    }

    #[test]
    fn left_regular_examples() {
        let alg = cyclic_group_algebra(3, 7);
        assert!(alg.left_regular_matrix(alg.unit()).is_identity());
        let g = alg.left_regular_matrix(&alg.basis_vector(1));
        assert_eq!(g.trace(), Fp::zero(7));
        assert!(g.pow(3).is_identity());
        assert!(!g.is_identity());
    }

    #[test]
    fn trace_is_cyclic_on_random_pairs() {
        let p = 13;
        let eps = primitive_root_of_unity(p, 3).unwrap();
        let alg = skew_torus(3, eps, Fp::one(p), Fp::one(p), ("a", "b")).unwrap();
        let mut r = rng();
        for _ in 0..100 {
            let x = alg.random_element(&mut r);
            let y = alg.random_element(&mut r);
            let xy = alg.left_regular_matrix(&alg.mul(&x, &y)).trace();
            let yx = alg.left_regular_matrix(&alg.mul(&y, &x)).trace();
            assert_eq!(xy, yx);
        }
    }

    #[test]
    fn quantum_torus_is_a_single_block() {
        let p = 13;
        let eps = primitive_root_of_unity(p, 3).unwrap();
        let alg = skew_torus(3, eps, Fp::one(p), Fp::one(p), ("a", "b")).unwrap();
        assert!(alg.radical().unwrap().is_empty());
        let rep = alg.wedderburn_blocks(&mut rng()).unwrap();
        assert_eq!(rep.irreducible_dims, vec![3]);
        assert_eq!(rep.sd, 9);
        assert_eq!(alg.sd().unwrap(), 9);
    }

    #[test]
    fn commutative_torus_is_nine_characters() {
        // p = 13 is too small for one central element to separate all nine blocks
        for p in [13, 97] {
            let one = Fp::one(p);
            let alg = skew_torus(3, one, one, one, ("a", "b")).unwrap();
            let rep = alg.wedderburn_blocks(&mut rng()).unwrap();
            assert_eq!(rep.radical_dim, 0);
            assert_eq!(rep.irreducible_dims, vec![1; 9]);
            assert_eq!(rep.sd, 9);
        }
    }

    #[test]
    fn borel_identity_fiber_radical() {
        // E^3 = 0, K^3 = 1, K E = eps^2 E K with E as the first generator
        let p = 13;
        let eps = primitive_root_of_unity(p, 3).unwrap();
        let zero = Fp::zero(p);
        let alg = skew_torus(3, eps * eps, zero, Fp::one(p), ("E", "K")).unwrap();
        let rad = alg.radical().unwrap();
        assert_eq!(rad.len(), 6);
        // radical is spanned by E^i K^j with i >= 1: coordinates with i = 0 vanish
        for v in &rad {
            for j in 0..3 {
                assert!(v[3 * j].is_zero());
            }
        }
        assert_eq!(alg.sd().unwrap(), 3);
        let rep = alg.wedderburn_blocks(&mut rng()).unwrap();
        assert_eq!(rep.irreducible_dims, vec![1, 1, 1]);
    }

    #[test]
    fn matrix_algebra_blocks() {
        let alg = matrix_algebra(3, 13);
        assert_eq!(alg.sd().unwrap(), 9);
        let rep = alg.wedderburn_blocks(&mut rng()).unwrap();
        assert_eq!(
            rep.blocks,
            vec![Block {
                dim: 9,
                irreducible_dim: 3
            }]
        );
    }

    #[test]
    fn small_characteristic_is_refused() {
        let alg = matrix_algebra(2, 3);
        assert_eq!(
            alg.radical(),
            Err(AlgebraError::CharacteristicTooSmall { p: 3, dim: 4 })
        );
    }

    #[test]
    fn non_split_center_is_reported() {
        // F_7[x]/(x^2 + 1) = F_49 as a 2-dim algebra over F_7
        let p = 7;
        let one = Fp::one(p);
        let minus_one = -one;
        let labels = vec!["1".to_string(), "x".to_string()];
        let products = vec![
            vec![(0, one)],
            vec![(1, one)],
            vec![(1, one)],
            vec![(0, minus_one)],
        ];
        let alg =
            StructureAlgebra::from_products(labels, products, vec![one, Fp::zero(p)]).unwrap();
        assert!(matches!(
            alg.wedderburn_blocks(&mut rng()),
            Err(AlgebraError::NonSplitBlock(_))
        ));
    }

    #[test]
    fn blocks_invariant_under_basis_permutation() {
        let p = 17;
        let eps = primitive_root_of_unity(p, 4).unwrap();
        let alg = skew_torus(4, eps * eps, Fp::one(p), Fp::one(p), ("a", "b")).unwrap();
        let base = alg.wedderburn_blocks(&mut rng()).unwrap();
        assert_eq!(base.irreducible_dims, vec![2, 2, 2, 2]);
        let n = alg.dim();
        for shift in [1, 5, 11] {
            let perm: Vec<usize> = (0..n).map(|i| (i * 7 + shift) % n).collect();
            let permuted = alg.permuted(&perm).unwrap();
            assert_eq!(permuted.wedderburn_blocks(&mut rng()).unwrap(), base);
        }
    }
}
