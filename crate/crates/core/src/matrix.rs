// SPDX-License-Identifier: Apache-2.0

//! Dense matrices over F_p and Gaussian elimination.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::field::Fp;
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    modulus: u64,
    entries: Vec<Fp>, // row-major
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Fp>) -> Self {
        assert_eq!(
            rows * cols,
            entries.len(),
            "entry count does not match shape"
        );
        let modulus = entries
            .first()
            .map(|x| x.modulus())
            .expect("use DenseMatrix::zeros for empty matrices");
        DenseMatrix {
            rows,
            cols,
            modulus,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize, modulus: u64) -> Self {
        DenseMatrix {
            rows,
            cols,
            modulus,
            entries: vec![Fp::zero(modulus); rows * cols],
        }
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        let mut m = Self::zeros(n, n, modulus);
        for i in 0..n {
            m[(i, i)] = Fp::one(modulus);
        }
        m
    }

    pub fn scalar(n: usize, value: Fp) -> Self {
        let mut m = Self::zeros(n, n, value.modulus());
        for i in 0..n {
            m[(i, i)] = value;
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        modulus: u64,
        mut f: impl FnMut(usize, usize) -> Fp,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        DenseMatrix {
            rows,
            cols,
            modulus,
            entries,
        }
    }

    pub fn from_rows(rows: &[Vec<Fp>], modulus: u64) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, modulus, |i, j| rows[i][j])
    }

    pub fn from_u64_rows(rows: &[&[u64]], modulus: u64) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, modulus, |i, j| Fp::new(rows[i][j], modulus))
    }

    pub fn diagonal(values: &[Fp], modulus: u64) -> Self {
        let mut m = Self::zeros(values.len(), values.len(), modulus);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Fp] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Fp] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Fp> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| self[(i, j)].value() == u64::from(i == j)))
    }

    /// The scalar c if this matrix equals c times the identity.
    pub fn as_scalar(&self) -> Option<Fp> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self[(0, 0)];
        let ok = (0..self.rows).all(|i| {
            (0..self.cols).all(|j| self[(i, j)] == if i == j { c } else { Fp::zero(self.modulus) })
        });
        ok.then_some(c)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.modulus, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> Fp {
        assert!(self.is_square());
        (0..self.rows).fold(Fp::zero(self.modulus), |acc, i| acc + self[(i, i)])
    }

    pub fn scale(&self, c: Fp) -> Self {
        DenseMatrix {
            entries: self.entries.iter().map(|&x| x * c).collect(),
            ..self.clone()
        }
    }

    pub fn mul_vec(&self, v: &[Fp]) -> Vec<Fp> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Fp::zero(self.modulus), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows, self.modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Kronecker product; the tensor-product matrix in the basis e_i (x) f_j ordered lexicographically.
    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = other.shape();
        Self::from_fn(self.rows * r2, self.cols * c2, self.modulus, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }

    /// Row-reduced echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = self[(r, c)].inv().expect("pivot is nonzero");
            for j in c..self.cols {
                self[(r, j)] *= inv;
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self[(i, c)];
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let t = self[(r, j)];
                    self[(i, j)] -= f * t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {v : Mv = 0}, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Fp>> {
        let (r, pivots) = self.rref();
        let zero = Fp::zero(self.modulus);
        let one = Fp::one(self.modulus);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![zero; self.cols];
                v[free] = one;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, free)];
                }
                v
            })
            .collect()
    }

    /// Some x with Ax = b, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Fp]) -> Option<Vec<Fp>> {
        assert_eq!(b.len(), self.rows);
        let aug = Self::from_fn(self.rows, self.cols + 1, self.modulus, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                b[i]
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Fp::zero(self.modulus); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)];
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, self.modulus, |i, j| {
            if j < n {
                self[(i, j)]
            } else {
                Fp::new(u64::from(j - n == i), self.modulus)
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, self.modulus, |i, j| r[(i, n + j)]))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Monic polynomial of least degree annihilating this matrix.
    pub fn minimal_polynomial(&self) -> Poly {
        assert!(self.is_square(), "minimal polynomial needs a square matrix");
        let n = self.rows;
        let mut power = Self::identity(n, self.modulus);
        let mut span = LinearSpan::with_tracking(n * n, self.modulus);
        loop {
            if let Some(relation) = span.insert_tracked(power.entries.clone()) {
                return Poly::new(relation, self.modulus).monic();
            }
            power = &power * self;
        }
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Fp;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Fp {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Fp {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;
    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let p = self.modulus;
        // accumulate in u64 and reduce once per entry
        let mut out = vec![0u64; self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)].value();
                if a == 0 {
                    continue;
                }
                let row = &mut out[i * rhs.cols..(i + 1) * rhs.cols];
                for (j, acc) in row.iter_mut().enumerate() {
                    *acc = (*acc + a * rhs[(k, j)].value()) % p;
                }
            }
        }
        DenseMatrix {
            rows: self.rows,
            cols: rhs.cols,
            modulus: p,
            entries: out.into_iter().map(|x| Fp::new(x, p)).collect(),
        }
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;
    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.shape(), rhs.shape());
        DenseMatrix {
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| a + b)
                .collect(),
            ..self.clone()
        }
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;
    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.shape(), rhs.shape());
        DenseMatrix {
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| a - b)
                .collect(),
            ..self.clone()
        }
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{} mod {}]", self.rows, self.cols, self.modulus)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Incrementally built subspace of F_p^n kept in echelon form.
///
/// With tracking enabled every stored row also remembers which combination of
/// inserted vectors produced it, so the first dependency can be reported.
#[derive(Debug, Clone)]
pub struct LinearSpan {
    len: usize,
    modulus: u64,
    rows: Vec<(usize, Vec<Fp>, Vec<Fp>)>, // (pivot, reduced vector, combination)
    inserted: usize,
    track: bool,
}

impl LinearSpan {
    pub fn new(len: usize, modulus: u64) -> Self {
        LinearSpan {
            len,
            modulus,
            rows: Vec::new(),
            inserted: 0,
            track: false,
        }
    }

    pub fn with_tracking(len: usize, modulus: u64) -> Self {
        LinearSpan {
            track: true,
            ..Self::new(len, modulus)
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows. Returns the residual and the combination
    /// (over inserted vectors, with `v` itself at index `inserted`) it equals.
    fn reduce(&self, mut v: Vec<Fp>) -> (Vec<Fp>, Vec<Fp>) {
        let zero = Fp::zero(self.modulus);
        let mut combo = if self.track {
            let mut c = vec![zero; self.inserted + 1];
            c[self.inserted] = Fp::one(self.modulus);
            c
        } else {
            Vec::new()
        };
        for (pivot, row, row_combo) in &self.rows {
            let f = v[*pivot];
            if f.is_zero() {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row) {
                *x -= f * r;
            }
            if self.track {
                for (c, &r) in combo.iter_mut().zip(row_combo) {
                    *c -= f * r;
                }
            }
        }
        (v, combo)
    }

    pub fn contains(&self, v: &[Fp]) -> bool {
        assert_eq!(v.len(), self.len);
        self.reduce(v.to_vec()).0.iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: Vec<Fp>) -> bool {
        self.insert_inner(v).is_none()
    }

    /// Adds `v`; if it is dependent on earlier insertions returns the coefficients
    /// c_0..c_k (k = index of `v`) with sum c_i v_i = 0 and c_k = 1.
    pub fn insert_tracked(&mut self, v: Vec<Fp>) -> Option<Vec<Fp>> {
        assert!(self.track, "span was created without tracking");
        self.insert_inner(v)
    }

    fn insert_inner(&mut self, v: Vec<Fp>) -> Option<Vec<Fp>> {
        assert_eq!(v.len(), self.len);
        let (mut residual, mut combo) = self.reduce(v);
        let Some(pivot) = residual.iter().position(|x| !x.is_zero()) else {
            self.inserted += 1;
            return Some(combo);
        };
        let inv = residual[pivot].inv().expect("pivot is nonzero");
        for x in residual.iter_mut() {
            *x *= inv;
        }
        for c in combo.iter_mut() {
            *c *= inv;
        }
        // keep the stored rows fully reduced at the new pivot
        for (_, row, row_combo) in self.rows.iter_mut() {
            let f = row[pivot];
            if f.is_zero() {
                continue;
            }
            for (x, &r) in row.iter_mut().zip(&residual) {
                *x -= f * r;
            }
            if self.track {
                row_combo.resize(combo.len(), Fp::zero(self.modulus));
                for (c, &r) in row_combo.iter_mut().zip(&combo) {
                    *c -= f * r;
                }
            }
        }
        self.rows.push((pivot, residual, combo));
        self.inserted += 1;
        None
    }

    pub fn basis(&self) -> Vec<Vec<Fp>> {
        self.rows.iter().map(|(_, row, _)| row.clone()).collect()
    }
}
