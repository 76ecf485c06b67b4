// SPDX-License-Identifier: Apache-2.0

//! Univariate polynomials over F_p and splitting into linear factors.

use std::fmt;

use rand::Rng;

use crate::field::Fp;
use crate::matrix::DenseMatrix;

/// Coefficients lowest degree first; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Fp>,
    modulus: u64,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Fp>, modulus: u64) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs, modulus }
    }

    pub fn from_i64(coeffs: &[i64], modulus: u64) -> Self {
        Self::new(
            coeffs.iter().map(|&c| Fp::from_i64(c, modulus)).collect(),
            modulus,
        )
    }

    pub fn zero(modulus: u64) -> Self {
        Poly {
            coeffs: Vec::new(),
            modulus,
        }
    }

    pub fn constant(c: Fp) -> Self {
        Self::new(vec![c], c.modulus())
    }

    /// x - root
    pub fn linear(root: Fp) -> Self {
        Self::new(vec![-root, Fp::one(root.modulus())], root.modulus())
    }

    pub fn x(modulus: u64) -> Self {
        Self::new(vec![Fp::zero(modulus), Fp::one(modulus)], modulus)
    }

    pub fn coeffs(&self) -> &[Fp] {
        &self.coeffs
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Fp {
        self.coeffs
            .last()
            .copied()
            .unwrap_or(Fp::zero(self.modulus))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self
            .leading()
            .inv()
            .expect("leading coefficient is nonzero");
        self.scale(inv)
    }

    pub fn scale(&self, c: Fp) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect(), self.modulus)
    }

    pub fn eval(&self, x: Fp) -> Fp {
        self.coeffs
            .iter()
            .rev()
            .fold(Fp::zero(self.modulus), |acc, &c| acc * x + c)
    }

    pub fn eval_matrix(&self, m: &DenseMatrix) -> DenseMatrix {
        let n = m.rows();
        self.coeffs
            .iter()
            .rev()
            .fold(DenseMatrix::zeros(n, n, self.modulus), |acc, &c| {
                &(&acc * m) + &DenseMatrix::scalar(n, c)
            })
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Fp::zero(self.modulus);
        Self::new(
            (0..n)
                .map(|i| {
                    *self.coeffs.get(i).unwrap_or(&zero) + *other.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
            self.modulus,
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-Fp::one(self.modulus)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.modulus);
        }
        let mut out = vec![Fp::zero(self.modulus); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out, self.modulus)
    }

    /// (quotient, remainder); panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let inv = divisor
            .leading()
            .inv()
            .expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(self.modulus), Self::zero(self.modulus));
        };
        if nd < dd {
            return (Self::zero(self.modulus), self.clone());
        }
        let mut quot = vec![Fp::zero(self.modulus); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd] * inv;
            quot[k] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
        rem.truncate(dd);
        (Self::new(quot, self.modulus), Self::new(rem, self.modulus))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// self^exp mod m
    pub fn pow_mod(&self, mut exp: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::constant(Fp::one(self.modulus)).rem(m);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            exp >>= 1;
        }
        acc
    }

    pub fn from_roots(roots: &[(Fp, usize)], modulus: u64) -> Self {
        roots
            .iter()
            .fold(Self::constant(Fp::one(modulus)), |acc, &(r, k)| {
                (0..k).fold(acc, |a, _| a.mul(&Self::linear(r)))
            })
    }

    /// Roots over F_p with multiplicities, or the part that does not split.
    ///
    /// Distinct roots are isolated as gcd(f, x^p - x) and separated by random
    /// splitting with gcd((x + a)^((p-1)/2) - 1, g); multiplicities come from
    /// repeated division.
    pub fn factor_into_linears<R: Rng + ?Sized>(&self, rng: &mut R) -> Factorization {
        assert!(!self.is_zero(), "cannot factor the zero polynomial");
        let p = self.modulus;
        let f = self.monic();
        let xp = Self::x(p).pow_mod(p, &f);
        let g = f.gcd(&xp.sub(&Self::x(p)));
        let mut distinct = Vec::new();
        split_distinct_roots(&g, rng, &mut distinct);
        distinct.sort();

        let mut rest = f;
        let mut roots = Vec::with_capacity(distinct.len());
        for r in distinct {
            let lin = Self::linear(r);
            let mut k = 0;
            loop {
                let (q, rem) = rest.div_rem(&lin);
                if !rem.is_zero() {
                    break;
                }
                rest = q;
                k += 1;
            }
            roots.push((r, k));
        }
        if rest.degree() == Some(0) {
            Factorization::Split(roots)
        } else {
            Factorization::NonSplit {
                degree: rest.degree().unwrap_or(0),
                roots,
                cofactor: rest,
            }
        }
    }
}

/// `g` is monic and squarefree with all roots in F_p.
fn split_distinct_roots<R: Rng + ?Sized>(g: &Poly, rng: &mut R, out: &mut Vec<Fp>) {
    let p = g.modulus();
    match g.degree() {
        None | Some(0) => {}
        Some(1) => out.push(-g.coeffs()[0]),
        Some(_) if p == 2 => {
            for v in 0..2 {
                let x = Fp::new(v, 2);
                if g.eval(x).is_zero() {
                    out.push(x);
                }
            }
        }
        Some(d) => loop {
            let a = Fp::random(rng, p);
            let shifted = Poly::new(vec![a, Fp::one(p)], p);
            let h = shifted
                .pow_mod((p - 1) / 2, g)
                .sub(&Poly::constant(Fp::one(p)));
            let factor = g.gcd(&h);
            let fd = factor.degree().unwrap_or(0);
            if fd > 0 && fd < d {
                let (other, _) = g.div_rem(&factor);
                split_distinct_roots(&factor, rng, out);
                split_distinct_roots(&other.monic(), rng, out);
                return;
            }
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factorization {
    /// Every root with its multiplicity, sorted by representative.
    Split(Vec<(Fp, usize)>),
    /// A monic cofactor of positive degree has no roots in F_p.
    NonSplit {
        degree: usize,
        roots: Vec<(Fp, usize)>,
        cofactor: Poly,
    },
}

impl Factorization {
    pub fn is_split(&self) -> bool {
        matches!(self, Factorization::Split(_))
    }

    pub fn roots(&self) -> &[(Fp, usize)] {
        match self {
            Factorization::Split(r) | Factorization::NonSplit { roots: r, .. } => r,
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}x"),
                _ => format!("{c}x^{i}"),
            })
            .collect();
        write!(f, "{} (mod {})", terms.join(" + "), self.modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cube_roots_of_unity_mod_13() {
        let f = Poly::from_i64(&[-1, 0, 0, 1], 13);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fac = f.factor_into_linears(&mut rng);
        let roots: Vec<(u64, usize)> = fac.roots().iter().map(|(r, k)| (r.value(), *k)).collect();
        assert!(fac.is_split());
        assert_eq!(roots, vec![(1, 1), (3, 1), (9, 1)]);
    }

    #[test]
    fn x2_plus_1_mod_7_does_not_split() {
        let f = Poly::from_i64(&[1, 0, 1], 7);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        match f.factor_into_linears(&mut rng) {
            Factorization::NonSplit { degree, roots, .. } => {
                assert_eq!(degree, 2);
                assert!(roots.is_empty());
            }
            other => panic!("expected NonSplit, got {other:?}"),
        }
    }

    #[test]
    fn linear_and_repeated_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = Poly::from_i64(&[-5, 1], 13);
        assert_eq!(
            f.factor_into_linears(&mut rng),
            Factorization::Split(vec![(Fp::new(5, 13), 1)])
        );
        let g = Poly::from_roots(&[(Fp::new(2, 13), 3), (Fp::new(7, 13), 1)], 13);
        assert_eq!(
            g.factor_into_linears(&mut rng),
            Factorization::Split(vec![(Fp::new(2, 13), 3), (Fp::new(7, 13), 1)])
        );
    }

    #[test]
    fn characteristic_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let f = Poly::from_i64(&[0, 1, 1], 2); // x(x+1)
        assert!(f.factor_into_linears(&mut rng).is_split());
        let g = Poly::from_i64(&[1, 1, 1], 2);
        assert!(!g.factor_into_linears(&mut rng).is_split());
    }

    #[test]
    fn division_identity() {
        let a = Poly::from_i64(&[3, 0, 5, 1, 2], 17);
        let b = Poly::from_i64(&[1, 4, 1], 17);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    proptest! {
        #[test]
        fn factorization_reconstructs(coeffs in proptest::collection::vec(0u64..31, 1..9), seed in 0u64..64) {
            let p = 31;
            let f = Poly::new(coeffs.into_iter().map(|c| Fp::new(c, p)).collect(), p);
            prop_assume!(!f.is_zero());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let fac = f.factor_into_linears(&mut rng);
            let linear = Poly::from_roots(fac.roots(), p);
            let rebuilt = match &fac {
                Factorization::Split(_) => linear,
                Factorization::NonSplit { cofactor, degree, .. } => {
                    prop_assert_eq!(cofactor.degree(), Some(*degree));
                    for x in 0..p {
                        prop_assert!(!cofactor.eval(Fp::new(x, p)).is_zero());
                    }
                    linear.mul(cofactor)
                }
            };
            prop_assert_eq!(rebuilt.scale(f.leading()), f);
        }
    }
}
