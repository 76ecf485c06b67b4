// SPDX-License-Identifier: Apache-2.0

//! Prime field arithmetic with a distinguished root of unity.
//!
//! Elements carry their modulus so that the usual operators work without a
//! context object in scope. Mixing elements of different fields is a logic
//! error and is caught by debug assertions.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Moduli are kept below 2^31 so every product fits in a `u64`.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

const PRIME_SEARCH_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported range")]
    ModulusTooLarge(u64),
    #[error("no prime p = 1 mod {m} above {bound} found within the search cap")]
    PrimeSearchExhausted { m: u64, bound: u64 },
    #[error("root order {m} does not divide p - 1 = {}", .p - 1)]
    OrderDoesNotDivide { p: u64, m: u64 },
    #[error("{epsilon} is not a primitive {m}-th root of unity mod {p}")]
    NotPrimitive { p: u64, m: u64, epsilon: u64 },
}

/// An element of F_p.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    value: u32,
    modulus: u32,
}

impl Fp {
    pub fn new(value: u64, modulus: u64) -> Self {
        debug_assert!((2..=MAX_MODULUS).contains(&modulus));
        Fp {
            value: (value % modulus) as u32,
            modulus: modulus as u32,
        }
    }

    pub fn from_i64(value: i64, modulus: u64) -> Self {
        Fp::new(value.rem_euclid(modulus as i64) as u64, modulus)
    }

    pub fn zero(modulus: u64) -> Self {
        Fp::new(0, modulus)
    }

    pub fn one(modulus: u64) -> Self {
        Fp::new(1, modulus)
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value as u64
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.modulus as u64
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.value == 1
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = Fp::one(self.modulus());
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base *= base;
            exp >>= 1;
        }
        acc
    }

    /// Integer power allowing negative exponents; `None` for a negative power of zero.
    pub fn powi(self, exp: i64) -> Option<Self> {
        if exp >= 0 {
            Some(self.pow(exp as u64))
        } else {
            self.inv().map(|x| x.pow(exp.unsigned_abs()))
        }
    }

    pub fn inv(self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.modulus() - 2))
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let group = self.modulus() - 1;
        let mut order = group;
        for q in prime_factors(group) {
            while order.is_multiple_of(q) && self.pow(order / q).is_one() {
                order /= q;
            }
        }
        Some(order)
    }

    /// Whether `self` has an n-th root in F_p.
    pub fn is_nth_power(self, n: u64) -> bool {
        if self.is_zero() {
            return true;
        }
        let g = gcd(n, self.modulus() - 1);
        self.pow((self.modulus() - 1) / g).is_one()
    }

    /// Smallest representative t with t^n = self, if one exists.
    pub fn nth_root(self, n: u64) -> Option<Self> {
        if n == 0 {
            return if self.is_one() { Some(self) } else { None };
        }
        if self.is_zero() {
            return Some(self);
        }
        if !self.is_nth_power(n) {
            return None;
        }
        let p = self.modulus();
        (1..p).map(|t| Fp::new(t, p)).find(|t| t.pow(n) == self)
    }

    /// All n-th roots of `self` in increasing order of representative.
    pub fn nth_roots(self, n: u64) -> Vec<Self> {
        let p = self.modulus();
        if self.is_zero() {
            return vec![self];
        }
        if !self.is_nth_power(n) {
            return Vec::new();
        }
        (1..p)
            .map(|t| Fp::new(t, p))
            .filter(|t| t.pow(n) == self)
            .collect()
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, modulus: u64) -> Self {
        Fp::new(rng.gen_range(0..modulus), modulus)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(rng: &mut R, modulus: u64) -> Self {
        Fp::new(rng.gen_range(1..modulus), modulus)
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for Fp {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.value())
    }
}

impl Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let s = self.value as u64 + rhs.value as u64;
        let p = self.modulus as u64;
        Fp {
            value: if s >= p { s - p } else { s } as u32,
            modulus: self.modulus,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let value = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + (self.modulus - rhs.value)
        };
        Fp {
            value,
            modulus: self.modulus,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Fp {
            value: ((self.value as u64 * rhs.value as u64) % self.modulus as u64) as u32,
            modulus: self.modulus,
        }
    }
}

impl Div for Fp {
    type Output = Fp;
    /// Panics on division by zero.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inv().expect("division by zero in F_p")
    }
}

impl Neg for Fp {
    type Output = Fp;
    #[inline]
    fn neg(self) -> Fp {
        Fp {
            value: if self.value == 0 {
                0
            } else {
                self.modulus - self.value
            },
            modulus: self.modulus,
        }
    }
}

impl AddAssign for Fp {
    fn add_assign(&mut self, rhs: Fp) {
        *self = *self + rhs;
    }
}

impl SubAssign for Fp {
    fn sub_assign(&mut self, rhs: Fp) {
        *self = *self - rhs;
    }
}

impl MulAssign for Fp {
    fn mul_assign(&mut self, rhs: Fp) {
        *self = *self * rhs;
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest prime p with p = 1 (mod m) and p > bound.
pub fn find_prime(m: u64, bound: u64) -> Result<u64, FieldError> {
    assert!(m >= 1, "root order must be positive");
    let mut p = (bound.saturating_sub(1) / m + 1) * m + 1;
    for _ in 0..PRIME_SEARCH_CAP {
        if p > MAX_MODULUS {
            break;
        }
        if p > bound && is_prime(p) {
            return Ok(p);
        }
        p += m;
    }
    Err(FieldError::PrimeSearchExhausted { m, bound })
}

/// Smallest generator of the multiplicative group F_p^*.
pub fn multiplicative_generator(p: u64) -> Fp {
    if p == 2 {
        return Fp::one(2);
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .map(|g| Fp::new(g, p))
        .find(|g| factors.iter().all(|q| !g.pow((p - 1) / q).is_one()))
        .expect("F_p^* is cyclic")
}

/// A primitive m-th root of unity: the smallest generator of F_p^* raised to (p - 1) / m.
pub fn primitive_root_of_unity(p: u64, m: u64) -> Result<Fp, FieldError> {
    if m == 0 || !(p - 1).is_multiple_of(m) {
        return Err(FieldError::OrderDoesNotDivide { p, m });
    }
    Ok(multiplicative_generator(p).pow((p - 1) / m))
}

/// The coefficient field F_p together with a chosen primitive m-th root of unity
/// and the seed used by every randomized routine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeFieldContext {
    pub p: u64,
    pub m: u64,
    pub epsilon: Fp,
    pub seed: u64,
}

impl PrimeFieldContext {
    /// Picks the smallest admissible prime above `bound` and the canonical root.
    pub fn new(m: u64, bound: u64, seed: u64) -> Result<Self, FieldError> {
        let p = find_prime(m, bound)?;
        Self::with_prime(p, m, seed)
    }

    pub fn with_prime(p: u64, m: u64, seed: u64) -> Result<Self, FieldError> {
        if p > MAX_MODULUS {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let epsilon = primitive_root_of_unity(p, m)?;
        Ok(PrimeFieldContext {
            p,
            m,
            epsilon,
            seed,
        })
    }

    /// Uses a caller-chosen root, which must be primitive of order m.
    pub fn with_epsilon(p: u64, m: u64, epsilon: u64, seed: u64) -> Result<Self, FieldError> {
        let ctx = Self::with_prime(p, m, seed)?;
        let eps = Fp::new(epsilon, p);
        if eps.order() != Some(m) {
            return Err(FieldError::NotPrimitive { p, m, epsilon });
        }
        Ok(PrimeFieldContext {
            epsilon: eps,
            ..ctx
        })
    }

    /// Skips every validation. Only meant for negative tests that need a broken root.
    pub fn new_unchecked(p: u64, m: u64, epsilon: u64, seed: u64) -> Self {
        PrimeFieldContext {
            p,
            m,
            epsilon: Fp::new(epsilon, p),
            seed,
        }
    }

    pub fn zero(&self) -> Fp {
        Fp::zero(self.p)
    }

    pub fn one(&self) -> Fp {
        Fp::one(self.p)
    }

    pub fn elem(&self, value: i64) -> Fp {
        Fp::from_i64(value, self.p)
    }

    /// epsilon^k for any integer k.
    pub fn eps_pow(&self, k: i64) -> Fp {
        let m = self.m.max(1) as i64;
        self.epsilon.pow(k.rem_euclid(m) as u64)
    }

    /// Exponent s in [0, m) with epsilon^s = x.
    pub fn eps_log(&self, x: Fp) -> Option<u64> {
        (0..self.m.max(1)).find(|&s| self.eps_pow(s as i64) == x)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Independent stream for a labelled sub-task; the same label always yields the same stream.
    pub fn rng_for(&self, label: &[u64]) -> ChaCha8Rng {
        // splitmix-style fold keeps streams for nearby labels uncorrelated
        let mut h = self.seed ^ 0x9e37_79b9_7f4a_7c15;
        for &x in label {
            h = (h ^ x).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            h ^= h >> 31;
        }
        ChaCha8Rng::seed_from_u64(h)
    }

    pub fn check(&self) -> Result<(), FieldError> {
        if !is_prime(self.p) {
            return Err(FieldError::NotPrime(self.p));
        }
        if !(self.p - 1).is_multiple_of(self.m) {
            return Err(FieldError::OrderDoesNotDivide {
                p: self.p,
                m: self.m,
            });
        }
        if self.epsilon.order() != Some(self.m) {
            return Err(FieldError::NotPrimitive {
                p: self.p,
                m: self.m,
                epsilon: self.epsilon.value(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn find_prime_examples() {
        assert_eq!(find_prime(3, 9).unwrap(), 13);
        assert_eq!(find_prime(4, 16).unwrap(), 17);
        assert_eq!(find_prime(1, 1).unwrap(), 2);
    }

    #[test]
    fn find_prime_agrees_with_scan() {
        for m in 1..12 {
            for bound in [1u64, 5, 16, 81, 100] {
                let expected = (bound + 1..)
                    .find(|&q| is_prime(q) && q % m == 1 % m)
                    .unwrap();
                assert_eq!(
                    find_prime(m, bound).unwrap(),
                    expected,
                    "m={m} bound={bound}"
                );
            }
        }
    }

    #[test]
    fn root_of_unity_examples() {
        assert_eq!(primitive_root_of_unity(5, 2).unwrap().value(), 4);
        let r = primitive_root_of_unity(13, 3).unwrap().value();
        assert!(r == 3 || r == 9);
        assert_eq!(r, 3);
        assert_eq!(primitive_root_of_unity(7, 1).unwrap().value(), 1);
        assert!(matches!(
            primitive_root_of_unity(7, 4),
            Err(FieldError::OrderDoesNotDivide { .. })
        ));
    }

    #[test]
    fn root_has_exact_order() {
        for (p, m) in [(13, 3), (17, 4), (17, 16), (97, 3), (1297, 6), (631, 5)] {
            let e = primitive_root_of_unity(p, m).unwrap();
            for j in 1..m {
                assert!(!e.pow(j).is_one());
            }
            assert!(e.pow(m).is_one());
        }
    }

    #[test]
    fn arithmetic_and_inverses() {
        let p = 13;
        for a in 1..p {
            let x = Fp::new(a, p);
            assert!((x * x.inv().unwrap()).is_one());
            assert_eq!(x - x, Fp::zero(p));
            assert_eq!(-x + x, Fp::zero(p));
        }
        assert_eq!(Fp::zero(p).inv(), None);
        assert_eq!(Fp::from_i64(-1, p).value(), 12);
    }

    #[test]
    fn nth_roots_and_powers() {
        let p = 13;
        let cubes: Vec<u64> = (1..p).filter(|&a| Fp::new(a, p).is_nth_power(3)).collect();
        assert_eq!(cubes, vec![1, 5, 8, 12]);
        assert_eq!(Fp::new(2, p).nth_root(3), None);
        let roots = Fp::new(1, p).nth_roots(3);
        assert_eq!(
            roots.iter().map(|r| r.value()).collect::<Vec<_>>(),
            vec![1, 3, 9]
        );
        let r = Fp::new(5, p).nth_root(3).unwrap();
        assert_eq!(r.pow(3).value(), 5);
    }

    #[test]
    fn context_validation() {
        let ctx = PrimeFieldContext::new(3, 81, 7).unwrap();
        assert_eq!(ctx.p, 97);
        ctx.check().unwrap();
        assert_eq!(ctx.eps_log(ctx.eps_pow(2)), Some(2));
        assert!(PrimeFieldContext::with_epsilon(13, 3, 1, 0).is_err());
        assert!(PrimeFieldContext::with_epsilon(13, 3, 9, 0).is_ok());
        assert!(PrimeFieldContext::with_prime(15, 2, 0).is_err());
    }
}
