// SPDX-License-Identifier: Apache-2.0

//! Trace functions on a fiber algebra, the Cayley-Hamilton identity built from
//! traces of powers, and the discriminant level read off the trace Gram matrix.

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, StructureAlgebra};
use crate::field::Fp;
use crate::matrix::DenseMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("Newton recurrence divides by 1..={n}, needs p > {n} (p = {p})")]
    CharacteristicTooSmall { p: u64, n: usize },
    #[error("need {needed} power sums, got {got}")]
    TooFewPowerSums { needed: usize, got: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceKind {
    Regular,
    Custom,
}

/// A linear functional, stored by its values on the algebra basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceFunction {
    pub kind: TraceKind,
    values: Vec<Fp>,
}

impl TraceFunction {
    pub fn regular(alg: &StructureAlgebra) -> Self {
        TraceFunction {
            kind: TraceKind::Regular,
            values: alg.regular_trace_values(),
        }
    }

    pub fn custom(values: Vec<Fp>) -> Self {
        TraceFunction {
            kind: TraceKind::Custom,
            values,
        }
    }

    pub fn values(&self) -> &[Fp] {
        &self.values
    }

    pub fn eval(&self, x: &[Fp]) -> Fp {
        x.iter()
            .zip(&self.values)
            .fold(Fp::zero(self.modulus()), |acc, (&a, &t)| acc + a * t)
    }

    fn modulus(&self) -> u64 {
        self.values.first().map_or(2, |v| v.modulus())
    }

    /// tr(b_i b_j) = tr(b_j b_i) on all basis pairs.
    pub fn is_cyclic(&self, alg: &StructureAlgebra) -> bool {
        gram_matrix(alg, self) == gram_matrix(alg, self).transpose()
    }
}

/// sigma_1..sigma_n from psi_1..psi_n via i sigma_i = sum_k (-1)^(k-1) sigma_(i-k) psi_k.
pub fn power_sums_to_elementary(psi: &[Fp], n: usize, modulus: u64) -> Result<Vec<Fp>, TraceError> {
    if modulus <= n as u64 {
        return Err(TraceError::CharacteristicTooSmall { p: modulus, n });
    }
    if psi.len() < n {
        return Err(TraceError::TooFewPowerSums {
            needed: n,
            got: psi.len(),
        });
    }
    let mut sigma = Vec::with_capacity(n + 1);
    sigma.push(Fp::one(modulus));
    for i in 1..=n {
        let mut acc = Fp::zero(modulus);
        for k in 1..=i {
            let term = sigma[i - k] * psi[k - 1];
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        sigma.push(acc * Fp::new(i as u64, modulus).inv().expect("p > n"));
    }
    sigma.remove(0);
    Ok(sigma)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChFailure {
    /// Coordinates of the offending element, or empty when tr(1) is wrong.
    pub element: Vec<Fp>,
    pub residual: Vec<Fp>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChReport {
    pub degree: usize,
    pub trace_of_unit: Fp,
    pub elements_checked: usize,
    pub failure: Option<ChFailure>,
}

impl ChReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// p_{n,a}(a) for the degree-n characteristic polynomial built from traces of powers.
pub fn characteristic_residual(
    alg: &StructureAlgebra,
    tr: &TraceFunction,
    n: usize,
    a: &[Fp],
) -> Result<Vec<Fp>, TraceError> {
    let mut powers = Vec::with_capacity(n + 1);
    powers.push(alg.unit().to_vec());
    for i in 0..n {
        let next = alg.mul(&powers[i], a);
        powers.push(next);
    }
    let psi: Vec<Fp> = powers[1..].iter().map(|x| tr.eval(x)).collect();
    let sigma = power_sums_to_elementary(&psi, n, alg.modulus())?;
    let mut residual = powers[n].clone();
    for (i, &s) in sigma.iter().enumerate() {
        let i = i + 1;
        let c = if i % 2 == 1 { -s } else { s };
        for (r, &x) in residual.iter_mut().zip(&powers[n - i]) {
            *r += c * x;
        }
    }
    Ok(residual)
}

/// Checks tr(1) = n and p_{n,a}(a) = 0 on every basis element plus `samples` random ones.
pub fn cayley_hamilton_check<R: Rng + ?Sized>(
    alg: &StructureAlgebra,
    tr: &TraceFunction,
    n: usize,
    samples: usize,
    rng: &mut R,
) -> Result<ChReport, TraceError> {
    let p = alg.modulus();
    let trace_of_unit = tr.eval(alg.unit());
    let mut report = ChReport {
        degree: n,
        trace_of_unit,
        elements_checked: 0,
        failure: None,
    };
    if trace_of_unit != Fp::new(n as u64, p) {
        report.failure = Some(ChFailure {
            element: Vec::new(),
            residual: Vec::new(),
            reason: format!("tr(1) = {trace_of_unit}, expected {n}"),
        });
        return Ok(report);
    }
    let basis = (0..alg.dim()).map(|i| alg.basis_vector(i));
    let random: Vec<Vec<Fp>> = (0..samples).map(|_| alg.random_element(rng)).collect();
    for a in basis.chain(random) {
        let residual = characteristic_residual(alg, tr, n, &a)?;
        report.elements_checked += 1;
        if residual.iter().any(|x| !x.is_zero()) {
            report.failure = Some(ChFailure {
                element: a,
                residual,
                reason: "p_{n,a}(a) is nonzero".into(),
            });
            break;
        }
    }
    Ok(report)
}

/// G[i][j] = tr(b_i b_j).
pub fn gram_matrix(alg: &StructureAlgebra, tr: &TraceFunction) -> DenseMatrix {
    alg.trace_form(tr.values())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscriminantReport {
    pub gram_rank: usize,
    /// Smallest k at which every k x k trace determinant vanishes at this point.
    pub lowest_vanishing_level: usize,
    pub sd_crosscheck: usize,
    pub agrees: bool,
}

pub fn discriminant_level(
    alg: &StructureAlgebra,
    tr: &TraceFunction,
) -> Result<DiscriminantReport, TraceError> {
    let gram_rank = gram_matrix(alg, tr).rank();
    let sd = alg.sd()?;
    Ok(DiscriminantReport {
        gram_rank,
        lowest_vanishing_level: gram_rank + 1,
        sd_crosscheck: sd,
        agrees: gram_rank == sd,
    })
}

/// sd * |Stab(V)| == |G0| * dim(V)^2.
pub fn sd_formula_check(
    sd: usize,
    stabilizer_order: usize,
    g0_order: usize,
    module_dim: usize,
) -> bool {
    sd * stabilizer_order == g0_order * module_dim * module_dim
}
