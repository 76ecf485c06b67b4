// SPDX-License-Identifier: Apache-2.0

//! Modules over a presented fiber algebra, stored as one matrix per generator.

use serde::Serialize;
use thiserror::Error;

use crate::field::Fp;
use crate::matrix::{DenseMatrix, LinearSpan};
use crate::presentation::{GeneratorMatrices, PresentationError, Relation, Word, WordSum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("relation `{label}` does not hold")]
    RelationFailed { label: String },
    #[error("module has {got} generator matrices, presentation has {expected}")]
    GeneratorCount { expected: usize, got: usize },
    #[error("modules act on different generator sets or fields")]
    Incompatible,
    #[error("nonzero intertwiner between irreducible modules is singular")]
    SingularIntertwiner,
    #[error("module is not irreducible")]
    NotIrreducible,
    #[error("central word does not act by a scalar")]
    NonScalarCenter,
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorRep {
    /// Values of the central words on this module, which identify its fiber.
    pub fiber: Vec<Fp>,
    gens: Vec<DenseMatrix>,
    modulus: u64,
}

impl GeneratorRep {
    pub fn new(fiber: Vec<Fp>, gens: Vec<DenseMatrix>, modulus: u64) -> Result<Self, RepError> {
        let dim = gens.first().map_or(0, |g| g.rows());
        if gens.iter().any(|g| g.shape() != (dim, dim)) {
            return Err(PresentationError::Shape.into());
        }
        Ok(GeneratorRep {
            fiber,
            gens,
            modulus,
        })
    }

    /// One-dimensional module given by generator values.
    pub fn from_scalars(fiber: Vec<Fp>, values: &[Fp], modulus: u64) -> Self {
        GeneratorRep {
            fiber,
            gens: values.iter().map(|&v| DenseMatrix::scalar(1, v)).collect(),
            modulus,
        }
    }

    pub fn dim(&self) -> usize {
        self.gens.first().map_or(0, |g| g.rows())
    }

    pub fn gens(&self) -> &[DenseMatrix] {
        &self.gens
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn matrices(&self) -> Result<GeneratorMatrices, RepError> {
        Ok(GeneratorMatrices::new(&self.gens, self.modulus)?)
    }

    pub fn eval(&self, w: &WordSum) -> Result<DenseMatrix, RepError> {
        Ok(w.eval_matrices(&self.matrices()?)?)
    }

    /// Scalars by which the given central words act.
    pub fn central_values(&self, central_words: &[Word]) -> Result<Vec<Fp>, RepError> {
        let mats = self.matrices()?;
        central_words
            .iter()
            .map(|w| {
                w.eval_matrices(&mats)?
                    .as_scalar()
                    .ok_or(RepError::NonScalarCenter)
            })
            .collect()
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &GeneratorRep) -> Result<GeneratorRep, RepError> {
        if self.gens.len() != other.gens.len() {
            return Err(RepError::Incompatible);
        }
        let (m, n) = (self.dim(), other.dim());
        let gens = self
            .gens
            .iter()
            .zip(&other.gens)
            .map(|(a, b)| {
                DenseMatrix::from_fn(m + n, m + n, self.modulus, |i, j| match (i < m, j < m) {
                    (true, true) => a[(i, j)],
                    (false, false) => b[(i - m, j - m)],
                    _ => Fp::zero(self.modulus),
                })
            })
            .collect();
        GeneratorRep::new(self.fiber.clone(), gens, self.modulus)
    }
}

/// Every relation evaluates to the zero matrix.
pub fn check_relations(
    rep: &GeneratorRep,
    relations: &[Relation],
    generator_count: usize,
) -> Result<(), RepError> {
    if rep.gens.len() != generator_count {
        return Err(RepError::GeneratorCount {
            expected: generator_count,
            got: rep.gens.len(),
        });
    }
    let mats = rep.matrices()?;
    for r in relations {
        let value = match r.poly.eval_matrices(&mats) {
            Ok(v) => v,
            Err(PresentationError::SingularGenerator(_)) => {
                return Err(RepError::RelationFailed {
                    label: r.label.clone(),
                })
            }
            Err(e) => return Err(e.into()),
        };
        if !value.is_zero() {
            return Err(RepError::RelationFailed {
                label: r.label.clone(),
            });
        }
    }
    Ok(())
}

/// Burnside: irreducible over a splitting field iff the generated matrix algebra is all of M_n.
pub fn is_irreducible(rep: &GeneratorRep) -> bool {
    let n = rep.dim();
    if n <= 1 {
        return n == 1;
    }
    let full = n * n;
    let mut span = LinearSpan::new(full, rep.modulus);
    let identity = DenseMatrix::identity(n, rep.modulus);
    span.insert(identity.entries().to_vec());
    let mut frontier = vec![identity];
    while let Some(m) = frontier.pop() {
        for g in &rep.gens {
            let next = &m * g;
            if span.insert(next.entries().to_vec()) {
                if span.dim() == full {
                    return true;
                }
                frontier.push(next);
            }
        }
    }
    span.dim() == full
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSpace {
    /// Each X satisfies X * V(g) = W(g) * X; X is dim W x dim V.
    pub basis: Vec<DenseMatrix>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn hom_space(v: &GeneratorRep, w: &GeneratorRep) -> Result<HomSpace, RepError> {
    if v.gens.len() != w.gens.len() || v.modulus != w.modulus {
        return Err(RepError::Incompatible);
    }
    let (dv, dw) = (v.dim(), w.dim());
    let p = v.modulus;
    let unknowns = dw * dv;
    let var = |r: usize, c: usize| r * dv + c;
    let mut eqs = DenseMatrix::zeros(v.gens.len() * unknowns, unknowns, p);
    for (gi, (a, b)) in v.gens.iter().zip(&w.gens).enumerate() {
        // (X A - B X)[r][c] = sum_k X[r][k] A[k][c] - sum_k B[r][k] X[k][c]
        for r in 0..dw {
            for c in 0..dv {
                let row = gi * unknowns + var(r, c);
                for k in 0..dv {
                    eqs[(row, var(r, k))] += a[(k, c)];
                }
                for k in 0..dw {
                    eqs[(row, var(k, c))] -= b[(r, k)];
                }
            }
        }
    }
    let basis = eqs
        .nullspace()
        .into_iter()
        .map(|x| DenseMatrix::new(dw, dv, x))
        .collect();
    Ok(HomSpace { basis })
}

/// Intertwiner V -> W when the irreducible modules are isomorphic.
pub fn isomorphism(v: &GeneratorRep, w: &GeneratorRep) -> Result<Option<DenseMatrix>, RepError> {
    if v.dim() != w.dim() {
        return Ok(None);
    }
    let hom = hom_space(v, w)?;
    match hom.basis.into_iter().next() {
        None => Ok(None),
        Some(x) if x.is_invertible() => Ok(Some(x)),
        Some(_) => Err(RepError::SingularIntertwiner),
    }
}

pub fn is_isomorphic(v: &GeneratorRep, w: &GeneratorRep) -> Result<bool, RepError> {
    Ok(isomorphism(v, w)?.is_some())
}

/// Generator g acts on V* by the transpose of V(S(g)).
pub fn dual(
    v: &GeneratorRep,
    antipode: &[WordSum],
    central_words: &[Word],
) -> Result<GeneratorRep, RepError> {
    let mats = v.matrices()?;
    let gens = antipode
        .iter()
        .map(|s| Ok(s.eval_matrices(&mats)?.transpose()))
        .collect::<Result<Vec<_>, RepError>>()?;
    with_fiber(gens, v.modulus, central_words)
}

/// Generator g acts on V (x) W by sum over its coproduct terms of V(left) (x) W(right).
pub fn tensor(
    v: &GeneratorRep,
    w: &GeneratorRep,
    coproduct: &[Vec<(Word, Word)>],
    central_words: &[Word],
) -> Result<GeneratorRep, RepError> {
    let (mv, mw) = (v.matrices()?, w.matrices()?);
    let n = v.dim() * w.dim();
    let gens = coproduct
        .iter()
        .map(|terms| {
            terms
                .iter()
                .try_fold(DenseMatrix::zeros(n, n, v.modulus), |acc, (l, r)| {
                    let piece = l.eval_matrices(&mv)?.kron(&r.eval_matrices(&mw)?);
                    Ok::<_, RepError>(&acc + &piece)
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    with_fiber(gens, v.modulus, central_words)
}

/// Precomposition with an algebra map given by generator images: g acts as V(images[g]).
pub fn precompose(
    v: &GeneratorRep,
    images: &[WordSum],
    central_words: &[Word],
) -> Result<GeneratorRep, RepError> {
    let mats = v.matrices()?;
    let gens = images
        .iter()
        .map(|img| Ok(img.eval_matrices(&mats)?))
        .collect::<Result<Vec<_>, RepError>>()?;
    with_fiber(gens, v.modulus, central_words)
}

fn with_fiber(
    gens: Vec<DenseMatrix>,
    modulus: u64,
    central_words: &[Word],
) -> Result<GeneratorRep, RepError> {
    let mut rep = GeneratorRep::new(Vec::new(), gens, modulus)?;
    rep.fiber = rep.central_values(central_words)?;
    Ok(rep)
}

/// Serializable view of a module for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepSummary {
    pub dim: usize,
    pub fiber: Vec<Fp>,
    pub generators: Vec<Vec<Vec<Fp>>>,
}

impl From<&GeneratorRep> for RepSummary {
    fn from(rep: &GeneratorRep) -> Self {
        RepSummary {
            dim: rep.dim(),
            fiber: rep.fiber.clone(),
            generators: rep
                .gens
                .iter()
                .map(|g| (0..g.rows()).map(|i| g.row(i).to_vec()).collect())
                .collect(),
        }
    }
}
