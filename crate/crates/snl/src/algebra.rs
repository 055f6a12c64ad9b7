//! Finite direct sums of matrix factors with a weighted trace.
//!
//! The model is `M = M_{n_1}(C) ⊕ ... ⊕ M_{n_m}(C)` together with the
//! faithful trace `tau(x) = sum_k w_k * Tr(x_k)`, `w_k > 0`. Every value in
//! this crate lives in such an algebra: an [`Operator`] is one dense complex
//! matrix per block, and all arithmetic is blockwise.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{jacobi_eig, Matrix};
use crate::report::VerificationReport;

pub type C64 = Complex64;

/// Largest matrix block accepted; the solvers are tuned for desk scale.
pub const MAX_BLOCK_DIM: usize = 16;
/// Largest number of blocks accepted.
pub const MAX_BLOCKS: usize = 8;

/// One summand of the algebra: a full matrix factor of size `dim` whose
/// trace enters `tau` with weight `weight`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub dim: usize,
    pub weight: f64,
}

/// Block structure plus trace weights; immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct TracialAlgebra {
    blocks: Arc<Vec<BlockSpec>>,
}

impl TracialAlgebra {
    /// Builds the algebra from `(dim, weight)` pairs, validating
    /// faithfulness (`weight > 0`), non-degeneracy (`dim >= 1`) and the
    /// desk-scale caps.
    pub fn new(blocks: &[(usize, f64)]) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidAlgebra("no blocks".into()));
        }
        if blocks.len() > MAX_BLOCKS {
            return Err(Error::InvalidAlgebra(format!(
                "{} blocks exceeds the cap of {MAX_BLOCKS}",
                blocks.len()
            )));
        }
        for &(dim, weight) in blocks {
            if dim == 0 || dim > MAX_BLOCK_DIM {
                return Err(Error::InvalidAlgebra(format!(
                    "block dimension {dim} outside 1..={MAX_BLOCK_DIM}"
                )));
            }
            if !(weight > 0.0) || !weight.is_finite() {
                return Err(Error::InvalidAlgebra(format!(
                    "trace weight {weight} must be positive and finite"
                )));
            }
        }
        Ok(TracialAlgebra {
            blocks: Arc::new(
                blocks
                    .iter()
                    .map(|&(dim, weight)| BlockSpec { dim, weight })
                    .collect(),
            ),
        })
    }

    /// Single matrix factor of size `dim` with unit trace weight.
    pub fn factor(dim: usize) -> Result<Self> {
        TracialAlgebra::new(&[(dim, 1.0)])
    }

    pub fn blocks(&self) -> &[BlockSpec] {
        &self.blocks
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_factor(&self) -> bool {
        self.blocks.len() == 1
    }

    /// tau(1) = sum_k w_k n_k; finite and positive by construction.
    pub fn total_trace(&self) -> f64 {
        self.blocks.iter().map(|b| b.weight * b.dim as f64).sum()
    }

    /// Total matrix dimension across blocks.
    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim).sum()
    }
}

/// Numerical comparison thresholds: an absolute floor plus a scale-relative
/// term. All operator equalities in this crate are decided as
/// `|x - y| <= abs_tol + rel_tol * scale`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-9,
        }
    }
}

impl ToleranceConfig {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        if !(abs_tol >= 0.0) || !(rel_tol >= 0.0) {
            return Err(Error::InvalidConfig(
                "tolerances must be nonnegative".into(),
            ));
        }
        Ok(ToleranceConfig { abs_tol, rel_tol })
    }

    /// Allowed slack at the given scale.
    pub fn slack(&self, scale: f64) -> f64 {
        self.abs_tol + self.rel_tol * scale
    }
}

/// A block-diagonal element of a [`TracialAlgebra`].
#[derive(Clone, Debug)]
pub struct Operator {
    algebra: TracialAlgebra,
    blocks: Vec<Matrix>,
}

impl Operator {
    pub fn zero(algebra: &TracialAlgebra) -> Operator {
        Operator {
            algebra: algebra.clone(),
            blocks: algebra
                .blocks()
                .iter()
                .map(|b| Matrix::zero(b.dim))
                .collect(),
        }
    }

    pub fn identity(algebra: &TracialAlgebra) -> Operator {
        Operator {
            algebra: algebra.clone(),
            blocks: algebra
                .blocks()
                .iter()
                .map(|b| Matrix::identity(b.dim))
                .collect(),
        }
    }

    /// Builds an operator entry by entry; `f(block, row, col)`.
    pub fn from_fn(
        algebra: &TracialAlgebra,
        mut f: impl FnMut(usize, usize, usize) -> C64,
    ) -> Operator {
        let blocks = algebra
            .blocks()
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let mut m = Matrix::zero(b.dim);
                for i in 0..b.dim {
                    for j in 0..b.dim {
                        m.set(i, j, f(k, i, j));
                    }
                }
                m
            })
            .collect();
        Operator {
            algebra: algebra.clone(),
            blocks,
        }
    }

    /// Builds from row-major per-block entry lists; shapes must match the
    /// algebra exactly and entries must be finite.
    pub fn from_block_data(algebra: &TracialAlgebra, data: Vec<Vec<C64>>) -> Result<Operator> {
        if data.len() != algebra.n_blocks() {
            return Err(Error::InvalidOperator(format!(
                "expected {} blocks, got {}",
                algebra.n_blocks(),
                data.len()
            )));
        }
        let mut blocks = Vec::with_capacity(data.len());
        for (spec, entries) in algebra.blocks().iter().zip(data) {
            if entries.len() != spec.dim * spec.dim {
                return Err(Error::InvalidOperator(format!(
                    "block of dimension {} needs {} entries, got {}",
                    spec.dim,
                    spec.dim * spec.dim,
                    entries.len()
                )));
            }
            let m = Matrix::from_data(spec.dim, entries);
            if !m.all_finite() {
                return Err(Error::InvalidOperator(
                    "non-finite entry (NaN or infinity)".into(),
                ));
            }
            blocks.push(m);
        }
        Ok(Operator {
            algebra: algebra.clone(),
            blocks,
        })
    }

    /// Diagonal operator; `entries` fills the diagonals block by block and
    /// must have length `total_dim`.
    pub fn diagonal(algebra: &TracialAlgebra, entries: &[f64]) -> Result<Operator> {
        if entries.len() != algebra.total_dim() {
            return Err(Error::InvalidOperator(format!(
                "diagonal needs {} entries, got {}",
                algebra.total_dim(),
                entries.len()
            )));
        }
        let mut it = entries.iter();
        Ok(Operator::from_fn(algebra, |_, i, j| {
            if i == j {
                C64::new(*it.next().unwrap(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    pub fn algebra(&self) -> &TracialAlgebra {
        &self.algebra
    }

    /// Row-major entries of one block.
    pub fn block_entries(&self, k: usize) -> &[C64] {
        &self.blocks[k].data
    }

    pub fn entry(&self, block: usize, i: usize, j: usize) -> C64 {
        self.blocks[block].get(i, j)
    }

    pub(crate) fn block_matrices(&self) -> &[Matrix] {
        &self.blocks
    }

    pub(crate) fn from_matrices(algebra: &TracialAlgebra, blocks: Vec<Matrix>) -> Operator {
        debug_assert_eq!(blocks.len(), algebra.n_blocks());
        Operator {
            algebra: algebra.clone(),
            blocks,
        }
    }

    fn same_algebra(&self, other: &Operator) -> Result<()> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// tau(x) = sum_k w_k Tr(x_k); real for Hermitian input.
    pub fn trace(&self) -> C64 {
        self.algebra
            .blocks()
            .iter()
            .zip(&self.blocks)
            .map(|(spec, m)| m.trace() * spec.weight)
            .sum()
    }

    /// Conjugate transpose, blockwise.
    pub fn adjoint(&self) -> Operator {
        Operator {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(Matrix::adjoint).collect(),
        }
    }

    pub fn multiply(&self, other: &Operator) -> Result<Operator> {
        self.same_algebra(other)?;
        Ok(Operator {
            algebra: self.algebra.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.mul(b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.same_algebra(other)?;
        Ok(Operator {
            algebra: self.algebra.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.same_algebra(other)?;
        Ok(Operator {
            algebra: self.algebra.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    pub fn scale(&self, c: C64) -> Operator {
        Operator {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn scale_re(&self, c: f64) -> Operator {
        self.scale(C64::new(c, 0.0))
    }

    /// Hermitian part (x + x*)/2.
    pub fn hermitian_part(&self) -> Operator {
        Operator {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(Matrix::hermitize).collect(),
        }
    }

    /// Eigenvalues of the Hermitian part, blockwise, unsorted.
    pub(crate) fn hermitian_eigenvalues(&self) -> Result<Vec<Vec<f64>>> {
        self.blocks
            .iter()
            .map(|m| jacobi_eig(m).map(|(lam, _)| lam))
            .collect()
    }

    /// Operator norm: the largest singular value across blocks.
    pub fn norm(&self) -> f64 {
        crate::spectral::op_norm(self)
    }

    /// Tolerance-based equality `|x - y| <= abs + rel * max(|x|, |y|)`.
    pub fn approx_eq(&self, other: &Operator, tol: &ToleranceConfig) -> Result<bool> {
        let diff = self.sub(other)?;
        let scale = self.norm().max(other.norm());
        Ok(diff.norm() <= tol.slack(scale))
    }

    /// Hermitian within tolerance: `|x - x*| <= abs + rel |x|`.
    pub fn is_hermitian(&self, tol: &ToleranceConfig) -> bool {
        let defect = self.sub(&self.adjoint()).expect("same algebra").norm();
        defect <= tol.slack(self.norm())
    }

    /// Positive within tolerance: Hermitian with min eigenvalue bounded
    /// below by `-(abs + rel |x|)`.
    pub fn is_positive(&self, tol: &ToleranceConfig) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        let herm = self.hermitian_part();
        let eigs = match herm.hermitian_eigenvalues() {
            Ok(e) => e,
            Err(_) => return false,
        };
        let mut min_eig = f64::INFINITY;
        let mut max_abs: f64 = 0.0;
        for lam in eigs.iter().flatten() {
            min_eig = min_eig.min(*lam);
            max_abs = max_abs.max(lam.abs());
        }
        if !min_eig.is_finite() {
            // Zero-dimensional cannot happen; empty iteration means dim 0.
            return true;
        }
        min_eig >= -tol.slack(max_abs)
    }

    /// Projection within tolerance: Hermitian and idempotent.
    pub fn is_projection(&self, tol: &ToleranceConfig) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        let sq = self.multiply(self).expect("same algebra");
        let defect = sq.sub(self).expect("same algebra").norm();
        defect <= tol.slack(1.0_f64.max(self.norm()))
    }
}

/// Compares `tau((x*x)^k)` with `tau((x x*)^k)`; the two agree for every
/// positive integer power because the trace is tracial.
pub fn trace_commutation_check(x: &Operator, k: u32, tol: &ToleranceConfig) -> VerificationReport {
    assert!(k >= 1, "power must be a positive integer");
    let xs = x.adjoint();
    let left_base = xs.multiply(x).expect("same algebra");
    let right_base = x.multiply(&xs).expect("same algebra");
    let pow = |base: &Operator| {
        let mut acc = base.clone();
        for _ in 1..k {
            acc = acc.multiply(base).expect("same algebra");
        }
        acc.trace().re
    };
    let t_left = pow(&left_base);
    let t_right = pow(&right_base);
    let scale = t_left.abs().max(t_right.abs());
    let diff = (t_left - t_right).abs();
    let mut report = VerificationReport::from_margin("trace-commutation", -diff, scale, tol);
    report.insert_detail("trace_left", t_left);
    report.insert_detail("trace_right", t_right);
    report.insert_detail("power", k as f64);
    report
}

// --- JSON wire format -----------------------------------------------------
//
// {"blocks": [{"dim": n, "weight": w}, ...],
//  "matrices": [[[re, im], ...], ...]}        row-major per block
//
// serde_json emits the shortest decimal that parses back to the identical
// IEEE-754 double, so round-trips are bit-exact.

#[derive(Serialize, Deserialize)]
struct OperatorJson {
    blocks: Vec<BlockSpec>,
    matrices: Vec<Vec<[f64; 2]>>,
}

impl From<&Operator> for OperatorJson {
    fn from(op: &Operator) -> Self {
        OperatorJson {
            blocks: op.algebra.blocks().to_vec(),
            matrices: op
                .blocks
                .iter()
                .map(|m| m.data.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }
}

impl TryFrom<OperatorJson> for Operator {
    type Error = Error;

    fn try_from(json: OperatorJson) -> Result<Operator> {
        let specs: Vec<(usize, f64)> = json.blocks.iter().map(|b| (b.dim, b.weight)).collect();
        let algebra = TracialAlgebra::new(&specs)?;
        let data = json
            .matrices
            .into_iter()
            .map(|entries| {
                entries
                    .into_iter()
                    .map(|[re, im]| C64::new(re, im))
                    .collect()
            })
            .collect();
        Operator::from_block_data(&algebra, data)
    }
}

impl Serialize for Operator {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        OperatorJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let json = OperatorJson::deserialize(deserializer)?;
        Operator::try_from(json).map_err(serde::de::Error::custom)
    }
}

impl Operator {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("operator serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Operator> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn algebra_validation() {
        assert!(TracialAlgebra::new(&[]).is_err());
        assert!(TracialAlgebra::new(&[(0, 1.0)]).is_err());
        assert!(TracialAlgebra::new(&[(2, 0.0)]).is_err());
        assert!(TracialAlgebra::new(&[(2, -1.0)]).is_err());
        assert!(TracialAlgebra::new(&[(17, 1.0)]).is_err());
        let alg = TracialAlgebra::new(&[(2, 1.0), (3, 0.5)]).unwrap();
        assert_eq!(alg.total_trace(), 2.0 + 1.5);
        assert_eq!(alg.total_dim(), 5);
    }

    #[test]
    fn trace_of_identity_counts_weighted_dims() {
        let alg = TracialAlgebra::new(&[(2, 1.0)]).unwrap();
        assert_eq!(Operator::identity(&alg).trace().re, 2.0);
    }

    #[test]
    fn trace_diagonal_examples() {
        let alg = TracialAlgebra::new(&[(2, 1.0)]).unwrap();
        let x = Operator::diagonal(&alg, &[3.0, 1.0]).unwrap();
        assert_eq!(x.trace().re, 4.0);

        let half = TracialAlgebra::new(&[(2, 0.5)]).unwrap();
        let y = Operator::diagonal(&half, &[3.0, 1.0]).unwrap();
        assert_eq!(y.trace().re, 2.0);
    }

    #[test]
    fn adjoint_and_multiply_basics() {
        let alg = TracialAlgebra::new(&[(2, 1.0)]).unwrap();
        let id = Operator::identity(&alg);
        assert!(id.adjoint().approx_eq(&id, &tol()).unwrap());

        let nil = Operator::from_block_data(
            &alg,
            vec![vec![
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ]],
        )
        .unwrap();
        assert!(nil.multiply(&id).unwrap().approx_eq(&nil, &tol()).unwrap());
        let adj = nil.adjoint();
        assert_eq!(adj.entry(0, 1, 0), C64::new(1.0, 0.0));
        assert_eq!(adj.entry(0, 0, 1), C64::new(0.0, 0.0));
    }

    #[test]
    fn predicates_on_small_examples() {
        let alg = TracialAlgebra::new(&[(2, 1.0)]).unwrap();
        let id = Operator::identity(&alg);
        assert!(id.is_hermitian(&tol()));
        assert!(id.is_positive(&tol()));
        assert!(id.is_projection(&tol()));

        let signs = Operator::diagonal(&alg, &[1.0, -1.0]).unwrap();
        assert!(signs.is_hermitian(&tol()));
        assert!(!signs.is_positive(&tol()));

        let nil = Operator::from_block_data(
            &alg,
            vec![vec![
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ]],
        )
        .unwrap();
        assert!(!nil.is_hermitian(&tol()));
    }

    #[test]
    fn mismatched_algebras_are_rejected() {
        let a = TracialAlgebra::new(&[(2, 1.0)]).unwrap();
        let b = TracialAlgebra::new(&[(2, 0.5)]).unwrap();
        let x = Operator::identity(&a);
        let y = Operator::identity(&b);
        assert!(matches!(x.multiply(&y), Err(Error::AlgebraMismatch)));
        assert!(matches!(x.add(&y), Err(Error::AlgebraMismatch)));
    }

    #[test]
    fn non_finite_entries_rejected() {
        let alg = TracialAlgebra::new(&[(1, 1.0)]).unwrap();
        let bad = Operator::from_block_data(&alg, vec![vec![C64::new(f64::NAN, 0.0)]]);
        assert!(bad.is_err());
    }

    #[test]
    fn trace_commutation_rank_one() {
        let alg = TracialAlgebra::new(&[(2, 1.0)]).unwrap();
        let nil = Operator::from_block_data(
            &alg,
            vec![vec![
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ]],
        )
        .unwrap();
        let report = trace_commutation_check(&nil, 1, &tol());
        assert!(report.passed);
        assert_eq!(report.details["trace_left"], 1.0);
        assert_eq!(report.details["trace_right"], 1.0);
    }

    #[test]
    fn trace_commutation_hermitian_exact() {
        let alg = TracialAlgebra::new(&[(3, 1.0)]).unwrap();
        let h = Operator::diagonal(&alg, &[2.0, -1.0, 0.5]).unwrap();
        for k in 1..=4 {
            let report = trace_commutation_check(&h, k, &tol());
            assert!(report.passed);
            assert_eq!(report.worst_margin, 0.0);
        }
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let alg = TracialAlgebra::new(&[(2, 0.3), (1, 1.7)]).unwrap();
        let x = Operator::from_fn(&alg, |k, i, j| {
            C64::new(
                0.1 + (k * 17 + i * 3 + j) as f64 * 0.37,
                -1.0 / (1.0 + (i + 2 * j) as f64),
            )
        });
        let s = x.to_json();
        let y = Operator::from_json(&s).unwrap();
        assert_eq!(x.algebra(), y.algebra());
        for k in 0..alg.n_blocks() {
            assert_eq!(x.block_entries(k), y.block_entries(k));
        }
    }
}
