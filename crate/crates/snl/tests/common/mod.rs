//! Helpers shared by the integration suites: a pool of mixed block
//! algebras and independent oracles that avoid the library's spectral
//! code paths.

#![allow(dead_code)]

use snl::{Operator, TracialAlgebra, C64};

/// Mixed pool: single factors of every supported acceptance dimension plus
/// weighted direct sums.
pub fn algebra_pool() -> Vec<TracialAlgebra> {
    vec![
        TracialAlgebra::factor(2).unwrap(),
        TracialAlgebra::factor(3).unwrap(),
        TracialAlgebra::factor(4).unwrap(),
        TracialAlgebra::factor(5).unwrap(),
        TracialAlgebra::factor(6).unwrap(),
        TracialAlgebra::new(&[(2, 0.5), (3, 1.5)]).unwrap(),
        TracialAlgebra::new(&[(1, 2.0), (4, 0.7), (2, 1.3)]).unwrap(),
    ]
}

/// Factors of the acceptance dimensions only.
pub fn factor_pool() -> Vec<TracialAlgebra> {
    (2..=6)
        .map(|d| TracialAlgebra::factor(d).unwrap())
        .collect()
}

/// Brute-force variational value for a DIAGONAL operator on a unit-weight
/// algebra: minimum over coordinate subsets `S` with `|S| >= n - t` of the
/// largest diagonal entry over `S` (zero for the empty subset). For
/// diagonal operators the coordinate projections include the spectral
/// ones, so this reproduces the singular-value function exactly.
pub fn variational_mu_diagonal(diag: &[f64], t: usize) -> f64 {
    let n = diag.len();
    let min_size = n.saturating_sub(t);
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << n) {
        if (mask.count_ones() as usize) < min_size {
            continue;
        }
        let mut sup = 0.0f64;
        for (i, &d) in diag.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sup = sup.max(d.abs());
            }
        }
        best = best.min(sup);
    }
    best
}

/// Largest eigenvalue of the principal submatrix of a Hermitian block
/// selected by `subset`, via plain power iteration, deliberately
/// independent of the library's Jacobi kernels.
pub fn submatrix_lambda_max(dim: usize, entries: &[C64], subset: &[usize]) -> f64 {
    let m = subset.len();
    if m == 0 {
        return 0.0;
    }
    let get = |i: usize, j: usize| entries[subset[i] * dim + subset[j]];
    // Shift to make the submatrix positive definite so power iteration
    // converges to the top eigenvalue.
    let shift: f64 = (0..m)
        .map(|i| (0..m).map(|j| get(i, j).norm()).sum::<f64>())
        .fold(0.0, f64::max)
        + 1.0;
    let mut v = vec![C64::new(1.0, 0.0); m];
    let mut lambda = 0.0;
    for _ in 0..5000 {
        let mut w = vec![C64::new(0.0, 0.0); m];
        for i in 0..m {
            for (j, vj) in v.iter().enumerate() {
                w[i] += get(i, j) * vj;
            }
            w[i] += v[i] * shift;
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        for z in &mut w {
            *z /= norm;
        }
        let mut rayleigh = C64::new(0.0, 0.0);
        for i in 0..m {
            for j in 0..m {
                rayleigh += w[i].conj() * get(i, j) * w[j];
            }
        }
        let next = rayleigh.re;
        if (next - lambda).abs() <= 1e-14 * (1.0 + next.abs()) {
            lambda = next;
            break;
        }
        lambda = next;
        v = w;
    }
    lambda
}

/// Exhaustive variational upper bound for a Hermitian operator on a
/// unit-weight algebra: infimum over coordinate subset projections of the
/// top eigenvalue of the compressed operator. Coordinate subsets are a
/// strict subset of all projections, so this always dominates the
/// singular-value function.
pub fn variational_upper_bound(op: &Operator, t: usize) -> f64 {
    let algebra = op.algebra();
    let n: usize = algebra.total_dim();
    let min_size = n.saturating_sub(t);
    // Global coordinate index -> (block, local index).
    let mut coords = Vec::new();
    for (k, spec) in algebra.blocks().iter().enumerate() {
        for i in 0..spec.dim {
            coords.push((k, i));
        }
    }
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << n) {
        if (mask.count_ones() as usize) < min_size {
            continue;
        }
        let mut sup = 0.0f64;
        for (k, spec) in algebra.blocks().iter().enumerate() {
            let subset: Vec<usize> = coords
                .iter()
                .enumerate()
                .filter(|(g, (blk, _))| *blk == k && mask & (1 << g) != 0)
                .map(|(_, (_, i))| *i)
                .collect();
            if !subset.is_empty() {
                sup = sup.max(submatrix_lambda_max(spec.dim, op.block_entries(k), &subset));
            }
        }
        best = best.min(sup);
    }
    best
}
