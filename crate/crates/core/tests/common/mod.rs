#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

//! Dense-matrix oracles for the post-selected blocks, built directly from
//! the update's linear algebra and independent of the circuit builders.

use num_complex::Complex64;
use radlbm_core::circuits::LcuParams;

/// Block index over (s, d, l): s * 2M + d * M + site.
pub fn block_dim(m: usize) -> usize {
    4 * m
}

/// Collision on the intensity sector, identity on the source sector.
pub fn collision_extended(params: &LcuParams, m: usize) -> Vec<Vec<f64>> {
    let a = params.collision_matrix();
    let dim = block_dim(m);
    let mut out = vec![vec![0.0; dim]; dim];
    for rd in 0..2 {
        for cd in 0..2 {
            for site in 0..m {
                out[rd * m + site][cd * m + site] = a[rd][cd];
            }
        }
    }
    for i in 2 * m..dim {
        out[i][i] = 1.0;
    }
    out
}

/// Source injection [[I, I], [0, I]] over the s blocks.
pub fn source_injection(m: usize) -> Vec<Vec<f64>> {
    let dim = block_dim(m);
    let mut out = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        out[i][i] = 1.0;
    }
    for i in 0..2 * m {
        out[i][i + 2 * m] = 1.0;
    }
    out
}

/// Half of the source injection (the post-selected price of two ancillas).
pub fn source_injection_half(m: usize) -> Vec<Vec<f64>> {
    let mut out = source_injection(m);
    for row in &mut out {
        for v in row {
            *v *= 0.5;
        }
    }
    out
}

/// Periodic shift: site + 1 on (s=0, d=0), site - 1 on (s=0, d=1),
/// identity on the source sector.
pub fn shift_permutation(m: usize) -> Vec<Vec<f64>> {
    let dim = block_dim(m);
    let mut out = vec![vec![0.0; dim]; dim];
    for site in 0..m {
        out[(site + 1) % m][site] = 1.0;
        out[m + (site + m - 1) % m][m + site] = 1.0;
    }
    for i in 2 * m..dim {
        out[i][i] = 1.0;
    }
    out
}

pub fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for r in 0..n {
        for k in 0..n {
            if a[r][k] == 0.0 {
                continue;
            }
            for c in 0..n {
                out[r][c] += a[r][k] * b[k][c];
            }
        }
    }
    out
}

/// Largest entrywise deviation between an extracted complex block and a
/// real oracle matrix.
pub fn max_deviation(block: &[Vec<Complex64>], oracle: &[Vec<f64>]) -> f64 {
    assert_eq!(block.len(), oracle.len());
    let mut worst = 0.0f64;
    for (brow, orow) in block.iter().zip(oracle) {
        assert_eq!(brow.len(), orow.len());
        for (b, o) in brow.iter().zip(orow) {
            worst = worst.max((b - Complex64::new(*o, 0.0)).norm());
        }
    }
    worst
}
