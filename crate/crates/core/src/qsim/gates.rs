//! Standard single-qubit gate matrices.

use num_complex::Complex64;

/// Row-major 2x2 complex matrix: `m[row][col]`.
pub type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Pauli X.
pub fn x() -> Matrix2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

/// Pauli Z.
pub fn z() -> Matrix2 {
    [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]]
}

/// Hadamard.
pub fn h() -> Matrix2 {
    let f = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[f, f], [f, -f]]
}

/// Phase gate: diag(1, e^{i alpha}).
pub fn p(alpha: f64) -> Matrix2 {
    [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, alpha)]]
}

/// X-axis rotation by `beta`.
pub fn rx(beta: f64) -> Matrix2 {
    let c = Complex64::new((beta / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(beta / 2.0).sin());
    [[c, s], [s, c]]
}

/// Maximum entrywise deviation of `m * m^dagger` from the identity.
pub fn unitarity_defect(m: &Matrix2) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..2 {
        for c in 0..2 {
            let acc: Complex64 = m[r]
                .iter()
                .zip(&m[c])
                .map(|(x, y)| x * y.conj())
                .sum();
            let expect = if r == c { ONE } else { ZERO };
            worst = worst.max((acc - expect).norm());
        }
    }
    worst
}
