//! Closed-form steady state for the centered-source geometry: piecewise
//! two-exponential solutions in three regions, matched by continuity at the
//! source edges and periodicity at the domain ends.

use crate::error::{Error, Result};
use crate::rte::SourceSpec;

/// Residual bound the solved matching conditions must satisfy.
const MATCHING_TOL: f64 = 1e-10;

/// Region of the unit interval relative to the source window (1/4, 3/4).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Left,
    Center,
    Right,
}

/// Steady-state solution of the two-direction transport system.
///
/// In each region `I+ = c_p e^{omega x} + c_m e^{-omega x}` plus the
/// particular constant inside the source window; `I-` carries the `g_plus`
/// and `g_minus` multipliers on the two exponentials.
#[derive(Clone, Debug)]
pub struct AnalyticSolution {
    omega: f64,
    g_plus: f64,
    g_minus: f64,
    particular: f64,
    /// (c_p, c_m) per region: left, center, right.
    constants: [f64; 6],
    kappa: f64,
    sigma: f64,
    mu: f64,
    s0: f64,
}

impl AnalyticSolution {
    /// Decay rate sqrt(kappa (kappa - sigma)) / mu.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Multiplier on e^{omega x} in I-: (2/sigma)(kappa + mu omega) - 1.
    pub fn g_plus(&self) -> f64 {
        self.g_plus
    }

    /// Multiplier on e^{-omega x} in I-: (2/sigma)(kappa - mu omega) - 1.
    pub fn g_minus(&self) -> f64 {
        self.g_minus
    }

    /// Interior plateau constant of the source region: S0 / (2 (kappa - sigma)).
    pub fn particular(&self) -> f64 {
        self.particular
    }

    pub fn constants(&self) -> &[f64; 6] {
        &self.constants
    }

    pub fn source_strength(&self) -> f64 {
        self.s0
    }

    fn region_constants(&self, region: Region) -> (f64, f64, f64) {
        match region {
            Region::Left => (self.constants[0], self.constants[1], 0.0),
            Region::Center => (self.constants[2], self.constants[3], self.particular),
            Region::Right => (self.constants[4], self.constants[5], 0.0),
        }
    }

    /// Evaluate using a specific region's two-exponential form.
    pub fn evaluate_region(&self, region: Region, x: f64) -> (f64, f64) {
        let (c_p, c_m, part) = self.region_constants(region);
        let grow = (self.omega * x).exp();
        let decay = (-self.omega * x).exp();
        let i_plus = c_p * grow + c_m * decay + part;
        let i_minus = c_p * self.g_plus * grow + c_m * self.g_minus * decay + part;
        (i_plus, i_minus)
    }

    /// Evaluate (I+, I-) at `x` in [0, 1], selecting the region by position.
    pub fn evaluate(&self, x: f64) -> (f64, f64) {
        assert!((0.0..=1.0).contains(&x), "x = {x} outside [0, 1]");
        let region = if x < 0.25 {
            Region::Left
        } else if x < 0.75 {
            Region::Center
        } else {
            Region::Right
        };
        self.evaluate_region(region, x)
    }

    /// Residuals of the six matching conditions (continuity of I+ and I- at
    /// both source edges, periodicity of I+ and I- at the domain ends).
    pub fn condition_residuals(&self) -> [f64; 6] {
        let left_q = self.evaluate_region(Region::Left, 0.25);
        let center_q = self.evaluate_region(Region::Center, 0.25);
        let center_t = self.evaluate_region(Region::Center, 0.75);
        let right_t = self.evaluate_region(Region::Right, 0.75);
        let left_0 = self.evaluate_region(Region::Left, 0.0);
        let right_1 = self.evaluate_region(Region::Right, 1.0);
        [
            (left_q.0 - center_q.0).abs(),
            (left_q.1 - center_q.1).abs(),
            (center_t.0 - right_t.0).abs(),
            (center_t.1 - right_t.1).abs(),
            (left_0.0 - right_1.0).abs(),
            (left_0.1 - right_1.1).abs(),
        ]
    }

    /// Steady-state source value at `x` (S0 inside the window, 0 outside).
    pub fn source_at(&self, x: f64) -> f64 {
        if 0.25 < x && x < 0.75 {
            self.s0
        } else {
            0.0
        }
    }

    pub fn coefficients(&self) -> (f64, f64, f64) {
        (self.kappa, self.sigma, self.mu)
    }
}

/// Solve the steady-state matching problem for the centered-source geometry.
///
/// Requires kappa > sigma > 0 (so omega is real and positive) and a source
/// consisting of exactly the (1/4, 3/4) window.
pub fn solve_steady(kappa: f64, sigma: f64, mu: f64, source: &SourceSpec) -> Result<AnalyticSolution> {
    if !(kappa.is_finite() && sigma.is_finite() && mu.is_finite()) || mu <= 0.0 {
        return Err(Error::Config("kappa, sigma, mu must be finite with mu > 0".into()));
    }
    if !(kappa > sigma && sigma > 0.0) {
        return Err(Error::Domain(format!(
            "steady solution requires kappa > sigma > 0 (got kappa = {kappa}, sigma = {sigma})"
        )));
    }
    let s0 = match source.segments.as_slice() {
        [seg] if (seg.x_lo - 0.25).abs() < 1e-12 && (seg.x_hi - 0.75).abs() < 1e-12 => seg.value,
        _ => {
            return Err(Error::Domain(
                "steady solution supports exactly one source segment on (1/4, 3/4)".into(),
            ))
        }
    };

    let omega = (kappa * (kappa - sigma)).sqrt() / mu;
    let g_plus = (2.0 / sigma) * (kappa + mu * omega) - 1.0;
    let g_minus = (2.0 / sigma) * (kappa - mu * omega) - 1.0;
    let particular = s0 / (2.0 * (kappa - sigma));

    // Unknowns (c_p, c_m) per region, ordered left, center, right.
    let e = |s: f64| (omega * s).exp();
    let q = 0.25;
    let t = 0.75;
    let matrix = [
        // I+ continuity at 1/4.
        [e(q), e(-q), -e(q), -e(-q), 0.0, 0.0],
        // I- continuity at 1/4.
        [g_plus * e(q), g_minus * e(-q), -g_plus * e(q), -g_minus * e(-q), 0.0, 0.0],
        // I+ continuity at 3/4.
        [0.0, 0.0, e(t), e(-t), -e(t), -e(-t)],
        // I- continuity at 3/4.
        [0.0, 0.0, g_plus * e(t), g_minus * e(-t), -g_plus * e(t), -g_minus * e(-t)],
        // I+ periodicity: I+(0) = I+(1).
        [1.0, 1.0, 0.0, 0.0, -e(1.0), -e(-1.0)],
        // I- periodicity.
        [g_plus, g_minus, 0.0, 0.0, -g_plus * e(1.0), -g_minus * e(-1.0)],
    ];
    let rhs = [particular, particular, -particular, -particular, 0.0, 0.0];
    let constants = solve_dense(matrix, rhs)?;

    let solution = AnalyticSolution {
        omega,
        g_plus,
        g_minus,
        particular,
        constants,
        kappa,
        sigma,
        mu,
        s0,
    };
    let residuals = solution.condition_residuals();
    if residuals.iter().any(|r| !r.is_finite() || *r >= MATCHING_TOL) {
        return Err(Error::Numeric(format!(
            "matching conditions not satisfied (residuals {residuals:?})"
        )));
    }
    Ok(solution)
}

/// Gaussian elimination with partial pivoting on a 6x6 system.
fn solve_dense(mut a: [[f64; 6]; 6], mut b: [f64; 6]) -> Result<[f64; 6]> {
    let n = 6;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| a[r1][col].abs().total_cmp(&a[r2][col].abs()))
            .unwrap();
        let pivot = a[pivot_row][col];
        if !pivot.is_finite() || pivot.abs() < 1e-14 {
            return Err(Error::Numeric(format!(
                "singular matching system (pivot {pivot:.3e} in column {col})"
            )));
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        let pivot_vals = a[col];
        for row in col + 1..n {
            let factor = a[row][col] / pivot_vals[col];
            for (entry, pv) in a[row].iter_mut().zip(&pivot_vals).skip(col) {
                *entry -= factor * pv;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = [0.0; 6];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_solution() -> AnalyticSolution {
        solve_steady(2.5, 0.5, 1.0, &SourceSpec::centered(1.0)).unwrap()
    }

    #[test]
    fn zero_source_gives_identically_zero_solution() {
        let sol = solve_steady(2.5, 0.5, 1.0, &SourceSpec::centered(0.0)).unwrap();
        assert!(sol.constants().iter().all(|&c| c.abs() < 1e-14));
        for x in [0.0, 0.3, 0.5, 0.9, 1.0] {
            let (p, m) = sol.evaluate(x);
            assert!(p.abs() < 1e-14 && m.abs() < 1e-14);
        }
    }

    #[test]
    fn reference_constants_match_closed_forms() {
        let sol = reference_solution();
        assert!((sol.omega() - 5.0f64.sqrt()).abs() < 1e-12);
        assert!((sol.g_plus() - (4.0 * (2.5 + 5.0f64.sqrt()) - 1.0)).abs() < 1e-12);
        assert!((sol.g_minus() - (4.0 * (2.5 - 5.0f64.sqrt()) - 1.0)).abs() < 1e-12);
        assert_eq!(sol.particular(), 0.25);
    }

    #[test]
    fn boundary_values_agree_from_both_regions() {
        let sol = reference_solution();
        for (l, r, x) in [
            (Region::Left, Region::Center, 0.25),
            (Region::Center, Region::Right, 0.75),
        ] {
            let a = sol.evaluate_region(l, x);
            let b = sol.evaluate_region(r, x);
            assert!((a.0 - b.0).abs() < 1e-10);
            assert!((a.1 - b.1).abs() < 1e-10);
        }
    }

    #[test]
    fn center_of_domain_is_direction_symmetric() {
        let sol = reference_solution();
        let (p, m) = sol.evaluate(0.5);
        assert!((p - m).abs() < 1e-10);
    }

    #[test]
    fn domain_ends_match_periodically() {
        let sol = reference_solution();
        let a = sol.evaluate(0.0);
        let b = sol.evaluate(1.0);
        assert!((a.0 - b.0).abs() < 1e-10);
        assert!((a.1 - b.1).abs() < 1e-10);
    }

    #[test]
    fn mirror_symmetry_swaps_directions() {
        let sol = reference_solution();
        for k in 0..=100 {
            let x = k as f64 / 100.0;
            let (p, _) = sol.evaluate(x);
            let (_, m) = sol.evaluate(1.0 - x);
            assert!((p - m).abs() < 1e-10, "asymmetry at x = {x}");
        }
    }

    #[test]
    fn degenerate_coefficients_rejected() {
        let src = SourceSpec::centered(1.0);
        assert!(matches!(
            solve_steady(0.5, 0.5, 1.0, &src),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            solve_steady(0.4, 0.5, 1.0, &src),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            solve_steady(2.5, 0.0, 1.0, &src),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn off_geometry_sources_rejected() {
        let src = SourceSpec::new(vec![crate::rte::SourceSegment {
            x_lo: 0.2,
            x_hi: 0.6,
            value: 1.0,
        }])
        .unwrap();
        assert!(matches!(
            solve_steady(2.5, 0.5, 1.0, &src),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn finite_difference_ode_residual_is_small() {
        let sol = reference_solution();
        let (kappa, sigma, mu) = sol.coefficients();
        let h = 1e-6;
        let mut worst = 0.0f64;
        for k in 0..1000 {
            let x = 0.001 + 0.998 * k as f64 / 999.0;
            // Keep the stencil inside one region.
            if (x - 0.25).abs() < 2.0 * h || (x - 0.75).abs() < 2.0 * h {
                continue;
            }
            let (p0, m0) = sol.evaluate(x);
            let (p_hi, m_hi) = sol.evaluate(x + h);
            let (p_lo, m_lo) = sol.evaluate(x - h);
            let dp = (p_hi - p_lo) / (2.0 * h);
            let dm = (m_hi - m_lo) / (2.0 * h);
            let src = sol.source_at(x);
            let r1 = mu * dp - (-kappa * p0 + sigma / 2.0 * (p0 + m0) + src / 2.0);
            let r2 = -mu * dm - (-kappa * m0 + sigma / 2.0 * (p0 + m0) + src / 2.0);
            worst = worst.max(r1.abs()).max(r2.abs());
        }
        assert!(worst < 1e-6, "worst residual {worst}");
    }
}
