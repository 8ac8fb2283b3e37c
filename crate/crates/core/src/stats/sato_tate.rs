use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::quadrature::adaptive_simpson;
use crate::{Error, Result};

/// Quadrature tolerance for the closed-interval constants.
const QUAD_TOL: f64 = 1e-13;

/// `(2/π) sin²ϑ`.
pub fn st_density(theta: f64) -> f64 {
    let s = theta.sin();
    2.0 / PI * s * s
}

/// `(2/π) ∫_0^α sin²ϑ dϑ = α/π - sin(2α)/(2π)`.
pub fn st_cdf(alpha: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&alpha) {
        return Err(Error::Domain(alpha, "Sato–Tate CDF needs 0 <= α <= π"));
    }
    Ok((alpha / PI - (2.0 * alpha).sin() / (2.0 * PI)).clamp(0.0, 1.0))
}

/// `E[F(2|cos ϑ|)]` under the Sato–Tate law.
///
/// Both halves of `[0, π]` contribute equally, and on `[0, π/2]` the
/// substitution `ϑ = π/2 - (π/2)t⁴` flattens the behaviour of `F` near
/// `2cos ϑ = 0` (kinks for fractional powers, the log singularity), so
/// the transformed integrand is finite on `[0, 1]`.
pub fn st_even_moment<F: Fn(f64) -> f64>(f: F, tol: f64) -> f64 {
    let g = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        let t4 = t * t * t * t;
        let phi = FRAC_PI_2 * t4; // π/2 - ϑ
        let u = 2.0 * phi.sin();
        let c = phi.cos();
        let v = f(u) * c * c * 2.0 * PI * t * t * t;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    4.0 / PI * adaptive_simpson(g, 0.0, 1.0, tol * PI / 4.0)
}

/// `h(γ) = (2/π) ∫_0^π (2|cos ϑ|)^γ sin²ϑ dϑ`.
pub fn h_gamma(gamma: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&gamma) {
        return Err(Error::Domain(gamma, "h(γ) needs 0 <= γ <= 2"));
    }
    Ok(st_even_moment(|u| u.powf(gamma), QUAD_TOL))
}

/// `(m1, m2)` with `m_j = (2/π) ∫_0^2 (log u)^j √(1 - (u/2)²) du`.
pub fn st_log_moments() -> (f64, f64) {
    let m1 = st_even_moment(|u| u.ln(), QUAD_TOL);
    let m2 = st_even_moment(|u| u.ln() * u.ln(), QUAD_TOL);
    (m1, m2)
}

/// `∫_0^π cos ϑ sin²ϑ dϑ`, split at π/2.
pub fn signed_cos_integral() -> f64 {
    let f = |t: f64| t.cos() * t.sin() * t.sin();
    adaptive_simpson(f, 0.0, FRAC_PI_2, QUAD_TOL) + adaptive_simpson(f, FRAC_PI_2, PI, QUAD_TOL)
}

/// `∫_0^π |cos ϑ| sin²ϑ dϑ`, split at the kink π/2.
pub fn abs_cos_integral() -> f64 {
    let f = |t: f64| t.cos().abs() * t.sin() * t.sin();
    adaptive_simpson(f, 0.0, FRAC_PI_2, QUAD_TOL) + adaptive_simpson(f, FRAC_PI_2, PI, QUAD_TOL)
}

/// Sato–Tate mass of `|cos ϑ| >= 1/2`: `(4/π) ∫_0^{π/3} sin²ϑ dϑ`.
pub fn half_density() -> f64 {
    4.0 / PI * adaptive_simpson(|t: f64| t.sin() * t.sin(), 0.0, PI / 3.0, QUAD_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct STConstants {
    /// `h(1)`.
    pub h1: f64,
    /// `1/2 + π²/12` in closed form.
    pub clt_c: f64,
    /// The same constant as the quadrature `m2`.
    pub clt_c_quadrature: f64,
    /// `m1`, the Sato–Tate mean of `log(2|cos ϑ|)`.
    pub log_mean: f64,
    /// `∫_0^π |cos ϑ| sin²ϑ dϑ` by quadrature.
    pub abs_cos_moment: f64,
    /// `∫_0^π cos ϑ sin²ϑ dϑ` by quadrature.
    pub signed_cos_moment: f64,
    /// Quadrature of `(4/π) ∫_0^{π/3} sin²ϑ dϑ`.
    pub half_density: f64,
    /// `2/3 - √3/(2π)`.
    pub half_density_closed: f64,
}

impl STConstants {
    pub fn compute() -> Self {
        let (m1, m2) = st_log_moments();
        Self {
            h1: h_gamma(1.0).expect("γ = 1 is in range"),
            clt_c: 0.5 + PI * PI / 12.0,
            clt_c_quadrature: m2,
            log_mean: m1,
            abs_cos_moment: abs_cos_integral(),
            signed_cos_moment: signed_cos_integral(),
            half_density: half_density(),
            half_density_closed: 2.0 / 3.0 - 3f64.sqrt() / (2.0 * PI),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cdf_values() {
        assert_eq!(st_cdf(0.0).unwrap(), 0.0);
        assert!((st_cdf(PI).unwrap() - 1.0).abs() < 1e-15);
        assert!((st_cdf(FRAC_PI_2).unwrap() - 0.5).abs() < 1e-15);
        let want = 1.0 / 3.0 - 3f64.sqrt() / (4.0 * PI);
        assert!((st_cdf(PI / 3.0).unwrap() - want).abs() < 1e-15);
        let quad = adaptive_simpson(st_density, 0.0, PI / 3.0, 1e-14);
        assert!((quad - want).abs() < 1e-12);
        assert!(st_cdf(-0.1).is_err() && st_cdf(3.2).is_err());
    }

    #[test]
    fn h_values() {
        // reference values from 30-digit quadrature
        assert!((h_gamma(1.0).unwrap() - 0.848_826_363_156_775).abs() < 1e-10);
        assert!((h_gamma(2.0).unwrap() - 1.0).abs() < 1e-10);
        assert!((h_gamma(0.0).unwrap() - 1.0).abs() < 1e-10);
        assert!(h_gamma(2.5).is_err());
    }

    #[test]
    fn h_slope_at_zero() {
        let d = 1e-5;
        let slope = (h_gamma(d).unwrap() - h_gamma(0.0).unwrap()) / d;
        assert!((slope + 0.5).abs() < 1e-3, "{slope}");
    }

    #[test]
    fn log_moments() {
        let (m1, m2) = st_log_moments();
        assert!((m1 + 0.5).abs() < 1e-9, "{m1}");
        assert!((m2 - (0.5 + PI * PI / 12.0)).abs() < 1e-9, "{m2}");
        assert!((m2 - m1 * m1 - 1.072_467_033_424_113).abs() < 1e-8);
    }

    #[test]
    fn elementary_integrals() {
        assert!(signed_cos_integral().abs() < 1e-12);
        assert!((abs_cos_integral() - 2.0 / 3.0).abs() < 1e-12);
        let c = STConstants::compute();
        assert!((c.half_density - c.half_density_closed).abs() < 1e-12);
        assert!((c.clt_c - c.clt_c_quadrature).abs() < 1e-8);
    }

    proptest! {
        #[test]
        fn cdf_monotone_with_density_derivative(a in 1e-3..(PI - 1e-3), b in 0.0..=PI) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(st_cdf(lo).unwrap() <= st_cdf(hi).unwrap());
            let h = 1e-5;
            let fd = (st_cdf(a + h).unwrap() - st_cdf(a - h).unwrap()) / (2.0 * h);
            prop_assert!((fd - st_density(a)).abs() < 1e-6);
        }

        // h falls from h(0) = 1 to a minimum near γ = 1 and climbs back to
        // h(2) = 1, so it is convex and continuous rather than monotone.
        #[test]
        fn h_continuous_and_convex(g in 0.05f64..1.95) {
            let d = 0.05;
            let (l, m, r) = (h_gamma(g - d).unwrap(), h_gamma(g).unwrap(), h_gamma(g + d).unwrap());
            prop_assert!((r - m).abs() < 0.05 && (m - l).abs() < 0.05);
            prop_assert!(l + r - 2.0 * m >= -1e-9);
        }
    }
}
