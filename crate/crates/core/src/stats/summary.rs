use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{h_gamma, ks_statistic, st_cdf, Ecdf};
use crate::arith::AngleSeries;
use crate::numeric::{det_sum, log2_iter};
use crate::report::{ReportTable, VerificationReport};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaMoment {
    pub gamma: f64,
    /// Prime mean of `(2|cos ϑ_p|)^γ`.
    pub mean: f64,
    /// `∑ (2|cos ϑ_p|)^γ / p`.
    pub mertens: f64,
    /// Sato–Tate expectation `h(γ)` (missing outside `[0, 2]`).
    pub expected: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleSummary {
    pub primes: usize,
    pub x: u64,
    pub moments: Vec<GammaMoment>,
    pub mean_2cos: f64,
    pub mean_abs_cos: f64,
    /// Fraction of primes with `|cos ϑ_p| >= 1/2`.
    pub frac_abs_cos_half: f64,
    pub ks: f64,
}

impl AngleSummary {
    pub fn to_report(&self) -> VerificationReport {
        let mut r = VerificationReport::new("prime-angle-summary");
        r.param("x", self.x).param("primes", self.primes);
        let mut t = ReportTable::new(
            "gamma-moments",
            &["gamma", "mean", "mertens_sum", "h_gamma", "log2_x"],
        );
        let l2 = log2_iter(self.x as f64);
        for m in &self.moments {
            t.push_opt(vec![
                Some(m.gamma),
                Some(m.mean),
                Some(m.mertens),
                m.expected,
                Some(l2),
            ]);
        }
        r.tables.push(t);
        let mut s = ReportTable::new(
            "angle-statistics",
            &["mean_2cos", "mean_abs_cos", "frac_abs_cos_half", "ks"],
        );
        s.push(&[
            self.mean_2cos,
            self.mean_abs_cos,
            self.frac_abs_cos_half,
            self.ks,
        ]);
        r.tables.push(s);
        r
    }
}

/// Unweighted and Mertens-weighted angle statistics over every recorded prime.
pub fn prime_angle_summary(angles: &AngleSeries, gammas: &[f64]) -> Result<AngleSummary> {
    if angles.is_empty() {
        return Err(Error::InvalidInput("no prime angles to summarise".into()));
    }
    let recs = angles.records();
    let n = recs.len();
    let nf = n as f64;
    let abs2cos = |i: usize| (2.0 * recs[i].theta.cos()).abs();
    let moments = gammas
        .iter()
        .map(|&g| GammaMoment {
            gamma: g,
            mean: det_sum(0..n, |i| abs2cos(i).powf(g)) / nf,
            mertens: det_sum(0..n, |i| abs2cos(i).powf(g) / recs[i].p as f64),
            expected: h_gamma(g).ok(),
        })
        .collect();
    let ecdf = Ecdf::new(angles.thetas())?;
    Ok(AngleSummary {
        primes: n,
        x: angles.limit(),
        moments,
        mean_2cos: det_sum(0..n, |i| 2.0 * recs[i].theta.cos()) / nf,
        mean_abs_cos: det_sum(0..n, |i| recs[i].theta.cos().abs()) / nf,
        frac_abs_cos_half: recs.iter().filter(|r| r.theta.cos().abs() >= 0.5).count() as f64 / nf,
        ks: ks_statistic(&ecdf, |a| st_cdf(a.clamp(0.0, PI)).unwrap_or(f64::NAN)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogMomentEstimate {
    pub x: u64,
    /// `∑ log|a_p| / p` over the support.
    pub mu: f64,
    /// `∑ (log|a_p|)² / p · (1 - 1/p)` over the support.
    pub sigma2: f64,
    pub support: usize,
}

/// Log moments over primes `p <= x` with `|a_p| > floor`; a floor of 0
/// keeps every nonvanishing prime.
pub fn prime_log_moments(angles: &AngleSeries, x: u64, floor: f64) -> Result<LogMomentEstimate> {
    if x > angles.limit() {
        return Err(Error::Range {
            value: x,
            limit: angles.limit(),
        });
    }
    if !(floor >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "support floor must be >= 0, got {floor}"
        )));
    }
    let recs: Vec<_> = angles
        .up_to(x)
        .iter()
        .filter(|r| r.a_p.abs() > floor)
        .collect();
    let n = recs.len();
    let mu = det_sum(0..n, |i| recs[i].a_p.abs().ln() / recs[i].p as f64);
    let sigma2 = det_sum(0..n, |i| {
        let l = recs[i].a_p.abs().ln();
        let p = recs[i].p as f64;
        l * l / p * (1.0 - 1.0 / p)
    });
    Ok(LogMomentEstimate {
        x,
        mu,
        sigma2,
        support: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::AngleRecord;
    use std::f64::consts::FRAC_PI_2;

    fn series(thetas: &[(u64, f64)]) -> AngleSeries {
        let limit = thetas.last().unwrap().0;
        AngleSeries::new(
            limit,
            thetas
                .iter()
                .map(|&(p, t)| AngleRecord::from_angle(p, t))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn quarter_turn_angles() {
        let s = AngleSeries::new(
            5,
            [2, 3, 5]
                .iter()
                .map(|&p| AngleRecord::from_value(p, 0.0))
                .collect(),
        )
        .unwrap();
        assert!(s.records().iter().all(|r| r.theta == FRAC_PI_2));
        let sum = prime_angle_summary(&s, &[0.5, 1.0, 2.0]).unwrap();
        for m in &sum.moments {
            assert!(m.mean < 1e-7, "{m:?}");
        }
        assert_eq!(sum.frac_abs_cos_half, 0.0);
        let lm = prime_log_moments(&s, 5, 0.0).unwrap();
        assert_eq!((lm.mu, lm.sigma2, lm.support), (0.0, 0.0, 0));
    }

    #[test]
    fn log_moments_by_hand() {
        let s = series(&[(2, 0.0), (3, PI / 3.0)]);
        let lm = prime_log_moments(&s, 3, 0.0).unwrap();
        // a_2 = 2, a_3 = 1
        assert!((lm.mu - 2f64.ln() / 2.0).abs() < 1e-15);
        assert!((lm.sigma2 - 2f64.ln().powi(2) / 4.0).abs() < 1e-15);
        let floored = prime_log_moments(&s, 3, 1.5).unwrap();
        assert_eq!(floored.support, 1);
        assert!(prime_log_moments(&s, 4, 0.0).is_err());
    }

    #[test]
    fn report_shape() {
        let s = series(&[(2, 0.3), (3, 1.0), (5, 2.0), (7, 2.5)]);
        let r = prime_angle_summary(&s, &[1.0, 2.0]).unwrap().to_report();
        assert_eq!(r.table("gamma-moments").unwrap().rows.len(), 2);
        assert!(prime_angle_summary(&AngleSeries::new(1, vec![]).unwrap(), &[1.0]).is_err());
    }
}
