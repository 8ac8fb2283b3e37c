use serde::{Deserialize, Serialize};

use super::AngleSeries;

/// Below this `|sin ϑ|` the Chebyshev quotient switches to its limit.
const SIN_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleKind {
    /// `a_{p^k} = sin((k+1)ϑ)/sin ϑ`, the normalized Hecke value.
    HeckeChebyshev,
    /// `a_p = 2cos ϑ`, `a_{p^k} = 0` for `k >= 2`.
    TruncateZero,
    /// Normalized Hecke recursion `a_{p^{k+1}} = a_p a_{p^k} - a_{p^{k-1}}`
    /// run directly on `a_p`, mirroring the exact integer relation used for τ.
    ExactIntegerHecke,
}

impl RuleKind {
    pub fn name(self) -> &'static str {
        match self {
            RuleKind::HeckeChebyshev => "hecke-chebyshev",
            RuleKind::TruncateZero => "truncate-zero",
            RuleKind::ExactIntegerHecke => "exact-integer-hecke",
        }
    }
}

impl std::str::FromStr for RuleKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hecke-chebyshev" | "hecke" | "chebyshev" => Ok(RuleKind::HeckeChebyshev),
            "truncate-zero" | "truncate" => Ok(RuleKind::TruncateZero),
            "exact-integer-hecke" => Ok(RuleKind::ExactIntegerHecke),
            other => Err(crate::Error::InvalidInput(format!(
                "unknown prime-power rule `{other}`"
            ))),
        }
    }
}

/// How a sequence extends from prime angles to prime powers, together with
/// the growth exponent `ϱ` of the bound `|a_{p^k}| <= p^{(k-1)/2 - ϱ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimePowerRule {
    pub kind: RuleKind,
    pub rho: f64,
}

impl Default for PrimePowerRule {
    fn default() -> Self {
        Self {
            kind: RuleKind::HeckeChebyshev,
            rho: 0.1,
        }
    }
}

impl PrimePowerRule {
    pub fn new(kind: RuleKind, rho: f64) -> crate::Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(crate::Error::InvalidInput(format!(
                "growth exponent must be positive, got {rho}"
            )));
        }
        Ok(Self { kind, rho })
    }

    /// Value of `a_{p^k}` for a prime with angle `theta`.
    pub fn value(&self, theta: f64, k: u32) -> f64 {
        match k {
            0 => 1.0,
            1 => 2.0 * theta.cos(),
            _ => match self.kind {
                RuleKind::TruncateZero => 0.0,
                RuleKind::HeckeChebyshev => chebyshev_u(theta, k),
                RuleKind::ExactIntegerHecke => hecke_recursion(2.0 * theta.cos(), k),
            },
        }
    }

    pub fn growth_bound(&self, p: u64, k: u32) -> f64 {
        (p as f64).powf((k as f64 - 1.0) / 2.0 - self.rho)
    }
}

/// `U_k(cos ϑ) = sin((k+1)ϑ)/sin ϑ`, with limits `k+1` at 0 and `(-1)^k (k+1)` at π.
pub(crate) fn chebyshev_u(theta: f64, k: u32) -> f64 {
    // U_k(cos ϑ) = (-1)^k U_k(cos(π - ϑ)); the quotient is only well
    // conditioned on [0, π/2].
    let (t, sign) = if theta > std::f64::consts::FRAC_PI_2 {
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        (std::f64::consts::PI - theta, sign)
    } else {
        (theta, 1.0)
    };
    let s = t.sin();
    if s.abs() < SIN_FLOOR {
        sign * (k + 1) as f64
    } else {
        sign * ((k as f64 + 1.0) * t).sin() / s
    }
}

/// Iterates `b_{j+1} = a b_j - b_{j-1}` from `b_0 = 1`, `b_1 = a`.
pub(crate) fn hecke_recursion(a: f64, k: u32) -> f64 {
    let (mut prev, mut cur) = (1.0, a);
    for _ in 1..k {
        let next = a * cur - prev;
        prev = cur;
        cur = next;
    }
    if k == 0 {
        1.0
    } else {
        cur
    }
}

/// A prime power whose rule value breaks the growth bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthViolation {
    pub p: u64,
    pub k: u32,
    pub magnitude: f64,
    pub bound: f64,
}

/// Every `(p, k)`, `2 <= k <= k_max`, with `|rule(ϑ_p, k)| > p^{(k-1)/2 - ϱ}`,
/// sorted by `p` then `k`.
pub fn growth_violations(
    rule: &PrimePowerRule,
    angles: &AngleSeries,
    k_max: u32,
) -> Vec<GrowthViolation> {
    let mut out = Vec::new();
    for rec in angles.records() {
        for k in 2..=k_max {
            let magnitude = rule.value(rec.theta, k).abs();
            let bound = rule.growth_bound(rec.p, k);
            if magnitude > bound {
                out.push(GrowthViolation {
                    p: rec.p,
                    k,
                    magnitude,
                    bound,
                });
            }
        }
    }
    out
}
