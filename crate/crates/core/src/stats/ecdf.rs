use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Empirical distribution of a finite sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(mut sample: Vec<f64>) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::InvalidInput(
                "empirical CDF of an empty sample".into(),
            ));
        }
        if sample.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidInput("sample contains NaN".into()));
        }
        sample.sort_by(f64::total_cmp);
        Ok(Self { sorted: sample })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of the sample `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.len() as f64
    }
}

/// Two-sided Kolmogorov–Smirnov distance `sup |F_n - F|`, checking both
/// sides of every jump.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &Ecdf, cdf: F) -> f64 {
    let n = sample.len() as f64;
    sample
        .sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

/// `max |F_n(α) - F(α)|` over a fixed grid of evaluation points.
pub fn sup_gap_on_grid<F: Fn(f64) -> f64>(sample: &Ecdf, cdf: F, grid: &[f64]) -> f64 {
    grid.iter()
        .map(|&a| (sample.eval(a) - cdf(a)).abs())
        .fold(0.0, f64::max)
}
