//! Continuum of user types with linear utility differences.
//!
//! A type `i ∈ [0, 1]` prefers slot 1 over slot 0 by `i + φ·y + χ` when the
//! slot-1 fraction is `y`. Types are spread uniformly on the band
//! `[x − δ, x + δ]`, and every type best-responds to the announced mean.
//!
//! Note: a closed form with coefficients `1/δ` on `x` and `(δ + χ)/δ` for
//! the constant is sometimes quoted for this response. It does not match
//! the integral. Integrating the Heaviside over the band gives `1/(2δ)` on
//! every term, which is what [`nonatomic_response_closed`] implements; the
//! quadrature in [`nonatomic_response_numeric`] is the reference it is
//! tested against.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of quadrature points across the type band.
pub const DEFAULT_GRID: usize = 401;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonatomicPopulation {
    pub phi: f64,
    pub chi: f64,
    /// Band half-width, in `(0, ½)`.
    pub delta: f64,
    /// Band center, in `[δ, 1 − δ]`.
    pub x: f64,
    #[serde(default = "default_grid")]
    pub grid_n: usize,
}

fn default_grid() -> usize {
    DEFAULT_GRID
}

impl NonatomicPopulation {
    pub fn new(phi: f64, chi: f64, delta: f64, x: f64) -> Result<Self> {
        let pop = Self {
            phi,
            chi,
            delta,
            x,
            grid_n: DEFAULT_GRID,
        };
        pop.validate()?;
        Ok(pop)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.phi.is_finite() || !self.chi.is_finite() {
            return Err(Error::config("nonatomic", "phi and chi must be finite"));
        }
        if !(self.delta > 0.0 && self.delta < 0.5) {
            return Err(Error::config("nonatomic.delta", "must lie in (0, 0.5)"));
        }
        if !(self.x >= self.delta && self.x <= 1.0 - self.delta) {
            return Err(Error::config("nonatomic.x", "must lie in [delta, 1 - delta]"));
        }
        if self.grid_n < 100 {
            return Err(Error::config("nonatomic.grid_n", "must be at least 100"));
        }
        Ok(())
    }

    /// Utility gain of type `i` from slot 1 over slot 0 at fraction `y`.
    pub fn utility_gain(&self, i: f64, y: f64) -> f64 {
        i + self.phi * y + self.chi
    }

    /// Midpoints of the quadrature cells across the type band.
    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        let width = 2.0 * self.delta / self.grid_n as f64;
        let lo = self.x - self.delta;
        (0..self.grid_n).map(move |k| lo + (k as f64 + 0.5) * width)
    }
}

/// Fraction of types choosing slot 1, by midpoint quadrature of
/// `∫ H(i + φ·mean + χ) r(i|x) di` with `H(0) = 1`.
pub fn nonatomic_response_numeric(pop: &NonatomicPopulation, mean_a: f64) -> f64 {
    let choosing = pop
        .grid()
        .filter(|&i| pop.utility_gain(i, mean_a) >= 0.0)
        .count();
    (choosing as f64 / pop.grid_n as f64).clamp(0.0, 1.0)
}

/// Piecewise-linear closed form of the same integral.
pub fn nonatomic_response_closed(pop: &NonatomicPopulation, mean_a: f64) -> f64 {
    let threshold = -pop.phi * mean_a - pop.chi;
    if threshold <= pop.x - pop.delta {
        1.0
    } else if threshold >= pop.x + pop.delta {
        0.0
    } else {
        ((pop.x + pop.delta + pop.phi * mean_a + pop.chi) / (2.0 * pop.delta)).clamp(0.0, 1.0)
    }
}
