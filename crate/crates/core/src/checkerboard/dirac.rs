//! Finite-difference Dirac residual of evolved fields.
//!
//! With lattice spacing `ε`, mass `m` and `b = m·ε`, `y = i·b`, the light-cone
//! form `(∂_t + ∂_x)ψ₊ = i·m·ψ₋`, `(∂_t − ∂_x)ψ₋ = i·m·ψ₊` is discretised as
//!
//! ```text
//! R₊ = [ψ₊(x+1, t+1) − ψ₊(x, t)]/ε − i·m·[ψ₋(x, t) + ψ₋(x+1, t+1)]/2
//! R₋ = [ψ₋(x−1, t+1) − ψ₋(x, t)]/ε − i·m·[ψ₊(x, t) + ψ₊(x−1, t+1)]/2
//! ```
//!
//! with `ψ₊ = φ_P`, `ψ₋ = φ_Q`. A lattice step satisfies this up to `O(ε)`.

use super::{step, CheckerboardError, Field, Spinor, StepMatrices};
use crate::proc_calc::Amplitude;

/// Slices `0..=steps`, starting with `field`.
pub fn evolve_history(field: &Field, m: &StepMatrices, steps: usize) -> Vec<Field> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(field.clone());
    for _ in 0..steps {
        let next = step(out.last().unwrap(), m);
        out.push(next);
    }
    out
}

/// `weights · exp(−x²/2σ²)` sampled at `x = jε`, `|x| ≤ cutoff`.
pub fn gaussian_field(eps: f64, sigma: f64, cutoff: f64, weights: Spinor) -> Field {
    let half = (cutoff / eps).floor() as i64;
    Field::from_fn(-half, half, |j| {
        let x = j as f64 * eps;
        let g = (-x * x / (2.0 * sigma * sigma)).exp();
        Spinor::new(weights.p * g, weights.q * g)
    })
}

fn residual_at(prev: &Field, next: &Field, x: i64, im: Amplitude, inv_eps: f64) -> f64 {
    let now = prev.get(x);
    let right = next.get(x + 1);
    let left = next.get(x - 1);
    let r_plus = (right.p - now.p) * inv_eps - im * (now.q + right.q) * 0.5;
    let r_minus = (left.q - now.q) * inv_eps - im * (now.p + left.p) * 0.5;
    r_plus.modulus().max(r_minus.modulus())
}

fn check_history(history: &[Field]) -> Result<(), CheckerboardError> {
    if history.len() < 2 {
        Err(CheckerboardError::InsufficientHistory(history.len()))
    } else {
        Ok(())
    }
}

/// Max-norm residual over every consecutive pair of slices and every site.
pub fn dirac_residual(history: &[Field], b: f64, eps: f64) -> Result<f64, CheckerboardError> {
    check_history(history)?;
    let im = Amplitude::new(0.0, b / eps);
    let mut worst = 0f64;
    for w in history.windows(2) {
        let lo = w[0].lo().min(w[1].lo()) - 1;
        let hi = w[0].hi().max(w[1].hi()) + 1;
        for x in lo..=hi {
            worst = worst.max(residual_at(&w[0], &w[1], x, im, 1.0 / eps));
        }
    }
    Ok(worst)
}

/// As [`dirac_residual`], restricted to sites `lo..=hi`.
pub fn dirac_residual_window(history: &[Field], b: f64, eps: f64, lo: i64, hi: i64) -> Result<f64, CheckerboardError> {
    check_history(history)?;
    let im = Amplitude::new(0.0, b / eps);
    let mut worst = 0f64;
    for w in history.windows(2) {
        for x in lo..=hi {
            worst = worst.max(residual_at(&w[0], &w[1], x, im, 1.0 / eps));
        }
    }
    Ok(worst)
}

/// Gaussian spinor evolved for a fixed physical time at several spacings.
#[derive(Debug, Clone, Copy)]
pub struct DiracStudy {
    pub mass: f64,
    pub sigma: f64,
    pub cutoff: f64,
    pub duration: f64,
    pub weights: Spinor,
}

impl Default for DiracStudy {
    fn default() -> Self {
        Self { mass: 1.0, sigma: 1.0, cutoff: 8.0, duration: 1.0, weights: Spinor::coherent_symmetric() }
    }
}

impl DiracStudy {
    pub fn residual(&self, eps: f64) -> Result<f64, CheckerboardError> {
        let b = self.mass * eps;
        let m = if b == 0.0 {
            StepMatrices::massless()
        } else {
            StepMatrices::new(b, std::f64::consts::FRAC_PI_2)?
        };
        let steps = (self.duration / eps).round() as usize;
        let field = gaussian_field(eps, self.sigma, self.cutoff, self.weights);
        dirac_residual(&evolve_history(&field, &m, steps.max(1)), b, eps)
    }

    /// `(ε, residual)` for each spacing.
    pub fn run(&self, spacings: &[f64]) -> Result<Vec<(f64, f64)>, CheckerboardError> {
        spacings.iter().map(|&eps| Ok((eps, self.residual(eps)?))).collect()
    }
}

/// Observed order `log(r_i/r_{i+1}) / log(ε_i/ε_{i+1})` between neighbouring runs.
pub fn convergence_orders(runs: &[(f64, f64)]) -> Vec<f64> {
    runs.windows(2).map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln()).collect()
}
