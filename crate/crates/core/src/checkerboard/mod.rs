//! Two-component amplitudes on the 1+1 light-cone lattice.
//!
//! A `P` move appends `x` to a history whose last move was `P` and `y` to one
//! whose last move was `Q`; a `Q` move does the mirror image. Written as
//! matrices acting on `(φ_P, φ_Q)`:
//!
//! ```text
//! P = | x  y |      Q = | 0  0 |
//!     | 0  0 |          | y  x |
//! ```
//!
//! Probability conservation, `Q†Q + P†P = I`, forces `|x|² + |y|² = 1` and
//! `x*y = −y*x`, i.e. `x` and `y` a quarter turn apart. With `x = a` real and
//! `y = b·e^{iθ}`, `θ ∈ {π/2, 3π/2}`; every reversal of direction therefore
//! carries a factor `±i·b`.

mod dirac;
mod field;
mod kernel;
mod report;
mod zitter;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::proc_calc::Amplitude;

pub use dirac::{
    convergence_orders, dirac_residual, dirac_residual_window, evolve_history, gaussian_field, DiracStudy,
};
pub use field::{step, Field, PointEvolution, Spinor};
pub use kernel::{
    corner_counts, corner_kernel_field, corner_weighted_sum, kernel_bruteforce, kernel_bruteforce_capped, kernel_bruteforce_field,
    kernel_dp, kernel_dp_field, path_amplitude, KernelQuery, BRUTE_FORCE_CAP,
};
pub use report::{KernelEntry, KernelReport};
pub use zitter::{Distribution, Source, ZitterEvolution};

/// Tolerance on the unitarity conditions when building matrices from raw amplitudes.
pub const UNITARITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CheckerboardError {
    #[error("b must lie strictly between 0 and 1, got {0}")]
    BadMixing(f64),
    #[error("theta must be π/2 or 3π/2, got {0}")]
    BadPhase(f64),
    #[error("step amplitudes violate unitarity: |x|²+|y|² = {norm}, Re(x*y) = {cross}")]
    NotUnitary { norm: f64, cross: f64 },
    #[error("{requested} steps requested but the brute-force cap is {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("at least two consecutive slices are needed, got {0}")]
    InsufficientHistory(usize),
    #[error("cannot parse angle `{0}`")]
    BadAngle(String),
    #[error("unknown source `{0}`; expected P, Q, symmetric or coherent")]
    BadSource(String),
}

/// The two allowed relative phases of `y` with respect to `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseBranch {
    /// `θ = π/2`, `y = +i·b`
    Plus,
    /// `θ = 3π/2`, `y = −i·b`
    Minus,
}

impl PhaseBranch {
    pub fn theta(self) -> f64 {
        match self {
            PhaseBranch::Plus => FRAC_PI_2,
            PhaseBranch::Minus => 3.0 * FRAC_PI_2,
        }
    }

    pub fn from_theta(theta: f64) -> Result<Self, CheckerboardError> {
        const TOL: f64 = 1e-9;
        let t = theta.rem_euclid(2.0 * PI);
        if (t - FRAC_PI_2).abs() < TOL {
            Ok(PhaseBranch::Plus)
        } else if (t - 3.0 * FRAC_PI_2).abs() < TOL {
            Ok(PhaseBranch::Minus)
        } else {
            Err(CheckerboardError::BadPhase(theta))
        }
    }

    fn sign(self) -> f64 {
        match self {
            PhaseBranch::Plus => 1.0,
            PhaseBranch::Minus => -1.0,
        }
    }
}

/// Parses `pi/2`, `3pi/2`, `3*pi/2`, `π/2` or a plain number of radians.
pub fn parse_angle(text: &str) -> Result<f64, CheckerboardError> {
    let bad = || CheckerboardError::BadAngle(text.to_owned());
    let s: String = text.trim().to_lowercase().replace('π', "pi").replace([' ', '*'], "");
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().map_err(|_| bad())?),
        None => (s.as_str(), 1.0),
    };
    let coeff = match num.strip_suffix("pi").ok_or_else(bad)? {
        "" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(coeff * PI / den)
}

/// A 2×2 complex matrix acting on `(φ_P, φ_Q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Amplitude; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[Amplitude::ONE, Amplitude::ZERO], [Amplitude::ZERO, Amplitude::ONE]]);

    pub fn adjoint(&self) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn add(&self, rhs: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]])
    }

    pub fn apply(&self, s: Spinor) -> Spinor {
        let m = &self.0;
        Spinor { p: m[0][0] * s.p + m[0][1] * s.q, q: m[1][0] * s.p + m[1][1] * s.q }
    }

    pub fn max_abs_diff(&self, rhs: &Mat2) -> f64 {
        let mut worst = 0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max(self.0[i][j].max_abs_diff(rhs.0[i][j]));
            }
        }
        worst
    }
}

/// The step operators `P` and `Q`, stored through their two amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepMatrices {
    x: Amplitude,
    y: Amplitude,
}

/// `P` and `Q` for `a = √(1 − b²)`, `x = a`, `y = b·e^{iθ}`.
pub fn make_step_matrices(b: f64, theta: f64) -> Result<StepMatrices, CheckerboardError> {
    StepMatrices::new(b, theta)
}

impl StepMatrices {
    pub fn new(b: f64, theta: f64) -> Result<Self, CheckerboardError> {
        if !(b > 0.0 && b < 1.0) {
            return Err(CheckerboardError::BadMixing(b));
        }
        Ok(Self::with_branch(b, PhaseBranch::from_theta(theta)?))
    }

    /// Exact on the imaginary axis: `y = ±i·b`.
    pub fn with_branch(b: f64, branch: PhaseBranch) -> Self {
        let a = (1.0 - b * b).sqrt();
        Self { x: Amplitude::real(a), y: Amplitude::new(0.0, branch.sign() * b) }
    }

    /// `a = b = 1/√2`, `θ = π/2`.
    pub fn symmetric() -> Self {
        Self::with_branch(FRAC_1_SQRT_2, PhaseBranch::Plus)
    }

    /// No reversals at all (`x = 1`, `y = 0`): free transport.
    pub fn massless() -> Self {
        Self { x: Amplitude::ONE, y: Amplitude::ZERO }
    }

    /// Any pair satisfying `|x|² + |y|² = 1` and `Re(x*·y) = 0`.
    pub fn from_amplitudes(x: Amplitude, y: Amplitude) -> Result<Self, CheckerboardError> {
        let norm = x.born() + y.born();
        let cross = (x.conj() * y).a1;
        if (norm - 1.0).abs() > UNITARITY_TOL || cross.abs() > UNITARITY_TOL {
            return Err(CheckerboardError::NotUnitary { norm, cross });
        }
        Ok(Self { x, y })
    }

    /// Rotates `x` and `y` together by `e^{iγ}`.
    pub fn with_global_phase(&self, gamma: f64) -> Self {
        let r = Amplitude::from_polar(1.0, gamma);
        Self { x: self.x * r, y: self.y * r }
    }

    /// Amplitude for continuing in the same direction.
    pub fn x(&self) -> Amplitude {
        self.x
    }

    /// Amplitude for a reversal.
    pub fn y(&self) -> Amplitude {
        self.y
    }

    pub fn a(&self) -> f64 {
        self.x.modulus()
    }

    pub fn b(&self) -> f64 {
        self.y.modulus()
    }

    /// Phase of `y` relative to `x`, in `[0, 2π)`. Zero when `y = 0`.
    pub fn theta(&self) -> f64 {
        if self.y.is_zero() {
            return 0.0;
        }
        (self.y.arg() - self.x.arg()).rem_euclid(2.0 * PI)
    }

    pub fn p(&self) -> Mat2 {
        Mat2([[self.x, self.y], [Amplitude::ZERO, Amplitude::ZERO]])
    }

    pub fn q(&self) -> Mat2 {
        Mat2([[Amplitude::ZERO, Amplitude::ZERO], [self.y, self.x]])
    }

    /// Largest entry of `Q†Q + P†P − I`.
    pub fn unitarity_defect(&self) -> f64 {
        let (p, q) = (self.p(), self.q());
        q.adjoint().mul(&q).add(&p.adjoint().mul(&p)).max_abs_diff(&Mat2::IDENTITY)
    }

    /// Amplitude of one move given the previous move.
    pub fn transition(&self, from: crate::sequences::Move, to: crate::sequences::Move) -> Amplitude {
        if from == to {
            self.x
        } else {
            self.y
        }
    }
}

impl Default for StepMatrices {
    fn default() -> Self {
        Self::symmetric()
    }
}

impl fmt::Display for StepMatrices {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P = [[{x}, {y}], [0, 0]], Q = [[0, 0], [{y}, {x}]]", x = self.x, y = self.y)
    }
}

impl FromStr for PhaseBranch {
    type Err = CheckerboardError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PhaseBranch::from_theta(parse_angle(s)?)
    }
}
