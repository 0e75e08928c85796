//! Position statistics of a point source at rest.

use std::fmt;
use std::str::FromStr;

use super::{CheckerboardError, PointEvolution, Spinor, StepMatrices};
use crate::sequences::Move;

/// Initial state of the source at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Basis(Move),
    /// Equal-weight incoherent mixture of the `P` and `Q` runs.
    Symmetric,
    /// The spinor `(1, 1)/√2`.
    Coherent,
}

impl FromStr for Source {
    type Err = CheckerboardError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "P" | "p" => Ok(Source::Basis(Move::P)),
            "Q" | "q" => Ok(Source::Basis(Move::Q)),
            "symmetric" | "mixture" => Ok(Source::Symmetric),
            "coherent" => Ok(Source::Coherent),
            other => Err(CheckerboardError::BadSource(other.to_owned())),
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Basis(m) => write!(f, "{m}"),
            Source::Symmetric => f.write_str("symmetric"),
            Source::Coherent => f.write_str("coherent"),
        }
    }
}

/// Position probabilities at time `t` on the sites `−t, −t+2, …, t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub t: usize,
    pub probs: Vec<f64>,
}

impl Distribution {
    pub fn site(&self, j: usize) -> i64 {
        2 * j as i64 - self.t as i64
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probs.iter().enumerate().map(|(j, &p)| (self.site(j), p))
    }

    pub fn total(&self) -> f64 {
        super::field::neumaier(self.probs.iter().copied())
    }

    /// `Σ x·p(x)` accumulated as `Σ_{x>0} x·(p(x) − p(−x))`.
    pub fn mean(&self) -> f64 {
        let t = self.t;
        let mut acc = 0.0;
        for j in (t / 2 + 1)..=t {
            acc += self.site(j) as f64 * (self.probs[j] - self.probs[t - j]);
        }
        acc
    }

    pub fn second_moment(&self) -> f64 {
        self.iter().map(|(x, p)| (x * x) as f64 * p).sum()
    }

    /// `p(x) == p(−x)` bit for bit.
    pub fn is_mirror_symmetric(&self) -> bool {
        let t = self.t;
        (0..=t).all(|j| self.probs[j].to_bits() == self.probs[t - j].to_bits())
    }
}

/// Steps the source and reports one [`Distribution`] per slice, starting at `t = 0`.
#[derive(Debug, Clone)]
pub struct ZitterEvolution {
    runs: Vec<PointEvolution>,
    source: Source,
    started: bool,
}

impl ZitterEvolution {
    pub fn new(source: Source, m: &StepMatrices) -> Self {
        let runs = match source {
            Source::Basis(mv) => vec![PointEvolution::new(0, Spinor::basis(mv), m)],
            Source::Coherent => vec![PointEvolution::new(0, Spinor::coherent_symmetric(), m)],
            Source::Symmetric => vec![
                PointEvolution::new(0, Spinor::basis(Move::P), m),
                PointEvolution::new(0, Spinor::basis(Move::Q), m),
            ],
        };
        Self { runs, source, started: false }
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn runs(&self) -> &[PointEvolution] {
        &self.runs
    }

    pub fn distribution(&self) -> Distribution {
        let t = self.runs[0].time();
        let probs = match self.runs.as_slice() {
            [one] => one.amplitudes().iter().map(Spinor::norm).collect(),
            [a, b] => a
                .amplitudes()
                .iter()
                .zip(b.amplitudes())
                .map(|(u, v)| 0.5 * (u.norm() + v.norm()))
                .collect(),
            _ => unreachable!("one or two runs"),
        };
        Distribution { t, probs }
    }

    pub fn advance(&mut self) {
        for r in &mut self.runs {
            r.advance();
        }
    }
}

impl Iterator for ZitterEvolution {
    type Item = Distribution;

    fn next(&mut self) -> Option<Distribution> {
        if self.started {
            self.advance();
        }
        self.started = true;
        Some(self.distribution())
    }
}
