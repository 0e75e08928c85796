use std::fmt;

use serde::{Deserialize, Serialize};

use super::PosetError;

/// Projected lengths of an interval onto two coordinated chains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalPair {
    pub dp: f64,
    pub dq: f64,
}

/// The symmetric/antisymmetric split of an interval pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeInterval {
    pub dt: f64,
    pub dx: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntervalClass {
    /// Positive interval scalar (time-like).
    ChainLike,
    /// Negative interval scalar (space-like).
    AntichainLike,
    /// Zero interval scalar (light-like).
    ProjectionLike,
}

impl IntervalClass {
    pub fn as_str(self) -> &'static str {
        match self {
            IntervalClass::ChainLike => "chain-like",
            IntervalClass::AntichainLike => "antichain-like",
            IntervalClass::ProjectionLike => "projection-like",
        }
    }
}

impl fmt::Display for IntervalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

const EXACT_LIMIT: f64 = 9007199254740992.0; // 2^53

fn exact_integer(v: f64) -> bool {
    v.fract() == 0.0 && v.abs() < EXACT_LIMIT
}

impl IntervalPair {
    pub fn new(dp: f64, dq: f64) -> Self {
        Self { dp, dq }
    }

    /// `dp·dq`
    pub fn scalar(self) -> f64 {
        self.dp * self.dq
    }

    /// Integer-valued pairs are classified by an exact sign test. Other pairs
    /// count as projection-like when `|dp·dq| <= 1e-12·max(1, dp², dq²)`.
    pub fn classify(self) -> IntervalClass {
        let s = self.scalar();
        let zero = if exact_integer(self.dp) && exact_integer(self.dq) {
            self.dp == 0.0 || self.dq == 0.0
        } else {
            let scale = 1f64.max(self.dp * self.dp).max(self.dq * self.dq);
            s.abs() <= 1e-12 * scale
        };
        if zero {
            IntervalClass::ProjectionLike
        } else if s > 0.0 {
            IntervalClass::ChainLike
        } else {
            IntervalClass::AntichainLike
        }
    }

    pub fn to_spacetime(self) -> SpacetimeInterval {
        SpacetimeInterval {
            dt: (self.dp + self.dq) / 2.0,
            dx: (self.dp - self.dq) / 2.0,
        }
    }

    /// `(dp − dq)/(dp + dq)`, the speed `dx/dt`.
    pub fn beta(self) -> Result<f64, PosetError> {
        let sum = self.dp + self.dq;
        if sum == 0.0 {
            return Err(PosetError::ZeroDuration);
        }
        Ok((self.dp - self.dq) / sum)
    }
}

impl SpacetimeInterval {
    pub fn new(dt: f64, dx: f64) -> Self {
        Self { dt, dx }
    }

    pub fn to_pair(self) -> IntervalPair {
        IntervalPair { dp: self.dt + self.dx, dq: self.dt - self.dx }
    }

    /// `dt² − dx²`
    pub fn minkowski(self) -> f64 {
        self.dt * self.dt - self.dx * self.dx
    }
}

pub fn classify_interval(pair: IntervalPair) -> IntervalClass {
    pair.classify()
}
