//! Pair-valued quantification of measurement sequences.
//!
//! A measurement sequence is quantified by a pair of reals `(a1, a2)`.
//! Combining sequences in parallel adds pairs componentwise, combining them in
//! series multiplies them as complex numbers, and the probability of a
//! sequence is `a1² + a2²`.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("amplitude components must be finite")]
pub struct NonFiniteAmplitude;

/// The quantifying pair of a measurement sequence, read as `a1 + i·a2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawPair")]
pub struct Amplitude {
    pub a1: f64,
    pub a2: f64,
}

#[derive(Deserialize)]
struct RawPair {
    a1: f64,
    a2: f64,
}

impl TryFrom<RawPair> for Amplitude {
    type Error = NonFiniteAmplitude;

    fn try_from(raw: RawPair) -> Result<Self, Self::Error> {
        Amplitude::try_new(raw.a1, raw.a2)
    }
}

impl Amplitude {
    pub const ZERO: Amplitude = Amplitude { a1: 0.0, a2: 0.0 };
    pub const ONE: Amplitude = Amplitude { a1: 1.0, a2: 0.0 };
    pub const I: Amplitude = Amplitude { a1: 0.0, a2: 1.0 };

    /// Panics on NaN or infinite components.
    pub fn new(a1: f64, a2: f64) -> Self {
        Self::try_new(a1, a2).expect("non-finite amplitude component")
    }

    pub fn try_new(a1: f64, a2: f64) -> Result<Self, NonFiniteAmplitude> {
        if a1.is_finite() && a2.is_finite() {
            Ok(Self { a1, a2 })
        } else {
            Err(NonFiniteAmplitude)
        }
    }

    pub fn real(a1: f64) -> Self {
        Self::new(a1, 0.0)
    }

    /// `r·e^{iφ}`
    pub fn from_polar(r: f64, phase: f64) -> Self {
        Self::new(r * phase.cos(), r * phase.sin())
    }

    pub fn conj(self) -> Self {
        Self { a1: self.a1, a2: -self.a2 }
    }

    pub fn scale(self, k: f64) -> Self {
        Self { a1: self.a1 * k, a2: self.a2 * k }
    }

    /// Born rule: `a1² + a2²`. Never clamped.
    pub fn born(self) -> f64 {
        self.a1 * self.a1 + self.a2 * self.a2
    }

    pub fn modulus(self) -> f64 {
        self.a1.hypot(self.a2)
    }

    pub fn arg(self) -> f64 {
        self.a2.atan2(self.a1)
    }

    pub fn is_zero(self) -> bool {
        self.a1 == 0.0 && self.a2 == 0.0
    }

    /// Largest componentwise absolute difference.
    pub fn max_abs_diff(self, other: Self) -> f64 {
        (self.a1 - other.a1).abs().max((self.a2 - other.a2).abs())
    }

    pub fn powi(self, n: u32) -> Self {
        let mut acc = Self::ONE;
        let mut base = self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

/// Sum rule (parallel combination).
pub fn amp_add(u: Amplitude, v: Amplitude) -> Amplitude {
    Amplitude { a1: u.a1 + v.a1, a2: u.a2 + v.a2 }
}

/// Product rule (series combination).
pub fn amp_mul(u: Amplitude, v: Amplitude) -> Amplitude {
    Amplitude {
        a1: u.a1 * v.a1 - u.a2 * v.a2,
        a2: u.a1 * v.a2 + u.a2 * v.a1,
    }
}

/// Born rule.
pub fn born(u: Amplitude) -> f64 {
    u.born()
}

impl Add for Amplitude {
    type Output = Amplitude;
    fn add(self, rhs: Amplitude) -> Amplitude {
        amp_add(self, rhs)
    }
}

impl AddAssign for Amplitude {
    fn add_assign(&mut self, rhs: Amplitude) {
        *self = amp_add(*self, rhs);
    }
}

impl Sub for Amplitude {
    type Output = Amplitude;
    fn sub(self, rhs: Amplitude) -> Amplitude {
        Amplitude { a1: self.a1 - rhs.a1, a2: self.a2 - rhs.a2 }
    }
}

impl Neg for Amplitude {
    type Output = Amplitude;
    fn neg(self) -> Amplitude {
        Amplitude { a1: -self.a1, a2: -self.a2 }
    }
}

impl Mul for Amplitude {
    type Output = Amplitude;
    fn mul(self, rhs: Amplitude) -> Amplitude {
        amp_mul(self, rhs)
    }
}

impl MulAssign for Amplitude {
    fn mul_assign(&mut self, rhs: Amplitude) {
        *self = amp_mul(*self, rhs);
    }
}

impl Mul<f64> for Amplitude {
    type Output = Amplitude;
    fn mul(self, rhs: f64) -> Amplitude {
        self.scale(rhs)
    }
}

impl Sum for Amplitude {
    fn sum<I: Iterator<Item = Amplitude>>(iter: I) -> Amplitude {
        iter.fold(Amplitude::ZERO, amp_add)
    }
}

impl Product for Amplitude {
    fn product<I: Iterator<Item = Amplitude>>(iter: I) -> Amplitude {
        iter.fold(Amplitude::ONE, amp_mul)
    }
}

impl fmt::Display for Amplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a1, self.a2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn sum_rule_examples() {
        assert_eq!(Amplitude::new(1.0, 2.0) + Amplitude::new(3.0, 4.0), Amplitude::new(4.0, 6.0));
        let z = Amplitude::new(-2.5, 7.0);
        assert_eq!(Amplitude::ZERO + z, z);
        let l = (Amplitude::new(1.0, 1.0) + Amplitude::new(2.0, 0.0)) + Amplitude::new(0.0, 3.0);
        let r = Amplitude::new(1.0, 1.0) + (Amplitude::new(2.0, 0.0) + Amplitude::new(0.0, 3.0));
        assert_eq!(l, r);
        assert_eq!(l, Amplitude::new(3.0, 4.0));
    }

    #[test]
    fn product_rule_examples() {
        assert_eq!(Amplitude::I * Amplitude::I, Amplitude::new(-1.0, 0.0));
        let z = Amplitude::new(0.3, -1.7);
        assert_eq!(Amplitude::ONE * z, z);
        assert_eq!(Amplitude::new(1.0, 1.0) * Amplitude::new(1.0, -1.0), Amplitude::new(2.0, 0.0));
    }

    #[test]
    fn born_examples() {
        assert!((Amplitude::new(0.6, 0.8).born() - 1.0).abs() < 1e-15);
        assert_eq!(Amplitude::ZERO.born(), 0.0);
        assert!((Amplitude::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2).born() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constructors_reject_non_finite() {
        assert!(Amplitude::try_new(f64::NAN, 0.0).is_err());
        assert!(Amplitude::try_new(0.0, f64::INFINITY).is_err());
        assert!(serde_json::from_str::<Amplitude>(r#"{"a1":1.0,"a2":2.0}"#).is_ok());
    }

    #[test]
    fn powi_matches_repeated_product() {
        let z = Amplitude::new(0.4, 0.9);
        let mut acc = Amplitude::ONE;
        for n in 0..9 {
            assert!(z.powi(n).max_abs_diff(acc) < 1e-14);
            acc *= z;
        }
    }

    fn amp() -> impl Strategy<Value = Amplitude> {
        (-10.0f64..10.0, -10.0f64..10.0).prop_map(|(a, b)| Amplitude::new(a, b))
    }

    proptest! {
        #[test]
        fn distributes_on_both_sides(u in amp(), v in amp(), w in amp()) {
            let left = u * (v + w);
            prop_assert!(left.max_abs_diff(u * v + u * w) < 1e-12);
            let right = (v + w) * u;
            prop_assert!(right.max_abs_diff(v * u + w * u) < 1e-12);
        }

        #[test]
        fn born_is_multiplicative(u in amp(), v in amp()) {
            prop_assume!(u.born() > 1e-6 && v.born() > 1e-6);
            let lhs = (u * v).born();
            let rhs = u.born() * v.born();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        }

        #[test]
        fn integer_sums_commute_and_associate(a in -1000i32..1000, b in -1000i32..1000,
                                              c in -1000i32..1000, d in -1000i32..1000,
                                              e in -1000i32..1000, f in -1000i32..1000) {
            let x = Amplitude::new(a as f64, b as f64);
            let y = Amplitude::new(c as f64, d as f64);
            let z = Amplitude::new(e as f64, f as f64);
            prop_assert_eq!(x + y, y + x);
            prop_assert_eq!((x + y) + z, x + (y + z));
        }
    }
}
