//! Locale-free, fixed-width float rendering for CSV and JSON artifacts.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// 17 significant digits in scientific notation, e.g. `7.0710678118654757e-1`.
/// Round-trips every finite `f64`.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serializes an `f64` as an unquoted JSON number rendered by [`fmt17`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fixed17(pub f64);

impl Serialize for Fixed17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom("non-finite number in output"));
        }
        let raw = RawValue::from_string(fmt17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

/// `serialize_with` helper for plain `f64` fields.
pub fn ser17<S: Serializer>(v: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    Fixed17(*v).serialize(serializer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_seventeen_digits() {
        assert_eq!(fmt17(1.0), "1.0000000000000000e0");
        assert_eq!(fmt17(-0.5), "-5.0000000000000000e-1");
        assert_eq!(fmt17(std::f64::consts::FRAC_1_SQRT_2), "7.0710678118654757e-1");
    }

    #[test]
    fn round_trips_through_json() {
        for v in [0.0, -0.0, 1e-300, 123456.789, std::f64::consts::PI, -2.5e17] {
            let s = serde_json::to_string(&Fixed17(v)).unwrap();
            let back: f64 = serde_json::from_str(&s).unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{s}");
        }
    }
}
