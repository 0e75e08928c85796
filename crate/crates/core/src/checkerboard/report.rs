use serde::{Deserialize, Serialize};

use super::{Field, StepMatrices};
use crate::numfmt::ser17;
use crate::sequences::Move;

/// One nonzero kernel component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelEntry {
    pub x: i64,
    pub comp: String,
    #[serde(serialize_with = "ser17")]
    pub re: f64,
    #[serde(serialize_with = "ser17")]
    pub im: f64,
    #[serde(serialize_with = "ser17")]
    pub prob: f64,
}

/// The kernel of one source after `n` steps, in ascending `x` with `P` before `Q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub n: usize,
    #[serde(serialize_with = "ser17")]
    pub b: f64,
    #[serde(serialize_with = "ser17")]
    pub theta: f64,
    pub initial: String,
    pub entries: Vec<KernelEntry>,
}

impl KernelReport {
    pub fn from_field(n: usize, initial: Move, m: &StepMatrices, field: &Field) -> Self {
        let mut entries = Vec::new();
        for (x, s) in field.iter() {
            for (comp, a) in [("P", s.p), ("Q", s.q)] {
                if !a.is_zero() {
                    entries.push(KernelEntry { x, comp: comp.to_owned(), re: a.a1, im: a.a2, prob: a.born() });
                }
            }
        }
        Self { n, b: m.b(), theta: m.theta(), initial: initial.to_string(), entries }
    }

    pub fn total_probability(&self) -> f64 {
        super::field::neumaier(self.entries.iter().map(|e| e.prob))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("finite kernel values serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkerboard::kernel_dp_field;

    #[test]
    fn zero_steps_gives_one_entry() {
        let m = StepMatrices::symmetric();
        let r = KernelReport::from_field(0, Move::P, &m, &kernel_dp_field(0, Move::P, &m));
        assert_eq!(r.entries, vec![KernelEntry { x: 0, comp: "P".into(), re: 1.0, im: 0.0, prob: 1.0 }]);
    }

    #[test]
    fn json_round_trips_exactly() {
        let m = StepMatrices::symmetric();
        let r = KernelReport::from_field(7, Move::Q, &m, &kernel_dp_field(7, Move::Q, &m));
        let text = r.to_json();
        assert!(text.contains("\"re\": "));
        let back: KernelReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert!((r.total_probability() - 1.0).abs() < 1e-14);
        let xs: Vec<_> = r.entries.iter().map(|e| (e.x, e.comp.clone())).collect();
        let mut sorted = xs.clone();
        sorted.sort();
        assert_eq!(xs, sorted);
    }
}
