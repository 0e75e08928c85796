use std::fmt;

use super::{EventId, IntervalPair, Poset, PosetError};

/// A totally ordered subset of a poset with a monotone valuation.
///
/// Elements are stored in ascending order. The coordinated segment
/// `[segment.0, segment.1]` (positions into `elements`) bounds where interval
/// quantification may land; it defaults to the whole chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    name: String,
    elements: Vec<EventId>,
    valuation: Vec<f64>,
    segment: (usize, usize),
}

/// A chain element reached by projection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainElement {
    pub position: usize,
    pub event: EventId,
    pub value: f64,
}

/// `(v(Px), v(P̄x))`, either side possibly absent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementQuantity {
    pub forward: Option<f64>,
    pub backward: Option<f64>,
}

impl ElementQuantity {
    pub fn pair(self) -> Option<(f64, f64)> {
        Some((self.forward?, self.backward?))
    }

    pub fn is_absent(self) -> bool {
        self.forward.is_none() && self.backward.is_none()
    }
}

impl fmt::Display for ElementQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |v: Option<f64>| v.map_or_else(|| "·".to_owned(), |v| v.to_string());
        write!(f, "({}, {})", side(self.forward), side(self.backward))
    }
}

impl Chain {
    pub fn new(
        poset: &Poset,
        name: impl Into<String>,
        elements: Vec<EventId>,
        valuation: Vec<f64>,
    ) -> Result<Self, PosetError> {
        let name = name.into();
        if valuation.len() != elements.len() {
            return Err(PosetError::BadValuation {
                chain: name,
                reason: format!("{} values for {} elements", valuation.len(), elements.len()),
            });
        }
        for &e in &elements {
            poset.check(e)?;
        }
        for (i, w) in elements.windows(2).enumerate() {
            if !poset.lt(w[0], w[1]) {
                return Err(PosetError::NotAChain { chain: name, lo: w[0], hi: w[1] });
            }
            if valuation[i] > valuation[i + 1] {
                return Err(PosetError::NonMonotoneValuation { chain: name, position: i + 1 });
            }
        }
        if let Some(i) = valuation.iter().position(|v| !v.is_finite()) {
            return Err(PosetError::BadValuation { chain: name, reason: format!("non-finite value at {i}") });
        }
        let segment = (0, elements.len().saturating_sub(1));
        Ok(Self { name, elements, valuation, segment })
    }

    /// Valuation by consecutive integer ticks `0, 1, 2, …`.
    pub fn with_ticks(poset: &Poset, name: impl Into<String>, elements: Vec<EventId>) -> Result<Self, PosetError> {
        let valuation = (0..elements.len()).map(|i| i as f64).collect();
        Self::new(poset, name, elements, valuation)
    }

    /// Restricts the coordinated segment to positions `lo..=hi`.
    pub fn with_segment(mut self, lo: usize, hi: usize) -> Result<Self, PosetError> {
        if lo > hi || hi >= self.elements.len() {
            return Err(PosetError::BadValuation {
                chain: self.name,
                reason: format!("segment {lo}..={hi} out of range"),
            });
        }
        self.segment = (lo, hi);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> &[EventId] {
        &self.elements
    }

    pub fn valuation(&self) -> &[f64] {
        &self.valuation
    }

    pub fn segment(&self) -> (usize, usize) {
        self.segment
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, e: EventId) -> Option<usize> {
        self.elements.iter().position(|&c| c == e)
    }

    pub fn element(&self, position: usize) -> Option<ChainElement> {
        Some(ChainElement {
            position,
            event: *self.elements.get(position)?,
            value: self.valuation[position],
        })
    }

    pub fn in_segment(&self, e: ChainElement) -> bool {
        (self.segment.0..=self.segment.1).contains(&e.position)
    }

    /// `Px`: least chain element above or equal to `x`.
    pub fn forward_project(&self, poset: &Poset, x: EventId) -> Option<ChainElement> {
        // x <= e is upward closed along the chain
        let i = self.elements.partition_point(|&e| !poset.le(x, e));
        self.element(i)
    }

    /// `P̄x`: greatest chain element below or equal to `x`.
    pub fn backward_project(&self, poset: &Poset, x: EventId) -> Option<ChainElement> {
        let n = self.elements.partition_point(|&e| poset.le(e, x));
        n.checked_sub(1).and_then(|i| self.element(i))
    }

    pub fn quantify(&self, poset: &Poset, x: EventId) -> ElementQuantity {
        ElementQuantity {
            forward: self.forward_project(poset, x).map(|e| e.value),
            backward: self.backward_project(poset, x).map(|e| e.value),
        }
    }
}

/// A pair of coordinated observer chains in a shared poset.
#[derive(Debug, Clone, Copy)]
pub struct Frame<'a> {
    pub poset: &'a Poset,
    pub p: &'a Chain,
    pub q: &'a Chain,
}

fn need(e: Option<ChainElement>, event: EventId, what: &'static str) -> Result<ChainElement, PosetError> {
    e.ok_or(PosetError::ProjectionUndefined { event, what })
}

impl<'a> Frame<'a> {
    pub fn new(poset: &'a Poset, p: &'a Chain, q: &'a Chain) -> Self {
        Self { poset, p, q }
    }

    /// `Qx = Q(P̄x)` and `Px = P(Q̄x)`.
    pub fn is_between(&self, x: EventId) -> Result<bool, PosetError> {
        let poset = self.poset;
        let qx = need(self.q.forward_project(poset, x), x, "Qx")?;
        let pbar = need(self.p.backward_project(poset, x), x, "P̄x")?;
        let q_pbar = need(self.q.forward_project(poset, pbar.event), x, "Q(P̄x)")?;
        let px = need(self.p.forward_project(poset, x), x, "Px")?;
        let qbar = need(self.q.backward_project(poset, x), x, "Q̄x")?;
        let p_qbar = need(self.p.forward_project(poset, qbar.event), x, "P(Q̄x)")?;
        Ok(qx.event == q_pbar.event && px.event == p_qbar.event)
    }

    /// `(v_P(Py) − v_P(Px), v_Q(Qy) − v_Q(Qx))` for two events between the chains.
    pub fn interval(&self, x: EventId, y: EventId) -> Result<IntervalPair, PosetError> {
        for e in [x, y] {
            if !self.is_between(e)? {
                return Err(PosetError::NotBetween(e));
            }
        }
        let project = |chain: &Chain, e: EventId, what| {
            let el = need(chain.forward_project(self.poset, e), e, what)?;
            if chain.in_segment(el) {
                Ok(el.value)
            } else {
                Err(PosetError::OutsideSegment { event: e, chain: chain.name().to_owned() })
            }
        };
        let (px, py) = (project(self.p, x, "Px")?, project(self.p, y, "Py")?);
        let (qx, qy) = (project(self.q, x, "Qx")?, project(self.q, y, "Qy")?);
        Ok(IntervalPair::new(py - px, qy - qx))
    }
}
