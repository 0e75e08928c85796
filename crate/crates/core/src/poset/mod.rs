//! Finite posets of events quantified by projection onto observer chains.
//!
//! The order is stored as a dense reflexive closure matrix, so comparability
//! queries are O(1) and every insertion re-closes the relation. Intended for
//! fixtures of up to ~10³ events.

mod chain;
mod fixture;
mod interval;

use std::fmt;

use thiserror::Error;

pub use chain::{Chain, ChainElement, ElementQuantity, Frame};
pub use fixture::{
    element_table, interval_table, write_element_csv, write_interval_csv, ElementRow, FixtureChain,
    FixtureDoc, FixtureEvent, IntervalRow, PosetFixture,
};
pub use interval::{classify_interval, IntervalClass, IntervalPair, SpacetimeInterval};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PosetError {
    #[error("unknown event {0}")]
    UnknownEvent(EventId),
    #[error("adding {a} <= {b} would create a cycle")]
    Cycle { a: EventId, b: EventId },
    #[error("chain `{chain}`: elements {lo} and {hi} are not strictly ordered")]
    NotAChain { chain: String, lo: EventId, hi: EventId },
    #[error("chain `{chain}`: valuation is not monotone at position {position}")]
    NonMonotoneValuation { chain: String, position: usize },
    #[error("chain `{chain}`: {reason}")]
    BadValuation { chain: String, reason: String },
    #[error("projection {what} of {event} is undefined")]
    ProjectionUndefined { event: EventId, what: &'static str },
    #[error("{0} is not situated between the chains")]
    NotBetween(EventId),
    #[error("projection of {event} onto `{chain}` falls outside its coordinated segment")]
    OutsideSegment { event: EventId, chain: String },
    #[error("interval has zero duration (dp + dq = 0)")]
    ZeroDuration,
    #[error("fixture: {0}")]
    Fixture(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(pub usize);

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub id: EventId,
    pub label: Option<String>,
}

/// A finite partially ordered set of events.
///
/// Mutation needs `&mut self`; all queries are pure, so a built poset can be
/// shared across threads.
#[derive(Debug, Clone, Default)]
pub struct Poset {
    events: Vec<Event>,
    // le[a][b] == a <= b
    le: Vec<Vec<bool>>,
}

impl Poset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn ids(&self) -> impl Iterator<Item = EventId> + '_ {
        (0..self.events.len()).map(EventId)
    }

    pub fn event(&self, id: EventId) -> Option<&Event> {
        self.events.get(id.0)
    }

    /// Inserts an event incomparable to every existing one.
    pub fn add_event(&mut self, label: Option<&str>) -> EventId {
        let id = EventId(self.events.len());
        self.events.push(Event { id, label: label.map(str::to_owned) });
        for row in &mut self.le {
            row.push(false);
        }
        let mut row = vec![false; self.events.len()];
        row[id.0] = true;
        self.le.push(row);
        id
    }

    fn check(&self, id: EventId) -> Result<(), PosetError> {
        if id.0 < self.events.len() {
            Ok(())
        } else {
            Err(PosetError::UnknownEvent(id))
        }
    }

    /// Records `a <= b` and re-closes the order transitively.
    pub fn add_relation(&mut self, a: EventId, b: EventId) -> Result<(), PosetError> {
        self.check(a)?;
        self.check(b)?;
        if self.le[a.0][b.0] {
            return Ok(());
        }
        if self.le[b.0][a.0] {
            return Err(PosetError::Cycle { a, b });
        }
        let n = self.events.len();
        let below: Vec<usize> = (0..n).filter(|&u| self.le[u][a.0]).collect();
        let above: Vec<usize> = (0..n).filter(|&w| self.le[b.0][w]).collect();
        for &u in &below {
            let row = &mut self.le[u];
            for &w in &above {
                row[w] = true;
            }
        }
        Ok(())
    }

    /// `a <= b`. Panics on ids not in this poset.
    pub fn le(&self, a: EventId, b: EventId) -> bool {
        self.le[a.0][b.0]
    }

    pub fn lt(&self, a: EventId, b: EventId) -> bool {
        a != b && self.le(a, b)
    }

    pub fn comparable(&self, a: EventId, b: EventId) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    /// Cover relation (transitive reduction): `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(EventId, EventId)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.le[a][b] {
                    continue;
                }
                let covered = !(0..n).any(|c| c != a && c != b && self.le[a][c] && self.le[c][b]);
                if covered {
                    out.push((EventId(a), EventId(b)));
                }
            }
        }
        out
    }

    /// Exhaustive check of reflexivity, antisymmetry and transitivity.
    pub fn is_partial_order(&self) -> bool {
        let n = self.len();
        for a in 0..n {
            if !self.le[a][a] {
                return false;
            }
            for b in 0..n {
                if a != b && self.le[a][b] && self.le[b][a] {
                    return false;
                }
                if !self.le[a][b] {
                    continue;
                }
                for c in 0..n {
                    if self.le[b][c] && !self.le[a][c] {
                        return false;
                    }
                }
            }
        }
        true
    }
}
