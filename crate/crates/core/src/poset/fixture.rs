//! JSON fixture documents and CSV interval tables.

use std::collections::HashMap;
use std::io;

use serde::{Deserialize, Serialize};

use super::{Chain, EventId, Frame, IntervalClass, IntervalPair, Poset, PosetError, SpacetimeInterval};
use crate::numfmt::fmt17;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureEvent {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureChain {
    pub name: String,
    pub elements: Vec<String>,
    pub valuation: Vec<f64>,
    /// Coordinated segment `[first, last]` as element ids; whole chain if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segment: Option<[String; 2]>,
}

/// On-disk form: `{"events":[{"id","label"}], "covers":[[a,b]], "chains":[…]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureDoc {
    pub events: Vec<FixtureEvent>,
    #[serde(default)]
    pub covers: Vec<[String; 2]>,
    #[serde(default)]
    pub chains: Vec<FixtureChain>,
}

/// A validated poset together with its named chains and external event ids.
#[derive(Debug, Clone)]
pub struct PosetFixture {
    pub poset: Poset,
    ids: Vec<String>,
    index: HashMap<String, EventId>,
    chains: Vec<Chain>,
}

impl PosetFixture {
    pub fn new() -> Self {
        Self { poset: Poset::new(), ids: Vec::new(), index: HashMap::new(), chains: Vec::new() }
    }

    pub fn add_event(&mut self, id: impl Into<String>, label: Option<&str>) -> Result<EventId, PosetError> {
        let id = id.into();
        if self.index.contains_key(&id) {
            return Err(PosetError::Fixture(format!("duplicate event id `{id}`")));
        }
        let e = self.poset.add_event(label);
        self.index.insert(id.clone(), e);
        self.ids.push(id);
        Ok(e)
    }

    pub fn add_chain(&mut self, chain: Chain) -> Result<(), PosetError> {
        if self.chain(chain.name()).is_some() {
            return Err(PosetError::Fixture(format!("duplicate chain `{}`", chain.name())));
        }
        self.chains.push(chain);
        Ok(())
    }

    pub fn lookup(&self, id: &str) -> Result<EventId, PosetError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| PosetError::Fixture(format!("unknown event id `{id}`")))
    }

    pub fn id(&self, e: EventId) -> &str {
        &self.ids[e.0]
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn chain(&self, name: &str) -> Option<&Chain> {
        self.chains.iter().find(|c| c.name() == name)
    }

    pub fn frame(&self, p: &str, q: &str) -> Result<Frame<'_>, PosetError> {
        let get = |n: &str| self.chain(n).ok_or_else(|| PosetError::Fixture(format!("no chain named `{n}`")));
        Ok(Frame::new(&self.poset, get(p)?, get(q)?))
    }

    pub fn from_doc(doc: &FixtureDoc) -> Result<Self, PosetError> {
        let mut fx = Self::new();
        for ev in &doc.events {
            fx.add_event(ev.id.clone(), ev.label.as_deref())?;
        }
        for [a, b] in &doc.covers {
            let (a, b) = (fx.lookup(a)?, fx.lookup(b)?);
            fx.poset.add_relation(a, b)?;
        }
        for ch in &doc.chains {
            let elements = ch.elements.iter().map(|id| fx.lookup(id)).collect::<Result<Vec<_>, _>>()?;
            let mut chain = Chain::new(&fx.poset, ch.name.clone(), elements, ch.valuation.clone())?;
            if let Some([lo, hi]) = &ch.segment {
                let pos = |id: &str| {
                    let e = fx.lookup(id)?;
                    chain.position(e).ok_or_else(|| {
                        PosetError::Fixture(format!("segment bound `{id}` is not on chain `{}`", ch.name))
                    })
                };
                let (lo, hi) = (pos(lo)?, pos(hi)?);
                chain = chain.with_segment(lo, hi)?;
            }
            fx.add_chain(chain)?;
        }
        Ok(fx)
    }

    pub fn from_json(text: &str) -> Result<Self, PosetError> {
        let doc: FixtureDoc = serde_json::from_str(text).map_err(|e| PosetError::Fixture(e.to_string()))?;
        Self::from_doc(&doc)
    }

    /// Document form; `covers` is the transitive reduction of the order.
    pub fn to_doc(&self) -> FixtureDoc {
        let events = self
            .poset
            .events()
            .iter()
            .map(|e| FixtureEvent { id: self.id(e.id).to_owned(), label: e.label.clone() })
            .collect();
        let covers = self
            .poset
            .covers()
            .into_iter()
            .map(|(a, b)| [self.id(a).to_owned(), self.id(b).to_owned()])
            .collect();
        let chains = self
            .chains
            .iter()
            .map(|c| {
                let (lo, hi) = c.segment();
                let whole = lo == 0 && hi + 1 >= c.len();
                FixtureChain {
                    name: c.name().to_owned(),
                    elements: c.elements().iter().map(|&e| self.id(e).to_owned()).collect(),
                    valuation: c.valuation().to_vec(),
                    segment: (!whole).then(|| [self.id(c.elements()[lo]).to_owned(), self.id(c.elements()[hi]).to_owned()]),
                }
            })
            .collect();
        FixtureDoc { events, covers, chains }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("fixture documents always serialize")
    }
}

impl Default for PosetFixture {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalRow {
    pub x: String,
    pub y: String,
    pub pair: IntervalPair,
    pub spacetime: SpacetimeInterval,
    pub scalar: f64,
    pub class: IntervalClass,
    pub beta: Option<f64>,
}

impl IntervalRow {
    pub fn compute(fixture: &PosetFixture, frame: &Frame<'_>, x: EventId, y: EventId) -> Result<Self, PosetError> {
        let pair = frame.interval(x, y)?;
        Ok(Self {
            x: fixture.id(x).to_owned(),
            y: fixture.id(y).to_owned(),
            pair,
            spacetime: pair.to_spacetime(),
            scalar: pair.scalar(),
            class: pair.classify(),
            beta: pair.beta().ok(),
        })
    }
}

/// Rows for every pair in `pairs` whose interval is defined; the rest are skipped.
pub fn interval_table(
    fixture: &PosetFixture,
    frame: &Frame<'_>,
    pairs: impl IntoIterator<Item = (EventId, EventId)>,
) -> Vec<IntervalRow> {
    pairs
        .into_iter()
        .filter_map(|(x, y)| IntervalRow::compute(fixture, frame, x, y).ok())
        .collect()
}

pub fn write_interval_csv<W: io::Write>(rows: &[IntervalRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y", "dp", "dq", "dt", "dx", "scalar", "class", "beta"])?;
    for r in rows {
        w.write_record([
            r.x.clone(),
            r.y.clone(),
            fmt17(r.pair.dp),
            fmt17(r.pair.dq),
            fmt17(r.spacetime.dt),
            fmt17(r.spacetime.dx),
            fmt17(r.scalar),
            r.class.as_str().to_owned(),
            r.beta.map(fmt17).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementRow {
    pub x: String,
    pub chain: String,
    pub forward: Option<f64>,
    pub backward: Option<f64>,
}

pub fn element_table(fixture: &PosetFixture) -> Vec<ElementRow> {
    let mut rows = Vec::new();
    for chain in fixture.chains() {
        for e in fixture.poset.ids() {
            let q = chain.quantify(&fixture.poset, e);
            rows.push(ElementRow {
                x: fixture.id(e).to_owned(),
                chain: chain.name().to_owned(),
                forward: q.forward,
                backward: q.backward,
            });
        }
    }
    rows
}

/// Absent projections are written as empty fields.
pub fn write_element_csv<W: io::Write>(rows: &[ElementRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "chain", "forward", "backward"])?;
    for r in rows {
        w.write_record([
            r.x.clone(),
            r.chain.clone(),
            r.forward.map(fmt17).unwrap_or_default(),
            r.backward.map(fmt17).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"{
        "events": [{"id":"p0"},{"id":"p1"},{"id":"p2"},{"id":"x","label":"probe"}],
        "covers": [["p0","p1"],["p1","p2"],["p0","x"]],
        "chains": [{"name":"P","elements":["p0","p1","p2"],"valuation":[0,1,2]}]
    }"#;

    #[test]
    fn loads_and_round_trips() {
        let fx = PosetFixture::from_json(DOC).unwrap();
        assert_eq!(fx.poset.len(), 4);
        let x = fx.lookup("x").unwrap();
        let p = fx.chain("P").unwrap();
        assert_eq!(p.quantify(&fx.poset, x).to_string(), "(·, 0)");
        assert!(fx.poset.lt(fx.lookup("p0").unwrap(), fx.lookup("p2").unwrap()));

        let again = PosetFixture::from_json(&fx.to_json()).unwrap();
        assert_eq!(again.to_doc(), fx.to_doc());
    }

    #[test]
    fn loader_validates() {
        let cyc = r#"{"events":[{"id":"a"},{"id":"b"}],"covers":[["a","b"],["b","a"]]}"#;
        assert!(matches!(PosetFixture::from_json(cyc), Err(PosetError::Cycle { .. })));
        let dup = r#"{"events":[{"id":"a"},{"id":"a"}]}"#;
        assert!(matches!(PosetFixture::from_json(dup), Err(PosetError::Fixture(_))));
        let unknown = r#"{"events":[{"id":"a"}],"covers":[["a","z"]]}"#;
        assert!(matches!(PosetFixture::from_json(unknown), Err(PosetError::Fixture(_))));
        let not_chain = r#"{"events":[{"id":"a"},{"id":"b"}],
            "chains":[{"name":"P","elements":["a","b"],"valuation":[0,1]}]}"#;
        assert!(matches!(PosetFixture::from_json(not_chain), Err(PosetError::NotAChain { .. })));
        let bad_seg = r#"{"events":[{"id":"a"},{"id":"b"}],"covers":[["a","b"]],
            "chains":[{"name":"P","elements":["a"],"valuation":[0],"segment":["a","b"]}]}"#;
        assert!(matches!(PosetFixture::from_json(bad_seg), Err(PosetError::Fixture(_))));
        assert!(matches!(PosetFixture::from_json("{"), Err(PosetError::Fixture(_))));
    }

    #[test]
    fn element_csv_marks_absent_projections_empty() {
        let fx = PosetFixture::from_json(DOC).unwrap();
        let mut buf = Vec::new();
        write_element_csv(&element_table(&fx), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,chain,forward,backward\n"));
        assert!(text.contains("x,P,,0.0000000000000000e0\n"), "{text}");
    }
}
