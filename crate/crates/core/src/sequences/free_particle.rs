//! Poset of a free particle influencing two coordinated observer chains.
//!
//! Events are placed on the light-cone lattice and ordered by the causal
//! order of 1+1 Minkowski space: with `u = t + x` and `w = t − x`,
//! `a <= b` iff `u_a <= u_b` and `w_a <= w_b`. Chain `P` sits to the left of
//! the particle and chain `Q` to the right, far enough that the particle
//! never reaches either. Forward projection onto `P` then reads `u`, onto `Q`
//! reads `w`, and each chain carries one integer tick per unit of its
//! coordinate, so a `P` move projects to `(2, 0)` and a `Q` move to `(0, 2)`.

use super::{LatticePoint, Move, MoveSequence, SequenceError};
use crate::poset::{Chain, EventId, Frame, IntervalPair, PosetError, PosetFixture};

/// The fixture for one move sequence.
///
/// The particle chain `Pi` has one event per move; event `k` influences the
/// chain named by move `k`, and that detection is the forward projection of
/// the event onto the chain.
#[derive(Debug, Clone)]
pub struct FreeParticle {
    pub sequence: MoveSequence,
    pub fixture: PosetFixture,
    pub particle: Vec<EventId>,
    pub detections_p: Vec<EventId>,
    pub detections_q: Vec<EventId>,
}

pub const CHAIN_P: &str = "P";
pub const CHAIN_Q: &str = "Q";
pub const CHAIN_PARTICLE: &str = "Pi";

#[derive(Debug, Clone, Copy)]
struct Site {
    u: i64,
    w: i64,
}

impl From<LatticePoint> for Site {
    fn from(p: LatticePoint) -> Self {
        Site { u: p.t + p.x, w: p.t - p.x }
    }
}

pub fn build_free_particle_poset(seq: &MoveSequence) -> Result<FreeParticle, SequenceError> {
    if seq.is_empty() {
        return Err(SequenceError::Empty);
    }
    let n = seq.len();
    let path = seq.path(LatticePoint::default());
    let particle_sites: Vec<Site> = path.points[..n].iter().map(|&p| p.into()).collect();

    // observers at x = ∓half_width
    let half_width = n as i64 + 1;
    let span = 2 * half_width;
    let lo = particle_sites.iter().map(|s| s.u.min(s.w)).min().unwrap();
    let hi = particle_sites.iter().map(|s| s.u.max(s.w)).max().unwrap();

    // P tick with coordinate u sits at (u, u + span), Q tick with coordinate
    // w at (w + span, w). Both chains cover [lo − 2·span, hi + 2·span], so
    // every particle event projects both ways and every tick within
    // [lo − span, hi + span] is itself between the chains.
    let ticks = lo - 2 * span..=hi + 2 * span;
    let p_ticks: Vec<Site> = ticks.clone().map(|u| Site { u, w: u + span }).collect();
    let q_ticks: Vec<Site> = ticks.map(|w| Site { u: w + span, w }).collect();

    let mut fixture = PosetFixture::new();
    let mut sites = Vec::new();
    let mut add = |fx: &mut PosetFixture, id: String, label: Option<&str>, site: Site| {
        sites.push(site);
        fx.add_event(id, label).expect("generated ids are unique")
    };
    let particle: Vec<EventId> = particle_sites
        .iter()
        .zip(seq.moves())
        .enumerate()
        .map(|(k, (&s, m))| add(&mut fixture, format!("pi{k}"), Some(&m.to_string()), s))
        .collect();
    let p_events: Vec<EventId> =
        p_ticks.iter().enumerate().map(|(i, &s)| add(&mut fixture, format!("p{i}"), None, s)).collect();
    let q_events: Vec<EventId> =
        q_ticks.iter().enumerate().map(|(i, &s)| add(&mut fixture, format!("q{i}"), None, s)).collect();

    // Insert in causal order, latest predecessor first, so that only cover
    // relations reach the closure update.
    let mut order: Vec<usize> = (0..sites.len()).collect();
    order.sort_by_key(|&i| (sites[i].u + sites[i].w, sites[i].u));
    for (rank, &b) in order.iter().enumerate() {
        for &a in order[..rank].iter().rev() {
            let (sa, sb) = (sites[a], sites[b]);
            if sa.u <= sb.u && sa.w <= sb.w && !fixture.poset.le(EventId(a), EventId(b)) {
                fixture
                    .poset
                    .add_relation(EventId(a), EventId(b))
                    .expect("the light-cone order is acyclic on distinct sites");
            }
        }
    }

    let chain = |fx: &PosetFixture, name: &str, events: &[EventId]| {
        Chain::with_ticks(&fx.poset, name, events.to_vec()).expect("generated chains are totally ordered")
    };
    let p_chain = chain(&fixture, CHAIN_P, &p_events);
    let q_chain = chain(&fixture, CHAIN_Q, &q_events);
    let pi_chain = chain(&fixture, CHAIN_PARTICLE, &particle);

    let mut detections_p = Vec::new();
    let mut detections_q = Vec::new();
    for (&e, m) in particle.iter().zip(seq.moves()) {
        let (target, out) = match m {
            Move::P => (&p_chain, &mut detections_p),
            Move::Q => (&q_chain, &mut detections_q),
        };
        let hit = target.forward_project(&fixture.poset, e).expect("ticks cover every detection");
        out.push(hit.event);
    }

    for c in [p_chain, q_chain, pi_chain] {
        fixture.add_chain(c).expect("chain names are distinct");
    }

    Ok(FreeParticle { sequence: seq.clone(), fixture, particle, detections_p, detections_q })
}

impl FreeParticle {
    pub fn frame(&self) -> Frame<'_> {
        self.fixture.frame(CHAIN_P, CHAIN_Q).expect("both observer chains exist")
    }

    /// Interval pairs between consecutive particle events.
    pub fn particle_intervals(&self) -> Result<Vec<IntervalPair>, PosetError> {
        let frame = self.frame();
        self.particle.windows(2).map(|w| frame.interval(w[0], w[1])).collect()
    }
}
