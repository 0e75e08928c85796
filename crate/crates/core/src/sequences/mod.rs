//! Interaction sequences over `{P, Q}` and their zig-zag lattice paths.
//!
//! A `P` move is one diagonal step to `(+1, +1)` in `(x, t)`, a `Q` move one
//! step to `(−1, +1)`.

mod free_particle;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use free_particle::{build_free_particle_poset, FreeParticle};

/// Longest sequence the enumerators will produce unless told otherwise.
pub const DEFAULT_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("{requested} moves requested but the cap is {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("invalid move `{found}` at position {position}")]
    InvalidMove { found: char, position: usize },
    #[error("operation needs a nonempty sequence")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    P,
    Q,
}

impl Move {
    /// Spatial step of the move, always ±1.
    pub fn displacement(self) -> i64 {
        match self {
            Move::P => 1,
            Move::Q => -1,
        }
    }

    pub fn other(self) -> Move {
        match self {
            Move::P => Move::Q,
            Move::Q => Move::P,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Move::P => 'P',
            Move::Q => 'Q',
        }
    }

    pub fn index(self) -> usize {
        match self {
            Move::P => 0,
            Move::Q => 1,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for Move {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "P" | "p" => Ok(Move::P),
            "Q" | "q" => Ok(Move::Q),
            other => Err(SequenceError::InvalidMove {
                found: other.chars().next().unwrap_or(' '),
                position: 0,
            }),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MoveSequence(Vec<Move>);

impl MoveSequence {
    pub fn new(moves: Vec<Move>) -> Self {
        Self(moves)
    }

    pub fn moves(&self) -> &[Move] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, m: Move) -> usize {
        self.0.iter().filter(|&&x| x == m).count()
    }

    pub fn corners(&self) -> usize {
        count_corners(self)
    }

    /// Reversals counted with `initial` prepended as the move before the first.
    pub fn corners_after(&self, initial: Move) -> usize {
        let first = self.0.first().map_or(0, |&m| usize::from(m != initial));
        first + self.corners()
    }

    pub fn path(&self, origin: LatticePoint) -> LatticePath {
        seq_to_path(self, origin)
    }

    /// `(n_P − n_Q, n_P + n_Q)`
    pub fn displacement(&self) -> LatticePoint {
        let x = self.0.iter().map(|m| m.displacement()).sum();
        LatticePoint { x, t: self.0.len() as i64 }
    }

    /// `P ↔ Q` exchange followed by reversal.
    pub fn mirror_reverse(&self) -> MoveSequence {
        MoveSequence(self.0.iter().rev().map(|m| m.other()).collect())
    }
}

impl fmt::Display for MoveSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.0 {
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for MoveSequence {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(position, c)| match c {
                'P' => Ok(Move::P),
                'Q' => Ok(Move::Q),
                found => Err(SequenceError::InvalidMove { found, position }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(MoveSequence)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint {
    pub x: i64,
    pub t: i64,
}

impl LatticePoint {
    pub fn new(x: i64, t: i64) -> Self {
        Self { x, t }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePath {
    pub points: Vec<LatticePoint>,
}

impl LatticePath {
    pub fn end(&self) -> LatticePoint {
        *self.points.last().expect("paths contain at least the origin")
    }

    /// `(Δx, Δt)` of every step.
    pub fn steps(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.points.windows(2).map(|w| (w[1].x - w[0].x, w[1].t - w[0].t))
    }
}

/// Number of adjacent unequal moves.
pub fn count_corners(seq: &MoveSequence) -> usize {
    seq.0.windows(2).filter(|w| w[0] != w[1]).count()
}

pub fn seq_to_path(seq: &MoveSequence, origin: LatticePoint) -> LatticePath {
    let mut points = Vec::with_capacity(seq.len() + 1);
    let mut at = origin;
    points.push(at);
    for m in seq.moves() {
        at = LatticePoint { x: at.x + m.displacement(), t: at.t + 1 };
        points.push(at);
    }
    LatticePath { points }
}

/// `C(n, k)`, exact for every `n <= 62`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        // exact: acc·(n−i) is divisible by (i+1)
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Streams every arrangement of `n_p` P's and `n_q` Q's in lexicographic
/// order (`P < Q`).
#[derive(Debug, Clone)]
pub struct SequenceIter {
    next: Option<Vec<Move>>,
}

impl SequenceIter {
    pub fn new(n_p: usize, n_q: usize, cap: usize) -> Result<Self, SequenceError> {
        let requested = n_p + n_q;
        if requested > cap {
            return Err(SequenceError::CapExceeded { requested, cap });
        }
        let mut first = vec![Move::P; n_p];
        first.extend(std::iter::repeat_n(Move::Q, n_q));
        Ok(Self { next: Some(first) })
    }
}

fn next_arrangement(s: &mut [Move]) -> bool {
    let Some(i) = (1..s.len()).rev().find(|&i| s[i - 1] < s[i]).map(|i| i - 1) else {
        return false;
    };
    let j = (i + 1..s.len()).rev().find(|&j| s[j] > s[i]).expect("a larger element exists");
    s.swap(i, j);
    s[i + 1..].reverse();
    true
}

impl Iterator for SequenceIter {
    type Item = MoveSequence;

    fn next(&mut self) -> Option<MoveSequence> {
        let current = self.next.take()?;
        let mut following = current.clone();
        if next_arrangement(&mut following) {
            self.next = Some(following);
        }
        Some(MoveSequence(current))
    }
}

pub fn enumerate_sequences(n_p: usize, n_q: usize) -> Result<Vec<MoveSequence>, SequenceError> {
    enumerate_sequences_capped(n_p, n_q, DEFAULT_CAP)
}

pub fn enumerate_sequences_capped(n_p: usize, n_q: usize, cap: usize) -> Result<Vec<MoveSequence>, SequenceError> {
    Ok(SequenceIter::new(n_p, n_q, cap)?.collect())
}

/// Every interaction order compatible with the per-chain detections. Only
/// the counts matter: the chains carry no information about each other's order.
pub fn sequences_consistent_with<T>(detections_p: &[T], detections_q: &[T]) -> Result<Vec<MoveSequence>, SequenceError> {
    enumerate_sequences(detections_p.len(), detections_q.len())
}

/// Corner count → number of sequences with that count.
pub fn corner_histogram(n_p: usize, n_q: usize, cap: usize) -> Result<BTreeMap<usize, u64>, SequenceError> {
    let mut hist = BTreeMap::new();
    for s in SequenceIter::new(n_p, n_q, cap)? {
        *hist.entry(s.corners()).or_insert(0) += 1;
    }
    Ok(hist)
}
