use std::fmt;

use super::StepMatrices;
use crate::proc_calc::Amplitude;
use crate::sequences::Move;

/// Amplitudes `(φ_P, φ_Q)` at one site; the component names the move just taken.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Spinor {
    pub p: Amplitude,
    pub q: Amplitude,
}

impl Spinor {
    pub const ZERO: Spinor = Spinor { p: Amplitude::ZERO, q: Amplitude::ZERO };

    pub fn new(p: Amplitude, q: Amplitude) -> Self {
        Self { p, q }
    }

    /// All weight on one component.
    pub fn basis(m: Move) -> Self {
        match m {
            Move::P => Self { p: Amplitude::ONE, q: Amplitude::ZERO },
            Move::Q => Self { p: Amplitude::ZERO, q: Amplitude::ONE },
        }
    }

    /// `(1, 1)/√2`
    pub fn coherent_symmetric() -> Self {
        let h = Amplitude::real(std::f64::consts::FRAC_1_SQRT_2);
        Self { p: h, q: h }
    }

    pub fn component(&self, m: Move) -> Amplitude {
        match m {
            Move::P => self.p,
            Move::Q => self.q,
        }
    }

    pub fn norm(&self) -> f64 {
        self.p.born() + self.q.born()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn scale(&self, k: Amplitude) -> Spinor {
        Spinor { p: self.p * k, q: self.q * k }
    }

    pub fn max_abs_diff(&self, other: &Spinor) -> f64 {
        self.p.max_abs_diff(other.p).max(self.q.max_abs_diff(other.q))
    }
}

impl std::ops::Add for Spinor {
    type Output = Spinor;
    fn add(self, rhs: Spinor) -> Spinor {
        Spinor { p: self.p + rhs.p, q: self.q + rhs.q }
    }
}

impl std::ops::AddAssign for Spinor {
    fn add_assign(&mut self, rhs: Spinor) {
        self.p += rhs.p;
        self.q += rhs.q;
    }
}

impl fmt::Display for Spinor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// One time slice: spinors on the sites `lo, lo+1, …`; zero everywhere else.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Field {
    lo: i64,
    sites: Vec<Spinor>,
}

impl Field {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn point(x: i64, s: Spinor) -> Self {
        Self { lo: x, sites: vec![s] }
    }

    pub fn from_sites(lo: i64, sites: Vec<Spinor>) -> Self {
        Self { lo, sites }
    }

    pub fn from_fn(lo: i64, hi: i64, f: impl Fn(i64) -> Spinor) -> Self {
        Self { lo, sites: (lo..=hi).map(f).collect() }
    }

    /// First stored site.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Last stored site; `lo − 1` when empty.
    pub fn hi(&self) -> i64 {
        self.lo + self.sites.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn get(&self, x: i64) -> Spinor {
        let i = x - self.lo;
        if i < 0 {
            return Spinor::ZERO;
        }
        self.sites.get(i as usize).copied().unwrap_or(Spinor::ZERO)
    }

    pub fn sites(&self) -> &[Spinor] {
        &self.sites
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Spinor)> + '_ {
        self.sites.iter().enumerate().map(move |(i, s)| (self.lo + i as i64, *s))
    }

    /// Drops zero spinors at both ends.
    pub fn trimmed(&self) -> Field {
        let Some(first) = self.sites.iter().position(|s| !s.is_zero()) else {
            return Field::zero();
        };
        let last = self.sites.iter().rposition(|s| !s.is_zero()).unwrap();
        Field { lo: self.lo + first as i64, sites: self.sites[first..=last].to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.sites.iter().all(Spinor::is_zero)
    }

    /// `Σ_x |φ_P|² + |φ_Q|²`, compensated.
    pub fn total_probability(&self) -> f64 {
        neumaier(self.sites.iter().map(Spinor::norm))
    }

    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        (lo..=hi).map(|x| self.get(x).max_abs_diff(&other.get(x))).fold(0.0, f64::max)
    }

    pub fn step(&self, m: &StepMatrices) -> Field {
        step(self, m)
    }
}

/// `φ_P(x, t+1) = x·φ_P(x−1, t) + y·φ_Q(x−1, t)`,
/// `φ_Q(x, t+1) = y·φ_P(x+1, t) + x·φ_Q(x+1, t)`.
pub fn step(field: &Field, m: &StepMatrices) -> Field {
    if field.is_empty() {
        return Field::zero();
    }
    let (x, y) = (m.x(), m.y());
    let old = &field.sites;
    let n = old.len();
    let mut sites = vec![Spinor::ZERO; n + 2];
    for (i, s) in old.iter().enumerate() {
        // site lo+i feeds P at lo+i+1 and Q at lo+i−1
        sites[i + 2].p = x * s.p + y * s.q;
        sites[i].q = y * s.p + x * s.q;
    }
    Field { lo: field.lo - 1, sites }
}

pub(crate) fn neumaier(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Evolution of a single-site source, storing only the reachable sublattice.
///
/// At time `t` the spinors sit at `origin − t + 2j`, `j = 0..=t`.
#[derive(Debug, Clone)]
pub struct PointEvolution {
    origin: i64,
    t: usize,
    amps: Vec<Spinor>,
    // indices outside lo..hi hold exact zeros
    active: (usize, usize),
    rule: Rule,
}

/// Amplitudes whose every part is below this are dropped from the ends of
/// the support, which keeps the arithmetic clear of subnormals.
const TAIL_CUTOFF: f64 = 1e-200;

fn negligible(s: &Spinor) -> bool {
    s.p.a1.abs() < TAIL_CUTOFF && s.p.a2.abs() < TAIL_CUTOFF && s.q.a1.abs() < TAIL_CUTOFF && s.q.a2.abs() < TAIL_CUTOFF
}

fn trim_tails(v: &mut [Spinor], mut lo: usize, mut hi: usize) -> (usize, usize) {
    while lo < hi && negligible(&v[lo]) {
        v[lo] = Spinor::ZERO;
        lo += 1;
    }
    while hi > lo && negligible(&v[hi - 1]) {
        v[hi - 1] = Spinor::ZERO;
        hi -= 1;
    }
    (lo, hi)
}

/// `new[j].p` comes from `old[j−1]`, `new[j].q` from `old[j]`; walking
/// downwards lets both read old values. Only `lo..=hi` can become nonzero.
#[inline(always)]
fn sweep(
    v: &mut [Spinor],
    lo: usize,
    hi: usize,
    fp: impl Fn(&Spinor) -> Amplitude,
    fq: impl Fn(&Spinor) -> Amplitude,
) {
    if lo == hi {
        return;
    }
    for j in (lo.max(1)..=hi).rev() {
        let (l, r) = (v[j - 1], v[j]);
        v[j] = Spinor { p: fp(&l), q: fq(&r) };
    }
    if lo == 0 {
        let r = v[0];
        v[0] = Spinor { p: Amplitude::ZERO, q: fq(&r) };
    }
}

#[derive(Debug, Clone, Copy)]
enum Rule {
    /// `x = a`, `y = i·c` with real `a`, `c`.
    RealImag { a: f64, c: f64 },
    General { x: Amplitude, y: Amplitude },
}

impl PointEvolution {
    pub fn new(origin: i64, source: Spinor, m: &StepMatrices) -> Self {
        let (x, y) = (m.x(), m.y());
        let rule = if x.a2 == 0.0 && y.a1 == 0.0 { Rule::RealImag { a: x.a1, c: y.a2 } } else { Rule::General { x, y } };
        Self { origin, t: 0, amps: vec![source], active: (0, 1), rule }
    }

    pub fn time(&self) -> usize {
        self.t
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    /// Spinors on the sublattice, leftmost first.
    pub fn amplitudes(&self) -> &[Spinor] {
        &self.amps
    }

    pub fn site(&self, j: usize) -> i64 {
        self.origin - self.t as i64 + 2 * j as i64
    }

    pub fn get(&self, x: i64) -> Spinor {
        let off = x - self.origin + self.t as i64;
        if off < 0 || off % 2 != 0 {
            return Spinor::ZERO;
        }
        self.amps.get((off / 2) as usize).copied().unwrap_or(Spinor::ZERO)
    }

    pub fn total_probability(&self) -> f64 {
        neumaier(self.amps.iter().map(Spinor::norm))
    }

    pub fn to_field(&self) -> Field {
        let lo = self.site(0);
        let mut sites = vec![Spinor::ZERO; 2 * self.t + 1];
        for (j, s) in self.amps.iter().enumerate() {
            sites[2 * j] = *s;
        }
        Field { lo, sites }
    }

    /// One time step, in place.
    pub fn advance(&mut self) {
        self.amps.push(Spinor::ZERO);
        let (lo, hi) = self.active;
        match self.rule {
            Rule::RealImag { a, c } => sweep(
                &mut self.amps,
                lo,
                hi,
                |l| Amplitude { a1: a * l.p.a1 - c * l.q.a2, a2: a * l.p.a2 + c * l.q.a1 },
                |r| Amplitude { a1: -c * r.p.a2 + a * r.q.a1, a2: c * r.p.a1 + a * r.q.a2 },
            ),
            Rule::General { x, y } => {
                sweep(&mut self.amps, lo, hi, |l| x * l.p + y * l.q, |r| y * r.p + x * r.q)
            }
        }
        self.active = trim_tails(&mut self.amps, lo, hi + 1);
        self.t += 1;
    }

    pub fn advance_by(&mut self, steps: usize) {
        for _ in 0..steps {
            self.advance();
        }
    }
}
