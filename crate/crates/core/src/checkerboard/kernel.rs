use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{CheckerboardError, Field, PointEvolution, Spinor, StepMatrices};
use crate::proc_calc::Amplitude;
use crate::sequences::{Move, MoveSequence};

/// Longest path length the exhaustive enumerators accept by default.
pub const BRUTE_FORCE_CAP: usize = 20;

const CHUNKS: u64 = 64;

/// Kernel from a point source at the origin in state `initial` to site `x` after `n_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelQuery {
    pub n_steps: usize,
    pub initial: Move,
    pub x: i64,
}

impl KernelQuery {
    pub fn new(n_steps: usize, initial: Move, x: i64) -> Self {
        Self { n_steps, initial, x }
    }

    /// `|x| ≤ n` and `x ≡ n (mod 2)`; the kernel vanishes otherwise.
    pub fn is_reachable(&self) -> bool {
        let n = self.n_steps as i64;
        self.x.abs() <= n && (n - self.x).rem_euclid(2) == 0
    }
}

/// Product of `x` (continuation) and `y` (reversal) along the sequence.
pub fn path_amplitude(seq: &MoveSequence, initial: Move, m: &StepMatrices) -> Amplitude {
    let mut prev = initial;
    let mut amp = Amplitude::ONE;
    for &mv in seq.moves() {
        amp *= m.transition(prev, mv);
        prev = mv;
    }
    amp
}

fn check_cap(n: usize, cap: usize) -> Result<(), CheckerboardError> {
    if n > cap {
        Err(CheckerboardError::CapExceeded { requested: n, cap })
    } else {
        Ok(())
    }
}

/// Move `i` of path `mask` is `Q` iff bit `i` is set.
fn mask_move(mask: u64, i: usize) -> Move {
    if mask >> i & 1 == 0 {
        Move::P
    } else {
        Move::Q
    }
}

/// Sums every path over `2^n` masks into a dense `[−n, n]` table, in fixed
/// chunks whose partial sums are combined in chunk order.
fn brute_force_table(n: usize, initial: Move, m: &StepMatrices, keep: impl Fn(i64) -> bool + Sync) -> Field {
    let total = 1u64 << n;
    let chunks = CHUNKS.min(total);
    let width = 2 * n + 1;
    let partials: Vec<Vec<Spinor>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![Spinor::ZERO; width];
            let (start, end) = (c * total / chunks, (c + 1) * total / chunks);
            for mask in start..end {
                let disp = n as i64 - 2 * mask.count_ones() as i64;
                if !keep(disp) {
                    continue;
                }
                let mut prev = initial;
                let mut amp = Amplitude::ONE;
                for i in 0..n {
                    let mv = mask_move(mask, i);
                    amp *= m.transition(prev, mv);
                    prev = mv;
                }
                let slot = &mut acc[(disp + n as i64) as usize];
                match prev {
                    Move::P => slot.p += amp,
                    Move::Q => slot.q += amp,
                }
            }
            acc
        })
        .collect();
    let mut sites = vec![Spinor::ZERO; width];
    for part in partials {
        for (s, v) in sites.iter_mut().zip(part) {
            *s += v;
        }
    }
    Field::from_sites(-(n as i64), sites)
}

/// Sum over all `2^n` paths ending at `query.x`, split by final move.
pub fn kernel_bruteforce(query: &KernelQuery, m: &StepMatrices) -> Result<Spinor, CheckerboardError> {
    kernel_bruteforce_capped(query, m, BRUTE_FORCE_CAP)
}

pub fn kernel_bruteforce_capped(query: &KernelQuery, m: &StepMatrices, cap: usize) -> Result<Spinor, CheckerboardError> {
    check_cap(query.n_steps, cap)?;
    if !query.is_reachable() {
        return Ok(Spinor::ZERO);
    }
    let x = query.x;
    Ok(brute_force_table(query.n_steps, query.initial, m, move |d| d == x).get(x))
}

/// Every displacement at once, on `[−n, n]`.
pub fn kernel_bruteforce_field(n: usize, initial: Move, m: &StepMatrices, cap: usize) -> Result<Field, CheckerboardError> {
    check_cap(n, cap)?;
    Ok(brute_force_table(n, initial, m, |_| true))
}

/// Same values as the brute force, by repeated stepping of the source.
pub fn kernel_dp(query: &KernelQuery, m: &StepMatrices) -> Spinor {
    if !query.is_reachable() {
        return Spinor::ZERO;
    }
    let mut ev = PointEvolution::new(0, Spinor::basis(query.initial), m);
    ev.advance_by(query.n_steps);
    ev.get(query.x)
}

/// Dense `[−n, n]` slice after `n` steps from a basis source.
pub fn kernel_dp_field(n: usize, initial: Move, m: &StepMatrices) -> Field {
    let mut ev = PointEvolution::new(0, Spinor::basis(initial), m);
    ev.advance_by(n);
    ev.to_field()
}

/// `N(R)`: number of `n`-move paths ending at `x` with `R` reversals,
/// counting a first move that differs from `initial` as a reversal.
pub fn corner_counts(n: usize, x: i64, initial: Move, cap: usize) -> Result<BTreeMap<usize, u64>, CheckerboardError> {
    check_cap(n, cap)?;
    let mut hist = BTreeMap::new();
    let query = KernelQuery::new(n, initial, x);
    if !query.is_reachable() {
        return Ok(hist);
    }
    for mask in 0..1u64 << n {
        if n as i64 - 2 * mask.count_ones() as i64 != x {
            continue;
        }
        let mut prev = initial;
        let mut r = 0;
        for i in 0..n {
            let mv = mask_move(mask, i);
            r += usize::from(mv != prev);
            prev = mv;
        }
        *hist.entry(r).or_insert(0) += 1;
    }
    Ok(hist)
}

/// `Σ_{R ≤ R_max} N(R)·x^{n−R}·y^R`; all reversal counts when `r_max` is `None`.
pub fn corner_weighted_sum(
    n: usize,
    x: i64,
    initial: Move,
    r_max: Option<usize>,
    m: &StepMatrices,
) -> Result<Amplitude, CheckerboardError> {
    corner_weighted_sum_capped(n, x, initial, r_max, m, BRUTE_FORCE_CAP)
}

/// The corner sum split by final move, for every displacement on `[−n, n]`.
pub fn corner_kernel_field(n: usize, initial: Move, m: &StepMatrices, cap: usize) -> Result<Field, CheckerboardError> {
    check_cap(n, cap)?;
    // hist[x + n][final][R]
    let mut hist = vec![[vec![0u64; n + 1], vec![0u64; n + 1]]; 2 * n + 1];
    for mask in 0..1u64 << n {
        let disp = n as i64 - 2 * mask.count_ones() as i64;
        let mut prev = initial;
        let mut r = 0;
        for i in 0..n {
            let mv = mask_move(mask, i);
            r += usize::from(mv != prev);
            prev = mv;
        }
        hist[(disp + n as i64) as usize][prev.index()][r] += 1;
    }
    let weight = |counts: &[u64]| -> Amplitude {
        counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(r, &c)| m.x().powi((n - r) as u32) * m.y().powi(r as u32) * c as f64)
            .sum()
    };
    let sites = hist.iter().map(|[p, q]| Spinor::new(weight(p), weight(q))).collect();
    Ok(Field::from_sites(-(n as i64), sites))
}

pub(crate) fn corner_weighted_sum_capped(
    n: usize,
    x: i64,
    initial: Move,
    r_max: Option<usize>,
    m: &StepMatrices,
    cap: usize,
) -> Result<Amplitude, CheckerboardError> {
    let hist = corner_counts(n, x, initial, cap)?;
    Ok(hist
        .iter()
        .filter(|(&r, _)| r_max.is_none_or(|lim| r <= lim))
        .map(|(&r, &count)| m.x().powi((n - r) as u32) * m.y().powi(r as u32) * count as f64)
        .sum())
}
