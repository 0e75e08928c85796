//! Invariant suites shared by the command line and the acceptance tests.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::checkerboard::{
    convergence_orders, corner_weighted_sum, kernel_bruteforce_field, kernel_dp_field, make_step_matrices, step,
    CheckerboardError, DiracStudy, Field, PhaseBranch, PointEvolution, Source, Spinor, StepMatrices,
    ZitterEvolution, BRUTE_FORCE_CAP,
};
use crate::sequences::Move;

const MOVES: [Move; 2] = [Move::P, Move::Q];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Unitarity,
    Oracle,
    Dirac,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Unitarity, Suite::Oracle, Suite::Dirac];
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unitarity" => Ok(Suite::Unitarity),
            "oracle" => Ok(Suite::Oracle),
            "dirac" => Ok(Suite::Dirac),
            other => Err(format!("unknown suite `{other}`")),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Unitarity => "unitarity",
            Suite::Oracle => "oracle",
            Suite::Dirac => "dirac",
        })
    }
}

/// One measured quantity against its limit.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `measured ≤ limit`.
    pub fn at_most(name: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self { name: name.into(), measured, limit, passed: measured <= limit }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: measured {:e} (limit {:e})", self.name, self.measured, self.limit)
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub matrix_draws: usize,
    pub evolution_steps: usize,
    pub checkpoint_every: usize,
    pub oracle_max_steps: usize,
    pub phase_angles: usize,
    pub zitter_steps: usize,
    pub dirac: DiracStudy,
    pub dirac_spacings: Vec<f64>,
    pub algebraic_tol: f64,
    pub evolution_tol: f64,
    /// Accepted convergence orders are `order_target ± order_halfwidth`.
    pub order_target: f64,
    pub order_halfwidth: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            matrix_draws: 1000,
            evolution_steps: 10_000,
            checkpoint_every: 1000,
            oracle_max_steps: 12,
            phase_angles: 64,
            zitter_steps: 1000,
            dirac: DiracStudy::default(),
            dirac_spacings: vec![1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0],
            algebraic_tol: 1e-12,
            evolution_tol: 1e-10,
            order_target: 1.0,
            order_halfwidth: 0.2,
        }
    }
}

/// A valid `(b, θ)` pair with `b` uniform in `(0, 1)`.
pub fn random_parameters(rng: &mut impl Rng) -> (f64, f64) {
    let b = loop {
        let b: f64 = rng.gen();
        if b > 0.0 {
            break b;
        }
    };
    let theta = if rng.gen::<bool>() { FRAC_PI_2 } else { 3.0 * FRAC_PI_2 };
    (b, theta)
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport, CheckerboardError> {
    let checks = match suite {
        Suite::Unitarity => unitarity(cfg)?,
        Suite::Oracle => oracle(cfg)?,
        Suite::Dirac => dirac(cfg)?,
    };
    Ok(SuiteReport { suite, checks })
}

/// Largest `|Σp − 1|` seen at the checkpoints of a point-source run.
pub fn point_source_drift(source: Spinor, m: &StepMatrices, steps: usize, every: usize) -> f64 {
    let mut ev = PointEvolution::new(0, source, m);
    let norm = source.norm();
    let mut worst = 0f64;
    for k in 1..=steps {
        ev.advance();
        if k % every.max(1) == 0 || k == steps {
            worst = worst.max((ev.total_probability() - norm).abs());
        }
    }
    worst
}

fn unitarity(cfg: &SuiteConfig) -> Result<Vec<Check>, CheckerboardError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = 0f64;
    for _ in 0..cfg.matrix_draws {
        let (b, theta) = random_parameters(&mut rng);
        worst = worst.max(make_step_matrices(b, theta)?.unitarity_defect());
    }
    let mut checks =
        vec![Check::at_most(format!("Q†Q + P†P = I over {} random draws", cfg.matrix_draws), worst, cfg.algebraic_tol)];

    let (b, theta) = random_parameters(&mut rng);
    for (label, m) in [("symmetric", StepMatrices::symmetric()), ("random b", make_step_matrices(b, theta)?)] {
        let drift = point_source_drift(Spinor::basis(Move::P), &m, cfg.evolution_steps, cfg.checkpoint_every);
        checks.push(Check::at_most(
            format!("point source, {label} matrices, {} steps", cfg.evolution_steps),
            drift,
            cfg.evolution_tol,
        ));
    }

    let m = StepMatrices::symmetric().with_global_phase(rng.gen_range(0.0..2.0 * PI));
    let mut f = Field::from_fn(-40, 40, |x| {
        let g = (-(x as f64).powi(2) / 200.0).exp();
        Spinor::new(crate::Amplitude::new(g, 0.0), crate::Amplitude::new(0.0, -g * 0.5))
    });
    let norm = f.total_probability();
    let mut drift = 0f64;
    for _ in 0..500 {
        f = step(&f, &m);
        drift = drift.max((f.total_probability() - norm).abs() / norm);
    }
    checks.push(Check::at_most("extended field, rotated matrices, 500 steps", drift, cfg.evolution_tol));

    let m = StepMatrices::symmetric();
    let mut worst = 0f64;
    for n in 0..=cfg.oracle_max_steps {
        for init in MOVES {
            let f = kernel_bruteforce_field(n, init, &m, BRUTE_FORCE_CAP)?;
            worst = worst.max((f.total_probability() - 1.0).abs());
        }
    }
    checks.push(Check::at_most(
        format!("path-sum total probability, n ≤ {}", cfg.oracle_max_steps),
        worst,
        cfg.algebraic_tol,
    ));

    let b: f64 = rng.gen_range(0.05..0.95);
    let (plus, minus) = (StepMatrices::with_branch(b, PhaseBranch::Plus), StepMatrices::with_branch(b, PhaseBranch::Minus));
    let mut worst = 0f64;
    for n in 0..=cfg.oracle_max_steps {
        for init in MOVES {
            worst = worst.max(prob_diff(&kernel_dp_field(n, init, &plus), &kernel_dp_field(n, init, &minus)));
        }
    }
    checks.push(Check::at_most("θ = π/2 and θ = 3π/2 give equal probabilities", worst, cfg.algebraic_tol));
    Ok(checks)
}

fn prob_diff(f: &Field, g: &Field) -> f64 {
    let lo = f.lo().min(g.lo());
    let hi = f.hi().max(g.hi());
    (lo..=hi)
        .map(|x| {
            let (u, v) = (f.get(x), g.get(x));
            (u.p.born() - v.p.born()).abs().max((u.q.born() - v.q.born()).abs())
        })
        .fold(0.0, f64::max)
}

/// Max `|K_dp − K_brute|` over all `n ≤ max_n`, both initial states, every site.
pub fn dp_vs_bruteforce(m: &StepMatrices, max_n: usize) -> Result<f64, CheckerboardError> {
    let mut worst = 0f64;
    for n in 0..=max_n {
        for init in MOVES {
            let brute = kernel_bruteforce_field(n, init, m, BRUTE_FORCE_CAP)?;
            worst = worst.max(kernel_dp_field(n, init, m).max_abs_diff(&brute));
        }
    }
    Ok(worst)
}

/// Max `|Σ_R N(R) xⁿ⁻ᴿ yᴿ − (K_P + K_Q)|` over the same range.
pub fn corners_vs_bruteforce(m: &StepMatrices, max_n: usize) -> Result<f64, CheckerboardError> {
    let mut worst = 0f64;
    for n in 0..=max_n {
        for init in MOVES {
            let brute = kernel_bruteforce_field(n, init, m, BRUTE_FORCE_CAP)?;
            for x in -(n as i64)..=n as i64 {
                let k = brute.get(x);
                let c = corner_weighted_sum(n, x, init, None, m)?;
                worst = worst.max(c.max_abs_diff(k.p + k.q));
            }
        }
    }
    Ok(worst)
}

/// Max change of any kernel probability under `angles` random global phases.
pub fn phase_freedom(m: &StepMatrices, max_n: usize, angles: usize, rng: &mut impl Rng) -> f64 {
    let base: Vec<Field> = (0..=max_n).flat_map(|n| MOVES.map(|i| kernel_dp_field(n, i, m))).collect();
    let mut worst = 0f64;
    for _ in 0..angles {
        let r = m.with_global_phase(rng.gen_range(0.0..2.0 * PI));
        let rotated = (0..=max_n).flat_map(|n| MOVES.map(|i| kernel_dp_field(n, i, &r)));
        for (f, g) in base.iter().zip(rotated) {
            worst = worst.max(prob_diff(f, &g));
        }
    }
    worst
}

/// Largest `|mean|` over the slices, and whether every slice was mirror symmetric.
pub fn zitter_mean(source: Source, m: &StepMatrices, steps: usize) -> (f64, bool) {
    let mut worst = 0f64;
    let mut symmetric = true;
    for d in ZitterEvolution::new(source, m).take(steps + 1) {
        worst = worst.max(d.mean().abs());
        symmetric &= d.is_mirror_symmetric();
    }
    (worst, symmetric)
}

fn oracle(cfg: &SuiteConfig) -> Result<Vec<Check>, CheckerboardError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x0a11);
    let n = cfg.oracle_max_steps;
    let (b, theta) = random_parameters(&mut rng);
    let random = make_step_matrices(b, theta)?;
    let mut checks = Vec::new();
    for (label, m) in [("symmetric", StepMatrices::symmetric()), ("random b", random)] {
        checks.push(Check::at_most(
            format!("kernel_dp = kernel_bruteforce, {label}, n ≤ {n}"),
            dp_vs_bruteforce(&m, n)?,
            cfg.algebraic_tol,
        ));
        checks.push(Check::at_most(
            format!("corner sum = summed brute force, {label}, n ≤ {n}"),
            corners_vs_bruteforce(&m, n)?,
            cfg.algebraic_tol,
        ));
    }
    let m = StepMatrices::symmetric();
    checks.push(Check::at_most(
        format!("phase freedom over {} angles", cfg.phase_angles),
        phase_freedom(&m, n, cfg.phase_angles, &mut rng),
        cfg.algebraic_tol,
    ));

    let mut mirror = 0f64;
    for k in 0..=4 * n {
        let (fp, fq) = (kernel_dp_field(k, Move::P, &m), kernel_dp_field(k, Move::Q, &m));
        for x in -(k as i64)..=k as i64 {
            mirror = mirror.max(fp.get(x).p.max_abs_diff(fq.get(-x).q));
            mirror = mirror.max(fp.get(x).q.max_abs_diff(fq.get(-x).p));
        }
    }
    checks.push(Check::at_most("K_PP(x) = K_QQ(−x) and K_QP(x) = K_PQ(−x)", mirror, 0.0));

    for source in [Source::Symmetric, Source::Coherent] {
        let (mean, symmetric) = zitter_mean(source, &m, cfg.zitter_steps);
        let measured = if symmetric { mean } else { f64::INFINITY };
        checks.push(Check::at_most(format!("{source} source mean displacement, {} slices", cfg.zitter_steps), measured, 0.0));
    }
    Ok(checks)
}

fn dirac(cfg: &SuiteConfig) -> Result<Vec<Check>, CheckerboardError> {
    let runs = cfg.dirac.run(&cfg.dirac_spacings)?;
    let mut checks = Vec::new();
    for (w, order) in runs.windows(2).zip(convergence_orders(&runs)) {
        let name = format!(
            "|order − {}| for order {order:.4} between ε = {} and ε = {} (residuals {:e}, {:e})",
            cfg.order_target, w[0].0, w[1].0, w[0].1, w[1].1
        );
        let dev = if order.is_finite() { (order - cfg.order_target).abs() } else { f64::INFINITY };
        checks.push(Check::at_most(name, dev, cfg.order_halfwidth));
    }
    let free = DiracStudy { mass: 0.0, ..cfg.dirac };
    let mut worst = 0f64;
    for &eps in &cfg.dirac_spacings {
        worst = worst.max(free.residual(eps)?);
    }
    checks.push(Check::at_most("massless residual", worst, cfg.algebraic_tol));
    Ok(checks)
}
