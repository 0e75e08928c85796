//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the verdicts are always printed.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zitterlab::checkerboard::{
    convergence_orders, corner_weighted_sum, kernel_bruteforce, kernel_bruteforce_field, kernel_dp, make_step_matrices,
    path_amplitude, step, DiracStudy, Field, KernelQuery, PointEvolution, Source, Spinor, StepMatrices,
    ZitterEvolution, BRUTE_FORCE_CAP,
};
use zitterlab::poset::IntervalClass;
use zitterlab::proc_calc::{amp_add, amp_mul, born, Amplitude};
use zitterlab::seqlang::{parse, AmplitudeEnv};
use zitterlab::sequences::{build_free_particle_poset, enumerate_sequences, LatticePoint, Move, MoveSequence};
use zitterlab::suite::phase_freedom;

type Verdict = Result<String, String>;

const MOVES: [Move; 2] = [Move::P, Move::Q];

// The free-particle table, four P moves and three Q moves.
const TABLE: [&str; 35] = [
    "PPPPQQQ", "PQPPPQQ", "QPPPPQQ", "QQPPPPQ", "PPPQPQQ", "PQPPQPQ", "QPPPQPQ", "QQPPPQP", "PPPQQPQ",
    "PQPQPPQ", "QPPQPPQ", "QQPPQPP", "PPPQQQP", "PQPPQQP", "QPPPQQP", "QQPQPPP", "PPQPPQQ", "PQPQPQP",
    "QPPQPQP", "QQQPPPP", "PPQPQPQ", "PQPQQPP", "QPPQQPP", "PPQQPPQ", "PQQPPPQ", "QPQPPPQ", "PPQPQQP",
    "PQQPPQP", "QPQPPQP", "PPQQPQP", "PQQPQPP", "QPQPQPP", "PPQQQPP", "PQQQPPP", "QPQQPPP",
];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn c1_sequence_count() -> Verdict {
    let start = Instant::now();
    let seqs = enumerate_sequences(4, 3).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let got: BTreeSet<String> = seqs.iter().map(|s| s.to_string()).collect();
    let table: BTreeSet<String> = TABLE.iter().map(|s| s.to_string()).collect();
    ensure(seqs.len() == 35, || format!("{} sequences", seqs.len()))?;
    ensure(got.len() == 35, || "duplicates in the enumeration".into())?;
    ensure(got == table, || format!("differs from the table: {:?}", got.symmetric_difference(&table).collect::<Vec<_>>()))?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("35 sequences, equal to the table, in {elapsed:.2?}"))
}

fn c2_light_like_steps() -> Verdict {
    let mut intervals = 0;
    for s in TABLE {
        let seq: MoveSequence = s.parse().map_err(|e| format!("{e}"))?;
        let fp = build_free_particle_poset(&seq).map_err(|e| e.to_string())?;
        let pairs = fp.particle_intervals().map_err(|e| format!("{s}: {e}"))?;
        ensure(pairs.len() == 6, || format!("{s}: {} intervals", pairs.len()))?;
        for (k, pair) in pairs.iter().enumerate() {
            ensure(pair.classify() == IntervalClass::ProjectionLike && pair.scalar() == 0.0, || {
                format!("{s} step {k}: {pair:?} is {:?} with scalar {}", pair.classify(), pair.scalar())
            })?;
            ensure(pair.dp.fract() == 0.0 && pair.dq.fract() == 0.0, || format!("{s}: non-integer {pair:?}"))?;
            intervals += 1;
        }
    }
    Ok(format!("{intervals} particle intervals over 35 sequences, all projection-like with scalar 0"))
}

// Complex entries as plain tuples, independent of the library's algebra.
type C = (f64, f64);

fn c_of(a: Amplitude) -> C {
    (a.a1, a.a2)
}

fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn conj(a: C) -> C {
    (a.0, -a.1)
}

fn c3_matrix_derivation() -> Verdict {
    let m = make_step_matrices(FRAC_1_SQRT_2, FRAC_PI_2).map_err(|e| e.to_string())?;
    let h = FRAC_1_SQRT_2;
    let expect_p = [[(h, 0.0), (0.0, h)], [(0.0, 0.0), (0.0, 0.0)]];
    let expect_q = [[(0.0, 0.0), (0.0, 0.0)], [(0.0, h), (h, 0.0)]];
    let (p, q) = (m.p(), m.q());
    let mut entry_err = 0f64;
    for i in 0..2 {
        for j in 0..2 {
            for (got, want) in [(c_of(p.0[i][j]), expect_p[i][j]), (c_of(q.0[i][j]), expect_q[i][j])] {
                entry_err = entry_err.max((got.0 - want.0).abs()).max((got.1 - want.1).abs());
            }
        }
    }
    ensure(entry_err <= 1e-15, || format!("entry error {entry_err:e}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0f64;
    for _ in 0..1000 {
        let b = rng.gen_range(f64::EPSILON..1.0);
        let theta = if rng.gen() { FRAC_PI_2 } else { 3.0 * FRAC_PI_2 };
        let m = make_step_matrices(b, theta).map_err(|e| e.to_string())?;
        let (p, q) = (m.p(), m.q());
        for i in 0..2 {
            for j in 0..2 {
                // (Q†Q + P†P)_ij = Σ_k conj(Q_ki) Q_kj + conj(P_ki) P_kj
                let mut s = (0.0, 0.0);
                for k in 0..2 {
                    for mat in [&q, &p] {
                        let t = cmul(conj(c_of(mat.0[k][i])), c_of(mat.0[k][j]));
                        s = (s.0 + t.0, s.1 + t.1);
                    }
                }
                let id = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s.0 - id).abs()).max(s.1.abs());
            }
        }
    }
    ensure(worst <= 1e-12, || format!("unitarity defect {worst:e}"))?;
    Ok(format!("entries within {entry_err:e}; Q†Q + P†P = I within {worst:e} over 1000 draws"))
}

// Path sum by explicit recursion over move strings.
fn recursive_kernel(n: usize, prev: Move, x: i64, amp: C, m: &StepMatrices, out: &mut Vec<(i64, Move, C)>) {
    if n == 0 {
        out.push((x, prev, amp));
        return;
    }
    for mv in MOVES {
        let t = if mv == prev { m.x() } else { m.y() };
        recursive_kernel(n - 1, mv, x + mv.displacement(), cmul(amp, c_of(t)), m, out);
    }
}

fn c4_oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let m = StepMatrices::symmetric();
    let mut worst = 0f64;
    let mut queries = 0;
    for n in 0..=12 {
        for init in MOVES {
            for x in -(n as i64)..=n as i64 {
                let q = KernelQuery::new(n, init, x);
                if !q.is_reachable() {
                    continue;
                }
                let brute = kernel_bruteforce(&q, &m).map_err(|e| e.to_string())?;
                worst = worst.max(kernel_dp(&q, &m).max_abs_diff(&brute));
                queries += 1;
            }
            if n <= 10 {
                let mut paths = Vec::new();
                recursive_kernel(n, init, 0, (1.0, 0.0), &m, &mut paths);
                let brute = kernel_bruteforce_field(n, init, &m, BRUTE_FORCE_CAP).map_err(|e| e.to_string())?;
                let mut acc = Field::from_fn(-(n as i64), n as i64, |_| Spinor::ZERO);
                let mut sites: Vec<Spinor> = acc.sites().to_vec();
                for (x, last, a) in paths {
                    let s = &mut sites[(x + n as i64) as usize];
                    let amp = Amplitude::new(a.0, a.1);
                    match last {
                        Move::P => s.p += amp,
                        Move::Q => s.q += amp,
                    }
                }
                acc = Field::from_sites(-(n as i64), sites);
                worst = worst.max(acc.max_abs_diff(&brute));
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(worst <= 1e-12, || format!("max abs error {worst:e}"))?;
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!("{queries} queries, max abs error {worst:e}, {elapsed:.2?}"))
}

fn c5_unitarity_at_scale() -> Verdict {
    let start = Instant::now();
    let steps = 100_000;
    let mut ev = PointEvolution::new(0, Spinor::basis(Move::P), &StepMatrices::symmetric());
    let mut worst = 0f64;
    for k in 1..=steps {
        ev.advance();
        if k % 1000 == 0 {
            worst = worst.max((ev.total_probability() - 1.0).abs());
        }
    }
    ensure(worst <= 1e-10, || format!("drift {worst:e}"))?;
    Ok(format!("{steps} steps, max |Σp − 1| = {worst:e} over 100 checkpoints, {:.2?}", start.elapsed()))
}

fn c6_corner_decomposition() -> Verdict {
    let m = StepMatrices::symmetric();
    let mut worst = 0f64;
    for n in 0..=12 {
        for init in MOVES {
            let brute = kernel_bruteforce_field(n, init, &m, BRUTE_FORCE_CAP).map_err(|e| e.to_string())?;
            for x in -(n as i64)..=n as i64 {
                let k = brute.get(x);
                let c = corner_weighted_sum(n, x, init, None, &m).map_err(|e| e.to_string())?;
                worst = worst.max(c.max_abs_diff(k.p + k.q));
            }
        }
    }
    ensure(worst <= 1e-12, || format!("max abs error {worst:e}"))?;
    Ok(format!("n ≤ 12, both initial states, max abs error {worst:e}"))
}

fn c7_phase_freedom() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = phase_freedom(&StepMatrices::symmetric(), 12, 64, &mut rng);
    // and through path amplitudes directly
    let seqs = enumerate_sequences(4, 3).map_err(|e| e.to_string())?;
    let m = StepMatrices::with_branch(0.3, zitterlab::checkerboard::PhaseBranch::Minus);
    for _ in 0..64 {
        let r = m.with_global_phase(rng.gen_range(0.0..2.0 * PI));
        for s in &seqs {
            for init in MOVES {
                worst = worst.max((born(path_amplitude(s, init, &r)) - born(path_amplitude(s, init, &m))).abs());
            }
        }
    }
    ensure(worst <= 1e-12, || format!("probability change {worst:e}"))?;
    Ok(format!("64 angles, max probability change {worst:e}"))
}

fn c8_dirac_limit() -> Verdict {
    let start = Instant::now();
    let spacings = [1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0];
    let runs = DiracStudy::default().run(&spacings).map_err(|e| e.to_string())?;
    let orders = convergence_orders(&runs);
    let elapsed = start.elapsed();
    for (w, o) in runs.windows(2).zip(&orders) {
        ensure(w[1].1 < w[0].1, || format!("residual grew: {runs:?}"))?;
        ensure((0.8..=1.2).contains(o), || format!("order {o} outside [0.8, 1.2]; residuals {runs:?}"))?;
    }
    within(elapsed, Duration::from_secs(60))?;
    let residuals: Vec<String> = runs.iter().map(|(_, r)| format!("{r:.4e}")).collect();
    Ok(format!("residuals {}, orders {:.4} and {:.4}, {elapsed:.2?}", residuals.join(", "), orders[0], orders[1]))
}

fn c9_zitterbewegung() -> Verdict {
    // every path step, exhaustively
    let mut steps_checked = 0u64;
    for n in 1..=12usize {
        for mask in 0..1u64 << n {
            let moves = (0..n).map(|i| if mask >> i & 1 == 0 { Move::P } else { Move::Q }).collect();
            let path = MoveSequence::new(moves).path(LatticePoint::default());
            for (dx, dt) in path.steps() {
                ensure(dx.abs() == 1 && dt == 1, || format!("step ({dx}, {dt})"))?;
                steps_checked += 1;
            }
        }
    }
    // sampled paths of length 10⁴
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let moves = (0..10_000).map(|_| if rng.gen() { Move::P } else { Move::Q }).collect();
        let path = MoveSequence::new(moves).path(LatticePoint::default());
        ensure(path.steps().all(|(dx, dt)| dx.abs() == 1 && dt == 1), || "sampled path has a slow step".into())?;
    }
    // a DP transition only moves amplitude by one site
    let m = StepMatrices::symmetric();
    for _ in 0..1000 {
        let x = rng.gen_range(-10_000i64..=10_000);
        let src = Spinor::new(Amplitude::new(rng.gen(), rng.gen()), Amplitude::new(rng.gen(), rng.gen()));
        let next = step(&Field::point(x, src), &m).trimmed();
        let support: Vec<i64> = next.iter().filter(|(_, s)| !s.is_zero()).map(|(y, _)| y).collect();
        ensure(support.iter().all(|y| (y - x).abs() == 1), || format!("transition from {x} reached {support:?}"))?;
        ensure(next.get(x + 1).q.is_zero() && next.get(x - 1).p.is_zero(), || "component moved the wrong way".into())?;
    }
    // symmetric source, 10⁴ slices
    let n = 10_000;
    let mut worst_mean = 0f64;
    let mut runs = 0;
    for source in [Source::Symmetric, Source::Coherent] {
        let mut evolution = ZitterEvolution::new(source, &m);
        for t in 0..=n {
            if t > 0 {
                evolution.advance();
            }
            let d = evolution.distribution();
            ensure(d.is_mirror_symmetric(), || format!("{source} slice {t} not mirror symmetric"))?;
            worst_mean = worst_mean.max(d.mean().abs());
            if t % 1000 == 0 {
                for r in evolution.runs() {
                    // parity sublattice: every stored site is ≡ t (mod 2) and within the light cone
                    ensure((0..=t).all(|j| (r.site(j) - t as i64).rem_euclid(2) == 0 && r.site(j).abs() <= t as i64), || {
                        format!("slice {t} off the light-cone lattice")
                    })?;
                    ensure(r.get(t as i64 + 1).is_zero(), || "amplitude outside the light cone".into())?;
                }
            }
        }
        runs += 1;
    }
    ensure(worst_mean == 0.0, || format!("mean displacement {worst_mean:e}"))?;
    Ok(format!(
        "{steps_checked} path steps and 10⁶ sampled steps at |Δx| = 1; {runs} symmetric sources, mean exactly 0 on {} slices",
        n + 1
    ))
}

fn rand_amp(rng: &mut impl Rng) -> Amplitude {
    Amplitude::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn c10_process_calculus() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0f64;
    let mut note = |v: f64| worst = worst.max(v);
    for _ in 0..10_000 {
        let (a, b, c) = (rand_amp(&mut rng), rand_amp(&mut rng), rand_amp(&mut rng));
        note(amp_mul(a, amp_add(b, c)).max_abs_diff(amp_add(amp_mul(a, b), amp_mul(a, c))));
        note(amp_mul(amp_add(a, b), c).max_abs_diff(amp_add(amp_mul(a, c), amp_mul(b, c))));
        note(amp_mul(amp_mul(a, b), c).max_abs_diff(amp_mul(a, amp_mul(b, c))));
        note(amp_add(amp_add(a, b), c).max_abs_diff(amp_add(a, amp_add(b, c))));
        note(amp_add(a, b).max_abs_diff(amp_add(b, a)));
        note((born(amp_mul(a, b)) - born(a) * born(b)).abs());
        // direct component formulas
        let prod = amp_mul(a, b);
        note((prod.a1 - (a.a1 * b.a1 - a.a2 * b.a2)).abs().max((prod.a2 - (a.a1 * b.a2 + a.a2 * b.a1)).abs()));
        note((born(a) - (a.a1 * a.a1 + a.a2 * a.a2)).abs());
    }
    ensure(worst <= 1e-12, || format!("algebra error {worst:e}"))?;
    let algebra = worst;

    let coarse = parse("[m1,(m2,m2p),m3]").map_err(|e| e.to_string())?;
    let parallel = parse("[m1,m2,m3] v [m1,m2p,m3]").map_err(|e| e.to_string())?;
    let fine = parse("[m1,m2,m3]").map_err(|e| e.to_string())?;
    let series = parse("[m1,m2].[m2,m3]").map_err(|e| e.to_string())?;
    ensure(coarse == parallel, || "coarse-grained atom is not the parallel combination".into())?;
    let mut worst = 0f64;
    for _ in 0..10_000 {
        let links = [("m1", "m2"), ("m2", "m3"), ("m1", "m2p"), ("m2p", "m3")].map(|l| (l, rand_amp(&mut rng)));
        let mut env = AmplitudeEnv::new();
        for ((f, t), a) in links {
            env.insert(f, t, a);
        }
        let [(_, a12), (_, a23), (_, a12p), (_, a2p3)] = links;
        let direct_fine = amp_mul(a12, a23);
        let direct_coarse = amp_add(direct_fine, amp_mul(a12p, a2p3));
        let ev = |e: &zitterlab::seqlang::SeqExpr| e.evaluate(&env).map_err(|e| e.to_string());
        worst = worst.max(ev(&fine)?.max_abs_diff(direct_fine));
        worst = worst.max(ev(&series)?.max_abs_diff(direct_fine));
        worst = worst.max(ev(&coarse)?.max_abs_diff(direct_coarse));
        worst = worst.max((coarse.probability(&env).map_err(|e| e.to_string())? - born(direct_coarse)).abs());
    }
    ensure(worst <= 1e-12, || format!("seqlang error {worst:e}"))?;
    Ok(format!("10⁴ draws, algebra error {algebra:e}, expression error {worst:e}"))
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("sequence count", c1_sequence_count),
        ("light-like steps", c2_light_like_steps),
        ("matrix derivation", c3_matrix_derivation),
        ("oracle equivalence", c4_oracle_equivalence),
        ("unitarity at scale", c5_unitarity_at_scale),
        ("corner decomposition", c6_corner_decomposition),
        ("phase freedom", c7_phase_freedom),
        ("Dirac limit", c8_dirac_limit),
        ("Zitterbewegung", c9_zitterbewegung),
        ("process-calculus algebra", c10_process_calculus),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
