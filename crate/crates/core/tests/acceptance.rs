//! Acceptance checks for the simulator and the analysis layer.
//!
//! Runs as a plain binary and prints one PASS/FAIL line per check. The
//! process exits with status 1 if any check fails. A single check can be
//! run by passing its key, e.g. `cargo test --test acceptance -- drift`.

use std::fs;
use std::process::Command;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

use spatial_game::analysis::{c_factor, generic_payoffs, heterozygosity, in_coexistence_triangle};
use spatial_game::boundary::estimate_leftmost_drift;
use spatial_game::dynamics::{
    biased_voter_rate, flip_rate, mu_bounds, DirectEngine, Engine, GraphicalEngine,
    NegativeGraphicalEngine,
};
use spatial_game::rng::{dynamics_stream, initial_stream, stream};
use spatial_game::{
    integrate_replicator, replicator_regime, run_ensemble, Configuration, InitialCondition,
    LatticeSpec, Method, PayoffMatrix, ReplicatorRegime, SimParams, SnapshotPolicy, Strategy,
};

/// Reference slopes of the coexistence triangle to four decimals, rows
/// `M = 1..9`, columns `d = 1..9`.
const C_TABLE: [[f64; 9]; 9] = [
    [1.0000, 1.4000, 1.4706, 1.4906, 1.4969, 1.4990, 1.4997, 1.4999, 1.5000],
    [1.3333, 1.6140, 1.6566, 1.6647, 1.6663, 1.6666, 1.6667, 1.6667, 1.6667],
    [1.5000, 1.7195, 1.7457, 1.7494, 1.7499, 1.7500, 1.7500, 1.7500, 1.7500],
    [1.6000, 1.7803, 1.7978, 1.7998, 1.8000, 1.8000, 1.8000, 1.8000, 1.8000],
    [1.6667, 1.8196, 1.8321, 1.8332, 1.8333, 1.8333, 1.8333, 1.8333, 1.8333],
    [1.7143, 1.8470, 1.8564, 1.8571, 1.8571, 1.8571, 1.8571, 1.8571, 1.8571],
    [1.7500, 1.8672, 1.8745, 1.8750, 1.8750, 1.8750, 1.8750, 1.8750, 1.8750],
    [1.7778, 1.8827, 1.8885, 1.8889, 1.8889, 1.8889, 1.8889, 1.8889, 1.8889],
    [1.8000, 1.8950, 1.8997, 1.9000, 1.9000, 1.9000, 1.9000, 1.9000, 1.9000],
];

type Entry = (&'static str, fn() -> Check);

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn m(a11: f64, a12: f64, a21: f64, a22: f64) -> PayoffMatrix {
    PayoffMatrix::new(a11, a12, a21, a22).unwrap()
}

fn slope_table() -> Check {
    let mut mismatches = Vec::new();
    for (i, row) in C_TABLE.iter().enumerate() {
        for (j, &published) in row.iter().enumerate() {
            let got = format!("{:.4}", c_factor(i + 1, j + 1));
            if got != format!("{published:.4}") {
                mismatches.push(format!("M={} d={}: {got} vs {published:.4}", i + 1, j + 1));
            }
        }
    }
    Check {
        name: "coexistence slope table, 81 entries at 4 decimals",
        pass: mismatches.is_empty(),
        detail: if mismatches.is_empty() {
            "all entries match".into()
        } else {
            mismatches.join("; ")
        },
    }
}

fn replicator_fixed_point() -> Check {
    let a = m(-8.0, 3.0, 4.0, -8.0);
    let target = 11.0 / 23.0;
    let ends: Vec<f64> = [0.1, 0.9]
        .iter()
        .map(|&u0| integrate_replicator(&a, u0, 100.0, 0.01).unwrap().final_value())
        .collect();
    let regime = replicator_regime(&a);
    let pass = ends.iter().all(|u| (u - target).abs() < 1e-4) && regime == ReplicatorRegime::Coexistence;
    Check {
        name: "replicator flow settles at the interior rest point",
        pass,
        detail: format!("u(100) = {:.8}, {:.8}; target {target:.8}; regime {}", ends[0], ends[1], regime.as_str()),
    }
}

/// Hand-written flip rate on a ring with nearest-neighbor interactions.
fn ring_rate(values: &[u8], x: usize, a: &[[f64; 2]; 2]) -> f64 {
    let l = values.len();
    let payoff = |y: usize| -> f64 {
        let i = (values[y] - 1) as usize;
        let nb = [values[(y + 1) % l], values[(y + l - 1) % l]];
        nb.iter().map(|&v| a[i][(v - 1) as usize]).sum::<f64>() / 2.0
    };
    let nb = [(x + 1) % l, (x + l - 1) % l];
    let other = nb.iter().filter(|&&y| values[y] != values[x]).count() as f64 / 2.0;
    let death = (-payoff(x)).max(0.0) * other;
    let birth: f64 = nb
        .iter()
        .filter(|&&y| values[y] != values[x])
        .map(|&y| payoff(y).max(0.0))
        .sum::<f64>()
        / 2.0;
    death + birth
}

fn first_flip_statistics() -> Check {
    let rows = [[1.0, -1.0], [2.0, -2.0]];
    let a = m(1.0, -1.0, 2.0, -2.0);
    let spec = LatticeSpec::new(1, 1, vec![6]).unwrap();
    let samples = 100_000u64;
    let mut draw = stream(2024, u64::MAX);
    // Configurations where every rate vanishes have no first flip.
    let mut configs = Vec::new();
    while configs.len() < 20 {
        let values: Vec<u8> = (0..6).map(|_| draw.random_range(1..=2)).collect();
        if (0..6).any(|x| ring_rate(&values, x, &rows) > 0.0) {
            configs.push(values);
        }
    }
    let worst: Vec<(f64, String)> = configs
        .par_iter()
        .enumerate()
        .map(|(k, values)| {
            let cfg = Configuration::from_values(&spec, values).unwrap();
            let rates: Vec<f64> = (0..6).map(|x| ring_rate(values, x, &rows)).collect();
            for (x, r) in rates.iter().enumerate() {
                assert!((r - flip_rate(x, &cfg, &a)).abs() < 1e-12);
            }
            let total: f64 = rates.iter().sum();
            let mut counts = [0u64; 6];
            let (mut sum, mut sum2) = (0.0, 0.0);
            for s in 0..samples {
                let mut engine = DirectEngine::game(cfg.clone(), a, stream(k as u64, s));
                let event = engine.step(f64::INFINITY).expect("some rate is positive");
                counts[event.site] += 1;
                sum += event.time;
                sum2 += event.time * event.time;
            }
            let n = samples as f64;
            let mut z_max: f64 = 0.0;
            for (x, &c) in counts.iter().enumerate() {
                let p = rates[x] / total;
                let se = (n * p * (1.0 - p)).sqrt();
                // A site that must or cannot flip has no sampling noise.
                let z = if se > 0.0 {
                    (c as f64 - n * p).abs() / se
                } else if c as f64 == n * p {
                    0.0
                } else {
                    f64::INFINITY
                };
                z_max = z_max.max(z);
            }
            let mean = sum / n;
            let se = ((sum2 / n - mean * mean) / n).sqrt();
            z_max = z_max.max((mean - 1.0 / total).abs() / se);
            (z_max, format!("{values:?}"))
        })
        .collect();
    let (z, at) = worst.iter().cloned().fold((0.0, String::new()), |acc, w| if w.0 > acc.0 { w } else { acc });
    Check {
        name: "first-flip site and holding time follow the flip rates",
        pass: z <= 3.0,
        detail: format!("largest deviation {z:.2} SE (at {at}) over 20 configurations x 10^5 samples"),
    }
}

fn index_of(cfg: &Configuration) -> usize {
    cfg.strategies()
        .iter()
        .enumerate()
        .map(|(i, s)| (*s == Strategy::Two) as usize * (1 << i))
        .sum()
}

/// Law of the ring of four sites at `t`, from the matrix exponential of the
/// generator assembled from [`ring_rate`].
fn exact_ring_law(start: &[u8], rows: &[[f64; 2]; 2], t: f64) -> Vec<f64> {
    let states = 16;
    let decode = |s: usize| -> Vec<u8> { (0..4).map(|i| 1 + ((s >> i) & 1) as u8).collect() };
    let mut q = DMatrix::<f64>::zeros(states, states);
    for s in 0..states {
        let values = decode(s);
        for x in 0..4 {
            let r = ring_rate(&values, x, rows);
            q[(s, s ^ (1 << x))] += r;
            q[(s, s)] -= r;
        }
    }
    let p = (q * t).exp();
    let s0 = (0..4).map(|i| ((start[i] - 1) as usize) << i).sum::<usize>();
    (0..states).map(|s| p[(s0, s)]).collect()
}

fn empirical_ring_law(a: &PayoffMatrix, start: &[u8], method: Method, replicates: usize) -> Vec<f64> {
    let spec = LatticeSpec::compact(1, 1, vec![4]).unwrap();
    let params = SimParams::new(0.5, 99)
        .with_init(InitialCondition::Explicit(start.to_vec()))
        .with_snapshots(SnapshotPolicy::None);
    let mut law = vec![0.0; 16];
    for t in run_ensemble(&spec, a, &params, method, replicates) {
        law[index_of(&t.unwrap().terminal)] += 1.0 / replicates as f64;
    }
    law
}

fn tv(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0
}

fn construction_equivalence() -> Check {
    let start = [1, 1, 2, 1];
    let replicates = 100_000;
    let generic = [[1.5, -2.0], [3.0, -0.5]];
    let negative = [[-5.0, -1.0], [-1.0, -2.0]];
    let mut pass = true;
    let mut detail = Vec::new();
    for (rows, other) in [(generic, Method::Graphical), (negative, Method::GraphicalNegative)] {
        let a = PayoffMatrix::from_rows(rows).unwrap();
        let exact = exact_ring_law(&start, &rows, 0.5);
        let direct = empirical_ring_law(&a, &start, Method::Direct, replicates);
        let thinned = empirical_ring_law(&a, &start, other, replicates);
        let d = tv(&direct, &thinned);
        pass &= d < 0.02;
        detail.push(format!(
            "{other} vs direct TV {d:.4} (to exact: direct {:.4}, {other} {:.4})",
            tv(&direct, &exact),
            tv(&thinned, &exact)
        ));
    }
    Check {
        name: "direct and graphical constructions agree on the four-site ring",
        pass,
        detail: detail.join("; "),
    }
}

/// Steps `engine` to `horizon`, returning the first violation of pathwise
/// monotonicity of the interface count, if any.
fn interface_violation<E: Engine>(engine: &mut E, horizon: f64) -> Option<String> {
    let mut last = engine.state().interfaces();
    while let Some(ev) = engine.step(horizon) {
        let now = engine.state().interfaces();
        if now > last || !(last - now).is_multiple_of(2) {
            return Some(format!("{last} -> {now} at t = {}", ev.time));
        }
        last = now;
    }
    None
}

fn interface_monotonicity() -> Check {
    let failures: Vec<String> = (0..1000u64)
        .into_par_iter()
        .filter_map(|case| {
            let mut r = stream(77, case);
            let mut entry = || -> f64 {
                if r.random_bool(0.3) {
                    r.random_range(-3..=3) as f64
                } else {
                    r.random_range(-6.0..6.0)
                }
            };
            let a = m(entry(), entry(), entry(), entry());
            let side = 2 * r.random_range(3..=30);
            let spec = LatticeSpec::new(1, 1, vec![side]).unwrap();
            let p = r.random_range(0.1..0.9);
            let cfg = InitialCondition::Bernoulli(p).build(&spec, &mut r).unwrap();
            let rng = dynamics_stream(case, 0);
            let found = match case % 3 {
                0 => interface_violation(&mut DirectEngine::game(cfg, a, rng), 20.0),
                1 => interface_violation(&mut GraphicalEngine::new(cfg, a, rng), 20.0),
                _ => match NegativeGraphicalEngine::new(cfg.clone(), a, rng.clone()) {
                    Ok(mut e) => interface_violation(&mut e, 20.0),
                    Err(_) => interface_violation(&mut DirectEngine::game(cfg, a, rng), 20.0),
                },
            };
            found.map(|v| format!("case {case} {a:?}: {v}"))
        })
        .collect();
    Check {
        name: "interface count never increases and drops in pairs",
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            "1000 random runs, no violation".into()
        } else {
            failures[..failures.len().min(3)].join("; ")
        },
    }
}

fn boundary_drift() -> Check {
    let spec = LatticeSpec::new(1, 1, vec![400]).unwrap();
    let params = SimParams::new(40.0, 5)
        .with_init(InitialCondition::HalfSpace)
        .with_snapshots(SnapshotPolicy::None);
    let mut pass = true;
    let mut detail = Vec::new();
    for (a, target) in [(m(3.0, 1.0, 0.0, -1.0), 5.0), (m(-8.0, 3.0, 4.0, -8.0), -1.0)] {
        let report = estimate_leftmost_drift(&a, &spec, &params, 500).unwrap();
        let e = report.gap_at_least_two;
        let z = (e.estimate - target).abs() / e.standard_error;
        pass &= z <= 3.0;
        detail.push(format!(
            "{:.4} +- {:.4} vs {target} ({z:.1} SE, {} jumps)",
            e.estimate, e.standard_error, e.jumps
        ));
    }
    Check {
        name: "isolated interface drift matches the closed-form value",
        pass,
        detail: detail.join("; "),
    }
}

fn clustering() -> Check {
    let a = m(-8.0, 3.0, 4.0, -8.0);
    let spec = LatticeSpec::new(1, 1, vec![600]).unwrap();
    let runs: Vec<(bool, bool)> = (0..50u64)
        .into_par_iter()
        .map(|r| {
            let cfg = InitialCondition::Bernoulli(0.5)
                .build(&spec, &mut initial_stream(31, r))
                .unwrap();
            let mut engine = DirectEngine::game(cfg, a, dynamics_stream(31, r));
            let start = engine.state().interfaces();
            let monotone = interface_violation(&mut engine, 2000.0).is_none();
            (monotone, 2 * engine.state().interfaces() < start)
        })
        .collect();
    let monotone = runs.iter().all(|r| r.0);
    let halved = runs.iter().filter(|r| r.1).count();
    Check {
        name: "interface density decays in the clustering regime",
        pass: monotone && halved * 100 >= 95 * runs.len(),
        detail: format!("monotone in every run: {monotone}; halved in {halved}/50"),
    }
}

fn voter_reduction() -> Check {
    let a = m(2.0, 2.0, 1.0, 1.0);
    let spec = LatticeSpec::compact(2, 1, vec![3, 3]).unwrap();
    let mut worst: f64 = 0.0;
    for bits in 0..(1u32 << 9) {
        let values: Vec<u8> = (0..9).map(|i| 1 + ((bits >> i) & 1) as u8).collect();
        let cfg = Configuration::from_values(&spec, &values).unwrap();
        for x in 0..9 {
            worst = worst.max((flip_rate(x, &cfg, &a) - biased_voter_rate(x, &cfg, 2.0, 1.0)).abs());
        }
    }
    let mu = mu_bounds(&a, 1, 2);
    Check {
        name: "constant-row game is a biased voter model",
        pass: worst == 0.0 && mu == (2.0, 1.0),
        detail: format!("max |difference| {worst:e} over 512 configurations; voter rates {mu:?}"),
    }
}

fn strategy_one_wins() -> Check {
    let a = m(2.0, 2.0, 0.0, 0.0);
    let spec = LatticeSpec::new(1, 1, vec![200]).unwrap();
    let params = SimParams::new(20_000.0, 9).with_snapshots(SnapshotPolicy::None);
    let runs = run_ensemble(&spec, &a, &params, Method::Direct, 100);
    let wins = runs
        .iter()
        .filter(|t| t.as_ref().unwrap().fixation.is_some_and(|f| f.strategy == Strategy::One))
        .count();
    Check {
        name: "strategy 1 takes over when it dominates both rows",
        pass: wins >= 99,
        detail: format!("strategy 1 fixated in {wins}/100 runs"),
    }
}

fn coexistence() -> Check {
    let a = m(-3.0, 0.0, 0.0, -3.0);
    let spec = LatticeSpec::new(2, 1, vec![100, 100]).unwrap();
    let params = SimParams::new(500.0, 13).with_snapshots(SnapshotPolicy::None);
    let runs = run_ensemble(&spec, &a, &params, Method::Direct, 50);
    let hs: Vec<f64> = runs
        .iter()
        .map(|t| {
            let t = t.as_ref().unwrap();
            if t.terminal.uniform_strategy().is_some() {
                0.0
            } else {
                heterozygosity(std::slice::from_ref(&t.terminal), 1, t.horizon).estimate
            }
        })
        .collect();
    let good = hs.iter().filter(|&&h| h >= 0.05).count();
    let low = hs.iter().cloned().fold(f64::INFINITY, f64::min);
    Check {
        name: "both strategies persist with mutual-harm payoffs in the plane",
        pass: good * 100 >= 95 * hs.len(),
        detail: format!("{good}/50 runs mixed with heterozygosity >= 0.05 (lowest {low:.3})"),
    }
}

fn predicate_fixtures() -> Check {
    let generic = generic_payoffs(&m(-8.0, 3.0, 4.0, -8.0));
    let equal_rows = generic_payoffs(&m(-8.0, 4.0, 4.0, -8.0));
    let mut inside = 0;
    for &depth in &[1e-6, 0.01, 1.0, 10.0, 1e6] {
        for i in 1..=100 {
            for j in 1..=100 {
                let a = m(-0.5 * i as f64, 1.0, 2.0, -0.5 * j as f64);
                inside += in_coexistence_triangle(&a, 1, 1, depth) as usize;
            }
        }
    }
    Check {
        name: "generic-payoff test and empty triangle on the line",
        pass: generic && !equal_rows && inside == 0,
        detail: format!("generic {generic}, equal row sums {equal_rows}, triangle cells {inside}"),
    }
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.cfg");
    fs::write(
        &config,
        "payoff.a11 = -8\npayoff.a12 = 3\npayoff.a21 = 4\npayoff.a22 = -8\n\
         lattice.d = 1\nlattice.M = 1\nlattice.L = 80\n\
         sim.T = 40\nsim.seed = 21\nsim.replicates = 3\n\
         sample.dt = 0.5\noutput.pgm = ring.pgm\n",
    )
    .unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let output = Command::new(env!("CARGO_BIN_EXE_spatial-game"))
            .args(["simulate", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .output()
            .unwrap();
        assert!(output.status.success());
        let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(&out)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
            })
            .collect();
        files.sort();
        files
    };
    let (first, second) = (run("a"), run("b"));
    let pgm = first.iter().filter(|f| f.0.ends_with(".pgm")).count();
    let csv = first.iter().filter(|f| f.0.ends_with(".csv")).count();
    Check {
        name: "same configuration and seed give byte-identical files",
        pass: first == second && pgm == 3 && csv == 4,
        detail: format!("{csv} csv and {pgm} pgm files compared"),
    }
}

fn main() {
    let only = std::env::args().nth(1);
    let checks: [Entry; 12] = [
        ("slopes", slope_table),
        ("replicator", replicator_fixed_point),
        ("voter", voter_reduction),
        ("predicates", predicate_fixtures),
        ("determinism", determinism),
        ("first-flip", first_flip_statistics),
        ("constructions", construction_equivalence),
        ("monotonicity", interface_monotonicity),
        ("drift", boundary_drift),
        ("takeover", strategy_one_wins),
        ("clustering", clustering),
        ("coexistence", coexistence),
    ];
    let (mut run, mut failed) = (0, 0);
    for (key, check) in checks {
        if only.as_deref().is_some_and(|k| k != key) {
            continue;
        }
        run += 1;
        let start = Instant::now();
        let c = check();
        let secs = start.elapsed().as_secs_f64();
        println!("[{}] {}: {} ({secs:.1} s)", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
        failed += !c.pass as usize;
    }
    println!("{} of {run} checks passed", run - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
