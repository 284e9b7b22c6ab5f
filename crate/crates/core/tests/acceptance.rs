//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Each criterion is made of named checks. Checks listed in
//! `KNOWN_DEVIATIONS` are reproducible mismatches with the published
//! figures; they are still evaluated and reported as FAIL, but only an
//! unexpected result (a new failure, or a listed check that starts passing)
//! makes the run exit non-zero. Set `ACCEPTANCE_STRICT=1` to fail on any FAIL.

use std::f64::consts::PI;
use std::process::ExitCode;

use nrcg_core::correlations::{
    concurrence_eof, mutual_information, quantum_discord_with, Bipartition, DiscordSearch,
};
use nrcg_core::linalg::ComplexMatrix;
use nrcg_core::model::{build_system_hamiltonian, DensityMatrix};
use nrcg_core::protocol::{nrcg_matrix, Direction};
use nrcg_core::sweep::{
    cnot_compare, find_pcc, grid_scan, pcc_report, run_point, thermal_baseline_scan, trace_report,
    BaselineReport, KtGrid, PccRow, SweepConfig, TraceReport,
};
use nrcg_core::{internal_energy, C64};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const KNOWN_DEVIATIONS: &[&str] = &[
    "3.angle.case2-2q",
    "3.angle.case1-3q",
    "3.angle.case2-3q",
    "5.eta.case2-2q",
    "5.eta.case1-3q",
    "5.eta.case2-3q",
    "7.case1-2q.D(B:A).work",
    "7.case1-2q.D(B:A).dU_B",
    "7.case1-3q.D(AC:B).dU_B",
    "8.cusp-drop.D(A:B)",
    "8.cusp-drop.D(B:A)",
    "10.eof.case1-3q",
    "10.eof.case2-3q",
];

const COMBOS: [(u8, usize); 4] = [(1, 2), (2, 2), (1, 3), (2, 3)];

fn label(case: u8, qubits: usize) -> String {
    format!("case{case}-{qubits}q")
}

struct Check {
    id: String,
    pass: bool,
    detail: String,
}

struct Criterion {
    number: u8,
    title: &'static str,
    checks: Vec<Check>,
}

impl Criterion {
    fn new(number: u8, title: &'static str) -> Self {
        Criterion {
            number,
            title,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, id: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            id: format!("{}.{}", self.number, id.into()),
            pass,
            detail: detail.into(),
        });
    }

    fn near(&mut self, id: impl Into<String>, got: f64, want: f64, tol: f64) {
        let pass = (got - want).abs() <= tol;
        self.check(id, pass, format!("got {got:.6}, expected {want} ± {tol}"));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn config(case: u8, qubits: usize, kt: f64) -> SweepConfig {
    let mut cfg = SweepConfig::for_protocol(case, qubits);
    cfg.kt_grid = KtGrid::One(kt);
    cfg
}

/// Shared runs reused across criteria.
struct Runs {
    baselines: Vec<BaselineReport>,
    traces: Vec<TraceReport>,
    pccs: Vec<Vec<PccRow>>,
}

fn compute_runs() -> Runs {
    let mut baselines = Vec::new();
    let mut traces = Vec::new();
    let mut pccs = Vec::new();
    for &(case, q) in &COMBOS {
        baselines.push(thermal_baseline_scan(&config(case, q, 40.0)).expect("baseline scan"));
        let mut cfg = config(case, q, 40.0);
        cfg.correlations = true;
        let rep = trace_report(&cfg).expect("trace report");
        pccs.push(pcc_report(&rep).expect("pcc report"));
        traces.push(rep);
    }
    Runs {
        baselines,
        traces,
        pccs,
    }
}

fn criterion_1() -> Criterion {
    let mut c = Criterion::new(1, "gate algebra");
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let cnot_ab = ComplexMatrix::from_rows(&[
        vec![o, z, z, z],
        vec![z, o, z, z],
        vec![z, z, z, o],
        vec![z, z, o, z],
    ])
    .unwrap();
    let cnot_ba = ComplexMatrix::from_rows(&[
        vec![o, z, z, z],
        vec![z, z, z, o],
        vec![z, z, o, z],
        vec![z, o, z, z],
    ])
    .unwrap();
    for (dir, name, cnot) in [
        (Direction::AControlsB, "A>B", &cnot_ab),
        (Direction::BControlsA, "B>A", &cnot_ba),
    ] {
        for n in [1u32, 2, 5, 15] {
            let g = nrcg_matrix(n, dir).unwrap();
            let diff = g.pow(n).max_abs_diff(cnot);
            c.check(
                format!("power.{name}.N{n}"),
                diff <= 1e-10,
                format!("max deviation {diff:.2e}"),
            );
        }
        let exact = nrcg_matrix(1, dir).unwrap() == *cnot;
        c.check(
            format!("exact.{name}"),
            exact,
            "N = 1 entrywise equal to CNOT",
        );
    }
    c
}

fn criterion_2() -> Criterion {
    let mut c = Criterion::new(2, "temperature saturation at kT = 1e4");
    let want = [0.50, 0.27, 0.39, 0.50];
    for (&(case, q), w) in COMBOS.iter().zip(want) {
        let scan = grid_scan(&config(case, q, 1e4)).expect("grid scan");
        c.near(
            format!("max.{}", label(case, q)),
            scan.best.max_work,
            w,
            0.01,
        );
    }
    c
}

fn criterion_3(runs: &Runs) -> Criterion {
    let mut c = Criterion::new(3, "peak work with coherence at kT = 40");
    let want = [0.49, 0.26, 0.38, 0.50];
    let angles: [(f64, Option<f64>); 4] = [
        (1.0, None),
        (0.83, Some(0.32)),
        (0.88, Some(0.24)),
        (0.79, Some(0.08)),
    ];
    for (i, &(case, q)) in COMBOS.iter().enumerate() {
        let best = runs.baselines[i].pure_best;
        let l = label(case, q);
        c.near(format!("max.{l}"), best.max_work, want[i], 0.01);
        let (t, p) = angles[i];
        let dt = (best.theta - t * PI).abs();
        let dp = p.map_or(0.0, |p| circular_distance(best.phi, p * PI));
        c.check(
            format!("angle.{l}"),
            dt <= 0.02 * PI + 1e-12 && dp <= 0.02 * PI + 1e-12,
            format!(
                "argmax ({:.3}π, {:.3}π) at iteration {}, expected ({t}π, {}) ± 0.02π",
                best.theta / PI,
                best.phi / PI,
                best.argmax_iteration,
                p.map_or("any".to_string(), |p| format!("{p}π"))
            ),
        );
    }
    c
}

fn criterion_4(runs: &Runs) -> Criterion {
    let mut c = Criterion::new(4, "thermal baseline");
    let want = [0.49, 0.23, 0.36, 0.39];
    let gain = [0.0, 12.04, 5.56, 28.20];
    for (i, &(case, q)) in COMBOS.iter().enumerate() {
        let b = &runs.baselines[i];
        let l = label(case, q);
        c.near(format!("max.{l}"), b.thermal.best.max_work, want[i], 0.01);
        match b.relative_change_percent {
            Some(r) => c.near(format!("gain.{l}"), r, gain[i], 2.0),
            None => c.check(format!("gain.{l}"), false, "thermal maximum not positive"),
        }
        let dt = (b.thermal.best.theta - PI).abs();
        c.check(
            format!("theta.{l}"),
            dt <= 0.02 * PI,
            format!("thermal argmax θ = {:.3}π", b.thermal.best.theta / PI),
        );
        // Every φ column of a dephased scan is the same map.
        let n_phi = b.thermal.cells.len() / 101;
        let spread = b
            .thermal
            .cells
            .chunks(n_phi)
            .map(|row| {
                let lo = row.iter().map(|x| x.max_work).fold(f64::INFINITY, f64::min);
                let hi = row
                    .iter()
                    .map(|x| x.max_work)
                    .fold(f64::NEG_INFINITY, f64::max);
                hi - lo
            })
            .fold(0.0, f64::max);
        c.check(
            format!("phi-independent.{l}"),
            spread <= 1e-12,
            format!("largest spread over φ {spread:.2e}"),
        );
    }
    c
}

fn criterion_5(runs: &Runs) -> Criterion {
    let mut c = Criterion::new(5, "efficiency at peak work");
    let want = [1.00, 0.97, 0.84, 0.93];
    for (i, &(case, q)) in COMBOS.iter().enumerate() {
        let e = &runs.traces[i].energies;
        let mut best = &e[1];
        for r in &e[1..] {
            if r.work > best.work {
                best = r;
            }
        }
        let l = label(case, q);
        match best.efficiency {
            Some(eta) => {
                c.check(
                    format!("eta.{l}"),
                    (eta - want[i]).abs() <= 0.02,
                    format!(
                        "η = {eta:.4} at iteration {}, expected {} ± 0.02",
                        best.iteration, want[i]
                    ),
                );
                if i == 0 {
                    c.check(
                        "eta-exact.case1-2q",
                        (eta - 1.0).abs() <= 1e-10,
                        format!("|η - 1| = {:.2e}", (eta - 1.0).abs()),
                    );
                }
            }
            None => c.check(
                format!("eta.{l}"),
                false,
                format!("iteration {} is not in the engine regime", best.iteration),
            ),
        }
    }
    c
}

fn pcc_check(
    c: &mut Criterion,
    rows: &[PccRow],
    l: &str,
    measure: &str,
    bp: &str,
    target: &str,
    want: f64,
) {
    let id = format!("{l}.{measure}({bp}).{target}");
    match find_pcc(rows, measure, bp, target) {
        Some(PccRow { pcc: Some(r), .. }) => c.near(id, *r, want, 0.05),
        Some(row) => c.check(
            id,
            false,
            format!("undefined ({}); expected {want}", row.note),
        ),
        None => c.check(id, false, "missing row"),
    }
}

fn criterion_6(runs: &Runs) -> Criterion {
    let mut c = Criterion::new(6, "PCC of mutual information");
    let work = [0.99, 0.67, 0.92, 0.50];
    let dub = [-0.99, -0.77, -0.92, -0.59];
    for (i, &(case, q)) in COMBOS.iter().enumerate() {
        let bp = runs.traces[i].bipartition.to_string();
        let l = label(case, q);
        pcc_check(&mut c, &runs.pccs[i], &l, "MI", &bp, "work", work[i]);
        pcc_check(&mut c, &runs.pccs[i], &l, "MI", &bp, "dU_B", dub[i]);
    }
    c
}

fn criterion_7(runs: &Runs) -> Criterion {
    let mut c = Criterion::new(7, "PCC of classical correlations and discord");
    // (measure, forward pair?, case 1 (work, dU_B), case 2 (work, dU_B))
    type Row = (&'static str, bool, [f64; 2], [f64; 2]);
    let two: [Row; 4] = [
        ("CC", true, [0.99, -0.99], [0.67, -0.64]),
        ("CC", false, [0.99, -0.99], [0.73, -0.38]),
        ("D", true, [0.05, -0.05], [0.03, -0.41]),
        ("D", false, [0.18, -0.18], [-0.01, -0.81]),
    ];
    let three: [Row; 4] = [
        ("CC", true, [0.81, -0.81], [0.25, -0.47]),
        ("CC", false, [0.92, -0.93], [0.56, -0.57]),
        ("D", true, [0.86, -0.47], [0.42, -0.23]),
        ("D", false, [0.57, -0.57], [0.16, -0.29]),
    ];
    for (i, &(case, q)) in COMBOS.iter().enumerate() {
        let table = if q == 2 { &two } else { &three };
        let xy = &runs.traces[i].bipartition;
        let l = label(case, q);
        for (measure, forward, c1, c2) in table {
            let bp = if *forward {
                xy.to_string()
            } else {
                xy.swapped().to_string()
            };
            let w = if case == 1 { c1 } else { c2 };
            pcc_check(&mut c, &runs.pccs[i], &l, measure, &bp, "work", w[0]);
            pcc_check(&mut c, &runs.pccs[i], &l, measure, &bp, "dU_B", w[1]);
        }
    }
    c
}

fn criterion_8(runs: &Runs) -> Criterion {
    let mut c = Criterion::new(8, "entanglement of formation against discord");
    let at_083 = &runs.pccs[1];
    pcc_check(&mut c, at_083, "theta0.83", "D", "A:B", "EOF", 0.85);
    pcc_check(&mut c, at_083, "theta0.83", "D", "B:A", "EOF", 0.91);

    let mut cfg = config(2, 2, 40.0);
    cfg.correlations = true;
    cfg.theta = Some(0.36 * PI);
    cfg.phi = Some(0.24 * PI);
    let rep = trace_report(&cfg).expect("trace");
    let rows = pcc_report(&rep).expect("pcc");
    pcc_check(&mut c, &rows, "theta0.36", "D", "A:B", "EOF", 0.81);
    pcc_check(&mut c, &rows, "theta0.36", "D", "B:A", "EOF", 0.78);

    let corr = runs.traces[1].correlations.as_ref().unwrap();
    for (name, series) in [
        (
            "D(A:B)",
            corr.iter().map(|r| r.discord_xy).collect::<Vec<_>>(),
        ),
        (
            "D(B:A)",
            corr.iter().map(|r| r.discord_yx).collect::<Vec<_>>(),
        ),
    ] {
        for target in [21usize, 41] {
            // Paper iteration labels count from 1.
            let centre = target - 1;
            let peak = (centre - 2..=centre + 2)
                .filter(|&k| series[k] > series[k - 1] && series[k] > series[k + 1])
                .max_by(|&a, &b| series[a].total_cmp(&series[b]));
            match peak {
                Some(k) => {
                    c.check(
                        format!("cusp-location.{name}.{target}"),
                        true,
                        format!("local maximum at iteration {k}"),
                    );
                    let after = series[k + 1].min(series[k + 2]);
                    let drop = (series[k] - after) / series[k];
                    c.check(
                        format!("cusp-drop.{name}"),
                        drop > 0.5,
                        format!(
                            "drop {:.1}% within 2 iterations after {k}, expected > 50%",
                            100.0 * drop
                        ),
                    );
                }
                None => c.check(
                    format!("cusp-location.{name}.{target}"),
                    false,
                    "no local maximum nearby",
                ),
            }
        }
    }
    // One drop check per series, the worse of the two cusps.
    let mut merged: Vec<Check> = Vec::new();
    for chk in c.checks.drain(..) {
        if let Some(prev) = merged.iter_mut().find(|m| m.id == chk.id) {
            if !chk.pass {
                prev.pass = false;
            }
            prev.detail = format!("{}; {}", prev.detail, chk.detail);
        } else {
            merged.push(chk);
        }
    }
    c.checks = merged;
    c
}

fn criterion_9() -> Criterion {
    let mut c = Criterion::new(9, "root gates against full CNOT");
    for t in [0.0, 0.25, 0.5, 0.83, 1.0] {
        let mut cfg = config(1, 2, 40.0);
        cfg.theta = Some(t * PI);
        cfg.phi = Some(0.17 * PI);
        let cmp = cnot_compare(&cfg).expect("comparison");
        let iters: Vec<usize> = cmp.boundaries.iter().map(|b| b.iteration).collect();
        let d = cmp.max_boundary_diff();
        c.check(
            format!("boundary.theta{t}"),
            iters == [15, 30, 45, 60] && d <= 1e-10,
            format!("boundaries {iters:?}, max difference {d:.2e}"),
        );
        if t == 0.5 {
            let cnot_max = cmp
                .cnot_run
                .iter()
                .skip(1)
                .map(|r| r.work.abs())
                .fold(0.0, f64::max);
            c.check(
                "cnot-idle",
                cnot_max <= 1e-10,
                format!("largest |work| of full CNOT {cnot_max:.2e}"),
            );
            let root_max = cmp
                .root_run
                .iter()
                .map(|r| r.work)
                .fold(f64::NEG_INFINITY, f64::max);
            c.check(
                "root-works",
                root_max > 1e-10,
                format!("largest root-gate work {root_max:.4}"),
            );
        }
    }
    c
}

fn random_two_qubit_state(rng: &mut StdRng) -> DensityMatrix {
    let g: Vec<C64> = (0..16)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let g = ComplexMatrix::from_vec(g).unwrap();
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(C64::new(1.0 / tr, 0.0)), 2).unwrap()
}

fn criterion_10(runs: &Runs) -> Criterion {
    let mut c = Criterion::new(10, "property suites");
    for (i, &(case, q)) in COMBOS.iter().enumerate() {
        let l = label(case, q);
        let cfg = config(case, q, 40.0);
        let trace = run_point(&cfg);
        c.check(
            format!("validity.{l}"),
            trace.is_ok(),
            format!("{:?}", trace.as_ref().err()),
        );
        let Ok(trace) = trace else { continue };

        let p0 = trace.states[0].purity();
        let dp = trace
            .states
            .iter()
            .map(|s| (s.purity() - p0).abs())
            .fold(0.0, f64::max);
        c.check(
            format!("purity.{l}"),
            dp <= 1e-12,
            format!("purity drift {dp:.2e}"),
        );

        let h = cfg.hamiltonian().unwrap();
        let hs = build_system_hamiltonian(&h, q).unwrap();
        let hm = h.matrix();
        let mut add = 0.0f64;
        let mut mi_asym = 0.0f64;
        let (xy, yx) = Bipartition::defaults(q).unwrap();
        for s in &trace.states {
            let total = internal_energy(s, &hs).unwrap();
            let parts: f64 = (0..q)
                .map(|k| internal_energy(&s.marginal(&[k]).unwrap(), &hm).unwrap())
                .sum();
            add = add.max((total - parts).abs());
            let a = mutual_information(s, &xy).unwrap();
            let b = mutual_information(s, &yx).unwrap();
            mi_asym = mi_asym.max((a - b).abs());
        }
        c.check(
            format!("additivity.{l}"),
            add <= 1e-10,
            format!("largest mismatch {add:.2e}"),
        );
        c.check(
            format!("mi-symmetry.{l}"),
            mi_asym <= 1e-10,
            format!("largest asymmetry {mi_asym:.2e}"),
        );

        let corr = runs.traces[i].correlations.as_ref().unwrap();
        let bounded = corr.iter().all(|r| {
            [r.discord_xy, r.discord_yx]
                .iter()
                .all(|&d| d >= -1e-6 && d <= r.mutual_info + 1e-6)
                && r.cc_xy >= -1e-6
                && r.cc_yx >= -1e-6
        });
        c.check(
            format!("discord-bounds.{l}"),
            bounded,
            "0 ≤ D ≤ MI and CC ≥ 0 at every iteration",
        );

        if (case, q) != (2, 2) {
            let pairs: &[[usize; 2]] = if q == 2 {
                &[[0, 1]]
            } else {
                &[[0, 1], [0, 2], [1, 2]]
            };
            let mut worst = (0.0f64, [0usize, 0], 0usize);
            for (k, s) in trace.states.iter().enumerate() {
                for p in pairs {
                    let m = if q == 2 {
                        s.clone()
                    } else {
                        s.marginal(p).unwrap()
                    };
                    let e = concurrence_eof(&m).unwrap().eof;
                    if e > worst.0 {
                        worst = (e, *p, k);
                    }
                }
            }
            c.check(
                format!("eof.{l}"),
                worst.0 <= 1e-10,
                format!(
                    "largest EOF {:.3e} bits on pair {:?} at iteration {}",
                    worst.0, worst.1, worst.2
                ),
            );
        }
    }

    let mut rng = StdRng::seed_from_u64(0x5eed);
    let dense = DiscordSearch::dense_grid(PI / 64.0);
    let default = DiscordSearch::default();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..10 {
        let rho = random_two_qubit_state(&mut rng);
        for bp in [Bipartition::new(&[0], &[1]), Bipartition::new(&[1], &[0])] {
            let a = quantum_discord_with(&rho, &bp, &default).unwrap();
            let b = quantum_discord_with(&rho, &bp, &dense).unwrap();
            worst = worst.max(a - b);
        }
    }
    c.check(
        "discord-oracle",
        worst <= 1e-4,
        format!("largest excess over dense grid {worst:.2e}"),
    );
    c
}

fn main() -> ExitCode {
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let runs = compute_runs();
    let criteria = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(&runs),
        criterion_4(&runs),
        criterion_5(&runs),
        criterion_6(&runs),
        criterion_7(&runs),
        criterion_8(&runs),
        criterion_9(),
        criterion_10(&runs),
    ];

    let mut unexpected = Vec::new();
    let mut any_fail = false;
    for crit in &criteria {
        let status = if crit.passed() { "PASS" } else { "FAIL" };
        println!("criterion {:>2} [{status}] {}", crit.number, crit.title);
        for chk in &crit.checks {
            let known = KNOWN_DEVIATIONS.contains(&chk.id.as_str());
            if !chk.pass {
                any_fail = true;
                let tag = if known {
                    "known deviation"
                } else {
                    "UNEXPECTED"
                };
                println!("    FAIL {} ({tag}): {}", chk.id, chk.detail);
                if !known {
                    unexpected.push(chk.id.clone());
                }
            } else if known {
                println!(
                    "    PASS {} (listed as known deviation): {}",
                    chk.id, chk.detail
                );
                unexpected.push(chk.id.clone());
            }
        }
    }
    let listed_missing: Vec<&&str> = KNOWN_DEVIATIONS
        .iter()
        .filter(|id| {
            !criteria
                .iter()
                .flat_map(|c| &c.checks)
                .any(|c| c.id == **id)
        })
        .collect();
    for id in &listed_missing {
        println!("    known deviation {id} matches no check");
    }

    let passed = criteria.iter().filter(|c| c.passed()).count();
    println!("acceptance: {passed}/{} criteria pass", criteria.len());
    if !unexpected.is_empty() || !listed_missing.is_empty() {
        println!("unexpected results: {unexpected:?}");
        return ExitCode::FAILURE;
    }
    if strict && any_fail {
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
