//! Acceptance suite: every numeric guarantee the project makes, pinned at
//! its stated tolerance. Each criterion is one test that prints a PASS line;
//! Monte Carlo thresholds budget three standard errors for sampling noise.

use std::fs;
use std::process::Command;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

use dfci_core::sim::{
    adversary_min_expectation, chernoff_event_rate, run_coverage_experiment, CoverageReport,
    FeatureLaw, Method, PiFn, Scenario,
};
use dfci_core::{
    brute_force_allocation, coverage_fn, default_knn_k, ell, lower_bound, sample_interval,
    solve_allocation, CoverageParams, Dist, Partition, RegressorSpec,
};

fn pass(n: u32, what: &str) {
    println!("criterion {n} ({what}): PASS");
}

#[test]
fn criterion_01_closed_form_length_function() {
    // Spot values.
    assert_eq!(ell(0.3, 0.5), 0.3);
    assert_eq!(ell(0.1, 0.25), 0.2);
    assert_eq!(ell(0.4, 0.1), 0.875);
    assert_eq!(ell(0.0, 0.0), 0.0);
    let mirrored: f64 = ell(0.7, 0.5);
    assert_eq!(mirrored, 1.0 - 0.7);
    assert!((mirrored - 0.3).abs() <= f64::EPSILON);

    // Full grid at step 0.01.
    let grid: Vec<f64> = (0..=100).map(|k| f64::from(k) / 100.0).collect();
    let table: Vec<Vec<f64>> = grid
        .iter()
        .map(|&t| grid.iter().map(|&a| ell(t, a)).collect())
        .collect();

    for (i, &t) in grid.iter().enumerate() {
        for (j, &a) in grid.iter().enumerate() {
            let v = table[i][j];
            assert!((0.0..=1.0).contains(&v), "range at ({t}, {a})");
            // Symmetry up to the rounding of the complement 1 − t.
            assert!(
                (v - ell(1.0 - t, a)).abs() <= 1e-13,
                "symmetry at ({t}, {a})"
            );
        }
    }
    // Nondecreasing in t on [0, 1/2].
    for rows in table[..=50].windows(2) {
        for (below, above) in rows[0].iter().zip(&rows[1]) {
            assert!(below <= &(above + 1e-14), "monotone t");
        }
    }
    // Nonincreasing and discretely convex in a.
    for row in &table {
        for j in 0..100 {
            assert!(row[j + 1] <= row[j] + 1e-14, "monotone a at {j}");
        }
        for j in 1..100 {
            assert!(
                row[j - 1] + row[j + 1] - 2.0 * row[j] >= -1e-12,
                "convexity at {j}"
            );
        }
    }
    // 1/(2a)-Lipschitz in t for a > 0.
    for (j, &a) in grid.iter().enumerate().skip(1) {
        for i1 in 0..grid.len() {
            for i2 in i1 + 1..grid.len() {
                let bound = (grid[i2] - grid[i1]) / (2.0 * a) + 1e-13;
                assert!(
                    (table[i1][j] - table[i2][j]).abs() <= bound,
                    "Lipschitz at ({}, {}, {a})",
                    grid[i1],
                    grid[i2]
                );
            }
        }
    }
    pass(1, "closed-form length function on the 0.01 grid");
}

#[test]
fn criterion_02_integral_identities() {
    let grid: Vec<f64> = (0..=100).map(|k| f64::from(k) / 100.0).collect();
    for &t in &grid {
        for &a in &grid {
            let params = CoverageParams::new(t, a);
            let tm = t.min(1.0 - t);

            // ∫ f ds = ell: midpoint sums between the analytic breakpoints
            // of f are exact on its affine pieces.
            let mut cuts = vec![0.0, 1.0];
            if tm > 0.0 {
                if a >= 0.5 {
                    cuts.extend([2.0 * tm, 1.0 - 2.0 * tm]);
                } else if a > 0.0 {
                    cuts.extend([tm / a, 1.0 - tm / a]);
                }
            }
            cuts.retain(|c| (0.0..=1.0).contains(c));
            cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let mut f_integral = 0.0;
            for w in cuts.windows(2) {
                f_integral += (w[1] - w[0]) * coverage_fn(&params, 0.5 * (w[0] + w[1]));
            }
            assert!(
                (f_integral - ell(t, a)).abs() < 1e-12,
                "f integral at ({t}, {a}): {f_integral} vs {}",
                ell(t, a)
            );

            // E_U[length of the superlevel interval] = ell, integrating the
            // piecewise-affine length profile exactly.
            let mut ucuts = vec![0.0, 1.0, 2.0 * (1.0 - a)];
            if a > 0.0 && tm > 0.0 {
                ucuts.push(1.0 - a / tm);
            }
            ucuts.retain(|c| (0.0..=1.0).contains(c));
            ucuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let mut len_integral = 0.0;
            for w in ucuts.windows(2) {
                let width = w[1] - w[0];
                for c in 0..8 {
                    let u = w[0] + width * (2.0 * f64::from(c) + 1.0) / 16.0;
                    len_integral += width / 8.0 * sample_interval(&params, u).length();
                }
            }
            assert!(
                (len_integral - ell(t, a)).abs() < 1e-9,
                "expected length at ({t}, {a}): {len_integral} vs {}",
                ell(t, a)
            );
        }
    }
    pass(2, "coverage-function and expected-length integrals equal ell");
}

#[test]
fn criterion_03_adversary_family_floor() {
    let grid = 1000;
    let slack = 2.0 / grid as f64;
    for i in 0..50 {
        let t = f64::from(i) / 49.0;
        for j in 0..50 {
            let a = f64::from(j) / 49.0;
            let v = adversary_min_expectation(t, a, grid);
            assert!(
                v >= 1.0 - a - slack,
                "floor violated at ({t}, {a}): {v} < {}",
                1.0 - a - slack
            );
        }
    }
    let spot = adversary_min_expectation(0.3, 0.2, grid);
    assert!((spot - 0.8).abs() <= slack, "spot check: {spot}");
    pass(3, "worst-case mixtures never push coverage below 1 - a");
}

#[test]
fn criterion_04_solver_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let step = 1e-3;
    for case in 0..200 {
        let atoms: Vec<f64> = (0..2).map(|_| rng.gen_range(0.2..0.8)).collect();
        let w: f64 = rng.gen_range(0.3..0.7);
        let dist = Dist::new(atoms, vec![w, 1.0 - w]).unwrap();
        let alpha: f64 = rng.gen_range(0.1..0.5);
        let solved = solve_allocation(&dist, alpha).unwrap();
        let brute = brute_force_allocation(&dist, alpha, step).unwrap();
        assert!(
            (solved.objective - brute.objective).abs() <= 1e-3,
            "2-atom case {case}: {} vs {}",
            solved.objective,
            brute.objective
        );
    }
    for case in 0..50 {
        let atoms: Vec<f64> = (0..3).map(|_| rng.gen_range(0.2..0.8)).collect();
        let raw: Vec<f64> = (0..3).map(|_| rng.gen_range(0.3..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|v| v / total).collect();
        let dist = Dist::new(atoms, weights).unwrap();
        let alpha: f64 = rng.gen_range(0.1..0.5);
        let solved = solve_allocation(&dist, alpha).unwrap();
        let brute = brute_force_allocation(&dist, alpha, step).unwrap();
        assert!(
            (solved.objective - brute.objective).abs() <= 1e-3,
            "3-atom case {case}: {} vs {}",
            solved.objective,
            brute.objective
        );
    }
    // Point-mass identity, exactly, on a grid.
    for i in 0..=20 {
        let t = f64::from(i) / 20.0;
        for j in 0..=20 {
            let alpha = f64::from(j) / 20.0;
            assert_eq!(
                lower_bound(&Dist::point_mass(t), alpha).unwrap(),
                ell(t, alpha),
                "point mass at ({t}, {alpha})"
            );
        }
    }
    pass(4, "dual bisection agrees with the grid oracle");
}

fn constant_half_scenario() -> Scenario {
    Scenario {
        dimension: 1,
        px: FeatureLaw::Uniform,
        pi: PiFn::Constant { value: 0.5 },
        seed: 71,
    }
}

fn desk_scale_runs() -> &'static Vec<(usize, CoverageReport)> {
    static RUNS: OnceLock<Vec<(usize, CoverageReport)>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let scenario = constant_half_scenario();
        [200usize, 2000, 20000]
            .into_iter()
            .map(|n| {
                let (report, _) = run_coverage_experiment(
                    &scenario,
                    &Method::Fixed { bins: 1 },
                    n,
                    0.1,
                    2000,
                    scenario.seed,
                )
                .unwrap();
                (n, report)
            })
            .collect()
    })
}

#[test]
fn criterion_05_length_floor_does_not_shrink_with_n() {
    let mc = 3.0 * (0.1f64 * 0.9 / 2000.0).sqrt();
    for (n, report) in desk_scale_runs() {
        assert_eq!(report.lower_bound, 0.9, "n = {n}");
        assert!(
            report.pi_coverage >= 0.9 - mc,
            "n = {n}: pi_coverage {}",
            report.pi_coverage
        );
        assert!(
            report.mean_length >= 0.9 - 3.0 * report.se_length,
            "n = {n}: mean_length {} (se {})",
            report.mean_length,
            report.se_length
        );
        assert!(
            report.mean_length >= 0.89 && report.mean_length <= 1.0,
            "n = {n}: mean_length {}",
            report.mean_length
        );
    }
    pass(5, "mean length stays above the 0.9 floor at n = 200, 2000, 20000");
}

#[test]
fn criterion_06_predictive_coverage_inherited() {
    let mc = 3.0 * (0.1f64 * 0.9 / 2000.0).sqrt();
    for (n, report) in desk_scale_runs() {
        assert!(
            report.y_coverage >= 0.9 - mc,
            "n = {n}: y_coverage {}",
            report.y_coverage
        );
    }
    pass(6, "label coverage matches the confidence guarantee");
}

#[test]
fn criterion_07_split_pipeline_tracks_the_lower_bound() {
    let scenario = Scenario {
        dimension: 2,
        px: FeatureLaw::Uniform,
        pi: PiFn::Piecewise {
            bins: 2,
            values: vec![0.2, 0.2, 0.8, 0.8],
        },
        seed: 72,
    };
    let n = 4000;
    let k = default_knn_k(n / 2, 2);
    let method = Method::Split {
        regressor: RegressorSpec::Knn { k },
    };
    let (report, _) =
        run_coverage_experiment(&scenario, &method, n, 0.1, 1000, scenario.seed).unwrap();
    // The target distribution is an even {0.2, 0.8} mixture, whose exact
    // bound at alpha = 0.1 is 1 - 0.1/(2·0.2) = 0.75.
    assert!((report.lower_bound - 0.75).abs() < 1e-9, "{}", report.lower_bound);
    assert!(
        report.pi_coverage >= 0.87,
        "pi_coverage {}",
        report.pi_coverage
    );
    // Generous additive slack standing in for the unspecified universal
    // constant in the finite-sample excess-length term.
    assert!(
        report.mean_length <= report.lower_bound + 0.25,
        "mean_length {} vs bound {}",
        report.mean_length,
        report.lower_bound + 0.25
    );
    assert!(
        report.mean_length >= report.lower_bound - 3.0 * report.se_length,
        "mean_length {} under the floor {}",
        report.mean_length,
        report.lower_bound
    );
    pass(7, "split pipeline covers and stays near the optimal length");
}

#[test]
fn criterion_08_concentration_event_rate() {
    let scenario = Scenario {
        dimension: 1,
        px: FeatureLaw::Uniform,
        pi: PiFn::Piecewise {
            bins: 4,
            values: vec![0.2, 0.4, 0.6, 0.8],
        },
        seed: 73,
    };
    let rate = chernoff_event_rate(
        &scenario,
        &Partition::Grid { dim: 1, bins: 4 },
        10_000,
        0.1,
        500,
        scenario.seed,
    )
    .unwrap();
    assert!(rate >= 1.0 - 0.1, "event rate {rate}");
    pass(8, "conservative estimates hit their concentration envelope");
}

#[test]
fn criterion_09_perturbation_inequality() {
    // ell(t', a + r·delta) ≤ ell(t, a) + delta/r whenever |t − t'| is within
    // the admissible displacement 2·delta² + delta·sqrt(8·min(t, 1−t)).
    let g = 20;
    for it in 0..g {
        let t = f64::from(it) / f64::from(g - 1);
        for ia in 0..g {
            let a = f64::from(ia) / f64::from(g - 1);
            for id in 1..=g {
                let delta = 0.5 * f64::from(id) / f64::from(g);
                for ir in 1..=g {
                    let r = f64::from(ir) / f64::from(g);
                    if a + r * delta > 1.0 {
                        continue;
                    }
                    let width = 2.0 * delta * delta + delta * (8.0 * t.min(1.0 - t)).sqrt();
                    let budget = ell(t, a) + delta / r + 1e-12;
                    for tp in [t - width, t + width] {
                        let tp = tp.clamp(0.0, 1.0);
                        assert!(
                            ell(tp, a + r * delta) <= budget,
                            "t={t} a={a} delta={delta} r={r} t'={tp}"
                        );
                    }
                }
            }
        }
    }
    pass(9, "perturbed budgets bound the length increase");
}

#[test]
fn criterion_10_cli_outputs_are_seed_deterministic() {
    let bin = env!("CARGO_BIN_EXE_dfci");
    let dir = TempDir::new().unwrap();

    let data_path = dir.path().join("data.csv");
    let mut csv = String::from("x1,y\n");
    for i in 0..400 {
        let x = (i as f64 + 0.5) / 400.0;
        csv.push_str(&format!("{x},{}\n", u8::from(i % 3 == 0)));
    }
    fs::write(&data_path, csv).unwrap();

    let fit = |out: &str| {
        let path = dir.path().join(out);
        let status = Command::new(bin)
            .args([
                "fit", "--data", data_path.to_str().unwrap(), "--alpha", "0.1",
                "--method", "split", "--shuffle", "--seed", "9",
                "--out", path.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
        fs::read(path).unwrap()
    };
    assert_eq!(fit("m1.json"), fit("m2.json"), "fit output differs across runs");

    let scenario_path = dir.path().join("scenario.json");
    fs::write(
        &scenario_path,
        r#"{"dimension":1,"px":"uniform","pi":{"kind":"constant","value":0.5},"seed":4}"#,
    )
    .unwrap();
    let simulate = |out: &str, csv_out: &str| {
        let path = dir.path().join(out);
        let csv_path = dir.path().join(csv_out);
        let status = Command::new(bin)
            .args([
                "simulate", "--scenario", scenario_path.to_str().unwrap(),
                "--method", "fixed", "--bins", "1",
                "--n", "200", "--trials", "100", "--alpha", "0.1", "--seed", "4",
                "--out", path.to_str().unwrap(),
                "--per-trial", csv_path.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
        (fs::read(path).unwrap(), fs::read(csv_path).unwrap())
    };
    let (r1, t1) = simulate("r1.json", "t1.csv");
    let (r2, t2) = simulate("r2.json", "t2.csv");
    assert_eq!(r1, r2, "simulate report differs across runs");
    assert_eq!(t1, t2, "per-trial export differs across runs");

    let predict = || {
        let out = Command::new(bin)
            .args([
                "predict", "--model", dir.path().join("m1.json").to_str().unwrap(),
                "--x", "0.4", "--seed", "17",
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(predict(), predict(), "predict output differs across runs");
    pass(10, "repeated invocations reproduce byte-identical outputs");
}
