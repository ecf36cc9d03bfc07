//! Acceptance gate: twelve end-to-end checks of the model's promised numbers
//! and behaviors, each printed as its own pass/fail line. Run with
//! `cargo test --test acceptance -- --nocapture` to see the table.

use std::time::Instant;

use num_complex::Complex64;
use zitterdyn_core as core;
use zitterdyn_core::{ModelParams, SearchBox, UnitMode};

fn pass(n: u32, what: &str, t: Instant) {
    println!("PASS  criterion {n:2}: {what} ({:.2}s)", t.elapsed().as_secs_f64());
}

#[test]
fn criterion_01_electron_scale_constants() {
    let t = Instant::now();
    let d = core::constants::REDUCED_PLANCK * core::constants::FINE_STRUCTURE
        / (4.0 * core::constants::ELECTRON_MASS * core::constants::SPEED_OF_LIGHT);
    let p = core::make_params(d, UnitMode::Si).unwrap();
    let r_e = p.d / 2.0;
    let published = 0.35e-15;
    assert!(
        (r_e - published).abs() / published < 0.02,
        "r_e = {r_e:e} m vs {published:e} m"
    );
    assert!((r_e - 0.352e-15).abs() / 0.352e-15 < 2e-3);
    assert!(
        (p.m_e - core::constants::ELECTRON_MASS).abs() / core::constants::ELECTRON_MASS < 1e-12
    );
    pass(1, "charge separation puts half-spacing at 0.352 fm", t);
}

#[test]
fn criterion_02_period_anchor() {
    let t = Instant::now();
    let period = core::characteristic_period(2.8179e-15, core::constants::SPEED_OF_LIGHT).unwrap();
    assert!(
        (period - 1.18e-22).abs() / 1.18e-22 < 0.01,
        "period {period:e} s"
    );
    assert!((period - 1.181e-22).abs() / 1.181e-22 < 1e-3);
    pass(2, "orbital period at the classical radius is 1.181e-22 s", t);
}

#[test]
fn criterion_03_rest_spectrum() {
    let t = Instant::now();
    let search = SearchBox::new(-0.5, 7.8, -10.0, 10.0).unwrap();
    let set = core::find_roots(0.0, &search, 200).unwrap();

    let origin = set
        .roots
        .iter()
        .find(|r| r.mu().norm() < 1e-8)
        .expect("root at the origin");
    assert_eq!(origin.multiplicity, 2, "origin root should be double");

    // bisection oracle for the real root: sign change inside [1.79, 1.80]
    let f = |x: f64| core::char_fn(Complex64::new(x, 0.0), 0.0).re;
    assert!(f(1.79) > 0.0 && f(1.80) < 0.0, "oracle bracket lost");
    let (mut lo, mut hi) = (1.79f64, 1.80f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let oracle = 0.5 * (lo + hi);
    let real = set
        .roots
        .iter()
        .find(|r| r.im.abs() < 1e-9 && r.re > 1.0)
        .expect("positive real root");
    assert!((real.re - oracle).abs() < 1e-9, "{} vs {oracle}", real.re);
    assert!((real.re - 1.7932).abs() < 1e-3);

    let pair = set
        .roots
        .iter()
        .find(|r| r.im > 1.0)
        .expect("oscillatory root");
    assert!((pair.re - 4.55).abs() < 0.05, "pair re {}", pair.re);
    assert!((pair.im - 8.33).abs() < 0.05, "pair im {}", pair.im);
    let count = core::count_roots(0.0, &SearchBox::new(3.0, 6.0, 7.0, 10.0).unwrap()).unwrap();
    assert_eq!(count, 1, "pair box winding count");

    assert!(t.elapsed().as_secs_f64() < 5.0, "too slow: {:?}", t.elapsed());
    pass(3, "rest spectrum: double zero, real 1.7932, pair 4.55+8.33i", t);
}

#[test]
fn criterion_04_no_left_half_plane_roots() {
    let t = Instant::now();
    let search = SearchBox::new(-10.0, -0.1, 0.1, 60.0).unwrap();
    for beta in [0.0, 0.3, 0.6, 0.9] {
        let n = core::count_roots(beta, &search).unwrap();
        assert_eq!(n, 0, "beta {beta}: {n} roots in the left half-plane box");
    }
    assert!(t.elapsed().as_secs_f64() < 10.0, "too slow: {:?}", t.elapsed());
    pass(4, "left half-plane is root-free at four speeds", t);
}

#[test]
fn criterion_05_quantization_ladder() {
    let t = Instant::now();
    let p = ModelParams::dimensionless();
    let tall = SearchBox::new(0.5, 12.0, 0.5, 60.0).unwrap();
    let rest = core::find_roots(0.0, &tall, 80).unwrap();
    let ladder0 = core::eigenfrequencies(&rest, 0.0, &p).unwrap();
    assert!(ladder0.eta.len() >= 8, "only {} rungs", ladder0.eta.len());
    let two_pi = std::f64::consts::TAU;
    for (i, gap) in ladder0.eta_spacing.iter().enumerate() {
        // gap i separates rungs i+1 and i+2
        if i + 2 >= 3 {
            assert!(
                (gap - two_pi).abs() / two_pi < 0.05,
                "gap {} -> {} is {gap}",
                i + 1,
                i + 2
            );
        }
    }
    let eta1 = ladder0.eta[0];
    assert!((ladder0.omega[0] - eta1 * p.omega0).abs() < 1e-12);

    let wide = SearchBox::new(0.5, 12.0, 5.0, 10.0).unwrap();
    for beta in [0.3, 0.6, 0.9] {
        let set = core::find_roots(beta, &wide, 60).unwrap();
        let ladder = core::eigenfrequencies(&set, beta, &p).unwrap();
        let gamma = core::lorentz_gamma(beta).unwrap();
        // omega_1 = eta_1 c/(gamma d) with eta_1 within 5% of its rest value,
        // so the frequency tracks 1/gamma across speeds
        assert!(
            (ladder.omega[0] * gamma / p.omega0 - eta1).abs() / eta1 < 0.05,
            "beta {beta}: omega {} vs eta1/gamma scaling",
            ladder.omega[0]
        );
    }
    pass(5, "ladder spacing is 2 pi and frequencies dilate as 1/gamma", t);
}

#[test]
fn criterion_06_delay_identity_grid() {
    let t = Instant::now();
    let p = ModelParams::dimensionless();
    let mut worst = 0.0f64;
    for i in 0..50 {
        let beta = 0.99 * i as f64 / 49.0;
        for j in 0..50 {
            let bdot = j as f64 / 49.0;
            let r = core::delay_closed_form(beta, bdot, &p).unwrap();
            let l = core::separation_l(beta, bdot, &p).unwrap();
            worst = worst.max((r * r - l * l - p.d * p.d).abs() / (r * r));
        }
    }
    assert!(worst < 1e-12, "worst relative defect {worst:e}");
    assert!(t.elapsed().as_secs_f64() < 1.0, "too slow: {:?}", t.elapsed());
    pass(6, "r^2 - l^2 = d^2 on the 50x50 grid", t);
}

#[test]
fn criterion_07_energy_identity_grid() {
    let t = Instant::now();
    let p = ModelParams::dimensionless();
    let mut worst = 0.0f64;
    for i in 0..50 {
        let beta = 0.99 * i as f64 / 49.0;
        for j in 0..50 {
            let bdot = j as f64 / 49.0;
            let b = core::energy_decomposition(beta, bdot, &p).unwrap();
            worst = worst.max(b.identity_defect / b.e_exact.abs());
        }
    }
    assert!(worst < 1e-12, "worst relative defect {worst:e}");

    let spot = core::energy_decomposition(0.6, 0.1, &p).unwrap();
    assert!((spot.e_exact - 1.226817).abs() < 5e-6, "E {}", spot.e_exact);
    assert!((spot.q_closed + 0.023175).abs() < 1e-5, "Q {}", spot.q_closed);
    assert!(t.elapsed().as_secs_f64() < 1.0, "too slow: {:?}", t.elapsed());
    pass(7, "E = gamma m c^2 + Q on the grid and at the spot value", t);
}

#[test]
fn criterion_08_series_resummation() {
    let t = Instant::now();
    assert_eq!(core::series_coefficient(1), (-1, 2));
    assert_eq!(core::series_coefficient(2), (3, 8));
    assert_eq!(core::series_coefficient(3), (-5, 16));

    let p = ModelParams::dimensionless();
    let bdot = 0.21f64.sqrt(); // beta = 0 makes chi = bdot^2 = 0.21
    let closed = core::quantum_potential_closed(0.0, bdot, &p).unwrap();
    let series = core::quantum_potential_series(0.0, bdot, 40, &p).unwrap();
    assert!(!series.divergent);
    assert!(
        ((series.value - closed) / closed).abs() < 1e-12,
        "series {} vs closed {closed}",
        series.value
    );
    pass(8, "partial sums reach the closed form at chi = 0.21 by N = 40", t);
}

#[test]
fn criterion_09_uniform_motion_invariance() {
    let t = Instant::now();
    let p = ModelParams::dimensionless();
    for beta in [0.0, 0.3, 0.6, 0.9] {
        let gamma = core::lorentz_gamma(beta).unwrap();
        let tau = gamma * p.tau0;
        let seed = core::uniform_history(beta, -2.5 * tau, 0.0, &p).unwrap();
        let h = core::default_grid_step(beta, &p).unwrap();
        let report = core::propagate(&seed, 50.0 * tau, h, &p).unwrap();
        let worst = report
            .trajectory
            .states()
            .iter()
            .map(|s| (s.x - beta * s.t).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-10 * p.d, "beta {beta}: drift {worst:e}");
    }
    assert!(t.elapsed().as_secs_f64() < 30.0, "too slow: {:?}", t.elapsed());
    pass(9, "uniform motion stays uniform for 50 delays at four speeds", t);
}

#[test]
fn criterion_10_instability_and_mode_matching() {
    let t = Instant::now();
    let p = ModelParams::dimensionless();
    let search = SearchBox::new(3.0, 6.0, 7.0, 10.0).unwrap();
    let set = core::find_roots(0.0, &search, 60).unwrap();
    let mu = set.roots.iter().find(|r| r.im > 0.0).unwrap().mu();

    // nonlinear run: a 1e-6 perturbation of rest grows and oscillates at mu
    let eps = 1e-6;
    let seed = core::seed_with_mode(0.0, eps, mu.re, mu.im, -2.0, 0.0, &p).unwrap();
    let h = core::default_grid_step(0.0, &p).unwrap();
    let report = core::propagate_with_tolerance(&seed, 1.2, h, 1e-5, &p).unwrap();
    let states = report.trajectory.states();
    let peak = states.iter().map(|s| s.x.abs()).fold(0.0, f64::max);
    assert!(peak >= 10.0 * eps, "grew only {}x", peak / eps);

    let peaks = core::measure_spectrum(&report.trajectory, (-2.0, 1.2)).unwrap();
    let freq = peaks[0].0;
    assert!(
        (freq - mu.im).abs() / mu.im < 0.05,
        "frequency {freq} vs Im mu {}",
        mu.im
    );

    // linearized run from a pseudorandom seed settles on the dominant slope
    let mut state = 0x2545F4914F6CDD1Du64;
    let mut rand = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let n = 64usize;
    let seed: Vec<core::LinearState> = (0..n)
        .map(|k| core::LinearState {
            t: k as f64 / n as f64,
            dx: rand(),
            dv: rand(),
            dvdot: rand(),
        })
        .collect();
    let out = core::propagate_linearized(0.0, &seed, 24, &p).unwrap();
    let logs: Vec<(f64, f64)> = (10..=24)
        .map(|seg| {
            let amp = out[seg * n..(seg + 1) * n]
                .iter()
                .map(|&(_, dx, _)| dx.abs())
                .fold(0.0, f64::max);
            (seg as f64, amp.ln())
        })
        .collect();
    let m = logs.len() as f64;
    let sx: f64 = logs.iter().map(|(x, _)| x).sum::<f64>() / m;
    let sy: f64 = logs.iter().map(|(_, y)| y).sum::<f64>() / m;
    let slope: f64 = logs.iter().map(|(x, y)| (x - sx) * (y - sy)).sum::<f64>()
        / logs.iter().map(|(x, _)| (x - sx) * (x - sx)).sum::<f64>();
    assert!(
        (slope - mu.re).abs() / mu.re < 0.02,
        "linearized slope {slope} vs Re mu {}",
        mu.re
    );

    assert!(t.elapsed().as_secs_f64() < 60.0, "too slow: {:?}", t.elapsed());
    pass(10, "perturbations grow 10x at the dominant root's rate and pitch", t);
}

#[test]
fn criterion_11_force_field_equivalence() {
    let t = Instant::now();
    let p = ModelParams::dimensionless();
    let mut state = 0x853C49E6748FEA9Bu64;
    let mut rand01 = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut checked = 0usize;
    while checked < 10_000 {
        let beta = 1.98 * rand01() - 0.99;
        let r = 1.0 + 19.0 * rand01();
        let l = r * (2.0 * rand01() - 1.0) * 0.99;
        let a = 20.0 * rand01() - 10.0;
        let force = core::self_force(l, r, beta, a, &p).unwrap();
        let field = core::lw_field(l, r, beta, a, &p).unwrap();
        let expect = -p.e_charge * field.e_x();
        assert!(
            (force - expect).abs() <= 1e-12 * force.abs().max(1e-300),
            "({l}, {r}, {beta}, {a}): {force} vs {expect}"
        );
        checked += 1;
    }
    assert!(t.elapsed().as_secs_f64() < 1.0, "too slow: {:?}", t.elapsed());
    pass(11, "self-force equals -e E_x on 10^4 random inputs", t);
}

#[test]
fn criterion_12_cli_determinism() {
    let t = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str]| {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_zitterdyn"))
            .current_dir(dir.path())
            .args(args)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let cases: Vec<(&str, Vec<&str>)> = vec![
        (
            "t.csv",
            vec![
                "simulate", "--beta", "0.3", "--family", "sinusoid", "--amplitude", "1e-11",
                "--omega", "8.3278", "--delays", "3", "--tol-eom", "1e-6", "--out", "t.csv",
            ],
        ),
        (
            "r.json",
            vec![
                "spectrum", "--beta", "0,0.6", "--box", "0,8,-12,12", "--grid-density", "40",
                "--out", "r.json",
            ],
        ),
        (
            "e.csv",
            vec![
                "energy", "--beta-grid", "0,0.9,10", "--bdot-grid", "0,1,10", "--n-terms", "30",
                "--out", "e.csv",
            ],
        ),
        (
            "f.ppm",
            vec![
                "render", "--beta", "0", "--box", "-15,15,-15,15", "--res", "64", "--out", "f.ppm",
            ],
        ),
        (
            "sw/manifest.json",
            vec![
                "sweep", "--betas", "0,0.3", "--box", "0,8,-12,12", "--grid-density", "30",
                "--render-res", "24", "--out-dir", "sw",
            ],
        ),
    ];
    for (artifact, args) in &cases {
        run(args);
        let first = std::fs::read(dir.path().join(artifact)).unwrap();
        run(args);
        let second = std::fs::read(dir.path().join(artifact)).unwrap();
        assert_eq!(first, second, "{artifact} changed between identical runs");
    }
    let verify_a = run(&["verify"]);
    let verify_b = run(&["verify"]);
    assert_eq!(verify_a, verify_b, "verify output changed between runs");

    assert!(t.elapsed().as_secs_f64() < 60.0, "too slow: {:?}", t.elapsed());
    pass(12, "every subcommand is byte-reproducible", t);
}
