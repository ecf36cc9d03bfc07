//! The `verify` subcommand: one quick check per module invariant,
//! printed as a pass/fail table.

use zitterdyn_core as core;
use zitterdyn_core::{LinearState, ModelParams, SearchBox};

use crate::Failure;

type Check = (&'static str, fn() -> Result<(), String>);

fn ck(cond: bool, detail: String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(detail)
    }
}

fn er<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn delay_identity() -> Result<(), String> {
    let p = ModelParams::dimensionless();
    let mut worst = 0.0f64;
    for i in 0..20 {
        let beta = 0.99 * i as f64 / 19.0;
        for j in 0..20 {
            let bdot = j as f64 / 19.0;
            let r = core::delay_closed_form(beta, bdot, &p).map_err(er)?;
            let l = core::separation_l(beta, bdot, &p).map_err(er)?;
            worst = worst.max((r * r - l * l - p.d * p.d).abs() / (r * r));
        }
    }
    ck(worst < 1e-12, format!("worst r^2 - l^2 defect {worst:e}"))
}

fn retarded_solve_round_trip() -> Result<(), String> {
    let p = ModelParams::dimensionless();
    let beta = 0.45;
    let hist = core::uniform_history(beta, -8.0, 2.0, &p).map_err(er)?;
    let sol = core::solve_retarded_time(&hist, 0.0, &p).map_err(er)?;
    let gamma = core::lorentz_gamma(beta).map_err(er)?;
    ck(
        (sol.r - gamma * p.d).abs() < 1e-10,
        format!("uniform delay {} vs {}", sol.r, gamma * p.d),
    )
}

fn force_matches_field() -> Result<(), String> {
    let p = ModelParams::dimensionless();
    let mut state = 0x9E3779B97F4A7C15u64;
    let mut rand01 = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..200 {
        let beta = 1.98 * rand01() - 0.99;
        let r = 1.0 + 9.0 * rand01();
        let l = r * (2.0 * rand01() - 1.0) * 0.99;
        let a = 10.0 * rand01() - 5.0;
        let f = core::self_force(l, r, beta, a, &p).map_err(er)?;
        let field = core::lw_field(l, r, beta, a, &p).map_err(er)?;
        let expect = -p.e_charge * field.e_x();
        if (f - expect).abs() > 1e-12 * f.abs().max(1.0) {
            return Err(format!("force {f} vs -eE {expect}"));
        }
    }
    Ok(())
}

fn energy_identity() -> Result<(), String> {
    let p = ModelParams::dimensionless();
    let mut worst = 0.0f64;
    for i in 0..15 {
        let beta = 0.95 * i as f64 / 14.0;
        for j in 0..15 {
            let bdot = j as f64 / 14.0;
            let b = core::energy_decomposition(beta, bdot, &p).map_err(er)?;
            worst = worst.max(b.identity_defect / b.e_exact.abs());
        }
    }
    ck(worst < 1e-12, format!("worst identity defect {worst:e}"))
}

fn series_matches_closed() -> Result<(), String> {
    let p = ModelParams::dimensionless();
    // chi = 0.21 via beta = 0, bdot = sqrt(0.21)
    let bdot = 0.21f64.sqrt();
    let closed = core::quantum_potential_closed(0.0, bdot, &p).map_err(er)?;
    let series = core::quantum_potential_series(0.0, bdot, 40, &p).map_err(er)?;
    ck(
        ((series.value - closed) / closed).abs() < 1e-12,
        format!("series {} vs closed {closed}", series.value),
    )
}

fn ladder_scales_inversely_with_gamma() -> Result<(), String> {
    let p = ModelParams::dimensionless();
    let search = SearchBox::new(3.0, 7.8, 5.0, 11.0).map_err(er)?;
    let rest = core::find_roots(0.0, &search, 40).map_err(er)?;
    let moving = core::find_roots(0.6, &search, 40).map_err(er)?;
    let lr = core::eigenfrequencies(&rest, 0.0, &p).map_err(er)?;
    let lm = core::eigenfrequencies(&moving, 0.6, &p).map_err(er)?;
    let gamma = core::lorentz_gamma(0.6).map_err(er)?;
    let (w0, w1) = (lr.omega[0], lm.omega[0]);
    // the angular factors differ slightly; the 1/gamma dilation dominates
    let ratio = w1 * gamma / (w0 * lm.eta[0] / lr.eta[0]);
    ck(
        (ratio - 1.0).abs() < 1e-9,
        format!("omega scaling defect {:e}", (ratio - 1.0).abs()),
    )
}

fn root_counts_certify() -> Result<(), String> {
    let inside = SearchBox::new(3.0, 6.0, 7.0, 10.0).map_err(er)?;
    let n = core::count_roots(0.0, &inside).map_err(er)?;
    ck(n == 1, format!("count in the leading-pair box: {n}"))?;
    let empty = SearchBox::new(-10.0, -0.1, 0.1, 60.0).map_err(er)?;
    let n = core::count_roots(0.3, &empty).map_err(er)?;
    ck(n == 0, format!("count in the empty quadrant: {n}"))
}

fn uniform_motion_is_invariant() -> Result<(), String> {
    let p = ModelParams::dimensionless();
    let beta = 0.45;
    let gamma = core::lorentz_gamma(beta).map_err(er)?;
    let seed = core::uniform_history(beta, -2.5 * gamma, 0.0, &p).map_err(er)?;
    let h = core::default_grid_step(beta, &p).map_err(er)?;
    let report = core::propagate(&seed, 10.0 * gamma, h, &p).map_err(er)?;
    let worst = report
        .trajectory
        .states()
        .iter()
        .map(|s| (s.x - beta * s.t).abs())
        .fold(0.0, f64::max);
    ck(worst < 1e-10, format!("drift {worst:e} after ten delays"))
}

fn zero_perturbation_stays_zero() -> Result<(), String> {
    let p = ModelParams::dimensionless();
    let seed: Vec<LinearState> = (0..16)
        .map(|k| LinearState {
            t: k as f64 / 16.0,
            dx: 0.0,
            dv: 0.0,
            dvdot: 0.0,
        })
        .collect();
    let out = core::propagate_linearized(0.0, &seed, 12, &p).map_err(er)?;
    ck(
        out.iter().all(|&(_, dx, dv)| dx == 0.0 && dv == 0.0),
        "zero seed produced nonzero output".into(),
    )
}

fn mode_multiplier_consistency() -> Result<(), String> {
    let p = ModelParams::dimensionless();
    let search = SearchBox::new(3.0, 7.8, 5.0, 11.0).map_err(er)?;
    let rs = core::find_roots(0.0, &search, 40).map_err(er)?;
    let mu = rs
        .roots
        .iter()
        .find(|r| r.im > 0.0)
        .ok_or("no oscillatory root found")?
        .mu();
    let n = 64;
    let seed: Vec<LinearState> = (0..n)
        .map(|k| {
            let t = k as f64 / n as f64;
            let e = (mu * t).exp();
            LinearState {
                t,
                dx: e.re,
                dv: (mu * e).re,
                dvdot: (mu * mu * e).re,
            }
        })
        .collect();
    let out = core::propagate_linearized(0.0, &seed, 1, &p).map_err(er)?;
    let scale = (2.0 * mu.re).exp();
    for &(t, dx, _) in &out[n..2 * n] {
        let expect = (mu * t).exp().re;
        if (dx - expect).abs() > 1e-6 * scale {
            return Err(format!("t {t}: {dx} vs {expect}"));
        }
    }
    Ok(())
}

fn perturbation_growth_and_reversal() -> Result<(), String> {
    let p = ModelParams::dimensionless();
    let eps = 1e-9;
    let seed = core::seed_with_mode(
        0.0,
        eps,
        4.548_546_263_535_465,
        8.327_764_297_362_91,
        -2.0,
        0.0,
        &p,
    )
    .map_err(er)?;
    let h = core::default_grid_step(0.0, &p).map_err(er)?;
    let report = core::propagate_with_tolerance(&seed, 2.5, h, 1e-5, &p).map_err(er)?;
    let late = report
        .trajectory
        .states()
        .iter()
        .filter(|s| s.t > 2.0)
        .map(|s| s.x.abs())
        .fold(0.0, f64::max);
    ck(late > 10.0 * eps, format!("late amplitude {late:e}"))?;

    let states = report.trajectory.states();
    let t1 = states.last().unwrap().t;
    let mut reversed = core::TrajectoryHistory::new();
    for s in states.iter().rev() {
        reversed
            .push(core::KinematicState::new(t1 - s.t, s.x, -s.v, s.a))
            .map_err(er)?;
    }
    let probe = reversed.t_first().unwrap() + 2.4;
    let sol = core::solve_retarded_time(&reversed, probe, &p).map_err(er)?;
    let emit = reversed.sample(sol.t_r).map_err(er)?;
    let x_probe = reversed.sample(probe).map_err(er)?.x;
    let res = core::eom_residual(&emit, x_probe, sol.r, &p).abs();
    ck(
        res > 10.0 * report.max_eom_residual,
        format!(
            "reversed residual {res:e} vs forward {:e}",
            report.max_eom_residual
        ),
    )
}

fn artifacts_are_deterministic() -> Result<(), String> {
    let p = ModelParams::dimensionless();
    let traj = core::uniform_history(0.3, 0.0, 1.0, &p).map_err(er)?;
    let rows = core::trajectory_records(&traj, &p).map_err(er)?;
    let mut a = Vec::new();
    let mut b = Vec::new();
    core::export_csv(&mut a, &core::TRAJECTORY_SCHEMA, &rows).map_err(er)?;
    core::export_csv(&mut b, &core::TRAJECTORY_SCHEMA, &rows).map_err(er)?;
    ck(a == b, "CSV export not reproducible".into())?;

    let region = SearchBox::new(-15.0, 15.0, -15.0, 15.0).map_err(er)?;
    let ia = core::render_domain_coloring(0.0, &region, 32, &[]).map_err(er)?;
    let ib = core::render_domain_coloring(0.0, &region, 32, &[]).map_err(er)?;
    ck(ia.pixels == ib.pixels, "render not reproducible".into())
}

pub fn run_verify() -> Result<(), Failure> {
    let checks: Vec<Check> = vec![
        ("delay_identity_r2_l2", delay_identity),
        ("retarded_solve_round_trip", retarded_solve_round_trip),
        ("force_matches_field", force_matches_field),
        ("energy_identity", energy_identity),
        ("series_matches_closed_form", series_matches_closed),
        ("eigenfrequency_dilation", ladder_scales_inversely_with_gamma),
        ("root_count_certificates", root_counts_certify),
        ("uniform_motion_invariant", uniform_motion_is_invariant),
        ("zero_perturbation_stays_zero", zero_perturbation_stays_zero),
        ("mode_multiplier_consistency", mode_multiplier_consistency),
        ("growth_and_time_reversal", perturbation_growth_and_reversal),
        ("deterministic_artifacts", artifacts_are_deterministic),
    ];
    let mut failures = 0usize;
    for (name, check) in checks {
        match check() {
            Ok(()) => println!("PASS {name}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    if failures == 0 {
        println!("all {} checks passed", 12);
        Ok(())
    } else {
        Err(Failure::Checks(failures))
    }
}
