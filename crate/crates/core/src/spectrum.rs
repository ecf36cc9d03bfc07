//! Characteristic roots of the linearized dynamics.
//!
//! Perturbing uniform motion and inserting the exponential ansatz
//! δx ∝ exp(μ·t/τ), τ = γd/c, turns the variational delay equation into the
//! quasi-polynomial characteristic equation
//!
//!   f(μ) = μ² + μ + (1 − β²)(1 − e^μ) = 0.
//!
//! μ = 0 solves it for every β (a neutral shift along the family of uniform
//! motions) and is a double root exactly at β = 0. The remaining roots come
//! in conjugate pairs; their imaginary parts form the eigenfrequency ladder
//! ω_n = Im μ_n · c/(γd).
//!
//! Roots are located by Newton iteration seeded on a lattice over a search
//! box, deduplicated, and certified by the argument principle: the winding
//! number of f around the box must equal the number of roots found, counting
//! multiplicity. The certification contour is nudged outward when a root
//! (μ = 0 on the default box edge, for instance) sits too close to it.

use crate::error::{Error, Result};
use crate::model::{lorentz_gamma, ModelParams};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Relative tolerance for a polished root, scaled by the local term sizes.
const TOL_ROOT: f64 = 1e-12;
/// Two roots closer than this are one root.
const DEDUPE_RADIUS: f64 = 1e-6;
/// Capture radius of the origin root. Newton converges only linearly into
/// the β = 0 double root and stalls near sqrt(tol), outside DEDUPE_RADIUS.
const ORIGIN_SNAP: f64 = 5e-6;
/// Largest admissible Re μ; e^μ stays comfortably inside f64 range.
const RE_CAP: f64 = 50.0;
/// Outward contour nudges tried when a root crowds the box edge.
const NUDGES: [f64; 4] = [1e-3, 3e-3, 1e-2, 3e-2];

pub const DEFAULT_GRID_DENSITY: usize = 200;

/// Rectangle in the μ plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl SearchBox {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<SearchBox> {
        let bad = |reason: &'static str| Error::InvalidBox {
            re_min,
            re_max,
            im_min,
            im_max,
            reason,
        };
        if ![re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite()) {
            return Err(bad("bounds must be finite"));
        }
        if re_min >= re_max || im_min >= im_max {
            return Err(bad("bounds must be ordered"));
        }
        if re_max > RE_CAP {
            return Err(bad("real part capped at 50 to keep e^mu in range"));
        }
        Ok(SearchBox {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    /// Distance from a point to the nearest edge line segment of the box.
    fn edge_distance(&self, z: Complex64) -> f64 {
        let dx = (self.re_min - z.re).max(z.re - self.re_max).max(0.0);
        let dy = (self.im_min - z.im).max(z.im - self.im_max).max(0.0);
        if dx > 0.0 || dy > 0.0 {
            return (dx * dx + dy * dy).sqrt();
        }
        let to_re = (z.re - self.re_min).min(self.re_max - z.re);
        let to_im = (z.im - self.im_min).min(self.im_max - z.im);
        to_re.min(to_im)
    }

    fn grown(&self, delta: f64) -> SearchBox {
        SearchBox {
            re_min: self.re_min - delta,
            re_max: self.re_max + delta,
            im_min: self.im_min - delta,
            im_max: self.im_max + delta,
        }
    }
}

/// The search region covering roughly the first nine conjugate pairs at β = 0.
pub fn default_search_box() -> SearchBox {
    SearchBox {
        re_min: 0.0,
        re_max: 12.0,
        im_min: -60.0,
        im_max: 60.0,
    }
}

/// One located root.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CharRoot {
    pub re: f64,
    pub im: f64,
    /// |f(μ)| after polishing.
    pub residual: f64,
    /// Local multiplicity: 2 only for μ = 0 at β = 0.
    pub multiplicity: u32,
    /// True when this entry is the mirror of a root with positive
    /// imaginary part.
    pub conjugate_partner: bool,
}

impl CharRoot {
    pub fn mu(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Certified collection of roots inside one box.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootSet {
    pub beta: f64,
    pub roots: Vec<CharRoot>,
    pub search_box: SearchBox,
    /// The contour actually integrated; the search box grown until no root
    /// touches it.
    pub certification_box: SearchBox,
    pub certified_count: i64,
}

impl RootSet {
    /// Number of roots counting multiplicity; equals `certified_count`.
    pub fn count_with_multiplicity(&self) -> i64 {
        self.roots.iter().map(|r| i64::from(r.multiplicity)).sum()
    }
}

/// The characteristic function f(μ) = μ² + μ + (1 − β²)(1 − e^μ).
pub fn char_fn(mu: Complex64, beta: f64) -> Complex64 {
    mu * mu + mu + (1.0 - beta * beta) * (Complex64::new(1.0, 0.0) - mu.exp())
}

/// f′(μ) = 2μ + 1 − (1 − β²)·e^μ.
pub fn char_fn_derivative(mu: Complex64, beta: f64) -> Complex64 {
    2.0 * mu + Complex64::new(1.0, 0.0) - (1.0 - beta * beta) * mu.exp()
}

/// Size of the terms entering f at μ; |f| is compared against this scale.
fn term_scale(mu: Complex64, beta: f64) -> f64 {
    let m = mu.norm();
    1.0 + m * m + m + (1.0 - beta * beta) * (1.0 + mu.re.exp())
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.abs() >= 1.0 || !beta.is_finite() {
        return Err(Error::SuperluminalSpeed {
            speed: beta,
            limit: 1.0,
        });
    }
    Ok(())
}

/// Count roots inside the box, with multiplicity, by the argument principle.
///
/// Walks the boundary counterclockwise accumulating the unwrapped phase of f;
/// segments are bisected until consecutive samples differ by less than π/2,
/// which pins the winding number exactly for an analytic integrand.
pub fn count_roots(beta: f64, search_box: &SearchBox) -> Result<i64> {
    check_beta(beta)?;
    let corners = search_box.corners();
    let mut total = 0.0;
    for k in 0..4 {
        let a = corners[k];
        let b = corners[(k + 1) % 4];
        total += edge_phase(beta, a, b)?;
    }
    let winding = total / std::f64::consts::TAU;
    let rounded = winding.round();
    if (winding - rounded).abs() > 1e-6 {
        return Err(Error::NonIntegerWinding { value: winding });
    }
    Ok(rounded as i64)
}

fn contour_sample(beta: f64, z: Complex64) -> Result<Complex64> {
    let f = char_fn(z, beta);
    if f.norm() < 1e-9 * term_scale(z, beta) {
        return Err(Error::ContourNearRoot {
            re: z.re,
            im: z.im,
            magnitude: f.norm(),
        });
    }
    Ok(f)
}

fn edge_phase(beta: f64, a: Complex64, b: Complex64) -> Result<f64> {
    let fa = contour_sample(beta, a)?;
    let fb = contour_sample(beta, b)?;
    // initial split keeps segments short relative to the root spacing
    let pieces = ((b - a).norm() / 0.5).ceil().max(1.0) as usize;
    let mut total = 0.0;
    let mut z_prev = a;
    let mut f_prev = fa;
    for k in 1..=pieces {
        let t = k as f64 / pieces as f64;
        let z = a + (b - a) * t;
        let f = if k == pieces { fb } else { contour_sample(beta, z)? };
        total += phase_step(beta, z_prev, f_prev, z, f, 0)?;
        z_prev = z;
        f_prev = f;
    }
    Ok(total)
}

fn phase_step(
    beta: f64,
    za: Complex64,
    fa: Complex64,
    zb: Complex64,
    fb: Complex64,
    depth: u32,
) -> Result<f64> {
    let zm = 0.5 * (za + zb);
    let fm = contour_sample(beta, zm)?;
    let direct = (fb / fa).arg();
    // the midpoint split differs from the direct difference by 2π per turn
    // hidden between the endpoints, so agreement certifies the step
    let split = (fm / fa).arg() + (fb / fm).arg();
    if direct.abs() <= std::f64::consts::FRAC_PI_2 && (split - direct).abs() < 1e-9 {
        return Ok(direct);
    }
    if depth >= 52 {
        return Err(Error::ContourNearRoot {
            re: zm.re,
            im: zm.im,
            magnitude: fa.norm().min(fb.norm()),
        });
    }
    Ok(phase_step(beta, za, fa, zm, fm, depth + 1)?
        + phase_step(beta, zm, fm, zb, fb, depth + 1)?)
}

fn newton_polish(seed: Complex64, beta: f64) -> Option<Complex64> {
    let mut mu = seed;
    for _ in 0..60 {
        let f = char_fn(mu, beta);
        let fnorm = f.norm();
        if fnorm <= TOL_ROOT * term_scale(mu, beta) {
            // one extra step squares the error; keep whichever iterate is better
            let df = char_fn_derivative(mu, beta);
            if df.norm() > 0.0 {
                let refined = mu - f / df;
                if char_fn(refined, beta).norm() < fnorm {
                    return Some(refined);
                }
            }
            return Some(mu);
        }
        let df = char_fn_derivative(mu, beta);
        if df.norm() == 0.0 {
            return None;
        }
        mu -= f / df;
        if !mu.re.is_finite() || !mu.im.is_finite() || mu.norm() > 1e4 {
            return None;
        }
    }
    None
}

/// Locate and certify every root inside the box.
///
/// Newton iteration runs from a `grid_density` × `grid_density` lattice of
/// seeds; converged points are deduplicated within 10⁻⁶, conjugates are
/// completed by the f(μ̄) = f̄(μ) symmetry, and the final list is certified
/// against the argument-principle count over the (possibly nudged) box. A
/// mismatch triggers one densification retry before erroring.
pub fn find_roots(beta: f64, search_box: &SearchBox, grid_density: usize) -> Result<RootSet> {
    check_beta(beta)?;
    if grid_density < 2 {
        return Err(Error::InvalidParameter {
            name: "grid_density",
            value: grid_density as f64,
            reason: "at least a 2 x 2 seed lattice is required",
        });
    }
    let mut density = grid_density;
    let mut last_err = None;
    for _attempt in 0..2 {
        let roots = locate(beta, search_box, density);
        match certify(beta, search_box, roots) {
            Ok(set) => return Ok(set),
            Err(e @ Error::CertificationMismatch { .. }) => {
                last_err = Some(e);
                density *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("loop ran"))
}

fn locate(beta: f64, search_box: &SearchBox, density: usize) -> Vec<Complex64> {
    let dw = (search_box.re_max - search_box.re_min) / density as f64;
    let dh = (search_box.im_max - search_box.im_min) / density as f64;
    let mut converged: Vec<Complex64> = (0..density * density)
        .into_par_iter()
        .filter_map(|idx| {
            let i = idx / density;
            let j = idx % density;
            let seed = Complex64::new(
                search_box.re_min + (i as f64 + 0.5) * dw,
                search_box.im_min + (j as f64 + 0.5) * dh,
            );
            newton_polish(seed, beta)
        })
        .collect();
    converged.par_sort_unstable_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let mut distinct: Vec<Complex64> = Vec::new();
    'cand: for mut mu in converged {
        if mu.norm() < ORIGIN_SNAP {
            mu = Complex64::new(0.0, 0.0);
        }
        for r in &distinct {
            if (mu - r).norm() < DEDUPE_RADIUS {
                continue 'cand;
            }
        }
        distinct.push(mu);
    }
    distinct
}

fn certify(beta: f64, search_box: &SearchBox, candidates: Vec<Complex64>) -> Result<RootSet> {
    // grow the contour until it clears every root, μ = 0 on the default box
    // edge included, then count and compare
    let mut cert_box = *search_box;
    let mut last_contour_err = None;
    for (k, &delta) in [0.0].iter().chain(NUDGES.iter()).enumerate() {
        if k > 0 {
            cert_box = search_box.grown(delta);
        }
        let crowded = candidates
            .iter()
            .any(|&mu| cert_box.edge_distance(mu) < 1e-4);
        if crowded {
            continue;
        }
        match count_roots(beta, &cert_box) {
            Ok(count) => return assemble(beta, search_box, &cert_box, candidates, count),
            Err(e @ (Error::ContourNearRoot { .. } | Error::NonIntegerWinding { .. })) => {
                last_contour_err = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_contour_err.unwrap_or(Error::ContourNearRoot {
        re: f64::NAN,
        im: f64::NAN,
        magnitude: f64::NAN,
    }))
}

fn assemble(
    beta: f64,
    search_box: &SearchBox,
    cert_box: &SearchBox,
    candidates: Vec<Complex64>,
    certified_count: i64,
) -> Result<RootSet> {
    let mut kept: Vec<Complex64> = candidates
        .into_iter()
        .filter(|mu| cert_box.contains(*mu))
        .collect();

    // complete conjugates the lattice may have missed
    let mut extra = Vec::new();
    for &mu in &kept {
        if mu.im.abs() < DEDUPE_RADIUS {
            continue;
        }
        let conj = mu.conj();
        if cert_box.contains(conj) && !kept.iter().any(|r| (conj - r).norm() < DEDUPE_RADIUS) {
            if let Some(p) = newton_polish(conj, beta) {
                extra.push(p);
            }
        }
    }
    kept.extend(extra);
    kept.sort_unstable_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));

    let roots: Vec<CharRoot> = kept
        .iter()
        .map(|&mu| {
            // at small β the origin's companion root −2β² falls inside the
            // snap radius and is absorbed; count it via the multiplicity
            let multiplicity = if mu.norm() == 0.0 && beta * beta < 1e-7 {
                2
            } else {
                1
            };
            let has_mirror = mu.im < -DEDUPE_RADIUS
                && kept
                    .iter()
                    .any(|r| (mu.conj() - r).norm() < DEDUPE_RADIUS);
            CharRoot {
                re: mu.re,
                im: mu.im,
                residual: char_fn(mu, beta).norm(),
                multiplicity,
                conjugate_partner: has_mirror,
            }
        })
        .collect();

    let found: i64 = roots.iter().map(|r| i64::from(r.multiplicity)).sum();
    if found != certified_count {
        return Err(Error::CertificationMismatch {
            newton: found,
            winding: certified_count,
        });
    }
    Ok(RootSet {
        beta,
        roots,
        search_box: *search_box,
        certification_box: *cert_box,
        certified_count,
    })
}

/// Eigenfrequency ladder derived from a certified root set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenLadder {
    /// η_n = Im μ_n for the positive-frequency roots, ascending.
    pub eta: Vec<f64>,
    /// ω_n = η_n · c/(γd), same order.
    pub omega: Vec<f64>,
    /// Consecutive differences of η; approaches 2π up the ladder.
    pub eta_spacing: Vec<f64>,
}

/// Physical frequencies ω_n = Im μ_n · c/(γd) of the oscillatory roots.
///
/// μ = 0 and real roots carry no frequency and are excluded; conjugate
/// partners are folded onto their positive-frequency mirror.
pub fn eigenfrequencies(root_set: &RootSet, beta: f64, params: &ModelParams) -> Result<EigenLadder> {
    if (beta - root_set.beta).abs() > 1e-12 {
        return Err(Error::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "does not match the root set's velocity parameter",
        });
    }
    let gamma = lorentz_gamma(beta)?;
    let scale = params.c / (gamma * params.d);
    let mut eta: Vec<f64> = root_set
        .roots
        .iter()
        .filter(|r| r.im > DEDUPE_RADIUS)
        .map(|r| r.im)
        .collect();
    eta.sort_unstable_by(f64::total_cmp);
    let omega = eta.iter().map(|e| e * scale).collect();
    let eta_spacing = eta.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(EigenLadder {
        eta,
        omega,
        eta_spacing,
    })
}
