//! Geometric measure of entanglement of symmetric states.
//!
//! For a symmetric state the closest product state can be taken symmetric,
//! `|ε⟩^{⊗N}`, so the search runs over spin-coherent states
//! `|α,β⟩ = (sin(β/2)e^{−iα}|0⟩ + cos(β/2)|1⟩)^{⊗N}`. The fidelity
//! `F(α,β) = |⟨α,β|s⟩|²` is maximized by a coarse grid followed by
//! Nelder–Mead from the best grid maxima and from every constellation point
//! and its antipode; `E_G = 1 − max F`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::majorana::majorana_points;
use crate::math::binomial;
use crate::optim::{nelder_mead, NelderMeadOptions};
use crate::parallel;
use crate::state::{Spinor, SymmetricState};

/// Optima within this much of the best fidelity are reported.
const CPP_VALUE_TOL: f64 = 1e-9;
/// Bloch-vector distance under which two optima are the same point.
const CPP_DEDUP_DIST: f64 = 1e-5;
/// Variance of `F` along `α` below which the optimum is a ring.
const RING_VARIANCE_TOL: f64 = 1e-10;

/// Point `(α, β)` on the sphere of spin-coherent states, `α ∈ [0, 2π)`,
/// `β ∈ [0, π]`, with `α = 0` at the poles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoherentPoint {
    alpha: f64,
    beta: f64,
}

impl CoherentPoint {
    /// Reduces any real pair to the principal ranges.
    pub fn new(alpha: f64, beta: f64) -> Self {
        let mut beta = beta.rem_euclid(TAU);
        let mut alpha = alpha;
        if beta > PI {
            beta = TAU - beta;
            alpha += PI;
        }
        let mut alpha = alpha.rem_euclid(TAU);
        if alpha >= TAU {
            alpha = 0.0;
        }
        if beta < 1e-12 || PI - beta < 1e-12 {
            alpha = 0.0;
        }
        Self { alpha, beta }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The single-qubit factor `sin(β/2)e^{−iα}|0⟩ + cos(β/2)|1⟩`.
    pub fn spinor(&self) -> Spinor {
        let (s, c) = (self.beta / 2.0).sin_cos();
        Spinor::new(Complex64::from_polar(s, -self.alpha), Complex64::new(c, 0.0))
            .expect("unit spinor")
    }

    /// The coherent point whose factor is `sp` up to phase.
    pub fn from_spinor(sp: &Spinor) -> Self {
        let (a, b) = (sp.a(), sp.b());
        let beta = 2.0 * a.norm().atan2(b.norm());
        let alpha = if a.norm() == 0.0 || b.norm() == 0.0 {
            0.0
        } else {
            b.arg() - a.arg()
        };
        Self::new(alpha, beta)
    }

    /// Diametrically opposite point (the orthogonal factor).
    pub fn antipode(&self) -> Self {
        Self::new(self.alpha + PI, PI - self.beta)
    }

    /// Bloch vector of [`spinor`](Self::spinor).
    pub fn bloch(&self) -> [f64; 3] {
        let sp = self.spinor();
        let ab = sp.a().conj() * sp.b();
        [2.0 * ab.re, 2.0 * ab.im, sp.a().norm_sqr() - sp.b().norm_sqr()]
    }

    fn bloch_distance(&self, other: &CoherentPoint) -> f64 {
        let (u, v) = (self.bloch(), other.bloch());
        u.iter().zip(&v).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    }
}

/// One sample of the fidelity landscape.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LandscapeSample {
    pub alpha: f64,
    pub beta: f64,
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntanglementReport {
    /// `1 − max F`, in `[0, 1)`.
    pub eg: f64,
    /// `−log₂(1 − eg)`.
    pub log_eg: f64,
    /// Every optimum found within a hair of the best, deduplicated.
    pub cpps: Vec<CoherentPoint>,
    /// Set when the best optimum lies on a circle of constant `β` along
    /// which `F` does not vary.
    pub ring: bool,
    pub landscape_samples: Option<Vec<LandscapeSample>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometricOptions {
    /// Points per axis of the seeding grid.
    pub grid: usize,
    /// Number of grid maxima refined.
    pub restarts: usize,
    /// Attach the grid samples to the report.
    pub keep_landscape: bool,
    pub parallel: bool,
}

impl Default for GeometricOptions {
    fn default() -> Self {
        Self {
            grid: 64,
            restarts: 8,
            keep_landscape: false,
            parallel: false,
        }
    }
}

/// `⟨α,β|s⟩ = Σ_r √C(N,r) cos^r(β/2) sin^{N−r}(β/2) e^{i(N−r)α} c_r`.
pub fn coherent_overlap(s: &SymmetricState, p: &CoherentPoint) -> Complex64 {
    let n = s.n();
    let (sn, cs) = (p.beta / 2.0).sin_cos();
    s.coeffs()
        .iter()
        .enumerate()
        .map(|(r, &c)| {
            let mag = binomial(n, r).sqrt() * cs.powi(r as i32) * sn.powi((n - r) as i32);
            c * Complex64::from_polar(mag, (n - r) as f64 * p.alpha)
        })
        .sum()
}

/// `|⟨α,β|s⟩|²`.
pub fn coherent_fidelity(s: &SymmetricState, p: &CoherentPoint) -> f64 {
    coherent_overlap(s, p).norm_sqr()
}

/// Grid angles: `β_j = πj/(grid−1)` and `α_i = 2πi/grid`.
fn grid_angles(grid: usize) -> (Vec<f64>, Vec<f64>) {
    let grid = grid.max(2);
    let betas = (0..grid).map(|j| PI * j as f64 / (grid - 1) as f64).collect();
    let alphas = (0..grid).map(|i| TAU * i as f64 / grid as f64).collect();
    (alphas, betas)
}

/// `F` on the `grid × grid` mesh, rows of constant `β`.
pub fn landscape(s: &SymmetricState, grid: usize, parallel: bool) -> Vec<LandscapeSample> {
    let (alphas, betas) = grid_angles(grid);
    parallel::map(&betas, parallel, |&beta| {
        alphas
            .iter()
            .map(|&alpha| LandscapeSample {
                alpha,
                beta,
                fidelity: coherent_fidelity(s, &CoherentPoint::new(alpha, beta)),
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}

/// Grid cells that are no smaller than any of their eight neighbours
/// (periodic in `α`), best first.
fn grid_maxima(samples: &[LandscapeSample], grid: usize) -> Vec<LandscapeSample> {
    let f = |j: usize, i: usize| samples[j * grid + i].fidelity;
    let mut out: Vec<LandscapeSample> = Vec::new();
    for j in 0..grid {
        for i in 0..grid {
            let here = f(j, i);
            let mut is_max = true;
            for dj in [-1i64, 0, 1] {
                let jj = j as i64 + dj;
                if jj < 0 || jj >= grid as i64 {
                    continue;
                }
                for di in [-1i64, 0, 1] {
                    if dj == 0 && di == 0 {
                        continue;
                    }
                    let ii = (i as i64 + di).rem_euclid(grid as i64) as usize;
                    if f(jj as usize, ii) > here {
                        is_max = false;
                    }
                }
            }
            if is_max {
                out.push(samples[j * grid + i]);
            }
        }
    }
    out.sort_by(|a, b| b.fidelity.total_cmp(&a.fidelity));
    out
}

/// Geometric measure with its closest product points.
pub fn geometric_measure(s: &SymmetricState, opts: &GeometricOptions) -> EntanglementReport {
    let grid = opts.grid.max(2);
    let samples = landscape(s, grid, opts.parallel);

    let mut seeds: Vec<CoherentPoint> = grid_maxima(&samples, grid)
        .iter()
        .take(opts.restarts.max(1))
        .map(|p| CoherentPoint::new(p.alpha, p.beta))
        .collect();
    for (root, _) in majorana_points(s, 1e-6).points() {
        let p = CoherentPoint::from_spinor(&root.spinor());
        seeds.push(p);
        seeds.push(p.antipode());
    }

    let step = PI / (grid - 1) as f64;
    let nm = NelderMeadOptions::default();
    let optima: Vec<(CoherentPoint, f64)> = parallel::map(&seeds, opts.parallel, |p| {
        let objective = |x: &[f64]| -coherent_fidelity(s, &CoherentPoint::new(x[0], x[1]));
        let m = nelder_mead(objective, &[p.alpha, p.beta], step, &nm);
        snap_to_pole(s, CoherentPoint::new(m.x[0], m.x[1]))
    });

    let best = optima.iter().map(|(_, f)| *f).fold(0.0, f64::max).min(1.0);
    let mut ranked = optima;
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut cpps: Vec<CoherentPoint> = Vec::new();
    for (p, f) in ranked {
        if f >= best - CPP_VALUE_TOL && cpps.iter().all(|q| q.bloch_distance(&p) >= CPP_DEDUP_DIST) {
            cpps.push(p);
        }
    }

    let ring = cpps.first().is_some_and(|p| is_ring(s, p.beta));
    let eg = if s.n() == 1 { 0.0 } else { (1.0 - best).max(0.0) };
    EntanglementReport {
        eg,
        log_eg: -(1.0 - eg).log2(),
        cpps,
        ring,
        landscape_samples: opts.keep_landscape.then_some(samples),
    }
}

/// Near a pole `F` is flat to second order, so the simplex stalls a little
/// short of it; take the pole itself when it is no worse.
fn snap_to_pole(s: &SymmetricState, p: CoherentPoint) -> (CoherentPoint, f64) {
    let f = coherent_fidelity(s, &p);
    if p.beta.sin() < 1e-6 {
        let pole = CoherentPoint::new(0.0, if p.beta < PI / 2.0 { 0.0 } else { PI });
        let fp = coherent_fidelity(s, &pole);
        if fp >= f - 1e-15 {
            return (pole, fp);
        }
    }
    (p, f)
}

fn is_ring(s: &SymmetricState, beta: f64) -> bool {
    if beta.sin() <= 1e-6 {
        return false;
    }
    let values: Vec<f64> = (0..64)
        .map(|i| coherent_fidelity(s, &CoherentPoint::new(TAU * i as f64 / 64.0, beta)))
        .collect();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64;
    var < RING_VARIANCE_TOL
}

/// Closed form for the Dicke state with `l` qubits in `|1⟩`:
/// `E_G = 1 − C(N,l)(l/N)^l((N−l)/N)^{N−l}`, attained on the ring
/// `tan(β/2) = √((N−l)/l)`.
pub fn dicke_closed_form(n: usize, l: usize) -> Result<(f64, CoherentPoint)> {
    if n == 0 {
        return Err(Error::InvalidQubitCount {
            n,
            reason: "need at least one qubit",
        });
    }
    if l > n {
        return Err(Error::IndexOutOfRange { index: l, max: n });
    }
    let (nf, lf) = (n as f64, l as f64);
    let fmax = binomial(n, l) * (lf / nf).powi(l as i32) * ((nf - lf) / nf).powi((n - l) as i32);
    let beta = 2.0 * (nf - lf).sqrt().atan2(lf.sqrt());
    Ok(((1.0 - fmax).max(0.0), CoherentPoint::new(0.0, beta)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{dicke_state, ghz_state, symmetrize, Spinor};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn point_canonicalization() {
        let p = CoherentPoint::new(-0.5, 4.0);
        assert!((p.beta() - (TAU - 4.0)).abs() < 1e-15);
        assert!((p.alpha() - (PI - 0.5)).abs() < 1e-15);
        assert_eq!(CoherentPoint::new(2.0, 0.0).alpha(), 0.0);
        assert_eq!(CoherentPoint::new(2.0, PI).alpha(), 0.0);
        let q = CoherentPoint::new(1.0, 1.0);
        let back = CoherentPoint::from_spinor(&q.spinor());
        assert!((back.alpha() - 1.0).abs() < 1e-14 && (back.beta() - 1.0).abs() < 1e-14);
        let anti = q.antipode();
        let d: f64 = q.bloch().iter().zip(anti.bloch()).map(|(a, b)| a + b).map(|x| x.abs()).sum();
        assert!(d < 1e-14);
    }

    #[test]
    fn overlap_matches_ghz_closed_form() {
        for n in 2..7 {
            let s = ghz_state(n).unwrap();
            for &(a, b) in &[(0.3, 0.7), (1.9, 2.5), (0.0, 1.2)] {
                let (sn, cs) = (b / 2.0f64).sin_cos();
                let want = 0.5
                    * (sn.powi(2 * n as i32) + cs.powi(2 * n as i32)
                        + 2.0 * (cs * sn).powi(n as i32) * (n as f64 * a).cos());
                let got = coherent_fidelity(&s, &CoherentPoint::new(a, b));
                assert!((got - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn coherent_states_resolve_identity() {
        // (N+1)/(4π) ∫ F sinβ dβ dα = 1 by midpoint quadrature.
        let s = SymmetricState::new(vec![
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.2, 0.5),
            Complex64::new(0.7, 0.0),
            Complex64::new(0.1, -0.3),
        ])
        .unwrap();
        let m = 200;
        let (da, db) = (TAU / m as f64, PI / m as f64);
        let mut total = 0.0;
        for j in 0..m {
            let b = (j as f64 + 0.5) * db;
            for i in 0..m {
                let a = (i as f64 + 0.5) * da;
                total += coherent_fidelity(&s, &CoherentPoint::new(a, b)) * b.sin() * da * db;
            }
        }
        assert!((total * 4.0 / (4.0 * PI) - 1.0).abs() < 1e-4);
    }

    #[test]
    fn reference_values() {
        let ghz = geometric_measure(&ghz_state(4).unwrap(), &GeometricOptions::default());
        assert!((ghz.eg - 0.5).abs() < 1e-9);
        assert!((ghz.log_eg - 1.0).abs() < 1e-8);
        assert_eq!(ghz.cpps.len(), 2);
        assert!(ghz.cpps.iter().any(|p| p.beta() == 0.0));
        assert!(ghz.cpps.iter().any(|p| p.beta() == PI));
        assert!(!ghz.ring);

        let w = geometric_measure(&dicke_state(3, 1).unwrap(), &GeometricOptions::default());
        assert!((w.eg - 5.0 / 9.0).abs() < 1e-9);
        assert!(w.ring);
        let sp = w.cpps[0].spinor();
        assert!((sp.a().norm_sqr() - 2.0 / 3.0).abs() < 1e-6);

        let bell = geometric_measure(&dicke_state(2, 1).unwrap(), &GeometricOptions::default());
        assert!((bell.eg - 0.5).abs() < 1e-9);
        assert!(bell.ring && (bell.cpps[0].beta() - PI / 2.0).abs() < 1e-6);

        let one = geometric_measure(&dicke_state(1, 1).unwrap(), &GeometricOptions::default());
        assert_eq!(one.eg, 0.0);
    }

    #[test]
    fn closed_form_values() {
        assert!((dicke_closed_form(3, 1).unwrap().0 - 5.0 / 9.0).abs() < 1e-15);
        assert!((dicke_closed_form(3, 2).unwrap().0 - 5.0 / 9.0).abs() < 1e-15);
        assert!((dicke_closed_form(4, 2).unwrap().0 - 5.0 / 8.0).abs() < 1e-15);
        let (eg, p) = dicke_closed_form(5, 0).unwrap();
        assert_eq!(eg, 0.0);
        assert!((p.beta() - PI).abs() < 1e-15);
        assert_eq!(dicke_closed_form(5, 5).unwrap().1.beta(), 0.0);
        assert!(dicke_closed_form(3, 4).is_err());
    }

    #[test]
    fn reported_points_are_stationary() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let states = [
            SymmetricState::random(5, &mut rng).unwrap(),
            dicke_state(6, 2).unwrap(),
            ghz_state(5).unwrap(),
        ];
        let h = 1e-5;
        for s in &states {
            for p in geometric_measure(s, &GeometricOptions::default()).cpps {
                let f = |a: f64, b: f64| coherent_fidelity(s, &CoherentPoint { alpha: a, beta: b });
                let (a, b) = (p.alpha(), p.beta());
                let (ga, gb) = if b > h && b < PI - h {
                    ((f(a + h, b) - f(a - h, b)) / (2.0 * h), (f(a, b + h) - f(a, b - h)) / (2.0 * h))
                } else {
                    // At a pole, differentiate along two great circles through it.
                    let off = if b < h { h } else { PI - h };
                    let along = |dir: f64| (f(dir, off) - f(dir + PI, off)) / (2.0 * h);
                    (along(0.0), along(PI / 2.0))
                };
                assert!(ga.hypot(gb) <= 1e-6, "gradient {} at {p:?}", ga.hypot(gb));
            }
        }
    }

    #[test]
    fn product_states_have_zero_measure() {
        let product = symmetrize(&[Spinor::from_angles(0.7, 2.2); 6]).unwrap();
        assert!(geometric_measure(&product, &GeometricOptions::default()).eg < 1e-12);
        for n in 2..8 {
            assert!(geometric_measure(&ghz_state(n).unwrap(), &GeometricOptions::default()).eg > 0.1);
        }
    }

    #[test]
    fn balanced_dicke_exceeds_ghz() {
        for n in 3..=8 {
            let opts = GeometricOptions::default();
            let dicke = geometric_measure(&dicke_state(n, n / 2).unwrap(), &opts).eg;
            let ghz = geometric_measure(&ghz_state(n).unwrap(), &opts).eg;
            assert!(dicke > ghz, "n={n}: {dicke} vs {ghz}");
        }
    }

    #[test]
    fn landscape_shape_and_report_samples() {
        let s = dicke_state(3, 1).unwrap();
        assert_eq!(landscape(&s, 16, false).len(), 256);
        let opts = GeometricOptions {
            grid: 16,
            keep_landscape: true,
            ..GeometricOptions::default()
        };
        assert_eq!(geometric_measure(&s, &opts).landscape_samples.unwrap().len(), 256);
    }
}
