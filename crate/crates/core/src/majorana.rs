//! Majorana polynomial, root constellations and collective rotations.
//!
//! For a symmetric state with Dicke coefficients `c_l` the Majorana
//! polynomial is `P(x) = Σ_l (−1)^l √C(N,l) c_l x^l`. Writing the state as the
//! symmetrization of spinors `a_i|0⟩ + b_i|1⟩` gives
//! `P(x) ∝ ∏ (a_i − b_i x)`, so each root `x_i = a_i / b_i` pins down one
//! spinor, and every unit of degree lost from `P` is a spinor `|0⟩`.
//!
//! Constellation points are stored in spinor coordinates: a
//! [`ProjectiveRoot`] `(z : w)` is the spinor `w|0⟩ + z|1⟩`, so `z = 0` is
//! `|0⟩` (north pole, `β = 0`) and `w = 0` is `|1⟩` (the point at infinity,
//! `β = π`).

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{binomial, ONE, ZERO};
use crate::poly::{self, Projective, RootOptions};
use crate::state::{symmetrize, Spinor, SymmetricState};
use crate::Mat2;

/// A point `(z : w)` of the projective line, scaled so the larger component is 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectiveRoot {
    z: Complex64,
    w: Complex64,
}

impl ProjectiveRoot {
    pub fn new(z: Complex64, w: Complex64) -> Result<Self> {
        let (nz, nw) = (z.norm(), w.norm());
        if !(nz.is_finite() && nw.is_finite()) || (nz == 0.0 && nw == 0.0) {
            return Err(Error::ZeroVector);
        }
        Ok(if nz >= nw {
            Self { z: ONE, w: w / z }
        } else {
            Self { z: z / w, w: ONE }
        })
    }

    /// The affine point `z`.
    pub fn finite(z: Complex64) -> Self {
        Self::new(z, ONE).expect("w = 1 is nonzero")
    }

    pub fn infinity() -> Self {
        Self { z: ONE, w: ZERO }
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn w(&self) -> Complex64 {
        self.w
    }

    pub fn is_infinite(&self) -> bool {
        self.w == ZERO
    }

    /// `z / w`, or `None` at infinity.
    pub fn value(&self) -> Option<Complex64> {
        (!self.is_infinite()).then(|| self.z / self.w)
    }

    pub fn from_spinor(s: &Spinor) -> Self {
        Self::new(s.b(), s.a()).expect("spinors are normalized")
    }

    /// The spinor `w|0⟩ + z|1⟩`, normalized.
    pub fn spinor(&self) -> Spinor {
        Spinor::new(self.w, self.z).expect("not both zero")
    }

    /// Sphere orientation with `z = tan(β/2) e^{iα}`.
    pub fn angles(&self) -> (f64, f64) {
        self.spinor().angles()
    }

    /// Inverse of [`ProjectiveRoot::angles`]; `β = 0` and `β = π` land
    /// exactly on `0` and infinity.
    pub fn from_angles(alpha: f64, beta: f64) -> Self {
        if beta <= 0.0 {
            Self::finite(ZERO)
        } else if beta >= PI {
            Self::infinity()
        } else {
            Self::from_spinor(&Spinor::from_angles(alpha, beta))
        }
    }

    /// Chordal distance `|z_p w_q − z_q w_p| / (‖p‖ ‖q‖)`.
    pub fn chordal(&self, other: &ProjectiveRoot) -> f64 {
        let np = (self.z.norm_sqr() + self.w.norm_sqr()).sqrt();
        let nq = (other.z.norm_sqr() + other.w.norm_sqr()).sqrt();
        (self.z * other.w - other.z * self.w).norm() / (np * nq)
    }

    /// Image under the spinor map `m`, i.e. the Möbius map
    /// `z ↦ (m₁₀ + m₁₁ z) / (m₀₀ + m₀₁ z)`.
    pub fn transform(&self, m: &Mat2) -> Result<Self> {
        let w = m[0][0] * self.w + m[0][1] * self.z;
        let z = m[1][0] * self.w + m[1][1] * self.z;
        Self::new(z, w).map_err(|_| Error::SingularOperation { det: 0.0 })
    }

    /// Angles `(α, β)` at which `tan(β/2) e^{iα}` is the corresponding root of
    /// the Majorana polynomial, i.e. where the column of
    /// [`wigner_d_column`] is orthogonal to the state.
    pub fn polynomial_orientation(&self) -> (f64, f64) {
        let (alpha, beta) = self.angles();
        let beta = PI - beta;
        let alpha = if beta == 0.0 || beta == PI {
            0.0
        } else {
            (-alpha).rem_euclid(TAU)
        };
        (alpha, beta)
    }

    fn from_form_root(p: &Projective) -> Self {
        // Form root (x : y) of Σ p_l x^l y^{N−l} is the spinor x|0⟩ + y|1⟩.
        Self::new(p.y, p.x).expect("unit vector")
    }
}

/// Distinct constellation points with multiplicities summing to `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct MajoranaConstellation {
    points: Vec<(ProjectiveRoot, usize)>,
}

impl MajoranaConstellation {
    /// Builds a constellation from `(point, multiplicity)` pairs. Zero
    /// multiplicities are dropped; at least one point must remain.
    pub fn new(points: Vec<(ProjectiveRoot, usize)>) -> Result<Self> {
        let points: Vec<_> = points.into_iter().filter(|(_, m)| *m > 0).collect();
        if points.is_empty() {
            return Err(Error::InvalidQubitCount {
                n: 0,
                reason: "constellation needs at least one point",
            });
        }
        Ok(Self { points })
    }

    /// One point per spinor, repeated by multiplicity.
    pub fn from_roots(roots: &[ProjectiveRoot]) -> Result<Self> {
        Self::new(roots.iter().map(|r| (*r, 1)).collect())
    }

    pub fn n(&self) -> usize {
        self.points.iter().map(|(_, m)| m).sum()
    }

    pub fn points(&self) -> &[(ProjectiveRoot, usize)] {
        &self.points
    }

    /// Multiplicities sorted in non-increasing order.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m: Vec<usize> = self.points.iter().map(|(_, m)| *m).collect();
        m.sort_unstable_by(|a, b| b.cmp(a));
        m
    }

    /// Multiplicity of the point at infinity.
    pub fn infinity_multiplicity(&self) -> usize {
        self.points
            .iter()
            .filter(|(p, _)| p.is_infinite())
            .map(|(_, m)| m)
            .sum()
    }

    /// All `N` points, repeated by multiplicity.
    pub fn expanded(&self) -> Vec<ProjectiveRoot> {
        self.points
            .iter()
            .flat_map(|(p, m)| std::iter::repeat_n(*p, *m))
            .collect()
    }

    pub fn spinors(&self) -> Vec<Spinor> {
        self.expanded().iter().map(|p| p.spinor()).collect()
    }

    /// Image of every point under the Möbius map of `m`, multiplicities kept.
    pub fn transform(&self, m: &Mat2) -> Result<Self> {
        let points = self
            .points
            .iter()
            .map(|(p, k)| p.transform(m).map(|q| (q, *k)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    /// Largest chordal distance between matched points under the matching
    /// that minimizes the total distance; infinite when sizes differ.
    pub fn matching_distance(&self, other: &MajoranaConstellation) -> f64 {
        matching_distance(&self.expanded(), &other.expanded())
    }
}

/// Bottleneck distance of the minimum-total-cost perfect matching.
/// Exact bitmask dynamic programme, so limited to small point sets.
pub fn matching_distance(a: &[ProjectiveRoot], b: &[ProjectiveRoot]) -> f64 {
    let n = a.len();
    if n != b.len() {
        return f64::INFINITY;
    }
    if n == 0 {
        return 0.0;
    }
    assert!(n <= 20, "matching limited to 20 points");
    let d: Vec<Vec<f64>> = a
        .iter()
        .map(|p| b.iter().map(|q| p.chordal(q)).collect())
        .collect();
    let full = 1usize << n;
    let mut cost = vec![f64::INFINITY; full];
    let mut choice = vec![usize::MAX; full];
    cost[0] = 0.0;
    for mask in 0..full {
        if !cost[mask].is_finite() {
            continue;
        }
        let i = mask.count_ones() as usize;
        if i == n {
            continue;
        }
        for (j, &dij) in d[i].iter().enumerate() {
            if mask & (1 << j) == 0 {
                let next = mask | (1 << j);
                let c = cost[mask] + dij;
                if c < cost[next] {
                    cost[next] = c;
                    choice[next] = j;
                }
            }
        }
    }
    let mut mask = full - 1;
    let mut worst: f64 = 0.0;
    while mask != 0 {
        let i = mask.count_ones() as usize - 1;
        let j = choice[mask];
        worst = worst.max(d[i][j]);
        mask &= !(1 << j);
    }
    worst
}

/// Coefficients `p_l = (−1)^l √C(N,l) c_l`, lowest degree first.
pub fn majorana_polynomial(s: &SymmetricState) -> Vec<Complex64> {
    let n = s.n();
    s.coeffs()
        .iter()
        .enumerate()
        .map(|(l, &c)| {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            c * (sign * binomial(n, l).sqrt())
        })
        .collect()
}

/// Constellation of `s` with roots merged at chordal distance `cluster_tol`.
pub fn majorana_points(s: &SymmetricState, cluster_tol: f64) -> MajoranaConstellation {
    majorana_points_with(s, &RootOptions::with_cluster_tol(cluster_tol))
}

pub fn majorana_points_with(s: &SymmetricState, opts: &RootOptions) -> MajoranaConstellation {
    let p = majorana_polynomial(s);
    let points = poly::clustered_form_roots(&p, opts)
        .iter()
        .map(|(root, m)| (ProjectiveRoot::from_form_root(root), *m))
        .collect();
    MajoranaConstellation::new(points).expect("a nonzero state has N ≥ 1 roots")
}

/// All `N` roots without clustering, repeated by multiplicity. Degenerate
/// roots appear as tight rings; use these when transforming a state rather
/// than reporting its constellation.
pub fn raw_roots(s: &SymmetricState, degree_tol: f64) -> Vec<ProjectiveRoot> {
    poly::form_roots(&majorana_polynomial(s), degree_tol)
        .iter()
        .map(ProjectiveRoot::from_form_root)
        .collect()
}

/// The symmetric state whose Majorana constellation is `c`.
pub fn state_from_constellation(c: &MajoranaConstellation) -> Result<SymmetricState> {
    symmetrize(&c.spinors())
}

/// `m^{⊗N}|s⟩`, renormalized, by substituting `m` into the binary form.
/// This equals moving every constellation point by the Möbius map of `m`
/// and keeps multiple points multiple, but rounding grows like `κ(m)^N`,
/// so it is only used for unitary `m`.
fn transform_state(s: &SymmetricState, m: &Mat2) -> Result<SymmetricState> {
    let n = s.n();
    // |0⟩ ↦ m00|0⟩ + m10|1⟩ and |1⟩ ↦ m01|0⟩ + m11|1⟩, as polynomials in the |1⟩ count.
    let powers = |a: Complex64, b: Complex64| -> Vec<Vec<Complex64>> {
        let mut out = vec![vec![ONE]];
        for j in 0..n {
            let prev = &out[j];
            let mut next = vec![ZERO; j + 2];
            for (k, &c) in prev.iter().enumerate() {
                next[k] += c * a;
                next[k + 1] += c * b;
            }
            out.push(next);
        }
        out
    };
    let zero_image = powers(m[0][0], m[1][0]);
    let one_image = powers(m[0][1], m[1][1]);
    let mut out = vec![ZERO; n + 1];
    for (l, &c) in s.coeffs().iter().enumerate() {
        if c == ZERO {
            continue;
        }
        let q = c * binomial(n, l).sqrt();
        for (i, &x) in zero_image[n - l].iter().enumerate() {
            for (j, &y) in one_image[l].iter().enumerate() {
                out[i + j] += q * x * y;
            }
        }
    }
    for (k, c) in out.iter_mut().enumerate() {
        *c /= binomial(n, k).sqrt();
    }
    SymmetricState::new(out)
}

/// Collective rotation `U^{⊗N}` for `U ∈ SU(2)`.
pub fn su2_rotate(s: &SymmetricState, u: &Mat2) -> Result<SymmetricState> {
    let deviation = su2_deviation(u);
    if deviation > 1e-8 {
        return Err(Error::NotSpecialUnitary { deviation });
    }
    transform_state(s, u)
}

/// Largest of `‖U†U − I‖_max` and `|det U − 1|`.
fn su2_deviation(u: &Mat2) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let g = u[0][i].conj() * u[0][j] + u[1][i].conj() * u[1][j];
            let target = if i == j { ONE } else { ZERO };
            dev = dev.max((g - target).norm());
        }
    }
    let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    dev.max((det - ONE).norm())
}

/// `R_z(a) R_y(b) R_z(c)` with `R_z(φ) = diag(e^{−iφ/2}, e^{iφ/2})` and
/// `R_y(θ) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`.
pub fn su2_from_euler(a: f64, b: f64, c: f64) -> Mat2 {
    let rz = |phi: f64| -> Mat2 {
        [
            [Complex64::from_polar(1.0, -phi / 2.0), ZERO],
            [ZERO, Complex64::from_polar(1.0, phi / 2.0)],
        ]
    };
    let (cb, sb) = ((b / 2.0).cos(), (b / 2.0).sin());
    let ry: Mat2 = [
        [Complex64::new(cb, 0.0), Complex64::new(-sb, 0.0)],
        [Complex64::new(sb, 0.0), Complex64::new(cb, 0.0)],
    ];
    mat_mul(&mat_mul(&rz(a), &ry), &rz(c))
}

/// The rotation in SU(2) taking `spinor` to `|0⟩`.
pub fn su2_aligning(spinor: &Spinor) -> Mat2 {
    let (a, b) = (spinor.a(), spinor.b());
    [[a.conj(), b.conj()], [-b, a]]
}

pub(crate) fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

/// `√C(N,l) cos^{N−l}(β/2) (−sin(β/2))^l e^{i(l−N/2)α}`.
pub fn wigner_d_column(n: usize, l: usize, alpha: f64, beta: f64) -> Complex64 {
    if l > n {
        return ZERO;
    }
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let magnitude = binomial(n, l).sqrt() * c.powi((n - l) as i32) * (-s).powi(l as i32);
    Complex64::from_polar(1.0, (l as f64 - n as f64 / 2.0) * alpha) * magnitude
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{dicke_state, expand_to_full, ghz_state};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn projective_root_canonical_scale() {
        let p = ProjectiveRoot::new(c(2.0, 0.0), c(0.0, 1.0)).unwrap();
        assert_eq!(p.z(), ONE);
        assert!((p.w() - c(0.0, 0.5)).norm() < 1e-15);
        assert!(ProjectiveRoot::new(ZERO, ZERO).is_err());
        assert!(ProjectiveRoot::infinity().is_infinite());
        assert_eq!(ProjectiveRoot::infinity().angles().1, PI);
    }

    #[test]
    fn ghz3_polynomial_and_roots() {
        let s = ghz_state(3).unwrap();
        let p = majorana_polynomial(&s);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let want = [c(r, 0.0), ZERO, ZERO, c(-r, 0.0)];
        for (a, b) in p.iter().zip(&want) {
            assert!((a - b).norm() < 1e-15);
        }
        let cons = majorana_points(&s, 1e-6);
        assert_eq!(cons.multiplicities(), vec![1, 1, 1]);
        for (pt, _) in cons.points() {
            let (_, beta) = pt.angles();
            assert!((beta - PI / 2.0).abs() < 1e-12);
            let z = pt.value().unwrap();
            assert!((z * z * z - ONE).norm() < 1e-12);
        }
    }

    #[test]
    fn dicke_constellations_sit_at_poles() {
        let cons = majorana_points(&dicke_state(3, 2).unwrap(), 1e-6);
        assert_eq!(cons.n(), 3);
        assert_eq!(cons.infinity_multiplicity(), 2);
        let zero = cons.points().iter().find(|(p, _)| !p.is_infinite()).unwrap();
        assert_eq!(zero.0.value(), Some(ZERO));
        assert_eq!(zero.1, 1);

        let all_up = majorana_points(&dicke_state(5, 0).unwrap(), 1e-6);
        assert_eq!(all_up.points().len(), 1);
        assert_eq!(all_up.points()[0].0.value(), Some(ZERO));
        assert_eq!(all_up.points()[0].1, 5);
    }

    #[test]
    fn bell_roots_are_plus_minus_i() {
        let s = SymmetricState::new(vec![ONE, ZERO, ONE]).unwrap();
        let cons = majorana_points(&s, 1e-6);
        let mut zs: Vec<Complex64> = cons.points().iter().map(|(p, _)| p.value().unwrap()).collect();
        zs.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((zs[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((zs[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn constellation_inverts_to_state() {
        let w = c(-0.5, 3f64.sqrt() / 2.0);
        let cube = MajoranaConstellation::from_roots(&[
            ProjectiveRoot::finite(ONE),
            ProjectiveRoot::finite(w),
            ProjectiveRoot::finite(w * w),
        ])
        .unwrap();
        let s = state_from_constellation(&cube).unwrap();
        assert!(s.distance(&ghz_state(3).unwrap()) < 1e-14);

        let d = MajoranaConstellation::new(vec![
            (ProjectiveRoot::finite(ZERO), 1),
            (ProjectiveRoot::infinity(), 2),
        ])
        .unwrap();
        let s = state_from_constellation(&d).unwrap();
        assert!(s.distance(&dicke_state(3, 2).unwrap()) < 1e-15);
    }

    #[test]
    fn roundtrip_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=10 {
            let s = SymmetricState::random(n, &mut rng).unwrap();
            let back = state_from_constellation(&majorana_points(&s, 1e-6)).unwrap();
            assert!(s.distance(&back) < 1e-10, "n={n}: {}", s.distance(&back));
        }
    }

    #[test]
    fn euler_matrices_are_special_unitary() {
        let u = su2_from_euler(0.3, 1.1, -2.0);
        assert!(su2_deviation(&u) < 1e-14);
        let bad = [[c(2.0, 0.0), ZERO], [ZERO, c(0.5, 0.0)]];
        let s = ghz_state(3).unwrap();
        assert!(matches!(su2_rotate(&s, &bad), Err(Error::NotSpecialUnitary { .. })));
        let same = su2_rotate(&s, &su2_from_euler(0.0, 0.0, 0.0)).unwrap();
        assert!(same.distance(&s) < 1e-13);
    }

    #[test]
    fn rotation_matches_dense_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = SymmetricState::random(4, &mut rng).unwrap();
        let u = su2_from_euler(0.7, 2.1, 1.3);
        let rotated = expand_to_full(&su2_rotate(&s, &u).unwrap()).unwrap();
        let dense = expand_to_full(&s).unwrap().apply_identical(&u).unwrap();
        assert!(rotated.distance(&dense) < 1e-12);
    }

    #[test]
    fn aligned_root_kills_all_down_component() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = SymmetricState::random(5, &mut rng).unwrap();
        let root = majorana_points(&s, 1e-6).points()[0].0;
        let rotated = su2_rotate(&s, &su2_aligning(&root.spinor())).unwrap();
        assert!(rotated.coeff(5).norm() < 1e-12);
    }

    #[test]
    fn wigner_column_vanishes_at_roots_and_is_normalized() {
        assert!((wigner_d_column(4, 0, 0.0, 0.0) - ONE).norm() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = SymmetricState::random(6, &mut rng).unwrap();
        for (p, _) in majorana_points(&s, 1e-6).points() {
            let (alpha, beta) = p.polynomial_orientation();
            let sum: Complex64 = (0..=6)
                .map(|l| s.coeff(l) * wigner_d_column(6, l, alpha, beta))
                .sum();
            assert!(sum.norm() < 1e-10, "{}", sum.norm());
        }
        let total: f64 = (0..=7).map(|l| wigner_d_column(7, l, 0.4, 1.9).norm_sqr()).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn matching_distance_is_permutation_blind() {
        let a = [ProjectiveRoot::finite(ONE), ProjectiveRoot::infinity(), ProjectiveRoot::finite(ZERO)];
        let b = [a[2], a[0], a[1]];
        assert_eq!(matching_distance(&a, &b), 0.0);
        assert_eq!(matching_distance(&a, &b[..2]), f64::INFINITY);
    }
}
