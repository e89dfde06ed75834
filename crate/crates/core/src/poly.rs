//! Roots of univariate polynomials and binary forms.
//!
//! Finite roots come from the eigenvalues of the balanced companion matrix
//! (shifted complex QR on the Hessenberg form), each polished by Newton's
//! method in whichever chart keeps the iterate inside the unit disc.
//!
//! Multiple roots split into tight rings under rounding (an `m`-fold root
//! moves by roughly `ε^{1/m}`), so the clustering step merges groups of
//! computed roots whose centroid is verified to be an `m`-fold root: the
//! first `m` Taylor coefficients of the form at the centroid must vanish
//! relative to the rest.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::math::{ONE, ZERO};

/// Tolerances steering root extraction and clustering.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootOptions {
    /// Chordal distance below which computed roots are always merged.
    pub cluster_tol: f64,
    /// Relative magnitude below which a coefficient counts as zero when
    /// reading off the degree (and the order of the root at zero).
    pub degree_tol: f64,
    /// Relative size of the leading Taylor coefficients accepted for an
    /// `m`-fold root at a cluster centroid.
    pub multiplicity_tol: f64,
}

impl RootOptions {
    /// Options at a given clustering tolerance, with the multiplicity test
    /// set to `cluster_tol / 100`.
    pub fn with_cluster_tol(cluster_tol: f64) -> Self {
        Self {
            cluster_tol,
            multiplicity_tol: cluster_tol * 1e-2,
            ..Self::default()
        }
    }
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            cluster_tol: 1e-6,
            degree_tol: 1e-12,
            multiplicity_tol: 1e-8,
        }
    }
}

/// All complex roots of `Σ coeffs[l] x^l`; the leading coefficient must be nonzero.
pub fn roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Vec::new();
    }
    if degree == 1 {
        return vec![-coeffs[0] / coeffs[1]];
    }
    let lead = coeffs[degree];
    let mut h = DMatrix::from_element(degree, degree, ZERO);
    for j in 0..degree {
        h[(0, j)] = -coeffs[degree - 1 - j] / lead;
    }
    for i in 1..degree {
        h[(i, i - 1)] = ONE;
    }
    balance(&mut h);
    let eig = hessenberg_eigenvalues(h);
    eig.iter()
        .enumerate()
        .map(|(i, &z)| {
            let others: Vec<Complex64> = eig
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &w)| w)
                .collect();
            polish_isolated(coeffs, z, &others)
        })
        .collect()
}

/// Polishes `x` only when its first Newton step is small against the gap to
/// the other eigenvalues. The eigenvalues of a split multiple root form a
/// ring whose centroid is accurate; moving the members independently would
/// spoil that, and for them the Newton step is comparable to the gap.
fn polish_isolated(coeffs: &[Complex64], x: Complex64, others: &[Complex64]) -> Complex64 {
    if !x.is_finite() {
        return x;
    }
    let invert = x.norm() > 1.0;
    let chart = |z: Complex64| if invert { z.inv() } else { z };
    let gap = others
        .iter()
        .map(|&w| (chart(x) - chart(w)).norm())
        .fold(f64::INFINITY, f64::min);
    let step = if invert {
        let reversed: Vec<Complex64> = coeffs.iter().rev().copied().collect();
        let (p, dp) = horner(&reversed, x.inv());
        (p / dp).norm()
    } else {
        let (p, dp) = horner(coeffs, x);
        (p / dp).norm()
    };
    if step.is_finite() && step <= 1e-2 * gap {
        polish(coeffs, x)
    } else {
        x
    }
}

/// Diagonal similarity scaling by powers of two until row and column norms
/// are comparable.
fn balance(h: &mut DMatrix<Complex64>) {
    const RADIX: f64 = 2.0;
    let n = h.nrows();
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut col = 0.0;
            let mut row = 0.0;
            for j in 0..n {
                if j != i {
                    col += h[(j, i)].l1_norm();
                    row += h[(i, j)].l1_norm();
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = col + row;
            let mut f = 1.0;
            let mut c = col;
            let mut g = row / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = row * RADIX;
            while c >= g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + row / f) < 0.95 * total * 1.0 && f != 1.0 {
                converged = false;
                for j in 0..n {
                    h[(i, j)] /= f;
                    h[(j, i)] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
}

/// Eigenvalues of an upper Hessenberg matrix by single-shift complex QR
/// with Wilkinson shifts and deflation.
fn hessenberg_eigenvalues(mut h: DMatrix<Complex64>) -> Vec<Complex64> {
    let n = h.nrows();
    let scale = h.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut eig = Vec::with_capacity(n);
    let mut hi = n;
    let mut iter = 0usize;
    let max_iter = 100 * n.max(1);
    while hi > 0 {
        if hi == 1 {
            eig.push(h[(0, 0)]);
            break;
        }
        let mut l = hi - 1;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if s == 0.0 {
                s = scale;
            }
            if h[(l, l - 1)].norm() <= f64::EPSILON * s {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi - 1 {
            eig.push(h[(hi - 1, hi - 1)]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > max_iter {
            // No convergence: report the current diagonal of the block.
            for i in (0..hi).rev() {
                eig.push(h[(i, i)]);
            }
            break;
        }
        let m = hi - 1;
        let mu = if iter % 11 == 10 {
            h[(m, m)] + Complex64::from_polar(0.75 * h[(m, m - 1)].norm(), iter as f64)
        } else {
            wilkinson_shift(h[(m - 1, m - 1)], h[(m - 1, m)], h[(m, m - 1)], h[(m, m)])
        };
        for i in l..hi {
            h[(i, i)] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - l);
        for k in l..hi - 1 {
            let x = h[(k, k)];
            let y = h[(k + 1, k)];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 { (ONE, ZERO) } else { (x / r, y / r) };
            for j in k..hi {
                let (u, v) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = c.conj() * u + s.conj() * v;
                h[(k + 1, j)] = -s * u + c * v;
            }
            rotations.push((c, s));
        }
        for (k, &(c, s)) in (l..hi - 1).zip(&rotations) {
            for i in l..=k + 1 {
                let (u, v) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = u * c + v * s;
                h[(i, k + 1)] = -u * s.conj() + v * c.conj();
            }
        }
        for i in l..hi {
            h[(i, i)] += mu;
        }
    }
    eig
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let (r1, r2) = (mean + disc, mean - disc);
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

/// Value and derivative of `Σ coeffs[l] x^l`.
fn horner(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Newton refinement in the chart where `|x| ≤ 1`; a step is kept only if
/// it lowers the residual.
fn polish(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    if !x.is_finite() {
        return x;
    }
    let invert = x.norm() > 1.0;
    let reversed: Vec<Complex64>;
    let (poly, mut z): (&[Complex64], Complex64) = if invert {
        reversed = coeffs.iter().rev().copied().collect();
        (&reversed, x.inv())
    } else {
        (coeffs, x)
    };
    let mut value = horner(poly, z).0.norm();
    for _ in 0..16 {
        let (p, dp) = horner(poly, z);
        if dp.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        let next_value = horner(poly, next).0.norm();
        if !(next_value < value) {
            break;
        }
        let step = (next - z).norm();
        z = next;
        value = next_value;
        if step <= 4.0 * f64::EPSILON * z.norm().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    if invert {
        z.inv()
    } else {
        z
    }
}

/// Taylor coefficients `t_j = p^{(j)}(c) / j!` by repeated synthetic division.
pub(crate) fn taylor(coeffs: &[Complex64], c: Complex64) -> Vec<Complex64> {
    let mut work = coeffs.to_vec();
    let n = work.len();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        for i in (j..n - 1).rev() {
            let carry = work[i + 1] * c;
            work[i] += carry;
        }
        out.push(work[j]);
    }
    out
}

/// Point `(x : y)` of the projective line, stored with unit norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Projective {
    pub x: Complex64,
    pub y: Complex64,
}

impl Projective {
    pub fn new(x: Complex64, y: Complex64) -> Self {
        let norm = (x.norm_sqr() + y.norm_sqr()).sqrt();
        Self {
            x: x / norm,
            y: y / norm,
        }
    }

    pub fn infinity() -> Self {
        Self { x: ONE, y: ZERO }
    }

    pub fn origin() -> Self {
        Self { x: ZERO, y: ONE }
    }

    /// Chordal distance `|x₁y₂ − x₂y₁|` (inputs are unit vectors).
    pub fn chordal(&self, other: &Projective) -> f64 {
        (self.x * other.y - other.x * self.y).norm()
    }

    /// Affine coordinate in chart A (`x/y`) or chart B (`y/x`).
    fn coordinate(&self, chart: Chart) -> Complex64 {
        match chart {
            Chart::A => self.x / self.y,
            Chart::B => self.y / self.x,
        }
    }

    fn from_coordinate(c: Complex64, chart: Chart) -> Self {
        match chart {
            Chart::A => Self::new(c, ONE),
            Chart::B => Self::new(ONE, c),
        }
    }

    fn natural_chart(&self) -> Chart {
        if self.x.norm() <= self.y.norm() {
            Chart::A
        } else {
            Chart::B
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Chart {
    A,
    B,
}

/// Coefficients of the form `F(x, y) = Σ p_l x^l y^{N−l}` restricted to a chart.
fn chart_coeffs(p: &[Complex64], chart: Chart) -> Vec<Complex64> {
    match chart {
        Chart::A => p.to_vec(),
        Chart::B => p.iter().rev().copied().collect(),
    }
}

/// The `N` roots of the binary form `Σ p_l x^l y^{N−l}`, repeated by
/// multiplicity, with the roots at `(1:0)` and `(0:1)` read off exactly
/// from vanishing end coefficients.
pub fn form_roots(p: &[Complex64], degree_tol: f64) -> Vec<Projective> {
    form_roots_tagged(p, degree_tol)
        .into_iter()
        .map(|(pt, _)| pt)
        .collect()
}

fn form_roots_tagged(p: &[Complex64], degree_tol: f64) -> Vec<(Projective, bool)> {
    let n = p.len() - 1;
    let max = p.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let threshold = degree_tol * max;
    let significant = |c: &Complex64| c.norm() > threshold;
    let high = p.iter().rposition(significant).unwrap_or(0);
    let low = p.iter().position(significant).unwrap_or(0);
    let mut out = Vec::with_capacity(n);
    out.extend(std::iter::repeat_n((Projective::infinity(), true), n - high));
    out.extend(std::iter::repeat_n((Projective::origin(), true), low));
    out.extend(
        roots(&p[low..=high])
            .into_iter()
            .map(|z| (Projective::new(z, ONE), false)),
    );
    out
}

#[derive(Clone, Copy, Debug)]
struct Item {
    point: Projective,
    count: usize,
    exact: bool,
}

/// Roots of the binary form grouped into distinct points with multiplicities.
pub fn clustered_form_roots(p: &[Complex64], opts: &RootOptions) -> Vec<(Projective, usize)> {
    let mut items: Vec<Item> = form_roots_tagged(p, opts.degree_tol)
        .into_iter()
        .map(|(point, exact)| Item {
            point,
            count: 1,
            exact,
        })
        .collect();
    items = merge_close(items, p, opts.cluster_tol);
    while let Some((group, centroid)) = best_multiple_root(&items, p, opts) {
        let count = group.iter().map(|&i| items[i].count).sum();
        let exact = group.iter().any(|&i| items[i].exact);
        let mut next: Vec<Item> = items
            .iter()
            .enumerate()
            .filter(|(i, _)| !group.contains(i))
            .map(|(_, it)| *it)
            .collect();
        next.push(Item {
            point: centroid,
            count,
            exact,
        });
        items = next;
    }
    items = merge_close(items, p, opts.cluster_tol);
    items.into_iter().map(|it| (it.point, it.count)).collect()
}

/// Single-linkage merge of items closer than `tol`.
fn merge_close(items: Vec<Item>, p: &[Complex64], tol: f64) -> Vec<Item> {
    let n = items.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if items[i].point.chordal(&items[j].point) <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(i);
    }
    groups
        .into_iter()
        .map(|g| {
            if g.len() == 1 {
                return items[g[0]];
            }
            let count = g.iter().map(|&i| items[i].count).sum();
            Item {
                point: centroid(&items, &g, p, count),
                count,
                exact: g.iter().any(|&i| items[i].exact),
            }
        })
        .collect()
}

/// Count-weighted centroid in the chart that keeps all members finite and
/// smallest; an exact member pins the centroid.
fn centroid(items: &[Item], group: &[usize], p: &[Complex64], count: usize) -> Projective {
    if let Some(&i) = group.iter().find(|&&i| items[i].exact) {
        return items[i].point;
    }
    let spread = |chart: Chart| {
        group
            .iter()
            .map(|&i| items[i].point.coordinate(chart).norm())
            .fold(0.0, f64::max)
    };
    let chart = if spread(Chart::A) <= spread(Chart::B) {
        Chart::A
    } else {
        Chart::B
    };
    let total = group.iter().map(|&i| items[i].count as f64).sum::<f64>();
    let mean = group
        .iter()
        .map(|&i| items[i].point.coordinate(chart) * items[i].count as f64)
        .sum::<Complex64>()
        / total;
    // Refinement may wander off to a root of the derivative that belongs to
    // a different cluster; keep it only if it stays inside the group.
    let radius = group
        .iter()
        .map(|&i| (items[i].point.coordinate(chart) - mean).norm())
        .fold(0.0, f64::max);
    let refined = refine_multiple(p, mean, chart, count);
    let c = if (refined - mean).norm() <= radius + 1e-12 * (1.0 + mean.norm()) {
        refined
    } else {
        mean
    };
    Projective::from_coordinate(c, chart)
}

/// Newton on the `(m−1)`-th derivative, where an `m`-fold root is simple.
fn refine_multiple(p: &[Complex64], start: Complex64, chart: Chart, m: usize) -> Complex64 {
    let coeffs = chart_coeffs(p, chart);
    if m == 0 || m >= coeffs.len() {
        return start;
    }
    let mut deriv = coeffs;
    for _ in 0..m - 1 {
        deriv = deriv
            .iter()
            .enumerate()
            .skip(1)
            .map(|(l, &c)| c * l as f64)
            .collect();
    }
    polish(&deriv, start)
}

/// Relative size of the first `m` Taylor coefficients of the form at `point`.
fn multiplicity_defect(p: &[Complex64], point: &Projective, m: usize) -> f64 {
    let chart = point.natural_chart();
    let t = taylor(&chart_coeffs(p, chart), point.coordinate(chart));
    let scale = t.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return f64::INFINITY;
    }
    t.iter().take(m).map(|c| c.norm()).fold(0.0, f64::max) / scale
}

/// The defect of [`multiplicity_defect`] measured against the group's own
/// leading term at the distance `d ≤ 1` to the nearest root outside the
/// group: `max_{k<m} |t_k| / (|t_m| d^{m−k})`. When all roots crowd into a
/// small region every low Taylor coefficient is small, so the plain relative
/// defect alone would merge distinct neighbours.
fn isolation_defect(p: &[Complex64], point: &Projective, m: usize, outside: impl Iterator<Item = Projective>) -> f64 {
    let chart = point.natural_chart();
    let c = point.coordinate(chart);
    let d = outside
        .map(|q| {
            if q.natural_chart() == chart || q.coordinate(chart).norm() <= 2.0 {
                (q.coordinate(chart) - c).norm()
            } else {
                1.0
            }
        })
        .fold(1.0, f64::min);
    let t = taylor(&chart_coeffs(p, chart), c);
    let lead = t.get(m).map_or(0.0, |z| z.norm());
    if lead == 0.0 || d == 0.0 {
        return f64::INFINITY;
    }
    (0..m)
        .map(|k| t[k].norm() / (lead * d.powi((m - k) as i32)))
        .fold(0.0, f64::max)
}

/// Largest group of items whose centroid is a root of matching multiplicity.
fn best_multiple_root(
    items: &[Item],
    p: &[Complex64],
    opts: &RootOptions,
) -> Option<(Vec<usize>, Projective)> {
    const MAX_RADIUS: f64 = 0.3;
    const ISOLATION_TOL: f64 = 1e-2;
    let mut best: Option<(usize, f64, Vec<usize>, Projective)> = None;
    for i in 0..items.len() {
        let mut others: Vec<usize> = (0..items.len()).filter(|&j| j != i).collect();
        others.sort_by(|&a, &b| {
            let da = items[i].point.chordal(&items[a].point);
            let db = items[i].point.chordal(&items[b].point);
            da.total_cmp(&db)
        });
        for j in (1..=others.len()).rev() {
            let radius = items[i].point.chordal(&items[others[j - 1]].point);
            if radius > MAX_RADIUS {
                continue;
            }
            let mut group = vec![i];
            group.extend_from_slice(&others[..j]);
            let count: usize = group.iter().map(|&g| items[g].count).sum();
            if let Some((best_count, best_radius, ..)) = &best {
                if count < *best_count || (count == *best_count && radius >= *best_radius) {
                    break;
                }
            }
            let c = centroid(items, &group, p, count);
            let outside = others[j..].iter().map(|&o| items[o].point);
            if multiplicity_defect(p, &c, count) <= opts.multiplicity_tol
                && isolation_defect(p, &c, count, outside) <= ISOLATION_TOL
            {
                group.sort_unstable();
                best = Some((count, radius, group, c));
                break;
            }
        }
    }
    best.map(|(_, _, g, c)| (g, c))
}
