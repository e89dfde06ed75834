//! Reduced density matrices, two- and three-qubit entanglement witnesses,
//! the two-spinor family `D_{N−k,k}` with its non-symmetric generalization,
//! and reconstruction of a pure state from two of its `(N−1)`-qubit marginals.
//!
//! Qubits are numbered from 1, with qubit 1 the most significant bit of a
//! computational index. A marginal over an ordered `keep` list is written in
//! the computational basis of those qubits in the listed order.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::density::{hermitian_eigen, Basis, DensityMatrix};
use crate::error::{Error, Result};
use crate::math::{self, binomial, popcount, ONE, ZERO};
use crate::optim::{self, BfgsOptions, LevenbergMarquardtOptions};
use crate::parallel;
use crate::state::{FullState, PureState, SymmetricState, MAX_DENSE_QUBITS};

/// Fidelity below which two fitted states count as different solutions.
pub const DISTINCT_FIDELITY: f64 = 1.0 - 1e-6;

/// Reduced state of `k` of the qubits of a symmetric state, in the Dicke
/// basis of the retained qubits.
pub fn rdm_symmetric(s: &SymmetricState, k: usize) -> Result<DensityMatrix> {
    let n = s.n();
    if k == 0 || k >= n {
        return Err(Error::IndexOutOfRange {
            index: k,
            max: n.saturating_sub(1),
        });
    }
    let rest = n - k;
    // |N,l⟩ = Σ_j w(j, l−j) |k,j⟩|N−k,l−j⟩ with w² = C(k,j)C(N−k,m)/C(N,l).
    let w = |j: usize, m: usize| (binomial(k, j) * binomial(rest, m) / binomial(n, j + m)).sqrt();
    let c = s.coeffs();
    let entries = DMatrix::from_fn(k + 1, k + 1, |j, jp| {
        (0..=rest)
            .map(|m| c[j + m] * c[jp + m].conj() * (w(j, m) * w(jp, m)))
            .sum()
    });
    DensityMatrix::new(Basis::Symmetric { k }, entries, 1e-9)
}

/// Splits each computational index into its `keep` part (in `keep` order)
/// and the traced part (remaining qubits in ascending order).
fn split_indices(n: usize, keep: &[usize]) -> Result<Vec<(usize, usize)>> {
    if keep.is_empty() {
        return Err(Error::InvalidParameter("empty qubit subset".into()));
    }
    let mut seen = vec![false; n + 1];
    for &q in keep {
        if q == 0 || q > n {
            return Err(Error::IndexOutOfRange { index: q, max: n });
        }
        if seen[q] {
            return Err(Error::InvalidParameter(format!("qubit {q} listed twice")));
        }
        seen[q] = true;
    }
    let traced: Vec<usize> = (1..=n).filter(|&q| !seen[q]).collect();
    let bit = |x: usize, q: usize| (x >> (n - q)) & 1;
    Ok((0..1usize << n)
        .map(|x| {
            let a = keep.iter().fold(0, |acc, &q| (acc << 1) | bit(x, q));
            let b = traced.iter().fold(0, |acc, &q| (acc << 1) | bit(x, q));
            (a, b)
        })
        .collect())
}

/// `Ψ[a, b] = ψ[x]` for the split `(a, b)` of every index `x`.
fn reshape(amps: &[Complex64], split: &[(usize, usize)], k: usize, n: usize) -> DMatrix<Complex64> {
    let mut psi = DMatrix::from_element(1 << k, 1 << (n - k), ZERO);
    for (x, &(a, b)) in split.iter().enumerate() {
        psi[(a, b)] = amps[x];
    }
    psi
}

/// Partial trace of `|f⟩⟨f|` onto the ordered qubit list `keep`.
pub fn rdm_full(f: &FullState, keep: &[usize]) -> Result<DensityMatrix> {
    let n = f.n();
    let split = split_indices(n, keep)?;
    let psi = reshape(f.amplitudes(), &split, keep.len(), n);
    DensityMatrix::new(Basis::Computational { k: keep.len() }, &psi * psi.adjoint(), 1e-9)
}

/// Hermitian square root of a PSD matrix; eigenvalues below `-tol` are an error.
fn psd_sqrt(m: &DMatrix<Complex64>, tol: f64) -> Result<DMatrix<Complex64>> {
    let (values, vectors) = hermitian_eigen(m);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -tol {
        return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:.3e}")));
    }
    // Eigenvalues at rounding level are zeros; their square roots would not be.
    let floor = 1e-14 * values.iter().copied().fold(0.0, f64::max);
    let roots = DMatrix::from_diagonal(&values.map(|v| Complex64::new(if v > floor { v.sqrt() } else { 0.0 }, 0.0)));
    Ok(&vectors * roots * vectors.adjoint())
}

/// Wootters concurrence of a two-qubit density matrix.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.k() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: rho.k(),
        });
    }
    let m = rho.to_computational().entries().clone();
    // σ_y ⊗ σ_y is the anti-diagonal (-1, 1, 1, -1) up to sign conventions
    // that cancel in ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y).
    let flip = DMatrix::from_fn(4, 4, |i, j| {
        if i + j == 3 {
            Complex64::new(if i == 0 || i == 3 { -1.0 } else { 1.0 }, 0.0)
        } else {
            ZERO
        }
    });
    // √ρ ρ̃ √ρ = A A† with A = √ρ (σ_y⊗σ_y) √ρ*, so the λ_i are the
    // singular values of A.
    let root = psd_sqrt(&m, 1e-9)?;
    let a = &root * &flip * root.conjugate();
    let mut lambdas: Vec<f64> = a.singular_values().iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}

/// Three-tangle `4|Det|` from Cayley's hyperdeterminant of the amplitudes.
pub fn three_tangle<S: PureState + ?Sized>(s: &S) -> Result<f64> {
    if s.num_qubits() != 3 {
        return Err(Error::InvalidQubitCount {
            n: s.num_qubits(),
            reason: "the three-tangle needs exactly three qubits",
        });
    }
    let f = s.to_full()?;
    let a = |i: usize| f.amplitude(i);
    let (a000, a001, a010, a011) = (a(0), a(1), a(2), a(3));
    let (a100, a101, a110, a111) = (a(4), a(5), a(6), a(7));
    let d1 = a000 * a000 * a111 * a111
        + a001 * a001 * a110 * a110
        + a010 * a010 * a101 * a101
        + a100 * a100 * a011 * a011;
    let d2 = a000 * a111 * a011 * a100
        + a000 * a111 * a101 * a010
        + a000 * a111 * a110 * a001
        + a011 * a100 * a101 * a010
        + a011 * a100 * a110 * a001
        + a101 * a010 * a110 * a001;
    let d3 = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100;
    Ok((4.0 * (d1 - 2.0 * d2 + 4.0 * d3).norm()).min(1.0))
}

/// Representative of the family with two distinct points: `N − k` copies of
/// `|0⟩` symmetrized with `k` copies of `d0|0⟩ + d1|1⟩`. The amplitude of
/// every weight-`r` bitstring is `α_r = (N−r)!/((N−k)!(k−r)!) d0^{k−r} d1^r`
/// for `r ≤ k`. The spinor is normalized internally.
pub fn dnk_state(n: usize, k: usize, d0: Complex64, d1: Complex64) -> Result<SymmetricState> {
    if k == 0 || k > n / 2 {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..={}", n / 2)));
    }
    let norm = (d0.norm_sqr() + d1.norm_sqr()).sqrt();
    if !norm.is_finite() || d1.norm() <= 1e-12 * norm {
        return Err(Error::InvalidParameter("d1 must be nonzero".into()));
    }
    let (d0, d1) = (d0 / norm, d1 / norm);
    let coeffs = (0..=n)
        .map(|r| {
            if r > k {
                return ZERO;
            }
            let alpha = binomial(n - r, k - r) * d0.powu((k - r) as u32) * d1.powu(r as u32);
            alpha * binomial(n, r).sqrt()
        })
        .collect();
    SymmetricState::new(coeffs)
}

/// Weight-`r` bitstrings of `n` qubits in descending integer order, with
/// those ending in `|0⟩` (qubit `n`) ahead of those ending in `|1⟩`. The
/// first `C(n−1, r)` entries are the former.
pub fn dicke_bitstrings(n: usize, r: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..1usize << n).rev().filter(|&x| popcount(x) == r).collect();
    all.sort_by_key(|x| x & 1);
    all
}

/// Superposition of generalized Dicke states: amplitude `alphas[r] · a[r][i]`
/// on the `i`-th bitstring of [`dicke_bitstrings`]`(n, r)`, normalized.
pub fn generalized_dicke_state(
    n: usize,
    k: usize,
    alphas: &[Complex64],
    a: &[Vec<Complex64>],
) -> Result<FullState> {
    if n == 0 || n > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits {
            n,
            max: MAX_DENSE_QUBITS,
        });
    }
    if k > n {
        return Err(Error::IndexOutOfRange { index: k, max: n });
    }
    if alphas.len() != k + 1 || a.len() != k + 1 {
        return Err(Error::DimensionMismatch {
            expected: k + 1,
            actual: alphas.len().min(a.len()),
        });
    }
    let mut amps = vec![ZERO; 1 << n];
    for r in 0..=k {
        let strings = dicke_bitstrings(n, r);
        if a[r].len() != strings.len() {
            return Err(Error::DimensionMismatch {
                expected: strings.len(),
                actual: a[r].len(),
            });
        }
        for (&x, &coef) in strings.iter().zip(&a[r]) {
            amps[x] = alphas[r] * coef;
        }
    }
    FullState::new(n, amps)
}

/// The two sufficient conditions for a generalized Dicke superposition to be
/// fixed by its marginals over qubits `1..N−1` and `2..N`: among the
/// weight-`k` coefficients, some nonzero one on a bitstring with qubit 1 in
/// `|0⟩` exists in the block ending in `|0⟩`, and likewise in the block
/// ending in `|1⟩`.
pub fn uniqueness_conditions(n: usize, k: usize, a: &[Vec<Complex64>]) -> bool {
    let Some(top) = a.get(k) else {
        return false;
    };
    if n == 0 || k > n {
        return false;
    }
    let strings = dicke_bitstrings(n, k);
    if top.len() != strings.len() {
        return false;
    }
    let first_block = binomial(n - 1, k) as usize;
    let first_qubit_zero = |x: usize| (x >> (n - 1)) & 1 == 0;
    let hit = |range: std::ops::Range<usize>| {
        range.into_iter().any(|i| top[i] != ZERO && first_qubit_zero(strings[i]))
    };
    hit(0..first_block) && hit(first_block..strings.len())
}

/// The four-qubit pair `(|0000⟩ + |0001⟩ ± |1111⟩)/√3`. They share their
/// marginals over qubits `{2,3,4}`, `{1,3,4}` and `{1,2,4}` but not `{1,2,3}`.
pub fn chi_states() -> (FullState, FullState) {
    let build = |sign: f64| {
        let mut amps = vec![ZERO; 16];
        amps[0] = ONE;
        amps[1] = ONE;
        amps[15] = Complex64::new(sign, 0.0);
        FullState::new(4, amps).expect("nonzero")
    };
    (build(1.0), build(-1.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReconstructOptions {
    /// Largest Frobenius residual accepted for a fit.
    pub tol: f64,
    /// Eigenvalue threshold for the rank of the first marginal.
    pub rank_tol: f64,
    pub restarts: usize,
    pub seed: u64,
    pub parallel: bool,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            rank_tol: 1e-9,
            restarts: 16,
            seed: 0,
            parallel: false,
        }
    }
}

/// Outcome of [`reconstruct_from_two_marginals`].
#[derive(Clone, Debug, PartialEq)]
pub enum Reconstruction {
    Unique(FullState),
    /// Inequivalent states reproducing both marginals, best fit first.
    Ambiguous(Vec<FullState>),
}

impl Reconstruction {
    pub fn is_ambiguous(&self) -> bool {
        matches!(self, Reconstruction::Ambiguous(_))
    }

    pub fn unique(&self) -> Option<&FullState> {
        match self {
            Reconstruction::Unique(f) => Some(f),
            Reconstruction::Ambiguous(_) => None,
        }
    }
}

/// Recovers an `N`-qubit pure state from its marginals over qubits
/// `1..N−1` (`rho_a`) and `2..N` (`rho_b`).
///
/// `rho_a` must have rank at most two, so every purification is
/// `Σ_i √λ_i |e_i⟩|u_i⟩` with `{u_i}` an orthonormal basis of qubit `N`.
/// The basis is an `SU(2)` element up to a global phase; it is fitted by
/// multistart Levenberg–Marquardt on `‖ρ_{2..N}(ψ) − rho_b‖_F`.
pub fn reconstruct_from_two_marginals(
    rho_a: &DensityMatrix,
    rho_b: &DensityMatrix,
    opts: &ReconstructOptions,
) -> Result<Reconstruction> {
    if rho_a.k() != rho_b.k() {
        return Err(Error::DimensionMismatch {
            expected: rho_a.k(),
            actual: rho_b.k(),
        });
    }
    let n = rho_a.k() + 1;
    if n > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits {
            n,
            max: MAX_DENSE_QUBITS,
        });
    }
    let (values, vectors) = rho_a.to_computational().eigen();
    let rank = values.iter().filter(|&&v| v > opts.rank_tol).count();
    if rank > 2 {
        return Err(Error::RankTooLarge { rank });
    }
    let target = rho_b.to_computational().entries().clone();
    let dim_a = 1usize << (n - 1);
    let weighted: Vec<Vec<Complex64>> = (0..2)
        .map(|i| {
            let w = values.get(i).copied().unwrap_or(0.0).max(0.0).sqrt();
            (0..dim_a).map(|x| vectors[(x, i)] * w).collect()
        })
        .collect();
    let keep_b: Vec<usize> = (2..=n).collect();
    let split_b = split_indices(n, &keep_b)?;

    let gauge = |p: &[f64]| -> [[Complex64; 2]; 2] {
        let (t, p1, p2) = (p[0], p[1], p[2]);
        [
            [Complex64::from_polar(t.cos(), p1), Complex64::from_polar(t.sin(), p2)],
            [-Complex64::from_polar(t.sin(), -p2), Complex64::from_polar(t.cos(), -p1)],
        ]
    };
    let state_of = |p: &[f64]| -> Vec<Complex64> {
        let u = gauge(p);
        let mut psi = vec![ZERO; 1 << n];
        for x in 0..dim_a {
            for a in 0..2 {
                psi[2 * x + a] = weighted[0][x] * u[0][a] + weighted[1][x] * u[1][a];
            }
        }
        psi
    };
    let full_residual = |p: &[f64]| -> f64 {
        let m = reshape(&state_of(p), &split_b, n - 1, n);
        (&m * m.adjoint() - &target).norm()
    };

    // With qubit 1 in |b⟩, the purification restricted to qubits 2..N is
    // Σ_i e_i^b ⊗ u_i, so ρ_B(ψ) lives on span{e_i^b} ⊗ C². Fitting the
    // compression of the target to that space has the same minimizers.
    let half = dim_a / 2;
    let pieces: Vec<Vec<Complex64>> = (0..2)
        .flat_map(|b| (0..2).map(move |i| (b, i)))
        .map(|(b, i)| weighted[i][b * half..(b + 1) * half].to_vec())
        .collect();
    let basis = orthonormal_basis(&pieces, 1e-12);
    let r = basis.len();
    // coords[b][i][q] = ⟨basis_q | e_i^b⟩
    let coords: Vec<Vec<Vec<Complex64>>> = (0..2)
        .map(|b| {
            (0..2)
                .map(|i| basis.iter().map(|q| math::inner(q, &pieces[2 * b + i])).collect())
                .collect()
        })
        .collect();
    let lift = DMatrix::from_fn(2 * half, 2 * r, |row, col| {
        if row % 2 == col % 2 {
            basis[col / 2][row / 2]
        } else {
            ZERO
        }
    });
    let target_small = lift.adjoint() * &target * &lift;
    let residual = |p: &[f64]| -> Vec<f64> {
        let u = gauge(p);
        let mut rho = DMatrix::from_element(2 * r, 2 * r, ZERO);
        for block in &coords {
            let v = DVector::from_fn(2 * r, |k, _| block[0][k / 2] * u[0][k % 2] + block[1][k / 2] * u[1][k % 2]);
            rho += &v * v.adjoint();
        }
        let diff = rho - &target_small;
        let dim = diff.nrows();
        let mut out = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            out.push(diff[(i, i)].re);
            for j in i + 1..dim {
                // Off-diagonal pairs enter the Frobenius norm twice.
                out.push(diff[(i, j)].re * std::f64::consts::SQRT_2);
                out.push(diff[(i, j)].im * std::f64::consts::SQRT_2);
            }
        }
        out
    };

    let starts: Vec<[f64; 3]> = {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut v = vec![[0.0; 3]];
        while v.len() < opts.restarts.max(1) {
            v.push([
                rng.random_range(0.0..std::f64::consts::FRAC_PI_2),
                rng.random_range(0.0..std::f64::consts::TAU),
                rng.random_range(0.0..std::f64::consts::TAU),
            ]);
        }
        v
    };
    let lm = LevenbergMarquardtOptions::default();
    let fits = parallel::map(&starts, opts.parallel, |x0| optim::levenberg_marquardt(residual, x0, &lm));

    let mut accepted: Vec<(f64, FullState)> = Vec::new();
    let mut best = f64::INFINITY;
    for fit in &fits {
        let value = full_residual(&fit.x);
        best = best.min(value);
        if value < opts.tol {
            accepted.push((value, FullState::new(n, state_of(&fit.x))?));
        }
    }
    if accepted.is_empty() {
        return Err(Error::InconsistentMarginals {
            residual: best,
            tol: opts.tol,
        });
    }
    let mut classes = distinct_by_fidelity(accepted);
    if classes.len() == 1 {
        Ok(Reconstruction::Unique(classes.remove(0).1))
    } else {
        Ok(Reconstruction::Ambiguous(classes.into_iter().map(|(_, f)| f).collect()))
    }
}

/// Orthonormal basis of the span of `vectors` by twice-iterated modified
/// Gram–Schmidt; directions whose remainder falls below `rel_tol` times the
/// largest input norm are dropped.
fn orthonormal_basis(vectors: &[Vec<Complex64>], rel_tol: f64) -> Vec<Vec<Complex64>> {
    let scale = vectors.iter().map(|v| math::norm_sqr(v).sqrt()).fold(0.0, f64::max);
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = math::inner(q, &w);
                for (x, y) in w.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
        }
        let norm = math::norm_sqr(&w).sqrt();
        if norm > rel_tol * scale {
            basis.push(w.into_iter().map(|x| x / norm).collect());
        }
    }
    basis
}

/// Sorts by residual and keeps one representative per fidelity class.
fn distinct_by_fidelity(mut found: Vec<(f64, FullState)>) -> Vec<(f64, FullState)> {
    found.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, FullState)> = Vec::new();
    for (r, f) in found {
        if out.iter().all(|(_, g)| g.fidelity(&f) < DISTINCT_FIDELITY) {
            out.push((r, f));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    /// Largest residual `(Σ ‖ρ_t − T_t‖²_F)^{1/2}` reported as a match.
    pub tol: f64,
    pub restarts: usize,
    pub seed: u64,
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            restarts: 16,
            seed: 0,
            parallel: false,
        }
    }
}

/// A state found by [`marginal_match_search`].
#[derive(Clone, Debug, PartialEq)]
pub struct SearchMatch {
    pub state: FullState,
    pub residual: f64,
}

/// Largest qubit count accepted by [`marginal_match_search`].
pub const MAX_SEARCH_QUBITS: usize = 8;

/// Looks for `n`-qubit pure states whose marginals over each `keep` list
/// match the targets. Each restart minimizes `Σ ‖ρ_t(ψ) − T_t‖²_F` by BFGS
/// from a Gaussian-random start; matches are deduplicated by fidelity and
/// sorted by residual. An empty list is a valid answer.
pub fn marginal_match_search(
    targets: &[(Vec<usize>, DensityMatrix)],
    n: usize,
    opts: &SearchOptions,
) -> Result<Vec<SearchMatch>> {
    if n == 0 || n > MAX_SEARCH_QUBITS {
        return Err(Error::TooManyQubits {
            n,
            max: MAX_SEARCH_QUBITS,
        });
    }
    let mut prepared = Vec::with_capacity(targets.len());
    for (keep, rho) in targets {
        if rho.k() != keep.len() {
            return Err(Error::DimensionMismatch {
                expected: keep.len(),
                actual: rho.k(),
            });
        }
        prepared.push((split_indices(n, keep)?, keep.len(), rho.to_computational().entries().clone()));
    }
    let dim = 1usize << n;

    let objective = |x: &[f64]| -> (f64, Vec<f64>) {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let psi: Vec<Complex64> = (0..dim).map(|i| Complex64::new(x[2 * i], x[2 * i + 1]) / norm).collect();
        let mut value = 0.0;
        let mut g = vec![ZERO; dim];
        for (split, k, target) in &prepared {
            let m = reshape(&psi, split, *k, n);
            let diff = &m * m.adjoint() - target;
            value += diff.norm_squared();
            let dm = &diff * &m;
            for (xi, &(a, b)) in split.iter().enumerate() {
                g[xi] += dm[(a, b)] * 4.0;
            }
        }
        let radial: f64 = psi.iter().zip(&g).map(|(p, q)| (p.conj() * q).re).sum();
        let mut grad = vec![0.0; 2 * dim];
        for i in 0..dim {
            let gi = (g[i] - psi[i] * radial) / norm;
            grad[2 * i] = gi.re;
            grad[2 * i + 1] = gi.im;
        }
        (value, grad)
    };

    let starts: Vec<Vec<f64>> = {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        (0..opts.restarts.max(1))
            .map(|_| (0..2 * dim).map(|_| rng.sample(StandardNormal)).collect())
            .collect()
    };
    let bfgs = BfgsOptions {
        max_iter: 5000,
        gtol: 1e-14,
        ftarget: 1e-28,
    };
    let runs = parallel::map(&starts, opts.parallel, |x0| optim::bfgs(objective, x0, &bfgs));

    let mut found = Vec::new();
    for run in runs {
        let residual = run.value.max(0.0).sqrt();
        if residual < opts.tol {
            let amps = (0..dim).map(|i| Complex64::new(run.x[2 * i], run.x[2 * i + 1])).collect();
            found.push((residual, FullState::new(n, amps)?));
        }
    }
    Ok(distinct_by_fidelity(found)
        .into_iter()
        .map(|(residual, state)| SearchMatch { state, residual })
        .collect())
}
