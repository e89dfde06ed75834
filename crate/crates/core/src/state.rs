//! Permutation-symmetric and general pure states of `n` qubits.
//!
//! A [`SymmetricState`] stores the `n + 1` Dicke-basis coefficients `c_l`,
//! where `l` counts the qubits in `|1⟩`: `c_0` multiplies `|0…0⟩` and `c_n`
//! multiplies `|1…1⟩`. A [`FullState`] stores all `2^n` computational-basis
//! amplitudes with qubit 1 as the most significant bit.
//!
//! Both types are normalized on construction and carry a canonical global
//! phase: the first coefficient of non-negligible magnitude is real and
//! non-negative.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::math::{self, binomial, popcount, ONE, ZERO};

/// Largest qubit count for which dense `2^n` vectors are built.
pub const MAX_DENSE_QUBITS: usize = 12;

/// Largest qubit count accepted by [`symmetrize_brute_force`].
pub const MAX_BRUTE_FORCE_QUBITS: usize = 8;

/// Default tolerance for structural invariants (norms, Hermiticity).
pub const DEFAULT_TOL: f64 = 1e-9;

/// Magnitude below which a coefficient is skipped when fixing the phase.
const PHASE_THRESHOLD: f64 = 1e-12;

/// Single-qubit pure state `a|0⟩ + b|1⟩`, normalized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spinor {
    a: Complex64,
    b: Complex64,
}

impl Spinor {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            a: a / norm,
            b: b / norm,
        })
    }

    /// `cos(β/2) e^{−iα/2}|0⟩ + sin(β/2) e^{iα/2}|1⟩`.
    pub fn from_angles(alpha: f64, beta: f64) -> Self {
        Self {
            a: Complex64::from_polar((beta / 2.0).cos(), -alpha / 2.0),
            b: Complex64::from_polar((beta / 2.0).sin(), alpha / 2.0),
        }
    }

    pub fn zero() -> Self {
        Self { a: ONE, b: ZERO }
    }

    pub fn one() -> Self {
        Self { a: ZERO, b: ONE }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    /// Bloch-sphere orientation `(α, β)` with `α ∈ [0, 2π)`, `β ∈ [0, π]`.
    /// At the poles `α` is reported as zero.
    pub fn angles(&self) -> (f64, f64) {
        let beta = 2.0 * self.b.norm().atan2(self.a.norm());
        let alpha = if self.a.norm() < PHASE_THRESHOLD || self.b.norm() < PHASE_THRESHOLD {
            0.0
        } else {
            (self.b.arg() - self.a.arg()).rem_euclid(std::f64::consts::TAU)
        };
        (alpha, beta)
    }

    /// Representative with the first non-negligible component real and positive.
    pub fn canonical(&self) -> Self {
        let mut v = [self.a, self.b];
        math::canonicalize_phase(&mut v, PHASE_THRESHOLD);
        Self { a: v[0], b: v[1] }
    }

    /// Equality up to a global phase.
    pub fn approx_eq(&self, other: &Spinor, tol: f64) -> bool {
        math::phase_distance(&[self.a, self.b], &[other.a, other.b]) <= tol
    }

    /// `m · (a, b)ᵀ`, renormalized.
    pub fn transform(&self, m: &[[Complex64; 2]; 2]) -> Result<Self> {
        Self::new(
            m[0][0] * self.a + m[0][1] * self.b,
            m[1][0] * self.a + m[1][1] * self.b,
        )
    }
}

/// Common surface of the two pure-state representations.
pub trait PureState {
    fn num_qubits(&self) -> usize;

    fn to_full(&self) -> Result<FullState>;

    fn as_symmetric(&self) -> Option<&SymmetricState> {
        None
    }
}

/// `N`-qubit permutation-symmetric pure state in the Dicke basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricState {
    coeffs: Vec<Complex64>,
}

impl SymmetricState {
    /// Builds a state from `n + 1` coefficients, normalizing and fixing the phase.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidQubitCount {
                n: coeffs.len().saturating_sub(1),
                reason: "need at least one qubit",
            });
        }
        let norm = math::norm_sqr(&coeffs).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        for c in coeffs.iter_mut() {
            *c /= norm;
        }
        math::canonicalize_phase(&mut coeffs, PHASE_THRESHOLD);
        Ok(Self { coeffs })
    }

    /// Gaussian-random state (Haar-distributed on the symmetric subspace).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let coeffs = (0..=n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::new(coeffs)
    }

    pub fn n(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, l: usize) -> Complex64 {
        self.coeffs[l]
    }

    /// Phase-optimal Euclidean distance; infinite when qubit counts differ.
    pub fn distance(&self, other: &SymmetricState) -> f64 {
        if self.n() != other.n() {
            return f64::INFINITY;
        }
        math::phase_distance(&self.coeffs, &other.coeffs)
    }

    /// `|⟨self|other⟩|²`; zero when qubit counts differ.
    pub fn fidelity(&self, other: &SymmetricState) -> f64 {
        if self.n() != other.n() {
            return 0.0;
        }
        math::inner(&self.coeffs, &other.coeffs).norm_sqr()
    }
}

impl PureState for SymmetricState {
    fn num_qubits(&self) -> usize {
        self.n()
    }

    fn to_full(&self) -> Result<FullState> {
        expand_to_full(self)
    }

    fn as_symmetric(&self) -> Option<&SymmetricState> {
        Some(self)
    }
}

/// Dense `n`-qubit pure state; qubit 1 is the most significant bit of the index.
#[derive(Clone, Debug, PartialEq)]
pub struct FullState {
    n: usize,
    amps: Vec<Complex64>,
}

impl FullState {
    pub fn new(n: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidQubitCount {
                n,
                reason: "need at least one qubit",
            });
        }
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits {
                n,
                max: MAX_DENSE_QUBITS,
            });
        }
        if amps.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                actual: amps.len(),
            });
        }
        let norm = math::norm_sqr(&amps).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        for c in amps.iter_mut() {
            *c /= norm;
        }
        math::canonicalize_phase(&mut amps, PHASE_THRESHOLD);
        Ok(Self { n, amps })
    }

    /// Gaussian-random dense state.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits {
                n,
                max: MAX_DENSE_QUBITS,
            });
        }
        let amps = (0..1usize << n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::new(n, amps)
    }

    /// Product state `|ε_1⟩ ⊗ … ⊗ |ε_n⟩`.
    pub fn product(spinors: &[Spinor]) -> Result<Self> {
        let n = spinors.len();
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits {
                n,
                max: MAX_DENSE_QUBITS,
            });
        }
        Self::new(n, tensor_product(spinors))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    /// Applies a 2×2 matrix to qubit `qubit` (1-based) and renormalizes.
    pub fn apply_single_qubit(&self, qubit: usize, m: &[[Complex64; 2]; 2]) -> Result<Self> {
        if qubit == 0 || qubit > self.n {
            return Err(Error::IndexOutOfRange {
                index: qubit,
                max: self.n,
            });
        }
        let mut amps = self.amps.clone();
        apply_in_place(&mut amps, self.n, qubit, m);
        Self::new(self.n, amps)
    }

    /// Applies `m^{⊗n}` and renormalizes.
    pub fn apply_identical(&self, m: &[[Complex64; 2]; 2]) -> Result<Self> {
        let mut amps = self.amps.clone();
        for q in 1..=self.n {
            apply_in_place(&mut amps, self.n, q, m);
        }
        Self::new(self.n, amps)
    }

    pub fn distance(&self, other: &FullState) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        math::phase_distance(&self.amps, &other.amps)
    }

    pub fn fidelity(&self, other: &FullState) -> f64 {
        if self.n != other.n {
            return 0.0;
        }
        math::inner(&self.amps, &other.amps).norm_sqr()
    }
}

impl PureState for FullState {
    fn num_qubits(&self) -> usize {
        self.n
    }

    fn to_full(&self) -> Result<FullState> {
        Ok(self.clone())
    }
}

fn apply_in_place(amps: &mut [Complex64], n: usize, qubit: usize, m: &[[Complex64; 2]; 2]) {
    let bit = 1usize << (n - qubit);
    for i in 0..amps.len() {
        if i & bit == 0 {
            let (x, y) = (amps[i], amps[i | bit]);
            amps[i] = m[0][0] * x + m[0][1] * y;
            amps[i | bit] = m[1][0] * x + m[1][1] * y;
        }
    }
}

fn tensor_product(spinors: &[Spinor]) -> Vec<Complex64> {
    let mut out = vec![ONE];
    for s in spinors {
        let mut next = Vec::with_capacity(out.len() * 2);
        for &x in &out {
            next.push(x * s.a);
            next.push(x * s.b);
        }
        out = next;
    }
    out
}

/// Dicke state with `l` qubits in `|1⟩`.
pub fn dicke_state(n: usize, l: usize) -> Result<SymmetricState> {
    if n == 0 {
        return Err(Error::InvalidQubitCount {
            n,
            reason: "need at least one qubit",
        });
    }
    if l > n {
        return Err(Error::IndexOutOfRange { index: l, max: n });
    }
    let mut c = vec![ZERO; n + 1];
    c[l] = ONE;
    SymmetricState::new(c)
}

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz_state(n: usize) -> Result<SymmetricState> {
    if n < 2 {
        return Err(Error::InvalidQubitCount {
            n,
            reason: "GHZ needs at least two qubits",
        });
    }
    let mut c = vec![ZERO; n + 1];
    c[0] = ONE;
    c[n] = ONE;
    SymmetricState::new(c)
}

/// Dense qubit-basis form: each weight-`l` bitstring carries `c_l / √C(n, l)`.
pub fn expand_to_full(s: &SymmetricState) -> Result<FullState> {
    let n = s.n();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits {
            n,
            max: MAX_DENSE_QUBITS,
        });
    }
    let scale: Vec<f64> = (0..=n).map(|l| binomial(n, l).sqrt().recip()).collect();
    let amps = (0..1usize << n)
        .map(|x| {
            let l = popcount(x);
            s.coeffs[l] * scale[l]
        })
        .collect();
    FullState::new(n, amps)
}

/// Orthogonal projection onto the symmetric subspace.
///
/// Returns the renormalized symmetric part and the norm of the discarded
/// non-symmetric component (relative to the input norm).
pub fn project_to_symmetric(f: &FullState) -> Result<(SymmetricState, f64)> {
    let n = f.n;
    let mut c = vec![ZERO; n + 1];
    for (x, amp) in f.amps.iter().enumerate() {
        c[popcount(x)] += amp;
    }
    for (l, cl) in c.iter_mut().enumerate() {
        *cl /= binomial(n, l).sqrt();
    }
    let total = math::norm_sqr(&f.amps);
    let kept = math::norm_sqr(&c);
    if kept <= 1e-20 * total {
        return Err(Error::NoSymmetricComponent);
    }
    // Norm of the discarded part, summed directly to avoid cancellation.
    let discarded: f64 = f
        .amps
        .iter()
        .enumerate()
        .map(|(x, amp)| {
            let l = popcount(x);
            (amp - c[l] / binomial(n, l).sqrt()).norm_sqr()
        })
        .sum();
    let residual = (discarded / total).sqrt();
    Ok((SymmetricState::new(c)?, residual))
}

/// `⟨x|y⟩`. Symmetric pairs are contracted in the Dicke basis; anything
/// else goes through the dense expansion.
pub fn overlap<A, B>(x: &A, y: &B) -> Result<Complex64>
where
    A: PureState + ?Sized,
    B: PureState + ?Sized,
{
    if x.num_qubits() != y.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: x.num_qubits(),
            actual: y.num_qubits(),
        });
    }
    if let (Some(a), Some(b)) = (x.as_symmetric(), y.as_symmetric()) {
        return Ok(math::inner(&a.coeffs, &b.coeffs));
    }
    let (a, b) = (x.to_full()?, y.to_full()?);
    Ok(math::inner(&a.amps, &b.amps))
}

/// Normalized symmetrization `𝒩 Σ_P P̂ |ε_1 … ε_N⟩`.
///
/// Computed from the elementary symmetric functions of the spinor
/// components: the Dicke coefficient `c_l` is proportional to the
/// coefficient of `t^l` in `∏ (a_i + b_i t)` divided by `√C(N, l)`.
pub fn symmetrize(spinors: &[Spinor]) -> Result<SymmetricState> {
    let n = spinors.len();
    if n == 0 {
        return Err(Error::InvalidQubitCount {
            n,
            reason: "need at least one spinor",
        });
    }
    let mut e = vec![ONE];
    for s in spinors {
        let mut next = vec![ZERO; e.len() + 1];
        for (l, &v) in e.iter().enumerate() {
            next[l] += v * s.a;
            next[l + 1] += v * s.b;
        }
        e = next;
    }
    let c = e
        .into_iter()
        .enumerate()
        .map(|(l, v)| v / binomial(n, l).sqrt())
        .collect();
    SymmetricState::new(c)
}

/// Literal sum over all `N!` orderings of the spinors, in the qubit basis.
pub fn symmetrize_brute_force(spinors: &[Spinor]) -> Result<FullState> {
    let n = spinors.len();
    if n == 0 {
        return Err(Error::InvalidQubitCount {
            n,
            reason: "need at least one spinor",
        });
    }
    if n > MAX_BRUTE_FORCE_QUBITS {
        return Err(Error::TooManyQubits {
            n,
            max: MAX_BRUTE_FORCE_QUBITS,
        });
    }
    let mut acc = vec![ZERO; 1 << n];
    let mut order: Vec<Spinor> = spinors.to_vec();
    let mut stack = vec![0usize; n];
    let mut add = |order: &[Spinor]| {
        for (dst, v) in acc.iter_mut().zip(tensor_product(order)) {
            *dst += v;
        }
    };
    // Heap's algorithm
    add(&order);
    let mut i = 0;
    while i < n {
        if stack[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(stack[i], i);
            }
            add(&order);
            stack[i] += 1;
            i = 0;
        } else {
            stack[i] = 0;
            i += 1;
        }
    }
    FullState::new(n, acc)
}
