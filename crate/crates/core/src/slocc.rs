//! Entanglement families under identical invertible local operations.
//!
//! Symmetric states related by `A^{⊗N}` for an invertible 2×2 `A` have
//! constellations related by the Möbius map of `A`, which preserves the
//! number of distinct points and their multiplicities. The sorted
//! multiplicity list (the degeneracy configuration) therefore labels a
//! family of states. For four or more distinct points a family contains a
//! continuum of inequivalent classes, so equal configurations are necessary
//! but not sufficient for equivalence.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::majorana::{majorana_points, state_from_constellation};
use crate::math::{ONE, ZERO};
use crate::parallel;
use crate::state::SymmetricState;
use crate::Mat2;

/// Condition number above which an operation result is flagged.
pub const ILL_CONDITIONED_THRESHOLD: f64 = 1e8;

/// Sorted multiplicities `n_1 ≥ n_2 ≥ … ≥ n_d` of distinct Majorana points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegeneracyConfiguration {
    mults: Vec<usize>,
    diversity: usize,
}

impl DegeneracyConfiguration {
    /// Sorts the multiplicities; zeros are dropped.
    pub fn new(mut mults: Vec<usize>) -> Result<Self> {
        mults.retain(|&m| m > 0);
        if mults.is_empty() {
            return Err(Error::InvalidParameter("empty degeneracy configuration".into()));
        }
        mults.sort_unstable_by(|a, b| b.cmp(a));
        let diversity = mults.len();
        Ok(Self { mults, diversity })
    }

    pub fn mults(&self) -> &[usize] {
        &self.mults
    }

    /// Number of distinct points.
    pub fn diversity(&self) -> usize {
        self.diversity
    }

    pub fn n(&self) -> usize {
        self.mults.iter().sum()
    }

    /// `D_{n1,n2,...}`.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.mults.iter().map(|m| m.to_string()).collect();
        format!("D_{{{}}}", parts.join(","))
    }
}

impl fmt::Display for DegeneracyConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Invertible 2×2 operation applied identically to every qubit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalOperation {
    m: Mat2,
    condition_number: f64,
}

impl LocalOperation {
    /// Rejects matrices whose determinant is zero relative to their scale.
    pub fn new(m: Mat2) -> Result<Self> {
        let scale = m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>();
        let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).norm();
        if !(scale.is_finite() && det.is_finite()) || det <= 1e-300 || det <= f64::EPSILON * scale * 1e-2 {
            return Err(Error::SingularOperation { det });
        }
        // Singular values of a 2×2 matrix: σ1² + σ2² = ‖m‖_F², σ1 σ2 = |det|.
        let disc = (scale * scale - 4.0 * det * det).max(0.0).sqrt();
        let s1 = ((scale + disc) / 2.0).sqrt();
        let s2 = det / s1;
        Ok(Self {
            m,
            condition_number: s1 / s2,
        })
    }

    pub fn identity() -> Self {
        Self::new([[ONE, ZERO], [ZERO, ONE]]).expect("identity is invertible")
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    pub fn determinant(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Ratio of the larger to the smaller singular value.
    pub fn condition_number(&self) -> f64 {
        self.condition_number
    }

    pub fn is_ill_conditioned(&self) -> bool {
        self.condition_number > ILL_CONDITIONED_THRESHOLD
    }

    pub fn inverse(&self) -> Self {
        let det = self.determinant();
        let m = &self.m;
        Self::new([[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]])
            .expect("inverse of an invertible matrix")
    }
}

/// Output of [`apply_ilo`].
#[derive(Clone, Debug, PartialEq)]
pub struct IloResult {
    pub state: SymmetricState,
    pub condition_number: f64,
    /// Set when the condition number exceeds [`ILL_CONDITIONED_THRESHOLD`].
    pub ill_conditioned: bool,
}

/// Degeneracy configuration of the constellation at clustering tolerance `tol`.
pub fn classify(s: &SymmetricState, tol: f64) -> DegeneracyConfiguration {
    DegeneracyConfiguration::new(majorana_points(s, tol).multiplicities())
        .expect("constellations are nonempty")
}

/// [`classify`] over a batch.
pub fn classify_batch(states: &[SymmetricState], tol: f64, parallel: bool) -> Vec<DegeneracyConfiguration> {
    parallel::map(states, parallel, |s| classify(s, tol))
}

/// Clustering tolerance used by [`apply_ilo`].
pub const ILO_CLUSTER_TOL: f64 = 1e-6;

/// `A^{⊗N} |s⟩`, renormalized: every constellation point moves by the
/// Möbius map of `A` and the state is rebuilt from the moved points.
///
/// Points are first clustered at [`ILO_CLUSTER_TOL`], so multiple points stay
/// exactly multiple. Expanding `A^{⊗N}` on the coefficients directly would
/// lose about `κ(A)^N` in relative accuracy and split them.
pub fn apply_ilo(s: &SymmetricState, a: &LocalOperation) -> Result<IloResult> {
    apply_ilo_with(s, a, ILO_CLUSTER_TOL)
}

/// [`apply_ilo`] with an explicit clustering tolerance.
pub fn apply_ilo_with(s: &SymmetricState, a: &LocalOperation, cluster_tol: f64) -> Result<IloResult> {
    let moved = majorana_points(s, cluster_tol).transform(a.matrix())?;
    Ok(IloResult {
        state: state_from_constellation(&moved)?,
        condition_number: a.condition_number(),
        ill_conditioned: a.is_ill_conditioned(),
    })
}

/// Whether the two states have the same degeneracy configuration.
pub fn same_family(s1: &SymmetricState, s2: &SymmetricState, tol: f64) -> Result<bool> {
    if s1.n() != s2.n() {
        return Err(Error::DimensionMismatch {
            expected: s1.n(),
            actual: s2.n(),
        });
    }
    Ok(classify(s1, tol) == classify(s2, tol))
}

/// Every degeneracy configuration for `n` qubits (the partitions of `n`),
/// in reverse lexicographic order starting from `{n}`.
pub fn family_configurations(n: usize) -> Vec<DegeneracyConfiguration> {
    fn rec(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=remaining.min(max)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, n, &mut Vec::new(), &mut out);
    }
    out.into_iter()
        .map(|m| DegeneracyConfiguration::new(m).expect("nonempty partition"))
        .collect()
}

/// `(W + W̄)/√2 = (|3/2,1/2⟩ + |3/2,−1/2⟩)/√2`, the three-qubit state that
/// [`ghz_ilo`] carries to GHZ.
pub fn eta_state() -> SymmetricState {
    SymmetricState::new(vec![ZERO, ONE, ONE, ZERO]).expect("nonzero")
}

/// `[[1, ω], [1, ω²]]` with `ω = e^{2πi/3}`.
pub fn ghz_ilo() -> LocalOperation {
    let w = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
    LocalOperation::new([[ONE, w], [ONE, w * w]]).expect("invertible")
}
