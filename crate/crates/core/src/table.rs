//! Reference constellations of two- and three-qubit symmetric states.
//!
//! Each row lists a state in the Dicke basis together with its expected
//! Majorana polynomial, constellation (as spinor ratios `b/a`), spinors and
//! qubit-basis expansion. [`check_table`] recomputes every column and reports
//! the worst deviation per row.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::majorana::{majorana_points, majorana_polynomial, matching_distance, ProjectiveRoot};
use crate::math::{phase_distance, ONE, ZERO};
use crate::state::{expand_to_full, symmetrize, FullState, Spinor, SymmetricState};

#[derive(Clone, Debug)]
pub struct TableRow {
    pub label: &'static str,
    pub state: SymmetricState,
    /// `p_0, …, p_N` up to a common factor.
    pub polynomial: Vec<Complex64>,
    /// Constellation points repeated by multiplicity.
    pub roots: Vec<ProjectiveRoot>,
    pub spinors: Vec<Spinor>,
    pub expansion: FullState,
}

/// Deviations of one recomputed row from its reference.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowCheck {
    pub label: &'static str,
    pub polynomial_error: f64,
    pub root_error: f64,
    pub multiplicities_match: bool,
    pub spinor_error: f64,
    pub expansion_error: f64,
}

impl RowCheck {
    pub fn worst(&self) -> f64 {
        self.polynomial_error
            .max(self.root_error)
            .max(self.spinor_error)
            .max(self.expansion_error)
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.multiplicities_match && self.worst() <= tol
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn r(x: f64) -> Complex64 {
    c(x, 0.0)
}

fn spinor(a: Complex64, b: Complex64) -> Spinor {
    Spinor::new(a, b).expect("reference spinors are nonzero")
}

fn sym(coeffs: &[Complex64]) -> SymmetricState {
    SymmetricState::new(coeffs.to_vec()).expect("reference states are nonzero")
}

/// Dense state with amplitude `amp` on each listed bitstring (qubit 1 first).
fn dense(n: usize, terms: &[(&str, f64)]) -> FullState {
    let mut amps = vec![ZERO; 1 << n];
    for &(bits, amp) in terms {
        amps[usize::from_str_radix(bits, 2).expect("binary literal")] += amp;
    }
    FullState::new(n, amps).expect("reference expansions are nonzero")
}

fn unit_circle(k: f64, parts: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k / parts)
}

/// The reference rows. The mixed row `(|3/2,1/2⟩ ± |3/2,−1/2⟩)/√2` appears
/// once per sign.
pub fn table_rows() -> Vec<TableRow> {
    let h = FRAC_1_SQRT_2;
    let s6 = 1.0 / 6f64.sqrt();
    let s3 = 1.0 / 3f64.sqrt();
    let zero = ProjectiveRoot::finite(ZERO);
    let inf = ProjectiveRoot::infinity();

    let mut rows = vec![
        TableRow {
            label: "(|1,1> + |1,-1>)/sqrt2",
            state: sym(&[r(h), ZERO, r(h)]),
            polynomial: vec![ONE, ZERO, ONE],
            roots: vec![ProjectiveRoot::finite(c(0.0, 1.0)), ProjectiveRoot::finite(c(0.0, -1.0))],
            spinors: vec![
                spinor(Complex64::from_polar(h, -PI / 4.0), Complex64::from_polar(h, PI / 4.0)),
                spinor(Complex64::from_polar(h, PI / 4.0), Complex64::from_polar(h, -PI / 4.0)),
            ],
            expansion: dense(2, &[("00", h), ("11", h)]),
        },
        TableRow {
            label: "(|1,1> - |1,-1>)/sqrt2",
            state: sym(&[r(h), ZERO, r(-h)]),
            polynomial: vec![-ONE, ZERO, ONE],
            roots: vec![ProjectiveRoot::finite(ONE), ProjectiveRoot::finite(-ONE)],
            spinors: vec![spinor(r(h), r(h)), spinor(r(h), r(-h))],
            expansion: dense(2, &[("00", h), ("11", -h)]),
        },
        TableRow {
            label: "|1,0>",
            state: sym(&[ZERO, ONE, ZERO]),
            // Degree one: the missing top coefficient is the point at infinity.
            polynomial: vec![ZERO, ONE, ZERO],
            roots: vec![zero, inf],
            spinors: vec![Spinor::zero(), Spinor::one()],
            expansion: dense(2, &[("01", h), ("10", h)]),
        },
    ];

    for (label, sign, offset) in [
        ("(|3/2,3/2> + |3/2,-3/2>)/sqrt2", 1.0, 0.0),
        ("(|3/2,3/2> - |3/2,-3/2>)/sqrt2", -1.0, -0.5),
    ] {
        let zs: Vec<Complex64> = (0..3).map(|k| unit_circle(k as f64 + offset, 3.0)).collect();
        rows.push(TableRow {
            label,
            state: sym(&[r(h), ZERO, ZERO, r(sign * h)]),
            polynomial: vec![ONE, ZERO, ZERO, r(-sign)],
            roots: zs.iter().map(|&z| ProjectiveRoot::finite(z)).collect(),
            spinors: zs.iter().map(|&z| spinor(z.sqrt() * h, z.sqrt() * z * h)).collect(),
            expansion: dense(3, &[("000", h), ("111", sign * h)]),
        });
    }

    for (label, sign) in [
        ("(|3/2,1/2> + |3/2,-1/2>)/sqrt2", 1.0),
        ("(|3/2,1/2> - |3/2,-1/2>)/sqrt2", -1.0),
    ] {
        rows.push(TableRow {
            label,
            state: sym(&[ZERO, r(h), r(sign * h), ZERO]),
            polynomial: vec![ZERO, r(-sign), ONE, ZERO],
            roots: vec![ProjectiveRoot::finite(r(sign)), zero, inf],
            spinors: vec![spinor(r(h), r(sign * h)), Spinor::zero(), Spinor::one()],
            expansion: dense(
                3,
                &[
                    ("001", s6),
                    ("010", s6),
                    ("100", s6),
                    ("011", sign * s6),
                    ("101", sign * s6),
                    ("110", sign * s6),
                ],
            ),
        });
    }

    rows.push(TableRow {
        label: "|3/2,-1/2>",
        state: sym(&[ZERO, ZERO, ONE, ZERO]),
        polynomial: vec![ZERO, ZERO, ONE, ZERO],
        roots: vec![zero, inf, inf],
        spinors: vec![Spinor::zero(), Spinor::one(), Spinor::one()],
        expansion: dense(3, &[("011", s3), ("101", s3), ("110", s3)]),
    });
    rows
}

fn unit(v: &[Complex64]) -> Vec<Complex64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter().map(|z| z / norm).collect()
}

fn multiplicity_profile(roots: &[ProjectiveRoot], tol: f64) -> Vec<usize> {
    let mut groups: Vec<(ProjectiveRoot, usize)> = Vec::new();
    for p in roots {
        match groups.iter_mut().find(|(q, _)| q.chordal(p) <= tol) {
            Some(g) => g.1 += 1,
            None => groups.push((*p, 1)),
        }
    }
    let mut m: Vec<usize> = groups.into_iter().map(|g| g.1).collect();
    m.sort_unstable_by(|a, b| b.cmp(a));
    m
}

/// Recomputes one row from its state.
pub fn check_row(row: &TableRow, cluster_tol: f64) -> RowCheck {
    let poly = majorana_polynomial(&row.state);
    let polynomial_error = phase_distance(&unit(&poly), &unit(&row.polynomial));

    let constellation = majorana_points(&row.state, cluster_tol);
    let computed = constellation.expanded();
    let root_error = matching_distance(&computed, &row.roots);
    let multiplicities_match = constellation.multiplicities() == multiplicity_profile(&row.roots, cluster_tol);

    let as_roots = |s: &[Spinor]| s.iter().map(ProjectiveRoot::from_spinor).collect::<Vec<_>>();
    let spinor_error = matching_distance(&as_roots(&constellation.spinors()), &as_roots(&row.spinors));

    let expand = |s: &SymmetricState| expand_to_full(s).expect("small reference states");
    let from_reference = symmetrize(&row.spinors).map(|s| expand(&s));
    let from_computed = symmetrize(&constellation.spinors()).map(|s| expand(&s));
    let expansion_error = [Ok(expand(&row.state)), from_reference, from_computed]
        .into_iter()
        .map(|f| f.map_or(f64::INFINITY, |f| f.distance(&row.expansion)))
        .fold(0.0, f64::max);

    RowCheck {
        label: row.label,
        polynomial_error,
        root_error,
        multiplicities_match,
        spinor_error,
        expansion_error,
    }
}

/// [`check_row`] over every reference row.
pub fn check_table(cluster_tol: f64) -> Vec<RowCheck> {
    table_rows().iter().map(|row| check_row(row, cluster_tol)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_row_reproduces() {
        let checks = check_table(1e-6);
        assert_eq!(checks.len(), 8);
        for check in &checks {
            assert!(check.passed(1e-9), "{check:?}");
        }
    }

    #[test]
    fn a_wrong_reference_is_detected() {
        let mut row = table_rows().remove(6);
        row.roots = vec![ProjectiveRoot::finite(ONE), ProjectiveRoot::finite(ZERO), ProjectiveRoot::infinity()];
        let check = check_row(&row, 1e-6);
        assert!(!check.passed(1e-9));
        assert!(check.root_error > 0.5);
    }

    #[test]
    fn multiplicity_profile_groups_points() {
        let inf = ProjectiveRoot::infinity();
        assert_eq!(multiplicity_profile(&[inf, ProjectiveRoot::finite(ZERO), inf], 1e-6), vec![2, 1]);
    }
}
