//! Small numeric helpers shared across modules.

use num_complex::Complex64;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Binomial coefficient as `f64`. Exact for every argument used here (n ≤ 60).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0_f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

pub(crate) fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

/// `⟨a|b⟩` for equal-length vectors.
pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Multiplies the vector by a unit phase so that its first entry above
/// `threshold` is real and non-negative.
pub(crate) fn canonicalize_phase(v: &mut [Complex64], threshold: f64) {
    if let Some(first) = v.iter().find(|c| c.norm() > threshold) {
        let phase = first.conj() / first.norm();
        for c in v.iter_mut() {
            *c *= phase;
        }
    }
}

/// `min_φ ‖a − e^{iφ} b‖` for vectors of equal length.
pub(crate) fn phase_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let ov = inner(b, a);
    let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { ONE };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - phase * y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn popcount(x: usize) -> usize {
    x.count_ones() as usize
}
