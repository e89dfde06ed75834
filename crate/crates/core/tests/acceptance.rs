//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use majorana::geomeasure::{dicke_closed_form, geometric_measure, GeometricOptions};
use majorana::marginals::{
    chi_states, concurrence, dicke_bitstrings, dnk_state, generalized_dicke_state, rdm_full, rdm_symmetric,
    reconstruct_from_two_marginals, three_tangle, uniqueness_conditions, Reconstruction, ReconstructOptions,
};
use majorana::slocc::{apply_ilo, classify, eta_state, family_configurations, ghz_ilo, LocalOperation};
use majorana::table::check_table;
use majorana::{
    dicke_state, expand_to_full, ghz_state, majorana_points, state_from_constellation, symmetrize,
    symmetrize_brute_force, FullState, MajoranaConstellation, ProjectiveRoot, Spinor, SymmetricState,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

struct Outcome {
    passed: bool,
    detail: String,
}

fn normal(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn marginal_pair(f: &FullState) -> (majorana::DensityMatrix, majorana::DensityMatrix) {
    let n = f.n();
    let a: Vec<usize> = (1..n).collect();
    let b: Vec<usize> = (2..=n).collect();
    (rdm_full(f, &a).unwrap(), rdm_full(f, &b).unwrap())
}

fn table_reproduction() -> Outcome {
    let checks = check_table(1e-6);
    let worst = checks.iter().map(|c| c.worst()).fold(0.0, f64::max);
    Outcome {
        passed: checks.len() == 8 && checks.iter().all(|c| c.passed(1e-9)),
        detail: format!("{} rows, max deviation {worst:.2e}", checks.len()),
    }
}

fn roundtrip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let n = 2 + i % 9;
        let mut coeffs: Vec<Complex64> = (0..=n).map(|_| normal(&mut rng)).collect();
        if i < 200 {
            coeffs[n] = Complex64::new(0.0, 0.0);
        }
        let s = SymmetricState::new(coeffs).unwrap();
        let back = state_from_constellation(&majorana_points(&s, 1e-6)).unwrap();
        worst = worst.max(back.distance(&s));
    }
    Outcome {
        passed: worst <= 1e-9,
        detail: format!("1000 states, worst distance {worst:.2e}"),
    }
}

/// Points pairwise at chordal distance above 0.3.
fn separated_points(count: usize, rng: &mut ChaCha8Rng) -> Vec<ProjectiveRoot> {
    let mut pts: Vec<ProjectiveRoot> = Vec::new();
    while pts.len() < count {
        let cos_beta: f64 = rng.random_range(-1.0..1.0);
        let p = ProjectiveRoot::from_angles(rng.random_range(0.0..2.0 * PI), cos_beta.acos());
        if pts.iter().all(|q| q.chordal(&p) > 0.3) {
            pts.push(p);
        }
    }
    pts
}

fn slocc_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = Vec::new();
    for n in 3..=8 {
        let families = family_configurations(n);
        for _ in 0..100 {
            let family = &families[rng.random_range(0..families.len())];
            let pts = separated_points(family.diversity(), &mut rng);
            let c = MajoranaConstellation::new(pts.into_iter().zip(family.mults().iter().copied()).collect()).unwrap();
            let s = state_from_constellation(&c).unwrap();
            let a = loop {
                let m = [[normal(&mut rng), normal(&mut rng)], [normal(&mut rng), normal(&mut rng)]];
                if let Ok(a) = LocalOperation::new(m) {
                    break a;
                }
            };
            let before = classify(&s, 1e-6);
            let after = classify(&apply_ilo(&s, &a).unwrap().state, 1e-6);
            if before != *family || after != *family {
                failures.push(format!("N={n} {} -> {} (cond {:.0})", family, after, a.condition_number()));
            }
        }
    }
    let ghz = apply_ilo(&eta_state(), &ghz_ilo()).unwrap().state;
    let fidelity = ghz.fidelity(&ghz_state(3).unwrap());
    let mut detail = format!("{} of 600 changed, eta->GHZ fidelity {fidelity:.12}", failures.len());
    if !failures.is_empty() {
        detail.push_str(&format!(" [{}]", failures.join("; ")));
    }
    Outcome {
        passed: failures.is_empty() && fidelity >= 1.0 - 1e-9,
        detail,
    }
}

fn entanglement_values() -> Outcome {
    let opts = GeometricOptions::default();
    let mut worst_ghz: f64 = 0.0;
    for n in 2..=10 {
        worst_ghz = worst_ghz.max((geometric_measure(&ghz_state(n).unwrap(), &opts).eg - 0.5).abs());
    }
    let w = (geometric_measure(&dicke_state(3, 1).unwrap(), &opts).eg - 5.0 / 9.0).abs();
    let bell = (geometric_measure(&dicke_state(2, 1).unwrap(), &opts).eg - 0.5).abs();
    let (mut worst_dicke, mut worst_cpp): (f64, f64) = (0.0, 0.0);
    for n in 1..=10 {
        for l in 0..=n {
            let report = geometric_measure(&dicke_state(n, l).unwrap(), &opts);
            let (eg, _) = dicke_closed_form(n, l).unwrap();
            worst_dicke = worst_dicke.max((report.eg - eg).abs());
            for p in &report.cpps {
                let dev = if l == 0 {
                    PI - p.beta()
                } else if l == n {
                    p.beta()
                } else {
                    ((p.beta() / 2.0).tan() - (((n - l) as f64) / l as f64).sqrt()).abs()
                };
                worst_cpp = worst_cpp.max(dev);
            }
        }
    }
    Outcome {
        passed: worst_ghz <= 1e-6 && w <= 1e-6 && bell <= 1e-6 && worst_dicke <= 1e-6 && worst_cpp <= 1e-5,
        detail: format!(
            "GHZ {worst_ghz:.1e}, W {w:.1e}, Bell {bell:.1e}, Dicke {worst_dicke:.1e}, CPP {worst_cpp:.1e}"
        ),
    }
}

fn witness_values() -> Outcome {
    let ghz = expand_to_full(&ghz_state(3).unwrap()).unwrap();
    let eta = expand_to_full(&eta_state()).unwrap();
    let pairs = [[1, 2], [1, 3], [2, 3]];
    let worst = |f: &FullState, want: f64| {
        pairs
            .iter()
            .map(|k| (concurrence(&rdm_full(f, k).unwrap()).unwrap() - want).abs())
            .fold(0.0, f64::max)
    };
    let (c_ghz, c_eta) = (worst(&ghz, 0.0), worst(&eta, 1.0 / 3.0));
    let t_ghz = (three_tangle(&ghz).unwrap() - 1.0).abs();
    let t_eta = (three_tangle(&eta).unwrap() - 1.0 / 3.0).abs();
    Outcome {
        passed: c_ghz <= 1e-9 && c_eta <= 1e-8 && t_ghz <= 1e-8 && t_eta <= 1e-8,
        detail: format!("C(GHZ) {c_ghz:.1e}, C(eta) {c_eta:.1e}, tau(GHZ) {t_ghz:.1e}, tau(eta) {t_eta:.1e}"),
    }
}

fn reconstruction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let opts = ReconstructOptions::default();
    let recover = |f: &FullState| -> f64 {
        let (a, b) = marginal_pair(f);
        match reconstruct_from_two_marginals(&a, &b, &opts) {
            Ok(Reconstruction::Unique(g)) => g.fidelity(f),
            _ => 0.0,
        }
    };

    let mut worst_dnk: f64 = 1.0;
    for i in 0..200 {
        let n = 4 + i % 5;
        let k = 1 + (i / 5) % (n / 2);
        let s = dnk_state(n, k, normal(&mut rng), normal(&mut rng)).unwrap();
        worst_dnk = worst_dnk.min(recover(&expand_to_full(&s).unwrap()));
    }

    let mut worst_gd: f64 = 1.0;
    let mut made = 0;
    while made < 50 {
        let n = rng.random_range(4..=7);
        let k = rng.random_range(1..n);
        let alphas: Vec<Complex64> = (0..=k).map(|_| normal(&mut rng)).collect();
        let a: Vec<Vec<Complex64>> = (0..=k)
            .map(|r| dicke_bitstrings(n, r).iter().map(|_| normal(&mut rng)).collect())
            .collect();
        if !uniqueness_conditions(n, k, &a) {
            continue;
        }
        made += 1;
        worst_gd = worst_gd.min(recover(&generalized_dicke_state(n, k, &alphas, &a).unwrap()));
    }

    let ambiguous = (3..=8).all(|n| {
        let (a, b) = marginal_pair(&expand_to_full(&ghz_state(n).unwrap()).unwrap());
        matches!(reconstruct_from_two_marginals(&a, &b, &opts), Ok(Reconstruction::Ambiguous(_)))
    });

    let (chi1, chi2) = chi_states();
    let mut distances: Vec<f64> = [[2, 3, 4], [1, 3, 4], [1, 2, 4], [1, 2, 3]]
        .iter()
        .map(|k| {
            rdm_full(&chi1, k)
                .unwrap()
                .frobenius_distance(&rdm_full(&chi2, k).unwrap())
                .unwrap()
        })
        .collect();
    distances.sort_by(f64::total_cmp);
    let chi_ok = distances[2] <= 1e-10 && distances[3] >= 0.1;

    Outcome {
        passed: worst_dnk >= 1.0 - 1e-8 && worst_gd >= 1.0 - 1e-8 && ambiguous && chi_ok,
        detail: format!(
            "dnk min F {worst_dnk:.12}, gdicke min F {worst_gd:.12}, GHZ ambiguous {ambiguous}, chi distances {:.1e} {:.1e} {:.1e} {:.2}",
            distances[0], distances[1], distances[2], distances[3]
        ),
    }
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_rdm: f64 = 0.0;
    for n in 2..=8 {
        for _ in 0..5 {
            let s = SymmetricState::random(n, &mut rng).unwrap();
            let f = expand_to_full(&s).unwrap();
            for k in 1..n {
                let keep: Vec<usize> = (1..=k).collect();
                let fast = rdm_symmetric(&s, k).unwrap().to_computational();
                worst_rdm = worst_rdm.max(fast.frobenius_distance(&rdm_full(&f, &keep).unwrap()).unwrap());
            }
        }
    }
    let mut worst_sym: f64 = 0.0;
    for n in 1..=6 {
        for _ in 0..5 {
            let spinors: Vec<Spinor> = (0..n)
                .map(|_| Spinor::new(normal(&mut rng), normal(&mut rng)).unwrap())
                .collect();
            let fast = expand_to_full(&symmetrize(&spinors).unwrap()).unwrap();
            worst_sym = worst_sym.max(fast.distance(&symmetrize_brute_force(&spinors).unwrap()));
        }
    }
    Outcome {
        passed: worst_rdm <= 1e-10 && worst_sym <= 1e-9,
        detail: format!("rdm {worst_rdm:.1e}, symmetrize {worst_sym:.1e}"),
    }
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 7] = [
        ("1 table reproduction", table_reproduction, Some(Duration::from_secs(1))),
        ("2 constellation roundtrip", roundtrip, Some(Duration::from_secs(10))),
        ("3 SLOCC invariance", slocc_invariance, None),
        ("4 entanglement values", entanglement_values, Some(Duration::from_secs(30))),
        ("5 witness values", witness_values, None),
        ("6 reconstruction", reconstruction, Some(Duration::from_secs(60))),
        ("7 oracle equivalence", oracle_equivalence, None),
    ];
    let mut all = true;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= b);
        let passed = outcome.passed && in_time;
        all &= passed;
        let limit = budget.map_or(String::new(), |b| format!(" / {:.0} s", b.as_secs_f64()));
        println!(
            "{} {name}: {} ({:.3} s{limit})",
            if passed { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
