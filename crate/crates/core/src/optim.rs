//! Small dense local optimizers: Nelder–Mead, BFGS and Levenberg–Marquardt.
//!
//! All three minimize. They are sized for the problems in this crate (two
//! sphere angles, a handful of gauge parameters, or a few hundred real
//! amplitudes) and make no attempt at sparse or large-scale efficiency.

use nalgebra::{DMatrix, DVector};

/// Result of a local minimization.
#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NelderMeadOptions {
    pub max_iter: usize,
    /// Stop when the simplex diameter falls below this.
    pub xtol: f64,
    /// Stop when the spread of simplex values falls below this.
    pub ftol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_iter: 4000,
            xtol: 1e-12,
            ftol: 1e-16,
        }
    }
}

/// Nelder–Mead simplex search started from `x0` with initial edge `step`.
pub fn nelder_mead<F>(f: F, x0: &[f64], step: f64, opts: &NelderMeadOptions) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        iterations += 1;
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let diameter = simplex[1..]
            .iter()
            .map(|v| dist(v, &simplex[0]))
            .fold(0.0, f64::max);
        if diameter <= opts.xtol || (spread.abs() <= opts.ftol && diameter <= opts.xtol.sqrt()) {
            converged = true;
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let reflected = along(alpha);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = along(gamma);
            let fe = f(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            let (contracted, fc) = if fr < values[n] {
                let c = along(rho);
                let v = f(&c);
                (c, v)
            } else {
                let c = along(-rho);
                let v = f(&c);
                (c, v)
            };
            if fc < values[n].min(fr) {
                simplex[n] = contracted;
                values[n] = fc;
            } else {
                let best = simplex[0].clone();
                for i in 1..=n {
                    for j in 0..n {
                        simplex[i][j] = best[j] + sigma * (simplex[i][j] - best[j]);
                    }
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }
    let best = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .unwrap_or(0);
    Minimum {
        x: simplex[best].clone(),
        value: values[best],
        iterations,
        converged,
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BfgsOptions {
    pub max_iter: usize,
    /// Stop when the gradient norm falls below this.
    pub gtol: f64,
    /// Stop when the objective falls below this (useful for zero-residual fits).
    pub ftarget: f64,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        Self {
            max_iter: 2000,
            gtol: 1e-12,
            ftarget: 0.0,
        }
    }
}

/// BFGS with a backtracking Armijo line search. `fg` returns the value and
/// gradient together.
pub fn bfgs<F>(fg: F, x0: &[f64], opts: &BfgsOptions) -> Minimum
where
    F: Fn(&[f64]) -> (f64, Vec<f64>),
{
    let n = x0.len();
    let mut x = DVector::from_column_slice(x0);
    let (mut fx, g) = fg(x.as_slice());
    let mut g = DVector::from_vec(g);
    let mut h = DMatrix::<f64>::identity(n, n);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        if g.norm() <= opts.gtol || fx <= opts.ftarget {
            converged = true;
            break;
        }
        iterations += 1;
        let mut dir = -(&h * &g);
        let mut slope = g.dot(&dir);
        if slope >= 0.0 {
            h = DMatrix::identity(n, n);
            dir = -g.clone();
            slope = -g.norm_squared();
        }
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial = &x + &dir * t;
            let (ft, gt) = fg(trial.as_slice());
            if ft.is_finite() && ft <= fx + 1e-4 * t * slope {
                accepted = Some((trial, ft, DVector::from_vec(gt)));
                break;
            }
            t *= 0.5;
        }
        let Some((x_new, f_new, g_new)) = accepted else {
            // No descent possible at working precision.
            converged = g.norm() <= opts.gtol.sqrt();
            break;
        };
        let s = &x_new - &x;
        let y = &g_new - &g;
        let sy = s.dot(&y);
        if sy > 1e-300 {
            if iterations == 1 {
                // Scale the initial inverse Hessian to the observed curvature.
                h *= sy / y.norm_squared();
            }
            let rho = 1.0 / sy;
            let hy = &h * &y;
            let yhy = y.dot(&hy);
            h += (&s * s.transpose()) * (rho * rho * yhy + rho)
                - (&hy * s.transpose() + &s * hy.transpose()) * rho;
        }
        let step = s.norm();
        x = x_new;
        fx = f_new;
        g = g_new;
        if step <= 1e-16 * (1.0 + x.norm()) {
            converged = g.norm() <= opts.gtol.sqrt();
            break;
        }
    }
    Minimum {
        x: x.as_slice().to_vec(),
        value: fx,
        iterations,
        converged,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevenbergMarquardtOptions {
    pub max_iter: usize,
    /// Central-difference step for the Jacobian.
    pub jacobian_step: f64,
    /// Stop when the residual norm falls below this.
    pub rtol: f64,
}

impl Default for LevenbergMarquardtOptions {
    fn default() -> Self {
        Self {
            max_iter: 300,
            jacobian_step: 1e-7,
            rtol: 1e-15,
        }
    }
}

/// Levenberg–Marquardt on `‖r(x)‖²` with a central-difference Jacobian.
/// The returned value is the residual norm `‖r‖`.
pub fn levenberg_marquardt<F>(r: F, x0: &[f64], opts: &LevenbergMarquardtOptions) -> Minimum
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut res = DVector::from_vec(r(&x));
    let mut cost = res.norm_squared();
    let mut lambda = 1e-3;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        if cost.sqrt() <= opts.rtol {
            converged = true;
            break;
        }
        iterations += 1;
        let h = opts.jacobian_step;
        let mut jac = DMatrix::<f64>::zeros(res.len(), n);
        for j in 0..n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let (rp, rm) = (r(&xp), r(&xm));
            for i in 0..res.len() {
                jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * &res;
        let mut improved = false;
        for _ in 0..40 {
            let mut a = jtj.clone();
            for i in 0..n {
                a[(i, i)] += lambda * (jtj[(i, i)] + 1e-12);
            }
            let Some(step) = a.lu().solve(&(-&jtr)) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let trial_res = DVector::from_vec(r(&trial));
            let trial_cost = trial_res.norm_squared();
            if trial_cost < cost {
                let small = step.norm() <= 1e-15 * (1.0 + dist(&x, &vec![0.0; n]));
                x = trial;
                res = trial_res;
                cost = trial_cost;
                lambda = (lambda / 10.0).max(1e-15);
                improved = !small;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            converged = true;
            break;
        }
    }
    Minimum {
        x,
        value: cost.sqrt(),
        iterations,
        converged,
    }
}
