#![allow(dead_code)]

pub mod props;

use fvp_core::oracle::{integrate_ivp, LinearOdeSystem};
use fvp_core::{Condition, FunctionValueProblem, Jet, JetSpec};

/// `y'' = y` with `y(a) = ya`, `y(b) = yb`, listed as `[(b, yb), (a, ya)]`.
pub fn exp_problem(a: f64, ya: f64, b: f64, yb: f64) -> FunctionValueProblem {
    FunctionValueProblem::new(
        vec![vec![0.0], vec![1.0], vec![0.0]],
        vec![Condition::new(b, yb), Condition::new(a, ya)],
    )
    .unwrap()
}

/// Two-exponential form of the `y'' = y` two-point solution.
pub fn exp_closed_form(a: f64, ya: f64, b: f64, yb: f64, x: f64) -> f64 {
    let den = (a - b).exp() - (b - a).exp();
    (ya * (-b).exp() - yb * (-a).exp()) / den * x.exp()
        + (yb * a.exp() - ya * b.exp()) / den * (-x).exp()
}

/// The `-Q_02 / Q_01` ratio written with hyperbolic functions.
pub fn exp_hyperbolic_ratio(a: f64, ya: f64, b: f64, yb: f64, x: f64) -> f64 {
    let q02 = -yb + ya / (x - a).sinh() * (x - b).sinh();
    let q01 = (x - b).cosh() - (x - b).sinh() / (x - a).tanh();
    -q02 / q01
}

pub fn grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

/// Taylor coefficients of `sinh(t)` (odd) or `cosh(t)` (even) up to `depth`.
pub fn hyperbolic_coeffs(odd: bool, depth: usize) -> Vec<f64> {
    let mut out = vec![0.0; depth];
    let mut fact = 1.0;
    for (j, slot) in out.iter_mut().enumerate() {
        if j > 0 {
            fact *= j as f64;
        }
        if (j % 2 == 1) == odd {
            *slot = 1.0 / fact;
        }
    }
    out
}

pub fn airy_system() -> LinearOdeSystem {
    LinearOdeSystem::new(vec![vec![0.0], vec![0.0, 1.0], vec![0.0]]).unwrap()
}

/// Maclaurin solution of `y'' = x y` with `y(0) = c0`, `y'(0) = c1`, via
/// `a_{n+3} = a_n / ((n+3)(n+2))`.
pub fn airy_series(c0: f64, c1: f64, x: f64, terms: usize) -> f64 {
    let mut a = vec![0.0; 3 * terms + 3];
    a[0] = c0;
    a[1] = c1;
    for n in 0..a.len() - 3 {
        a[n + 3] = a[n] / ((n + 3) * (n + 2)) as f64;
    }
    a.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// `y'' = x y` with values read from the solution through `y(0) = 1, y'(0) = 0.5`.
pub fn airy_problem(a: f64, b: f64) -> FunctionValueProblem {
    let sys = airy_system();
    let ya = integrate_ivp(&sys, 0.0, &[1.0, 0.5], a, 1e-14).unwrap()[0];
    let yb = integrate_ivp(&sys, 0.0, &[1.0, 0.5], b, 1e-14).unwrap()[0];
    FunctionValueProblem::new(
        vec![vec![0.0], vec![0.0, 1.0], vec![0.0]],
        vec![Condition::new(b, yb), Condition::new(a, ya)],
    )
    .unwrap()
}

pub fn poly_jet(poly: &[f64], depth: usize, center: f64) -> Jet {
    Jet::from_polynomial(poly, JetSpec::new(depth, center).unwrap()).unwrap()
}

/// `|a - b| <= tol * max(1, |a|, |b|)`
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}
