//! Reference solutions by direct numerical integration.
//!
//! Independent of the jet machinery: the equation is rewritten as a
//! first-order system and integrated with classical RK4. A function-value
//! problem is solved by superposition, shooting the `k` unit initial states
//! plus the particular solution from one anchor and fitting the `k`
//! conditions with a dense linear solve.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::problem::{poly_eval, Condition, FunctionValueProblem};

const START_STEPS: usize = 8;
const MAX_STEPS: usize = 1 << 24;

/// `y^(k) = Σ_j p_j(x) y^(k-j) + p_{k+1}(x)` in companion form, with state
/// `s = (y, y', ..., y^(k-1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOdeSystem {
    coeffs: Vec<Vec<f64>>,
    homogeneous: bool,
}

impl LinearOdeSystem {
    pub fn new(coeffs: Vec<Vec<f64>>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidInput("need at least two coefficient polynomials".into()));
        }
        Ok(LinearOdeSystem {
            coeffs,
            homogeneous: false,
        })
    }

    pub fn from_problem(problem: &FunctionValueProblem) -> Self {
        LinearOdeSystem {
            coeffs: problem.base_coeffs().to_vec(),
            homogeneous: false,
        }
    }

    /// The same equation with the forcing term dropped.
    pub fn homogeneous(&self) -> Self {
        LinearOdeSystem {
            coeffs: self.coeffs.clone(),
            homogeneous: true,
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn rhs(&self, x: f64, s: &[f64], out: &mut [f64]) {
        let k = self.order();
        out[..k - 1].copy_from_slice(&s[1..k]);
        let mut top = if self.homogeneous {
            0.0
        } else {
            poly_eval(&self.coeffs[k], x)
        };
        for j in 1..=k {
            top += poly_eval(&self.coeffs[j - 1], x) * s[k - j];
        }
        out[k - 1] = top;
    }

    fn rk4(&self, x0: f64, s0: &[f64], x1: f64, steps: usize) -> Vec<f64> {
        let dim = s0.len();
        let h = (x1 - x0) / steps as f64;
        let mut s = s0.to_vec();
        let (mut k1, mut k2, mut k3, mut k4) =
            (vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]);
        let mut tmp = vec![0.0; dim];
        for i in 0..steps {
            let x = x0 + i as f64 * h;
            self.rhs(x, &s, &mut k1);
            for d in 0..dim {
                tmp[d] = s[d] + 0.5 * h * k1[d];
            }
            self.rhs(x + 0.5 * h, &tmp, &mut k2);
            for d in 0..dim {
                tmp[d] = s[d] + 0.5 * h * k2[d];
            }
            self.rhs(x + 0.5 * h, &tmp, &mut k3);
            for d in 0..dim {
                tmp[d] = s[d] + h * k3[d];
            }
            self.rhs(x + h, &tmp, &mut k4);
            for d in 0..dim {
                s[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
            }
        }
        s
    }
}

/// State at `x1` of the initial value problem `s(x0) = state0`.
///
/// The step count doubles until two successive RK4 results agree to
/// `step_tol` (relative to the state size); the Richardson-corrected value is
/// returned.
pub fn integrate_ivp(
    sys: &LinearOdeSystem,
    x0: f64,
    state0: &[f64],
    x1: f64,
    step_tol: f64,
) -> Result<Vec<f64>> {
    if state0.len() != sys.order() {
        return Err(Error::InvalidInput(format!(
            "state has {} components, order is {}",
            state0.len(),
            sys.order()
        )));
    }
    if x0 == x1 {
        return Ok(state0.to_vec());
    }
    let mut steps = START_STEPS;
    let mut coarse = sys.rk4(x0, state0, x1, steps);
    loop {
        steps *= 2;
        if steps > MAX_STEPS {
            return Err(Error::OracleFailure(format!(
                "RK4 from {x0} to {x1} did not reach {step_tol:e} within {MAX_STEPS} steps"
            )));
        }
        let fine = sys.rk4(x0, state0, x1, steps);
        let scale = fine.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let diff = fine
            .iter()
            .zip(&coarse)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if diff.is_nan() {
            return Err(Error::OracleFailure(format!("RK4 from {x0} to {x1} diverged")));
        }
        if diff <= step_tol * scale {
            return Ok(fine
                .iter()
                .zip(&coarse)
                .map(|(f, c)| f + (f - c) / 15.0)
                .collect());
        }
        coarse = fine;
    }
}

/// A fitted solution, stored as its initial state at `anchor`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionSolution {
    pub system: LinearOdeSystem,
    pub anchor: f64,
    pub initial_state: Vec<f64>,
    /// 2-norm condition number of the fitting matrix.
    pub condition_number: f64,
    pub step_tol: f64,
}

impl SuperpositionSolution {
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.eval_state(x)?[0])
    }

    pub fn eval_state(&self, x: f64) -> Result<Vec<f64>> {
        integrate_ivp(&self.system, self.anchor, &self.initial_state, x, self.step_tol)
    }
}

/// Solves the function-value problem by shooting from the leftmost condition.
pub fn solve_bvp_superposition(
    sys: &LinearOdeSystem,
    conditions: &[Condition],
    step_tol: f64,
) -> Result<SuperpositionSolution> {
    let k = sys.order();
    if conditions.len() != k {
        return Err(Error::InvalidInput(format!(
            "{} conditions for order {k}",
            conditions.len()
        )));
    }
    let anchor = conditions
        .iter()
        .map(|c| c.x)
        .fold(f64::INFINITY, f64::min);
    let homogeneous = sys.homogeneous();
    let zero = vec![0.0; k];

    let mut a = DMatrix::zeros(k, k);
    let mut rhs = DVector::zeros(k);
    for (row, cond) in conditions.iter().enumerate() {
        for col in 0..k {
            let mut e = zero.clone();
            e[col] = 1.0;
            a[(row, col)] = integrate_ivp(&homogeneous, anchor, &e, cond.x, step_tol)?[0];
        }
        let particular = integrate_ivp(sys, anchor, &zero, cond.x, step_tol)?[0];
        rhs[row] = cond.y - particular;
    }

    let sv = a.clone().singular_values();
    let smax = sv.max();
    let smin = sv.min();
    if smin == 0.0 || smin <= smax * f64::EPSILON {
        return Err(Error::OracleSingular);
    }
    let initial = a.lu().solve(&rhs).ok_or(Error::OracleSingular)?;
    Ok(SuperpositionSolution {
        system: sys.clone(),
        anchor,
        initial_state: initial.iter().copied().collect(),
        condition_number: smax / smin,
        step_tol,
    })
}

/// Oracle for a whole problem.
pub fn reference_solution(
    problem: &FunctionValueProblem,
    step_tol: f64,
) -> Result<SuperpositionSolution> {
    solve_bvp_superposition(&LinearOdeSystem::from_problem(problem), problem.conditions(), step_tol)
}

/// Closed form of `y'' = y` through `(a, ya)` and `(b, yb)`.
pub fn two_point_exponential(a: f64, ya: f64, b: f64, yb: f64, x: f64) -> f64 {
    (ya * (b - x).sinh() + yb * (x - a).sinh()) / (b - a).sinh()
}
