use crate::error::{Error, Result};

/// A prescribed solution value `y(x) = y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Condition {
    pub x: f64,
    pub y: f64,
}

impl Condition {
    pub fn new(x: f64, y: f64) -> Self {
        Condition { x, y }
    }
}

/// Horner evaluation of `Σ coeffs[m] x^m`.
pub fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// An order-`k` linear ODE
///
/// ```text
/// y^(k) = p_1(x) y^(k-1) + ... + p_k(x) y + p_{k+1}(x)
/// ```
///
/// with polynomial coefficients, together with `k` function values
/// `y(x_1), ..., y(x_k)` at distinct abscissae.
///
/// The reduction consumes `conditions[k-1]` first and `conditions[0]` last.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionValueProblem {
    base_coeffs: Vec<Vec<f64>>,
    conditions: Vec<Condition>,
}

impl FunctionValueProblem {
    pub fn new(base_coeffs: Vec<Vec<f64>>, conditions: Vec<Condition>) -> Result<Self> {
        if base_coeffs.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "an order-k equation needs k+1 >= 2 coefficient polynomials, got {}",
                base_coeffs.len()
            )));
        }
        let order = base_coeffs.len() - 1;
        if conditions.len() != order {
            return Err(Error::InvalidInput(format!(
                "order {order} needs exactly {order} conditions, got {}",
                conditions.len()
            )));
        }
        for (i, poly) in base_coeffs.iter().enumerate() {
            if poly.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "coefficient polynomial {} is empty",
                    i + 1
                )));
            }
            if poly.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "coefficient polynomial {} has a non-finite entry",
                    i + 1
                )));
            }
        }
        for c in &conditions {
            if !c.x.is_finite() || !c.y.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "condition ({}, {}) is not finite",
                    c.x, c.y
                )));
            }
        }
        for (i, a) in conditions.iter().enumerate() {
            if let Some(b) = conditions[i + 1..].iter().find(|b| b.x == a.x) {
                return Err(Error::InvalidInput(format!(
                    "condition abscissae must be pairwise distinct (x = {} appears twice, y = {} and y = {})",
                    a.x, a.y, b.y
                )));
            }
        }
        Ok(FunctionValueProblem {
            base_coeffs,
            conditions,
        })
    }

    pub fn order(&self) -> usize {
        self.base_coeffs.len() - 1
    }

    pub fn base_coeffs(&self) -> &[Vec<f64>] {
        &self.base_coeffs
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    /// `true` when the inhomogeneous term is identically zero.
    pub fn is_homogeneous(&self) -> bool {
        self.base_coeffs[self.order()].iter().all(|c| *c == 0.0)
    }

    /// Same equation, different conditions.
    pub fn with_conditions(&self, conditions: Vec<Condition>) -> Result<Self> {
        Self::new(self.base_coeffs.clone(), conditions)
    }
}
