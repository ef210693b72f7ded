//! Derivative-side expansion of a function about a point, its integral
//! remainder, and the residual of the infinite-order linear ODE that every
//! function with a vanishing remainder satisfies.
//!
//! With derivatives taken at `x` rather than at `a`:
//!
//! ```text
//! Z_n[f](x; a) = f(a) + Σ_{k=1..n} (-1)^(k-1) f^(k)(x) (x - a)^k / k!
//! R_n[f](x; a) = (1/n!) ∫_a^x (a - t)^n f^(n+1)(t) dt
//! f(x)         = Z_n + R_n
//! ```
//!
//! Weights `(x - a)^k / k!` are always accumulated as a running product of
//! `(x - a) / k`, so large `n` never overflows a factorial.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quadrature;

/// A function together with its derivatives of every order it supports.
pub trait FunctionUnderTest {
    /// `f^(order)(x)`, or `None` when that derivative is not available.
    fn derivative(&self, order: usize, x: f64) -> Option<f64>;

    fn value(&self, x: f64) -> Option<f64> {
        self.derivative(0, x)
    }
}

/// Closed-form fixtures with analytic derivatives of all orders.
#[derive(Debug, Clone, PartialEq)]
pub enum Fixture {
    /// `e^(rate x)`
    Exp { rate: f64 },
    /// `sin(rate x)`
    Sin { rate: f64 },
    /// `cos(rate x)`
    Cos { rate: f64 },
    /// `Σ coeffs[m] x^m`
    Polynomial(Vec<f64>),
}

impl Fixture {
    pub fn exp() -> Self {
        Fixture::Exp { rate: 1.0 }
    }

    pub fn sin() -> Self {
        Fixture::Sin { rate: 1.0 }
    }

    pub fn cos() -> Self {
        Fixture::Cos { rate: 1.0 }
    }
}

impl FunctionUnderTest for Fixture {
    fn derivative(&self, order: usize, x: f64) -> Option<f64> {
        match self {
            Fixture::Exp { rate } => Some(rate.powi(order as i32) * (rate * x).exp()),
            Fixture::Sin { rate } => {
                Some(rate.powi(order as i32) * (rate * x + order as f64 * FRAC_PI_2).sin())
            }
            Fixture::Cos { rate } => {
                Some(rate.powi(order as i32) * (rate * x + order as f64 * FRAC_PI_2).cos())
            }
            Fixture::Polynomial(coeffs) => {
                // falling factorial m (m-1) ... (m-order+1), then Horner
                let mut acc = 0.0;
                for (m, c) in coeffs.iter().enumerate().skip(order).rev() {
                    let falling: f64 = ((m - order + 1)..=m).map(|i| i as f64).product();
                    acc = acc * x + c * falling;
                }
                Some(acc)
            }
        }
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fixture::Exp { rate } if *rate == 1.0 => write!(f, "exp"),
            Fixture::Sin { rate } if *rate == 1.0 => write!(f, "sin"),
            Fixture::Cos { rate } if *rate == 1.0 => write!(f, "cos"),
            Fixture::Exp { rate } => write!(f, "exp*{rate}"),
            Fixture::Sin { rate } => write!(f, "sin*{rate}"),
            Fixture::Cos { rate } => write!(f, "cos*{rate}"),
            Fixture::Polynomial(c) => {
                let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for Fixture {
    type Err = Error;

    /// Accepts `exp`, `sin`, `cos`, each optionally as `name*rate`, and
    /// `poly:c0,c1,...` with monomial coefficients in increasing degree.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(list) = s.strip_prefix("poly:") {
            let coeffs = list
                .split(',')
                .map(|v| {
                    v.trim().parse::<f64>().map_err(|_| {
                        Error::InvalidInput(format!("bad polynomial coefficient '{v}'"))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidInput(format!("bad polynomial '{s}'")));
            }
            return Ok(Fixture::Polynomial(coeffs));
        }
        let (name, rate) = match s.split_once('*') {
            Some((n, r)) => (
                n,
                r.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidInput(format!("bad rate in '{s}'")))?,
            ),
            None => (s, 1.0),
        };
        match name {
            "exp" => Ok(Fixture::Exp { rate }),
            "sin" => Ok(Fixture::Sin { rate }),
            "cos" => Ok(Fixture::Cos { rate }),
            _ => Err(Error::InvalidInput(format!(
                "unknown function '{s}' (expected exp | sin | cos | poly:<coeffs>)"
            ))),
        }
    }
}

fn derivative_or_err(f: &dyn FunctionUnderTest, order: usize, x: f64) -> Result<f64> {
    f.derivative(order, x)
        .ok_or(Error::MissingDerivative { order, x })
}

/// `Z_n[f](x; a)`.
pub fn z_expand(f: &dyn FunctionUnderTest, a: f64, x: f64, n: usize) -> Result<f64> {
    let mut sum = derivative_or_err(f, 0, a)?;
    let mut weight = 1.0;
    let mut sign = 1.0;
    for k in 1..=n {
        weight *= (x - a) / k as f64;
        sum += sign * weight * derivative_or_err(f, k, x)?;
        sign = -sign;
    }
    Ok(sum)
}

/// `R_n[f](x; a)` by adaptive Simpson quadrature to absolute tolerance `quad_tol`.
pub fn remainder_quadrature(
    f: &dyn FunctionUnderTest,
    a: f64,
    x: f64,
    n: usize,
    quad_tol: f64,
) -> Result<f64> {
    if x == a {
        return Ok(0.0);
    }
    quadrature::integrate(
        |t| {
            let mut weight = 1.0;
            for k in 1..=n {
                weight *= (a - t) / k as f64;
            }
            Ok(weight * derivative_or_err(f, n + 1, t)?)
        },
        a,
        x,
        quad_tol,
    )
}

/// Left-hand side of `Σ_{k=1..N} (-1)^k (x-a)^k/k! y^(k)(x) + y(x) - y(a)`.
///
/// Tends to zero with `N` for functions whose remainder vanishes in the limit.
pub fn ode_residual(f: &dyn FunctionUnderTest, a: f64, x: f64, n: usize) -> Result<f64> {
    let mut sum = 0.0;
    let mut weight = 1.0;
    for k in 1..=n {
        weight *= -(x - a) / k as f64;
        sum += weight * derivative_or_err(f, k, x)?;
    }
    Ok(sum + derivative_or_err(f, 0, x)? - derivative_or_err(f, 0, a)?)
}

/// One evaluation of the expansion identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionReport {
    pub n: usize,
    pub point_x: f64,
    pub point_a: f64,
    pub z_value: f64,
    pub r_value: f64,
    /// `|f(x) - Z_n - R_n|`
    pub identity_residual: f64,
}

pub fn expansion_report(
    f: &dyn FunctionUnderTest,
    a: f64,
    x: f64,
    n: usize,
    quad_tol: f64,
) -> Result<ExpansionReport> {
    let z_value = z_expand(f, a, x, n)?;
    let r_value = remainder_quadrature(f, a, x, n, quad_tol)?;
    let fx = derivative_or_err(f, 0, x)?;
    Ok(ExpansionReport {
        n,
        point_x: x,
        point_a: a,
        z_value,
        r_value,
        identity_residual: (fx - z_value - r_value).abs(),
    })
}
