//! Truncated Taylor/Laurent series ("jets") at a fixed real center.
//!
//! A [`Jet`] stores the coefficients of `(x - c)^p` for the powers
//! `valuation ..= order`. Everything above `order` is unknown, so every
//! operation tracks how far its result is still exact:
//!
//! - sums keep the smaller of the two orders;
//! - products and quotients keep the smaller *relative* precision
//!   (number of coefficients counted from the leading nonzero one), which
//!   for ordinary Taylor jets with a nonzero constant term is the same as
//!   keeping the smaller order, and which lets a simple pole cancel against
//!   a simple zero (`t^-1 * t = 1`);
//! - differentiation loses one order.
//!
//! Nonzero jets are always normalized so that `coeffs[0] != 0`, i.e. the
//! stored valuation is the true one. The all-zero jet uses valuation 0 by
//! convention and is reported by [`Jet::is_zero`].
//!
//! Centers are never changed implicitly. Mixing jets at different centers is
//! an error.

use crate::error::{Error, Result};

/// Requested shape of a freshly built jet: how many Taylor coefficients to
/// carry and around which point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JetSpec {
    depth: usize,
    center: f64,
}

impl JetSpec {
    pub fn new(depth: usize, center: f64) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidInput("jet depth must be at least 1".into()));
        }
        if !center.is_finite() {
            return Err(Error::InvalidInput(format!("jet center {center} is not finite")));
        }
        Ok(JetSpec { depth, center })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn center(&self) -> f64 {
        self.center
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    center: f64,
    valuation: i32,
    coeffs: Vec<f64>,
}

impl Jet {
    /// Builds a jet from raw coefficients, `coeffs[j]` multiplying
    /// `(x - center)^(valuation + j)`.
    pub fn new(center: f64, valuation: i32, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("jet needs at least one coefficient".into()));
        }
        if !center.is_finite() {
            return Err(Error::InvalidInput(format!("jet center {center} is not finite")));
        }
        if let Some(bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite jet coefficient {bad}")));
        }
        Ok(Self::normalized(center, valuation, coeffs))
    }

    /// The zero jet known up to and including `order`.
    pub fn zero(center: f64, order: i32) -> Self {
        if order >= 0 {
            Jet {
                center,
                valuation: 0,
                coeffs: vec![0.0; order as usize + 1],
            }
        } else {
            Jet {
                center,
                valuation: order,
                coeffs: vec![0.0],
            }
        }
    }

    pub fn constant(value: f64, spec: JetSpec) -> Self {
        let mut coeffs = vec![0.0; spec.depth];
        coeffs[0] = value;
        Self::normalized(spec.center, 0, coeffs)
    }

    /// Jet of the polynomial `Σ poly[m] x^m` about `spec.center`, via an
    /// in-place Taylor shift. Exact when the degree is below `spec.depth`.
    pub fn from_polynomial(poly: &[f64], spec: JetSpec) -> Result<Self> {
        if poly.is_empty() {
            return Err(Error::InvalidInput("polynomial has no coefficients".into()));
        }
        if let Some(bad) = poly.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite polynomial coefficient {bad}"
            )));
        }
        let c = spec.center;
        let mut shifted = poly.to_vec();
        let n = shifted.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                shifted[j] += c * shifted[j + 1];
            }
        }
        shifted.resize(spec.depth, 0.0);
        Ok(Self::normalized(c, 0, shifted))
    }

    /// Jet of `x -> (x - a_point)^n`, expanded binomially about the center.
    pub fn pow_linear(a_point: f64, n: u32, spec: JetSpec) -> Self {
        let offset = spec.center - a_point;
        let mut coeffs = vec![0.0; spec.depth];
        let mut binom = 1.0;
        for (j, slot) in coeffs.iter_mut().enumerate().take(n as usize + 1) {
            if j > 0 {
                binom = binom * (n as usize + 1 - j) as f64 / j as f64;
            }
            *slot = binom * offset.powi(n as i32 - j as i32);
        }
        Self::normalized(spec.center, 0, coeffs)
    }

    fn normalized(center: f64, valuation: i32, mut coeffs: Vec<f64>) -> Self {
        let order = valuation + coeffs.len() as i32 - 1;
        match coeffs.iter().position(|&c| c != 0.0) {
            Some(0) => Jet {
                center,
                valuation,
                coeffs,
            },
            Some(lead) => {
                coeffs.drain(..lead);
                Jet {
                    center,
                    valuation: valuation + lead as i32,
                    coeffs,
                }
            }
            None => Self::zero(center, order),
        }
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn valuation(&self) -> i32 {
        self.valuation
    }

    /// Highest retained power.
    pub fn order(&self) -> i32 {
        self.valuation + self.coeffs.len() as i32 - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `(x - c)^power`; `None` above the retained order.
    pub fn coeff(&self, power: i32) -> Option<f64> {
        if power > self.order() {
            None
        } else if power < self.valuation {
            Some(0.0)
        } else {
            Some(self.coeffs[(power - self.valuation) as usize])
        }
    }

    /// Coefficients for the powers `from ..= order`, zero-filled below the valuation.
    pub fn dense_coeffs(&self, from: i32) -> Vec<f64> {
        (from..=self.order())
            .map(|p| self.coeff(p).unwrap_or(0.0))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// `max |c_p| r^p` over the powers `p <= power`; pole terms are taken unweighted.
    pub fn weighted_max_through(&self, power: i32, radius: f64) -> f64 {
        let keep = (power - self.valuation + 1).clamp(0, self.coeffs.len() as i32) as usize;
        self.coeffs[..keep]
            .iter()
            .enumerate()
            .fold(0.0, |m, (j, c)| {
                let p = self.valuation + j as i32;
                let w = if p > 0 { radius.powi(p) } else { 1.0 };
                m.max(c.abs() * w)
            })
    }

    /// Power of the leading nonzero coefficient, or one past the order for
    /// the zero jet (which is then only known to be `O(t^(order+1))`).
    fn lead(&self) -> i32 {
        if self.is_zero() {
            self.order() + 1
        } else {
            self.valuation
        }
    }

    /// Value of the represented function at the center.
    pub fn value(&self) -> Result<f64> {
        if self.valuation < 0 {
            return Err(Error::PoleAtCenter {
                center: self.center,
                valuation: self.valuation,
            });
        }
        Ok(self.coeff(0).unwrap_or(0.0))
    }

    /// Evaluates the truncated series at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let t = x - self.center;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * t.powi(self.valuation + j as i32))
            .sum()
    }

    fn check_center(&self, other: &Jet) -> Result<()> {
        if self.center.to_bits() != other.center.to_bits() {
            return Err(Error::CenterMismatch {
                left: self.center,
                right: other.center,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Jet) -> Result<Jet> {
        self.check_center(other)?;
        let order = self.order().min(other.order());
        let start = self.valuation.min(other.valuation);
        let coeffs = (start..=order)
            .map(|p| self.coeff(p).unwrap_or(0.0) + other.coeff(p).unwrap_or(0.0))
            .collect();
        Ok(Self::normalized(self.center, start, coeffs))
    }

    pub fn sub(&self, other: &Jet) -> Result<Jet> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Jet {
        self.scale(-1.0)
    }

    pub fn scale(&self, factor: f64) -> Jet {
        let coeffs = self.coeffs.iter().map(|c| c * factor).collect();
        Self::normalized(self.center, self.valuation, coeffs)
    }

    /// Adds a constant; the constant is exact to any order.
    pub fn add_scalar(&self, value: f64) -> Jet {
        if self.order() < 0 {
            return self.clone();
        }
        let start = self.valuation.min(0);
        let coeffs = (start..=self.order())
            .map(|p| self.coeff(p).unwrap_or(0.0) + if p == 0 { value } else { 0.0 })
            .collect();
        Self::normalized(self.center, start, coeffs)
    }

    pub fn mul(&self, other: &Jet) -> Result<Jet> {
        self.check_center(other)?;
        let order = (self.lead() + other.order()).min(other.lead() + self.order());
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.center, order));
        }
        let len = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..len)
            .map(|j| {
                (0..=j)
                    .map(|i| self.coeffs[i] * other.coeffs[j - i])
                    .sum()
            })
            .collect();
        Ok(Self::normalized(
            self.center,
            self.valuation + other.valuation,
            coeffs,
        ))
    }

    /// Laurent division: leading zeros of the denominator shift the valuation
    /// of the quotient down, so a zero of `den` at the center becomes a pole.
    pub fn div(&self, den: &Jet) -> Result<Jet> {
        self.check_center(den)?;
        if den.is_zero() {
            return Err(Error::SingularDenominator);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.center, self.order() - den.valuation));
        }
        let len = self.coeffs.len().min(den.coeffs.len());
        let d0 = den.coeffs[0];
        let mut quotient: Vec<f64> = Vec::with_capacity(len);
        for j in 0..len {
            let acc: f64 = (0..j).map(|i| quotient[i] * den.coeffs[j - i]).sum();
            quotient.push((self.coeffs[j] - acc) / d0);
        }
        Ok(Self::normalized(
            self.center,
            self.valuation - den.valuation,
            quotient,
        ))
    }

    /// Derivative with respect to `x`; the retained order drops by one.
    pub fn derivative(&self) -> Result<Jet> {
        if self.valuation == 0 {
            if self.coeffs.len() == 1 {
                return Err(Error::DepthExhausted {
                    order: self.order(),
                });
            }
            let coeffs = self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(j, c)| (j + 1) as f64 * c)
                .collect();
            return Ok(Self::normalized(self.center, 0, coeffs));
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| (self.valuation + j as i32) as f64 * c)
            .collect();
        Ok(Self::normalized(self.center, self.valuation - 1, coeffs))
    }
}
