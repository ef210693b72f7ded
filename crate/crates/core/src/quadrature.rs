//! Adaptive composite Simpson quadrature with interval bisection.

use crate::error::{Error, Result};

pub const DEFAULT_ABS_TOL: f64 = 1e-12;
pub const MAX_SUBINTERVALS: usize = 1 << 20;

struct Panel {
    lo: f64,
    hi: f64,
    f_lo: f64,
    f_mid: f64,
    f_hi: f64,
    whole: f64,
    tol: f64,
}

fn simpson(lo: f64, hi: f64, f_lo: f64, f_mid: f64, f_hi: f64) -> f64 {
    (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi)
}

/// Signed integral of `f` from `lo` to `hi` to absolute tolerance `abs_tol`.
///
/// Panels are bisected until the two-half Simpson estimate agrees with the
/// whole-panel one to `15 * tol`; accepted panels get the Richardson
/// correction. Fails once [`MAX_SUBINTERVALS`] panels would be exceeded or a
/// panel can no longer be bisected in floating point.
pub fn integrate<F>(mut f: F, lo: f64, hi: f64, abs_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo.is_finite() && hi.is_finite()) || !(abs_tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "quadrature needs finite bounds and a positive tolerance (got [{lo}, {hi}], tol {abs_tol})"
        )));
    }
    if lo == hi {
        return Ok(0.0);
    }
    let (a, b, sign) = if lo < hi { (lo, hi, 1.0) } else { (hi, lo, -1.0) };

    let f_a = f(a)?;
    let f_b = f(b)?;
    let m = 0.5 * (a + b);
    let f_m = f(m)?;
    let mut stack = vec![Panel {
        lo: a,
        hi: b,
        f_lo: f_a,
        f_mid: f_m,
        f_hi: f_b,
        whole: simpson(a, b, f_a, f_m, f_b),
        tol: abs_tol,
    }];
    let mut total = 0.0;
    let mut subintervals = 1usize;

    while let Some(p) = stack.pop() {
        let mid = 0.5 * (p.lo + p.hi);
        let left_mid = 0.5 * (p.lo + mid);
        let right_mid = 0.5 * (mid + p.hi);
        let f_lm = f(left_mid)?;
        let f_rm = f(right_mid)?;
        let left = simpson(p.lo, mid, p.f_lo, f_lm, p.f_mid);
        let right = simpson(mid, p.hi, p.f_mid, f_rm, p.f_hi);
        let delta = left + right - p.whole;
        if !delta.is_finite() {
            return Err(Error::InvalidInput(format!(
                "non-finite integrand on [{}, {}]",
                p.lo, p.hi
            )));
        }
        if delta.abs() <= 15.0 * p.tol {
            total += left + right + delta / 15.0;
            continue;
        }
        let exhausted = left_mid <= p.lo || right_mid >= p.hi;
        if exhausted || subintervals >= MAX_SUBINTERVALS {
            return Err(Error::Quadrature {
                lo: p.lo,
                hi: p.hi,
                max_intervals: MAX_SUBINTERVALS,
                estimate: delta.abs(),
            });
        }
        subintervals += 1;
        let tol = 0.5 * p.tol;
        stack.push(Panel {
            lo: mid,
            hi: p.hi,
            f_lo: p.f_mid,
            f_mid: f_rm,
            f_hi: p.f_hi,
            whole: right,
            tol,
        });
        stack.push(Panel {
            lo: p.lo,
            hi: mid,
            f_lo: p.f_lo,
            f_mid: f_lm,
            f_hi: p.f_mid,
            whole: left,
            tol,
        });
    }
    Ok(sign * total)
}
