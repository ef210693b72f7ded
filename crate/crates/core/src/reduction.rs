//! One order-reduction stage.
//!
//! Substituting the rows of an order-`m` stage equation into the
//! infinite-order identity anchored at the condition point `x_m` gives an
//! equation of order `m - 1`:
//!
//! ```text
//! Q_1 y^(m-1) + Q_2 y^(m-2) + ... + Q_m y + Q_{m+1} = 0
//! Q_i     = Σ_{n=m..N} w_n p_{n,i} + w_{m-i}      (i = 1..m)
//! Q_{m+1} = Σ_{n=m..N} w_n p_{n,m+1} - y(x_m)
//! w_n     = (-1)^n (x - x_m)^n / n!
//! ```
//!
//! Dividing through by `-Q_1` yields the base row of the next stage. At
//! order one the same division is the solution itself.

use crate::error::{Error, Result};
use crate::jet::{Jet, JetSpec};
use crate::problem::Condition;
use crate::recursion::CoefficientRow;

/// The `Q` sums of one stage, as jets at the rows' center.
#[derive(Debug, Clone, PartialEq)]
pub struct QVector {
    pub stage_order: usize,
    pub condition: Condition,
    pub n_trunc: usize,
    /// `Q_1 ..= Q_{m+1}`
    pub entries: Vec<Jet>,
    /// Largest coefficient magnitude of the last (`n = N_trunc`) summand, per entry.
    pub tail_estimates: Vec<f64>,
    /// The `n = N_trunc` summand of each entry.
    pub tail_terms: Vec<Jet>,
}

impl QVector {
    pub fn leading(&self) -> &Jet {
        &self.entries[0]
    }

    pub fn max_tail(&self) -> f64 {
        self.tail_estimates.iter().fold(0.0, |m, t| m.max(*t))
    }
}

/// Jet of `(-1)^n (x - anchor)^n / n!`, built from running products of
/// `offset / i` and `1 / j` so no factorial is ever formed.
pub fn weight_jet(anchor: f64, n: usize, spec: JetSpec) -> Jet {
    let offset = spec.center() - anchor;
    let mut offset_pow = Vec::with_capacity(n + 1); // offset^i / i!
    let mut acc = 1.0;
    for i in 0..=n {
        if i > 0 {
            acc *= offset / i as f64;
        }
        offset_pow.push(acc);
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let mut coeffs = vec![0.0; spec.depth()];
    let mut inv_fact = 1.0;
    for (j, slot) in coeffs.iter_mut().enumerate().take(n + 1) {
        if j > 0 {
            inv_fact /= j as f64;
        }
        *slot = sign * offset_pow[n - j] * inv_fact;
    }
    Jet::new(spec.center(), 0, coeffs).expect("finite weight coefficients")
}

/// Sums the `Q` series of the stage whose rows are given, anchored at `cond`.
///
/// `rows` must start with the stage's base row and cover `n = m ..= n_trunc`.
pub fn compute_q(rows: &[CoefficientRow], cond: Condition, n_trunc: usize) -> Result<QVector> {
    let base = rows
        .first()
        .ok_or_else(|| Error::InvalidInput("no coefficient rows".into()))?;
    let m = base.stage_order();
    if !base.is_base() {
        return Err(Error::InvalidInput("first row must be the stage's base row".into()));
    }
    if n_trunc < m {
        return Err(Error::InvalidInput(format!(
            "N_trunc {n_trunc} is below the stage order {m}"
        )));
    }
    let needed = n_trunc - m + 1;
    if rows.len() < needed {
        return Err(Error::InvalidInput(format!(
            "rows cover n = {m}..={} but N_trunc is {n_trunc}",
            m + rows.len() - 1
        )));
    }
    for (offset, row) in rows[..needed].iter().enumerate() {
        if row.n() != m + offset || row.stage_order() != m {
            return Err(Error::InvalidInput(format!(
                "row {offset} has n = {} (stage {}), expected n = {} (stage {m})",
                row.n(),
                row.stage_order(),
                m + offset
            )));
        }
    }

    let center = base.center();
    let widest = base.entries().iter().map(Jet::order).max().unwrap_or(0);
    let spec = JetSpec::new((widest.max(0) + 1) as usize, center)?;

    let mut sums: Vec<Option<Jet>> = vec![None; m + 1];
    let mut tails = vec![0.0; m + 1];
    let mut tail_terms = vec![Jet::zero(center, spec.depth() as i32 - 1); m + 1];
    for row in &rows[..needed] {
        let w = weight_jet(cond.x, row.n(), spec);
        for (i, p) in row.entries().iter().enumerate() {
            let term = w.mul(p)?;
            if row.n() == n_trunc {
                tails[i] = term.max_abs();
                tail_terms[i] = term.clone();
            }
            sums[i] = Some(match sums[i].take() {
                Some(s) => s.add(&term)?,
                None => term,
            });
        }
    }

    let mut entries = Vec::with_capacity(m + 1);
    for (i, sum) in sums.into_iter().enumerate() {
        let sum = sum.expect("at least the base row contributes");
        let entry = if i < m {
            sum.add(&weight_jet(cond.x, m - 1 - i, spec))?
        } else {
            sum.add_scalar(-cond.y)
        };
        entries.push(entry);
    }

    Ok(QVector {
        stage_order: m,
        condition: cond,
        n_trunc,
        entries,
        tail_estimates: tails,
        tail_terms,
    })
}

fn stage_singular(q: &QVector) -> Error {
    Error::StageSingular {
        stage_order: q.stage_order,
        condition_point: q.condition.x,
        n_trunc: q.n_trunc,
    }
}

fn ratio(q: &QVector, numerator: usize) -> Result<Jet> {
    q.entries[numerator]
        .div(q.leading())
        .map(|j| j.neg())
        .map_err(|e| match e {
            Error::SingularDenominator => stage_singular(q),
            other => other,
        })
}

/// Base row of the order `m - 1` equation: `p_{m-1,j} = -Q_{j+1} / Q_1`.
pub fn reduce_once(q: &QVector) -> Result<CoefficientRow> {
    if q.stage_order < 2 {
        return Err(Error::InvalidInput(
            "an order-1 stage reduces to the solution itself; use solve_order_zero".into(),
        ));
    }
    if q.leading().is_zero() {
        return Err(stage_singular(q));
    }
    let entries = (1..=q.stage_order)
        .map(|i| ratio(q, i))
        .collect::<Result<Vec<_>>>()?;
    CoefficientRow::base(entries)
}

/// The solution jet `y = -Q_2 / Q_1` of the last (order-one) stage.
pub fn solve_order_zero(q: &QVector) -> Result<Jet> {
    if q.stage_order != 1 {
        return Err(Error::InvalidInput(format!(
            "solve_order_zero needs an order-1 stage, got order {}",
            q.stage_order
        )));
    }
    if q.leading().is_zero() {
        return Err(stage_singular(q));
    }
    ratio(q, 1)
}
