//! Derivative-coefficient rows.
//!
//! For a stage equation of order `k`
//!
//! ```text
//! y^(k) = p_{k,1} y^(k-1) + ... + p_{k,k} y + p_{k,k+1}
//! ```
//!
//! every higher derivative can be written in the same basis,
//! `y^(n) = p_{n,1} y^(k-1) + ... + p_{n,k} y + p_{n,k+1}`. Differentiating
//! row `n-1` and substituting the stage equation for the `y^(k)` that appears
//! gives row `n`:
//!
//! ```text
//! p_{n,j}   = p'_{n-1,j}   + p_{n-1,1} p_{k,j}   + p_{n-1,j+1}   (j < k)
//! p_{n,k}   = p'_{n-1,k}   + p_{n-1,1} p_{k,k}
//! p_{n,k+1} = p'_{n-1,k+1} + p_{n-1,1} p_{k,k+1}
//! ```
//!
//! The product always pairs with the *base* row entry `p_{k,j}`.

use crate::error::{Error, Result};
use crate::jet::Jet;

/// One row `(p_{n,1}, ..., p_{n,k+1})` for a stage equation of order `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientRow {
    stage_order: usize,
    n: usize,
    entries: Vec<Jet>,
}

impl CoefficientRow {
    /// The base row of an order-`k` equation, `k = entries.len() - 1`.
    pub fn base(entries: Vec<Jet>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::InvalidInput(
                "a coefficient row needs at least two entries (order >= 1)".into(),
            ));
        }
        let center = entries[0].center();
        if let Some(bad) = entries.iter().find(|e| e.center().to_bits() != center.to_bits()) {
            return Err(Error::CenterMismatch {
                left: center,
                right: bad.center(),
            });
        }
        let k = entries.len() - 1;
        Ok(CoefficientRow {
            stage_order: k,
            n: k,
            entries,
        })
    }

    pub fn stage_order(&self) -> usize {
        self.stage_order
    }

    /// The derivative order this row expresses.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Jet] {
        &self.entries
    }

    pub fn center(&self) -> f64 {
        self.entries[0].center()
    }

    pub fn is_base(&self) -> bool {
        self.n == self.stage_order
    }
}

/// Row `prev.n + 1` from row `prev.n` and the stage's base row.
pub fn advance_row(prev: &CoefficientRow, base: &CoefficientRow) -> Result<CoefficientRow> {
    let k = base.stage_order;
    if !base.is_base() {
        return Err(Error::InvalidInput(format!(
            "base row must have n == stage order (got n = {}, k = {k})",
            base.n
        )));
    }
    if prev.stage_order != k {
        return Err(Error::InvalidInput(format!(
            "row of stage order {} advanced with a base row of order {k}",
            prev.stage_order
        )));
    }
    let n = prev.n + 1;
    let lead = &prev.entries[0];
    let depth_err = |e: Error| match e {
        Error::DepthExhausted { .. } => Error::RecursionDepth { n },
        other => other,
    };
    let mut entries = Vec::with_capacity(k + 1);
    for j in 0..=k {
        let mut entry = prev.entries[j]
            .derivative()
            .map_err(depth_err)?
            .add(&lead.mul(&base.entries[j])?)?;
        if j + 1 < k {
            entry = entry.add(&prev.entries[j + 1])?;
        }
        entries.push(entry);
    }
    Ok(CoefficientRow {
        stage_order: k,
        n,
        entries,
    })
}

/// Rows `n = k ..= n_max`, the first one being `base` itself.
pub fn generate_rows(base: &CoefficientRow, n_max: usize) -> Result<Vec<CoefficientRow>> {
    if !base.is_base() {
        return Err(Error::InvalidInput("generate_rows needs a base row".into()));
    }
    if n_max < base.stage_order {
        return Err(Error::InvalidInput(format!(
            "n_max {n_max} is below the stage order {}",
            base.stage_order
        )));
    }
    let mut rows = Vec::with_capacity(n_max - base.stage_order + 1);
    rows.push(base.clone());
    for _ in base.stage_order..n_max {
        let next = advance_row(rows.last().expect("non-empty"), base)?;
        rows.push(next);
    }
    Ok(rows)
}
