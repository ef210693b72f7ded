//! End-to-end solve of a function-value problem.
//!
//! For every evaluation point `x*` the base coefficients are expanded as
//! jets about `x*`, and the order is reduced one condition at a time until
//! the order-one stage yields the solution jet, whose constant term is
//! `y(x*)`. All stages share the single center `x*`; nothing is recentered.
//!
//! Points are independent, so a grid is solved in parallel and assembled in
//! input order.
//!
//! # Consumption order
//!
//! Mathematically the result does not depend on which condition is absorbed
//! first. Numerically it does: every reduced equation carries coefficients
//! with poles at the conditions already absorbed, and the final sum
//! amplifies rounding in their Taylor coefficients by roughly
//! `(|x* - x_last| / |x* - pole|)^N`. [`ConditionOrder::NearestLast`] orders
//! the absorption per evaluation point so that this ratio stays below one.
//! [`ConditionOrder::AsGiven`] follows the problem's own order verbatim.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::jet::{Jet, JetSpec};
use crate::problem::{Condition, FunctionValueProblem};
use crate::recursion::{generate_rows, CoefficientRow};
use crate::reduction::{compute_q, reduce_once, solve_order_zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionOrder {
    /// Stage `m` absorbs `conditions[m-1]`, so the last listed condition goes first.
    AsGiven,
    /// Per evaluation point: farthest condition first, nearest last. Ties keep
    /// the problem's order.
    NearestLast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Highest derivative order kept in every `Q` series.
    pub n_trunc: usize,
    /// Spare Taylor coefficients carried into the last stage.
    pub depth_margin: usize,
    /// Overrides the computed jet depth.
    pub depth: Option<usize>,
    /// A stage fails if its last summand exceeds `tail_tol * max(1, |Q|)`,
    /// both measured over the coefficients the remaining stages read,
    /// weighted by how strongly each reaches the solution value.
    pub tail_tol: f64,
    pub ordering: ConditionOrder,
    /// Return `y_i` at `x_i` directly, and evaluate points within
    /// `coincidence_tol` of a condition at that condition.
    pub snap_to_conditions: bool,
    pub coincidence_tol: f64,
    /// Distances `|x* - x_i|` beyond this raise a warning.
    pub interval_guard: f64,
    pub parallel: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            n_trunc: 40,
            depth_margin: 8,
            depth: None,
            tail_tol: 1e-10,
            ordering: ConditionOrder::NearestLast,
            snap_to_conditions: true,
            coincidence_tol: 1e-9,
            interval_guard: 3.0,
            parallel: true,
        }
    }
}

impl SolverConfig {
    /// Taylor depth for the base jets of an order-`k` problem.
    ///
    /// Stage `m` differentiates its base row `N - m` times, so the first
    /// stage has to carry `Σ_{m=1..k} (N - m)` coefficients for the later
    /// ones, plus one for the value and the margin.
    pub fn jet_depth(&self, k: usize) -> usize {
        if let Some(d) = self.depth {
            return d;
        }
        consumed_depth(self.n_trunc, k) + 1 + self.depth_margin
    }

    fn validate(&self, k: usize) -> Result<()> {
        if self.n_trunc < k {
            return Err(Error::InvalidInput(format!(
                "N_trunc {} must be at least the equation order {k}",
                self.n_trunc
            )));
        }
        if !(self.tail_tol > 0.0) {
            return Err(Error::InvalidInput("tail_tol must be positive".into()));
        }
        if self.jet_depth(k) == 0 {
            return Err(Error::InvalidInput("jet depth must be at least 1".into()));
        }
        Ok(())
    }
}

/// Taylor coefficients used up by stages `1..=k`: stage `m` differentiates
/// `N - m` times.
fn consumed_depth(n_trunc: usize, k: usize) -> usize {
    (1..=k).map(|m| n_trunc.saturating_sub(m)).sum()
}

/// What one stage did at one evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct StageDiagnostic {
    pub stage_order: usize,
    pub condition: Condition,
    pub n_trunc: usize,
    pub max_tail: f64,
    /// Valuation of `Q_1` at the center; positive means it vanishes there.
    pub q1_valuation: i32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Evaluation {
    /// Full reduction at the requested point.
    Pipeline,
    /// The point is a condition abscissa; its prescribed value was returned.
    ConditionValue,
    /// The point was within the coincidence tolerance of this condition
    /// abscissa and the reduction ran there.
    Snapped(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointSolution {
    pub value: f64,
    pub evaluation: Evaluation,
    pub stages: Vec<StageDiagnostic>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionReport {
    pub eval_points: Vec<f64>,
    /// `NaN` where the point failed.
    pub values: Vec<f64>,
    pub outcomes: Vec<std::result::Result<PointSolution, Error>>,
    pub warnings: Vec<String>,
    pub oracle_values: Option<Vec<f64>>,
    pub oracle_deviation: Option<Vec<f64>>,
}

impl SolutionReport {
    pub fn all_ok(&self) -> bool {
        self.outcomes.iter().all(|o| o.is_ok())
    }

    pub fn failures(&self) -> impl Iterator<Item = (f64, &Error)> {
        self.eval_points
            .iter()
            .zip(&self.outcomes)
            .filter_map(|(x, o)| o.as_ref().err().map(|e| (*x, e)))
    }

    /// Compares against an independent reference at every point.
    pub fn attach_oracle<F>(&mut self, reference: F) -> Result<()>
    where
        F: Fn(f64) -> Result<f64> + Sync,
    {
        let truth = self
            .eval_points
            .par_iter()
            .map(|&x| reference(x))
            .collect::<Result<Vec<f64>>>()?;
        let deviation = self
            .values
            .iter()
            .zip(&truth)
            .map(|(y, t)| (y - t).abs())
            .collect();
        self.oracle_values = Some(truth);
        self.oracle_deviation = Some(deviation);
        Ok(())
    }

    /// Largest oracle deviation over the points that solved; `None` without an oracle.
    pub fn max_deviation(&self) -> Option<f64> {
        let dev = self.oracle_deviation.as_ref()?;
        Some(
            dev.iter()
                .zip(&self.outcomes)
                .filter(|(_, o)| o.is_ok())
                .fold(0.0, |m, (d, _)| m.max(*d)),
        )
    }
}

/// The order in which stages absorb conditions: stage `k` first.
pub fn condition_ordering(problem: &FunctionValueProblem) -> Vec<Condition> {
    problem.conditions().iter().rev().copied().collect()
}

/// Absorption order (stage `k` first) used at one evaluation point.
pub fn consumption_order(
    problem: &FunctionValueProblem,
    x: f64,
    ordering: ConditionOrder,
) -> Vec<Condition> {
    match ordering {
        ConditionOrder::AsGiven => condition_ordering(problem),
        ConditionOrder::NearestLast => {
            // stable sort keeps the listed order among equidistant conditions,
            // listed-last absorbed first as in AsGiven
            let mut order = condition_ordering(problem);
            order.sort_by(|a, b| (b.x - x).abs().total_cmp(&(a.x - x).abs()));
            order
        }
    }
}

fn base_row(problem: &FunctionValueProblem, spec: JetSpec) -> Result<CoefficientRow> {
    let entries = problem
        .base_coeffs()
        .iter()
        .map(|p| Jet::from_polynomial(p, spec))
        .collect::<Result<Vec<_>>>()?;
    CoefficientRow::base(entries)
}

/// Runs every stage at `center`, absorbing `absorption` in sequence (stage
/// `k` first), and returns the solution jet with the per-stage diagnostics.
pub fn reduce_at_center(
    problem: &FunctionValueProblem,
    center: f64,
    absorption: &[Condition],
    cfg: &SolverConfig,
) -> Result<(Jet, Vec<StageDiagnostic>)> {
    let k = problem.order();
    cfg.validate(k)?;
    if absorption.len() != k {
        return Err(Error::InvalidInput(format!(
            "{} conditions given for an order-{k} problem",
            absorption.len()
        )));
    }
    let spec = JetSpec::new(cfg.jet_depth(k), center)?;
    let mut row = base_row(problem, spec)?;
    let mut diagnostics = Vec::with_capacity(k);

    for (idx, (cond, m)) in absorption.iter().zip((1..=k).rev()).enumerate() {
        let rows = generate_rows(&row, cfg.n_trunc)?;
        let q = compute_q(&rows, *cond, cfg.n_trunc)?;
        // Coefficient p of this stage's output reaches the solution value
        // scaled by about r^p, r the distance to the conditions still to be
        // absorbed, and only the powers those stages read matter.
        let top = consumed_depth(cfg.n_trunc, m - 1) as i32;
        let radius = absorption[idx + 1..]
            .iter()
            .fold(0.0f64, |r, c| r.max((c.x - center).abs()));
        for (i, (entry, term)) in q.entries.iter().zip(&q.tail_terms).enumerate() {
            let tail = term.weighted_max_through(top, radius);
            let limit = cfg.tail_tol * entry.weighted_max_through(top, radius).max(1.0);
            if tail > limit {
                return Err(Error::TailNotConverged {
                    stage_order: m,
                    entry: i + 1,
                    tail,
                    limit,
                    n_trunc: cfg.n_trunc,
                });
            }
        }
        diagnostics.push(StageDiagnostic {
            stage_order: m,
            condition: *cond,
            n_trunc: cfg.n_trunc,
            max_tail: q.max_tail(),
            q1_valuation: q.leading().valuation(),
        });
        if m == 1 {
            return Ok((solve_order_zero(&q)?, diagnostics));
        }
        row = reduce_once(&q)?;
    }
    unreachable!("an order-k problem always ends with an order-one stage")
}

/// Solution value at a single point.
pub fn solve_point(
    problem: &FunctionValueProblem,
    x: f64,
    cfg: &SolverConfig,
) -> Result<PointSolution> {
    if !x.is_finite() {
        return Err(Error::InvalidInput(format!("evaluation point {x} is not finite")));
    }
    let mut center = x;
    let mut evaluation = Evaluation::Pipeline;
    if cfg.snap_to_conditions {
        if let Some(c) = problem.conditions().iter().find(|c| c.x == x) {
            return Ok(PointSolution {
                value: c.y,
                evaluation: Evaluation::ConditionValue,
                stages: Vec::new(),
            });
        }
        let nearest = problem
            .conditions()
            .iter()
            .min_by(|a, b| (a.x - x).abs().total_cmp(&(b.x - x).abs()));
        if let Some(c) = nearest.filter(|c| (c.x - x).abs() <= cfg.coincidence_tol) {
            center = c.x;
            evaluation = Evaluation::Snapped(c.x);
        }
    }
    let absorption = consumption_order(problem, center, cfg.ordering);
    let (jet, stages) = reduce_at_center(problem, center, &absorption, cfg)?;
    Ok(PointSolution {
        value: jet.value()?,
        evaluation,
        stages,
    })
}

/// Solves at every point; failures are recorded per point.
pub fn solve(
    problem: &FunctionValueProblem,
    eval_points: &[f64],
    cfg: &SolverConfig,
) -> SolutionReport {
    let outcomes: Vec<_> = if cfg.parallel {
        eval_points
            .par_iter()
            .map(|&x| solve_point(problem, x, cfg))
            .collect()
    } else {
        eval_points
            .iter()
            .map(|&x| solve_point(problem, x, cfg))
            .collect()
    };
    let values = outcomes
        .iter()
        .map(|o| o.as_ref().map_or(f64::NAN, |s| s.value))
        .collect();

    let mut warnings = Vec::new();
    for &x in eval_points {
        if let Some(c) = problem
            .conditions()
            .iter()
            .find(|c| (c.x - x).abs() > cfg.interval_guard)
        {
            warnings.push(format!(
                "x = {x} is {} away from condition x = {}; accuracy degrades beyond {}",
                (c.x - x).abs(),
                c.x,
                cfg.interval_guard
            ));
        }
    }

    SolutionReport {
        eval_points: eval_points.to_vec(),
        values,
        outcomes,
        warnings,
        oracle_values: None,
        oracle_deviation: None,
    }
}
