//! Problem files.
//!
//! ```toml
//! order = 2
//! # p_{k,1} .. p_{k,k+1} of y^(k) = p_{k,1} y^(k-1) + ... + p_{k,k} y + p_{k,k+1},
//! # each as monomial coefficients in increasing degree
//! coefficients = [[0.0], [1.0], [0.0]]
//! conditions = [[1.0, 2.718281828459045], [0.0, 1.0]]
//!
//! [grid]
//! start = 0.0
//! stop = 1.0
//! count = 5
//! # or: points = [0.1, 0.5]
//!
//! [solver]
//! n_trunc = 40
//! depth_margin = 8
//! tail_tol = 1e-10
//! ordering = "nearest-last"   # or "as-given"
//!
//! [oracle]
//! enabled = true
//! tolerance = 1e-8
//! ```

use std::path::Path;

use fvp_core::{Condition, ConditionOrder, FunctionValueProblem, SolverConfig};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub order: usize,
    pub coefficients: Vec<Vec<f64>>,
    pub conditions: Vec<[f64; 2]>,
    pub grid: GridConfig,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub oracle: OracleSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub count: Option<usize>,
    pub points: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub n_trunc: Option<usize>,
    pub depth_margin: Option<usize>,
    pub depth: Option<usize>,
    pub tail_tol: Option<f64>,
    pub ordering: Option<Ordering>,
    pub snap_to_conditions: Option<bool>,
    pub coincidence_tol: Option<f64>,
    pub parallel: Option<bool>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ordering {
    AsGiven,
    NearestLast,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    #[serde(default)]
    pub enabled: bool,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_step_tol")]
    pub step_tol: f64,
}

impl Default for OracleSection {
    fn default() -> Self {
        OracleSection {
            enabled: false,
            tolerance: default_tolerance(),
            step_tol: default_step_tol(),
        }
    }
}

fn default_tolerance() -> f64 {
    1e-8
}

fn default_step_tol() -> f64 {
    1e-13
}

impl ProblemConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: ProblemConfig = toml::from_str(text).map_err(|e| e.to_string())?;
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), String> {
        if self.order == 0 {
            return Err("key `order`: must be at least 1".into());
        }
        if self.coefficients.len() != self.order + 1 {
            return Err(format!(
                "key `coefficients`: order {} needs {} polynomials, got {}",
                self.order,
                self.order + 1,
                self.coefficients.len()
            ));
        }
        if self.conditions.len() != self.order {
            return Err(format!(
                "key `conditions`: order {} needs {} conditions, got {}",
                self.order,
                self.order,
                self.conditions.len()
            ));
        }
        self.grid.points()?;
        let s = &self.solver;
        if s.tail_tol.is_some_and(|t| !(t > 0.0)) {
            return Err("key `solver.tail_tol`: must be positive".into());
        }
        if s.coincidence_tol.is_some_and(|t| !(t >= 0.0)) {
            return Err("key `solver.coincidence_tol`: must be non-negative".into());
        }
        if !(self.oracle.tolerance > 0.0) {
            return Err("key `oracle.tolerance`: must be positive".into());
        }
        if !(self.oracle.step_tol > 0.0) {
            return Err("key `oracle.step_tol`: must be positive".into());
        }
        self.problem()
            .map_err(|e| format!("key `conditions`/`coefficients`: {e}"))?;
        Ok(())
    }

    pub fn problem(&self) -> fvp_core::Result<FunctionValueProblem> {
        FunctionValueProblem::new(
            self.coefficients.clone(),
            self.conditions
                .iter()
                .map(|[x, y]| Condition::new(*x, *y))
                .collect(),
        )
    }

    pub fn solver_config(&self) -> SolverConfig {
        let mut cfg = SolverConfig::default();
        let s = &self.solver;
        if let Some(v) = s.n_trunc {
            cfg.n_trunc = v;
        }
        if let Some(v) = s.depth_margin {
            cfg.depth_margin = v;
        }
        cfg.depth = s.depth;
        if let Some(v) = s.tail_tol {
            cfg.tail_tol = v;
        }
        if let Some(v) = s.ordering {
            cfg.ordering = match v {
                Ordering::AsGiven => ConditionOrder::AsGiven,
                Ordering::NearestLast => ConditionOrder::NearestLast,
            };
        }
        if let Some(v) = s.snap_to_conditions {
            cfg.snap_to_conditions = v;
        }
        if let Some(v) = s.coincidence_tol {
            cfg.coincidence_tol = v;
        }
        if let Some(v) = s.parallel {
            cfg.parallel = v;
        }
        cfg
    }
}

impl GridConfig {
    pub fn points(&self) -> Result<Vec<f64>, String> {
        let pts = match (&self.points, self.start, self.stop, self.count) {
            (Some(p), None, None, None) => p.clone(),
            (None, Some(lo), Some(hi), Some(n)) => {
                if n == 0 {
                    return Err("key `grid.count`: must be at least 1".into());
                }
                if n == 1 {
                    vec![lo]
                } else {
                    (0..n)
                        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                        .collect()
                }
            }
            (Some(_), ..) => {
                return Err(
                    "key `grid.points`: give either `points` or `start`/`stop`/`count`, not both"
                        .into(),
                )
            }
            (None, lo, hi, n) => {
                let missing = [("start", lo.is_none()), ("stop", hi.is_none()), ("count", n.is_none())]
                    .iter()
                    .filter(|(_, m)| *m)
                    .map(|(k, _)| format!("`grid.{k}`"))
                    .collect::<Vec<_>>()
                    .join(", ");
                return Err(format!("missing key {missing} (or give `grid.points`)"));
            }
        };
        if pts.is_empty() {
            return Err("key `grid.points`: needs at least one point".into());
        }
        if let Some(bad) = pts.iter().find(|x| !x.is_finite()) {
            return Err(format!("key `grid`: point {bad} is not finite"));
        }
        Ok(pts)
    }
}
