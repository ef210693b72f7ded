mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fvp_core::expansion::{expansion_report, Fixture};
use fvp_core::oracle::reference_solution;
use fvp_core::recursion::{generate_rows, CoefficientRow};
use fvp_core::{solve, Jet, JetSpec, SolutionReport};

use config::ProblemConfig;
use output::{records, status_code, write_csv, write_json};

const EXIT_CONFIG: u8 = 1;
const EXIT_POINTS: u8 = 2;

#[derive(Parser)]
#[command(name = "fvp", version, about = "Linear ODEs under function-value conditions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve on the configured grid and write CSV or JSON.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Solve with the shooting oracle and compare against the configured tolerance.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate the derivative-side expansion and its remainder.
    ExpandDemo {
        /// exp | sin | cos | poly:c0,c1,...
        #[arg(long, default_value = "exp")]
        function: String,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
    },
    /// Print the value at the center of every derivative-coefficient row.
    Rows {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        center: f64,
    },
    /// Tabulate the solution against N_trunc.
    ConvergenceTable {
        #[command(flatten)]
        common: Common,
        /// Comma-separated truncation orders.
        #[arg(long, value_delimiter = ',', default_values_t = [10usize, 20, 30, 40, 50])]
        n_values: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    n_trunc: Option<usize>,
    #[arg(long)]
    tail_tol: Option<f64>,
    #[arg(long, value_enum)]
    oracle: Option<Switch>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Switch {
    On,
    Off,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve {
            common,
            out,
            format,
        } => cmd_solve(&common, out.as_deref(), format),
        Command::Verify { common } => cmd_verify(&common),
        Command::ExpandDemo {
            function,
            a,
            x,
            n_max,
        } => cmd_expand_demo(&function, a, x, n_max),
        Command::Rows {
            config,
            n_max,
            center,
        } => cmd_rows(&config, n_max, center),
        Command::ConvergenceTable {
            common,
            n_values,
            out,
        } => cmd_convergence(&common, &n_values, out.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn load(common: &Common) -> Result<ProblemConfig, String> {
    let mut cfg = ProblemConfig::load(&common.config)?;
    if let Some(n) = common.n_trunc {
        cfg.solver.n_trunc = Some(n);
    }
    if let Some(t) = common.tail_tol {
        if !(t > 0.0) {
            return Err("--tail-tol must be positive".into());
        }
        cfg.solver.tail_tol = Some(t);
    }
    match common.oracle {
        Some(Switch::On) => cfg.oracle.enabled = true,
        Some(Switch::Off) => cfg.oracle.enabled = false,
        None => {}
    }
    Ok(cfg)
}

fn run(cfg: &ProblemConfig, with_oracle: bool) -> Result<SolutionReport, String> {
    let problem = cfg.problem().map_err(|e| e.to_string())?;
    let points = cfg.grid.points()?;
    let mut report = solve(&problem, &points, &cfg.solver_config());
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for (x, e) in report.failures() {
        eprintln!("x = {x}: {e}");
    }
    if with_oracle {
        let reference = reference_solution(&problem, cfg.oracle.step_tol)
            .map_err(|e| format!("oracle: {e}"))?;
        report
            .attach_oracle(|x| reference.eval(x))
            .map_err(|e| format!("oracle: {e}"))?;
    }
    Ok(report)
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, String> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| format!("cannot write {}: {e}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_solve(common: &Common, out: Option<&Path>, format: Format) -> Result<u8, String> {
    let cfg = load(common)?;
    let report = run(&cfg, cfg.oracle.enabled)?;
    let recs = records(&report);
    let mut w = open_out(out)?;
    match format {
        Format::Csv => write_csv(&mut w, &recs, cfg.oracle.enabled),
        Format::Json => write_json(&mut w, &recs),
    }
    .and_then(|_| w.flush())
    .map_err(|e| format!("write failed: {e}"))?;
    Ok(if report.all_ok() { 0 } else { EXIT_POINTS })
}

fn cmd_verify(common: &Common) -> Result<u8, String> {
    let cfg = load(common)?;
    let report = run(&cfg, true)?;
    let dev = report.max_deviation().unwrap_or(f64::NAN);
    let failed = report.failures().count();
    println!(
        "max deviation {dev:.6e} over {} of {} points (tolerance {:.1e})",
        report.eval_points.len() - failed,
        report.eval_points.len(),
        cfg.oracle.tolerance
    );
    Ok(if failed == 0 && dev <= cfg.oracle.tolerance {
        0
    } else {
        EXIT_POINTS
    })
}

fn cmd_expand_demo(function: &str, a: f64, x: f64, n_max: usize) -> Result<u8, String> {
    let f: Fixture = function.parse().map_err(|e: fvp_core::Error| e.to_string())?;
    if !a.is_finite() || !x.is_finite() {
        return Err("--a and --x must be finite".into());
    }
    println!("# f = {f}, a = {a}, x = {x}");
    println!("{:>4} {:>24} {:>24} {:>24}", "n", "Z_n", "R_n", "|f - Z_n - R_n|");
    for n in 0..=n_max {
        let r = expansion_report(&f, a, x, n, 1e-13).map_err(|e| e.to_string())?;
        println!(
            "{:>4} {:>24.16e} {:>24.16e} {:>24.16e}",
            n, r.z_value, r.r_value, r.identity_residual
        );
    }
    Ok(0)
}

fn cmd_rows(path: &Path, n_max: usize, center: f64) -> Result<u8, String> {
    let cfg = ProblemConfig::load(path)?;
    let k = cfg.order;
    if n_max < k {
        return Err(format!("--n-max must be at least the order {k}"));
    }
    if !center.is_finite() {
        return Err("--center must be finite".into());
    }
    let spec = JetSpec::new(n_max - k + 2, center).map_err(|e| e.to_string())?;
    let entries = cfg
        .coefficients
        .iter()
        .map(|p| Jet::from_polynomial(p, spec))
        .collect::<fvp_core::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    let base = CoefficientRow::base(entries).map_err(|e| e.to_string())?;
    let rows = generate_rows(&base, n_max).map_err(|e| e.to_string())?;

    println!("# y^(n) = p_n1 y^(k-1) + ... + p_nk y + p_n,k+1 at x = {center}");
    let mut header = format!("{:>4}", "n");
    for j in 1..=k + 1 {
        header.push_str(&format!(" {:>24}", format!("p_n{j}")));
    }
    println!("{header}");
    for row in &rows {
        let mut line = format!("{:>4}", row.n());
        for e in row.entries() {
            let v = e.value().unwrap_or(f64::NAN);
            line.push_str(&format!(" {v:>24.16e}"));
        }
        println!("{line}");
    }
    Ok(0)
}

fn cmd_convergence(common: &Common, n_values: &[usize], out: Option<&Path>) -> Result<u8, String> {
    let base = load(common)?;
    if n_values.is_empty() {
        return Err("--n-values is empty".into());
    }
    let points = base.grid.points()?;
    let mut w = open_out(out)?;
    let mut all_ok = true;
    let mut previous: Option<Vec<Option<f64>>> = None;
    let io_err = |e: io::Error| format!("write failed: {e}");

    writeln!(
        w,
        "{:>6} {:>24} {:>24} {:>24} status",
        "n", "x", "y_method", "change"
    )
    .map_err(io_err)?;
    for &n in n_values {
        let mut cfg = base.clone();
        cfg.solver.n_trunc = Some(n);
        let problem = cfg.problem().map_err(|e| e.to_string())?;
        let report = solve(&problem, &points, &cfg.solver_config());
        let values: Vec<Option<f64>> = report
            .outcomes
            .iter()
            .map(|o| o.as_ref().ok().map(|s| s.value))
            .collect();
        for (i, &x) in points.iter().enumerate() {
            let change = match (values[i], previous.as_ref().and_then(|p| p[i])) {
                (Some(v), Some(p)) => Some((v - p).abs()),
                _ => None,
            };
            let status = report.outcomes[i]
                .as_ref()
                .map_or_else(|e| status_code(e), |_| "ok");
            all_ok &= status == "ok";
            writeln!(
                w,
                "{:>6} {:>24.16e} {:>24} {:>24} {}",
                n,
                x,
                values[i].map_or("-".into(), |v| format!("{v:.16e}")),
                change.map_or("-".into(), |v| format!("{v:.16e}")),
                status
            )
            .map_err(io_err)?;
        }
        previous = Some(values);
    }
    w.flush().map_err(io_err)?;
    Ok(if all_ok { 0 } else { EXIT_POINTS })
}
