use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use illposed::discretize::{direct_transform, fft_multiplier, matrix_pipeline, plancherel, KernelSampler, MatrixOperator};
use illposed::distribution::{decreasing_rearrangement_exact, increasing_rearrangement, reweight};
use illposed::estimate::{interval_estimate, ratio_column, regression_estimate};
use illposed::gallery::{self, Analysis, Expected, OperatorModel};
use illposed::{acceptance, report, Error, GridSpec, Thresholds};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "illposed", version, about = "Degree of ill-posedness from spectral data")]
struct Cli {
    /// TOML file overriding thresholds (tau_mild, tau_severe, tau_collapse, window_fraction, ...).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Model catalogue.
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
    /// Distribution function, ratios, interval and classification of a model.
    Analyze {
        #[arg(long)]
        model: String,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Samples of the decreasing (or increasing) rearrangement.
    Rearrange {
        #[arg(long)]
        model: String,
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
        #[arg(long, value_enum, default_value_t = Mode::Decreasing)]
        mode: Mode,
        /// Smallest t (decreasing mode; increasing mode samples (0, 1)).
        #[arg(long, default_value_t = 1e-3)]
        t_min: f64,
        #[arg(long, default_value_t = 1e3)]
        t_max: f64,
        #[arg(long, default_value_t = GridSpec::DEFAULT_POINTS)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Emit::Csv)]
        emit: Emit,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distribution function with respect to a reweighted measure.
    Reweight {
        #[arg(long)]
        model: String,
        /// uniform, exp-pi or exp-t-k2.
        #[arg(long)]
        density: String,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Matrix discretization -> singular values -> interval.
    Discretize {
        #[arg(long, value_enum)]
        operator: Operator,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sampled multiplier |h^|^2 of a convolution kernel via FFT.
    FftMultiplier {
        #[arg(long, value_enum)]
        kernel: Kernel,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long = "L", alias = "l", default_value_t = 12.0)]
        l: f64,
        #[arg(long = "N", alias = "n", default_value_t = 4096)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the acceptance suite.
    Check,
}

#[derive(Subcommand)]
enum GalleryAction {
    List {
        #[arg(long, value_enum)]
        emit: Option<Emit>,
    },
}

#[derive(clap::Args)]
struct GridArgs {
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,
    #[arg(long)]
    eps_min: Option<f64>,
    #[arg(long)]
    eps_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Decreasing,
    Increasing,
}

#[derive(Clone, Copy, ValueEnum)]
enum Operator {
    Hilbert,
    #[value(name = "j_alpha")]
    JAlpha,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kernel {
    Gaussian,
    Laplace,
}

/// Exit status with its message.
enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn load_thresholds(path: Option<&Path>) -> CliResult<Thresholds> {
    let Some(path) = path else { return Ok(Thresholds::default()) };
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let t: Thresholds = toml::from_str(&text).map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))?;
    t.validate()?;
    Ok(t)
}

fn parse_params(raw: &[String]) -> CliResult<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for kv in raw {
        let (k, v) = kv.split_once('=').ok_or_else(|| Failure::Usage(format!("--param expects k=v, got `{kv}`")))?;
        let v: f64 = v.trim().parse().map_err(|_| Failure::Usage(format!("parameter {k}: `{v}` is not a number")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

/// The model's default grid with any flags applied on top.
fn grid_for(model: &OperatorModel, g: &GridArgs) -> GridSpec {
    let default = model.default_grid();
    let (d_max, d_points) = match default {
        GridSpec::Halving { eps_max, points } | GridSpec::Geometric { eps_max, points, .. } => (eps_max, points),
    };
    let eps_max = g.eps_max.unwrap_or(d_max);
    let points = g.points.unwrap_or(d_points);
    match (g.eps_min, default) {
        (Some(eps_min), _) => GridSpec::Geometric { eps_max, eps_min, points },
        (None, GridSpec::Geometric { eps_min, .. }) => GridSpec::Geometric { eps_max, eps_min, points },
        (None, GridSpec::Halving { .. }) => GridSpec::Halving { eps_max, points },
    }
}

fn emit(text: String, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Numerical(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render_analysis(a: &Analysis, form: Emit) -> String {
    match form {
        Emit::Csv => report::curve_csv(&a.phi, &a.ratios),
        Emit::Json => report::to_text(&report::analysis_json(a)),
    }
}

fn gallery_list(form: Option<Emit>) -> CliResult<()> {
    let models = gallery::list();
    let params = |p: &[(&str, f64)]| p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",");
    let text = match form {
        Some(Emit::Json) => report::to_text(&Value::Array(
            models
                .iter()
                .map(|m| {
                    json!({
                        "id": m.id,
                        "params": m.params.iter().map(|(k, v)| (k.to_string(), report::num(*v))).collect::<serde_json::Map<_, _>>(),
                        "measure": m.measure,
                        "expected": m.expected,
                    })
                })
                .collect(),
        )),
        Some(Emit::Csv) => {
            let mut s = String::from("id,params,measure,expected\n");
            for m in &models {
                s.push_str(&format!("{},\"{}\",{},{}\n", m.id, params(&m.params), m.measure, m.expected));
            }
            s
        }
        None => {
            let mut s = format!("{:<26} {:<32} {:<24} {}\n", "id", "params", "measure", "expected");
            for m in &models {
                s.push_str(&format!("{:<26} {:<32} {:<24} {}\n", m.id, params(&m.params), m.measure, m.expected));
            }
            s
        }
    };
    emit(text, None)
}

fn rearrange(
    model: &OperatorModel,
    mode: Mode,
    (t_min, t_max, points): (f64, f64, usize),
    form: Emit,
) -> CliResult<String> {
    let (lambda, mu) = model
        .multiplier()
        .ok_or_else(|| Failure::Usage(format!("model {} has no multiplier to rearrange", model.id)))?;
    if points < 2 {
        return Err(Failure::Usage("--points must be at least 2".into()));
    }
    let ts: Vec<f64> = match mode {
        Mode::Decreasing => {
            if !(t_min > 0.0 && t_max > t_min) {
                return Err(Failure::Usage(format!("need 0 < t-min < t-max, got {t_min}, {t_max}")));
            }
            let r = (t_max / t_min).ln() / (points - 1) as f64;
            (0..points).map(|i| if i + 1 == points { t_max } else { t_min * (r * i as f64).exp() }).collect()
        }
        Mode::Increasing => (1..=points).map(|i| i as f64 / (points + 1) as f64).collect(),
    };
    let mut rows = Vec::with_capacity(ts.len());
    for t in ts {
        let v = match mode {
            Mode::Decreasing => decreasing_rearrangement_exact(lambda, mu, t)?,
            Mode::Increasing => increasing_rearrangement(lambda, mu, t)?,
        };
        rows.push((t, v));
    }
    let (kind, col) = match mode {
        Mode::Decreasing => ("decreasing_rearrangement", "lambda_star"),
        Mode::Increasing => ("increasing_rearrangement", "lambda_sharp"),
    };
    Ok(match form {
        Emit::Csv => report::pairs_csv(("t", col), &rows),
        Emit::Json => report::to_text(&report::pairs_json(kind, &model.id, ("t", col), &rows)),
    })
}

fn reweighted(model: &OperatorModel, density: &str, g: &GridArgs, t: &Thresholds, form: Emit) -> CliResult<String> {
    let (lambda, mu) = model
        .multiplier()
        .ok_or_else(|| Failure::Usage(format!("model {} has no multiplier to reweight", model.id)))?;
    t.validate()?;
    let grid = grid_for(model, g).points()?;
    let phi = reweight(lambda, mu, gallery::density(density, model)?, &grid)?;
    let interval = interval_estimate(&phi, t);
    let a = Analysis {
        model: model.id.clone(),
        params: model.params.clone(),
        ratios: ratio_column(&phi),
        regression: regression_estimate(&phi, t),
        phi,
        interval,
        essinf: None,
        expected: Expected::NotApplicable,
        agrees: true,
    };
    Ok(match form {
        Emit::Csv => report::curve_csv(&a.phi, &a.ratios),
        Emit::Json => {
            let mut v = report::analysis_json(&a);
            v["density"] = json!(density);
            report::to_text(&v)
        }
    })
}

fn fft(kernel: Kernel, (a, b, l, n): (f64, f64, f64, usize), form: Emit) -> CliResult<String> {
    let h = match kernel {
        Kernel::Gaussian => KernelSampler::gaussian(l, n)?,
        Kernel::Laplace => KernelSampler::laplace(a, b, l, n)?,
    };
    let m = fft_multiplier(&h)?;
    for w in &m.warnings {
        eprintln!("warning: {w}");
    }
    Ok(match form {
        Emit::Csv => report::sampled_csv(&m),
        Emit::Json => {
            let at_one = direct_transform(&h, 1.0).norm_sqr();
            report::to_text(&report::sampled_json(&h.name, &m, at_one, plancherel(&h, &m)))
        }
    })
}

fn check() -> CliResult<()> {
    let results = acceptance::run_all();
    for r in &results {
        print!("{}", r.render());
    }
    let passed = results.iter().filter(|r| r.passed()).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        Ok(())
    } else {
        let failed: Vec<String> = results.iter().filter(|r| !r.passed()).map(|r| r.number.to_string()).collect();
        Err(Failure::Numerical(format!("failing criteria: {}", failed.join(", "))))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let t = load_thresholds(cli.config.as_deref())?;
    match cli.command {
        Command::Gallery { action: GalleryAction::List { emit: form } } => gallery_list(form),
        Command::Analyze { model, grid, emit: form, out } => {
            let m = gallery::make(&model, &parse_params(&grid.params)?)?;
            let a = gallery::analyze(&m, Some(grid_for(&m, &grid)), &t)?;
            emit(render_analysis(&a, form), out.as_deref())
        }
        Command::Rearrange { model, params, mode, t_min, t_max, points, emit: form, out } => {
            let m = gallery::make(&model, &parse_params(&params)?)?;
            emit(rearrange(&m, mode, (t_min, t_max, points), form)?, out.as_deref())
        }
        Command::Reweight { model, density, grid, emit: form, out } => {
            let m = gallery::make(&model, &parse_params(&grid.params)?)?;
            emit(reweighted(&m, &density, &grid, &t, form)?, out.as_deref())
        }
        Command::Discretize { operator, alpha, n, emit: form, out } => {
            let op = match operator {
                Operator::Hilbert => MatrixOperator::Hilbert,
                Operator::JAlpha => MatrixOperator::RiemannLiouville { alpha },
            };
            let r = matrix_pipeline(op, n, &t)?;
            let text = match form {
                Emit::Csv => report::singular_values_csv(&r),
                Emit::Json => report::to_text(&report::pipeline_json(&r)),
            };
            emit(text, out.as_deref())
        }
        Command::FftMultiplier { kernel, a, b, l, n, emit: form, out } => emit(fft(kernel, (a, b, l, n), form)?, out.as_deref()),
        Command::Check => check(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        // clap exits 2 on usage errors and 0 for --help/--version.
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
