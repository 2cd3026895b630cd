//! `fpquad` — evaluate Hadamard finite-part integrals, reproduce the
//! benchmark tables/figures, and compute a-priori error bounds.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use fpquad::engine::{evaluate_hfp, search_optimal_n};
use fpquad::{SearchCriterion, WeightFamily};
use fpquad_cli::config::{ExperimentConfig, ExperimentKind, OutputFormat};
use fpquad_cli::output::{default_output_path, format_float, write_output};
use fpquad_cli::{experiments, registry, CliError};

#[derive(Parser)]
#[command(
    name = "fpquad",
    version,
    about = "Finite-part (and Cauchy principal value) quadrature harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one finite-part integral.
    Eval(EvalArgs),
    /// Re-run a benchmark experiment and write its CSV/JSON file.
    Reproduce(ReproduceArgs),
    /// Compute the a-priori error bound for a builtin integrand.
    Bound(BoundArgs),
    /// Run the built-in consistency checks.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightArg {
    Legendre,
    Chebyshev1,
    Jacobi,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, value_enum, default_value = "legendre")]
    weight: WeightArg,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    /// Interval endpoints.
    #[arg(long, default_value_t = -1.0)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    /// Singularity location inside (a, b).
    #[arg(long)]
    xi: f64,
    /// Pole order minus one: the integrand divides by (x - xi)^{p+1}.
    #[arg(long, default_value_t = 0)]
    p: usize,
    /// Gauss order.
    #[arg(long)]
    m: usize,
    /// Interpolation node count (exclusive with --search-n).
    #[arg(long, conflicts_with = "search_n")]
    n: Option<usize>,
    /// Search range lo:hi for the node count.
    #[arg(long, value_name = "LO:HI")]
    search_n: Option<String>,
    /// Exact value; switches the search criterion to reference mode.
    #[arg(long)]
    exact: Option<f64>,
    /// Builtin integrand name.
    #[arg(long = "fn", value_name = "NAME")]
    function: String,
    /// Integrand parameter, key=value (repeatable).
    #[arg(long = "fn-param", value_name = "KEY=VALUE")]
    fn_param: Vec<String>,
    /// Emit the result as JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReproduceArgs {
    /// table1 | table2 | table3 | fig1 | fig2 (or use --config).
    experiment: Option<String>,
    /// TOML experiment configuration file.
    #[arg(long, conflicts_with = "experiment")]
    config: Option<PathBuf>,
    /// Output path (defaults to `fpquad-<experiment>.<ext>`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct BoundArgs {
    /// Builtin integrand name (needs a complex evaluator).
    #[arg(long = "fn", value_name = "NAME")]
    function: String,
    #[arg(long = "fn-param", value_name = "KEY=VALUE")]
    fn_param: Vec<String>,
    /// Evaluate at this single ellipse parameter instead of the rho grid.
    #[arg(long)]
    rho: Option<f64>,
    /// Ellipse parameter of the integrand's nearest complex singularity.
    #[arg(long)]
    rho_sing: Option<f64>,
    /// Override the sampled boundary maximum M with a user certificate.
    #[arg(long)]
    m_override: Option<f64>,
    /// Gauss order.
    #[arg(long)]
    m: usize,
    /// Interpolation node count.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    p: usize,
    /// Bound on |f^(n+1)| over the interval.
    #[arg(long, default_value_t = 0.0)]
    m1: f64,
    /// Bound on |f^(n+2)| over the interval.
    #[arg(long, default_value_t = 0.0)]
    m2: f64,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    /// Ellipse boundary samples.
    #[arg(long, default_value_t = 256)]
    samples: usize,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{err}");
                    ExitCode::from(1)
                }
            };
        }
    };
    let result = match cli.command {
        Command::Eval(args) => run_eval(args),
        Command::Reproduce(args) => run_reproduce(args),
        Command::Bound(args) => run_bound(args),
        Command::Selftest => run_selftest(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn parse_fn_params(raw: &[String]) -> Result<BTreeMap<String, f64>, CliError> {
    let mut params = BTreeMap::new();
    for entry in raw {
        let (key, value) = entry.split_once('=').ok_or_else(|| {
            CliError::Validation(format!("--fn-param expects key=value, got `{entry}`"))
        })?;
        let value: f64 = value.parse().map_err(|e| {
            CliError::Validation(format!("--fn-param {key}: invalid number `{value}`: {e}"))
        })?;
        params.insert(key.to_string(), value);
    }
    Ok(params)
}

fn build_weight(args: &EvalArgs) -> Result<WeightFamily, CliError> {
    Ok(match args.weight {
        WeightArg::Legendre => WeightFamily::legendre(args.a, args.b)?,
        WeightArg::Chebyshev1 => WeightFamily::chebyshev1(args.a, args.b)?,
        WeightArg::Jacobi => WeightFamily::jacobi(args.alpha, args.beta, args.a, args.b)?,
    })
}

fn parse_search_range(raw: &str) -> Result<(usize, usize), CliError> {
    let (lo, hi) = raw
        .split_once(':')
        .ok_or_else(|| CliError::Validation(format!("--search-n expects LO:HI, got `{raw}`")))?;
    let parse = |s: &str| -> Result<usize, CliError> {
        s.parse()
            .map_err(|e| CliError::Validation(format!("--search-n: `{s}` is not a count: {e}")))
    };
    Ok((parse(lo)?, parse(hi)?))
}

fn run_eval(args: EvalArgs) -> Result<(), CliError> {
    let weight = build_weight(&args)?;
    let params = parse_fn_params(&args.fn_param)?;
    let integrand = registry::builtin(&args.function, &params)?;

    let n = match (args.n, &args.search_n) {
        (Some(n), _) => n,
        (None, Some(range)) => {
            let (lo, hi) = parse_search_range(range)?;
            let criterion = match args.exact {
                Some(value) => SearchCriterion::Reference(value),
                None => SearchCriterion::Stabilization,
            };
            let (n_hat, _) = search_optimal_n(
                &integrand,
                &weight,
                args.xi,
                args.p,
                args.m,
                (lo.max(args.p + 1), hi),
                criterion,
            )?;
            n_hat
        }
        (None, None) => {
            return Err(CliError::Validation(
                "one of --n or --search-n is required".into(),
            ))
        }
    };

    let result = evaluate_hfp(&integrand, &weight, args.xi, args.p, args.m, n)?;
    if !result.value.is_finite() {
        return Err(CliError::Numerical(format!(
            "evaluation produced a non-finite value {}",
            result.value
        )));
    }
    if args.json {
        let surrogate: Vec<serde_json::Value> = result
            .surrogate_terms
            .iter()
            .map(|(idx, term)| serde_json::json!({ "node": idx, "contribution": term }))
            .collect();
        let doc = serde_json::json!({
            "schema": "fpquad.eval.v1",
            "integrand": integrand.label(),
            "value": result.value,
            "gauss_sum": result.gauss_sum,
            "moment_sum": result.moment_sum,
            "surrogate_terms": surrogate,
            "closest_indices": result.closest_indices,
            "parameters": {
                "m": result.parameters.m,
                "n": result.parameters.n,
                "nu": result.parameters.nu,
                "h": result.parameters.h,
                "p": result.parameters.p,
                "xi": result.parameters.xi,
            },
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("serialises")
        );
    } else {
        println!("value      = {}", format_float(result.value));
        println!("gauss sum  = {}", format_float(result.gauss_sum));
        println!("moment sum = {}", format_float(result.moment_sum));
        println!(
            "n = {}, nu = {}, h = {}, closest Gauss node(s): {:?}",
            result.parameters.n, result.parameters.nu, result.parameters.h, result.closest_indices
        );
    }
    Ok(())
}

fn workers_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var("FPQUAD_WORKERS") {
        Ok(raw) => {
            let count: usize = raw.parse().map_err(|e| {
                CliError::Validation(format!("FPQUAD_WORKERS=`{raw}` is not a count: {e}"))
            })?;
            if count == 0 {
                return Err(CliError::Validation("FPQUAD_WORKERS must be >= 1".into()));
            }
            Ok(Some(count))
        }
        Err(_) => Ok(None),
    }
}

fn run_reproduce(args: ReproduceArgs) -> Result<(), CliError> {
    let mut config = match (&args.experiment, &args.config) {
        (Some(name), None) => {
            let kind = ExperimentKind::parse(name)?;
            if kind == ExperimentKind::Single {
                return Err(CliError::Validation(
                    "`single` is not a reproducible preset; use `eval` or --config".into(),
                ));
            }
            ExperimentConfig::preset(kind)?
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            ExperimentConfig::from_toml(&text)?
        }
        _ => {
            return Err(CliError::Validation(
                "give an experiment name or --config <file>".into(),
            ))
        }
    };
    if let Some(format) = args.format {
        config.format = match format {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        };
    }
    if let Some(out) = args.out {
        config.output = Some(out);
    }

    let rows = experiments::run_experiment(&config, workers_from_env()?)?;
    let path = config
        .output
        .clone()
        .unwrap_or_else(|| default_output_path(&config));
    write_output(&config, &rows, &path)?;

    let failures = rows.iter().filter(|r| {
        r.note
            .as_deref()
            .map(|n| n.starts_with("error:"))
            .unwrap_or(false)
    });
    for row in failures {
        eprintln!(
            "row (case={}, m={}) failed: {}",
            row.case,
            row.m,
            row.note.as_deref().unwrap_or("")
        );
    }
    println!("wrote {} rows to {}", rows.len(), path.display());
    Ok(())
}

fn run_bound(args: BoundArgs) -> Result<(), CliError> {
    let params = parse_fn_params(&args.fn_param)?;
    let integrand = registry::builtin(&args.function, &params)?;
    if !integrand.has_complex() {
        return Err(CliError::Validation(format!(
            "integrand `{}` has no complex evaluator",
            integrand.label()
        )));
    }
    let complex = |z| integrand.complex_value(z).expect("checked above");

    let report = match (args.rho, args.m_override) {
        (Some(rho), Some(m_max)) => fpquad::bounds::combined_bound(
            rho, m_max, args.m, args.alpha, args.beta, args.m1, args.m2, args.n, args.p,
        )?,
        (Some(rho), None) => {
            let spec = fpquad::bounds::EllipseSpec::new(rho, args.samples)?;
            let m_max = fpquad::bounds::max_on_ellipse(complex, spec)?;
            let mut report = fpquad::bounds::combined_bound(
                rho, m_max, args.m, args.alpha, args.beta, args.m1, args.m2, args.n, args.p,
            )?;
            report.m_estimated = true;
            report
        }
        (None, m_override) => {
            if let Some(m_max) = m_override {
                return Err(CliError::Validation(format!(
                    "--m-override {m_max} needs an explicit --rho"
                )));
            }
            fpquad::bounds::best_bound_over_grid(
                complex,
                args.rho_sing,
                args.m,
                args.alpha,
                args.beta,
                args.m1,
                args.m2,
                args.n,
                args.p,
            )?
        }
    };

    if args.json {
        let doc = serde_json::json!({
            "schema": "fpquad.bound.v1",
            "integrand": integrand.label(),
            "gauss_term": report.gauss_term,
            "interp_term": report.interp_term,
            "total": report.total,
            "rho": report.inputs.rho,
            "boundary_max": report.inputs.m_max,
            "boundary_max_estimated": report.m_estimated,
            "m": report.inputs.m,
            "n": report.inputs.n,
            "p": report.inputs.p,
            "m1": report.inputs.m1,
            "m2": report.inputs.m2,
            "alpha": report.inputs.alpha,
            "beta": report.inputs.beta,
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("serialises")
        );
    } else {
        let status = if report.m_estimated {
            "ESTIMATED from boundary sampling (lower estimate of the true maximum)"
        } else {
            "user-supplied"
        };
        println!("rho        = {}", report.inputs.rho);
        println!(
            "M(eps_rho) = {} [{status}]",
            format_float(report.inputs.m_max)
        );
        println!("gauss term = {}", format_float(report.gauss_term));
        println!("interp term= {}", format_float(report.interp_term));
        println!("total bound= {}", format_float(report.total));
    }
    Ok(())
}

/// Fast oracle-style consistency checks across the library.
fn run_selftest() -> Result<(), CliError> {
    use fpquad::combinatorics::{cycle_index_explicit, cycle_index_prefix, partitions_of};
    use fpquad::interpolation::{basis_derivative_oracle, coefficient_table, layout_nodes};
    use fpquad::moments::finite_part_moments;
    use fpquad::orthogonal::{gauss_rule, weight_mass};
    use fpquad::specialfn::{exact_reference, exponential_integral, ReferenceLabel};
    use fpquad::Integrand;

    let mut failures = 0usize;
    let mut check = |name: &str, ok: bool| {
        println!("{} {name}", if ok { "ok  " } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };

    // cycle index: recursion vs explicit partition sum
    let x = [0.3, -1.2, 2.0, 0.7, -0.5];
    let z = cycle_index_prefix(&x);
    let explicit = cycle_index_explicit(&x).map_err(CliError::from)?;
    check(
        "cycle index recursion vs partition sum",
        (z[5] - explicit).abs() <= 1e-12 * (1.0 + z[5].abs()),
    );
    check(
        "cycle index normalisation at ones",
        (cycle_index_prefix(&[1.0; 16])[16] - 1.0).abs() <= 1e-14,
    );
    check("partition count p(7) = 15", partitions_of(7)?.len() == 15);

    // gauss rules: mass and polynomial exactness
    let w = WeightFamily::legendre(-1.0, 1.0)?;
    let rule = gauss_rule(&w, 6)?;
    let mass: f64 = rule.weights().iter().sum();
    check(
        "gauss weights sum to the weight mass",
        (mass - weight_mass(&w)).abs() <= 1e-12 * weight_mass(&w),
    );
    check(
        "gauss rule integrates x^10 over (-1,1)",
        (rule.integrate(|x| x.powi(10)) - 2.0 / 11.0).abs() <= 1e-12,
    );

    // coefficients vs the polynomial oracle
    let layout = layout_nodes(0.25, (-1.0, 1.0), 8)?;
    let table = coefficient_table(&layout, 1)?;
    let mut coeff_ok = true;
    for i in 0..=8usize {
        for k in 2..=8usize {
            let want = basis_derivative_oracle(layout.nodes(), i, k, 0.25)?;
            if (table.coefficient(i, k) - want).abs() > (1e-10 * want.abs()).max(1e-10) {
                coeff_ok = false;
            }
        }
    }
    check("derivative coefficients vs polynomial oracle", coeff_ok);

    // moments
    let mv = finite_part_moments(&w, 0.0, 1)?;
    check(
        "flat-weight moments at xi = 0",
        mv.value(1) == 0.0 && (mv.value(2) + 2.0).abs() <= 1e-14,
    );

    // special functions
    let ei = exponential_integral(1.0)?;
    check(
        "exponential integral at 1",
        (ei - 1.8951178163559368).abs() <= 1e-13 * ei.abs(),
    );

    // full rule on the entire-integrand benchmark
    let f = Integrand::new(
        "exp",
        |x: f64| x.exp(),
        |xi: f64, p: usize| vec![xi.exp(); p + 1],
    );
    let exact = exact_reference(ReferenceLabel::I1, 1e-5, 0, None)?.value;
    let value = evaluate_hfp(&f, &w, 1e-5, 0, 7, 12)?.value;
    check(
        "full rule reproduces the exponential benchmark",
        (value - exact).abs() <= 1e-12,
    );

    if failures > 0 {
        Err(CliError::Numerical(format!(
            "{failures} selftest check(s) failed"
        )))
    } else {
        println!("all selftest checks passed");
        Ok(())
    }
}
