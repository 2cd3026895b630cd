//! Experiment execution: expands a configuration into independent row
//! tasks, fans them out across a worker pool, and keeps the output in
//! config order regardless of completion order.

use std::time::Instant;

use fpquad::engine::{evaluate_baseline, evaluate_hfp, search_optimal_n};
use fpquad::specialfn::{exact_reference, ReferenceLabel};
use fpquad::{Integrand, SearchCriterion, WeightFamily};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ExperimentKind, NPolicy, SearchKind};
use crate::CliError;

/// One output row of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    /// Sub-block label: "p=0", "baseline", "lambda=2.5", "xi=-0.95", ...
    pub case: String,
    pub m: usize,
    pub n_used: Option<usize>,
    pub approx: Option<f64>,
    pub exact: Option<f64>,
    pub abs_error: Option<f64>,
    pub time_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

enum TaskKind {
    Evaluate {
        xi: f64,
        p: usize,
        n: usize,
    },
    SearchEvaluate {
        xi: f64,
        p: usize,
        lo: usize,
        hi: usize,
        criterion: SearchCriterion,
    },
    Baseline {
        xi: f64,
        p: usize,
    },
    Marker {
        note: String,
    },
}

struct Task {
    case: String,
    m: usize,
    kind: TaskKind,
    exact: Option<f64>,
    integrand: Integrand,
    weight: WeightFamily,
}

fn execute(task: &Task) -> ResultRow {
    let start = Instant::now();
    let mut row = ResultRow {
        case: task.case.clone(),
        m: task.m,
        n_used: None,
        approx: None,
        exact: task.exact,
        abs_error: None,
        time_s: 0.0,
        note: None,
    };
    match &task.kind {
        TaskKind::Marker { note } => {
            row.note = Some(note.clone());
        }
        TaskKind::Evaluate { xi, p, n } => {
            match evaluate_hfp(&task.integrand, &task.weight, *xi, *p, task.m, *n) {
                Ok(result) => {
                    row.n_used = Some(*n);
                    row.approx = Some(result.value);
                }
                Err(e) => row.note = Some(format!("error: {e}")),
            }
        }
        TaskKind::SearchEvaluate {
            xi,
            p,
            lo,
            hi,
            criterion,
        } => {
            match search_optimal_n(
                &task.integrand,
                &task.weight,
                *xi,
                *p,
                task.m,
                (*lo, *hi),
                *criterion,
            ) {
                Ok((n_hat, diagnostics)) => {
                    row.n_used = Some(n_hat);
                    row.approx = diagnostics
                        .evaluations
                        .iter()
                        .find(|(n, _)| *n == n_hat)
                        .map(|(_, value)| *value);
                }
                Err(e) => row.note = Some(format!("error: {e}")),
            }
        }
        TaskKind::Baseline { xi, p } => {
            match evaluate_baseline(&task.integrand, &task.weight, *xi, *p, task.m) {
                Ok(value) => row.approx = Some(value),
                Err(e) => row.note = Some(format!("error: {e}")),
            }
        }
    }
    if let (Some(approx), Some(exact)) = (row.approx, row.exact) {
        row.abs_error = Some((approx - exact).abs());
    }
    row.time_s = start.elapsed().as_secs_f64();
    row
}

fn search_range_around(m: usize, p: usize, lo: usize, hi: usize) -> (usize, usize) {
    // the search window [m - 10, m + 10], clipped to the configured limits
    // and the n > p requirement
    let lower = m.saturating_sub(10).max(lo).max(p + 1);
    let upper = (m + 10).min(hi).max(lower);
    (lower, upper)
}

fn expand_tasks(config: &ExperimentConfig) -> Result<Vec<Task>, CliError> {
    let weight = config.weight.build()?;
    let integrand = config.integrand.build()?;
    let mut tasks = Vec::new();

    let require = |ok: bool, message: &str| -> Result<(), CliError> {
        if ok {
            Ok(())
        } else {
            Err(CliError::Validation(message.to_string()))
        }
    };

    match config.experiment {
        ExperimentKind::Table1 | ExperimentKind::Fig2 => {
            require(
                config.integrand.name == "exp" && config.weight.family == "legendre",
                "table1/fig2 are defined for the exp integrand with the legendre weight",
            )?;
            let n_values: Vec<usize> = match &config.n_policy {
                NPolicy::List { values } => values.clone(),
                NPolicy::Fixed { n } => vec![*n],
                NPolicy::Search { .. } => {
                    return Err(CliError::Validation(
                        "n_policy: table1/fig2 sweep explicit n values; use mode = \"list\"".into(),
                    ))
                }
            };
            let p_values: &[usize] = match config.experiment {
                ExperimentKind::Table1 => &[0, 1],
                _ => &[1],
            };
            for &p in p_values {
                let exact = exact_reference(ReferenceLabel::I1, config.xi, p, None)?.value;
                for &m in &config.m {
                    for &n in &n_values {
                        tasks.push(Task {
                            case: format!("p={p}"),
                            m,
                            kind: TaskKind::Evaluate {
                                xi: config.xi,
                                p,
                                n,
                            },
                            exact: Some(exact),
                            integrand: integrand.clone(),
                            weight: weight.clone(),
                        });
                    }
                }
            }
        }
        ExperimentKind::Table2 => {
            require(
                config.integrand.name == "inv-sqrt-pole"
                    && config.weight.family == "legendre"
                    && config.xi == 1e-5
                    && config.p == 1,
                "table2 is defined for inv-sqrt-pole, legendre weight, xi = 1e-5, p = 1",
            )?;
            let exact = exact_reference(ReferenceLabel::I2, config.xi, 1, None)?.value;
            let (lo, hi, criterion) = match &config.n_policy {
                NPolicy::Search { lo, hi, criterion } => (*lo, *hi, *criterion),
                _ => {
                    return Err(CliError::Validation(
                        "n_policy: table2 searches n; use mode = \"search\"".into(),
                    ))
                }
            };
            for &m in &config.m {
                tasks.push(Task {
                    case: "baseline".into(),
                    m,
                    kind: TaskKind::Baseline {
                        xi: config.xi,
                        p: config.p,
                    },
                    exact: Some(exact),
                    integrand: integrand.clone(),
                    weight: weight.clone(),
                });
                tasks.push(Task {
                    case: "far-node".into(),
                    m,
                    kind: TaskKind::Marker {
                        note: "NOT-IMPLEMENTED".into(),
                    },
                    exact: None,
                    integrand: integrand.clone(),
                    weight: weight.clone(),
                });
                let (lo_m, hi_m) = search_range_around(m, config.p, lo, hi);
                tasks.push(Task {
                    case: "ours".into(),
                    m,
                    kind: TaskKind::SearchEvaluate {
                        xi: config.xi,
                        p: config.p,
                        lo: lo_m,
                        hi: hi_m,
                        criterion: resolve_criterion(criterion, Some(exact))?,
                    },
                    exact: Some(exact),
                    integrand: integrand.clone(),
                    weight: weight.clone(),
                });
            }
        }
        ExperimentKind::Table3 => {
            require(
                config.integrand.name == "rational-pole"
                    && config.weight.family == "chebyshev1"
                    && config.p == 1,
                "table3 is defined for rational-pole, chebyshev1 weight, p = 1",
            )?;
            let (lo, hi, criterion) = match &config.n_policy {
                NPolicy::Search { lo, hi, criterion } => (*lo, *hi, *criterion),
                _ => {
                    return Err(CliError::Validation(
                        "n_policy: table3 searches n; use mode = \"search\"".into(),
                    ))
                }
            };
            for lambda in [1.5, 2.5, 5.0] {
                let spec = crate::config::IntegrandSpec::named("rational-pole")
                    .with_param("lambda", lambda);
                let block_integrand = spec.build()?;
                let exact = exact_reference(ReferenceLabel::I3, config.xi, 1, Some(lambda))?.value;
                for &m in &config.m {
                    let (lo_m, hi_m) = search_range_around(m, config.p, lo, hi);
                    tasks.push(Task {
                        case: format!("lambda={lambda}"),
                        m,
                        kind: TaskKind::SearchEvaluate {
                            xi: config.xi,
                            p: config.p,
                            lo: lo_m,
                            hi: hi_m.max(m + 15).min(hi),
                            criterion: resolve_criterion(criterion, Some(exact))?,
                        },
                        exact: Some(exact),
                        integrand: block_integrand.clone(),
                        weight: weight.clone(),
                    });
                }
            }
        }
        ExperimentKind::Fig1 => {
            require(
                config.integrand.name == "exp" && config.weight.family == "legendre",
                "fig1 is defined for the exp integrand with the legendre weight",
            )?;
            let n = match &config.n_policy {
                NPolicy::Fixed { n } => *n,
                _ => {
                    return Err(CliError::Validation(
                        "n_policy: fig1 uses a fixed n; use mode = \"fixed\"".into(),
                    ))
                }
            };
            let grid = config
                .xi_grid
                .clone()
                .ok_or_else(|| CliError::Validation("xi_grid: fig1 needs a grid".into()))?;
            let m = config.m[0];
            for xi in grid {
                let exact = exact_reference(ReferenceLabel::I1, xi, config.p, None)?.value;
                tasks.push(Task {
                    case: format!("xi={xi}"),
                    m,
                    kind: TaskKind::Evaluate { xi, p: config.p, n },
                    exact: Some(exact),
                    integrand: integrand.clone(),
                    weight: weight.clone(),
                });
            }
        }
        ExperimentKind::Single => {
            for &m in &config.m {
                let kind = match &config.n_policy {
                    NPolicy::Fixed { n } => TaskKind::Evaluate {
                        xi: config.xi,
                        p: config.p,
                        n: *n,
                    },
                    NPolicy::List { values } => {
                        for &n in values {
                            tasks.push(Task {
                                case: "single".into(),
                                m,
                                kind: TaskKind::Evaluate {
                                    xi: config.xi,
                                    p: config.p,
                                    n,
                                },
                                exact: None,
                                integrand: integrand.clone(),
                                weight: weight.clone(),
                            });
                        }
                        continue;
                    }
                    NPolicy::Search { lo, hi, criterion } => TaskKind::SearchEvaluate {
                        xi: config.xi,
                        p: config.p,
                        lo: (*lo).max(config.p + 1),
                        hi: *hi,
                        criterion: resolve_criterion(*criterion, None)?,
                    },
                };
                tasks.push(Task {
                    case: "single".into(),
                    m,
                    kind,
                    exact: None,
                    integrand: integrand.clone(),
                    weight: weight.clone(),
                });
            }
        }
    }
    Ok(tasks)
}

fn resolve_criterion(kind: SearchKind, exact: Option<f64>) -> Result<SearchCriterion, CliError> {
    match kind {
        SearchKind::Stabilization => Ok(SearchCriterion::Stabilization),
        SearchKind::Reference => exact.map(SearchCriterion::Reference).ok_or_else(|| {
            CliError::Validation(
                "n_policy.criterion: reference search needs a known exact value; \
                 use \"stabilization\""
                    .into(),
            )
        }),
    }
}

/// Runs the experiment, fanning rows out over `workers` threads (library
/// default when `None`; the CLI reads the FPQUAD_WORKERS variable). Row
/// order follows the configuration, not completion; per-row failures are
/// recorded in the row's note and do not abort the run.
pub fn run_experiment(
    config: &ExperimentConfig,
    workers: Option<usize>,
) -> Result<Vec<ResultRow>, CliError> {
    config.validate()?;
    let tasks = expand_tasks(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Numerical(format!("worker pool: {e}")))?;
    let mut rows: Vec<ResultRow> = pool.install(|| tasks.par_iter().map(execute).collect());

    if config.experiment == ExperimentKind::Fig1 {
        let max_error = rows
            .iter()
            .filter_map(|row| row.abs_error)
            .fold(0.0f64, f64::max);
        rows.push(ResultRow {
            case: "max".into(),
            m: config.m[0],
            n_used: None,
            approx: None,
            exact: None,
            abs_error: Some(max_error),
            time_s: 0.0,
            note: Some("largest error over the xi grid".into()),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_fixed_runs() {
        let config = ExperimentConfig::preset(ExperimentKind::Single).unwrap();
        let rows = run_experiment(&config, Some(1)).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].approx.is_some());
        assert!(rows[0].note.is_none());
    }

    #[test]
    fn table2_rows_follow_config_order() {
        let mut config = ExperimentConfig::preset(ExperimentKind::Table2).unwrap();
        config.m = vec![3, 9];
        let rows = run_experiment(&config, Some(2)).unwrap();
        let cases: Vec<&str> = rows.iter().map(|r| r.case.as_str()).collect();
        assert_eq!(
            cases,
            ["baseline", "far-node", "ours", "baseline", "far-node", "ours"]
        );
        assert_eq!(rows[1].note.as_deref(), Some("NOT-IMPLEMENTED"));
        assert!(rows[2].abs_error.unwrap() < rows[0].abs_error.unwrap());
    }

    #[test]
    fn per_row_failures_recorded_not_fatal() {
        let mut config = ExperimentConfig::preset(ExperimentKind::Single).unwrap();
        // xi = 0 with odd n: layout constraint failure recorded per row
        config.xi = 0.0;
        config.n_policy = NPolicy::List { values: vec![9, 8] };
        let rows = run_experiment(&config, Some(1)).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].note.as_deref().unwrap().starts_with("error:"));
        assert!(rows[1].approx.is_some());
    }

    #[test]
    fn worker_count_does_not_change_values() {
        let mut config = ExperimentConfig::preset(ExperimentKind::Table1).unwrap();
        config.m = vec![7];
        config.n_policy = NPolicy::List {
            values: vec![4, 8, 12],
        };
        let mut single = run_experiment(&config, Some(1)).unwrap();
        let mut quad = run_experiment(&config, Some(4)).unwrap();
        for row in single.iter_mut().chain(quad.iter_mut()) {
            row.time_s = 0.0;
        }
        assert_eq!(single, quad);
    }

    #[test]
    fn preset_mismatch_is_rejected() {
        let mut config = ExperimentConfig::preset(ExperimentKind::Table2).unwrap();
        config.integrand = crate::config::IntegrandSpec::named("exp");
        assert!(matches!(
            run_experiment(&config, Some(1)),
            Err(CliError::Validation(_))
        ));
    }
}
