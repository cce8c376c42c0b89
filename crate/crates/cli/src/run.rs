//! Execution of resolved run specs.

use crate::spec::{EpochSpec, McKind, OutputFormat, RunSpec};
use levque::emit::{csv_rows, density_csv, estimate_json, fmt_sig, histogram_csv, scale_grid_csv};
use levque::reference::{TABLE1, TABLE1_NS, TABLE2, TABLE2_NS};
use levque::{
    choose_phase_rates, density_grid, exact_rbm_lst, lst_sum_pos, mc_density_estimate,
    mc_lst_estimate, mean_at_time, neg_coefficients, triple_transform, Error, Horizon, LevyModel,
    ModelConfig, PhaseVector, RateScheme, ReflectionScheme, Result, SchemeKind, SimConfig,
};

fn phases_of(model_epochs: &EpochSpec) -> Result<PhaseVector> {
    match model_epochs {
        EpochSpec::Rates { rates } => PhaseVector::new(rates.clone()),
        EpochSpec::Scheme {
            t,
            n,
            scheme,
            epsilon,
        } => choose_phase_rates(&RateScheme {
            t: *t,
            n: *n,
            kind: *scheme,
            epsilon: *epsilon,
        }),
    }
}

pub fn execute(spec: &RunSpec) -> Result<String> {
    match spec {
        RunSpec::Lst {
            model,
            x,
            alphas,
            epochs,
            format,
        } => lst_command(model, *x, alphas, epochs, *format),
        RunSpec::Density {
            model,
            x,
            epochs,
            y_max,
            points,
            format,
            dump_terms,
        } => density_command(model, *x, epochs, *y_max, *points, *format, *dump_terms),
        RunSpec::Triple {
            model,
            alpha,
            beta,
            epochs,
            format,
        } => triple_command(model, *alpha, *beta, epochs, *format),
        RunSpec::MeanCurve {
            model,
            xs,
            t_start,
            t_stop,
            t_points,
            n,
            probe,
        } => mean_curve_command(model, xs, *t_start, *t_stop, *t_points, *n, *probe),
        RunSpec::Reproduce { table } => reproduce_command(table),
        RunSpec::Scale {
            model,
            q,
            x_max,
            points,
        } => {
            let model = model.build()?;
            let grid = levque::ScaleFunctionGrid::build(&model, *q, *x_max, *points)?;
            Ok(scale_grid_csv(&grid))
        }
        RunSpec::Mc {
            model,
            kind,
            x,
            alpha,
            epochs,
            fixed_t,
            y_max,
            bins,
            paths,
            step,
            seed,
            euler,
            format,
        } => mc_command(
            model, *kind, *x, *alpha, epochs, *fixed_t, *y_max, *bins, *paths, *step, *seed,
            *euler, *format,
        ),
    }
}

fn lst_command(
    model: &ModelConfig,
    x: f64,
    alphas: &[f64],
    epochs: &EpochSpec,
    format: OutputFormat,
) -> Result<String> {
    let model = model.build()?;
    let phases = phases_of(epochs)?;
    let mut rows = Vec::new();
    for &alpha in alphas {
        let r = lst_sum_pos(&model, x, &phases, alpha)?;
        rows.push((alpha, r.value, r.diagnostics.cancellation));
    }
    Ok(match format {
        OutputFormat::Csv => csv_rows(
            "alpha,lst,cancellation",
            rows.iter().map(|&(a, v, c)| vec![a, v, c]),
        ),
        OutputFormat::Json => {
            let items: Vec<String> = rows
                .iter()
                .map(|&(a, v, c)| {
                    format!(
                        "  {{\"alpha\": {}, \"lst\": {}, \"cancellation\": {}}}",
                        fmt_sig(a),
                        fmt_sig(v),
                        fmt_sig(c)
                    )
                })
                .collect();
            format!("[\n{}\n]\n", items.join(",\n"))
        }
    })
}

fn density_command(
    model: &ModelConfig,
    x: f64,
    epochs: &EpochSpec,
    y_max: Option<f64>,
    points: usize,
    format: OutputFormat,
    dump_terms: bool,
) -> Result<String> {
    let model = model.build()?;
    let phases = phases_of(epochs)?;
    if dump_terms {
        let coeffs = neg_coefficients(&model, &phases)?;
        let items: Vec<String> = coeffs
            .iter()
            .map(|c| {
                format!(
                    "  {{\"index\": {}, \"level\": {}, \"sign\": {}, \"m\": {}, \"scalar\": {}, \"rate\": {}}}",
                    c.index,
                    c.level,
                    c.sign,
                    c.m,
                    fmt_sig(c.scalar),
                    fmt_sig(c.rate)
                )
            })
            .collect();
        return Ok(format!("[\n{}\n]\n", items.join(",\n")));
    }
    let grid = density_grid(&model, x, &phases, y_max, points)?;
    Ok(match format {
        OutputFormat::Csv => density_csv(&grid),
        OutputFormat::Json => format!(
            "{{\n  \"total_mass\": {},\n  \"cancellation\": {},\n  \"points\": {}\n}}\n",
            fmt_sig(grid.total_mass),
            fmt_sig(grid.diagnostics.cancellation),
            grid.values.len()
        ),
    })
}

fn triple_command(
    model: &ModelConfig,
    alpha: f64,
    beta: f64,
    epochs: &EpochSpec,
    format: OutputFormat,
) -> Result<String> {
    let model = model.build()?;
    let phases = phases_of(epochs)?;
    let v = triple_transform(&model, alpha, beta, &phases)?;
    Ok(match format {
        OutputFormat::Csv => csv_rows("alpha,beta,value", [vec![alpha, beta, v]]),
        OutputFormat::Json => format!(
            "{{\n  \"alpha\": {},\n  \"beta\": {},\n  \"value\": {}\n}}\n",
            fmt_sig(alpha),
            fmt_sig(beta),
            fmt_sig(v)
        ),
    })
}

fn mean_curve_command(
    model: &ModelConfig,
    xs: &[f64],
    t_start: f64,
    t_stop: f64,
    t_points: usize,
    n: u32,
    probe: f64,
) -> Result<String> {
    if xs.is_empty() || t_points < 2 || t_stop <= t_start || t_start <= 0.0 {
        return Err(Error::Config(
            "mean-curve needs at least one x and an increasing positive t range".into(),
        ));
    }
    let model = model.build()?;
    let mut header = String::from("t");
    for &x in xs {
        header.push_str(&format!(",mean_x{x}"));
    }
    let mut rows = Vec::with_capacity(t_points);
    for k in 0..t_points {
        let t = t_start + (t_stop - t_start) * k as f64 / (t_points - 1) as f64;
        let mut row = vec![t];
        for &x in xs {
            row.push(mean_at_time(&model, x, t, n, probe)?.refined);
        }
        rows.push(row);
    }
    Ok(csv_rows(&header, rows))
}

fn reproduce_command(table: &str) -> Result<String> {
    match table {
        "table1" => {
            let model = LevyModel::bm_pos(-1.0, 1.0)?;
            let mut out = String::from("alpha,n1,n4,n6,n7,n8,exact,rel_err_pct\n");
            let mut max_dev = vec![0.0f64; TABLE1_NS.len() + 1];
            for &(alpha, cells, exact_ref, _) in &TABLE1 {
                let mut row = vec![alpha];
                for (k, &n) in TABLE1_NS.iter().enumerate() {
                    let phases =
                        choose_phase_rates(&RateScheme::new(1.0, n, SchemeKind::PaperLiteral))?;
                    let v = lst_sum_pos(&model, 0.0, &phases, alpha)?.value;
                    max_dev[k] = max_dev[k].max((v - cells[k]).abs());
                    row.push(v);
                }
                let exact = exact_rbm_lst(-1.0, 1.0, 0.0, 1.0, alpha)?;
                max_dev[TABLE1_NS.len()] = max_dev[TABLE1_NS.len()].max((exact - exact_ref).abs());
                row.push(exact);
                row.push(100.0 * (1.0 - row[TABLE1_NS.len()] / exact));
                out.push_str(
                    &row.iter()
                        .map(|&v| fmt_sig(v))
                        .collect::<Vec<_>>()
                        .join(","),
                );
                out.push('\n');
            }
            out.push_str("# max absolute deviation from the bundled table, per column\n");
            for (k, &n) in TABLE1_NS.iter().enumerate() {
                out.push_str(&format!("# n={n}: {}\n", fmt_sig(max_dev[k])));
            }
            out.push_str(&format!(
                "# exact: {}\n",
                fmt_sig(max_dev[TABLE1_NS.len()])
            ));
            Ok(out)
        }
        "table2" => {
            let model = LevyModel::gamma(1.0, 1.0, 2.0)?;
            let mut out = String::from("alpha,n1,n4,n5,n6,n7,n8\n");
            let mut max_dev = vec![0.0f64; TABLE2_NS.len()];
            for &(alpha, cells) in &TABLE2 {
                let mut row = vec![alpha];
                for (k, &n) in TABLE2_NS.iter().enumerate() {
                    let phases =
                        choose_phase_rates(&RateScheme::new(1.0, n, SchemeKind::PaperLiteral))?;
                    let v = lst_sum_pos(&model, 0.0, &phases, alpha)?.value;
                    max_dev[k] = max_dev[k].max((v - cells[k]).abs());
                    row.push(v);
                }
                out.push_str(
                    &row.iter()
                        .map(|&v| fmt_sig(v))
                        .collect::<Vec<_>>()
                        .join(","),
                );
                out.push('\n');
            }
            out.push_str("# max absolute deviation from the bundled table, per column\n");
            for (k, &n) in TABLE2_NS.iter().enumerate() {
                out.push_str(&format!("# n={n}: {}\n", fmt_sig(max_dev[k])));
            }
            Ok(out)
        }
        other => Err(Error::Config(format!(
            "unknown table '{other}' (expected table1 or table2)"
        ))),
    }
}

#[allow(clippy::too_many_arguments)]
fn mc_command(
    model: &ModelConfig,
    kind: McKind,
    x: f64,
    alpha: f64,
    epochs: &Option<EpochSpec>,
    fixed_t: Option<f64>,
    y_max: f64,
    bins: usize,
    paths: usize,
    step: f64,
    seed: u64,
    euler: bool,
    format: OutputFormat,
) -> Result<String> {
    let model = model.build()?;
    let cfg = SimConfig {
        step,
        paths,
        seed,
        scheme: if euler {
            ReflectionScheme::Euler
        } else {
            ReflectionScheme::ExactStep
        },
    };
    match kind {
        McKind::Lst => {
            let horizon = match (epochs, fixed_t) {
                (Some(e), None) => Horizon::Phases(phases_of(e)?),
                (None, Some(t)) => Horizon::FixedTime(t),
                (Some(_), Some(_)) => {
                    return Err(Error::Config(
                        "give either epoch flags or --fixed-t, not both".into(),
                    ))
                }
                (None, None) => {
                    return Err(Error::Config(
                        "mc lst needs epoch flags or --fixed-t".into(),
                    ))
                }
            };
            let est = mc_lst_estimate(&model, x, &horizon, alpha, &cfg)?;
            Ok(match format {
                OutputFormat::Json => estimate_json(&est),
                OutputFormat::Csv => csv_rows(
                    "estimate,std_error,paths",
                    [vec![est.value, est.std_error, est.paths as f64]],
                ),
            })
        }
        McKind::Density => {
            let Some(e) = epochs else {
                return Err(Error::Config("mc density needs epoch flags".into()));
            };
            let hist = mc_density_estimate(&model, x, &phases_of(e)?, y_max, bins, &cfg)?;
            Ok(match format {
                OutputFormat::Csv => histogram_csv(&hist),
                OutputFormat::Json => format!(
                    "{{\n  \"bins\": {},\n  \"covered_mass\": {}\n}}\n",
                    hist.density.len(),
                    fmt_sig(hist.covered_mass)
                ),
            })
        }
    }
}
