use std::cell::RefCell;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use httool_core::asymptotics::{
    corollary_limits, de_haan_check, karamata_check, ratio_diagnostic, rv_index_estimate, trailing_nonincreasing,
    AuxiliarySpec, DiagnosticItem, DiagnosticOptions, DiagnosticReport,
};
use httool_core::models::DistributionModel;
use httool_core::sampling::{ks_critical_99, ks_statistic, sample_model_ratio};
use httool_core::transforms::{
    moment, tail_integral, tail_integral_complement, truncated_moment, williamson, williamson_tail, TransformParams,
};
use httool_core::Error;

use crate::config::{
    DeHaanOptions, DiagnosticRequest, KaramataFunction, KaramataOptions, MonteCarloOptions, RvOptions, RvTarget,
    ScenarioConfig,
};
use crate::error::{from_core, CliError};
use crate::table::{self, Row};

/// Verdict for one output table.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub name: String,
    pub converged: bool,
    pub final_error: f64,
    pub file: Option<PathBuf>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub outcomes: Vec<Outcome>,
    pub files: Vec<PathBuf>,
    pub wall_time: Duration,
}

impl RunSummary {
    pub fn all_converged(&self) -> bool {
        self.outcomes.iter().all(|o| o.converged)
    }

    /// 0 if every diagnostic converged, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_converged() {
            0
        } else {
            1
        }
    }
}

struct Table {
    name: String,
    rows: Vec<Row>,
    converged: bool,
    final_error: f64,
    detail: String,
}

impl Table {
    fn from_report(report: &DiagnosticReport) -> Self {
        let rows = report
            .grid
            .iter()
            .zip(&report.ratios)
            .zip(&report.errors)
            .map(|((&x, &value), &rel_error)| Row {
                x,
                value,
                theoretical_limit: report.theoretical_limit,
                rel_error,
            })
            .collect();
        let mut detail = format!(
            "limit {}, monotone tail {}",
            report.theoretical_limit, report.monotone_tail_of_errors
        );
        for side in &report.side_checks {
            let _ = write!(
                detail,
                "; {}: {} ({})",
                side.name,
                side.final_value,
                if side.passed { "ok" } else { "failed" }
            );
        }
        for note in &report.notes {
            let _ = write!(detail, "; {note}");
        }
        Table {
            name: match report.kind {
                httool_core::asymptotics::ReportKind::Item(item) => item.id().to_string(),
                httool_core::asymptotics::ReportKind::Karamata { .. } => "karamata".into(),
            },
            rows,
            converged: report.converged,
            final_error: report.final_rel_error,
            detail,
        }
    }
}

struct Context<'a> {
    cfg: &'a ScenarioConfig,
    model: DistributionModel,
    params: TransformParams,
    grid: Vec<f64>,
    opts: DiagnosticOptions,
}

/// Runs every requested diagnostic, writing `<name>.csv` per table and `summary.txt`.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunSummary, CliError> {
    let start = Instant::now();
    let model = cfg.build_model()?;
    let params = TransformParams::with_quad(cfg.alpha, cfg.quad).map_err(|e| from_core(e, "alpha"))?;
    let ctx = Context {
        cfg,
        model,
        params,
        grid: cfg.grid.points(),
        opts: DiagnosticOptions {
            ratio_rel: cfg.ratio_rel,
            ..DiagnosticOptions::default()
        },
    };
    std::fs::create_dir_all(&cfg.output_dir).map_err(|e| CliError::io(&cfg.output_dir, e))?;

    let mut outcomes = Vec::new();
    let mut files = Vec::new();
    for request in &cfg.diagnostics {
        match run_request(&ctx, request) {
            Ok(tables) => {
                for t in tables {
                    let file = if t.rows.is_empty() {
                        None
                    } else {
                        let path = cfg.output_dir.join(format!("{}.csv", t.name));
                        table::write(&path, &t.rows)?;
                        files.push(path.clone());
                        Some(path)
                    };
                    outcomes.push(Outcome {
                        name: t.name,
                        converged: t.converged,
                        final_error: t.final_error,
                        file,
                        detail: t.detail,
                    });
                }
            }
            Err(err) => outcomes.push(Outcome {
                name: request.id(),
                converged: false,
                final_error: f64::NAN,
                file: None,
                detail: format!("error: {err}"),
            }),
        }
    }

    let summary_path = cfg.output_dir.join("summary.txt");
    files.push(summary_path.clone());
    let mut summary = RunSummary {
        outcomes,
        files,
        wall_time: Duration::ZERO,
    };
    summary.wall_time = start.elapsed();
    std::fs::write(&summary_path, render_summary(&ctx, &summary)).map_err(|e| CliError::io(&summary_path, e))?;
    Ok(summary)
}

fn render_summary(ctx: &Context<'_>, s: &RunSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "model: {}", ctx.model.name());
    let _ = writeln!(out, "alpha: {}", ctx.cfg.alpha);
    if let Some(theta) = ctx.cfg.theta {
        let _ = writeln!(out, "theta: {theta}");
    }
    let _ = writeln!(out, "grid: {}", ctx.cfg.grid);
    let _ = writeln!(out, "ratio_rel: {}", ctx.cfg.ratio_rel);
    out.push('\n');
    for o in &s.outcomes {
        let verdict = if o.converged { "converged" } else { "NOT CONVERGED" };
        let _ = writeln!(out, "{:<12} {:<14} final_error={:e}  {}", o.name, verdict, o.final_error, o.detail);
        if let Some(f) = &o.file {
            let _ = writeln!(out, "{:<12} file: {}", "", f.display());
        }
    }
    out.push('\n');
    let failed = s.outcomes.iter().filter(|o| !o.converged).count();
    if failed == 0 {
        let _ = writeln!(out, "result: all {} diagnostics converged", s.outcomes.len());
    } else {
        let _ = writeln!(out, "result: {failed} of {} diagnostics did not converge", s.outcomes.len());
    }
    let _ = writeln!(out, "wall_time: {:.3} s", s.wall_time.as_secs_f64());
    out
}

fn run_request(ctx: &Context<'_>, request: &DiagnosticRequest) -> Result<Vec<Table>, Error> {
    let theta = ctx.cfg.theta.unwrap_or(f64::NAN);
    match request {
        DiagnosticRequest::Item(item) => {
            let report = ratio_diagnostic(&ctx.model, &ctx.params, theta, *item, &ctx.grid, &ctx.opts)?;
            Ok(vec![Table::from_report(&report)])
        }
        DiagnosticRequest::Corollary => {
            let reports = corollary_limits(&ctx.model, &ctx.params, &ctx.grid, &ctx.opts)?;
            let mut tables: Vec<Table> = reports.reports().map(Table::from_report).collect();
            if let Some(why) = reports.c3_skipped {
                tables.push(Table {
                    name: DiagnosticItem::C3.id().into(),
                    rows: Vec::new(),
                    converged: true,
                    final_error: f64::NAN,
                    detail: format!("skipped: {why}"),
                });
            }
            Ok(tables)
        }
        DiagnosticRequest::Rv(o) => rv(ctx, o).map(|t| vec![t]),
        DiagnosticRequest::Karamata(o) => karamata(ctx, o).map(|t| vec![t]),
        DiagnosticRequest::DeHaan(o) => dehaan(ctx, o).map(|t| vec![t]),
        DiagnosticRequest::MonteCarlo(o) => montecarlo(ctx, o).map(|t| vec![t]),
    }
}

fn rv(ctx: &Context<'_>, o: &RvOptions) -> Result<Table, Error> {
    let (model, p) = (&ctx.model, &ctx.params);
    let m = match o.target {
        RvTarget::MMinusH => moment(model, p)?
            .finite()
            .ok_or_else(|| Error::Precondition("m_minus_H needs m(alpha) < inf".into()))?,
        _ => f64::NAN,
    };
    let est = rv_index_estimate(
        |x| match o.target {
            RvTarget::Tail => Ok(model.tail(x)),
            RvTarget::Gbar => williamson_tail(model, p, x),
            RvTarget::W => tail_integral(model, p, x),
            RvTarget::H => truncated_moment(model, p, x),
            RvTarget::Wbar => tail_integral_complement(model, p, x),
            RvTarget::MMinusH => Ok(m - truncated_moment(model, p, x)?),
        },
        &ctx.grid,
        o.t,
    )?;
    let expected = ctx.cfg.theta.and_then(|th| o.target.expected_index(ctx.cfg.alpha, th));
    let limit = expected.unwrap_or(f64::NAN);
    let errors: Vec<f64> = est.per_scale_slopes.iter().map(|&(_, s)| (s - limit).abs()).collect();
    let final_error = *errors.last().expect("grid non-empty");
    let converged = match expected {
        Some(_) => final_error < o.tolerance && trailing_nonincreasing(&errors, ctx.opts.tail_k, ctx.opts.noise_floor),
        None => true,
    };
    let rows = est
        .per_scale_slopes
        .iter()
        .zip(&errors)
        .map(|(&(x, value), &rel_error)| Row {
            x,
            value,
            theoretical_limit: limit,
            rel_error,
        })
        .collect();
    Ok(Table {
        name: "rv".into(),
        rows,
        converged,
        final_error,
        detail: match expected {
            Some(e) => format!(
                "target {}, t = {}, index_hat {} vs {e} (absolute error column)",
                o.target.as_str(),
                o.t,
                est.index_hat
            ),
            None => format!("target {}, index_hat {} (no reference index)", o.target.as_str(), est.index_hat),
        },
    })
}

fn karamata(ctx: &Context<'_>, o: &KaramataOptions) -> Result<Table, Error> {
    let alpha = ctx.cfg.alpha;
    let rho = match (o.rho, ctx.cfg.theta) {
        (Some(rho), _) => rho,
        (None, Some(theta)) => o.function.expected_rho(alpha, theta),
        (None, None) => return Err(Error::Precondition("karamata needs rho or theta".into())),
    };
    let model = &ctx.model;
    let report = karamata_check(
        |y: f64| match o.function {
            KaramataFunction::Tail => model.tail(y),
            KaramataFunction::TailWeight => y.powf(alpha - 1.0) * model.tail(y),
        },
        rho,
        &ctx.grid,
        &ctx.cfg.quad,
        &ctx.opts,
    )?;
    let mut t = Table::from_report(&report);
    t.detail = format!("rho = {rho}; {}", t.detail);
    Ok(t)
}

fn dehaan(ctx: &Context<'_>, o: &DeHaanOptions) -> Result<Table, Error> {
    let alpha = ctx.cfg.alpha;
    let check = de_haan_check(&ctx.model, &ctx.params, o.target, o.normalizer, &ctx.grid, &o.t_values)?;
    let rows: Vec<Row> = check
        .grid
        .iter()
        .zip(&check.beta_by_x)
        .map(|(&x, &beta)| {
            let lambda = match o.normalizer {
                AuxiliarySpec::Auto => 1.0,
                AuxiliarySpec::ConstantOne => x.powf(alpha) * ctx.model.tail(x),
            };
            Row {
                x,
                value: beta,
                theoretical_limit: alpha * lambda,
                rel_error: (beta - alpha * lambda).abs(),
            }
        })
        .collect();
    Ok(Table {
        name: "dehaan".into(),
        rows,
        converged: check.relation_residual < o.tolerance,
        final_error: check.relation_residual,
        detail: format!(
            "beta_hat {}, lambda_hat {}, |beta - alpha lambda| {} (absolute error column)",
            check.beta_hat, check.lambda_hat, check.relation_residual
        ),
    })
}

fn montecarlo(ctx: &Context<'_>, o: &MonteCarloOptions) -> Result<Table, Error> {
    let critical = ks_critical_99(o.n);
    let mut rows = Vec::with_capacity(o.seeds);
    for k in 0..o.seeds {
        let seed = ctx.cfg.seed.wrapping_add(k as u64);
        let batch = sample_model_ratio(&ctx.model, &ctx.params, o.n, seed)?;
        let failure = RefCell::new(None);
        let ks = ks_statistic(&batch, |x| {
            williamson(&ctx.model, &ctx.params, x).unwrap_or_else(|e| {
                failure.borrow_mut().get_or_insert(e);
                0.0
            })
        })?;
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        rows.push(Row {
            x: seed as f64,
            value: ks,
            theoretical_limit: critical,
            rel_error: ks / critical,
        });
    }
    let passes = rows.iter().filter(|r| r.value < critical).count();
    Ok(Table {
        name: "montecarlo".into(),
        final_error: rows.iter().map(|r| r.rel_error).fold(f64::NAN, f64::min),
        converged: passes >= o.required,
        detail: format!(
            "KS vs 99% critical value {critical:.5} (x = seed, rel_error = KS / critical): {passes} of {} seeds pass, {} required",
            o.seeds, o.required
        ),
        rows,
    })
}
