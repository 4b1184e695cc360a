//! The five subcommands: predict, quadrature, montecarlo, converge, verify.

use std::path::{Path, PathBuf};

use anyhow::Result;
use ibm_exit::predictors::{predict_bounded, predict_parabola, predict_twisted, AsymptoticPrediction};
use ibm_exit::subordination::{tail_transfer_prediction, TailLaw};
use serde::Serialize;

use crate::acceptance::{run_all, run_item, Fault, SuiteReport};
use crate::config::{core_invalid, invalid, ExperimentConfig, Method};
use crate::output::{self, Panel};
use crate::run::{local_slopes, ls_slope, mc_rows, quad_rows, Row, Target};

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct PredictionJson {
    family: &'static str,
    label: &'static str,
    rate: f64,
    t_power: f64,
    log_t_power: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    prefactor_constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    poly_power: Option<f64>,
    sharp: bool,
    upper_bound_only: bool,
}

#[derive(Serialize)]
struct PredictReport {
    inputs: ExperimentConfig,
    predictions: Vec<PredictionJson>,
}

/// Small-denominator rational rendering for the scale exponents, falling
/// back to four decimals (every built-in law has a rational exponent).
fn rational(v: f64) -> String {
    if v == v.round() && v.abs() < 1e6 {
        return format!("{}", v as i64);
    }
    for q in 2..=24i64 {
        let p = (v * q as f64).round();
        if (v - p / q as f64).abs() < 1e-9 {
            return format!("{}/{q}", p as i64);
        }
    }
    format!("{v:.4}")
}

fn scale_text(t_power: f64, log_t_power: f64) -> String {
    let mut parts = Vec::new();
    if t_power != 0.0 {
        if t_power == 1.0 {
            parts.push("t".to_string());
        } else {
            parts.push(format!("t^({})", rational(t_power)));
        }
    }
    if log_t_power != 0.0 {
        if log_t_power == 1.0 {
            parts.push("log t".to_string());
        } else {
            parts.push(format!("(log t)^({})", rational(log_t_power)));
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("·")
    }
}

fn status_text(p: &AsymptoticPrediction) -> &'static str {
    if p.sharp {
        "sharp"
    } else if p.upper_bound_only {
        "upper-bound-only"
    } else {
        "one-sided"
    }
}

pub fn cmd_predict(cfg: &ExperimentConfig) -> Result<()> {
    let mut preds: Vec<(&'static str, AsymptoticPrediction)> = Vec::new();
    if let Some(d) = &cfg.domain {
        let (domain, z) = d.build()?;
        let b = predict_bounded(&domain, &z).map_err(core_invalid)?;
        let btbm =
            tail_transfer_prediction(&TailLaw::from_principal(&domain, &z).map_err(core_invalid)?)?;
        preds.push(("bounded-domain", b.bm));
        preds.push(("bounded-domain", b.ibm_log));
        preds.push(("bounded-domain", b.ibm_sharp));
        preds.push(("bounded-domain", btbm));
    }
    if let Some(tw) = &cfg.twisted {
        let p = predict_twisted(&tw.params()?)?;
        preds.push(("twisted-domain", p.bm));
        preds.push(("twisted-domain", p.ibm));
        preds.push(("twisted-domain", p.btbm));
    }
    if let Some(pb) = &cfg.parabola {
        let p = predict_parabola(&pb.params()?)?;
        preds.push(("profile-region", p.bm_lower));
        preds.push(("profile-region", p.bm_upper));
        preds.push(("profile-region", p.btbm_lower));
        preds.push(("profile-region", p.btbm_upper));
        preds.push(("profile-region", p.ibm_upper));
    }
    if let Some(tl) = &cfg.tail {
        preds.push(("tail-transfer", tail_transfer_prediction(&tl.law()?)?));
    }
    if preds.is_empty() {
        return Err(invalid(
            "predict needs at least one of [domain], [twisted], [parabola], [tail]",
        ));
    }
    // coinciding lower/upper laws collapse to one row
    preds.dedup_by(|a, b| a.1 == b.1);

    println!(
        "{:<15} {:<46} {:>13}  {:<22} {:>12} {:>7}  status",
        "family", "law", "rate", "scale", "prefactor", "t-poly"
    );
    for (family, p) in &preds {
        println!(
            "{:<15} {:<46} {:>13.6} {:<23} {:>12} {:>7}  {}",
            family,
            p.label,
            p.rate,
            scale_text(p.t_power, p.log_t_power),
            p.prefactor_constant.map(|c| format!("{c:.6}")).unwrap_or_default(),
            p.poly_power.map(|c| format!("{c}")).unwrap_or_default(),
            status_text(p)
        );
    }

    if cfg.output.json.is_some() {
        let report = PredictReport {
            inputs: cfg.clone(),
            predictions: preds
                .iter()
                .map(|(family, p)| PredictionJson {
                    family,
                    label: p.label,
                    rate: p.rate,
                    t_power: p.t_power,
                    log_t_power: p.log_t_power,
                    prefactor_constant: p.prefactor_constant,
                    poly_power: p.poly_power,
                    sharp: p.sharp,
                    upper_bound_only: p.upper_bound_only,
                })
                .collect(),
        };
        output::write_json(cfg.output.json.as_deref(), &report)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// quadrature / montecarlo / converge
// ---------------------------------------------------------------------------

fn rows_svg(path: &Path, rows: &[Row], law: &str) -> Result<()> {
    let ratio: Vec<(f64, f64)> =
        rows.iter().filter_map(|r| r.ratio.map(|v| (r.t.log10(), v))).collect();
    let logp: Vec<(f64, f64)> = rows.iter().map(|r| (r.t.log10(), r.est.log_value)).collect();
    let pred: Vec<(f64, f64)> =
        rows.iter().filter_map(|r| r.prediction.map(|v| (r.t.log10(), v))).collect();
    let panels = [
        Panel {
            title: format!("ratio to predicted law — {law}"),
            x_label: "log10 t".to_string(),
            y_label: "ratio".to_string(),
            series: vec![("ratio".to_string(), ratio)],
        },
        Panel {
            title: "log survival".to_string(),
            x_label: "log10 t".to_string(),
            y_label: "log P".to_string(),
            series: vec![("quadrature".to_string(), logp), ("prediction".to_string(), pred)],
        },
    ];
    output::write_svg(path, &panels)
}

pub fn cmd_quadrature(cfg: &ExperimentConfig) -> Result<()> {
    let target = Target::resolve(cfg)?;
    let pred = target.prediction()?;
    let q = cfg.quadrature.build()?;
    let ts = cfg.t_values()?;
    let rows = quad_rows(&target, &pred, &ts, &q)?;
    output::write_csv(
        cfg.output.csv.as_deref(),
        output::QUADRATURE_HEADER,
        &output::quadrature_records(&rows),
    )?;
    if let Some(svg) = &cfg.output.svg {
        rows_svg(svg, &rows, pred.label)?;
    }
    Ok(())
}

pub fn cmd_montecarlo(cfg: &ExperimentConfig) -> Result<()> {
    let target = Target::resolve(cfg)?;
    cfg.montecarlo.validate()?;
    let ts = cfg.t_values()?;
    let ests = mc_rows(&target, &ts, cfg.montecarlo.samples, cfg.seed)?;
    output::write_csv(
        cfg.output.csv.as_deref(),
        output::MONTECARLO_HEADER,
        &output::montecarlo_records(&ts, &ests),
    )?;
    Ok(())
}

/// `out.csv` → `out.mc.csv` for the companion Monte Carlo table.
fn mc_sibling(path: &Path) -> PathBuf {
    match (path.file_stem(), path.extension()) {
        (Some(stem), Some(ext)) => {
            let mut name = stem.to_os_string();
            name.push(".mc.");
            name.push(ext);
            path.with_file_name(name)
        }
        _ => {
            let mut name = path.as_os_str().to_os_string();
            name.push(".mc.csv");
            PathBuf::from(name)
        }
    }
}

fn converge_quadrature(cfg: &ExperimentConfig, target: &Target, ts: &[f64]) -> Result<()> {
    let pred = target.prediction()?;
    let q = cfg.quadrature.build()?;
    let rows = quad_rows(target, &pred, ts, &q)?;
    let slopes = local_slopes(&rows);
    output::write_csv(
        cfg.output.csv.as_deref(),
        output::CONVERGE_HEADER,
        &output::converge_records(&rows, &slopes),
    )?;
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.t.ln(), r.est.log_value)).collect();
    if let Some(m) = ls_slope(&pts) {
        eprintln!("fitted log-log slope over {} points: {m:.6}", rows.len());
    }
    if let (Some(first), Some(last)) =
        (rows.first().and_then(|r| r.ratio), rows.last().and_then(|r| r.ratio))
    {
        eprintln!("ratio to prediction: first {first:.6}, last {last:.6} ({})", pred.label);
    }
    if let Some(svg) = &cfg.output.svg {
        rows_svg(svg, &rows, pred.label)?;
    }
    Ok(())
}

pub fn cmd_converge(cfg: &ExperimentConfig) -> Result<()> {
    let target = Target::resolve(cfg)?;
    let ts = cfg.t_values()?;
    match cfg.method {
        Method::Quadrature => converge_quadrature(cfg, &target, &ts),
        Method::Montecarlo => {
            cfg.montecarlo.validate()?;
            let ests = mc_rows(&target, &ts, cfg.montecarlo.samples, cfg.seed)?;
            output::write_csv(
                cfg.output.csv.as_deref(),
                output::MONTECARLO_HEADER,
                &output::montecarlo_records(&ts, &ests),
            )
        }
        Method::Both => {
            let Some(csv) = cfg.output.csv.clone() else {
                return Err(invalid(
                    "method \"both\" writes two CSV files; set output.csv (the Monte Carlo \
                     table goes to the .mc.csv sibling)",
                ));
            };
            converge_quadrature(cfg, &target, &ts)?;
            cfg.montecarlo.validate()?;
            let ests = mc_rows(&target, &ts, cfg.montecarlo.samples, cfg.seed)?;
            output::write_csv(
                Some(&mc_sibling(&csv)),
                output::MONTECARLO_HEADER,
                &output::montecarlo_records(&ts, &ests),
            )
        }
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

pub fn cmd_verify(json: Option<&Path>, fault: Fault, only: Option<u32>) -> Result<bool> {
    let items = match only {
        Some(id) => {
            if !(1..=9).contains(&id) {
                return Err(invalid(format!("--item must lie in 1..=9, got {id}")));
            }
            vec![run_item(id, &fault)]
        }
        None => run_all(&fault),
    };
    let json_to_stdout = json.is_some_and(|p| p.as_os_str() == "-");
    if !json_to_stdout {
        for it in &items {
            println!(
                "item {} {:<28} {} ({:.2}s)",
                it.id,
                it.name,
                if it.passed { "PASS" } else { "FAIL" },
                it.runtime_s
            );
            if !it.passed || only.is_some() {
                for d in &it.details {
                    println!("    {d}");
                }
            }
        }
        println!(
            "acceptance: {}/{} items passed",
            items.iter().filter(|i| i.passed).count(),
            items.len()
        );
    }
    let report = SuiteReport::new(fault, items);
    if json.is_some() {
        output::write_json(json, &report)?;
    }
    Ok(report.passed)
}
