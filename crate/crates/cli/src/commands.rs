//! Command bodies. Each returns the full text to emit.

use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use heckeavg_core::horizontal::{
    atkin_serre_scan, convergence_trace, measure_moment, rth_mean_comparison, LimitConstant,
    LimitMeasure, NormalizedSeries, DEFAULT_R_GRID,
};
use heckeavg_core::level1::tau_series;
use heckeavg_core::vertical::{av_squared_with, classify_with, ClassifyOptions, DECIMAL_DIGITS};
use heckeavg_core::{CoefficientSeries, Error, LevelWeight, RadicalForm, TraceCache};
use serde_json::{json, Value};

use crate::{Format, FormArgs, SpaceArgs};

type Result<T> = std::result::Result<T, Error>;

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn space(s: SpaceArgs) -> Result<LevelWeight> {
    LevelWeight::new(s.level, s.weight)
}

pub fn trace(cache: &TraceCache, s: SpaceArgs, format: Format) -> Result<String> {
    let space = space(s)?;
    let value = cache.trace(space, s.index)?.value;
    let normalized = match cache.normalized(space, s.index) {
        Ok(n) => Some(n.value),
        Err(Error::NonSquareIndex(_)) => None,
        Err(e) => return Err(e),
    };
    let norm_text = normalized.as_ref().map(|n| n.to_string());
    Ok(match format {
        Format::Csv => format!(
            "N,k,m,trace,normalized\n{},{},{},{},{}\n",
            s.level,
            s.weight,
            s.index,
            value,
            norm_text.unwrap_or_default()
        ),
        Format::Json => json_text(&json!({
            "N": s.level,
            "k": s.weight,
            "m": s.index,
            "trace": value.to_string(),
            "normalized": norm_text,
        })),
        Format::Human => {
            let mut out = format!("Tr T_{} on S_{}(Gamma0({})) = {}\n", s.index, s.weight, s.level, value);
            if let Some(n) = norm_text {
                writeln!(out, "normalized Tr T'_{} = {}", s.index, n).unwrap();
            }
            out
        }
    })
}

pub fn av(cache: &TraceCache, s: SpaceArgs, format: Format) -> Result<String> {
    let squared = av_squared_with(cache, space(s)?, s.index)?;
    let radical = RadicalForm::from_square(&squared.value)?;
    let decimal = radical.decimal(DECIMAL_DIGITS);
    Ok(match format {
        Format::Csv => format!(
            "N,k,m,av_squared,av_exact,av_decimal\n{},{},{},{},{},{}\n",
            s.level,
            s.weight,
            s.index,
            squared.value,
            radical.exact_text(),
            decimal
        ),
        Format::Json => json_text(&json!({
            "N": s.level,
            "k": s.weight,
            "m": s.index,
            "av_squared": squared.value.to_string(),
            "av": radical.to_json(),
            "av_decimal": decimal,
        })),
        Format::Human => format!(
            "Av_{}({}, {}) = {} ~ {}\nAv_{}^2 = {}\n",
            s.index, s.level, s.weight, radical, decimal, s.index, squared.value
        ),
    })
}

pub fn classify(
    cache: &TraceCache,
    level_limit: u64,
    certificate: Option<&Path>,
    format: Format,
) -> Result<String> {
    let options = ClassifyOptions {
        level_limit,
        ..ClassifyOptions::default()
    };
    let progress = |done: u64, limit: u64| eprintln!("classify: levels below {done} of {limit} done");
    let result = classify_with(options, cache, &progress)?;
    if let Some(path) = certificate {
        std::fs::write(path, json_text(&result.to_json()["certificate"]))?;
    }
    Ok(match format {
        Format::Csv => result.to_csv(),
        Format::Json => json_text(&result.to_json()),
        Format::Human => {
            let mut out = String::new();
            for p in &result.pairs {
                writeln!(
                    out,
                    "{:<10} Av_2 = {:<28} ~ {}",
                    p.space.to_string(),
                    p.av.to_string(),
                    p.av.decimal(DECIMAL_DIGITS)
                )
                .unwrap();
            }
            let cert = &result.search_certificate;
            writeln!(
                out,
                "{} pairs; {} odd levels below {} searched ({} spaces checked); tail bound {} < {}: {}",
                result.pairs.len(),
                cert.entries.len(),
                cert.level_limit,
                cert.pairs_checked,
                cert.tail.error_total,
                cert.tail.threshold,
                cert.tail.holds
            )
            .unwrap();
            out
        }
    })
}

pub fn tau(x: usize, format: Format) -> Result<String> {
    let series = tau_series(x)?;
    Ok(match format {
        Format::Human => {
            let mut buf = Vec::new();
            series.write_to(&mut buf)?;
            String::from_utf8(buf).expect("ascii")
        }
        Format::Csv => {
            let mut out = String::from("m,tau\n");
            for (i, v) in series.values.iter().enumerate() {
                writeln!(out, "{},{}", i + 1, v).unwrap();
            }
            out
        }
        Format::Json => json_text(&json!({
            "label": series.label,
            "weight": series.weight,
            "values": series.values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        })),
    })
}

fn load_form(form: &FormArgs, needed: usize) -> Result<CoefficientSeries> {
    match &form.file {
        Some(path) => CoefficientSeries::read_from(BufReader::new(File::open(path)?)),
        None => tau_series(needed),
    }
}

pub fn horizontal(
    form: &FormArgs,
    norm_sq: f64,
    checkpoints: &[usize],
    gnuplot: bool,
    format: Format,
) -> Result<String> {
    let needed = checkpoints.iter().copied().max().unwrap_or(1);
    let base = load_form(form, needed)?;
    let limit = LimitConstant::from_norm_sq(base.weight, norm_sq)?;
    let series = NormalizedSeries::new(base)?;
    let rows = convergence_trace(&series, &limit, checkpoints)?;
    if gnuplot {
        let mut out = format!("# {} limit {:.12}\n# x avf gap\n", series.label, limit.value);
        for r in &rows {
            writeln!(out, "{} {:.12} {:.12}", r.x, r.avf, r.gap).unwrap();
        }
        return Ok(out);
    }
    Ok(match format {
        Format::Csv => {
            let mut out = String::from("x,avf,limit,gap\n");
            for r in &rows {
                writeln!(out, "{},{:.12},{:.12},{:.12}", r.x, r.avf, limit.value, r.gap).unwrap();
            }
            out
        }
        Format::Json => json_text(&json!({
            "label": series.label,
            "weight": limit.weight,
            "petersson_norm_sq": limit.petersson_norm_sq,
            "limit": limit.value,
            "rows": rows.iter().map(|r| json!({"x": r.x, "avf": r.avf, "gap": r.gap})).collect::<Vec<_>>(),
        })),
        Format::Human => {
            let mut out = format!("{}: limit {:.9}\n", series.label, limit.value);
            for r in &rows {
                writeln!(out, "x = {:<9} Av_f(x) = {:.9}  gap {:.3e}", r.x, r.avf, r.gap).unwrap();
            }
            out
        }
    })
}

pub fn scan(form: &FormArgs, epsilon: f64, x: usize, format: Format) -> Result<String> {
    let series = load_form(form, x)?;
    let s = atkin_serre_scan(&series, epsilon, x)?;
    Ok(match format {
        Format::Csv => format!(
            "label,epsilon,x_max,min_ratio,argmin,zero_count\n{},{},{},{:.12e},{},{}\n",
            series.label, epsilon, x, s.min_ratio, s.argmin, s.zero_count
        ),
        Format::Json => json_text(&json!({
            "label": series.label,
            "epsilon": epsilon,
            "x_max": x,
            "min_ratio": s.min_ratio,
            "argmin": s.argmin,
            "zero_count": s.zero_count,
        })),
        Format::Human => format!(
            "{} up to {}: min |a(m)|/m^((k-3)/2-{}) = {:.9e} at m = {}; {} vanishing coefficients\n",
            series.label, x, epsilon, s.min_ratio, s.argmin, s.zero_count
        ),
    })
}

pub fn measures(r: &[f64], primes: &[u64], compare: bool, format: Format) -> Result<String> {
    if compare {
        let grid = if r.is_empty() { &DEFAULT_R_GRID[..] } else { r };
        let rows = rth_mean_comparison(grid)?;
        return Ok(match format {
            Format::Csv => {
                let mut out = String::from("r,sato_tate,cm,difference,agrees\n");
                for w in &rows {
                    writeln!(out, "{},{:.12},{:.12},{:.3e},{}", w.r, w.sato_tate, w.cm, w.difference, w.agrees).unwrap();
                }
                out
            }
            Format::Json => json_text(&json!(rows
                .iter()
                .map(|w| json!({"r": w.r, "sato_tate": w.sato_tate, "cm": w.cm, "difference": w.difference, "agrees": w.agrees}))
                .collect::<Vec<_>>())),
            Format::Human => {
                let mut out = String::from("r     sato_tate       cm              difference  agrees\n");
                for w in &rows {
                    writeln!(out, "{:<5} {:<15.10} {:<15.10} {:<11.3e} {}", w.r, w.sato_tate, w.cm, w.difference, w.agrees).unwrap();
                }
                out
            }
        });
    }
    let orders = if r.is_empty() { &[2.0][..] } else { r };
    let mut measures = primes.iter().map(|&p| LimitMeasure::serre(p)).collect::<Result<Vec<_>>>()?;
    measures.extend([LimitMeasure::SatoTate, LimitMeasure::Cm]);
    let mut rows = Vec::new();
    for &order in orders {
        for &mu in &measures {
            rows.push((mu, order, measure_moment(mu, order, true)?));
        }
    }
    Ok(match format {
        Format::Csv => {
            let mut out = String::from("measure,r,moment\n");
            for (mu, order, m) in &rows {
                writeln!(out, "{mu},{order},{m:.12}").unwrap();
            }
            out
        }
        Format::Json => json_text(&json!(rows
            .iter()
            .map(|(mu, order, m)| json!({"measure": mu.to_string(), "r": order, "moment": m}))
            .collect::<Vec<_>>())),
        Format::Human => {
            let mut out = String::new();
            for (mu, order, m) in &rows {
                writeln!(out, "{:<10} r = {:<4} {:.10}", mu.to_string(), order, m).unwrap();
            }
            out
        }
    })
}
