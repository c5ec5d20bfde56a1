//! Grid sweeps over star configurations `m S_N(e, s)`.
//!
//! A grid file lists the values to combine:
//! `{"N": [2, 3], "e": [2], "s": [3, 4, 5], "m": [1], "k_max": 3}`.
//! `m` defaults to `[1]`. Combinations with `e > N` or `e > s` are skipped.
//! The output directory receives `results.csv`, `results.json` and
//! `manifest.json`.

use std::fs;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use fatflat::field::{format_rational, rational};
use fatflat::interp::{alpha_symbolic, AlphaOptions};
use fatflat::projective::random_general_hyperplanes;
use fatflat::scheme::{star_configuration, FatFlatScheme};

use crate::{write_json, CliResult, Failure};

pub const CSV_COLUMNS: [&str; 11] =
    ["N", "e", "s", "m", "k", "alpha", "alpha_over_k", "mode", "prime1", "prime2", "millis"];

#[derive(Debug, Clone, PartialEq, Eq)]
struct Grid {
    n: Vec<usize>,
    e: Vec<usize>,
    s: Vec<usize>,
    m: Vec<u32>,
    k_max: u32,
}

fn list(v: &Value, key: &str, default: Option<Vec<u64>>) -> CliResult<Vec<u64>> {
    match v.get(key) {
        None => default.ok_or_else(|| Failure::validation(format!("grid is missing {key:?}"))),
        Some(Value::Array(items)) if !items.is_empty() => items
            .iter()
            .map(|x| x.as_u64().ok_or_else(|| Failure::validation(format!("grid {key:?} has a non-integer entry"))))
            .collect(),
        Some(_) => Err(Failure::validation(format!("grid {key:?} must be a non-empty integer list"))),
    }
}

fn parse_grid(v: &Value) -> CliResult<Grid> {
    let k_max = v
        .get("k_max")
        .and_then(Value::as_u64)
        .filter(|&k| k >= 1)
        .ok_or_else(|| Failure::validation("grid needs a positive integer \"k_max\""))?;
    let as_usize = |xs: Vec<u64>| xs.into_iter().map(|x| x as usize).collect::<Vec<_>>();
    Ok(Grid {
        n: as_usize(list(v, "N", None)?),
        e: as_usize(list(v, "e", None)?),
        s: as_usize(list(v, "s", None)?),
        m: list(v, "m", Some(vec![1]))?.into_iter().map(|x| x as u32).collect(),
        k_max: k_max as u32,
    })
}

#[derive(Debug, Clone)]
struct Row {
    n: usize,
    e: usize,
    s: usize,
    m: u32,
    k: u32,
    alpha: Option<u32>,
    mode: &'static str,
    millis: u128,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::validation(format!("{}: {e}", path.display()))
}

/// Runs the sweep and returns a one-line summary; the second value counts
/// rows whose initial degree stayed unresolved.
pub fn run(
    grid_path: &Path,
    dir: &Path,
    options: &AlphaOptions,
    seed: u64,
    timing: bool,
    jobs: Option<usize>,
) -> CliResult<(String, usize)> {
    let started = Instant::now();
    let grid_bytes = fs::read(grid_path).map_err(|e| io_failure(grid_path, e))?;
    let grid_value: Value = serde_json::from_slice(&grid_bytes).map_err(|e| io_failure(grid_path, e))?;
    let grid = parse_grid(&grid_value)?;

    let mut schemes: Vec<((usize, usize, usize, u32), FatFlatScheme)> = Vec::new();
    for &n in &grid.n {
        for &e in &grid.e {
            for &s in &grid.s {
                if e == 0 || e > n || e > s {
                    continue;
                }
                let star = star_configuration(n, e, s, random_general_hyperplanes(n, s, seed)?)?;
                for &m in &grid.m {
                    if m == 0 {
                        return Err(Failure::validation("grid multiplicities must be positive"));
                    }
                    schemes.push(((n, e, s, m), star.fat(m)));
                }
            }
        }
    }
    let tasks: Vec<(usize, u32)> =
        (0..schemes.len()).flat_map(|i| (1..=grid.k_max).map(move |k| (i, k))).collect();

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = pool.build().map_err(|e| Failure::validation(e.to_string()))?;
    let rows: Vec<Row> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(i, k)| {
                let ((n, e, s, m), w) = &schemes[i];
                let t = Instant::now();
                let record = alpha_symbolic(w, k, options)?;
                Ok(Row {
                    n: *n,
                    e: *e,
                    s: *s,
                    m: *m,
                    k,
                    alpha: record.alpha,
                    mode: record.field_mode.name(),
                    millis: if timing { t.elapsed().as_millis() } else { 0 },
                })
            })
            .collect::<Result<_, fatflat::Error>>()
    })?;

    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    let primes = options.mode.primes();
    let prime_cell = |i: usize| primes.map_or_else(String::new, |p| p[i].to_string());

    let mut csv_out = csv::Writer::from_writer(Vec::new());
    csv_out.write_record(CSV_COLUMNS).map_err(|e| Failure::validation(e.to_string()))?;
    for r in &rows {
        let ratio = r.alpha.map_or_else(String::new, |a| format_rational(&rational(a as i64, r.k as i64)));
        csv_out
            .write_record([
                r.n.to_string(),
                r.e.to_string(),
                r.s.to_string(),
                r.m.to_string(),
                r.k.to_string(),
                r.alpha.map_or_else(String::new, |a| a.to_string()),
                ratio,
                r.mode.to_string(),
                prime_cell(0),
                prime_cell(1),
                r.millis.to_string(),
            ])
            .map_err(|e| Failure::validation(e.to_string()))?;
    }
    let csv_bytes = csv_out.into_inner().map_err(|e| Failure::validation(e.to_string()))?;
    let csv_path = dir.join("results.csv");
    fs::write(&csv_path, &csv_bytes).map_err(|e| io_failure(&csv_path, e))?;

    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "N": r.n, "e": r.e, "s": r.s, "m": r.m, "k": r.k,
                "alpha": r.alpha,
                "alpha_over_k": r.alpha.map(|a| format_rational(&rational(a as i64, r.k as i64))),
                "mode": r.mode,
                "primes": primes.map(|p| p.to_vec()),
                "millis": r.millis as u64,
            })
        })
        .collect();
    let results = json!({ "rows": json_rows });
    let json_path = dir.join("results.json");
    write_json(&json_path, &results)?;
    let json_bytes = fs::read(&json_path).map_err(|e| io_failure(&json_path, e))?;

    let grid_name = grid_path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    let manifest = json!({
        "command": "sweep",
        "seed": seed,
        "mode": options.mode.name(),
        "primes": primes.map(|p| p.to_vec()),
        "degree_cap": options.degree_cap,
        "inputs": { grid_name: digest(&grid_bytes) },
        "outputs": { "results.csv": digest(&csv_bytes), "results.json": digest(&json_bytes) },
        "version": env!("CARGO_PKG_VERSION"),
        "timing": if timing { json!({ "total_millis": started.elapsed().as_millis() as u64 }) } else { Value::Null },
    });
    write_json(&dir.join("manifest.json"), &manifest)?;

    let unresolved = rows.iter().filter(|r| r.alpha.is_none()).count();
    Ok((format!("{} rows written to {} ({unresolved} unresolved)\n", rows.len(), dir.display()), unresolved))
}
