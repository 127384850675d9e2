//! File formats: prediction records (JSONL and CSV), catalogs, class
//! lists, and synthetic-dataset CSV.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context};

use osr_eval::record::{OpenPrediction, PredictionRecord};
use osr_eval::recognizers::SyntheticDataset;

use crate::cli_error::{CliError, CliResult};

/// Prediction records plus the 1-based source line of each, for
/// line-numbered validation messages.
pub struct LoadedPredictions {
    pub records: Vec<PredictionRecord>,
    pub lines: Vec<u64>,
}

/// Reads a catalog file: JSON `{"kkc": [...], "uuc": [...]}`.
pub fn read_catalog(path: &Path) -> CliResult<osr_eval::ClassCatalog> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading catalog {}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::schema(anyhow!("catalog {}: {e}", path.display())))
}

/// Reads predictions from JSONL (one object per line) or, when the path
/// ends in `.csv`, from headered CSV.
pub fn read_predictions(path: &Path) -> CliResult<LoadedPredictions> {
    let is_csv = path
        .extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("csv"));
    let loaded = if is_csv {
        read_predictions_csv(path)?
    } else {
        read_predictions_jsonl(path)?
    };
    if loaded.records.is_empty() {
        return Err(CliError::schema(anyhow!(
            "{}: no prediction records",
            path.display()
        )));
    }
    Ok(loaded)
}

fn read_predictions_jsonl(path: &Path) -> CliResult<LoadedPredictions> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading predictions {}", path.display()))?;
    let mut records = Vec::new();
    let mut lines = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: PredictionRecord = serde_json::from_str(line).map_err(|e| {
            CliError::schema(anyhow!("{} line {}: {e}", path.display(), i + 1))
        })?;
        records.push(record);
        lines.push(i as u64 + 1);
    }
    Ok(LoadedPredictions { records, lines })
}

/// CSV columns: `true`, `open_pred`, optionally `closed_pred`, and
/// optionally a contiguous `score_0..score_{K-1}` block. Empty cells mean
/// "absent"; a partially filled score block is an error.
fn read_predictions_csv(path: &Path) -> CliResult<LoadedPredictions> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("reading predictions {}", path.display()))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::schema(anyhow!("{}: {e}", path.display())))?
        .clone();

    let column = |name: &str| headers.iter().position(|h| h == name);
    let true_col = column("true").ok_or_else(|| {
        CliError::schema(anyhow!("{}: missing `true` column", path.display()))
    })?;
    let open_col = column("open_pred").ok_or_else(|| {
        CliError::schema(anyhow!("{}: missing `open_pred` column", path.display()))
    })?;
    let closed_col = column("closed_pred");
    let mut numbered: Vec<(usize, usize)> = headers
        .iter()
        .enumerate()
        .filter_map(|(pos, h)| {
            h.strip_prefix("score_")
                .and_then(|n| n.parse::<usize>().ok())
                .map(|n| (n, pos))
        })
        .collect();
    numbered.sort_unstable();
    for (expected, &(n, _)) in numbered.iter().enumerate() {
        if n != expected {
            return Err(CliError::schema(anyhow!(
                "{}: score columns must be contiguous from score_0; missing score_{expected}",
                path.display()
            )));
        }
    }
    let score_cols: Vec<usize> = numbered.into_iter().map(|(_, pos)| pos).collect();

    let mut records = Vec::new();
    let mut lines = Vec::new();
    for result in reader.records() {
        let row = result.map_err(|e| CliError::schema(anyhow!("{}: {e}", path.display())))?;
        let line = row.position().map_or(0, |p| p.line());
        let cell = |i: usize| row.get(i).unwrap_or("");

        let mut record = PredictionRecord::new(
            cell(true_col),
            match cell(open_col) {
                s if s == osr_eval::UNKNOWN_SENTINEL => OpenPrediction::Unknown,
                s => OpenPrediction::known(s),
            },
        );
        if let Some(col) = closed_col {
            let value = cell(col);
            if !value.is_empty() {
                record = record.with_closed_pred(value);
            }
        }
        if !score_cols.is_empty() {
            let raw: Vec<&str> = score_cols.iter().map(|&c| cell(c)).collect();
            if raw.iter().all(|s| s.is_empty()) {
                // Row without scores; fine.
            } else {
                let scores = raw
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        s.parse::<f64>().map_err(|_| {
                            CliError::schema(anyhow!(
                                "{} line {line}: score_{i} is `{s}`, expected a number",
                                path.display()
                            ))
                        })
                    })
                    .collect::<CliResult<Vec<f64>>>()?;
                record = record.with_scores(scores);
            }
        }
        records.push(record);
        lines.push(line);
    }
    Ok(LoadedPredictions { records, lines })
}

/// Writes records as JSONL, one object per line.
pub fn write_predictions_jsonl(path: &Path, records: &[PredictionRecord]) -> CliResult<()> {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).context("serializing record")?);
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Reads a class-list file: one label per line, blank lines ignored.
pub fn read_class_list(path: &Path) -> CliResult<Vec<String>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading class list {}", path.display()))?;
    let labels: Vec<String> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect();
    if labels.is_empty() {
        return Err(CliError::schema(anyhow!(
            "{}: no class labels",
            path.display()
        )));
    }
    Ok(labels)
}

/// Dataset CSV: `label,x_0..x_{dim-1}`, one sample per row.
pub fn write_dataset_csv(path: &Path, dataset: &SyntheticDataset) -> CliResult<()> {
    let mut out = String::from("label");
    for d in 0..dataset.dim {
        out.push_str(&format!(",x_{d}"));
    }
    out.push('\n');
    for (features, class) in &dataset.samples {
        out.push_str(dataset.label_of(*class));
        for v in features {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Serializes a value as pretty JSON with a trailing newline. Struct
/// fields keep declaration order, so output is diff-stable.
pub fn to_pretty_json<T: serde::Serialize>(value: &T) -> CliResult<String> {
    let mut text = serde_json::to_string_pretty(value).context("serializing JSON")?;
    text.push('\n');
    Ok(text)
}

/// Parses "2:8,3:7" into [(2, 8), (3, 7)].
pub fn parse_configs(spec: &str) -> CliResult<Vec<(u32, u32)>> {
    spec.split(',')
        .map(|pair| {
            let (kkc, uuc) = pair
                .split_once(':')
                .ok_or_else(|| bad_config(pair, "expected `n_kkc:n_uuc`"))?;
            Ok((
                kkc.trim()
                    .parse()
                    .map_err(|_| bad_config(pair, "known-class count is not a number"))?,
                uuc.trim()
                    .parse()
                    .map_err(|_| bad_config(pair, "unknown-class count is not a number"))?,
            ))
        })
        .collect()
}

fn bad_config(pair: &str, reason: &str) -> CliError {
    CliError::schema(anyhow!("config `{pair}`: {reason}"))
}

/// Parses "2,4,8x2,10,100" into the row-major cross product of the two
/// class-count lists.
pub fn parse_grid(spec: &str) -> CliResult<Vec<(u32, u32)>> {
    let (kkc_part, uuc_part) = spec.split_once('x').ok_or_else(|| {
        CliError::schema(anyhow!(
            "grid `{spec}`: expected `<kkc list>x<uuc list>`, e.g. `2,4x10,100`"
        ))
    })?;
    let parse_list = |part: &str, side: &str| -> CliResult<Vec<u32>> {
        part.split(',')
            .map(|v| {
                v.trim().parse::<u32>().map_err(|_| {
                    CliError::schema(anyhow!("grid `{spec}`: bad {side} count `{v}`"))
                })
            })
            .collect()
    };
    let kkc = parse_list(kkc_part, "known-class")?;
    let uuc = parse_list(uuc_part, "unknown-class")?;
    let mut grid = Vec::with_capacity(kkc.len() * uuc.len());
    for &k in &kkc {
        for &u in &uuc {
            grid.push((k, u));
        }
    }
    Ok(grid)
}
