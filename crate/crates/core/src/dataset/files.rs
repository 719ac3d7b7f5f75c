//! Text dataset files: `label v1 v2 ...` (dense) or `label idx:val ...`
//! (sparse, 1-based indices). Files ending in `.gz` are decompressed.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use flate2::read::MultiGzDecoder;

use super::Sample;
use crate::{Error, Result, Scalar};

pub const USPS_DIM: usize = 256;
pub const USPS_TRAIN_SIZE: usize = 7291;
pub const USPS_TEST_SIZE: usize = 2007;
const USPS_CLASSES: usize = 10;

/// Parsed record: line number, label, values.
type Record<T> = (usize, usize, Vec<T>);

type TrainTest<F> = (Vec<Sample<F>>, Vec<Sample<F>>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Layout {
    Dense,
    Sparse,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct UspsOptions {
    /// Subtracted from every label before range checking. LIBSVM's `usps`
    /// files store digit `k` as label `k + 1`; use `1` for those.
    pub label_offset: usize,
}

/// File-name pairs searched by [`locate_usps`], with the label offset each
/// convention uses: the original `zip.train`/`zip.test` and LIBSVM's
/// `usps`/`usps.t`.
const USPS_NAMES: [(&str, &str, usize); 2] = [("zip.train", "zip.test", 0), ("usps", "usps.t", 1)];

/// Finds a USPS train/test pair in `dir`, plain or `.gz`.
pub fn locate_usps(dir: impl AsRef<Path>) -> Option<(PathBuf, PathBuf, UspsOptions)> {
    let dir = dir.as_ref();
    let find = |name: &str| {
        [name.to_string(), format!("{name}.gz")]
            .into_iter()
            .map(|n| dir.join(n))
            .find(|p| p.is_file())
    };
    USPS_NAMES.iter().find_map(|&(tr, te, offset)| {
        Some((find(tr)?, find(te)?, UspsOptions { label_offset: offset }))
    })
}

/// Loads the USPS train and test files.
///
/// Both files must hold 256-dimensional records with labels in `0..10`
/// (after `label_offset`). Features are mapped affinely to `[-1, 1]` using the
/// global min/max of the training file; the same map is applied to the test
/// file, whose values are then clamped to `[-1, 1]`.
pub fn load_usps<F: Scalar>(
    path_train: impl AsRef<Path>,
    path_test: impl AsRef<Path>,
    options: UspsOptions,
) -> Result<TrainTest<F>> {
    let mut train = read_usps_file(path_train.as_ref(), options)?;
    let mut test = read_usps_file(path_test.as_ref(), options)?;

    let (lo, hi) = train
        .iter()
        .flat_map(|s| s.features.iter())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let span = hi - lo;
    let rescale = |v: f64| {
        if span > 0.0 {
            (2.0 * (v - lo) / span - 1.0).clamp(-1.0, 1.0)
        } else {
            0.0
        }
    };
    let convert = |rows: &mut Vec<Sample<f64>>| -> Vec<Sample<F>> {
        rows.drain(..)
            .map(|s| Sample {
                features: s.features.into_iter().map(|v| F::lit(rescale(v))).collect(),
                label: s.label,
            })
            .collect()
    };
    Ok((convert(&mut train), convert(&mut test)))
}

fn read_usps_file(path: &Path, options: UspsOptions) -> Result<Vec<Sample<f64>>> {
    let records = parse_records(path, Some(USPS_DIM))?;
    records
        .into_iter()
        .map(|(line, label, features)| {
            let digit = label
                .checked_sub(options.label_offset)
                .filter(|&d| d < USPS_CLASSES)
                .ok_or_else(|| Error::UnknownLabel {
                    path: path.to_path_buf(),
                    line,
                    label: label.to_string(),
                })?;
            Ok(Sample::labeled(features, digit))
        })
        .collect()
}

/// Reads a labeled dataset file of either layout.
///
/// With `dim = None` the dimension is taken from the first dense record, or
/// from the largest index seen in a sparse file.
pub fn read_samples<F: Scalar>(path: impl AsRef<Path>, dim: Option<usize>) -> Result<Vec<Sample<F>>> {
    let records = parse_records(path.as_ref(), dim)?;
    Ok(records
        .into_iter()
        .map(|(_, label, features)| {
            Sample::labeled(features.into_iter().map(F::lit).collect(), label)
        })
        .collect())
}

fn open(path: &Path) -> Result<Box<dyn Read>> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    if path.extension().is_some_and(|e| e == "gz") {
        Ok(Box::new(MultiGzDecoder::new(file)))
    } else {
        Ok(Box::new(file))
    }
}

/// Returns `(line number, label, dense features)` per record.
fn parse_records(path: &Path, dim: Option<usize>) -> Result<Vec<Record<f64>>> {
    let reader = BufReader::new(open(path)?);
    let perr = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };

    let mut layout = None;
    let mut dense_dim = dim;
    let mut rows: Vec<Record<f64>> = Vec::new();
    // sparse rows are densified once the dimension is known
    let mut sparse_rows: Vec<Record<(usize, f64)>> = Vec::new();
    let mut max_index = 0usize;

    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut tokens = line.split_whitespace();
        let Some(label_tok) = tokens.next() else {
            continue;
        };
        let label = parse_label(label_tok).ok_or_else(|| Error::UnknownLabel {
            path: path.to_path_buf(),
            line: lineno,
            label: label_tok.to_string(),
        })?;
        let rest: Vec<&str> = tokens.collect();
        let this_layout = if rest.iter().any(|t| t.contains(':')) {
            Layout::Sparse
        } else {
            Layout::Dense
        };
        let layout = *layout.get_or_insert(this_layout);
        if rest.is_empty() && layout == Layout::Dense {
            return Err(perr(lineno, "record has a label but no features".into()));
        }

        match layout {
            Layout::Dense => {
                let features = rest
                    .iter()
                    .map(|t| parse_value(t).ok_or_else(|| perr(lineno, format!("bad value {t:?}"))))
                    .collect::<Result<Vec<f64>>>()?;
                let expected = *dense_dim.get_or_insert(features.len());
                if features.len() != expected {
                    return Err(Error::DimensionMismatch {
                        expected,
                        found: features.len(),
                        index: Some(lineno),
                    });
                }
                rows.push((lineno, label, features));
            }
            Layout::Sparse => {
                let mut entries = Vec::with_capacity(rest.len());
                for t in &rest {
                    let (idx, val) = t
                        .split_once(':')
                        .ok_or_else(|| perr(lineno, format!("expected idx:val, got {t:?}")))?;
                    let idx: usize = idx
                        .parse()
                        .ok()
                        .filter(|&k| k >= 1)
                        .ok_or_else(|| perr(lineno, format!("bad 1-based index {idx:?}")))?;
                    let val =
                        parse_value(val).ok_or_else(|| perr(lineno, format!("bad value {val:?}")))?;
                    if let Some(d) = dim {
                        if idx > d {
                            return Err(Error::DimensionMismatch {
                                expected: d,
                                found: idx,
                                index: Some(lineno),
                            });
                        }
                    }
                    max_index = max_index.max(idx);
                    entries.push((idx - 1, val));
                }
                sparse_rows.push((lineno, label, entries));
            }
        }
    }

    if rows.is_empty() && sparse_rows.is_empty() {
        return Err(perr(0, "no records".into()));
    }
    if !sparse_rows.is_empty() {
        let d = dim.unwrap_or(max_index);
        if d == 0 {
            return Err(perr(0, "sparse file has no feature entries".into()));
        }
        rows = sparse_rows
            .into_iter()
            .map(|(line, label, entries)| {
                let mut v = vec![0.0; d];
                for (k, x) in entries {
                    v[k] = x;
                }
                (line, label, v)
            })
            .collect();
    }
    Ok(rows)
}

/// Accepts `3`, `3.0`, `3.0000`; rejects negatives and fractions.
fn parse_label(tok: &str) -> Option<usize> {
    if let Ok(v) = tok.parse::<usize>() {
        return Some(v);
    }
    let v: f64 = tok.parse().ok()?;
    (v >= 0.0 && v.fract() == 0.0 && v < u32::MAX as f64).then_some(v as usize)
}

fn parse_value(tok: &str) -> Option<f64> {
    tok.parse::<f64>().ok().filter(|v| v.is_finite())
}
