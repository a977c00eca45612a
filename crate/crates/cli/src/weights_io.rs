//! Plain-text weights files.
//!
//! Layout (one token pair per line, complex entries as `(re, im)` pairs in
//! flat column-major element order):
//!
//! ```text
//! dpbf-weights/1
//! kind ula
//! rows 1
//! cols 4
//! col_spacing_wl 5.0000000000000000e-1
//! row_spacing_wl 5.0000000000000000e-1
//! pol A
//! (1.0000000000000000e0, 0.0000000000000000e0)
//! ...
//! pol B
//! ...
//! ```
//!
//! Floats carry 17 significant digits, so writing and re-reading weights
//! reproduces them bit for bit.

use std::fs;
use std::path::Path;

use dpbf_core::pattern::DualPolWeights;
use dpbf_core::{ArrayGeometry, ArrayKind, Complex64};

use crate::CliError;

pub const WEIGHTS_SCHEMA: &str = "dpbf-weights/1";

/// A parsed weights file: the geometry it declares plus both tapers.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightsFile {
    pub geometry: ArrayGeometry,
    pub weights: DualPolWeights,
}

fn bad(path: &Path, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("weights file {}: {msg}", path.display()))
}

/// 17 significant digits; round-trips any finite f64 exactly.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_weights(path: &Path, geom: &ArrayGeometry, w: &DualPolWeights) -> Result<(), CliError> {
    if !w.matches(geom) {
        return Err(CliError::Input(format!(
            "weights shape {}x{} does not match the geometry {}x{}",
            w.n_rows(),
            w.n_cols(),
            geom.n_rows(),
            geom.n_cols()
        )));
    }
    let mut out = String::new();
    out.push_str(WEIGHTS_SCHEMA);
    out.push('\n');
    out.push_str(match geom.kind() {
        ArrayKind::Ula => "kind ula\n",
        ArrayKind::Ura => "kind ura\n",
    });
    out.push_str(&format!("rows {}\n", geom.n_rows()));
    out.push_str(&format!("cols {}\n", geom.n_cols()));
    out.push_str(&format!("col_spacing_wl {}\n", fmt_f64(geom.col_spacing_wl())));
    out.push_str(&format!("row_spacing_wl {}\n", fmt_f64(geom.row_spacing_wl())));
    for (label, values) in [("A", w.w_a()), ("B", w.w_b())] {
        out.push_str(&format!("pol {label}\n"));
        for v in values {
            out.push_str(&format!("({}, {})\n", fmt_f64(v.re), fmt_f64(v.im)));
        }
    }
    fs::write(path, out).map_err(|e| bad(path, format!("cannot write: {e}")))
}

fn parse_f64(path: &Path, token: &str, what: &str) -> Result<f64, CliError> {
    token
        .parse::<f64>()
        .map_err(|_| bad(path, format!("{what}: expected a number, got \"{token}\"")))
}

fn parse_complex(path: &Path, line: &str) -> Result<Complex64, CliError> {
    let inner = line
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| bad(path, format!("expected \"(re, im)\", got \"{line}\"")))?;
    let (re, im) = inner
        .split_once(',')
        .ok_or_else(|| bad(path, format!("expected \"(re, im)\", got \"{line}\"")))?;
    Ok(Complex64::new(
        parse_f64(path, re.trim(), "weight real part")?,
        parse_f64(path, im.trim(), "weight imaginary part")?,
    ))
}

pub fn read_weights(path: &Path) -> Result<WeightsFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| bad(path, format!("cannot read: {e}")))?;
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| bad(path, format!("unexpected end of file, expected {what}")))
    };

    let header = next("schema line")?;
    if header != WEIGHTS_SCHEMA {
        return Err(bad(path, format!("expected schema \"{WEIGHTS_SCHEMA}\", got \"{header}\"")));
    }
    let mut field = |key: &str| -> Result<String, CliError> {
        let line = next(key)?;
        let (k, v) = line
            .split_once(' ')
            .ok_or_else(|| bad(path, format!("expected \"{key} <value>\", got \"{line}\"")))?;
        if k != key {
            return Err(bad(path, format!("expected key \"{key}\", got \"{k}\"")));
        }
        Ok(v.trim().to_string())
    };

    let kind = field("kind")?;
    let rows: usize = field("rows")?
        .parse()
        .map_err(|_| bad(path, "rows: expected a positive integer"))?;
    let cols: usize = field("cols")?
        .parse()
        .map_err(|_| bad(path, "cols: expected a positive integer"))?;
    let col_spacing = parse_f64(path, &field("col_spacing_wl")?, "col_spacing_wl")?;
    let row_spacing = parse_f64(path, &field("row_spacing_wl")?, "row_spacing_wl")?;

    let geometry = match kind.as_str() {
        "ula" => {
            if rows != 1 {
                return Err(bad(path, format!("kind ula requires rows 1, got {rows}")));
            }
            ArrayGeometry::ula(cols, col_spacing)
        }
        "ura" => ArrayGeometry::ura(rows, cols, row_spacing, col_spacing),
        other => return Err(bad(path, format!("kind must be \"ula\" or \"ura\", got \"{other}\""))),
    }
    .map_err(|e| bad(path, e))?;

    let mut read_pol = |label: &str| -> Result<Vec<Complex64>, CliError> {
        let line = next("polarization header")?;
        if line != format!("pol {label}") {
            return Err(bad(path, format!("expected \"pol {label}\", got \"{line}\"")));
        }
        let mut values = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            values.push(parse_complex(path, next("weight entry")?)?);
        }
        Ok(values)
    };
    let w_a = read_pol("A")?;
    let w_b = read_pol("B")?;
    if let Some(extra) = lines.next() {
        return Err(bad(path, format!("trailing content: \"{extra}\"")));
    }

    let weights = match geometry.kind() {
        ArrayKind::Ula => DualPolWeights::ula(w_a, w_b),
        ArrayKind::Ura => DualPolWeights::ura(rows, cols, w_a, w_b),
    }
    .map_err(|e| bad(path, e))?;
    Ok(WeightsFile { geometry, weights })
}
