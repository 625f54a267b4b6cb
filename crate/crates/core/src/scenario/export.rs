use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

use super::RunReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Unknown { kind: "format", name: other.into() }),
        }
    }
}

#[derive(Serialize)]
struct CsvRow {
    depth: usize,
    n_j: usize,
    lambda_re: String,
    lambda_im: String,
    approx_re: String,
    approx_im: String,
    exact_re: String,
    exact_im: String,
    abs_err: String,
}

const DIGITS: usize = 30;

fn csv_bytes(report: &RunReport) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &report.errors {
        w.serialize(CsvRow {
            depth: r.depth,
            n_j: r.n_j,
            lambda_re: r.lambda.re.to_decimal(DIGITS),
            lambda_im: r.lambda.im.to_decimal(DIGITS),
            approx_re: r.approx.re.to_decimal(DIGITS),
            approx_im: r.approx.im.to_decimal(DIGITS),
            exact_re: r.exact.re.to_decimal(DIGITS),
            exact_im: r.exact.im.to_decimal(DIGITS),
            abs_err: r.abs_err.to_decimal(DIGITS),
        })
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    if report.errors.is_empty() {
        w.write_record(["depth", "n_j", "lambda_re", "lambda_im", "approx_re", "approx_im", "exact_re", "exact_im", "abs_err"])
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

pub fn to_bytes(report: &RunReport, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => csv_bytes(report),
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(report).map_err(|e| Error::Io(e.to_string()))?;
            v.push(b'\n');
            Ok(v)
        }
    }
}

/// Writes `<dir>/<scenario>.<ext>` through a temporary file and a rename.
pub fn export(report: &RunReport, format: Format, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let target = dir.join(format!("{}.{ext}", report.scenario));
    let tmp = dir.join(format!(".{}.{ext}.tmp", report.scenario));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&to_bytes(report, format)?)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, &target)?;
    Ok(target)
}
