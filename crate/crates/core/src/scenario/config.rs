//! TOML run configuration.
//!
//! ```toml
//! [measure]
//! density = "lebesgue"          # arcsine | arcsine-shifted | lebesgue | custom | jacobi-periodic | none
//! intervals = [["-1", "-1/3"], ["1/2", "1"]]
//! normalize = true
//! t_weight = true
//! # shift = "0.25"              # arcsine-shifted
//! # table = [["-1", "0"], ["1", "2"]]   # custom: (t, density) nodes
//! # diag = ["1", "0"]  off = ["1"]      # jacobi-periodic
//! # atoms = [["1/2", "1/4"]]           # (position, weight)
//!
//! [perturbation]                # optional; ascending coefficients
//! q1 = ["1"]
//! w1 = ["1"]
//! q2 = ["1/2"]
//! w2 = ["-3/2", "1"]
//!
//! [run]
//! name = "my-gap"
//! depth = 12
//! kinds = ["definitizable", "diagonal"]
//! grid = "0.05; 0,0.5; 2"
//! precision_bits = 256
//! tau_horizon = 11
//! gap_delta = "1e-6"
//! ```
//!
//! Numbers are strings: `p/q` and decimals are read exactly.

use serde::Deserialize;

use crate::arith::{Complex, Poly, Scalar};
use crate::error::{Error, Result};
use crate::measures::{Density, FunctionSpec, MeasureSpec, RationalPerturbation};

use super::Scenario;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub measure: MeasureSection,
    pub perturbation: Option<PerturbationSection>,
    #[serde(default)]
    pub run: RunSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSection {
    pub density: String,
    #[serde(default)]
    pub intervals: Vec<(String, String)>,
    #[serde(default)]
    pub normalize: bool,
    #[serde(default)]
    pub t_weight: bool,
    pub shift: Option<String>,
    #[serde(default)]
    pub table: Vec<(String, String)>,
    #[serde(default)]
    pub diag: Vec<String>,
    #[serde(default)]
    pub off: Vec<String>,
    #[serde(default)]
    pub atoms: Vec<(String, String)>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSection {
    pub q1: Vec<String>,
    pub w1: Vec<String>,
    pub q2: Vec<String>,
    pub w2: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub name: Option<String>,
    pub depth: Option<usize>,
    pub kinds: Option<Vec<String>>,
    pub grid: Option<String>,
    pub precision_bits: Option<u32>,
    pub tau_horizon: Option<usize>,
    pub gap_delta: Option<String>,
}

fn num(s: &str) -> Result<Scalar> {
    s.trim().parse::<Scalar>().map_err(|_| Error::Parse(format!("not a number: {s:?}")))
}

fn pairs(v: &[(String, String)]) -> Result<Vec<(Scalar, Scalar)>> {
    v.iter().map(|(a, b)| Ok((num(a)?, num(b)?))).collect()
}

fn poly(v: &[String]) -> Result<Poly> {
    Ok(Poly::new(v.iter().map(|s| num(s)).collect::<Result<_>>()?))
}

/// `"re"`, `"re,im"` or `"a+bi"`-free pairs; one point per item.
pub fn parse_complex(s: &str) -> Result<Complex> {
    let mut parts = s.split(|c: char| c == ',' || c.is_whitespace()).filter(|p| !p.is_empty());
    let re = num(parts.next().ok_or_else(|| Error::Parse("empty grid point".into()))?)?;
    let im = parts.next().map(num).transpose()?.unwrap_or_default();
    if parts.next().is_some() {
        return Err(Error::Parse(format!("grid point {s:?} has more than two components")));
    }
    Ok(Complex::new(re, im))
}

/// Points separated by `;` or newlines; `#` starts a comment.
pub fn parse_grid(s: &str) -> Result<Vec<Complex>> {
    s.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(';'))
        .filter(|p| !p.trim().is_empty())
        .map(parse_complex)
        .collect()
}

fn line_of(src: &str, e: &toml::de::Error) -> Option<usize> {
    e.span().map(|s| src[..s.start.min(src.len())].matches('\n').count() + 1)
}

impl MeasureSection {
    pub fn to_measure(&self) -> Result<MeasureSpec> {
        let density = match self.density.as_str() {
            "arcsine" => Density::Arcsine,
            "arcsine-shifted" => {
                Density::ArcsineShifted(num(self.shift.as_deref().ok_or_else(|| Error::Parse("arcsine-shifted needs shift".into()))?)?)
            }
            "lebesgue" => Density::Lebesgue,
            "custom" => Density::Custom(pairs(&self.table)?),
            "jacobi-periodic" => Density::JacobiPeriodic {
                diag: self.diag.iter().map(|s| num(s)).collect::<Result<_>>()?,
                off: self.off.iter().map(|s| num(s)).collect::<Result<_>>()?,
            },
            "none" => Density::None,
            other => return Err(Error::Unknown { kind: "density", name: other.into() }),
        };
        let mut intervals = pairs(&self.intervals)?;
        match &density {
            Density::Arcsine if intervals.is_empty() => intervals.push((Scalar::from_int(-1), Scalar::one())),
            Density::ArcsineShifted(c) if intervals.is_empty() => intervals.push((c - Scalar::one(), c + Scalar::one())),
            _ => {}
        }
        let m = MeasureSpec { intervals, density, atoms: pairs(&self.atoms)?, normalize: self.normalize };
        m.validate()?;
        Ok(m)
    }
}

/// Parses a configuration into a runnable scenario.
pub fn parse_config(src: &str) -> Result<Scenario> {
    let cfg: ConfigFile = toml::from_str(src).map_err(|e| Error::Config { line: line_of(src, &e), message: e.message().to_string() })?;
    let measure = cfg.measure.to_measure()?;
    let perturbation = cfg
        .perturbation
        .as_ref()
        .map(|p| -> Result<_> { Ok(RationalPerturbation { q1: poly(&p.q1)?, w1: poly(&p.w1)?, q2: poly(&p.q2)?, w2: poly(&p.w2)? }) })
        .transpose()?;
    let spec = FunctionSpec { measure, perturbation, t_weight: cfg.measure.t_weight };
    let run = cfg.run;
    let depth = run.depth.unwrap_or(10);
    let default_kinds =
        if spec.t_weight { vec!["definitizable".to_string(), "diagonal".into()] } else { vec!["diagonal".into(), "subdiagonal".into()] };
    let sc = Scenario {
        name: run.name.unwrap_or_else(|| "config".into()),
        description: "user configuration".into(),
        spec: Some(spec),
        depth,
        grid: run.grid.as_deref().map(parse_grid).transpose()?.unwrap_or_default(),
        kinds: run.kinds.unwrap_or(default_kinds),
        tau_horizon: run.tau_horizon.unwrap_or(depth.saturating_sub(1)),
        gap_delta: run.gap_delta.as_deref().map(num).transpose()?.unwrap_or(Scalar::ratio(1, 1_000_000)),
        precision_bits: run.precision_bits.unwrap_or_else(crate::arith::precision_bits),
        note: None,
        expect_nonconvergent: false,
    };
    sc.validate()?;
    Ok(sc)
}
