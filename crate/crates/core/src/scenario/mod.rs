//! Shipped experiments, their configuration and reports.

mod config;
mod export;
mod run;

pub use config::{parse_complex, parse_config, parse_grid, ConfigFile};
pub use export::{export, to_bytes, Format};
pub use run::{run, run_all, ApproxEntry, ErrorRow, GapReport, KindReport, RunReport, TauReport};

use crate::arith::{Complex, Poly, Scalar};
use crate::error::{Error, Result};
use crate::measures::{FunctionSpec, MeasureSpec, RationalPerturbation};

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    /// `None` for documentation-only entries.
    pub spec: Option<FunctionSpec>,
    pub depth: usize,
    pub grid: Vec<Complex>,
    /// Approximant strategies to run; the first one fills the error table.
    pub kinds: Vec<String>,
    pub tau_horizon: usize,
    /// Margin kept from the gap endpoints when counting poles.
    pub gap_delta: Scalar,
    pub precision_bits: u32,
    pub note: Option<String>,
    pub expect_nonconvergent: bool,
}

impl Scenario {
    fn new(name: &str, description: &str, spec: FunctionSpec, depth: usize, grid: &[(f64, f64)], kinds: &[&str]) -> Self {
        Scenario {
            name: name.into(),
            description: description.into(),
            spec: Some(spec),
            depth,
            grid: grid.iter().map(|&(re, im)| Complex::new(dec(re), dec(im))).collect(),
            kinds: kinds.iter().map(|s| s.to_string()).collect(),
            tau_horizon: depth.saturating_sub(1),
            gap_delta: Scalar::ratio(1, 1_000_000),
            precision_bits: crate::arith::precision_bits(),
            note: None,
            expect_nonconvergent: false,
        }
    }

    /// Rejects grid points on the support.
    pub fn validate(&self) -> Result<()> {
        let Some(spec) = &self.spec else { return Ok(()) };
        spec.measure.validate()?;
        if self.depth == 0 {
            return Err(Error::Config { line: None, message: "depth must be positive".into() });
        }
        if self.kinds.is_empty() {
            return Err(Error::Config { line: None, message: "no approximant kinds".into() });
        }
        for k in &self.kinds {
            crate::pade::registry().get(k)?;
        }
        let margin = Scalar::pow2(-20);
        for z in &self.grid {
            for (lo, hi) in spec.measure.support() {
                if z.im.abs() < margin && z.re > &lo - &margin && z.re < &hi + &margin {
                    return Err(Error::TooCloseToSupport(z.to_string()));
                }
            }
        }
        Ok(())
    }
}

/// Short decimals used in the catalog, read exactly.
fn dec(x: f64) -> Scalar {
    format!("{x}").parse().expect("catalog literal")
}

fn r(p: i64, q: i64) -> Scalar {
    Scalar::ratio(p, q)
}

/// `c = cos(π(√2 − 1))`.
pub fn chebyshev_shift() -> Scalar {
    let theta = Scalar::from_int(2).sqrt() - Scalar::one();
    (Scalar::pi() * theta).cos()
}

pub fn catalog() -> Vec<Scenario> {
    let two_periodic = MeasureSpec::jacobi_periodic(vec![Scalar::one(), Scalar::zero()], vec![Scalar::one()]);
    let mut tp = Scenario::new(
        "two-periodic",
        "Jacobi matrix with diagonal 1,0,1,0,... and unit off-diagonal; moments 1,1,2,3,...",
        FunctionSpec::markov(two_periodic),
        23,
        &[(4.0, 0.0), (0.0, 3.0), (-3.0, 2.0)],
        &["diagonal", "subdiagonal", "oracle"],
    );
    tp.tau_horizon = 22;

    let arcsine = Scenario::new(
        "markov-arcsine",
        "Cauchy transform of the arcsine distribution on [-1,1]",
        FunctionSpec::markov(MeasureSpec::arcsine()),
        16,
        &[(2.0, 0.0), (0.0, 1.5), (0.5, 0.5)],
        &["diagonal", "subdiagonal", "modified", "oracle"],
    );

    let mut cheb = Scenario::new(
        "shifted-chebyshev",
        "t-weighted arcsine distribution on [c-1,c+1], c = cos(pi(sqrt2-1)); 0 lies inside the support",
        FunctionSpec::t_weighted(MeasureSpec::arcsine_shifted(chebyshev_shift())),
        42,
        &[(3.0, 0.0), (0.0, 3.0)],
        &["definitizable", "diagonal"],
    );
    cheb.tau_horizon = 41;

    let even_gap = Scenario::new(
        "even-gap",
        "t-weighted uniform probability on [-1,-1/2] and [1/2,1]",
        FunctionSpec::t_weighted(MeasureSpec::lebesgue(vec![(r(-1, 1), r(-1, 2)), (r(1, 2), r(1, 1))], true)),
        20,
        &[(0.05, 0.0), (0.0, 0.5), (2.0, 0.0)],
        &["definitizable", "diagonal", "subdiagonal"],
    );

    let gap = Scenario::new(
        "gap-lebesgue",
        "t-weighted uniform probability on [-1,-1/3] and [1/2,1]",
        FunctionSpec::t_weighted(MeasureSpec::lebesgue(vec![(r(-1, 1), r(-1, 3)), (r(1, 2), r(1, 1))], true)),
        21,
        &[(0.05, 0.0), (0.0, 0.5), (2.0, 0.0)],
        &["definitizable", "diagonal", "subdiagonal"],
    );

    let atoms = Scenario::new(
        "atom-pair",
        "two equal atoms at -1/2 and 1/2; the fraction terminates",
        FunctionSpec::markov(MeasureSpec::atoms(vec![(r(-1, 2), r(1, 2)), (r(1, 2), r(1, 2))])),
        2,
        &[(2.0, 0.0), (0.0, 1.0)],
        &["diagonal", "subdiagonal", "oracle"],
    );

    let modified = Scenario::new(
        "modified-pade",
        "t-weighted uniform probability on [-1,1]: modified against plain diagonal approximants",
        FunctionSpec::t_weighted(MeasureSpec::lebesgue(vec![(r(-1, 1), r(1, 1))], true)),
        12,
        &[(0.0, 0.5), (2.0, 0.0), (0.3, 0.2)],
        &["modified", "definitizable"],
    );

    let perturbed = Scenario::new(
        "perturbed-arcsine",
        "arcsine Cauchy transform plus (1/2)/(lambda-3/2), an indefinite rational perturbation",
        FunctionSpec {
            measure: MeasureSpec::arcsine(),
            perturbation: Some(RationalPerturbation {
                q1: Poly::one(),
                w1: Poly::one(),
                q2: Poly::constant(r(1, 2)),
                w2: Poly::new(vec![r(-3, 2), Scalar::one()]),
            }),
            t_weight: false,
        },
        12,
        &[(2.5, 0.0), (0.0, 2.0)],
        &["diagonal", "subdiagonal", "oracle"],
    );

    let turning = Scenario {
        name: "two-turning-points".into(),
        description: "arcsine density times (t-cos(pi th1))(t-cos(pi th2)) with 1, th1, th2 rationally independent".into(),
        spec: None,
        depth: 0,
        grid: vec![],
        kinds: vec![],
        tau_horizon: 0,
        gap_delta: Scalar::zero(),
        precision_bits: crate::arith::precision_bits(),
        note: Some(
            "Two sign changes of the weight. All diagonal approximants exist, yet their poles are dense \
             in the plane, so no locally uniform convergence can be observed. Kept as a note; nothing is computed."
                .into(),
        ),
        expect_nonconvergent: true,
    };

    vec![tp, arcsine, cheb, even_gap, gap, atoms, modified, perturbed, turning]
}

pub fn find(name: &str) -> Result<Scenario> {
    catalog().into_iter().find(|s| s.name == name).ok_or_else(|| Error::Unknown { kind: "scenario", name: name.into() })
}
