use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use log::{debug, info};
use serde::Serialize;

use crate::arith::{with_precision, Complex, Scalar};
use crate::defclass::{classify, ClassificationReport, DSeries};
use crate::error::{Error, Result};
use crate::gapgeometry::{harmonic_measure, GapSpec, HarmonicMeasureReport};
use crate::pade::{
    condition_b_report, gap_pole_count, pade_oracle, registry, ApproxKind, ConditionBReport, RationalApproximant, StrategyContext,
};
use crate::recurrence::TauSequence;

use super::Scenario;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorRow {
    pub depth: usize,
    pub n_j: usize,
    pub lambda: Complex,
    pub approx: Complex,
    pub exact: Complex,
    pub abs_err: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxEntry {
    pub j: usize,
    pub approximant: RationalApproximant,
    pub contact_defect: Scalar,
    /// Relative cross-multiplied difference to the linear-solve oracle.
    pub oracle_defect: Option<Scalar>,
    /// Poles inside the shrunken gap.
    pub gap_poles: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KindReport {
    pub kind: String,
    pub entries: Vec<ApproxEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TauReport {
    pub sequence: TauSequence,
    pub condition_b: ConditionBReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapReport {
    pub alpha: Scalar,
    pub beta: Scalar,
    pub delta: Scalar,
    pub harmonic: Option<HarmonicMeasureReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub description: String,
    pub precision_bits: u32,
    pub exact: bool,
    pub depth: usize,
    pub error_kind: Option<String>,
    pub errors: Vec<ErrorRow>,
    pub approximants: Vec<KindReport>,
    pub tau: Option<TauReport>,
    pub gap: Option<GapReport>,
    pub class: Option<ClassificationReport>,
    pub note: Option<String>,
    pub expect_nonconvergent: bool,
    pub elapsed_ms: u64,
}

impl RunReport {
    pub fn kind(&self, name: &str) -> Option<&KindReport> {
        self.approximants.iter().find(|k| k.kind == name)
    }
}

/// Oracle for the same Padé table entry, when the kind is a Padé approximant.
fn oracle_for(ctx: &StrategyContext, r: &RationalApproximant) -> Option<Result<RationalApproximant>> {
    match r.kind {
        ApproxKind::Diagonal => Some(pade_oracle(&ctx.f, r.n, r.n)),
        ApproxKind::Subdiagonal => Some(pade_oracle(&ctx.f, r.n, r.n - 1)),
        ApproxKind::Definitizable => Some(pade_oracle(&ctx.t_series, r.n, r.n)),
        ApproxKind::Modified | ApproxKind::Oracle => None,
    }
}

/// Reference value of the function a strategy approximates.
fn reference(sc: &Scenario, ctx: &StrategyContext, t_side: bool, z: &Complex) -> Result<Complex> {
    let spec = sc.spec.as_ref().expect("computational scenario");
    let own = spec.eval_exact(z)?;
    // `spec` evaluates `𝔉` when t-weighted, `F` otherwise.
    match (spec.t_weight, t_side) {
        (true, true) | (false, false) => Ok(own),
        (false, true) => Ok(&Complex::real(ctx.gamma.clone()) + &(z * &own)),
        (true, false) => Ok(&(&own - &Complex::real(ctx.gamma.clone())) / z),
    }
}

pub fn run(sc: &Scenario) -> Result<RunReport> {
    with_precision(sc.precision_bits, || run_inner(sc))
}

fn run_inner(sc: &Scenario) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = RunReport {
        scenario: sc.name.clone(),
        description: sc.description.clone(),
        precision_bits: sc.precision_bits,
        exact: false,
        depth: 0,
        error_kind: None,
        errors: vec![],
        approximants: vec![],
        tau: None,
        gap: None,
        class: None,
        note: sc.note.clone(),
        expect_nonconvergent: sc.expect_nonconvergent,
        elapsed_ms: 0,
    };
    let Some(spec) = &sc.spec else {
        return Ok(report);
    };
    sc.validate()?;
    info!("scenario {}: depth {}, {} bits", sc.name, sc.depth, sc.precision_bits);
    let ctx = StrategyContext::from_spec(spec, sc.depth)?;
    report.exact = ctx.pair.is_exact() && ctx.f.is_exact();
    report.depth = ctx.depth();

    let gap = spec.gap();
    for (idx, kind) in sc.kinds.iter().enumerate() {
        let strategy = registry().get(kind)?;
        let source = strategy.source(&ctx);
        let t_side = std::ptr::eq(source, &ctx.t_series);
        let mut entries = Vec::new();
        for j in strategy.admissible(&ctx) {
            let r = strategy.build(&ctx, j)?;
            let contact_defect = r.contact_defect(source)?;
            let oracle_defect = match oracle_for(&ctx, &r) {
                Some(Ok(o)) => Some(r.cross_defect(&o)),
                Some(Err(Error::SystemSingular { .. })) | None => None,
                Some(Err(e)) => return Err(e),
            };
            let gap_poles = match &gap {
                Some((a, b)) => Some(gap_pole_count(&r, a, b, &sc.gap_delta)?.count),
                None => None,
            };
            if idx == 0 {
                for z in &sc.grid {
                    let approx = r.eval(z)?;
                    let exact = reference(sc, &ctx, t_side, z)?;
                    let abs_err = (&approx - &exact).abs();
                    report.errors.push(ErrorRow { depth: j, n_j: r.n, lambda: z.clone(), approx, exact, abs_err });
                }
            }
            debug!("{} j={j} n={} contact defect {}", kind, r.n, contact_defect.to_decimal(6));
            entries.push(ApproxEntry { j, approximant: r, contact_defect, oracle_defect, gap_poles });
        }
        if idx == 0 {
            report.error_kind = Some(kind.clone());
        }
        report.approximants.push(KindReport { kind: kind.clone(), entries });
    }

    if sc.tau_horizon > 0 {
        let sequence = ctx.pair.tau_sequence(sc.tau_horizon)?;
        let condition_b = condition_b_report(&sequence);
        report.tau = Some(TauReport { sequence, condition_b });
    }

    if let Some((alpha, beta)) = gap {
        let harmonic = GapSpec::new(alpha.clone(), beta.clone())
            .ok()
            .filter(|_| {
                let sup = spec.measure.support();
                sup.len() == 2 && sup[0].0 == Scalar::from_int(-1) && sup[1].1 == Scalar::one()
            })
            .map(|g| harmonic_measure(&g))
            .transpose()?;
        report.gap = Some(GapReport { alpha, beta, delta: sc.gap_delta.clone(), harmonic });
    }

    if spec.t_weight {
        let d = DSeries::from_series(&ctx.t_series);
        let horizon = (d.order() / 2).min(10);
        report.class = Some(classify(&d, horizon)?);
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Runs scenarios on a pool of `workers` threads; results keep the input order.
pub fn run_all(scenarios: &[Scenario], workers: usize) -> Vec<Result<RunReport>> {
    let next = AtomicUsize::new(0);
    let out: Mutex<Vec<Option<Result<RunReport>>>> = Mutex::new((0..scenarios.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers.max(1).min(scenarios.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= scenarios.len() {
                    break;
                }
                let r = run(&scenarios[i]);
                out.lock().expect("result slot")[i] = Some(r);
            });
        }
    });
    out.into_inner().expect("result slots").into_iter().map(|r| r.expect("every scenario ran")).collect()
}
