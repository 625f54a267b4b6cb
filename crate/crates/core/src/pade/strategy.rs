//! Approximant variants behind one trait, looked up by name.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::arith::{FormalSeries, Scalar};
use crate::error::{Error, Result};
use crate::measures::FunctionSpec;
use crate::pfraction::{expand_pfraction_prefix, PFraction};
use crate::recurrence::{poly_pair, PolySequencePair};

use super::{definitizable_diagonal, diagonal, modified_diagonal, pade_oracle, subdiagonal, RationalApproximant};

/// Everything a strategy may need: the N-class series `F`, the associated
/// `𝔉 = γ + λF`, and the P-fraction data of `F`.
#[derive(Clone, Debug)]
pub struct StrategyContext {
    pub f: FormalSeries,
    pub gamma: Scalar,
    pub t_series: FormalSeries,
    pub pf: PFraction,
    pub pair: PolySequencePair,
}

impl StrategyContext {
    pub fn new(f: FormalSeries, gamma: Scalar, depth: usize) -> Result<Self> {
        let t_series = {
            let mut t = f.mul_lambda();
            t.constant = &t.constant + &gamma;
            t
        };
        let pf = expand_pfraction_prefix(&f, depth)?;
        let pair = poly_pair(&pf, pf.len().min(depth))?;
        Ok(StrategyContext { f, gamma, t_series, pf, pair })
    }

    /// Context for a function description.
    ///
    /// Plain Markov functions use `γ = s_0`; t-weighted ones use the Markov
    /// function of the underlying measure, or `𝔉/λ` with `γ = 0` when a
    /// perturbation is present.
    pub fn from_spec(spec: &FunctionSpec, depth: usize) -> Result<Self> {
        // Exact Schur steps cost grows quickly with the series length, so start
        // with what a classical fraction needs and grow only if blocks are larger.
        let mut order = 2 * depth + 6;
        loop {
            let ctx = Self::with_order(spec, depth, order)?;
            let short = ctx.pf.len() < depth && !ctx.pf.finite;
            let n = if ctx.depth() > 0 { ctx.pair.n(ctx.depth()) } else { 0 };
            if (!short && ctx.f.order() >= 2 * n + 2) || order >= 8 * depth + 16 {
                return Ok(ctx);
            }
            order *= 2;
        }
    }

    fn with_order(spec: &FunctionSpec, depth: usize, order: usize) -> Result<Self> {
        if !spec.t_weight {
            let f = spec.assemble_series(order)?;
            let gamma = f.coeffs[0].clone();
            return Self::new(f, gamma, depth);
        }
        if spec.perturbation.is_none() {
            let base = FunctionSpec::markov(spec.measure.clone());
            let f = base.assemble_series(order)?;
            let gamma = f.coeffs[0].clone();
            return Self::new(f, gamma, depth);
        }
        let t = spec.assemble_series(order)?;
        Self::new(t.div_lambda(), Scalar::zero(), depth)
    }

    pub fn depth(&self) -> usize {
        self.pair.depth()
    }
}

pub trait ApproximantStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    /// Series the approximant is meant to match.
    fn source<'a>(&self, ctx: &'a StrategyContext) -> &'a FormalSeries;
    /// Approximant attached to step `j` of the recurrence.
    fn build(&self, ctx: &StrategyContext, j: usize) -> Result<RationalApproximant>;

    /// Steps `1..=depth` for which `build` succeeds.
    fn admissible(&self, ctx: &StrategyContext) -> Vec<usize> {
        (1..=ctx.depth()).filter(|&j| self.build(ctx, j).is_ok()).collect()
    }
}

struct Diagonal;
struct Subdiagonal;
struct Definitizable;
struct Modified;
struct Oracle;

impl ApproximantStrategy for Diagonal {
    fn name(&self) -> &'static str {
        "diagonal"
    }
    fn description(&self) -> &'static str {
        "[n/n] of F from P_j, Q_j"
    }
    fn source<'a>(&self, ctx: &'a StrategyContext) -> &'a FormalSeries {
        &ctx.f
    }
    fn build(&self, ctx: &StrategyContext, j: usize) -> Result<RationalApproximant> {
        diagonal(&ctx.pair, j)
    }
}

impl ApproximantStrategy for Subdiagonal {
    fn name(&self) -> &'static str {
        "subdiagonal"
    }
    fn description(&self) -> &'static str {
        "[n/n-1] of F from the perturbed truncation"
    }
    fn source<'a>(&self, ctx: &'a StrategyContext) -> &'a FormalSeries {
        &ctx.f
    }
    fn build(&self, ctx: &StrategyContext, j: usize) -> Result<RationalApproximant> {
        subdiagonal(&ctx.pair, j)
    }
}

impl ApproximantStrategy for Definitizable {
    fn name(&self) -> &'static str {
        "definitizable"
    }
    fn description(&self) -> &'static str {
        "[n-1/n-1] of gamma + lambda F"
    }
    fn source<'a>(&self, ctx: &'a StrategyContext) -> &'a FormalSeries {
        &ctx.t_series
    }
    fn build(&self, ctx: &StrategyContext, j: usize) -> Result<RationalApproximant> {
        definitizable_diagonal(&ctx.pair, &ctx.gamma, j)
    }
}

impl ApproximantStrategy for Modified {
    fn name(&self) -> &'static str {
        "modified"
    }
    fn description(&self) -> &'static str {
        "(P_n - lambda Q_n)/P_n, classical fractions only"
    }
    fn source<'a>(&self, ctx: &'a StrategyContext) -> &'a FormalSeries {
        &ctx.t_series
    }
    fn build(&self, ctx: &StrategyContext, j: usize) -> Result<RationalApproximant> {
        if !(&ctx.gamma - &ctx.pair.scale).negligible(&ctx.gamma) || ctx.gamma.is_zero() {
            return Err(Error::NotClassical);
        }
        modified_diagonal(&ctx.pair, j)
    }
}

impl ApproximantStrategy for Oracle {
    fn name(&self) -> &'static str {
        "oracle"
    }
    fn description(&self) -> &'static str {
        "[n_j/n_j] of F by a direct linear solve"
    }
    fn source<'a>(&self, ctx: &'a StrategyContext) -> &'a FormalSeries {
        &ctx.f
    }
    fn build(&self, ctx: &StrategyContext, j: usize) -> Result<RationalApproximant> {
        if j == 0 || j > ctx.depth() {
            return Err(Error::NotAdmissible(j));
        }
        let n = ctx.pair.n(j);
        pade_oracle(&ctx.f, n, n)
    }
}

pub struct Registry {
    entries: BTreeMap<&'static str, Box<dyn ApproximantStrategy>>,
}

impl Registry {
    pub fn register(&mut self, s: Box<dyn ApproximantStrategy>) {
        self.entries.insert(s.name(), s);
    }

    pub fn get(&self, name: &str) -> Result<&dyn ApproximantStrategy> {
        self.entries.get(name).map(|b| b.as_ref()).ok_or_else(|| Error::Unknown { kind: "approximant", name: name.to_string() })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn ApproximantStrategy> {
        self.entries.values().map(|b| b.as_ref())
    }
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Registry { entries: BTreeMap::new() };
        r.register(Box::new(Diagonal));
        r.register(Box::new(Subdiagonal));
        r.register(Box::new(Definitizable));
        r.register(Box::new(Modified));
        r.register(Box::new(Oracle));
        r
    }
}

/// The built-in strategies.
pub fn registry() -> &'static Registry {
    static R: OnceLock<Registry> = OnceLock::new();
    R.get_or_init(Registry::default)
}
