use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;
use serde::Serialize;

use pfrac_core::arith::{set_default_precision_bits, with_precision, Complex, Scalar};
use pfrac_core::gapgeometry::{harmonic_measure_with, GapSpec, DEFAULT_QMAX};
use pfrac_core::pade::{registry, StrategyContext};
use pfrac_core::scenario::{self, export, parse_config, parse_grid, run_all, to_bytes, Format, RunReport, Scenario};

#[derive(Parser)]
#[command(name = "pfrac", version, about = "P-fractions, generalized Jacobi matrices and Padé approximants")]
struct Cli {
    /// Working precision of the float path.
    #[arg(long, global = true, default_value_t = 256, value_parser = clap::value_parser!(u32).range(32..))]
    precision_bits: u32,
    /// Number of P-fraction steps.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Evaluation points: a file, or inline `re[,im]` items separated by `;`.
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Error target for `converge`; quadrature tolerance for `gap`.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Directory for exported reports; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Source {
    /// Shipped scenario supplying the function.
    #[arg(long, conflicts_with = "config")]
    scenario: Option<String>,
    /// TOML configuration supplying the function.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Moments of the underlying series.
    Moments {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 12)]
        count: usize,
    },
    /// P-fraction steps: sign, block polynomial, coupling.
    Pfraction {
        #[command(flatten)]
        source: Source,
    },
    /// Approximants of one registered kind.
    Pade {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "diagonal")]
        kind: String,
    },
    /// Error table against the reference function.
    Converge {
        #[command(flatten)]
        source: Source,
    },
    /// Harmonic-measure diagnostics of a two-band set.
    Gap {
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = DEFAULT_QMAX)]
        qmax: i64,
    },
    /// Built-in scenario catalog.
    #[command(subcommand)]
    Scenario(ScenarioCmd),
}

#[derive(Subcommand)]
enum ScenarioCmd {
    List,
    Run {
        /// Scenario names; `all` runs the whole catalog.
        #[arg(required = true)]
        names: Vec<String>,
        #[arg(long, default_value_t = 4)]
        workers: usize,
    },
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    s.parse().map_err(|e: pfrac_core::Error| e.to_string())
}

fn read_grid(arg: &str) -> Result<Vec<Complex>> {
    let p = Path::new(arg);
    let text = if p.is_file() { std::fs::read_to_string(p).with_context(|| format!("reading {arg}"))? } else { arg.to_string() };
    Ok(parse_grid(&text)?)
}

impl Cli {
    fn scenario(&self, source: &Source) -> Result<Scenario> {
        let mut sc = match (&source.scenario, &source.config) {
            (Some(name), _) => scenario::find(name)?,
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                parse_config(&text).with_context(|| format!("in {}", path.display()))?
            }
            (None, None) => bail!("pass --scenario <name> or --config <file>"),
        };
        self.apply(&mut sc)?;
        if sc.spec.is_none() {
            bail!("scenario `{}` is a note only: {}", sc.name, sc.note.clone().unwrap_or_default());
        }
        Ok(sc)
    }

    fn apply(&self, sc: &mut Scenario) -> Result<()> {
        sc.precision_bits = self.precision_bits;
        if let Some(d) = self.depth {
            sc.depth = d;
            sc.tau_horizon = d.saturating_sub(1);
        }
        if let Some(g) = &self.grid {
            sc.grid = read_grid(g)?;
        }
        sc.validate()?;
        Ok(())
    }

    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
        let mut out = std::io::stdout().lock();
        match self.format {
            Some(Format::Json) => {
                serde_json::to_writer_pretty(&mut out, value)?;
                writeln!(out)?;
            }
            _ => text(&mut out)?,
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct MomentsOut {
    scenario: String,
    moments: Vec<Scalar>,
}

#[derive(Serialize)]
struct PadeRow {
    j: usize,
    n: usize,
    contact_order: usize,
    contact_defect: Scalar,
    num: String,
    den: String,
    values: Vec<(Complex, Option<Complex>)>,
}

fn cmd_moments(cli: &Cli, source: &Source, count: usize) -> Result<()> {
    let sc = cli.scenario(source)?;
    let spec = sc.spec.as_ref().expect("checked");
    let m = with_precision(sc.precision_bits, || spec.moments(count))?;
    let out = MomentsOut { scenario: sc.name.clone(), moments: m.coeffs };
    cli.emit(&out, |w| {
        for (i, s) in out.moments.iter().enumerate() {
            writeln!(w, "s_{i}\t{s}")?;
        }
        Ok(())
    })
}

fn context(sc: &Scenario) -> Result<StrategyContext> {
    let spec = sc.spec.as_ref().expect("checked");
    Ok(with_precision(sc.precision_bits, || StrategyContext::from_spec(spec, sc.depth))?)
}

fn cmd_pfraction(cli: &Cli, source: &Source) -> Result<()> {
    let sc = cli.scenario(source)?;
    let ctx = context(&sc)?;
    let pf = &ctx.pf;
    cli.emit(pf, |w| {
        writeln!(w, "scale\t{}", pf.scale)?;
        for (j, s) in pf.steps.iter().enumerate() {
            writeln!(w, "j={j}\teps={}\tk={}\tb^2={}\tp={}", s.eps, s.k(), s.b_sq, s.p)?;
        }
        writeln!(w, "normal indices\t{:?}", pf.normal_indices())?;
        if pf.finite {
            writeln!(w, "terminates")?;
        }
        Ok(())
    })
}

fn cmd_pade(cli: &Cli, source: &Source, kind: &str) -> Result<()> {
    let sc = cli.scenario(source)?;
    let strategy = registry().get(kind)?;
    let ctx = context(&sc)?;
    let rows = with_precision(sc.precision_bits, || -> Result<Vec<PadeRow>> {
        let mut rows = Vec::new();
        for j in strategy.admissible(&ctx) {
            let r = strategy.build(&ctx, j)?;
            let contact_defect = r.contact_defect(strategy.source(&ctx))?;
            let values = sc.grid.iter().map(|z| (z.clone(), r.eval(z).ok())).collect();
            rows.push(PadeRow {
                j,
                n: r.n,
                contact_order: r.contact_order,
                contact_defect,
                num: r.num.to_string(),
                den: r.den.to_string(),
                values,
            });
        }
        Ok(rows)
    })?;
    cli.emit(&rows, |w| {
        for r in &rows {
            writeln!(w, "j={} n={} contact={} defect={}", r.j, r.n, r.contact_order, r.contact_defect.to_decimal(6))?;
            writeln!(w, "  num: {}", r.num)?;
            writeln!(w, "  den: {}", r.den)?;
            for (z, v) in &r.values {
                match v {
                    Some(v) => writeln!(w, "  at {z}: {v}")?,
                    None => writeln!(w, "  at {z}: pole")?,
                }
            }
        }
        Ok(())
    })
}

fn write_report(cli: &Cli, report: &RunReport, default: Format) -> Result<()> {
    let format = cli.format.unwrap_or(default);
    match &cli.out {
        Some(dir) => {
            let path = export(report, format, dir)?;
            eprintln!("wrote {}", path.display());
        }
        None => std::io::stdout().lock().write_all(&to_bytes(report, format)?)?,
    }
    Ok(())
}

fn cmd_converge(cli: &Cli, source: &Source) -> Result<()> {
    let sc = cli.scenario(source)?;
    let report = scenario::run(&sc)?;
    if let Some(tol) = cli.tol {
        for z in &sc.grid {
            let hit = report.errors.iter().find(|e| &e.lambda == z && e.abs_err.to_f64() < tol);
            match hit {
                Some(e) => info!("error at {z} below {tol:e} from depth {}", e.depth),
                None => info!("error at {z} never below {tol:e}"),
            }
        }
    }
    write_report(cli, &report, Format::Csv)
}

fn cmd_gap(cli: &Cli, alpha: &Option<String>, beta: &Option<String>, source: &Source, qmax: i64) -> Result<()> {
    let (a, b) = match (alpha, beta) {
        (Some(a), Some(b)) => (a.parse::<Scalar>()?, b.parse::<Scalar>()?),
        (None, None) => {
            let sc = cli.scenario(source)?;
            sc.spec.as_ref().and_then(|s| s.gap()).context("the measure has no gap around 0")?
        }
        _ => bail!("give both --alpha and --beta"),
    };
    let rep = with_precision(cli.precision_bits, || -> Result<_> {
        let tol = match cli.tol {
            Some(t) => Scalar::from_f64(t),
            None => pfrac_core::gapgeometry::default_tol(),
        };
        Ok(harmonic_measure_with(&GapSpec::new(a, b)?, qmax, &tol)?)
    })?;
    cli.emit(&rep, |w| {
        writeln!(w, "k\t{}", rep.elliptic.k.to_decimal(30))?;
        writeln!(w, "K\t{}", rep.elliptic.big_k.to_decimal(30))?;
        writeln!(w, "omega(inf)\t{}", rep.omega_inf.to_decimal(30))?;
        writeln!(w, "omega(0)\t{}", rep.omega_zero.to_decimal(30))?;
        writeln!(w, "verdict\t{:?}", rep.verdict)
    })
}

fn cmd_scenario(cli: &Cli, cmd: &ScenarioCmd) -> Result<()> {
    match cmd {
        ScenarioCmd::List => {
            let cat = scenario::catalog();
            let rows: Vec<_> = cat.iter().map(|s| (s.name.clone(), s.description.clone())).collect();
            cli.emit(&rows, |w| {
                for s in &cat {
                    let mark = if s.spec.is_none() { " (note)" } else { "" };
                    writeln!(w, "{:<20} {}{mark}", s.name, s.description)?;
                }
                Ok(())
            })
        }
        ScenarioCmd::Run { names, workers } => {
            let mut list = Vec::new();
            for n in names {
                if n == "all" {
                    list.extend(scenario::catalog());
                } else {
                    list.push(scenario::find(n)?);
                }
            }
            for sc in &mut list {
                if sc.spec.is_some() {
                    cli.apply(sc)?;
                }
            }
            let mut failed = 0;
            for (sc, res) in list.iter().zip(run_all(&list, *workers)) {
                match res {
                    Ok(report) => write_report(cli, &report, Format::Json)?,
                    Err(e) => {
                        eprintln!("{}: {e}", sc.name);
                        failed += 1;
                    }
                }
            }
            if failed > 0 {
                bail!("{failed} scenario(s) failed");
            }
            Ok(())
        }
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Moments { source, count } => cmd_moments(cli, source, *count),
        Command::Pfraction { source } => cmd_pfraction(cli, source),
        Command::Pade { source, kind } => cmd_pade(cli, source, kind),
        Command::Converge { source } => cmd_converge(cli, source),
        Command::Gap { alpha, beta, source, qmax } => cmd_gap(cli, alpha, beta, source, *qmax),
        Command::Scenario(cmd) => cmd_scenario(cli, cmd),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    set_default_precision_bits(cli.precision_bits);
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
