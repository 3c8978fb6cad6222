use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use negdep::analyzer::{Analyzer, AnchoredBox, Budget, PairRecord};
use negdep::numeric::Rational;
use negdep::reproduce::{run_all, run_criterion, ReproduceConfig};
use negdep::samplers::{generate, write_csv, write_json, Generator, SchemeSpec, Shift};
use negdep::variance::{parse_config, run_batch, write_results_csv, Experiment};
use negdep::{Error, Result};

use crate::output::Run;
use crate::{
    Ablation, Analyze, Command, Format, GenerateArgs, Outcome, ReproduceArgs, SchemeArgs, SchemeName, VarianceArgs,
};

pub fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Generate(args) => generate_cmd(args),
        Command::Analyze(a) => analyze(a),
        Command::Variance(args) => variance(args),
        Command::ReproducePaper(args) => reproduce(args),
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn rationals(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(|x| x.trim().parse()).collect()
}

/// Integers are taken as residues; fractions and decimals as multiples of
/// `1/N`.
fn residues(s: &str, n: u64, what: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            if let Ok(k) = tok.parse::<u64>() {
                return Ok(k);
            }
            let x: Rational = tok.parse()?;
            let scaled = x * Rational::from(n);
            if !scaled.is_integer() || scaled.is_negative() {
                return Err(usage(format!("{what} entry {tok} is not a multiple of 1/{n}")));
            }
            scaled
                .floor()
                .try_into()
                .map_err(|_| usage(format!("{what} entry {tok} too large")))
        })
        .collect()
}

fn anchors(s: &str, dim: usize) -> Result<AnchoredBox> {
    let xs = rationals(s)?;
    let xs = match xs.len() {
        1 => vec![xs[0].clone(); dim],
        k if k == dim => xs,
        k => return Err(usage(format!("anchor {s:?} has {k} entries, expected 1 or {dim}"))),
    };
    AnchoredBox::new(xs)
}

fn jitter_flag(s: &str) -> Result<bool> {
    match s {
        "on" => Ok(true),
        "off" => Ok(false),
        _ => Err(usage(format!("--jitter must be on or off, got {s:?}"))),
    }
}

fn base_spec(kind: SchemeName, n: u64, dim: usize) -> SchemeSpec {
    match kind {
        SchemeName::Stratified => SchemeSpec::stratified(n),
        SchemeName::Lhs => SchemeSpec::lhs(n, dim),
        SchemeName::Patterson => SchemeSpec::patterson(n, dim),
        SchemeName::Rsj => SchemeSpec::rsj(n, dim),
    }
}

fn build_spec(
    kind: SchemeName,
    n: u64,
    dim: usize,
    generator: Option<&str>,
    shift: Option<&str>,
    jitter: Option<&str>,
) -> Result<SchemeSpec> {
    let mut spec = base_spec(kind, n, dim);
    if kind == SchemeName::Stratified && dim != 1 {
        return Err(usage("stratified sampling is one-dimensional; use --dim 1"));
    }
    if let Some(g) = generator {
        if kind != SchemeName::Rsj {
            return Err(usage("--generator applies to rsj only"));
        }
        spec.generator = Generator::Fixed(residues(g, n, "generator")?);
    }
    if let Some(s) = shift {
        let shift: Shift = s.parse()?;
        match kind {
            SchemeName::Rsj => spec.shift = shift,
            SchemeName::Patterson if shift != Shift::Grid => spec.shift = shift,
            _ => return Err(usage(format!("--shift {s} does not apply to this scheme"))),
        }
    }
    if let Some(j) = jitter {
        if kind != SchemeName::Rsj {
            return Err(usage("--jitter applies to rsj only"));
        }
        spec.jitter = jitter_flag(j)?;
    }
    spec.validated()
}

fn scheme(args: &SchemeArgs) -> Result<SchemeSpec> {
    build_spec(
        args.scheme,
        args.n,
        args.dim,
        args.generator.as_deref(),
        args.shift.as_deref(),
        args.jitter.as_deref(),
    )
}

fn analyzer() -> Result<Analyzer> {
    Ok(Analyzer::new(Budget::from_env()?))
}

fn generate_cmd(args: GenerateArgs) -> Result<Outcome> {
    let spec = scheme(&args.scheme)?;
    let set = generate(&spec, args.seed)?;
    let mut run = Run::new("generate", Some(args.seed));
    let mut buf = Vec::new();
    match args.format {
        Format::Csv => write_csv(&set, &mut buf)?,
        Format::Json => {
            write_json(&set, &mut buf)?;
            buf.push(b'\n');
        }
    }
    run.emit(args.out.as_deref(), &buf)?;
    run.finish()?;
    Ok(Outcome::Clean)
}

fn analyze(cmd: Analyze) -> Result<Outcome> {
    let a = analyzer()?;
    match cmd {
        Analyze::Pairprob { scheme: s, q, r, out } => {
            let spec = scheme(&s)?;
            let (q, r) = (anchors(&q, spec.dim)?, anchors(&r, spec.dim)?);
            let law = a.pair_law(&spec)?;
            let joint = law.box_prob(&q, &r)?;
            let product = law.marginal_product(&q, &r)?;
            let report = json!({
                "scheme": spec,
                "Q": q,
                "R": r,
                "joint": joint,
                "product": product,
                "violation": joint > product,
                "decimal": { "joint": joint.to_f64(), "product": product.to_f64() },
            });
            emit_one("analyze pairprob", out.as_deref(), &report)?;
            Ok(Outcome::Clean)
        }
        Analyze::Nuod {
            scheme: s,
            grid,
            pairs_csv,
            out,
        } => {
            let spec = scheme(&s)?;
            let m = grid.unwrap_or(2 * spec.n);
            let mut run = Run::new("analyze nuod", None);
            let report = match &pairs_csv {
                None => a.nuod_scan(&spec, m)?,
                Some(_) => {
                    let mut rows = csv::Writer::from_writer(Vec::new());
                    let mut failure = None;
                    let report = a.nuod_scan_with(&spec, m, &mut |rec: PairRecord| {
                        if failure.is_none() {
                            if let Err(e) = rows.serialize(PairRow::from(&rec)) {
                                failure = Some(e);
                            }
                        }
                    })?;
                    if let Some(e) = failure {
                        return Err(e.into());
                    }
                    let bytes = rows.into_inner().map_err(|e| Error::Io(e.into_error()))?;
                    run.emit(pairs_csv.as_deref(), &bytes)?;
                    report
                }
            };
            run.emit_json(out.as_deref(), &report)?;
            run.finish()?;
            Ok(verdict(report.is_negatively_dependent()))
        }
        Analyze::Copula { n, dim, generator, out } => {
            let spec = build_spec(SchemeName::Rsj, n, dim, generator.as_deref(), None, None)?;
            let check = a.copula_equality_for(&spec)?;
            emit_one(
                "analyze copula",
                out.as_deref(),
                &json!({ "scheme": spec, "check": check }),
            )?;
            Ok(verdict(check.equal))
        }
        Analyze::Independence { n, dim, generator, out } => {
            let spec = build_spec(SchemeName::Rsj, n, dim, generator.as_deref(), None, None)?;
            let check = a.coordinate_independence_for(&spec)?;
            emit_one(
                "analyze independence",
                out.as_deref(),
                &json!({ "scheme": spec, "check": check }),
            )?;
            Ok(verdict(check.holds()))
        }
        Analyze::Triple {
            n,
            dim,
            a: ca,
            b: cb,
            out,
        } => {
            let (ca, cb) = (residues(&ca, n, "cell")?, residues(&cb, n, "cell")?);
            let counts = a.triple_distinguisher(n, dim, &ca, &cb)?;
            emit_one("analyze triple", out.as_deref(), &counts)?;
            Ok(Outcome::Clean)
        }
        Analyze::Ablation(Ablation::NoShift { n, dim, out }) => {
            let mass = a.no_shift_mass(n, dim)?;
            let volume = Rational::new(1, n).pow(dim as u32);
            let report = json!({
                "n": n,
                "dim": dim,
                "mass": mass,
                "volume": volume,
                "uniform": mass == volume,
            });
            emit_one("analyze ablation no-shift", out.as_deref(), &report)?;
            Ok(Outcome::Clean)
        }
        Analyze::Ablation(Ablation::Conditional {
            scheme: kind,
            n,
            dim,
            epsilon,
            coord,
            out,
        }) => {
            let spec = match kind {
                SchemeName::Rsj => build_spec(kind, n, dim, None, Some("torus"), Some("off"))?,
                SchemeName::Patterson => build_spec(kind, n, dim, None, Some("torus"), None)?,
                _ => return Err(usage("conditional needs --scheme rsj or patterson")),
            };
            let eps: Rational = epsilon.parse()?;
            let coord = coord.unwrap_or(dim.saturating_sub(1));
            let p = a.shift_only_conditional(&spec, &eps, coord)?;
            let volume = Rational::one() - &eps / &Rational::from(2u64);
            let report = json!({
                "scheme": spec,
                "epsilon": eps,
                "coord": coord,
                "conditional": p,
                "volume_q": volume,
            });
            emit_one("analyze ablation conditional", out.as_deref(), &report)?;
            Ok(Outcome::Clean)
        }
    }
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Outcome::Clean
    } else {
        Outcome::Violation
    }
}

fn emit_one<T: Serialize>(command: &'static str, out: Option<&Path>, value: &T) -> Result<()> {
    let mut run = Run::new(command, None);
    run.emit_json(out, value)?;
    run.finish()
}

#[derive(Serialize)]
struct PairRow {
    q: String,
    r: String,
    joint: String,
    product: String,
    violation: bool,
}

impl From<&PairRecord> for PairRow {
    fn from(rec: &PairRecord) -> Self {
        let join = |xs: &[Rational]| xs.iter().map(Rational::to_string).collect::<Vec<_>>().join(";");
        Self {
            q: join(&rec.q),
            r: join(&rec.r),
            joint: rec.joint.to_string(),
            product: rec.product.to_string(),
            violation: rec.joint > rec.product,
        }
    }
}

fn variance(args: VarianceArgs) -> Result<Outcome> {
    let experiments: Vec<Experiment> = match &args.config {
        Some(path) => parse_config(&std::fs::read_to_string(path)?)?,
        None => {
            let kind = args
                .scheme
                .ok_or_else(|| usage("give --config or --scheme/--n/--integrand"))?;
            let n = args.n.ok_or_else(|| usage("--n is required"))?;
            if args.integrand.is_empty() {
                return Err(usage("at least one --integrand is required"));
            }
            let spec = build_spec(
                kind,
                n,
                args.dim,
                args.generator.as_deref(),
                args.shift.as_deref(),
                args.jitter.as_deref(),
            )?;
            args.integrand
                .iter()
                .map(|f| Experiment {
                    spec: spec.clone(),
                    integrand: f.clone(),
                    replications: args.replications,
                    seed: args.seed,
                })
                .collect()
        }
    };
    let results = run_batch(&experiments)?;
    let seed = experiments.first().map(|e| e.seed);
    let mut run = Run::new("variance", seed);
    let mut buf = Vec::new();
    write_results_csv(&results, &mut buf)?;
    run.emit(args.out.as_deref(), &buf)?;
    if let Some(path) = &args.json {
        run.emit_json(Some(path), &results)?;
    }
    run.finish()?;
    for r in results.iter().filter(|r| !r.dominated) {
        eprintln!("warning: {} {}: variance not dominated by MC", r.scheme, r.integrand);
    }
    Ok(Outcome::Clean)
}

fn reproduce(args: ReproduceArgs) -> Result<Outcome> {
    let mut cfg = ReproduceConfig {
        analyzer: analyzer()?,
        ..ReproduceConfig::default()
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let outcomes = if args.only.is_empty() {
        run_all(&cfg)
    } else {
        args.only.iter().map(|&id| run_criterion(id, &cfg)).collect()
    };
    let passed = outcomes.iter().filter(|o| o.passed).count();
    {
        let mut out = std::io::stdout().lock();
        for o in &outcomes {
            writeln!(out, "{o}")?;
        }
        writeln!(out, "{passed}/{} criteria passed", outcomes.len())?;
    }
    if let Some(path) = &args.out {
        let mut run = Run::new("reproduce-paper", Some(cfg.seed));
        run.emit_json(Some(path), &outcomes)?;
        run.finish()?;
    }
    Ok(verdict(passed == outcomes.len()))
}
