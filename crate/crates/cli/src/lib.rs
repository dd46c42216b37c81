//! Command-line driver for the checks in `vstar`.
//!
//! Exit codes: 0 when the claim is verified or a listing was produced, 2 when
//! it is refuted, 3 when the bounded search could not decide, 1 on bad input.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use vstar::formulas::{classify, EvalConfig};
use vstar::interp::cb::{construct_on_fibre, AbstractInjectionPair};
use vstar::interp::{
    apply, aut_obstruction, check_biint, check_computable, check_defeq, check_domain_preserving, InterpError,
    Sample, SearchCaps,
};
use vstar::report::{CheckReport, Status};
use vstar::structured::{check_quasi, QuasiStructuredSet};
use vstar::suite::{run_all, SuiteOptions};
use vstar::theories::{bool_samples, enumerate_models, Catalog, Shape};

#[derive(Debug, Parser)]
#[command(name = "vstar", version, about = "Exhaustive checks of interpretations between theories of structured sets")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Options {
    /// Largest domain enumerated for samples.
    #[arg(long, global = true, default_value_t = 3)]
    pub max_atoms: usize,
    /// Print reports as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Highest stage searched by unbounded existentials.
    #[arg(long, global = true, default_value_t = 4)]
    pub rank_cap: u32,
    /// Seed for sampled instances.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest domain searched for isomorphisms and automorphisms.
    #[arg(long, global = true, default_value_t = 8)]
    pub domain_cap: usize,
    /// Largest automorphism group compared.
    #[arg(long, global = true, default_value_t = 64)]
    pub group_cap: usize,
    /// Extra definition files loaded on top of the built-in catalog.
    #[arg(long = "defs", global = true, value_name = "FILE")]
    pub defs: Vec<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a theory is bounded and count its models, or test one
    /// model against it.
    CheckTheory {
        /// Theory name, or a definition file whose theories are all checked.
        theory: String,
        /// A candidate model, written `<domain> ; <structure>`.
        #[arg(long)]
        model: Option<String>,
    },
    /// List the models of a theory on the atoms @1..@n.
    Models {
        theory: String,
        /// Number of atoms (defaults to --max-atoms).
        #[arg(long)]
        atoms: Option<usize>,
    },
    /// Apply an interpretation to a model.
    Apply { interp: String, model: String },
    /// Definitional equivalence of a pair (`top-nei`, or `t,s`).
    Defeq { pair: String },
    /// Bi-interpretability of a pair.
    Biint { pair: String },
    /// Automorphism-group obstruction between two theories.
    Obstruct { left: String, right: String },
    /// Cantor-Bernstein construction, on a fibre of models or on an abstract
    /// pair of injections given as JSON.
    Cb {
        /// Pair of interpretations, as for `defeq`.
        pair: Option<String>,
        /// JSON file with fields T, S, t and s.
        #[arg(long = "abstract", value_name = "FILE", conflicts_with = "pair")]
        abstract_file: Option<PathBuf>,
        /// Atoms in the fibre (defaults to --max-atoms).
        #[arg(long)]
        atoms: Option<usize>,
    },
    /// Whether an interpretation returns the input domain.
    Preserves { interp: String },
    /// Whether an interpretation's defining terms are Delta0 or Sigma1 with
    /// agreeing Pi1 companions.
    Computable { interp: String },
    /// Run every acceptance check.
    Suite,
}

/// Failure before any verdict was reached.
#[derive(Debug)]
struct Usage(String);

impl<E: std::error::Error> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

struct Ctx {
    cat: Catalog,
    config: EvalConfig,
    caps: SearchCaps,
    opts: Options,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = if code == 0 { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Usage> {
    let mut cat = Catalog::builtin();
    for path in &cli.opts.defs {
        load_file(&mut cat, path)?;
    }
    let config = EvalConfig { rank_cap: cli.opts.rank_cap, ..EvalConfig::default() };
    let caps = SearchCaps { domain: cli.opts.domain_cap, group: cli.opts.group_cap };
    let mut ctx = Ctx { cat, config, caps, opts: cli.opts };
    match cli.command {
        Command::CheckTheory { theory, model } => check_theory(&mut ctx, &theory, model.as_deref(), out),
        Command::Models { theory, atoms } => models(&ctx, &theory, atoms.unwrap_or(ctx.opts.max_atoms), out),
        Command::Apply { interp, model } => apply_cmd(&ctx, &interp, &model, out),
        Command::Defeq { pair } => {
            let (t, s) = ctx.cat.pair(&pair)?;
            let (ts, ss) = (sample(&ctx, &t.source)?, sample(&ctx, &s.source)?);
            emit(&ctx, &check_defeq(&ctx.cat, t, s, &ts, &ss, ctx.config)?, out)
        }
        Command::Biint { pair } => {
            let (t, s) = ctx.cat.pair(&pair)?;
            let (ts, ss) = (sample(&ctx, &t.source)?, sample(&ctx, &s.source)?);
            emit(&ctx, &check_biint(&ctx.cat, t, s, &ts, &ss, ctx.config, ctx.caps)?, out)
        }
        Command::Obstruct { left, right } => {
            let (l, r) = (sample(&ctx, &left)?, sample(&ctx, &right)?);
            emit(&ctx, &aut_obstruction(&l, &r, ctx.caps)?, out)
        }
        Command::Cb { pair, abstract_file, atoms } => cb(&ctx, pair, abstract_file, atoms, out),
        Command::Preserves { interp } => {
            let i = ctx.cat.interp(&interp)?;
            emit(&ctx, &check_domain_preserving(i, &sample(&ctx, &i.source)?, ctx.config)?, out)
        }
        Command::Computable { interp } => {
            let i = ctx.cat.interp(&interp)?;
            emit(&ctx, &check_computable(i, &sample(&ctx, &i.source)?, ctx.config)?, out)
        }
        Command::Suite => suite(&ctx, out),
    }
}

fn load_file(cat: &mut Catalog, path: &Path) -> Result<(), Usage> {
    let src = std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    cat.load(&src).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

/// All models on up to `--max-atoms` atoms, within the theory's enumeration
/// cap. Boolean algebras past the cap are added as seeded relabellings of
/// power-set algebras.
fn sample(ctx: &Ctx, theory: &str) -> Result<Sample, InterpError> {
    let s = Sample::exhaustive(&ctx.cat, theory, ctx.opts.max_atoms, ctx.config)?;
    let t = ctx.cat.theory(theory)?;
    if theory != "bool" {
        return Ok(s);
    }
    let extra: Vec<QuasiStructuredSet> = (1..)
        .map(|k| 1usize << k)
        .take_while(|&n| n <= ctx.opts.max_atoms)
        .filter(|&n| n > t.shape.atom_cap())
        .flat_map(|n| bool_samples(n, 3, ctx.opts.seed))
        .collect();
    if extra.is_empty() {
        return Ok(s);
    }
    Ok(s.with_extra(extra, "sampled power-set algebras"))
}

fn print(out: &mut dyn Write, text: &str) -> Result<(), Usage> {
    writeln!(out, "{text}").map_err(Usage::from)
}

fn emit(ctx: &Ctx, r: &CheckReport, out: &mut dyn Write) -> Result<i32, Usage> {
    if ctx.opts.json {
        print(out, &r.to_json())?;
    } else {
        print(out, &format!("{} {}: {}", r.check, r.subject, status_word(r.status)))?;
        print(out, &format!("  sample: {}", r.sample))?;
        if let Some(c) = &r.counterexample {
            print(out, &format!("  counterexample: {}", pretty(c)))?;
        }
        for w in &r.witnesses {
            print(out, &format!("  witness: {w}"))?;
        }
        for n in &r.notes {
            print(out, &format!("  note: {n}"))?;
        }
    }
    Ok(r.status.exit_code())
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Verified => "verified",
        Status::Refuted => "refuted",
        Status::Unknown => "unknown",
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize").replace('\n', "\n  ")
}

fn check_theory(ctx: &mut Ctx, theory: &str, model: Option<&str>, out: &mut dyn Write) -> Result<i32, Usage> {
    let names: Vec<String> = if Path::new(theory).is_file() {
        let src = std::fs::read_to_string(theory)?;
        let defs = vstar::formulas::parse_definitions(&src)?;
        load_file(&mut ctx.cat, Path::new(theory))?;
        defs.theories.into_iter().map(|t| t.name).collect()
    } else {
        vec![theory.to_string()]
    };
    if let Some(m) = model {
        let [name] = &names[..] else { return Err(Usage("--model needs exactly one theory".into())) };
        let q = QuasiStructuredSet::parse(m)?;
        let t = ctx.cat.theory(name)?;
        let quasi = check_quasi(&q.domain, &q.structure);
        let holds = quasi.valid() && t.satisfies(&q, ctx.config)?;
        let mut r = CheckReport::new("satisfies", name.clone(), q.to_string());
        if !holds {
            let reason = quasi.first().map_or_else(|| "axioms fail".to_string(), |v| format!("clause {} ({})", v.clause.label(), v.message));
            r.refute(json!({"input": q.to_string(), "theory": name, "reason": reason}));
        }
        return emit(ctx, &r, out);
    }
    let mut rows = Vec::new();
    for name in &names {
        let t = ctx.cat.theory(name)?;
        let mut counts = Vec::new();
        if t.shape != Shape::Infinite {
            for n in 1..=ctx.opts.max_atoms.min(t.shape.atom_cap()) {
                counts.push(enumerate_models(t, n, ctx.config)?.models.len());
            }
        }
        rows.push(json!({
            "theory": name,
            "shape": t.shape.name(),
            "class": classify(&t.formula),
            "model_counts": counts,
        }));
    }
    if ctx.opts.json {
        print(out, &serde_json::to_string_pretty(&rows)?)?;
    } else {
        for r in rows {
            print(out, &format!("{} ({}, {}): models by size {}", r["theory"].as_str().unwrap_or(""), r["shape"].as_str().unwrap_or(""), r["class"], r["model_counts"]))?;
        }
    }
    Ok(0)
}

fn models(ctx: &Ctx, theory: &str, atoms: usize, out: &mut dyn Write) -> Result<i32, Usage> {
    let set = enumerate_models(ctx.cat.theory(theory)?, atoms, ctx.config)?;
    if ctx.opts.json {
        let v = json!({
            "theory": set.theory,
            "atoms": set.atoms,
            "candidates": set.candidates,
            "count": set.models.len(),
            "models": set.models.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        });
        print(out, &serde_json::to_string_pretty(&v)?)?;
    } else {
        print(out, &format!("{} models of {theory} on {atoms} atoms", set.models.len()))?;
        for m in &set.models {
            print(out, &m.to_string())?;
        }
    }
    Ok(0)
}

fn apply_cmd(ctx: &Ctx, interp: &str, model: &str, out: &mut dyn Write) -> Result<i32, Usage> {
    let i = ctx.cat.interp(interp)?;
    let q = QuasiStructuredSet::parse(model)?;
    match apply(&ctx.cat, i, &q, ctx.config) {
        Ok(b) => {
            if ctx.opts.json {
                print(out, &serde_json::to_string_pretty(&json!({"interpretation": interp, "input": q.to_string(), "output": b.to_string()}))?)?;
            } else {
                print(out, &b.to_string())?;
            }
            Ok(0)
        }
        Err(InterpError::TargetViolation { reason, output, .. }) => {
            let mut r = CheckReport::new("apply", interp, q.to_string());
            r.refute(json!({"input": q.to_string(), "output": output, "reason": format!("output violates {reason}")}));
            emit(ctx, &r, out)
        }
        Err(e) => Err(e.into()),
    }
}

fn cb(
    ctx: &Ctx,
    pair: Option<String>,
    file: Option<PathBuf>,
    atoms: Option<usize>,
    out: &mut dyn Write,
) -> Result<i32, Usage> {
    let (construction, subject, sample) = match (pair, file) {
        (_, Some(path)) => {
            let text = std::fs::read_to_string(&path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
            let p: AbstractInjectionPair = serde_json::from_str(&text)?;
            (p.construct()?, "abstract".to_string(), path.display().to_string())
        }
        (Some(pair), None) => {
            let (t, s) = ctx.cat.pair(&pair)?;
            let n = atoms.unwrap_or(ctx.opts.max_atoms);
            let c = construct_on_fibre(&ctx.cat, t, s, n, ctx.config)?;
            (c, format!("{},{}", t.name, s.name), format!("all models on {n} atoms"))
        }
        (None, None) => return Err(Usage("cb needs a pair or --abstract FILE".into())),
    };
    emit(ctx, &construction.to_report(&subject, &sample), out)
}

fn suite(ctx: &Ctx, out: &mut dyn Write) -> Result<i32, Usage> {
    let outcomes = run_all(&SuiteOptions { seed: ctx.opts.seed, config: ctx.config });
    let all = outcomes.iter().all(|o| o.passed);
    if ctx.opts.json {
        print(out, &serde_json::to_string_pretty(&json!({"passed": all, "criteria": outcomes}))?)?;
    } else {
        for o in &outcomes {
            let word = if o.passed { "PASS" } else { "FAIL" };
            print(out, &format!("[{word}] {}. {} ({:.2?}): {}", o.id, o.title, o.elapsed, o.detail))?;
        }
    }
    Ok(if all { 0 } else { 2 })
}
