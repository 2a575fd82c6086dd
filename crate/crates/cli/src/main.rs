//! `tel`: parse, evaluate, search and proof-check from the command line.
//!
//! Every subcommand prints one JSON document on stdout, or readable text
//! with `--pretty`. Exit status is 0 for success, validity, truth and
//! accepted proofs; 1 for countermodels, falsity and rejected proofs; 2 for
//! usage and input errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tel_core::io::{frame_from_json, model_from_json, scenario_from_json, ModelSpec, ScenarioSpec};
use tel_core::models::{ScenarioClass, Semantics};
use tel_core::proofs::{builtin_logics, check_proof_in, parse_proof, Mode};
use tel_core::relational::enumerate_belief_frames;
use tel_core::search::{decide_bounded_validity, scheme_soundness_report, Bounds, PoolSpec, Verdict, DEFAULT_MAX_POINTS};
use tel_core::syntax::SchemeTemplate;
use tel_core::topology::enumerate_topologies;
use tel_core::{parse, Formula, Translation};

#[derive(Parser)]
#[command(name = "tel", version, about = "Topological evidence logic toolkit")]
struct Cli {
    /// Human-readable text instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its canonical and sugared forms.
    Parse(FormulaArg),
    /// Evaluate a formula at a scenario of a model.
    Eval(EvalArgs),
    /// Decide validity up to a size bound.
    Valid(SearchArgs),
    /// Search for a countermodel up to a size bound.
    Countermodel(SearchArgs),
    /// Apply a syntactic translation.
    Translate(TranslateArgs),
    /// Proof operations.
    Proof {
        #[command(subcommand)]
        command: ProofCommand,
    },
    /// Check a proof file against a logic.
    #[command(name = "proof-check")]
    ProofCheck(ProofCheckArgs),
    /// Convert a belief frame to its Alexandroff model.
    #[command(name = "frame-to-topology")]
    FrameToTopology {
        /// Frame JSON: {"points": [...], "R": [[x, y], ...], "valuation": {...}}.
        file: PathBuf,
    },
    /// List all topologies or belief frames on n labelled points.
    Enumerate {
        #[arg(value_enum)]
        what: EnumerateWhat,
        #[arg(long, short = 'n')]
        points: usize,
    },
    /// Check a scheme over a formula pool and all small models.
    Soundness(SoundnessArgs),
}

#[derive(Subcommand)]
enum ProofCommand {
    /// Check a proof file against a logic.
    Check(ProofCheckArgs),
}

#[derive(Args)]
struct FormulaArg {
    /// Formula text; omit when using --file.
    formula: Option<String>,
    /// Read the formula from a file.
    #[arg(long, conflicts_with = "formula")]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    formula: FormulaArg,
    /// Model JSON file.
    #[arg(long)]
    model: PathBuf,
    /// Scenario as inline JSON or a file path.
    #[arg(long)]
    scenario: String,
    #[arg(long, default_value = "strong")]
    semantics: Semantics,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    formula: FormulaArg,
    #[command(flatten)]
    search: SearchOpts,
}

#[derive(Args)]
struct SearchOpts {
    #[arg(long, default_value = "strong")]
    semantics: Semantics,
    /// Scenario class: all, consistent, dense or veq.
    #[arg(long, default_value = "all")]
    class: ScenarioClass,
    #[arg(long, default_value_t = DEFAULT_MAX_POINTS)]
    max_points: usize,
    /// Parallelism hint; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Sample this many valuations per topology instead of all of them.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0, requires = "sample")]
    seed: u64,
}

impl SearchOpts {
    fn bounds(&self) -> Bounds {
        let b = Bounds::new(self.max_points).jobs(self.jobs.max(1));
        match self.sample {
            Some(count) => b.sampled(count, self.seed),
            None => b,
        }
    }
}

#[derive(Args)]
struct TranslateArgs {
    #[command(flatten)]
    formula: FormulaArg,
    /// t (knowability to knowledge), e (belief elimination) or alpha (belief guarding).
    #[arg(long)]
    to: String,
}

#[derive(Args)]
struct ProofCheckArgs {
    #[arg(long)]
    logic: String,
    /// Allow premise lines; the result is a derivation from them.
    #[arg(long)]
    derivation: bool,
    file: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumerateWhat {
    Topologies,
    Frames,
}

#[derive(Clone, Copy, ValueEnum)]
enum PoolKind {
    Standard,
    Belief,
}

#[derive(Args)]
struct SoundnessArgs {
    /// Scheme name, looked up in --logic.
    #[arg(long, required_unless_present = "text")]
    scheme: Option<String>,
    #[arg(long, default_value = "SEL")]
    logic: String,
    /// Scheme text with ?metavariables, instead of a named scheme.
    #[arg(long, conflicts_with = "scheme")]
    text: Option<String>,
    #[arg(long, value_enum, default_value = "standard")]
    pool: PoolKind,
    #[command(flatten)]
    search: SearchOpts,
}

/// Result of a subcommand: the JSON document, its text form and the exit code.
struct Output {
    json: Value,
    text: String,
    code: u8,
}

impl Output {
    fn new(json: Value, text: impl Into<String>, ok: bool) -> Self {
        Output { json, text: text.into(), code: if ok { 0 } else { 1 } }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let body = if cli.pretty { out.text } else { out.json.to_string() };
            // A closed pipe on stdout is not an error of the command.
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<Output> {
    match command {
        Command::Parse(f) => parse_cmd(&f),
        Command::Eval(a) => eval_cmd(&a),
        Command::Valid(a) => search_cmd(&a, false),
        Command::Countermodel(a) => search_cmd(&a, true),
        Command::Translate(a) => translate_cmd(&a),
        Command::Proof { command: ProofCommand::Check(a) } | Command::ProofCheck(a) => proof_cmd(&a),
        Command::FrameToTopology { file } => frame_cmd(&file),
        Command::Enumerate { what, points } => enumerate_cmd(what, points),
        Command::Soundness(a) => soundness_cmd(&a),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

impl FormulaArg {
    fn load(&self) -> Result<Formula> {
        let text = match (&self.formula, &self.file) {
            (Some(t), None) => t.clone(),
            (None, Some(path)) => read(path)?,
            _ => bail!("give a formula or --file"),
        };
        Ok(parse(text.trim())?)
    }
}

fn parse_cmd(arg: &FormulaArg) -> Result<Output> {
    let f = arg.load()?;
    let m = f.measure();
    let json = json!({
        "formula": f.render(),
        "sugared": f.render_sugared(),
        "props": m.props,
        "modal_depth": m.modal_depth,
        "size": m.size,
    });
    Ok(Output::new(json, f.render_sugared(), true))
}

fn eval_cmd(a: &EvalArgs) -> Result<Output> {
    let f = a.formula.load()?;
    let model = model_from_json(&read(&a.model)?).context("bad model")?;
    let scenario_text = if a.scenario.trim_start().starts_with('{') { a.scenario.clone() } else { read(Path::new(&a.scenario))? };
    let scenario = scenario_from_json(&scenario_text, model.space()).context("bad scenario")?;
    let value = model.eval(&scenario, &f, a.semantics)?;
    Ok(Output::new(json!({ "value": value }), value.to_string(), value))
}

fn search_cmd(a: &SearchArgs, describe: bool) -> Result<Output> {
    let f = a.formula.load()?;
    let o = &a.search;
    let verdict = decide_bounded_validity(&f, o.semantics, o.class, &o.bounds())?;
    let mut json = verdict.to_json();
    let text = match &verdict {
        Verdict::ValidUpToBound { models } => {
            format!("valid on all {models} models with at most {} points ({} semantics, class {})", o.max_points, o.semantics, o.class)
        }
        Verdict::Countermodel(w) => {
            let spec = ModelSpec::of(&w.model);
            let s = ScenarioSpec::of(&w.scenario, w.model.space());
            if describe {
                let ext = w.model.ext(w.scenario.range(), &f, o.semantics);
                json["extension"] = json!(w.model.space().names_of(ext));
            }
            format!(
                "countermodel\n  points    {:?}\n  opens     {:?}\n  valuation {:?}\n  scenario  x={} U={:?}{}",
                spec.points,
                spec.opens.unwrap_or_default(),
                spec.valuation,
                s.x,
                s.u,
                s.v.map(|v| format!(" V={v:?}")).unwrap_or_default()
            )
        }
    };
    Ok(Output::new(json, text, verdict.is_valid()))
}

fn translate_cmd(a: &TranslateArgs) -> Result<Output> {
    let kind = Translation::from_name(&a.to).ok_or_else(|| anyhow!("unknown translation {:?} (expected t, e or alpha)", a.to))?;
    let g = a.formula.load()?.translate(kind);
    Ok(Output::new(json!({"formula": g.render(), "sugared": g.render_sugared()}), g.render_sugared(), true))
}

fn proof_cmd(a: &ProofCheckArgs) -> Result<Output> {
    let registry = builtin_logics();
    let logic = registry
        .get(&a.logic)
        .ok_or_else(|| anyhow!("unknown logic {:?}; known: {}", a.logic, registry.names().join(", ")))?;
    let proof = parse_proof(&read(&a.file)?)?;
    let mode = if a.derivation { Mode::Derivation } else { Mode::Theorem };
    Ok(match check_proof_in(logic, &proof, mode) {
        Ok(()) => Output::new(json!({"status": "ok", "lines": proof.len()}), format!("ok: {} lines checked in {}", proof.len(), logic.name()), true),
        Err(e) => Output::new(
            json!({"status": "rejected", "line": e.line, "reason": e.kind.to_string()}),
            format!("rejected: {e}"),
            false,
        ),
    })
}

fn frame_cmd(file: &Path) -> Result<Output> {
    let rel = frame_from_json(&read(file)?).context("bad frame")?;
    let check = rel.frame().check_belief_frame();
    let frame_json = json!({
        "serial": check.serial,
        "transitive": check.transitive,
        "euclidean": check.euclidean,
        "serial_witness": check.serial_witness,
        "transitive_witness": check.transitive_witness,
        "euclidean_witness": check.euclidean_witness,
    });
    if !check.is_belief_frame() {
        return Ok(Output::new(json!({"status": "not_belief_frame", "check": frame_json}), format!("not a belief frame: {frame_json}"), false));
    }
    let model = rel.to_topological()?;
    let space = model.space();
    let components: Vec<Value> = rel
        .frame()
        .brush_decompose()?
        .components
        .iter()
        .map(|b| json!({"carrier": space.names_of(b.carrier), "final_cluster": space.names_of(b.final_cluster), "pin": b.is_pin}))
        .collect();
    let spec = ModelSpec::of(&model);
    let text = format!("opens {:?}\nvaluation {:?}\ncomponents {}", spec.opens.clone().unwrap_or_default(), spec.valuation, components.len());
    Ok(Output::new(json!({"status": "ok", "model": spec, "components": components}), text, true))
}

fn enumerate_cmd(what: EnumerateWhat, n: usize) -> Result<Output> {
    let items: Vec<Value> = match what {
        EnumerateWhat::Topologies => enumerate_topologies(n)?.iter().map(|t| json!(t.open_names())).collect(),
        EnumerateWhat::Frames => enumerate_belief_frames(n)?.iter().map(|f| json!(f.pairs())).collect(),
    };
    let text = items.iter().map(Value::to_string).collect::<Vec<_>>().join("\n");
    Ok(Output::new(json!({"points": n, "count": items.len(), "items": items}), text, true))
}

fn soundness_cmd(a: &SoundnessArgs) -> Result<Output> {
    let scheme = match (&a.scheme, &a.text) {
        (_, Some(text)) => SchemeTemplate::parse("custom", text)?,
        (Some(name), None) => {
            let registry = builtin_logics();
            let logic = registry.get(&a.logic).ok_or_else(|| anyhow!("unknown logic {:?}", a.logic))?;
            logic.scheme(name).ok_or_else(|| anyhow!("logic {} has no scheme {name:?}", logic.name()))?.clone()
        }
        (None, None) => bail!("give --scheme or --text"),
    };
    let pool = match a.pool {
        PoolKind::Standard => PoolSpec::standard(),
        PoolKind::Belief => PoolSpec::belief_only(),
    }
    .generate();
    let o = &a.search;
    let report = scheme_soundness_report(&scheme, o.semantics, o.class, &o.bounds(), &pool)?;
    let text = format!(
        "{}: {} instances over {} models, {} violations ({} semantics, class {})",
        scheme.name(),
        report.instances,
        report.models,
        report.violations.len(),
        o.semantics,
        o.class
    );
    Ok(Output::new(report.to_json(), text, report.is_sound()))
}
