use clap::{Args, Parser, Subcommand, ValueEnum};
use intck::calculus::{self, check, parse_script, standard_library, verify_corpus, CalcId, PortError, Verdict};
use intck::fosem::{check_th, validate_sheaf, KripkeSheaf};
use intck::models::{self, countermodel_search, glue, validate, Class, Model};
use intck::syntax::{parse, Atom, Dialect, Formula, IndVar, ParseError};
use intck::translate::{project_to_int, st, tr, untr};
use serde_json::{json, Value};
use std::fmt::Display;
use std::io::Write;
use std::process::ExitCode;

const OK: u8 = 0;
const FAILED: u8 = 1;
const MALFORMED: u8 = 2;

#[derive(Parser)]
#[command(name = "intck", version, about = "Model checker, proof checker and translator for intuitionistic conditional logic")]
struct Cli {
    /// Print a structured JSON report instead of text lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print it in canonical form.
    Fmt { formula: String },
    /// Evaluate a formula at a world of a model.
    Eval {
        #[arg(long)]
        model: String,
        #[arg(long, value_enum, default_value = "int")]
        mode: EvalMode,
        #[arg(long)]
        world: String,
        formula: String,
    },
    /// Check a model file against the frame conditions of a class.
    ValidateModel {
        file: String,
        #[arg(long, value_enum)]
        class: ClassArg,
    },
    /// Check a proof script against the bundled library.
    CheckProof { file: String },
    /// Recheck every proof in the bundled corpus.
    CheckCorpus,
    /// List the corpus, or print one item's script.
    CorpusShow { name: Option<String> },
    /// Translate a formula between languages.
    Translate(TranslateArgs),
    /// Search for a finite model refuting a formula.
    Countermodel {
        formula: String,
        #[arg(long, value_enum, default_value = "chellas")]
        class: ClassArg,
        #[arg(long, default_value_t = 4)]
        max_worlds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Join two models under a fresh root world.
    Glue { file1: String, file2: String },
    /// Check the sentences of Th on a Kripke sheaf.
    ThCheck {
        #[arg(long)]
        sheaf: String,
        /// Comma-separated propositional variables for the per-variable sentences.
        #[arg(long, default_value = "", value_delimiter = ',')]
        vars: Vec<String>,
    },
    /// Transfer a proof script into another calculus along a bridge.
    PortProof {
        file: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        bridge: String,
    },
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("kind").required(true).multiple(false))]
struct TranslateArgs {
    /// Modal to conditional: `[]a` becomes `T => a`.
    #[arg(long, group = "kind")]
    tr: bool,
    /// Conditional to modal, dropping antecedents.
    #[arg(long, group = "kind")]
    untr: bool,
    /// First-order standard translation at the given variable.
    #[arg(long, value_name = "VAR", group = "kind")]
    st: Option<String>,
    /// Replace conditionals by constants, leaving a propositional formula.
    #[arg(long, group = "kind")]
    erase: bool,
    formula: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalMode {
    Int,
    Weiss,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Chellas,
    Weiss,
}

impl From<ClassArg> for Class {
    fn from(c: ClassArg) -> Class {
        match c {
            ClassArg::Chellas => Class::Chellas,
            ClassArg::Weiss => Class::Weiss,
        }
    }
}

/// Result of one subcommand: an exit code plus the report in both renderings.
struct Report {
    code: u8,
    lines: Vec<String>,
    /// Diagnostics for standard error in text mode.
    notes: Vec<String>,
    json: Value,
}

impl Report {
    fn new(code: u8, lines: Vec<String>, json: Value) -> Self {
        Report { code, lines, notes: Vec::new(), json }
    }

    fn malformed(message: impl Display) -> Self {
        let message = message.to_string();
        Report::new(MALFORMED, vec![format!("error: {message}")], json!({ "status": "malformed", "error": message }))
    }
}

type Outcome = Result<Report, Report>;

fn malformed<E: Display>(context: &str) -> impl FnOnce(E) -> Report + '_ {
    move |e| Report::malformed(format!("{context}: {e}"))
}

/// Reads a formula in whichever dialect its connectives belong to.
fn read_formula(text: &str) -> Result<Formula, Report> {
    let modal = text.contains("[]") || text.contains("<>");
    let dialect = if modal { Dialect::Modal } else { Dialect::Cond };
    parse(dialect, text).map_err(|e: ParseError| Report::malformed(format!("formula: {e}")))
}

fn read_file(path: &str) -> Result<String, Report> {
    std::fs::read_to_string(path).map_err(malformed(path))
}

fn read_model(path: &str) -> Result<Model, Report> {
    Model::from_json(&read_file(path)?).map_err(malformed(path))
}

fn fmt_cmd(formula: &str) -> Outcome {
    let f = read_formula(formula)?;
    Ok(Report::new(OK, vec![f.to_string()], json!({ "status": "ok", "formula": f.to_string() })))
}

fn eval_cmd(model: &str, mode: EvalMode, world: &str, formula: &str) -> Outcome {
    let m = read_model(model)?;
    let f = read_formula(formula)?;
    let w = m.world(world).ok_or_else(|| Report::malformed(format!("unknown world `{world}`")))?;
    let mode = match mode {
        EvalMode::Int => models::Mode::Int,
        EvalMode::Weiss => models::Mode::Weiss,
    };
    let value = models::eval(&m, mode, w, &f).map_err(malformed("eval"))?;
    Ok(Report::new(
        if value { OK } else { FAILED },
        vec![value.to_string()],
        json!({ "status": "ok", "world": world, "formula": f.to_string(), "value": value }),
    ))
}

fn validate_cmd(file: &str, class: ClassArg) -> Outcome {
    let m = read_model(file)?;
    let class = Class::from(class);
    let violations = validate(&m, class);
    let lines = if violations.is_empty() {
        vec![format!("OK {class}")]
    } else {
        violations.iter().map(|v| format!("VIOLATION {v}")).collect()
    };
    let json = json!({
        "status": if violations.is_empty() { "valid" } else { "invalid" },
        "class": class.to_string(),
        "violations": violations
            .iter()
            .map(|v| json!({ "condition": v.condition(), "message": v.to_string() }))
            .collect::<Vec<_>>(),
    });
    Ok(Report::new(if violations.is_empty() { OK } else { FAILED }, lines, json))
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::Accept { conclusion } => json!({ "status": "accept", "conclusion": conclusion.to_string() }),
        Verdict::Reject { line, reason } => json!({ "status": "reject", "line": line, "reason": reason }),
    }
}

fn check_proof_cmd(file: &str) -> Outcome {
    let script = parse_script(&read_file(file)?).map_err(malformed(file))?;
    let v = check(&script, standard_library());
    Ok(Report::new(if v.is_accept() { OK } else { FAILED }, vec![v.to_string()], verdict_json(&v)))
}

fn check_corpus_cmd() -> Outcome {
    let report = verify_corpus();
    let lines = report.to_string().lines().map(str::to_string).collect();
    let json = json!({
        "status": if report.all_accepted() { "accept" } else { "reject" },
        "items": report
            .entries
            .iter()
            .map(|(name, v)| {
                let mut item = verdict_json(v);
                item["name"] = json!(name);
                item
            })
            .collect::<Vec<_>>(),
    });
    Ok(Report::new(if report.all_accepted() { OK } else { FAILED }, lines, json))
}

fn corpus_show_cmd(name: Option<&str>) -> Outcome {
    let lib = standard_library();
    match name {
        None => {
            let items = lib.items();
            let lines = items
                .iter()
                .map(|it| format!("{} [{}] {}", it.name, it.mode(), it.conclusion()))
                .collect();
            let json = json!({
                "status": "ok",
                "items": items
                    .iter()
                    .map(|it| json!({
                        "name": it.name,
                        "calculus": it.calculus().name(),
                        "mode": it.mode().name(),
                        "premises": it.premises().iter().map(ToString::to_string).collect::<Vec<_>>(),
                        "conclusion": it.conclusion().to_string(),
                    }))
                    .collect::<Vec<_>>(),
            });
            Ok(Report::new(OK, lines, json))
        }
        Some(name) => {
            let item = lib.get(name).ok_or_else(|| Report::malformed(format!("no corpus item `{name}`")))?;
            let text = item.script.to_string();
            Ok(Report::new(
                OK,
                text.lines().map(str::to_string).collect(),
                json!({ "status": "ok", "name": name, "script": text }),
            ))
        }
    }
}

fn translate_cmd(args: &TranslateArgs) -> Outcome {
    let f = read_formula(&args.formula)?;
    let (kind, out) = if args.tr {
        if !f.in_dialect(Dialect::Modal) {
            return Err(Report::malformed("--tr expects a modal formula"));
        }
        ("tr", tr(&f).to_string())
    } else if args.untr {
        if !f.in_dialect(Dialect::Cond) {
            return Err(Report::malformed("--untr expects a conditional formula"));
        }
        ("untr", untr(&f).to_string())
    } else if let Some(x) = &args.st {
        if !Atom::is_valid_name(x) {
            return Err(Report::malformed(format!("invalid individual variable `{x}`")));
        }
        ("st", st(&IndVar::new(x), &f).to_string())
    } else {
        if !f.in_dialect(Dialect::Cond) {
            return Err(Report::malformed("--erase expects a conditional formula"));
        }
        ("erase", project_to_int(&f).to_string())
    };
    Ok(Report::new(OK, vec![out.clone()], json!({ "status": "ok", "translation": kind, "result": out })))
}

fn countermodel_cmd(formula: &str, class: ClassArg, max_worlds: usize, seed: u64, budget: usize) -> Outcome {
    let f = read_formula(formula)?;
    if !f.in_dialect(Dialect::Cond) {
        return Err(Report::malformed("countermodel search expects a conditional formula"));
    }
    if max_worlds > models::MAX_WORLDS {
        return Err(Report::malformed(format!("--max-worlds is at most {}", models::MAX_WORLDS)));
    }
    let class = Class::from(class);
    Ok(match countermodel_search(&f, class, max_worlds, budget, seed) {
        Some(pm) => {
            let world = pm.model.name(pm.world).to_string();
            let model: Value = serde_json::from_str(&pm.model.to_json()).expect("model JSON reparses");
            let lines = pm.model.to_json().lines().map(str::to_string).collect();
            let mut r = Report::new(OK, lines, json!({ "status": "found", "class": class.to_string(), "world": world, "model": model }));
            r.notes.push(format!("found a {class} countermodel refuting the formula at world `{world}`"));
            r
        }
        None => Report::new(
            FAILED,
            vec![format!("NONE within budget {budget}")],
            json!({ "status": "none", "class": class.to_string(), "budget": budget }),
        ),
    })
}

fn glue_cmd(file1: &str, file2: &str) -> Outcome {
    let (m1, m2) = (read_model(file1)?, read_model(file2)?);
    let pm = glue(&m1, &m2).map_err(malformed("glue"))?;
    let text = pm.model.to_json();
    let model: Value = serde_json::from_str(&text).expect("model JSON reparses");
    Ok(Report::new(
        OK,
        text.lines().map(str::to_string).collect(),
        json!({ "status": "ok", "root": pm.model.name(pm.world), "model": model }),
    ))
}

fn th_check_cmd(path: &str, vars: &[String]) -> Outcome {
    let sheaf = KripkeSheaf::from_json(&read_file(path)?).map_err(malformed(path))?;
    let violations = validate_sheaf(&sheaf);
    if !violations.is_empty() {
        let mut r = Report::malformed(format!("{path}: not a Kripke sheaf"));
        r.lines.extend(violations.iter().map(|v| format!("VIOLATION {v}")));
        r.json["violations"] = json!(violations.iter().map(ToString::to_string).collect::<Vec<_>>());
        return Err(r);
    }
    let mut atoms = Vec::new();
    for v in vars.iter().filter(|v| !v.is_empty()) {
        if !Atom::is_valid_name(v) {
            return Err(Report::malformed(format!("invalid variable `{v}`")));
        }
        atoms.push(Atom::new(v));
    }
    let failures = check_th(&sheaf, &atoms).map_err(malformed("th-check"))?;
    let lines = if failures.is_empty() {
        vec!["OK".to_string()]
    } else {
        failures.iter().map(|f| format!("FAIL {} at {}", f.label, f.node)).collect()
    };
    let json = json!({
        "status": if failures.is_empty() { "ok" } else { "failed" },
        "failures": failures.iter().map(|f| json!({ "sentence": f.label, "node": f.node })).collect::<Vec<_>>(),
    });
    Ok(Report::new(if failures.is_empty() { OK } else { FAILED }, lines, json))
}

fn port_cmd(file: &str, target: &str, bridge: &str) -> Outcome {
    let script = parse_script(&read_file(file)?).map_err(malformed(file))?;
    let target: CalcId = target.parse().map_err(Report::malformed)?;
    match calculus::port_proof(&script, target, bridge) {
        Ok(out) => {
            let text = out.to_string();
            Ok(Report::new(
                OK,
                text.lines().map(str::to_string).collect(),
                json!({ "status": "ok", "script": text }),
            ))
        }
        Err(e @ (PortError::UnknownBridge(_) | PortError::WrongCalculi { .. })) => Err(Report::malformed(e)),
        Err(e) => Ok(Report::new(
            FAILED,
            vec![format!("FAILED {e}")],
            json!({ "status": "failed", "error": e.to_string() }),
        )),
    }
}

fn run(cli: &Cli) -> Report {
    let outcome = match &cli.command {
        Command::Fmt { formula } => fmt_cmd(formula),
        Command::Eval { model, mode, world, formula } => eval_cmd(model, *mode, world, formula),
        Command::ValidateModel { file, class } => validate_cmd(file, *class),
        Command::CheckProof { file } => check_proof_cmd(file),
        Command::CheckCorpus => check_corpus_cmd(),
        Command::CorpusShow { name } => corpus_show_cmd(name.as_deref()),
        Command::Translate(args) => translate_cmd(args),
        Command::Countermodel { formula, class, max_worlds, seed, budget } => {
            countermodel_cmd(formula, *class, *max_worlds, *seed, *budget)
        }
        Command::Glue { file1, file2 } => glue_cmd(file1, file2),
        Command::ThCheck { sheaf, vars } => th_check_cmd(sheaf, vars),
        Command::PortProof { file, target, bridge } => port_cmd(file, target, bridge),
    };
    outcome.unwrap_or_else(|r| r)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { MALFORMED } else { OK });
        }
    };
    let report = run(&cli);
    // A closed pipe downstream is not an error worth reporting.
    let _ = emit(&report, cli.json);
    ExitCode::from(report.code)
}

fn emit(report: &Report, as_json: bool) -> std::io::Result<()> {
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    if as_json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report.json).expect("report serializes"))?;
        return Ok(());
    }
    let to_err = report.code == MALFORMED;
    for line in &report.lines {
        if to_err {
            writeln!(err, "{line}")?;
        } else {
            writeln!(out, "{line}")?;
        }
    }
    for note in &report.notes {
        writeln!(err, "{note}")?;
    }
    Ok(())
}
