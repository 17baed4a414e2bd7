//! `tamewitt`: Witt classes of diagonal forms over iterated Laurent fields.
//!
//! Exit status is 0 on success, 1 when the input is well formed but the
//! computation rejects it, and 2 for syntax and usage errors.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value as Json};

use tamewitt::basefield::BaseField;
use tamewitt::cocycles::{
    cocycle_to_diag_form, conjugacy_test, validate_cocycle, DiagonalCocycle, LoopCocycle,
    Validation,
};
use tamewitt::formlang::{
    parse_cocycle, parse_components, parse_form, ParseContext, ParseError, ParseErrorKind, Value,
};
use tamewitt::loopforms::{build_loop_form, classify, Verdict};
use tamewitt::wittcore::{
    diagonalize, subset_indices, witt_class, witt_decompose, witt_index, DiagForm, WittClass,
};
use tamewitt::{Error, Frac};

#[derive(Parser)]
#[command(name = "tamewitt", version, about = "Witt classes of diagonal quadratic forms over k((t_1))...((t_n))")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Base field: `Fp:<p>` for an odd prime p, or `R`.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Number of Laurent variables n.
    #[arg(long, global = true, default_value_t = 0)]
    vars: usize,
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Read an input from a file (repeatable; `-` is stdin). Files follow
    /// positional inputs.
    #[arg(long, global = true)]
    file: Vec<PathBuf>,
}

#[derive(Args)]
struct Inputs {
    /// Input expressions; `-` reads stdin.
    inputs: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Diagonalize a symmetric matrix, with a change-of-basis certificate.
    Diagonalize(Inputs),
    /// Witt components over all 2^n subsets.
    WittClass(Inputs),
    WittIndex(Inputs),
    Anisotropic(Inputs),
    /// Anisotropic part and number of hyperbolic planes.
    Decompose(Inputs),
    Isometric(Inputs),
    /// Loop form of a component table.
    LoopBuild(Inputs),
    CocycleCheck(Inputs),
    CocycleForm(Inputs),
    CocycleConjugate(Inputs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Diagonalize(_) => "diagonalize",
            Command::WittClass(_) => "witt-class",
            Command::WittIndex(_) => "witt-index",
            Command::Anisotropic(_) => "anisotropic",
            Command::Decompose(_) => "decompose",
            Command::Isometric(_) => "isometric",
            Command::LoopBuild(_) => "loop-build",
            Command::CocycleCheck(_) => "cocycle-check",
            Command::CocycleForm(_) => "cocycle-form",
            Command::CocycleConjugate(_) => "cocycle-conjugate",
        }
    }

    fn inputs(&self) -> &[String] {
        match self {
            Command::Diagonalize(i)
            | Command::WittClass(i)
            | Command::WittIndex(i)
            | Command::Anisotropic(i)
            | Command::Decompose(i)
            | Command::Isometric(i)
            | Command::LoopBuild(i)
            | Command::CocycleCheck(i)
            | Command::CocycleForm(i)
            | Command::CocycleConjugate(i) => &i.inputs,
        }
    }

    fn arity(&self) -> usize {
        match self {
            Command::Isometric(_) | Command::CocycleConjugate(_) => 2,
            _ => 1,
        }
    }
}

/// Failure of a command, before or after parsing.
enum Failure {
    Usage(String),
    Io(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(e) if !e.is_syntax() => 1,
            _ => 2,
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Failure::Usage(m) => json!({"code": "E_USAGE", "message": m}),
            Failure::Io(m) => json!({"code": "E_IO", "message": m}),
            Failure::Lib(Error::Parse(p)) => json!({
                "code": p.kind.code(),
                "message": p.to_string(),
                "line": p.line,
                "col": p.col,
            }),
            Failure::Lib(e) => json!({"code": e.code(), "message": e.to_string()}),
        }
    }

    fn to_text(&self) -> String {
        let j = self.to_json();
        format!("error[{}]: {}", j["code"].as_str().unwrap_or_default(), j["message"].as_str().unwrap_or_default())
    }
}

/// What a command produced: text lines and the JSON payload.
struct Report {
    text: Vec<String>,
    result: Json,
    certificate: Json,
}

struct Session {
    ctx: ParseContext,
    /// Raw text and canonical rendering of each parsed input.
    echoed: Vec<Json>,
}

fn parse_field(text: &str) -> Result<BaseField, Failure> {
    if text == "R" {
        return Ok(BaseField::reals());
    }
    let p = text
        .strip_prefix("Fp:")
        .and_then(|p| p.parse::<u64>().ok())
        .ok_or_else(|| Failure::Usage(format!("bad field `{text}`: expected `Fp:<p>` or `R`")))?;
    BaseField::prime(p).map_err(|e| Failure::Usage(format!("bad field `{text}`: {e}")))
}

fn read_inputs(cli: &Cli) -> Result<Vec<String>, Failure> {
    let mut out = Vec::new();
    let mut stdin_used = false;
    let mut stdin = |out: &mut Vec<String>| -> Result<(), Failure> {
        if std::mem::replace(&mut stdin_used, true) {
            return Err(Failure::Usage("stdin given more than once".into()));
        }
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        out.push(s);
        Ok(())
    };
    for i in cli.command.inputs() {
        if i == "-" {
            stdin(&mut out)?;
        } else {
            out.push(i.clone());
        }
    }
    for path in &cli.file {
        if path.as_os_str() == "-" {
            stdin(&mut out)?;
        } else {
            let bytes = std::fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            let text = String::from_utf8(bytes).map_err(|e| {
                let valid = &e.as_bytes()[..e.utf8_error().valid_up_to()];
                let text = String::from_utf8_lossy(valid);
                let line = text.matches('\n').count() + 1;
                let col = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
                Failure::Lib(Error::Parse(ParseError {
                    kind: ParseErrorKind::Syntax {
                        expected: vec!["UTF-8 text".into()],
                        found: "invalid byte".into(),
                    },
                    line,
                    col,
                }))
            })?;
            out.push(text);
        }
    }
    Ok(out)
}

fn wrong_kind(expected: &str, found: &Value) -> Failure {
    let what = match found {
        Value::Poly(_) => "a polynomial",
        Value::Diag(_) => "a diagonal form",
        Value::Matrix(_) => "a matrix",
        Value::Components(_) => "a component table",
        Value::Cocycle(_) => "a cocycle with explicit values",
        Value::DiagCocycle(_) => "a diagonal cocycle",
    };
    Failure::Lib(Error::Parse(ParseError {
        kind: ParseErrorKind::Syntax {
            expected: vec![expected.into()],
            found: what.into(),
        },
        line: 1,
        col: 1,
    }))
}

impl Session {
    fn record(&mut self, text: &str, v: &Value) {
        self.echoed.push(json!({"text": text, "value": v.to_string()}));
    }

    fn form_value(&mut self, text: &str) -> Result<Value, Failure> {
        let v = parse_form(text, &self.ctx)?;
        self.record(text, &v);
        Ok(v)
    }

    /// A diagonal form; matrices are diagonalized first.
    fn diag(&mut self, text: &str) -> Result<DiagForm, Failure> {
        match self.form_value(text)? {
            Value::Diag(q) => Ok(q),
            Value::Matrix(a) => Ok(diagonalize(&a)?.form),
            other => Err(wrong_kind("a form", &other)),
        }
    }

    fn cocycle(&mut self, text: &str) -> Result<Value, Failure> {
        let v = parse_cocycle(text, &self.ctx)?;
        self.record(text, &v);
        Ok(v)
    }

    fn diagonal_cocycle(&mut self, text: &str) -> Result<DiagonalCocycle, Failure> {
        match self.cocycle(text)? {
            Value::DiagCocycle(d) => Ok(d),
            other => Err(wrong_kind("a diagonal cocycle (`units=…, exps=…`)", &other)),
        }
    }
}

fn subset_json(mask: u32) -> Json {
    json!(subset_indices(mask))
}

fn subset_text(mask: u32) -> String {
    let idx: Vec<String> = subset_indices(mask).iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", idx.join(","))
}

fn form_json(q: &DiagForm) -> Json {
    let entries: Vec<Json> = q
        .entries()
        .iter()
        .map(|e| {
            json!({
                "unit": e.base().to_string(),
                "parities": e.parities().iter().map(|&b| b as u8).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({"text": q.to_string(), "entries": entries})
}

fn class_json(w: &WittClass) -> Json {
    Json::Array(
        w.components()
            .map(|(m, q)| json!({"subset": subset_json(m), "form": q.to_string()}))
            .collect(),
    )
}

fn class_lines(w: &WittClass) -> Vec<String> {
    w.components()
        .map(|(m, q)| format!("{}: {q}", subset_text(m)))
        .collect()
}

fn verdict_json(v: &Verdict) -> Json {
    match v {
        Verdict::Isometric => json!({"verdict": "Isometric", "text": v.to_string()}),
        Verdict::DistinctRank { left, right } => {
            json!({"verdict": "DistinctRank", "text": v.to_string(), "ranks": [left, right]})
        }
        Verdict::DistinctWittClass { witnesses } => json!({
            "verdict": "DistinctWittClass",
            "text": v.to_string(),
            "witnesses": witnesses.iter().map(|&m| subset_json(m)).collect::<Vec<_>>(),
        }),
    }
}

fn matrix_json(m: &[Vec<Frac>]) -> Json {
    json!(m
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn matrix_text(m: &[Vec<Frac>]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| {
            let xs: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            format!("[{}]", xs.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// First subset whose graded part loses dimension under Witt reduction.
fn isotropic_witness(q: &DiagForm, w: &WittClass) -> Option<u32> {
    w.components()
        .map(|(m, c)| (m, c.dim()))
        .find(|&(m, reduced)| q.entries().iter().filter(|e| e.parity() == m).count() > reduced)
        .map(|(m, _)| m)
}

fn run(cmd: &Command, inputs: &[String], s: &mut Session) -> Result<Report, Failure> {
    let plain = |text: Vec<String>, result: Json| Report {
        text,
        result,
        certificate: Json::Null,
    };
    Ok(match cmd {
        Command::Diagonalize(_) => {
            let a = match s.form_value(&inputs[0])? {
                Value::Matrix(a) => a,
                Value::Diag(q) => q.to_matrix(),
                other => return Err(wrong_kind("a form", &other)),
            };
            let d = diagonalize(&a)?;
            let verified = d.basis.verify()?;
            let diagonal: Vec<String> = d.diagonal.iter().map(|x| x.to_string()).collect();
            Report {
                text: vec![
                    format!("form: {}", d.form),
                    format!("diagonal: [{}]", diagonal.join(", ")),
                    format!("P: {}", matrix_text(d.basis.matrix())),
                    format!("P^-1: {}", matrix_text(d.basis.inverse())),
                    format!("verified: {verified}"),
                ],
                result: json!({"form": form_json(&d.form), "diagonal": diagonal}),
                certificate: json!({
                    "P": matrix_json(d.basis.matrix()),
                    "P_inverse": matrix_json(d.basis.inverse()),
                    "verified": verified,
                }),
            }
        }
        Command::WittClass(_) => {
            let q = s.diag(&inputs[0])?;
            let w = witt_class(&q);
            let index = witt_index(&q);
            let mut text = class_lines(&w);
            text.push(format!("index: {index}"));
            plain(text, json!({"class": class_json(&w), "index": index}))
        }
        Command::WittIndex(_) => {
            let q = s.diag(&inputs[0])?;
            let index = witt_index(&q);
            plain(vec![index.to_string()], json!({"index": index}))
        }
        Command::Anisotropic(_) => {
            let q = s.diag(&inputs[0])?;
            let w = witt_class(&q);
            let witness = isotropic_witness(&q, &w);
            let text = match witness {
                None => "true".to_string(),
                Some(m) => format!("false (isotropic component {})", subset_text(m)),
            };
            plain(
                vec![text],
                json!({"anisotropic": witness.is_none(), "witness": witness.map(subset_json)}),
            )
        }
        Command::Decompose(_) => {
            let q = s.diag(&inputs[0])?;
            let (q0, c) = witt_decompose(&q);
            plain(
                vec![format!("anisotropic part: {q0}"), format!("hyperbolic planes: {c}")],
                json!({"anisotropic_part": form_json(&q0), "hyperbolic_planes": c}),
            )
        }
        Command::Isometric(_) => {
            let q = s.diag(&inputs[0])?;
            let r = s.diag(&inputs[1])?;
            let v = classify(&q, &r)?;
            plain(vec![v.to_string()], verdict_json(&v))
        }
        Command::LoopBuild(_) => {
            let cs = parse_components(&inputs[0], &s.ctx)?;
            s.record(&inputs[0], &Value::Components(cs.clone()));
            let q = build_loop_form(&cs);
            plain(vec![q.to_string()], json!({"form": form_json(&q)}))
        }
        Command::CocycleCheck(_) => {
            let phi: LoopCocycle = match s.cocycle(&inputs[0])? {
                Value::Cocycle(c) => c,
                Value::DiagCocycle(d) => d.to_loop_cocycle()?,
                other => return Err(wrong_kind("a cocycle", &other)),
            };
            match validate_cocycle(&phi) {
                Validation::Valid => plain(vec!["Valid".into()], json!({"valid": true, "witness": null})),
                Validation::Invalid { sigma, tau } => plain(
                    vec![format!("Invalid (identity fails at sigma={sigma}, tau={tau})")],
                    json!({"valid": false, "witness": {"sigma": sigma, "tau": tau}}),
                ),
            }
        }
        Command::CocycleForm(_) => {
            let d = s.diagonal_cocycle(&inputs[0])?;
            let q = cocycle_to_diag_form(&d)?;
            plain(vec![q.to_string()], json!({"form": form_json(&q)}))
        }
        Command::CocycleConjugate(_) => {
            let a = s.diagonal_cocycle(&inputs[0])?;
            let b = s.diagonal_cocycle(&inputs[1])?;
            let c = conjugacy_test(&a, &b)?;
            plain(vec![c.to_string()], json!({"verdict": c.to_string()}))
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let mut session: Option<Session> = None;
    let outcome = (|| {
        let field_text = cli
            .field
            .as_deref()
            .ok_or_else(|| Failure::Usage("--field is required (`Fp:<p>` or `R`)".into()))?;
        let field = parse_field(field_text)?;
        let ctx = ParseContext::new(field, cli.vars)?;
        let inputs = read_inputs(&cli)?;
        if inputs.len() != cli.command.arity() {
            return Err(Failure::Usage(format!(
                "{name} takes {} input(s), got {}",
                cli.command.arity(),
                inputs.len()
            )));
        }
        let s = session.insert(Session {
            ctx,
            echoed: Vec::new(),
        });
        run(&cli.command, &inputs, s)
    })();

    let (report, failure) = match outcome {
        Ok(r) => (Some(r), None),
        Err(f) => (None, Some(f)),
    };
    if cli.json {
        let out = json!({
            "command": name,
            "field": cli.field,
            "vars": cli.vars,
            "input": session.map(|s| s.echoed).unwrap_or_default(),
            "result": report.as_ref().map_or(Json::Null, |r| r.result.clone()),
            "certificate": report.as_ref().map_or(Json::Null, |r| r.certificate.clone()),
            "error": failure.as_ref().map_or(Json::Null, Failure::to_json),
        });
        println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    } else {
        if let Some(r) = &report {
            for line in &r.text {
                println!("{line}");
            }
        }
        if let Some(f) = &failure {
            eprintln!("{}", f.to_text());
        }
    }
    ExitCode::from(failure.map_or(0, |f| f.exit_code()))
}
