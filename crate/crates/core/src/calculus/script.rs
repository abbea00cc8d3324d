//! Text format of proof scripts.
//!
//! ```text
//! calculus INTCK
//! mode derived_rule
//! premise p
//! 1: p ; pre 1
//! 2: p <-> T ; ...
//! ```
//!
//! Justifications are `ax <Id> <mv>=<formula> ...`, `pre <k>`, `mp <i> <j>`,
//! `rule <Id> <i> ...` and `thm <Name> <var>=<formula> ...`. In `mp i j` line
//! `i` is the antecedent and line `j` the implication. Blank lines and lines
//! starting with `#` are ignored.

use super::CalcId;
use crate::syntax::{parse, Dialect, Formula};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Axioms, theorems and rule applications; no premises.
    Proof,
    /// Premises, provable formulas and modus ponens.
    Derivation,
    /// Anything, including rule applications to premises.
    DerivedRule,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Proof => "proof",
            Mode::Derivation => "derivation",
            Mode::DerivedRule => "derived_rule",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "proof" => Ok(Mode::Proof),
            "derivation" => Ok(Mode::Derivation),
            "derived_rule" => Ok(Mode::DerivedRule),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// Instance of an axiom scheme under explicit metavariable bindings.
    Ax { scheme: String, bindings: Vec<(String, Formula)> },
    /// The `k`-th declared premise, counted from 1.
    Premise(usize),
    /// Modus ponens from line `i` (antecedent) and line `j` (implication).
    Mp(usize, usize),
    Rule { rule: String, lines: Vec<usize> },
    /// Instance of a checked library theorem under a substitution of its atoms.
    Thm { name: String, bindings: Vec<(String, Formula)> },
}

impl Justification {
    /// Line numbers this justification refers to.
    pub fn references(&self) -> Vec<usize> {
        match self {
            Justification::Mp(i, j) => vec![*i, *j],
            Justification::Rule { lines, .. } => lines.clone(),
            _ => Vec::new(),
        }
    }

    /// The same justification with line references renamed.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Justification {
        match self {
            Justification::Mp(i, j) => Justification::Mp(f(*i), f(*j)),
            Justification::Rule { rule, lines } => Justification::Rule {
                rule: rule.clone(),
                lines: lines.iter().map(|&l| f(l)).collect(),
            },
            other => other.clone(),
        }
    }
}

fn write_bindings(f: &mut fmt::Formatter<'_>, bindings: &[(String, Formula)]) -> fmt::Result {
    for (k, v) in bindings {
        write!(f, " {k}={v}")?;
    }
    Ok(())
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Ax { scheme, bindings } => {
                write!(f, "ax {scheme}")?;
                write_bindings(f, bindings)
            }
            Justification::Premise(k) => write!(f, "pre {k}"),
            Justification::Mp(i, j) => write!(f, "mp {i} {j}"),
            Justification::Rule { rule, lines } => {
                write!(f, "rule {rule}")?;
                for l in lines {
                    write!(f, " {l}")?;
                }
                Ok(())
            }
            Justification::Thm { name, bindings } => {
                write!(f, "thm {name}")?;
                write_bindings(f, bindings)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub formula: Formula,
    pub just: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofScript {
    pub calculus: CalcId,
    pub mode: Mode,
    pub premises: Vec<Formula>,
    pub lines: Vec<Line>,
}

impl ProofScript {
    pub fn new(calculus: CalcId, mode: Mode) -> Self {
        ProofScript { calculus, mode, premises: Vec::new(), lines: Vec::new() }
    }

    /// The formula on the last line.
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn dialect(&self) -> Dialect {
        self.calculus.calculus().dialect()
    }
}

impl fmt::Display for ProofScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "calculus {}", self.calculus)?;
        writeln!(f, "mode {}", self.mode)?;
        for p in &self.premises {
            writeln!(f, "premise {p}")?;
        }
        for (i, l) in self.lines.iter().enumerate() {
            writeln!(f, "{}: {} ; {}", i + 1, l.formula, l.just)?;
        }
        Ok(())
    }
}

/// A malformed script. `line` is the 1-based line of the input text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ScriptError> {
    Err(ScriptError { line, message: message.into() })
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits `name=value name=value ...` where a key starts after whitespace and
/// its `=` is not the first character of `=>`.
fn split_bindings(text: &str) -> Option<Vec<(String, String)>> {
    let bytes: Vec<char> = text.chars().collect();
    let mut starts = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let at_boundary = i == 0 || bytes[i - 1].is_whitespace();
        if at_boundary && bytes[i].is_ascii_alphabetic() {
            let mut j = i;
            while j < bytes.len() && is_ident_char(bytes[j]) {
                j += 1;
            }
            if j < bytes.len() && bytes[j] == '=' && bytes.get(j + 1) != Some(&'>') {
                starts.push((i, j));
                i = j + 1;
                continue;
            }
        }
        i += 1;
    }
    if starts.is_empty() {
        return if text.trim().is_empty() { Some(Vec::new()) } else { None };
    }
    if !text[..char_offset(&bytes, starts[0].0)].trim().is_empty() {
        return None;
    }
    let mut out = Vec::new();
    for (k, &(s, eq)) in starts.iter().enumerate() {
        let end = starts.get(k + 1).map_or(bytes.len(), |&(next, _)| next);
        let key: String = bytes[s..eq].iter().collect();
        let value: String = bytes[eq + 1..end].iter().collect();
        out.push((key, value.trim().to_string()));
    }
    Some(out)
}

fn char_offset(chars: &[char], idx: usize) -> usize {
    chars[..idx].iter().map(|c| c.len_utf8()).sum()
}

fn parse_justification(
    text: &str,
    dialect: Dialect,
    lineno: usize,
) -> Result<Justification, ScriptError> {
    let text = text.trim();
    let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let rest = rest.trim();
    let numbers = |s: &str| -> Result<Vec<usize>, ScriptError> {
        s.split_whitespace()
            .map(|t| t.parse::<usize>().or_else(|_| err(lineno, format!("expected a line number, found `{t}`"))))
            .collect()
    };
    let bindings = |s: &str| -> Result<Vec<(String, Formula)>, ScriptError> {
        let raw = match split_bindings(s) {
            Some(raw) => raw,
            None => return err(lineno, format!("malformed bindings `{s}`")),
        };
        raw.into_iter()
            .map(|(k, v)| match parse(dialect, &v) {
                Ok(f) => Ok((k, f)),
                Err(e) => err(lineno, format!("in binding `{k}`: {e}")),
            })
            .collect()
    };
    match head {
        "ax" | "thm" => {
            let (name, rest) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            if name.is_empty() {
                return err(lineno, format!("`{head}` needs a name"));
            }
            let b = bindings(rest)?;
            Ok(if head == "ax" {
                Justification::Ax { scheme: name.to_string(), bindings: b }
            } else {
                Justification::Thm { name: name.to_string(), bindings: b }
            })
        }
        "pre" => match numbers(rest)?.as_slice() {
            [k] => Ok(Justification::Premise(*k)),
            _ => err(lineno, "`pre` takes one premise number"),
        },
        "mp" => match numbers(rest)?.as_slice() {
            [i, j] => Ok(Justification::Mp(*i, *j)),
            _ => err(lineno, "`mp` takes two line numbers"),
        },
        "rule" => {
            let (name, rest) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            if name.is_empty() {
                return err(lineno, "`rule` needs a rule name");
            }
            Ok(Justification::Rule { rule: name.to_string(), lines: numbers(rest)? })
        }
        "" => err(lineno, "missing justification"),
        other => err(lineno, format!("unknown justification `{other}`")),
    }
}

/// Parses the text format. Unknown scheme, rule and theorem names are accepted
/// here and rejected by the checker.
pub fn parse_script(text: &str) -> Result<ProofScript, ScriptError> {
    let mut calculus = None;
    let mut mode = None;
    let mut script: Option<ProofScript> = None;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match word {
            "calculus" => {
                if calculus.is_some() {
                    return err(lineno, "duplicate `calculus` header");
                }
                calculus = Some(CalcId::from_str(rest).or_else(|e| err(lineno, e))?);
                continue;
            }
            "mode" => {
                if mode.is_some() {
                    return err(lineno, "duplicate `mode` header");
                }
                mode = Some(Mode::from_str(rest).or_else(|e| err(lineno, e))?);
                continue;
            }
            _ => {}
        }
        let s = match &mut script {
            Some(s) => s,
            None => {
                let (Some(c), Some(m)) = (calculus, mode) else {
                    return err(lineno, "`calculus` and `mode` headers must come first");
                };
                script.insert(ProofScript::new(c, m))
            }
        };
        let dialect = s.dialect();
        if word == "premise" {
            if !s.lines.is_empty() {
                return err(lineno, "premises must precede the numbered lines");
            }
            let f = parse(dialect, rest).or_else(|e| err(lineno, format!("premise: {e}")))?;
            s.premises.push(f);
            continue;
        }
        let Some((num, body)) = line.split_once(':') else {
            return err(lineno, "expected `<n>: <formula> ; <justification>`");
        };
        let n: usize = num
            .trim()
            .parse()
            .or_else(|_| err(lineno, format!("bad line number `{}`", num.trim())))?;
        if n != s.lines.len() + 1 {
            return err(lineno, format!("expected line number {}, found {n}", s.lines.len() + 1));
        }
        let Some((formula, just)) = body.split_once(';') else {
            return err(lineno, "missing `;` before the justification");
        };
        let formula = parse(dialect, formula.trim()).or_else(|e| err(lineno, e.to_string()))?;
        let just = parse_justification(just, dialect, lineno)?;
        s.lines.push(Line { formula, just });
    }
    match script {
        Some(s) => Ok(s),
        None => match (calculus, mode) {
            (Some(c), Some(m)) => Ok(ProofScript::new(c, m)),
            _ => err(text.lines().count().max(1), "missing `calculus` or `mode` header"),
        },
    }
}
