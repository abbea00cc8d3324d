//! Recursive-descent parser for the ASCII formula grammar.
//!
//! Binding strength, weakest first: `<->`, `->` (right-assoc), `=>` / `~>`
//! (non-associative), `|` (left), `&` (left), prefix `~` `[]` `<>`.

use super::formula::{Atom, Dialect, Formula, Meta, Pattern};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Top,
    Bot,
    LParen,
    RParen,
    Iff,
    Imp,
    BoxArrow,
    DiaArrow,
    Or,
    And,
    Not,
    Box,
    Dia,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Top => "`T`",
            Tok::Bot => "`F`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Iff => "`<->`",
            Tok::Imp => "`->`",
            Tok::BoxArrow => "`=>`",
            Tok::DiaArrow => "`~>`",
            Tok::Or => "`|`",
            Tok::And => "`&`",
            Tok::Not => "`~`",
            Tok::Box => "`[]`",
            Tok::Dia => "`<>`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, column);
        let err = |message: String| ParseError {
            line: start_line,
            column: start_col,
            message,
        };
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, len) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '|' => (Tok::Or, 1),
            '&' => (Tok::And, 1),
            '~' if next == Some('>') => (Tok::DiaArrow, 2),
            '~' => (Tok::Not, 1),
            '-' if next == Some('>') => (Tok::Imp, 2),
            '=' if next == Some('>') => (Tok::BoxArrow, 2),
            '<' if next == Some('-') && chars.get(i + 2) == Some(&'>') => (Tok::Iff, 3),
            '<' if next == Some('>') => (Tok::Dia, 2),
            '[' if next == Some(']') => (Tok::Box, 2),
            'T' if !ident_char(next) => (Tok::Top, 1),
            'F' if !ident_char(next) => (Tok::Bot, 1),
            c if c.is_ascii_lowercase() => {
                let mut j = i + 1;
                while j < chars.len() && ident_char(Some(chars[j])) {
                    j += 1;
                }
                (Tok::Ident(chars[i..j].iter().collect()), j - i)
            }
            c => return Err(err(format!("unexpected character `{c}`"))),
        };
        out.push(Spanned {
            tok,
            line: start_line,
            column: start_col,
        });
        i += len;
        column += len;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

fn ident_char(c: Option<char>) -> bool {
    matches!(c, Some(c) if c.is_ascii_alphanumeric() || c == '_')
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    dialect: Dialect,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            column: s.column,
            message: message.into(),
        }
    }

    fn check_dialect(&self, tok: &Tok) -> Result<(), ParseError> {
        let ok = match tok {
            Tok::BoxArrow | Tok::DiaArrow => self.dialect == Dialect::Cond,
            Tok::Box | Tok::Dia => self.dialect == Dialect::Modal,
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(self.error(format!(
                "operator {tok} is not part of the {} dialect",
                self.dialect
            )))
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let l = self.imp()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let r = self.imp()?;
            if *self.peek() == Tok::Iff {
                return Err(self.error("`<->` is non-associative; add parentheses"));
            }
            return Ok(Formula::iff(l, r));
        }
        Ok(l)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let l = self.cond()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let r = self.imp()?;
            return Ok(Formula::imp(l, r));
        }
        Ok(l)
    }

    fn cond(&mut self) -> Result<Formula, ParseError> {
        let l = self.or()?;
        let op = self.peek().clone();
        if matches!(op, Tok::BoxArrow | Tok::DiaArrow) {
            self.check_dialect(&op)?;
            self.bump();
            let r = self.or()?;
            if matches!(self.peek(), Tok::BoxArrow | Tok::DiaArrow) {
                return Err(self.error(format!(
                    "conditional operators are non-associative; add parentheses around the \
                     operand before {}",
                    self.peek()
                )));
            }
            return Ok(if op == Tok::BoxArrow {
                Formula::box_arrow(l, r)
            } else {
                Formula::dia_arrow(l, r)
            });
        }
        Ok(l)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut l = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let r = self.and()?;
            l = Formula::or(l, r);
        }
        Ok(l)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut l = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let r = self.unary()?;
            l = Formula::and(l, r);
        }
        Ok(l)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let tok = self.peek().clone();
        match tok {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Box | Tok::Dia => {
                self.check_dialect(&tok)?;
                self.bump();
                let f = self.unary()?;
                Ok(if tok == Tok::Box {
                    Formula::boxed(f)
                } else {
                    Formula::dia(f)
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Var(Atom::new(&name)))
            }
            Tok::Top => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Bot => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::LParen => {
                self.bump();
                let f = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(format!("expected `)`, found {}", self.peek())));
                }
                self.bump();
                Ok(f)
            }
            t => Err(self.error(format!("expected a formula, found {t}"))),
        }
    }
}

/// Parses `text` in the given dialect, desugaring `~` and `<->`.
pub fn parse(dialect: Dialect, text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        dialect,
    };
    let f = p.iff()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(format!("unexpected {} after formula", p.peek())));
    }
    Ok(f)
}

pub fn parse_cond(text: &str) -> Result<Formula, ParseError> {
    parse(Dialect::Cond, text)
}

pub fn parse_modal(text: &str) -> Result<Formula, ParseError> {
    parse(Dialect::Modal, text)
}

/// Parses a pattern whose leaves are the metavariables `phi`, `psi`, `chi`, `theta`.
pub fn parse_pattern(dialect: Dialect, text: &str) -> Result<Pattern, ParseError> {
    let f = parse(dialect, text)?;
    let mut bad = None;
    let pat = f.map_vars(&mut |a: &Atom| match Meta::from_name(a.as_str()) {
        Some(m) => Formula::Var(m),
        None => {
            bad.get_or_insert_with(|| a.clone());
            Formula::Top
        }
    });
    match bad {
        None => Ok(pat),
        Some(a) => Err(ParseError {
            line: 1,
            column: 1,
            message: format!("`{a}` is not a metavariable"),
        }),
    }
}
