use super::formula::Formula;
use std::fmt::{self, Display, Write};

// Binding levels; a subterm printed below its required level gets parentheses.
const IFF: u8 = 1;
const IMP: u8 = 2;
const COND: u8 = 3;
const OR: u8 = 4;
const AND: u8 = 5;
const PREFIX: u8 = 6;
const ATOM: u8 = 7;

/// Writes the canonical minimally parenthesized text, restoring `~` and `<->`.
pub fn write_formula<A: Display + PartialEq>(out: &mut impl Write, f: &Formula<A>) -> fmt::Result {
    write_at(out, f, 0)
}

pub fn print<A: Display + PartialEq>(f: &Formula<A>) -> String {
    let mut s = String::new();
    write_formula(&mut s, f).expect("writing to a String cannot fail");
    s
}

fn level<A: PartialEq>(f: &Formula<A>) -> u8 {
    if f.as_iff().is_some() {
        return IFF;
    }
    if f.as_not().is_some() {
        return PREFIX;
    }
    match f {
        Formula::Var(_) | Formula::Top | Formula::Bot => ATOM,
        Formula::Imp(..) => IMP,
        Formula::BoxArrow(..) | Formula::DiaArrow(..) => COND,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        Formula::Box(_) | Formula::Dia(_) => PREFIX,
    }
}

fn write_at<A: Display + PartialEq>(out: &mut impl Write, f: &Formula<A>, min: u8) -> fmt::Result {
    let lvl = level(f);
    let paren = lvl < min;
    if paren {
        out.write_char('(')?;
    }
    if let Some((a, b)) = f.as_iff() {
        write_at(out, a, IMP)?;
        out.write_str(" <-> ")?;
        write_at(out, b, IMP)?;
    } else if let Some(a) = f.as_not() {
        out.write_char('~')?;
        write_at(out, a, PREFIX)?;
    } else {
        match f {
            Formula::Var(a) => write!(out, "{a}")?,
            Formula::Top => out.write_char('T')?,
            Formula::Bot => out.write_char('F')?,
            Formula::Imp(a, b) => binary(out, a, " -> ", b, COND, IMP)?,
            Formula::BoxArrow(a, b) => binary(out, a, " => ", b, OR, OR)?,
            Formula::DiaArrow(a, b) => binary(out, a, " ~> ", b, OR, OR)?,
            Formula::Or(a, b) => binary(out, a, " | ", b, OR, AND)?,
            Formula::And(a, b) => binary(out, a, " & ", b, AND, PREFIX)?,
            Formula::Box(a) => {
                out.write_str("[]")?;
                write_at(out, a, PREFIX)?;
            }
            Formula::Dia(a) => {
                out.write_str("<>")?;
                write_at(out, a, PREFIX)?;
            }
        }
    }
    if paren {
        out.write_char(')')?;
    }
    Ok(())
}

fn binary<A: Display + PartialEq>(
    out: &mut impl Write,
    a: &Formula<A>,
    op: &str,
    b: &Formula<A>,
    left_min: u8,
    right_min: u8,
) -> fmt::Result {
    write_at(out, a, left_min)?;
    out.write_str(op)?;
    write_at(out, b, right_min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_cond, parse_modal};

    #[test]
    fn minimal_parentheses() {
        for (src, want) in [
            ("p => (q | r)", "p => q | r"),
            ("~p", "~p"),
            ("T", "T"),
            ("(p -> q) -> r", "(p -> q) -> r"),
            ("p -> (q -> r)", "p -> q -> r"),
            ("(p | q) | r", "p | q | r"),
            ("p | (q | r)", "p | (q | r)"),
            ("~(p & q)", "~(p & q)"),
            ("(p => q) => r", "(p => q) => r"),
            ("((p=>q)&(p=>r))<->(p=>(q&r))", "(p => q) & (p => r) <-> p => q & r"),
            ("~~(T=>F) -> (T=>F)", "~~(T => F) -> T => F"),
            ("(p <-> q) <-> r", "(p <-> q) <-> r"),
        ] {
            assert_eq!(print(&parse_cond(src).unwrap()), want, "{src}");
        }
        assert_eq!(print(&parse_modal("[](p -> q) & <>~p").unwrap()), "[](p -> q) & <>~p");
    }
}
