//! Formula data model for the conditional, modal and first-order languages:
//! parsing, printing, substitution and variable bookkeeping.

mod fo;
mod formula;
mod parse;
mod print;

pub use fo::{FoFormula, IndVar};
pub use formula::{Atom, CondFormula, Dialect, Formula, Meta, ModalFormula, Pattern};
pub use parse::{parse, parse_cond, parse_modal, parse_pattern, ParseError};
pub use print::print;

use std::collections::{BTreeSet, HashMap};

/// Simultaneous substitution of formulas for variables.
pub fn substitute(f: &Formula, sigma: &HashMap<Atom, Formula>) -> Formula {
    f.substitute(sigma)
}

pub fn fo_free_vars(f: &FoFormula) -> BTreeSet<IndVar> {
    f.free_vars()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma(pairs: &[(&str, &str)]) -> HashMap<Atom, Formula> {
        pairs
            .iter()
            .map(|(a, f)| (Atom::new(a), parse_cond(f).unwrap()))
            .collect()
    }

    #[test]
    fn substitution_into_a1_shape() {
        let body = parse_cond("((a=>b)&(a=>c))<->(a=>(b&c))").unwrap();
        let out = substitute(&body, &sigma(&[("a", "p"), ("b", "q"), ("c", "r")]));
        assert_eq!(out, parse_cond("((p=>q) & (p=>r)) <-> (p=>(q&r))").unwrap());
    }

    #[test]
    fn substitution_is_simultaneous() {
        let f = parse_cond("p -> q").unwrap();
        let out = substitute(&f, &sigma(&[("p", "q"), ("q", "p")]));
        assert_eq!(out, parse_cond("q -> p").unwrap());
    }

    #[test]
    fn identity_substitution() {
        let f = parse_cond("(p => q) ~> ~r").unwrap();
        assert_eq!(substitute(&f, &HashMap::new()), f);
        assert_eq!(substitute(&f, &sigma(&[("p", "p"), ("q", "q")])), f);
    }
}
