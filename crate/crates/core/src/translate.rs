//! Syntactic translations between the modal, conditional and first-order
//! languages, and the erasure of conditionals into plain intuitionistic formulas.

use crate::syntax::{Atom, FoFormula, Formula, IndVar};

/// Embeds a modal formula: `□ψ ↦ ⊤ □→ ψ`, `◇ψ ↦ ⊤ ◇→ ψ`.
///
/// Conditional connectives are left untouched, so the map is total on [`Formula`].
pub fn tr(f: &Formula) -> Formula {
    match f {
        Formula::Var(_) | Formula::Top | Formula::Bot => f.clone(),
        Formula::And(a, b) => Formula::and(tr(a), tr(b)),
        Formula::Or(a, b) => Formula::or(tr(a), tr(b)),
        Formula::Imp(a, b) => Formula::imp(tr(a), tr(b)),
        Formula::BoxArrow(a, b) => Formula::box_arrow(tr(a), tr(b)),
        Formula::DiaArrow(a, b) => Formula::dia_arrow(tr(a), tr(b)),
        Formula::Box(a) => Formula::box_arrow(Formula::Top, tr(a)),
        Formula::Dia(a) => Formula::dia_arrow(Formula::Top, tr(a)),
    }
}

/// Left inverse of [`tr`]: conditionals lose their antecedent,
/// `ψ □→ χ ↦ □χ`, `ψ ◇→ χ ↦ ◇χ`.
pub fn untr(f: &Formula) -> Formula {
    match f {
        Formula::Var(_) | Formula::Top | Formula::Bot => f.clone(),
        Formula::And(a, b) => Formula::and(untr(a), untr(b)),
        Formula::Or(a, b) => Formula::or(untr(a), untr(b)),
        Formula::Imp(a, b) => Formula::imp(untr(a), untr(b)),
        Formula::BoxArrow(_, b) => Formula::boxed(untr(b)),
        Formula::DiaArrow(_, b) => Formula::dia(untr(b)),
        Formula::Box(a) => Formula::boxed(untr(a)),
        Formula::Dia(a) => Formula::dia(untr(a)),
    }
}

/// Replaces every `χ □→ θ` by `⊤` and every `χ ◇→ θ` by `⊥`, outermost first.
pub fn project_to_int(f: &Formula) -> Formula {
    match f {
        Formula::BoxArrow(..) => Formula::Top,
        Formula::DiaArrow(..) => Formula::Bot,
        Formula::Var(_) | Formula::Top | Formula::Bot => f.clone(),
        Formula::And(a, b) => Formula::and(project_to_int(a), project_to_int(b)),
        Formula::Or(a, b) => Formula::or(project_to_int(a), project_to_int(b)),
        Formula::Imp(a, b) => Formula::imp(project_to_int(a), project_to_int(b)),
        Formula::Box(a) => Formula::boxed(project_to_int(a)),
        Formula::Dia(a) => Formula::dia(project_to_int(a)),
    }
}

/// Prefix of the reserved namespace for variables introduced by [`st`].
pub const FRESH_PREFIX: &str = "_v";

struct Fresh(usize);

impl Fresh {
    fn next(&mut self) -> IndVar {
        let v = IndVar::new(&format!("{FRESH_PREFIX}{}", self.0));
        self.0 += 1;
        v
    }
}

/// Standard translation of a conditional formula at the individual variable `x`.
///
/// Bound variables come from `_v0, _v1, …`, numbered in order of introduction
/// within this call. Every binder in the output is distinct: the two copies of
/// the antecedent translation inside a biconditional are translated separately.
/// Modal `□`/`◇` are read through [`tr`].
pub fn st(x: &IndVar, f: &Formula) -> FoFormula {
    let mut fresh = Fresh(0);
    st_at(x, f, &mut fresh)
}

fn st_at(x: &IndVar, f: &Formula, fresh: &mut Fresh) -> FoFormula {
    match f {
        Formula::Var(p) => FoFormula::AtomP(p.clone(), x.clone()),
        Formula::Top => FoFormula::Top,
        Formula::Bot => FoFormula::Bot,
        Formula::And(a, b) => FoFormula::and(st_at(x, a, fresh), st_at(x, b, fresh)),
        Formula::Or(a, b) => FoFormula::or(st_at(x, a, fresh), st_at(x, b, fresh)),
        Formula::Imp(a, b) => FoFormula::imp(st_at(x, a, fresh), st_at(x, b, fresh)),
        Formula::BoxArrow(a, b) => conditional(x, a, b, true, fresh),
        Formula::DiaArrow(a, b) => conditional(x, a, b, false, fresh),
        Formula::Box(a) => conditional(x, &Formula::Top, a, true, fresh),
        Formula::Dia(a) => conditional(x, &Formula::Top, a, false, fresh),
    }
}

// ∃y(Sy ∧ (∀z)_O(Ezy ↔ ST_z(ψ)) ∧ Q w(Rxyw ⋆ ST_w(χ)))
fn conditional(
    x: &IndVar,
    antecedent: &Formula,
    consequent: &Formula,
    necessity: bool,
    fresh: &mut Fresh,
) -> FoFormula {
    let y = fresh.next();
    let z = fresh.next();
    let w = fresh.next();
    let e = FoFormula::AtomE(z.clone(), y.clone());
    let forward = FoFormula::imp(e.clone(), st_at(&z, antecedent, fresh));
    let backward = FoFormula::imp(st_at(&z, antecedent, fresh), e);
    let extension = FoFormula::forall_obj(z, FoFormula::and(forward, backward));
    let access = FoFormula::AtomR(x.clone(), y.clone(), w.clone());
    let tail = if necessity {
        FoFormula::forall(w.clone(), FoFormula::imp(access, st_at(&w, consequent, fresh)))
    } else {
        FoFormula::exists(w.clone(), FoFormula::and(access, st_at(&w, consequent, fresh)))
    };
    FoFormula::exists(
        y.clone(),
        FoFormula::conj([FoFormula::AtomS(y), extension, tail]),
    )
}

/// `ST_x(p)`
pub fn st_atom(p: &Atom, x: &IndVar) -> FoFormula {
    FoFormula::AtomP(p.clone(), x.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_cond, parse_modal};

    #[test]
    fn tr_examples() {
        assert_eq!(tr(&parse_modal("[]p").unwrap()), parse_cond("T => p").unwrap());
        assert_eq!(
            tr(&parse_modal("<> (p & q)").unwrap()),
            parse_cond("T ~> (p & q)").unwrap()
        );
        assert_eq!(tr(&parse_modal("p").unwrap()), parse_cond("p").unwrap());
    }

    #[test]
    fn untr_examples() {
        assert_eq!(untr(&parse_cond("p => q").unwrap()), parse_modal("[]q").unwrap());
        let f = parse_modal("<> (p|q)").unwrap();
        assert_eq!(untr(&tr(&f)), f);
        assert_eq!(untr(&parse_cond("p").unwrap()), parse_modal("p").unwrap());
    }

    #[test]
    fn project_examples() {
        assert_eq!(
            project_to_int(&parse_cond("(p => q) -> p").unwrap()),
            parse_cond("T -> p").unwrap()
        );
        assert_eq!(project_to_int(&parse_cond("p ~> q").unwrap()), Formula::Bot);
        assert_eq!(
            project_to_int(&parse_cond("p & q").unwrap()),
            parse_cond("p & q").unwrap()
        );
    }

    #[test]
    fn st_atom_and_box_arrow() {
        let x = IndVar::new("x");
        assert_eq!(st(&x, &parse_cond("p").unwrap()).to_string(), "p(x)");
        let out = st(&x, &parse_cond("p => q").unwrap());
        assert_eq!(
            out.to_string(),
            "exists _v0. S(_v0) & (forall _v1. O(_v1) -> (E(_v1,_v0) <-> p(_v1))) \
             & (forall _v2. R(x,_v0,_v2) -> q(_v2))"
        );
        assert_eq!(out.free_vars(), [x].into_iter().collect());
    }

    #[test]
    fn st_is_deterministic_and_clash_free() {
        let x = IndVar::new("x");
        let f = parse_cond("((p => q) ~> r) => (p ~> (q => r))").unwrap();
        let a = st(&x, &f);
        assert_eq!(a, st(&x, &f));
        let binders = a.binders();
        let distinct: std::collections::BTreeSet<_> = binders.iter().cloned().collect();
        assert_eq!(binders.len(), distinct.len());
        assert!(!distinct.contains(&x));
    }
}
