use super::eval::{eval_fo, Assignment, FoError};
use super::KripkeSheaf;
use crate::syntax::{Atom, FoFormula, IndVar};

/// One sentence of the theory `Th`, labelled by its family, e.g. `Th9(or)` or `Th6(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThSentence {
    pub label: String,
    pub formula: FoFormula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThFailure {
    pub label: String,
    pub node: String,
}

fn v(name: &str) -> IndVar {
    IndVar::new(name)
}

/// The sentences of `Th`, with the per-variable families `Th3` and `Th6`
/// instantiated once for each of `vars`.
pub fn th_sentences(vars: &[Atom]) -> Vec<ThSentence> {
    use FoFormula as F;
    let (x, y, z, w, u) = (v("x"), v("y"), v("z"), v("w"), v("u"));
    let s = |a: &IndVar| F::AtomS(a.clone());
    let o = |a: &IndVar| F::AtomO(a.clone());
    let e = |a: &IndVar, b: &IndVar| F::AtomE(a.clone(), b.clone());
    let all = |a: &IndVar, f: F| F::forall(a.clone(), f);
    let some = |a: &IndVar, f: F| F::exists(a.clone(), f);
    let sxy = F::and(s(&x), s(&y));
    // ∀x∀y((Sx ∧ Sy) → ∃z(Sz ∧ (∀w)_O(Ewz ↔ body)))
    let closure = |body: F| {
        all(
            &x,
            all(&y, F::imp(sxy.clone(), some(&z, F::and(s(&z), F::forall_obj(w.clone(), F::iff(e(&w, &z), body)))))),
        )
    };

    let mut out = Vec::new();
    let mut push = |label: String, formula: F| out.push(ThSentence { label, formula });
    push("Th1".into(), all(&x, F::or(s(&x), o(&x))));
    push("Th2".into(), all(&x, F::not(F::and(s(&x), o(&x)))));
    for p in vars {
        push(format!("Th3({p})"), all(&x, F::imp(F::AtomP(p.clone(), x.clone()), o(&x))));
    }
    push("Th4".into(), all(&x, all(&y, F::imp(e(&x, &y), F::and(o(&x), s(&y))))));
    push(
        "Th5".into(),
        all(
            &x,
            all(&y, all(&z, F::imp(F::AtomR(x.clone(), y.clone(), z.clone()), F::conj([o(&x), s(&y), o(&z)])))),
        ),
    );
    for p in vars {
        push(
            format!("Th6({p})"),
            some(&x, F::and(s(&x), all(&y, F::iff(e(&y, &x), F::AtomP(p.clone(), y.clone()))))),
        );
    }
    push("Th7".into(), some(&x, F::and(s(&x), F::forall_obj(y.clone(), e(&y, &x)))));
    push("Th8".into(), some(&x, F::and(s(&x), all(&y, F::not(e(&y, &x))))));
    push("Th9(and)".into(), closure(F::and(e(&w, &x), e(&w, &y))));
    push("Th9(or)".into(), closure(F::or(e(&w, &x), e(&w, &y))));
    push("Th9(imp)".into(), closure(F::imp(e(&w, &x), e(&w, &y))));
    let rwxu = F::AtomR(w.clone(), x.clone(), u.clone());
    push("Th10".into(), closure(all(&u, F::imp(rwxu.clone(), e(&u, &y)))));
    push("Th11".into(), closure(some(&u, F::and(rwxu, e(&u, &y)))));
    push(
        "Th12".into(),
        all(
            &x,
            all(
                &y,
                F::imp(
                    F::conj([s(&x), s(&y), F::forall_obj(z.clone(), F::iff(e(&z, &x), e(&z, &y)))]),
                    F::Eq(x.clone(), y.clone()),
                ),
            ),
        ),
    );
    out
}

/// Evaluates every sentence of `th_sentences(vars)` at every node.
pub fn check_th(s: &KripkeSheaf, vars: &[Atom]) -> Result<Vec<ThFailure>, FoError> {
    let mut out = Vec::new();
    for t in th_sentences(vars) {
        for w in 0..s.len() {
            if !eval_fo(s, w, &t.formula, &Assignment::new())? {
                out.push(ThFailure { label: t.label.clone(), node: s.node_name(w).to_string() });
            }
        }
    }
    Ok(out)
}
