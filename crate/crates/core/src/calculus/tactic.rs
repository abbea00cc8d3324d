//! Script construction helpers used to build the bundled corpus.
//!
//! Nothing here is trusted: every script produced goes through the checker.
//! The propositional step `taut` runs a contraction-free sequent prover
//! (Dyckhoff's G4ip), with conditional and modal subformulas as atoms, and
//! compiles the resulting proof into `A0` axiom instances and modus ponens by
//! bracket abstraction over the K and S schemes.

use super::kernel::Library;
use super::script::{Justification, Line, Mode, ProofScript};
use super::{rule, scheme, CalcId};
use crate::syntax::{Atom, Formula, Meta};
use std::collections::HashMap;
use std::rc::Rc;

#[derive(Debug)]
enum Node {
    Var(u32),
    Ax(&'static str, Vec<(Meta, Formula)>),
    /// A formula already present as a script line.
    Known,
    App(Term, Term),
}

/// A combinator term together with the formula it proves.
#[derive(Clone, Debug)]
struct Term(Rc<TermInner>);

#[derive(Debug)]
struct TermInner {
    node: Node,
    ty: Formula,
    /// Free hypothesis variables, sorted.
    fv: Vec<u32>,
}

impl Term {
    fn ty(&self) -> &Formula {
        &self.0.ty
    }

    fn has_var(&self, x: u32) -> bool {
        self.0.fv.binary_search(&x).is_ok()
    }

    fn var(x: u32, ty: Formula) -> Term {
        Term(Rc::new(TermInner { node: Node::Var(x), ty, fv: vec![x] }))
    }

    fn known(ty: Formula) -> Term {
        Term(Rc::new(TermInner { node: Node::Known, ty, fv: Vec::new() }))
    }

    fn ax(id: &'static str, bindings: &[(Meta, Formula)]) -> Term {
        let sigma: HashMap<Meta, Formula> = bindings.iter().cloned().collect();
        let ty = scheme(id)
            .and_then(|s| s.instantiate(&sigma))
            .unwrap_or_else(|| panic!("bad instance of {id}"));
        Term(Rc::new(TermInner { node: Node::Ax(id, bindings.to_vec()), ty, fv: Vec::new() }))
    }

    fn app(f: &Term, a: &Term) -> Term {
        let ty = match f.ty() {
            Formula::Imp(x, y) if **x == *a.ty() => (**y).clone(),
            other => panic!("ill-typed application of `{other}` to `{}`", a.ty()),
        };
        let mut fv = f.0.fv.clone();
        fv.extend(a.0.fv.iter().copied());
        fv.sort_unstable();
        fv.dedup();
        Term(Rc::new(TermInner { node: Node::App(f.clone(), a.clone()), ty, fv }))
    }
}

fn imp(a: &Formula, b: &Formula) -> Formula {
    Formula::imp(a.clone(), b.clone())
}

/// `b -> a -> b`
fn k(b: &Formula, a: &Formula) -> Term {
    Term::ax("A0.1", &[(Meta::Phi, b.clone()), (Meta::Psi, a.clone())])
}

/// `(a -> c -> b) -> (a -> c) -> a -> b`
fn s(a: &Formula, c: &Formula, b: &Formula) -> Term {
    Term::ax("A0.2", &[(Meta::Phi, a.clone()), (Meta::Psi, c.clone()), (Meta::Chi, b.clone())])
}

fn identity(a: &Formula) -> Term {
    let aa = imp(a, a);
    Term::app(&Term::app(&s(a, &aa, a), &k(a, &aa)), &k(a, a))
}

/// Turns a proof of `m` depending on hypothesis `x : a` into a proof of `a -> m`.
fn abs(x: u32, a: &Formula, m: &Term) -> Term {
    if !m.has_var(x) {
        return Term::app(&k(m.ty(), a), m);
    }
    match &m.0.node {
        Node::Var(_) => identity(a),
        Node::App(f, n) => {
            if matches!(n.0.node, Node::Var(y) if y == x) && !f.has_var(x) {
                return f.clone();
            }
            let sab = s(a, n.ty(), m.ty());
            Term::app(&Term::app(&sab, &abs(x, a, f)), &abs(x, a, n))
        }
        _ => unreachable!("closed nodes have no free variables"),
    }
}

fn pair(l: &Term, r: &Term) -> Term {
    let c = Term::ax("A0.5", &[(Meta::Phi, l.ty().clone()), (Meta::Psi, r.ty().clone())]);
    Term::app(&Term::app(&c, l), r)
}

fn split(t: &Term) -> (Term, Term) {
    let Formula::And(a, b) = t.ty() else { unreachable!() };
    let bind = [(Meta::Phi, (**a).clone()), (Meta::Psi, (**b).clone())];
    (Term::app(&Term::ax("A0.3", &bind), t), Term::app(&Term::ax("A0.4", &bind), t))
}

fn inl(t: &Term, other: &Formula) -> Term {
    Term::app(&Term::ax("A0.6", &[(Meta::Phi, t.ty().clone()), (Meta::Psi, other.clone())]), t)
}

fn inr(other: &Formula, t: &Term) -> Term {
    Term::app(&Term::ax("A0.7", &[(Meta::Phi, other.clone()), (Meta::Psi, t.ty().clone())]), t)
}

fn absurd(t: &Term, goal: &Formula) -> Term {
    Term::app(&Term::ax("A0.9", &[(Meta::Phi, goal.clone())]), t)
}

fn top() -> Term {
    let ff = imp(&Formula::Bot, &Formula::Bot);
    Term::app(&Term::ax("A0.10", &[(Meta::Phi, ff)]), &Term::ax("A0.9", &[(Meta::Phi, Formula::Bot)]))
}

fn is_atomic(f: &Formula) -> bool {
    matches!(
        f,
        Formula::Var(_) | Formula::BoxArrow(..) | Formula::DiaArrow(..) | Formula::Box(_) | Formula::Dia(_)
    )
}

struct Prover {
    next_var: u32,
    steps: usize,
    limit: usize,
}

impl Prover {
    fn fresh(&mut self) -> u32 {
        self.next_var += 1;
        self.next_var
    }

    /// Replaces context entries by invertible left rules until none applies.
    /// Returns a proof of the goal outright if the context contains `F`.
    fn saturate(&mut self, ctx: &mut Vec<Term>, goal: &Formula) -> Option<Term> {
        'outer: loop {
            for i in 0..ctx.len() {
                let t = ctx[i].clone();
                match t.ty().clone() {
                    Formula::Bot => return Some(absurd(&t, goal)),
                    Formula::Top => {
                        ctx.remove(i);
                        continue 'outer;
                    }
                    Formula::And(..) => {
                        let (l, r) = split(&t);
                        ctx.remove(i);
                        ctx.push(l);
                        ctx.push(r);
                        continue 'outer;
                    }
                    Formula::Imp(a, _) => match &*a {
                        Formula::Bot => {
                            ctx.remove(i);
                            continue 'outer;
                        }
                        Formula::Top => {
                            ctx[i] = Term::app(&t, &top());
                            continue 'outer;
                        }
                        Formula::And(c, d) => {
                            let (x, y) = (self.fresh(), self.fresh());
                            let body = Term::app(&t, &pair(&Term::var(x, (**c).clone()), &Term::var(y, (**d).clone())));
                            ctx[i] = abs(x, c, &abs(y, d, &body));
                            continue 'outer;
                        }
                        Formula::Or(c, d) => {
                            let (x, y) = (self.fresh(), self.fresh());
                            let left = abs(x, c, &Term::app(&t, &inl(&Term::var(x, (**c).clone()), d)));
                            let right = abs(y, d, &Term::app(&t, &inr(c, &Term::var(y, (**d).clone()))));
                            ctx.remove(i);
                            ctx.push(left);
                            ctx.push(right);
                            continue 'outer;
                        }
                        atom if is_atomic(atom) => {
                            if let Some(h) = ctx.iter().find(|h| h.ty() == atom).cloned() {
                                ctx[i] = Term::app(&t, &h);
                                continue 'outer;
                            }
                        }
                        _ => {}
                    },
                    _ => {}
                }
            }
            // drop duplicates, keeping the first proof of each formula
            let mut seen = std::collections::HashSet::new();
            ctx.retain(|t| seen.insert(t.ty().clone()));
            return None;
        }
    }

    fn prove(&mut self, mut ctx: Vec<Term>, goal: &Formula) -> Option<Term> {
        self.steps += 1;
        if self.steps > self.limit {
            return None;
        }
        if let Some(t) = self.saturate(&mut ctx, goal) {
            return Some(t);
        }
        match goal {
            Formula::Top => return Some(top()),
            Formula::And(a, b) => {
                let l = self.prove(ctx.clone(), a)?;
                let r = self.prove(ctx, b)?;
                return Some(pair(&l, &r));
            }
            Formula::Imp(a, b) => {
                let x = self.fresh();
                ctx.push(Term::var(x, (**a).clone()));
                let m = self.prove(ctx, b)?;
                return Some(abs(x, a, &m));
            }
            _ => {}
        }
        if let Some(t) = ctx.iter().find(|t| t.ty() == goal) {
            return Some(t.clone());
        }
        // disjunction on the left is invertible
        if let Some(i) = ctx.iter().position(|t| matches!(t.ty(), Formula::Or(..))) {
            let t = ctx.remove(i);
            let Formula::Or(a, b) = t.ty().clone() else { unreachable!() };
            let (x, y) = (self.fresh(), self.fresh());
            let mut lctx = ctx.clone();
            lctx.push(Term::var(x, (*a).clone()));
            let l = self.prove(lctx, goal)?;
            ctx.push(Term::var(y, (*b).clone()));
            let r = self.prove(ctx, goal)?;
            let case = Term::ax(
                "A0.8",
                &[(Meta::Phi, (*a).clone()), (Meta::Psi, (*b).clone()), (Meta::Chi, goal.clone())],
            );
            return Some(Term::app(&Term::app(&Term::app(&case, &abs(x, &a, &l)), &abs(y, &b, &r)), &t));
        }
        if let Formula::Or(a, b) = goal {
            if let Some(l) = self.prove(ctx.clone(), a) {
                return Some(inl(&l, b));
            }
            if let Some(r) = self.prove(ctx.clone(), b) {
                return Some(inr(a, &r));
            }
        }
        for i in 0..ctx.len() {
            let t = ctx[i].clone();
            let Formula::Imp(cd, _) = t.ty().clone() else { continue };
            let Formula::Imp(c, d) = &*cd else { continue };
            // premise: Γ, d -> b ⊢ c -> d, using λy. t (λz. y)
            let y = self.fresh();
            let z = self.fresh();
            let inner = abs(z, c, &Term::var(y, (**d).clone()));
            let shortcut = abs(y, d, &Term::app(&t, &inner));
            let mut first = ctx.clone();
            first[i] = shortcut;
            let Some(m) = self.prove(first, &cd) else { continue };
            let mut second = ctx.clone();
            second[i] = Term::app(&t, &m);
            if let Some(r) = self.prove(second, goal) {
                return Some(r);
            }
        }
        None
    }
}

const STEP_LIMIT: usize = 200_000;

fn prove_term(hyps: Vec<Term>, goal: &Formula) -> Option<Term> {
    let mut p = Prover { next_var: 0, steps: 0, limit: STEP_LIMIT };
    p.prove(hyps, goal)
}

/// Incrementally assembles a proof script, reusing any line whose formula was
/// already derived.
pub struct ScriptBuilder<'a> {
    script: ProofScript,
    lib: &'a Library,
    index: HashMap<Formula, usize>,
    /// Line returned by the most recent step; `finish` makes it the conclusion.
    last: usize,
}

pub type StepResult = Result<usize, String>;

fn meta_bindings(bindings: &[(Meta, Formula)]) -> Vec<(String, Formula)> {
    let mut v: Vec<(Meta, Formula)> = bindings.to_vec();
    v.sort_by_key(|(m, _)| *m);
    v.into_iter().map(|(m, f)| (m.name().to_string(), f)).collect()
}

impl<'a> ScriptBuilder<'a> {
    pub fn new(calculus: CalcId, mode: Mode, lib: &'a Library) -> Self {
        ScriptBuilder { script: ProofScript::new(calculus, mode), lib, index: HashMap::new(), last: 0 }
    }

    pub fn calculus(&self) -> CalcId {
        self.script.calculus
    }

    /// Formula on a (1-based) line.
    pub fn formula(&self, line: usize) -> &Formula {
        &self.script.lines[line - 1].formula
    }

    fn push(&mut self, formula: Formula, just: Justification) -> usize {
        if let Some(&n) = self.index.get(&formula) {
            self.last = n;
            return n;
        }
        self.script.lines.push(Line { formula: formula.clone(), just });
        let n = self.script.lines.len();
        self.index.insert(formula, n);
        self.last = n;
        n
    }

    /// Declares a premise and returns the line that states it.
    pub fn premise(&mut self, f: Formula) -> usize {
        self.script.premises.push(f.clone());
        let k = self.script.premises.len();
        self.script.lines.push(Line { formula: f.clone(), just: Justification::Premise(k) });
        let n = self.script.lines.len();
        self.index.insert(f, n);
        self.last = n;
        n
    }

    pub fn axiom(&mut self, id: &str, bindings: &[(Meta, Formula)]) -> StepResult {
        let s = scheme(id).ok_or_else(|| format!("unknown scheme {id}"))?;
        let sigma: HashMap<Meta, Formula> = bindings.iter().cloned().collect();
        let f = s.instantiate(&sigma).ok_or_else(|| format!("unbound metavariable in {id}"))?;
        Ok(self.push(f, Justification::Ax { scheme: id.to_string(), bindings: meta_bindings(bindings) }))
    }

    /// Modus ponens from `a` and `a -> b`.
    pub fn mp(&mut self, a: usize, ab: usize) -> StepResult {
        match self.formula(ab) {
            Formula::Imp(x, y) if **x == *self.formula(a) => {
                let f = (**y).clone();
                Ok(self.push(f, Justification::Mp(a, ab)))
            }
            other => Err(format!("mp: `{other}` does not fit `{}`", self.formula(a))),
        }
    }

    /// Applies a rule; `free` binds conclusion metavariables absent from the premises.
    pub fn rule(&mut self, id: &str, lines: &[usize], free: &[(Meta, Formula)]) -> StepResult {
        let r = rule(id).ok_or_else(|| format!("unknown rule {id}"))?;
        let mut sigma: HashMap<Meta, Formula> = free.iter().cloned().collect();
        for (pat, &l) in r.premises.iter().zip(lines) {
            if !pat.match_into(self.formula(l), &mut sigma) {
                return Err(format!("rule {id}: line {l} does not match"));
            }
        }
        let f = r.conclusion.instantiate(&sigma).ok_or_else(|| format!("rule {id}: unbound metavariable"))?;
        Ok(self.push(f, Justification::Rule { rule: id.to_string(), lines: lines.to_vec() }))
    }

    /// Cites a library theorem under a substitution of its atoms.
    pub fn thm(&mut self, name: &str, bindings: &[(&str, Formula)]) -> StepResult {
        let item = self.lib.get(name).ok_or_else(|| format!("unknown theorem {name}"))?;
        let sigma: HashMap<Atom, Formula> = bindings.iter().map(|(k, v)| (Atom::new(k), v.clone())).collect();
        let f = item.conclusion().substitute(&sigma);
        let mut b: Vec<(String, Formula)> = bindings.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        b.sort_by(|x, y| x.0.cmp(&y.0));
        Ok(self.push(f, Justification::Thm { name: name.to_string(), bindings: b }))
    }

    /// Derives `goal` from the given lines by propositional reasoning, treating
    /// conditional and modal subformulas as atoms. Calculi with excluded middle
    /// may also use up to three of its instances over atomic subformulas.
    pub fn taut(&mut self, hyps: &[usize], goal: Formula) -> StepResult {
        if let Some(&n) = self.index.get(&goal) {
            self.last = n;
            return Ok(n);
        }
        let ctx: Vec<Term> = hyps.iter().map(|&l| Term::known(self.formula(l).clone())).collect();
        if let Some(t) = prove_term(ctx.clone(), &goal) {
            return Ok(self.emit(&t));
        }
        if self.script.calculus.calculus().has_axiom("Ax0") {
            let mut atoms = Vec::new();
            let mut collect = |f: &Formula| {
                f.visit(&mut |g| {
                    if is_atomic(g) && !atoms.contains(g) {
                        atoms.push(g.clone());
                    }
                })
            };
            collect(&goal);
            for t in &ctx {
                collect(t.ty());
            }
            let em = |a: &Formula| Term::ax("Ax0", &[(Meta::Phi, a.clone())]);
            for size in 1..=3usize.min(atoms.len()) {
                for combo in combinations(atoms.len(), size) {
                    let mut c = ctx.clone();
                    c.extend(combo.iter().map(|&i| em(&atoms[i])));
                    if let Some(t) = prove_term(c, &goal) {
                        return Ok(self.emit(&t));
                    }
                }
            }
        }
        Err(format!("taut: could not derive `{goal}`"))
    }

    fn emit(&mut self, t: &Term) -> usize {
        if let Some(&n) = self.index.get(t.ty()) {
            self.last = n;
            return n;
        }
        match &t.0.node {
            Node::Var(_) => unreachable!("emitted terms are closed"),
            Node::Known => unreachable!("known formulas are indexed"),
            Node::Ax(id, b) => self.axiom(id, b).expect("prover builds valid instances"),
            Node::App(f, a) => {
                let la = self.emit(a);
                let lf = self.emit(f);
                self.mp(la, lf).expect("prover builds well-typed applications")
            }
        }
    }

    /// The script, ending with the result of the most recent step.
    pub fn finish(mut self) -> ProofScript {
        let len = self.script.lines.len();
        if self.last != 0 && self.last != len {
            let line = self.script.lines[self.last - 1].clone();
            self.script.lines.push(line);
        }
        self.script
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::check;
    use crate::syntax::parse_cond;

    fn prove_closed(calc: CalcId, goal: &str) -> Option<ProofScript> {
        let lib = Library::new();
        let mut b = ScriptBuilder::new(calc, Mode::Proof, &lib);
        b.taut(&[], parse_cond(goal).unwrap()).ok()?;
        Some(b.finish())
    }

    #[test]
    fn intuitionistic_tautologies_check() {
        for g in [
            "p -> p",
            "p & q -> q & p",
            "p | q -> q | p",
            "(p -> q) -> (q -> r) -> p -> r",
            "~~(p | ~p)",
            "((p -> q) -> p) -> ~~p",
            "(p <-> q) -> (q <-> p)",
            "T",
            "F -> (p => q)",
            "(p => q) & (p ~> r) -> (p ~> r) & (p => q)",
            "~(p | q) <-> ~p & ~q",
        ] {
            let s = prove_closed(CalcId::IntCk, g).unwrap_or_else(|| panic!("no proof of {g}"));
            let v = check(&s, &Library::new());
            assert!(v.is_accept(), "{g}: {v}\n{s}");
            assert_eq!(s.conclusion().unwrap(), &parse_cond(g).unwrap());
        }
    }

    #[test]
    fn classical_principles_need_excluded_middle() {
        assert!(prove_closed(CalcId::IntCk, "p | ~p").is_none());
        assert!(prove_closed(CalcId::IntCk, "~~p -> p").is_none());
        let s = prove_closed(CalcId::Ck, "~~(p => q) -> (p => q)").unwrap();
        assert!(check(&s, &Library::new()).is_accept());
        let s = prove_closed(CalcId::Ck, "((p -> q) -> p) -> p").unwrap();
        assert!(check(&s, &Library::new()).is_accept());
    }

    #[test]
    fn hypotheses_and_dedup() {
        let lib = Library::new();
        let mut b = ScriptBuilder::new(CalcId::IntCk, Mode::DerivedRule, &lib);
        let p = b.premise(parse_cond("p & q").unwrap());
        let l = b.taut(&[p], parse_cond("q").unwrap()).unwrap();
        assert_eq!(b.taut(&[p], parse_cond("q").unwrap()).unwrap(), l);
        let s = b.finish();
        assert!(check(&s, &lib).is_accept());
    }
}
