//! The bundled corpus: derived rules and theorems of the conditional calculi
//! and of IK, each stated over the atoms `p`, `q`, `r` and checked by the kernel.
//!
//! Items are built in order, and later items may cite earlier theorems.

use super::kernel::{Library, Verdict};
use super::script::Mode;
use super::tactic::{ScriptBuilder, StepResult};
use super::CalcId;
use crate::syntax::{parse_cond, parse_modal, Formula, Meta};
use std::fmt;
use std::sync::OnceLock;

type Build = fn(&mut ScriptBuilder) -> Result<(), String>;

struct Entry {
    name: &'static str,
    calc: CalcId,
    mode: Mode,
    build: Build,
}

fn c(s: &str) -> Formula {
    parse_cond(s).unwrap_or_else(|e| panic!("corpus formula `{s}`: {e}"))
}

fn m(s: &str) -> Formula {
    parse_modal(s).unwrap_or_else(|e| panic!("corpus formula `{s}`: {e}"))
}

fn split_imp(f: &Formula) -> (Formula, Formula) {
    match f {
        Formula::Imp(a, b) => ((**a).clone(), (**b).clone()),
        other => panic!("expected an implication, got `{other}`"),
    }
}

fn split_iff(f: &Formula) -> (Formula, Formula) {
    let (a, b) = f.as_iff().unwrap_or_else(|| panic!("expected a biconditional, got `{f}`"));
    (a.clone(), b.clone())
}

/// From a line `a -> b`, derives `(chi => a) -> (chi => b)`.
fn rm_box(b: &mut ScriptBuilder, line: usize, chi: &Formula) -> StepResult {
    let (x, y) = split_imp(b.formula(line));
    let conj = Formula::and(x.clone(), y.clone());
    let eq = b.taut(&[line], Formula::iff(conj.clone(), x.clone()))?;
    let cong = b.rule("RCbox", &[eq], &[(Meta::Chi, chi.clone())])?;
    let a1 = b.axiom("A1", &[(Meta::Phi, chi.clone()), (Meta::Psi, x.clone()), (Meta::Chi, y.clone())])?;
    let goal = Formula::imp(Formula::box_arrow(chi.clone(), x), Formula::box_arrow(chi.clone(), y));
    b.taut(&[cong, a1], goal)
}

/// From a line `a -> b`, derives `(chi ~> a) -> (chi ~> b)`.
fn rm_dia(b: &mut ScriptBuilder, line: usize, chi: &Formula) -> StepResult {
    let (x, y) = split_imp(b.formula(line));
    let disj = Formula::or(x.clone(), y.clone());
    let eq = b.taut(&[line], Formula::iff(disj, y.clone()))?;
    let cong = b.rule("RCdia", &[eq], &[(Meta::Chi, chi.clone())])?;
    let a3 = b.axiom("A3", &[(Meta::Phi, chi.clone()), (Meta::Psi, x.clone()), (Meta::Chi, y.clone())])?;
    let goal = Formula::imp(Formula::dia_arrow(chi.clone(), x), Formula::dia_arrow(chi.clone(), y));
    b.taut(&[cong, a3], goal)
}

/// From a line `a`, derives `chi => a`.
fn nec(b: &mut ScriptBuilder, line: usize, chi: &Formula) -> StepResult {
    let a = b.formula(line).clone();
    let eq = b.taut(&[line], Formula::iff(a.clone(), Formula::Top))?;
    let cong = b.rule("RCbox", &[eq], &[(Meta::Chi, chi.clone())])?;
    let a5 = b.axiom("A5", &[(Meta::Phi, chi.clone())])?;
    b.taut(&[cong, a5], Formula::box_arrow(chi.clone(), a))
}

fn taut_line(b: &mut ScriptBuilder, goal: &str) -> StepResult {
    b.taut(&[], c(goal))
}

fn intck_nec(b: &mut ScriptBuilder) -> Result<(), String> {
    let p = b.premise(c("p"));
    nec(b, p, &c("q"))?;
    Ok(())
}

fn intck_rm_box(b: &mut ScriptBuilder) -> Result<(), String> {
    let p = b.premise(c("p -> q"));
    rm_box(b, p, &c("r"))?;
    Ok(())
}

fn intck_rm_dia(b: &mut ScriptBuilder) -> Result<(), String> {
    let p = b.premise(c("p -> q"));
    rm_dia(b, p, &c("r"))?;
    Ok(())
}

/// `(p => (q -> r)) -> ((p => q) -> (p => r))`, for any calculus with A1 and RCbox.
fn t1(b: &mut ScriptBuilder) -> Result<(), String> {
    let mp = taut_line(b, "q & (q -> r) -> r")?;
    let mono = rm_box(b, mp, &c("p"))?;
    let a1 = b.axiom("A1", &[(Meta::Phi, c("p")), (Meta::Psi, c("q")), (Meta::Chi, c("q -> r"))])?;
    b.taut(&[mono, a1], c("(p => (q -> r)) -> (p => q) -> (p => r)"))?;
    Ok(())
}

fn t2(b: &mut ScriptBuilder) -> Result<(), String> {
    let a2 = b.axiom("A2", &[(Meta::Phi, c("p")), (Meta::Psi, c("q")), (Meta::Chi, c("q -> r"))])?;
    let mp = taut_line(b, "q & (q -> r) -> r")?;
    let mono = rm_dia(b, mp, &c("p"))?;
    b.taut(&[a2, mono], c("(p => (q -> r)) -> (p ~> q) -> (p ~> r)"))?;
    Ok(())
}

fn t3(b: &mut ScriptBuilder) -> Result<(), String> {
    let l = taut_line(b, "q -> (q -> r) -> r")?;
    let mono = rm_box(b, l, &c("p"))?;
    let t2 = b.thm("INTCK/T2", &[("p", c("p")), ("q", c("q -> r")), ("r", c("r"))])?;
    b.taut(&[mono, t2], c("(p => q) -> (p ~> (q -> r)) -> (p ~> r)"))?;
    Ok(())
}

/// `(p => ~q) -> ~(p ~> q)`
fn t4_rl(b: &mut ScriptBuilder) -> Result<(), String> {
    let t2 = b.thm("INTCK/T2", &[("p", c("p")), ("q", c("q")), ("r", c("F"))])?;
    let a6 = b.axiom("A6", &[(Meta::Phi, c("p"))])?;
    b.taut(&[t2, a6], c("(p => ~q) -> ~(p ~> q)"))?;
    Ok(())
}

/// `~(p ~> q) -> (p => ~q)`
fn t4_lr(b: &mut ScriptBuilder) -> Result<(), String> {
    let a4 = b.axiom("A4", &[(Meta::Phi, c("p")), (Meta::Psi, c("q")), (Meta::Chi, c("F"))])?;
    b.taut(&[a4], c("~(p ~> q) -> (p => ~q)"))?;
    Ok(())
}

fn t4(b: &mut ScriptBuilder) -> Result<(), String> {
    let pq = [("p", c("p")), ("q", c("q"))];
    let lr = b.thm("INTCK/T4_lr", &pq)?;
    let rl = b.thm("INTCK/T4_rl", &pq)?;
    b.taut(&[lr, rl], c("~(p ~> q) <-> (p => ~q)"))?;
    Ok(())
}

fn a3_lr(b: &mut ScriptBuilder) -> Result<(), String> {
    let a3 = b.axiom("A3", &[(Meta::Phi, c("p")), (Meta::Psi, c("q")), (Meta::Chi, c("r"))])?;
    b.taut(&[a3], c("(p ~> q | r) -> (p ~> q) | (p ~> r)"))?;
    Ok(())
}

/// `~~(T => F) -> (T => F)`
fn ick_nn(b: &mut ScriptBuilder) -> Result<(), String> {
    let t4 = b.thm("INTCK/T4", &[("p", c("T")), ("q", c("T"))])?;
    let eq = taut_line(b, "~T <-> F")?;
    let cong = b.rule("RCbox", &[eq], &[(Meta::Chi, c("T"))])?;
    let a4 = b.axiom("A4", &[(Meta::Phi, c("T")), (Meta::Psi, c("T")), (Meta::Chi, c("F"))])?;
    b.taut(&[t4, cong, a4], c("~~(T => F) -> (T => F)"))?;
    Ok(())
}

fn ax1(b: &mut ScriptBuilder, phi: &str, psi: &str) -> StepResult {
    b.axiom("Ax1", &[(Meta::Phi, c(phi)), (Meta::Psi, c(psi))])
}

fn ax0(b: &mut ScriptBuilder, phi: &str) -> StepResult {
    b.axiom("Ax0", &[(Meta::Phi, c(phi))])
}

fn ck_a2(b: &mut ScriptBuilder) -> Result<(), String> {
    let d1 = ax1(b, "p", "q")?;
    let d2 = ax1(b, "p", "q & r")?;
    let l = taut_line(b, "r -> ~(q & r) -> ~q")?;
    let mono = rm_box(b, l, &c("p"))?;
    let k = b.thm("CK/T1", &[("p", c("p")), ("q", c("~(q & r)")), ("r", c("~q"))])?;
    b.taut(&[d1, d2, mono, k], c("(p ~> q) & (p => r) -> (p ~> q & r)"))?;
    Ok(())
}

fn ck_a3(b: &mut ScriptBuilder) -> Result<(), String> {
    let d0 = ax1(b, "p", "q | r")?;
    let d1 = ax1(b, "p", "q")?;
    let d2 = ax1(b, "p", "r")?;
    let dm = taut_line(b, "~(q | r) <-> ~q & ~r")?;
    let cong = b.rule("RCbox", &[dm], &[(Meta::Chi, c("p"))])?;
    let a1 = b.axiom("A1", &[(Meta::Phi, c("p")), (Meta::Psi, c("~q")), (Meta::Chi, c("~r"))])?;
    let e1 = ax0(b, "p => ~q")?;
    let e2 = ax0(b, "p => ~r")?;
    b.taut(&[d0, d1, d2, cong, a1, e1, e2], c("(p ~> q | r) <-> (p ~> q) | (p ~> r)"))?;
    Ok(())
}

fn ck_a4(b: &mut ScriptBuilder) -> Result<(), String> {
    let d = ax1(b, "p", "q")?;
    let l1 = taut_line(b, "~q -> q -> r")?;
    let m1 = rm_box(b, l1, &c("p"))?;
    let l2 = taut_line(b, "r -> q -> r")?;
    let m2 = rm_box(b, l2, &c("p"))?;
    let e = ax0(b, "p => ~q")?;
    b.taut(&[d, m1, m2, e], c("((p ~> q) -> (p => r)) -> (p => (q -> r))"))?;
    Ok(())
}

fn ck_a6(b: &mut ScriptBuilder) -> Result<(), String> {
    let d = ax1(b, "p", "F")?;
    let a5 = b.axiom("A5", &[(Meta::Phi, c("p"))])?;
    let eq = taut_line(b, "T <-> ~F")?;
    let cong = b.rule("RCbox", &[eq], &[(Meta::Chi, c("p"))])?;
    b.taut(&[d, a5, cong], c("~(p ~> F)"))?;
    Ok(())
}

fn ck_ra_dia(b: &mut ScriptBuilder) -> Result<(), String> {
    let p = b.premise(c("p <-> q"));
    let cong = b.rule("RAbox", &[p], &[(Meta::Chi, c("~r"))])?;
    let d1 = ax1(b, "p", "r")?;
    let d2 = ax1(b, "q", "r")?;
    b.taut(&[cong, d1, d2], c("(p ~> r) <-> (q ~> r)"))?;
    Ok(())
}

fn ck_rc_dia(b: &mut ScriptBuilder) -> Result<(), String> {
    let p = b.premise(c("p <-> q"));
    let neg = b.taut(&[p], c("~p <-> ~q"))?;
    let cong = b.rule("RCbox", &[neg], &[(Meta::Chi, c("r"))])?;
    let d1 = ax1(b, "r", "p")?;
    let d2 = ax1(b, "r", "q")?;
    b.taut(&[cong, d1, d2], c("(r ~> p) <-> (r ~> q)"))?;
    Ok(())
}

fn intck_ax0_ax1(b: &mut ScriptBuilder) -> Result<(), String> {
    let t4 = b.thm("INTCK/T4", &[("p", c("p")), ("q", c("q"))])?;
    let e = ax0(b, "p ~> q")?;
    b.taut(&[t4, e], c("(p ~> q) <-> ~(p => ~q)"))?;
    Ok(())
}

/// From a line `a -> b`, derives `[]a -> []b` (or `<>a -> <>b` with `a2`).
fn ik_mono(b: &mut ScriptBuilder, line: usize, scheme: &str) -> StepResult {
    let (x, y) = split_imp(b.formula(line));
    let boxed = b.rule("nec", &[line], &[])?;
    let k = b.axiom(scheme, &[(Meta::Phi, x), (Meta::Psi, y)])?;
    b.mp(boxed, k)
}

fn ik_cong(b: &mut ScriptBuilder, line: usize, scheme: &str) -> StepResult {
    let (x, y) = split_iff(b.formula(line));
    let lr = b.taut(&[line], Formula::imp(x.clone(), y.clone()))?;
    let rl = b.taut(&[line], Formula::imp(y.clone(), x.clone()))?;
    let m1 = ik_mono(b, lr, scheme)?;
    let m2 = ik_mono(b, rl, scheme)?;
    let wrap = |f: Formula| if scheme == "a1" { Formula::boxed(f) } else { Formula::dia(f) };
    b.taut(&[m1, m2], Formula::iff(wrap(x), wrap(y)))
}

fn ik_iff_refl(b: &mut ScriptBuilder) -> Result<(), String> {
    b.taut(&[], m("p <-> p"))?;
    Ok(())
}

fn ik_r1(b: &mut ScriptBuilder) -> Result<(), String> {
    let p = b.premise(m("p -> q"));
    ik_mono(b, p, "a1")?;
    Ok(())
}

fn ik_r2(b: &mut ScriptBuilder) -> Result<(), String> {
    let p = b.premise(m("p -> q"));
    ik_mono(b, p, "a2")?;
    Ok(())
}

fn ik_r3(b: &mut ScriptBuilder) -> Result<(), String> {
    let p = b.premise(m("p <-> q"));
    ik_cong(b, p, "a1")?;
    Ok(())
}

fn ik_r4(b: &mut ScriptBuilder) -> Result<(), String> {
    let p = b.premise(m("p <-> q"));
    ik_cong(b, p, "a2")?;
    Ok(())
}

fn ik_t1(b: &mut ScriptBuilder) -> Result<(), String> {
    let l = b.taut(&[], m("p & q -> p"))?;
    let left = ik_mono(b, l, "a1")?;
    let r = b.taut(&[], m("p & q -> q"))?;
    let right = ik_mono(b, r, "a1")?;
    let pair = b.taut(&[], m("p -> q -> p & q"))?;
    let boxed = b.rule("nec", &[pair], &[])?;
    let k1 = b.axiom("a1", &[(Meta::Phi, m("p")), (Meta::Psi, m("q -> p & q"))])?;
    let k2 = b.axiom("a1", &[(Meta::Phi, m("q")), (Meta::Psi, m("p & q"))])?;
    b.taut(&[left, right, boxed, k1, k2], m("[]p & []q <-> [](p & q)"))?;
    Ok(())
}

fn ik_t2(b: &mut ScriptBuilder) -> Result<(), String> {
    let l = b.taut(&[], m("q -> p -> p & q"))?;
    let mono = ik_mono(b, l, "a1")?;
    let k = b.axiom("a2", &[(Meta::Phi, m("p")), (Meta::Psi, m("p & q"))])?;
    b.taut(&[mono, k], m("<>p & []q -> <>(p & q)"))?;
    Ok(())
}

fn ik_t3(b: &mut ScriptBuilder) -> Result<(), String> {
    let a4 = b.axiom("a4", &[(Meta::Phi, m("p")), (Meta::Psi, m("q"))])?;
    let l = b.taut(&[], m("p -> p | q"))?;
    let ml = ik_mono(b, l, "a2")?;
    let r = b.taut(&[], m("q -> p | q"))?;
    let mr = ik_mono(b, r, "a2")?;
    b.taut(&[a4, ml, mr], m("<>(p | q) <-> <>p | <>q"))?;
    Ok(())
}

fn ik_t4(b: &mut ScriptBuilder) -> Result<(), String> {
    let t = b.taut(&[], Formula::Top)?;
    b.rule("nec", &[t], &[])?;
    Ok(())
}

const fn entry(name: &'static str, calc: CalcId, mode: Mode, build: Build) -> Entry {
    Entry { name, calc, mode, build }
}

const ENTRIES: &[Entry] = &[
    entry("INTCK/Nec", CalcId::IntCk, Mode::DerivedRule, intck_nec),
    entry("INTCK/RMbox", CalcId::IntCk, Mode::DerivedRule, intck_rm_box),
    entry("INTCK/RMdia", CalcId::IntCk, Mode::DerivedRule, intck_rm_dia),
    entry("INTCK/T1", CalcId::IntCk, Mode::Proof, t1),
    entry("INTCK/T2", CalcId::IntCk, Mode::Proof, t2),
    entry("INTCK/T3", CalcId::IntCk, Mode::Proof, t3),
    entry("INTCK/T4_lr", CalcId::IntCk, Mode::Proof, t4_lr),
    entry("INTCK/T4_rl", CalcId::IntCk, Mode::Proof, t4_rl),
    entry("INTCK/T4", CalcId::IntCk, Mode::Proof, t4),
    entry("INTCK/A3_lr", CalcId::IntCk, Mode::Proof, a3_lr),
    entry("INTCK/ick_nn", CalcId::IntCk, Mode::Proof, ick_nn),
    entry("CK/T1", CalcId::Ck, Mode::Proof, t1),
    entry("CK/A2", CalcId::Ck, Mode::Proof, ck_a2),
    entry("CK/A3", CalcId::Ck, Mode::Proof, ck_a3),
    entry("CK/A4", CalcId::Ck, Mode::Proof, ck_a4),
    entry("CK/A6", CalcId::Ck, Mode::Proof, ck_a6),
    entry("CK/RAdia", CalcId::Ck, Mode::DerivedRule, ck_ra_dia),
    entry("CK/RCdia", CalcId::Ck, Mode::DerivedRule, ck_rc_dia),
    entry("INTCK_AX0/Ax1", CalcId::IntCkAx0, Mode::Proof, intck_ax0_ax1),
    entry("IK/iff_refl", CalcId::Ik, Mode::Proof, ik_iff_refl),
    entry("IK/r1", CalcId::Ik, Mode::DerivedRule, ik_r1),
    entry("IK/r2", CalcId::Ik, Mode::DerivedRule, ik_r2),
    entry("IK/r3", CalcId::Ik, Mode::DerivedRule, ik_r3),
    entry("IK/r4", CalcId::Ik, Mode::DerivedRule, ik_r4),
    entry("IK/t1", CalcId::Ik, Mode::Proof, ik_t1),
    entry("IK/t2", CalcId::Ik, Mode::Proof, ik_t2),
    entry("IK/t3", CalcId::Ik, Mode::Proof, ik_t3),
    entry("IK/t4", CalcId::Ik, Mode::Proof, ik_t4),
];

/// Outcome of checking every corpus item, in build order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusReport {
    pub entries: Vec<(String, Verdict)>,
}

impl CorpusReport {
    pub fn all_accepted(&self) -> bool {
        self.entries.iter().all(|(_, v)| v.is_accept())
    }
}

impl fmt::Display for CorpusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, v) in &self.entries {
            match v {
                Verdict::Accept { .. } => writeln!(f, "ACCEPT {name}")?,
                Verdict::Reject { line, reason } => writeln!(f, "REJECT {name} line {line}: {reason}")?,
            }
        }
        Ok(())
    }
}

/// Builds and checks the corpus from scratch. Rejected items are reported and
/// left out of the library, so items citing them are rejected too.
pub fn build_library() -> (Library, CorpusReport) {
    let mut lib = Library::new();
    let mut entries = Vec::with_capacity(ENTRIES.len());
    for e in ENTRIES {
        let built = {
            let mut b = ScriptBuilder::new(e.calc, e.mode, &lib);
            (e.build)(&mut b).map(|_| b.finish())
        };
        let verdict = match built {
            Ok(script) => lib.add(e.name, script),
            Err(reason) => Verdict::Reject { line: 0, reason },
        };
        entries.push((e.name.to_string(), verdict));
    }
    (lib, CorpusReport { entries })
}

/// The checked corpus, built once per process.
pub fn standard_library() -> &'static Library {
    static LIB: OnceLock<Library> = OnceLock::new();
    LIB.get_or_init(|| build_library().0)
}

pub fn verify_corpus() -> CorpusReport {
    build_library().1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::check;

    #[test]
    fn every_item_is_accepted() {
        let report = verify_corpus();
        assert!(report.all_accepted(), "{report}");
        assert!(report.entries.len() >= 21);
    }

    #[test]
    fn statements_are_as_named() {
        let lib = standard_library();
        let concl = |n: &str| lib.get(n).unwrap().conclusion().clone();
        assert_eq!(concl("INTCK/T2"), c("(p => (q -> r)) -> (p ~> q) -> (p ~> r)"));
        assert_eq!(concl("INTCK/ick_nn"), c("~~(T => F) -> (T => F)"));
        assert_eq!(concl("IK/t4"), m("[]T"));
        assert_eq!(concl("INTCK/Nec"), c("q => p"));
        assert_eq!(lib.get("INTCK/Nec").unwrap().premises(), &[c("p")]);
        assert_eq!(concl("CK/A4"), c("((p ~> q) -> (p => r)) -> (p => (q -> r))"));
    }

    #[test]
    fn library_scripts_recheck() {
        let lib = standard_library();
        for item in lib.items() {
            assert!(check(&item.script, lib).is_accept(), "{}", item.name);
        }
    }
}
