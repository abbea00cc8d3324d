//! The trusted checker.

use super::script::{Justification, Line, Mode, ProofScript};
use super::{rule, scheme, CalcId, Calculus};
use crate::syntax::{Atom, Formula, Meta};
use std::collections::{BTreeSet, HashMap};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept { conclusion: Formula },
    /// `line` is the 1-based script line, or 0 for a problem with the header or premises.
    Reject { line: usize, reason: String },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept { .. })
    }

    fn reject(line: usize, reason: impl Into<String>) -> Verdict {
        Verdict::Reject { line, reason: reason.into() }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept { conclusion } => write!(f, "ACCEPT {conclusion}"),
            Verdict::Reject { line, reason } => write!(f, "REJECT line {line}: {reason}"),
        }
    }
}

/// A checked script that later scripts may cite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LibraryItem {
    pub name: String,
    pub script: ProofScript,
}

impl LibraryItem {
    pub fn calculus(&self) -> CalcId {
        self.script.calculus
    }

    pub fn mode(&self) -> Mode {
        self.script.mode
    }

    pub fn premises(&self) -> &[Formula] {
        &self.script.premises
    }

    pub fn conclusion(&self) -> &Formula {
        self.script.conclusion().expect("checked scripts are nonempty")
    }

    /// Theorems are checked scripts in mode `proof`; the rest are derived rules
    /// or derivations and cannot be cited with `thm`.
    pub fn is_theorem(&self) -> bool {
        self.mode() == Mode::Proof
    }
}

/// Checked scripts, in the order they were added.
#[derive(Clone, Debug, Default)]
pub struct Library {
    items: Vec<LibraryItem>,
    index: HashMap<String, usize>,
}

impl Library {
    pub fn new() -> Self {
        Library::default()
    }

    pub fn get(&self, name: &str) -> Option<&LibraryItem> {
        self.index.get(name).map(|&i| &self.items[i])
    }

    pub fn items(&self) -> &[LibraryItem] {
        &self.items
    }

    /// Checks `script` against the current contents and adds it on success.
    pub fn add(&mut self, name: &str, script: ProofScript) -> Verdict {
        if self.index.contains_key(name) {
            return Verdict::reject(0, format!("`{name}` is already in the library"));
        }
        let v = check(&script, self);
        if v.is_accept() {
            self.index.insert(name.to_string(), self.items.len());
            self.items.push(LibraryItem { name: name.to_string(), script });
        }
        v
    }
}

fn binding_map<K: Clone + Ord + std::hash::Hash + fmt::Display>(
    bindings: &[(String, Formula)],
    key: impl Fn(&str) -> Option<K>,
    expected: &BTreeSet<K>,
    what: &str,
) -> Result<HashMap<K, Formula>, String> {
    let mut out = HashMap::new();
    for (k, v) in bindings {
        let Some(kk) = key(k).filter(|kk| expected.contains(kk)) else {
            return Err(format!("`{k}` is not a {what} of the cited item"));
        };
        if out.insert(kk, v.clone()).is_some() {
            return Err(format!("`{k}` is bound twice"));
        }
    }
    if let Some(missing) = expected.iter().find(|k| !out.contains_key(*k)) {
        return Err(format!("binding for `{missing}` is missing"));
    }
    Ok(out)
}

fn ax_instance(calc: &Calculus, id: &str, bindings: &[(String, Formula)]) -> Result<Formula, String> {
    let s = scheme(id).ok_or_else(|| format!("unknown axiom scheme `{id}`"))?;
    if !calc.has_axiom(id) {
        return Err(format!("axiom `{id}` is not part of {}", calc.id));
    }
    let expected: BTreeSet<Meta> = s.pattern.vars();
    let sigma = binding_map(bindings, Meta::from_name, &expected, "metavariable")?;
    Ok(s.instantiate(&sigma).expect("all metavariables are bound"))
}

/// Resolves a `thm` citation and returns the instantiated statement.
fn thm_instance<'a>(
    calc: &Calculus,
    name: &str,
    bindings: &[(String, Formula)],
    lib: &'a Library,
) -> Result<(&'a LibraryItem, HashMap<Atom, Formula>, Formula), String> {
    let item = lib.get(name).ok_or_else(|| format!("unknown theorem `{name}`"))?;
    if !item.is_theorem() {
        return Err(format!("`{name}` is a {}, not a theorem", item.mode()));
    }
    if !calc.extends(item.calculus().calculus()) {
        return Err(format!("`{name}` belongs to {}, which {} does not extend", item.calculus(), calc.id));
    }
    let expected = item.conclusion().vars();
    let sigma = binding_map(bindings, |s| Some(Atom::new(s)), &expected, "variable")?;
    let inst = item.conclusion().substitute(&sigma);
    Ok((item, sigma, inst))
}

/// Checks a script. Theorem citations resolve against `lib`.
///
/// In mode `derivation`, a rule other than MP may only be applied to lines that
/// do not depend on a premise: those lines are provable formulas.
pub fn check(script: &ProofScript, lib: &Library) -> Verdict {
    let calc = script.calculus.calculus();
    if script.mode == Mode::Proof && !script.premises.is_empty() {
        return Verdict::reject(0, "a proof cannot declare premises");
    }
    for p in &script.premises {
        if !calc.language.admits(p) {
            return Verdict::reject(0, format!("premise `{p}` is outside the language of {}", calc.id));
        }
    }
    if script.lines.is_empty() {
        return Verdict::reject(0, "the script has no lines");
    }
    let mut depends: Vec<bool> = Vec::with_capacity(script.lines.len());
    for (idx, line) in script.lines.iter().enumerate() {
        let n = idx + 1;
        let f = &line.formula;
        if !calc.language.admits(f) {
            return Verdict::reject(n, format!("formula is outside the language of {}", calc.id));
        }
        let earlier = |i: usize| -> Result<&Formula, String> {
            if i >= 1 && i < n {
                Ok(&script.lines[i - 1].formula)
            } else {
                Err(format!("line {i} is not an earlier line"))
            }
        };
        let outcome: Result<bool, String> = (|| match &line.just {
            Justification::Premise(k) => {
                if script.mode == Mode::Proof {
                    return Err("premises are not allowed in a proof".into());
                }
                let p = script
                    .premises
                    .get(k.wrapping_sub(1))
                    .ok_or_else(|| format!("there is no premise {k}"))?;
                if p != f {
                    return Err(format!("premise {k} is `{p}`"));
                }
                Ok(true)
            }
            Justification::Ax { scheme, bindings } => {
                let inst = ax_instance(calc, scheme, bindings)?;
                if &inst != f {
                    return Err(format!("the instance of {scheme} is `{inst}`"));
                }
                Ok(false)
            }
            Justification::Mp(i, j) => mp(f, earlier(*i)?, earlier(*j)?).map(|_| depends[i - 1] || depends[j - 1]),
            Justification::Rule { rule: id, lines } => {
                if id == "MP" {
                    if !calc.has_rule("MP") {
                        return Err(format!("rule MP is not part of {}", calc.id));
                    }
                    let [i, j] = lines.as_slice() else {
                        return Err("MP takes two lines".into());
                    };
                    return mp(f, earlier(*i)?, earlier(*j)?).map(|_| depends[i - 1] || depends[j - 1]);
                }
                let r = rule(id).ok_or_else(|| format!("unknown rule `{id}`"))?;
                if !calc.has_rule(id) {
                    return Err(format!("rule {id} is not part of {}", calc.id));
                }
                let inputs = lines.iter().map(|&i| earlier(i)).collect::<Result<Vec<_>, _>>()?;
                let dep = lines.iter().any(|&i| depends[i - 1]);
                if dep && script.mode == Mode::Derivation {
                    return Err(format!("rule {id} applied to a premise-dependent line in a derivation"));
                }
                if r.apply(&inputs, f).is_none() {
                    return Err(format!("not an application of {id}"));
                }
                Ok(dep)
            }
            Justification::Thm { name, bindings } => {
                let (_, _, inst) = thm_instance(calc, name, bindings, lib)?;
                if &inst != f {
                    return Err(format!("the instance of {name} is `{inst}`"));
                }
                Ok(false)
            }
        })();
        match outcome {
            Ok(d) => depends.push(d),
            Err(reason) => return Verdict::reject(n, reason),
        }
    }
    Verdict::Accept { conclusion: script.lines.last().unwrap().formula.clone() }
}

fn mp(f: &Formula, a: &Formula, ab: &Formula) -> Result<(), String> {
    match ab {
        Formula::Imp(x, y) if **x == *a && **y == *f => Ok(()),
        Formula::Imp(x, _) if **x == *a => Err(format!("`{ab}` does not conclude this line")),
        _ => Err(format!("`{ab}` is not an implication from `{a}`")),
    }
}

/// Applies a substitution of formulas for atoms to every formula of a script:
/// premises, lines, and the values of axiom and theorem bindings.
pub fn substitute_proof(script: &ProofScript, sigma: &HashMap<Atom, Formula>) -> ProofScript {
    let sub = |f: &Formula| f.substitute(sigma);
    let sub_bindings =
        |b: &[(String, Formula)]| b.iter().map(|(k, v)| (k.clone(), sub(v))).collect::<Vec<_>>();
    ProofScript {
        calculus: script.calculus,
        mode: script.mode,
        premises: script.premises.iter().map(sub).collect(),
        lines: script
            .lines
            .iter()
            .map(|l| Line {
                formula: sub(&l.formula),
                just: match &l.just {
                    Justification::Ax { scheme, bindings } => {
                        Justification::Ax { scheme: scheme.clone(), bindings: sub_bindings(bindings) }
                    }
                    Justification::Thm { name, bindings } => {
                        Justification::Thm { name: name.clone(), bindings: sub_bindings(bindings) }
                    }
                    other => other.clone(),
                },
            })
            .collect(),
    }
}

/// Inlines every `thm` line by the cited proof, substituted by the citation's
/// bindings. The result has no theorem citations and checks exactly when the
/// input does.
pub fn elaborate(script: &ProofScript, lib: &Library) -> Result<ProofScript, String> {
    elaborate_where(script, lib, &|_| false)
}

/// Like [`elaborate`], but citations of items satisfying `keep` stay as they are.
pub(crate) fn elaborate_where(
    script: &ProofScript,
    lib: &Library,
    keep: &dyn Fn(&LibraryItem) -> bool,
) -> Result<ProofScript, String> {
    let calc = script.calculus.calculus();
    let mut out = ProofScript {
        calculus: script.calculus,
        mode: script.mode,
        premises: script.premises.clone(),
        lines: Vec::new(),
    };
    let mut map: Vec<usize> = Vec::with_capacity(script.lines.len());
    for (idx, line) in script.lines.iter().enumerate() {
        let n = idx + 1;
        let remap = |i: usize| -> usize {
            if i >= 1 && i < n {
                map[i - 1]
            } else {
                // leave invalid references invalid
                usize::MAX
            }
        };
        if let Justification::Thm { name, bindings } = &line.just {
            let (item, sigma, inst) = thm_instance(calc, name, bindings, lib).map_err(|e| format!("line {n}: {e}"))?;
            if inst != line.formula {
                return Err(format!("line {n}: the instance of {name} is `{inst}`"));
            }
            if !keep(item) {
                let body = elaborate_where(&substitute_proof(&item.script, &sigma), lib, keep)?;
                let base = out.lines.len();
                for l in body.lines {
                    out.lines.push(Line { formula: l.formula, just: l.just.remap(|i| i + base) });
                }
                map.push(out.lines.len());
                continue;
            }
        }
        out.lines.push(Line { formula: line.formula.clone(), just: line.just.remap(remap) });
        map.push(out.lines.len());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::parse_script;
    use crate::syntax::parse_cond;

    fn run(text: &str) -> Verdict {
        check(&parse_script(text).unwrap(), &Library::new())
    }

    #[test]
    fn single_axiom_line() {
        let v = run("calculus INTCK\nmode proof\n1: p => T ; ax A5 phi=p\n");
        assert_eq!(v, Verdict::Accept { conclusion: parse_cond("p => T").unwrap() });
    }

    #[test]
    fn mp_mismatch_is_rejected() {
        let v = run(
            "calculus INTCK\nmode derivation\npremise p\npremise q -> r\n1: p ; pre 1\n2: q -> r ; pre 2\n3: r ; mp 1 2\n",
        );
        assert!(matches!(v, Verdict::Reject { line: 3, .. }), "{v}");
    }

    #[test]
    fn binding_errors() {
        let missing = run("calculus INTCK\nmode proof\n1: p -> q -> p ; ax A0.1 phi=p\n");
        assert!(matches!(missing, Verdict::Reject { line: 1, ref reason } if reason.contains("missing")));
        let extra = run("calculus INTCK\nmode proof\n1: p => T ; ax A5 phi=p psi=q\n");
        assert!(!extra.is_accept());
        let unknown = run("calculus INTCK\nmode proof\n1: p => T ; ax A99 phi=p\n");
        assert!(!unknown.is_accept());
        let wrong_calc = run("calculus CK\nmode proof\n1: ~(p ~> F) ; ax A6 phi=p\n");
        assert!(!wrong_calc.is_accept());
    }

    #[test]
    fn mode_discipline() {
        let text = "calculus INTCK\nmode MODE\npremise p <-> q\n1: p <-> q ; pre 1\n\
                    2: (p => r) <-> (q => r) ; rule RAbox 1\n";
        assert!(!run(&text.replace("MODE", "derivation")).is_accept());
        assert!(run(&text.replace("MODE", "derived_rule")).is_accept());
        assert!(!run(&text.replace("MODE", "proof")).is_accept());
        // provable inputs are fine inside a derivation
        let provable = "calculus INTCK\nmode derivation\n\
                        1: (p => q) & (p => r) <-> (p => q & r) ; ax A1 phi=p psi=q chi=r\n\
                        2: ((p => q) & (p => r) => s) <-> ((p => q & r) => s) ; rule RAbox 1\n";
        assert!(run(provable).is_accept());
    }

    #[test]
    fn dialect_mismatch() {
        let v = run("calculus ICK_W\nmode proof\n1: p ~> q -> p ~> q ; ax A0.1 phi=p psi=q\n");
        assert!(!v.is_accept());
    }

    #[test]
    fn theorem_citation_and_elaboration() {
        let mut lib = Library::new();
        let t = parse_script("calculus INTCK\nmode proof\n1: p => T ; ax A5 phi=p\n").unwrap();
        assert!(lib.add("X", t).is_accept());
        let user = parse_script(
            "calculus INTCK_AX0\nmode proof\n1: (q & r) => T ; thm X p=q & r\n\
             2: ((q & r) => T) -> s -> (q & r) => T ; ax A0.1 phi=(q & r) => T psi=s\n3: s -> (q & r) => T ; mp 1 2\n",
        )
        .unwrap();
        assert!(check(&user, &lib).is_accept());
        let e = elaborate(&user, &lib).unwrap();
        assert!(e.lines.iter().all(|l| !matches!(l.just, Justification::Thm { .. })));
        assert!(check(&e, &lib).is_accept());
        // the cited calculus must be included in the citing one
        let bad = parse_script("calculus CK\nmode proof\n1: q => T ; thm X p=q\n").unwrap();
        assert!(!check(&bad, &lib).is_accept());
        assert!(elaborate(&bad, &lib).is_err());
    }

    #[test]
    fn substitution_rebinds_axioms() {
        let s = parse_script("calculus INTCK\nmode proof\n1: p => T ; ax A5 phi=p\n").unwrap();
        let sigma: HashMap<Atom, Formula> = [(Atom::new("p"), parse_cond("a & b").unwrap())].into();
        let out = substitute_proof(&s, &sigma);
        assert_eq!(
            out.lines[0].just,
            Justification::Ax { scheme: "A5".into(), bindings: vec![("phi".into(), parse_cond("a & b").unwrap())] }
        );
        assert!(check(&out, &Library::new()).is_accept());
        assert_eq!(substitute_proof(&s, &HashMap::new()), s);
    }
}
