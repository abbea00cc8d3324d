//! Porting proofs between calculi.
//!
//! A bridge fixes a formula translation and says, for every axiom scheme and
//! rule of the source calculus, how a translated instance is justified in the
//! target: by the same scheme or rule, by another scheme, by a corpus theorem,
//! or by splicing in a corpus derived-rule script.

use super::corpus::standard_library;
use super::kernel::{check, elaborate_where, substitute_proof, Library, LibraryItem, Verdict};
use super::script::{Justification, Line, ProofScript};
use super::{scheme, CalcId};
use crate::syntax::{Atom, Formula, Meta};
use crate::translate::{tr, untr};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Translation {
    Identity,
    /// Modal to conditional: `[]a` becomes `T => a`.
    Tr,
    /// Conditional to modal: `a => b` becomes `[]b`.
    Untr,
}

impl Translation {
    pub fn apply(self, f: &Formula) -> Formula {
        match self {
            Translation::Identity => f.clone(),
            Translation::Tr => tr(f),
            Translation::Untr => untr(f),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxiomImage {
    /// The target has the same scheme.
    Same,
    /// The translated instance is an instance of this target scheme.
    Axiom(&'static str),
    /// The translated instance is an instance of this corpus theorem.
    Thm(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleImage {
    Same,
    /// Splice in this corpus derived-rule script.
    Derived(&'static str),
    /// The translated conclusion is an instance of this corpus theorem.
    Thm(&'static str),
}

#[derive(Clone, Copy, Debug)]
pub struct Bridge {
    pub name: &'static str,
    /// `None` on the identity bridge, which goes from any calculus to itself.
    pub source: Option<CalcId>,
    pub target: Option<CalcId>,
    pub translation: Translation,
    pub axioms: &'static [(&'static str, AxiomImage)],
    pub rules: &'static [(&'static str, RuleImage)],
}

impl Bridge {
    /// Entries not listed map to the same scheme when the target has it.
    pub fn axiom_image(&self, id: &str, target: CalcId) -> Option<AxiomImage> {
        match self.axioms.iter().find(|(k, _)| *k == id) {
            Some(&(_, img)) => Some(img),
            None => target.calculus().has_axiom(id).then_some(AxiomImage::Same),
        }
    }

    pub fn rule_image(&self, id: &str, target: CalcId) -> Option<RuleImage> {
        match self.rules.iter().find(|(k, _)| *k == id) {
            Some(&(_, img)) => Some(img),
            None => target.calculus().has_rule(id).then_some(RuleImage::Same),
        }
    }
}

const INTCK_TO_CK_AXIOMS: &[(&str, AxiomImage)] = &[
    ("A2", AxiomImage::Thm("CK/A2")),
    ("A3", AxiomImage::Thm("CK/A3")),
    ("A4", AxiomImage::Thm("CK/A4")),
    ("A6", AxiomImage::Thm("CK/A6")),
];

const INTCK_TO_CK_RULES: &[(&str, RuleImage)] =
    &[("RAdia", RuleImage::Derived("CK/RAdia")), ("RCdia", RuleImage::Derived("CK/RCdia"))];

const BRIDGES: &[Bridge] = &[
    Bridge {
        name: "identity",
        source: None,
        target: None,
        translation: Translation::Identity,
        axioms: &[],
        rules: &[],
    },
    Bridge {
        name: "intck-to-ck",
        source: Some(CalcId::IntCk),
        target: Some(CalcId::Ck),
        translation: Translation::Identity,
        axioms: INTCK_TO_CK_AXIOMS,
        rules: INTCK_TO_CK_RULES,
    },
    Bridge {
        name: "intckax0-to-ck",
        source: Some(CalcId::IntCkAx0),
        target: Some(CalcId::Ck),
        translation: Translation::Identity,
        axioms: INTCK_TO_CK_AXIOMS,
        rules: INTCK_TO_CK_RULES,
    },
    Bridge {
        name: "ck-to-intckax0",
        source: Some(CalcId::Ck),
        target: Some(CalcId::IntCkAx0),
        translation: Translation::Identity,
        axioms: &[("Ax1", AxiomImage::Thm("INTCK_AX0/Ax1"))],
        rules: &[],
    },
    Bridge {
        name: "ik-to-intck",
        source: Some(CalcId::Ik),
        target: Some(CalcId::IntCk),
        translation: Translation::Tr,
        axioms: &[
            ("a1", AxiomImage::Thm("INTCK/T1")),
            ("a2", AxiomImage::Thm("INTCK/T2")),
            ("a3", AxiomImage::Axiom("A6")),
            ("a4", AxiomImage::Thm("INTCK/A3_lr")),
            ("a5", AxiomImage::Axiom("A4")),
        ],
        rules: &[("nec", RuleImage::Derived("INTCK/Nec"))],
    },
    Bridge {
        name: "intck-to-ik",
        source: Some(CalcId::IntCk),
        target: Some(CalcId::Ik),
        translation: Translation::Untr,
        axioms: &[
            ("A1", AxiomImage::Thm("IK/t1")),
            ("A2", AxiomImage::Thm("IK/t2")),
            ("A3", AxiomImage::Thm("IK/t3")),
            ("A4", AxiomImage::Axiom("a5")),
            ("A5", AxiomImage::Thm("IK/t4")),
            ("A6", AxiomImage::Axiom("a3")),
        ],
        rules: &[
            ("RAbox", RuleImage::Thm("IK/iff_refl")),
            ("RCbox", RuleImage::Derived("IK/r3")),
            ("RAdia", RuleImage::Thm("IK/iff_refl")),
            ("RCdia", RuleImage::Derived("IK/r4")),
        ],
    },
];

pub fn bridges() -> &'static [Bridge] {
    BRIDGES
}

pub fn bridge(name: &str) -> Option<&'static Bridge> {
    BRIDGES.iter().find(|b| b.name == name)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PortError {
    #[error("unknown bridge `{0}`")]
    UnknownBridge(String),
    #[error("bridge `{bridge}` does not go from {source_calc} to {target}")]
    WrongCalculi { bridge: String, source_calc: CalcId, target: CalcId },
    #[error("source script does not check: {0}")]
    SourceRejected(Verdict),
    #[error("bridge `{bridge}` has no entry for `{entry}`")]
    MissingEntry { bridge: String, entry: String },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("ported script does not check: {0}")]
    TargetRejected(Verdict),
}

/// Ports a checked script along a named bridge, citing the standard corpus.
pub fn port_proof(script: &ProofScript, target: CalcId, bridge_name: &str) -> Result<ProofScript, PortError> {
    port_proof_with(script, target, bridge_name, standard_library())
}

fn match_statement(item: &LibraryItem, f: &Formula) -> Option<Vec<(String, Formula)>> {
    let mut sigma: HashMap<Atom, Formula> = HashMap::new();
    if !item.conclusion().match_into(f, &mut sigma) {
        return None;
    }
    let mut out: Vec<(String, Formula)> = sigma.into_iter().map(|(k, v)| (k.as_str().to_string(), v)).collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Some(out)
}

pub fn port_proof_with(
    script: &ProofScript,
    target: CalcId,
    bridge_name: &str,
    lib: &Library,
) -> Result<ProofScript, PortError> {
    let br = bridge(bridge_name).ok_or_else(|| PortError::UnknownBridge(bridge_name.to_string()))?;
    let source = script.calculus;
    let fits = match (br.source, br.target) {
        (Some(s), Some(t)) => s == source && t == target,
        _ => source == target,
    };
    if !fits {
        return Err(PortError::WrongCalculi { bridge: br.name.to_string(), source_calc: source, target });
    }
    let verdict = check(script, lib);
    if !verdict.is_accept() {
        return Err(PortError::SourceRejected(verdict));
    }
    let tcalc = target.calculus();
    let keep =
        |item: &LibraryItem| br.translation == Translation::Identity && tcalc.extends(item.calculus().calculus());
    let flat = elaborate_where(script, lib, &keep).map_err(|message| PortError::Line { line: 0, message })?;

    let t = |f: &Formula| br.translation.apply(f);
    let missing = |entry: &str| PortError::MissingEntry { bridge: br.name.to_string(), entry: entry.to_string() };
    let mut out = ProofScript {
        calculus: target,
        mode: flat.mode,
        premises: flat.premises.iter().map(t).collect(),
        lines: Vec::new(),
    };
    let mut map: Vec<usize> = Vec::with_capacity(flat.lines.len());
    for (idx, line) in flat.lines.iter().enumerate() {
        let n = idx + 1;
        let err = |message: String| PortError::Line { line: n, message };
        let tf = t(&line.formula);
        let m = |i: usize| map[i - 1];
        let thm_line = |name: &str| -> Result<Justification, PortError> {
            let item = lib.get(name).ok_or_else(|| err(format!("corpus item `{name}` is missing")))?;
            let bindings = match_statement(item, &tf)
                .ok_or_else(|| err(format!("`{tf}` is not an instance of {name}")))?;
            Ok(Justification::Thm { name: name.to_string(), bindings })
        };
        let just = match &line.just {
            Justification::Premise(k) => Justification::Premise(*k),
            Justification::Mp(i, j) => Justification::Mp(m(*i), m(*j)),
            Justification::Thm { name, bindings } => Justification::Thm { name: name.clone(), bindings: bindings.clone() },
            Justification::Ax { scheme: id, bindings } => match br.axiom_image(id, target).ok_or_else(|| missing(id))? {
                AxiomImage::Same => Justification::Ax {
                    scheme: id.clone(),
                    bindings: bindings.iter().map(|(k, v)| (k.clone(), t(v))).collect(),
                },
                AxiomImage::Axiom(to) => {
                    let sigma = scheme(to)
                        .and_then(|s| s.matches(&tf))
                        .ok_or_else(|| err(format!("`{tf}` is not an instance of {to}")))?;
                    let mut b: Vec<(Meta, Formula)> = sigma.into_iter().collect();
                    b.sort_by_key(|(k, _)| *k);
                    Justification::Ax {
                        scheme: to.to_string(),
                        bindings: b.into_iter().map(|(k, v)| (k.name().to_string(), v)).collect(),
                    }
                }
                AxiomImage::Thm(name) => thm_line(name)?,
            },
            Justification::Rule { rule: id, lines } => {
                match br.rule_image(id, target).ok_or_else(|| missing(id))? {
                    RuleImage::Same => Justification::Rule { rule: id.clone(), lines: lines.iter().map(|&i| m(i)).collect() },
                    RuleImage::Thm(name) => thm_line(name)?,
                    RuleImage::Derived(name) => {
                        let item = lib.get(name).ok_or_else(|| err(format!("corpus item `{name}` is missing")))?;
                        let inputs: Vec<usize> = lines.iter().map(|&i| m(i)).collect();
                        let mut sigma: HashMap<Atom, Formula> = HashMap::new();
                        let ok = item.premises().len() == inputs.len()
                            && item
                                .premises()
                                .iter()
                                .zip(&inputs)
                                .all(|(p, &i)| p.match_into(&out.lines[i - 1].formula, &mut sigma))
                            && item.conclusion().match_into(&tf, &mut sigma);
                        if !ok {
                            return Err(err(format!("this step is not an application of {name}")));
                        }
                        let body = substitute_proof(&item.script, &sigma);
                        let mut local: Vec<usize> = Vec::with_capacity(body.lines.len());
                        for l in body.lines {
                            if let Justification::Premise(k) = l.just {
                                local.push(inputs[k - 1]);
                                continue;
                            }
                            let just = l.just.remap(|i| local[i - 1]);
                            out.lines.push(Line { formula: l.formula, just });
                            local.push(out.lines.len());
                        }
                        map.push(*local.last().expect("derived rules have lines"));
                        continue;
                    }
                }
            }
        };
        out.lines.push(Line { formula: tf, just });
        map.push(out.lines.len());
    }
    let verdict = check(&out, lib);
    if !verdict.is_accept() {
        return Err(PortError::TargetRejected(verdict));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_cond, parse_modal};

    fn corpus(name: &str) -> ProofScript {
        standard_library().get(name).unwrap().script.clone()
    }

    #[test]
    fn t4_ports_to_ck() {
        let src = corpus("INTCK/T4_lr");
        let out = port_proof(&src, CalcId::Ck, "intck-to-ck").unwrap();
        assert_eq!(out.calculus, CalcId::Ck);
        assert_eq!(out.conclusion(), src.conclusion());
        let full = corpus("INTCK/T4");
        let out = port_proof(&full, CalcId::Ck, "intck-to-ck").unwrap();
        assert_eq!(out.conclusion().unwrap(), &parse_cond("~(p ~> q) <-> (p => ~q)").unwrap());
    }

    #[test]
    fn ik_t2_ports_along_tr() {
        let out = port_proof(&corpus("IK/t2"), CalcId::IntCk, "ik-to-intck").unwrap();
        let want = tr(&parse_modal("<>p & []q -> <>(p & q)").unwrap());
        assert_eq!(out.conclusion().unwrap(), &want);
    }

    #[test]
    fn intck_ports_to_ik_along_untr() {
        for name in ["INTCK/T1", "INTCK/T2", "INTCK/T3", "INTCK/T4", "INTCK/ick_nn"] {
            let src = corpus(name);
            let out = port_proof(&src, CalcId::Ik, "intck-to-ik").unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(out.conclusion().unwrap(), &untr(src.conclusion().unwrap()));
        }
    }

    #[test]
    fn ck_ports_to_intck_ax0() {
        let src = corpus("CK/A4");
        let out = port_proof(&src, CalcId::IntCkAx0, "ck-to-intckax0").unwrap();
        assert_eq!(out.conclusion(), src.conclusion());
    }

    #[test]
    fn identity_keeps_lines() {
        let src = corpus("INTCK/T3");
        let out = port_proof(&src, CalcId::IntCk, "identity").unwrap();
        assert_eq!(out, src);
    }

    #[test]
    fn errors() {
        let src = corpus("INTCK/T1");
        assert!(matches!(port_proof(&src, CalcId::Ck, "nope"), Err(PortError::UnknownBridge(_))));
        assert!(matches!(port_proof(&src, CalcId::Ik, "intck-to-ck"), Err(PortError::WrongCalculi { .. })));
        let mut bad = src.clone();
        bad.lines.pop();
        bad.lines.push(Line { formula: parse_cond("p").unwrap(), just: Justification::Mp(1, 1) });
        assert!(matches!(port_proof(&bad, CalcId::Ck, "intck-to-ck"), Err(PortError::SourceRejected(_))));
        // ICK_W has no bridge entries at all, and CK has no A2
        let a2 = crate::calculus::parse_script(
            "calculus INTCK\nmode proof\n1: (p ~> q) & (p => r) -> (p ~> q & r) ; ax A2 phi=p psi=q chi=r\n",
        )
        .unwrap();
        assert!(port_proof(&a2, CalcId::Ck, "intck-to-ck").is_ok());
        let ax0 = crate::calculus::parse_script("calculus INTCK_AX0\nmode proof\n1: p | ~p ; ax Ax0 phi=p\n").unwrap();
        assert!(port_proof(&ax0, CalcId::IntCkAx0, "identity").is_ok());
    }
}
