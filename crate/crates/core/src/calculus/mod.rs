//! Hilbert-style calculi, a proof-script checker, and a bundled corpus of
//! checked proofs and derived rules.

mod bridge;
mod corpus;
mod kernel;
mod script;
mod tactic;

pub use bridge::{bridge, bridges, port_proof, port_proof_with, AxiomImage, Bridge, PortError, RuleImage, Translation};
pub use corpus::{build_library, standard_library, verify_corpus, CorpusReport};
pub use kernel::{check, elaborate, substitute_proof, Library, LibraryItem, Verdict};
pub use script::{parse_script, Justification, Line, Mode, ProofScript, ScriptError};
pub use tactic::ScriptBuilder;

use crate::syntax::{parse_pattern, Dialect, Formula, Meta, Pattern};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

/// Identifier of one of the bundled calculi.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CalcId {
    Int,
    IntCk,
    IntCkAx0,
    Ck,
    IckW,
    Ik,
}

impl CalcId {
    pub const ALL: [CalcId; 6] = [
        CalcId::Int,
        CalcId::IntCk,
        CalcId::IntCkAx0,
        CalcId::Ck,
        CalcId::IckW,
        CalcId::Ik,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CalcId::Int => "INT",
            CalcId::IntCk => "INTCK",
            CalcId::IntCkAx0 => "INTCK_AX0",
            CalcId::Ck => "CK",
            CalcId::IckW => "ICK_W",
            CalcId::Ik => "IK",
        }
    }

    pub fn calculus(self) -> &'static Calculus {
        registry().iter().find(|c| c.id == self).expect("every id is registered")
    }
}

impl fmt::Display for CalcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CalcId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        CalcId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown calculus `{s}`"))
    }
}

/// The formulas a calculus talks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Language {
    /// No conditional or modal connectives.
    Propositional,
    /// `=>` and `~>`.
    Conditional,
    /// `=>` only.
    BoxConditional,
    /// `[]` and `<>`.
    Modal,
}

impl Language {
    pub fn admits(self, f: &Formula) -> bool {
        match self {
            Language::Propositional => f.is_propositional(),
            Language::Conditional => !f.has_modal(),
            Language::BoxConditional => !f.has_modal() && !f.has_dia_arrow(),
            Language::Modal => f.in_dialect(Dialect::Modal),
        }
    }

    pub fn dialect(self) -> Dialect {
        match self {
            Language::Modal => Dialect::Modal,
            _ => Dialect::Cond,
        }
    }

    fn included_in(self, other: Language) -> bool {
        use Language::*;
        matches!(
            (self, other),
            (Propositional, _)
                | (BoxConditional, BoxConditional | Conditional)
                | (Conditional, Conditional)
                | (Modal, Modal)
        )
    }
}

/// An axiom scheme over the metavariables `phi, psi, chi, theta`.
#[derive(Clone, Debug)]
pub struct Scheme {
    pub id: &'static str,
    pub pattern: Pattern,
    pub dialect: Dialect,
}

impl Scheme {
    pub fn metavariables(&self) -> Vec<Meta> {
        self.pattern.vars().into_iter().collect()
    }

    /// The binding under which the pattern becomes `f`, if any.
    pub fn matches(&self, f: &Formula) -> Option<HashMap<Meta, Formula>> {
        self.pattern.match_pattern(f)
    }

    pub fn instantiate(&self, sigma: &HashMap<Meta, Formula>) -> Option<Formula> {
        self.pattern.instantiate(sigma)
    }
}

/// An inference rule. Metavariables of the conclusion that occur in no premise
/// (such as `chi` in the congruence rules) are bound by the conclusion itself.
#[derive(Clone, Debug)]
pub struct Rule {
    pub id: &'static str,
    pub premises: Vec<Pattern>,
    pub conclusion: Pattern,
}

impl Rule {
    /// Checks one application and returns the full binding on success.
    pub fn apply(&self, premises: &[&Formula], conclusion: &Formula) -> Option<HashMap<Meta, Formula>> {
        if premises.len() != self.premises.len() {
            return None;
        }
        let mut sigma = HashMap::new();
        for (pat, f) in self.premises.iter().zip(premises) {
            if !pat.match_into(f, &mut sigma) {
                return None;
            }
        }
        self.conclusion.match_into(conclusion, &mut sigma).then_some(sigma)
    }
}

#[derive(Clone, Debug)]
pub struct Calculus {
    pub id: CalcId,
    pub axioms: Vec<&'static str>,
    pub rules: Vec<&'static str>,
    pub language: Language,
}

impl Calculus {
    pub fn has_axiom(&self, id: &str) -> bool {
        self.axioms.contains(&id)
    }

    pub fn has_rule(&self, id: &str) -> bool {
        self.rules.contains(&id)
    }

    pub fn dialect(&self) -> Dialect {
        self.language.dialect()
    }

    /// Every axiom, rule and formula of `other` belongs to `self`.
    pub fn extends(&self, other: &Calculus) -> bool {
        other.axioms.iter().all(|a| self.has_axiom(a))
            && other.rules.iter().all(|r| self.has_rule(r))
            && other.language.included_in(self.language)
    }
}

const A0: [&str; 10] = [
    "A0.1", "A0.2", "A0.3", "A0.4", "A0.5", "A0.6", "A0.7", "A0.8", "A0.9", "A0.10",
];

const SCHEMES: &[(&str, &str, Dialect)] = &[
    ("A0.1", "phi -> psi -> phi", Dialect::Cond),
    ("A0.2", "(phi -> psi -> chi) -> (phi -> psi) -> phi -> chi", Dialect::Cond),
    ("A0.3", "phi & psi -> phi", Dialect::Cond),
    ("A0.4", "phi & psi -> psi", Dialect::Cond),
    ("A0.5", "phi -> psi -> phi & psi", Dialect::Cond),
    ("A0.6", "phi -> phi | psi", Dialect::Cond),
    ("A0.7", "psi -> phi | psi", Dialect::Cond),
    ("A0.8", "(phi -> chi) -> (psi -> chi) -> phi | psi -> chi", Dialect::Cond),
    ("A0.9", "F -> phi", Dialect::Cond),
    ("A0.10", "phi -> T", Dialect::Cond),
    ("A1", "(phi => psi) & (phi => chi) <-> (phi => psi & chi)", Dialect::Cond),
    ("A2", "(phi ~> psi) & (phi => chi) -> (phi ~> psi & chi)", Dialect::Cond),
    ("A3", "(phi ~> psi | chi) <-> (phi ~> psi) | (phi ~> chi)", Dialect::Cond),
    ("A4", "((phi ~> psi) -> (phi => chi)) -> (phi => (psi -> chi))", Dialect::Cond),
    ("A5", "phi => T", Dialect::Cond),
    ("A6", "~(phi ~> F)", Dialect::Cond),
    ("Ax0", "phi | ~phi", Dialect::Cond),
    ("Ax1", "(phi ~> psi) <-> ~(phi => ~psi)", Dialect::Cond),
    ("a1", "[](phi -> psi) -> []phi -> []psi", Dialect::Modal),
    ("a2", "[](phi -> psi) -> <>phi -> <>psi", Dialect::Modal),
    ("a3", "~<>F", Dialect::Modal),
    ("a4", "<>(phi | psi) -> <>phi | <>psi", Dialect::Modal),
    ("a5", "(<>phi -> []psi) -> [](phi -> psi)", Dialect::Modal),
];

const RULES: &[(&str, &[&str], &str, Dialect)] = &[
    ("MP", &["phi", "phi -> psi"], "psi", Dialect::Cond),
    ("RAbox", &["phi <-> psi"], "(phi => chi) <-> (psi => chi)", Dialect::Cond),
    ("RCbox", &["phi <-> psi"], "(chi => phi) <-> (chi => psi)", Dialect::Cond),
    ("RAdia", &["phi <-> psi"], "(phi ~> chi) <-> (psi ~> chi)", Dialect::Cond),
    ("RCdia", &["phi <-> psi"], "(chi ~> phi) <-> (chi ~> psi)", Dialect::Cond),
    ("nec", &["phi"], "[]phi", Dialect::Modal),
];

pub fn schemes() -> &'static [Scheme] {
    static CELL: OnceLock<Vec<Scheme>> = OnceLock::new();
    CELL.get_or_init(|| {
        SCHEMES
            .iter()
            .map(|&(id, text, dialect)| Scheme {
                id,
                pattern: parse_pattern(dialect, text).expect("built-in scheme parses"),
                dialect,
            })
            .collect()
    })
}

pub fn scheme(id: &str) -> Option<&'static Scheme> {
    schemes().iter().find(|s| s.id == id)
}

pub fn rules() -> &'static [Rule] {
    static CELL: OnceLock<Vec<Rule>> = OnceLock::new();
    CELL.get_or_init(|| {
        RULES
            .iter()
            .map(|&(id, prem, concl, d)| Rule {
                id,
                premises: prem
                    .iter()
                    .map(|p| parse_pattern(d, p).expect("built-in rule parses"))
                    .collect(),
                conclusion: parse_pattern(d, concl).expect("built-in rule parses"),
            })
            .collect()
    })
}

pub fn rule(id: &str) -> Option<&'static Rule> {
    rules().iter().find(|r| r.id == id)
}

/// Binding of the scheme's metavariables that produces `f`.
pub fn match_scheme(s: &Scheme, f: &Formula) -> Option<HashMap<Meta, Formula>> {
    s.matches(f)
}

/// The six bundled calculi.
///
/// The intuitionistic base `A0.1`–`A0.10` is: K and S for implication, the
/// three conjunction schemes, the three disjunction schemes, ex falso, and
/// `phi -> T`.
pub fn registry() -> &'static [Calculus] {
    static CELL: OnceLock<Vec<Calculus>> = OnceLock::new();
    CELL.get_or_init(|| {
        let with = |extra: &[&'static str]| A0.iter().copied().chain(extra.iter().copied()).collect();
        let conditional_rules = vec!["MP", "RAbox", "RCbox", "RAdia", "RCdia"];
        vec![
            Calculus {
                id: CalcId::Int,
                axioms: with(&[]),
                rules: vec!["MP"],
                language: Language::Propositional,
            },
            Calculus {
                id: CalcId::IntCk,
                axioms: with(&["A1", "A2", "A3", "A4", "A5", "A6"]),
                rules: conditional_rules.clone(),
                language: Language::Conditional,
            },
            Calculus {
                id: CalcId::IntCkAx0,
                axioms: with(&["A1", "A2", "A3", "A4", "A5", "A6", "Ax0"]),
                rules: conditional_rules,
                language: Language::Conditional,
            },
            Calculus {
                id: CalcId::Ck,
                axioms: with(&["A1", "A5", "Ax0", "Ax1"]),
                rules: vec!["MP", "RAbox", "RCbox"],
                language: Language::Conditional,
            },
            Calculus {
                id: CalcId::IckW,
                axioms: with(&["A1", "A5"]),
                rules: vec!["MP", "RAbox", "RCbox"],
                language: Language::BoxConditional,
            },
            Calculus {
                id: CalcId::Ik,
                axioms: with(&["a1", "a2", "a3", "a4", "a5"]),
                rules: vec!["MP", "nec"],
                language: Language::Modal,
            },
        ]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_cond;

    #[test]
    fn intck_inventory() {
        let c = CalcId::IntCk.calculus();
        let mut expected: Vec<&str> = A0.to_vec();
        expected.extend(["A1", "A2", "A3", "A4", "A5", "A6"]);
        assert_eq!(c.axioms, expected);
        assert_eq!(c.rules, vec!["MP", "RAbox", "RCbox", "RAdia", "RCdia"]);
    }

    #[test]
    fn ck_lacks_diamond_axioms_and_rules() {
        let c = CalcId::Ck.calculus();
        for a in ["A2", "A3", "A4", "A6"] {
            assert!(!c.has_axiom(a));
        }
        assert!(!c.has_rule("RAdia") && !c.has_rule("RCdia"));
    }

    #[test]
    fn ickw_language() {
        let c = CalcId::IckW.calculus();
        assert!(!c.language.admits(&parse_cond("p ~> q").unwrap()));
        assert!(c.language.admits(&parse_cond("p => q").unwrap()));
    }

    #[test]
    fn scheme_matching() {
        let a5 = scheme("A5").unwrap();
        let m = match_scheme(a5, &parse_cond("p => T").unwrap()).unwrap();
        assert_eq!(m[&Meta::Phi], parse_cond("p").unwrap());
        let a1 = scheme("A1").unwrap();
        let m = match_scheme(a1, &parse_cond("((p=>q)&(p=>r))<->(p=>(q&r))").unwrap()).unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(m[&Meta::Chi], parse_cond("r").unwrap());
        assert!(match_scheme(a1, &parse_cond("p -> p").unwrap()).is_none());
    }

    #[test]
    fn extension_relation() {
        assert!(CalcId::IntCkAx0.calculus().extends(CalcId::IntCk.calculus()));
        assert!(CalcId::IntCk.calculus().extends(CalcId::Int.calculus()));
        assert!(CalcId::IntCk.calculus().extends(CalcId::IckW.calculus()));
        assert!(!CalcId::Ck.calculus().extends(CalcId::IntCk.calculus()));
        assert!(!CalcId::IntCk.calculus().extends(CalcId::Ik.calculus()));
        assert!(CalcId::Ik.calculus().extends(CalcId::Int.calculus()));
    }

    #[test]
    fn rule_application() {
        let r = rule("RCbox").unwrap();
        let prem = parse_cond("p <-> q").unwrap();
        let concl = parse_cond("(r => p) <-> (r => q)").unwrap();
        assert!(r.apply(&[&prem], &concl).is_some());
        let wrong = parse_cond("(p => r) <-> (q => r)").unwrap();
        assert!(r.apply(&[&prem], &wrong).is_none());
    }
}
