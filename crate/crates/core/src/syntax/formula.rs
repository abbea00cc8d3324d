use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

/// Name of a propositional variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(name: &str) -> Self {
        Atom(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// `[a-z][a-zA-Z0-9_]*`
    pub fn is_valid_name(name: &str) -> bool {
        let mut chars = name.chars();
        matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Self {
        Atom::new(s)
    }
}

/// Propositional formula over the conditional (`=>`, `~>`) and modal (`[]`, `<>`)
/// connectives.
///
/// The leaf type is generic so that the same tree shape serves both object
/// formulas (`Formula<Atom>`) and axiom-scheme patterns (`Formula<Meta>`).
/// Negation and the biconditional are abbreviations and have no constructor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Formula<A = Atom> {
    Var(A),
    Top,
    Bot,
    And(Arc<Formula<A>>, Arc<Formula<A>>),
    Or(Arc<Formula<A>>, Arc<Formula<A>>),
    Imp(Arc<Formula<A>>, Arc<Formula<A>>),
    /// Conditional necessity `φ □→ ψ`, written `=>`.
    BoxArrow(Arc<Formula<A>>, Arc<Formula<A>>),
    /// Conditional possibility `φ ◇→ ψ`, written `~>`.
    DiaArrow(Arc<Formula<A>>, Arc<Formula<A>>),
    Box(Arc<Formula<A>>),
    Dia(Arc<Formula<A>>),
}

/// A formula of the conditional language.
pub type CondFormula = Formula<Atom>;
/// A formula of the modal language.
pub type ModalFormula = Formula<Atom>;

/// Which surface language a formula belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dialect {
    /// `⊤ ⊥ ∧ ∨ → □→ ◇→`
    Cond,
    /// `⊤ ⊥ ∧ ∨ → □ ◇`
    Modal,
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dialect::Cond => "cond",
            Dialect::Modal => "modal",
        })
    }
}

impl<A> Formula<A> {
    pub fn var(a: impl Into<A>) -> Self {
        Formula::Var(a.into())
    }

    pub fn and(l: Self, r: Self) -> Self {
        Formula::And(Arc::new(l), Arc::new(r))
    }

    pub fn or(l: Self, r: Self) -> Self {
        Formula::Or(Arc::new(l), Arc::new(r))
    }

    pub fn imp(l: Self, r: Self) -> Self {
        Formula::Imp(Arc::new(l), Arc::new(r))
    }

    pub fn box_arrow(l: Self, r: Self) -> Self {
        Formula::BoxArrow(Arc::new(l), Arc::new(r))
    }

    pub fn dia_arrow(l: Self, r: Self) -> Self {
        Formula::DiaArrow(Arc::new(l), Arc::new(r))
    }

    pub fn boxed(f: Self) -> Self {
        Formula::Box(Arc::new(f))
    }

    pub fn dia(f: Self) -> Self {
        Formula::Dia(Arc::new(f))
    }

    /// `φ → ⊥`
    pub fn not(f: Self) -> Self {
        Formula::imp(f, Formula::Bot)
    }

    /// `(φ → ψ) ∧ (ψ → φ)`
    pub fn iff(l: Self, r: Self) -> Self
    where
        A: Clone,
    {
        Formula::and(Formula::imp(l.clone(), r.clone()), Formula::imp(r, l))
    }

    /// Recognizes the `(φ → ψ) ∧ (ψ → φ)` abbreviation.
    pub fn as_iff(&self) -> Option<(&Formula<A>, &Formula<A>)>
    where
        A: PartialEq,
    {
        if let Formula::And(l, r) = self {
            if let (Formula::Imp(a, b), Formula::Imp(c, d)) = (&**l, &**r) {
                if a == d && b == c {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Recognizes the `φ → ⊥` abbreviation.
    pub fn as_not(&self) -> Option<&Formula<A>> {
        match self {
            Formula::Imp(a, b) if matches!(**b, Formula::Bot) => Some(a),
            _ => None,
        }
    }

    pub fn children(&self) -> Vec<&Formula<A>> {
        match self {
            Formula::Var(_) | Formula::Top | Formula::Bot => vec![],
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Imp(l, r)
            | Formula::BoxArrow(l, r)
            | Formula::DiaArrow(l, r) => vec![l, r],
            Formula::Box(f) | Formula::Dia(f) => vec![f],
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Visits every subformula occurrence, outermost first.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula<A>)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    pub fn any(&self, pred: &impl Fn(&Formula<A>) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.any(pred))
    }

    pub fn has_box_arrow(&self) -> bool {
        self.any(&|f| matches!(f, Formula::BoxArrow(..)))
    }

    pub fn has_dia_arrow(&self) -> bool {
        self.any(&|f| matches!(f, Formula::DiaArrow(..)))
    }

    pub fn has_modal(&self) -> bool {
        self.any(&|f| matches!(f, Formula::Box(_) | Formula::Dia(_)))
    }

    pub fn is_propositional(&self) -> bool {
        !self.any(&|f| {
            matches!(
                f,
                Formula::BoxArrow(..) | Formula::DiaArrow(..) | Formula::Box(_) | Formula::Dia(_)
            )
        })
    }

    pub fn in_dialect(&self, d: Dialect) -> bool {
        match d {
            Dialect::Cond => !self.has_modal(),
            Dialect::Modal => !self.has_box_arrow() && !self.has_dia_arrow(),
        }
    }

    /// Replaces every leaf through `f`, keeping the connective structure.
    pub fn map_vars<B>(&self, f: &mut impl FnMut(&A) -> Formula<B>) -> Formula<B> {
        match self {
            Formula::Var(a) => f(a),
            Formula::Top => Formula::Top,
            Formula::Bot => Formula::Bot,
            Formula::And(l, r) => Formula::and(l.map_vars(f), r.map_vars(f)),
            Formula::Or(l, r) => Formula::or(l.map_vars(f), r.map_vars(f)),
            Formula::Imp(l, r) => Formula::imp(l.map_vars(f), r.map_vars(f)),
            Formula::BoxArrow(l, r) => Formula::box_arrow(l.map_vars(f), r.map_vars(f)),
            Formula::DiaArrow(l, r) => Formula::dia_arrow(l.map_vars(f), r.map_vars(f)),
            Formula::Box(g) => Formula::boxed(g.map_vars(f)),
            Formula::Dia(g) => Formula::dia(g.map_vars(f)),
        }
    }
}

impl<A: Clone + Ord> Formula<A> {
    pub fn vars(&self) -> BTreeSet<A> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Var(a) = f {
                out.insert(a.clone());
            }
        });
        out
    }
}

impl<A: Clone + Eq + Hash> Formula<A> {
    /// Simultaneous substitution; unmapped variables stay fixed.
    pub fn substitute(&self, sigma: &HashMap<A, Formula<A>>) -> Formula<A> {
        self.map_vars(&mut |a| sigma.get(a).cloned().unwrap_or_else(|| Formula::Var(a.clone())))
    }

    /// Instantiates a pattern; every leaf must be bound.
    pub fn instantiate<B: Clone>(&self, sigma: &HashMap<A, Formula<B>>) -> Option<Formula<B>> {
        let mut missing = false;
        let out = self.map_vars(&mut |a| match sigma.get(a) {
            Some(f) => f.clone(),
            None => {
                missing = true;
                Formula::Top
            }
        });
        (!missing).then_some(out)
    }

    /// Extends `sigma` so that `self` instantiated by it equals `target`.
    /// Repeated leaves must match equal subtrees. On failure `sigma` may hold
    /// partial bindings.
    pub fn match_into<B: Clone + PartialEq>(
        &self,
        target: &Formula<B>,
        sigma: &mut HashMap<A, Formula<B>>,
    ) -> bool {
        use Formula::*;
        match (self, target) {
            (Var(a), t) => match sigma.get(a) {
                Some(bound) => bound == t,
                None => {
                    sigma.insert(a.clone(), t.clone());
                    true
                }
            },
            (Top, Top) | (Bot, Bot) => true,
            (And(a, b), And(c, d))
            | (Or(a, b), Or(c, d))
            | (Imp(a, b), Imp(c, d))
            | (BoxArrow(a, b), BoxArrow(c, d))
            | (DiaArrow(a, b), DiaArrow(c, d)) => a.match_into(c, sigma) && b.match_into(d, sigma),
            (Box(a), Box(c)) | (Dia(a), Dia(c)) => a.match_into(c, sigma),
            _ => false,
        }
    }

    pub fn match_pattern<B: Clone + PartialEq>(
        &self,
        target: &Formula<B>,
    ) -> Option<HashMap<A, Formula<B>>> {
        let mut sigma = HashMap::new();
        self.match_into(target, &mut sigma).then_some(sigma)
    }
}

impl<A: fmt::Display + PartialEq> fmt::Display for Formula<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        super::print::write_formula(f, self)
    }
}

impl<A: fmt::Display + PartialEq> fmt::Debug for Formula<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

/// Metavariables of axiom schemes and rule patterns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Meta {
    Phi,
    Psi,
    Chi,
    Theta,
}

impl Meta {
    pub const ALL: [Meta; 4] = [Meta::Phi, Meta::Psi, Meta::Chi, Meta::Theta];

    pub fn name(self) -> &'static str {
        match self {
            Meta::Phi => "phi",
            Meta::Psi => "psi",
            Meta::Chi => "chi",
            Meta::Theta => "theta",
        }
    }

    pub fn from_name(s: &str) -> Option<Meta> {
        Meta::ALL.into_iter().find(|m| m.name() == s)
    }
}

impl fmt::Display for Meta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A scheme or rule pattern.
pub type Pattern = Formula<Meta>;
