//! The two-sorted first-order language over `{p¹ | p ∈ Var} ∪ {R³, O¹, S¹, In²}`.

use super::formula::Atom;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// An individual variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndVar(Arc<str>);

impl IndVar {
    pub fn new(name: &str) -> Self {
        IndVar(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for IndVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for IndVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for IndVar {
    fn from(s: &str) -> Self {
        IndVar::new(s)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum FoFormula {
    /// `px`
    AtomP(Atom, IndVar),
    /// `Rxyz`
    AtomR(IndVar, IndVar, IndVar),
    /// `Ox`
    AtomO(IndVar),
    /// `Sx`
    AtomS(IndVar),
    /// `Exy`, interpreted by `In`
    AtomE(IndVar, IndVar),
    Eq(IndVar, IndVar),
    Top,
    Bot,
    And(Arc<FoFormula>, Arc<FoFormula>),
    Or(Arc<FoFormula>, Arc<FoFormula>),
    Imp(Arc<FoFormula>, Arc<FoFormula>),
    Forall(IndVar, Arc<FoFormula>),
    Exists(IndVar, Arc<FoFormula>),
}

impl FoFormula {
    pub fn and(l: Self, r: Self) -> Self {
        FoFormula::And(Arc::new(l), Arc::new(r))
    }

    pub fn or(l: Self, r: Self) -> Self {
        FoFormula::Or(Arc::new(l), Arc::new(r))
    }

    pub fn imp(l: Self, r: Self) -> Self {
        FoFormula::Imp(Arc::new(l), Arc::new(r))
    }

    pub fn not(f: Self) -> Self {
        FoFormula::imp(f, FoFormula::Bot)
    }

    pub fn iff(l: Self, r: Self) -> Self {
        FoFormula::and(FoFormula::imp(l.clone(), r.clone()), FoFormula::imp(r, l))
    }

    pub fn forall(x: IndVar, f: Self) -> Self {
        FoFormula::Forall(x, Arc::new(f))
    }

    pub fn exists(x: IndVar, f: Self) -> Self {
        FoFormula::Exists(x, Arc::new(f))
    }

    /// `(∀x)_O φ`, i.e. `∀x(Ox → φ)`.
    pub fn forall_obj(x: IndVar, f: Self) -> Self {
        FoFormula::forall(x.clone(), FoFormula::imp(FoFormula::AtomO(x), f))
    }

    /// Conjunction of a nonempty list, grouped to the left.
    pub fn conj(items: impl IntoIterator<Item = FoFormula>) -> Self {
        let mut it = items.into_iter();
        let first = it.next().unwrap_or(FoFormula::Top);
        it.fold(first, FoFormula::and)
    }

    pub fn free_vars(&self) -> BTreeSet<IndVar> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<IndVar>, out: &mut BTreeSet<IndVar>) {
        let mut add = |v: &IndVar, bound: &Vec<IndVar>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            FoFormula::AtomP(_, x) | FoFormula::AtomO(x) | FoFormula::AtomS(x) => add(x, bound),
            FoFormula::AtomE(x, y) | FoFormula::Eq(x, y) => {
                add(x, bound);
                add(y, bound);
            }
            FoFormula::AtomR(x, y, z) => {
                add(x, bound);
                add(y, bound);
                add(z, bound);
            }
            FoFormula::Top | FoFormula::Bot => {}
            FoFormula::And(l, r) | FoFormula::Or(l, r) | FoFormula::Imp(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            FoFormula::Forall(x, f) | FoFormula::Exists(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Variables occurring as quantifier binders.
    pub fn bound_vars(&self) -> BTreeSet<IndVar> {
        self.binders().into_iter().collect()
    }

    /// Every binder occurrence, in pre-order; repeated entries mean a name is bound twice.
    pub fn binders(&self) -> Vec<IndVar> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let FoFormula::Forall(x, _) | FoFormula::Exists(x, _) = f {
                out.push(x.clone());
            }
        });
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a FoFormula)) {
        f(self);
        match self {
            FoFormula::And(l, r) | FoFormula::Or(l, r) | FoFormula::Imp(l, r) => {
                l.visit(f);
                r.visit(f);
            }
            FoFormula::Forall(_, g) | FoFormula::Exists(_, g) => g.visit(f),
            _ => {}
        }
    }

    fn as_iff(&self) -> Option<(&FoFormula, &FoFormula)> {
        if let FoFormula::And(l, r) = self {
            if let (FoFormula::Imp(a, b), FoFormula::Imp(c, d)) = (&**l, &**r) {
                if a == d && b == c {
                    return Some((a, b));
                }
            }
        }
        None
    }

    fn level(&self) -> u8 {
        if self.as_iff().is_some() {
            return 1;
        }
        match self {
            FoFormula::Imp(_, b) if **b == FoFormula::Bot => 6,
            FoFormula::Imp(..) => 2,
            FoFormula::Or(..) => 4,
            FoFormula::And(..) => 5,
            // quantifiers extend as far right as possible
            FoFormula::Forall(..) | FoFormula::Exists(..) => 0,
            _ => 7,
        }
    }

    fn write_at(&self, out: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.level() < min;
        if paren {
            out.write_str("(")?;
        }
        if let Some((a, b)) = self.as_iff() {
            a.write_at(out, 2)?;
            out.write_str(" <-> ")?;
            b.write_at(out, 2)?;
        } else {
            match self {
                FoFormula::AtomP(p, x) => write!(out, "{p}({x})")?,
                FoFormula::AtomR(x, y, z) => write!(out, "R({x},{y},{z})")?,
                FoFormula::AtomO(x) => write!(out, "O({x})")?,
                FoFormula::AtomS(x) => write!(out, "S({x})")?,
                FoFormula::AtomE(x, y) => write!(out, "E({x},{y})")?,
                FoFormula::Eq(x, y) => write!(out, "{x} = {y}")?,
                FoFormula::Top => out.write_str("T")?,
                FoFormula::Bot => out.write_str("F")?,
                FoFormula::Imp(a, b) if **b == FoFormula::Bot => {
                    out.write_str("~")?;
                    a.write_at(out, 6)?;
                }
                FoFormula::Imp(a, b) => {
                    a.write_at(out, 3)?;
                    out.write_str(" -> ")?;
                    b.write_at(out, 2)?;
                }
                FoFormula::Or(a, b) => {
                    a.write_at(out, 4)?;
                    out.write_str(" | ")?;
                    b.write_at(out, 5)?;
                }
                FoFormula::And(a, b) => {
                    a.write_at(out, 5)?;
                    out.write_str(" & ")?;
                    b.write_at(out, 6)?;
                }
                FoFormula::Forall(x, f) => {
                    write!(out, "forall {x}. ")?;
                    f.write_at(out, 0)?;
                }
                FoFormula::Exists(x, f) => {
                    write!(out, "exists {x}. ")?;
                    f.write_at(out, 0)?;
                }
            }
        }
        if paren {
            out.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for FoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl fmt::Debug for FoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> IndVar {
        IndVar::new(s)
    }

    #[test]
    fn free_variables() {
        assert_eq!(
            FoFormula::AtomE(v("x"), v("y")).free_vars(),
            [v("x"), v("y")].into_iter().collect()
        );
        assert_eq!(
            FoFormula::exists(v("y"), FoFormula::AtomE(v("x"), v("y"))).free_vars(),
            [v("x")].into_iter().collect()
        );
        let closed = FoFormula::forall(v("x"), FoFormula::or(FoFormula::AtomS(v("x")), FoFormula::AtomO(v("x"))));
        assert!(closed.is_sentence());
    }

    #[test]
    fn shadowing_and_reuse() {
        // x is free on the left and bound on the right
        let f = FoFormula::and(
            FoFormula::AtomO(v("x")),
            FoFormula::exists(v("x"), FoFormula::AtomS(v("x"))),
        );
        assert_eq!(f.free_vars(), [v("x")].into_iter().collect());
        assert_eq!(f.bound_vars(), [v("x")].into_iter().collect());
    }

    #[test]
    fn printing() {
        let f = FoFormula::exists(
            v("y"),
            FoFormula::and(
                FoFormula::AtomS(v("y")),
                FoFormula::forall_obj(v("z"), FoFormula::AtomE(v("z"), v("y"))),
            ),
        );
        assert_eq!(f.to_string(), "exists y. S(y) & (forall z. O(z) -> E(z,y))");
        let g = FoFormula::not(FoFormula::not(FoFormula::AtomP(Atom::new("p"), v("x"))));
        assert_eq!(g.to_string(), "~~p(x)");
    }
}
