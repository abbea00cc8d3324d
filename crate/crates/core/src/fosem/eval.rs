use super::KripkeSheaf;
use crate::syntax::{FoFormula, IndVar};
use std::borrow::Cow;
use std::collections::BTreeMap;
use thiserror::Error;

/// Values of individual variables, as element indices of one node's domain.
pub type Assignment = BTreeMap<IndVar, usize>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FoError {
    #[error("unknown node {0}")]
    UnknownNode(usize),
    #[error("free variable `{0}` has no value")]
    Unbound(IndVar),
    #[error("`{var}` is assigned element {element}, outside the domain")]
    OutOfDomain { var: IndVar, element: usize },
    #[error("no total map from node `{from}` to node `{to}`")]
    MissingTransition { from: String, to: String },
}

/// Intuitionistic satisfaction at `node` under `f`.
///
/// `∃` looks at the current domain only, while `→` and `∀` look at every
/// node above, with the assignment carried along the transition maps.
pub fn eval_fo(s: &KripkeSheaf, node: usize, phi: &FoFormula, f: &Assignment) -> Result<bool, FoError> {
    if node >= s.len() {
        return Err(FoError::UnknownNode(node));
    }
    for x in phi.free_vars() {
        match f.get(&x) {
            None => return Err(FoError::Unbound(x)),
            Some(&a) if a >= s.domain(node).len() => return Err(FoError::OutOfDomain { var: x, element: a }),
            Some(_) => {}
        }
    }
    Eval { s }.holds(node, phi, f)
}

struct Eval<'a> {
    s: &'a KripkeSheaf,
}

impl Eval<'_> {
    fn transport<'f>(&self, w: usize, v: usize, f: &'f Assignment) -> Result<Cow<'f, Assignment>, FoError> {
        if w == v {
            return Ok(Cow::Borrowed(f));
        }
        f.iter()
            .map(|(x, &a)| {
                self.s.image(w, v, a).map(|b| (x.clone(), b)).ok_or_else(|| FoError::MissingTransition {
                    from: self.s.node_name(w).to_string(),
                    to: self.s.node_name(v).to_string(),
                })
            })
            .collect::<Result<_, _>>()
            .map(Cow::Owned)
    }

    fn holds(&self, w: usize, phi: &FoFormula, f: &Assignment) -> Result<bool, FoError> {
        let st = self.s.structure(w);
        let val = |x: &IndVar| f[x];
        Ok(match phi {
            FoFormula::Top => true,
            FoFormula::Bot => false,
            FoFormula::AtomP(p, x) => st.pred(p).is_some_and(|e| e.contains(&val(x))),
            FoFormula::AtomO(x) => st.objects.contains(&val(x)),
            FoFormula::AtomS(x) => st.sets.contains(&val(x)),
            FoFormula::AtomE(x, y) => st.member.contains(&(val(x), val(y))),
            FoFormula::AtomR(x, y, z) => st.r.contains(&(val(x), val(y), val(z))),
            FoFormula::Eq(x, y) => val(x) == val(y),
            FoFormula::And(a, b) => self.holds(w, a, f)? && self.holds(w, b, f)?,
            FoFormula::Or(a, b) => self.holds(w, a, f)? || self.holds(w, b, f)?,
            FoFormula::Imp(a, b) => {
                for &v in self.s.above(w) {
                    let g = self.transport(w, v, f)?;
                    if self.holds(v, a, &g)? && !self.holds(v, b, &g)? {
                        return Ok(false);
                    }
                }
                true
            }
            FoFormula::Exists(x, body) => {
                let mut g = f.clone();
                for a in 0..self.s.domain(w).len() {
                    g.insert(x.clone(), a);
                    if self.holds(w, body, &g)? {
                        return Ok(true);
                    }
                }
                false
            }
            FoFormula::Forall(x, body) => {
                for &v in self.s.above(w) {
                    let mut g = self.transport(w, v, f)?.into_owned();
                    for a in 0..self.s.domain(v).len() {
                        g.insert(x.clone(), a);
                        if !self.holds(v, body, &g)? {
                            return Ok(false);
                        }
                    }
                }
                true
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fosem::fixtures;
    use crate::syntax::{parse_cond, Atom};
    use crate::translate::st;

    fn x() -> IndVar {
        IndVar::new("x")
    }

    #[test]
    fn constants() {
        let s = fixtures::single();
        assert!(eval_fo(&s, 0, &FoFormula::Top, &Assignment::new()).unwrap());
        assert!(!eval_fo(&s, 0, &FoFormula::Bot, &Assignment::new()).unwrap());
    }

    #[test]
    fn atom_translation_on_one_node() {
        let s = fixtures::single();
        let f = st(&x(), &parse_cond("p").unwrap());
        for a in 0..2 {
            let g = Assignment::from([(x(), a)]);
            assert_eq!(eval_fo(&s, 0, &f, &g).unwrap(), s.structure(0).pred(&Atom::new("p")).unwrap().contains(&a));
        }
    }

    #[test]
    fn implication_looks_ahead() {
        let s = fixtures::two_nodes().to_sheaf().unwrap();
        let a = s.element(0, "a").unwrap();
        let g = Assignment::from([(x(), a)]);
        let p = FoFormula::AtomP(Atom::new("p"), x());
        // p fails at w but holds at v, so ~p fails at w and so does p | ~p
        assert!(!eval_fo(&s, 0, &p, &g).unwrap());
        assert!(!eval_fo(&s, 0, &FoFormula::not(p.clone()), &g).unwrap());
        assert!(!eval_fo(&s, 0, &FoFormula::or(p.clone(), FoFormula::not(p.clone())), &g).unwrap());
        assert!(eval_fo(&s, 0, &FoFormula::not(FoFormula::not(p)), &g).unwrap());
    }

    #[test]
    fn quantifiers() {
        let s = fixtures::two_nodes().to_sheaf().unwrap();
        let y = IndVar::new("y");
        let obj = FoFormula::AtomO(y.clone());
        // b only exists at v, so "everything is an object or a set" is checked there too
        let all = FoFormula::forall(y.clone(), FoFormula::or(obj.clone(), FoFormula::AtomS(y.clone())));
        assert!(eval_fo(&s, 0, &all, &Assignment::new()).unwrap());
        let some_p = FoFormula::exists(y.clone(), FoFormula::AtomP(Atom::new("p"), y.clone()));
        assert!(!eval_fo(&s, 0, &some_p, &Assignment::new()).unwrap());
        assert!(eval_fo(&s, 1, &some_p, &Assignment::new()).unwrap());
    }

    #[test]
    fn extensionality_body_fails_for_two_equal_sets() {
        let s = crate::fosem::SheafFile {
            nodes: vec!["w".into()],
            domains: [("w".to_string(), vec!["a".to_string(), "X".to_string(), "Y".to_string()])].into(),
            interp: [(
                "w".to_string(),
                crate::fosem::InterpFile {
                    objects: vec!["a".into()],
                    sets: vec!["X".into(), "Y".into()],
                    member: vec![("a".into(), "X".into()), ("a".into(), "Y".into())],
                    ..Default::default()
                },
            )]
            .into(),
            ..Default::default()
        }
        .to_sheaf()
        .unwrap();
        let (xv, yv, z) = (IndVar::new("x"), IndVar::new("y"), IndVar::new("z"));
        let same = FoFormula::forall_obj(
            z.clone(),
            FoFormula::iff(FoFormula::AtomE(z.clone(), xv.clone()), FoFormula::AtomE(z, yv.clone())),
        );
        let body = FoFormula::imp(
            FoFormula::conj([FoFormula::AtomS(xv.clone()), FoFormula::AtomS(yv.clone()), same]),
            FoFormula::Eq(xv.clone(), yv.clone()),
        );
        let g = Assignment::from([(xv, 1), (yv, 2)]);
        assert!(!eval_fo(&s, 0, &body, &g).unwrap());
    }

    #[test]
    fn errors() {
        let s = fixtures::single();
        let f = FoFormula::AtomO(x());
        assert_eq!(eval_fo(&s, 0, &f, &Assignment::new()), Err(FoError::Unbound(x())));
        assert!(matches!(eval_fo(&s, 0, &f, &Assignment::from([(x(), 9)])), Err(FoError::OutOfDomain { .. })));
        assert_eq!(eval_fo(&s, 3, &FoFormula::Top, &Assignment::new()), Err(FoError::UnknownNode(3)));
    }
}
