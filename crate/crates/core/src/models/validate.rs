use super::{Model, WorldSet};
use std::fmt;

/// The model class a model is validated against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Class {
    /// Pre-order, monotone valuation, (c1) and (c2).
    Chellas,
    /// Pre-order, monotone valuation and (cw).
    Weiss,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Chellas => "chellas",
            Class::Weiss => "weiss",
        })
    }
}

/// One violated condition, with world names as witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotReflexive { w: String },
    NotTransitive { w: String, v: String, u: String },
    NonMonotone { var: String, from: String, to: String },
    /// `w ≤ w'` and `w R_X v`, but no `v' ≥ v` with `w' R_X v'`.
    C1 { x: String, w_prime: String, w: String, v: String },
    /// `w R_X v` and `v ≤ v'`, but no `w' ≥ w` with `w' R_X v'`.
    C2 { x: String, w: String, v: String, v_prime: String },
    /// `w ≤ w'` and `w' R_X v`, but no `u ≤ v` with `w R_X u`.
    Cw { x: String, w: String, w_prime: String, v: String },
}

impl Violation {
    /// Short condition label such as `c1`.
    pub fn condition(&self) -> &'static str {
        match self {
            Violation::NotReflexive { .. } => "reflexivity",
            Violation::NotTransitive { .. } => "transitivity",
            Violation::NonMonotone { .. } => "monotonicity",
            Violation::C1 { .. } => "c1",
            Violation::C2 { .. } => "c2",
            Violation::Cw { .. } => "cw",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotReflexive { w } => write!(f, "reflexivity: not {w} <= {w}"),
            Violation::NotTransitive { w, v, u } => {
                write!(f, "transitivity: {w} <= {v} <= {u} but not {w} <= {u}")
            }
            Violation::NonMonotone { var, from, to } => {
                write!(f, "monotonicity: {var} holds at {from} but not at {to} >= {from}")
            }
            Violation::C1 { x, w_prime, w, v } => write!(
                f,
                "c1: witness ({w_prime}, {w}, {v}) at X={x}: {w} <= {w_prime} and {w} R_X {v}, \
                 but no R_X-successor of {w_prime} lies above {v}"
            ),
            Violation::C2 { x, w, v, v_prime } => write!(
                f,
                "c2: witness ({w}, {v}, {v_prime}) at X={x}: {w} R_X {v} and {v} <= {v_prime}, \
                 but no world above {w} reaches {v_prime} by R_X"
            ),
            Violation::Cw { x, w, w_prime, v } => write!(
                f,
                "cw: witness ({w}, {w_prime}, {v}) at X={x}: {w} <= {w_prime} and {w_prime} R_X {v}, \
                 but no R_X-successor of {w} lies below {v}"
            ),
        }
    }
}

/// Lists every violated condition of `class`.
///
/// The frame conditions are checked at every set listed in the selection
/// relation. Any other set has empty `R_X`, where all three conditions hold
/// vacuously, so this covers every upward-closed set as well.
pub fn validate(model: &Model, class: Class) -> Vec<Violation> {
    let n = model.len();
    let name = |w: usize| model.name(w).to_string();
    let mut out = Vec::new();

    for w in 0..n {
        if !model.leq(w, w) {
            out.push(Violation::NotReflexive { w: name(w) });
        }
    }
    for w in 0..n {
        for v in model.up(w).iter() {
            for u in model.up(v).iter() {
                if !model.leq(w, u) {
                    out.push(Violation::NotTransitive { w: name(w), v: name(v), u: name(u) });
                }
            }
        }
    }
    for (p, &set) in model.valuation() {
        for w in set.iter() {
            for v in model.up(w).iter() {
                if !set.contains(v) {
                    out.push(Violation::NonMonotone {
                        var: p.to_string(),
                        from: name(w),
                        to: name(v),
                    });
                }
            }
        }
    }

    let sets: Vec<WorldSet> = model.selection_sets().collect();
    for x in sets {
        let xs = model.format_set(x);
        match class {
            Class::Chellas => {
                for w in 0..n {
                    for v in model.successors(w, x).iter() {
                        for w_prime in model.up(w).iter() {
                            let ok = model.successors(w_prime, x).iter().any(|vp| model.leq(v, vp));
                            if !ok {
                                out.push(Violation::C1 {
                                    x: xs.clone(),
                                    w_prime: name(w_prime),
                                    w: name(w),
                                    v: name(v),
                                });
                            }
                        }
                        for v_prime in model.up(v).iter() {
                            let ok = model
                                .up(w)
                                .iter()
                                .any(|wp| model.successors(wp, x).contains(v_prime));
                            if !ok {
                                out.push(Violation::C2 {
                                    x: xs.clone(),
                                    w: name(w),
                                    v: name(v),
                                    v_prime: name(v_prime),
                                });
                            }
                        }
                    }
                }
            }
            Class::Weiss => {
                for w in 0..n {
                    for w_prime in model.up(w).iter() {
                        for v in model.successors(w_prime, x).iter() {
                            let ok = model.successors(w, x).iter().any(|u| model.leq(u, v));
                            if !ok {
                                out.push(Violation::Cw {
                                    x: xs.clone(),
                                    w: name(w),
                                    w_prime: name(w_prime),
                                    v: name(v),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    out
}
