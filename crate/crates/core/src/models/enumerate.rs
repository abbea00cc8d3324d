use super::{reflexive_transitive_closure, Class, Model, ModelBuilder, WorldSet};
use crate::syntax::Atom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// All upward-closed subsets of the model, in increasing bitmask order.
pub fn upsets(model: &Model) -> Vec<WorldSet> {
    fn go(model: &Model, w: usize, inc: WorldSet, exc: WorldSet, out: &mut Vec<WorldSet>) {
        if w == model.len() {
            out.push(inc);
            return;
        }
        if inc.contains(w) || exc.contains(w) {
            go(model, w + 1, inc, exc, out);
            return;
        }
        go(model, w + 1, inc, exc.union(model.down(w)), out);
        go(model, w + 1, inc.union(model.up(w)), exc, out);
    }
    let mut out = Vec::new();
    go(model, 0, WorldSet::EMPTY, WorldSet::EMPTY, &mut out);
    out.sort();
    out
}

fn world_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i}")).collect()
}

/// Adds selection triples until the frame conditions of `class` hold.
///
/// Chellas: a missing (c1) witness for `w ≤ w'`, `w R_X v` is supplied by
/// `w' R_X v`; a missing (c2) witness for `w R_X v ≤ v'` by `w R_X v'`.
/// Weiss: a missing (cw) witness for `w ≤ w' R_X v` is supplied by `w R_X v`.
pub(crate) fn repair(model: &Model, class: Class) -> Model {
    let n = model.len();
    let mut triples: BTreeSet<(usize, WorldSet, usize)> = model.triples().collect();
    loop {
        let m = model.with_triples(triples.clone());
        let mut added = Vec::new();
        for x in m.selection_sets() {
            for w in 0..n {
                match class {
                    Class::Chellas => {
                        for v in m.successors(w, x).iter() {
                            for wp in m.up(w).iter() {
                                if !m.successors(wp, x).iter().any(|vp| m.leq(v, vp)) {
                                    added.push((wp, x, v));
                                }
                            }
                            for vp in m.up(v).iter() {
                                if !m.up(w).iter().any(|wp| m.successors(wp, x).contains(vp)) {
                                    added.push((w, x, vp));
                                }
                            }
                        }
                    }
                    Class::Weiss => {
                        for wp in m.up(w).iter() {
                            for v in m.successors(wp, x).iter() {
                                if !m.successors(w, x).iter().any(|u| m.leq(u, v)) {
                                    added.push((w, x, v));
                                }
                            }
                        }
                    }
                }
            }
        }
        if added.is_empty() {
            return m;
        }
        triples.extend(added);
    }
}

/// A random valid model of `class` with exactly `n` worlds.
pub(crate) fn random_model(rng: &mut impl Rng, n: usize, vars: &[Atom], class: Class) -> Model {
    let mut up: Vec<WorldSet> = (0..n).map(WorldSet::singleton).collect();
    let density = rng.gen_range(0.0..0.6);
    for (w, s) in up.iter_mut().enumerate() {
        for v in 0..n {
            if v != w && rng.gen_bool(density) {
                s.insert(v);
            }
        }
    }
    let up = reflexive_transitive_closure(up);
    let mut b = ModelBuilder::new(world_names(n));
    for (w, s) in up.iter().enumerate() {
        for v in s.iter() {
            b = b.order(w, v);
        }
    }
    let skeleton = b.clone().build().expect("generated model is well formed");
    let ups = upsets(&skeleton);
    for p in vars {
        b = b.val(p.as_str(), ups[rng.gen_range(0..ups.len())]);
    }
    let sets = rng.gen_range(0..=3.min(ups.len()));
    let triple_density = rng.gen_range(0.1..0.5);
    for _ in 0..sets {
        let x = ups[rng.gen_range(0..ups.len())];
        for w in 0..n {
            for v in 0..n {
                if rng.gen_bool(triple_density) {
                    b = b.triple(w, x, v);
                }
            }
        }
    }
    repair(&b.build().expect("generated model is well formed"), class)
}

/// Every one-world model over `vars`: each valuation, combined with each subset
/// of `{(w,∅,w), (w,{w},w)}`.
pub(crate) fn one_world_models(vars: &[Atom]) -> Vec<Model> {
    let mut out = Vec::new();
    for sel in 0u8..4 {
        for bits in 0u64..(1u64 << vars.len().min(16)) {
            let mut b = Model::builder(&["w0"]);
            for (i, p) in vars.iter().enumerate() {
                let on = i < 16 && bits >> i & 1 == 1;
                b = b.val(p.as_str(), if on { WorldSet(1) } else { WorldSet::EMPTY });
            }
            if sel & 1 == 1 {
                b = b.triple(0, WorldSet::EMPTY, 0);
            }
            if sel & 2 == 2 {
                b = b.triple(0, WorldSet(1), 0);
            }
            out.push(b.build().expect("one-world model is well formed"));
        }
    }
    out
}

/// A deterministic stream of valid Chellas models.
///
/// The stream starts with every one-world model, then continues with seeded
/// random models of `2..=max_worlds` worlds. It ends after `budget` models.
pub struct ModelStream {
    small: std::vec::IntoIter<Model>,
    rng: ChaCha8Rng,
    vars: Vec<Atom>,
    max_worlds: usize,
    remaining: usize,
}

impl Iterator for ModelStream {
    type Item = Model;

    fn next(&mut self) -> Option<Model> {
        if self.remaining == 0 {
            return None;
        }
        let m = match self.small.next() {
            Some(m) => m,
            None if self.max_worlds >= 2 => {
                let n = self.rng.gen_range(2..=self.max_worlds);
                random_model(&mut self.rng, n, &self.vars, Class::Chellas)
            }
            None => return None,
        };
        self.remaining -= 1;
        Some(m)
    }
}

pub fn enumerate_models(max_worlds: usize, vars: &[Atom], budget: usize, seed: u64) -> ModelStream {
    let max_worlds = max_worlds.min(super::MAX_WORLDS);
    let small = if max_worlds >= 1 { one_world_models(vars) } else { Vec::new() };
    ModelStream {
        small: small.into_iter(),
        rng: ChaCha8Rng::seed_from_u64(seed),
        vars: vars.to_vec(),
        max_worlds,
        remaining: budget,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::validate;

    fn vars(names: &[&str]) -> Vec<Atom> {
        names.iter().map(|s| Atom::new(s)).collect()
    }

    #[test]
    fn upsets_of_a_chain_and_a_fork() {
        let chain = Model::builder(&["a", "b", "c"]).order(0, 1).order(1, 2).build().unwrap();
        assert_eq!(upsets(&chain), vec![WorldSet(0), WorldSet(0b100), WorldSet(0b110), WorldSet(0b111)]);
        let discrete = Model::builder(&["a", "b", "c"]).build().unwrap();
        assert_eq!(upsets(&discrete).len(), 8);
        for x in upsets(&chain) {
            assert!(chain.is_upward_closed(x));
        }
    }

    #[test]
    fn one_world_exhaustive() {
        let ms: Vec<Model> = enumerate_models(1, &vars(&["p"]), 1000, 0).collect();
        assert_eq!(ms.len(), 8);
        let p = Atom::new("p");
        assert!(ms.iter().any(|m| m.val(&p) == WorldSet(1) && m.triples().count() == 0));
        assert!(ms.iter().any(|m| m.val(&p).is_empty() && m.triples().count() == 2));
    }

    #[test]
    fn stream_is_valid_and_deterministic() {
        let a: Vec<Model> = enumerate_models(4, &vars(&["p", "q"]), 150, 7).collect();
        let b: Vec<Model> = enumerate_models(4, &vars(&["p", "q"]), 150, 7).collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 150);
        for m in &a {
            assert!(validate(m, Class::Chellas).is_empty(), "{m:?}");
            for x in m.selection_sets() {
                assert!(m.is_upward_closed(x));
            }
        }
    }

    #[test]
    fn weiss_repair_yields_weiss_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let m = random_model(&mut rng, 3, &vars(&["p"]), Class::Weiss);
            assert!(validate(&m, Class::Weiss).is_empty());
        }
    }
}
