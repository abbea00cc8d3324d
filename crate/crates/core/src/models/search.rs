use super::enumerate::{one_world_models, random_model, upsets};
use super::{extension_in, validate, Class, Mode, Model, ModelBuilder, PointedModel, WorldSet};
use crate::syntax::{Atom, Formula};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Searches for a finite model of `class` refuting `f` at some world.
///
/// Candidates come in a fixed order: every one-world model, then an interleaving
/// of an exhaustive sweep over two-world models (fewest selection triples first)
/// with seeded random models of `3..=max_worlds` worlds. Each candidate counts
/// against `budget`. `None` only means nothing was found within the budget.
pub fn countermodel_search(
    f: &Formula,
    class: Class,
    max_worlds: usize,
    budget: usize,
    seed: u64,
) -> Option<PointedModel> {
    let mode = match class {
        Class::Chellas => Mode::Int,
        Class::Weiss => Mode::Weiss,
    };
    if max_worlds == 0 || (class == Class::Weiss && f.has_dia_arrow()) || !f.in_dialect(crate::syntax::Dialect::Cond) {
        return None;
    }
    let vars: Vec<Atom> = f.vars().into_iter().collect();
    let refutes = |m: &Model| -> Option<PointedModel> {
        if !validate(m, class).is_empty() {
            return None;
        }
        let ext = extension_in(m, mode, f).ok()?;
        let w = m.worlds().iter().find(|&w| !ext.contains(w))?;
        Some(PointedModel { model: m.clone(), world: w })
    };

    let mut spent = 0usize;
    for m in one_world_models(&vars) {
        if spent == budget {
            return None;
        }
        spent += 1;
        if let Some(p) = refutes(&m) {
            return Some(p);
        }
    }
    if max_worlds < 2 {
        return None;
    }

    let mut pairs = TwoWorld::new(vars.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs_done = false;
    while spent < budget {
        if !pairs_done {
            match pairs.next() {
                Some(m) => {
                    spent += 1;
                    if let Some(p) = refutes(&m) {
                        return Some(p);
                    }
                }
                None => pairs_done = true,
            }
        }
        if max_worlds >= 3 && spent < budget {
            let n = rng.gen_range(3..=max_worlds.min(super::MAX_WORLDS));
            let m = random_model(&mut rng, n, &vars, class);
            spent += 1;
            if let Some(p) = refutes(&m) {
                return Some(p);
            }
        } else if pairs_done {
            break;
        }
    }
    None
}

/// Exhaustive two-world candidates: the three pre-orders up to isomorphism,
/// selection subsets by increasing size, then every valuation by up-sets.
struct TwoWorld {
    vars: Vec<Atom>,
    order: usize,
    skeleton: Model,
    ups: Vec<WorldSet>,
    slots: Vec<(usize, WorldSet, usize)>,
    size: u32,
    mask: u64,
    val: Vec<usize>,
    done: bool,
}

const ORDERS: [&[(usize, usize)]; 3] = [&[], &[(0, 1)], &[(0, 1), (1, 0)]];

impl TwoWorld {
    fn new(vars: Vec<Atom>) -> Self {
        let mut t = TwoWorld {
            vars,
            order: 0,
            skeleton: Model::builder(&["w0", "w1"]).build().unwrap(),
            ups: Vec::new(),
            slots: Vec::new(),
            size: 0,
            mask: 0,
            val: Vec::new(),
            done: false,
        };
        t.load_order();
        t
    }

    fn load_order(&mut self) {
        let mut b = Model::builder(&["w0", "w1"]);
        for &(w, v) in ORDERS[self.order] {
            b = b.order(w, v);
        }
        self.skeleton = b.build().unwrap();
        self.ups = upsets(&self.skeleton);
        self.slots = self
            .ups
            .iter()
            .flat_map(|&x| (0..2).flat_map(move |w| (0..2).map(move |v| (w, x, v))))
            .collect();
        self.size = 0;
        self.mask = 0;
        self.val = vec![0; self.vars.len()];
    }

    fn build(&self) -> Model {
        let mut b = ModelBuilder::new(vec!["w0".into(), "w1".into()]);
        for &(w, v) in ORDERS[self.order] {
            b = b.order(w, v);
        }
        for (i, p) in self.vars.iter().enumerate() {
            b = b.val(p.as_str(), self.ups[self.val[i]]);
        }
        for (i, &(w, x, v)) in self.slots.iter().enumerate() {
            if self.mask >> i & 1 == 1 {
                b = b.triple(w, x, v);
            }
        }
        b.build().unwrap()
    }

    fn advance(&mut self) {
        // valuation odometer
        for i in 0..self.val.len() {
            self.val[i] += 1;
            if self.val[i] < self.ups.len() {
                return;
            }
            self.val[i] = 0;
        }
        // next mask with the same popcount (Gosper), else next size
        let t = self.slots.len() as u32;
        let limit = 1u64 << t;
        if self.mask != 0 {
            let c = self.mask & self.mask.wrapping_neg();
            let r = self.mask + c;
            let next = (((r ^ self.mask) >> 2) / c) | r;
            if next < limit {
                self.mask = next;
                return;
            }
        }
        self.size += 1;
        if self.size <= t {
            self.mask = (1u64 << self.size) - 1;
            return;
        }
        self.order += 1;
        if self.order == ORDERS.len() {
            self.done = true;
        } else {
            self.load_order();
        }
    }
}

impl Iterator for TwoWorld {
    type Item = Model;

    fn next(&mut self) -> Option<Model> {
        if self.done {
            return None;
        }
        let m = self.build();
        self.advance();
        Some(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::eval;
    use crate::syntax::parse_cond;

    #[test]
    fn finds_small_countermodel_to_implication() {
        let f = parse_cond("p -> q").unwrap();
        let pm = countermodel_search(&f, Class::Chellas, 3, 1000, 1).unwrap();
        assert!(pm.model.len() <= 2);
        assert!(!eval(&pm.model, Mode::Int, pm.world, &f).unwrap());
    }

    #[test]
    fn weiss_refutes_double_negation_shift() {
        let f = parse_cond("~~(T=>F) -> (T=>F)").unwrap();
        let pm = countermodel_search(&f, Class::Weiss, 3, 10_000, 1).unwrap();
        assert!(validate(&pm.model, Class::Weiss).is_empty());
        assert!(!eval(&pm.model, Mode::Weiss, pm.world, &f).unwrap());
        assert!(countermodel_search(&f, Class::Chellas, 3, 3000, 1).is_none());
    }

    #[test]
    fn axiom_instance_has_no_countermodel() {
        let f = parse_cond("((p=>q) & (p=>r)) <-> (p=>(q&r))").unwrap();
        assert!(countermodel_search(&f, Class::Chellas, 3, 2000, 5).is_none());
    }

    #[test]
    fn two_world_sweep_is_exhaustive() {
        let models: Vec<Model> = TwoWorld::new(vec![]).collect();
        // the discrete order has 4 up-sets, so 16 slots; chain has 3 up-sets,
        // 12 slots; the cluster has 2 up-sets, 8 slots
        assert_eq!(models.len(), (1 << 16) + (1 << 12) + (1 << 8));
        assert_eq!(models[0].triples().count(), 0);
    }
}
