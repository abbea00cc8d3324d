//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use intck::fosem::{ObjectFrame, Selection, Structure};
use intck::models::{Model, WorldSet};
use intck::syntax::{Atom, FoFormula, Formula, IndVar};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use std::collections::{BTreeMap, BTreeSet};

pub const VARS: [&str; 3] = ["p", "q", "r"];

pub fn atoms() -> Vec<Atom> {
    VARS.iter().map(|v| Atom::new(v)).collect()
}

fn leaf() -> impl Strategy<Value = Formula> {
    prop_oneof![
        6 => prop::sample::select(VARS.to_vec()).prop_map(|v| Formula::Var(Atom::new(v))),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bot),
    ]
}

/// Conditional-language formulas of depth at most `depth` over `p, q, r`.
pub fn cond_formula(depth: u32) -> BoxedStrategy<Formula> {
    leaf()
        .prop_recursive(depth, 64, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::box_arrow(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::dia_arrow(a, b)),
            ]
        })
        .boxed()
}

/// Conditional formulas without `~>`.
pub fn box_only_formula(depth: u32) -> BoxedStrategy<Formula> {
    leaf()
        .prop_recursive(depth, 64, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::box_arrow(a, b)),
            ]
        })
        .boxed()
}

pub fn modal_formula(depth: u32) -> BoxedStrategy<Formula> {
    leaf()
        .prop_recursive(depth, 64, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
                inner.clone().prop_map(Formula::boxed),
                inner.prop_map(Formula::dia),
            ]
        })
        .boxed()
}

pub const IND: [&str; 3] = ["x", "y", "z"];

fn ind() -> impl Strategy<Value = IndVar> {
    prop::sample::select(IND.to_vec()).prop_map(IndVar::new)
}

/// First-order formulas over the signature of the standard translation.
pub fn fo_formula(depth: u32) -> BoxedStrategy<FoFormula> {
    let atom = prop_oneof![
        (prop::sample::select(VARS.to_vec()), ind()).prop_map(|(p, x)| FoFormula::AtomP(Atom::new(p), x)),
        ind().prop_map(FoFormula::AtomO),
        ind().prop_map(FoFormula::AtomS),
        (ind(), ind()).prop_map(|(x, y)| FoFormula::AtomE(x, y)),
        (ind(), ind(), ind()).prop_map(|(x, y, z)| FoFormula::AtomR(x, y, z)),
        (ind(), ind()).prop_map(|(x, y)| FoFormula::Eq(x, y)),
        Just(FoFormula::Top),
        Just(FoFormula::Bot),
    ];
    atom.prop_recursive(depth, 48, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FoFormula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FoFormula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FoFormula::imp(a, b)),
            (ind(), inner.clone()).prop_map(|(x, a)| FoFormula::forall(x, a)),
            (ind(), inner).prop_map(|(x, a)| FoFormula::exists(x, a)),
        ]
    })
    .boxed()
}

/// Draws `n` values from `strategy` with a fixed seed.
pub fn sample<S: Strategy>(strategy: S, n: usize, seed: u8) -> Vec<S::Value> {
    let rng = TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]);
    let mut runner = TestRunner::new_with_rng(Config::default(), rng);
    (0..n).map(|_| strategy.new_tree(&mut runner).expect("strategy samples").current()).collect()
}

/// Satisfaction computed straight from the clauses of the definition, one
/// world at a time. `discrete` reads `→` and `□→` classically.
pub fn oracle(m: &Model, w: usize, f: &Formula) -> bool {
    let ext = |g: &Formula| -> BTreeSet<usize> { (0..m.len()).filter(|&u| oracle(m, u, g)).collect() };
    let r = |x: &BTreeSet<usize>, v: usize, u: usize| {
        let set: WorldSet = x.iter().copied().collect();
        m.triples().any(|t| t == (v, set, u))
    };
    let above = |w: usize| (0..m.len()).filter(move |&v| m.leq(w, v));
    match f {
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Var(p) => m.val(p).contains(w),
        Formula::And(a, b) => oracle(m, w, a) && oracle(m, w, b),
        Formula::Or(a, b) => oracle(m, w, a) || oracle(m, w, b),
        Formula::Imp(a, b) => above(w).all(|v| !oracle(m, v, a) || oracle(m, v, b)),
        Formula::BoxArrow(a, b) => {
            let x = ext(a);
            above(w).all(|v| (0..m.len()).all(|u| !r(&x, v, u) || oracle(m, u, b)))
        }
        Formula::DiaArrow(a, b) => {
            let x = ext(a);
            (0..m.len()).any(|u| r(&x, w, u) && oracle(m, u, b))
        }
        Formula::Box(_) | Formula::Dia(_) => panic!("oracle reads conditional formulas only"),
    }
}

pub fn oracle_valid(m: &Model, f: &Formula) -> bool {
    (0..m.len()).all(|w| oracle(m, w, f))
}

/// Classical first-order satisfaction in one structure.
pub fn classical_fo(st: &Structure, size: usize, f: &FoFormula, g: &BTreeMap<IndVar, usize>) -> bool {
    let v = |x: &IndVar| g[x];
    match f {
        FoFormula::Top => true,
        FoFormula::Bot => false,
        FoFormula::AtomP(p, x) => st.preds.get(p).is_some_and(|e| e.contains(&v(x))),
        FoFormula::AtomO(x) => st.objects.contains(&v(x)),
        FoFormula::AtomS(x) => st.sets.contains(&v(x)),
        FoFormula::AtomE(x, y) => st.member.contains(&(v(x), v(y))),
        FoFormula::AtomR(x, y, z) => st.r.contains(&(v(x), v(y), v(z))),
        FoFormula::Eq(x, y) => v(x) == v(y),
        FoFormula::And(a, b) => classical_fo(st, size, a, g) && classical_fo(st, size, b, g),
        FoFormula::Or(a, b) => classical_fo(st, size, a, g) || classical_fo(st, size, b, g),
        FoFormula::Imp(a, b) => !classical_fo(st, size, a, g) || classical_fo(st, size, b, g),
        FoFormula::Forall(x, a) | FoFormula::Exists(x, a) => {
            let mut h = g.clone();
            let mut it = (0..size).map(|e| {
                h.insert(x.clone(), e);
                classical_fo(st, size, a, &h)
            });
            if matches!(f, FoFormula::Forall(..)) {
                it.all(|b| b)
            } else {
                it.any(|b| b)
            }
        }
    }
}

/// Random discrete model with `n` worlds: any selection triples over any
/// subsets, any valuation of `p, q, r`.
pub fn discrete_model() -> impl Strategy<Value = Model> {
    (1usize..=3).prop_flat_map(|n| {
        let sets = 1u64 << n;
        (
            Just(n),
            prop::collection::vec((0..n, 0..sets, 0..n), 0..=6),
            prop::collection::vec(0..sets, 3),
        )
            .prop_map(|(n, triples, vals)| {
                let names: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
                let mut b = Model::builder(&names);
                for (w, x, v) in triples {
                    b = b.triple(w, WorldSet(x), v);
                }
                for (p, x) in VARS.iter().zip(vals) {
                    b = b.val(p, WorldSet(x));
                }
                b.build().expect("discrete model builds")
            })
    })
}

/// Random object frames over a chain of up to three nodes or a two-branch
/// fork, with arbitrary (possibly merging) object maps.
pub fn object_frame() -> impl Strategy<Value = ObjectFrame> {
    let shape = prop_oneof![Just(1usize), Just(2), Just(3), Just(0)];
    (shape, prop::collection::vec(1usize..=2, 3), any::<u64>(), prop::bool::ANY).prop_map(
        |(shape, counts, bits, all)| {
            let mut rng = bits;
            let mut next = |k: usize| {
                rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((rng >> 33) as usize) % k
            };
            let (n, order): (usize, Vec<(usize, usize)>) = match shape {
                0 => (3, vec![(0, 1), (0, 2)]),
                k => (k, (1..k).map(|i| (i - 1, i)).collect()),
            };
            let objects: Vec<Vec<String>> =
                (0..n).map(|w| (0..counts[w]).map(|i| format!("o{w}{i}")).collect()).collect();
            let mut maps = BTreeMap::new();
            for &(w, v) in &order {
                maps.insert((w, v), (0..counts[w]).map(|_| next(counts[v])).collect::<Vec<_>>());
            }
            if shape == 3 {
                let (f, g) = (maps[&(0, 1)].clone(), maps[&(1, 2)].clone());
                maps.insert((0, 2), f.iter().map(|&a| g[a]).collect());
            }
            let mut preds = BTreeMap::new();
            for p in VARS {
                let ext = (0..n).map(|w| (0..counts[w]).filter(|_| next(3) == 0).collect()).collect();
                preds.insert(Atom::new(p), ext);
            }
            let access = (0..n)
                .map(|w| {
                    (0..counts[w])
                        .flat_map(|a| (0..counts[w]).map(move |c| (a, c)))
                        .filter(|_| next(3) == 0)
                        .collect()
                })
                .collect();
            ObjectFrame {
                nodes: (0..n).map(|w| format!("n{w}")).collect(),
                order,
                objects,
                maps,
                preds,
                access,
                selection: if all { Selection::All } else { Selection::ContainingSource },
            }
        },
    )
}
