mod common;

use common::{atoms, box_only_formula, cond_formula, oracle, oracle_valid, sample};
use intck::calculus::scheme;
use intck::models::{enumerate_models, eval, extension, extension_in, glue, validate, Class, Mode, Model};
use intck::syntax::{Formula, Meta};
use proptest::prelude::*;
use std::collections::HashMap;

/// Valid Chellas models with two or more worlds, drawn from the seeded part of
/// the enumerator (the first 32 models of a three-variable stream are the
/// exhaustive one-world ones).
fn random_chellas(seed: u64, max_worlds: usize, count: usize) -> Vec<Model> {
    enumerate_models(max_worlds, &atoms(), 32 + count, seed).skip(32).collect()
}

fn chellas_model(max_worlds: usize) -> impl Strategy<Value = Model> {
    any::<u64>().prop_map(move |seed| random_chellas(seed, max_worlds, 1).remove(0))
}

const SOUND_AXIOMS: [&str; 16] = [
    "A0.1", "A0.2", "A0.3", "A0.4", "A0.5", "A0.6", "A0.7", "A0.8", "A0.9", "A0.10", "A1", "A2", "A3", "A4",
    "A5", "A6",
];

fn instance(id: &str, args: &[Formula; 3]) -> Formula {
    let sigma: HashMap<Meta, Formula> =
        [Meta::Phi, Meta::Psi, Meta::Chi].into_iter().zip(args.iter().cloned()).collect();
    scheme(id).unwrap().instantiate(&sigma).unwrap()
}

/// A formula equivalent to `f` in every model but syntactically different.
fn equivalent(f: &Formula, g: &Formula) -> Formula {
    Formula::and(f.clone(), Formula::or(f.clone(), g.clone()))
}

#[test]
fn enumerated_models_are_chellas_and_agree_with_the_oracle() {
    let models: Vec<Model> = enumerate_models(3, &atoms(), 120, 5).collect();
    let formulas = sample(cond_formula(3), 40, 1);
    for m in &models {
        assert!(validate(m, Class::Chellas).is_empty());
        for f in &formulas {
            let ext = extension(m, f).unwrap();
            for w in 0..m.len() {
                assert_eq!(ext.contains(w), oracle(m, w, f), "{f} at {} in {}", m.name(w), m.to_json());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extensions_are_upward_closed(m in chellas_model(4), f in cond_formula(4)) {
        let ext = extension(&m, &f).unwrap();
        prop_assert!(m.is_upward_closed(ext));
    }

    #[test]
    fn axiom_instances_hold_everywhere(
        m in chellas_model(3),
        args in [cond_formula(3), cond_formula(3), cond_formula(3)],
    ) {
        for id in SOUND_AXIOMS {
            let f = instance(id, &args);
            prop_assert!(oracle_valid(&m, &f), "{} instance {} fails", id, f);
            prop_assert_eq!(extension(&m, &f).unwrap(), m.worlds());
        }
    }

    #[test]
    fn rules_preserve_validity_on_a_model(
        m in chellas_model(3),
        a in cond_formula(3),
        b in cond_formula(2),
        c in cond_formula(3),
    ) {
        // The congruence rules, applied to the valid premise a <-> (a & (a | b)).
        let a2 = equivalent(&a, &b);
        prop_assert!(oracle_valid(&m, &Formula::iff(a.clone(), a2.clone())));
        for concl in [
            Formula::iff(Formula::box_arrow(a.clone(), c.clone()), Formula::box_arrow(a2.clone(), c.clone())),
            Formula::iff(Formula::box_arrow(c.clone(), a.clone()), Formula::box_arrow(c.clone(), a2.clone())),
            Formula::iff(Formula::dia_arrow(a.clone(), c.clone()), Formula::dia_arrow(a2.clone(), c.clone())),
            Formula::iff(Formula::dia_arrow(c.clone(), a.clone()), Formula::dia_arrow(c.clone(), a2.clone())),
        ] {
            prop_assert!(oracle_valid(&m, &concl), "{}", concl);
        }
        // Modus ponens: if a and a -> c are valid on m, so is c.
        let imp = Formula::imp(a.clone(), c.clone());
        if oracle_valid(&m, &a) && oracle_valid(&m, &imp) {
            prop_assert!(oracle_valid(&m, &c));
        }
    }

    #[test]
    fn glue_keeps_component_truth(
        seeds in (any::<u64>(), any::<u64>()),
        battery in prop::collection::vec(cond_formula(3), 10),
    ) {
        let m1 = random_chellas(seeds.0, 3, 1).remove(0);
        let m2 = random_chellas(seeds.1, 3, 1).remove(0);
        let g = glue(&m1, &m2).unwrap();
        prop_assert!(validate(&g.model, Class::Chellas).is_empty());
        prop_assert_eq!(g.model.name(g.world), "root");
        for f in &battery {
            let mut subs = Vec::new();
            f.visit(&mut |s| subs.push(s.clone()));
            for s in &subs {
                for (tag, m) in [("1", &m1), ("2", &m2)] {
                    for w in 0..m.len() {
                        let gw = g.model.world(&format!("{tag}.{}", m.name(w))).unwrap();
                        prop_assert_eq!(oracle(&g.model, gw, s), oracle(m, w, s));
                    }
                }
            }
            for w1 in 0..m1.len() {
                for w2 in 0..m2.len() {
                    if !oracle(&m1, w1, f) && !oracle(&m2, w2, f) {
                        prop_assert!(!eval(&g.model, Mode::Int, g.world, f).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn discrete_chellas_models_are_weiss(m in chellas_model(3), f in box_only_formula(4)) {
        let discrete = intck::models::ModelFile {
            order: Vec::new(),
            ..intck::models::ModelFile::from_model(&m)
        }
        .to_model()
        .unwrap();
        if validate(&discrete, Class::Chellas).is_empty() {
            prop_assert!(validate(&discrete, Class::Weiss).is_empty());
        }
        prop_assert_eq!(
            extension_in(&discrete, Mode::Int, &f).unwrap(),
            extension_in(&discrete, Mode::Weiss, &f).unwrap()
        );
    }
}

#[test]
fn disjunction_property_witness_from_glue() {
    let one = |p: &str| Model::builder(&["w"]).val(p, intck::models::WorldSet(1)).build().unwrap();
    let g = glue(&one("p"), &one("q")).unwrap();
    for f in ["p", "q", "p | q"] {
        assert!(!eval(&g.model, Mode::Int, g.world, &intck::syntax::parse_cond(f).unwrap()).unwrap());
    }
}
