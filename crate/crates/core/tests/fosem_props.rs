mod common;

use common::{atoms, classical_fo, cond_formula, discrete_model, fo_formula, object_frame, oracle, IND};
use intck::fosem::{check_th, classical_to_sheaf, eval_fo, th_battery, upset_sheaf, validate_sheaf, Assignment, KripkeSheaf};
use intck::syntax::{FoFormula, IndVar};
use intck::translate::st;
use proptest::prelude::*;

fn assignments(s: &KripkeSheaf, w: usize) -> Vec<Assignment> {
    let n = s.domain(w).len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                out.push(IND.into_iter().map(IndVar::new).zip([a, b, c]).collect());
            }
        }
    }
    out
}

fn few_assignments(s: &KripkeSheaf, w: usize, pick: u64) -> Vec<Assignment> {
    let all = assignments(s, w);
    let step = (all.len() / 6).max(1);
    all.into_iter().skip(pick as usize % step).step_by(step).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn upset_sheaves_are_valid_th_models(frame in object_frame()) {
        let s = upset_sheaf(&frame).unwrap();
        prop_assert!(validate_sheaf(&s).is_empty());
        prop_assert_eq!(check_th(&s, &atoms()).unwrap(), vec![]);
    }

    #[test]
    fn truth_persists_along_transitions(frame in object_frame(), f in fo_formula(3), pick in any::<u64>()) {
        let s = upset_sheaf(&frame).unwrap();
        for w in 0..s.len() {
            for g in few_assignments(&s, w, pick) {
                if !eval_fo(&s, w, &f, &g).unwrap() {
                    continue;
                }
                for &v in s.above(w) {
                    let h = s.transition(w, v).unwrap();
                    let moved: Assignment = g.iter().map(|(x, &a)| (x.clone(), h[a])).collect();
                    prop_assert!(eval_fo(&s, v, &f, &moved).unwrap(), "{} at {} but not {}", f, w, v);
                }
            }
        }
    }

    #[test]
    fn one_node_sheaves_are_classical(m in discrete_model(), f in fo_formula(3), pick in any::<u64>()) {
        let s = classical_to_sheaf(&m, &atoms()).unwrap();
        let size = s.domain(0).len();
        for g in few_assignments(&s, 0, pick) {
            prop_assert_eq!(eval_fo(&s, 0, &f, &g).unwrap(), classical_fo(s.structure(0), size, &f, &g));
        }
    }

    #[test]
    fn standard_translation_matches_classical_evaluation(m in discrete_model(), f in cond_formula(3)) {
        let s = classical_to_sheaf(&m, &atoms()).unwrap();
        let x = IndVar::new("x");
        let t = st(&x, &f);
        for w in 0..m.len() {
            let g = Assignment::from([(x.clone(), s.element(0, m.name(w)).unwrap())]);
            prop_assert_eq!(eval_fo(&s, 0, &t, &g).unwrap(), oracle(&m, w, &f), "{} at {}", f, m.name(w));
        }
    }
}

#[test]
fn battery_is_valid_and_satisfies_th() {
    let battery = th_battery(&atoms());
    assert!(battery.iter().filter(|(_, s)| s.len() > 1).count() >= 3);
    for (name, s) in &battery {
        assert!(validate_sheaf(s).is_empty(), "{name}");
        assert_eq!(check_th(s, &atoms()).unwrap(), vec![], "{name}");
    }
}

#[test]
fn universal_closure_of_a_translated_theorem_holds_at_the_root() {
    let f = intck::syntax::parse_cond("(p => q) & (p => r) -> p => q & r").unwrap();
    let x = IndVar::new("x");
    let closed = FoFormula::forall_obj(x.clone(), st(&x, &f));
    for (name, s) in th_battery(&atoms()) {
        for w in 0..s.len() {
            assert!(eval_fo(&s, w, &closed, &Assignment::new()).unwrap(), "{name}");
        }
    }
}
