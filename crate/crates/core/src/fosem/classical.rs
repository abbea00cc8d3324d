use super::{close_order, KripkeSheaf, SheafError, Structure};
use crate::models::{Model, WorldSet};
use crate::syntax::Atom;
use std::collections::{BTreeMap, BTreeSet, HashMap};

fn assemble(
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    domains: Vec<Vec<String>>,
    interp: Vec<Structure>,
    trans: BTreeMap<(usize, usize), Vec<Option<usize>>>,
) -> KripkeSheaf {
    let n = names.len();
    let above = (0..n).map(|w| (0..n).filter(|&v| leq[w][v]).collect()).collect();
    let index = domains
        .iter()
        .map(|d| d.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect::<HashMap<_, _>>())
        .collect();
    KripkeSheaf { names, leq, above, domains, index, interp, trans }
}

const MAX_CLASSICAL_WORLDS: usize = 10;

/// The one-node sheaf of a classical model: the domain holds the worlds as
/// objects and every subset of worlds as a set, with `R` copied from the
/// selection triples. Predicates are interpreted for `vars` and for every
/// variable the model's valuation mentions.
pub fn classical_to_sheaf(m: &Model, vars: &[Atom]) -> Result<KripkeSheaf, SheafError> {
    if !m.is_discrete() {
        return Err(SheafError::NotDiscrete);
    }
    let n = m.len();
    if n > MAX_CLASSICAL_WORLDS {
        return Err(SheafError::TooLarge(n));
    }
    let subsets = 1usize << n;
    let set_el = |x: WorldSet| n + x.0 as usize;
    let mut domain: Vec<String> = m.names().to_vec();
    domain.extend((0..subsets).map(|bits| m.format_set(WorldSet(bits as u64))));
    let mut st = Structure { objects: (0..n).collect(), sets: (n..n + subsets).collect(), ..Default::default() };
    for bits in 0..subsets {
        for w in WorldSet(bits as u64).iter() {
            st.member.insert((w, n + bits));
        }
    }
    for (w, x, v) in m.triples() {
        st.r.insert((w, set_el(x), v));
    }
    let mut atoms: BTreeSet<Atom> = vars.iter().cloned().collect();
    atoms.extend(m.valuation().keys().cloned());
    for p in atoms {
        st.preds.insert(p.clone(), m.val(&p).iter().collect());
    }
    Ok(assemble(vec!["node".into()], vec![vec![true]], vec![domain], vec![st], BTreeMap::new()))
}

/// Which sets a relating pair of objects is attached to in [`upset_sheaf`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    /// `R(a, X, c)` for every set `X`.
    All,
    /// `R(a, X, c)` only for sets `X` containing `a`.
    ContainingSource,
}

/// A finite frame of growing object domains, the input to [`upset_sheaf`].
#[derive(Clone, Debug)]
pub struct ObjectFrame {
    pub nodes: Vec<String>,
    /// Generating pairs of the order.
    pub order: Vec<(usize, usize)>,
    pub objects: Vec<Vec<String>>,
    /// Object maps for every pair `w < v` of the closed order.
    pub maps: BTreeMap<(usize, usize), Vec<usize>>,
    /// Predicate extensions per node, closed upward by the construction.
    pub preds: BTreeMap<Atom, Vec<Vec<usize>>>,
    /// Related object pairs per node, closed upward by the construction.
    pub access: Vec<Vec<(usize, usize)>>,
    pub selection: Selection,
}

const MAX_CONE: usize = 20;

/// Builds a sheaf whose sets at each node are the up-sets of the object
/// points `(v, b)` with `v` above that node, ordered along the object maps.
/// Transitions restrict a set to the smaller cone. Every such sheaf satisfies `Th`.
pub fn upset_sheaf(frame: &ObjectFrame) -> Result<KripkeSheaf, SheafError> {
    let n = frame.nodes.len();
    if n == 0 {
        return Err(SheafError::NoNodes);
    }
    let bad = |msg: String| SheafError::Frame(msg);
    if frame.objects.len() != n || frame.access.len() != n {
        return Err(bad("objects and access need one entry per node".into()));
    }
    if frame.order.iter().any(|&(a, b)| a >= n || b >= n) {
        return Err(bad("order mentions an unknown node".into()));
    }
    let leq = close_order(n, frame.order.iter().copied());
    let h = |w: usize, v: usize, a: usize| -> Result<usize, SheafError> {
        if w == v {
            return Ok(a);
        }
        frame
            .maps
            .get(&(w, v))
            .and_then(|m| m.get(a).copied())
            .filter(|&b| b < frame.objects[v].len())
            .ok_or_else(|| bad(format!("no image of object {a} from node {w} to node {v}")))
    };

    let points: Vec<(usize, usize)> =
        (0..n).flat_map(|w| (0..frame.objects[w].len()).map(move |a| (w, a))).collect();
    if points.len() > 64 {
        return Err(bad("more than 64 object points".into()));
    }
    let point_ix: HashMap<(usize, usize), usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    // successors of each point in the point order, as bitmasks
    let mut up_of = vec![0u64; points.len()];
    for (i, &(w, a)) in points.iter().enumerate() {
        for v in 0..n {
            if leq[w][v] {
                up_of[i] |= 1 << point_ix[&(v, h(w, v, a)?)];
            }
        }
    }
    let cone: Vec<u64> = (0..n)
        .map(|w| points.iter().enumerate().filter(|(_, &(v, _))| leq[w][v]).fold(0u64, |m, (i, _)| m | 1 << i))
        .collect();
    let upsets = |mask: u64| -> Result<Vec<u64>, SheafError> {
        let members: Vec<usize> = (0..64).filter(|i| mask >> i & 1 == 1).collect();
        if members.len() > MAX_CONE {
            return Err(bad(format!("a cone has {} points", members.len())));
        }
        let mut out = Vec::new();
        for bits in 0u64..1 << members.len() {
            let x = members.iter().enumerate().filter(|(k, _)| bits >> k & 1 == 1).fold(0u64, |m, (_, &i)| m | 1 << i);
            if members.iter().all(|&i| x >> i & 1 == 0 || up_of[i] & !x == 0) {
                out.push(x);
            }
        }
        Ok(out)
    };

    let closed_points = |given: &dyn Fn(usize) -> Vec<usize>| -> Result<u64, SheafError> {
        let mut m = 0u64;
        for w in 0..n {
            for a in given(w) {
                let i = point_ix.get(&(w, a)).ok_or_else(|| bad(format!("object {a} is not at node {w}")))?;
                m |= up_of[*i];
            }
        }
        Ok(m)
    };
    let mut access: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    for w in 0..n {
        for &(a, c) in &frame.access[w] {
            for v in 0..n {
                if leq[w][v] {
                    access.insert((v, h(w, v, a)?, h(w, v, c)?));
                }
            }
        }
    }

    let name_point = |i: usize| {
        let (w, a) = points[i];
        format!("{}.{}", frame.nodes[w], frame.objects[w][a])
    };
    let mut domains = Vec::with_capacity(n);
    let mut interp = Vec::with_capacity(n);
    let mut set_index: Vec<HashMap<u64, usize>> = Vec::with_capacity(n);
    for w in 0..n {
        let objs = frame.objects[w].len();
        let sets = upsets(cone[w])?;
        let mut dom = frame.objects[w].clone();
        dom.extend(sets.iter().map(|&x| {
            let inner: Vec<String> = (0..points.len()).filter(|i| x >> i & 1 == 1).map(name_point).collect();
            format!("{{{}}}", inner.join(","))
        }));
        let mut st = Structure { objects: (0..objs).collect(), sets: (objs..objs + sets.len()).collect(), ..Default::default() };
        for (k, &x) in sets.iter().enumerate() {
            for a in 0..objs {
                if x >> point_ix[&(w, a)] & 1 == 1 {
                    st.member.insert((a, objs + k));
                }
            }
        }
        for (p, ext) in &frame.preds {
            let m = closed_points(&|v| ext.get(v).cloned().unwrap_or_default())?;
            st.preds.insert(p.clone(), (0..objs).filter(|&a| m >> point_ix[&(w, a)] & 1 == 1).collect());
        }
        for &(v, a, c) in &access {
            if v != w {
                continue;
            }
            for (k, &x) in sets.iter().enumerate() {
                if frame.selection == Selection::All || x >> point_ix[&(w, a)] & 1 == 1 {
                    st.r.insert((a, objs + k, c));
                }
            }
        }
        set_index.push(sets.iter().enumerate().map(|(k, &x)| (x, objs + k)).collect());
        domains.push(dom);
        interp.push(st);
    }

    let mut trans = BTreeMap::new();
    for w in 0..n {
        for v in 0..n {
            if w == v || !leq[w][v] {
                continue;
            }
            let objs = frame.objects[w].len();
            let mut m: Vec<Option<usize>> = (0..objs).map(|a| h(w, v, a).ok()).collect();
            let mut sets: Vec<(u64, usize)> = set_index[w].iter().map(|(&x, &k)| (x, k)).collect();
            sets.sort_by_key(|&(_, k)| k);
            for (x, _) in sets {
                m.push(set_index[v].get(&(x & cone[v])).copied());
            }
            trans.insert((w, v), m);
        }
    }
    Ok(assemble(frame.nodes.clone(), leq, domains, interp, trans))
}

fn named(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// The hand-built multi-node fixtures of the battery.
fn multi_node_frames() -> Vec<(&'static str, ObjectFrame)> {
    let p = Atom::new("p");
    let q = Atom::new("q");
    vec![
        (
            "chain: an object appears",
            ObjectFrame {
                nodes: named(&["w", "v"]),
                order: vec![(0, 1)],
                objects: vec![named(&["a"]), named(&["a", "b"])],
                maps: [((0, 1), vec![0])].into(),
                preds: [(p.clone(), vec![vec![], vec![1]])].into(),
                access: vec![vec![(0, 0)], vec![(0, 1)]],
                selection: Selection::All,
            },
        ),
        (
            "fork: two futures",
            ObjectFrame {
                nodes: named(&["w", "v1", "v2"]),
                order: vec![(0, 1), (0, 2)],
                objects: vec![named(&["a"]), named(&["a"]), named(&["a", "b"])],
                maps: [((0, 1), vec![0]), ((0, 2), vec![0])].into(),
                preds: [(p.clone(), vec![vec![], vec![0], vec![]]), (q.clone(), vec![vec![], vec![], vec![1]])].into(),
                access: vec![vec![], vec![(0, 0)], vec![(0, 1)]],
                selection: Selection::ContainingSource,
            },
        ),
        (
            "chain: objects merge",
            ObjectFrame {
                nodes: named(&["w", "v", "u"]),
                order: vec![(0, 1), (1, 2)],
                objects: vec![named(&["a", "b"]), named(&["c"]), named(&["c", "d"])],
                maps: [((0, 1), vec![0, 0]), ((1, 2), vec![0]), ((0, 2), vec![0, 0])].into(),
                preds: [(p, vec![vec![0], vec![], vec![]]), (q, vec![vec![], vec![], vec![1]])].into(),
                access: vec![vec![(0, 1)], vec![], vec![(0, 1), (1, 1)]],
                selection: Selection::All,
            },
        ),
    ]
}

/// Sheaves satisfying `Th` for `vars`: the one-node sheaves of every one-world
/// model over `vars`, of a few two-world models, and three multi-node fixtures.
pub fn th_battery(vars: &[Atom]) -> Vec<(String, KripkeSheaf)> {
    let mut out = Vec::new();
    for (i, m) in crate::models::enumerate::one_world_models(vars).iter().enumerate() {
        out.push((format!("one-world #{i}"), classical_to_sheaf(m, vars).expect("one world is discrete")));
    }
    let full = WorldSet::full(2);
    let patterns: [&[(usize, WorldSet, usize)]; 4] = [
        &[],
        &[(0, full, 1)],
        &[(0, WorldSet::singleton(0), 1), (1, WorldSet::singleton(1), 0)],
        &[(0, full, 0), (1, full, 1), (0, WorldSet::EMPTY, 1)],
    ];
    for (i, triples) in patterns.iter().enumerate() {
        let mut b = Model::builder(&["w0", "w1"]);
        for (k, p) in vars.iter().enumerate() {
            let ext = [WorldSet::singleton(0), WorldSet::singleton(1), full][k % 3];
            b = b.val(p.as_str(), ext);
        }
        for &(w, x, v) in triples.iter() {
            b = b.triple(w, x, v);
        }
        let m = b.build().expect("fixed two-world model");
        out.push((format!("two-world #{i}"), classical_to_sheaf(&m, vars).expect("discrete")));
    }
    for (name, frame) in multi_node_frames() {
        out.push((name.to_string(), upset_sheaf(&frame).expect("fixture frames are well formed")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fosem::{check_th, eval_fo, validate_sheaf, Assignment};
    use crate::models::fixtures::prop5;
    use crate::syntax::{parse_cond, IndVar};
    use crate::translate::st;

    fn pqr() -> Vec<Atom> {
        ["p", "q", "r"].iter().map(|s| Atom::new(s)).collect()
    }

    #[test]
    fn one_world_without_selection() {
        let m = Model::builder(&["w"]).build().unwrap();
        let s = classical_to_sheaf(&m, &[]).unwrap();
        assert_eq!(s.domain(0).len(), 3);
        assert!(validate_sheaf(&s).is_empty());
        assert_eq!(check_th(&s, &[]).unwrap(), vec![]);
    }

    #[test]
    fn non_discrete_rejected() {
        assert_eq!(classical_to_sheaf(&prop5(), &[]).unwrap_err(), SheafError::NotDiscrete);
    }

    #[test]
    fn battery_is_valid_and_satisfies_th() {
        let vars = pqr();
        let battery = th_battery(&vars);
        assert!(battery.iter().filter(|(_, s)| s.len() > 1).count() >= 3);
        for (name, s) in &battery {
            assert!(validate_sheaf(s).is_empty(), "{name}: {:?}", validate_sheaf(s));
            assert_eq!(check_th(s, &vars).unwrap(), vec![], "{name}");
        }
    }

    #[test]
    fn double_negation_shift_holds_on_classical_sheaves() {
        let f = st(&IndVar::new("x"), &parse_cond("~~(T=>F) -> (T=>F)").unwrap());
        for (name, s) in th_battery(&[]) {
            for w in 0..s.len() {
                for a in 0..s.domain(w).len() {
                    let g = Assignment::from([(IndVar::new("x"), a)]);
                    assert!(eval_fo(&s, w, &f, &g).unwrap(), "{name} at {w}/{a}");
                }
            }
        }
    }

    #[test]
    fn upset_sets_restrict_along_maps() {
        let (_, frame) = multi_node_frames().remove(0);
        let s = upset_sheaf(&frame).unwrap();
        // w sees a and the up-sets of {w.a, v.a, v.b}; v sees a, b and four sets
        assert_eq!(s.domain(0).len(), 1 + 6);
        assert_eq!(s.domain(1).len(), 2 + 4);
        let full = s.element(0, "{w.a,v.a,v.b}").unwrap();
        let h = s.transition(0, 1).unwrap();
        assert_eq!(s.domain(1)[h[full]], "{v.a,v.b}");
    }
}
