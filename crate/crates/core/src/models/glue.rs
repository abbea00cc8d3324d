use super::{upsets, Model, ModelBuilder, ModelError, PointedModel, WorldSet, MAX_WORLDS};
use std::collections::BTreeMap;

/// Disjoint union of two models under a fresh root.
///
/// Worlds are renamed `1.<name>` and `2.<name>` and a new world `root` is placed
/// below all of them. The valuation is the union of the two valuations, and the
/// root satisfies no variable. For each upward-closed `X` of the result,
/// `R_X` is the union of `R¹_{X∩W₁}` and `R²_{X∩W₂}`. Sets that are not
/// upward-closed are never consulted by evaluation and get no successors.
/// The result is pointed at the root.
pub fn glue(m1: &Model, m2: &Model) -> Result<PointedModel, ModelError> {
    let n1 = m1.len();
    let n2 = m2.len();
    let total = 1 + n1 + n2;
    if total > MAX_WORLDS {
        return Err(ModelError::TooManyWorlds(total));
    }
    let mut names = vec!["root".to_string()];
    names.extend(m1.names().iter().map(|s| format!("1.{s}")));
    names.extend(m2.names().iter().map(|s| format!("2.{s}")));

    let shift = |s: WorldSet, by: usize| WorldSet(s.0 << by);
    let off1 = 1;
    let off2 = 1 + n1;
    let part1 = shift(m1.worlds(), off1);
    let part2 = shift(m2.worlds(), off2);

    let mut b = ModelBuilder::new(names);
    for v in 0..total {
        b = b.order(0, v);
    }
    for w in 0..n1 {
        for v in m1.up(w).iter() {
            b = b.order(w + off1, v + off1);
        }
    }
    for w in 0..n2 {
        for v in m2.up(w).iter() {
            b = b.order(w + off2, v + off2);
        }
    }

    let mut val: BTreeMap<_, WorldSet> = BTreeMap::new();
    for (p, &s) in m1.valuation() {
        let e = val.entry(p.clone()).or_default();
        *e = e.union(shift(s, off1));
    }
    for (p, &s) in m2.valuation() {
        let e = val.entry(p.clone()).or_default();
        *e = e.union(shift(s, off2));
    }
    for (p, s) in val {
        b = b.val(p.as_str(), s);
    }

    // Upward-closed sets of the glued model: A ∪ B with A, B upward-closed in
    // the components, plus the whole model.
    let ups1: Vec<WorldSet> = upsets(m1).into_iter().map(|s| shift(s, off1)).collect();
    let ups2: Vec<WorldSet> = upsets(m2).into_iter().map(|s| shift(s, off2)).collect();
    let mut by_part1: BTreeMap<WorldSet, Vec<WorldSet>> = BTreeMap::new();
    let mut by_part2: BTreeMap<WorldSet, Vec<WorldSet>> = BTreeMap::new();
    let mut record = |x: WorldSet| {
        by_part1.entry(x.intersection(part1)).or_default().push(x);
        by_part2.entry(x.intersection(part2)).or_default().push(x);
    };
    for &a in &ups1 {
        for &c in &ups2 {
            record(a.union(c));
        }
    }
    record(WorldSet::full(total));

    for (w, y, v) in m1.triples() {
        for &x in by_part1.get(&shift(y, off1)).into_iter().flatten() {
            b = b.triple(w + off1, x, v + off1);
        }
    }
    for (w, y, v) in m2.triples() {
        for &x in by_part2.get(&shift(y, off2)).into_iter().flatten() {
            b = b.triple(w + off2, x, v + off2);
        }
    }
    Ok(PointedModel { model: b.build()?, world: 0 })
}
