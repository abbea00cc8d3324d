use super::{Model, ModelBuilder, ModelError, WorldSet};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

/// On-disk form of a model. The order is given by generator pairs and is
/// closed reflexively and transitively on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub worlds: Vec<String>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
    #[serde(default)]
    pub r: Vec<TripleFile>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleFile {
    pub from: String,
    pub set: Vec<String>,
    pub to: String,
}

impl ModelFile {
    pub fn to_model(&self) -> Result<Model, ModelError> {
        let index: HashMap<&str, usize> =
            self.worlds.iter().enumerate().map(|(i, w)| (w.as_str(), i)).collect();
        let id = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| ModelError::UnknownWorld(name.to_string()))
        };
        let set = |names: &[String]| -> Result<WorldSet, ModelError> {
            names.iter().map(|n| id(n)).collect::<Result<WorldSet, _>>()
        };
        if self.worlds.len() > super::MAX_WORLDS {
            return Err(ModelError::TooManyWorlds(self.worlds.len()));
        }
        let mut b = ModelBuilder::new(self.worlds.clone());
        for (w, v) in &self.order {
            b = b.order(id(w)?, id(v)?);
        }
        for t in &self.r {
            b = b.triple(id(&t.from)?, set(&t.set)?, id(&t.to)?);
        }
        for (p, ws) in &self.valuation {
            if !crate::syntax::Atom::is_valid_name(p) {
                return Err(ModelError::BadVariable(p.clone()));
            }
            b = b.val(p, set(ws)?);
        }
        b.build()
    }

    pub fn from_model(m: &Model) -> Self {
        let names = |s: WorldSet| s.iter().map(|w| m.name(w).to_string()).collect::<Vec<_>>();
        let mut order = Vec::new();
        for w in 0..m.len() {
            for v in m.up(w).iter() {
                if v != w {
                    order.push((m.name(w).to_string(), m.name(v).to_string()));
                }
            }
        }
        ModelFile {
            worlds: m.names().to_vec(),
            order,
            r: m
                .triples()
                .map(|(w, x, v)| TripleFile {
                    from: m.name(w).to_string(),
                    set: names(x),
                    to: m.name(v).to_string(),
                })
                .collect(),
            valuation: m
                .valuation()
                .iter()
                .map(|(p, &s)| (p.to_string(), names(s)))
                .collect(),
        }
    }
}

impl Model {
    pub fn from_json(text: &str) -> Result<Model, ModelError> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        file.to_model()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ModelFile::from_model(self)).expect("model serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::fixtures::prop5;

    const PROP5: &str = r#"{
        "worlds": ["w", "v", "u"],
        "order": [["w", "v"]],
        "r": [{"from": "w", "set": ["w", "v", "u"], "to": "u"}],
        "valuation": {}
    }"#;

    #[test]
    fn load_and_round_trip() {
        let m = Model::from_json(PROP5).unwrap();
        assert_eq!(m, prop5());
        assert_eq!(Model::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn unknown_keys_and_dangling_ids() {
        let extra = r#"{"worlds": ["a"], "colour": 1}"#;
        assert!(matches!(Model::from_json(extra), Err(ModelError::Json(_))));
        let dangling = r#"{"worlds": ["a"], "order": [["a", "b"]]}"#;
        assert_eq!(Model::from_json(dangling), Err(ModelError::UnknownWorld("b".into())));
        let bad_triple = r#"{"worlds": ["a"], "r": [{"from": "a", "set": ["z"], "to": "a"}]}"#;
        assert_eq!(Model::from_json(bad_triple), Err(ModelError::UnknownWorld("z".into())));
        assert_eq!(Model::from_json(r#"{"worlds": []}"#), Err(ModelError::NoWorlds));
    }
}
