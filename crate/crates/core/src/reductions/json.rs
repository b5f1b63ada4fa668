use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::domains::{Domain, DomainJson, StateId};
use crate::ltlf::{parse, Formula, Proposition};

use super::build::{annot_text, parse_annot, ArenaKind, Config};
use super::strategy::MbsdStrategy;
use super::{Agent, MappingSpec, MbsdInstance, ReductionError};

/// A domain given inline or as a path relative to the instance file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DomainRef {
    Path(String),
    Inline(DomainJson),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjunctJson {
    pub phi: String,
    pub psi: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MappingJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjuncts: Option<Vec<ConjunctJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceJson {
    pub domain_a: DomainRef,
    pub domain_b: DomainRef,
    pub mapping: MappingJson,
    pub stop_agent: Agent,
}

fn json_err(e: impl std::fmt::Display) -> ReductionError {
    ReductionError::Json(e.to_string())
}

pub(crate) fn read_file(path: &Path) -> Result<String, ReductionError> {
    std::fs::read_to_string(path).map_err(|e| ReductionError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn resolve(r: &DomainRef, base: Option<&Path>) -> Result<Domain, ReductionError> {
    match r {
        DomainRef::Inline(d) => Ok(d.to_domain()?),
        DomainRef::Path(p) => {
            let path = match base {
                Some(b) => b.join(p),
                None => Path::new(p).to_path_buf(),
            };
            let text = read_file(&path)?;
            Domain::decode(&text).map_err(|e| ReductionError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })
        }
    }
}

fn universe(d: &Domain) -> BTreeSet<Proposition> {
    d.props().iter().cloned().collect()
}

impl InstanceJson {
    pub fn to_instance(&self, base: Option<&Path>) -> Result<MbsdInstance, ReductionError> {
        let da = resolve(&self.domain_a, base)?;
        let db = resolve(&self.domain_b, base)?;
        let (ua, ub) = (universe(&da), universe(&db));
        let pairs =
            |items: &Option<Vec<ConjunctJson>>| -> Result<Vec<(Formula, Formula)>, ReductionError> {
                items
                    .as_ref()
                    .ok_or_else(|| json_err("mapping needs `conjuncts`"))?
                    .iter()
                    .map(|c| Ok((parse(&c.phi, Some(&ua))?, parse(&c.psi, Some(&ub))?)))
                    .collect()
            };
        let mapping = match self.mapping.kind.as_str() {
            "pointwise" => MappingSpec::PointWise(pairs(&self.mapping.conjuncts)?),
            "target" => MappingSpec::Target(pairs(&self.mapping.conjuncts)?),
            "general" => {
                let text = self
                    .mapping
                    .formula
                    .as_ref()
                    .ok_or_else(|| json_err("general mapping needs `formula`"))?;
                let all: BTreeSet<Proposition> = ua.union(&ub).cloned().collect();
                MappingSpec::General(parse(text, Some(&all))?)
            }
            other => return Err(json_err(format!("unknown mapping kind `{other}`"))),
        };
        MbsdInstance::new(da, db, mapping, self.stop_agent)
    }

    /// Self-contained document with both domains inline.
    pub fn from_instance(p: &MbsdInstance) -> InstanceJson {
        let conjuncts = || {
            Some(
                p.mapping()
                    .conjuncts()
                    .iter()
                    .map(|(phi, psi)| ConjunctJson {
                        phi: phi.to_string(),
                        psi: psi.to_string(),
                    })
                    .collect(),
            )
        };
        let mapping = match p.mapping() {
            MappingSpec::PointWise(_) => MappingJson {
                kind: "pointwise".into(),
                conjuncts: conjuncts(),
                formula: None,
            },
            MappingSpec::Target(_) => MappingJson {
                kind: "target".into(),
                conjuncts: conjuncts(),
                formula: None,
            },
            MappingSpec::General(f) => MappingJson {
                kind: "general".into(),
                conjuncts: None,
                formula: Some(f.to_string()),
            },
        };
        InstanceJson {
            domain_a: DomainRef::Inline(DomainJson::from_domain(p.domain_a())),
            domain_b: DomainRef::Inline(DomainJson::from_domain(p.domain_b())),
            mapping,
            stop_agent: p.stop_agent(),
        }
    }
}

impl MbsdInstance {
    /// Parses an instance document; relative domain paths resolve against `base`.
    pub fn decode(text: &str, base: Option<&Path>) -> Result<MbsdInstance, ReductionError> {
        let doc: InstanceJson = serde_json::from_str(text).map_err(json_err)?;
        doc.to_instance(base)
    }

    pub fn load(path: &Path) -> Result<MbsdInstance, ReductionError> {
        let text = read_file(path)?;
        MbsdInstance::decode(&text, path.parent())
    }

    pub fn encode(&self) -> String {
        serde_json::to_string_pretty(&InstanceJson::from_instance(self))
            .expect("instance serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// `"<s>|<t>|<annotation>"` to B's next state.
    pub moves: BTreeMap<String, String>,
    pub stop_on_goal: bool,
}

fn split_key<'k>(
    key: &'k str,
    da: &Domain,
    db: &Domain,
) -> Result<(StateId, StateId, &'k str), ReductionError> {
    let (pair, annot) = key
        .rsplit_once('|')
        .ok_or_else(|| json_err(format!("malformed move key `{key}`")))?;
    // state names may themselves contain `|`; accept the unique split
    let mut found = None;
    for (i, _) in pair.match_indices('|') {
        if let (Some(s), Some(t)) = (
            da.state_by_name(&pair[..i]),
            db.state_by_name(&pair[i + 1..]),
        ) {
            if found.replace((s, t)).is_some() {
                return Err(json_err(format!("ambiguous move key `{key}`")));
            }
        }
    }
    let (s, t) = found.ok_or_else(|| json_err(format!("move key `{key}` names unknown states")))?;
    Ok((s, t, annot))
}

impl MbsdStrategy {
    pub fn to_json(&self, p: &MbsdInstance) -> StrategyJson {
        let (da, db) = (p.domain_a(), p.domain_b());
        let moves = self
            .moves
            .iter()
            .map(|(c, &t2)| {
                (
                    format!(
                        "{}|{}|{}",
                        da.name(c.s),
                        db.name(c.t),
                        annot_text(self.kind, self.k, c.annot)
                    ),
                    db.name(t2).to_string(),
                )
            })
            .collect();
        StrategyJson {
            kind: self.kind.name().into(),
            k: (self.kind == ArenaKind::Target).then_some(self.k),
            moves,
            stop_on_goal: self.stop_on_goal,
        }
    }

    pub fn from_json(doc: &StrategyJson, p: &MbsdInstance) -> Result<MbsdStrategy, ReductionError> {
        let kind = ArenaKind::from_name(&doc.kind)
            .ok_or_else(|| json_err(format!("unknown strategy kind `{}`", doc.kind)))?;
        let k = p.mapping().conjuncts().len();
        if doc.k.is_some_and(|dk| dk != k) {
            return Err(json_err(format!(
                "strategy is for k = {}, instance has k = {k}",
                doc.k.unwrap_or(0)
            )));
        }
        let (da, db) = (p.domain_a(), p.domain_b());
        let mut moves = BTreeMap::new();
        for (key, target) in &doc.moves {
            let (s, t, annot) = split_key(key, da, db)?;
            let annot = parse_annot(kind, k, annot)
                .ok_or_else(|| json_err(format!("bad annotation in move key `{key}`")))?;
            let t2 = db.state_by_name(target).ok_or_else(|| {
                json_err(format!("move target `{target}` is not a state of domain B"))
            })?;
            moves.insert(Config { s, t, annot }, t2);
        }
        Ok(MbsdStrategy {
            kind,
            k,
            moves,
            stop_on_goal: doc.stop_on_goal,
        })
    }

    pub fn encode(&self, p: &MbsdInstance) -> String {
        serde_json::to_string_pretty(&self.to_json(p)).expect("strategy serializes")
    }

    pub fn decode(text: &str, p: &MbsdInstance) -> Result<MbsdStrategy, ReductionError> {
        let doc: StrategyJson = serde_json::from_str(text).map_err(json_err)?;
        MbsdStrategy::from_json(&doc, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::{solve_mbsd, SolveMode};

    const INSTANCE: &str = r#"{
      "domain_a": {"props": ["a"], "states": [{"id": "x", "label": []}, {"id": "y", "label": ["a"]}],
                   "init": "x", "transitions": [["x", "x"], ["x", "y"], ["y", "y"]]},
      "domain_b": {"props": ["b"], "states": [{"id": "m|0", "label": []}, {"id": "n", "label": ["b"]}],
                   "init": "m|0", "transitions": [["m|0", "m|0"], ["m|0", "n"], ["n", "n"]]},
      "mapping": {"kind": "target", "conjuncts": [{"phi": "a", "psi": "b"}]},
      "stop_agent": "B"
    }"#;

    #[test]
    fn instance_round_trip() {
        let p = MbsdInstance::decode(INSTANCE, None).unwrap();
        assert_eq!(p.mapping().conjuncts().len(), 1);
        let again = MbsdInstance::decode(&p.encode(), None).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn instance_errors() {
        let wrong_side = INSTANCE.replace(r#""phi": "a""#, r#""phi": "b""#);
        assert!(MbsdInstance::decode(&wrong_side, None).is_err());
        let bad_kind = INSTANCE.replace(r#""kind": "target""#, r#""kind": "other""#);
        assert!(matches!(
            MbsdInstance::decode(&bad_kind, None),
            Err(ReductionError::Json(_))
        ));
        let missing = INSTANCE.replace(
            r#""domain_a": {"#,
            r#""domain_a": "nowhere.json", "unused": {"#,
        );
        assert!(MbsdInstance::decode(&missing, None).is_err());
    }

    #[test]
    fn domain_paths_resolve_against_base() {
        let dir = tempfile::tempdir().unwrap();
        let p = MbsdInstance::decode(INSTANCE, None).unwrap();
        std::fs::write(dir.path().join("a.json"), p.domain_a().encode()).unwrap();
        let mut doc = InstanceJson::from_instance(&p);
        doc.domain_a = DomainRef::Path("a.json".into());
        let path = dir.path().join("inst.json");
        std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(MbsdInstance::load(&path).unwrap(), p);
    }

    #[test]
    fn strategy_round_trip_with_bar_in_names() {
        let p = MbsdInstance::decode(INSTANCE, None).unwrap();
        let st = solve_mbsd(&p, SolveMode::Target).unwrap().strategy.unwrap();
        let doc = st.to_json(&p);
        assert_eq!(doc.kind, "target");
        assert_eq!(doc.k, Some(1));
        assert!(doc.moves.keys().all(|k| k.matches('|').count() == 3));
        assert_eq!(MbsdStrategy::decode(&st.encode(&p), &p).unwrap(), st);
    }
}
