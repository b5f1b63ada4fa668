use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::ltlf::{Letter, Proposition};

use super::{Domain, DomainError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainJson {
    pub props: Vec<String>,
    pub states: Vec<StateJson>,
    pub init: String,
    pub transitions: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub id: String,
    pub label: Vec<String>,
}

fn prop(name: &str) -> Result<Proposition, DomainError> {
    Proposition::new(name).map_err(|e| DomainError::Json(e.to_string()))
}

impl DomainJson {
    /// Canonical document: every array sorted.
    pub fn from_domain(d: &Domain) -> DomainJson {
        let mut states: Vec<StateJson> = (0..d.num_states())
            .map(|s| StateJson {
                id: d.name(s).to_string(),
                label: d.label(s).iter().map(|p| p.to_string()).collect(),
            })
            .collect();
        states.sort_by(|a, b| a.id.cmp(&b.id));
        let mut transitions: Vec<(String, String)> = (0..d.num_states())
            .flat_map(|s| {
                d.successors(s)
                    .iter()
                    .map(move |&t| (d.name(s).to_string(), d.name(t).to_string()))
            })
            .collect();
        transitions.sort();
        let mut props: Vec<String> = d.props().iter().map(|p| p.to_string()).collect();
        props.sort();
        DomainJson {
            props,
            states,
            init: d.name(d.init()).to_string(),
            transitions,
        }
    }

    /// Converts to a validated domain. State indices follow document order.
    pub fn to_domain(&self) -> Result<Domain, DomainError> {
        let props = self
            .props
            .iter()
            .map(|p| prop(p))
            .collect::<Result<Vec<_>, _>>()?;
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut states = Vec::with_capacity(self.states.len());
        for (i, s) in self.states.iter().enumerate() {
            if index.insert(s.id.as_str(), i).is_some() {
                return Err(DomainError::Json(format!("duplicate state id `{}`", s.id)));
            }
            let label = s.label.iter().map(|p| prop(p)).collect::<Result<_, _>>()?;
            states.push((s.id.clone(), Letter(label)));
        }
        let init = *index.get(self.init.as_str()).ok_or_else(|| {
            DomainError::Json(format!("initial state `{}` is not declared", self.init))
        })?;
        let mut edges = Vec::with_capacity(self.transitions.len());
        for (a, b) in &self.transitions {
            let lookup = |x: &String| {
                index.get(x.as_str()).copied().ok_or_else(|| {
                    DomainError::Json(format!("transition endpoint `{x}` is not declared"))
                })
            };
            edges.push((lookup(a)?, lookup(b)?));
        }
        Domain::new(props, states, init, edges)
    }
}

impl Domain {
    pub fn encode(&self) -> String {
        serde_json::to_string_pretty(&DomainJson::from_domain(self)).expect("domain serializes")
    }

    pub fn decode(text: &str) -> Result<Domain, DomainError> {
        let doc: DomainJson =
            serde_json::from_str(text).map_err(|e| DomainError::Json(e.to_string()))?;
        doc.to_domain()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::Violation;

    const DOC: &str = r#"{
  "props": ["p", "q"],
  "states": [
    {"id": "a", "label": ["p"]},
    {"id": "b", "label": []}
  ],
  "init": "a",
  "transitions": [["a", "b"], ["b", "a"], ["b", "b"]]
}"#;

    #[test]
    fn round_trip_canonical_document() {
        let d = Domain::decode(DOC).unwrap();
        assert_eq!(d.num_states(), 2);
        assert!(d.has_transition(1, 0));
        let again = d.encode();
        let v1: serde_json::Value = serde_json::from_str(DOC).unwrap();
        let v2: serde_json::Value = serde_json::from_str(&again).unwrap();
        assert_eq!(v1, v2);
        assert_eq!(Domain::decode(&again).unwrap(), d);
    }

    #[test]
    fn missing_init_is_rejected() {
        let doc = DOC.replace("\"init\": \"a\",", "");
        assert!(matches!(Domain::decode(&doc), Err(DomainError::Json(_))));
    }

    #[test]
    fn duplicate_state_is_rejected() {
        let doc = DOC.replace("\"id\": \"b\"", "\"id\": \"a\"");
        assert!(
            matches!(Domain::decode(&doc), Err(DomainError::Json(m)) if m.contains("duplicate"))
        );
    }

    #[test]
    fn duplicate_transition_is_rejected() {
        let doc = DOC.replace("[\"b\", \"b\"]", "[\"b\", \"a\"]");
        assert_eq!(
            Domain::decode(&doc),
            Err(DomainError::Invalid(vec![Violation::DuplicateTransition(
                "b".into(),
                "a".into()
            ),]))
        );
    }

    #[test]
    fn validation_runs_on_decode() {
        let doc = DOC.replace(", [\"b\", \"a\"], [\"b\", \"b\"]", "");
        assert_eq!(
            Domain::decode(&doc),
            Err(DomainError::Invalid(vec![Violation::NonSerial("b".into())]))
        );
        assert!(Domain::decode("{not json").is_err());
    }
}
