//! Dynamic domains: finite serial labelled transition systems.
//!
//! States are dense indices internally; the user-facing string ids only
//! matter for serialization and diagnostics.

mod generators;
mod json;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::ltlf::{Letter, Proposition};

pub use generators::{gen_pacman, gen_random, PacmanConfig, PacmanInstance, RandomDomainConfig};
pub use json::DomainJson;

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Empty,
    InitMissing(String),
    DuplicateState(String),
    NonSerial(String),
    DanglingTransition(String, String),
    DuplicateTransition(String, String),
    LabelOutsideProps { state: String, prop: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "domain has no states"),
            Violation::InitMissing(s) => write!(f, "initial state `{s}` does not exist"),
            Violation::DuplicateState(s) => write!(f, "state id `{s}` is declared twice"),
            Violation::NonSerial(s) => write!(f, "state `{s}` has no successor"),
            Violation::DanglingTransition(a, b) => {
                write!(f, "transition `{a}` -> `{b}` has an unknown endpoint")
            }
            Violation::DuplicateTransition(a, b) => {
                write!(f, "transition `{a}` -> `{b}` is listed twice")
            }
            Violation::LabelOutsideProps { state, prop } => {
                write!(f, "label of `{state}` uses undeclared proposition `{prop}`")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DomainError {
    #[error("invalid domain: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("unknown state {0}")]
    UnknownState(String),
    #[error("malformed domain document: {0}")]
    Json(String),
    #[error("{0}")]
    Parameter(String),
    #[error("estimated {estimate} states exceeds the ceiling of {ceiling}")]
    TooLarge { estimate: u128, ceiling: u128 },
}

/// `(S, s0, delta, lambda)` over a proposition set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    props: Vec<Proposition>,
    names: Vec<String>,
    labels: Vec<Letter>,
    init: StateId,
    edges: Vec<(StateId, StateId)>,
    succ: Vec<Vec<StateId>>,
}

impl Domain {
    /// Builds and validates a domain from dense parts.
    pub fn new(
        props: impl IntoIterator<Item = Proposition>,
        states: Vec<(String, Letter)>,
        init: StateId,
        edges: Vec<(StateId, StateId)>,
    ) -> Result<Domain, DomainError> {
        let d = Domain::unchecked(props, states, init, edges);
        d.validate()?;
        Ok(d)
    }

    /// Builds a domain without checking its invariants; `validate` reports
    /// what is wrong with it.
    pub fn unchecked(
        props: impl IntoIterator<Item = Proposition>,
        states: Vec<(String, Letter)>,
        init: StateId,
        edges: Vec<(StateId, StateId)>,
    ) -> Domain {
        let props: BTreeSet<Proposition> = props.into_iter().collect();
        let (names, labels): (Vec<_>, Vec<_>) = states.into_iter().unzip();
        let mut succ = vec![Vec::new(); names.len()];
        for &(a, b) in &edges {
            if a < names.len() && b < names.len() {
                succ[a].push(b);
            }
        }
        for s in succ.iter_mut() {
            s.sort_unstable();
            s.dedup();
        }
        Domain {
            props: props.into_iter().collect(),
            names,
            labels,
            init,
            edges,
            succ,
        }
    }

    /// Checks seriality, endpoints, labels and the initial state. Every
    /// violation is reported, each naming the offending state.
    pub fn validate(&self) -> Result<(), DomainError> {
        let mut out = Vec::new();
        let n = self.names.len();
        if n == 0 {
            out.push(Violation::Empty);
        }
        if self.init >= n {
            out.push(Violation::InitMissing(format!("#{}", self.init)));
        }
        let mut seen = HashMap::new();
        for (i, name) in self.names.iter().enumerate() {
            if seen.insert(name.as_str(), i).is_some() {
                out.push(Violation::DuplicateState(name.clone()));
            }
        }
        let name = |s: StateId| {
            self.names
                .get(s)
                .cloned()
                .unwrap_or_else(|| format!("#{s}"))
        };
        let mut edge_set = BTreeSet::new();
        for &(a, b) in &self.edges {
            if a >= n || b >= n {
                out.push(Violation::DanglingTransition(name(a), name(b)));
            } else if !edge_set.insert((a, b)) {
                out.push(Violation::DuplicateTransition(name(a), name(b)));
            }
        }
        for s in 0..n {
            if self.succ[s].is_empty() {
                out.push(Violation::NonSerial(name(s)));
            }
            for p in self.labels[s].iter() {
                if self.props.binary_search(p).is_err() {
                    out.push(Violation::LabelOutsideProps {
                        state: name(s),
                        prop: p.to_string(),
                    });
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(DomainError::Invalid(out))
        }
    }

    pub fn props(&self) -> &[Proposition] {
        &self.props
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn init(&self) -> StateId {
        self.init
    }

    /// Successors in increasing index order.
    pub fn successors(&self, s: StateId) -> &[StateId] {
        &self.succ[s]
    }

    pub fn has_transition(&self, a: StateId, b: StateId) -> bool {
        self.succ
            .get(a)
            .is_some_and(|s| s.binary_search(&b).is_ok())
    }

    pub fn label(&self, s: StateId) -> &Letter {
        &self.labels[s]
    }

    pub fn name(&self, s: StateId) -> &str {
        &self.names[s]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name)
    }

    /// Whether `seq` is a nonempty sequence of consecutive transitions.
    pub fn is_trace(&self, seq: &[StateId]) -> Result<bool, DomainError> {
        if let Some(&bad) = seq.iter().find(|&&s| s >= self.num_states()) {
            return Err(DomainError::UnknownState(format!("#{bad}")));
        }
        Ok(!seq.is_empty() && seq.windows(2).all(|w| self.has_transition(w[0], w[1])))
    }

    /// Tree from the initial state once self-loops are removed, where a state
    /// with a self-loop has no other outgoing transition.
    pub fn is_tree_like(&self) -> bool {
        let n = self.num_states();
        let mut indegree = vec![0usize; n];
        for s in 0..n {
            let succ = &self.succ[s];
            if succ.contains(&s) && succ.len() > 1 {
                return false;
            }
            for &t in succ {
                if t != s {
                    indegree[t] += 1;
                }
            }
        }
        if indegree[self.init] != 0 || indegree.iter().any(|&d| d > 1) {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![self.init];
        seen[self.init] = true;
        while let Some(s) = stack.pop() {
            for &t in &self.succ[s] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    /// For tree-like domains: the parent of every state on its unique path
    /// from the initial state (`None` for the root).
    pub fn tree_parents(&self) -> Option<Vec<Option<StateId>>> {
        if !self.is_tree_like() {
            return None;
        }
        let mut parent = vec![None; self.num_states()];
        for s in 0..self.num_states() {
            for &t in &self.succ[s] {
                if t != s {
                    parent[t] = Some(s);
                }
            }
        }
        Some(parent)
    }
}
