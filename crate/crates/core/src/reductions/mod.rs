//! Mimicking-behaviour synthesis problems and their reductions to games.
//!
//! An instance pairs two domains with a mapping specification. Agent A moves
//! first at every step; agent B answers knowing A's move. The stop agent
//! decides when the joint trace ends.

mod build;
mod json;
mod solve;
mod strategy;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::AutomataError;
use crate::domains::{Domain, DomainError};
use crate::games::GameError;
use crate::ltlf::{Formula, LtlfError};

pub use build::{
    build_general_game, build_pointwise_game, build_target_game, build_target_game_capped,
    build_tree_game, ArenaKind, Config, ReducedGame, DEFAULT_K_CAP,
};
pub use json::{ConjunctJson, DomainRef, InstanceJson, MappingJson, StrategyJson};
pub use solve::{
    solve_mbsd, solve_mbsd_with, solve_tree_target, SolveMode, SolveOptions, SolveResult,
    SolveStats,
};
pub use strategy::{
    lift_strategy, simulate, verify_mbsd, Adversary, Executor, MbsdStrategy, Simulation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Agent {
    A,
    B,
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Agent::A => "A",
            Agent::B => "B",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MappingKind {
    PointWise,
    Target,
    General,
}

impl fmt::Display for MappingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MappingKind::PointWise => "pointwise",
            MappingKind::Target => "target",
            MappingKind::General => "general",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MappingSpec {
    /// `G /\ (phi_i -> psi_i)`
    PointWise(Vec<(Formula, Formula)>),
    /// `/\ (F phi_i -> F psi_i)`
    Target(Vec<(Formula, Formula)>),
    General(Formula),
}

impl MappingSpec {
    pub fn kind(&self) -> MappingKind {
        match self {
            MappingSpec::PointWise(_) => MappingKind::PointWise,
            MappingSpec::Target(_) => MappingKind::Target,
            MappingSpec::General(_) => MappingKind::General,
        }
    }

    /// Conjunct pairs; empty for general mappings.
    pub fn conjuncts(&self) -> &[(Formula, Formula)] {
        match self {
            MappingSpec::PointWise(c) | MappingSpec::Target(c) => c,
            MappingSpec::General(_) => &[],
        }
    }

    /// The propositional invariant `/\ (phi_i -> psi_i)`.
    pub fn invariant(&self) -> Formula {
        Formula::conjunction(
            self.conjuncts()
                .iter()
                .map(|(phi, psi)| Formula::implies(phi.clone(), psi.clone())),
        )
    }

    /// The LTLf formula the mapping stands for.
    pub fn formula(&self) -> Formula {
        match self {
            MappingSpec::PointWise(_) => Formula::globally(self.invariant()),
            MappingSpec::Target(c) => Formula::conjunction(c.iter().map(|(phi, psi)| {
                Formula::implies(
                    Formula::eventually(phi.clone()),
                    Formula::eventually(psi.clone()),
                )
            })),
            MappingSpec::General(f) => f.clone(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Ltlf(#[from] LtlfError),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error("propositions shared by both domains: {}", .0.join(", "))]
    SharedPropositions(Vec<String>),
    #[error("{kind} mappings require stop agent {expected}")]
    StopAgent { kind: MappingKind, expected: Agent },
    #[error("mapping has no conjuncts")]
    NoConjuncts,
    #[error("conjunct {index}: the {side} side must be temporal-free")]
    TemporalSide { index: usize, side: Agent },
    #[error("conjunct {index}: proposition `{prop}` does not belong to domain {side}")]
    ForeignAtom {
        index: usize,
        side: Agent,
        prop: String,
    },
    #[error("proposition `{0}` belongs to neither domain")]
    UnknownAtom(String),
    #[error("{k} conjuncts exceed the cap of {cap} (up to {estimate} arena nodes)")]
    TooManyConjuncts {
        k: usize,
        cap: usize,
        estimate: u128,
    },
    #[error("domain {0} is not tree-like; use the memory-bit target reduction")]
    NotTreeLike(Agent),
    #[error("mode {mode} cannot solve a {kind} mapping")]
    ModeMismatch { mode: SolveMode, kind: MappingKind },
    #[error("malformed document: {0}")]
    Json(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("exploration exceeded the budget of {0} configurations")]
    BudgetExceeded(usize),
    #[error("step {step}: `{from}` -> `{to}` is not a transition of domain {agent}")]
    IllegalMove {
        step: usize,
        agent: Agent,
        from: String,
        to: String,
    },
    #[error("strategy: {0}")]
    Strategy(String),
}

impl ReductionError {
    /// Whether the failure is a configured size limit rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            ReductionError::TooManyConjuncts { .. }
                | ReductionError::BudgetExceeded(_)
                | ReductionError::Domain(DomainError::TooLarge { .. })
                | ReductionError::Automata(
                    AutomataError::StateCeiling { .. }
                        | AutomataError::PropositionCapExceeded { .. }
                        | AutomataError::TooManyPropositions { .. }
                )
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MbsdInstance {
    domain_a: Domain,
    domain_b: Domain,
    mapping: MappingSpec,
    stop_agent: Agent,
}

impl MbsdInstance {
    pub fn new(
        domain_a: Domain,
        domain_b: Domain,
        mapping: MappingSpec,
        stop_agent: Agent,
    ) -> Result<MbsdInstance, ReductionError> {
        let shared: Vec<String> = domain_a
            .props()
            .iter()
            .filter(|p| domain_b.props().binary_search(p).is_ok())
            .map(|p| p.to_string())
            .collect();
        if !shared.is_empty() {
            return Err(ReductionError::SharedPropositions(shared));
        }
        match (mapping.kind(), stop_agent) {
            (MappingKind::PointWise, Agent::B) => {
                return Err(ReductionError::StopAgent {
                    kind: MappingKind::PointWise,
                    expected: Agent::A,
                })
            }
            (MappingKind::Target, Agent::A) => {
                return Err(ReductionError::StopAgent {
                    kind: MappingKind::Target,
                    expected: Agent::B,
                })
            }
            _ => {}
        }
        if let MappingSpec::General(f) = &mapping {
            if let Some(p) = f.propositions().into_iter().find(|p| {
                domain_a.props().binary_search(p).is_err()
                    && domain_b.props().binary_search(p).is_err()
            }) {
                return Err(ReductionError::UnknownAtom(p.to_string()));
            }
        } else {
            if mapping.conjuncts().is_empty() {
                return Err(ReductionError::NoConjuncts);
            }
            for (index, (phi, psi)) in mapping.conjuncts().iter().enumerate() {
                for (side, f, d) in [(Agent::A, phi, &domain_a), (Agent::B, psi, &domain_b)] {
                    if !f.is_temporal_free() {
                        return Err(ReductionError::TemporalSide { index, side });
                    }
                    if let Some(p) = f
                        .propositions()
                        .into_iter()
                        .find(|p| d.props().binary_search(p).is_err())
                    {
                        return Err(ReductionError::ForeignAtom {
                            index,
                            side,
                            prop: p.to_string(),
                        });
                    }
                }
            }
        }
        Ok(MbsdInstance {
            domain_a,
            domain_b,
            mapping,
            stop_agent,
        })
    }

    pub fn domain_a(&self) -> &Domain {
        &self.domain_a
    }

    pub fn domain_b(&self) -> &Domain {
        &self.domain_b
    }

    pub fn mapping(&self) -> &MappingSpec {
        &self.mapping
    }

    pub fn stop_agent(&self) -> Agent {
        self.stop_agent
    }

    /// The same domains with the mapping replaced by its general formula.
    pub fn as_general(&self) -> MbsdInstance {
        MbsdInstance {
            mapping: MappingSpec::General(self.mapping.formula()),
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltlf::{Letter, Proposition};

    fn single(prop: &str, label: &[&str]) -> Domain {
        Domain::new(
            [Proposition::new(prop).unwrap()],
            vec![("s".into(), Letter::of(label))],
            0,
            vec![(0, 0)],
        )
        .unwrap()
    }

    fn atom(s: &str) -> Formula {
        Formula::atom(s).unwrap()
    }

    #[test]
    fn instance_validation() {
        let pw = MappingSpec::PointWise(vec![(atom("a"), atom("b"))]);
        assert!(
            MbsdInstance::new(single("a", &[]), single("b", &[]), pw.clone(), Agent::A).is_ok()
        );
        assert_eq!(
            MbsdInstance::new(single("a", &[]), single("b", &[]), pw.clone(), Agent::B),
            Err(ReductionError::StopAgent {
                kind: MappingKind::PointWise,
                expected: Agent::A
            })
        );
        assert_eq!(
            MbsdInstance::new(single("a", &[]), single("a", &[]), pw, Agent::A),
            Err(ReductionError::SharedPropositions(vec!["a".into()]))
        );
        let swapped = MappingSpec::Target(vec![(atom("b"), atom("a"))]);
        assert!(matches!(
            MbsdInstance::new(single("a", &[]), single("b", &[]), swapped, Agent::B),
            Err(ReductionError::ForeignAtom {
                index: 0,
                side: Agent::A,
                ..
            })
        ));
        let temporal = MappingSpec::Target(vec![(Formula::eventually(atom("a")), atom("b"))]);
        assert!(matches!(
            MbsdInstance::new(single("a", &[]), single("b", &[]), temporal, Agent::B),
            Err(ReductionError::TemporalSide {
                index: 0,
                side: Agent::A
            })
        ));
        let general = MappingSpec::General(Formula::eventually(atom("c")));
        assert_eq!(
            MbsdInstance::new(single("a", &[]), single("b", &[]), general, Agent::B),
            Err(ReductionError::UnknownAtom("c".into()))
        );
        assert_eq!(
            MbsdInstance::new(
                single("a", &[]),
                single("b", &[]),
                MappingSpec::PointWise(vec![]),
                Agent::A
            ),
            Err(ReductionError::NoConjuncts)
        );
    }

    #[test]
    fn mapping_formulas() {
        let c = vec![(atom("a"), atom("b"))];
        assert_eq!(
            MappingSpec::PointWise(c.clone()).formula().to_string(),
            "G (a -> b)"
        );
        assert_eq!(MappingSpec::Target(c).formula().to_string(), "(F a -> F b)");
    }
}
