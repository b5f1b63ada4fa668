use std::collections::{BTreeMap, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automata::{Progressor, ResidualId};
use crate::domains::StateId;
use crate::games::PositionalStrategy;
use crate::ltlf::{eval_word, Letter};

use super::build::{build_general_game, joint_letter, ArenaKind, Config, ReducedGame, Semantics};
use super::{Agent, MappingKind, MbsdInstance, ReductionError};

/// Positional core over annotated arena nodes: after A moves, the current
/// `V` configuration selects B's next state. The initial answer is always
/// `t0`. With `stop_on_goal`, B stops on the first goal configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MbsdStrategy {
    pub kind: ArenaKind,
    pub k: usize,
    pub moves: BTreeMap<Config, StateId>,
    pub stop_on_goal: bool,
}

/// Projects a game strategy onto B's domain.
pub fn lift_strategy(p: &MbsdInstance, game: &ReducedGame, s: &PositionalStrategy) -> MbsdStrategy {
    let moves = s
        .moves
        .iter()
        .map(|(&v, &u)| (game.v_nodes[v], game.u_nodes[u].t))
        .collect();
    MbsdStrategy {
        kind: game.kind,
        k: game.k(),
        moves,
        stop_on_goal: p.stop_agent() == Agent::B,
    }
}

pub(crate) fn semantics_for(
    p: &MbsdInstance,
    kind: ArenaKind,
) -> Result<Semantics, ReductionError> {
    let needed = match kind {
        ArenaKind::PointWise => Some(MappingKind::PointWise),
        ArenaKind::Target | ArenaKind::Tree => Some(MappingKind::Target),
        ArenaKind::General => None,
    };
    if let Some(m) = needed {
        if p.mapping().kind() != m {
            return Err(ReductionError::Strategy(format!(
                "a {} strategy cannot run on a {} mapping",
                kind.name(),
                p.mapping().kind()
            )));
        }
    }
    match kind {
        // residual ids are those of the deterministic construction
        ArenaKind::General => Ok(build_general_game(p)?.semantics),
        _ => Semantics::new(p, kind),
    }
}

/// Runs a strategy step by step against A's moves.
#[derive(Clone, Debug)]
pub struct Executor<'a> {
    p: &'a MbsdInstance,
    strategy: &'a MbsdStrategy,
    sem: Semantics,
    cur: Config,
    steps: usize,
}

impl<'a> Executor<'a> {
    pub fn new(p: &'a MbsdInstance, strategy: &'a MbsdStrategy) -> Result<Self, ReductionError> {
        let mut sem = semantics_for(p, strategy.kind)?;
        let cur = sem.init(p.domain_a().init(), p.domain_b().init());
        Ok(Executor {
            p,
            strategy,
            sem,
            cur,
            steps: 0,
        })
    }

    pub fn state(&self) -> (StateId, StateId) {
        (self.cur.s, self.cur.t)
    }

    pub fn config(&self) -> Config {
        self.cur
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Whether the strategy stops here.
    pub fn stops(&self) -> bool {
        self.strategy.stop_on_goal && self.sem.is_goal(&self.cur)
    }

    /// A moves to `s2`; returns B's answer.
    pub fn advance(&mut self, s2: StateId) -> Result<StateId, ReductionError> {
        let (da, db) = (self.p.domain_a(), self.p.domain_b());
        let step = self.steps + 1;
        if !da.has_transition(self.cur.s, s2) {
            return Err(ReductionError::IllegalMove {
                step,
                agent: Agent::A,
                from: da.name(self.cur.s).to_string(),
                to: if s2 < da.num_states() {
                    da.name(s2).to_string()
                } else {
                    format!("#{s2}")
                },
            });
        }
        let v = self.sem.after_a(&self.cur, s2);
        let t2 = *self.strategy.moves.get(&v).ok_or_else(|| {
            ReductionError::Strategy(format!(
                "no move for ({}, {}) at step {step}",
                da.name(v.s),
                db.name(v.t)
            ))
        })?;
        if !db.has_transition(v.t, t2) {
            return Err(ReductionError::IllegalMove {
                step,
                agent: Agent::B,
                from: db.name(v.t).to_string(),
                to: if t2 < db.num_states() {
                    db.name(t2).to_string()
                } else {
                    format!("#{t2}")
                },
            });
        }
        self.cur = self.sem.after_b(&v, t2);
        self.steps = step;
        Ok(t2)
    }
}

impl MbsdStrategy {
    /// B's state after the A-history `history`, which must start at `s0`.
    pub fn respond(
        &self,
        p: &MbsdInstance,
        history: &[StateId],
    ) -> Result<StateId, ReductionError> {
        let da = p.domain_a();
        match history.first() {
            Some(&s) if s == da.init() => {}
            _ => {
                return Err(ReductionError::Strategy(
                    "history must start at the initial state of domain A".into(),
                ))
            }
        }
        let mut exec = Executor::new(p, self)?;
        let mut t = p.domain_b().init();
        for &s in &history[1..] {
            t = exec.advance(s)?;
        }
        Ok(t)
    }
}

#[derive(Clone, Debug)]
pub enum Adversary {
    /// A's moves after `s0`; A stops when the script ends.
    Script(Vec<StateId>),
    /// Uniform successor choices, seeded; A plays until the step limit.
    Seeded(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simulation {
    pub trace_a: Vec<StateId>,
    pub trace_b: Vec<StateId>,
    /// B ended the play on a goal configuration.
    pub stopped_by_b: bool,
    pub satisfied: bool,
}

impl Simulation {
    pub fn word(&self, p: &MbsdInstance) -> Vec<Letter> {
        self.trace_a
            .iter()
            .zip(&self.trace_b)
            .map(|(&s, &t)| joint_letter(p, s, t))
            .collect()
    }
}

/// Plays the strategy against an adversary for at most `max_steps` moves.
/// The verdict evaluates the mapping formula on the joint word; when B is the
/// stop agent an unstopped play counts as unsatisfied.
pub fn simulate(
    p: &MbsdInstance,
    strategy: &MbsdStrategy,
    adversary: Adversary,
    max_steps: usize,
) -> Result<Simulation, ReductionError> {
    let mut exec = Executor::new(p, strategy)?;
    let da = p.domain_a();
    let mut trace_a = vec![da.init()];
    let mut trace_b = vec![p.domain_b().init()];
    let mut rng = match adversary {
        Adversary::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Adversary::Script(_) => None,
    };
    let script = match &adversary {
        Adversary::Script(s) => s.as_slice(),
        Adversary::Seeded(_) => &[],
    };
    let mut stopped_by_b = false;
    for step in 0..=max_steps {
        if exec.stops() {
            stopped_by_b = true;
            break;
        }
        if step == max_steps {
            break;
        }
        let s = exec.state().0;
        let next = match rng.as_mut() {
            Some(rng) => {
                let succ = da.successors(s);
                succ[rng.random_range(0..succ.len())]
            }
            None => match script.get(step) {
                Some(&n) => n,
                None => break,
            },
        };
        let t = exec.advance(next)?;
        trace_a.push(next);
        trace_b.push(t);
    }
    let mut sim = Simulation {
        trace_a,
        trace_b,
        stopped_by_b,
        satisfied: false,
    };
    if p.stop_agent() == Agent::A || stopped_by_b {
        sim.satisfied = eval_word(&p.mapping().formula(), &sim.word(p))?;
    }
    Ok(sim)
}

/// Exhaustive check of the strategy against every behaviour of A, using a
/// separate progression monitor of the mapping formula on the joint word.
pub fn verify_mbsd(
    p: &MbsdInstance,
    strategy: &MbsdStrategy,
    budget: usize,
) -> Result<bool, ReductionError> {
    let (da, db) = (p.domain_a(), p.domain_b());
    let mut sem = semantics_for(p, strategy.kind)?;
    let mut monitor = Progressor::new(&p.mapping().formula())?;
    let a_mask: Vec<u64> = (0..da.num_states())
        .map(|s| monitor.mask_of(da.label(s)))
        .collect();
    let b_mask: Vec<u64> = (0..db.num_states())
        .map(|t| monitor.mask_of(db.label(t)))
        .collect();
    let start_cfg = sem.init(da.init(), db.init());
    let r0 = monitor.initial();
    let r0 = monitor.step_mask(r0, a_mask[da.init()] | b_mask[db.init()]);
    type Node = (Config, ResidualId);

    // successors of a product node; None when the strategy is undefined or illegal
    let expand =
        |(cfg, r): Node, sem: &mut Semantics, monitor: &mut Progressor| -> Option<Vec<Node>> {
            let mut out = Vec::new();
            for &s2 in da.successors(cfg.s) {
                let v = sem.after_a(&cfg, s2);
                let &t2 = strategy.moves.get(&v)?;
                if !db.has_transition(cfg.t, t2) {
                    return None;
                }
                let w = sem.after_b(&v, t2);
                out.push((w, monitor.step_mask(r, a_mask[s2] | b_mask[t2])));
            }
            Some(out)
        };

    match p.stop_agent() {
        Agent::A => {
            let mut seen: HashSet<Node> = HashSet::from([(start_cfg, r0)]);
            let mut stack = vec![(start_cfg, r0)];
            while let Some(node) = stack.pop() {
                if !monitor.is_accepting(node.1) {
                    return Ok(false);
                }
                let Some(next) = expand(node, &mut sem, &mut monitor) else {
                    return Ok(false);
                };
                for n in next {
                    if seen.insert(n) {
                        if seen.len() > budget {
                            return Err(ReductionError::BudgetExceeded(budget));
                        }
                        stack.push(n);
                    }
                }
            }
            Ok(true)
        }
        Agent::B => {
            // DFS; a back edge to an open node is a play B never stops
            let mut open: HashMap<Node, bool> = HashMap::new();
            let mut stack: Vec<(Node, Vec<Node>)> = Vec::new();
            let enter = |node: Node,
                         sem: &mut Semantics,
                         monitor: &mut Progressor,
                         open: &mut HashMap<Node, bool>|
             -> Result<Option<Option<Vec<Node>>>, ReductionError> {
                open.insert(node, true);
                if open.len() > budget {
                    return Err(ReductionError::BudgetExceeded(budget));
                }
                if strategy.stop_on_goal && sem.is_goal(&node.0) {
                    return Ok(Some(if monitor.is_accepting(node.1) {
                        Some(Vec::new())
                    } else {
                        None
                    }));
                }
                Ok(Some(expand(node, sem, monitor)))
            };
            match enter((start_cfg, r0), &mut sem, &mut monitor, &mut open)? {
                Some(Some(next)) => stack.push(((start_cfg, r0), next)),
                _ => return Ok(false),
            }
            while let Some((node, pending)) = stack.last_mut() {
                let Some(n) = pending.pop() else {
                    open.insert(*node, false);
                    stack.pop();
                    continue;
                };
                match open.get(&n) {
                    Some(true) => return Ok(false),
                    Some(false) => continue,
                    None => {}
                }
                match enter(n, &mut sem, &mut monitor, &mut open)? {
                    Some(Some(next)) => stack.push((n, next)),
                    _ => return Ok(false),
                }
            }
            Ok(true)
        }
    }
}
