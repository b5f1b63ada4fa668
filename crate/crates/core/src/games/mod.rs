//! Turn-based two-player games on bipartite arenas.
//!
//! P1 owns `U` and moves along `alpha` into `V`; P2 owns `V` and moves along
//! `beta` back into `U`. Objectives are stated over `U` nodes only.

mod solve;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use solve::{
    attractor, solve, solve_reachability, solve_safety, verify_strategy, Attractor, Player, Solved,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("initial node u{0} is not a P1 node")]
    InitOutOfRange(usize),
    #[error("edge {0} -> {1} leaves the arena")]
    EdgeOutOfRange(Node, Node),
    #[error("reachable node {0} has no successor")]
    Deadlock(Node),
    #[error("goal index {0} is not a P1 node")]
    GoalOutOfRange(usize),
    #[error("strategy references unknown node {0}")]
    UnknownNode(Node),
    #[error("strategy move {0} -> {1} is not an arena edge")]
    NotAnEdge(Node, Node),
    #[error("not a play: {0}")]
    NotAPlay(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Node {
    P1(usize),
    P2(usize),
}

impl std::fmt::Display for Node {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Node::P1(u) => write!(f, "u{u}"),
            Node::P2(v) => write!(f, "v{v}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObjectiveKind {
    Safe,
    Reach,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WinningObjective {
    pub kind: ObjectiveKind,
    /// Sorted, deduplicated `U` indices.
    pub goal: Vec<usize>,
}

impl WinningObjective {
    pub fn new(kind: ObjectiveKind, goal: impl IntoIterator<Item = usize>) -> Self {
        let mut goal: Vec<usize> = goal.into_iter().collect();
        goal.sort_unstable();
        goal.dedup();
        WinningObjective { kind, goal }
    }

    pub fn safe(goal: impl IntoIterator<Item = usize>) -> Self {
        Self::new(ObjectiveKind::Safe, goal)
    }

    pub fn reach(goal: impl IntoIterator<Item = usize>) -> Self {
        Self::new(ObjectiveKind::Reach, goal)
    }
}

/// P2 moves, `V` index to `U` index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionalStrategy {
    pub moves: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameArena {
    init: usize,
    alpha: Vec<Vec<usize>>,
    beta: Vec<Vec<usize>>,
}

impl GameArena {
    /// `alpha[u]` lists the `V` successors of `u`, `beta[v]` the `U`
    /// successors of `v`. Successor lists are sorted and deduplicated.
    pub fn new(
        init: usize,
        mut alpha: Vec<Vec<usize>>,
        mut beta: Vec<Vec<usize>>,
    ) -> Result<GameArena, GameError> {
        if init >= alpha.len() {
            return Err(GameError::InitOutOfRange(init));
        }
        for (u, succ) in alpha.iter_mut().enumerate() {
            succ.sort_unstable();
            succ.dedup();
            if let Some(&v) = succ.iter().find(|&&v| v >= beta.len()) {
                return Err(GameError::EdgeOutOfRange(Node::P1(u), Node::P2(v)));
            }
        }
        let n_u = alpha.len();
        for (v, succ) in beta.iter_mut().enumerate() {
            succ.sort_unstable();
            succ.dedup();
            if let Some(&u) = succ.iter().find(|&&u| u >= n_u) {
                return Err(GameError::EdgeOutOfRange(Node::P2(v), Node::P1(u)));
            }
        }
        let arena = GameArena { init, alpha, beta };
        if let Some(node) = arena.reachable_deadlock() {
            return Err(GameError::Deadlock(node));
        }
        Ok(arena)
    }

    fn reachable_deadlock(&self) -> Option<Node> {
        let mut seen_u = vec![false; self.num_p1()];
        let mut seen_v = vec![false; self.num_p2()];
        let mut stack = vec![self.init];
        seen_u[self.init] = true;
        while let Some(u) = stack.pop() {
            if self.alpha[u].is_empty() {
                return Some(Node::P1(u));
            }
            for &v in &self.alpha[u] {
                if seen_v[v] {
                    continue;
                }
                seen_v[v] = true;
                if self.beta[v].is_empty() {
                    return Some(Node::P2(v));
                }
                for &w in &self.beta[v] {
                    if !seen_u[w] {
                        seen_u[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        None
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn num_p1(&self) -> usize {
        self.alpha.len()
    }

    pub fn num_p2(&self) -> usize {
        self.beta.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.num_p1() + self.num_p2()
    }

    pub fn num_edges(&self) -> usize {
        self.alpha.iter().chain(&self.beta).map(Vec::len).sum()
    }

    pub fn alpha(&self, u: usize) -> &[usize] {
        &self.alpha[u]
    }

    pub fn beta(&self, v: usize) -> &[usize] {
        &self.beta[v]
    }

    pub fn has_beta(&self, v: usize, u: usize) -> bool {
        self.beta
            .get(v)
            .is_some_and(|s| s.binary_search(&u).is_ok())
    }

    /// Checks alternation from `u0` and that the play ends in a P1 node.
    pub fn check_play(&self, nodes: &[Node]) -> Result<(), GameError> {
        match nodes.first() {
            Some(&Node::P1(u)) if u == self.init => {}
            _ => return Err(GameError::NotAPlay("must start at the initial node".into())),
        }
        for (i, w) in nodes.windows(2).enumerate() {
            let ok = match (w[0], w[1]) {
                (Node::P1(u), Node::P2(v)) => self.alpha.get(u).is_some_and(|s| s.contains(&v)),
                (Node::P2(v), Node::P1(u)) => self.has_beta(v, u),
                _ => false,
            };
            if !ok {
                return Err(GameError::NotAPlay(format!(
                    "step {i} is not an arena edge"
                )));
            }
        }
        match nodes.last() {
            Some(Node::P1(_)) => Ok(()),
            _ => Err(GameError::NotAPlay("must end in a P1 node".into())),
        }
    }

    /// P1 nodes are boxes, P2 nodes circles, goal nodes filled.
    pub fn to_dot(&self, goal: &[usize]) -> String {
        let mut out = String::from("digraph arena {\n  rankdir=LR;\n");
        for u in 0..self.num_p1() {
            let fill = if goal.binary_search(&u).is_ok() {
                ", style=filled, fillcolor=lightgrey"
            } else {
                ""
            };
            let _ = writeln!(out, "  u{u} [shape=box{fill}];");
        }
        for v in 0..self.num_p2() {
            let _ = writeln!(out, "  v{v} [shape=circle];");
        }
        let _ = writeln!(out, "  start [shape=point];\n  start -> u{};", self.init);
        for (u, succ) in self.alpha.iter().enumerate() {
            for v in succ {
                let _ = writeln!(out, "  u{u} -> v{v};");
            }
        }
        for (v, succ) in self.beta.iter().enumerate() {
            for u in succ {
                let _ = writeln!(out, "  v{v} -> u{u};");
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deadlocks_are_rejected_only_when_reachable() {
        assert_eq!(
            GameArena::new(0, vec![vec![0]], vec![vec![]]),
            Err(GameError::Deadlock(Node::P2(0)))
        );
        // u1 is stuck but unreachable
        assert!(GameArena::new(0, vec![vec![0], vec![]], vec![vec![0]]).is_ok());
        assert_eq!(
            GameArena::new(0, vec![vec![3]], vec![vec![0]]),
            Err(GameError::EdgeOutOfRange(Node::P1(0), Node::P2(3)))
        );
        assert_eq!(
            GameArena::new(2, vec![vec![0]], vec![vec![0]]),
            Err(GameError::InitOutOfRange(2))
        );
    }

    #[test]
    fn plays() {
        let a = GameArena::new(0, vec![vec![0], vec![0]], vec![vec![0, 1]]).unwrap();
        assert!(a.check_play(&[Node::P1(0)]).is_ok());
        assert!(a
            .check_play(&[Node::P1(0), Node::P2(0), Node::P1(1)])
            .is_ok());
        assert!(a.check_play(&[Node::P1(0), Node::P2(0)]).is_err());
        assert!(a.check_play(&[Node::P1(1)]).is_err());
    }

    #[test]
    fn dot_marks_goal_nodes() {
        let a = GameArena::new(0, vec![vec![0]], vec![vec![0]]).unwrap();
        let dot = a.to_dot(&[0]);
        assert!(dot.contains("u0 [shape=box, style=filled"));
        assert!(dot.contains("v0 [shape=circle]"));
        assert!(dot.contains("v0 -> u0;"));
    }
}
