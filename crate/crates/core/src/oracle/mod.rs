//! Brute-force deciders kept apart from the solver paths: bounded min-max
//! over game arenas, and direct search over joint traces of an instance.
//!
//! Nothing here touches the arena builders or the automaton construction;
//! the only shared pieces are the LTLf semantics and the data types.

mod residual;

use std::collections::HashMap;

use thiserror::Error;

use crate::domains::StateId;
use crate::games::{GameArena, GameError, ObjectiveKind, Player, WinningObjective};
use crate::ltlf::{eval_word, Formula, Letter, LtlfError};
use crate::reductions::{Agent, MappingKind, MbsdInstance};

use residual::{reachable_residuals, Residual};

/// Largest `|S| * |T|` the instance search accepts.
pub const PAIR_CAP: usize = 200;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{pairs} state pairs exceed the oracle cap of {cap}")]
    TooLarge { pairs: usize, cap: usize },
    #[error("depth bound must be at least 1")]
    ZeroDepth,
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Ltlf(#[from] LtlfError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub winner: Player,
    /// Longest play prefix, in moves, the search looked at.
    pub depth_used: usize,
    pub nodes_expanded: usize,
    /// The bound was below `2 * |U u V|`, so the verdict may be an artifact
    /// of the cutoff.
    pub bounded: bool,
}

/// Exhaustive alternating search to `depth_bound` moves. Safe: P1 wins iff it
/// forces a non-goal `U` node within the bound. Reach: P2 wins iff it forces
/// a goal node within the bound. Results are memoized per (node, remaining
/// depth), which is exact because the outcome depends on nothing else.
pub fn minmax_decide(
    a: &GameArena,
    w: &WinningObjective,
    depth_bound: usize,
) -> Result<OracleVerdict, OracleError> {
    if depth_bound == 0 {
        return Err(OracleError::ZeroDepth);
    }
    let mut goal = vec![false; a.num_p1()];
    for &g in &w.goal {
        *goal.get_mut(g).ok_or(GameError::GoalOutOfRange(g))? = true;
    }
    struct Search<'a> {
        a: &'a GameArena,
        goal: Vec<bool>,
        kind: ObjectiveKind,
        bound: usize,
        memo: HashMap<(usize, usize), bool>,
        expanded: usize,
        deepest: usize,
    }
    impl Search<'_> {
        /// Whether P2 wins from `u` with `left` moves remaining.
        fn p2_wins(&mut self, u: usize, left: usize) -> bool {
            self.deepest = self.deepest.max(self.bound - left);
            let here = self.goal[u];
            match self.kind {
                ObjectiveKind::Safe if !here => return false,
                ObjectiveKind::Reach if here => return true,
                _ => {}
            }
            if left < 2 {
                return self.kind == ObjectiveKind::Safe;
            }
            if let Some(&r) = self.memo.get(&(u, left)) {
                return r;
            }
            self.expanded += 1;
            let a = self.a;
            let r = a
                .alpha(u)
                .iter()
                .all(|&v| a.beta(v).iter().any(|&w| self.p2_wins(w, left - 2)));
            self.memo.insert((u, left), r);
            r
        }
    }
    let mut search = Search {
        a,
        goal,
        kind: w.kind,
        bound: depth_bound,
        memo: HashMap::new(),
        expanded: 0,
        deepest: 0,
    };
    let p2 = search.p2_wins(a.init(), depth_bound);
    Ok(OracleVerdict {
        winner: if p2 { Player::P2 } else { Player::P1 },
        depth_used: search.deepest,
        nodes_expanded: search.expanded,
        bounded: depth_bound < 2 * a.num_nodes(),
    })
}

fn joint(p: &MbsdInstance, s: StateId, t: StateId) -> Letter {
    p.domain_a().label(s).union(p.domain_b().label(t))
}

/// Horizon in moves: `2|S x T| * 2` for point-wise, `2|S x T| * 2k` for
/// target, and `2|S x T| * |R|` for general mappings, where `R` is the set of
/// progression residuals reachable on the joint labels that occur.
pub fn default_horizon(p: &MbsdInstance) -> usize {
    let pairs = p.domain_a().num_states() * p.domain_b().num_states();
    let factor = match p.mapping().kind() {
        MappingKind::PointWise => 2,
        MappingKind::Target => 2 * p.mapping().conjuncts().len(),
        MappingKind::General => {
            let letters: Vec<Letter> = (0..p.domain_a().num_states())
                .flat_map(|s| (0..p.domain_b().num_states()).map(move |t| (s, t)))
                .map(|(s, t)| joint(p, s, t))
                .collect();
            reachable_residuals(&p.mapping().formula(), &letters)
        }
    };
    2 * pairs * factor.max(1)
}

/// Decides the instance from its definition: B must answer every A move so
/// that, when A stops (stop agent A), every prefix satisfies the mapping, or
/// so that B can reach a satisfying prefix and stop (stop agent B). The
/// search covers `horizon` moves (`horizon / 2` joint steps).
pub fn oracle_mbsd(p: &MbsdInstance, horizon: Option<usize>) -> Result<bool, OracleError> {
    let (da, db) = (p.domain_a(), p.domain_b());
    let pairs = da.num_states() * db.num_states();
    if pairs > PAIR_CAP {
        return Err(OracleError::TooLarge {
            pairs,
            cap: PAIR_CAP,
        });
    }
    let steps = horizon.unwrap_or_else(|| default_horizon(p)) / 2;
    let phi = p.mapping().formula();

    struct Search<'a> {
        p: &'a MbsdInstance,
        phi: &'a Formula,
        stop_a: bool,
        word: Vec<Letter>,
        memo: HashMap<(StateId, StateId, Residual, usize), bool>,
    }
    impl Search<'_> {
        /// `r` is the obligation left on the suffix after `word`.
        fn b_wins(
            &mut self,
            s: StateId,
            t: StateId,
            r: Residual,
            left: usize,
        ) -> Result<bool, LtlfError> {
            let key = (s, t, r, left);
            if let Some(&v) = self.memo.get(&key) {
                return Ok(v);
            }
            let (s, t, r, left) = key;
            let satisfied = eval_word(self.phi, &self.word)?;
            debug_assert_eq!(satisfied, r.accepts_empty());
            let result = if self.stop_a && !satisfied {
                false
            } else if !self.stop_a && satisfied {
                true
            } else if left == 0 {
                self.stop_a
            } else {
                let (da, db) = (self.p.domain_a(), self.p.domain_b());
                let mut all = true;
                for &s2 in da.successors(s) {
                    let mut any = false;
                    for &t2 in db.successors(t) {
                        let letter = joint(self.p, s2, t2);
                        let r2 = r.progress(&letter);
                        self.word.push(letter);
                        let w = self.b_wins(s2, t2, r2, left - 1);
                        self.word.pop();
                        if w? {
                            any = true;
                            break;
                        }
                    }
                    if !any {
                        all = false;
                        break;
                    }
                }
                all
            };
            self.memo.insert((s, t, r, left), result);
            Ok(result)
        }
    }
    let first = joint(p, da.init(), db.init());
    let r0 = Residual::initial(&phi).progress(&first);
    let mut search = Search {
        p,
        phi: &phi,
        stop_a: p.stop_agent() == Agent::A,
        word: vec![first],
        memo: HashMap::new(),
    };
    Ok(search.b_wins(da.init(), db.init(), r0, steps)?)
}
