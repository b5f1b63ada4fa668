use std::collections::VecDeque;

use super::{GameArena, GameError, Node, ObjectiveKind, PositionalStrategy, WinningObjective};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Player {
    P1,
    P2,
}

/// Attractor with BFS ranks over the combined index space: `U` nodes first,
/// then `V` nodes at offset `num_p1`.
#[derive(Clone, Debug)]
pub struct Attractor {
    pub rank: Vec<Option<u32>>,
    /// Backward edge traversals; at most the number of arena edges.
    pub edge_visits: usize,
}

impl Attractor {
    pub fn contains_p1(&self, u: usize) -> bool {
        self.rank[u].is_some()
    }
}

/// Nodes from which `player` forces a visit to `target` (a subset of `U`).
/// Counter-based backward BFS: each edge is traversed once.
pub fn attractor(a: &GameArena, player: Player, target: &[bool]) -> Attractor {
    let n_u = a.num_p1();
    let n = a.num_nodes();
    let mut pred_start = vec![0usize; n + 1];
    for u in 0..n_u {
        for &v in a.alpha(u) {
            pred_start[n_u + v + 1] += 1;
        }
    }
    for v in 0..a.num_p2() {
        for &u in a.beta(v) {
            pred_start[u + 1] += 1;
        }
    }
    for i in 0..n {
        pred_start[i + 1] += pred_start[i];
    }
    let mut fill = pred_start.clone();
    let mut preds = vec![0usize; pred_start[n]];
    for u in 0..n_u {
        for &v in a.alpha(u) {
            preds[fill[n_u + v]] = u;
            fill[n_u + v] += 1;
        }
    }
    for v in 0..a.num_p2() {
        for &u in a.beta(v) {
            preds[fill[u]] = n_u + v;
            fill[u] += 1;
        }
    }

    let mut counter: Vec<usize> = (0..n_u)
        .map(|u| a.alpha(u).len())
        .chain((0..a.num_p2()).map(|v| a.beta(v).len()))
        .collect();
    let owned_by_attractor = |x: usize| match player {
        Player::P1 => x < n_u,
        Player::P2 => x >= n_u,
    };
    let mut rank = vec![None; n];
    let mut queue = VecDeque::new();
    for (u, &t) in target.iter().enumerate() {
        if t {
            rank[u] = Some(0);
            queue.push_back(u);
        }
    }
    let mut edge_visits = 0;
    while let Some(x) = queue.pop_front() {
        let r = rank[x].expect("queued nodes are ranked");
        for &p in &preds[pred_start[x]..pred_start[x + 1]] {
            edge_visits += 1;
            if rank[p].is_some() {
                continue;
            }
            counter[p] -= 1;
            if owned_by_attractor(p) || counter[p] == 0 {
                rank[p] = Some(r + 1);
                queue.push_back(p);
            }
        }
    }
    Attractor { rank, edge_visits }
}

#[derive(Clone, Debug)]
pub struct Solved {
    pub strategy: Option<PositionalStrategy>,
    pub edge_visits: usize,
}

fn goal_mask(a: &GameArena, goal: &[usize]) -> Result<Vec<bool>, GameError> {
    let mut mask = vec![false; a.num_p1()];
    for &g in goal {
        *mask.get_mut(g).ok_or(GameError::GoalOutOfRange(g))? = true;
    }
    Ok(mask)
}

/// Keeps only the moves used from `u0` under `choice`, not continuing past
/// nodes where `stop` holds.
fn restrict(
    a: &GameArena,
    choice: impl Fn(usize) -> Option<usize>,
    stop: impl Fn(usize) -> bool,
) -> PositionalStrategy {
    let mut strategy = PositionalStrategy::default();
    let mut seen = vec![false; a.num_p1()];
    let mut stack = vec![a.init()];
    seen[a.init()] = true;
    while let Some(u) = stack.pop() {
        if stop(u) {
            continue;
        }
        for &v in a.alpha(u) {
            if strategy.moves.contains_key(&v) {
                continue;
            }
            let Some(w) = choice(v) else { continue };
            strategy.moves.insert(v, w);
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    strategy
}

pub fn solve(a: &GameArena, w: &WinningObjective) -> Result<Solved, GameError> {
    let goal = goal_mask(a, &w.goal)?;
    let n_u = a.num_p1();
    match w.kind {
        ObjectiveKind::Safe => {
            let unsafe_set: Vec<bool> = goal.iter().map(|g| !g).collect();
            let attr = attractor(a, Player::P1, &unsafe_set);
            let strategy = (!attr.contains_p1(a.init())).then(|| {
                restrict(
                    a,
                    |v| a.beta(v).iter().copied().find(|&u| !attr.contains_p1(u)),
                    |_| false,
                )
            });
            Ok(Solved {
                strategy,
                edge_visits: attr.edge_visits,
            })
        }
        ObjectiveKind::Reach => {
            let attr = attractor(a, Player::P2, &goal);
            let strategy = attr.contains_p1(a.init()).then(|| {
                restrict(
                    a,
                    |v| {
                        let r = attr.rank[n_u + v]?;
                        a.beta(v)
                            .iter()
                            .copied()
                            .find(|&u| attr.rank[u].is_some_and(|ru| ru < r))
                    },
                    |u| goal[u],
                )
            });
            Ok(Solved {
                strategy,
                edge_visits: attr.edge_visits,
            })
        }
    }
}

/// P2 strategy for Safe(g), if P2 wins from `u0`.
pub fn solve_safety(
    a: &GameArena,
    goal: &[usize],
) -> Result<Option<PositionalStrategy>, GameError> {
    Ok(solve(a, &WinningObjective::safe(goal.iter().copied()))?.strategy)
}

/// P2 strategy for Reach(g), if P2 wins from `u0`.
pub fn solve_reachability(
    a: &GameArena,
    goal: &[usize],
) -> Result<Option<PositionalStrategy>, GameError> {
    Ok(solve(a, &WinningObjective::reach(goal.iter().copied()))?.strategy)
}

/// Checks `s` against every P1 behaviour, without reference to any solver.
pub fn verify_strategy(
    a: &GameArena,
    w: &WinningObjective,
    s: &PositionalStrategy,
) -> Result<bool, GameError> {
    let goal = goal_mask(a, &w.goal)?;
    for (&v, &u) in &s.moves {
        if v >= a.num_p2() {
            return Err(GameError::UnknownNode(Node::P2(v)));
        }
        if u >= a.num_p1() {
            return Err(GameError::UnknownNode(Node::P1(u)));
        }
        if !a.has_beta(v, u) {
            return Err(GameError::NotAnEdge(Node::P2(v), Node::P1(u)));
        }
    }
    let next = |u: usize| a.alpha(u).iter().map(|v| s.moves.get(v).copied());
    match w.kind {
        ObjectiveKind::Safe => {
            let mut seen = vec![false; a.num_p1()];
            let mut stack = vec![a.init()];
            seen[a.init()] = true;
            while let Some(u) = stack.pop() {
                if !goal[u] {
                    return Ok(false);
                }
                for w in next(u) {
                    let Some(w) = w else { return Ok(false) };
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            Ok(true)
        }
        ObjectiveKind::Reach => {
            // iterative DFS over U with goal nodes as sinks; a grey hit is a cycle
            const WHITE: u8 = 0;
            const GREY: u8 = 1;
            const BLACK: u8 = 2;
            let mut colour = vec![WHITE; a.num_p1()];
            let mut stack: Vec<(usize, usize)> = vec![(a.init(), 0)];
            colour[a.init()] = GREY;
            while let Some(&mut (u, ref mut i)) = stack.last_mut() {
                if goal[u] || *i == a.alpha(u).len() {
                    colour[u] = BLACK;
                    stack.pop();
                    continue;
                }
                let v = a.alpha(u)[*i];
                *i += 1;
                let Some(&w) = s.moves.get(&v) else {
                    return Ok(false);
                };
                match colour[w] {
                    GREY => return Ok(false),
                    WHITE => {
                        colour[w] = GREY;
                        stack.push((w, 0));
                    }
                    _ => {}
                }
            }
            Ok(true)
        }
    }
}
