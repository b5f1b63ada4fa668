use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::games::solve;

use super::build::{
    build_general_game, build_pointwise_game, build_target_game_capped, build_tree_game, ArenaKind,
    DEFAULT_K_CAP,
};
use super::strategy::{lift_strategy, MbsdStrategy};
use super::{Agent, MappingKind, MbsdInstance, ReductionError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMode {
    Auto,
    PointWise,
    Target,
    Tree,
    General,
}

impl fmt::Display for SolveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveMode::Auto => "auto",
            SolveMode::PointWise => "pointwise",
            SolveMode::Target => "target",
            SolveMode::Tree => "tree",
            SolveMode::General => "general",
        })
    }
}

impl std::str::FromStr for SolveMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "auto" => SolveMode::Auto,
            "pointwise" => SolveMode::PointWise,
            "target" => SolveMode::Target,
            "tree" => SolveMode::Tree,
            "general" => SolveMode::General,
            _ => return Err(format!("unknown mode `{s}`")),
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub mode: SolveMode,
    pub k_cap: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            mode: SolveMode::Auto,
            k_cap: DEFAULT_K_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub path: &'static str,
    pub arena_nodes: usize,
    pub arena_edges: usize,
    /// Automaton states met by the general reduction.
    pub dfa_states: Option<usize>,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub realizable: bool,
    pub strategy: Option<MbsdStrategy>,
    pub stats: SolveStats,
}

fn pick(p: &MbsdInstance, mode: SolveMode) -> Result<ArenaKind, ReductionError> {
    let kind = p.mapping().kind();
    let mismatch = || ReductionError::ModeMismatch { mode, kind };
    Ok(match (mode, kind) {
        (SolveMode::General, _) => ArenaKind::General,
        (SolveMode::Auto, MappingKind::General) => ArenaKind::General,
        (SolveMode::Auto | SolveMode::PointWise, MappingKind::PointWise) => ArenaKind::PointWise,
        (SolveMode::Auto, MappingKind::Target) => {
            if p.domain_a().is_tree_like() && p.domain_b().is_tree_like() {
                ArenaKind::Tree
            } else {
                ArenaKind::Target
            }
        }
        (SolveMode::Target, MappingKind::Target) => ArenaKind::Target,
        (SolveMode::Tree, MappingKind::Target) => ArenaKind::Tree,
        _ => return Err(mismatch()),
    })
}

pub fn solve_mbsd(p: &MbsdInstance, mode: SolveMode) -> Result<SolveResult, ReductionError> {
    solve_mbsd_with(
        p,
        &SolveOptions {
            mode,
            ..SolveOptions::default()
        },
    )
}

/// Builds the reduced game for the selected path and solves it.
pub fn solve_mbsd_with(
    p: &MbsdInstance,
    opts: &SolveOptions,
) -> Result<SolveResult, ReductionError> {
    let start = Instant::now();
    let kind = pick(p, opts.mode)?;
    let game = match kind {
        ArenaKind::PointWise => build_pointwise_game(p)?,
        ArenaKind::Target => build_target_game_capped(p, opts.k_cap)?,
        ArenaKind::Tree => build_tree_game(p)?,
        ArenaKind::General => build_general_game(p)?,
    };
    let solved = solve(&game.arena, &game.objective)?;
    let strategy = solved.strategy.as_ref().map(|s| lift_strategy(p, &game, s));
    Ok(SolveResult {
        realizable: strategy.is_some(),
        strategy,
        stats: SolveStats {
            path: kind.name(),
            arena_nodes: game.arena.num_nodes(),
            arena_edges: game.arena.num_edges(),
            dfa_states: game.automaton_states(),
            elapsed_ms: start.elapsed().as_millis(),
        },
    })
}

/// Target instances over tree-like domains, without memory bits.
pub fn solve_tree_target(p: &MbsdInstance) -> Result<Option<MbsdStrategy>, ReductionError> {
    for (agent, d) in [(Agent::A, p.domain_a()), (Agent::B, p.domain_b())] {
        if !d.is_tree_like() {
            return Err(ReductionError::NotTreeLike(agent));
        }
    }
    Ok(solve_mbsd(p, SolveMode::Tree)?.strategy)
}
