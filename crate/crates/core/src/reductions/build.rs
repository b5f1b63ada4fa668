use std::collections::{HashMap, VecDeque};

use crate::automata::{Progressor, ResidualId};
use crate::domains::StateId;
use crate::games::{GameArena, ObjectiveKind, WinningObjective};
use crate::ltlf::{eval_assignment, Letter};

use super::{Agent, MappingKind, MbsdInstance, ReductionError};

pub const DEFAULT_K_CAP: usize = 12;
/// Memory vectors are packed into a `u64`, two bits per conjunct.
const HARD_K_CAP: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArenaKind {
    PointWise,
    Target,
    Tree,
    General,
}

impl ArenaKind {
    pub fn name(self) -> &'static str {
        match self {
            ArenaKind::PointWise => "pointwise",
            ArenaKind::Target => "target",
            ArenaKind::Tree => "tree",
            ArenaKind::General => "general",
        }
    }

    pub fn from_name(s: &str) -> Option<ArenaKind> {
        [
            ArenaKind::PointWise,
            ArenaKind::Target,
            ArenaKind::Tree,
            ArenaKind::General,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

/// Arena node identity: a state pair plus an annotation. The annotation is
/// 0 for pair arenas, the packed memory vector for target arenas (`c` bits
/// low, `d` bits from bit `k`), and the residual id for general arenas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Config {
    pub s: StateId,
    pub t: StateId,
    pub annot: u64,
}

/// How annotations evolve along moves, and which `U` configurations are goals.
#[derive(Clone, Debug)]
pub(crate) struct Semantics {
    kind: ArenaKind,
    k: usize,
    n_t: usize,
    /// Target: `c` bit mask set by each A state. Tree: conjuncts whose `phi`
    /// held somewhere on the root path.
    a_bits: Vec<u64>,
    b_bits: Vec<u64>,
    pointwise_goal: Vec<bool>,
    progressor: Option<Progressor>,
    a_mask: Vec<u64>,
    b_mask: Vec<u64>,
}

fn side_bits(p: &MbsdInstance, agent: Agent, shift: usize) -> Result<Vec<u64>, ReductionError> {
    let d = match agent {
        Agent::A => p.domain_a(),
        Agent::B => p.domain_b(),
    };
    (0..d.num_states())
        .map(|s| {
            let mut bits = 0u64;
            for (i, (phi, psi)) in p.mapping().conjuncts().iter().enumerate() {
                let f = if agent == Agent::A { phi } else { psi };
                if eval_assignment(f, d.label(s))? {
                    bits |= 1 << (i + shift);
                }
            }
            Ok(bits)
        })
        .collect()
}

impl Semantics {
    pub(crate) fn new(p: &MbsdInstance, kind: ArenaKind) -> Result<Semantics, ReductionError> {
        let k = p.mapping().conjuncts().len();
        let (da, db) = (p.domain_a(), p.domain_b());
        let mut sem = Semantics {
            kind,
            k,
            n_t: db.num_states(),
            a_bits: Vec::new(),
            b_bits: Vec::new(),
            pointwise_goal: Vec::new(),
            progressor: None,
            a_mask: Vec::new(),
            b_mask: Vec::new(),
        };
        match kind {
            ArenaKind::PointWise => {
                let inv = p.mapping().invariant();
                for s in 0..da.num_states() {
                    for t in 0..db.num_states() {
                        let letter = da.label(s).union(db.label(t));
                        sem.pointwise_goal.push(eval_assignment(&inv, &letter)?);
                    }
                }
            }
            ArenaKind::Target => {
                sem.a_bits = side_bits(p, Agent::A, 0)?;
                sem.b_bits = side_bits(p, Agent::B, k)?;
            }
            ArenaKind::Tree => {
                if k > 64 {
                    return Err(ReductionError::TooManyConjuncts {
                        k,
                        cap: 64,
                        estimate: 2 * (da.num_states() * db.num_states()) as u128,
                    });
                }
                let here_a = side_bits(p, Agent::A, 0)?;
                let here_b = side_bits(p, Agent::B, 0)?;
                let pa = da
                    .tree_parents()
                    .ok_or(ReductionError::NotTreeLike(Agent::A))?;
                let pb = db
                    .tree_parents()
                    .ok_or(ReductionError::NotTreeLike(Agent::B))?;
                sem.a_bits = witnessed(&pa, &here_a);
                sem.b_bits = witnessed(&pb, &here_b);
            }
            ArenaKind::General => {
                let prog = Progressor::new(&p.mapping().formula())?;
                sem.a_mask = (0..da.num_states())
                    .map(|s| prog.mask_of(da.label(s)))
                    .collect();
                sem.b_mask = (0..db.num_states())
                    .map(|t| prog.mask_of(db.label(t)))
                    .collect();
                sem.progressor = Some(prog);
            }
        }
        Ok(sem)
    }

    pub(crate) fn k(&self) -> usize {
        self.k
    }

    pub(crate) fn init(&mut self, s0: StateId, t0: StateId) -> Config {
        let annot = match self.kind {
            ArenaKind::Target => self.a_bits[s0] | self.b_bits[t0],
            ArenaKind::General => {
                let prog = self.progressor.as_mut().expect("general semantics");
                let q0 = prog.initial();
                prog.step_mask(q0, self.a_mask[s0] | self.b_mask[t0]).0 as u64
            }
            _ => 0,
        };
        Config {
            s: s0,
            t: t0,
            annot,
        }
    }

    /// A moved to `s2`.
    pub(crate) fn after_a(&self, u: &Config, s2: StateId) -> Config {
        let annot = match self.kind {
            ArenaKind::Target => u.annot | self.a_bits[s2],
            _ => u.annot,
        };
        Config {
            s: s2,
            t: u.t,
            annot,
        }
    }

    /// B answered with `t2`.
    pub(crate) fn after_b(&mut self, v: &Config, t2: StateId) -> Config {
        let annot = match self.kind {
            ArenaKind::Target => v.annot | self.b_bits[t2],
            ArenaKind::General => {
                let prog = self.progressor.as_mut().expect("general semantics");
                let r = ResidualId(v.annot as u32);
                prog.step_mask(r, self.a_mask[v.s] | self.b_mask[t2]).0 as u64
            }
            _ => v.annot,
        };
        Config {
            s: v.s,
            t: t2,
            annot,
        }
    }

    pub(crate) fn is_goal(&self, u: &Config) -> bool {
        match self.kind {
            ArenaKind::PointWise => self.pointwise_goal[u.s * self.n_t + u.t],
            ArenaKind::Target => {
                let low = (1u64 << self.k) - 1;
                let c = u.annot & low;
                let d = u.annot >> self.k;
                c & !d == 0
            }
            ArenaKind::Tree => self.a_bits[u.s] & !self.b_bits[u.t] == 0,
            ArenaKind::General => self
                .progressor
                .as_ref()
                .expect("general semantics")
                .is_accepting(ResidualId(u.annot as u32)),
        }
    }

    pub(crate) fn progressor(&self) -> Option<&Progressor> {
        self.progressor.as_ref()
    }
}

/// Annotation as printed in strategy files: `c1 d1 c2 d2 ...` bits for
/// target arenas, the residual id for general arenas, empty otherwise.
pub(crate) fn annot_text(kind: ArenaKind, k: usize, annot: u64) -> String {
    match kind {
        ArenaKind::Target => (0..k)
            .flat_map(|i| [annot >> i & 1, annot >> (i + k) & 1])
            .map(|b| if b == 1 { '1' } else { '0' })
            .collect(),
        ArenaKind::General => annot.to_string(),
        _ => String::new(),
    }
}

pub(crate) fn parse_annot(kind: ArenaKind, k: usize, text: &str) -> Option<u64> {
    match kind {
        ArenaKind::Target => {
            if text.len() != 2 * k {
                return None;
            }
            let mut annot = 0u64;
            for (j, ch) in text.chars().enumerate() {
                let bit = match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => return None,
                };
                let (i, is_d) = (j / 2, j % 2 == 1);
                annot |= bit << if is_d { i + k } else { i };
            }
            Some(annot)
        }
        ArenaKind::General => text.parse().ok(),
        _ => text.is_empty().then_some(0),
    }
}

fn witnessed(parent: &[Option<StateId>], here: &[u64]) -> Vec<u64> {
    fn go(s: StateId, parent: &[Option<StateId>], here: &[u64], memo: &mut [Option<u64>]) -> u64 {
        // iterative climb to the nearest memoized ancestor
        let mut chain = vec![s];
        let mut base = 0;
        while let Some(&x) = chain.last() {
            if let Some(m) = memo[x] {
                chain.pop();
                base = m;
                break;
            }
            match parent[x] {
                Some(p) => chain.push(p),
                None => break,
            }
        }
        for &x in chain.iter().rev() {
            base |= here[x];
            memo[x] = Some(base);
        }
        base
    }
    let mut memo = vec![None; here.len()];
    (0..here.len())
        .map(|s| go(s, parent, here, &mut memo))
        .collect()
}

#[derive(Clone, Debug)]
pub struct ReducedGame {
    pub kind: ArenaKind,
    pub arena: GameArena,
    pub objective: WinningObjective,
    pub u_nodes: Vec<Config>,
    pub v_nodes: Vec<Config>,
    pub(crate) semantics: Semantics,
}

impl ReducedGame {
    /// Distinct automaton states met during construction (general arenas).
    pub fn automaton_states(&self) -> Option<usize> {
        self.semantics.progressor().map(Progressor::num_residuals)
    }

    pub fn k(&self) -> usize {
        self.semantics.k()
    }
}

fn objective_for(p: &MbsdInstance) -> ObjectiveKind {
    match p.stop_agent() {
        Agent::A => ObjectiveKind::Safe,
        Agent::B => ObjectiveKind::Reach,
    }
}

/// Breadth-first materialization of the part reachable from `u0`.
fn explore(
    p: &MbsdInstance,
    mut sem: Semantics,
    kind: ArenaKind,
) -> Result<ReducedGame, ReductionError> {
    let (da, db) = (p.domain_a(), p.domain_b());
    let u0 = sem.init(da.init(), db.init());
    let mut u_nodes = vec![u0];
    let mut v_nodes: Vec<Config> = Vec::new();
    let mut u_index = HashMap::from([(u0, 0usize)]);
    let mut v_index: HashMap<Config, usize> = HashMap::new();
    let mut alpha: Vec<Vec<usize>> = vec![Vec::new()];
    let mut beta: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(ui) = queue.pop_front() {
        let u = u_nodes[ui];
        for &s2 in da.successors(u.s) {
            let v = sem.after_a(&u, s2);
            let vi = match v_index.get(&v) {
                Some(&vi) => vi,
                None => {
                    let vi = v_nodes.len();
                    v_index.insert(v, vi);
                    v_nodes.push(v);
                    let mut succ = Vec::new();
                    for &t2 in db.successors(v.t) {
                        let w = sem.after_b(&v, t2);
                        let wi = *u_index.entry(w).or_insert_with(|| {
                            u_nodes.push(w);
                            alpha.push(Vec::new());
                            queue.push_back(u_nodes.len() - 1);
                            u_nodes.len() - 1
                        });
                        succ.push(wi);
                    }
                    beta.push(succ);
                    vi
                }
            };
            alpha[ui].push(vi);
        }
    }
    let goal: Vec<usize> = (0..u_nodes.len())
        .filter(|&i| sem.is_goal(&u_nodes[i]))
        .collect();
    Ok(ReducedGame {
        kind,
        arena: GameArena::new(0, alpha, beta)?,
        objective: WinningObjective::new(objective_for(p), goal),
        u_nodes,
        v_nodes,
        semantics: sem,
    })
}

fn require(p: &MbsdInstance, kind: MappingKind) -> Result<(), ReductionError> {
    if p.mapping().kind() != kind {
        return Err(ReductionError::Strategy(format!(
            "a {kind} reduction needs a {kind} mapping, found {}",
            p.mapping().kind()
        )));
    }
    Ok(())
}

/// Full product `S x T` on both sides; the goal holds where the joint label
/// satisfies every conjunct. Objective Safe.
pub fn build_pointwise_game(p: &MbsdInstance) -> Result<ReducedGame, ReductionError> {
    require(p, MappingKind::PointWise)?;
    let (da, db) = (p.domain_a(), p.domain_b());
    let (n_s, n_t) = (da.num_states(), db.num_states());
    let sem = Semantics::new(p, ArenaKind::PointWise)?;
    let idx = |s: StateId, t: StateId| s * n_t + t;
    let mut nodes = Vec::with_capacity(n_s * n_t);
    let mut alpha = Vec::with_capacity(n_s * n_t);
    let mut beta = Vec::with_capacity(n_s * n_t);
    for s in 0..n_s {
        for t in 0..n_t {
            nodes.push(Config { s, t, annot: 0 });
            alpha.push(da.successors(s).iter().map(|&s2| idx(s2, t)).collect());
            beta.push(db.successors(t).iter().map(|&t2| idx(s, t2)).collect());
        }
    }
    let goal: Vec<usize> = (0..nodes.len())
        .filter(|&i| sem.is_goal(&nodes[i]))
        .collect();
    let arena = GameArena::new(idx(da.init(), db.init()), alpha, beta)?;
    assert_eq!(arena.num_nodes(), 2 * n_s * n_t, "point-wise arena size");
    Ok(ReducedGame {
        kind: ArenaKind::PointWise,
        arena,
        objective: WinningObjective::safe(goal),
        u_nodes: nodes.clone(),
        v_nodes: nodes,
        semantics: sem,
    })
}

pub fn build_target_game(p: &MbsdInstance) -> Result<ReducedGame, ReductionError> {
    build_target_game_capped(p, DEFAULT_K_CAP)
}

/// Memory-bit arena over `S x T x ({0,1}^2)^k`, reachable part only.
/// Objective Reach.
pub fn build_target_game_capped(
    p: &MbsdInstance,
    cap: usize,
) -> Result<ReducedGame, ReductionError> {
    require(p, MappingKind::Target)?;
    let k = p.mapping().conjuncts().len();
    let pairs = (p.domain_a().num_states() * p.domain_b().num_states()) as u128;
    let bound = 2u128
        .saturating_mul(pairs)
        .saturating_mul(4u128.checked_pow(k as u32).unwrap_or(u128::MAX));
    let cap = cap.min(HARD_K_CAP);
    if k > cap {
        return Err(ReductionError::TooManyConjuncts {
            k,
            cap,
            estimate: bound,
        });
    }
    let sem = Semantics::new(p, ArenaKind::Target)?;
    let g = explore(p, sem, ArenaKind::Target)?;
    assert!(
        g.arena.num_nodes() as u128 <= bound,
        "target arena exceeds 2|S||T|4^k"
    );
    for (ui, u) in g.u_nodes.iter().enumerate() {
        for &vi in g.arena.alpha(ui) {
            let v = g.v_nodes[vi];
            assert_eq!(u.annot & !v.annot, 0, "memory bit reset along alpha");
            for &wi in g.arena.beta(vi) {
                assert_eq!(
                    v.annot & !g.u_nodes[wi].annot,
                    0,
                    "memory bit reset along beta"
                );
            }
        }
    }
    Ok(g)
}

/// Plain pair arena for tree-like domains; goal flags come from root paths.
pub fn build_tree_game(p: &MbsdInstance) -> Result<ReducedGame, ReductionError> {
    require(p, MappingKind::Target)?;
    let sem = Semantics::new(p, ArenaKind::Tree)?;
    let g = explore(p, sem, ArenaKind::Tree)?;
    debug_assert!(g.arena.num_nodes() <= 2 * p.domain_a().num_states() * p.domain_b().num_states());
    Ok(g)
}

/// Product with the progression automaton of the mapping formula, built on
/// the joint labels met during exploration. Safe for stop agent A, Reach for
/// stop agent B. Any mapping kind is accepted through its formula.
pub fn build_general_game(p: &MbsdInstance) -> Result<ReducedGame, ReductionError> {
    let sem = Semantics::new(p, ArenaKind::General)?;
    explore(p, sem, ArenaKind::General)
}

pub(crate) fn joint_letter(p: &MbsdInstance, s: StateId, t: StateId) -> Letter {
    p.domain_a().label(s).union(p.domain_b().label(t))
}
