use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ltlf::{Formula, Letter, Proposition};

use super::{Domain, DomainError, StateId};

#[derive(Clone, Debug)]
pub struct RandomDomainConfig {
    pub states: usize,
    /// Maximum out-degree (tree-like: maximum number of children).
    pub branching: usize,
    pub props: usize,
    pub tree_like: bool,
    pub seed: u64,
    /// Propositions are named `{prop_prefix}{i}`.
    pub prop_prefix: String,
}

impl RandomDomainConfig {
    pub fn new(states: usize, branching: usize, props: usize, tree_like: bool, seed: u64) -> Self {
        RandomDomainConfig {
            states,
            branching,
            props,
            tree_like,
            seed,
            prop_prefix: "p".into(),
        }
    }

    pub fn prefix(mut self, prefix: &str) -> Self {
        self.prop_prefix = prefix.into();
        self
    }
}

/// Random serial domain, deterministic per seed. Each proposition holds in a
/// state with probability 1/2.
pub fn gen_random(cfg: &RandomDomainConfig) -> Result<Domain, DomainError> {
    if cfg.states == 0 || cfg.branching == 0 {
        return Err(DomainError::Parameter(
            "state count and branching must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let props: Vec<Proposition> = (0..cfg.props)
        .map(|i| Proposition::new(&format!("{}{i}", cfg.prop_prefix)))
        .collect::<Result<_, _>>()
        .map_err(|e| DomainError::Parameter(e.to_string()))?;
    let n = cfg.states;
    let mut edges = Vec::new();
    if cfg.tree_like {
        let mut children = vec![0usize; n];
        for s in 1..n {
            let open: Vec<usize> = (0..s).filter(|&p| children[p] < cfg.branching).collect();
            let parent = open[rng.random_range(0..open.len())];
            children[parent] += 1;
            edges.push((parent, s));
        }
        for (s, &c) in children.iter().enumerate() {
            if c == 0 {
                edges.push((s, s));
            }
        }
    } else {
        for s in 0..n {
            let max = cfg.branching.min(n);
            let degree = rng.random_range(1..=max);
            let mut targets: Vec<usize> = sample(&mut rng, n, degree).into_iter().collect();
            targets.sort_unstable();
            edges.extend(targets.into_iter().map(|t| (s, t)));
        }
    }
    let states = (0..n)
        .map(|s| {
            let label: BTreeSet<Proposition> = props
                .iter()
                .filter(|_| rng.random_bool(0.5))
                .cloned()
                .collect();
            (format!("s{s}"), Letter(label))
        })
        .collect();
    Domain::new(props, states, 0, edges)
}

pub const DEFAULT_STATE_CEILING: u128 = 1_000_000;

#[derive(Clone, Debug)]
pub struct PacmanConfig {
    pub n: usize,
    pub ghosts: usize,
    pub walls: BTreeSet<(usize, usize)>,
    pub ceiling: u128,
}

impl PacmanConfig {
    pub fn new(n: usize, ghosts: usize) -> Self {
        PacmanConfig {
            n,
            ghosts,
            walls: BTreeSet::new(),
            ceiling: DEFAULT_STATE_CEILING,
        }
    }
}

/// Ghost domain (agent A), Pac-Man domain (agent B) and the collision
/// avoidance conjuncts `(ghost at cell, !pacman at cell)`, one per free cell.
#[derive(Clone, Debug)]
pub struct PacmanInstance {
    pub ghosts: Domain,
    pub pacman: Domain,
    pub conjuncts: Vec<(Formula, Formula)>,
}

const GHOST_NAMES: [&str; 4] = ["bk", "pk", "ik", "cl"];

fn ghost_name(i: usize) -> String {
    GHOST_NAMES
        .get(i)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("g{i}"))
}

fn cell_prop(prefix: &str, (x, y): (usize, usize)) -> Proposition {
    Proposition::new(&format!("{prefix}_{x}_{y}")).expect("generated names are identifiers")
}

/// Moves of at most one cell: stay, then the four axis neighbours.
fn moves(n: usize, (x, y): (usize, usize)) -> impl Iterator<Item = (usize, usize)> {
    let (x, y) = (x as isize, y as isize);
    [(0, 0), (0, 1), (0, -1), (1, 0), (-1, 0)]
        .into_iter()
        .map(move |(dx, dy)| (x + dx, y + dy))
        .filter(move |&(a, b)| a >= 0 && b >= 0 && (a as usize) < n && (b as usize) < n)
        .map(|(a, b)| (a as usize, b as usize))
}

pub fn gen_pacman(cfg: &PacmanConfig) -> Result<PacmanInstance, DomainError> {
    let n = cfg.n;
    if n < 2 {
        return Err(DomainError::Parameter(format!(
            "grid size must be at least 2, got {n}"
        )));
    }
    if cfg.ghosts == 0 {
        return Err(DomainError::Parameter(
            "at least one ghost is required".into(),
        ));
    }
    if cfg.walls.contains(&(0, 0)) {
        return Err(DomainError::Parameter("cell (0,0) cannot be a wall".into()));
    }
    if let Some(w) = cfg.walls.iter().find(|(x, y)| *x >= n || *y >= n) {
        return Err(DomainError::Parameter(format!(
            "wall {w:?} is outside the grid"
        )));
    }
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|c| !cfg.walls.contains(c))
        .collect();
    if cells.len() > 64 {
        return Err(DomainError::TooLarge {
            estimate: u128::MAX,
            ceiling: cfg.ceiling,
        });
    }
    let pac_estimate = (cells.len() as u128) << (cells.len() - 1);
    if pac_estimate > cfg.ceiling {
        return Err(DomainError::TooLarge {
            estimate: pac_estimate,
            ceiling: cfg.ceiling,
        });
    }
    let ghost_estimate = ((n * n) as u128)
        .checked_pow(cfg.ghosts as u32)
        .unwrap_or(u128::MAX);
    if ghost_estimate > cfg.ceiling {
        return Err(DomainError::TooLarge {
            estimate: ghost_estimate,
            ceiling: cfg.ceiling,
        });
    }

    let pacman = pacman_domain(n, &cells);
    let ghosts = ghost_domain(n, cfg.ghosts);
    let conjuncts = cells
        .iter()
        .map(|&c| {
            let phi = Formula::disjunction(
                (0..cfg.ghosts).map(|g| Formula::Atom(cell_prop(&ghost_name(g), c))),
            );
            let psi = Formula::not(Formula::Atom(cell_prop("p", c)));
            (phi, psi)
        })
        .collect();
    Ok(PacmanInstance {
        ghosts,
        pacman,
        conjuncts,
    })
}

/// Reachable Pac-Man configurations: position plus remaining candies.
fn pacman_domain(n: usize, cells: &[(usize, usize)]) -> Domain {
    let index: HashMap<(usize, usize), usize> =
        cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let start_pos = index[&(0, 0)];
    let all: u64 = if cells.len() == 64 {
        u64::MAX
    } else {
        (1u64 << cells.len()) - 1
    };
    let start = (start_pos, all & !(1u64 << start_pos));

    let mut id: HashMap<(usize, u64), StateId> = HashMap::new();
    let mut order = vec![start];
    id.insert(start, 0);
    let mut queue = VecDeque::from([start]);
    let mut edges = Vec::new();
    while let Some((pos, candies)) = queue.pop_front() {
        let from = id[&(pos, candies)];
        for target in moves(n, cells[pos]) {
            let Some(&next_pos) = index.get(&target) else {
                continue;
            };
            let next = (next_pos, candies & !(1u64 << next_pos));
            let to = *id.entry(next).or_insert_with(|| {
                order.push(next);
                queue.push_back(next);
                order.len() - 1
            });
            edges.push((from, to));
        }
    }
    let props: Vec<Proposition> = cells
        .iter()
        .flat_map(|&c| [cell_prop("p", c), cell_prop("c", c)])
        .collect();
    let states = order
        .iter()
        .map(|&(pos, candies)| {
            let (x, y) = cells[pos];
            let bits: String = (0..cells.len())
                .map(|i| if (candies >> i) & 1 == 1 { '1' } else { '0' })
                .collect();
            let mut label = BTreeSet::from([cell_prop("p", cells[pos])]);
            label.extend(
                (0..cells.len())
                    .filter(|i| (candies >> i) & 1 == 1)
                    .map(|i| cell_prop("c", cells[i])),
            );
            (format!("{x}.{y}/{bits}"), Letter(label))
        })
        .collect();
    Domain::new(props, states, 0, edges).expect("pacman domain is serial and well formed")
}

/// Joint ghost positions; walls are ignored and every ghost moves at most
/// one cell per step.
fn ghost_domain(n: usize, ghosts: usize) -> Domain {
    let center = (n / 2, n / 2);
    let start = vec![center; ghosts];
    let mut id: HashMap<Vec<(usize, usize)>, StateId> = HashMap::new();
    let mut order = vec![start.clone()];
    id.insert(start.clone(), 0);
    let mut queue = VecDeque::from([start]);
    let mut edges = Vec::new();
    while let Some(config) = queue.pop_front() {
        let from = id[&config];
        let mut joint: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        for &g in &config {
            joint = joint
                .into_iter()
                .flat_map(|prefix| {
                    moves(n, g).map(move |m| {
                        let mut p = prefix.clone();
                        p.push(m);
                        p
                    })
                })
                .collect();
        }
        for next in joint {
            let to = match id.get(&next) {
                Some(&t) => t,
                None => {
                    let t = order.len();
                    id.insert(next.clone(), t);
                    order.push(next.clone());
                    queue.push_back(next);
                    t
                }
            };
            edges.push((from, to));
        }
    }
    let props: Vec<Proposition> = (0..ghosts)
        .flat_map(|g| {
            let name = ghost_name(g);
            (0..n)
                .flat_map(move |x| (0..n).map(move |y| (x, y)))
                .map(move |c| cell_prop(&name, c))
        })
        .collect();
    let states = order
        .iter()
        .map(|config| {
            let label = config
                .iter()
                .enumerate()
                .map(|(g, &c)| cell_prop(&ghost_name(g), c))
                .collect();
            let id = config
                .iter()
                .map(|(x, y)| format!("{x}.{y}"))
                .collect::<Vec<_>>()
                .join("+");
            (id, Letter(label))
        })
        .collect();
    Domain::new(props, states, 0, edges).expect("ghost domain is serial and well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_single_state() {
        let d = gen_random(&RandomDomainConfig::new(1, 1, 0, false, 42)).unwrap();
        assert_eq!(d.num_states(), 1);
        assert_eq!(d.successors(0), &[0]);
        assert!(d.label(0).0.is_empty());
    }

    #[test]
    fn random_tree_like() {
        let d = gen_random(&RandomDomainConfig::new(5, 2, 2, true, 7)).unwrap();
        assert!(d.is_tree_like());
        for seed in 0..50 {
            let d = gen_random(&RandomDomainConfig::new(
                1 + seed as usize % 9,
                3,
                2,
                true,
                seed,
            ))
            .unwrap();
            assert!(d.is_tree_like(), "seed {seed}");
        }
    }

    #[test]
    fn random_is_deterministic() {
        let cfg = RandomDomainConfig::new(6, 3, 2, false, 99);
        assert_eq!(gen_random(&cfg).unwrap(), gen_random(&cfg).unwrap());
        let other = RandomDomainConfig::new(6, 3, 2, false, 100);
        assert_ne!(gen_random(&cfg).unwrap(), gen_random(&other).unwrap());
    }

    #[test]
    fn pacman_two_by_two() {
        // 4 positions x 2^3 candy subsets = 32 configurations satisfying the
        // invariants, counted before building; only reachable ones are kept.
        let cells = 4usize;
        let mut satisfying = 0;
        for pos in 0..cells {
            for candies in 0u32..(1 << cells) {
                if candies & (1 << pos) == 0 {
                    satisfying += 1;
                }
            }
        }
        assert_eq!(satisfying, 32);
        let inst = gen_pacman(&PacmanConfig::new(2, 1)).unwrap();
        assert!(inst.pacman.num_states() <= 32);
        assert_eq!(inst.ghosts.num_states(), 4);
        assert_eq!(inst.conjuncts.len(), 4);
        assert_eq!(inst.ghosts.name(inst.ghosts.init()), "1.1");
    }

    #[test]
    fn pacman_mapping_has_one_conjunct_per_free_cell() {
        let inst = gen_pacman(&PacmanConfig::new(3, 1)).unwrap();
        assert_eq!(inst.conjuncts.len(), 9);
        let mut cfg = PacmanConfig::new(3, 2);
        cfg.walls.insert((1, 2));
        let inst = gen_pacman(&cfg).unwrap();
        assert_eq!(inst.conjuncts.len(), 8);
        assert_eq!(inst.conjuncts[0].0.to_string(), "(bk_0_0 | pk_0_0)");
        assert_eq!(inst.conjuncts[0].1.to_string(), "!p_0_0");
    }

    #[test]
    fn pacman_parameters() {
        assert!(matches!(
            gen_pacman(&PacmanConfig::new(1, 1)),
            Err(DomainError::Parameter(_))
        ));
        assert!(matches!(
            gen_pacman(&PacmanConfig::new(3, 0)),
            Err(DomainError::Parameter(_))
        ));
        let mut cfg = PacmanConfig::new(3, 1);
        cfg.walls.insert((0, 0));
        assert!(matches!(gen_pacman(&cfg), Err(DomainError::Parameter(_))));
        assert!(matches!(
            gen_pacman(&PacmanConfig::new(6, 1)),
            Err(DomainError::TooLarge { .. })
        ));
    }

    #[test]
    fn walls_block_pacman() {
        let mut cfg = PacmanConfig::new(2, 1);
        cfg.walls.insert((1, 0));
        let inst = gen_pacman(&cfg).unwrap();
        let wall_prop = Proposition::new("p_1_0");
        assert!(wall_prop.is_ok());
        for s in 0..inst.pacman.num_states() {
            assert!(!inst.pacman.label(s).contains(&wall_prop.clone().unwrap()));
        }
    }
}
