//! Seeded generators shared by the integration suites.
#![allow(dead_code)]

use mbsd::domains::{gen_random, Domain, RandomDomainConfig};
use mbsd::games::{GameArena, WinningObjective};
use mbsd::ltlf::{Formula, Letter, Proposition};
use mbsd::qbf::{QbfCnf, QbfCnf1, Quantifier};
use mbsd::reductions::{Agent, MappingSpec, MbsdInstance};
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn props(prefix: &str, n: usize) -> Vec<Proposition> {
    (0..n)
        .map(|i| Proposition::new(&format!("{prefix}{i}")).unwrap())
        .collect()
}

/// Random surface formula of depth at most `depth` over `props`.
pub fn formula(
    rng: &mut ChaCha8Rng,
    props: &[Proposition],
    depth: usize,
    temporal: bool,
) -> Formula {
    if depth == 0 || rng.random_bool(0.25) {
        return match rng.random_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::Atom(props[rng.random_range(0..props.len())].clone()),
        };
    }
    let ops = if temporal { 9 } else { 5 };
    let sub = |rng: &mut ChaCha8Rng| formula(rng, props, depth - 1, temporal);
    match rng.random_range(0..ops) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::implies(sub(rng), sub(rng)),
        4 => Formula::iff(sub(rng), sub(rng)),
        5 => Formula::next(sub(rng)),
        6 => Formula::eventually(sub(rng)),
        7 => Formula::globally(sub(rng)),
        _ => Formula::until(sub(rng), sub(rng)),
    }
}

/// Every word of length `1..=max_len` over the powerset of `props`.
pub fn all_words(props: &[Proposition], max_len: usize) -> Vec<Vec<Letter>> {
    let letters: Vec<Letter> = (0..1usize << props.len())
        .map(|m| {
            Letter(
                props
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| (m >> i) & 1 == 1)
                    .map(|(_, p)| p.clone())
                    .collect(),
            )
        })
        .collect();
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                letters.iter().map(move |l| {
                    let mut w = w.clone();
                    w.push(l.clone());
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Bipartite arena with `1..=max_side` nodes per player and out-degree 1..=3.
pub fn arena(seed: u64, max_side: usize) -> GameArena {
    let mut r = rng(seed);
    let nu = r.random_range(1..=max_side);
    let nv = r.random_range(1..=max_side);
    let succ = |r: &mut ChaCha8Rng, n: usize| -> Vec<usize> {
        let d = r.random_range(1..=3.min(n));
        let mut v: Vec<usize> = sample(r, n, d).into_iter().collect();
        v.sort_unstable();
        v
    };
    let alpha = (0..nu).map(|_| succ(&mut r, nv)).collect();
    let beta = (0..nv).map(|_| succ(&mut r, nu)).collect();
    GameArena::new(0, alpha, beta).unwrap()
}

pub fn goal(seed: u64, num_p1: usize) -> Vec<usize> {
    let mut r = rng(seed ^ 0x9e37_79b9);
    (0..num_p1).filter(|_| r.random_bool(0.5)).collect()
}

pub fn objectives(seed: u64, num_p1: usize) -> [WinningObjective; 2] {
    let g = goal(seed, num_p1);
    [
        WinningObjective::safe(g.clone()),
        WinningObjective::reach(g),
    ]
}

pub fn domain(seed: u64, states: usize, props: usize, tree: bool, prefix: &str) -> Domain {
    gen_random(&RandomDomainConfig::new(states, 2, props, tree, seed).prefix(prefix)).unwrap()
}

fn conjuncts(r: &mut ChaCha8Rng, da: &Domain, db: &Domain, k: usize) -> Vec<(Formula, Formula)> {
    (0..k)
        .map(|_| {
            (
                formula(r, da.props(), 2, false),
                formula(r, db.props(), 2, false),
            )
        })
        .collect()
}

/// Point-wise instance, stop agent A.
pub fn pointwise(seed: u64, max_states: usize, max_k: usize) -> MbsdInstance {
    let mut r = rng(seed);
    let da = domain(r.random(), r.random_range(1..=max_states), 2, false, "a");
    let db = domain(r.random(), r.random_range(1..=max_states), 2, false, "b");
    let k = r.random_range(1..=max_k);
    let c = conjuncts(&mut r, &da, &db, k);
    MbsdInstance::new(da, db, MappingSpec::PointWise(c), Agent::A).unwrap()
}

/// Target instance, stop agent B.
pub fn target(seed: u64, max_states: usize, max_k: usize, tree: bool) -> MbsdInstance {
    let mut r = rng(seed);
    let da = domain(r.random(), r.random_range(1..=max_states), 2, tree, "a");
    let db = domain(r.random(), r.random_range(1..=max_states), 2, tree, "b");
    let k = r.random_range(1..=max_k);
    let c = conjuncts(&mut r, &da, &db, k);
    MbsdInstance::new(da, db, MappingSpec::Target(c), Agent::B).unwrap()
}

pub fn target_with_k(seed: u64, max_states: usize, k: usize, tree: bool) -> MbsdInstance {
    let mut r = rng(seed);
    let da = domain(r.random(), r.random_range(1..=max_states), 2, tree, "a");
    let db = domain(r.random(), r.random_range(1..=max_states), 2, tree, "b");
    let c = conjuncts(&mut r, &da, &db, k);
    MbsdInstance::new(da, db, MappingSpec::Target(c), Agent::B).unwrap()
}

/// General instance over both alphabets with a random stop agent.
pub fn general(seed: u64, max_states: usize) -> MbsdInstance {
    let mut r = rng(seed);
    let da = domain(r.random(), r.random_range(1..=max_states), 1, false, "a");
    let db = domain(r.random(), r.random_range(1..=max_states), 1, false, "b");
    let all: Vec<Proposition> = da.props().iter().chain(db.props()).cloned().collect();
    let f = formula(&mut r, &all, 3, true);
    let agent = if r.random_bool(0.5) {
        Agent::A
    } else {
        Agent::B
    };
    MbsdInstance::new(da, db, MappingSpec::General(f), agent).unwrap()
}

/// Random prenex CNF over `1..=max_vars` variables, every variable quantified.
pub fn qbf(seed: u64, max_vars: u32, max_clauses: usize) -> QbfCnf {
    let mut r = rng(seed);
    let n = r.random_range(1..=max_vars);
    let mut order: Vec<u32> = (1..=n).collect();
    order.shuffle(&mut r);
    let prefix = order
        .into_iter()
        .map(|v| {
            let q = if r.random_bool(0.5) {
                Quantifier::Forall
            } else {
                Quantifier::Exists
            };
            (q, v)
        })
        .collect();
    let clauses = (0..r.random_range(1..=max_clauses))
        .map(|_| {
            (0..r.random_range(1..=3))
                .map(|_| {
                    let v = r.random_range(1..=n) as i32;
                    if r.random_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    QbfCnf::new(n, prefix, clauses).unwrap()
}

/// Strictly alternating `forall x1 exists y1 ... forall xn exists yn` with at
/// most one universal literal per clause.
pub fn qbf_cnf1(seed: u64, max_n: usize, max_clauses: usize) -> QbfCnf1 {
    let mut r = rng(seed);
    let n = r.random_range(1..=max_n) as u32;
    let prefix = (0..n)
        .flat_map(|i| {
            [
                (Quantifier::Forall, 2 * i + 1),
                (Quantifier::Exists, 2 * i + 2),
            ]
        })
        .collect();
    let lit = |r: &mut ChaCha8Rng, v: u32| {
        if r.random_bool(0.5) {
            v as i32
        } else {
            -(v as i32)
        }
    };
    let clauses = (0..r.random_range(1..=max_clauses))
        .map(|_| {
            let mut c = Vec::new();
            if r.random_bool(0.6) {
                let x = 2 * r.random_range(0..n) + 1;
                c.push(lit(&mut r, x));
            }
            for _ in 0..r.random_range(1..=2) {
                let y = 2 * r.random_range(0..n) + 2;
                c.push(lit(&mut r, y));
            }
            c
        })
        .collect();
    QbfCnf1::new(QbfCnf::new(2 * n, prefix, clauses).unwrap()).unwrap()
}
