//! Hopcroft partition refinement.

use std::collections::VecDeque;

use super::dfa::Dfa;

/// Language-equivalent minimal DFA. Unreachable states are dropped first; the
/// result is numbered in BFS order from the initial state.
pub fn minimize(d: &Dfa) -> Dfa {
    let k = d.alphabet_size();

    // reachable states in BFS order
    let mut reach_id = vec![usize::MAX; d.num_states()];
    let mut reach = vec![d.init()];
    reach_id[d.init()] = 0;
    let mut i = 0;
    while i < reach.len() {
        let q = reach[i];
        for a in 0..k {
            let t = d.next(q, a);
            if reach_id[t] == usize::MAX {
                reach_id[t] = reach.len();
                reach.push(t);
            }
        }
        i += 1;
    }
    let n = reach.len();
    let next = |q: usize, a: usize| reach_id[d.next(reach[q], a)];
    let accepting: Vec<bool> = reach.iter().map(|&q| d.is_accepting(q)).collect();

    // inverse transitions, per letter
    let mut inverse: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; k];
    for q in 0..n {
        for (a, inv) in inverse.iter_mut().enumerate() {
            inv[next(q, a)].push(q);
        }
    }

    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of = vec![0usize; n];
    let (acc, rej): (Vec<usize>, Vec<usize>) = (0..n).partition(|&q| accepting[q]);
    for b in [acc, rej] {
        if !b.is_empty() {
            for &q in &b {
                block_of[q] = blocks.len();
            }
            blocks.push(b);
        }
    }
    let mut in_work = vec![true; blocks.len()];
    let mut work: VecDeque<usize> = (0..blocks.len()).collect();
    let mut mark = vec![false; n];
    // per-block scratch index into `touched`; blocks never outnumber states
    let mut slot = vec![usize::MAX; n];

    while let Some(splitter) = work.pop_front() {
        in_work[splitter] = false;
        let members = blocks[splitter].clone();
        for inv in &inverse {
            let mut touched: Vec<usize> = Vec::new();
            let mut hits: Vec<Vec<usize>> = Vec::new();
            // gather predecessors grouped by their block
            let mut preds: Vec<usize> = Vec::new();
            for &t in &members {
                for &p in &inv[t] {
                    if !mark[p] {
                        mark[p] = true;
                        preds.push(p);
                    }
                }
            }
            for &p in &preds {
                let b = block_of[p];
                if slot[b] == usize::MAX {
                    slot[b] = touched.len();
                    touched.push(b);
                    hits.push(Vec::new());
                }
                hits[slot[b]].push(p);
            }
            for &p in &preds {
                mark[p] = false;
            }
            for &b in &touched {
                slot[b] = usize::MAX;
            }
            for (b, inside) in touched.into_iter().zip(hits) {
                if inside.len() == blocks[b].len() {
                    continue;
                }
                let new_id = blocks.len();
                let mut rest = Vec::with_capacity(blocks[b].len() - inside.len());
                for &q in &inside {
                    mark[q] = true;
                }
                for &q in &blocks[b] {
                    if !mark[q] {
                        rest.push(q);
                    }
                }
                for &q in &inside {
                    mark[q] = false;
                    block_of[q] = new_id;
                }
                let inside_smaller = inside.len() <= rest.len();
                blocks[b] = rest;
                blocks.push(inside);
                in_work.push(false);
                if in_work[b] {
                    in_work[new_id] = true;
                    work.push_back(new_id);
                } else {
                    let pick = if inside_smaller { new_id } else { b };
                    in_work[pick] = true;
                    work.push_back(pick);
                }
            }
        }
    }

    // quotient, renumbered in BFS order from the initial block
    let nb = blocks.len();
    let mut order = vec![usize::MAX; nb];
    let mut seq = vec![block_of[0]];
    order[block_of[0]] = 0;
    let mut i = 0;
    while i < seq.len() {
        let rep = blocks[seq[i]][0];
        for a in 0..k {
            let b = block_of[next(rep, a)];
            if order[b] == usize::MAX {
                order[b] = seq.len();
                seq.push(b);
            }
        }
        i += 1;
    }
    let mut trans = Vec::with_capacity(seq.len() * k);
    let mut acc = Vec::with_capacity(seq.len());
    for &b in &seq {
        let rep = blocks[b][0];
        acc.push(accepting[rep]);
        for a in 0..k {
            trans.push(order[block_of[next(rep, a)]] as u32);
        }
    }
    Dfa::from_parts(d.props().to_vec(), 0, acc, trans).expect("quotient is well formed")
}
