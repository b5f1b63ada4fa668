use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ltlf::{Formula, Letter, Proposition, Trace};

use super::progression::{Progressor, ResidualId};
use super::AutomataError;

/// Default cap on the alphabet size (in propositions) for explicit DFAs.
pub const DEFAULT_PROP_CAP: usize = 12;

/// Hard ceiling on explicit construction; hitting it aborts with diagnostics.
pub const STATE_CEILING: usize = 1 << 16;

/// Complete DFA over the powerset of `props`. Letter `m` is the set of
/// propositions whose bit is set in `m`, bit `i` standing for `props[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    props: Vec<Proposition>,
    init: usize,
    accepting: Vec<bool>,
    trans: Vec<u32>,
}

impl Dfa {
    /// Builds a DFA from raw parts; `trans[q * 2^|props| + letter]` is the
    /// successor of `q`.
    pub fn from_parts(
        props: Vec<Proposition>,
        init: usize,
        accepting: Vec<bool>,
        trans: Vec<u32>,
    ) -> Result<Dfa, AutomataError> {
        let n = accepting.len();
        let alphabet = 1usize
            .checked_shl(props.len() as u32)
            .ok_or(AutomataError::AlphabetTooLarge(props.len()))?;
        if init >= n || trans.len() != n * alphabet || trans.iter().any(|&t| t as usize >= n) {
            return Err(AutomataError::Malformed);
        }
        Ok(Dfa {
            props,
            init,
            accepting,
            trans,
        })
    }

    pub fn props(&self) -> &[Proposition] {
        &self.props
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn alphabet_size(&self) -> usize {
        1 << self.props.len()
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn next(&self, q: usize, letter: usize) -> usize {
        self.trans[q * self.alphabet_size() + letter] as usize
    }

    pub fn letter_index(&self, letter: &Letter) -> Result<usize, AutomataError> {
        let mut m = 0usize;
        for p in letter.iter() {
            match self.props.iter().position(|q| q == p) {
                Some(i) => m |= 1 << i,
                None => return Err(AutomataError::UnknownProposition(p.to_string())),
            }
        }
        Ok(m)
    }

    pub fn letter_of(&self, index: usize) -> Letter {
        Letter(
            self.props
                .iter()
                .enumerate()
                .filter(|(i, _)| (index >> i) & 1 == 1)
                .map(|(_, p)| p.clone())
                .collect(),
        )
    }

    pub fn accepts(&self, w: &Trace) -> Result<bool, AutomataError> {
        let letters = w
            .letters()
            .iter()
            .map(|l| self.letter_index(l))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.accepts_indices(&letters))
    }

    /// Runs the automaton on letter indices. The empty word is not part of
    /// the language semantics; callers pass nonempty input.
    pub fn accepts_indices(&self, word: &[usize]) -> bool {
        debug_assert!(!word.is_empty());
        let q = word.iter().fold(self.init, |q, &a| self.next(q, a));
        self.accepting[q]
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  __start [shape=point];\n");
        for q in 0..self.num_states() {
            let shape = if self.accepting[q] {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(out, "  q{q} [shape={shape}];");
        }
        let _ = writeln!(out, "  __start -> q{};", self.init);
        for q in 0..self.num_states() {
            for a in 0..self.alphabet_size() {
                let _ = writeln!(
                    out,
                    "  q{q} -> q{} [label=\"{}\"];",
                    self.next(q, a),
                    self.letter_of(a)
                );
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> DfaJson {
        let mut transitions = Vec::new();
        for q in 0..self.num_states() {
            for a in 0..self.alphabet_size() {
                let letter = self.letter_of(a).iter().map(|p| p.to_string()).collect();
                transitions.push((q, letter, self.next(q, a)));
            }
        }
        DfaJson {
            props: self.props.iter().map(|p| p.to_string()).collect(),
            states: self.num_states(),
            init: self.init,
            accepting: (0..self.num_states())
                .filter(|&q| self.accepting[q])
                .collect(),
            transitions,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaJson {
    pub props: Vec<String>,
    pub states: usize,
    pub init: usize,
    pub accepting: Vec<usize>,
    /// `(source, letter as sorted proposition list, target)`
    pub transitions: Vec<(usize, Vec<String>, usize)>,
}

/// Explicit DFA for `f` over the powerset of `props`, states numbered in BFS
/// discovery order.
pub fn build_dfa(f: &Formula, props: &[Proposition], cap: usize) -> Result<Dfa, AutomataError> {
    for p in f.propositions() {
        if !props.contains(&p) {
            return Err(AutomataError::UnknownProposition(p.to_string()));
        }
    }
    if props.len() > cap {
        return Err(AutomataError::PropositionCapExceeded {
            found: props.len(),
            cap,
        });
    }
    let mut prog = Progressor::new(f)?;
    let alphabet = 1usize << props.len();
    // formula-local mask for every alphabet letter
    let local: Vec<u64> = {
        let bit_of: Vec<Option<usize>> = props
            .iter()
            .map(|p| prog.props().iter().position(|q| q == p))
            .collect();
        (0..alphabet)
            .map(|a| {
                bit_of
                    .iter()
                    .enumerate()
                    .filter(|(i, b)| (a >> i) & 1 == 1 && b.is_some())
                    .fold(0u64, |m, (_, b)| m | (1 << b.unwrap()))
            })
            .collect()
    };

    let mut index: HashMap<ResidualId, u32> = HashMap::new();
    let mut order: Vec<ResidualId> = Vec::new();
    let mut queue = VecDeque::new();
    let init = prog.initial();
    index.insert(init, 0);
    order.push(init);
    queue.push_back(init);
    let mut trans: Vec<u32> = Vec::new();
    while let Some(r) = queue.pop_front() {
        for &mask in &local {
            let next = prog.step_mask(r, mask);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = order.len() as u32;
                    if order.len() >= STATE_CEILING {
                        return Err(AutomataError::StateCeiling {
                            ceiling: STATE_CEILING,
                            formula: f.to_string(),
                        });
                    }
                    index.insert(next, id);
                    order.push(next);
                    queue.push_back(next);
                    id
                }
            };
            trans.push(id);
        }
    }
    let accepting = order.iter().map(|&r| prog.is_accepting(r)).collect();
    Ok(Dfa {
        props: props.to_vec(),
        init: 0,
        accepting,
        trans,
    })
}
