//! Syntactic progression over NNF formulas. A residual is a disjunction of
//! clauses, each a set of obligations on the remaining suffix. Obligations are
//! subformulas of the input, plus `F true` (the suffix is nonempty) and
//! `G false` (the suffix is empty), so only finitely many residuals exist.
//!
//! A residual holds of a suffix `w` iff some clause has every obligation
//! holding at `w, 0`; on the empty suffix `accepts_empty` decides instead.

use std::collections::{BTreeSet, HashSet};

use crate::ltlf::{Formula, Letter};

/// Distinct residuals explored before `reachable_residuals` gives up counting.
const RESIDUAL_LIMIT: usize = 1 << 16;

type Clause = BTreeSet<Formula>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Residual(BTreeSet<Clause>);

fn tt() -> BTreeSet<Clause> {
    BTreeSet::from([Clause::new()])
}

fn single(f: Formula) -> BTreeSet<Clause> {
    BTreeSet::from([Clause::from([f])])
}

/// Drops clauses that contain another clause.
fn absorb(set: BTreeSet<Clause>) -> BTreeSet<Clause> {
    let mut clauses: Vec<Clause> = set.into_iter().collect();
    clauses.sort_by_key(|c| c.len());
    let mut kept: Vec<Clause> = Vec::new();
    for c in clauses {
        if !kept.iter().any(|k| k.is_subset(&c)) {
            kept.push(c);
        }
    }
    kept.into_iter().collect()
}

fn or(a: BTreeSet<Clause>, b: BTreeSet<Clause>) -> BTreeSet<Clause> {
    absorb(a.into_iter().chain(b).collect())
}

fn and(a: &BTreeSet<Clause>, b: &BTreeSet<Clause>) -> BTreeSet<Clause> {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            out.insert(x.union(y).cloned().collect());
        }
    }
    absorb(out)
}

/// Obligations on the suffix for `f` to hold at the current instant, which
/// carries letter `l`. `f` must be in negation normal form.
fn step(f: &Formula, l: &Letter) -> BTreeSet<Clause> {
    use Formula::*;
    let truth = |b: bool| if b { tt() } else { BTreeSet::new() };
    match f {
        True => tt(),
        False => BTreeSet::new(),
        Atom(p) => truth(l.contains(p)),
        Not(g) => match &**g {
            Atom(p) => truth(!l.contains(p)),
            other => panic!("progression needs NNF, found !{other}"),
        },
        And(a, b) => and(&step(a, l), &step(b, l)),
        Or(a, b) => or(step(a, l), step(b, l)),
        Next(g) => BTreeSet::from([Clause::from([(**g).clone(), Formula::eventually(True)])]),
        WeakNext(g) => or(single((**g).clone()), single(Formula::globally(False))),
        Until(a, b) => or(step(b, l), and(&step(a, l), &single(f.clone()))),
        Release(a, b) => and(&step(b, l), &or(step(a, l), single(f.clone()))),
        Eventually(g) => or(step(g, l), single(f.clone())),
        Globally(g) => and(&step(g, l), &single(f.clone())),
        Implies(..) | Iff(..) => panic!("progression needs NNF, found {f}"),
    }
}

/// Whether an obligation holds of the empty suffix.
fn empty_ok(f: &Formula) -> bool {
    use Formula::*;
    match f {
        True | WeakNext(_) | Release(..) | Globally(_) => true,
        False | Atom(_) | Not(_) | Next(_) | Until(..) | Eventually(_) => false,
        And(a, b) => empty_ok(a) && empty_ok(b),
        Or(a, b) => empty_ok(a) || empty_ok(b),
        Implies(a, b) => !empty_ok(a) || empty_ok(b),
        Iff(a, b) => empty_ok(a) == empty_ok(b),
    }
}

impl Residual {
    /// `f` must hold at the first instant of the suffix.
    pub(crate) fn initial(f: &Formula) -> Residual {
        Residual(match f.to_nnf() {
            Formula::True => tt(),
            Formula::False => BTreeSet::new(),
            g => single(g),
        })
    }

    pub(crate) fn progress(&self, l: &Letter) -> Residual {
        let mut out = BTreeSet::new();
        for clause in &self.0 {
            let mut acc = tt();
            for g in clause {
                acc = and(&acc, &step(g, l));
                if acc.is_empty() {
                    break;
                }
            }
            out.extend(acc);
        }
        Residual(absorb(out))
    }

    pub(crate) fn accepts_empty(&self) -> bool {
        self.0.iter().any(|c| c.iter().all(empty_ok))
    }
}

/// Number of residuals of `f` reachable over words drawn from `letters`,
/// counting the start, capped at an internal limit.
pub(crate) fn reachable_residuals(f: &Formula, letters: &[Letter]) -> usize {
    let start = Residual::initial(f);
    let mut seen = HashSet::from([start.clone()]);
    let mut stack = vec![start];
    while let Some(r) = stack.pop() {
        if seen.len() >= RESIDUAL_LIMIT {
            break;
        }
        for l in letters {
            let next = r.progress(l);
            if seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltlf::{eval_word, parse};

    fn letters() -> Vec<Letter> {
        vec![
            Letter::of(&[]),
            Letter::of(&["a"]),
            Letter::of(&["b"]),
            Letter::of(&["a", "b"]),
        ]
    }

    /// Progressing through a word and checking the empty suffix agrees with
    /// direct evaluation on every word up to length 4.
    #[test]
    fn agrees_with_direct_semantics() {
        let ls = letters();
        for text in [
            "X true",
            "!X true",
            "a U b",
            "G (a -> X b)",
            "F (a & !X !b)",
            "!(!a U !b) | X X a",
            "!(F a) | G b",
            "((F b -> F a) U (F b U a))",
        ] {
            let f = parse(text, None).unwrap();
            let start = Residual::initial(&f);
            let mut words: Vec<Vec<Letter>> = ls.iter().map(|l| vec![l.clone()]).collect();
            for _ in 0..4 {
                for w in &words {
                    let r = w.iter().fold(start.clone(), |r, l| r.progress(l));
                    assert_eq!(
                        r.accepts_empty(),
                        eval_word(&f, w).unwrap(),
                        "{text} on {w:?}"
                    );
                }
                words = words
                    .iter()
                    .flat_map(|w| {
                        ls.iter().map(move |l| {
                            let mut w = w.clone();
                            w.push(l.clone());
                            w
                        })
                    })
                    .collect();
            }
        }
    }

    #[test]
    fn residuals_stay_finite() {
        let f = parse("G (a -> F b)", None).unwrap();
        let n = reachable_residuals(&f, &letters());
        assert!(n < 10, "{n}");
        assert_eq!(reachable_residuals(&Formula::True, &letters()), 1);
        let nested = parse("((F b -> F a) U (F b U a))", None).unwrap();
        assert!(reachable_residuals(&nested, &letters()) < 50);
    }
}
