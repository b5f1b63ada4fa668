//! Linear temporal logic over finite traces.
//!
//! Formulas are plain trees. `F` and `G` are first-class nodes; the weak next
//! and release operators only show up in negation normal form.

mod parser;
mod semantics;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parser::parse;
pub use semantics::{eval_assignment, eval_trace, eval_word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LtlfError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown proposition `{0}`")]
    UnknownAtom(String),
    #[error("invalid proposition name `{0}`")]
    InvalidName(String),
    #[error("instant {index} is outside a trace of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("temporal operator in propositional context: {0}")]
    TemporalOperator(String),
    #[error("traces must contain at least one letter")]
    EmptyTrace,
}

/// An atomic proposition. Names follow `[A-Za-z_][A-Za-z0-9_]*` and must not
/// collide with a keyword of the concrete syntax.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Proposition(Arc<str>);

pub(crate) const KEYWORDS: [&str; 6] = ["true", "false", "X", "F", "G", "U"];

impl Proposition {
    pub fn new(name: &str) -> Result<Self, LtlfError> {
        if is_identifier(name) && !KEYWORDS.contains(&name) {
            Ok(Proposition(Arc::from(name)))
        } else {
            Err(LtlfError::InvalidName(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl TryFrom<String> for Proposition {
    type Error = LtlfError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Proposition::new(&value)
    }
}

impl From<Proposition> for String {
    fn from(p: Proposition) -> String {
        p.0.to_string()
    }
}

impl fmt::Debug for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The propositions true at one instant.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(pub BTreeSet<Proposition>);

impl Letter {
    pub fn new() -> Self {
        Letter(BTreeSet::new())
    }

    pub fn contains(&self, p: &Proposition) -> bool {
        self.0.contains(p)
    }

    pub fn insert(&mut self, p: Proposition) {
        self.0.insert(p);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Proposition> {
        self.0.iter()
    }

    pub fn union(&self, other: &Letter) -> Letter {
        Letter(self.0.union(&other.0).cloned().collect())
    }

    /// Builds a letter from names; panics on invalid names, so only use it
    /// with literals.
    pub fn of(names: &[&str]) -> Letter {
        Letter(
            names
                .iter()
                .map(|n| Proposition::new(n).expect("valid proposition name"))
                .collect(),
        )
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// A nonempty finite word over sets of propositions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Trace(Vec<Letter>);

impl Trace {
    pub fn new(letters: Vec<Letter>) -> Result<Self, LtlfError> {
        if letters.is_empty() {
            return Err(LtlfError::EmptyTrace);
        }
        Ok(Trace(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> usize {
        self.0.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Proposition),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    /// Dual of `Next`: true at the last instant.
    WeakNext(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    /// Dual of `Until`.
    Release(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Globally(Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Result<Formula, LtlfError> {
        Ok(Formula::Atom(Proposition::new(name)?))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn weak_next(f: Formula) -> Formula {
        Formula::WeakNext(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Formula {
        Formula::Release(Box::new(a), Box::new(b))
    }

    pub fn eventually(f: Formula) -> Formula {
        Formula::Eventually(Box::new(f))
    }

    pub fn globally(f: Formula) -> Formula {
        Formula::Globally(Box::new(f))
    }

    /// Conjunction of all formulas, `true` when empty.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Disjunction of all formulas, `false` when empty.
    pub fn disjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    pub fn is_temporal_free(&self) -> bool {
        use Formula::*;
        match self {
            True | False | Atom(_) => true,
            Not(f) => f.is_temporal_free(),
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => {
                a.is_temporal_free() && b.is_temporal_free()
            }
            Next(_) | WeakNext(_) | Until(..) | Release(..) | Eventually(_) | Globally(_) => false,
        }
    }

    /// Whether the formula only uses constructors of the concrete syntax.
    pub fn is_surface(&self) -> bool {
        use Formula::*;
        match self {
            True | False | Atom(_) => true,
            WeakNext(_) | Release(..) => false,
            Not(f) | Next(f) | Eventually(f) | Globally(f) => f.is_surface(),
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Until(a, b) => {
                a.is_surface() && b.is_surface()
            }
        }
    }

    pub fn propositions(&self) -> BTreeSet<Proposition> {
        let mut out = BTreeSet::new();
        self.collect_propositions(&mut out);
        out
    }

    fn collect_propositions(&self, out: &mut BTreeSet<Proposition>) {
        use Formula::*;
        match self {
            True | False => {}
            Atom(p) => {
                out.insert(p.clone());
            }
            Not(f) | Next(f) | WeakNext(f) | Eventually(f) | Globally(f) => {
                f.collect_propositions(out)
            }
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Until(a, b) | Release(a, b) => {
                a.collect_propositions(out);
                b.collect_propositions(out);
            }
        }
    }

    pub fn size(&self) -> usize {
        use Formula::*;
        match self {
            True | False | Atom(_) => 1,
            Not(f) | Next(f) | WeakNext(f) | Eventually(f) | Globally(f) => 1 + f.size(),
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Until(a, b) | Release(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Negation normal form. Negations end up directly above atoms and the
    /// derived connectives `->` and `<->` are expanded.
    pub fn to_nnf(&self) -> Formula {
        nnf(self, false)
    }
}

/// Atoms occurring in `f`.
pub fn propositions(f: &Formula) -> BTreeSet<Proposition> {
    f.propositions()
}

pub fn to_nnf(f: &Formula) -> Formula {
    f.to_nnf()
}

fn nnf(f: &Formula, negate: bool) -> Formula {
    use Formula::*;
    match (f, negate) {
        (True, false) | (False, true) => True,
        (False, false) | (True, true) => False,
        (Atom(p), false) => Atom(p.clone()),
        (Atom(p), true) => Formula::not(Atom(p.clone())),
        (Not(g), n) => nnf(g, !n),
        (And(a, b), false) => Formula::and(nnf(a, false), nnf(b, false)),
        (And(a, b), true) => Formula::or(nnf(a, true), nnf(b, true)),
        (Or(a, b), false) => Formula::or(nnf(a, false), nnf(b, false)),
        (Or(a, b), true) => Formula::and(nnf(a, true), nnf(b, true)),
        (Implies(a, b), false) => Formula::or(nnf(a, true), nnf(b, false)),
        (Implies(a, b), true) => Formula::and(nnf(a, false), nnf(b, true)),
        (Iff(a, b), false) => Formula::or(
            Formula::and(nnf(a, false), nnf(b, false)),
            Formula::and(nnf(a, true), nnf(b, true)),
        ),
        (Iff(a, b), true) => Formula::or(
            Formula::and(nnf(a, false), nnf(b, true)),
            Formula::and(nnf(a, true), nnf(b, false)),
        ),
        (Next(g), false) => Formula::next(nnf(g, false)),
        (Next(g), true) => Formula::weak_next(nnf(g, true)),
        (WeakNext(g), false) => Formula::weak_next(nnf(g, false)),
        (WeakNext(g), true) => Formula::next(nnf(g, true)),
        (Until(a, b), false) => Formula::until(nnf(a, false), nnf(b, false)),
        (Until(a, b), true) => Formula::release(nnf(a, true), nnf(b, true)),
        (Release(a, b), false) => Formula::release(nnf(a, false), nnf(b, false)),
        (Release(a, b), true) => Formula::until(nnf(a, true), nnf(b, true)),
        (Eventually(g), false) => Formula::eventually(nnf(g, false)),
        (Eventually(g), true) => Formula::globally(nnf(g, true)),
        (Globally(g), false) => Formula::globally(nnf(g, false)),
        (Globally(g), true) => Formula::eventually(nnf(g, true)),
    }
}

/// Fully parenthesized rendering; `parse` reads it back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        match self {
            True => f.write_str("true"),
            False => f.write_str("false"),
            Atom(p) => write!(f, "{p}"),
            Not(g) => write!(f, "!{g}"),
            Next(g) => write!(f, "X {g}"),
            WeakNext(g) => write!(f, "WX {g}"),
            Eventually(g) => write!(f, "F {g}"),
            Globally(g) => write!(f, "G {g}"),
            And(a, b) => write!(f, "({a} & {b})"),
            Or(a, b) => write!(f, "({a} | {b})"),
            Implies(a, b) => write!(f, "({a} -> {b})"),
            Iff(a, b) => write!(f, "({a} <-> {b})"),
            Until(a, b) => write!(f, "({a} U {b})"),
            Release(a, b) => write!(f, "({a} R {b})"),
        }
    }
}
