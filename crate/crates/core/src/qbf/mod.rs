//! Prenex CNF quantified Boolean formulas: a QDIMACS reader, a brute-force
//! evaluator, the one-universal-per-clause normal form, and the reduction
//! from that form to target-mapping instances.

mod gadget;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use gadget::{example_f, qbf1_to_mbsd};

/// Exhaustive evaluation stops here.
pub const EVAL_VAR_CAP: usize = 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QbfError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("variable {0} occurs in a clause but is not quantified")]
    FreeVariable(u32),
    #[error("variable {0} is quantified twice")]
    DuplicateQuantifier(u32),
    #[error("variable {var} exceeds the declared count of {declared}")]
    VariableOutOfRange { var: u32, declared: u32 },
    #[error("{found} variables exceed the evaluation cap of {cap}")]
    TooManyVariables { found: usize, cap: usize },
    #[error("not in one-universal-per-clause form: {0}")]
    NotCnf1(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

/// Prenex CNF. Literals are nonzero DIMACS integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QbfCnf {
    num_vars: u32,
    prefix: Vec<(Quantifier, u32)>,
    clauses: Vec<Vec<i32>>,
}

impl QbfCnf {
    pub fn new(
        num_vars: u32,
        prefix: Vec<(Quantifier, u32)>,
        clauses: Vec<Vec<i32>>,
    ) -> Result<QbfCnf, QbfError> {
        let mut bound = BTreeSet::new();
        for &(_, v) in &prefix {
            if v == 0 || v > num_vars {
                return Err(QbfError::VariableOutOfRange {
                    var: v,
                    declared: num_vars,
                });
            }
            if !bound.insert(v) {
                return Err(QbfError::DuplicateQuantifier(v));
            }
        }
        for &lit in clauses.iter().flatten() {
            let v = lit.unsigned_abs();
            if lit == 0 || v > num_vars {
                return Err(QbfError::VariableOutOfRange {
                    var: v,
                    declared: num_vars,
                });
            }
            if !bound.contains(&v) {
                return Err(QbfError::FreeVariable(v));
            }
        }
        Ok(QbfCnf {
            num_vars,
            prefix,
            clauses,
        })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn prefix(&self) -> &[(Quantifier, u32)] {
        &self.prefix
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn quantifier(&self, var: u32) -> Option<Quantifier> {
        self.prefix
            .iter()
            .find(|&&(_, v)| v == var)
            .map(|&(q, _)| q)
    }

    pub fn to_qdimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for &(q, v) in &self.prefix {
            let tag = match q {
                Quantifier::Forall => 'a',
                Quantifier::Exists => 'e',
            };
            out.push_str(&format!("{tag} {v} 0\n"));
        }
        for c in &self.clauses {
            for l in c {
                out.push_str(&format!("{l} "));
            }
            out.push_str("0\n");
        }
        out
    }
}

impl fmt::Display for QbfCnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(q, v) in &self.prefix {
            let sym = match q {
                Quantifier::Forall => "A",
                Quantifier::Exists => "E",
            };
            write!(f, "{sym}x{v} ")?;
        }
        let clauses: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                let lits: Vec<String> = c
                    .iter()
                    .map(|&l| {
                        if l < 0 {
                            format!("!x{}", -l)
                        } else {
                            format!("x{l}")
                        }
                    })
                    .collect();
                format!("({})", lits.join(" | "))
            })
            .collect();
        write!(f, "{}", clauses.join(" & "))
    }
}

/// Strictly alternating `forall exists forall exists ...`, one variable per
/// block, with at most one universal literal per clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QbfCnf1(QbfCnf);

impl QbfCnf1 {
    pub fn new(q: QbfCnf) -> Result<QbfCnf1, QbfError> {
        if q.prefix.len() % 2 == 1 {
            return Err(QbfError::NotCnf1("prefix length is odd".into()));
        }
        for (i, &(quant, v)) in q.prefix.iter().enumerate() {
            let want = if i % 2 == 0 {
                Quantifier::Forall
            } else {
                Quantifier::Exists
            };
            if quant != want {
                return Err(QbfError::NotCnf1(format!(
                    "position {} (variable {v}) breaks the alternation",
                    i + 1
                )));
            }
        }
        for (i, c) in q.clauses.iter().enumerate() {
            let universals = c
                .iter()
                .filter(|l| q.quantifier(l.unsigned_abs()) == Some(Quantifier::Forall))
                .count();
            if universals > 1 {
                return Err(QbfError::NotCnf1(format!(
                    "clause {} has {universals} universal literals",
                    i + 1
                )));
            }
        }
        Ok(QbfCnf1(q))
    }

    pub fn inner(&self) -> &QbfCnf {
        &self.0
    }

    pub fn into_inner(self) -> QbfCnf {
        self.0
    }

    /// Number of universal (equivalently existential) variables.
    pub fn n(&self) -> usize {
        self.0.prefix.len() / 2
    }
}

/// Reads the subset: comments, one `p cnf V C` header, `a`/`e` lines and
/// zero-terminated clauses.
pub fn parse_qdimacs(text: &str) -> Result<QbfCnf, QbfError> {
    let mut header: Option<(u32, usize)> = None;
    let mut prefix = Vec::new();
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut pending: Vec<i32> = Vec::new();
    let syntax = |line: usize, message: &str| QbfError::Syntax {
        line,
        message: message.to_string(),
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut tokens = raw.split_whitespace().peekable();
        let Some(&first) = tokens.peek() else {
            continue;
        };
        match first {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(syntax(line, "duplicate header"));
                }
                let parts: Vec<&str> = tokens.collect();
                let (v, c) = match parts.as_slice() {
                    ["p", "cnf", v, c] => (v.parse::<u32>(), c.parse::<usize>()),
                    _ => return Err(syntax(line, "expected `p cnf <vars> <clauses>`")),
                };
                match (v, c) {
                    (Ok(v), Ok(c)) => header = Some((v, c)),
                    _ => return Err(syntax(line, "header counts must be nonnegative integers")),
                }
            }
            "a" | "e" => {
                if header.is_none() {
                    return Err(syntax(line, "quantifier before header"));
                }
                if !clauses.is_empty() || !pending.is_empty() {
                    return Err(syntax(line, "quantifier after clauses"));
                }
                let q = if first == "a" {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                tokens.next();
                let mut closed = false;
                for tok in tokens {
                    let v: i64 = tok.parse().map_err(|_| syntax(line, "bad variable"))?;
                    if closed {
                        return Err(syntax(line, "text after terminating 0"));
                    }
                    if v == 0 {
                        closed = true;
                    } else if v < 0 || v > u32::MAX as i64 {
                        return Err(syntax(line, "quantified variables must be positive"));
                    } else {
                        prefix.push((q, v as u32));
                    }
                }
                if !closed {
                    return Err(syntax(line, "quantifier line must end with 0"));
                }
            }
            _ => {
                if header.is_none() {
                    return Err(syntax(line, "clause before header"));
                }
                for tok in tokens {
                    let l: i32 = tok.parse().map_err(|_| syntax(line, "bad literal"))?;
                    if l == 0 {
                        clauses.push(std::mem::take(&mut pending));
                    } else {
                        pending.push(l);
                    }
                }
            }
        }
    }
    let (num_vars, num_clauses) = header.ok_or_else(|| syntax(0, "missing header"))?;
    if !pending.is_empty() {
        return Err(syntax(text.lines().count(), "unterminated clause"));
    }
    if clauses.len() != num_clauses {
        return Err(syntax(
            0,
            &format!(
                "header declares {num_clauses} clauses, found {}",
                clauses.len()
            ),
        ));
    }
    QbfCnf::new(num_vars, prefix, clauses)
}

/// Game-tree evaluation in prefix order.
pub fn eval_qbf(q: &QbfCnf) -> Result<bool, QbfError> {
    if q.prefix.len() > EVAL_VAR_CAP {
        return Err(QbfError::TooManyVariables {
            found: q.prefix.len(),
            cap: EVAL_VAR_CAP,
        });
    }
    fn go(q: &QbfCnf, depth: usize, val: &mut [bool]) -> bool {
        let Some(&(quant, v)) = q.prefix.get(depth) else {
            return q
                .clauses
                .iter()
                .all(|c| c.iter().any(|&l| val[l.unsigned_abs() as usize] == (l > 0)));
        };
        let branch = |b: bool, val: &mut [bool]| {
            val[v as usize] = b;
            go(q, depth + 1, val)
        };
        match quant {
            Quantifier::Forall => branch(false, val) && branch(true, val),
            Quantifier::Exists => branch(false, val) || branch(true, val),
        }
    }
    let mut val = vec![false; q.num_vars as usize + 1];
    Ok(go(q, 0, &mut val))
}

/// Adds an existential copy `z` right after every universal `x`, ties them
/// with `(x | !z) & (!x | z)`, renames `x` to `z` in the original clauses,
/// and pads with fresh dummy universals until the prefix alternates.
pub fn cnf_to_cnf1(q: &QbfCnf) -> QbfCnf1 {
    let mut next_var = q.num_vars;
    let mut fresh = || {
        next_var += 1;
        next_var
    };
    let mut copy = vec![0u32; q.num_vars as usize + 1];
    let mut expanded = Vec::new();
    let mut clauses = Vec::new();
    for &(quant, v) in &q.prefix {
        expanded.push((quant, v));
        if quant == Quantifier::Forall {
            let z = fresh();
            copy[v as usize] = z;
            expanded.push((Quantifier::Exists, z));
            clauses.push(vec![v as i32, -(z as i32)]);
            clauses.push(vec![-(v as i32), z as i32]);
        }
    }
    for c in &q.clauses {
        clauses.push(
            c.iter()
                .map(|&l| match copy[l.unsigned_abs() as usize] {
                    0 => l,
                    z => l.signum() * z as i32,
                })
                .collect(),
        );
    }
    let mut prefix: Vec<(Quantifier, u32)> = Vec::new();
    for (quant, v) in expanded {
        let expected = if prefix.len().is_multiple_of(2) {
            Quantifier::Forall
        } else {
            Quantifier::Exists
        };
        if quant != expected {
            let dummy = fresh();
            prefix.push((expected, dummy));
        }
        prefix.push((quant, v));
    }
    if prefix.len() % 2 == 1 {
        let dummy = fresh();
        prefix.push((Quantifier::Exists, dummy));
    }
    let out = QbfCnf::new(next_var, prefix, clauses).expect("transform keeps every variable bound");
    QbfCnf1::new(out).expect("transform output alternates with one universal per clause")
}
