//! Formula progression over letters.
//!
//! A residual is kept in disjunctive normal form over "atoms": literals, the
//! temporal subformulas of the input, and two end markers. `ALIVE` is an
//! obligation that another letter follows (left behind by a strong next),
//! `DEAD` states that the word has ended (left behind by a weak next).
//! Clauses are sorted, subsumed clauses are dropped and clauses holding a
//! complementary pair are removed, which gives every residual a unique
//! representation and bounds the number of residuals.

use std::collections::HashMap;

use crate::ltlf::{Formula, Letter, Proposition};

use super::AutomataError;

/// Maximum number of distinct propositions a progressed formula may mention.
pub const MAX_FORMULA_PROPS: usize = 64;

type AtomId = u32;
type Clause = Vec<AtomId>;
type Dnf = Vec<Clause>;

/// Handle to an interned residual of one [`Progressor`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidualId(pub u32);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Atom {
    Lit(u32, bool),
    Next(Dnf),
    WeakNext(Dnf),
    Until(Dnf, Dnf),
    Release(Dnf, Dnf),
    Eventually(Dnf),
    Globally(Dnf),
    Alive,
    Dead,
}

const ALIVE: AtomId = 0;
const DEAD: AtomId = 1;

fn dnf_true() -> Dnf {
    vec![Vec::new()]
}

fn dnf_false() -> Dnf {
    Vec::new()
}

/// Incremental progression engine for one formula. Residuals are interned and
/// numbered in the order they are first produced.
#[derive(Clone, Debug)]
pub struct Progressor {
    props: Vec<Proposition>,
    prop_index: HashMap<Proposition, u32>,
    atoms: Vec<Atom>,
    atom_index: HashMap<Atom, AtomId>,
    residuals: Vec<Dnf>,
    accepting: Vec<bool>,
    residual_index: HashMap<Dnf, ResidualId>,
    atom_memo: HashMap<(AtomId, u64), Dnf>,
    step_memo: HashMap<(ResidualId, u64), ResidualId>,
    init: ResidualId,
}

impl Progressor {
    pub fn new(f: &Formula) -> Result<Self, AutomataError> {
        let props: Vec<Proposition> = f.propositions().into_iter().collect();
        if props.len() > MAX_FORMULA_PROPS {
            return Err(AutomataError::TooManyPropositions {
                found: props.len(),
                cap: MAX_FORMULA_PROPS,
            });
        }
        let prop_index = props
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let mut p = Progressor {
            props,
            prop_index,
            atoms: Vec::new(),
            atom_index: HashMap::new(),
            residuals: Vec::new(),
            accepting: Vec::new(),
            residual_index: HashMap::new(),
            atom_memo: HashMap::new(),
            step_memo: HashMap::new(),
            init: ResidualId(0),
        };
        assert_eq!(p.intern_atom(Atom::Alive), ALIVE);
        assert_eq!(p.intern_atom(Atom::Dead), DEAD);
        let start = p.dnf_of(&f.to_nnf());
        p.init = p.intern_residual(start);
        Ok(p)
    }

    /// Propositions of the formula; bit `i` of a letter mask is `props()[i]`.
    pub fn props(&self) -> &[Proposition] {
        &self.props
    }

    pub fn initial(&self) -> ResidualId {
        self.init
    }

    pub fn num_residuals(&self) -> usize {
        self.residuals.len()
    }

    /// Projects a letter onto the formula's propositions. Propositions the
    /// formula does not mention are ignored.
    pub fn mask_of(&self, letter: &Letter) -> u64 {
        letter
            .iter()
            .filter_map(|p| self.prop_index.get(p))
            .fold(0u64, |m, &i| m | (1u64 << i))
    }

    pub fn step(&mut self, r: ResidualId, letter: &Letter) -> ResidualId {
        let mask = self.mask_of(letter);
        self.step_mask(r, mask)
    }

    pub fn step_mask(&mut self, r: ResidualId, mask: u64) -> ResidualId {
        if let Some(&next) = self.step_memo.get(&(r, mask)) {
            return next;
        }
        let dnf = self.residuals[r.0 as usize].clone();
        let progressed = self.progress_dnf(&dnf, mask);
        let next = self.intern_residual(progressed);
        self.step_memo.insert((r, mask), next);
        next
    }

    /// Whether the word read so far may end here.
    pub fn is_accepting(&self, r: ResidualId) -> bool {
        self.accepting[r.0 as usize]
    }

    pub fn is_true(&self, r: ResidualId) -> bool {
        self.residuals[r.0 as usize] == dnf_true()
    }

    pub fn is_false(&self, r: ResidualId) -> bool {
        self.residuals[r.0 as usize].is_empty()
    }

    /// Human-readable rendering of a residual, for diagnostics and tests.
    pub fn describe(&self, r: ResidualId) -> String {
        self.render_dnf(&self.residuals[r.0 as usize])
    }

    fn intern_atom(&mut self, atom: Atom) -> AtomId {
        if let Some(&id) = self.atom_index.get(&atom) {
            return id;
        }
        let id = self.atoms.len() as AtomId;
        self.atoms.push(atom.clone());
        self.atom_index.insert(atom, id);
        id
    }

    fn intern_residual(&mut self, dnf: Dnf) -> ResidualId {
        if let Some(&id) = self.residual_index.get(&dnf) {
            return id;
        }
        let id = ResidualId(self.residuals.len() as u32);
        let acc = dnf
            .iter()
            .any(|clause| clause.iter().all(|&a| self.end_accepting_atom(a)));
        self.residuals.push(dnf.clone());
        self.accepting.push(acc);
        self.residual_index.insert(dnf, id);
        id
    }

    fn end_accepting_atom(&self, a: AtomId) -> bool {
        match self.atoms[a as usize] {
            Atom::Lit(..) | Atom::Next(_) | Atom::Until(..) | Atom::Eventually(_) | Atom::Alive => {
                false
            }
            Atom::WeakNext(_) | Atom::Release(..) | Atom::Globally(_) | Atom::Dead => true,
        }
    }

    fn single(&mut self, atom: Atom) -> Dnf {
        vec![vec![self.intern_atom(atom)]]
    }

    fn dnf_of(&mut self, f: &Formula) -> Dnf {
        use Formula::*;
        match f {
            True => dnf_true(),
            False => dnf_false(),
            Atom(p) => {
                let i = self.prop_index[p];
                self.single(self::Atom::Lit(i, true))
            }
            Not(g) => match &**g {
                Atom(p) => {
                    let i = self.prop_index[p];
                    self.single(self::Atom::Lit(i, false))
                }
                // only reachable for non-NNF input
                other => {
                    let nnf = Formula::not(other.clone()).to_nnf();
                    self.dnf_of(&nnf)
                }
            },
            And(a, b) => {
                let (x, y) = (self.dnf_of(a), self.dnf_of(b));
                self.and(&x, &y)
            }
            Or(a, b) => {
                let (x, y) = (self.dnf_of(a), self.dnf_of(b));
                self.or(x, y)
            }
            Implies(..) | Iff(..) => {
                let nnf = f.to_nnf();
                self.dnf_of(&nnf)
            }
            Next(g) => {
                let x = self.dnf_of(g);
                self.single(self::Atom::Next(x))
            }
            WeakNext(g) => {
                let x = self.dnf_of(g);
                self.single(self::Atom::WeakNext(x))
            }
            Until(a, b) => {
                let (x, y) = (self.dnf_of(a), self.dnf_of(b));
                self.single(self::Atom::Until(x, y))
            }
            Release(a, b) => {
                let (x, y) = (self.dnf_of(a), self.dnf_of(b));
                self.single(self::Atom::Release(x, y))
            }
            Eventually(g) => {
                let x = self.dnf_of(g);
                self.single(self::Atom::Eventually(x))
            }
            Globally(g) => {
                let x = self.dnf_of(g);
                self.single(self::Atom::Globally(x))
            }
        }
    }

    fn complementary(&self, a: AtomId, b: AtomId) -> bool {
        match (&self.atoms[a as usize], &self.atoms[b as usize]) {
            (Atom::Lit(p, x), Atom::Lit(q, y)) => p == q && x != y,
            (Atom::Alive, Atom::Dead) | (Atom::Dead, Atom::Alive) => true,
            _ => false,
        }
    }

    fn normalize(&self, mut clauses: Dnf) -> Dnf {
        for c in clauses.iter_mut() {
            c.sort_unstable();
            c.dedup();
        }
        clauses.retain(|c| {
            !c.iter()
                .enumerate()
                .any(|(i, &a)| c[i + 1..].iter().any(|&b| self.complementary(a, b)))
        });
        // shorter clauses first so subsumption only looks backwards
        clauses.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        clauses.dedup();
        let mut kept: Dnf = Vec::with_capacity(clauses.len());
        for c in clauses {
            if !kept.iter().any(|k| is_subset(k, &c)) {
                kept.push(c);
            }
        }
        kept.sort_unstable();
        kept
    }

    fn or(&self, mut a: Dnf, b: Dnf) -> Dnf {
        a.extend(b);
        self.normalize(a)
    }

    fn and(&self, a: &Dnf, b: &Dnf) -> Dnf {
        let mut out = Vec::with_capacity(a.len() * b.len());
        for x in a {
            for y in b {
                let mut c = x.clone();
                c.extend_from_slice(y);
                out.push(c);
            }
        }
        self.normalize(out)
    }

    fn progress_dnf(&mut self, dnf: &Dnf, mask: u64) -> Dnf {
        let mut acc = dnf_false();
        for clause in dnf {
            let mut conj = dnf_true();
            for &atom in clause {
                let p = self.progress_atom(atom, mask);
                conj = self.and(&conj, &p);
                if conj.is_empty() {
                    break;
                }
            }
            acc = self.or(acc, conj);
            if acc == dnf_true() {
                break;
            }
        }
        acc
    }

    fn progress_atom(&mut self, a: AtomId, mask: u64) -> Dnf {
        if let Some(d) = self.atom_memo.get(&(a, mask)) {
            return d.clone();
        }
        let out = match self.atoms[a as usize].clone() {
            Atom::Lit(p, positive) => {
                if ((mask >> p) & 1 == 1) == positive {
                    dnf_true()
                } else {
                    dnf_false()
                }
            }
            Atom::Alive => dnf_true(),
            Atom::Dead => dnf_false(),
            Atom::Next(arg) => self.and(&arg, &vec![vec![ALIVE]]),
            Atom::WeakNext(arg) => self.or(arg, vec![vec![DEAD]]),
            Atom::Until(lhs, rhs) => {
                let pr = self.progress_dnf(&rhs, mask);
                let pl = self.progress_dnf(&lhs, mask);
                let keep = self.and(&pl, &vec![vec![a]]);
                self.or(pr, keep)
            }
            Atom::Release(lhs, rhs) => {
                let pr = self.progress_dnf(&rhs, mask);
                let pl = self.progress_dnf(&lhs, mask);
                let keep = self.or(pl, vec![vec![a]]);
                self.and(&pr, &keep)
            }
            Atom::Eventually(arg) => {
                let pa = self.progress_dnf(&arg, mask);
                self.or(pa, vec![vec![a]])
            }
            Atom::Globally(arg) => {
                let pa = self.progress_dnf(&arg, mask);
                self.and(&pa, &vec![vec![a]])
            }
        };
        self.atom_memo.insert((a, mask), out.clone());
        out
    }

    fn render_dnf(&self, dnf: &Dnf) -> String {
        if dnf.is_empty() {
            return "false".into();
        }
        let parts: Vec<String> = dnf
            .iter()
            .map(|c| {
                if c.is_empty() {
                    return "true".into();
                }
                let lits: Vec<String> = c.iter().map(|&a| self.render_atom(a)).collect();
                if lits.len() == 1 || dnf.len() == 1 {
                    lits.join(" & ")
                } else {
                    format!("({})", lits.join(" & "))
                }
            })
            .collect();
        parts.join(" | ")
    }

    fn render_arg(&self, d: &Dnf) -> String {
        let s = self.render_dnf(d);
        if d.len() > 1 || d.first().is_some_and(|c| c.len() > 1) {
            format!("({s})")
        } else {
            s
        }
    }

    fn render_atom(&self, a: AtomId) -> String {
        match &self.atoms[a as usize] {
            Atom::Lit(p, true) => self.props[*p as usize].to_string(),
            Atom::Lit(p, false) => format!("!{}", self.props[*p as usize]),
            Atom::Alive => "ALIVE".into(),
            Atom::Dead => "DEAD".into(),
            Atom::Next(x) => format!("X {}", self.render_arg(x)),
            Atom::WeakNext(x) => format!("WX {}", self.render_arg(x)),
            Atom::Eventually(x) => format!("F {}", self.render_arg(x)),
            Atom::Globally(x) => format!("G {}", self.render_arg(x)),
            Atom::Until(x, y) => format!("({} U {})", self.render_arg(x), self.render_arg(y)),
            Atom::Release(x, y) => format!("({} R {})", self.render_arg(x), self.render_arg(y)),
        }
    }
}

fn is_subset(small: &[AtomId], big: &[AtomId]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}
