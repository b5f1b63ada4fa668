use crate::domains::Domain;
use crate::ltlf::{Formula, Letter, Proposition};
use crate::reductions::{Agent, MappingSpec, MbsdInstance};

use super::{QbfCnf, QbfCnf1, Quantifier};

fn prop(side: char, i: usize, value: bool) -> Proposition {
    let v = if value { 't' } else { 'f' };
    Proposition::new(&format!("p{side}_{i}_{v}")).expect("generated names are identifiers")
}

fn star(side: char) -> Proposition {
    Proposition::new(&format!("p{side}_star")).expect("generated names are identifiers")
}

/// Per side: major states `m1..m{n+1}`; from `mi` a true path through `ti`
/// labelled `p_i_t` and a false path through `fi` labelled `p_i_f`; `m{n+1}`
/// is labelled `p_star` and loops. A's first major state also carries
/// `p_star`, so that premises on A's star hold from the first instant.
fn gadget_domain(side: char, n: usize) -> Domain {
    let mut props = vec![star(side)];
    let mut states = Vec::new();
    let mut edges = Vec::new();
    for i in 1..=n {
        props.push(prop(side, i, true));
        props.push(prop(side, i, false));
        let m = states.len();
        let mut label = Letter::new();
        if i == 1 && side == 'a' {
            label.insert(star(side));
        }
        states.push((format!("m{i}"), label));
        states.push((
            format!("t{i}"),
            Letter(std::iter::once(prop(side, i, true)).collect()),
        ));
        states.push((
            format!("f{i}"),
            Letter(std::iter::once(prop(side, i, false)).collect()),
        ));
        edges.extend([(m, m + 1), (m, m + 2), (m + 1, m + 3), (m + 2, m + 3)]);
    }
    let last = states.len();
    states.push((
        format!("m{}", n + 1),
        Letter(std::iter::once(star(side)).collect()),
    ));
    edges.push((last, last));
    Domain::new(props, states, 0, edges).expect("gadget domain is well formed")
}

/// Target instance with one conjunct per clause plus the stopping constraint
/// `F pa_star -> F pb_star`; stop agent B.
pub fn qbf1_to_mbsd(q: &QbfCnf1) -> MbsdInstance {
    let inner = q.inner();
    let n = q.n();
    // position of each variable among the universals or existentials, 1-based
    let mut index = vec![0usize; inner.num_vars() as usize + 1];
    for (pos, &(_, v)) in inner.prefix().iter().enumerate() {
        index[v as usize] = pos / 2 + 1;
    }
    let atom = |p: Proposition| Formula::Atom(p);
    let mut conjuncts = Vec::new();
    for clause in inner.clauses() {
        let mut premise = atom(star('a'));
        let mut conclusion = Vec::new();
        for &l in clause {
            let v = l.unsigned_abs();
            let i = index[v as usize];
            match inner.quantifier(v) {
                // the clause fails on this side exactly when the literal is false
                Some(Quantifier::Forall) => premise = atom(prop('a', i, l < 0)),
                _ => conclusion.push(atom(prop('b', i, l > 0))),
            }
        }
        conjuncts.push((premise, Formula::disjunction(conclusion)));
    }
    conjuncts.push((atom(star('a')), atom(star('b'))));
    MbsdInstance::new(
        gadget_domain('a', n),
        gadget_domain('b', n),
        MappingSpec::Target(conjuncts),
        Agent::B,
    )
    .expect("gadget instance is well formed")
}

/// `forall x1 exists y1 forall x2 exists y2.
///  (x1 | y1 | y2) & (!x2 | !y1) & (y1 | !y2)` with `x1, y1, x2, y2 = 1, 2, 3, 4`.
pub fn example_f() -> QbfCnf1 {
    use Quantifier::{Exists, Forall};
    let q = QbfCnf::new(
        4,
        vec![(Forall, 1), (Exists, 2), (Forall, 3), (Exists, 4)],
        vec![vec![1, 2, 4], vec![-3, -2], vec![2, -4]],
    )
    .expect("example is well formed");
    QbfCnf1::new(q).expect("example is in one-universal-per-clause form")
}
