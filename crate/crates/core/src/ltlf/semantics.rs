//! Direct finite-trace semantics. Each connective is evaluated by its
//! quantifier definition over instants; children are computed once per trace
//! as truth vectors so nested operators stay polynomial.

use super::{Formula, Letter, LtlfError, Trace};

/// `t, i |= f`.
pub fn eval_trace(f: &Formula, t: &Trace, i: usize) -> Result<bool, LtlfError> {
    if i >= t.len() {
        return Err(LtlfError::IndexOutOfRange {
            index: i,
            len: t.len(),
        });
    }
    Ok(truth_vector(f, t.letters())[i])
}

/// `w |= f` for a nonempty slice of letters, i.e. satisfaction at instant 0.
pub fn eval_word(f: &Formula, word: &[Letter]) -> Result<bool, LtlfError> {
    if word.is_empty() {
        return Err(LtlfError::EmptyTrace);
    }
    Ok(truth_vector(f, word)[0])
}

fn truth_vector(f: &Formula, w: &[Letter]) -> Vec<bool> {
    use Formula::*;
    let n = w.len();
    let last = n - 1;
    match f {
        True => vec![true; n],
        False => vec![false; n],
        Atom(p) => w.iter().map(|l| l.contains(p)).collect(),
        Not(g) => truth_vector(g, w).into_iter().map(|b| !b).collect(),
        And(a, b) => zip_with(a, b, w, |x, y| x && y),
        Or(a, b) => zip_with(a, b, w, |x, y| x || y),
        Implies(a, b) => zip_with(a, b, w, |x, y| !x || y),
        Iff(a, b) => zip_with(a, b, w, |x, y| x == y),
        Next(g) => {
            let v = truth_vector(g, w);
            (0..n).map(|i| i < last && v[i + 1]).collect()
        }
        WeakNext(g) => {
            let v = truth_vector(g, w);
            (0..n).map(|i| i == last || v[i + 1]).collect()
        }
        Eventually(g) => {
            let v = truth_vector(g, w);
            (0..n).map(|i| (i..=last).any(|j| v[j])).collect()
        }
        Globally(g) => {
            let v = truth_vector(g, w);
            (0..n).map(|i| (i..=last).all(|j| v[j])).collect()
        }
        Until(a, b) => {
            let va = truth_vector(a, w);
            let vb = truth_vector(b, w);
            (0..n).map(|i| until_at(&va, &vb, i)).collect()
        }
        Release(a, b) => {
            // a R b == !(!a U !b)
            let na: Vec<bool> = truth_vector(a, w).into_iter().map(|x| !x).collect();
            let nb: Vec<bool> = truth_vector(b, w).into_iter().map(|x| !x).collect();
            (0..n).map(|i| !until_at(&na, &nb, i)).collect()
        }
    }
}

fn until_at(va: &[bool], vb: &[bool], i: usize) -> bool {
    (i..vb.len()).any(|j| vb[j] && (i..j).all(|k| va[k]))
}

fn zip_with(a: &Formula, b: &Formula, w: &[Letter], op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    let va = truth_vector(a, w);
    let vb = truth_vector(b, w);
    va.into_iter().zip(vb).map(|(x, y)| op(x, y)).collect()
}

/// Propositional evaluation of a temporal-free formula under one letter.
pub fn eval_assignment(f: &Formula, a: &Letter) -> Result<bool, LtlfError> {
    use Formula::*;
    Ok(match f {
        True => true,
        False => false,
        Atom(p) => a.contains(p),
        Not(g) => !eval_assignment(g, a)?,
        And(x, y) => eval_assignment(x, a)? && eval_assignment(y, a)?,
        Or(x, y) => eval_assignment(x, a)? || eval_assignment(y, a)?,
        Implies(x, y) => !eval_assignment(x, a)? || eval_assignment(y, a)?,
        Iff(x, y) => eval_assignment(x, a)? == eval_assignment(y, a)?,
        Next(_) | WeakNext(_) | Until(..) | Release(..) | Eventually(_) | Globally(_) => {
            return Err(LtlfError::TemporalOperator(f.to_string()))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltlf::parse;

    fn tr(letters: &[&[&str]]) -> Trace {
        Trace::new(letters.iter().map(|l| Letter::of(l)).collect()).unwrap()
    }

    fn f(s: &str) -> Formula {
        parse(s, None).unwrap()
    }

    #[test]
    fn strong_next_fails_at_last_instant() {
        assert!(!eval_trace(&f("X true"), &tr(&[&["p"]]), 0).unwrap());
        assert!(eval_trace(&f("X true"), &tr(&[&["p"], &[]]), 0).unwrap());
    }

    #[test]
    fn weak_next_holds_at_last_instant() {
        let wx = Formula::weak_next(Formula::False);
        assert!(eval_trace(&wx, &tr(&[&[]]), 0).unwrap());
        assert!(!eval_trace(&wx, &tr(&[&[], &[]]), 0).unwrap());
    }

    #[test]
    fn eventually_and_until() {
        assert!(eval_trace(&f("F p"), &tr(&[&[], &["p"]]), 0).unwrap());
        let pu = f("p U q");
        assert!(eval_trace(&pu, &tr(&[&["p"], &["p"], &["q"]]), 0).unwrap());
        assert!(!eval_trace(&pu, &tr(&[&["p"], &[], &["q"]]), 0).unwrap());
        // q at the start discharges immediately
        assert!(eval_trace(&pu, &tr(&[&["q"], &[]]), 0).unwrap());
        // evaluation from a later instant
        assert!(eval_trace(&pu, &tr(&[&["p"], &[], &["q"]]), 2).unwrap());
    }

    #[test]
    fn globally_over_suffix() {
        let g = f("G p");
        let t = tr(&[&[], &["p"], &["p"]]);
        assert!(!eval_trace(&g, &t, 0).unwrap());
        assert!(eval_trace(&g, &t, 1).unwrap());
    }

    #[test]
    fn index_out_of_range() {
        assert_eq!(
            eval_trace(&f("p"), &tr(&[&[]]), 1),
            Err(LtlfError::IndexOutOfRange { index: 1, len: 1 })
        );
    }

    #[test]
    fn assignments() {
        assert!(eval_assignment(&f("a & !b"), &Letter::of(&["a"])).unwrap());
        assert!(eval_assignment(&f("a -> b"), &Letter::new()).unwrap());
        assert!(matches!(
            eval_assignment(&f("F a"), &Letter::of(&["a"])),
            Err(LtlfError::TemporalOperator(_))
        ));
    }

    #[test]
    fn release_is_dual_of_until() {
        let r = Formula::release(f("a"), f("b"));
        // b must hold up to and including the first a, or forever
        assert!(eval_trace(&r, &tr(&[&["b"], &["a", "b"], &[]]), 0).unwrap());
        assert!(eval_trace(&r, &tr(&[&["b"], &["b"]]), 0).unwrap());
        assert!(!eval_trace(&r, &tr(&[&["b"], &["a"]]), 0).unwrap());
    }
}
