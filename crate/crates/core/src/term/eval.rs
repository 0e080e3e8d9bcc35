use std::collections::BTreeMap;

use serde::Serialize;

use super::{Sentence, Term};
use crate::algebra::{Element, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::limits::Limits;

/// Values for the variables of a term or sentence.
pub type Assignment = BTreeMap<String, Element>;

pub fn eval_term(algebra: &FiniteAlgebra, term: &Term, assignment: &Assignment) -> Result<Element> {
    Ok(match term {
        Term::Var(v) => *assignment.get(v).ok_or_else(|| Error::UnboundVariable(v.clone()))?,
        Term::Zero => algebra.zero(),
        Term::One => algebra.one(),
        Term::Join(l, r) => algebra.join(eval_term(algebra, l, assignment)?, eval_term(algebra, r, assignment)?),
        Term::Meet(l, r) => algebra.meet(eval_term(algebra, l, assignment)?, eval_term(algebra, r, assignment)?),
        Term::Star(t) => algebra.star(eval_term(algebra, t, assignment)?),
        Term::Quote(t) => algebra.quote(eval_term(algebra, t, assignment)?),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    /// Least failing assignment, variables in name order and elements in
    /// index order.
    pub witness: Option<Assignment>,
}

impl Verdict {
    pub fn describe_witness(&self, algebra: &FiniteAlgebra) -> String {
        match &self.witness {
            None => String::new(),
            Some(w) => describe_assignment(algebra, w),
        }
    }
}

pub fn describe_assignment(algebra: &FiniteAlgebra, assignment: &Assignment) -> String {
    assignment
        .iter()
        .map(|(v, &e)| format!("{v}={}", algebra.label(e)))
        .collect::<Vec<_>>()
        .join(", ")
}

// Terms with variables resolved to slots.
enum Code {
    Var(usize),
    Zero,
    One,
    Join(Box<Code>, Box<Code>),
    Meet(Box<Code>, Box<Code>),
    Star(Box<Code>),
    Quote(Box<Code>),
}

impl Code {
    fn compile(term: &Term, vars: &[String]) -> (Code, usize) {
        // Returns the code and 1 + the highest slot it reads (0 if none).
        match term {
            Term::Var(v) => {
                let slot = vars.binary_search(v).expect("sentence variable");
                (Code::Var(slot), slot + 1)
            }
            Term::Zero => (Code::Zero, 0),
            Term::One => (Code::One, 0),
            Term::Join(l, r) | Term::Meet(l, r) => {
                let (l, dl) = Code::compile(l, vars);
                let (r, dr) = Code::compile(r, vars);
                let code = if matches!(term, Term::Join(..)) {
                    Code::Join(Box::new(l), Box::new(r))
                } else {
                    Code::Meet(Box::new(l), Box::new(r))
                };
                (code, dl.max(dr))
            }
            Term::Star(t) => {
                let (c, d) = Code::compile(t, vars);
                (Code::Star(Box::new(c)), d)
            }
            Term::Quote(t) => {
                let (c, d) = Code::compile(t, vars);
                (Code::Quote(Box::new(c)), d)
            }
        }
    }

    fn eval(&self, a: &FiniteAlgebra, vals: &[Element]) -> Element {
        match self {
            Code::Var(s) => vals[*s],
            Code::Zero => a.zero(),
            Code::One => a.one(),
            Code::Join(l, r) => a.join(l.eval(a, vals), r.eval(a, vals)),
            Code::Meet(l, r) => a.meet(l.eval(a, vals), r.eval(a, vals)),
            Code::Star(t) => a.star(t.eval(a, vals)),
            Code::Quote(t) => a.quote(t.eval(a, vals)),
        }
    }
}

struct CompiledEq {
    lhs: Code,
    rhs: Code,
    depth: usize,
}

impl CompiledEq {
    fn holds(&self, a: &FiniteAlgebra, vals: &[Element]) -> bool {
        self.lhs.eval(a, vals) == self.rhs.eval(a, vals)
    }
}

struct Search<'a> {
    algebra: &'a FiniteAlgebra,
    premises: Vec<CompiledEq>,
    conclusion: CompiledEq,
    vars: usize,
    scanned: u128,
    cap: u128,
}

impl Search<'_> {
    // Assignments are visited in lexicographic order; a premise is checked
    // as soon as its variables are bound, pruning the whole subtree.
    fn run(&mut self, depth: usize, vals: &mut Vec<Element>) -> Result<bool> {
        self.scanned += 1;
        if self.scanned > self.cap {
            return Err(Error::CapExceeded {
                what: "assignment scan",
                needed: self.scanned,
                cap: self.cap,
            });
        }
        let a = self.algebra;
        if self.premises.iter().any(|p| p.depth == depth && !p.holds(a, vals)) {
            return Ok(false);
        }
        if depth == self.vars {
            return Ok(!self.conclusion.holds(a, vals));
        }
        for e in a.elements() {
            vals[depth] = e;
            if self.run(depth + 1, vals)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Decides `algebra ⊨ sentence` by scanning every assignment.
pub fn holds_in(algebra: &FiniteAlgebra, sentence: &Sentence, limits: &Limits) -> Result<Verdict> {
    let vars = sentence.vars();
    let compile = |eq: &super::Equation| {
        let (lhs, dl) = Code::compile(&eq.lhs, &vars);
        let (rhs, dr) = Code::compile(&eq.rhs, &vars);
        CompiledEq {
            lhs,
            rhs,
            depth: dl.max(dr),
        }
    };
    let mut search = Search {
        algebra,
        premises: sentence.premises.iter().map(compile).collect(),
        conclusion: compile(&sentence.conclusion),
        vars: vars.len(),
        scanned: 0,
        cap: limits.assignments,
    };
    let mut vals = vec![0; vars.len()];
    let failed = search.run(0, &mut vals)?;
    Ok(Verdict {
        holds: !failed,
        witness: failed.then(|| vars.into_iter().zip(vals).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin;
    use crate::term::parse_sentence;

    fn check(alg: &str, s: &str) -> Verdict {
        holds_in(&builtin(alg).unwrap(), &parse_sentence(s).unwrap(), &Limits::default()).unwrap()
    }

    #[test]
    fn eval_examples() {
        let k = builtin("3_klst").unwrap();
        let a = k.element("a").unwrap();
        let asg: Assignment = [("x".to_string(), a)].into();
        let t = crate::term::parse_term("x*'").unwrap();
        assert_eq!(eval_term(&k, &t, &asg).unwrap(), k.one());

        let m = builtin("4_dmba").unwrap();
        let asg: Assignment = [("x".to_string(), m.element("a").unwrap())].into();
        let t = crate::term::parse_term("x \\/ x*").unwrap();
        assert_eq!(eval_term(&m, &t, &asg).unwrap(), m.one());

        for name in ["2", "3_dblst", "3_klst", "4_dmba"] {
            let alg = builtin(name).unwrap();
            assert_eq!(eval_term(&alg, &Term::Zero, &Assignment::new()).unwrap(), alg.zero());
        }
    }

    #[test]
    fn unbound_variables_are_errors() {
        let k = builtin("3_klst").unwrap();
        let t = crate::term::parse_term("x \\/ y").unwrap();
        let asg: Assignment = [("x".to_string(), 0)].into();
        assert!(matches!(eval_term(&k, &t, &asg), Err(Error::UnboundVariable(v)) if v == "y"));
    }

    #[test]
    fn holds_in_examples() {
        assert!(check("4_dmba", "x*'' = x*").holds);
        let v = check("4_dmba", "x*' = x**");
        assert!(!v.holds);
        let m = builtin("4_dmba").unwrap();
        assert_eq!(v.witness.unwrap()["x"], m.element("a").unwrap());
        let b = m.element("b").unwrap();
        let t = crate::term::parse_sentence("x*' = x**").unwrap().conclusion;
        let asg: Assignment = [("x".to_string(), b)].into();
        assert_ne!(eval_term(&m, &t.lhs, &asg).unwrap(), eval_term(&m, &t.rhs, &asg).unwrap());
        assert!(check("3_dblst", "x \\/ x' = 1").holds);
    }

    #[test]
    fn witness_is_lexicographically_least() {
        // Fails for (x, y) in {(0, 1), (1, 0), ...}; the least is x=0, y=1
        // in the two-element algebra.
        let v = check("2", "x = y");
        assert_eq!(v.witness.unwrap(), [("x".into(), 0), ("y".into(), 1)].into());
    }

    #[test]
    fn premises_restrict_assignments() {
        // Only a = a satisfies both premises in 3_dblst.
        assert!(!check("3_dblst", "a* = 0, a' = 1 => a = x \\/ a /\\ x").holds);
        assert!(check("3_dblst", "a* = 0, a' = 1 => a \\/ a* = a").holds);
        assert!(check("3_klst", "a* = 0, a' = 1 => 0 = 1").holds);
    }

    #[test]
    fn assignment_cap_is_enforced() {
        let k = builtin("3_klst").unwrap();
        let s = parse_sentence("x \\/ y \\/ z \\/ w = x \\/ y \\/ z \\/ w").unwrap();
        let limits = Limits {
            assignments: 50,
            ..Limits::default()
        };
        assert!(matches!(holds_in(&k, &s, &limits), Err(Error::CapExceeded { .. })));
    }
}
