//! Terms, identities and quasi-identities over `(∨, ∧, *, ′, 0, 1)`.
//!
//! Surface syntax is ASCII: `\/` join, `/\` meet, postfix `*` and `'`,
//! relations `=`, `<=` (and `>=`), premises separated by `,` and closed by
//! `=>`. Inequalities are stored desugared: `s <= t` becomes `s /\ t = s`.

mod eval;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

pub use eval::{describe_assignment, eval_term, holds_in, Assignment, Verdict};
pub use parse::{parse_sentence, parse_sentence_file, parse_term};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Join(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Star(Box<Term>),
    Quote(Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn join(l: Term, r: Term) -> Term {
        Term::Join(Box::new(l), Box::new(r))
    }

    pub fn meet(l: Term, r: Term) -> Term {
        Term::Meet(Box::new(l), Box::new(r))
    }

    pub fn star(self) -> Term {
        Term::Star(Box::new(self))
    }

    pub fn quote(self) -> Term {
        Term::Quote(Box::new(self))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Zero | Term::One => {}
            Term::Join(l, r) | Term::Meet(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Term::Star(t) | Term::Quote(t) => t.collect_vars(out),
        }
    }

    fn level(&self) -> u8 {
        match self {
            Term::Join(..) => 0,
            Term::Meet(..) => 1,
            _ => 2,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_level: u8) -> fmt::Result {
        if self.level() < min_level {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Zero => f.write_str("0"),
            Term::One => f.write_str("1"),
            Term::Join(l, r) => {
                l.write_at(f, 0)?;
                f.write_str(" \\/ ")?;
                r.write_at(f, 1)
            }
            Term::Meet(l, r) => {
                l.write_at(f, 1)?;
                f.write_str(" /\\ ")?;
                r.write_at(f, 2)
            }
            Term::Star(t) => {
                t.write_at(f, 2)?;
                f.write_str("*")
            }
            Term::Quote(t) => {
                t.write_at(f, 2)?;
                f.write_str("'")
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    /// `s <= t`, stored as `s /\ t = s`.
    pub fn leq(s: Term, t: Term) -> Self {
        Equation {
            lhs: Term::meet(s.clone(), t),
            rhs: s,
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SentenceKind {
    Identity,
    QuasiIdentity,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sentence {
    pub premises: Vec<Equation>,
    pub conclusion: Equation,
}

impl Sentence {
    pub fn identity(conclusion: Equation) -> Self {
        Sentence {
            premises: Vec::new(),
            conclusion,
        }
    }

    pub fn kind(&self) -> SentenceKind {
        if self.premises.is_empty() {
            SentenceKind::Identity
        } else {
            SentenceKind::QuasiIdentity
        }
    }

    /// Variables in name order; this is the enumeration order for witnesses.
    pub fn vars(&self) -> Vec<String> {
        let mut out = BTreeSet::new();
        for eq in self.premises.iter().chain([&self.conclusion]) {
            eq.lhs.collect_vars(&mut out);
            eq.rhs.collect_vars(&mut out);
        }
        out.into_iter().collect()
    }

    pub fn without_premises(&self) -> Sentence {
        Sentence::identity(self.conclusion.clone())
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        if !self.premises.is_empty() {
            f.write_str(" => ")?;
        }
        write!(f, "{}", self.conclusion)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![Just(Term::Zero), Just(Term::One), "[a-z][a-z0-9]{0,2}".prop_map(Term::Var),];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::join(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::meet(l, r)),
                inner.clone().prop_map(Term::star),
                inner.prop_map(Term::quote),
            ]
        })
    }

    fn arb_sentence() -> impl Strategy<Value = Sentence> {
        let eq = || (arb_term(), arb_term()).prop_map(|(l, r)| Equation::new(l, r));
        (prop::collection::vec(eq(), 0..3), eq()).prop_map(|(premises, conclusion)| Sentence { premises, conclusion })
    }

    proptest! {
        #[test]
        fn parse_inverts_print(s in arb_sentence()) {
            let text = s.to_string();
            let back = parse_sentence(&text).unwrap();
            prop_assert_eq!(&back, &s);
            prop_assert_eq!(back.to_string(), text);
        }
    }

    #[test]
    fn printing_uses_minimal_parentheses() {
        let x = Term::var("x");
        let y = Term::var("y");
        let z = Term::var("z");
        let t = Term::join(x.clone(), Term::join(y.clone(), z.clone()));
        assert_eq!(t.to_string(), "x \\/ (y \\/ z)");
        let t = Term::join(Term::join(x.clone(), y.clone()), z.clone());
        assert_eq!(t.to_string(), "x \\/ y \\/ z");
        let t = Term::meet(Term::join(x.clone(), y.clone()), z).star();
        assert_eq!(t.to_string(), "((x \\/ y) /\\ z)*");
        assert_eq!(x.quote().star().quote().to_string(), "x'*'");
    }
}
