use std::collections::BTreeSet;

use super::{Equation, Sentence, Term};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Var(String),
    Zero,
    One,
    Join,
    Meet,
    Star,
    Quote,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Eq,
    Le,
    Ge,
    Comma,
    Implies,
    End,
}

impl Tok {
    fn describe(&self) -> &'static str {
        match self {
            Tok::Var(_) => "variable",
            Tok::Zero => "`0`",
            Tok::One => "`1`",
            Tok::Join => "`\\/`",
            Tok::Meet => "`/\\`",
            Tok::Star => "`*`",
            Tok::Quote => "`'`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrack => "`[`",
            Tok::RBrack => "`]`",
            Tok::Eq => "`=`",
            Tok::Le => "`<=`",
            Tok::Ge => "`>=`",
            Tok::Comma => "`,`",
            Tok::Implies => "`=>`",
            Tok::End => "end of input",
        }
    }

    fn same_kind(&self, other: &Tok) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(other)
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let two = |s: &[u8]| bytes[i..].starts_with(s);
        let (tok, len) = if two(b"\\/") {
            (Tok::Join, 2)
        } else if two(b"/\\") {
            (Tok::Meet, 2)
        } else if two(b"=>") {
            (Tok::Implies, 2)
        } else if two(b"<=") {
            (Tok::Le, 2)
        } else if two(b">=") {
            (Tok::Ge, 2)
        } else {
            match c {
                b'*' => (Tok::Star, 1),
                b'\'' => (Tok::Quote, 1),
                b'(' => (Tok::LParen, 1),
                b')' => (Tok::RParen, 1),
                b'[' => (Tok::LBrack, 1),
                b']' => (Tok::RBrack, 1),
                b'=' => (Tok::Eq, 1),
                b',' => (Tok::Comma, 1),
                b'0' => (Tok::Zero, 1),
                b'1' => (Tok::One, 1),
                b'a'..=b'z' => {
                    let end = bytes[i..]
                        .iter()
                        .position(|b| !(b.is_ascii_lowercase() || b.is_ascii_digit()))
                        .map_or(bytes.len(), |p| i + p);
                    (Tok::Var(text[i..end].to_string()), end - i)
                }
                _ => {
                    let found = text[i..].chars().next().map(|c| format!("`{c}`")).unwrap_or_default();
                    return Err(Error::Syntax {
                        offset: i,
                        expected: vec!["variable", "`0`", "`1`", "operator", "relation"],
                        found,
                    });
                }
            }
        };
        out.push((tok, i));
        i += len;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    // Tokens tried at the furthest offset reached, for error messages.
    expected: BTreeSet<&'static str>,
    expected_at: usize,
}

impl Parser {
    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn note(&mut self, what: &'static str) {
        let at = self.offset();
        if at > self.expected_at {
            self.expected.clear();
            self.expected_at = at;
        }
        if at == self.expected_at {
            self.expected.insert(what);
        }
    }

    fn eat(&mut self, kind: &Tok) -> bool {
        self.note(kind.describe());
        if self.peek().same_kind(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self) -> Error {
        let (tok, offset) = &self.tokens[self.pos];
        let found = match tok {
            Tok::Var(v) => format!("`{v}`"),
            t => t.describe().to_string(),
        };
        Error::Syntax {
            offset: *offset,
            expected: self.expected.iter().copied().collect(),
            found,
        }
    }

    fn expect(&mut self, kind: &Tok) -> Result<()> {
        if self.eat(kind) {
            Ok(())
        } else {
            Err(self.error())
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut t = self.meet_term()?;
        while self.eat(&Tok::Join) {
            let r = self.meet_term()?;
            t = Term::join(t, r);
        }
        Ok(t)
    }

    fn meet_term(&mut self) -> Result<Term> {
        let mut t = self.postfix()?;
        while self.eat(&Tok::Meet) {
            let r = self.postfix()?;
            t = Term::meet(t, r);
        }
        Ok(t)
    }

    fn postfix(&mut self) -> Result<Term> {
        let mut t = self.atom()?;
        loop {
            if self.eat(&Tok::Star) {
                t = t.star();
            } else if self.eat(&Tok::Quote) {
                t = t.quote();
            } else {
                return Ok(t);
            }
        }
    }

    fn atom(&mut self) -> Result<Term> {
        self.note("variable");
        if let Tok::Var(v) = self.peek() {
            let v = v.clone();
            self.pos += 1;
            return Ok(Term::Var(v));
        }
        if self.eat(&Tok::Zero) {
            return Ok(Term::Zero);
        }
        if self.eat(&Tok::One) {
            return Ok(Term::One);
        }
        if self.eat(&Tok::LParen) {
            let t = self.term()?;
            self.expect(&Tok::RParen)?;
            return Ok(t);
        }
        if self.eat(&Tok::LBrack) {
            let t = self.term()?;
            self.expect(&Tok::RBrack)?;
            return Ok(t);
        }
        Err(self.error())
    }

    fn equation(&mut self) -> Result<Equation> {
        let lhs = self.term()?;
        if self.eat(&Tok::Eq) {
            Ok(Equation::new(lhs, self.term()?))
        } else if self.eat(&Tok::Le) {
            Ok(Equation::leq(lhs, self.term()?))
        } else if self.eat(&Tok::Ge) {
            let rhs = self.term()?;
            Ok(Equation::leq(rhs, lhs))
        } else {
            Err(self.error())
        }
    }

    fn sentence(&mut self) -> Result<Sentence> {
        let mut eqs = vec![self.equation()?];
        while self.eat(&Tok::Comma) {
            eqs.push(self.equation()?);
        }
        if self.eat(&Tok::Implies) {
            let conclusion = self.equation()?;
            self.expect(&Tok::End)?;
            return Ok(Sentence { premises: eqs, conclusion });
        }
        if eqs.len() > 1 {
            return Err(self.error());
        }
        self.expect(&Tok::End)?;
        Ok(Sentence::identity(eqs.pop().expect("one equation")))
    }
}

fn parser(text: &str) -> Result<Parser> {
    Ok(Parser {
        tokens: lex(text)?,
        pos: 0,
        expected: BTreeSet::new(),
        expected_at: 0,
    })
}

pub fn parse_sentence(text: &str) -> Result<Sentence> {
    parser(text)?.sentence()
}

pub fn parse_term(text: &str) -> Result<Term> {
    let mut p = parser(text)?;
    let t = p.term()?;
    p.expect(&Tok::End)?;
    Ok(t)
}

/// One sentence per line; blank lines and `#` comments are skipped.
pub fn parse_sentence_file(text: &str) -> Result<Vec<Sentence>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        out.push(parse_sentence(body).map_err(|e| Error::Line {
            line: i + 1,
            source: Box::new(e),
        })?);
    }
    Ok(out)
}
