//! Terms over an algebra signature and their prefix notation,
//! e.g. `mul(x1, inv(x2))`. Variables are written `x1, x2, ...` and nullary
//! symbols by their bare name.

use std::fmt;

use thiserror::Error;

use crate::algebra::{Elem, FiniteAlgebra, Signature};
use crate::tuples::{checked_pow, tuple_at};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// Zero-based variable index; `Var(0)` prints as `x1`.
    Var(usize),
    /// Operation symbol (index into the signature) applied to arguments.
    App(usize, Vec<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("unknown operation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{op}` expects {expected} arguments, got {found}")]
    ArityMismatch {
        op: String,
        expected: usize,
        found: usize,
    },
    #[error("variable x{0} is outside the declared arity")]
    VariableOutOfRange(usize),
    #[error("malformed term at byte {position}: {message}")]
    Syntax { position: usize, message: String },
}

impl Term {
    /// The nullary point symbol of `sig`.
    pub fn zero(sig: &Signature) -> Self {
        Term::App(sig.zero(), Vec::new())
    }

    /// One more than the largest variable index, or 0 for closed terms.
    pub fn arity(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::App(_, args) => args.iter().map(Term::arity).max().unwrap_or(0),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    /// Checks symbol arities against the signature.
    pub fn check(&self, sig: &Signature) -> Result<(), TermError> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(op, args) => {
                let symbol = sig
                    .ops()
                    .get(*op)
                    .ok_or_else(|| TermError::UnknownSymbol(format!("#{op}")))?;
                if symbol.arity != args.len() {
                    return Err(TermError::ArityMismatch {
                        op: symbol.name.clone(),
                        expected: symbol.arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }

    /// Replaces variable `i` by `values[i]`.
    pub fn substitute(&self, values: &[Term]) -> Term {
        match self {
            Term::Var(i) => values[*i].clone(),
            Term::App(op, args) => {
                Term::App(*op, args.iter().map(|a| a.substitute(values)).collect())
            }
        }
    }

    /// Evaluates the term at an assignment of its variables.
    pub fn eval(&self, a: &FiniteAlgebra, assignment: &[Elem]) -> Elem {
        match self {
            Term::Var(i) => assignment[*i],
            Term::App(op, args) => {
                let values: Vec<Elem> = args.iter().map(|t| t.eval(a, assignment)).collect();
                a.apply(*op, &values)
            }
        }
    }

    /// Function table of the term as an `arity`-ary operation, row-major.
    pub fn table(&self, a: &FiniteAlgebra, arity: usize) -> Result<Vec<Elem>, TermError> {
        self.check(a.signature())?;
        if self.arity() > arity {
            return Err(TermError::VariableOutOfRange(self.arity()));
        }
        let entries = checked_pow(a.size(), arity).ok_or(TermError::VariableOutOfRange(arity))?;
        let mut tuple = vec![0; arity];
        Ok((0..entries)
            .map(|i| {
                tuple_at(a.size(), i, &mut tuple);
                self.eval(a, &tuple)
            })
            .collect())
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> TermDisplay<'a> {
        TermDisplay { term: self, sig }
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(i) => write!(f, "x{}", i + 1),
            Term::App(op, args) => {
                let name = self.sig.ops().get(*op).map_or("?", |s| s.name.as_str());
                if args.is_empty() {
                    return f.write_str(name);
                }
                write!(f, "{name}(")?;
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", arg.display(self.sig))?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Parses prefix notation against a signature.
pub fn parse_term(input: &str, sig: &Signature) -> Result<Term, TermError> {
    let mut parser = Parser {
        src: input.as_bytes(),
        pos: 0,
        sig,
    };
    let term = parser.term()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error("trailing input"));
    }
    term.check(sig)?;
    Ok(term)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    sig: &'a Signature,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> TermError {
        TermError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> Result<String, TermError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if c.is_ascii_alphanumeric() || c == b'_' || c == b'\'' || c == b'.' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.error("expected a symbol or variable"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn eat(&mut self, byte: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn term(&mut self) -> Result<Term, TermError> {
        let name = self.ident()?;
        if self.eat(b'(') {
            let op = self
                .sig
                .lookup(&name)
                .ok_or(TermError::UnknownSymbol(name))?;
            let mut args = Vec::new();
            if !self.eat(b')') {
                loop {
                    args.push(self.term()?);
                    if self.eat(b')') {
                        break;
                    }
                    if !self.eat(b',') {
                        return Err(self.error("expected `,` or `)`"));
                    }
                }
            }
            return Ok(Term::App(op, args));
        }
        if let Some(op) = self.sig.lookup(&name) {
            return Ok(Term::App(op, Vec::new()));
        }
        if let Some(index) = name.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
            if index == 0 {
                return Err(self.error("variables are numbered from x1"));
            }
            return Ok(Term::Var(index - 1));
        }
        Err(TermError::UnknownSymbol(name))
    }
}
