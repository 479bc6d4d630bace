//! Group words in named matrices.
//!
//! Grammar:
//!
//! ```text
//! expr   := factor (('*')? factor)*
//! factor := atom ('^' signed-integer)?
//! atom   := ident | '(' expr ')' | '[' expr ',' expr ']'
//! ident  := [a-z][a-z0-9]*
//! ```
//!
//! `[s, t]` is the commutator s·t·s⁻¹·t⁻¹.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exactlin::Mat;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WordExpr {
    Name(String),
    Product(Vec<WordExpr>),
    Power(Box<WordExpr>, i64),
    Commutator(Box<WordExpr>, Box<WordExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {pos}: {msg}")]
pub struct SyntaxError {
    /// Byte offset into the input.
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Caret,
    Minus,
    Plus,
    Star,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Int(s) => write!(f, "{s:?}"),
            Tok::Caret => f.write_str("'^'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Star => f.write_str("'*'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::LBrack => f.write_str("'['"),
            Tok::RBrack => f.write_str("']'"),
            Tok::Comma => f.write_str("','"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let simple = match c {
            b'^' => Some(Tok::Caret),
            b'-' => Some(Tok::Minus),
            b'+' => Some(Tok::Plus),
            b'*' => Some(Tok::Star),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'[' => Some(Tok::LBrack),
            b']' => Some(Tok::RBrack),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((start, t));
            i += 1;
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_lowercase() {
            while i < bytes.len() && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit()) {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Int(text[start..i].to_string())));
        } else {
            let ch = text[start..].chars().next().expect("in bounds");
            return Err(SyntaxError {
                pos: start,
                msg: format!("unexpected character {ch:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn found(&self) -> String {
        self.peek()
            .map_or_else(|| "end of input".to_string(), |t| t.to_string())
    }

    fn expect(&mut self, want: Tok) -> Result<(), SyntaxError> {
        if self.peek() == Some(&want) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected {want}, found {}", self.found()))
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Ident(_) | Tok::LParen | Tok::LBrack)
        )
    }

    fn expr(&mut self) -> Result<WordExpr, SyntaxError> {
        let mut factors = vec![self.factor()?];
        loop {
            if self.peek() == Some(&Tok::Star) {
                self.at += 1;
                factors.push(self.factor()?);
            } else if self.starts_atom() {
                factors.push(self.factor()?);
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            WordExpr::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<WordExpr, SyntaxError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.at += 1;
        let neg = match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                true
            }
            Some(Tok::Plus) => {
                self.at += 1;
                false
            }
            _ => false,
        };
        let Some(Tok::Int(digits)) = self.peek().cloned() else {
            return self.err(format!("expected an exponent, found {}", self.found()));
        };
        let text = if neg { format!("-{digits}") } else { digits };
        let Ok(k) = text.parse::<i64>() else {
            return self.err("exponent out of range");
        };
        self.at += 1;
        Ok(WordExpr::Power(Box::new(base), k))
    }

    fn atom(&mut self) -> Result<WordExpr, SyntaxError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.at += 1;
                Ok(WordExpr::Name(name))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::LBrack) => {
                self.at += 1;
                let s = self.expr()?;
                self.expect(Tok::Comma)?;
                let t = self.expr()?;
                self.expect(Tok::RBrack)?;
                Ok(WordExpr::Commutator(Box::new(s), Box::new(t)))
            }
            _ => self.err(format!("expected a name, '(' or '[', found {}", self.found())),
        }
    }
}

pub fn parse_word(text: &str) -> Result<WordExpr, SyntaxError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err(format!("unexpected {}", p.found()));
    }
    Ok(e)
}

impl WordExpr {
    pub fn name(s: &str) -> Self {
        WordExpr::Name(s.to_string())
    }

    /// Names referenced anywhere in the expression.
    pub fn names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            WordExpr::Name(n) => out.push(n),
            WordExpr::Product(fs) => fs.iter().for_each(|f| f.collect_names(out)),
            WordExpr::Power(b, _) => b.collect_names(out),
            WordExpr::Commutator(s, t) => {
                s.collect_names(out);
                t.collect_names(out);
            }
        }
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordExpr::Name(_) | WordExpr::Commutator(..) => write!(f, "{self}"),
            _ => write!(f, "({self})"),
        }
    }
}

impl fmt::Display for WordExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordExpr::Name(n) => f.write_str(n),
            WordExpr::Product(fs) => {
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    match x {
                        WordExpr::Product(_) => write!(f, "({x})")?,
                        _ => write!(f, "{x}")?,
                    }
                }
                Ok(())
            }
            WordExpr::Power(b, k) => {
                b.fmt_atom(f)?;
                write!(f, "^{k}")
            }
            WordExpr::Commutator(s, t) => write!(f, "[{s}, {t}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown name {0:?}")]
    UnknownName(String),
    #[error("matrix for {0} is singular")]
    SingularMatrix(String),
}

pub type Env = BTreeMap<String, Mat>;

fn inverse_of(m: &Mat, what: &WordExpr) -> Result<Mat, EvalError> {
    m.inverse()
        .map_err(|_| EvalError::SingularMatrix(what.to_string()))
}

pub fn eval_word(expr: &WordExpr, env: &Env) -> Result<Mat, EvalError> {
    match expr {
        WordExpr::Name(n) => env
            .get(n)
            .cloned()
            .ok_or_else(|| EvalError::UnknownName(n.clone())),
        WordExpr::Product(fs) => {
            let mut it = fs.iter();
            let first = it.next().expect("products are nonempty");
            let mut acc = eval_word(first, env)?;
            for x in it {
                acc = acc.matmul(&eval_word(x, env)?);
            }
            Ok(acc)
        }
        WordExpr::Power(b, k) => {
            let m = eval_word(b, env)?;
            let base = if *k < 0 { inverse_of(&m, b)? } else { m };
            Ok(base.pow_u(k.unsigned_abs()))
        }
        WordExpr::Commutator(s, t) => {
            let ms = eval_word(s, env)?;
            let mt = eval_word(t, env)?;
            let si = inverse_of(&ms, s)?;
            let ti = inverse_of(&mt, t)?;
            Ok(ms.matmul(&mt).matmul(&si).matmul(&ti))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgramError {
    #[error("name {0:?} is bound twice")]
    Duplicate(String),
    #[error("binding {binding:?} uses {name:?} before it is defined")]
    Undefined { binding: String, name: String },
}

/// Generator names every program may use.
pub const GENERATORS: [&str; 2] = ["a", "b"];

/// Ordered definitions; each may use the generators and earlier names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WordProgram {
    bindings: Vec<(String, WordExpr)>,
}

impl WordProgram {
    pub fn new(bindings: Vec<(String, WordExpr)>) -> Result<Self, ProgramError> {
        let mut known: Vec<&str> = GENERATORS.to_vec();
        for (name, expr) in &bindings {
            if known.contains(&name.as_str()) {
                return Err(ProgramError::Duplicate(name.clone()));
            }
            if let Some(u) = expr.names().into_iter().find(|n| !known.contains(n)) {
                return Err(ProgramError::Undefined {
                    binding: name.clone(),
                    name: u.to_string(),
                });
            }
            known.push(name);
        }
        Ok(WordProgram { bindings })
    }

    pub fn bindings(&self) -> &[(String, WordExpr)] {
        &self.bindings
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }
}

pub fn run_program(prog: &WordProgram, a: &Mat, b: &Mat) -> Result<Env, EvalError> {
    let mut env = Env::new();
    env.insert("a".into(), a.clone());
    env.insert("b".into(), b.clone());
    for (name, expr) in &prog.bindings {
        let m = eval_word(expr, &env)?;
        env.insert(name.clone(), m);
    }
    Ok(env)
}
