//! A small expression language for algebra elements.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' nat)?
//! atom   := nat | name | 'x' nat | 'y' nat | 'x[' nat ']' | 'y[' nat ']'
//!         | '(' expr ')' | '[' expr ',' expr ']'
//! ```
//!
//! `xN` is the N-th generator by position in a p-typical context and the
//! generator with index N in a universal one; `x[N]` always names index N.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{Algebra, Scalars};
use crate::balgebra::BAlgebra;
use crate::exactnum::{Integer, Ring};
use crate::polyring::{ExpVec, Poly};
use crate::symbolalg::SymbolAlgebra;
use crate::witt::{IndexKind, IndexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Block {
    X,
    Y,
}

impl Block {
    fn letter(self) -> char {
        match self {
            Block::X => 'x',
            Block::Y => 'y',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(Integer),
    Scalar(String),
    /// `universal` is set for the bracketed `x[N]` form.
    Gen { block: Block, index: u32, universal: bool },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Commutator(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Int(_) | Expr::Scalar(_) | Expr::Gen { .. } => Vec::new(),
            Expr::Neg(a) | Expr::Pow(a, _) => alloc::vec![&**a],
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Commutator(a, b) => alloc::vec![&**a, &**b],
        }
    }

    /// Names of the scalar symbols used, in sorted order.
    pub fn scalar_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut stack = alloc::vec![self];
        while let Some(e) = stack.pop() {
            if let Expr::Scalar(s) = e {
                out.insert(s.clone());
            }
            stack.extend(e.children());
        }
        out
    }

    /// Largest generator index mentioned, if any generator occurs.
    pub fn max_index(&self) -> Option<u32> {
        let own = match self {
            Expr::Gen { index, .. } => Some(*index),
            _ => None,
        };
        self.children().into_iter().filter_map(Expr::max_index).chain(own).max()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprError {
    Syntax { pos: usize, message: String },
    UnknownSymbol(String),
    IndexOutOfRange(String),
    ContextMismatch(String),
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::Syntax { pos, message } => write!(f, "syntax error at {pos}: {message}"),
            ExprError::UnknownSymbol(s) => write!(f, "unknown symbol {s}"),
            ExprError::IndexOutOfRange(s) => write!(f, "index out of range: {s}"),
            ExprError::ContextMismatch(s) => write!(f, "context mismatch: {s}"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn is_ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

impl Parser<'_> {
    fn err<T>(&self, message: &str) -> Result<T, ExprError> {
        Err(ExprError::Syntax { pos: self.pos, message: message.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&format!("expected '{}'", c as char))
        }
    }

    fn digits(&mut self) -> Result<&str, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        Ok(core::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn small_nat(&mut self) -> Result<u32, ExprError> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse().map_err(|_| ExprError::Syntax { pos: start, message: "number too large".into() })
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.small_nat()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b']')?;
                Ok(Expr::Commutator(Box::new(a), Box::new(b)))
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits()?;
                Ok(Expr::Int(d.parse().expect("decimal digits")))
            }
            Some(c) if is_ident_start(c) => {
                let start = self.pos;
                while self.pos < self.src.len() && is_ident_char(self.src[self.pos]) {
                    self.pos += 1;
                }
                let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let block = match name.as_bytes()[0] {
                    b'x' => Some(Block::X),
                    b'y' => Some(Block::Y),
                    _ => None,
                };
                if let Some(block) = block {
                    let rest = &name[1..];
                    if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                        let index = rest
                            .parse()
                            .map_err(|_| ExprError::Syntax { pos: start + 1, message: "index too large".into() })?;
                        return Ok(Expr::Gen { block, index, universal: false });
                    }
                    if rest.is_empty() && self.peek() == Some(b'[') {
                        self.pos += 1;
                        let index = self.small_nat()?;
                        self.expect(b']')?;
                        return Ok(Expr::Gen { block, index, universal: true });
                    }
                }
                Ok(Expr::Scalar(name.to_string()))
            }
            Some(c) => self.err(&format!("unexpected character '{}'", c as char)),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

// Binding strength: sums 0, products 1, negation and powers 2, atoms 3.
fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 0,
        Expr::Mul(..) => 1,
        Expr::Neg(_) | Expr::Pow(..) => 2,
        _ => 3,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if level(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// The canonical printer; `parse` inverts it exactly.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Scalar(s) => f.write_str(s),
            Expr::Gen { block, index, universal: true } => write!(f, "{}[{index}]", block.letter()),
            Expr::Gen { block, index, universal: false } => write!(f, "{}{index}", block.letter()),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                write_at(f, a, 0)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                write_at(f, b, 1)
            }
            Expr::Mul(a, b) => {
                write_at(f, a, 1)?;
                f.write_str("*")?;
                write_at(f, b, 2)
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_at(f, a, 2)
            }
            Expr::Pow(a, e) => {
                write_at(f, a, 3)?;
                write!(f, "^{e}")
            }
            Expr::Commutator(a, b) => write!(f, "[{a}, {b}]"),
        }
    }
}

/// An algebra whose generators can be named from expressions.
pub trait ExprContext: Algebra {
    fn generator(&self, block: Block, index: u32, universal: bool) -> Result<Self::Elem, ExprError>;

    fn scalar_symbol(&self, name: &str) -> Result<Self::Elem, ExprError> {
        let k = self.scalars();
        match k.symbol(name) {
            Some(c) => Ok(self.scalar(&c)),
            None if k.symbol_names().is_empty() => {
                Err(ExprError::ContextMismatch(format!("scalar {name} used over a field with no named generators")))
            }
            None => Err(ExprError::UnknownSymbol(name.to_string())),
        }
    }
}

fn resolve_index(set: &IndexSet, block: Block, index: u32, universal: bool) -> Result<u32, ExprError> {
    let found = match (set.kind(), universal) {
        (IndexKind::PTypical(_), false) => set.indices().get(index as usize).copied(),
        _ => set.contains(index).then_some(index),
    };
    found.ok_or_else(|| {
        let shown = if universal { format!("{}[{index}]", block.letter()) } else { format!("{}{index}", block.letter()) };
        ExprError::IndexOutOfRange(format!("{shown} is not a generator of this algebra"))
    })
}

/// Scalar expressions: generators are rejected.
impl<R: Ring> ExprContext for Scalars<R> {
    fn generator(&self, block: Block, index: u32, _universal: bool) -> Result<R::Elem, ExprError> {
        Err(ExprError::ContextMismatch(format!("generator {}{index} in a scalar expression", block.letter())))
    }
}

impl<R: Ring> ExprContext for BAlgebra<R> {
    fn generator(&self, block: Block, index: u32, universal: bool) -> Result<Poly<R::Elem>, ExprError> {
        Ok(match block {
            Block::X => self.x(resolve_index(self.xset(), block, index, universal)?),
            Block::Y => self.y(resolve_index(self.yset(), block, index, universal)?),
        })
    }
}

impl<R: Ring> ExprContext for SymbolAlgebra<R> {
    fn generator(&self, block: Block, index: u32, universal: bool) -> Result<Poly<R::Elem>, ExprError> {
        self.engine().generator(block, index, universal)
    }
}

pub fn evaluate<C: ExprContext>(ctx: &C, e: &Expr) -> Result<C::Elem, ExprError> {
    Ok(match e {
        Expr::Int(n) => ctx.from_integer(n),
        Expr::Scalar(s) => ctx.scalar_symbol(s)?,
        Expr::Gen { block, index, universal } => ctx.generator(*block, *index, *universal)?,
        Expr::Add(a, b) => ctx.add(&evaluate(ctx, a)?, &evaluate(ctx, b)?),
        Expr::Sub(a, b) => ctx.sub(&evaluate(ctx, a)?, &evaluate(ctx, b)?),
        Expr::Mul(a, b) => ctx.mul(&evaluate(ctx, a)?, &evaluate(ctx, b)?),
        Expr::Neg(a) => ctx.neg(&evaluate(ctx, a)?),
        Expr::Pow(a, k) => ctx.pow(&evaluate(ctx, a)?, *k as u64),
        Expr::Commutator(a, b) => ctx.commutator(&evaluate(ctx, a)?, &evaluate(ctx, b)?),
    })
}

pub fn parse_and_evaluate<C: ExprContext>(ctx: &C, text: &str) -> Result<C::Elem, ExprError> {
    evaluate(ctx, &parse(text)?)
}

fn gen_label(set: &IndexSet, block: Block, index: u32) -> String {
    match set.kind() {
        IndexKind::PTypical(_) => match set.position(index) {
            Some(k) => format!("{}{k}", block.letter()),
            None => format!("{}[{index}]", block.letter()),
        },
        IndexKind::Universal => format!("{}{index}", block.letter()),
    }
}

fn write_exps(out: &mut Vec<String>, set: &IndexSet, block: Block, e: &ExpVec) {
    for (i, d) in e.iter() {
        let g = gen_label(set, block, i);
        out.push(if d == 1 { g } else { format!("{g}^{d}") });
    }
}

/// Render a normal form element, highest monomial first. The output parses
/// back to the same element whenever every coefficient renders without a
/// denominator.
pub fn print_element<R: Ring>(ring: &R, xset: &IndexSet, yset: &IndexSet, u: &Poly<R::Elem>) -> String {
    if u.is_zero() {
        return "0".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    for ((xe, ye), c) in u.terms().collect::<Vec<_>>().into_iter().rev() {
        let mut factors = Vec::new();
        write_exps(&mut factors, xset, Block::X, xe);
        write_exps(&mut factors, yset, Block::Y, ye);
        let mono = factors.join("*");
        let (negative, c) = match ring.render(c) {
            s if s.starts_with('-') && !s[1..].contains(|ch: char| !ch.is_ascii_digit()) => (true, s[1..].to_string()),
            s => (false, s),
        };
        let simple = c.bytes().all(|b| is_ident_char(b) || b == b'^' || b == b'*');
        let body = match (mono.is_empty(), c.as_str()) {
            (true, _) => c,
            (false, "1") => mono,
            (false, _) if simple => format!("{c}*{mono}"),
            (false, _) => format!("({c})*{mono}"),
        };
        parts.push(if negative { format!("-{body}") } else { body });
    }
    let mut out = parts[0].clone();
    for t in &parts[1..] {
        match t.strip_prefix('-') {
            Some(rest) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            None => {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
    }
    out
}

pub fn print_b<R: Ring>(alg: &BAlgebra<R>, u: &Poly<R::Elem>) -> String {
    print_element(alg.ring(), alg.xset(), alg.yset(), u)
}

pub fn print_symbol<R: Ring>(alg: &SymbolAlgebra<R>, u: &Poly<R::Elem>) -> String {
    print_b(alg.engine(), u)
}
