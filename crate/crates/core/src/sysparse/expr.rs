//! Expression grammar shared by `.vf` files and command-line arguments.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | '+' unary | power
//! power   := primary ('^' power)?
//! primary := number | number '/' number | ident | '(' expr ')'
//! ```
//! `/` between two integer literals with no surrounding space is a rational
//! literal; any other `/` is division, accepted only where a rational
//! function is expected.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{Poly, RatFunc, Rat, Vars};

use super::ParseError;

/// Largest exponent accepted by the parser.
pub const MAX_EXPONENT: u32 = 10_000;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rat),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    /// 1-based character column in the source line.
    col: usize,
}

fn lex(text: &str, line: usize, col0: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = chars[start..i].iter().collect::<String>().parse().unwrap();
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                let dstart = i + 1;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let d: BigInt = chars[dstart..i].iter().collect::<String>().parse().unwrap();
                if d.is_zero() {
                    return Err(ParseError::new(line, col0 + dstart, "zero denominator in rational literal"));
                }
                out.push(Token { tok: Tok::Num(Rat::new(n, d)), col });
            } else {
                out.push(Token { tok: Tok::Num(Rat::from_integer(n)), col });
            }
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), col });
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(ParseError::new(line, col, format!("unexpected character `{c}`"))),
        };
        out.push(Token { tok, col });
        i += 1;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Ast {
    Num(Rat, usize),
    Ident(String, usize),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>, usize),
    Pow(Box<Ast>, Box<Ast>, usize),
}

impl Ast {
    fn col(&self) -> usize {
        match self {
            Ast::Num(_, c) | Ast::Ident(_, c) | Ast::Div(_, _, c) | Ast::Pow(_, _, c) => *c,
            Ast::Neg(a) | Ast::Add(a, _) | Ast::Sub(a, _) | Ast::Mul(a, _) => a.col(),
        }
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), msg)
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    let col = self.col();
                    self.pos += 1;
                    lhs = Ast::Div(Box::new(lhs), Box::new(self.unary()?), col);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(Ast::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Ast, ParseError> {
        let base = self.primary()?;
        if let Some(Tok::Caret) = self.peek() {
            let col = self.col();
            self.pos += 1;
            if let Some(Tok::Minus) = self.peek() {
                return Err(self.err("negative exponent"));
            }
            let exp = self.power()?;
            return Ok(Ast::Pow(Box::new(base), Box::new(exp), col));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Ast, ParseError> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(r)) => {
                self.pos += 1;
                Ok(Ast::Num(r, col))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Ast::Ident(name, col))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(self.err("expected `)`")),
                }
            }
            Some(t) => Err(self.err(format!("unexpected {}", describe(&t)))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Num(..) => "number",
        Tok::Ident(_) => "identifier",
        Tok::Plus => "`+`",
        Tok::Minus => "`-`",
        Tok::Star => "`*`",
        Tok::Slash => "`/`",
        Tok::Caret => "`^`",
        Tok::LParen => "`(`",
        Tok::RParen => "`)`",
    }
}

/// Names visible to an expression: variables and bound parameters.
pub struct Scope<'a> {
    pub vars: &'a Vars,
    pub params: &'a [(String, Rat)],
}

impl Scope<'_> {
    fn param(&self, name: &str) -> Option<&Rat> {
        self.params.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

fn parse_ast(text: &str, line: usize, col0: usize) -> Result<Ast, ParseError> {
    let toks = lex(text, line, col0)?;
    // points at the last character when input ends early
    let end_col = col0 + text.trim_end().chars().count().saturating_sub(1);
    let mut p = Parser { toks, pos: 0, line, end_col: end_col.max(col0) };
    if p.toks.is_empty() {
        return Err(ParseError::new(line, col0, "empty expression"));
    }
    let ast = p.expr()?;
    if p.pos < p.toks.len() {
        let t = p.toks[p.pos].tok.clone();
        return Err(p.err(format!("unexpected {}", describe(&t))));
    }
    Ok(ast)
}

trait Algebra: Sized + Clone {
    fn constant(scope: &Scope, c: Rat) -> Self;
    fn var(scope: &Scope, i: usize) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn pow(&self, e: u32) -> Self;
    fn div(&self, o: &Self, line: usize, col: usize) -> Result<Self, ParseError>;
}

impl Algebra for Poly {
    fn constant(scope: &Scope, c: Rat) -> Self {
        Poly::constant(scope.vars, c)
    }
    fn var(scope: &Scope, i: usize) -> Self {
        Poly::var(scope.vars, i)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn pow(&self, e: u32) -> Self {
        Poly::pow(self, e)
    }
    fn div(&self, _o: &Self, line: usize, col: usize) -> Result<Self, ParseError> {
        Err(ParseError::new(line, col, "division in polynomial position"))
    }
}

impl Algebra for RatFunc {
    fn constant(scope: &Scope, c: Rat) -> Self {
        RatFunc::constant(scope.vars, c)
    }
    fn var(scope: &Scope, i: usize) -> Self {
        RatFunc::from_poly(Poly::var(scope.vars, i))
    }
    fn add(&self, o: &Self) -> Self {
        self.checked_add(o).expect("shared context")
    }
    fn sub(&self, o: &Self) -> Self {
        self.checked_sub(o).expect("shared context")
    }
    fn mul(&self, o: &Self) -> Self {
        self.checked_mul(o).expect("shared context")
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn pow(&self, e: u32) -> Self {
        self.powi(e as i64)
    }
    fn div(&self, o: &Self, line: usize, col: usize) -> Result<Self, ParseError> {
        self.checked_div(o)
            .map_err(|_| ParseError::new(line, col, "division by zero"))
    }
}

fn eval<A: Algebra>(ast: &Ast, scope: &Scope, line: usize) -> Result<A, ParseError> {
    Ok(match ast {
        Ast::Num(r, _) => A::constant(scope, r.clone()),
        Ast::Ident(name, col) => {
            if let Some(i) = scope.vars.index_of(name) {
                A::var(scope, i)
            } else if let Some(v) = scope.param(name) {
                A::constant(scope, v.clone())
            } else {
                return Err(ParseError::new(line, *col, format!("unknown identifier `{name}`")));
            }
        }
        Ast::Neg(a) => eval::<A>(a, scope, line)?.neg(),
        Ast::Add(a, b) => eval::<A>(a, scope, line)?.add(&eval(b, scope, line)?),
        Ast::Sub(a, b) => eval::<A>(a, scope, line)?.sub(&eval(b, scope, line)?),
        Ast::Mul(a, b) => eval::<A>(a, scope, line)?.mul(&eval(b, scope, line)?),
        Ast::Div(a, b, col) => {
            let lhs = eval::<A>(a, scope, line)?;
            let rhs = eval::<A>(b, scope, line)?;
            lhs.div(&rhs, line, *col)?
        }
        Ast::Pow(base, exp, _) => {
            let e = eval_exponent(exp, scope, line)?;
            eval::<A>(base, scope, line)?.pow(e)
        }
    })
}

/// Exponents must evaluate to nonnegative integer constants.
fn eval_exponent(ast: &Ast, scope: &Scope, line: usize) -> Result<u32, ParseError> {
    let col = ast.col();
    let value = const_value(ast, scope, line)?;
    if value.is_negative() {
        return Err(ParseError::new(line, col, "negative exponent"));
    }
    if !value.is_integer() {
        return Err(ParseError::new(line, col, "fractional exponent"));
    }
    match value.to_integer().to_u32() {
        Some(e) if e <= MAX_EXPONENT => Ok(e),
        _ => Err(ParseError::new(line, col, format!("exponent exceeds {MAX_EXPONENT}"))),
    }
}

fn const_value(ast: &Ast, scope: &Scope, line: usize) -> Result<Rat, ParseError> {
    Ok(match ast {
        Ast::Num(r, _) => r.clone(),
        Ast::Ident(name, col) => match scope.param(name) {
            Some(v) => v.clone(),
            None if scope.vars.index_of(name).is_some() => {
                return Err(ParseError::new(line, *col, format!("variable `{name}` in exponent")))
            }
            None => return Err(ParseError::new(line, *col, format!("unknown identifier `{name}`"))),
        },
        Ast::Neg(a) => -const_value(a, scope, line)?,
        Ast::Add(a, b) => const_value(a, scope, line)? + const_value(b, scope, line)?,
        Ast::Sub(a, b) => const_value(a, scope, line)? - const_value(b, scope, line)?,
        Ast::Mul(a, b) => const_value(a, scope, line)? * const_value(b, scope, line)?,
        Ast::Div(a, b, col) => {
            let d = const_value(b, scope, line)?;
            if d.is_zero() {
                return Err(ParseError::new(line, *col, "division by zero"));
            }
            const_value(a, scope, line)? / d
        }
        Ast::Pow(base, exp, _) => {
            let e = eval_exponent(exp, scope, line)?;
            num_traits::pow::pow(const_value(base, scope, line)?, e as usize)
        }
    })
}

pub(crate) fn parse_poly_at(text: &str, scope: &Scope, line: usize, col0: usize) -> Result<Poly, ParseError> {
    let ast = parse_ast(text, line, col0)?;
    eval::<Poly>(&ast, scope, line)
}

pub(crate) fn parse_ratfunc_at(
    text: &str,
    scope: &Scope,
    line: usize,
    col0: usize,
) -> Result<RatFunc, ParseError> {
    let ast = parse_ast(text, line, col0)?;
    eval::<RatFunc>(&ast, scope, line)
}

/// Parses a polynomial over `vars`; division is rejected.
pub fn parse_poly(text: &str, vars: &Vars) -> Result<Poly, ParseError> {
    parse_poly_at(text, &Scope { vars, params: &[] }, 1, 1)
}

/// Parses a rational function over `vars`.
pub fn parse_ratfunc(text: &str, vars: &Vars) -> Result<RatFunc, ParseError> {
    parse_ratfunc_at(text, &Scope { vars, params: &[] }, 1, 1)
}
