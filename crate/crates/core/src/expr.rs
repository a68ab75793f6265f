//! Coefficient expressions: complex-valued functions of a real variable `x` in `[0, 1]`.
//!
//! Grammar (whitespace between tokens is ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := unary ('^' factor)?
//! unary  := '-'? atom
//! atom   := decimal-number | 'i' | 'x' | fname '(' expr ')' | '(' expr ')'
//! fname  := 'sqrt' | 'sin' | 'cos' | 'exp' | 'log'
//! ```
//!
//! Unary minus binds tighter than `^`, so `-x^2` means `(-x)^2`.
//! `^` is right-associative and its exponent must reduce to an integer constant
//! (`x^2`, `x^-1`, `2^3^2`). Implicit multiplication such as `2x` is a syntax error.
//! `sqrt` and `log` use the principal branch, with the cut on the negative real axis
//! approached from above (`sqrt(-1) = i`).

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} at position {pos}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the source.
    pub pos: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected {found}, expected {expected}")]
    Unexpected { found: String, expected: &'static str },
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("exponent must be an integer constant")]
    NonIntegerExponent,
    #[error("malformed number `{0}`")]
    BadNumber(String),
    #[error("input is not ASCII")]
    NonAscii,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("logarithm of zero")]
    LogOfZero,
    #[error("x = {0} is outside [0, 1]")]
    OutOfRange(OrderedX),
}

/// `f64` wrapper so [`EvalError`] can stay `Eq`.
#[derive(Debug, Clone, Copy)]
pub struct OrderedX(pub f64);

impl PartialEq for OrderedX {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}

impl Eq for OrderedX {}

impl fmt::Display for OrderedX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Sin,
    Cos,
    Exp,
    Log,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Number(f64),
    ImagUnit,
    Var,
    Neg(Box<Expr>),
    Binary { op: BinOp, lhs: Box<Expr>, rhs: Box<Expr> },
    Pow { base: Box<Expr>, exp: i32 },
    Call { func: Func, arg: Box<Expr> },
}

/// Parsed coefficient expression. Equality is structural and ignores spans.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s)
    }
}

/// Drops negative zeros so branch cuts are always approached from the upper half-plane.
fn canonical(z: Complex64) -> Complex64 {
    Complex64::new(z.re + 0.0, z.im + 0.0)
}

impl Expr {
    /// Evaluates the expression at `x`, which must lie in `[0, 1]`.
    pub fn eval(&self, x: f64) -> Result<Complex64, EvalError> {
        if !(0.0..=1.0).contains(&x) {
            return Err(EvalError::OutOfRange(OrderedX(x)));
        }
        self.eval_unchecked(x)
    }

    fn eval_unchecked(&self, x: f64) -> Result<Complex64, EvalError> {
        let zero = Complex64::new(0.0, 0.0);
        let value = match &self.kind {
            ExprKind::Number(v) => Complex64::new(*v, 0.0),
            ExprKind::ImagUnit => Complex64::i(),
            ExprKind::Var => Complex64::new(x, 0.0),
            ExprKind::Neg(inner) => zero - inner.eval_unchecked(x)?,
            ExprKind::Binary { op, lhs, rhs } => {
                let a = lhs.eval_unchecked(x)?;
                let b = rhs.eval_unchecked(x)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == zero {
                            return Err(EvalError::DivisionByZero);
                        }
                        a / b
                    }
                }
            }
            ExprKind::Pow { base, exp } => {
                let b = base.eval_unchecked(x)?;
                if b == zero && *exp < 0 {
                    return Err(EvalError::DivisionByZero);
                }
                b.powi(*exp)
            }
            ExprKind::Call { func, arg } => {
                let a = canonical(arg.eval_unchecked(x)?);
                match func {
                    Func::Sqrt => a.sqrt(),
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Exp => a.exp(),
                    Func::Log => {
                        if a == zero {
                            return Err(EvalError::LogOfZero);
                        }
                        a.ln()
                    }
                }
            }
        };
        Ok(canonical(value))
    }

    /// True when the expression does not mention `x`.
    pub fn is_constant(&self) -> bool {
        match &self.kind {
            ExprKind::Number(_) | ExprKind::ImagUnit => true,
            ExprKind::Var => false,
            ExprKind::Neg(e) => e.is_constant(),
            ExprKind::Binary { lhs, rhs, .. } => lhs.is_constant() && rhs.is_constant(),
            ExprKind::Pow { base, .. } => base.is_constant(),
            ExprKind::Call { arg, .. } => arg.is_constant(),
        }
    }

    fn is_atom(&self) -> bool {
        matches!(self.kind, ExprKind::Number(_) | ExprKind::ImagUnit | ExprKind::Var | ExprKind::Call { .. })
    }
}

impl fmt::Display for Expr {
    /// Prints a fully parenthesised form that reparses to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Number(v) => write!(f, "{v}"),
            ExprKind::ImagUnit => f.write_str("i"),
            ExprKind::Var => f.write_str("x"),
            ExprKind::Neg(inner) if inner.is_atom() => write!(f, "-{inner}"),
            ExprKind::Neg(inner) => write!(f, "-({inner})"),
            ExprKind::Binary { op, lhs, rhs } => write!(f, "({lhs} {} {rhs})", op.symbol()),
            ExprKind::Pow { base, exp } if base.is_atom() => write!(f, "{base}^{exp}"),
            ExprKind::Pow { base, exp } => write!(f, "({base})^{exp}"),
            ExprKind::Call { func, arg } => write!(f, "{}({arg})", func.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    if let Some(pos) = src.bytes().position(|b| !b.is_ascii()) {
        return Err(ParseError { kind: ParseErrorKind::NonAscii, pos });
    }
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos] as char;
        let start = pos;
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            pos += 1;
            out.push((tok, Span { start, end: pos }));
        } else if c.is_ascii_whitespace() {
            pos += 1;
        } else if c.is_ascii_digit() || c == '.' {
            while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'.') {
                pos += 1;
            }
            // Optional exponent: e.g. 1e-3, 2.5E+4.
            if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
                let mut look = pos + 1;
                if look < bytes.len() && (bytes[look] == b'+' || bytes[look] == b'-') {
                    look += 1;
                }
                if look < bytes.len() && bytes[look].is_ascii_digit() {
                    pos = look;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                }
            }
            let text = &src[start..pos];
            let value: f64 = text
                .parse()
                .map_err(|_| ParseError { kind: ParseErrorKind::BadNumber(text.to_string()), pos: start })?;
            if !value.is_finite() {
                return Err(ParseError { kind: ParseErrorKind::BadNumber(text.to_string()), pos: start });
            }
            out.push((Tok::Num(value), Span { start, end: pos }));
        } else if c.is_ascii_alphabetic() {
            while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                pos += 1;
            }
            out.push((Tok::Ident(src[start..pos].to_string()), Span { start, end: pos }));
        } else {
            return Err(ParseError { kind: ParseErrorKind::UnexpectedChar(c), pos });
        }
    }
    out.push((Tok::End, Span { start: bytes.len(), end: bytes.len() }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    idx: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.idx].0
    }

    fn span(&self) -> Span {
        self.toks[self.idx].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.idx].clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        ParseError {
            kind: ParseErrorKind::Unexpected { found: self.peek().describe(), expected },
            pos: self.span().start,
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.unary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let exp_start = self.span().start;
        let exponent = self.factor()?;
        let exp = integer_constant(&exponent)
            .ok_or(ParseError { kind: ParseErrorKind::NonIntegerExponent, pos: exp_start })?;
        let span = Span { start: base.span.start, end: exponent.span.end };
        Ok(Expr { kind: ExprKind::Pow { base: Box::new(base), exp }, span })
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            let (_, minus) = self.bump();
            let inner = self.atom()?;
            let span = Span { start: minus.start, end: inner.span.end };
            return Ok(Expr { kind: ExprKind::Neg(Box::new(inner)), span });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr { kind: ExprKind::Number(v), span })
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "i" => Ok(Expr { kind: ExprKind::ImagUnit, span }),
                    "x" => Ok(Expr { kind: ExprKind::Var, span }),
                    _ => {
                        let func = Func::from_name(&name).ok_or_else(|| ParseError {
                            kind: if *self.peek() == Tok::LParen {
                                ParseErrorKind::UnknownFunction(name.clone())
                            } else {
                                ParseErrorKind::UnknownIdentifier(name.clone())
                            },
                            pos: span.start,
                        })?;
                        self.expect_lparen()?;
                        let arg = self.expr()?;
                        let end = self.expect_rparen()?;
                        Ok(Expr {
                            kind: ExprKind::Call { func, arg: Box::new(arg) },
                            span: Span { start: span.start, end },
                        })
                    }
                }
            }
            Tok::LParen => {
                self.bump();
                let mut inner = self.expr()?;
                let end = self.expect_rparen()?;
                inner.span = Span { start: span.start, end };
                Ok(inner)
            }
            _ => Err(self.unexpected("a number, `i`, `x`, a function call or `(`")),
        }
    }

    fn expect_lparen(&mut self) -> Result<(), ParseError> {
        if *self.peek() != Tok::LParen {
            return Err(self.unexpected("`(`"));
        }
        self.bump();
        Ok(())
    }

    fn expect_rparen(&mut self) -> Result<usize, ParseError> {
        if *self.peek() != Tok::RParen {
            return Err(self.unexpected("`)`"));
        }
        Ok(self.bump().1.end)
    }
}

fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
    let span = Span { start: lhs.span.start, end: rhs.span.end };
    Expr { kind: ExprKind::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }, span }
}

/// Folds an exponent subtree made of integer literals, negation and `^`.
fn integer_constant(e: &Expr) -> Option<i32> {
    match &e.kind {
        ExprKind::Number(v) if v.fract() == 0.0 && v.abs() <= i32::MAX as f64 => Some(*v as i32),
        ExprKind::Neg(inner) => integer_constant(inner).and_then(i32::checked_neg),
        ExprKind::Pow { base, exp } => {
            let b = integer_constant(base)?;
            let e = u32::try_from(*exp).ok()?;
            b.checked_pow(e)
        }
        _ => None,
    }
}

/// Parses a coefficient expression.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let toks = tokenize(src)?;
    let mut parser = Parser { toks, idx: 0 };
    let expr = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(parser.unexpected("an operator or end of input"));
    }
    Ok(expr)
}
