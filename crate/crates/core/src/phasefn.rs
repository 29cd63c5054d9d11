//! Key-function expressions `f(x, t)`: parser, evaluator and symbolic
//! partial derivatives.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?          right associative
//! primary := number | 'x' | 't' | 'pi' | func '(' expr ')' | '(' expr ')'
//! func    := sin | cos | exp | sqrt | ln
//! ```
//!
//! So `-x^2` is `-(x^2)` and `2^-1` is `0.5`. Besides free expressions,
//! three presets are recognised: `zero`, `linear:a,b` (`a*x + b*t`) and
//! `bent:c` (`c*x*t`).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, ParseError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
    Ln,
}

impl Func {
    const ALL: [Func; 5] = [Func::Sin, Func::Cos, Func::Exp, Func::Sqrt, Func::Ln];

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Ln => "ln",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// Expression tree over `x` and `t`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

impl Expr {
    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var(Var::X) => x,
            Expr::Var(Var::T) => t,
            Expr::Neg(a) => -a.eval(x, t)?,
            Expr::Add(a, c) => a.eval(x, t)? + c.eval(x, t)?,
            Expr::Sub(a, c) => a.eval(x, t)? - c.eval(x, t)?,
            Expr::Mul(a, c) => a.eval(x, t)? * c.eval(x, t)?,
            Expr::Div(a, c) => {
                let d = c.eval(x, t)?;
                if d == 0.0 {
                    return Err(Error::Domain(format!("division by zero in {self} at x = {x}, t = {t}")));
                }
                a.eval(x, t)? / d
            }
            Expr::Pow(a, c) => {
                let (u, p) = (a.eval(x, t)?, c.eval(x, t)?);
                if u < 0.0 && p.fract() != 0.0 {
                    return Err(Error::Domain(format!("negative base {u} to fractional power {p} in {self}")));
                }
                u.powf(p)
            }
            Expr::Call(f, a) => {
                let u = a.eval(x, t)?;
                match f {
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                    Func::Exp => u.exp(),
                    Func::Sqrt if u < 0.0 => return Err(Error::Domain(format!("sqrt of {u} in {self}"))),
                    Func::Sqrt => u.sqrt(),
                    Func::Ln if u <= 0.0 => return Err(Error::Domain(format!("ln of {u} in {self}"))),
                    Func::Ln => u.ln(),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!("{self} is not finite at x = {x}, t = {t}")))
        }
    }

    fn depends_on_vars(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(_) => true,
            Expr::Neg(a) | Expr::Call(_, a) => a.depends_on_vars(),
            Expr::Add(a, c) | Expr::Sub(a, c) | Expr::Mul(a, c) | Expr::Div(a, c) | Expr::Pow(a, c) => {
                a.depends_on_vars() || c.depends_on_vars()
            }
        }
    }

    /// Symbolic partial derivative, simplified.
    pub fn derivative(&self, v: Var) -> Expr {
        self.diff_raw(v).simplify()
    }

    fn diff_raw(&self, v: Var) -> Expr {
        use Expr::*;
        match self {
            Const(_) => Const(0.0),
            Var(w) => Const(if *w == v { 1.0 } else { 0.0 }),
            Neg(a) => Neg(b(a.diff_raw(v))),
            Add(a, c) => Add(b(a.diff_raw(v)), b(c.diff_raw(v))),
            Sub(a, c) => Sub(b(a.diff_raw(v)), b(c.diff_raw(v))),
            Mul(a, c) => Add(
                b(Mul(b(a.diff_raw(v)), c.clone())),
                b(Mul(a.clone(), b(c.diff_raw(v)))),
            ),
            Div(a, c) => Div(
                b(Sub(b(Mul(b(a.diff_raw(v)), c.clone())), b(Mul(a.clone(), b(c.diff_raw(v)))))),
                b(Pow(c.clone(), b(Const(2.0)))),
            ),
            Pow(a, c) if !c.depends_on_vars() => {
                // p u^(p-1) u'
                Mul(
                    b(Mul(c.clone(), b(Pow(a.clone(), b(Sub(c.clone(), b(Const(1.0)))))))),
                    b(a.diff_raw(v)),
                )
            }
            Pow(a, c) => {
                // u^p (p' ln u + p u'/u)
                Mul(
                    b(self.clone()),
                    b(Add(
                        b(Mul(b(c.diff_raw(v)), b(Call(Func::Ln, a.clone())))),
                        b(Div(b(Mul(c.clone(), b(a.diff_raw(v)))), a.clone())),
                    )),
                )
            }
            Call(f, a) => {
                let outer = match f {
                    Func::Sin => Call(Func::Cos, a.clone()),
                    Func::Cos => Neg(b(Call(Func::Sin, a.clone()))),
                    Func::Exp => self.clone(),
                    Func::Sqrt => Div(b(Const(0.5)), b(self.clone())),
                    Func::Ln => Div(b(Const(1.0)), a.clone()),
                };
                Mul(b(outer), b(a.diff_raw(v)))
            }
        }
    }

    /// Constant folding and removal of neutral elements. Folds that would
    /// produce a non-finite constant are left unevaluated.
    pub fn simplify(&self) -> Expr {
        use Expr::*;
        let fold = |e: Expr| -> Expr {
            match e.eval(0.0, 0.0) {
                Ok(v) if !e.depends_on_vars() => Const(v),
                _ => e,
            }
        };
        match self {
            Const(_) | Var(_) => self.clone(),
            Neg(a) => match a.simplify() {
                Const(c) => Const(-c),
                Neg(inner) => *inner,
                s => Neg(b(s)),
            },
            Add(a, c) => match (a.simplify(), c.simplify()) {
                (Const(z), s) | (s, Const(z)) if z == 0.0 => s,
                (Const(p), Const(q)) => Const(p + q),
                (l, Neg(r)) => Sub(b(l), r),
                (l, r) => Add(b(l), b(r)),
            },
            Sub(a, c) => match (a.simplify(), c.simplify()) {
                (s, Const(z)) if z == 0.0 => s,
                (Const(z), s) if z == 0.0 => Neg(b(s)).simplify(),
                (Const(p), Const(q)) => Const(p - q),
                (l, Neg(r)) => Add(b(l), r),
                (l, r) => Sub(b(l), b(r)),
            },
            Mul(a, c) => match (a.simplify(), c.simplify()) {
                (Const(z), _) | (_, Const(z)) if z == 0.0 => Const(0.0),
                (Const(o), s) | (s, Const(o)) if o == 1.0 => s,
                (Const(p), Const(q)) => Const(p * q),
                (s, Const(q)) => Mul(b(Const(q)), b(s)),
                (Const(p), Mul(l, r)) if matches!(*l, Const(_)) => {
                    let Const(q) = *l else { unreachable!() };
                    Mul(b(Const(p * q)), r)
                }
                (Neg(l), r) => Neg(b(Mul(l, b(r)))).simplify(),
                (l, Neg(r)) => Neg(b(Mul(b(l), r))).simplify(),
                (l, r) => Mul(b(l), b(r)),
            },
            Div(a, c) => match (a.simplify(), c.simplify()) {
                (Const(z), r) if z == 0.0 && r != Const(0.0) => Const(0.0),
                (s, Const(o)) if o == 1.0 => s,
                (l, r) => fold(Div(b(l), b(r))),
            },
            Pow(a, c) => match (a.simplify(), c.simplify()) {
                (_, Const(z)) if z == 0.0 => Const(1.0),
                (s, Const(o)) if o == 1.0 => s,
                (l, r) => fold(Pow(b(l), b(r))),
            },
            Call(f, a) => fold(Call(*f, b(a.simplify()))),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Const(c) if c.is_sign_negative() => 3,
            Expr::Pow(..) => 4,
            Expr::Const(_) | Expr::Var(_) | Expr::Call(..) => 5,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let binary = |f: &mut fmt::Formatter<'_>, l: &Expr, op: &str, r: &Expr, p: u8| {
            write_child(f, l, p)?;
            write!(f, "{op}")?;
            write_child(f, r, p + 1)
        };
        match self {
            // shortest representation that parses back to the same f64
            Expr::Const(c) if c.is_sign_negative() => write!(f, "-{}", -c),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(Var::X) => write!(f, "x"),
            Expr::Var(Var::T) => write!(f, "t"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                write_child(f, a, 3)
            }
            Expr::Add(l, r) => binary(f, l, " + ", r, 1),
            Expr::Sub(l, r) => binary(f, l, " - ", r, 1),
            Expr::Mul(l, r) => binary(f, l, "*", r, 2),
            Expr::Div(l, r) => binary(f, l, "/", r, 2),
            Expr::Pow(l, r) => {
                write_child(f, l, 5)?;
                write!(f, "^")?;
                write_child(f, r, 3)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Op(c) => format!("'{c}'"),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let v: f64 = text.parse().map_err(|_| ParseError {
                position: start,
                expected: vec!["number".into()],
                found: format!("'{text}'"),
            })?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            let ch = src[i..].chars().next().unwrap_or('?');
            return Err(ParseError {
                position: i,
                expected: vec!["number".into(), "identifier".into(), "operator".into()],
                found: format!("'{ch}'"),
            });
        }
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let (position, tok) = &self.toks[self.pos];
        ParseError {
            position: *position,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: tok.describe(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Op(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(b(lhs), b(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(b(lhs), b(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(b(lhs), b(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(b(lhs), b(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(b(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.eat('^') {
            return Ok(Expr::Pow(b(base), b(self.unary()?)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        const START: &[&str] = &["number", "x", "t", "pi", "function", "'('", "'-'"];
        match self.peek().clone() {
            Tok::Num(v) => {
                self.pos += 1;
                Ok(Expr::Const(v))
            }
            Tok::Op('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error(&["')'", "operator"]));
                }
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => {
                    self.pos += 1;
                    Ok(Expr::Var(Var::X))
                }
                "t" => {
                    self.pos += 1;
                    Ok(Expr::Var(Var::T))
                }
                "pi" => {
                    self.pos += 1;
                    Ok(Expr::Const(std::f64::consts::PI))
                }
                other => match Func::from_name(other) {
                    Some(func) => {
                        self.pos += 1;
                        if !self.eat('(') {
                            return Err(self.error(&["'('"]));
                        }
                        let arg = self.expr()?;
                        if !self.eat(')') {
                            return Err(self.error(&["')'", "operator"]));
                        }
                        Ok(Expr::Call(func, b(arg)))
                    }
                    None => Err(self.error(&["x", "t", "pi", "sin", "cos", "exp", "sqrt", "ln"])),
                },
            },
            _ => Err(self.error(START)),
        }
    }
}

/// Parse a free expression (no presets).
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["operator", "end of input"]));
    }
    Ok(e)
}

fn preset(src: &str) -> Option<Result<Expr, ParseError>> {
    let number = |s: &str, offset: usize| -> Result<f64, ParseError> {
        s.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| ParseError {
            position: offset,
            expected: vec!["number".into()],
            found: format!("'{}'", s.trim()),
        })
    };
    let var = |v| b(Expr::Var(v));
    if src == "zero" {
        return Some(Ok(Expr::Const(0.0)));
    }
    if let Some(rest) = src.strip_prefix("linear:") {
        let off = "linear:".len();
        let parsed = match rest.split_once(',') {
            Some((a, c)) => number(a, off).and_then(|a| {
                number(c, off + rest.find(',').unwrap_or(0) + 1).map(|c| {
                    Expr::Add(b(Expr::Mul(b(Expr::Const(a)), var(Var::X))), b(Expr::Mul(b(Expr::Const(c)), var(Var::T))))
                })
            }),
            None => Err(ParseError {
                position: src.len(),
                expected: vec!["','".into()],
                found: "end of input".into(),
            }),
        };
        return Some(parsed);
    }
    if let Some(rest) = src.strip_prefix("bent:") {
        return Some(
            number(rest, "bent:".len())
                .map(|c| Expr::Mul(b(Expr::Mul(b(Expr::Const(c)), var(Var::X))), var(Var::T)))
        );
    }
    None
}

/// A parsed key function together with its first partial derivatives.
/// Immutable and cheap to clone.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseExpr {
    source: Arc<str>,
    expr: Arc<Expr>,
    dx: Arc<Expr>,
    dt: Arc<Expr>,
}

impl PhaseExpr {
    pub fn from_expr(source: impl Into<Arc<str>>, expr: Expr) -> Self {
        let dx = expr.derivative(Var::X);
        let dt = expr.derivative(Var::T);
        Self {
            source: source.into(),
            expr: Arc::new(expr),
            dx: Arc::new(dx),
            dt: Arc::new(dt),
        }
    }

    /// The perfect-crystal phase `f = 0`.
    pub fn zero() -> Self {
        Self::from_expr("0", Expr::Const(0.0))
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// True when the expression simplifies to the constant zero.
    pub fn is_zero(&self) -> bool {
        self.expr.simplify() == Expr::Const(0.0)
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        self.expr.eval(x, t)
    }

    pub fn eval_dx(&self, x: f64, t: f64) -> Result<f64> {
        self.dx.eval(x, t)
    }

    pub fn eval_dt(&self, x: f64, t: f64) -> Result<f64> {
        self.dt.eval(x, t)
    }

    pub fn derivative(&self, v: Var) -> PhaseExpr {
        let d = match v {
            Var::X => (*self.dx).clone(),
            Var::T => (*self.dt).clone(),
        };
        let name = match v {
            Var::X => "x",
            Var::T => "t",
        };
        PhaseExpr::from_expr(format!("d/d{name}[{}]", self.source), d)
    }
}

impl fmt::Display for PhaseExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)
    }
}

impl std::str::FromStr for PhaseExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_phase(s)
    }
}

pub fn parse_phase(src: &str) -> Result<PhaseExpr> {
    let trimmed = src.trim();
    if trimmed.is_empty() {
        return Err(ParseError {
            position: 0,
            expected: vec!["expression".into()],
            found: "end of input".into(),
        }
        .into());
    }
    let expr = match preset(trimmed) {
        Some(r) => r?,
        None => parse_expr(src)?,
    };
    Ok(PhaseExpr::from_expr(trimmed, expr))
}

pub fn eval_phase(e: &PhaseExpr, x: f64, t: f64) -> Result<f64> {
    e.eval(x, t)
}

pub fn diff_phase(e: &PhaseExpr, var: Var) -> PhaseExpr {
    e.derivative(var)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, x: f64, t: f64) -> f64 {
        parse_phase(src).unwrap().eval(x, t).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(ev("0", 3.0, -1.0), 0.0);
        assert!((ev("0.3*x*t", 2.0, 1.0) - 0.6).abs() < 1e-15);
        assert_eq!(ev("x+t", 1.0, 2.0), 3.0);
        assert_eq!(ev("0.5*(x^2-t^2)", 2.0, 2.0), 0.0);
        assert_eq!(ev("-x^2", 3.0, 0.0), -9.0);
        assert_eq!(ev("2^-1", 0.0, 0.0), 0.5);
        assert_eq!(ev("2^3^2", 0.0, 0.0), 512.0);
        assert_eq!(ev("8/4/2", 0.0, 0.0), 1.0);
        assert_eq!(ev("1-2-3", 0.0, 0.0), -4.0);
        assert!((ev("1.5e-1*x", 2.0, 0.0) - 0.3).abs() < 1e-16);
    }

    #[test]
    fn presets() {
        assert!(parse_phase("zero").unwrap().is_zero());
        assert!(parse_phase("0").unwrap().is_zero());
        assert!(!parse_phase("bent:0.2").unwrap().is_zero());
        assert!((ev("linear:2,3", 1.0, 0.5) - 3.5).abs() < 1e-15);
        assert!((ev("bent:0.2", 2.0, 3.0) - 1.2).abs() < 1e-15);
        assert!(parse_phase("bent:").is_err());
        assert!(parse_phase("linear:1").is_err());
    }

    #[test]
    fn parse_errors() {
        let Err(Error::Parse(e)) = parse_phase("sin(x+t^2") else {
            panic!("unbalanced parenthesis accepted")
        };
        assert_eq!(e.position, 9);
        assert!(e.expected.contains(&"')'".to_string()));
        assert_eq!(e.found, "end of input");
        let Err(Error::Parse(e)) = parse_phase("x + y") else { panic!() };
        assert_eq!(e.position, 4);
        assert!(parse_phase("").is_err());
        assert!(parse_phase("x $ t").is_err());
        assert!(parse_phase("x t").is_err());
        assert!(parse_phase("tan(x)").is_err());
    }

    #[test]
    fn domain_errors() {
        let e = parse_phase("sqrt(x)").unwrap();
        assert!(matches!(e.eval(-1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(parse_phase("1/x").unwrap().eval(0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(parse_phase("x^0.5").unwrap().eval(-2.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(parse_phase("exp(x)").unwrap().eval(1000.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn derivative_examples() {
        let d = diff_phase(&parse_phase("0.3*x*t").unwrap(), Var::X);
        assert_eq!(d.to_string(), "0.3*t");
        assert_eq!(diff_phase(&parse_phase("x+t").unwrap(), Var::X).eval(5.0, 5.0).unwrap(), 1.0);
        let d = diff_phase(&parse_phase("sin(t)").unwrap(), Var::T);
        assert_eq!(d.to_string(), "cos(t)");
        assert_eq!(d.eval(0.0, 0.0).unwrap(), 1.0);
        let d = diff_phase(&parse_phase("0.5*(x^2-t^2)").unwrap(), Var::X);
        assert_eq!(d.eval(3.0, 7.0).unwrap(), 3.0);
        assert!(diff_phase(&parse_phase("t^2").unwrap(), Var::X).is_zero());
        let d = parse_phase("x^x").unwrap().eval_dx(2.0, 0.0).unwrap();
        assert!((d - 4.0 * (2f64.ln() + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn printing_respects_precedence() {
        for src in ["-x^2", "(-x)^2", "(x+t)*(x-t)", "x-(t-x)", "x/(t/x)", "2^3^2", "(2^3)^2", "-(x*t)", "x^-2"] {
            let e = parse_expr(src).unwrap();
            let back = parse_expr(&e.to_string()).unwrap();
            assert_eq!(e, back, "{src} printed as {e}");
        }
    }
}
