//! Text format for cone integration problems.
//!
//! ```text
//! # comment
//! dim: 2
//! f: exp(-x1 - 2*x2) * (1 + x1*x2) + exp(x2/3)
//! cone: 1 0
//! cone: 1 1
//! offset: 0 1/2
//! lambda: 0 0
//! ```
//!
//! `f:` (or `term:`) lines are summed. Each `cone:` line is one generator
//! `e_j`; `offset` defaults to the origin and `lambda` is optional. Numbers
//! are integers, fractions `a/b` or decimals; variables are `x1 … xn`.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use super::{ConeRecord, ExponentialPolynomial, Polynomial};
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct ConeProblem {
    pub f: ExponentialPolynomial<Rational>,
    pub cone: ConeRecord,
    pub lambda: Option<Vec<Rational>>,
}

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let (n, d) = (parse_rational(n)?, parse_rational(d)?);
        if d.is_zero() {
            return Err(err(format!("zero denominator in {s:?}")));
        }
        return Ok(n / d);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err(format!("not a number: {s:?}")));
    }
    let digits: BigInt = format!("0{int}{frac}").parse().map_err(|_| err(format!("not a number: {s:?}")))?;
    let v = Rational::new(digits, BigInt::from(10u32).pow(frac.len()));
    Ok(if neg { -v } else { v })
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Var(usize),
    Exp,
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            out.push(Tok::Num(parse_rational(&cs[st..i].iter().collect::<String>())?));
        } else if c == 'x' {
            let st = i + 1;
            i = st;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let k: usize = cs[st..i].iter().collect::<String>().parse().map_err(|_| err("variable needs an index, as in x1"))?;
            if k == 0 {
                return Err(err("variables are numbered from x1"));
            }
            out.push(Tok::Var(k - 1));
        } else if cs[i..].starts_with(&['e', 'x', 'p']) {
            out.push(Tok::Exp);
            i += 3;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(err(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

type Terms = Vec<(Vec<Rational>, Polynomial<Rational>)>;

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn constant(&self, c: Rational) -> Terms {
        vec![(vec![Rational::zero(); self.dim], Polynomial::constant(self.dim, c))]
    }

    fn expr(&mut self) -> Result<Terms> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term()?;
        if neg {
            acc = scale(acc, &-Rational::one());
        }
        loop {
            if self.eat('+') {
                acc.extend(self.term()?);
            } else if self.eat('-') {
                acc.extend(scale(self.term()?, &-Rational::one()));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Terms> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = mul(&acc, &rhs);
            } else if self.eat('/') {
                let rhs = self.unary()?;
                let c = as_constant(&rhs).ok_or_else(|| err("can only divide by a constant"))?;
                if c.is_zero() {
                    return Err(err("division by zero"));
                }
                acc = scale(acc, &(Rational::one() / c));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Terms> {
        if self.eat('-') {
            return Ok(scale(self.unary()?, &-Rational::one()));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let k = match self.toks.get(self.pos) {
                Some(Tok::Num(n)) if n.is_integer() && *n >= Rational::zero() => n.to_integer(),
                _ => return Err(err("exponent after ^ must be a nonnegative integer")),
            };
            self.pos += 1;
            let k: u32 = k.try_into().map_err(|_| err("exponent too large"))?;
            let mut acc = self.constant(Rational::one());
            for _ in 0..k {
                acc = mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Terms> {
        let tok = self.peek().cloned().ok_or_else(|| err("unexpected end of expression"))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(self.constant(n)),
            Tok::Var(k) => {
                if k >= self.dim {
                    return Err(err(format!("x{} exceeds dimension {}", k + 1, self.dim)));
                }
                Ok(vec![(vec![Rational::zero(); self.dim], Polynomial::var(self.dim, k))])
            }
            Tok::Op('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(err("missing )"));
                }
                Ok(e)
            }
            Tok::Exp => {
                if !self.eat('(') {
                    return Err(err("exp needs parentheses"));
                }
                let arg = self.expr()?;
                if !self.eat(')') {
                    return Err(err("missing ) after exp argument"));
                }
                let lambda = linear_form(&arg, self.dim)?;
                Ok(vec![(lambda, Polynomial::one(self.dim))])
            }
            Tok::Op(c) => Err(err(format!("unexpected {c:?}"))),
        }
    }
}

fn scale(t: Terms, c: &Rational) -> Terms {
    t.into_iter().map(|(l, p)| (l, p.scale(c))).collect()
}

fn mul(a: &Terms, b: &Terms) -> Terms {
    let mut out = Vec::new();
    for (la, pa) in a {
        for (lb, pb) in b {
            out.push((la.iter().zip(lb).map(|(x, y)| x + y).collect(), pa.mul(pb)));
        }
    }
    out
}

fn collapsed(t: &Terms) -> Option<Polynomial<Rational>> {
    let n = t.first()?.1.nvars();
    let mut p = Polynomial::zero(n);
    for (l, q) in t {
        if !q.is_zero() && l.iter().any(|x| !x.is_zero()) {
            return None;
        }
        p = p.add(q);
    }
    Some(p)
}

fn as_constant(t: &Terms) -> Option<Rational> {
    let p = collapsed(t)?;
    if p.degree() > 0 {
        return None;
    }
    Some(p.coeff(&vec![0; p.nvars()]))
}

fn linear_form(t: &Terms, dim: usize) -> Result<Vec<Rational>> {
    let p = collapsed(t).ok_or_else(|| err("exp argument must be a linear form"))?;
    if p.degree() > 1 {
        return Err(err("exp argument must be linear"));
    }
    if !p.coeff(&vec![0; dim]).is_zero() {
        return Err(err("exp argument must not have a constant term"));
    }
    Ok((0..dim)
        .map(|k| {
            let mut e = vec![0; dim];
            e[k] = 1;
            p.coeff(&e)
        })
        .collect())
}

/// Parses one expression in `dim` variables into an exponential polynomial.
pub fn parse_expression(s: &str, dim: usize) -> Result<ExponentialPolynomial<Rational>> {
    let mut p = Parser { toks: tokenize(s)?, pos: 0, dim };
    let t = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(format!("trailing input in {s:?}")));
    }
    ExponentialPolynomial::new(dim, t)
}

fn row(s: &str) -> Result<Vec<Rational>> {
    s.split(|c: char| c.is_whitespace() || c == ',').filter(|w| !w.is_empty()).map(parse_rational).collect()
}

pub fn parse_problem(text: &str) -> Result<ConeProblem> {
    let mut dim = None;
    let mut exprs = Vec::new();
    let mut gens = Vec::new();
    let mut offset = None;
    let mut lambda = None;
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, val) = line.split_once(':').ok_or_else(|| err(format!("line {}: expected key: value", no + 1)))?;
        match key.trim() {
            "dim" => dim = Some(val.trim().parse::<usize>().map_err(|_| err(format!("line {}: bad dim", no + 1)))?),
            "f" | "term" => exprs.push(val.to_string()),
            "cone" => gens.push(row(val)?),
            "offset" => offset = Some(row(val)?),
            "lambda" => lambda = Some(row(val)?),
            other => return Err(err(format!("line {}: unknown key {other:?}", no + 1))),
        }
    }
    let dim = dim.or_else(|| gens.first().map(Vec::len)).ok_or_else(|| err("missing dim"))?;
    if exprs.is_empty() {
        return Err(err("missing f"));
    }
    let mut f = parse_expression(&exprs[0], dim)?;
    for e in &exprs[1..] {
        f = f.add(&parse_expression(e, dim)?)?;
    }
    let cone = ConeRecord::new(gens, offset.unwrap_or_else(|| vec![Rational::zero(); dim]))?;
    if let Some(l) = &lambda {
        if l.len() != dim {
            return Err(Error::RankMismatch { expected: dim, got: l.len() });
        }
    }
    Ok(ConeProblem { f, cone, lambda })
}
