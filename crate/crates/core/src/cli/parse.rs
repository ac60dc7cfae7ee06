//! Textual operator grammar shared by `solve` and the registry:
//! rational literals, `+ - * / ^ ( )`, atoms `D, E4, E6` (MLDEs) or
//! `TK, K` (Fuchsian operators in theta_K). Whitespace-insensitive.
//!
//! Both operator algebras are skew: moving D past a form multiplies out the
//! commutation rules [D, E4] = -E6/3, [D, E6] = -E4^2/2, and moving theta_K
//! past a function of K differentiates it.

use crate::exactnum::{parse_rational, Rational};
use crate::mlde::{FormPoly, FuchsOperator, Mlde};
use crate::polyk::{QPoly, RatK};
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Token>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                let val = parse_rational(&lit).ok_or_else(|| format!("bad number {}", lit))?;
                out.push(Token::Num(val));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric()) {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            _ => return Err(format!("unexpected character {:?}", c)),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Expr {
    Num(Rational),
    Atom(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, String> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Token::Minus) => {
                    self.next();
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, String> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.next();
                    let rhs = self.factor()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Token::Slash) => {
                    self.next();
                    let rhs = self.factor()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, String> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.next();
            let inner = self.factor()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, String> {
        let base = self.primary()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.next();
            let exp = self.primary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, String> {
        match self.next() {
            Some(Token::Num(v)) => Ok(Expr::Num(v)),
            Some(Token::Ident(name)) => Ok(Expr::Atom(name)),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err("missing closing parenthesis".to_string()),
                }
            }
            Some(t) => Err(format!("unexpected token {:?}", t)),
            None => Err("unexpected end of input".to_string()),
        }
    }
}

fn parse_ast(text: &str) -> Result<Expr, String> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err("empty operator".to_string());
    }
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(format!("trailing input after position {}", p.pos));
    }
    Ok(e)
}

trait OperatorAlgebra: Clone {
    fn from_scalar(r: &Rational) -> Self;
    fn from_atom(name: &str) -> Result<Self, String>;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Result<Self, String>;
    fn as_scalar(&self) -> Option<Rational>;
}

fn eval<A: OperatorAlgebra>(e: &Expr) -> Result<A, String> {
    match e {
        Expr::Num(v) => Ok(A::from_scalar(v)),
        Expr::Atom(name) => A::from_atom(name),
        Expr::Neg(x) => Ok(eval::<A>(x)?.neg()),
        Expr::Add(a, b) => Ok(eval::<A>(a)?.add(&eval::<A>(b)?)),
        Expr::Sub(a, b) => Ok(eval::<A>(a)?.add(&eval::<A>(b)?.neg())),
        Expr::Mul(a, b) => Ok(eval::<A>(a)?.mul(&eval::<A>(b)?)),
        Expr::Div(a, b) => eval::<A>(a)?.div(&eval::<A>(b)?),
        Expr::Pow(a, b) => {
            let exp = eval::<A>(b)?
                .as_scalar()
                .filter(|r| r.is_integer() && !r.is_negative())
                .and_then(|r| r.to_integer().to_u32())
                .ok_or_else(|| "exponent must be a nonnegative integer".to_string())?;
            let base = eval::<A>(a)?;
            let mut acc = A::from_scalar(&Rational::one());
            for _ in 0..exp {
                acc = acc.mul(&base);
            }
            Ok(acc)
        }
    }
}

// --- the MLDE algebra: coefficients of D^j ------------------------------------

#[derive(Clone, Debug)]
struct SkewD(Vec<FormPoly>);

impl SkewD {
    fn trimmed(mut v: Vec<FormPoly>) -> SkewD {
        while v.len() > 1 && v.last().unwrap().is_zero() {
            v.pop();
        }
        SkewD(v)
    }
}

impl OperatorAlgebra for SkewD {
    fn from_scalar(r: &Rational) -> Self {
        SkewD(vec![FormPoly::constant(r.clone())])
    }

    fn from_atom(name: &str) -> Result<Self, String> {
        match name {
            "D" => Ok(SkewD(vec![FormPoly::zero(), FormPoly::one()])),
            "E4" => Ok(SkewD(vec![FormPoly::e4()])),
            "E6" => Ok(SkewD(vec![FormPoly::e6()])),
            "TK" | "K" => Err("TK and K belong to the Fuchsian grammar; MLDEs use D, E4, E6".to_string()),
            other => Err(format!("unknown MLDE atom {}; expected D, E4 or E6", other)),
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut out = vec![FormPoly::zero(); self.0.len().max(rhs.0.len())];
        for (i, c) in self.0.iter().enumerate() {
            out[i] = &out[i] + c;
        }
        for (i, c) in rhs.0.iter().enumerate() {
            out[i] = &out[i] + c;
        }
        SkewD::trimmed(out)
    }

    fn neg(&self) -> Self {
        SkewD(self.0.iter().map(|c| -c).collect())
    }

    fn mul(&self, rhs: &Self) -> Self {
        // D o (sum Q_j D^j) = sum (DQ_j) D^j + Q_j D^{j+1}
        let shift = |x: &[FormPoly]| -> Vec<FormPoly> {
            let mut out = vec![FormPoly::zero(); x.len() + 1];
            for (j, q) in x.iter().enumerate() {
                out[j] = &out[j] + &q.derivative();
                out[j + 1] = &out[j + 1] + q;
            }
            out
        };
        let mut acc = vec![FormPoly::zero(); 1];
        let mut power = rhs.0.clone();
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                power = shift(&power);
            }
            if p.is_zero() {
                continue;
            }
            for (j, q) in power.iter().enumerate() {
                if acc.len() <= j {
                    acc.resize(j + 1, FormPoly::zero());
                }
                acc[j] = &acc[j] + &(p * q);
            }
        }
        SkewD::trimmed(acc)
    }

    fn div(&self, rhs: &Self) -> Result<Self, String> {
        let scalar = rhs
            .as_scalar()
            .ok_or_else(|| "MLDE division only by rational scalars".to_string())?;
        if scalar.is_zero() {
            return Err("division by zero".to_string());
        }
        let inv = scalar.recip();
        Ok(SkewD(self.0.iter().map(|c| c.scaled(&inv)).collect()))
    }

    fn as_scalar(&self) -> Option<Rational> {
        if self.0.len() != 1 {
            return None;
        }
        let p = &self.0[0];
        if p.is_zero() {
            return Some(Rational::zero());
        }
        if p.iter_terms().count() == 1 {
            if let ((0, 0), c) = p.iter_terms().next().map(|(k, c)| (*k, c.clone()))? {
                return Some(c);
            }
        }
        None
    }
}

// --- the theta_K algebra: coefficients of TK^i -----------------------------------

#[derive(Clone, Debug)]
struct SkewT(Vec<RatK>);

impl SkewT {
    fn trimmed(mut v: Vec<RatK>) -> SkewT {
        while v.len() > 1 && v.last().unwrap().is_zero() {
            v.pop();
        }
        SkewT(v)
    }
}

impl OperatorAlgebra for SkewT {
    fn from_scalar(r: &Rational) -> Self {
        SkewT(vec![RatK::constant(r.clone())])
    }

    fn from_atom(name: &str) -> Result<Self, String> {
        match name {
            "TK" => Ok(SkewT(vec![RatK::zero(), RatK::one()])),
            "K" => Ok(SkewT(vec![RatK::from_poly(QPoly::var())])),
            "D" | "E4" | "E6" => {
                Err("D, E4 and E6 belong to the MLDE grammar; Fuchsian operators use TK and K".to_string())
            }
            other => Err(format!("unknown Fuchsian atom {}; expected TK or K", other)),
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut out = vec![RatK::zero(); self.0.len().max(rhs.0.len())];
        for (i, c) in self.0.iter().enumerate() {
            out[i] = &out[i] + c;
        }
        for (i, c) in rhs.0.iter().enumerate() {
            out[i] = &out[i] + c;
        }
        SkewT::trimmed(out)
    }

    fn neg(&self) -> Self {
        SkewT(self.0.iter().map(|c| -c).collect())
    }

    fn mul(&self, rhs: &Self) -> Self {
        let shift = |x: &[RatK]| -> Vec<RatK> {
            let mut out = vec![RatK::zero(); x.len() + 1];
            for (j, q) in x.iter().enumerate() {
                out[j] = &out[j] + &q.theta_deriv();
                out[j + 1] = &out[j + 1] + q;
            }
            out
        };
        let mut acc = vec![RatK::zero(); 1];
        let mut power = rhs.0.clone();
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                power = shift(&power);
            }
            if p.is_zero() {
                continue;
            }
            for (j, q) in power.iter().enumerate() {
                if acc.len() <= j {
                    acc.resize(j + 1, RatK::zero());
                }
                acc[j] = &acc[j] + &(p * q);
            }
        }
        SkewT::trimmed(acc)
    }

    fn div(&self, rhs: &Self) -> Result<Self, String> {
        if rhs.0.len() != 1 {
            return Err("Fuchsian division only by functions of K, not operators".to_string());
        }
        let recip = rhs.0[0]
            .try_recip()
            .ok_or_else(|| "denominators must factor as c * K^s * (1-K)^t".to_string())?;
        Ok(SkewT(self.0.iter().map(|c| c * &recip).collect()))
    }

    fn as_scalar(&self) -> Option<Rational> {
        if self.0.len() != 1 {
            return None;
        }
        let c = &self.0[0];
        if c.is_zero() {
            return Some(Rational::zero());
        }
        if c.k_pow() == 0 && c.omk_pow() == 0 && c.numerator().degree() == Some(0) {
            return Some(c.numerator().coeff(0));
        }
        None
    }
}

/// Parse an MLDE in the atoms D, E4, E6 and normalize it to a monic operator
/// of weight pair (0, weight). The leading D-coefficient must be a nonzero
/// rational scalar.
pub fn parse_mlde(text: &str, weight: i64) -> Result<Mlde, String> {
    let ast = parse_ast(text)?;
    let op: SkewD = eval(&ast)?;
    let n = op.0.len() - 1;
    let lead = &op.0[n];
    let lead_scalar = if lead == &FormPoly::one() {
        Rational::one()
    } else {
        SkewD(vec![lead.clone()])
            .as_scalar()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| "the leading D-coefficient must be a nonzero constant for solving".to_string())?
    };
    let inv = lead_scalar.recip();
    let coeffs: Vec<FormPoly> = op.0.iter().map(|c| c.scaled(&inv)).collect();
    Mlde::new((0, weight), coeffs)
        .map_err(|e| format!("not a graded MLDE of weight (0, {}): {}", weight, e))
}

/// Parse a Fuchsian operator in the atoms TK, K.
pub fn parse_fuchs(text: &str) -> Result<FuchsOperator, String> {
    let ast = parse_ast(text)?;
    let op: SkewT = eval(&ast)?;
    Ok(FuchsOperator::new(op.0))
}
