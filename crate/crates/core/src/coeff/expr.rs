//! Expression grammar shared by scalar literals, R-matrix files and
//! presentation files.
//!
//! ```text
//! expr   := ["+"|"-"] term { ("+"|"-") term }
//! term   := factor { ("*"|"/") factor }
//! factor := atom [ "^" ["-"] integer ]
//! atom   := integer | name | "(" expr ")"
//! name   := (letter | "_") { letter | digit | "_" | "'" }
//! ```
//!
//! Juxtaposition is not multiplication; `2q` is a parse error.

use num_bigint::BigInt;

use super::CoeffError;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Name { name: String, line: usize, col: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(char),
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Lexer, CoeffError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            toks.push((Tok::Int(s.parse().unwrap()), line, col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            toks.push((Tok::Name(chars[start..i].iter().collect()), line, col));
        } else if "+-*/^()".contains(c) {
            toks.push((Tok::Sym(c), line, col));
            i += 1;
        } else {
            return Err(CoeffError::Parse { line, col, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(Lexer { toks, pos: 0, end: (line, col0 + chars.len()) })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|t| (t.1, t.2)).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, CoeffError> {
        let (line, col) = self.here();
        Err(CoeffError::Parse { line, col, msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, CoeffError> {
        let mut lhs = if self.eat('-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, CoeffError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, CoeffError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        let e = match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                i64::try_from(n).or_else(|_| self.err("exponent out of range"))?
            }
            _ => return self.err("expected integer exponent"),
        };
        if paren && !self.eat(')') {
            return self.err("expected ')'");
        }
        Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }))
    }

    fn atom(&mut self) -> Result<Expr, CoeffError> {
        let (line, col) = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                Ok(Expr::Name { name, line, col })
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `src`, reporting positions relative to `line` and starting column `col`.
pub fn parse_at(src: &str, line: usize, col: usize) -> Result<Expr, CoeffError> {
    let mut lx = lex(src, line, col)?;
    let e = lx.expr()?;
    if lx.pos != lx.toks.len() {
        return lx.err("trailing input");
    }
    Ok(e)
}

pub fn parse(src: &str) -> Result<Expr, CoeffError> {
    parse_at(src, 1, 1)
}

/// Interpretation of an expression tree into some ring.
pub trait Interp {
    type Value;
    fn int(&self, n: &BigInt) -> Self::Value;
    fn name(&self, name: &str, line: usize, col: usize) -> Result<Self::Value, CoeffError>;
    fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn neg(&self, a: Self::Value) -> Self::Value;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, CoeffError>;
    fn div(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, CoeffError>;
    fn pow(&self, a: Self::Value, e: i64) -> Result<Self::Value, CoeffError>;
}

impl Expr {
    pub fn eval<I: Interp>(&self, it: &I) -> Result<I::Value, CoeffError> {
        Ok(match self {
            Expr::Int(n) => it.int(n),
            Expr::Name { name, line, col } => it.name(name, *line, *col)?,
            Expr::Neg(a) => it.neg(a.eval(it)?),
            Expr::Add(a, b) => it.add(a.eval(it)?, b.eval(it)?),
            Expr::Sub(a, b) => {
                let b = it.neg(b.eval(it)?);
                it.add(a.eval(it)?, b)
            }
            Expr::Mul(a, b) => it.mul(a.eval(it)?, b.eval(it)?)?,
            Expr::Div(a, b) => it.div(a.eval(it)?, b.eval(it)?)?,
            Expr::Pow(a, e) => it.pow(a.eval(it)?, *e)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = parse("1 + 2*q^-1").unwrap();
        match e {
            Expr::Add(_, b) => assert!(matches!(*b, Expr::Mul(_, _))),
            _ => panic!("bad tree"),
        }
    }

    #[test]
    fn error_positions() {
        match parse_at("q + * 2", 4, 7) {
            Err(CoeffError::Parse { line, col, .. }) => assert_eq!((line, col), (4, 11)),
            other => panic!("{other:?}"),
        }
        assert!(parse("2q").is_err());
        assert!(parse("(q").is_err());
    }
}
