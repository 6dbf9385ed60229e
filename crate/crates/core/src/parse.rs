//! Expression parser for algebra elements.
//!
//! Grammar: `expr := ['+'|'-'] term (('+'|'-') term)*`,
//! `term := power (('*'|'/') power)*`, `power := atom ('^' ['-'] int)?`,
//! `atom := int | x<i> | y<i> | g<k> | s | z<N> | '(' expr ')'`.
//! Division is allowed only by nonzero scalars; negative powers only of scalars.

use crate::error::{Error, Result};
use crate::pbw::{AlgebraContext, PBWElement, Word};
use crate::scalars::CycloNumber;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(String),
    Op(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = col;
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let text: String = chars[i..j].iter().collect();
            let v = text
                .parse::<u64>()
                .map_err(|_| Error::parse(line, start, "integer literal too large"))?;
            out.push(Token { tok: Tok::Int(v), line, col: start });
            col += j - i;
            i = j;
        } else if c.is_ascii_alphabetic() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_alphanumeric() {
                j += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[i..j].iter().collect()),
                line,
                col: start,
            });
            col += j - i;
            i = j;
        } else if "+-*/^()".contains(c) {
            out.push(Token { tok: Tok::Op(c), line, col: start });
            col += 1;
            i += 1;
        } else {
            return Err(Error::parse(line, start, format!("unexpected character '{c}'")));
        }
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser<'a> {
    ctx: &'a AlgebraContext,
    toks: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, t: &Token, msg: impl Into<String>) -> Result<T> {
        Err(Error::parse(t.line, t.col, msg))
    }

    fn expr(&mut self) -> Result<PBWElement> {
        let mut acc = match self.peek().tok {
            Tok::Op('-') => {
                self.bump();
                -&self.term()?
            }
            Tok::Op('+') => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek().tok {
                Tok::Op('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Op('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<PBWElement> {
        let mut acc = self.power()?;
        loop {
            match self.peek().tok {
                Tok::Op('*') => {
                    self.bump();
                    let rhs = self.power()?;
                    acc = self.ctx.mul(&acc, &rhs);
                }
                Tok::Op('/') => {
                    let at = self.bump();
                    let rhs = self.power()?;
                    let s = match self.as_scalar(&rhs) {
                        Some(s) if !s.is_zero() => s,
                        Some(_) => return self.err(&at, "division by zero"),
                        None => return self.err(&at, "division is only allowed by scalars"),
                    };
                    acc = acc.scale(&s.inv()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn as_scalar(&self, e: &PBWElement) -> Option<CycloNumber> {
        if e.is_zero() {
            return Some(self.ctx.scalar(0));
        }
        let unit = Word::unit(self.ctx.rank());
        (e.len() == 1).then(|| e.coeff(&unit).cloned()).flatten()
    }

    fn power(&mut self) -> Result<PBWElement> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Op('^') {
            return Ok(base);
        }
        let caret = self.bump();
        let negative = if self.peek().tok == Tok::Op('-') {
            self.bump();
            true
        } else {
            false
        };
        let t = self.bump();
        let k = match t.tok {
            Tok::Int(k) if k <= u32::MAX as u64 => k as u32,
            _ => return self.err(&t, "expected an integer exponent"),
        };
        if negative {
            return match self.as_scalar(&base) {
                Some(s) if !s.is_zero() => Ok(self.ctx.constant(s.pow(-(k as i64))?)),
                _ => self.err(&caret, "negative powers are only allowed for nonzero scalars"),
            };
        }
        Ok(self.ctx.pow(&base, k))
    }

    fn index(&self, t: &Token, name: &str, digits: &str, bound: usize) -> Result<usize> {
        let k: usize = match digits.parse() {
            Ok(k) => k,
            Err(_) => return self.err(t, format!("unknown identifier '{name}'")),
        };
        if k >= bound {
            return self.err(t, format!("'{name}' is out of range for this algebra"));
        }
        Ok(k)
    }

    fn atom(&mut self) -> Result<PBWElement> {
        let t = self.bump();
        match &t.tok {
            Tok::Int(v) => Ok(self.ctx.constant(CycloNumber::from_int(*v as i64, self.ctx.order()))),
            Tok::Op('(') => {
                if self.peek().tok == Tok::End {
                    return self.err(&t, "unclosed '('");
                }
                let inner = self.expr()?;
                if self.peek().tok != Tok::Op(')') {
                    if self.peek().tok == Tok::End {
                        return self.err(&t, "unclosed '('");
                    }
                    let p = self.peek().clone();
                    return self.err(&p, "expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Tok::Ident(name) => {
                let r = self.ctx.rank();
                let (head, digits) = name.split_at(1);
                match head {
                    "x" | "y" if !digits.is_empty() => {
                        let k = self.index(&t, name, digits, r + 1)?;
                        if k == 0 {
                            return self.err(&t, format!("'{name}': variables are numbered from 1"));
                        }
                        Ok(if head == "x" { self.ctx.x(k - 1) } else { self.ctx.y(k - 1) })
                    }
                    "g" if !digits.is_empty() => {
                        let k = self.index(&t, name, digits, self.ctx.group().order())?;
                        Ok(self.ctx.g(k))
                    }
                    "z" if !digits.is_empty() => {
                        let n: u32 = digits
                            .parse()
                            .map_err(|_| Error::parse(t.line, t.col, format!("unknown identifier '{name}'")))?;
                        if n == 0 || self.ctx.order() % n != 0 {
                            return self.err(&t, format!("'{name}' does not lie in Q(z{})", self.ctx.order()));
                        }
                        Ok(self.ctx.constant(CycloNumber::root(n, 1)?.embed(self.ctx.order())?))
                    }
                    "s" if digits.is_empty() => {
                        if r != 1 || self.ctx.reflections().is_empty() {
                            return self.err(&t, "'s' is only defined in rank 1 with a reflection");
                        }
                        Ok(self.ctx.g(self.ctx.reflections()[0].element))
                    }
                    _ => self.err(&t, format!("unknown identifier '{name}'")),
                }
            }
            Tok::End => self.err(&t, "unexpected end of input"),
            Tok::Op(c) => self.err(&t, format!("unexpected '{c}'")),
        }
    }
}

/// Parse an expression and return its PBW normal form.
pub fn parse_expression(src: &str, ctx: &AlgebraContext) -> Result<PBWElement> {
    let toks = lex(src)?;
    let mut p = Parser { ctx, toks, pos: 0 };
    let e = p.expr()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return p.err(&t, "unexpected trailing input");
    }
    Ok(e)
}

/// Laurent polynomial in one variable, keyed by exponent.
pub type LaurentPoly = std::collections::BTreeMap<i64, CycloNumber>;

fn laurent_add(acc: &mut LaurentPoly, e: i64, c: CycloNumber) {
    if c.is_zero() {
        return;
    }
    let v = match acc.remove(&e) {
        Some(old) => &old + &c,
        None => c,
    };
    if !v.is_zero() {
        acc.insert(e, v);
    }
}

fn laurent_mul(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let mut out = LaurentPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            laurent_add(&mut out, ea + eb, ca * cb);
        }
    }
    out
}

fn laurent_scalar(p: &LaurentPoly, order: u32) -> Option<CycloNumber> {
    match p.len() {
        0 => Some(CycloNumber::zero(order)),
        1 => p.get(&0).cloned(),
        _ => None,
    }
}

struct LaurentParser {
    order: u32,
    toks: Vec<Token>,
    pos: usize,
}

impl LaurentParser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, t: &Token, msg: impl Into<String>) -> Result<T> {
        Err(Error::parse(t.line, t.col, msg))
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let neg = CycloNumber::from_int(-1, self.order);
        let mut acc = match self.peek().tok {
            Tok::Op('-') => {
                self.bump();
                self.term()?.into_iter().map(|(e, c)| (e, &c * &neg)).collect()
            }
            Tok::Op('+') => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            let sign = match self.peek().tok {
                Tok::Op('+') => CycloNumber::one(self.order),
                Tok::Op('-') => neg.clone(),
                _ => return Ok(acc),
            };
            self.bump();
            for (e, c) in self.term()? {
                laurent_add(&mut acc, e, &c * &sign);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek().tok {
                Tok::Op('*') => {
                    self.bump();
                    let rhs = self.power()?;
                    acc = laurent_mul(&acc, &rhs);
                }
                Tok::Op('/') => {
                    let at = self.bump();
                    let rhs = self.power()?;
                    match laurent_scalar(&rhs, self.order) {
                        Some(s) if !s.is_zero() => {
                            let inv = s.inv()?;
                            acc = acc.into_iter().map(|(e, c)| (e, &c * &inv)).collect();
                        }
                        _ => return self.err(&at, "division is only allowed by nonzero scalars"),
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<LaurentPoly> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let negative = if self.peek().tok == Tok::Op('-') {
            self.bump();
            true
        } else {
            false
        };
        let t = self.bump();
        let k = match t.tok {
            Tok::Int(k) if k <= 10_000 => k as i64,
            _ => return self.err(&t, "expected an integer exponent"),
        };
        if base.len() == 1 {
            let (e, c) = base.iter().next().unwrap();
            if !c.is_zero() {
                let k = if negative { -k } else { k };
                return Ok(LaurentPoly::from([(e * k, c.pow(k)?)]));
            }
        }
        if negative {
            return self.err(&t, "negative powers are only allowed for monomials");
        }
        let mut out = LaurentPoly::from([(0, CycloNumber::one(self.order))]);
        for _ in 0..k {
            out = laurent_mul(&out, &base);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<LaurentPoly> {
        let t = self.bump();
        match &t.tok {
            Tok::Int(v) => Ok(LaurentPoly::from([(0, CycloNumber::from_int(*v as i64, self.order))])
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .collect()),
            Tok::Op('(') => {
                if self.peek().tok == Tok::End {
                    return self.err(&t, "unclosed '('");
                }
                let inner = self.expr()?;
                match self.peek().tok {
                    Tok::Op(')') => {
                        self.bump();
                        Ok(inner)
                    }
                    Tok::End => self.err(&t, "unclosed '('"),
                    _ => {
                        let p = self.peek().clone();
                        self.err(&p, "expected ')'")
                    }
                }
            }
            Tok::Ident(name) if name == "x" => Ok(LaurentPoly::from([(1, CycloNumber::one(self.order))])),
            Tok::Ident(name) if name.starts_with('z') && name.len() > 1 => {
                let n: u32 = name[1..]
                    .parse()
                    .map_err(|_| Error::parse(t.line, t.col, format!("unknown identifier '{name}'")))?;
                if n == 0 || self.order % n != 0 {
                    return self.err(&t, format!("'{name}' does not lie in Q(z{})", self.order));
                }
                Ok(LaurentPoly::from([(0, CycloNumber::root(n, 1)?.embed(self.order)?)]))
            }
            Tok::Ident(name) => self.err(&t, format!("unknown identifier '{name}'")),
            Tok::End => self.err(&t, "unexpected end of input"),
            Tok::Op(c) => self.err(&t, format!("unexpected '{c}'")),
        }
    }
}

/// Parse a Laurent polynomial in `x` such as `2*x^-1 + x` over Q(ζ_order).
pub fn parse_laurent(src: &str, order: u32) -> Result<LaurentPoly> {
    let toks = lex(src)?;
    let mut p = LaurentParser { order, toks, pos: 0 };
    let e = p.expr()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return p.err(&t, "unexpected trailing input");
    }
    Ok(e)
}

/// Canonical text form of a Laurent polynomial, readable by [`parse_laurent`].
pub fn format_laurent(p: &LaurentPoly) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (e, c)) in p.iter().enumerate() {
        let negative = c.term_count() == 1 && c.to_string().starts_with('-');
        let mag = if negative { -c } else { c.clone() };
        let coeff = if mag.term_count() > 1 { format!("({mag})") } else { mag.to_string() };
        let var = match e {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{e}"),
        };
        if idx == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if var.is_empty() {
            out.push_str(&coeff);
        } else if mag.is_one() {
            out.push_str(&var);
        } else {
            out.push_str(&format!("{coeff}*{var}"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;
    use std::sync::Arc;

    fn z2() -> Arc<AlgebraContext> {
        AlgebraContext::named("cyclic:2", &[CycloNumber::from_rational(rat(1, 3), 2)]).unwrap()
    }

    #[test]
    fn basic_words() {
        let a = z2();
        let e = parse_expression("y1*x1", &a).unwrap();
        assert_eq!(e, a.word(Word::new(0, vec![1], vec![1])));
        let f = parse_expression("x1*y1", &a).unwrap();
        assert_eq!(f, a.mul(&a.x(0), &a.y(0)));
        assert_eq!(parse_expression("s", &a).unwrap(), a.g(1));
    }

    #[test]
    fn precedence_and_scalars() {
        let a = z2();
        let e = parse_expression("2*x1^2 - 1/2*(x1 + 1)", &a).unwrap();
        let expected = &(&a.pow(&a.x(0), 2).scale(&a.scalar(2)) - &a.x(0).scale(&CycloNumber::from_rational(rat(1, 2), 2)))
            - &a.constant(CycloNumber::from_rational(rat(1, 2), 2));
        assert_eq!(e, expected);
        assert_eq!(parse_expression("-x1", &a).unwrap(), a.x(0).scale(&a.scalar(-1)));
    }

    #[test]
    fn error_positions() {
        let a = z2();
        match parse_expression("x1*(", &a) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 4)),
            other => panic!("{other:?}"),
        }
        match parse_expression("x1 +\n  q7", &a) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(parse_expression("x2", &a).is_err());
        assert!(parse_expression("g2", &a).is_err());
        assert!(parse_expression("x1/y1", &a).is_err());
        assert!(parse_expression("z3", &a).is_err());
        assert!(parse_expression("(x1", &a).is_err());
    }

    #[test]
    fn format_round_trip() {
        let ctx = AlgebraContext::named(
            "cyclic:3",
            &[CycloNumber::from_rational(rat(1, 2), 3), CycloNumber::parse_in("1/5 + z3", 3).unwrap()],
        )
        .unwrap();
        let e = parse_expression("x1^2*y1*g1 - 3*y1 + z3*g2*x1", &ctx).unwrap();
        let text = ctx.format_element(&e);
        let back = parse_expression(&text, &ctx).unwrap();
        assert_eq!(back, e);
        assert_eq!(ctx.format_element(&back), text);
    }

    #[test]
    fn laurent_parsing() {
        let p = parse_laurent("2*x^-1 + x", 2).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[&-1], CycloNumber::from_int(2, 2));
        assert_eq!(p[&1], CycloNumber::one(2));
        let q = parse_laurent("(x + x^-1)^2 - 2", 1).unwrap();
        assert_eq!(q.keys().copied().collect::<Vec<_>>(), vec![-2, 2]);
        assert_eq!(format_laurent(&q), "x^-2 + x^2");
        let r = parse_laurent("1/2*x^-3 - z3*x^2", 3).unwrap();
        assert_eq!(parse_laurent(&format_laurent(&r), 3).unwrap(), r);
        assert!(parse_laurent("0", 2).unwrap().is_empty());
        assert!(parse_laurent("y", 2).is_err());
        assert!(parse_laurent("(x+1)^-1", 2).is_err());
    }
}
