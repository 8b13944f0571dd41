//! The form expression language: G2, G4, G6, DELTA, EISN(k,c,d,N), rational
//! literals, `+`, `-`, `*`, `^` with a non-negative integer exponent, parentheses.

use num_bigint::BigInt;
use num_rational::BigRational;
use quasihecke::exactq::CycRational;
use quasihecke::forms;
use quasihecke::quasimod::QuasiModularForm;
use quasihecke::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = cs[start..i].iter().collect();
            out.push(Tok::Num(lit.parse().expect("digits parse")));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect::<String>().to_ascii_uppercase()));
        } else if "+-*/^(),".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {:?}", c)));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {:?} at token {}", c, self.pos)))
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let v: i64 = n.try_into().map_err(|_| Error::Parse("integer too large".into()))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(Error::Parse(format!("expected an integer at token {}", self.pos))),
        }
    }

    fn expr(&mut self) -> Result<QuasiModularForm> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.try_add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.try_add(&self.term()?.neg())?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QuasiModularForm> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<QuasiModularForm> {
        if self.eat('-') {
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.int()?;
            let e: u32 = e.try_into().map_err(|_| Error::Parse("exponent must be non-negative".into()))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<QuasiModularForm> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let mut r = BigRational::from_integer(n);
                if self.eat('/') {
                    match self.toks.get(self.pos).cloned() {
                        Some(Tok::Num(d)) if d != BigInt::from(0) => {
                            self.pos += 1;
                            r /= BigRational::from_integer(d);
                        }
                        _ => return Err(Error::Parse("expected a nonzero denominator".into())),
                    }
                }
                Ok(QuasiModularForm::constant(CycRational::from_rational(r)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "G2" => Ok(QuasiModularForm::g2()),
                    "G4" => Ok(QuasiModularForm::modular(1, forms::g4())),
                    "G6" => Ok(QuasiModularForm::modular(1, forms::g6())),
                    "DELTA" => Ok(QuasiModularForm::modular(1, forms::delta())),
                    "EISN" => {
                        self.expect('(')?;
                        let k = self.int()?;
                        self.expect(',')?;
                        let c = self.int()?;
                        self.expect(',')?;
                        let d = self.int()?;
                        self.expect(',')?;
                        let n = self.int()?;
                        self.expect(')')?;
                        if n < 1 {
                            return Err(Error::Parse("EISN level must be positive".into()));
                        }
                        Ok(QuasiModularForm::modular(n as u64, forms::eis_n(k, c, d, n as u64)?))
                    }
                    _ => Err(Error::Parse(format!("unknown form {}", name))),
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => Err(Error::Parse(format!("unexpected end or symbol at token {}", self.pos))),
        }
    }
}

pub fn parse_form(s: &str) -> Result<QuasiModularForm> {
    let mut p = Parser { toks: tokenize(s)?, pos: 0 };
    let f = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use quasihecke::exactq::Q;

    fn show(s: &str, p: i64) -> String {
        parse_form(s).unwrap().expand(Q::from_integer(p)).unwrap().terms_to_string()
    }

    #[test]
    fn literals_and_operators() {
        assert_eq!(show("1/2", 3), "1/2");
        assert_eq!(show("2*G4 - G4", 3), show("G4", 3));
        assert_eq!(show("(G4)^2", 4), show("G4*G4", 4));
        assert_eq!(show("-G4 + G4", 4), "0");
        assert_eq!(show("eisn(4,0,0,1)", 3), show("2*G4", 3));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_form("G4 + G6"), Err(Error::WeightMismatch(4, 6))));
        assert!(matches!(parse_form("EISN(5,0,1,2)"), Err(Error::OddWeight(5))));
        assert!(matches!(parse_form("G8"), Err(Error::Parse(_))));
        assert!(matches!(parse_form("G4 +"), Err(Error::Parse(_))));
        assert!(matches!(parse_form("1/0"), Err(Error::Parse(_))));
        assert!(matches!(parse_form("G4 G4"), Err(Error::Parse(_))));
    }
}
