//! Exact expressions such as `2`, `3/2`, `1.5`, `sqrt(3)`, `2*sqrt(3)`
//! or `(sqrt(3) + 1)/2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use super::{QField, RadicalSum};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected {found} at position {pos} in {input:?}")]
    Unexpected { input: String, pos: usize, found: String },
    #[error("square root of a non-field value in {0:?}")]
    NestedRadical(String),
    #[error("square root of a negative value in {0:?}")]
    Negative(String),
    #[error("division by a zero or non-field value in {0:?}")]
    BadDivisor(String),
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn unexpected(&self) -> ParseError {
        ParseError::Unexpected {
            input: self.src.to_string(),
            pos: self.pos,
            found: match self.chars.get(self.pos) {
                Some(c) => format!("{c:?}"),
                None => "end of input".into(),
            },
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn expr(&mut self) -> Result<RadicalSum, ParseError> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RadicalSum, ParseError> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' {
                &acc * &rhs
            } else {
                let inv = rhs
                    .as_field()
                    .and_then(|q| q.inv())
                    .ok_or_else(|| ParseError::BadDivisor(self.src.to_string()))?;
                acc.scale(&inv)
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RadicalSum, ParseError> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.atom()
    }

    fn sqrt_arg(&mut self) -> Result<RadicalSum, ParseError> {
        let inner = if self.peek() == Some('(') {
            self.pos += 1;
            let e = self.expr()?;
            self.expect(')')?;
            e
        } else {
            self.atom()?
        };
        let q = inner
            .as_field()
            .ok_or_else(|| ParseError::NestedRadical(self.src.to_string()))?;
        if q.is_negative() {
            return Err(ParseError::Negative(self.src.to_string()));
        }
        Ok(RadicalSum::sqrt_of(&q))
    }

    fn atom(&mut self) -> Result<RadicalSum, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('√') => {
                self.pos += 1;
                self.sqrt_arg()
            }
            Some('s') => {
                let word: String = self.chars[self.pos..].iter().take(4).collect();
                if word != "sqrt" {
                    return Err(self.unexpected());
                }
                self.pos += 4;
                if self.peek() != Some('(') {
                    return Err(self.unexpected());
                }
                self.sqrt_arg()
            }
            Some(c) if c.is_ascii_digit() => Ok(RadicalSum::from_field(QField::from_rational(self.number()))),
            _ => Err(self.unexpected()),
        }
    }

    fn number(&mut self) -> BigRational {
        let digits = |p: &mut Self| {
            let start = p.pos;
            while p.chars.get(p.pos).is_some_and(|c| c.is_ascii_digit()) {
                p.pos += 1;
            }
            p.chars[start..p.pos].iter().collect::<String>()
        };
        let whole: BigInt = digits(self).parse().unwrap();
        let mut value = BigRational::from(whole);
        if self.chars.get(self.pos) == Some(&'.') {
            self.pos += 1;
            let frac = digits(self);
            if !frac.is_empty() {
                let den = num_traits::pow(BigInt::from(10), frac.len());
                value += BigRational::new(frac.parse().unwrap(), den);
            }
        }
        value
    }
}

/// Parses an exact expression built from integers, decimals, `sqrt`, `√`,
/// `+ - * /` and parentheses.
pub fn parse_radical(s: &str) -> Result<RadicalSum, ParseError> {
    let mut p = Parser {
        src: s,
        chars: s.chars().collect(),
        pos: 0,
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.unexpected());
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn sqrt(n: i64) -> RadicalSum {
        RadicalSum::sqrt_of(&QField::from_int(n))
    }

    #[test]
    fn forms() {
        assert_eq!(parse_radical("2").unwrap(), RadicalSum::from_int(2));
        assert_eq!(parse_radical("3/2").unwrap(), parse_radical("1.5").unwrap());
        assert_eq!(parse_radical("sqrt(3)").unwrap(), sqrt(3));
        assert_eq!(parse_radical("√3").unwrap(), sqrt(3));
        assert_eq!(parse_radical("2*sqrt(3)").unwrap(), sqrt(12));
        assert_eq!(parse_radical("sqrt(13)").unwrap(), sqrt(13));
        assert_eq!(parse_radical(" sqrt(11/4) ").unwrap(), parse_radical("sqrt(11)/2").unwrap());
        assert_eq!(parse_radical("1 + sqrt(3) - 1").unwrap(), sqrt(3));
        assert_eq!(
            parse_radical("0.25").unwrap(),
            RadicalSum::from_field(QField::from_rational(rat(1, 4)))
        );
    }

    #[test]
    fn rejects() {
        assert!(matches!(parse_radical("sqrt(-1)"), Err(ParseError::Negative(_))));
        assert!(matches!(parse_radical("sqrt(sqrt(5))"), Err(ParseError::NestedRadical(_))));
        assert!(matches!(parse_radical("1/0"), Err(ParseError::BadDivisor(_))));
        assert!(matches!(parse_radical("1/sqrt(5)"), Err(ParseError::BadDivisor(_))));
        for bad in ["", "2x", "sqr(2)", "(1", "1 +", "sqrt 2"] {
            assert!(matches!(parse_radical(bad), Err(ParseError::Unexpected { .. })), "{bad}");
        }
    }
}
