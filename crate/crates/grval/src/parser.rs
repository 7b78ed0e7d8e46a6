//! Expression parser for noncommutative polynomials with exact scalar
//! literals. Grammar (whitespace-insensitive, multiplication explicit):
//!
//! ```text
//! expr   := term  (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := ('+' | '-')* power
//! power  := atom ('^' INT)*
//! atom   := INT | IDENT | '(' expr ')'
//! ```
//!
//! `IDENT` resolves to a generator of the target algebra or to a field
//! symbol (`t` over rational function fields). Division requires a nonzero
//! scalar divisor, which is how fraction literals like `1/2` or
//! `t^2/(1+t)` parse. Exponents are nonnegative integer literals. Factor
//! order is preserved: `x*y` and `y*x` are different polynomials.

use std::fmt;

use num_bigint::BigInt;

use crate::field::Field;
use crate::ncpoly::{FreeAlgebra, FreePoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownGenerator(String),
}

/// Parse failure with the byte offset it was detected at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error at byte {}: {}", self.pos, msg),
            ParseErrorKind::UnknownGenerator(name) => {
                write!(f, "unknown generator {:?} at byte {}", name, self.pos)
            }
        }
    }
}

impl std::error::Error for ParseError {}

fn syntax(pos: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        pos,
        kind: ParseErrorKind::Syntax(msg.into()),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            c if c.is_ascii_whitespace() => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let lit: BigInt = src[start..i].parse().expect("digits parse as BigInt");
                out.push((start, Tok::Int(lit)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
            }
            other => return Err(syntax(i, format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    algebra: &'a FreeAlgebra<F>,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl<'a, F: Field> Parser<'a, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<FreePoly<F>, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.algebra.add(&acc, &rhs).expect("same algebra");
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.algebra.sub(&acc, &rhs).expect("same algebra");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<FreePoly<F>, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = self.algebra.mul(&acc, &rhs).expect("same algebra");
                }
                Some(Tok::Slash) => {
                    let at = self.here();
                    self.bump();
                    let rhs = self.factor()?;
                    let field = self.algebra.field();
                    let Some(divisor) = rhs.as_scalar(field) else {
                        return Err(syntax(at, "divisor must be a scalar"));
                    };
                    let Some(inv) = field.inv(&divisor) else {
                        return Err(syntax(at, "division by zero"));
                    };
                    acc = self.algebra.scale(&inv, &acc);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<FreePoly<F>, ParseError> {
        let mut negate = false;
        loop {
            match self.peek() {
                Some(Tok::Minus) => {
                    negate = !negate;
                    self.bump();
                }
                Some(Tok::Plus) => {
                    self.bump();
                }
                _ => break,
            }
        }
        let p = self.power()?;
        Ok(if negate { self.algebra.neg(&p) } else { p })
    }

    fn power(&mut self) -> Result<FreePoly<F>, ParseError> {
        let mut base = self.atom()?;
        while let Some(Tok::Caret) = self.peek() {
            self.bump();
            let at = self.here();
            match self.bump() {
                Some((_, Tok::Int(e))) => {
                    let e = u32::try_from(&e).map_err(|_| syntax(at, "exponent out of range"))?;
                    if e > 1 << 16 {
                        return Err(syntax(at, "exponent out of range"));
                    }
                    let mut acc = self.algebra.one();
                    for _ in 0..e {
                        acc = self.algebra.mul(&acc, &base).expect("same algebra");
                    }
                    base = acc;
                }
                _ => return Err(syntax(at, "exponent must be a nonnegative integer")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FreePoly<F>, ParseError> {
        let at = self.here();
        match self.bump() {
            Some((_, Tok::Int(n))) => {
                Ok(self.algebra.constant(self.algebra.field().from_bigint(&n)))
            }
            Some((_, Tok::Ident(name))) => {
                if let Some(i) = self.algebra.gen_names().iter().position(|g| *g == name) {
                    return Ok(self.algebra.gen(i));
                }
                if let Some(c) = self.algebra.field().symbol(&name) {
                    return Ok(self.algebra.constant(c));
                }
                Err(ParseError {
                    pos: at,
                    kind: ParseErrorKind::UnknownGenerator(name),
                })
            }
            Some((_, Tok::LParen)) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((_, Tok::RParen)) => Ok(inner),
                    Some((p, _)) => Err(syntax(p, "expected ')'")),
                    None => Err(syntax(self.end, "expected ')'")),
                }
            }
            Some((p, t)) => Err(syntax(p, format!("unexpected token {t:?}"))),
            None => Err(syntax(self.end, "unexpected end of input")),
        }
    }
}

/// Parses `src` into a canonical polynomial of the given algebra.
pub fn parse_poly<F: Field>(
    src: &str,
    algebra: &FreeAlgebra<F>,
) -> Result<FreePoly<F>, ParseError> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        algebra,
        toks,
        pos: 0,
        end: src.len(),
    };
    let out = p.expr()?;
    match p.bump() {
        None => Ok(out),
        Some((pos, t)) => Err(syntax(pos, format!("unexpected token {t:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::ncpoly::Word;
    use crate::valued_field::TAdic;

    fn weyl_names() -> FreeAlgebra<Rationals> {
        FreeAlgebra::new(Rationals, vec!["x".into(), "D".into()]).unwrap()
    }

    #[test]
    fn parses_weyl_relation() {
        let a = weyl_names();
        let p = a.parse("D*x - x*D - 1").unwrap();
        assert_eq!(p.num_terms(), 3);
        let field = Rationals;
        assert_eq!(p.coeff(&Word::from_letters(vec![1, 0])), Some(&field.one()));
        assert_eq!(
            p.coeff(&Word::from_letters(vec![0, 1])),
            Some(&field.from_int(-1))
        );
        assert_eq!(p.coeff(&Word::empty()), Some(&field.from_int(-1)));
    }

    #[test]
    fn collects_like_terms() {
        let a = weyl_names();
        let p = a.parse("(1/2)*x + x").unwrap();
        assert_eq!(p.num_terms(), 1);
        let field = Rationals;
        let three_halves = field.div(&field.from_int(3), &field.from_int(2)).unwrap();
        assert_eq!(p.coeff(&Word::single(0)), Some(&three_halves));
    }

    #[test]
    fn double_star_is_a_syntax_error() {
        let a = FreeAlgebra::new(Rationals, vec!["x".into(), "y".into()]).unwrap();
        let err = a.parse("x**y").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
        assert_eq!(err.pos, 2);
    }

    #[test]
    fn unknown_generator_reported() {
        let a = weyl_names();
        let err = a.parse("x*q").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownGenerator("q".into()));
        assert_eq!(err.pos, 2);
    }

    #[test]
    fn division_rules() {
        let a = weyl_names();
        assert!(a.parse("x/2").is_ok());
        assert!(matches!(
            a.parse("x/D").unwrap_err().kind,
            ParseErrorKind::Syntax(_)
        ));
        assert!(matches!(
            a.parse("x/0").unwrap_err().kind,
            ParseErrorKind::Syntax(_)
        ));
        assert!(matches!(
            a.parse("x^-1").unwrap_err().kind,
            ParseErrorKind::Syntax(_)
        ));
    }

    #[test]
    fn noncommutative_order_preserved() {
        let a = FreeAlgebra::new(Rationals, vec!["x".into(), "y".into()]).unwrap();
        let xy = a.parse("x*y").unwrap();
        let yx = a.parse("y*x").unwrap();
        assert_ne!(xy, yx);
    }

    #[test]
    fn t_symbol_in_function_fields() {
        let f3 = PrimeField::new(3).unwrap();
        let k = TAdic::new(f3);
        let a = FreeAlgebra::new(k.clone(), vec!["x".into(), "y".into()]).unwrap();
        let p = a.parse("t^2/(1+t)*x + 2*y").unwrap();
        assert_eq!(p.num_terms(), 2);
        // the same name cannot also be a generator
        assert!(FreeAlgebra::new(k, vec!["t".into()]).is_err());
        // over the rationals, t is just an unknown generator
        let err = weyl_names().parse("t*x").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::UnknownGenerator(_)));
    }

    #[test]
    fn print_parse_fixed_point() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);

        fn roundtrip<F: crate::field::Field>(
            a: &FreeAlgebra<F>,
            rng: &mut rand_chacha::ChaCha8Rng,
        ) {
            use rand::Rng;
            for _ in 0..40 {
                let mut p = a.zero();
                for _ in 0..rng.random_range(0..5) {
                    let len = rng.random_range(0..4);
                    let w = Word::from_letters(
                        (0..len).map(|_| rng.random_range(0..a.arity())).collect(),
                    );
                    let c = a.field().random(rng, 9);
                    p = a.add(&p, &a.monomial(w, c)).unwrap();
                }
                let s = a.format(&p);
                let q = a.parse(&s).unwrap_or_else(|e| panic!("reparse {s:?}: {e}"));
                assert_eq!(q, p, "string was {s:?}");
                assert_eq!(a.format(&q), s);
            }
        }

        roundtrip(
            &FreeAlgebra::new(Rationals, vec!["x".into(), "y".into()]).unwrap(),
            &mut rng,
        );
        roundtrip(
            &FreeAlgebra::new(PrimeField::new(5).unwrap(), vec!["x".into(), "y".into()]).unwrap(),
            &mut rng,
        );
        roundtrip(
            &FreeAlgebra::new(TAdic::new(Rationals), vec!["x".into(), "y".into()]).unwrap(),
            &mut rng,
        );
        roundtrip(
            &FreeAlgebra::new(
                TAdic::new(PrimeField::new(3).unwrap()),
                vec!["x".into(), "y".into()],
            )
            .unwrap(),
            &mut rng,
        );
    }
}
