//! Laurent polynomials in `t` with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, rat, ExtRational, Rational};

/// Sparse Laurent polynomial: exponent → nonzero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Rational, exponent: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, &c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coefficient(&self, exponent: i64) -> Rational {
        self.terms.get(&exponent).cloned().unwrap_or_else(Rational::zero)
    }

    /// Lowest exponent with a nonzero coefficient; `+∞` for zero.
    pub fn valuation(&self) -> ExtRational {
        match self.terms.keys().next() {
            Some(&e) => ExtRational::Finite(rat(e)),
            None => ExtRational::Infinity,
        }
    }

    fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, exponent: i64, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponent).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    /// `self / divisor` when the division is exact in `Q[t, t^-1]`.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        let (dlo, dhi) = (divisor.min_exp()?, divisor.max_exp()?);
        if self.is_zero() {
            return Some(Self::zero());
        }
        let lead = &divisor.terms[&dhi];
        let mut rem = self.clone();
        let mut quotient = Self::zero();
        // Classical long division from the top after normalizing both lowest exponents to 0.
        let lo = rem.min_exp().unwrap();
        while let Some(top) = rem.max_exp() {
            if top - dhi < lo - dlo {
                return None;
            }
            let c = &rem.terms[&top] / lead;
            let shift = top - dhi;
            for (e, dc) in divisor.terms() {
                rem.add_term(e + shift, &-(&c * dc));
            }
            quotient.add_term(shift, &c);
        }
        Some(quotient)
    }

    /// Parses sums of `c`, `c*t^k`, `t^k`, `c*t` or `t`, e.g. `1/2 - 3*t^-1 + t^2`.
    pub fn parse(text: &str) -> Result<Self> {
        let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(Error::parse(0, "empty polynomial"));
        }
        let mut parser = PolyParser { chars, pos: 0, text_len: text.len() };
        let mut poly = Self::zero();
        let mut first = true;
        while !parser.done() {
            let negative = match parser.peek() {
                Some('+') => {
                    parser.pos += 1;
                    false
                }
                Some('-') => {
                    parser.pos += 1;
                    true
                }
                _ if first => false,
                _ => return Err(parser.error("expected '+' or '-' between terms")),
            };
            first = false;
            let (exp, mut coeff) = parser.term()?;
            if negative {
                coeff = -coeff;
            }
            poly.add_term(exp, &coeff);
        }
        Ok(poly)
    }
}

struct PolyParser {
    chars: Vec<(usize, char)>,
    pos: usize,
    text_len: usize,
}

impl PolyParser {
    fn done(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map(|(o, _)| *o).unwrap_or(self.text_len)
    }

    fn error(&self, msg: &str) -> Error {
        Error::parse(self.offset(), msg)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            out.push(c);
            self.pos += 1;
        }
        out
    }

    fn term(&mut self) -> Result<(i64, Rational)> {
        let mut coeff = Rational::one();
        let mut has_coeff = false;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let start = self.offset();
            let numer = self.take_while(|c| c.is_ascii_digit());
            let mut literal = numer;
            if self.peek() == Some('/') {
                self.pos += 1;
                let denom = self.take_while(|c| c.is_ascii_digit());
                if denom.is_empty() {
                    return Err(self.error("expected denominator after '/'"));
                }
                literal = format!("{literal}/{denom}");
            }
            coeff = parse_rational(&literal).map_err(|e| match e {
                Error::Parse { message, .. } => Error::parse(start, message),
                other => other,
            })?;
            has_coeff = true;
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                return Ok((0, coeff));
            }
        }
        if self.peek() != Some('t') {
            return Err(self.error(if has_coeff { "expected 't' after '*'" } else { "expected a coefficient or 't'" }));
        }
        self.pos += 1;
        let mut exponent = 1i64;
        if self.peek() == Some('^') {
            self.pos += 1;
            let mut sign = 1i64;
            match self.peek() {
                Some('-') => {
                    sign = -1;
                    self.pos += 1;
                }
                Some('+') => self.pos += 1,
                _ => {}
            }
            let digits = self.take_while(|c| c.is_ascii_digit());
            if digits.is_empty() {
                return Err(self.error("expected an integer exponent"));
            }
            exponent = sign * digits.parse::<i64>().map_err(|_| self.error("exponent out of range"))?;
        }
        Ok((exponent, coeff))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let magnitude = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (*e, magnitude.is_one()) {
                (0, _) => write!(f, "{}", format_rational(&magnitude))?,
                (1, true) => f.write_str("t")?,
                (e, true) => write!(f, "t^{e}")?,
                (1, false) => write!(f, "{}*t", format_rational(&magnitude))?,
                (e, false) => write!(f, "{}*t^{e}", format_rational(&magnitude))?,
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, &-c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in rhs.terms() {
                out.add_term(a + b, &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn p(text: &str) -> LaurentPoly {
        LaurentPoly::parse(text).unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(p("t^2 - t^3").valuation(), ExtRational::from(2));
        assert_eq!(LaurentPoly::zero().valuation(), ExtRational::Infinity);
        assert_eq!(p("3*t^-1 + 1").valuation(), ExtRational::from(-1));
    }

    #[test]
    fn parse_grammar() {
        let poly = p("1/2 - 3*t^-1 + t^2");
        assert_eq!(poly.coefficient(0), ratio(1, 2));
        assert_eq!(poly.coefficient(-1), rat(-3));
        assert_eq!(poly.coefficient(2), rat(1));
        assert_eq!(p(" - t + 2 * t ^ 1 "), p("t"));
        assert_eq!(p("t - t"), LaurentPoly::zero());
        assert_eq!(p("0"), LaurentPoly::zero());
        assert_eq!(p("-3/6*t^+4"), LaurentPoly::monomial(ratio(-1, 2), 4));
        for bad in ["", "1 t", "t^", "2*", "x", "1/", "t^-"] {
            assert!(LaurentPoly::parse(bad).is_err(), "{bad:?} should not parse");
        }
        match LaurentPoly::parse("1 + 2*s") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn display_round_trip() {
        for text in ["1/2 - 3*t^-1 + t^2", "-t", "0", "7*t^3 - 1"] {
            let poly = p(text);
            assert_eq!(p(&poly.to_string()), poly);
        }
        assert_eq!(p("t^2 - 1 - 3*t^-1").to_string(), "-3*t^-1 - 1 + t^2");
    }

    #[test]
    fn exact_division() {
        let a = p("1 + t");
        let b = p("t^-1 - 2*t^3");
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&b), Some(a.clone()));
        assert_eq!(p("1 + t^2").div_exact(&p("1 + t")), None);
        assert_eq!(a.div_exact(&LaurentPoly::zero()), None);
        assert_eq!(LaurentPoly::zero().div_exact(&a), Some(LaurentPoly::zero()));
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((-3i64..4, -4i64..5), 0..4)
            .prop_map(|terms| LaurentPoly::from_terms(terms.into_iter().map(|(e, c)| (e, rat(c)))))
    }

    proptest! {
        #[test]
        fn valuation_is_multiplicative(f in arb_poly(), g in arb_poly()) {
            prop_assert_eq!((&f * &g).valuation(), f.valuation() + g.valuation());
        }

        #[test]
        fn valuation_of_sum_is_at_least_min(f in arb_poly(), g in arb_poly()) {
            let bound = f.valuation().min(g.valuation());
            prop_assert!((&f + &g).valuation() >= bound);
        }

        #[test]
        fn product_divides_back(f in arb_poly(), g in arb_poly()) {
            prop_assume!(!g.is_zero());
            prop_assert_eq!((&f * &g).div_exact(&g), Some(f));
        }
    }
}
