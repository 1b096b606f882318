//! Text syntax for canonical Gauss maps.
//!
//! ```text
//! expr        := "q^" int [ "*" "exp(" poly ")" ] | "exp(" poly ")"
//! poly        := [sign] term (("+" | "-") term)*
//! term        := coefficient [ "*" monomial | "/q" [ "^" uint ] ] | monomial
//! monomial    := "q" [ "^" int ] | "1/q" [ "^" uint ]
//! coefficient := real | "(" [sign] real ("+" | "-") real "i" ")"
//! ```
//!
//! Whitespace between tokens is ignored. Both `-` and U+2212 are accepted as
//! minus signs. Columns in errors are 1-based byte offsets.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use thiserror::Error;

use crate::complex_core::GaussMap;

/// Largest accepted `|k|` in the exponent polynomial.
pub const MAX_INDEX: i64 = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at column {column}: expected {expected}")]
    Syntax { column: usize, expected: &'static str },
    #[error("winding number of the Gauss map is zero")]
    WindingZero,
    #[error("index {index} at column {column} is out of range")]
    IndexOverflow { column: usize, index: i64 },
    #[error("invalid Gauss map: {0}")]
    Invalid(String),
}

impl ParseError {
    pub fn column(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { column, .. } | ParseError::IndexOverflow { column, .. } => Some(*column),
            _ => None,
        }
    }
}

type PResult<T> = Result<T, ParseError>;

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Self { bytes: text.as_bytes(), pos: 0 }
    }

    fn error<T>(&self, expected: &'static str) -> PResult<T> {
        Err(ParseError::Syntax { column: self.pos + 1, expected })
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect_byte(&mut self, b: u8, expected: &'static str) -> PResult<()> {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(expected)
        }
    }

    fn expect_keyword(&mut self, word: &str, expected: &'static str) -> PResult<()> {
        self.skip_ws();
        for &b in word.as_bytes() {
            if self.peek() != Some(b) {
                return self.error(expected);
            }
            self.pos += 1;
        }
        Ok(())
    }

    /// Consumes a sign if present; returns `Some(true)` for minus.
    fn sign(&mut self) -> Option<bool> {
        self.skip_ws();
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                Some(false)
            }
            Some(b'-') => {
                self.pos += 1;
                Some(true)
            }
            Some(0xE2) if self.bytes[self.pos..].starts_with("\u{2212}".as_bytes()) => {
                self.pos += 3;
                Some(true)
            }
            _ => None,
        }
    }

    fn minus(&mut self) -> bool {
        self.skip_ws();
        let save = self.pos;
        match self.sign() {
            Some(true) => true,
            _ => {
                self.pos = save;
                false
            }
        }
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        self.pos - start
    }

    /// Signed integer; returns the value and the column where it starts.
    fn int(&mut self, allow_sign: bool, bound: i64) -> PResult<i64> {
        self.skip_ws();
        let start = self.pos;
        let negative = allow_sign && self.minus();
        self.skip_ws();
        let digit_start = self.pos;
        if self.digits() == 0 {
            return self.error("digit");
        }
        let text = std::str::from_utf8(&self.bytes[digit_start..self.pos]).expect("ascii digits");
        let column = start + 1;
        let magnitude: i64 = match text.parse() {
            Ok(m) => m,
            Err(_) => return Err(ParseError::IndexOverflow { column, index: i64::MAX }),
        };
        let value = if negative { -magnitude } else { magnitude };
        if value.abs() > bound {
            return Err(ParseError::IndexOverflow { column, index: value });
        }
        Ok(value)
    }

    fn real(&mut self) -> PResult<f64> {
        self.skip_ws();
        let start = self.pos;
        let mut mantissa = self.digits();
        if self.peek() == Some(b'.') {
            self.pos += 1;
            mantissa += self.digits();
        }
        if mantissa == 0 {
            return self.error("number");
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.digits() == 0 {
                return self.error("exponent digit");
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii number");
        match text.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(ParseError::Syntax { column: start + 1, expected: "finite number" }),
        }
    }

    fn complex(&mut self) -> PResult<Complex64> {
        self.expect_byte(b'(', "'('")?;
        let re_negative = self.minus();
        let re = self.real()?;
        let im_negative = match self.sign() {
            Some(neg) => neg,
            None => return self.error("'+' or '-'"),
        };
        let im = self.real()?;
        self.expect_byte(b'i', "'i'")?;
        self.expect_byte(b')', "')'")?;
        let re = if re_negative { -re } else { re };
        let im = if im_negative { -im } else { im };
        Ok(Complex64::new(re, im))
    }

    /// `q [^ int]`, with the leading `q` already at the cursor.
    fn q_power(&mut self) -> PResult<i64> {
        self.expect_byte(b'q', "'q'")?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.int(true, MAX_INDEX)
        } else {
            Ok(1)
        }
    }

    /// `/q [^ uint]` yielding a negative index.
    fn reciprocal_power(&mut self) -> PResult<i64> {
        self.expect_byte(b'/', "'/'")?;
        self.expect_byte(b'q', "'q'")?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            Ok(-self.int(false, MAX_INDEX)?)
        } else {
            Ok(-1)
        }
    }

    fn monomial(&mut self) -> PResult<i64> {
        self.skip_ws();
        match self.peek() {
            Some(b'q') => self.q_power(),
            Some(b'1') => {
                self.pos += 1;
                self.reciprocal_power()
            }
            _ => self.error("monomial"),
        }
    }

    fn term(&mut self, negative: bool) -> PResult<(i64, Complex64)> {
        self.skip_ws();
        let (coeff, explicit) = match self.peek() {
            Some(b'q') => (Complex64::new(1.0, 0.0), false),
            Some(b'(') => (self.complex()?, true),
            Some(b) if b.is_ascii_digit() || b == b'.' => (Complex64::new(self.real()?, 0.0), true),
            _ => return self.error("term"),
        };
        let index = if !explicit {
            self.q_power()?
        } else {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    self.monomial()?
                }
                Some(b'/') => self.reciprocal_power()?,
                _ => 0,
            }
        };
        let coeff = if negative {
            // A real coefficient keeps its +0 imaginary part.
            if coeff.im == 0.0 && coeff.im.is_sign_positive() {
                Complex64::new(-coeff.re, coeff.im)
            } else {
                -coeff
            }
        } else {
            coeff
        };
        Ok((index, coeff))
    }

    fn poly(&mut self) -> PResult<BTreeMap<i32, Complex64>> {
        let mut coeffs: BTreeMap<i32, Complex64> = BTreeMap::new();
        let mut negative = self.minus();
        loop {
            let (k, c) = self.term(negative)?;
            coeffs.entry(k as i32).and_modify(|acc| *acc += c).or_insert(c);
            match self.sign() {
                Some(neg) => negative = neg,
                None => return Ok(coeffs),
            }
        }
    }

    fn exp_block(&mut self) -> PResult<BTreeMap<i32, Complex64>> {
        self.expect_keyword("exp", "'exp('")?;
        self.expect_byte(b'(', "'('")?;
        let coeffs = self.poly()?;
        self.expect_byte(b')', "')' or '+' or '-'")?;
        Ok(coeffs)
    }

    fn expr(&mut self) -> PResult<(i64, BTreeMap<i32, Complex64>)> {
        self.skip_ws();
        let result = match self.peek() {
            Some(b'q') => {
                self.pos += 1;
                self.expect_byte(b'^', "'^'")?;
                let n = self.int(true, i64::from(i32::MAX))?;
                self.skip_ws();
                if self.peek().is_none() {
                    return Ok((n, BTreeMap::new()));
                }
                self.expect_byte(b'*', "'*' or end of input")?;
                (n, self.exp_block()?)
            }
            Some(b'e') => (0, self.exp_block()?),
            _ => return self.error("'q^' or 'exp('"),
        };
        self.skip_ws();
        if self.peek().is_some() {
            return self.error("end of input");
        }
        Ok(result)
    }
}

/// Parses `text` as a Gauss map on a cylinder of circumference `f`.
pub fn parse_gauss_map(text: &str, circumference: f64) -> Result<GaussMap, ParseError> {
    let (n, coeffs) = Parser::new(text).expr()?;
    if n == 0 {
        return Err(ParseError::WindingZero);
    }
    GaussMap::new(n as i32, circumference, coeffs).map_err(|e| ParseError::Invalid(e.to_string()))
}

/// Canonical text: indices descending, shortest round-trip decimal coefficients.
pub fn format_gauss_map(g: &GaussMap) -> String {
    let mut out = format!("q^{}", g.winding());
    if g.coeffs().is_empty() {
        return out;
    }
    out.push_str(" * exp(");
    for (i, (&k, &c)) in g.coeffs().iter().rev().enumerate() {
        let real_form = c.im == 0.0 && c.im.is_sign_positive();
        let negative = real_form && c.re.is_sign_negative();
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if real_form {
            let _ = write!(out, "{:?}", c.re.abs());
        } else {
            let im_sign = if c.im.is_sign_negative() { '-' } else { '+' };
            let _ = write!(out, "({:?}{}{:?}i)", c.re, im_sign, c.im.abs());
        }
        match k {
            0 => {}
            1 => out.push_str("*q"),
            -1 => out.push_str("/q"),
            k if k > 0 => {
                let _ = write!(out, "*q^{k}");
            }
            k => {
                let _ = write!(out, "/q^{}", -k);
            }
        }
    }
    out.push(')');
    out
}
