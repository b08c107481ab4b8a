//! Text form of k-forms: `e123 + 1/2*e257 - 2*e157`, single-digit indices.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::form::{indices_of, KForm};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, Scalar, Q};

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn digits(&mut self) -> &'a [u8] {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.text[start..self.pos]
    }
}

fn to_int(digits: &[u8]) -> BigInt {
    core::str::from_utf8(digits).expect("ascii digits").parse().expect("digits parse")
}

/// Parses a form literal. `degree` is required only to type a literal `0`.
pub fn parse_form(text: &str, dim: usize, degree: Option<usize>) -> Result<KForm> {
    let mut c = Cursor {
        text: text.as_bytes(),
        pos: 0,
    };
    let mut terms: Vec<(Vec<usize>, Q, usize)> = Vec::new();
    let mut first = true;
    loop {
        c.skip_ws();
        if c.peek().is_none() {
            if first {
                return Err(c.err("empty form literal"));
            }
            break;
        }
        let mut negative = false;
        match c.peek() {
            Some(b'+') => c.pos += 1,
            Some(b'-') => {
                negative = true;
                c.pos += 1;
            }
            _ if !first => return Err(c.err("expected '+' or '-'")),
            _ => {}
        }
        c.skip_ws();
        let start = c.pos;
        let (coeff, idx) = parse_term(&mut c, dim)?;
        let coeff = if negative { -coeff } else { coeff };
        if let Some(idx) = idx {
            terms.push((idx, coeff, start));
        } else if !coeff.is_zero() {
            return Err(Error::Parse {
                position: start,
                message: "constant terms must be 0".into(),
            });
        }
        first = false;
    }
    let deg = match (terms.first(), degree) {
        (Some((idx, _, _)), _) => idx.len(),
        (None, Some(d)) => d,
        (None, None) => 0,
    };
    if let Some(d) = degree {
        if d != deg {
            return Err(Error::Degree {
                expected: d,
                found: deg,
            });
        }
    }
    let mut form = KForm::zero(dim, deg);
    for (idx, coeff, pos) in terms {
        if idx.len() != deg {
            return Err(Error::Parse {
                position: pos,
                message: format!("term of degree {} in a {deg}-form", idx.len()),
            });
        }
        form = form.add(&KForm::monomial(dim, &idx, Scalar::Rational(coeff)));
    }
    Ok(form)
}

/// One term: `[coeff*][e]digits`, `coeff`, or `0`. Returns the coefficient and
/// the 0-based indices (None for a bare number).
fn parse_term(c: &mut Cursor<'_>, dim: usize) -> Result<(Q, Option<Vec<usize>>)> {
    let mut coeff = Q::one();
    let start = c.pos;
    match c.peek() {
        Some(b'e') => {
            c.pos += 1;
            let d = c.digits();
            if d.is_empty() {
                return Err(c.err("expected index digits after 'e'"));
            }
            return Ok((coeff, Some(indices(d, start + 1, dim)?)));
        }
        Some(ch) if ch.is_ascii_digit() => {}
        _ => return Err(c.err("expected a coefficient or a basis monomial")),
    }
    let num = c.digits();
    c.skip_ws();
    let has_slash = c.peek() == Some(b'/');
    let has_star = c.peek() == Some(b'*');
    if !has_slash && !has_star && c.peek() != Some(b'e') {
        // Bare digits: either `0` or an index string such as `12`.
        if num == b"0" {
            return Ok((Q::from_integer(BigInt::from(0)), None));
        }
        return Ok((coeff, Some(indices(num, start, dim)?)));
    }
    coeff = Q::from_integer(to_int(num));
    if has_slash {
        c.pos += 1;
        c.skip_ws();
        let den = c.digits();
        if den.is_empty() {
            return Err(c.err("expected a denominator"));
        }
        let den = to_int(den);
        if den.is_zero() {
            return Err(c.err("zero denominator"));
        }
        coeff = Q::new(to_int(num), den);
        c.skip_ws();
    }
    if c.peek() == Some(b'*') {
        c.pos += 1;
        c.skip_ws();
    }
    let istart = c.pos;
    if c.peek() == Some(b'e') {
        c.pos += 1;
    }
    let d = c.digits();
    if d.is_empty() {
        if istart == c.pos {
            // A bare rational such as `0/1`.
            return Ok((coeff, None));
        }
        return Err(c.err("expected index digits"));
    }
    Ok((coeff, Some(indices(d, c.pos - d.len(), dim)?)))
}

fn indices(digits: &[u8], pos: usize, dim: usize) -> Result<Vec<usize>> {
    digits
        .iter()
        .enumerate()
        .map(|(k, &ch)| {
            let i = (ch - b'0') as usize;
            if i == 0 || i > dim {
                Err(Error::Parse {
                    position: pos + k,
                    message: format!("index {i} outside 1..={dim}"),
                })
            } else {
                Ok(i - 1)
            }
        })
        .collect()
}

fn index_label(idx: &[usize], dim: usize) -> String {
    let mut s = String::new();
    if dim <= 9 {
        for i in idx {
            let _ = write!(s, "{}", i + 1);
        }
    } else {
        s.push('(');
        for (k, i) in idx.iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            let _ = write!(s, "{}", i + 1);
        }
        s.push(')');
    }
    s
}

/// Renders a form as a literal; polynomial coefficients use `names`.
pub fn format_form(form: &KForm, names: &[String]) -> String {
    let mut s = String::new();
    let terms = form.terms();
    if terms.is_empty() {
        s.push('0');
        return s;
    }
    for (k, (mask, c)) in terms.iter().enumerate() {
        let idx = indices_of(*mask);
        let label = index_label(&idx, form.dim());
        let (neg, body) = match c {
            Scalar::Rational(x) => {
                let mag = x.abs();
                let body = if mag.is_one() && !idx.is_empty() {
                    String::new()
                } else if idx.is_empty() {
                    format_rational(&mag)
                } else {
                    format!("{}*", format_rational(&mag))
                };
                (x.is_negative(), body)
            }
            other => {
                let text = other.display_with(names);
                (false, if idx.is_empty() { format!("({text})") } else { format!("({text})*") })
            }
        };
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        s.push_str(&body);
        if !idx.is_empty() {
            s.push('e');
            s.push_str(&label);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn parses_literals_with_fractions_and_wedges() {
        let f = parse_form("e123 + 1/2*e257 - 2*e157", 7, None).unwrap();
        assert_eq!(f.degree(), 3);
        assert_eq!(f.coeff(&[1, 4, 6]), Scalar::Rational(q(1, 2)));
        assert_eq!(f.coeff(&[0, 4, 6]), Scalar::int(-2));
        assert_eq!(format_form(&f, &[]), "e123 - 2*e157 + 1/2*e257");
    }

    #[test]
    fn structure_equation_terms() {
        let f = parse_form("46/51*14+15+23", 7, Some(2)).unwrap();
        assert_eq!(f.coeff(&[0, 3]), Scalar::Rational(q(46, 51)));
        assert_eq!(f.len(), 3);
        let z = parse_form("0", 7, Some(2)).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.degree(), 2);
    }

    #[test]
    fn unsorted_and_repeated_indices() {
        let f = parse_form("e21", 3, None).unwrap();
        assert_eq!(f, KForm::basis(3, &[0, 1]).neg());
        assert!(parse_form("e11", 3, None).unwrap().is_zero());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_form("e12 + e18", 7, None) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 8),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_form("e12 e13", 7, None), Err(Error::Parse { position: 4, .. })));
        assert!(parse_form("e12 + e123", 7, None).is_err());
        assert!(parse_form("", 7, None).is_err());
        assert!(parse_form("e1", 7, Some(2)).is_err());
    }

    #[test]
    fn round_trip() {
        let text = "-e1237 - 1/2*e1256 - e1346 - 1/2*e2345 - e4567";
        let f = parse_form(text, 7, None).unwrap();
        assert_eq!(format_form(&f, &[]), text);
    }
}
