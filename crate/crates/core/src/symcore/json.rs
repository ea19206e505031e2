//! Shared textual formats: exact scalars as strings, rational functions as
//! `{num: [...], den: [...]}` JSON objects.
//!
//! The scalar grammar is a signed sum of terms `rat`, `rat*i`, `rat*sqrt(d)`
//! and `rat*i*sqrt(d)`, with `rat` an integer or `n/d` fraction. This is the
//! same shape `Display` produces, so values round-trip.

use super::{ExactScalar, Poly, Rat, RationalFunction, SymError};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};
use std::str::FromStr;

/// Parse one exact scalar from the term-sum grammar.
pub fn parse_scalar(s: &str) -> Result<ExactScalar, SymError> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(SymError::Parse("empty scalar".into()));
    }
    let mut acc = ExactScalar::zero();
    let mut term = String::new();
    let mut sign = 1i64;
    let mut chars = s.chars().peekable();
    // Leading sign
    if let Some(&c) = chars.peek() {
        if c == '-' {
            sign = -1;
            chars.next();
        } else if c == '+' {
            chars.next();
        }
    }
    let mut depth = 0usize;
    for c in chars {
        match c {
            '(' => {
                depth += 1;
                term.push(c);
            }
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| SymError::Parse("unbalanced parentheses".into()))?;
                term.push(c);
            }
            '+' | '-' if depth == 0 => {
                acc = acc.add_ref(&parse_term(&term, sign)?);
                term.clear();
                sign = if c == '-' { -1 } else { 1 };
            }
            _ => term.push(c),
        }
    }
    if term.is_empty() {
        return Err(SymError::Parse("dangling sign".into()));
    }
    acc = acc.add_ref(&parse_term(&term, sign)?);
    Ok(acc)
}

fn parse_term(term: &str, sign: i64) -> Result<ExactScalar, SymError> {
    let mut rat = Rat::from_integer(BigInt::from(sign));
    let mut has_i = false;
    let mut disc: Option<u64> = None;
    let mut saw_number = false;
    for piece in term.split('*') {
        if piece.is_empty() {
            return Err(SymError::Parse(format!("empty factor in '{term}'")));
        }
        if piece == "i" {
            if has_i {
                return Err(SymError::Parse("repeated i".into()));
            }
            has_i = true;
        } else if let Some(d) = piece.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            let d: u64 = d
                .parse()
                .map_err(|_| SymError::Parse(format!("bad discriminant '{d}'")))?;
            if disc.is_some() {
                return Err(SymError::Parse("repeated sqrt factor".into()));
            }
            disc = Some(d);
        } else {
            if saw_number {
                return Err(SymError::Parse(format!("two numeric factors in '{term}'")));
            }
            saw_number = true;
            rat *= parse_rat(piece)?;
        }
    }
    let zero = Rat::zero();
    let v = match (has_i, disc) {
        (false, None) => ExactScalar::from_rat(rat),
        (true, None) => ExactScalar::complex(zero, rat),
        (false, Some(d)) => ExactScalar::with_surd(zero.clone(), rat, zero.clone(), zero, d)?,
        (true, Some(d)) => ExactScalar::with_surd(zero.clone(), zero.clone(), zero, rat, d)?,
    };
    Ok(v)
}

fn parse_rat(s: &str) -> Result<Rat, SymError> {
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n).map_err(|_| SymError::Parse(format!("bad integer '{n}'")))?;
        let d = BigInt::from_str(d).map_err(|_| SymError::Parse(format!("bad integer '{d}'")))?;
        if d.is_zero() {
            return Err(SymError::Parse("zero denominator".into()));
        }
        Ok(Rat::new(n, d))
    } else {
        let n = BigInt::from_str(s).map_err(|_| SymError::Parse(format!("bad integer '{s}'")))?;
        Ok(Rat::from_integer(n))
    }
}

/// `{num: [coeff strings...], den: [...]}`, ascending coefficients.
pub fn rational_function_to_json(f: &RationalFunction<ExactScalar>) -> Value {
    let fmt = |p: &Poly<ExactScalar>| -> Value {
        Value::Array(p.coeffs().iter().map(|c| json!(c.to_string())).collect())
    };
    json!({ "num": fmt(f.num()), "den": fmt(f.den()) })
}

pub fn rational_function_from_json(v: &Value) -> Result<RationalFunction<ExactScalar>, SymError> {
    let read = |key: &str| -> Result<Poly<ExactScalar>, SymError> {
        let arr = v
            .get(key)
            .and_then(|a| a.as_array())
            .ok_or_else(|| SymError::Parse(format!("missing array '{key}'")))?;
        let mut coeffs = vec![];
        for c in arr {
            let s = c
                .as_str()
                .ok_or_else(|| SymError::Parse("coefficients must be strings".into()))?;
            coeffs.push(parse_scalar(s)?);
        }
        Ok(Poly::new(coeffs))
    };
    RationalFunction::new(read("num")?, read("den")?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_round_trip() {
        for s in [
            "0",
            "-2",
            "3/4",
            "1/2+3/2*i",
            "1/2-3/4*sqrt(7)+2*i",
            "-1*i*sqrt(2)",
            "5-i",
        ] {
            let v = parse_scalar(s).unwrap();
            let back = parse_scalar(&v.to_string()).unwrap();
            assert_eq!(v, back, "round trip failed for {s}");
        }
    }

    #[test]
    fn ratfun_round_trip() {
        let f = RationalFunction::new(
            Poly::new(vec![
                parse_scalar("1/2").unwrap(),
                parse_scalar("-3+i").unwrap(),
            ]),
            Poly::from_ints(&[0, 0, 1]),
        )
        .unwrap();
        let v = rational_function_to_json(&f);
        let g = rational_function_from_json(&v).unwrap();
        assert_eq!(f, g);
    }
}
