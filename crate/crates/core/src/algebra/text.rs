//! Plain-text matrix format.
//!
//! ```text
//! # optional comments
//! q k n
//! poly c_e ... c_0        (only for non-prime q, optional)
//! g_11 g_12 ... g_1n
//! ...
//! g_k1 g_k2 ... g_kn
//! ```
//!
//! Entries are canonical integer encodings. Whitespace between tokens is free;
//! `#` starts a comment running to the end of the line.

use std::fmt::Write as _;

use super::{prime_power, AlgebraError, FieldSpec, Matrix};

fn parse_err(msg: impl Into<String>) -> AlgebraError {
    AlgebraError::Parse(msg.into())
}

fn num<'a>(tokens: &mut impl Iterator<Item = &'a str>, what: &str) -> Result<u64, AlgebraError> {
    let tok = tokens.next().ok_or_else(|| parse_err(format!("unexpected end of input, expected {what}")))?;
    tok.parse::<u64>().map_err(|_| parse_err(format!("expected {what}, found `{tok}`")))
}

pub fn parse_matrix(input: &str) -> Result<Matrix, AlgebraError> {
    let mut tokens =
        input.lines().map(|l| l.split('#').next().unwrap_or("")).flat_map(str::split_whitespace).peekable();

    let q = num(&mut tokens, "field order q")? as usize;
    let k = num(&mut tokens, "row count k")? as usize;
    let n = num(&mut tokens, "column count n")? as usize;
    let (p, e) = prime_power(q).ok_or(AlgebraError::NotPrimePower(q))?;

    let field = if tokens.peek() == Some(&"poly") {
        tokens.next();
        if e == 1 {
            return Err(parse_err("`poly` line given for a prime field"));
        }
        let mut high_first = Vec::with_capacity(e as usize + 1);
        for _ in 0..=e {
            high_first.push(num(&mut tokens, "polynomial coefficient")? as u32);
        }
        high_first.reverse();
        FieldSpec::with_poly(p, e, &high_first)?
    } else {
        FieldSpec::new(q)?
    };

    let mut rows = Vec::with_capacity(k);
    for _ in 0..k {
        let mut row = Vec::with_capacity(n);
        for _ in 0..n {
            let v = num(&mut tokens, "matrix entry")?;
            row.push(u32::try_from(v).map_err(|_| parse_err(format!("entry {v} out of range")))?);
        }
        rows.push(row);
    }
    if let Some(extra) = tokens.next() {
        return Err(parse_err(format!("trailing token `{extra}` after {k}x{n} entries")));
    }
    if k == 0 {
        return Ok(Matrix::zeros(&field, 0, n));
    }
    Matrix::from_rows(&field, &rows)
}

pub fn render_matrix(m: &Matrix) -> String {
    let f = m.field();
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", f.order(), m.rows(), m.cols());
    if f.degree() > 1 {
        let coeffs: Vec<String> = f.poly_high_first().iter().map(u32::to_string).collect();
        let _ = writeln!(out, "poly {}", coeffs.join(" "));
    }
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}
