//! Integer polynomials written like `3X + X^3` or `-2*x^2+x`.

use padic_dynamics::{Error, Result};

fn malformed(text: &str, why: &str) -> Error {
    Error::Malformed(format!("polynomial {text:?}: {why}"))
}

/// Dense coefficients, index `i` holding the coefficient of `X^i`.
pub fn parse(text: &str) -> Result<Vec<i64>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(malformed(text, "empty"));
    }
    let mut coeffs = vec![0i64];
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'+' => (1, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ if rest.len() == s.len() => (1, rest),
            _ => return Err(malformed(text, "expected + or -")),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let (term, tail) = body.split_at(end);
        let (c, k) = term_of(text, term)?;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, 0);
        }
        coeffs[k] = c
            .checked_mul(sign)
            .and_then(|c| coeffs[k].checked_add(c))
            .ok_or_else(|| malformed(text, "coefficient overflow"))?;
        rest = tail;
    }
    while coeffs.len() > 1 && coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    Ok(coeffs)
}

fn term_of(text: &str, term: &str) -> Result<(i64, usize)> {
    let int = |t: &str| t.parse::<i64>().map_err(|_| malformed(text, &format!("bad term {term:?}")));
    let Some(x) = term.find(['X', 'x']) else {
        return Ok((int(term)?, 0));
    };
    let (head, tail) = (&term[..x], &term[x + 1..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let c = if head.is_empty() { 1 } else { int(head)? };
    let k = match tail.strip_prefix('^') {
        Some(k) => k
            .parse::<usize>()
            .map_err(|_| malformed(text, &format!("bad exponent in {term:?}")))?,
        None if tail.is_empty() => 1,
        None => return Err(malformed(text, &format!("bad term {term:?}"))),
    };
    Ok((c, k))
}
