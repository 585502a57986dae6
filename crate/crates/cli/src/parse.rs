//! Literal syntaxes accepted on the command line.
//!
//! * fields: `p^[d1,d2,...]`, e.g. `3^[2,2]` for `F_9 ⊂ F_81`
//! * elements: prime-field digit tuples, lowest first, e.g. `[1,0,1]`
//! * polynomials: `coeffs=[[c0],[c1],...]`, `pseudoregulus:s=1`,
//!   `lp:s=1,delta=[0,1]` (optionally `,rescale`)
//! * integer ranges: `5`, `3..11` (inclusive) or `0,2,5`

use std::fmt;

use scatterlab::{Elem, Field, LinearizedPoly};

/// A syntax error with a 1-based position in the offending literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub input: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(input: &str, column: usize, message: impl Into<String>) -> ParseError {
        ParseError { input: input.to_string(), line: 1, column, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)?;
        if !self.input.contains('\n') {
            write!(f, "\n  {}\n  {}^", self.input, " ".repeat(self.column.saturating_sub(1)))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// Tower described by a field literal, plus its default base level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub degrees: Vec<u32>,
}

impl FieldSpec {
    /// The top field and its base level: the level below the top unless
    /// `base_level` says otherwise.
    pub fn build(&self, base_level: Option<usize>) -> anyhow::Result<(Field, Field)> {
        let top = Field::new(self.p, &self.degrees)?;
        let levels = top.level();
        let base = match base_level {
            Some(l) if l >= levels => {
                anyhow::bail!("base level {l} must lie below the top level {levels}")
            }
            Some(l) => l,
            None => levels.saturating_sub(1),
        };
        let base = top.level_field(base)?;
        Ok((top, base))
    }
}

fn parse_u64(input: &str, token: &str, column: usize) -> Result<u64, ParseError> {
    token
        .trim()
        .parse::<u64>()
        .map_err(|_| ParseError::at(input, column, format!("expected a non-negative integer, found `{}`", token.trim())))
}

/// `p^[d1,...]`.
pub fn parse_field(input: &str) -> Result<FieldSpec, ParseError> {
    let (p_str, rest) = input
        .split_once('^')
        .ok_or_else(|| ParseError::at(input, input.len() + 1, "expected `p^[d1,...]`"))?;
    let p = parse_u64(input, p_str, 1)?;
    let open = p_str.len() + 2;
    let inner = rest
        .strip_prefix('[')
        .ok_or_else(|| ParseError::at(input, open, "expected `[` after `^`"))?
        .strip_suffix(']')
        .ok_or_else(|| ParseError::at(input, input.len() + 1, "expected closing `]`"))?;
    let mut degrees = Vec::new();
    let mut column = open + 1;
    for token in inner.split(',') {
        let d = parse_u64(input, token, column)?;
        if d == 0 || d > u32::MAX as u64 {
            return Err(ParseError::at(input, column, "degrees must be positive"));
        }
        degrees.push(d as u32);
        column += token.len() + 1;
    }
    Ok(FieldSpec { p, degrees })
}

fn parse_tuple_value(input: &str, column: usize) -> Result<Vec<u32>, ParseError> {
    serde_json::from_str::<Vec<u32>>(input)
        .map_err(|e| ParseError::at(input, column + e.column().saturating_sub(1), format!("element tuple: {e}")))
}

/// An element tuple, checked against the field.
pub fn parse_element(field: &Field, input: &str) -> anyhow::Result<Elem> {
    let digits = parse_tuple_value(input.trim(), 1)?;
    Ok(field.from_digits(&digits)?)
}

fn json_error(input: &str, offset: usize, e: serde_json::Error) -> ParseError {
    // serde_json reports positions relative to the JSON part
    let (line, column) = if e.line() <= 1 { (1, offset + e.column()) } else { (e.line(), e.column()) };
    ParseError { input: input.to_string(), line, column, message: e.to_string() }
}

/// The polynomial literal, over `field` with base `base`.
pub fn parse_poly(field: &Field, base: &Field, input: &str) -> anyhow::Result<LinearizedPoly> {
    if let Some(body) = input.strip_prefix("coeffs=") {
        let tuples: Vec<Vec<u32>> = serde_json::from_str(body).map_err(|e| json_error(input, "coeffs=".len(), e))?;
        let coeffs = tuples.iter().map(|t| field.from_digits(t)).collect::<Result<Vec<_>, _>>()?;
        return Ok(LinearizedPoly::new(field, base, coeffs)?);
    }
    let (name, params) = input
        .split_once(':')
        .ok_or_else(|| ParseError::at(input, 1, "expected `coeffs=[...]`, `pseudoregulus:s=..` or `lp:s=..,delta=[..]`"))?;
    let params_col = name.len() + 2;
    let mut s = None;
    let mut delta = None;
    let mut rescale = false;
    // delta tuples contain commas, so split on top-level commas only
    let mut depth = 0;
    let mut start = 0;
    let mut pieces = Vec::new();
    for (i, ch) in params.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                pieces.push((start, &params[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    pieces.push((start, &params[start..]));
    for (offset, piece) in pieces {
        let column = params_col + offset;
        let (key, value) = piece.split_once('=').unwrap_or((piece, ""));
        match key.trim() {
            "s" => {
                let v = parse_u64(input, value, column + key.len() + 1)?;
                s = Some(u32::try_from(v).map_err(|_| ParseError::at(input, column, "s is too large"))?);
            }
            "delta" if name == "lp" => {
                let digits = parse_tuple_value(value.trim(), column + key.len() + 1)
                    .map_err(|mut e| {
                        e.input = input.to_string();
                        e
                    })?;
                delta = Some(field.from_digits(&digits)?);
            }
            "rescale" if name == "lp" => rescale = value.is_empty() || value.trim() == "true",
            other => return Err(ParseError::at(input, column, format!("unknown parameter `{other}` for `{name}`")).into()),
        }
    }
    let s = s.ok_or_else(|| ParseError::at(input, params_col, "missing parameter `s`"))?;
    match name {
        "pseudoregulus" => Ok(LinearizedPoly::pseudoregulus(field, base, s)?),
        "lp" => {
            let delta = delta.ok_or_else(|| ParseError::at(input, params_col, "missing parameter `delta`"))?;
            Ok(LinearizedPoly::lp_binomial(field, base, s, delta, rescale)?)
        }
        other => Err(ParseError::at(input, 1, format!("unknown family `{other}`")).into()),
    }
}

/// `a`, `a..b` (inclusive) or `a,b,c`, deduplicated and sorted.
pub fn parse_range(input: &str) -> Result<Vec<u64>, ParseError> {
    let mut out = Vec::new();
    let mut column = 1;
    for token in input.split(',') {
        if let Some((lo, hi)) = token.split_once("..") {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let a = parse_u64(input, lo, column)?;
            let b = parse_u64(input, hi, column + lo.len() + 2)?;
            if a > b {
                return Err(ParseError::at(input, column, format!("empty range {a}..{b}")));
            }
            if b - a > 1 << 20 {
                return Err(ParseError::at(input, column, "range too long"));
            }
            out.extend(a..=b);
        } else {
            out.push(parse_u64(input, token, column)?);
        }
        column += token.len() + 1;
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_literals() {
        assert_eq!(parse_field("2^[3]").unwrap(), FieldSpec { p: 2, degrees: vec![3] });
        assert_eq!(parse_field("3^[2, 2]").unwrap(), FieldSpec { p: 3, degrees: vec![2, 2] });
        assert_eq!(parse_field("2[3]").unwrap_err().column, 5);
        assert_eq!(parse_field("2^3").unwrap_err().column, 3);
        assert_eq!(parse_field("2^[3,x]").unwrap_err().column, 6);
        assert_eq!(parse_field("2^[3,0]").unwrap_err().column, 6);
        let (top, base) = parse_field("3^[2,2]").unwrap().build(None).unwrap();
        assert_eq!((top.size(), base.size()), (81, 9));
        let (_, base) = parse_field("3^[2,2]").unwrap().build(Some(0)).unwrap();
        assert_eq!(base.size(), 3);
        assert!(parse_field("3^[2]").unwrap().build(Some(1)).is_err());
    }

    #[test]
    fn elements() {
        let f = Field::new(2, &[3]).unwrap();
        assert_eq!(parse_element(&f, "[1,0,1]").unwrap(), Elem(5));
        assert_eq!(parse_element(&f, "[0,1]").unwrap(), Elem(2));
        assert!(parse_element(&f, "[1,0,1,1]").is_err());
        assert!(parse_element(&f, "[2]").is_err());
        assert!(parse_element(&f, "1,0").is_err());
    }

    #[test]
    fn polynomials() {
        let (top, base) = parse_field("2^[4]").unwrap().build(None).unwrap();
        let f = parse_poly(&top, &base, "coeffs=[[0],[1]]").unwrap();
        assert_eq!(f.to_string(), "x^2");
        let f = parse_poly(&top, &base, "pseudoregulus:s=3").unwrap();
        assert_eq!(f.to_string(), "x^8");
        let f = parse_poly(&top, &base, "lp:s=1,delta=[0,1]").unwrap();
        assert_eq!(f.to_string(), "x + [0,1,0,0]x^4");
        let g = parse_poly(&top, &base, "lp:s=1,delta=[0,1],rescale").unwrap();
        assert_eq!(g.coeff(2), Elem::ONE);
        assert!(parse_poly(&top, &base, "pseudoregulus:t=1").is_err());
        assert!(parse_poly(&top, &base, "lp:s=1").is_err());
        assert!(parse_poly(&top, &base, "cubic:s=1").is_err());
    }

    #[test]
    fn poly_errors_carry_positions() {
        let (top, base) = parse_field("2^[3]").unwrap().build(None).unwrap();
        let err = parse_poly(&top, &base, "coeffs=[[0],[1").unwrap_err();
        let e = err.downcast_ref::<ParseError>().unwrap();
        assert_eq!(e.line, 1);
        assert!(e.column > "coeffs=".len());
        let err = parse_poly(&top, &base, "coeffs=[[0],\n[x]]").unwrap_err();
        assert_eq!(err.downcast_ref::<ParseError>().unwrap().line, 2);
        let err = parse_poly(&top, &base, "nonsense").unwrap_err();
        assert_eq!(err.downcast_ref::<ParseError>().unwrap().column, 1);
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..7").unwrap(), vec![3, 4, 5, 6, 7]);
        assert_eq!(parse_range("4").unwrap(), vec![4]);
        assert_eq!(parse_range("5,1,1..2").unwrap(), vec![1, 2, 5]);
        assert_eq!(parse_range("0..=2").unwrap(), vec![0, 1, 2]);
        assert!(parse_range("7..3").is_err());
        assert_eq!(parse_range("1,x").unwrap_err().column, 3);
    }
}
