//! Complex literals and JSON file helpers shared by the CLI.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::cmatrix::C64;
use crate::error::{Error, Result};

/// Parses `a+bi`, `a-bi`, `bi` or `a`. The unit forms `i`, `-i`, `1+i` are
/// accepted too. Whitespace and non-finite parts are rejected.
pub fn parse_complex(s: &str) -> Result<C64> {
    let bad = |why: &str| Error::Parse(format!("complex literal {s:?}: {why}"));
    if s.is_empty() {
        return Err(bad("empty"));
    }
    if s.chars().any(char::is_whitespace) {
        return Err(bad("whitespace is not allowed"));
    }
    let real = |t: &str| -> Result<f64> {
        let x: f64 = t.parse().map_err(|_| bad("malformed number"))?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(bad("non-finite part"))
        }
    };
    let imag = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => real(t),
        }
    };
    let Some(body) = s.strip_suffix('i') else {
        return Ok(C64::new(real(s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| matches!(bytes[p], b'+' | b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    match split {
        Some(p) => Ok(C64::new(real(&body[..p])?, imag(&body[p..])?)),
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

/// Formats `z` in the literal grammar accepted by [`parse_complex`].
pub fn format_complex(z: C64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string(value).map_err(|e| Error::Parse(e.to_string()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = to_json(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn literal_grammar() {
        assert_eq!(parse_complex("1+1i").unwrap(), c(1.0, 1.0));
        assert_eq!(parse_complex("1-1i").unwrap(), c(1.0, -1.0));
        assert_eq!(parse_complex("0+2i").unwrap(), c(0.0, 2.0));
        assert_eq!(parse_complex("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(parse_complex("-0.5").unwrap(), c(-0.5, 0.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1+i").unwrap(), c(1.0, 1.0));
        assert_eq!(parse_complex("1e-3+2.5e2i").unwrap(), c(1e-3, 250.0));
        assert_eq!(parse_complex("-1e-5i").unwrap(), c(0.0, -1e-5));
    }

    #[test]
    fn rejected_literals() {
        for s in ["", "1 + 1i", " 1", "1+1j", "abc", "1+nani", "inf", "1++1i", "i1"] {
            assert!(matches!(parse_complex(s), Err(Error::Parse(_))), "{s:?}");
        }
    }

    proptest! {
        #[test]
        fn literal_round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
            let z = c(re, im);
            prop_assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }
}
