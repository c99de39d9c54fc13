//! JSON spec files: `{"P_zeros": [...], "Q_zeros": [...], "r": 3}`.
//!
//! Entries may be JSON integers, JSON floats, or strings holding an integer,
//! a decimal or `"p/q"`. Any non-integral JSON float puts the whole spec on
//! the float backend; everything else is read exactly.

use std::path::Path;

use hypgen_core::{parse_rational, BigRational, ExactSpec, GeneratorSpec, Spec};
use serde::Deserialize;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    #[serde(rename = "P_zeros")]
    p_zeros: Vec<Value>,
    #[serde(rename = "Q_zeros", default)]
    q_zeros: Vec<Value>,
    r: usize,
}

#[derive(Debug, Clone)]
pub enum LoadedSpec {
    Exact(ExactSpec),
    Float(Spec),
}

impl LoadedSpec {
    pub fn as_f64(&self) -> Spec {
        match self {
            LoadedSpec::Exact(s) => s.to_scalar::<f64>(),
            LoadedSpec::Float(s) => s.clone(),
        }
    }

    /// Exact view; floats convert through their binary value.
    pub fn as_exact(&self) -> Result<ExactSpec, CliError> {
        match self {
            LoadedSpec::Exact(s) => Ok(s.clone()),
            LoadedSpec::Float(s) => {
                let conv = |v: &[f64]| -> Result<Vec<BigRational>, CliError> {
                    v.iter()
                        .map(|&x| {
                            BigRational::from_float(x).ok_or_else(|| CliError::Input(format!("{x} is not finite")))
                        })
                        .collect()
                };
                Ok(GeneratorSpec::from_zeros(conv(s.p.zeros())?, conv(s.q.zeros())?, s.r)?)
            }
        }
    }
}

enum Entry {
    Exact(BigRational),
    Float(f64),
}

fn entry(v: &Value) -> Result<Entry, CliError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Entry::Exact(BigRational::from_integer(i.into())))
            } else {
                let x = n.as_f64().ok_or_else(|| CliError::Input(format!("bad number {n}")))?;
                if x.fract() == 0.0 && x.abs() < 9.0e15 {
                    Ok(Entry::Exact(BigRational::from_integer((x as i64).into())))
                } else {
                    Ok(Entry::Float(x))
                }
            }
        }
        Value::String(s) => parse_rational(s)
            .map(Entry::Exact)
            .ok_or_else(|| CliError::Input(format!("cannot parse {s:?} as a rational"))),
        other => Err(CliError::Input(format!("expected a number or string, got {other}"))),
    }
}

pub fn parse_spec(text: &str) -> Result<LoadedSpec, CliError> {
    let file: SpecFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("spec file: {e}")))?;
    let p: Vec<Entry> = file.p_zeros.iter().map(entry).collect::<Result<_, _>>()?;
    let q: Vec<Entry> = file.q_zeros.iter().map(entry).collect::<Result<_, _>>()?;
    let any_float = p.iter().chain(&q).any(|e| matches!(e, Entry::Float(_)));

    if any_float {
        let to_f = |v: Vec<Entry>| -> Vec<f64> {
            v.into_iter()
                .map(|e| match e {
                    Entry::Exact(x) => hypgen_core::Coefficient::to_f64(&x),
                    Entry::Float(x) => x,
                })
                .collect()
        };
        Ok(LoadedSpec::Float(GeneratorSpec::from_zeros(to_f(p), to_f(q), file.r)?))
    } else {
        let to_q = |v: Vec<Entry>| -> Vec<BigRational> {
            v.into_iter()
                .map(|e| match e {
                    Entry::Exact(x) => x,
                    Entry::Float(_) => unreachable!(),
                })
                .collect()
        };
        Ok(LoadedSpec::Exact(GeneratorSpec::from_zeros(to_q(p), to_q(q), file.r)?))
    }
}

pub fn load_spec(path: &Path) -> Result<LoadedSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_spec(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_and_strings_are_exact() {
        let s = parse_spec(r#"{"P_zeros": [-2, "1", "5/2", 4.0], "Q_zeros": ["-0.5"], "r": 3}"#).unwrap();
        assert!(matches!(s, LoadedSpec::Exact(_)));
    }

    #[test]
    fn decimal_float_goes_to_float() {
        let s = parse_spec(r#"{"P_zeros": [1, 2.5], "Q_zeros": [], "r": 2}"#).unwrap();
        let LoadedSpec::Float(spec) = s else { panic!("expected float") };
        assert_eq!(spec.p.zeros(), &[1.0, 2.5]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_spec("{").is_err());
        assert!(parse_spec(r#"{"P_zeros": [0, 1], "r": 3}"#).is_err());
        assert!(parse_spec(r#"{"P_zeros": [1, 2], "r": 1}"#).is_err());
        assert!(parse_spec(r#"{"P_zeros": ["x"], "r": 3}"#).is_err());
        assert!(parse_spec(r#"{"P_zeros": [1], "r": 3, "s": 1}"#).is_err());
    }
}
