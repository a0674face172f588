//! JSON form descriptors.
//!
//! ```json
//! {"domain": {"kind": "imag_quad", "D": 1}, "n": 2, "A": "identity", "a": 1}
//! {"domain": {"kind": "real"}, "n": 2,
//!  "A": [[[2], [0]], [[0], [3]]], "a": 5}
//! {"domain": {"kind": "imag_quad", "D": 1}, "shorthand": "I_{2,1}"}
//! ```
//!
//! Matrix entries are order elements as integer coordinate arrays in the
//! domain's integral basis (bare integers are accepted for rational
//! entries). The shorthand `I_{n,1}` stands for `A = identity, a = 1`.
//! Unknown keys are rejected.

use hermcount_core::algebra::{OrderElement, ScalarDomain};
use hermcount_core::forms::HermitianForm;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum DomainDesc {
    #[serde(rename = "real")]
    Real,
    #[serde(rename = "imag_quad")]
    ImagQuad {
        #[serde(rename = "D")]
        d: u32,
    },
    #[serde(rename = "hurwitz")]
    Hurwitz,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum EntryDesc {
    Int(i64),
    Coords(Vec<i64>),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum MatrixDesc {
    Named(String),
    Rows(Vec<Vec<EntryDesc>>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormDescriptor {
    pub domain: DomainDesc,
    #[serde(default)]
    pub shorthand: Option<String>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default, rename = "A")]
    pub a_matrix: Option<MatrixDesc>,
    #[serde(default)]
    pub a: Option<u64>,
}

fn parse_shorthand(s: &str) -> Result<usize, CliError> {
    let inner = s
        .strip_prefix("I_{")
        .and_then(|rest| rest.strip_suffix(",1}"))
        .ok_or_else(|| CliError::input(format!("unrecognized shorthand {s:?}; expected I_{{n,1}}")))?;
    inner
        .parse::<usize>()
        .map_err(|_| CliError::input(format!("unrecognized shorthand {s:?}; expected I_{{n,1}}")))
}

impl FormDescriptor {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::input(format!("invalid form descriptor: {e}")))
    }

    pub fn build(&self) -> Result<HermitianForm, CliError> {
        let domain = match self.domain {
            DomainDesc::Real => ScalarDomain::real(),
            DomainDesc::ImagQuad { d } => ScalarDomain::imag_quad(d)?,
            DomainDesc::Hurwitz => ScalarDomain::hurwitz(),
        };
        if let Some(short) = &self.shorthand {
            if self.n.is_some() || self.a_matrix.is_some() || self.a.is_some() {
                return Err(CliError::input(
                    "shorthand cannot be combined with explicit n/A/a".into(),
                ));
            }
            let n = parse_shorthand(short)?;
            return Ok(HermitianForm::lorentzian(domain, n)?);
        }
        let n = self
            .n
            .ok_or_else(|| CliError::input("form descriptor needs \"n\"".into()))?;
        let a = self
            .a
            .ok_or_else(|| CliError::input("form descriptor needs \"a\"".into()))?;
        let matrix = self
            .a_matrix
            .as_ref()
            .ok_or_else(|| CliError::input("form descriptor needs \"A\"".into()))?;
        let entries: Vec<OrderElement> = match matrix {
            MatrixDesc::Named(name) => {
                if name == "identity" || name == "I" {
                    let mut e = vec![OrderElement::zero(); n * n];
                    for i in 0..n {
                        e[i * n + i] = domain.one();
                    }
                    e
                } else {
                    return Err(CliError::input(format!(
                        "unknown matrix name {name:?}; only \"identity\" is accepted"
                    )));
                }
            }
            MatrixDesc::Rows(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(CliError::input(format!("\"A\" must be an {n} x {n} matrix")));
                }
                let mut e = Vec::with_capacity(n * n);
                for row in rows {
                    for entry in row {
                        let elem = match entry {
                            EntryDesc::Int(v) => domain.from_int(*v),
                            EntryDesc::Coords(c) => domain.element(c)?,
                        };
                        e.push(elem);
                    }
                }
                e
            }
        };
        Ok(HermitianForm::new(domain, n, entries, a)?)
    }
}

pub fn load_form(path: &std::path::Path) -> Result<HermitianForm, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    FormDescriptor::parse(&text)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_descriptor() {
        let d = FormDescriptor::parse(
            r#"{"domain": {"kind": "imag_quad", "D": 1}, "n": 2, "A": "identity", "a": 1}"#,
        )
        .unwrap();
        let q = d.build().unwrap();
        assert_eq!(q.n(), 2);
        assert_eq!(q.a(), 1);
        assert!(q.is_diagonal());
    }

    #[test]
    fn shorthand_descriptor() {
        let d = FormDescriptor::parse(
            r#"{"domain": {"kind": "real"}, "shorthand": "I_{3,1}"}"#,
        )
        .unwrap();
        let q = d.build().unwrap();
        assert_eq!(q.n(), 3);
        assert_eq!(q.a(), 1);
    }

    #[test]
    fn explicit_matrix() {
        let d = FormDescriptor::parse(
            r#"{"domain": {"kind": "imag_quad", "D": 1}, "n": 2,
                "A": [[[2,0],[1,1]],[[1,-1],[3,0]]], "a": 2}"#,
        )
        .unwrap();
        let q = d.build().unwrap();
        assert!(!q.is_diagonal());
        assert_eq!(q.a(), 2);
    }

    #[test]
    fn bare_integer_entries() {
        let d = FormDescriptor::parse(
            r#"{"domain": {"kind": "real"}, "n": 2, "A": [[1, 0], [0, 2]], "a": 3}"#,
        )
        .unwrap();
        let q = d.build().unwrap();
        assert_eq!(q.diagonal_coeffs(), vec![1, 2]);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(FormDescriptor::parse(
            r#"{"domain": {"kind": "real"}, "n": 2, "A": "identity", "a": 1, "extra": 5}"#
        )
        .is_err());
    }

    #[test]
    fn non_hermitian_reported() {
        let d = FormDescriptor::parse(
            r#"{"domain": {"kind": "imag_quad", "D": 1}, "n": 2,
                "A": [[[2,0],[1,1]],[[1,1],[3,0]]], "a": 1}"#,
        )
        .unwrap();
        let err = d.build().unwrap_err();
        assert!(err.message.contains("hermitian"), "{}", err.message);
    }
}
