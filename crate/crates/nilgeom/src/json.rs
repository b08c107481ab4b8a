//! Serializable mirrors of the exact core types. Rationals are `"p/q"`
//! strings, so no value ever passes through a float.

use nilgeom_core::exterior::{indices_of, mask_of, KForm};
use nilgeom_core::linalg::Matrix;
use nilgeom_core::scalar::{format_rational, parse_rational, Monomial, NinthRoot, Poly};
use nilgeom_core::{Scalar, Q};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub fn rational(x: &Q) -> String {
    format_rational(x)
}

pub fn parse_q(text: &str) -> Result<Q> {
    parse_rational(text.trim()).map_err(|e| Error::Input(format!("bad rational {text:?}: {e}")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<u16>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarJson {
    Rational(String),
    /// Σ coeffs[i] δ^i with δ⁹ = modulus.
    NinthRoot { coeffs: Vec<String>, modulus: String },
    Polynomial { terms: Vec<TermJson> },
}

impl From<&Scalar> for ScalarJson {
    fn from(s: &Scalar) -> Self {
        match s {
            Scalar::Rational(x) => ScalarJson::Rational(rational(x)),
            Scalar::NinthRoot(r) => ScalarJson::NinthRoot {
                coeffs: r.coeffs().iter().map(rational).collect(),
                modulus: rational(r.modulus()),
            },
            Scalar::Polynomial(p) => ScalarJson::Polynomial {
                terms: p
                    .terms()
                    .map(|(m, c)| TermJson {
                        exponents: m.exponents().to_vec(),
                        coeff: rational(c),
                    })
                    .collect(),
            },
        }
    }
}

impl TryFrom<&ScalarJson> for Scalar {
    type Error = Error;

    fn try_from(s: &ScalarJson) -> Result<Scalar> {
        Ok(match s {
            ScalarJson::Rational(x) => Scalar::Rational(parse_q(x)?),
            ScalarJson::NinthRoot { coeffs, modulus } => {
                let parsed: Vec<Q> = coeffs.iter().map(|c| parse_q(c)).collect::<Result<_>>()?;
                let coeffs: [Q; 9] = parsed
                    .try_into()
                    .map_err(|_| Error::Input("a ninth-root scalar needs 9 coefficients".into()))?;
                Scalar::from_ninth(NinthRoot::new(coeffs, parse_q(modulus)?))
            }
            ScalarJson::Polynomial { terms } => {
                let terms = terms
                    .iter()
                    .map(|t| Ok((Monomial::from_exponents(t.exponents.clone()), parse_q(&t.coeff)?)))
                    .collect::<Result<Vec<_>>>()?;
                Scalar::from_poly(Poly::from_terms(terms))
            }
        })
    }
}

pub fn scalar(s: &Scalar) -> ScalarJson {
    s.into()
}

pub type MatrixJson = Vec<Vec<ScalarJson>>;

pub fn matrix(m: &Matrix) -> MatrixJson {
    m.to_rows().iter().map(|r| r.iter().map(scalar).collect()).collect()
}

pub fn matrix_from(m: &MatrixJson) -> Result<Matrix> {
    let rows = m
        .iter()
        .map(|r| r.iter().map(Scalar::try_from).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err(Error::Input("matrix must be square".into()));
    }
    Ok(Matrix::from_rows(rows))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormTermJson {
    /// 1-based coframe indices.
    pub indices: Vec<usize>,
    pub coeff: ScalarJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormJson {
    pub dim: usize,
    pub degree: usize,
    pub text: String,
    pub terms: Vec<FormTermJson>,
}

pub fn form(f: &KForm, names: &[String]) -> FormJson {
    FormJson {
        dim: f.dim(),
        degree: f.degree(),
        text: nilgeom_core::exterior::format_form(f, names),
        terms: f
            .terms()
            .into_iter()
            .map(|(m, c)| FormTermJson {
                indices: indices_of(m).iter().map(|i| i + 1).collect(),
                coeff: scalar(c),
            })
            .collect(),
    }
}

pub fn form_from(f: &FormJson) -> Result<KForm> {
    let mut terms = Vec::with_capacity(f.terms.len());
    for t in &f.terms {
        if t.indices.len() != f.degree || t.indices.iter().any(|&i| i == 0 || i > f.dim) {
            return Err(Error::Input(format!("bad form term {:?}", t.indices)));
        }
        let idx: Vec<usize> = t.indices.iter().map(|i| i - 1).collect();
        terms.push((mask_of(&idx), Scalar::try_from(&t.coeff)?));
    }
    Ok(KForm::from_masks(f.dim, f.degree, terms))
}
