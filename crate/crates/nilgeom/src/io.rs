//! Input formats: algebra files, matrices, sign patterns and seed ranges.

use std::path::Path;

use nilgeom_core::exterior::{format_form, parse_form};
use nilgeom_core::liealg::LieAlgebra;
use nilgeom_core::linalg::Matrix;
use nilgeom_core::Scalar;
use serde::{Deserialize, Serialize};

use crate::json::parse_q;
use crate::{Error, Result};

/// JSON form of an algebra: `de^k` as literals over the labels e1…en.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDocument {
    pub dim: usize,
    pub labels: Vec<String>,
    pub differentials: Vec<String>,
}

impl AlgebraDocument {
    pub fn of(l: &LieAlgebra) -> Self {
        AlgebraDocument {
            dim: l.dim(),
            labels: l.labels().to_vec(),
            differentials: l.differentials().iter().map(|f| format_form(f, &[])).collect(),
        }
    }

    pub fn algebra(&self) -> Result<LieAlgebra> {
        if self.differentials.len() != self.dim {
            return Err(Error::Input(format!(
                "{} differentials for dimension {}",
                self.differentials.len(),
                self.dim
            )));
        }
        let d1 = self
            .differentials
            .iter()
            .map(|t| parse_form(t, self.dim, Some(2)))
            .collect::<nilgeom_core::Result<Vec<_>>>()?;
        Ok(LieAlgebra::with_labels(self.labels.clone(), d1)?)
    }
}

/// Structure equations (`0,0,12,…`) or an [`AlgebraDocument`]. Lines starting
/// with `#` are ignored and line breaks may separate the differentials.
pub fn parse_algebra(text: &str) -> Result<LieAlgebra> {
    let body: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let joined = body.join(",");
    if joined.starts_with('{') {
        let doc: AlgebraDocument = serde_json::from_str(&body.join("\n"))?;
        return doc.algebra();
    }
    let cleaned: String = joined.split(',').map(str::trim).filter(|p| !p.is_empty()).collect::<Vec<_>>().join(",");
    Ok(LieAlgebra::parse(&cleaned)?)
}

/// A path to an algebra file, or inline structure equations.
pub fn load_algebra(arg: &str) -> Result<LieAlgebra> {
    let path = Path::new(arg);
    if path.exists() {
        parse_algebra(&std::fs::read_to_string(path)?)
    } else if arg.contains(',') || arg == "0" {
        parse_algebra(arg)
    } else {
        Err(Error::Input(format!("no algebra file {arg:?}")))
    }
}

/// Rows separated by `;`, entries by `,` or whitespace.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let rows: Vec<Vec<Scalar>> = text
        .split(';')
        .filter(|r| !r.trim().is_empty())
        .map(parse_list)
        .collect::<Result<_>>()?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Input(format!("expected a square matrix, got {text:?}")));
    }
    Ok(Matrix::from_rows(rows))
}

pub fn parse_list(text: &str) -> Result<Vec<Scalar>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_q(t).map(Scalar::Rational))
        .collect()
}

/// `-,-,+` or `-1,-1,1`.
pub fn parse_signs(text: &str) -> Result<Vec<i8>> {
    text.split(',')
        .map(|t| match t.trim() {
            "+" | "1" | "+1" => Ok(1),
            "-" | "-1" => Ok(-1),
            other => Err(Error::Input(format!("bad sign {other:?}"))),
        })
        .collect()
}

/// `a..b` (half open), `a..=b`, or a comma list.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let bad = || Error::Input(format!("bad seed range {text:?}"));
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    if let Some((a, b)) = text.split_once("..=") {
        return Ok((num(a)?..=num(b)?).collect());
    }
    if let Some((a, b)) = text.split_once("..") {
        return Ok((num(a)?..num(b)?).collect());
    }
    text.split(',').map(num).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nilgeom_core::catalog;

    #[test]
    fn algebra_text_and_json_agree() {
        let g = catalog::einstein_algebra();
        let text = "# seven-dimensional\n0,0,12,13,\n14,15+23,16+23+24\n";
        assert_eq!(parse_algebra(text).unwrap(), g);
        let doc = serde_json::to_string(&AlgebraDocument::of(&g)).unwrap();
        assert_eq!(parse_algebra(&doc).unwrap(), g);
        assert!(parse_algebra("0,0,12,34").is_err());
    }

    #[test]
    fn small_parsers() {
        assert_eq!(parse_signs("-,-,+").unwrap(), vec![-1, -1, 1]);
        assert!(parse_signs("-,x").is_err());
        assert_eq!(parse_seeds("0..3").unwrap(), vec![0, 1, 2]);
        assert_eq!(parse_seeds("2..=3").unwrap(), vec![2, 3]);
        assert_eq!(parse_seeds("7,1").unwrap(), vec![7, 1]);
        let m = parse_matrix("1,0;0,-1/2").unwrap();
        assert_eq!(m[(1, 1)], Scalar::frac(-1, 2));
        assert!(parse_matrix("1,0;0").is_err());
    }
}
