//! Induced inner products on Λ^k and the Hodge star of an indefinite metric.

use alloc::vec::Vec;

use super::form::{complement_sign, full_mask, indices_of, subsets, KForm, Mask};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

fn gram_minor(dual: &Matrix, a: Mask, b: Mask) -> Scalar {
    let ia = indices_of(a);
    let ib = indices_of(b);
    match ia.len() {
        0 => Scalar::one(),
        1 => dual[(ia[0], ib[0])].clone(),
        _ => dual.submatrix(&ia, &ib).det(),
    }
}

/// h(a, b) = Σ a_I b_J det(h(e^i, e^j))_{i∈I, j∈J}, with `dual` the Gram
/// matrix of the metric on the coframe.
pub fn form_inner(dual: &Matrix, a: &KForm, b: &KForm) -> Result<Scalar> {
    if a.degree() != b.degree() {
        return Err(Error::Degree {
            expected: a.degree(),
            found: b.degree(),
        });
    }
    if dual.rows() != a.dim() || a.dim() != b.dim() {
        return Err(Error::Dimension {
            expected: dual.rows(),
            found: a.dim(),
        });
    }
    let mut acc = Scalar::zero();
    for (ma, ca) in a.raw_terms() {
        for (mb, cb) in b.raw_terms() {
            let m = gram_minor(dual, *ma, *mb);
            if !m.is_zero() {
                acc = acc + &(&(ca * cb) * &m);
            }
        }
    }
    Ok(acc)
}

/// The Hodge star of the metric whose coframe Gram matrix is `scale · dual`,
/// relative to the volume form `vol · e^{1…n}`.
#[derive(Clone, Debug)]
pub struct HodgeStar {
    dual: Matrix,
    scale: Scalar,
    vol: Scalar,
}

impl HodgeStar {
    pub fn new(dual: Matrix, scale: Scalar, vol: Scalar) -> Result<Self> {
        if vol.is_zero() {
            return Err(Error::SingularMetric);
        }
        if !dual.is_square() {
            return Err(Error::Dimension {
                expected: dual.rows(),
                found: dual.cols(),
            });
        }
        Ok(HodgeStar { dual, scale, vol })
    }

    /// Star for a metric given on the frame, with volume `vol · e^{1…n}`.
    pub fn from_metric(gram: &Matrix, vol: Scalar) -> Result<Self> {
        let dual = gram.inverse().map_err(|_| Error::SingularMetric)?;
        Self::new(dual, Scalar::one(), vol)
    }

    pub fn dim(&self) -> usize {
        self.dual.rows()
    }

    /// The coframe Gram matrix `scale · dual`.
    pub fn dual_metric(&self) -> Matrix {
        self.dual.scale(&self.scale)
    }

    pub fn volume(&self) -> KForm {
        KForm::top(self.dim(), self.vol.clone())
    }

    pub fn inner(&self, a: &KForm, b: &KForm) -> Result<Scalar> {
        let s = self.scale.pow(a.degree() as u32);
        Ok(&form_inner(&self.dual, a, b)? * &s)
    }

    /// ⋆a, characterised by b ∧ ⋆a = ⟨b, a⟩ vol for every k-form b.
    pub fn star(&self, a: &KForm) -> KForm {
        let n = self.dim();
        assert_eq!(a.dim(), n, "form and metric live on different spaces");
        let k = a.degree();
        let factor = &self.scale.pow(k as u32) * &self.vol;
        let mut terms: Vec<(Mask, Scalar)> = Vec::new();
        for j in subsets(n, k) {
            let mut c = Scalar::zero();
            for (i, ai) in a.raw_terms() {
                let m = gram_minor(&self.dual, j, *i);
                if !m.is_zero() {
                    c = c + &(ai * &m);
                }
            }
            if c.is_zero() {
                continue;
            }
            let c = &c * &factor;
            let comp = full_mask(n) & !j;
            terms.push((comp, if complement_sign(n, j) { -c } else { c }));
        }
        KForm::from_masks(n, n - k, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::literal::parse_form;

    fn eta() -> Matrix {
        let d: Vec<Scalar> = [-1, -1, -1, -1, 1, 1, 1].iter().map(|&x| Scalar::int(x)).collect();
        Matrix::diagonal(&d)
    }

    #[test]
    fn diagonal_inner_products() {
        let h = HodgeStar::from_metric(&eta(), Scalar::one()).unwrap();
        let e12 = KForm::basis(7, &[0, 1]);
        assert_eq!(h.inner(&e12, &e12).unwrap(), Scalar::one());
        let e15 = KForm::basis(7, &[0, 4]);
        assert_eq!(h.inner(&e15, &e15).unwrap(), Scalar::int(-1));
    }

    #[test]
    fn star_of_standard_form() {
        let phi = parse_form("-e127 - e347 + e567 + e135 - e146 - e236 - e245", 7, None).unwrap();
        let h = HodgeStar::from_metric(&eta(), Scalar::one()).unwrap();
        let expected =
            parse_form("e1234 - e1256 - e3456 - e2467 + e2357 + e1457 + e1367", 7, None).unwrap();
        assert_eq!(h.star(&phi), expected);
        assert_eq!(h.star(&h.star(&phi)), phi);
    }

    #[test]
    fn inner_with_isotropic_covector() {
        // h(e1,e1) = 0, h(e1,e3) = 2: h(e13, e13) = -4
        let mut d = Matrix::identity(3);
        d[(0, 0)] = Scalar::zero();
        d[(0, 2)] = Scalar::int(2);
        d[(2, 0)] = Scalar::int(2);
        let e13 = KForm::basis(3, &[0, 2]);
        assert_eq!(form_inner(&d, &e13, &e13).unwrap(), Scalar::int(-4));
        assert!(form_inner(&d, &e13, &KForm::basis(3, &[0])).is_err());
    }
}
