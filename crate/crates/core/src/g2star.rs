//! Stable 3-forms in seven dimensions and the G₂*-structures they induce.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::exterior::{subsets, HodgeStar, KForm};
use crate::liealg::LieAlgebra;
use crate::linalg::Matrix;
use crate::metric::PseudoMetric;
use crate::scalar::{exact_odd_root, NinthRoot, Scalar, Q};

/// The form `-e127 - e347 + e567 + e135 - e146 - e236 - e245`.
pub fn standard_phi() -> KForm {
    let terms: [(&[usize], i64); 7] = [
        (&[0, 1, 6], -1),
        (&[2, 3, 6], -1),
        (&[4, 5, 6], 1),
        (&[0, 2, 4], 1),
        (&[0, 3, 5], -1),
        (&[1, 2, 5], -1),
        (&[1, 3, 4], -1),
    ];
    terms.iter().fold(KForm::zero(7, 3), |acc, (idx, c)| {
        acc.add(&KForm::monomial(7, idx, Scalar::int(*c)))
    })
}

/// The standard form written in an adapted coframe; row k of `adapted` gives
/// the k-th adapted covector in the reference coframe.
pub fn adapted_phi(adapted: &Matrix) -> KForm {
    standard_phi().substitute(adapted)
}

fn check_three_form(phi: &KForm) -> Result<()> {
    if phi.dim() != 7 {
        return Err(Error::Dimension {
            expected: 7,
            found: phi.dim(),
        });
    }
    if phi.degree() != 3 {
        return Err(Error::Degree {
            expected: 3,
            found: phi.degree(),
        });
    }
    Ok(())
}

/// b_ij with 6·b_ij·e^{1…7} = ι_{e_i}φ ∧ ι_{e_j}φ ∧ φ.
pub fn b_form(phi: &KForm) -> Result<Matrix> {
    check_three_form(phi)?;
    let contracted: Vec<KForm> = (0..7).map(|i| phi.contract_basis(i)).collect();
    let sixth = Q::new(1.into(), 6.into());
    let mut b = Matrix::zeros(7, 7);
    for i in 0..7 {
        let left = contracted[i].w(phi);
        for j in i..7 {
            let v = contracted[j].w(&left).top_coeff().scale(&sixth);
            b[(i, j)] = v.clone();
            b[(j, i)] = v;
        }
    }
    Ok(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitClass {
    PositiveDefinite,
    Indefinite,
    Degenerate,
}

fn classify(b: &Matrix, det: &Scalar) -> OrbitClass {
    match det.sign() {
        None | Some(Ordering::Equal) => OrbitClass::Degenerate,
        Some(s) => {
            let inertia = b.inertia();
            let (pos, neg) = if s == Ordering::Less {
                (inertia.negative, inertia.positive)
            } else {
                (inertia.positive, inertia.negative)
            };
            if pos == 7 || neg == 7 {
                OrbitClass::PositiveDefinite
            } else {
                OrbitClass::Indefinite
            }
        }
    }
}

/// Orbit type of a rational 3-form; polynomial forms count as degenerate.
pub fn stability_class(phi: &KForm) -> Result<OrbitClass> {
    let b = b_form(phi)?;
    let det = b.det();
    Ok(classify(&b, &det))
}

/// A stable 3-form with its b-matrix, volume, metric and Hodge star.
#[derive(Clone, Debug)]
pub struct G2StarStructure {
    phi: KForm,
    bmatrix: Matrix,
    det: Scalar,
    delta: Scalar,
    metric: PseudoMetric,
    class: OrbitClass,
    star: HodgeStar,
}

/// Builds the structure induced by `phi`, working over ℚ when det b is a
/// ninth power and over ℚ[δ]/(δ⁹ − det b) otherwise.
pub fn induce(phi: &KForm) -> Result<G2StarStructure> {
    let bmatrix = b_form(phi)?;
    let det = bmatrix.det();
    let class = classify(&bmatrix, &det);
    if class == OrbitClass::Degenerate {
        return Err(Error::Unstable);
    }
    let d = det.as_rational().expect("rational determinant").clone();
    let delta = match exact_odd_root(&d, 9) {
        Some(r) => Scalar::Rational(r),
        None => Scalar::from_ninth(NinthRoot::generator(d)),
    };
    let binv = bmatrix.inverse()?;
    let inv_delta = delta.inv()?;
    let metric = PseudoMetric::new(bmatrix.scale(&inv_delta))?;
    let star = HodgeStar::new(binv, delta.clone(), delta.clone())?;
    Ok(G2StarStructure {
        phi: phi.clone(),
        bmatrix,
        det,
        delta,
        metric,
        class,
        star,
    })
}

impl G2StarStructure {
    pub fn phi(&self) -> &KForm {
        &self.phi
    }

    pub fn bmatrix(&self) -> &Matrix {
        &self.bmatrix
    }

    /// det b relative to the reference volume.
    pub fn det(&self) -> &Scalar {
        &self.det
    }

    /// δ with δ⁹ = det b; vol = δ·e^{1…7}.
    pub fn volume_coefficient(&self) -> &Scalar {
        &self.delta
    }

    pub fn volume(&self) -> KForm {
        self.star.volume()
    }

    pub fn metric(&self) -> &PseudoMetric {
        &self.metric
    }

    pub fn orbit_class(&self) -> OrbitClass {
        self.class
    }

    pub fn star(&self, a: &KForm) -> KForm {
        self.star.star(a)
    }

    pub fn inner(&self, a: &KForm, b: &KForm) -> Result<Scalar> {
        self.star.inner(a, b)
    }

    pub fn star_phi(&self) -> KForm {
        self.star(&self.phi)
    }

    /// Splits a 2-form into its Ω²₇ and Ω²₁₄ parts.
    pub fn decompose2(&self, beta: &KForm) -> Result<(KForm, KForm)> {
        check_degree(beta, 2)?;
        let psi = self.star_phi();
        let images: Vec<KForm> = (0..7)
            .map(|i| self.star(&KForm::basis(7, &[i]).w(&psi)))
            .collect();
        let target = beta.w(&psi);
        let coeffs = solve_in_span(&images.iter().map(|x| x.w(&psi)).collect::<Vec<_>>(), &target, 6)?;
        let omega7 = combine(&images, &coeffs, 2);
        let omega14 = beta.sub(&omega7);
        Ok((omega7, omega14))
    }

    /// Writes γ = fφ + ⋆(α∧φ) + γ₂₇.
    pub fn decompose3(&self, gamma: &KForm) -> Result<(Scalar, KForm, KForm)> {
        check_degree(gamma, 3)?;
        let psi = self.star_phi();
        let mut images = Vec::with_capacity(8);
        images.push(self.phi.clone());
        for i in 0..7 {
            images.push(self.star(&KForm::basis(7, &[i]).w(&self.phi)));
        }
        // Conditions: γ₂₇ ∧ φ = 0 (six-forms) and γ₂₇ ∧ ⋆φ = 0 (top form).
        let columns: Vec<(KForm, KForm)> = images.iter().map(|x| (x.w(&self.phi), x.w(&psi))).collect();
        let (t6, t7) = (gamma.w(&self.phi), gamma.w(&psi));
        let rows6 = subsets(7, 6);
        let mut m = Matrix::zeros(8, 8);
        let mut rhs = Vec::with_capacity(8);
        for (r, mask) in rows6.iter().enumerate() {
            for (c, (a, _)) in columns.iter().enumerate() {
                m[(r, c)] = a.coeff_mask(*mask);
            }
            rhs.push(t6.coeff_mask(*mask));
        }
        for (c, (_, b)) in columns.iter().enumerate() {
            m[(7, c)] = b.top_coeff();
        }
        rhs.push(t7.top_coeff());
        let x = m.solve(&rhs).ok_or(Error::SingularMatrix)?;
        let alpha = KForm::from_masks(7, 1, (0..7).map(|i| (1u32 << i, x[i + 1].clone())));
        let pure = combine(&images, &x, 3);
        Ok((x[0].clone(), alpha, gamma.sub(&pure)))
    }

    /// τ₀, τ₁, τ₂, τ₃ with dφ = τ₀⋆φ + 3τ₁∧φ + ⋆τ₃ and d⋆φ = 4τ₁∧⋆φ − ⋆τ₂.
    pub fn torsion_forms(&self, l: &LieAlgebra) -> Result<TorsionForms> {
        check_algebra(l)?;
        let dphi = l.d(&self.phi);
        let (f, alpha, g27) = self.decompose3(&self.star(&dphi))?;
        let third = Q::new(1.into(), 3.into());
        let tau1 = alpha.scale_q(&third);
        let psi = self.star_phi();
        let rest = l.d(&psi).sub(&tau1.w(&psi).scale_q(&Q::from_integer(4.into())));
        let tau2 = self.star(&rest).neg();
        Ok(TorsionForms {
            tau0: f,
            tau1,
            tau2,
            tau3: g27,
        })
    }

    /// The torsion 2-form τ = −⋆d⋆φ of a closed structure.
    pub fn torsion_closed(&self, l: &LieAlgebra) -> Result<KForm> {
        check_algebra(l)?;
        if !l.d(&self.phi).is_zero() {
            return Err(Error::Precondition("the 3-form is not closed".into()));
        }
        let tau = self.star(&l.d(&self.star_phi())).neg();
        let (omega7, _) = self.decompose2(&tau)?;
        if !omega7.is_zero() {
            return Err(Error::Precondition(format!("torsion has an Ω²₇ part {omega7}")));
        }
        Ok(tau)
    }

    /// δα = (−1)^{7(k+1)+1} ⋆d⋆α.
    pub fn codifferential(&self, l: &LieAlgebra, a: &KForm) -> KForm {
        let k = a.degree();
        let v = self.star(&l.d(&self.star(a)));
        if (7 * (k + 1) + 1) % 2 == 1 {
            v.neg()
        } else {
            v
        }
    }

    pub fn laplacian(&self, l: &LieAlgebra, a: &KForm) -> KForm {
        let mut out = l.d(&self.codifferential(l, a));
        if a.degree() < 7 {
            out = out.add(&self.codifferential(l, &l.d(a)));
        }
        out
    }

    pub fn harmonic_report(&self, l: &LieAlgebra) -> Result<HarmonicReport> {
        check_algebra(l)?;
        let closed = l.d(&self.phi).is_zero();
        let coclosed = l.d(&self.star_phi()).is_zero();
        let delta_phi = self.codifferential(l, &self.phi);
        let laplacian_phi = self.laplacian(l, &self.phi);
        Ok(HarmonicReport {
            closed,
            coclosed,
            harmonic: laplacian_phi.is_zero(),
            delta_phi,
            laplacian_phi,
        })
    }

    /// −½ g(τ, τ) for a closed structure.
    pub fn scal_from_torsion(&self, l: &LieAlgebra) -> Result<Scalar> {
        let tau = self.torsion_closed(l)?;
        Ok(self.inner(&tau, &tau)?.scale(&Q::new((-1).into(), 2.into())))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorsionForms {
    pub tau0: Scalar,
    pub tau1: KForm,
    pub tau2: KForm,
    pub tau3: KForm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicReport {
    pub closed: bool,
    pub coclosed: bool,
    pub harmonic: bool,
    pub delta_phi: KForm,
    pub laplacian_phi: KForm,
}

fn check_degree(a: &KForm, k: usize) -> Result<()> {
    if a.dim() != 7 {
        return Err(Error::Dimension {
            expected: 7,
            found: a.dim(),
        });
    }
    if a.degree() != k {
        return Err(Error::Degree {
            expected: k,
            found: a.degree(),
        });
    }
    Ok(())
}

fn check_algebra(l: &LieAlgebra) -> Result<()> {
    if l.dim() != 7 {
        return Err(Error::Dimension {
            expected: 7,
            found: l.dim(),
        });
    }
    Ok(())
}

fn combine(forms: &[KForm], coeffs: &[Scalar], degree: usize) -> KForm {
    forms
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .fold(KForm::zero(7, degree), |acc, (f, c)| acc.add(&f.scale(c)))
}

/// Coefficients x with Σ x_i columns[i] = target, reading components on the
/// degree-`degree` basis.
fn solve_in_span(columns: &[KForm], target: &KForm, degree: usize) -> Result<Vec<Scalar>> {
    let rows = subsets(7, degree);
    let m = Matrix::from_fn(rows.len(), columns.len(), |r, c| columns[c].coeff_mask(rows[r]));
    let b: Vec<Scalar> = rows.iter().map(|mask| target.coeff_mask(*mask)).collect();
    m.solve(&b).ok_or(Error::SingularMatrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exterior::parse_form;

    #[test]
    fn standard_form_gives_eta() {
        let phi = standard_phi();
        assert_eq!(phi, catalog::form(catalog::STANDARD_PHI));
        let b = b_form(&phi).unwrap();
        assert_eq!(b, PseudoMetric::eta(7).gram().clone());
        let s = induce(&phi).unwrap();
        assert_eq!(s.orbit_class(), OrbitClass::Indefinite);
        assert_eq!(s.volume_coefficient(), &Scalar::one());
        assert_eq!(s.star_phi(), catalog::form(catalog::STANDARD_STAR_PHI));
    }

    #[test]
    fn degenerate_form() {
        let phi = parse_form("e123 + e456", 7, None).unwrap();
        assert_eq!(stability_class(&phi).unwrap(), OrbitClass::Degenerate);
        assert!(matches!(induce(&phi), Err(Error::Unstable)));
        assert!(b_form(&parse_form("e12", 7, None).unwrap()).is_err());
    }

    #[test]
    fn definite_form() {
        // φ₀ = e123 + e145 + e167 + e246 - e257 - e347 - e356 induces a definite metric
        let phi = parse_form("e123 + e145 + e167 + e246 - e257 - e347 - e356", 7, None).unwrap();
        assert_eq!(stability_class(&phi).unwrap(), OrbitClass::PositiveDefinite);
    }

    #[test]
    fn rescaling_needs_a_ninth_root() {
        let phi = standard_phi().scale(&Scalar::int(2));
        let s = induce(&phi).unwrap();
        // b scales by 8, det by 2^21, δ = 2^{7/3} is irrational.
        assert!(matches!(s.volume_coefficient(), Scalar::NinthRoot(_)));
        let g = s.metric().gram().scale(s.volume_coefficient());
        assert_eq!(&g, s.bmatrix());
        assert_eq!(s.orbit_class(), OrbitClass::Indefinite);
        let (f, alpha, rest) = s.decompose3(&phi).unwrap();
        assert_eq!(f, Scalar::one());
        assert!(alpha.is_zero() && rest.is_zero());
    }

    #[test]
    fn decompositions_of_pure_types() {
        let s = induce(&standard_phi()).unwrap();
        let e1 = KForm::basis(7, &[0]);
        let seven = s.star(&e1.w(&s.star_phi()));
        let (o7, o14) = s.decompose2(&seven).unwrap();
        assert_eq!(o7, seven);
        assert!(o14.is_zero());
        let g = s.star(&e1.w(s.phi()));
        let (f, alpha, rest) = s.decompose3(&g).unwrap();
        assert!(f.is_zero());
        assert_eq!(alpha, e1);
        assert!(rest.is_zero());
    }
}
