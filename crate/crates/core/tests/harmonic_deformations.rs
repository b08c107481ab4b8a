use nilgeom_core::catalog::{self, form};
use nilgeom_core::exterior::KForm;
use nilgeom_core::g2star::{induce, G2StarStructure};
use nilgeom_core::generic::closed_form_space;
use nilgeom_core::liealg::LieAlgebra;
use nilgeom_core::linalg::Matrix;
use nilgeom_core::metric::einstein_check;
use nilgeom_core::scalar::{q, Q};
use nilgeom_core::Scalar;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

fn small_rational(rng: &mut ChaCha8Rng) -> Q {
    let n = (rng.next_u32() % 7) as i64 - 3;
    let d = (rng.next_u32() % 3) as i64 + 1;
    q(n, d)
}

/// exp(D) for nilpotent D, or None.
fn unipotent(d: &Matrix) -> Option<Matrix> {
    let n = d.rows();
    let mut term = Matrix::identity(n);
    let mut sum = Matrix::identity(n);
    for k in 1..=n {
        term = term.mul(d).scale(&Scalar::frac(1, k as i64));
        sum = sum.add(&term);
    }
    term.mul(d).is_zero().then_some(sum)
}

fn random_automorphism(l: &LieAlgebra, rng: &mut ChaCha8Rng) -> Matrix {
    let ders = l.derivations();
    loop {
        let d = ders.iter().fold(Matrix::zeros(7, 7), |acc, m| {
            acc.add(&m.scale(&Scalar::Rational(small_rational(rng))))
        });
        if let Some(a) = unipotent(&d) {
            return a;
        }
    }
}

/// Pullback of forms along the automorphism with matrix `a` (column j = a e_j).
fn pullback(a: &Matrix, f: &KForm) -> KForm {
    f.substitute(a)
}

fn assert_scal_zero_and_dtau_zero(l: &LieAlgebra, s: &G2StarStructure, label: &str) {
    let tau = s.torsion_closed(l).unwrap();
    assert!(l.d(&tau).is_zero(), "{label}: dτ ≠ 0");
    let scal = s.scal_from_torsion(l).unwrap();
    assert!(scal.is_zero(), "{label}: scal = {scal:?}");
    assert_eq!(einstein_check(l, s.metric()).unwrap().scal, scal, "{label}");
}

fn harmonic(l: &LieAlgebra, phi: &KForm) -> Option<G2StarStructure> {
    let s = induce(phi).ok()?;
    let rep = s.harmonic_report(l).ok()?;
    (rep.closed && rep.harmonic).then_some(s)
}

#[test]
fn automorphism_pullbacks_stay_closed_and_harmonic() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for (l, phi) in [
        (catalog::einstein_algebra(), form(catalog::CLOSED_PHI)),
        (catalog::ricci_flat_algebra(), form(catalog::CLOSED_PSI)),
    ] {
        for trial in 0..6 {
            let a = random_automorphism(&l, &mut rng);
            assert!(!a.sub(&Matrix::identity(7)).is_zero() || trial > 0);
            for p in 0..7 {
                let e = KForm::basis(7, &[p]);
                assert_eq!(l.d(&pullback(&a, &e)), pullback(&a, &l.d(&e)));
            }
            let moved = pullback(&a, &phi);
            let s = harmonic(&l, &moved).expect("pullback stays closed and harmonic");
            assert_scal_zero_and_dtau_zero(&l, &s, &format!("{} trial {trial}", l.structure_text()));
        }
    }
}

#[test]
fn rescaled_structures() {
    let l = catalog::einstein_algebra();
    for c in [q(-1, 1), q(8, 1), q(1, 27)] {
        let phi = form(catalog::CLOSED_PHI).scale(&Scalar::Rational(c.clone()));
        let s = harmonic(&l, &phi).expect("rescaling preserves harmonicity");
        assert_scal_zero_and_dtau_zero(&l, &s, &format!("scale {c}"));
    }
}

#[test]
fn random_closed_deformations_filtered_for_harmonicity() {
    let l = catalog::einstein_algebra();
    let family = closed_form_space(&l, 3);
    let base = family.coordinates_of(&form(catalog::CLOSED_PHI)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut stable = 0;
    let mut kept = 0;
    for _ in 0..12 {
        let point: Vec<Q> = base
            .iter()
            .map(|b| if rng.next_u32() % 3 == 0 { b + small_rational(&mut rng) } else { b.clone() })
            .collect();
        let phi = family.specialize(&point);
        assert!(l.d(&phi).is_zero());
        let Ok(s) = induce(&phi) else { continue };
        stable += 1;
        let rep = s.harmonic_report(&l).unwrap();
        assert!(rep.closed);
        if rep.harmonic {
            kept += 1;
            assert_scal_zero_and_dtau_zero(&l, &s, "random deformation");
        }
        assert_eq!(s.scal_from_torsion(&l).unwrap(), einstein_check(&l, s.metric()).unwrap().scal);
    }
    assert!(stable > 0);
    eprintln!("stable {stable}, harmonic {kept}");
}
