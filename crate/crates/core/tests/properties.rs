use nilgeom_core::catalog;
use nilgeom_core::exterior::{subsets, HodgeStar, KForm, Vector};
use nilgeom_core::liealg::LieAlgebra;
use nilgeom_core::linalg::Matrix;
use nilgeom_core::metric::{levi_civita, ricci, riemann, PseudoMetric, RicciMode};
use nilgeom_core::scalar::{q, NinthRoot, Q};
use nilgeom_core::Scalar;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(200)
}

fn form_strategy(k: usize) -> impl Strategy<Value = KForm> {
    let count = subsets(7, k).len();
    prop::collection::vec((0..count, -4i64..=4), 0..8).prop_map(move |terms| {
        let masks = subsets(7, k);
        terms.into_iter().fold(KForm::zero(7, k), |acc, (i, c)| {
            acc.add(&KForm::from_masks(7, k, [(masks[i], Scalar::int(c))]))
        })
    })
}

fn any_form() -> impl Strategy<Value = KForm> {
    (0usize..=7).prop_flat_map(form_strategy)
}

fn rational() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| q(n, d))
}

fn vector() -> impl Strategy<Value = Vector> {
    prop::collection::vec(rational(), 7).prop_map(|v| Vector::new(v.into_iter().map(Scalar::Rational).collect()))
}

/// Unit lower-triangular change of frame with small rational entries.
fn unitriangular() -> impl Strategy<Value = Matrix> {
    prop::collection::vec(rational(), 21).prop_map(|v| {
        let mut m = Matrix::identity(7);
        let mut it = v.into_iter();
        for a in 0..7 {
            for b in 0..a {
                m[(a, b)] = Scalar::Rational(it.next().unwrap());
            }
        }
        m
    })
}

/// Mᵀ diag(±s²) M with four negative and three positive entries; returns the
/// Gram matrix and the volume coefficient Π s.
fn signature_metric() -> impl Strategy<Value = (Matrix, Scalar)> {
    (unitriangular(), prop::collection::vec(1i64..=4, 7), Just(()).prop_perturb(|_, mut rng| {
        let mut signs = [-1i64, -1, -1, -1, 1, 1, 1];
        for i in (1..7).rev() {
            signs.swap(i, (rng.next_u32() as usize) % (i + 1));
        }
        signs
    }))
        .prop_map(|(m, s, signs)| {
            let d = Matrix::diagonal(&(0..7).map(|i| Scalar::int(signs[i] * s[i] * s[i])).collect::<Vec<_>>());
            let vol = s.iter().fold(Scalar::one(), |acc, x| acc.mul(&Scalar::int(*x)));
            (m.transpose().mul(&d).mul(&m), vol)
        })
}

fn algebras() -> Vec<LieAlgebra> {
    vec![catalog::einstein_algebra(), catalog::ricci_flat_algebra(), catalog::nice_algebra()]
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn d_squared_vanishes(a in form_strategy(1), b in form_strategy(2), c in form_strategy(3), which in 0usize..3) {
        let l = &algebras()[which];
        for f in [&a, &b, &c] {
            prop_assert!(l.d(&l.d(f)).is_zero());
        }
    }

    #[test]
    fn d_is_an_antiderivation(a in form_strategy(1), b in form_strategy(2), which in 0usize..3) {
        let l = &algebras()[which];
        let lhs = l.d(&a.wedge(&b).unwrap());
        let rhs = l.d(&a).wedge(&b).unwrap().sub(&a.wedge(&l.d(&b)).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_is_graded_commutative(a in any_form(), b in any_form()) {
        let ab = a.wedge(&b);
        let ba = b.wedge(&a);
        match (ab, ba) {
            (Ok(ab), Ok(ba)) => {
                let sign = if a.degree() * b.degree() % 2 == 1 { ba.neg() } else { ba };
                prop_assert_eq!(ab, sign);
            }
            (ab, ba) => prop_assert!(ab.is_err() && ba.is_err() && a.degree() + b.degree() > 7),
        }
    }

    #[test]
    fn wedge_is_associative(a in form_strategy(1), b in form_strategy(2), c in form_strategy(2)) {
        let left = a.wedge(&b).unwrap().wedge(&c).unwrap();
        let right = a.wedge(&b.wedge(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn contraction_is_an_antiderivation(a in form_strategy(3), b in form_strategy(2), v in vector()) {
        let lhs = a.wedge(&b).unwrap().contract(&v).unwrap();
        let rhs = a.contract(&v).unwrap().wedge(&b).unwrap()
            .sub(&a.wedge(&b.contract(&v).unwrap()).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert!(a.contract(&v).unwrap().contract(&v).unwrap().is_zero());
    }

    #[test]
    fn star_is_an_involution((gram, vol) in signature_metric(), a in any_form()) {
        let star = HodgeStar::from_metric(&gram, vol).unwrap();
        prop_assert_eq!(star.star(&star.star(&a)), a.clone());
        let lhs = a.wedge(&star.star(&a)).unwrap();
        prop_assert_eq!(lhs, star.volume().scale(&star.inner(&a, &a).unwrap()));
    }

    #[test]
    fn curvature_symmetries_on_random_metrics((gram, _) in signature_metric(), which in 0usize..2) {
        let l = &algebras()[which];
        let g = PseudoMetric::new(gram).unwrap();
        let r = riemann(l, &g).unwrap();
        prop_assert!(r.has_symmetries());
    }

    #[test]
    fn levi_civita_is_torsion_free_and_metric((gram, _) in signature_metric(), which in 0usize..3) {
        let l = &algebras()[which];
        let g = PseudoMetric::new(gram.clone()).unwrap();
        let c = levi_civita(l, &g).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                let br = l.bracket_basis(i, j);
                for k in 0..7 {
                    prop_assert_eq!(c.gamma(i, j, k).sub(c.gamma(j, i, k)), br[k].clone());
                    let mut compat = Scalar::zero();
                    for m in 0..7 {
                        compat = compat.add(&c.gamma(i, j, m).mul(&gram[(m, k)]));
                        compat = compat.add(&c.gamma(i, k, m).mul(&gram[(j, m)]));
                    }
                    prop_assert!(compat.is_zero());
                }
            }
        }
    }

    #[test]
    fn ricci_modes_agree((gram, _) in signature_metric(), which in 0usize..2) {
        let l = &algebras()[which];
        let g = PseudoMetric::new(gram).unwrap();
        let general = ricci(l, &g, RicciMode::General).unwrap();
        prop_assert_eq!(ricci(l, &g, RicciMode::Nilpotent).unwrap(), general.clone());
        prop_assert!(general.is_symmetric());
    }

    #[test]
    fn change_of_basis_round_trips(m in unitriangular(), which in 0usize..3) {
        let l = &algebras()[which];
        let there = l.change_of_basis(&m).unwrap();
        prop_assert_eq!(there.change_of_basis(&m.inverse().unwrap()).unwrap(), l.clone());
    }

    #[test]
    fn ninth_root_field_arithmetic(
        a in prop::collection::vec(rational(), 9),
        b in prop::collection::vec(rational(), 9),
        c in prop::collection::vec(rational(), 9),
        p in prop::sample::select(vec![2i64, 3, 5, 7, 11, 13, 8, -27, 512]),
    ) {
        let make = |v: &[Q]| NinthRoot::new(core::array::from_fn(|i| v[i].clone()), q(p, 1));
        let (x, y, z) = (make(&a), make(&b), make(&c));
        prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        if !x.is_zero() {
            let inv = x.inverse().unwrap();
            prop_assert_eq!(x.mul(&inv), NinthRoot::from_rational(q(1, 1), q(p, 1)));
        }
    }
}
