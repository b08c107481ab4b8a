use nilgeom_core::catalog;
use nilgeom_core::metric::{einstein_check, ricci, EinsteinVerdict, RicciMode};
use nilgeom_core::scalar::{parse_rational, Scalar};

fn lambda() -> Scalar {
    Scalar::Rational(parse_rational(catalog::EINSTEIN_LAMBDA).unwrap())
}

#[test]
fn coframe_change_gives_displayed_structure_equations() {
    let f = catalog::einstein_algebra().change_of_basis(&catalog::einstein_coframe()).unwrap();
    assert_eq!(
        f.structure_text(),
        "0,0,12,13,-24/17*13+14,46/51*14+15+23,50/51*15+16+25/17*23+24"
    );
}

#[test]
fn both_ricci_modes_give_lambda_times_g() {
    let f = catalog::einstein_algebra().change_of_basis(&catalog::einstein_coframe()).unwrap();
    let g = catalog::einstein_metric();
    let expected = g.gram().scale(&lambda());
    assert_eq!(ricci(&f, &g, RicciMode::General).unwrap(), expected);
    assert_eq!(ricci(&f, &g, RicciMode::Nilpotent).unwrap(), expected);
    let rep = einstein_check(&f, &g).unwrap();
    assert_eq!(rep.verdict, EinsteinVerdict::Einstein(lambda()));
    assert_eq!(rep.scal, lambda().scale(&parse_rational("7").unwrap()));
}

#[test]
fn gram_trace_is_not_minus_one_but_sign_trace_is() {
    let g = catalog::einstein_metric();
    assert_eq!(
        g.gram().trace(),
        Scalar::Rational(parse_rational("-758688166904322013/505133479678202787").unwrap())
    );
    assert_eq!(g.signature(), (3, 4));
    let (p, q) = g.signature();
    assert_eq!(p as i64 - q as i64, -1);
}
