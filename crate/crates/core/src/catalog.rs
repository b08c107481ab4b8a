//! Named algebras, coframes, forms and metrics used by the reproduction checks.

use alloc::vec::Vec;

use crate::exterior::{parse_form, KForm};
use crate::liealg::LieAlgebra;
use crate::linalg::Matrix;
use crate::metric::PseudoMetric;
use crate::scalar::{parse_rational, Scalar};

/// Seven-dimensional 6-step nilpotent algebra carrying the non-Ricci-flat
/// Einstein metric.
pub const EINSTEIN_ALGEBRA: &str = "0,0,12,13,14,15+23,16+23+24";

/// Seven-dimensional algebra with a closed, harmonic, Ricci-flat G₂*-form.
pub const RICCI_FLAT_ALGEBRA: &str = "0,0,12,0,0,13+24,15";

/// A nice seven-dimensional nilpotent algebra (filiform-type).
pub const NICE_ALGEBRA: &str = "0,0,12,13,14,15,16+23";

/// The standard G₂*-form in an adapted coframe.
pub const STANDARD_PHI: &str = "-e127 - e347 + e567 + e135 - e146 - e236 - e245";

/// Its Hodge dual for the adapted metric diag(−1,−1,−1,−1,1,1,1).
pub const STANDARD_STAR_PHI: &str = "e1234 - e1256 - e3456 - e2467 + e2357 + e1457 + e1367";

/// Closed G₂*-form on [`EINSTEIN_ALGEBRA`].
pub const CLOSED_PHI: &str = "e137 + 2*e156 - 2*e157 + e235 - e237 + e246 + e345";

/// Closed G₂*-form on [`RICCI_FLAT_ALGEBRA`].
pub const CLOSED_PSI: &str = "e123 + 1/2*e257 + e167 + e347 - e456";

/// Diagonal of the Einstein metric in the frame dual to [`einstein_coframe`].
pub const EINSTEIN_DIAGONAL: [&str; 7] = [
    "71639296000000000/168377826559400929",
    "-1946720000000/2015993900449",
    "-2116000000/6975757441",
    "21160000/24137569",
    "-115000/250563",
    "-600/289",
    "1",
];

pub const EINSTEIN_LAMBDA: &str = "48661191875666868481/659081523200000000000";

fn matrix(rows: &[[&str; 7]]) -> Matrix {
    Matrix::from_rows(
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|x| Scalar::Rational(parse_rational(x).expect("catalog rational")))
                    .collect()
            })
            .collect(),
    )
}

pub fn einstein_algebra() -> LieAlgebra {
    LieAlgebra::parse(EINSTEIN_ALGEBRA).expect("catalog algebra")
}

pub fn ricci_flat_algebra() -> LieAlgebra {
    LieAlgebra::parse(RICCI_FLAT_ALGEBRA).expect("catalog algebra")
}

pub fn nice_algebra() -> LieAlgebra {
    LieAlgebra::parse(NICE_ALGEBRA).expect("catalog algebra")
}

pub fn form(text: &str) -> KForm {
    parse_form(text, 7, None).expect("catalog form")
}

/// Coframe {f^k} for the Einstein metric: row p expresses e^p in the f^q.
pub fn einstein_coframe() -> Matrix {
    matrix(&[
        ["1", "0", "0", "0", "0", "0", "0"],
        ["0", "1", "0", "0", "0", "0", "0"],
        ["0", "-26/51", "1", "0", "0", "0", "0"],
        ["0", "-2300/2601", "-26/51", "1", "0", "0", "0"],
        ["0", "0", "-2300/2601", "46/51", "1", "0", "0"],
        ["0", "0", "0", "-2300/2601", "0", "1", "0"],
        ["0", "0", "0", "0", "0", "-50/51", "1"],
    ])
}

pub fn einstein_metric() -> PseudoMetric {
    let d: Vec<Scalar> = EINSTEIN_DIAGONAL
        .iter()
        .map(|x| Scalar::Rational(parse_rational(x).expect("catalog rational")))
        .collect();
    PseudoMetric::diagonal(&d)
}

/// Adapted coframe {h^k} of [`CLOSED_PHI`]: row p expresses e^p in the h^q.
pub fn closed_phi_coframe() -> Matrix {
    matrix(&[
        ["0", "-1/2", "0", "0", "0", "1/2", "0"],
        ["0", "0", "0", "-1", "0", "0", "1"],
        ["0", "0", "1", "0", "0", "0", "0"],
        ["-1/2", "0", "1", "-1", "1/2", "0", "1"],
        ["1", "0", "1/2", "0", "1", "0", "0"],
        ["0", "1", "0", "-2", "0", "1", "2"],
        ["0", "2", "0", "-3/2", "0", "0", "5/2"],
    ])
}

/// Adapted coframe {x^k} of [`CLOSED_PSI`]: row k expresses x^k in the e^p.
pub fn closed_psi_coframe_forward() -> Matrix {
    matrix(&[
        ["0", "0", "0", "0", "0", "0", "-1"],
        ["1", "0", "0", "0", "0", "-1/2", "0"],
        ["0", "0", "1", "-1/2", "0", "0", "0"],
        ["0", "1/4", "0", "0", "-1", "0", "0"],
        ["0", "0", "-1", "-1/2", "0", "0", "0"],
        ["0", "1/4", "0", "0", "1", "0", "0"],
        ["1", "0", "0", "0", "0", "1/2", "0"],
    ])
}

/// Row p expresses e^p in the x^q.
pub fn closed_psi_coframe() -> Matrix {
    closed_psi_coframe_forward().inverse().expect("invertible coframe")
}

/// Ricci tensor of the metric induced by [`CLOSED_PHI`] in its adapted frame.
pub fn closed_phi_ricci() -> Matrix {
    let mut m = Matrix::zeros(7, 7);
    let quarter = Scalar::frac(1, 4);
    let half = Scalar::frac(1, 2);
    m[(1, 1)] = quarter.clone();
    m[(1, 5)] = -&quarter;
    m[(5, 1)] = -&quarter;
    m[(5, 5)] = quarter;
    m[(3, 3)] = -&half;
    m[(3, 6)] = half.clone();
    m[(6, 3)] = half.clone();
    m[(6, 6)] = -half;
    m
}
