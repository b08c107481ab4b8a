//! Parametrized closed forms and exact or randomized polynomial identity tests.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::catalog;
use crate::error::Result;
use crate::exterior::{indices_of, subsets, KForm, Mask};
use crate::g2star::b_form;
use crate::liealg::LieAlgebra;
use crate::linalg::Matrix;
use crate::scalar::{Poly, Scalar, Q};

/// A form whose coefficients are linear polynomials in named parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ParametrizedForm {
    base: KForm,
    names: Vec<String>,
    free: Vec<Mask>,
}

impl ParametrizedForm {
    pub fn base(&self) -> &KForm {
        &self.base
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// The monomial whose coefficient is each parameter, in parameter order.
    pub fn free_monomials(&self) -> &[Mask] {
        &self.free
    }

    pub fn dimension(&self) -> usize {
        self.names.len()
    }

    /// Index of the parameter named `name`.
    pub fn parameter(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The polynomial `c` for the parameter named `name`.
    pub fn var(&self, name: &str) -> Option<Poly> {
        self.parameter(name).map(Poly::var)
    }

    pub fn specialize(&self, point: &[Q]) -> KForm {
        self.base.eval(point)
    }

    /// Parameter values reproducing `form`, if it lies in the family.
    pub fn coordinates_of(&self, form: &KForm) -> Option<Vec<Q>> {
        let point: Vec<Q> = self
            .free
            .iter()
            .map(|m| form.coeff_mask(*m).as_rational().cloned())
            .collect::<Option<_>>()?;
        (self.specialize(&point) == *form).then_some(point)
    }

    pub fn display(&self) -> String {
        self.base.display_with(&self.names)
    }
}

fn monomial_name(mask: Mask) -> String {
    let mut s = String::from("c");
    for i in indices_of(mask) {
        s.push_str(&format!("{}", i + 1));
    }
    s
}

/// The generic closed k-form of `l`. Elimination runs over the monomials in
/// reverse lexicographic order, so the parameters are the coefficients of the
/// lexicographically earliest monomials that can be chosen freely.
pub fn closed_form_space(l: &LieAlgebra, k: usize) -> ParametrizedForm {
    let n = l.dim();
    let mut cols = subsets(n, k);
    cols.reverse();
    let rows = subsets(n, k + 1);
    let images: Vec<KForm> = cols.iter().map(|m| l.d(&KForm::basis(n, &indices_of(*m)))).collect();
    let d = Matrix::from_fn(rows.len().max(1), cols.len(), |r, c| {
        rows.get(r).map_or_else(Scalar::zero, |m| images[c].coeff_mask(*m))
    });
    let (rref, pivots) = d.rref();
    let mut free_cols: Vec<usize> = (0..cols.len()).filter(|c| !pivots.contains(c)).collect();
    free_cols.reverse();
    let free: Vec<Mask> = free_cols.iter().map(|&c| cols[c]).collect();
    let names: Vec<String> = free.iter().map(|m| monomial_name(*m)).collect();
    let mut value: Vec<Poly> = vec![Poly::zero(); cols.len()];
    for (v, &c) in free_cols.iter().enumerate() {
        value[c] = Poly::var(v);
    }
    for (r, &p) in pivots.iter().enumerate() {
        let mut acc = Poly::zero();
        for (v, &c) in free_cols.iter().enumerate() {
            if let Some(x) = rref[(r, c)].as_rational() {
                if !num_traits::Zero::is_zero(x) {
                    acc = acc.sub(&Poly::var(v).scale(x));
                }
            }
        }
        value[p] = acc;
    }
    let base = KForm::from_masks(
        n,
        k,
        cols.iter().zip(value).map(|(m, p)| (*m, Scalar::from_poly(p))),
    );
    ParametrizedForm { base, names, free }
}

/// The b-matrix of a parametrized 3-form on a 7-space, entrywise polynomial.
pub fn polynomial_b_matrix(p: &ParametrizedForm) -> Result<Matrix> {
    b_form(&p.base)
}

/// Polynomial expressions whose vanishing can be tested.
#[derive(Clone, Debug)]
pub enum Identity {
    Polynomial(Poly),
    Determinant(Matrix),
}

impl Identity {
    /// Upper bound on the total degree.
    pub fn degree_bound(&self) -> u32 {
        match self {
            Identity::Polynomial(p) => p.total_degree(),
            Identity::Determinant(m) => (0..m.rows())
                .map(|i| m.row(i).iter().map(|x| x.as_poly().total_degree()).max().unwrap_or(0))
                .sum(),
        }
    }

    fn eval(&self, point: &[Q]) -> Q {
        match self {
            Identity::Polynomial(p) => p.eval(point),
            Identity::Determinant(m) => {
                let v = m.map(|x| x.eval(point)).det();
                v.as_rational().expect("rational determinant").clone()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Expand,
    Randomized,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// Exact expansion; `terms` is the size of the expanded polynomial.
    Expanded { terms: usize },
    /// Evaluations at `points` random integer points of `sample_bits` bits,
    /// each drawn from stream i of a ChaCha20 generator seeded by `seed`.
    /// When all vanish the chance of a false zero is at most
    /// 2^failure_log2 (Schwartz–Zippel).
    Randomized {
        seed: u64,
        points: usize,
        degree_bound: u32,
        sample_bits: u32,
        failure_log2: f64,
        witness: Option<Vec<Q>>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityVerdict {
    pub is_zero: bool,
    pub certificate: Certificate,
}

pub const DEFAULT_POINTS: usize = 64;
pub const SAMPLE_BITS: u32 = 64;
/// Term budget for symbolic Bareiss before falling back to sampling.
pub const EXPANSION_BUDGET: usize = 20_000;

/// Random integer point number `index` for `seed`; independent of every other.
pub fn sample_point(seed: u64, index: u64, vars: usize) -> Vec<Q> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (0..vars).map(|_| Q::from_integer(BigInt::from(rng.next_u64()))).collect()
}

fn identity_vars(id: &Identity) -> usize {
    match id {
        Identity::Polynomial(p) => p.num_vars(),
        Identity::Determinant(m) => (0..m.rows())
            .flat_map(|i| m.row(i).iter().map(|x| x.as_poly().num_vars()).collect::<Vec<_>>())
            .max()
            .unwrap_or(0),
    }
}

/// Randomized identity test with `points` evaluations (raised to degree + 1
/// when needed).
pub fn verify_randomized(id: &Identity, seed: u64, points: usize) -> IdentityVerdict {
    let degree = id.degree_bound();
    let points = points.max(degree as usize + 1);
    let vars = identity_vars(id);
    let mut witness = None;
    for i in 0..points {
        let point = sample_point(seed, i as u64, vars);
        if !num_traits::Zero::is_zero(&id.eval(&point)) {
            witness = Some(point);
            break;
        }
    }
    let per_point = if degree == 0 {
        f64::NEG_INFINITY
    } else {
        libm::log2(degree as f64) - SAMPLE_BITS as f64
    };
    IdentityVerdict {
        is_zero: witness.is_none(),
        certificate: Certificate::Randomized {
            seed,
            points,
            degree_bound: degree,
            sample_bits: SAMPLE_BITS,
            failure_log2: per_point * points as f64,
            witness,
        },
    }
}

fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut odd = false;
    for start in 0..perm.len() {
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len > 0 && len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

/// Bareiss after moving the sparsest rows and columns first, which keeps the
/// intermediate polynomials small for nearly triangular matrices.
fn sparse_first_det(m: &Matrix, budget: usize) -> Option<Poly> {
    let n = m.rows();
    let weight = |cells: &mut dyn Iterator<Item = &Scalar>| -> (usize, usize) {
        cells.fold((0, 0), |(nz, terms), x| {
            let len = x.as_poly().len();
            (nz + usize::from(len > 0), terms + len)
        })
    };
    let mut rows: Vec<usize> = (0..n).collect();
    rows.sort_by_key(|&i| weight(&mut m.row(i).iter()));
    let mut cols: Vec<usize> = (0..m.cols()).collect();
    cols.sort_by_key(|&j| weight(&mut (0..n).map(|i| &m[(i, j)])));
    let d = m.submatrix(&rows, &cols).det_bareiss(budget)?.as_poly();
    Some(if permutation_is_odd(&rows) != permutation_is_odd(&cols) { d.neg() } else { d })
}

/// Decides whether the expression vanishes identically. `Expand` expands
/// symbolically and falls back to sampling when the expansion exceeds
/// [`EXPANSION_BUDGET`] terms.
pub fn verify_identity(id: &Identity, method: Method, seed: u64) -> IdentityVerdict {
    if method == Method::Expand {
        let expanded = match id {
            Identity::Polynomial(p) => Some(p.clone()),
            Identity::Determinant(m) => sparse_first_det(m, EXPANSION_BUDGET),
        };
        if let Some(p) = expanded {
            return IdentityVerdict {
                is_zero: p.is_zero(),
                certificate: Certificate::Expanded { terms: p.len() },
            };
        }
    }
    verify_randomized(id, seed, DEFAULT_POINTS)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaCheck {
    pub name: String,
    pub applicable: bool,
    pub holds: Option<bool>,
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaReport {
    pub family: ParametrizedForm,
    pub bmatrix: Matrix,
    pub degenerate_family: bool,
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    /// True when every applicable check holds.
    pub fn all_hold(&self) -> bool {
        self.checks.iter().filter(|c| c.applicable).all(|c| c.holds == Some(true))
    }
}

fn poly(x: &Scalar) -> Poly {
    x.as_poly()
}

fn lemma_poly(p: &ParametrizedForm, terms: &[(&[&str], i64, i64)]) -> Poly {
    terms.iter().fold(Poly::zero(), |acc, (vars, num, den)| {
        let mono = vars.iter().fold(Poly::constant(Q::from_integer(1.into())), |m, v| {
            m.mul(&p.var(v).expect("named parameter"))
        });
        acc.add(&mono.scale(&Q::new((*num).into(), (*den).into())))
    })
}

/// Runs the vanishing identities behind the closed G₂* obstruction on the
/// seven-dimensional Einstein algebra. Identities specific to that algebra
/// are marked not applicable on other algebras.
pub fn lemma_suite(l: &LieAlgebra, method: Method, seed: u64) -> Result<LemmaReport> {
    let family = closed_form_space(l, 3);
    let bmatrix = polynomial_b_matrix(&family)?;
    let degenerate_family = bmatrix.is_zero();
    let target = catalog::einstein_algebra();
    let applicable = l.structure_text() == target.structure_text();
    let mut checks = Vec::new();
    let mut push = |name: &str, verdict: Option<IdentityVerdict>| {
        checks.push(LemmaCheck {
            name: name.into(),
            applicable,
            holds: verdict.as_ref().map(|v| v.is_zero),
            certificate: verdict.map(|v| v.certificate),
        });
    };
    let b = |i: usize, j: usize| poly(&bmatrix[(i - 1, j - 1)]);
    let run = |id: Identity| applicable.then(|| verify_identity(&id, method, seed));
    let expand = |p: Poly| applicable.then(|| verify_identity(&Identity::Polynomial(p), Method::Expand, seed));

    push("b(e7,e7) = 0", expand(b(7, 7)));
    push("b(e7,e6) = 0", expand(b(7, 6)));
    push("b(e7,e5) = 0", expand(b(7, 5)));
    push("b(e6,e6) = 0", expand(b(6, 6)));

    let rest: Vec<usize> = (1..7).collect();
    push("det b(e_i,e_j), 2<=i,j<=7 = 0", run(Identity::Determinant(bmatrix.submatrix(&rest, &rest))));
    let rows: Vec<usize> = (0..7).filter(|&i| i != 0).collect();
    let cols: Vec<usize> = (0..7).filter(|&j| j != 1).collect();
    push("det b(e_i,e_j), i!=1, j!=2 = 0", run(Identity::Determinant(bmatrix.submatrix(&rows, &cols))));

    push("b(e5,e6) + 2 b(e4,e7) = 0", expand(b(5, 6).add(&b(4, 7).scale(&Q::from_integer(2.into())))));
    if applicable {
        let f47 = lemma_poly(
            &family,
            &[
                (&["c167", "c167", "c157"], -1, 2),
                (&["c167", "c167", "c167"], 1, 2),
                (&["c167", "c167", "c237"], 1, 2),
            ],
        );
        let f37 = lemma_poly(
            &family,
            &[
                (&["c167", "c237", "c157"], -1, 2),
                (&["c167", "c237", "c167"], 1, 2),
                (&["c167", "c237", "c237"], 1, 2),
            ],
        );
        push("b(e4,e7) = 1/2 c167^2 (-c157 + c167 + c237)", expand(b(4, 7).sub(&f47)));
        push("b(e3,e7) = 1/2 c167 c237 (-c157 + c167 + c237)", expand(b(3, 7).sub(&f37)));
    } else {
        push("b(e4,e7) = 1/2 c167^2 (-c157 + c167 + c237)", None);
        push("b(e3,e7) = 1/2 c167 c237 (-c157 + c167 + c237)", None);
    }

    let adjoint_ok = applicable.then(|| adjoint_images_match(l));
    checks.push(LemmaCheck {
        name: "adjoint images ad(e_1..e_7)".into(),
        applicable,
        holds: adjoint_ok,
        certificate: None,
    });
    let gap = applicable.then(|| l.derived().dim() as i64 - l.center().dim() as i64 == 4);
    checks.push(LemmaCheck {
        name: "dim g^1 - dim z = 4".into(),
        applicable,
        holds: gap,
        certificate: None,
    });
    Ok(LemmaReport {
        family,
        bmatrix,
        degenerate_family,
        checks,
    })
}

/// The displayed adjoint images, as (form index, vector index, sign) triples
/// per generator, 1-based.
pub const ADJOINT_IMAGES: [&[(usize, usize, i64)]; 7] = [
    &[(2, 3, -1), (3, 4, -1), (4, 5, -1), (5, 6, -1), (6, 7, -1)],
    &[(1, 3, 1), (3, 6, -1), (3, 7, -1), (4, 7, -1)],
    &[(1, 4, 1), (2, 6, 1), (2, 7, 1)],
    &[(1, 5, 1), (2, 7, 1)],
    &[(1, 6, 1)],
    &[(1, 7, 1)],
    &[],
];

fn adjoint_images_match(l: &LieAlgebra) -> bool {
    (0..7).all(|i| {
        let mut expected = Matrix::zeros(7, 7);
        for &(form, vector, sign) in ADJOINT_IMAGES[i] {
            expected[(vector - 1, form - 1)] = Scalar::int(sign);
        }
        l.ad(i) == expected
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_family_is_everything() {
        let f = closed_form_space(&LieAlgebra::abelian(7), 3);
        assert_eq!(f.dimension(), 35);
        assert_eq!(f.names()[0], "c123");
        assert_eq!(f.names()[34], "c567");
    }

    #[test]
    fn randomized_detects_nonzero() {
        let p = Poly::var(0).mul(&Poly::var(1)).sub(&Poly::var(1));
        let v = verify_identity(&Identity::Polynomial(p.clone()), Method::Randomized, 7);
        assert!(!v.is_zero);
        match v.certificate {
            Certificate::Randomized { witness: Some(w), .. } => {
                assert!(!num_traits::Zero::is_zero(&p.eval(&w)))
            }
            other => panic!("{other:?}"),
        }
        let zero = p.sub(&p);
        assert!(verify_identity(&Identity::Polynomial(zero), Method::Randomized, 7).is_zero);
    }

    #[test]
    fn reordering_keeps_the_determinant() {
        let x = Scalar::var(0);
        let y = Scalar::var(1);
        let m = Matrix::from_rows(vec![
            vec![x.clone(), y.clone(), Scalar::int(2)],
            vec![Scalar::zero(), y.clone(), Scalar::zero()],
            vec![Scalar::int(3), x.mul(&y), Scalar::zero()],
        ]);
        assert_eq!(sparse_first_det(&m, usize::MAX).unwrap(), m.det().as_poly());
        assert!(permutation_is_odd(&[1, 0, 2]));
        assert!(!permutation_is_odd(&[1, 2, 0]));
    }

    #[test]
    fn sample_points_are_reproducible_and_independent() {
        assert_eq!(sample_point(3, 5, 4), sample_point(3, 5, 4));
        assert_ne!(sample_point(3, 5, 4), sample_point(3, 6, 4));
        assert_ne!(sample_point(3, 5, 4), sample_point(4, 5, 4));
    }
}
