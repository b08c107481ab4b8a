//! Left-invariant pseudo-metrics: Levi-Civita connection, curvature, Ricci,
//! Einstein test and the null-space obstruction quantities.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exterior::{form_inner, KForm, Vector};
use crate::liealg::{LieAlgebra, Subspace};
use crate::linalg::{Inertia, Matrix};
use crate::scalar::{Arith, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoMetric {
    gram: Matrix,
}

/// (#positive, #negative) directions.
pub type Signature = (usize, usize);

impl PseudoMetric {
    pub fn new(gram: Matrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::Dimension {
                expected: gram.rows(),
                found: gram.cols(),
            });
        }
        if !gram.is_symmetric() {
            return Err(Error::Precondition("Gram matrix is not symmetric".into()));
        }
        Ok(PseudoMetric { gram })
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        PseudoMetric {
            gram: Matrix::diagonal(entries),
        }
    }

    /// diag(−1,−1,−1,−1,1,1,1) in dimension 7, or its analogue (first four negative).
    pub fn eta(n: usize) -> Self {
        let e: Vec<Scalar> = (0..n).map(|i| Scalar::int(if i < 4 { -1 } else { 1 })).collect();
        Self::diagonal(&e)
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn inertia(&self) -> Inertia {
        self.gram.inertia()
    }

    pub fn signature(&self) -> Signature {
        let i = self.inertia();
        (i.positive, i.negative)
    }

    pub fn is_degenerate(&self) -> bool {
        self.gram.det().is_zero()
    }

    /// Gram matrix of the metric on the coframe (g⁻¹).
    pub fn dual(&self) -> Result<Matrix> {
        self.gram.inverse().map_err(|_| Error::SingularMetric)
    }

    /// (adj g, det g): the coframe Gram matrix is adj/det. Works over
    /// polynomial entries, where division is unavailable.
    pub fn dual_adjugate(&self) -> (Matrix, Scalar) {
        (self.gram.adjugate(), self.gram.det())
    }

    pub fn eval(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let gv = self.gram.apply(v);
        u.iter().zip(&gv).fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
    }

    /// v♭ = ι_v g.
    pub fn flat(&self, v: &Vector) -> KForm {
        let n = self.dim();
        let gv = self.gram.apply(v.components());
        KForm::from_masks(n, 1, gv.into_iter().enumerate().map(|(j, c)| (1u32 << j, c)))
    }

    /// The same metric in a new frame; column i of `frame` is the i-th new
    /// vector in old coordinates.
    pub fn in_frame(&self, frame: &Matrix) -> Self {
        PseudoMetric {
            gram: frame.transpose().mul(&self.gram).mul(frame),
        }
    }
}

/// Bracket components [e_i, e_j]_k as a flat n³ array.
pub fn bracket_table(l: &LieAlgebra) -> Vec<Scalar> {
    let n = l.dim();
    let mut out = vec![Scalar::zero(); n * n * n];
    for k in 0..n {
        for (mask, c) in l.de(k).raw_terms() {
            let i = mask.trailing_zeros() as usize;
            let j = (31 - mask.leading_zeros()) as usize;
            out[(i * n + j) * n + k] = -c;
            out[(j * n + i) * n + k] = c.clone();
        }
    }
    out
}

/// Γ^k_{ij} (flat, index (i·n + j)·n + k) from the Koszul formula.
pub fn christoffel<T: Arith>(n: usize, br: &[T], g: &[T], ginv: &[T]) -> Vec<T> {
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    // gb[i][j][k] = g([e_i, e_j], e_k)
    let mut gb = vec![T::zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for m in 0..n {
                let b = &br[idx(i, j, m)];
                if b.is_zero() {
                    continue;
                }
                for k in 0..n {
                    let gm = &g[m * n + k];
                    if !gm.is_zero() {
                        gb[idx(i, j, k)] = gb[idx(i, j, k)].plus(&b.times(gm));
                    }
                }
            }
        }
    }
    let mut gamma = vec![T::zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            let low: Vec<T> = (0..n)
                .map(|k| gb[idx(i, j, k)].minus(&gb[idx(j, k, i)]).plus(&gb[idx(k, i, j)]).halved())
                .collect();
            for k in 0..n {
                let mut acc = T::zero();
                for (l, lv) in low.iter().enumerate() {
                    let gi = &ginv[k * n + l];
                    if !lv.is_zero() && !gi.is_zero() {
                        acc = acc.plus(&gi.times(lv));
                    }
                }
                gamma[idx(i, j, k)] = acc;
            }
        }
    }
    gamma
}

/// R(e_i, e_j) e_l = Σ_p R[i][j][l][p] e_p (flat, index ((i·n + j)·n + l)·n + p).
pub fn curvature_endomorphisms<T: Arith>(n: usize, br: &[T], gamma: &[T]) -> Vec<T> {
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let mut r = vec![T::zero(); n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for l in 0..n {
                for p in 0..n {
                    let mut acc = T::zero();
                    for m in 0..n {
                        let a = &gamma[idx(j, l, m)];
                        if !a.is_zero() {
                            acc = acc.plus(&a.times(&gamma[idx(i, m, p)]));
                        }
                        let b = &gamma[idx(i, l, m)];
                        if !b.is_zero() {
                            acc = acc.minus(&b.times(&gamma[idx(j, m, p)]));
                        }
                        let c = &br[idx(i, j, m)];
                        if !c.is_zero() {
                            acc = acc.minus(&c.times(&gamma[idx(m, l, p)]));
                        }
                    }
                    r[((i * n + j) * n + l) * n + p] = acc;
                }
            }
        }
    }
    r
}

/// Ric(e_j, e_l) = tr(X ↦ R(X, e_j) e_l), as a flat n² array. The trace is
/// taken directly from Γ, without forming the curvature tensor.
pub fn ricci_generic<T: Arith>(n: usize, br: &[T], g: &[T], ginv: &[T]) -> Vec<T> {
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let gamma = christoffel(n, br, g, ginv);
    // Σ_i Γ^i_{im}
    let div: Vec<T> = (0..n)
        .map(|m| (0..n).fold(T::zero(), |acc, i| acc.plus(&gamma[idx(i, m, i)])))
        .collect();
    let mut ric = vec![T::zero(); n * n];
    for j in 0..n {
        for l in 0..n {
            let mut acc = T::zero();
            for m in 0..n {
                let a = &gamma[idx(j, l, m)];
                if !a.is_zero() && !div[m].is_zero() {
                    acc = acc.plus(&a.times(&div[m]));
                }
                for i in 0..n {
                    let b = &gamma[idx(i, l, m)];
                    if !b.is_zero() {
                        let c = &gamma[idx(j, m, i)];
                        if !c.is_zero() {
                            acc = acc.minus(&b.times(c));
                        }
                    }
                    let c = &br[idx(i, j, m)];
                    if !c.is_zero() {
                        let d = &gamma[idx(m, l, i)];
                        if !d.is_zero() {
                            acc = acc.minus(&c.times(d));
                        }
                    }
                }
            }
            ric[j * n + l] = acc;
        }
    }
    ric
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    n: usize,
    gamma: Vec<Scalar>,
}

impl Connection {
    /// Γ^k_{ij}: ∇_{e_i} e_j = Σ_k Γ^k_{ij} e_k.
    pub fn gamma(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.gamma[(i * self.n + j) * self.n + k]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.iter().all(Scalar::is_zero)
    }
}

/// Lowered curvature R_{ijkl} = g(R(e_i, e_j) e_k, e_l) with
/// R(X, Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_{[X,Y]}, so that Ric_{jk} = Σ g^{il} R_{ijkl}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureTensor {
    n: usize,
    r: Vec<Scalar>,
}

impl CurvatureTensor {
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &Scalar {
        let n = self.n;
        &self.r[((i * n + j) * n + k) * n + l]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.r.iter().all(Scalar::is_zero)
    }

    /// Nonzero components with i<j, k<l and (i,j) ≤ (k,l), 0-based.
    pub fn independent_nonzero(&self) -> Vec<((usize, usize, usize, usize), Scalar)> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    for l in k + 1..n {
                        if (i, j) > (k, l) {
                            continue;
                        }
                        let v = self.get(i, j, k, l);
                        if !v.is_zero() {
                            out.push(((i, j, k, l), v.clone()));
                        }
                    }
                }
            }
        }
        out
    }

    /// Antisymmetry in each pair, pair symmetry and the first Bianchi identity.
    pub fn has_symmetries(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = self.get(i, j, k, l);
                        if *v != -self.get(j, i, k, l)
                            || *v != -self.get(i, j, l, k)
                            || v != self.get(k, l, i, j)
                        {
                            return false;
                        }
                        let b = v + self.get(j, k, i, l) + self.get(k, i, j, l);
                        if !b.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RicciMode {
    General,
    Nilpotent,
}

fn flat(m: &Matrix) -> Vec<Scalar> {
    m.to_rows().concat()
}

fn check_dims(l: &LieAlgebra, g: &PseudoMetric) -> Result<()> {
    if l.dim() != g.dim() {
        return Err(Error::Dimension {
            expected: l.dim(),
            found: g.dim(),
        });
    }
    Ok(())
}

pub fn levi_civita(l: &LieAlgebra, g: &PseudoMetric) -> Result<Connection> {
    check_dims(l, g)?;
    let ginv = g.dual()?;
    let n = l.dim();
    let gamma = christoffel(n, &bracket_table(l), &flat(g.gram()), &flat(&ginv));
    Ok(Connection { n, gamma })
}

pub fn riemann(l: &LieAlgebra, g: &PseudoMetric) -> Result<CurvatureTensor> {
    check_dims(l, g)?;
    let ginv = g.dual()?;
    let n = l.dim();
    let br = bracket_table(l);
    let gamma = christoffel(n, &br, &flat(g.gram()), &flat(&ginv));
    let rend = curvature_endomorphisms(n, &br, &gamma);
    let gram = g.gram();
    let mut r = vec![Scalar::zero(); n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l_ in 0..n {
                    let mut acc = Scalar::zero();
                    for p in 0..n {
                        let a = &rend[((i * n + j) * n + k) * n + p];
                        if !a.is_zero() && !gram[(p, l_)].is_zero() {
                            acc = acc + a * &gram[(p, l_)];
                        }
                    }
                    r[((i * n + j) * n + k) * n + l_] = acc;
                }
            }
        }
    }
    Ok(CurvatureTensor { n, r })
}

/// h(A, B) = Σ A_{kj} B_{k'j'} g^{jj'} g_{kk'} on g* ⊗ g (A_{kj}: e^j ⊗ e_k).
fn endo_inner(a: &Matrix, b: &Matrix, g: &Matrix, ginv: &Matrix) -> Scalar {
    // tr(Aᵀ g B g⁻¹)
    a.transpose().mul(g).mul(b).mul(ginv).trace()
}

pub fn ricci(l: &LieAlgebra, g: &PseudoMetric, mode: RicciMode) -> Result<Matrix> {
    check_dims(l, g)?;
    let n = l.dim();
    let ginv = g.dual()?;
    match mode {
        RicciMode::General => {
            let ric = ricci_generic(n, &bracket_table(l), &flat(g.gram()), &flat(&ginv));
            Ok(Matrix::from_fn(n, n, |i, j| ric[i * n + j].clone()))
        }
        RicciMode::Nilpotent => {
            if !l.is_unimodular() || !l.killing_form().is_zero() {
                return Err(Error::Precondition(
                    "the ad formula needs a unimodular algebra with zero Killing form".into(),
                ));
            }
            let flats: Vec<KForm> = (0..n)
                .map(|i| l.d(&g.flat(&Vector::basis(n, i))))
                .collect();
            let ads: Vec<Matrix> = (0..n).map(|i| l.ad(i)).collect();
            let mut ric = Matrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let a = form_inner(&ginv, &flats[i], &flats[j])?;
                    let b = endo_inner(&ads[i], &ads[j], g.gram(), &ginv);
                    let v = (a - b).scale(&crate::scalar::q(1, 2));
                    ric[(i, j)] = v.clone();
                    ric[(j, i)] = v;
                }
            }
            Ok(ric)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EinsteinVerdict {
    NotEinstein,
    Einstein(Scalar),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EinsteinReport {
    pub verdict: EinsteinVerdict,
    pub ricci: Matrix,
    pub scal: Scalar,
}

/// Ric = λ g for a single λ? Ricci-flat is reported as Einstein(0).
pub fn einstein_check(l: &LieAlgebra, g: &PseudoMetric) -> Result<EinsteinReport> {
    let ric = ricci(l, g, RicciMode::General)?;
    let ginv = g.dual()?;
    let n = l.dim();
    let mut scal = Scalar::zero();
    for i in 0..n {
        for j in 0..n {
            if !ginv[(i, j)].is_zero() {
                scal = scal + &ginv[(i, j)] * &ric[(i, j)];
            }
        }
    }
    let gram = g.gram();
    let lambda = (0..n * n)
        .map(|t| (t / n, t % n))
        .find(|&(i, j)| !gram[(i, j)].is_zero())
        .map(|(i, j)| ric[(i, j)].div(&gram[(i, j)]))
        .transpose()?
        .unwrap_or_else(Scalar::zero);
    let verdict = if ric.sub(&gram.scale(&lambda)).is_zero() {
        EinsteinVerdict::Einstein(lambda)
    } else {
        EinsteinVerdict::NotEinstein
    };
    Ok(EinsteinReport { verdict, ricci: ric, scal })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub dim_m: usize,
    pub dim_n: usize,
    pub dim_derived: usize,
    pub dim_center: usize,
    pub inequality_holds: bool,
}

/// Dimension of the radical of a symmetric form restricted to span(basis).
fn radical_dim(basis: &[Vec<Scalar>], form: impl Fn(&[Scalar], &[Scalar]) -> Scalar) -> usize {
    let m = basis.len();
    if m == 0 {
        return 0;
    }
    let gram = Matrix::from_fn(m, m, |a, b| form(&basis[a], &basis[b]));
    m - gram.rank()
}

pub fn obstruction_dims(l: &LieAlgebra, g: &PseudoMetric) -> Result<ObstructionReport> {
    check_dims(l, g)?;
    let n = l.dim();
    let ginv = g.dual()?;
    let gram = g.gram().clone();

    let ads: Vec<Vec<Scalar>> = (0..n).map(|i| flat(&l.ad(i))).collect();
    let ad_space = Subspace::span(n * n, &ads);
    let dim_m = radical_dim(ad_space.basis(), |a, b| {
        let am = Matrix::from_fn(n, n, |i, j| a[i * n + j].clone());
        let bm = Matrix::from_fn(n, n, |i, j| b[i * n + j].clone());
        endo_inner(&am, &bm, &gram, &ginv)
    });

    let two = crate::exterior::subsets(n, 2);
    let des: Vec<Vec<Scalar>> = (0..n)
        .map(|k| two.iter().map(|m| l.de(k).coeff_mask(*m)).collect())
        .collect();
    let d_space = Subspace::span(two.len(), &des);
    let to_form = |v: &[Scalar]| KForm::from_masks(n, 2, two.iter().copied().zip(v.iter().cloned()));
    let dim_n = radical_dim(d_space.basis(), |a, b| {
        form_inner(&ginv, &to_form(a), &to_form(b)).expect("2-forms of equal degree")
    });

    let report = l.structure_report();
    let dim_derived = report.derived.dim();
    let dim_center = report.center.dim();
    Ok(ObstructionReport {
        dim_m,
        dim_n,
        dim_derived,
        dim_center,
        inequality_holds: dim_m + dim_n + dim_center >= dim_derived,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn ints(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::int(x)).collect()
    }

    #[test]
    fn abelian_is_flat() {
        let l = LieAlgebra::abelian(3);
        let g = PseudoMetric::diagonal(&ints(&[1, -2, 3]));
        assert!(levi_civita(&l, &g).unwrap().is_zero());
        let rep = einstein_check(&l, &g).unwrap();
        assert_eq!(rep.verdict, EinsteinVerdict::Einstein(Scalar::zero()));
    }

    #[test]
    fn heisenberg_christoffels_solve_koszul_system() {
        // Brute force: unknowns Γ^k_{ij}, equations from torsion-freeness
        // and metric compatibility with g = identity.
        let l = LieAlgebra::parse("0,0,12").unwrap();
        let g = PseudoMetric::diagonal(&ints(&[1, 1, 1]));
        let n = 3;
        let br = bracket_table(&l);
        let var = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut r = vec![Scalar::zero(); 27];
                    r[var(i, j, k)] = Scalar::one();
                    r[var(j, i, k)] = &r[var(j, i, k)] - &Scalar::one();
                    rows.push(r);
                    rhs.push(br[var(i, j, k)].clone());
                    let mut r = vec![Scalar::zero(); 27];
                    r[var(i, j, k)] = Scalar::one();
                    r[var(i, k, j)] = &r[var(i, k, j)] + &Scalar::one();
                    rows.push(r);
                    rhs.push(Scalar::zero());
                }
            }
        }
        let sys = Matrix::from_rows(rows);
        assert_eq!(sys.rank(), 27);
        let sol = sys.solve(&rhs).unwrap();
        let conn = levi_civita(&l, &g).unwrap();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    assert_eq!(conn.gamma(i, j, k), &sol[var(i, j, k)]);
                }
            }
        }
        // ∇_{e1} e2 = -½ e3
        assert_eq!(conn.gamma(0, 1, 2), &Scalar::Rational(q(-1, 2)));
    }

    #[test]
    fn modes_agree_on_heisenberg() {
        let l = LieAlgebra::parse("0,0,12").unwrap();
        let mut gram = Matrix::diagonal(&ints(&[2, -1, 3]));
        gram[(0, 2)] = Scalar::Rational(q(1, 3));
        gram[(2, 0)] = Scalar::Rational(q(1, 3));
        let g = PseudoMetric::new(gram).unwrap();
        assert_eq!(
            ricci(&l, &g, RicciMode::General).unwrap(),
            ricci(&l, &g, RicciMode::Nilpotent).unwrap()
        );
        assert!(riemann(&l, &g).unwrap().has_symmetries());
    }

    #[test]
    fn nilpotent_mode_checks_hypotheses() {
        // Non-unimodular: de2 = e12 (ad e1 has trace)
        let l = LieAlgebra::parse("0,12").unwrap();
        let g = PseudoMetric::diagonal(&ints(&[1, 1]));
        assert!(matches!(
            ricci(&l, &g, RicciMode::Nilpotent),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn singular_metric_is_refused() {
        let l = LieAlgebra::parse("0,0,12").unwrap();
        let g = PseudoMetric::diagonal(&ints(&[1, 0, 1]));
        assert_eq!(levi_civita(&l, &g).unwrap_err(), Error::SingularMetric);
    }
}
