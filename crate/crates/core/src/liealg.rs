//! Lie algebras given by structure equations de^k on a fixed coframe.
//!
//! With de^k = Σ_{i<j} c^k_{ij} e^{ij}, the bracket is
//! [e_i, e_j] = −Σ_k c^k_{ij} e_k, so that de(X, Y) = −e([X, Y]).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exterior::{format_form, parse_form, wedge_sign, KForm, Mask, MAX_DIM};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// A linear subspace stored by its reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    pub fn span(ambient: usize, vectors: &[Vec<Scalar>]) -> Self {
        if vectors.is_empty() {
            return Subspace {
                ambient,
                basis: Vec::new(),
            };
        }
        let m = Matrix::from_rows(vectors.to_vec());
        let (r, pivots) = m.rref();
        Subspace {
            ambient,
            basis: (0..pivots.len()).map(|i| r.row(i).to_vec()).collect(),
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Self::span(ambient, &[])
    }

    pub fn whole(ambient: usize) -> Self {
        Self::span(ambient, &Matrix::identity(ambient).to_rows())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows(rows).rank() == self.dim()
    }

    /// Spanned by the listed (0-based) coordinate vectors.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let vs: Vec<Vec<Scalar>> = indices
            .iter()
            .map(|&i| {
                let mut v = vec![Scalar::zero(); ambient];
                v[i] = Scalar::one();
                v
            })
            .collect();
        Self::span(ambient, &vs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub center: Subspace,
    pub derived: Subspace,
    /// Dimensions of g = g⁰ ⊃ g¹ ⊃ … down to the first repeated term.
    pub lower_central_series: Vec<usize>,
    pub nilpotent: bool,
    pub step: Option<usize>,
    pub unimodular: bool,
    pub killing_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceBasisReport {
    pub nice: bool,
    /// Pairs (i, j) whose bracket involves more than one basis vector (1-based).
    pub multi_target_pairs: Vec<(usize, usize)>,
    /// Overlapping pairs {i,j}, {l,m} hitting the same e_k, as (k, (i,j), (l,m)).
    pub overlapping_pairs: Vec<(usize, (usize, usize), (usize, usize))>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    labels: Vec<String>,
    d1: Vec<KForm>,
}

impl core::fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "LieAlgebra({})", self.structure_text())
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

impl LieAlgebra {
    pub fn new(d1: Vec<KForm>) -> Result<Self> {
        let n = d1.len();
        Self::with_labels(default_labels(n), d1)
    }

    pub fn with_labels(labels: Vec<String>, d1: Vec<KForm>) -> Result<Self> {
        let n = d1.len();
        if n == 0 || n > MAX_DIM {
            return Err(Error::DimensionRange(n));
        }
        if labels.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: labels.len(),
            });
        }
        for f in &d1 {
            if f.dim() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: f.dim(),
                });
            }
            if !f.is_zero() && f.degree() != 2 {
                return Err(Error::Degree {
                    expected: 2,
                    found: f.degree(),
                });
            }
        }
        let d1 = d1
            .into_iter()
            .map(|f| if f.is_zero() { KForm::zero(n, 2) } else { f })
            .collect();
        let alg = LieAlgebra { labels, d1 };
        alg.check_jacobi()?;
        Ok(alg)
    }

    /// Parses `0,0,12,13,14,15+23,16+23+24`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').collect();
        let n = parts.len();
        if n > MAX_DIM {
            return Err(Error::DimensionRange(n));
        }
        let mut offset = 0;
        let mut d1 = Vec::with_capacity(n);
        for part in parts {
            let f = parse_form(part, n, Some(2)).map_err(|e| match e {
                Error::Parse { position, message } => Error::Parse {
                    position: position + offset,
                    message,
                },
                other => other,
            })?;
            d1.push(f);
            offset += part.len() + 1;
        }
        Self::new(d1)
    }

    fn check_jacobi(&self) -> Result<()> {
        for (k, f) in self.d1.iter().enumerate() {
            let dd = self.d(f);
            if !dd.is_zero() {
                return Err(Error::NotLieAlgebra {
                    generator: k + 1,
                    residue: format_form(&dd, &[]),
                });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.d1.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// de^k for the 0-based generator index `k`.
    pub fn de(&self, k: usize) -> &KForm {
        &self.d1[k]
    }

    pub fn differentials(&self) -> &[KForm] {
        &self.d1
    }

    /// The comma-separated structure equations.
    pub fn structure_text(&self) -> String {
        let parts: Vec<String> = self
            .d1
            .iter()
            .map(|f| {
                let s = format_form(f, &[]);
                s.replace('e', "").replace(' ', "")
            })
            .collect();
        parts.join(",")
    }

    /// Chevalley–Eilenberg differential, extended as an antiderivation.
    pub fn d(&self, a: &KForm) -> KForm {
        let n = self.dim();
        assert_eq!(a.dim(), n, "form and algebra have different dimensions");
        let mut terms: Vec<(Mask, Scalar)> = Vec::new();
        for (mask, c) in a.raw_terms() {
            let mut rest = *mask;
            let mut r = 0u32;
            while rest != 0 {
                let i = rest.trailing_zeros();
                rest &= rest - 1;
                let bit = 1u32 << i;
                let prefix = mask & (bit - 1);
                let suffix = mask & !(bit | (bit - 1));
                for (m, dc) in self.d1[i as usize].raw_terms() {
                    let Some(s1) = wedge_sign(prefix, *m) else { continue };
                    let Some(s2) = wedge_sign(prefix | m, suffix) else { continue };
                    let neg = s1 ^ s2 ^ (r % 2 == 1);
                    let v = c * dc;
                    terms.push((prefix | m | suffix, if neg { -v } else { v }));
                }
                r += 1;
            }
        }
        KForm::from_masks(n, a.degree() + 1, terms)
    }

    /// Structure constant c^k_{ij} (0-based, any order of i, j).
    pub fn c(&self, k: usize, i: usize, j: usize) -> Scalar {
        self.d1[k].coeff(&[i, j])
    }

    /// [e_i, e_j] in frame coordinates.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        (0..self.dim()).map(|k| -self.c(k, i, j)).collect()
    }

    pub fn bracket(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = vec![Scalar::zero(); n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() || i == j {
                    continue;
                }
                let uv = &u[i] * &v[j];
                for (k, b) in self.bracket_basis(i, j).into_iter().enumerate() {
                    if !b.is_zero() {
                        out[k] = &out[k] + &(&uv * &b);
                    }
                }
            }
        }
        out
    }

    /// ad(e_i) as a matrix: column j holds [e_i, e_j].
    pub fn ad(&self, i: usize) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            for (k, b) in self.bracket_basis(i, j).into_iter().enumerate() {
                m[(k, j)] = b;
            }
        }
        m
    }

    pub fn ad_vector(&self, u: &[Scalar]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (i, ui) in u.iter().enumerate() {
            if !ui.is_zero() {
                m = m.add(&self.ad(i).scale(ui));
            }
        }
        m
    }

    pub fn center(&self) -> Subspace {
        // v is central iff [v, e_j] = 0 for every j.
        let n = self.dim();
        let mut rows = Vec::new();
        for j in 0..n {
            for k in 0..n {
                rows.push((0..n).map(|i| -self.c(k, i, j)).collect::<Vec<_>>());
            }
        }
        let m = Matrix::from_rows(rows);
        Subspace::span(n, &m.kernel())
    }

    /// [a, b] for subspaces given by spanning vectors.
    fn bracket_span(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut vs = Vec::new();
        for u in a.basis() {
            for v in b.basis() {
                vs.push(self.bracket(u, v));
            }
        }
        Subspace::span(self.dim(), &vs)
    }

    pub fn derived(&self) -> Subspace {
        let g = Subspace::whole(self.dim());
        self.bracket_span(&g, &g)
    }

    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let g = Subspace::whole(self.dim());
        let mut series = vec![g.clone()];
        loop {
            let next = self.bracket_span(&g, series.last().unwrap());
            let done = next.dim() == series.last().unwrap().dim();
            if done {
                return series;
            }
            series.push(next);
        }
    }

    pub fn killing_form(&self) -> Matrix {
        let n = self.dim();
        let ads: Vec<Matrix> = (0..n).map(|i| self.ad(i)).collect();
        Matrix::from_fn(n, n, |i, j| ads[i].mul(&ads[j]).trace())
    }

    pub fn is_unimodular(&self) -> bool {
        (0..self.dim()).all(|i| self.ad(i).trace().is_zero())
    }

    pub fn structure_report(&self) -> StructureReport {
        let series = self.lower_central_series();
        let last = series.last().unwrap().dim();
        let nilpotent = last == 0;
        StructureReport {
            center: self.center(),
            derived: self.derived(),
            lower_central_series: series.iter().map(Subspace::dim).collect(),
            nilpotent,
            step: if nilpotent { Some(series.len() - 1) } else { None },
            unimodular: self.is_unimodular(),
            killing_zero: self.killing_form().is_zero(),
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().unwrap().dim() == 0
    }

    /// Checks the two nice-basis conditions on the given basis.
    pub fn nice_basis_report(&self) -> NiceBasisReport {
        let n = self.dim();
        let mut multi = Vec::new();
        let mut overlaps = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let targets = (0..n).filter(|&k| !self.c(k, i, j).is_zero()).count();
                if targets > 1 {
                    multi.push((i + 1, j + 1));
                }
            }
        }
        for k in 0..n {
            let pairs: Vec<(usize, usize)> = self.d1[k]
                .terms()
                .iter()
                .map(|(m, _)| {
                    let idx = crate::exterior::indices_of(*m);
                    (idx[0], idx[1])
                })
                .collect();
            for (a, p) in pairs.iter().enumerate() {
                for q in &pairs[a + 1..] {
                    let meet = p.0 == q.0 || p.0 == q.1 || p.1 == q.0 || p.1 == q.1;
                    if meet {
                        overlaps.push((k + 1, (p.0 + 1, p.1 + 1), (q.0 + 1, q.1 + 1)));
                    }
                }
            }
        }
        NiceBasisReport {
            nice: multi.is_empty() && overlaps.is_empty(),
            multi_target_pairs: multi,
            overlapping_pairs: overlaps,
        }
    }

    pub fn is_nice_basis(&self) -> bool {
        self.nice_basis_report().nice
    }

    /// Der(g) as a list of n×n matrices (column j is D e_j).
    pub fn derivations(&self) -> Vec<Matrix> {
        let n = self.dim();
        let var = |a: usize, b: usize| a * n + b; // D_{ab}: coefficient of e_a in D e_b
        let brackets: Vec<Vec<Vec<Scalar>>> = (0..n)
            .map(|i| (0..n).map(|j| self.bracket_basis(i, j)).collect())
            .collect();
        let mut rows = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    // (D[e_i,e_j])_k − ([De_i, e_j])_k − ([e_i, De_j])_k = 0
                    let mut row = vec![Scalar::zero(); n * n];
                    for m in 0..n {
                        let b = &brackets[i][j][m];
                        if !b.is_zero() {
                            row[var(k, m)] = &row[var(k, m)] + b;
                        }
                    }
                    for a in 0..n {
                        let b = &brackets[a][j][k];
                        if !b.is_zero() {
                            row[var(a, i)] = &row[var(a, i)] - b;
                        }
                        let b = &brackets[i][a][k];
                        if !b.is_zero() {
                            row[var(a, j)] = &row[var(a, j)] - b;
                        }
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let kernel = if rows.is_empty() {
            Matrix::identity(n * n).to_rows()
        } else {
            Matrix::from_rows(rows).kernel()
        };
        kernel
            .into_iter()
            .map(|v| Matrix::from_fn(n, n, |a, b| v[var(a, b)].clone()))
            .collect()
    }

    pub fn derivations_traceless(&self) -> bool {
        self.derivations().iter().all(|d| d.trace().is_zero())
    }

    /// The same algebra in a new coframe; row p of `old_in_new` expresses e^p
    /// in the new covectors.
    pub fn change_of_basis(&self, old_in_new: &Matrix) -> Result<Self> {
        let n = self.dim();
        if old_in_new.rows() != n || old_in_new.cols() != n {
            return Err(Error::Dimension {
                expected: n,
                found: old_in_new.rows(),
            });
        }
        let inv = old_in_new.inverse()?;
        let subst: Vec<KForm> = self.d1.iter().map(|f| f.substitute(old_in_new)).collect();
        let d1 = (0..n)
            .map(|i| {
                (0..n).fold(KForm::zero(n, 2), |acc, j| {
                    if inv[(i, j)].is_zero() {
                        acc
                    } else {
                        acc.add(&subst[j].scale(&inv[(i, j)]))
                    }
                })
            })
            .collect();
        Self::new(d1)
    }

    /// The abelian algebra of dimension `n`.
    pub fn abelian(n: usize) -> Self {
        Self::new(vec![KForm::zero(n, 2); n]).expect("abelian algebra")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Q};

    fn g() -> LieAlgebra {
        LieAlgebra::parse("0,0,12,13,14,15+23,16+23+24").unwrap()
    }

    fn vecq(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::int(x)).collect()
    }

    #[test]
    fn parses_and_differentiates() {
        let g = g();
        assert_eq!(g.d(&KForm::basis(7, &[2])), KForm::basis(7, &[0, 1]));
        let f = parse_form("e137 + e235", 7, None).unwrap();
        assert!(g.d(&f).is_zero());
        assert_eq!(g.structure_text(), "0,0,12,13,14,15+23,16+23+24");
    }

    #[test]
    fn ad_matches_adjoint_table() {
        let g = g();
        // ad(e5) = e^1 ⊗ e6
        let mut expected = Matrix::zeros(7, 7);
        expected[(5, 0)] = Scalar::one();
        assert_eq!(g.ad(4), expected);
        // ad(e1)(e2) = -e3
        assert_eq!(g.ad(0)[(2, 1)], Scalar::int(-1));
    }

    #[test]
    fn jacobi_failure_names_generator() {
        // d(e4) = e13 with de3 = e12 is fine; de4 = e23 + … here de3 = e12, de4 = e13, de5 = e34 fails
        let err = LieAlgebra::parse("0,0,12,13,34").unwrap_err();
        assert!(matches!(err, Error::NotLieAlgebra { generator: 5, .. }), "{err:?}");
    }

    #[test]
    fn parse_error_offsets_are_global() {
        match LieAlgebra::parse("0,0,1x") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn structure_of_g() {
        let r = g().structure_report();
        assert_eq!(r.center, Subspace::coordinate(7, &[6]));
        assert_eq!(r.derived, Subspace::coordinate(7, &[2, 3, 4, 5, 6]));
        assert!(r.nilpotent && r.unimodular && r.killing_zero);
        assert_eq!(r.step, Some(6));
    }

    #[test]
    fn heisenberg_derivation() {
        let h = LieAlgebra::parse("0,0,12").unwrap();
        let d = Matrix::diagonal(&vecq(&[1, 1, 2]));
        let ders = h.derivations();
        let span = Subspace::span(
            9,
            &ders.iter().map(|m| m.to_rows().concat()).collect::<Vec<_>>(),
        );
        assert!(span.contains(&d.to_rows().concat()));
        assert!(!h.derivations_traceless());
        assert!(g().derivations_traceless());
    }

    #[test]
    fn coframe_change_round_trips() {
        let g = g();
        let mut m = Matrix::identity(7);
        m[(2, 1)] = Scalar::Rational(q(-26, 51));
        m[(6, 5)] = Scalar::Rational(Q::from_integer(3.into()));
        let h = g.change_of_basis(&m).unwrap();
        let back = h.change_of_basis(&m.inverse().unwrap()).unwrap();
        assert_eq!(back, g);
        assert_eq!(h.lower_central_series().len(), g.lower_central_series().len());
    }
}
