use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Q, Ring, Scalar};

pub const MAX_DIM: usize = 31;

/// Strictly increasing index tuple stored as a bitmask (bit i = index i, 0-based).
pub type Mask = u32;

pub fn mask_of(indices: &[usize]) -> Mask {
    indices.iter().fold(0, |m, &i| m | (1 << i))
}

pub fn indices_of(mask: Mask) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// Sign of e^a ∧ e^b relative to e^{a∪b}; `None` if they overlap.
pub fn wedge_sign(a: Mask, b: Mask) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> j).count_ones();
        rest &= rest - 1;
    }
    Some(swaps % 2 == 1)
}

/// All masks of `k` elements out of `n`, in lexicographic order of tuples.
pub fn subsets(n: usize, k: usize) -> Vec<Mask> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(mask_of(&idx));
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn lex_key(mask: Mask) -> Vec<usize> {
    indices_of(mask)
}

/// A vector in the frame dual to the coframe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vector {
    comps: Vec<Scalar>,
}

impl Vector {
    pub fn new(comps: Vec<Scalar>) -> Self {
        Vector { comps }
    }

    /// The frame vector e_{i+1}.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut comps = vec![Scalar::zero(); dim];
        comps[i] = Scalar::one();
        Vector { comps }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[Scalar] {
        &self.comps
    }
}

/// An alternating k-form on an n-dimensional space, in the basis e^I.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KForm {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Mask, Scalar>,
}

impl KForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        KForm {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Scalar) -> Self {
        let mut f = Self::zero(dim, 0);
        f.add_term(0, c);
        f
    }

    /// c·e^{i₁…i_k} for arbitrary (0-based) indices; repeats give zero.
    pub fn monomial(dim: usize, indices: &[usize], c: Scalar) -> Self {
        let mut f = Self::zero(dim, indices.len());
        let mut sign = false;
        let mut mask: Mask = 0;
        for &i in indices {
            assert!(i < dim, "index {i} out of range for dimension {dim}");
            match wedge_sign(mask, 1 << i) {
                Some(s) => sign ^= s,
                None => return f,
            }
            mask |= 1 << i;
        }
        f.add_term(mask, if sign { -c } else { c });
        f
    }

    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        Self::monomial(dim, indices, Scalar::one())
    }

    pub fn from_masks(dim: usize, degree: usize, terms: impl IntoIterator<Item = (Mask, Scalar)>) -> Self {
        let mut f = Self::zero(dim, degree);
        for (m, c) in terms {
            assert_eq!(m.count_ones() as usize, degree, "term degree mismatch");
            f.add_term(m, c);
        }
        f
    }

    /// The n-form e^{1…n} scaled by `c`.
    pub fn top(dim: usize, c: Scalar) -> Self {
        Self::from_masks(dim, dim, [(full_mask(dim), c)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic order of their index tuples.
    pub fn terms(&self) -> Vec<(Mask, &Scalar)> {
        let mut t: Vec<(Mask, &Scalar)> = self.terms.iter().map(|(m, c)| (*m, c)).collect();
        t.sort_by_key(|(m, _)| lex_key(*m));
        t
    }

    pub fn raw_terms(&self) -> impl Iterator<Item = (&Mask, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff_mask(&self, mask: Mask) -> Scalar {
        self.terms.get(&mask).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Coefficient of e^{i₁…i_k} (0-based, any order).
    pub fn coeff(&self, indices: &[usize]) -> Scalar {
        let unit = Self::basis(self.dim, indices);
        match unit.terms.iter().next() {
            Some((m, s)) => s * &self.coeff_mask(*m),
            None => Scalar::zero(),
        }
    }

    /// Coefficient of the top form e^{1…n}.
    pub fn top_coeff(&self) -> Scalar {
        self.coeff_mask(full_mask(self.dim))
    }

    pub(crate) fn add_term(&mut self, mask: Mask, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mask) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// The smallest scalar ring holding every coefficient.
    pub fn ring(&self) -> Result<Ring> {
        self.terms.values().try_fold(Ring::Rational, |r, c| r.join(&c.ring()))
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: other.dim,
            });
        }
        self.ring()?.join(&other.ring()?)?;
        Ok(())
    }

    fn same_shape(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "forms live on different spaces");
        assert!(
            self.degree == other.degree || self.is_zero() || other.is_zero(),
            "adding forms of degree {} and {}",
            self.degree,
            other.degree
        );
    }

    /// Sum; panics on a dimension or degree mismatch between nonzero forms.
    pub fn add(&self, other: &Self) -> Self {
        self.same_shape(other);
        let mut out = if self.is_zero() { other.clone() } else { self.clone() };
        if !self.is_zero() {
            for (m, c) in other.terms.iter() {
                out.add_term(*m, c.clone());
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        KForm {
            dim: self.dim,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (m, c) in self.terms.iter() {
            out.add_term(*m, c * s);
        }
        out
    }

    pub fn scale_q(&self, s: &Q) -> Self {
        self.scale(&Scalar::Rational(s.clone()))
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (m, c) in self.terms.iter() {
            out.add_term(*m, f(c));
        }
        out
    }

    /// Exterior product, checking spaces and scalar rings.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        Ok(self.w(other))
    }

    /// Exterior product without ring checks (panics on incompatible scalars).
    pub(crate) fn w(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "forms live on different spaces");
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        if self.degree + other.degree > self.dim {
            return out;
        }
        for (ma, ca) in self.terms.iter() {
            for (mb, cb) in other.terms.iter() {
                if let Some(neg) = wedge_sign(*ma, *mb) {
                    let p = ca * cb;
                    out.add_term(ma | mb, if neg { -p } else { p });
                }
            }
        }
        out
    }

    /// Interior product ι_v.
    pub fn contract(&self, v: &Vector) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::Degree {
                expected: 1,
                found: 0,
            });
        }
        if v.dim() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: v.dim(),
            });
        }
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (i, vi) in v.components().iter().enumerate() {
            if !vi.is_zero() {
                out = out.add(&self.contract_basis(i).scale(vi));
            }
        }
        Ok(out)
    }

    /// ι_{e_i} for the 0-based frame index `i`.
    pub fn contract_basis(&self, i: usize) -> Self {
        assert!(self.degree > 0, "contraction of a 0-form");
        let mut out = Self::zero(self.dim, self.degree - 1);
        let bit = 1 << i;
        for (m, c) in self.terms.iter() {
            if m & bit == 0 {
                continue;
            }
            let below = (m & (bit - 1)).count_ones();
            out.add_term(m & !bit, if below % 2 == 1 { -c } else { c.clone() });
        }
        out
    }

    /// Rewrites the form in a new coframe: row p of `m` expresses the old
    /// covector e^p in terms of the new covectors.
    pub fn substitute(&self, m: &Matrix) -> Self {
        assert_eq!(m.rows(), self.dim);
        assert_eq!(m.cols(), self.dim);
        let ones: Vec<KForm> = (0..self.dim)
            .map(|p| {
                KForm::from_masks(
                    self.dim,
                    1,
                    (0..self.dim).map(|q| (1 << q, m[(p, q)].clone())),
                )
            })
            .collect();
        let mut out = Self::zero(self.dim, self.degree);
        for (mask, c) in self.terms.iter() {
            let mut prod = KForm::constant(self.dim, c.clone());
            for i in indices_of(*mask) {
                prod = prod.w(&ones[i]);
            }
            out = out.add(&prod);
        }
        out
    }

    /// Returns the form with every polynomial coefficient evaluated at `point`.
    pub fn eval(&self, point: &[Q]) -> Self {
        self.map_coeffs(|c| c.eval(point))
    }

    pub fn display_with(&self, names: &[String]) -> String {
        super::literal::format_form(self, names)
    }
}

pub fn full_mask(dim: usize) -> Mask {
    if dim == 32 {
        u32::MAX
    } else {
        (1u32 << dim) - 1
    }
}

/// e^J ∧ e^{J^c} = ± e^{1…n}; true when the sign is negative.
pub fn complement_sign(dim: usize, mask: Mask) -> bool {
    wedge_sign(mask, full_mask(dim) & !mask).expect("disjoint by construction")
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
