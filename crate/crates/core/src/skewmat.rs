//! Vectors and matrices over the skew polynomial ring, with degrees, leading
//! positions, the column shift `Φ_w`, the value function, simple
//! transformations and the weak Popov predicates.
//!
//! Shifted quantities are computed virtually: `deg_w(v) = max_j deg v_j + w_j`
//! and `LP_w(v)` is the rightmost index attaining it, which is exactly the
//! degree and leading position of `Φ_w(v)` without materializing the shift.

use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FieldElem};
use crate::skewpoly::{Degree, SkewPoly};

/// Non-negative column shift `w = (w_0, …, w_{m-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Shift {
    pub w: Vec<usize>,
}

impl Shift {
    pub fn new(w: Vec<usize>) -> Self {
        Shift { w }
    }

    pub fn zero(m: usize) -> Self {
        Shift { w: vec![0; m] }
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn total(&self) -> usize {
        self.w.iter().sum()
    }

    /// `w + k·e_i`.
    pub fn bumped(&self, i: usize, k: usize) -> Shift {
        let mut w = self.w.clone();
        w[i] += k;
        Shift { w }
    }

    fn check(&self, m: usize) -> Result<()> {
        if self.w.len() != m {
            return Err(Error::Shift(format!("shift of length {} for width {m}", self.w.len())));
        }
        Ok(())
    }
}

/// A row vector over the skew polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SkewVec {
    pub entries: Vec<SkewPoly>,
}

impl SkewVec {
    pub fn new(entries: Vec<SkewPoly>) -> Self {
        SkewVec { entries }
    }

    pub fn zeros(m: usize) -> Self {
        SkewVec { entries: vec![SkewPoly::zero(); m] }
    }

    /// The `i`-th unit vector of width `m`.
    pub fn unit(m: usize, i: usize) -> Self {
        let mut v = Self::zeros(m);
        v.entries[i] = SkewPoly::one();
        v
    }

    pub fn width(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(SkewPoly::is_zero)
    }

    pub fn degree(&self) -> Degree {
        self.entries.iter().map(SkewPoly::degree).max().unwrap_or(Degree::MinusInfinity)
    }

    fn shifted_entry_degree(&self, j: usize, w: Option<&[usize]>) -> Degree {
        let d = self.entries[j].degree();
        match w {
            Some(w) => d + w[j],
            None => d,
        }
    }

    fn deg_lp(&self, w: Option<&[usize]>) -> (Degree, Option<usize>) {
        let mut best = Degree::MinusInfinity;
        let mut pos = None;
        for j in 0..self.entries.len() {
            let d = self.shifted_entry_degree(j, w);
            if d.is_finite() && d >= best {
                best = d;
                pos = Some(j);
            }
        }
        (best, pos)
    }

    /// `deg Φ_w(v)`.
    pub fn degree_shifted(&self, w: &Shift) -> Degree {
        self.deg_lp(Some(&w.w)).0
    }

    /// Rightmost index of maximal degree.
    pub fn leading_position(&self) -> Result<usize> {
        self.deg_lp(None).1.ok_or(Error::ZeroVector)
    }

    /// `LP(Φ_w(v))`.
    pub fn leading_position_shifted(&self, w: &Shift) -> Result<usize> {
        self.deg_lp(Some(&w.w)).1.ok_or(Error::ZeroVector)
    }

    pub fn leading_term(&self) -> Result<&SkewPoly> {
        Ok(&self.entries[self.leading_position()?])
    }

    pub fn leading_coeff(&self) -> Result<FieldElem> {
        Ok(self.leading_term()?.leading_coeff().expect("leading entry is nonzero"))
    }

    /// `m·deg v + LP(v) + 1`, or 0 for the zero vector.
    pub fn value(&self, m: usize) -> usize {
        match self.deg_lp(None) {
            (Degree::Finite(d), Some(h)) => m * d + h + 1,
            _ => 0,
        }
    }

    /// Value of `Φ_w(v)`.
    pub fn value_shifted(&self, w: &Shift, m: usize) -> usize {
        match self.deg_lp(Some(&w.w)) {
            (Degree::Finite(d), Some(h)) => m * d + h + 1,
            _ => 0,
        }
    }

    pub fn add(&self, other: &SkewVec, f: &FieldCtx) -> SkewVec {
        SkewVec::new(self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b, f)).collect())
    }

    pub fn sub(&self, other: &SkewVec, f: &FieldCtx) -> SkewVec {
        SkewVec::new(self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b, f)).collect())
    }

    /// `p·v`.
    pub fn left_mul(&self, p: &SkewPoly, f: &FieldCtx) -> SkewVec {
        SkewVec::new(self.entries.iter().map(|a| p.mul(a, f)).collect())
    }

    /// `v ← v − α x^β u`.
    pub fn sub_scaled_shifted(&mut self, alpha: FieldElem, beta: usize, u: &SkewVec, f: &FieldCtx) {
        for (a, b) in self.entries.iter_mut().zip(&u.entries) {
            a.sub_scaled_shifted(alpha, beta, b, f);
        }
    }

    pub fn apply_shift(&self, w: &Shift) -> Result<SkewVec> {
        w.check(self.width())?;
        Ok(SkewVec::new(self.entries.iter().zip(&w.w).map(|(a, &k)| a.shift(k)).collect()))
    }

    pub fn unapply_shift(&self, w: &Shift) -> Result<SkewVec> {
        w.check(self.width())?;
        self.entries
            .iter()
            .zip(&w.w)
            .enumerate()
            .map(|(j, (a, &k))| {
                a.unshift(k)
                    .ok_or_else(|| Error::Shift(format!("column {j} entry not divisible by x^{k}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(SkewVec::new)
    }
}

/// Dense row-major matrix over the skew polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewMatrix {
    rows: Vec<SkewVec>,
    width: usize,
}

impl SkewMatrix {
    pub fn new(rows: Vec<SkewVec>) -> Result<Self> {
        let width = rows.first().map_or(0, SkewVec::width);
        if rows.iter().any(|r| r.width() != width) {
            return Err(Error::Format("rows of unequal width".into()));
        }
        Ok(SkewMatrix { rows, width })
    }

    pub fn with_width(rows: Vec<SkewVec>, width: usize) -> Result<Self> {
        if rows.iter().any(|r| r.width() != width) {
            return Err(Error::Format("rows of unequal width".into()));
        }
        Ok(SkewMatrix { rows, width })
    }

    pub fn from_polys(rows: Vec<Vec<SkewPoly>>) -> Result<Self> {
        Self::new(rows.into_iter().map(SkewVec::new).collect())
    }

    pub fn identity(m: usize) -> Self {
        SkewMatrix { rows: (0..m).map(|i| SkewVec::unit(m, i)).collect(), width: m }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        SkewMatrix { rows: vec![SkewVec::zeros(cols); rows], width: cols }
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(diag: Vec<SkewPoly>) -> Self {
        let m = diag.len();
        let mut out = Self::zeros(m, m);
        for (i, d) in diag.into_iter().enumerate() {
            out.rows[i].entries[i] = d;
        }
        out
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.width
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.width
    }

    pub fn rows(&self) -> &[SkewVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<SkewVec> {
        self.rows
    }

    pub fn row(&self, i: usize) -> &SkewVec {
        &self.rows[i]
    }

    pub(crate) fn rows_mut(&mut self) -> &mut [SkewVec] {
        &mut self.rows
    }

    pub fn row_mut(&mut self, i: usize) -> &mut SkewVec {
        &mut self.rows[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> &SkewPoly {
        &self.rows[i].entries[j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: SkewPoly) {
        self.rows[i].entries[j] = p;
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        self.rows.swap(i, j);
    }

    /// Sum of row degrees; `MinusInfinity` if some row is zero.
    pub fn deg(&self) -> Degree {
        self.rows.iter().fold(Degree::Finite(0), |acc, r| acc + r.degree())
    }

    pub fn deg_shifted(&self, w: &Shift) -> Degree {
        self.rows.iter().fold(Degree::Finite(0), |acc, r| acc + r.degree_shifted(w))
    }

    pub fn maxdeg(&self) -> Degree {
        self.rows.iter().map(SkewVec::degree).max().unwrap_or(Degree::MinusInfinity)
    }

    /// Shifted leading position of each row (`None` for zero rows).
    pub fn leading_positions(&self, w: &Shift) -> Vec<Option<usize>> {
        self.rows.iter().map(|r| r.leading_position_shifted(w).ok()).collect()
    }

    pub fn apply_shift(&self, w: &Shift) -> Result<SkewMatrix> {
        w.check(self.width)?;
        let rows = self.rows.iter().map(|r| r.apply_shift(w)).collect::<Result<_>>()?;
        Ok(SkewMatrix { rows, width: self.width })
    }

    pub fn unapply_shift(&self, w: &Shift) -> Result<SkewMatrix> {
        w.check(self.width)?;
        let rows = self.rows.iter().map(|r| r.unapply_shift(w)).collect::<Result<_>>()?;
        Ok(SkewMatrix { rows, width: self.width })
    }

    pub fn mul(&self, other: &SkewMatrix, f: &FieldCtx) -> Result<SkewMatrix> {
        if self.width != other.nrows() {
            return Err(Error::Format(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.width,
                other.nrows(),
                other.width
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = SkewVec::zeros(other.width);
                for (a, b) in r.entries.iter().zip(&other.rows) {
                    if !a.is_zero() {
                        acc = acc.add(&b.left_mul(a, f), f);
                    }
                }
                acc
            })
            .collect();
        Ok(SkewMatrix { rows, width: other.width })
    }

    /// Simple transformation of row `i` on row `j` at position `h`:
    /// `v_j ← v_j − α x^β v_i` with `β = deg v_{j,h} − deg v_{i,h}` and
    /// `α = LC(v_{j,h}) / θ^β(LC(v_{i,h}))`. Returns `(α, β)`.
    ///
    /// The same `(α, β)` arise on `Φ_w(V)` for every shift `w`, so this also
    /// performs the shifted transformation.
    pub fn simple_transform(&mut self, i: usize, j: usize, h: usize, f: &FieldCtx) -> Result<(FieldElem, usize)> {
        if i == j {
            return Err(Error::Transform("row transformed on itself".into()));
        }
        if i >= self.rows.len() || j >= self.rows.len() || h >= self.width {
            return Err(Error::Transform("index out of range".into()));
        }
        let (alpha, beta) = transform_coeffs(&self.rows[i].entries[h], &self.rows[j].entries[h], f)?;
        let (src, dst) = pair_mut(&mut self.rows, i, j);
        dst.sub_scaled_shifted(alpha, beta, src, f);
        Ok((alpha, beta))
    }

    fn is_weak_popov_with(&self, w: Option<&[usize]>) -> bool {
        let mut seen = vec![false; self.width];
        for r in &self.rows {
            if let Some(h) = r.deg_lp(w).1 {
                if seen[h] {
                    return false;
                }
                seen[h] = true;
            }
        }
        true
    }

    /// Leading positions of the nonzero rows are pairwise distinct.
    pub fn is_weak_popov(&self) -> bool {
        self.is_weak_popov_with(None)
    }

    /// `Φ_w(V)` is in weak Popov form.
    pub fn is_shifted_weak_popov(&self, w: &Shift) -> bool {
        w.len() == self.width && self.is_weak_popov_with(Some(&w.w))
    }

    /// Rows reduced modulo per-column right moduli: entry `(i, j)` is replaced
    /// by its remainder modulo `moduli[j]` where a modulus is given.
    pub fn reduce_columns(&mut self, moduli: &[Option<SkewPoly>], f: &FieldCtx) -> Result<()> {
        for r in &mut self.rows {
            reduce_vec_columns(r, moduli, f)?;
        }
        Ok(())
    }
}

pub(crate) fn reduce_vec_columns(r: &mut SkewVec, moduli: &[Option<SkewPoly>], f: &FieldCtx) -> Result<()> {
    for (a, g) in r.entries.iter_mut().zip(moduli) {
        if let Some(g) = g {
            *a = a.mod_right(g, f)?;
        }
    }
    Ok(())
}

/// `(α, β)` cancelling the leading term of `target` against `pivot`.
pub(crate) fn transform_coeffs(pivot: &SkewPoly, target: &SkewPoly, f: &FieldCtx) -> Result<(FieldElem, usize)> {
    let (Degree::Finite(di), Degree::Finite(dj)) = (pivot.degree(), target.degree()) else {
        return Err(Error::Transform("zero entry at the transformation position".into()));
    };
    if di > dj {
        return Err(Error::Transform(format!("pivot degree {di} exceeds target degree {dj}")));
    }
    let beta = dj - di;
    let lc_i = pivot.leading_coeff().expect("nonzero");
    let lc_j = target.leading_coeff().expect("nonzero");
    let alpha = f.div(lc_j, f.frobenius(lc_i, beta))?;
    Ok((alpha, beta))
}

/// Shared reference to row `i` alongside a mutable one to row `j`, `i ≠ j`.
pub(crate) fn pair_mut<T>(v: &mut [T], i: usize, j: usize) -> (&T, &mut T) {
    if i < j {
        let (lo, hi) = v.split_at_mut(j);
        (&lo[i], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(i);
        (&hi[0], &mut lo[j])
    }
}
