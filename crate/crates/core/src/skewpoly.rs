//! The skew polynomial ring `R = F_{q^s}[x; θ]` with zero derivation.
//!
//! Multiplication is twisted by `x·a = θ(a)·x`, so the product of `Σ a_i x^i`
//! and `Σ b_j x^j` has coefficient `Σ_{i+j=k} a_i θ^i(b_j)` at `x^k`. The
//! ring is left and right Euclidean; only right division (`a = d·c + r`) is
//! used by the row reduction machinery.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use rand::Rng;

use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FieldElem};

/// Degree of a skew polynomial or vector; the zero polynomial has degree
/// `MinusInfinity`, which orders below every finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(usize),
}

impl Degree {
    pub const MINUS_INFINITY: Degree = Degree::MinusInfinity;

    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::MinusInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Degree::Finite(_))
    }

    /// Finite value or panic; for call sites that have already excluded zero.
    pub fn unwrap(self) -> usize {
        self.finite().expect("degree of the zero polynomial")
    }
}

impl Add<usize> for Degree {
    type Output = Degree;

    fn add(self, rhs: usize) -> Degree {
        match self {
            Degree::MinusInfinity => Degree::MinusInfinity,
            Degree::Finite(d) => Degree::Finite(d + rhs),
        }
    }
}

impl Add for Degree {
    type Output = Degree;

    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::MinusInfinity,
        }
    }
}

impl PartialEq<usize> for Degree {
    fn eq(&self, other: &usize) -> bool {
        *self == Degree::Finite(*other)
    }
}

impl PartialOrd<usize> for Degree {
    fn partial_cmp(&self, other: &usize) -> Option<Ordering> {
        Some(self.cmp(&Degree::Finite(*other)))
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A skew polynomial, stored as ascending coefficients with no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SkewPoly {
    coeffs: Vec<FieldElem>,
}

impl SkewPoly {
    pub fn zero() -> Self {
        SkewPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(FieldElem::ONE)
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Self::monomial(FieldElem::ONE, 1)
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c·x^d`.
    pub fn monomial(c: FieldElem, d: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![FieldElem::ZERO; d + 1];
        coeffs[d] = c;
        SkewPoly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        SkewPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// Coefficient of `x^i`; zero beyond the degree.
    #[inline]
    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    #[inline]
    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::MinusInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == Some(FieldElem::ONE)
    }

    pub fn leading_coeff(&self) -> Option<FieldElem> {
        self.coeffs.last().copied()
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn random<R: Rng + ?Sized>(degree: usize, f: &FieldCtx, rng: &mut R) -> Self {
        let mut coeffs: Vec<FieldElem> = (0..degree).map(|_| f.random(rng)).collect();
        coeffs.push(f.random_nonzero(rng));
        SkewPoly { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn add(&self, other: &SkewPoly, f: &FieldCtx) -> SkewPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        SkewPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &SkewPoly, f: &FieldCtx) -> SkewPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        SkewPoly::from_coeffs(coeffs)
    }

    pub fn neg(&self, f: &FieldCtx) -> SkewPoly {
        SkewPoly {
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    /// `c·self` for a constant `c`.
    pub fn scale(&self, c: FieldElem, f: &FieldCtx) -> SkewPoly {
        if c.is_zero() {
            return SkewPoly::zero();
        }
        SkewPoly {
            coeffs: self.coeffs.iter().map(|&a| f.mul(c, a)).collect(),
        }
    }

    /// `self·x^k`: prefixes `k` zero coefficients, no automorphism applied.
    pub fn shift(&self, k: usize) -> SkewPoly {
        if self.is_zero() {
            return SkewPoly::zero();
        }
        let mut coeffs = vec![FieldElem::ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        SkewPoly { coeffs }
    }

    /// `self·x^{-k}` if the lowest `k` coefficients vanish.
    pub fn unshift(&self, k: usize) -> Option<SkewPoly> {
        if self.is_zero() {
            return Some(SkewPoly::zero());
        }
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return None;
        }
        Some(SkewPoly {
            coeffs: self.coeffs[k.min(self.coeffs.len())..].to_vec(),
        })
    }

    /// Schoolbook product; coefficient `k` is `Σ_{i+j=k} a_i θ^i(b_j)`.
    pub fn mul(&self, other: &SkewPoly, f: &FieldCtx) -> SkewPoly {
        if self.is_zero() || other.is_zero() {
            return SkewPoly::zero();
        }
        let mut out = vec![FieldElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = f.mul(a, f.frobenius(b, i));
                out[i + j] = f.add(out[i + j], t);
            }
        }
        SkewPoly::from_coeffs(out)
    }

    /// `self·(c x^β)`.
    pub fn mul_monomial_right(&self, c: FieldElem, beta: usize, f: &FieldCtx) -> SkewPoly {
        if c.is_zero() || self.is_zero() {
            return SkewPoly::zero();
        }
        let mut coeffs = vec![FieldElem::ZERO; beta];
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &a)| if a.is_zero() { a } else { f.mul(a, f.frobenius(c, k)) }),
        );
        SkewPoly::from_coeffs(coeffs)
    }

    /// `self ← self − α x^β ·other`, the core of a simple transformation.
    pub fn sub_scaled_shifted(&mut self, alpha: FieldElem, beta: usize, other: &SkewPoly, f: &FieldCtx) {
        if alpha.is_zero() || other.is_zero() {
            return;
        }
        let need = other.coeffs.len() + beta;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, FieldElem::ZERO);
        }
        for (k, &b) in other.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let t = f.mul(alpha, f.frobenius(b, beta));
            self.coeffs[k + beta] = f.sub(self.coeffs[k + beta], t);
        }
        self.trim();
    }

    /// `self ← self + α x^β ·other`.
    pub fn add_scaled_shifted(&mut self, alpha: FieldElem, beta: usize, other: &SkewPoly, f: &FieldCtx) {
        let minus = f.neg(alpha);
        self.sub_scaled_shifted(minus, beta, other, f);
    }

    /// Right division: returns `(d, r)` with `self = d·c + r` and `deg r < deg c`.
    pub fn right_divide(&self, c: &SkewPoly, f: &FieldCtx) -> Result<(SkewPoly, SkewPoly)> {
        let dc = c.degree().finite().ok_or(Error::DivisionByZero)?;
        let lc = c.coeffs[dc];
        let mut r = self.clone();
        let mut quot = Vec::new();
        while let Degree::Finite(dr) = r.degree() {
            if dr < dc {
                break;
            }
            let beta = dr - dc;
            let alpha = f.div(r.coeffs[dr], f.frobenius(lc, beta))?;
            if quot.len() <= beta {
                quot.resize(beta + 1, FieldElem::ZERO);
            }
            quot[beta] = f.add(quot[beta], alpha);
            r.sub_scaled_shifted(alpha, beta, c, f);
        }
        Ok((SkewPoly::from_coeffs(quot), r))
    }

    /// Remainder of right division; `self ≡ result mod c`.
    pub fn mod_right(&self, c: &SkewPoly, f: &FieldCtx) -> Result<SkewPoly> {
        let dc = c.degree().finite().ok_or(Error::DivisionByZero)?;
        if self.degree() < dc {
            return Ok(self.clone());
        }
        let lc = c.coeffs[dc];
        let mut r = self.clone();
        while let Degree::Finite(dr) = r.degree() {
            if dr < dc {
                break;
            }
            let beta = dr - dc;
            let alpha = f.div(r.coeffs[dr], f.frobenius(lc, beta))?;
            r.sub_scaled_shifted(alpha, beta, c, f);
        }
        Ok(r)
    }

    /// Left division: returns `(d, r)` with `self = c·d + r` and `deg r < deg c`.
    ///
    /// Only the decoder needs this: key-equation solutions have the form
    /// `ω = λ·f` with the error-span polynomial on the left.
    pub fn left_divide(&self, c: &SkewPoly, f: &FieldCtx) -> Result<(SkewPoly, SkewPoly)> {
        let dc = c.degree().finite().ok_or(Error::DivisionByZero)?;
        let lc = c.coeffs[dc];
        let lc_inv = f.inv(lc)?;
        let mut r = self.clone();
        let mut quot = Vec::new();
        while let Degree::Finite(dr) = r.degree() {
            if dr < dc {
                break;
            }
            let beta = dr - dc;
            // c·(δ x^β) has leading coefficient lc·θ^{dc}(δ).
            let delta = f.inverse_frobenius(f.mul(r.coeffs[dr], lc_inv), dc);
            if quot.len() <= beta {
                quot.resize(beta + 1, FieldElem::ZERO);
            }
            quot[beta] = f.add(quot[beta], delta);
            let term = c.mul_monomial_right(delta, beta, f);
            r = r.sub(&term, f);
        }
        Ok((SkewPoly::from_coeffs(quot), r))
    }

    /// Operator evaluation `α ↦ Σ_i a_i θ^i(α)`.
    pub fn evaluate(&self, alpha: FieldElem, f: &FieldCtx) -> FieldElem {
        let mut acc = FieldElem::ZERO;
        if alpha.is_zero() {
            return acc;
        }
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            acc = f.add(acc, f.mul(a, f.frobenius(alpha, i)));
        }
        acc
    }

    /// Makes the polynomial monic; returns the inverse of the old leading
    /// coefficient (the left scaling factor).
    pub fn make_monic(&mut self, f: &FieldCtx) -> Option<FieldElem> {
        let lc = self.leading_coeff()?;
        let inv = f.inv(lc).ok()?;
        *self = self.scale(inv, f);
        Some(inv)
    }
}

/// Multiplies `a` on the left by `x − θ(v)/v` where `v = a(point) ≠ 0`, giving
/// a polynomial that vanishes on `point` and everywhere `a` does.
fn extend_annihilator(a: &SkewPoly, v: FieldElem, f: &FieldCtx) -> SkewPoly {
    let c = f.div(f.frobenius(v, 1), v).expect("v is nonzero");
    // (x − c)·a = x·a − c·a, and x·a = Σ θ(a_i) x^{i+1}.
    let mut coeffs = vec![FieldElem::ZERO; a.coeffs.len() + 1];
    for (i, &ai) in a.coeffs.iter().enumerate() {
        coeffs[i + 1] = f.add(coeffs[i + 1], f.frobenius(ai, 1));
        coeffs[i] = f.sub(coeffs[i], f.mul(c, ai));
    }
    SkewPoly::from_coeffs(coeffs)
}

/// Minimal monic polynomial vanishing on `points`; its degree equals the
/// number of points. Fails if the points are dependent over the fixed field.
pub fn annihilator(points: &[FieldElem], f: &FieldCtx) -> Result<SkewPoly> {
    let mut a = SkewPoly::one();
    for (index, &pt) in points.iter().enumerate() {
        let v = a.evaluate(pt, f);
        if v.is_zero() {
            return Err(Error::DependentPoints { index });
        }
        a = extend_annihilator(&a, v, f);
    }
    Ok(a)
}

/// Unique `R` of degree below `points.len()` with `R(points[i]) = values[i]`.
///
/// Newton-style: keeps the annihilator `A_j` of the first `j` points and
/// corrects `R ← R + c·A_j`, `c = (values[j] − R(points[j])) / A_j(points[j])`.
pub fn interpolate(points: &[FieldElem], values: &[FieldElem], f: &FieldCtx) -> Result<SkewPoly> {
    if points.len() != values.len() {
        return Err(Error::Precondition(format!(
            "{} points but {} values",
            points.len(),
            values.len()
        )));
    }
    let mut r = SkewPoly::zero();
    let mut a = SkewPoly::one();
    for (index, (&pt, &val)) in points.iter().zip(values).enumerate() {
        let av = a.evaluate(pt, f);
        if av.is_zero() {
            return Err(Error::DependentPoints { index });
        }
        let residual = f.sub(val, r.evaluate(pt, f));
        if !residual.is_zero() {
            let c = f.div(residual, av)?;
            r = r.add(&a.scale(c, f), f);
        }
        a = extend_annihilator(&a, av, f);
    }
    Ok(r)
}

/// Dimension over the fixed field of the span of `values`.
pub fn fq_rank(values: &[FieldElem], f: &FieldCtx) -> usize {
    let mut a = SkewPoly::one();
    let mut rank = 0;
    for &v in values {
        let av = a.evaluate(v, f);
        if !av.is_zero() {
            a = extend_annihilator(&a, av, f);
            rank += 1;
        }
    }
    rank
}
