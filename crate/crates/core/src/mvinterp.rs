//! Interpolation step of Mahdavifar–Vardy list decoding: find a nonzero
//! `Q = (Q_0, …, Q_ℓ)` with `Q_0(x_i) + Σ_t Q_t(y_{i,t}) = 0` for all points
//! and `deg Q_t < χ − t(k−1)`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FieldElem};
use crate::rowreduce::{reduce_shifted_with, walk_with, ReduceOptions, ReductionTrace};
use crate::skewmat::{Shift, SkewMatrix, SkewVec};
use crate::skewpoly::{annihilator, fq_rank, interpolate, SkewPoly};

/// `⌈(n+1)/(ℓ+1) + ℓ(k−1)/2⌉`, computed exactly over the integers.
pub fn chi(n: usize, ell: usize, k: usize) -> usize {
    let num = 2 * (n + 1) + ell * (ell + 1) * k.saturating_sub(1);
    let den = 2 * (ell + 1);
    num.div_ceil(den)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MvEngine {
    /// Mulders–Storjohann under the shift `(0, k−1, …, ℓ(k−1))`.
    Reduce,
    /// `n` Weak Popov Walking steps starting from `w + (0, n, …, n)`.
    Walk,
}

impl std::str::FromStr for MvEngine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reduce" => Ok(MvEngine::Reduce),
            "walk" => Ok(MvEngine::Walk),
            other => Err(Error::Format(format!("unknown engine `{other}` (expected reduce or walk)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MvInstance {
    ell: usize,
    k: usize,
    points: Vec<(FieldElem, Vec<FieldElem>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MvSolution {
    pub q: Vec<SkewPoly>,
}

impl MvSolution {
    /// `deg Φ_w(Q)` for `w = (0, k−1, …, ℓ(k−1))`.
    pub fn shifted_degree(&self, inst: &MvInstance) -> Option<usize> {
        SkewVec::new(self.q.clone()).degree_shifted(&inst.shift()).finite()
    }
}

impl MvInstance {
    pub fn new(ell: usize, k: usize, points: Vec<(FieldElem, Vec<FieldElem>)>, f: &FieldCtx) -> Result<Self> {
        let n = points.len();
        if ell == 0 || k == 0 {
            return Err(Error::Instance("ell and k must be positive".into()));
        }
        let need = ell * (ell + 1) / 2 * (k - 1);
        if n <= need {
            return Err(Error::Instance(format!(
                "need binom(ell+1, 2)(k-1) < n, but binom({}, 2)({}) = {need} and n = {n}",
                ell + 1,
                k - 1
            )));
        }
        if n > f.s() as usize {
            return Err(Error::Instance(format!("need n <= s, but n = {n} and s = {}", f.s())));
        }
        if let Some(i) = points.iter().position(|(_, ys)| ys.len() != ell) {
            return Err(Error::Instance(format!("point {i} does not have {ell} y-values")));
        }
        let xs: Vec<FieldElem> = points.iter().map(|p| p.0).collect();
        annihilator(&xs, f)?;
        Ok(MvInstance { ell, k, points })
    }

    /// Random instance with F_q-independent `x_i` and uniform `y_{i,t}`.
    pub fn random<R: Rng + ?Sized>(ell: usize, k: usize, n: usize, f: &FieldCtx, rng: &mut R) -> Result<Self> {
        if n > f.s() as usize {
            return Err(Error::Instance(format!("need n <= s, but n = {n} and s = {}", f.s())));
        }
        let mut xs: Vec<FieldElem> = Vec::with_capacity(n);
        while xs.len() < n {
            let x = f.random_nonzero(rng);
            xs.push(x);
            if fq_rank(&xs, f) < xs.len() {
                xs.pop();
            }
        }
        let points = xs.into_iter().map(|x| (x, (0..ell).map(|_| f.random(rng)).collect())).collect();
        Self::new(ell, k, points, f)
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[(FieldElem, Vec<FieldElem>)] {
        &self.points
    }

    pub fn chi(&self) -> usize {
        chi(self.n(), self.ell, self.k)
    }

    /// `χ − t(k−1)` for `t = 0, …, ℓ`.
    pub fn degree_bounds(&self) -> Vec<usize> {
        let c = self.chi();
        (0..=self.ell).map(|t| c - t * (self.k - 1)).collect()
    }

    /// `w = (0, k−1, 2(k−1), …, ℓ(k−1))`.
    pub fn shift(&self) -> Shift {
        Shift::new((0..=self.ell).map(|t| t * (self.k - 1)).collect())
    }

    /// Rows `(G, 0, …, 0)` and `(−R_t, 0, …, 1, …, 0)`.
    pub fn build_basis(&self, f: &FieldCtx) -> Result<SkewMatrix> {
        let m = self.ell + 1;
        let xs: Vec<FieldElem> = self.points.iter().map(|p| p.0).collect();
        let mut rows = Vec::with_capacity(m);
        let mut first = SkewVec::zeros(m);
        first.entries[0] = annihilator(&xs, f)?;
        rows.push(first);
        for t in 1..=self.ell {
            let ys: Vec<FieldElem> = self.points.iter().map(|p| p.1[t - 1]).collect();
            let mut r = SkewVec::unit(m, t);
            r.entries[0] = interpolate(&xs, &ys, f)?.neg(f);
            rows.push(r);
        }
        SkewMatrix::new(rows)
    }

    /// Nonzero, all zero conditions, and every degree bound strictly.
    pub fn verify(&self, q: &[SkewPoly], f: &FieldCtx) -> bool {
        if q.len() != self.ell + 1 || q.iter().all(SkewPoly::is_zero) {
            return false;
        }
        let bounds = self.degree_bounds();
        if q.iter().zip(&bounds).any(|(p, &b)| p.degree() >= b) {
            return false;
        }
        self.points.iter().all(|(x, ys)| {
            let mut acc = q[0].evaluate(*x, f);
            for (p, y) in q[1..].iter().zip(ys) {
                acc = f.add(acc, p.evaluate(*y, f));
            }
            acc.is_zero()
        })
    }

    pub fn interpolation_step(&self, engine: MvEngine, f: &FieldCtx) -> Result<MvSolution> {
        self.interpolation_traced(engine, f).map(|r| r.0)
    }

    /// Solves and returns the counters of the reduction that produced the basis.
    pub fn interpolation_traced(&self, engine: MvEngine, f: &FieldCtx) -> Result<(MvSolution, ReductionTrace)> {
        let m = self.build_basis(f)?;
        let w = self.shift();
        let n = self.n();
        let red = match engine {
            MvEngine::Reduce => reduce_shifted_with(&m, &w, &ReduceOptions::default(), f)?,
            MvEngine::Walk => {
                let start = Shift::new(w.w.iter().enumerate().map(|(t, &x)| if t == 0 { x } else { x + n }).collect());
                debug_assert!(m.is_shifted_weak_popov(&start));
                walk_with(&m, &start, n, &ReduceOptions::default(), f)?
            }
        };
        let row = select_row(&red.matrix, &w).ok_or_else(|| Error::Instance("reduced basis has no nonzero row".into()))?;
        Ok((MvSolution { q: row.entries.clone() }, red.trace))
    }
}

/// Row of minimal shifted degree; the smallest shifted leading position wins ties.
fn select_row<'a>(v: &'a SkewMatrix, w: &Shift) -> Option<&'a SkewVec> {
    v.rows()
        .iter()
        .filter_map(|r| Some((r.degree_shifted(w).finite()?, r.leading_position_shifted(w).ok()?, r)))
        .min_by_key(|&(d, h, _)| (d, h))
        .map(|(_, _, r)| r)
}
