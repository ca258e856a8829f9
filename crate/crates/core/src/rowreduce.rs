//! Row reduction engines: Mulders–Storjohann over the skew ring, degree of
//! the Dieudonné determinant, orthogonality defect and Weak Popov Walking.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{field_ops, FieldCtx, FieldElem};
use crate::skewmat::{pair_mut, reduce_vec_columns, Shift, SkewMatrix, SkewVec};
use crate::skewpoly::{Degree, SkewPoly};

#[derive(Clone, Debug, Default)]
pub struct ReduceOptions {
    /// Record every transformation in [`ReductionTrace::steps`].
    pub log_steps: bool,
    /// Maintain `U` and `U^{-1}` with `V' = U·V`.
    pub track_unimodular: bool,
    /// After each transformation, reduce entry `j` of the modified row modulo
    /// `column_moduli[j]` when present. Disables unimodular tracking.
    pub column_moduli: Option<Vec<Option<SkewPoly>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformStep {
    pub pivot: usize,
    pub target: usize,
    pub position: usize,
    pub beta: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub lp_transform_count: usize,
    pub field_ops: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<TransformStep>,
    /// Field operations per walking step; empty for other engines.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub step_field_ops: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub matrix: SkewMatrix,
    pub trace: ReductionTrace,
    pub unimodular: Option<SkewMatrix>,
    pub unimodular_inv: Option<SkewMatrix>,
}

/// Elementary-operation bookkeeping shared by the engines.
struct Tracker {
    u: Option<SkewMatrix>,
    u_inv: Option<SkewMatrix>,
    log: bool,
    trace: ReductionTrace,
}

impl Tracker {
    fn new(m: usize, opts: &ReduceOptions) -> Self {
        let track = opts.track_unimodular && opts.column_moduli.is_none();
        Tracker {
            u: track.then(|| SkewMatrix::identity(m)),
            u_inv: track.then(|| SkewMatrix::identity(m)),
            log: opts.log_steps,
            trace: ReductionTrace::default(),
        }
    }

    /// Records `v_j ← v_j − α x^β v_i`.
    fn record(&mut self, i: usize, j: usize, h: usize, alpha: FieldElem, beta: usize, f: &FieldCtx) {
        self.trace.lp_transform_count += 1;
        if self.log {
            self.trace.steps.push(TransformStep { pivot: i, target: j, position: h, beta });
        }
        if let Some(u) = &mut self.u {
            let rows = u.rows_mut();
            let (src, dst) = pair_mut(rows, i, j);
            dst.sub_scaled_shifted(alpha, beta, src, f);
        }
        if let Some(ui) = &mut self.u_inv {
            // The inverse elementary matrix adds column j times α x^β to column i.
            for r in 0..ui.nrows() {
                let add = ui.entry(r, j).mul_monomial_right(alpha, beta, f);
                if !add.is_zero() {
                    let e = ui.entry(r, i).add(&add, f);
                    ui.set(r, i, e);
                }
            }
        }
    }

    fn finish(self, matrix: SkewMatrix) -> Reduction {
        Reduction { matrix, trace: self.trace, unimodular: self.u, unimodular_inv: self.u_inv }
    }
}

fn deg_lp(v: &SkewVec, w: &Shift) -> (Degree, Option<usize>) {
    (v.degree_shifted(w), v.leading_position_shifted(w).ok())
}

/// Mulders–Storjohann without shift.
pub fn mulders_storjohann(v: &SkewMatrix, f: &FieldCtx) -> (SkewMatrix, ReductionTrace) {
    let r = reduce_shifted_with(v, &Shift::zero(v.ncols()), &ReduceOptions::default(), f)
        .expect("zero shift matches the width");
    (r.matrix, r.trace)
}

/// A `w`-shifted weak Popov form of `v` with the same row space.
pub fn reduce_shifted(v: &SkewMatrix, w: &Shift, f: &FieldCtx) -> Result<SkewMatrix> {
    reduce_shifted_with(v, w, &ReduceOptions::default(), f).map(|r| r.matrix)
}

/// Mulders–Storjohann on `Φ_w(v)` with the shift kept virtual: simple
/// transformations on `Φ_w(V)` and on `V` coincide, so only shifted leading
/// positions and degrees are ever computed.
///
/// Collisions are found by scanning rows in index order; of the two rows
/// sharing a leading position, the one of smaller shifted degree (smaller
/// index on ties) is applied to the other.
pub fn reduce_shifted_with(v: &SkewMatrix, w: &Shift, opts: &ReduceOptions, f: &FieldCtx) -> Result<Reduction> {
    let m = v.ncols();
    if w.len() != m {
        return Err(Error::Shift(format!("shift of length {} for width {m}", w.len())));
    }
    if let Some(mods) = &opts.column_moduli {
        if mods.len() != m {
            return Err(Error::Shift("one optional modulus per column expected".into()));
        }
    }
    let ops0 = field_ops();
    let mut mat = v.clone();
    let mut tracker = Tracker::new(v.nrows(), opts);
    let mut cache: Vec<(Degree, Option<usize>)> = mat.rows().iter().map(|r| deg_lp(r, w)).collect();
    let start_deg = mat.deg_shifted(w);

    loop {
        let mut owner: Vec<Option<usize>> = vec![None; m];
        let mut collision = None;
        for (r, &(_, lp)) in cache.iter().enumerate() {
            if let Some(h) = lp {
                if let Some(o) = owner[h] {
                    collision = Some((o, r, h));
                    break;
                }
                owner[h] = Some(r);
            }
        }
        let Some((a, b, h)) = collision else { break };
        let (i, j) = if cache[b].0 < cache[a].0 { (b, a) } else { (a, b) };
        let before = mat.row(j).value_shifted(w, m);
        let (alpha, beta) = mat.simple_transform(i, j, h, f)?;
        if let Some(mods) = &opts.column_moduli {
            reduce_vec_columns(mat.row_mut(j), mods, f)?;
        }
        debug_assert!(mat.row(j).value_shifted(w, m) < before, "value must decrease");
        tracker.record(i, j, h, alpha, beta, f);
        cache[j] = deg_lp(mat.row(j), w);
    }

    if cfg!(debug_assertions) && mat.is_square() && opts.column_moduli.is_none() {
        if let (Degree::Finite(d0), Degree::Finite(d1)) = (start_deg, mat.deg_shifted(w)) {
            // full rank: deg det of the shifted input equals the output degree
            let od = d0 - d1;
            debug_assert!(tracker.trace.lp_transform_count <= m * (od + m));
        }
    }
    tracker.trace.field_ops = field_ops() - ops0;
    Ok(tracker.finish(mat))
}

/// Degree of the Dieudonné determinant of a square full-rank matrix.
pub fn deg_det(v: &SkewMatrix, f: &FieldCtx) -> Result<usize> {
    if !v.is_square() {
        return Err(Error::Precondition(format!("{}x{} matrix is not square", v.nrows(), v.ncols())));
    }
    let (red, _) = mulders_storjohann(v, f);
    red.deg().finite().ok_or(Error::SingularMatrix)
}

/// `deg V − deg det V`.
pub fn orthogonality_defect(v: &SkewMatrix, f: &FieldCtx) -> Result<usize> {
    let dd = deg_det(v, f)?;
    let d = v.deg().finite().ok_or(Error::SingularMatrix)?;
    Ok(d - dd)
}

/// One walking step from a `w`-shifted into a `(w + e_0)`-shifted weak Popov form.
pub fn walk_step(v: &SkewMatrix, w: &Shift, f: &FieldCtx) -> Result<(SkewMatrix, ReductionTrace)> {
    let r = walk_with(v, w, 1, &ReduceOptions::default(), f)?;
    Ok((r.matrix, r.trace))
}

/// `steps` walking steps, ending in `(w + steps·e_0)`-shifted weak Popov form.
pub fn walk(v: &SkewMatrix, w: &Shift, steps: usize, f: &FieldCtx) -> Result<(SkewMatrix, ReductionTrace)> {
    let r = walk_with(v, w, steps, &ReduceOptions::default(), f)?;
    Ok((r.matrix, r.trace))
}

pub fn walk_with(v: &SkewMatrix, w: &Shift, steps: usize, opts: &ReduceOptions, f: &FieldCtx) -> Result<Reduction> {
    if !v.is_square() || w.len() != v.ncols() || w.is_empty() {
        return Err(Error::Precondition("walking needs a square matrix and a matching shift".into()));
    }
    if !v.is_shifted_weak_popov(w) {
        return Err(Error::Precondition("input is not in shifted weak Popov form".into()));
    }
    let ops0 = field_ops();
    let mut mat = v.clone();
    let mut tracker = Tracker::new(v.nrows(), opts);
    let mut cur = w.clone();
    for _ in 0..steps {
        let step0 = field_ops();
        let next = cur.bumped(0, 1);
        walk_once(&mut mat, &cur, &next, &mut tracker, f)?;
        tracker.trace.step_field_ops.push(field_ops() - step0);
        cur = next;
    }
    tracker.trace.field_ops = field_ops() - ops0;
    Ok(tracker.finish(mat))
}

fn walk_once(mat: &mut SkewMatrix, w: &Shift, w_hat: &Shift, tracker: &mut Tracker, f: &FieldCtx) -> Result<()> {
    let mut idx: Vec<(usize, usize)> = mat
        .rows()
        .iter()
        .enumerate()
        .filter_map(|(i, r)| match (r.leading_position_shifted(w), r.leading_position_shifted(w_hat)) {
            (Ok(h), Ok(0)) => Some((h, i)),
            _ => None,
        })
        .collect();
    idx.sort_by_key(|&(h, _)| h);
    let Some(&(_, first)) = idx.first() else { return Ok(()) };
    let mut t = first;
    for &(_, i) in &idx[1..] {
        if mat.entry(t, 0).degree() <= mat.entry(i, 0).degree() {
            let (alpha, beta) = mat.simple_transform(t, i, 0, f)?;
            tracker.record(t, i, 0, alpha, beta, f);
        } else {
            let (alpha, beta) = mat.simple_transform(i, t, 0, f)?;
            tracker.record(i, t, 0, alpha, beta, f);
            t = i;
        }
    }
    Ok(())
}
