//! Brute-force verifiers. Everything here works on raw coefficient vectors
//! with its own multiplication, division and evaluation, and never calls the
//! ring, matrix or reduction code it is meant to check. Only field
//! arithmetic is shared.
//!
//! The shift-register and interpolation conditions are linear over the whole
//! field `F_{q^s}` (left scalars commute with `λ ↦ λ s mod g` and with
//! evaluation on the left), so both searches are Gaussian elimination over
//! `F_{q^s}`.

use crate::ffield::{FieldCtx, FieldElem};
use crate::mglssr::{MgLssrInstance, MgLssrSolution};
use crate::mvinterp::MvInstance;
use crate::skewmat::SkewMatrix;
use crate::skewpoly::SkewPoly;

type Poly = Vec<FieldElem>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn deg(p: &[FieldElem]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// Product straight from the definition `x^i b = θ^i(b) x^i`.
pub fn naive_mul(a: &[FieldElem], b: &[FieldElem], f: &FieldCtx) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FieldElem::ZERO; a.len() + b.len() - 1];
    for k in 0..out.len() {
        let mut acc = FieldElem::ZERO;
        for i in 0..=k.min(a.len() - 1) {
            if k - i < b.len() {
                acc = f.add(acc, f.mul(a[i], f.frobenius(b[k - i], i)));
            }
        }
        out[k] = acc;
    }
    trim(out)
}

/// `Σ a_i θ^i(α)`, with `θ^i` applied by `i` repeated single steps.
pub fn naive_eval(a: &[FieldElem], alpha: FieldElem, f: &FieldCtx) -> FieldElem {
    let mut acc = FieldElem::ZERO;
    let mut t = alpha;
    for &c in a {
        acc = f.add(acc, f.mul(c, t));
        t = f.frobenius(t, 1);
    }
    acc
}

fn sub(a: &[FieldElem], b: &[FieldElem], f: &FieldCtx) -> Poly {
    let n = a.len().max(b.len());
    let g = |p: &[FieldElem], i: usize| p.get(i).copied().unwrap_or(FieldElem::ZERO);
    trim((0..n).map(|i| f.sub(g(a, i), g(b, i))).collect())
}

/// `(d, r)` with `a = d·c + r`, by repeated cancellation of the top term
/// with `c` multiplied on the left by a monomial.
fn naive_right_divide(a: &[FieldElem], c: &[FieldElem], f: &FieldCtx) -> Option<(Poly, Poly)> {
    let dc = deg(c)?;
    let mut r = trim(a.to_vec());
    let mut d = vec![FieldElem::ZERO; r.len().saturating_sub(dc).max(1)];
    while let Some(dr) = deg(&r) {
        if dr < dc {
            break;
        }
        let shift = dr - dc;
        let coef = f.div(r[dr], f.frobenius(c[dc], shift)).ok()?;
        let mut mono = vec![FieldElem::ZERO; shift + 1];
        mono[shift] = coef;
        r = sub(&r, &naive_mul(&mono, c, f), f);
        d[shift] = f.add(d[shift], coef);
    }
    Some((trim(d), r))
}

/// Solutions of `A x = b` over the field: one particular solution, or `None`.
fn solve_affine(mut a: Vec<Vec<FieldElem>>, mut b: Vec<FieldElem>, ncols: usize, f: &FieldCtx) -> Option<Vec<FieldElem>> {
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        b.swap(row, p);
        let inv = f.inv(a[row][col]).expect("nonzero pivot");
        for c in col..ncols {
            a[row][c] = f.mul(a[row][c], inv);
        }
        b[row] = f.mul(b[row], inv);
        for r in 0..nrows {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col];
                for c in col..ncols {
                    let t = f.mul(factor, a[row][c]);
                    a[r][c] = f.sub(a[r][c], t);
                }
                let t = f.mul(factor, b[row]);
                b[r] = f.sub(b[r], t);
            }
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    if b[row..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut x = vec![FieldElem::ZERO; ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r];
    }
    Some(x)
}

/// Right kernel basis of `A` (vectors `x` with `A x = 0`).
pub fn kernel(mut a: Vec<Vec<FieldElem>>, ncols: usize, f: &FieldCtx) -> Vec<Vec<FieldElem>> {
    let nrows = a.len();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == nrows {
            break;
        }
        let Some(p) = (row..nrows).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = f.inv(a[row][col]).expect("nonzero pivot");
        for c in col..ncols {
            a[row][c] = f.mul(a[row][c], inv);
        }
        for r in 0..nrows {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col];
                for c in col..ncols {
                    let t = f.mul(factor, a[row][c]);
                    a[r][c] = f.sub(a[r][c], t);
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![FieldElem::ZERO; ncols];
            x[fc] = FieldElem::ONE;
            for (r, &pc) in pivot_cols.iter().enumerate() {
                x[pc] = f.neg(a[r][fc]);
            }
            x
        })
        .collect()
}

/// Monic `λ` of least degree `d ≤ max_deg` solving the shift-register
/// conditions, found by testing `d = 0, 1, …` with an affine system in the
/// lower coefficients of `λ`.
pub fn brute_mglssr(inst: &MgLssrInstance, max_deg: usize, f: &FieldCtx) -> Option<MgLssrSolution> {
    let ell = inst.ell();
    let g0 = inst.gammas()[0];
    let s: Vec<Poly> = inst.s_list().iter().map(|p| p.coeffs().to_vec()).collect();
    let g: Vec<Poly> = inst.g_list().iter().map(|p| p.coeffs().to_vec()).collect();
    // images[i][j] = x^j s_i mod g_i
    let image = |i: usize, j: usize| -> Poly {
        let mut mono = vec![FieldElem::ZERO; j + 1];
        mono[j] = FieldElem::ONE;
        naive_right_divide(&naive_mul(&mono, &s[i], f), &g[i], f).expect("nonzero modulus").1
    };
    let images: Vec<Vec<Poly>> = (0..ell).map(|i| (0..=max_deg).map(|j| image(i, j)).collect()).collect();
    for d in 0..=max_deg {
        // coefficients of ω_i at positions ≥ d + γ_0 − γ_i must vanish
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..ell {
            let gi = inst.gammas()[i + 1];
            let dg = deg(&g[i]).unwrap();
            let start = (d + g0).saturating_sub(gi);
            let at = |j: usize, pos: usize| images[i][j].get(pos).copied().unwrap_or(FieldElem::ZERO);
            for pos in start..dg {
                rows.push((0..d).map(|j| at(j, pos)).collect::<Vec<_>>());
                rhs.push(f.neg(at(d, pos)));
            }
        }
        let low = if rows.is_empty() { Some(vec![FieldElem::ZERO; d]) } else { solve_affine(rows, rhs, d, f) };
        if let Some(mut lam) = low {
            lam.push(FieldElem::ONE);
            let omegas = (0..ell)
                .map(|i| {
                    let prod = naive_mul(&lam, &s[i], f);
                    SkewPoly::from_coeffs(naive_right_divide(&prod, &g[i], f).unwrap().1)
                })
                .collect();
            return Some(MgLssrSolution { lambda: SkewPoly::from_coeffs(lam), omegas });
        }
    }
    None
}

/// Both shift-register conditions checked with the naive routines:
/// `λ s_i ≡ ω_i mod g_i` on the right and `deg λ + γ_0 > deg ω_i + γ_i`.
pub fn is_mglssr_solution(inst: &MgLssrInstance, sol: &MgLssrSolution, f: &FieldCtx) -> bool {
    let lam = sol.lambda.coeffs();
    let Some(dl) = deg(lam) else { return false };
    sol.omegas.len() == inst.ell()
        && (0..inst.ell()).all(|i| {
            let w = sol.omegas[i].coeffs();
            let diff = sub(&naive_mul(lam, inst.s_list()[i].coeffs(), f), w, f);
            let congruent = naive_right_divide(&diff, inst.g_list()[i].coeffs(), f).is_some_and(|(_, r)| r.is_empty());
            let small = deg(w).is_none_or(|dw| dw + inst.gammas()[i + 1] < dl + inst.gammas()[0]);
            congruent && small
        })
}

/// Kernel of the interpolation system on the coefficients of `Q_0, …, Q_ℓ`
/// within the degree bounds: its dimension and one nonzero element.
pub fn brute_mv(inst: &MvInstance, f: &FieldCtx) -> (usize, Option<Vec<SkewPoly>>) {
    mv_kernel(inst, &inst.degree_bounds(), f)
}

/// Least `D` such that some nonzero `Q` with `deg Q_t + t(k−1) ≤ D` vanishes
/// on every point.
pub fn brute_mv_min_degree(inst: &MvInstance, f: &FieldCtx) -> Option<usize> {
    let step = inst.k() - 1;
    let top = inst.chi();
    (0..top).find(|&d| {
        let bounds: Vec<usize> = (0..=inst.ell()).map(|t| (d + 1).saturating_sub(t * step)).collect();
        mv_kernel(inst, &bounds, f).0 > 0
    })
}

/// `bounds[t]` is the number of free coefficients of `Q_t`.
fn mv_kernel(inst: &MvInstance, bounds: &[usize], f: &FieldCtx) -> (usize, Option<Vec<SkewPoly>>) {
    let ncols: usize = bounds.iter().sum();
    if ncols == 0 {
        return (0, None);
    }
    let rows: Vec<Vec<FieldElem>> = inst
        .points()
        .iter()
        .map(|(x, ys)| {
            let mut row = Vec::with_capacity(ncols);
            for (t, &b) in bounds.iter().enumerate() {
                let z = if t == 0 { *x } else { ys[t - 1] };
                let mut pw = z;
                for _ in 0..b {
                    row.push(pw);
                    pw = f.frobenius(pw, 1);
                }
            }
            row
        })
        .collect();
    let ker = kernel(rows, ncols, f);
    let sol = ker.first().map(|v| {
        let mut out = Vec::new();
        let mut off = 0;
        for &b in bounds {
            out.push(SkewPoly::from_coeffs(v[off..off + b].to_vec()));
            off += b;
        }
        out
    });
    (ker.len(), sol)
}

/// Dimension over `F_q` of the span of `values`: the `F_p`-rank of all
/// products with an `F_p`-basis of `F_q`, divided by `e`.
pub fn rank_over_fq(values: &[FieldElem], f: &FieldCtx) -> usize {
    let p = f.p();
    let width = f.degree() as usize;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for &v in values {
        for &b in f.subfield_basis() {
            rows.push(f.coeffs(f.mul(b, v)));
        }
    }
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = mod_inv(rows[rank][col], p);
        for c in 0..width {
            rows[rank][c] = rows[rank][c] * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let factor = rows[r][col];
                for c in 0..width {
                    rows[r][c] = (rows[r][c] + p * p - factor * rows[rank][c] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank / f.e() as usize
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Degree of the determinant by Euclidean elimination to upper triangular
/// form followed by the diagonal sum; `None` if singular.
pub fn deg_det_triangular(m: &SkewMatrix, f: &FieldCtx) -> Option<usize> {
    let n = m.nrows();
    if n != m.ncols() {
        return None;
    }
    let mut a: Vec<Vec<Poly>> =
        (0..n).map(|i| (0..n).map(|j| m.entry(i, j).coeffs().to_vec()).collect()).collect();
    let mut total = 0;
    for col in 0..n {
        loop {
            let live: Vec<usize> = (col..n).filter(|&r| deg(&a[r][col]).is_some()).collect();
            let &piv = live.iter().min_by_key(|&&r| deg(&a[r][col]).unwrap())?;
            if live.len() == 1 {
                a.swap(col, piv);
                break;
            }
            for &r in &live {
                if r == piv {
                    continue;
                }
                let (q, _) = naive_right_divide(&a[r][col], &a[piv][col], f)?;
                for c in 0..n {
                    let t = naive_mul(&q, &a[piv][c], f);
                    a[r][c] = sub(&a[r][c], &t, f);
                }
            }
        }
        total += deg(&a[col][col]).unwrap();
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f16() -> FieldCtx {
        FieldCtx::make_field(2, 1, 4, vec![1, 1, 0, 0, 1], 1).unwrap()
    }

    fn rand_poly(f: &FieldCtx, rng: &mut ChaCha8Rng, d: usize) -> Poly {
        trim((0..=d).map(|_| f.random(rng)).collect())
    }

    #[test]
    fn naive_product_matches_definition_in_f4() {
        let f = FieldCtx::make_field(2, 1, 2, vec![1, 1, 1], 1).unwrap();
        let w = f.elem(&[0, 1]).unwrap();
        let w1 = f.elem(&[1, 1]).unwrap();
        let got = naive_mul(&[FieldElem::ONE, FieldElem::ONE], &[FieldElem::ZERO, w], &f);
        assert_eq!(got, vec![FieldElem::ZERO, w, w1]);
    }

    #[test]
    fn naive_division_reconstructs() {
        let f = f16();
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..50 {
            let a = rand_poly(&f, &mut rng, 7);
            let mut c = rand_poly(&f, &mut rng, 3);
            if c.is_empty() {
                c = vec![FieldElem::ONE];
            }
            let (d, r) = naive_right_divide(&a, &c, &f).unwrap();
            assert!(deg(&r) < deg(&c));
            let dc = naive_mul(&d, &c, &f);
            assert_eq!(trim(a.clone()), sub(&dc, &sub(&[], &r, &f), &f));
        }
    }

    #[test]
    fn rank_basics() {
        let f = FieldCtx::with_default_modulus(2, 2, 3, 1).unwrap();
        assert_eq!(rank_over_fq(&[], &f), 0);
        assert_eq!(rank_over_fq(&[FieldElem::ZERO; 3], &f), 0);
        // fixed-field multiples do not add rank
        let fixed: Vec<FieldElem> = f.elements().filter(|&c| f.is_fixed(c) && !c.is_zero()).collect();
        let v = f.basis_elem(2);
        let vs: Vec<FieldElem> = fixed.iter().map(|&c| f.mul(c, v)).collect();
        assert_eq!(rank_over_fq(&vs, &f), 1);
        let basis: Vec<FieldElem> = (0..3).map(|j| f.pow(f.basis_elem(1), j)).collect();
        assert_eq!(rank_over_fq(&basis, &f), 3);
    }

    #[test]
    fn kernel_vectors_are_in_kernel() {
        let f = f16();
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for _ in 0..20 {
            let (r, c) = (rng.gen_range(1..5), rng.gen_range(1..7));
            let a: Vec<Vec<FieldElem>> = (0..r).map(|_| (0..c).map(|_| f.random(&mut rng)).collect()).collect();
            let ker = kernel(a.clone(), c, &f);
            assert!(ker.len() >= c.saturating_sub(r));
            for v in &ker {
                for row in &a {
                    let dot = row.iter().zip(v).fold(FieldElem::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)));
                    assert!(dot.is_zero());
                }
            }
        }
    }

    #[test]
    fn triangular_route_on_diagonal_and_singular() {
        let f = f16();
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        let a = SkewPoly::random(3, &f, &mut rng);
        let b = SkewPoly::random(5, &f, &mut rng);
        assert_eq!(deg_det_triangular(&SkewMatrix::diagonal(vec![a, b]), &f), Some(8));
        assert_eq!(deg_det_triangular(&SkewMatrix::zeros(2, 2), &f), None);
    }
}
