//! Multi-sequence shift-register synthesis over the skew ring: find `λ` of
//! minimal degree and `ω_1, …, ω_ℓ` with `λ s_i ≡ ω_i mod g_i` and
//! `deg λ + γ_0 > deg ω_i + γ_i`.
//!
//! Two engines are provided. [`MgLssrInstance::solve`] row-reduces the basis
//! matrix under the shift `(γ_0, …, γ_ℓ)`. [`MgLssrInstance::demand_driven_solve`]
//! keeps only the first column of the basis and computes the other entries
//! one coefficient at a time, with a sparse path for moduli `x^d + a`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{field_ops, FieldCtx, FieldElem};
use crate::rowreduce::{reduce_shifted_with, ReduceOptions, ReductionTrace};
use crate::skewmat::{Shift, SkewMatrix, SkewVec};
use crate::skewpoly::{Degree, SkewPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MgLssrInstance {
    ell: usize,
    s_list: Vec<SkewPoly>,
    g_list: Vec<SkewPoly>,
    gammas: Vec<usize>,
    mu: usize,
    /// `Some(a)` when `g_i` is a unit multiple of `x^{d_i} + a`.
    binomials: Vec<Option<FieldElem>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MgLssrSolution {
    pub lambda: SkewPoly,
    pub omegas: Vec<SkewPoly>,
}

/// Counters of one demand-driven run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DdTrace {
    pub iterations: usize,
    pub transformations: usize,
    pub swaps: usize,
    pub field_ops: u64,
    /// Whether every coefficient query took the sparse path.
    pub fast_path: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryPath {
    /// Sparse convolution when the modulus is binomial, full product otherwise.
    Auto,
    /// Always the full product and remainder.
    Generic,
}

impl MgLssrInstance {
    /// Builds and normalizes an instance: `s_i ← s_i mod g_i`.
    pub fn new(s_list: Vec<SkewPoly>, g_list: Vec<SkewPoly>, gammas: Vec<usize>, f: &FieldCtx) -> Result<Self> {
        let ell = s_list.len();
        if ell == 0 {
            return Err(Error::Instance("at least one sequence is required".into()));
        }
        if g_list.len() != ell {
            return Err(Error::Instance(format!("{ell} sequences but {} moduli", g_list.len())));
        }
        if gammas.len() != ell + 1 {
            return Err(Error::Instance(format!("expected {} shifts, got {}", ell + 1, gammas.len())));
        }
        if let Some(i) = g_list.iter().position(SkewPoly::is_zero) {
            return Err(Error::Instance(format!("modulus g_{} is zero", i + 1)));
        }
        let s_list = s_list
            .iter()
            .zip(&g_list)
            .map(|(s, g)| s.mod_right(g, f))
            .collect::<Result<Vec<_>>>()?;
        let mu = g_list.iter().zip(&gammas[1..]).map(|(g, &gm)| gm + g.degree().unwrap()).max().unwrap();
        let binomials = g_list.iter().map(|g| binomial_tail(g, f)).collect();
        Ok(MgLssrInstance { ell, s_list, g_list, gammas, mu, binomials })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn s_list(&self) -> &[SkewPoly] {
        &self.s_list
    }

    pub fn g_list(&self) -> &[SkewPoly] {
        &self.g_list
    }

    pub fn gammas(&self) -> &[usize] {
        &self.gammas
    }

    /// `max_i γ_i + deg g_i`.
    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn is_binomial(&self) -> bool {
        self.binomials.iter().all(Option::is_some)
    }

    pub fn shift(&self) -> Shift {
        Shift::new(self.gammas.clone())
    }

    /// Rows `(1, s_1, …, s_ℓ)` and `g_i e_i`.
    pub fn build_basis(&self) -> SkewMatrix {
        let m = self.ell + 1;
        let mut first = vec![SkewPoly::one()];
        first.extend(self.s_list.iter().cloned());
        let mut rows = vec![SkewVec::new(first)];
        for (i, g) in self.g_list.iter().enumerate() {
            let mut r = SkewVec::zeros(m);
            r.entries[i + 1] = g.clone();
            rows.push(r);
        }
        SkewMatrix::new(rows).expect("rows share the width")
    }

    /// Monic `λ` with the reduced remainders `ω_i = λ s_i mod g_i`.
    pub fn solution_from_lambda(&self, lambda: &SkewPoly, f: &FieldCtx) -> MgLssrSolution {
        let mut lambda = lambda.clone();
        lambda.make_monic(f);
        let omegas = self
            .s_list
            .iter()
            .zip(&self.g_list)
            .map(|(s, g)| lambda.mul(s, f).mod_right(g, f).expect("moduli are nonzero"))
            .collect();
        MgLssrSolution { lambda, omegas }
    }

    /// Both defining conditions, checked exactly.
    pub fn is_valid(&self, sol: &MgLssrSolution, f: &FieldCtx) -> bool {
        if sol.lambda.is_zero() || sol.omegas.len() != self.ell {
            return false;
        }
        let lhs = sol.lambda.degree() + self.gammas[0];
        self.s_list.iter().zip(&self.g_list).zip(&sol.omegas).zip(&self.gammas[1..]).all(|(((s, g), w), &gm)| {
            let congruent = sol.lambda.mul(s, f).sub(w, f).mod_right(g, f).is_ok_and(|r| r.is_zero());
            congruent && lhs > w.degree() + gm
        })
    }

    /// Row reduction of the basis under the shift `(γ_0, …, γ_ℓ)`.
    pub fn solve(&self, f: &FieldCtx) -> MgLssrSolution {
        self.solve_traced(f).0
    }

    pub fn solve_traced(&self, f: &FieldCtx) -> (MgLssrSolution, ReductionTrace) {
        let w = self.shift();
        let red = reduce_shifted_with(&self.build_basis(), &w, &ReduceOptions::default(), f)
            .expect("shift has the basis width");
        let row = red
            .matrix
            .rows()
            .iter()
            .find(|r| r.leading_position_shifted(&w) == Ok(0))
            .expect("a full-rank shifted weak Popov basis has a row with leading position 0");
        (self.solution_from_lambda(&row.entries[0], f), red.trace)
    }

    /// Coefficient of `x^η` in `(λ x^{γ_0}·…)`'s `h`-th shifted entry, that is
    /// the coefficient of `x^{η−γ_h}` in `λ s_h mod g_h`.
    pub fn coefficient_query(&self, lambda: &SkewPoly, h: usize, eta: usize, f: &FieldCtx) -> FieldElem {
        self.coefficient_query_with(lambda, h, eta, QueryPath::Auto, f)
    }

    pub fn coefficient_query_generic(&self, lambda: &SkewPoly, h: usize, eta: usize, f: &FieldCtx) -> FieldElem {
        self.coefficient_query_with(lambda, h, eta, QueryPath::Generic, f)
    }

    pub fn coefficient_query_with(&self, lambda: &SkewPoly, h: usize, eta: usize, path: QueryPath, f: &FieldCtx) -> FieldElem {
        assert!((1..=self.ell).contains(&h), "sequence index {h} out of range");
        let gamma = self.gammas[h];
        if lambda.is_zero() || eta < gamma {
            return FieldElem::ZERO;
        }
        let eta = eta - gamma;
        let g = &self.g_list[h - 1];
        let d = g.degree().unwrap();
        if eta >= d {
            return FieldElem::ZERO;
        }
        let s = &self.s_list[h - 1];
        match (path, self.binomials[h - 1]) {
            (QueryPath::Auto, Some(a)) => binomial_coefficient(lambda, s, d, a, eta, f),
            _ => lambda.mul(s, f).mod_right(g, f).expect("nonzero modulus").coeff(eta),
        }
    }

    pub fn demand_driven_solve(&self, f: &FieldCtx) -> MgLssrSolution {
        self.demand_driven_traced(QueryPath::Auto, f).0
    }

    /// Demand-driven solver. `λ_0, …, λ_ℓ` are stored without the factor
    /// `x^{γ_0}` so the return step needs no division; shifted degrees of the
    /// first column are `deg λ_j + γ_0`.
    pub fn demand_driven_traced(&self, path: QueryPath, f: &FieldCtx) -> (MgLssrSolution, DdTrace) {
        let ops0 = field_ops();
        let ell = self.ell;
        let g0 = self.gammas[0];
        let mut trace = DdTrace { fast_path: path == QueryPath::Auto && self.is_binomial(), ..Default::default() };

        let mut eta = g0;
        let mut h = 0;
        for (i, s) in self.s_list.iter().enumerate() {
            if let Degree::Finite(d) = s.degree() {
                if d + self.gammas[i + 1] >= eta {
                    eta = d + self.gammas[i + 1];
                    h = i + 1;
                }
            }
        }
        if h == 0 {
            let sol = self.solution_from_lambda(&SkewPoly::one(), f);
            trace.field_ops = field_ops() - ops0;
            return (sol, trace);
        }

        let mut lambdas = vec![SkewPoly::zero(); ell + 1];
        lambdas[0] = SkewPoly::one();
        let mut alphas = vec![FieldElem::ZERO; ell + 1];
        let mut etas = vec![0usize; ell + 1];
        for j in 1..=ell {
            let g = &self.g_list[j - 1];
            alphas[j] = g.leading_coeff().unwrap();
            etas[j] = g.degree().unwrap() + self.gammas[j];
        }

        let mut eta = eta as i64;
        while lambdas[0].degree().finite().is_none_or(|d| (d + g0) as i64 <= eta) {
            trace.iterations += 1;
            let mut e = eta as usize;
            let mut alpha = self.coefficient_query_with(&lambdas[0], h, e, path, f);
            if !alpha.is_zero() {
                if e < etas[h] {
                    lambdas.swap(0, h);
                    std::mem::swap(&mut alpha, &mut alphas[h]);
                    std::mem::swap(&mut e, &mut etas[h]);
                    eta = e as i64;
                    trace.swaps += 1;
                }
                let beta = e - etas[h];
                let c = f.div(alpha, f.frobenius(alphas[h], beta)).expect("stored leading coefficients are nonzero");
                let (lo, hi) = lambdas.split_at_mut(h);
                lo[0].sub_scaled_shifted(c, beta, &hi[0], f);
                trace.transformations += 1;
            }
            if h > 1 {
                h -= 1;
            } else {
                eta -= 1;
                h = ell;
            }
        }
        let sol = self.solution_from_lambda(&lambdas[0], f);
        trace.field_ops = field_ops() - ops0;
        (sol, trace)
    }
}

/// `a` with `g = c·(x^d + a)` when `g` has exactly that shape.
fn binomial_tail(g: &SkewPoly, f: &FieldCtx) -> Option<FieldElem> {
    let d = g.degree().finite()?;
    if d == 0 || g.coeffs()[1..d].iter().any(|c| !c.is_zero()) {
        return None;
    }
    let lc = g.leading_coeff()?;
    f.div(g.coeff(0), lc).ok()
}

/// Coefficient of `x^η` in `P mod (x^d + a)` with `P = λ s`, for `η < d`.
///
/// Since `c x^{k} ≡ −c θ^{k−d}(a) x^{k−d}`, the coefficient equals
/// `Σ_t (−1)^t P_{η+td} Π_{u<t} θ^{η+ud}(a)`, and each `P_k` is one convolution.
fn binomial_coefficient(lambda: &SkewPoly, s: &SkewPoly, d: usize, a: FieldElem, eta: usize, f: &FieldCtx) -> FieldElem {
    let top = lambda.coeffs().len() + s.coeffs().len();
    let mut acc = FieldElem::ZERO;
    let mut factor = FieldElem::ONE;
    let mut k = eta;
    while k < top {
        let p = product_coeff(lambda, s, k, f);
        if !p.is_zero() {
            acc = f.add(acc, f.mul(factor, p));
        }
        if a.is_zero() {
            break;
        }
        factor = f.neg(f.mul(factor, f.frobenius(a, k)));
        k += d;
    }
    acc
}

/// `(λ s)_k = Σ_i λ_i θ^i(s_{k−i})`.
fn product_coeff(lambda: &SkewPoly, s: &SkewPoly, k: usize, f: &FieldCtx) -> FieldElem {
    let ls = lambda.coeffs();
    let ss = s.coeffs();
    if ls.is_empty() || ss.is_empty() {
        return FieldElem::ZERO;
    }
    let lo = k.saturating_sub(ss.len() - 1);
    let hi = k.min(ls.len() - 1);
    let mut acc = FieldElem::ZERO;
    if lo > hi {
        return acc;
    }
    for i in lo..=hi {
        let (li, sj) = (ls[i], ss[k - i]);
        if !li.is_zero() && !sj.is_zero() {
            acc = f.add(acc, f.mul(li, f.frobenius(sj, i)));
        }
    }
    acc
}

/// Reference engines used to cross-check the demand-driven solver.
pub mod reference {
    use super::*;

    /// Result of one Intermediate run.
    #[derive(Clone, Debug)]
    pub struct IntermediateRun {
        /// Final basis with the shift removed.
        pub basis: SkewMatrix,
        pub solution: MgLssrSolution,
        pub iterations: usize,
    }

    /// The Intermediate algorithm: Mulders–Storjohann on `Φ_w(M)` where only
    /// row 0 is ever modified, swapping it with row `LP(v_0)` when needed so
    /// that row `h ≥ 1` keeps leading position `h`. With `modulo`, row 0 is
    /// reduced modulo `g_j x^{γ_j}` in columns `j ≥ 1` after each
    /// transformation.
    pub fn intermediate(inst: &MgLssrInstance, modulo: bool, f: &FieldCtx) -> IntermediateRun {
        let ell = inst.ell();
        let w = inst.shift();
        let mut v = inst.build_basis().apply_shift(&w).expect("shift has the basis width");
        let moduli: Vec<SkewPoly> = inst.g_list().iter().zip(&inst.gammas()[1..]).map(|(g, &gm)| g.shift(gm)).collect();

        let finish = |v: SkewMatrix, iterations| {
            let basis = v.unapply_shift(&w).expect("columns keep their shift");
            let solution = inst.solution_from_lambda(&basis.entry(0, 0).clone(), f);
            IntermediateRun { basis, solution, iterations }
        };

        let row0 = v.row(0);
        let (mut eta, mut h) = (row0.degree().unwrap() as i64, row0.leading_position().unwrap());
        if h == 0 {
            return finish(v, 0);
        }
        let mut iterations = 0;
        while v.entry(0, 0).degree().finite().is_none_or(|d| d as i64 <= eta) {
            iterations += 1;
            let mut e = eta as usize;
            let mut alpha = v.entry(0, h).coeff(e);
            if !alpha.is_zero() {
                let mut eta_h = v.row(h).degree().unwrap();
                let mut alpha_h = v.entry(h, h).coeff(eta_h);
                if e < eta_h {
                    v.swap_rows(0, h);
                    std::mem::swap(&mut alpha, &mut alpha_h);
                    std::mem::swap(&mut e, &mut eta_h);
                    eta = e as i64;
                }
                let beta = e - eta_h;
                let c = f.div(alpha, f.frobenius(alpha_h, beta)).expect("leading coefficient is nonzero");
                let src = v.row(h).clone();
                v.row_mut(0).sub_scaled_shifted(c, beta, &src, f);
                if modulo {
                    for j in 1..=ell {
                        let r = v.entry(0, j).mod_right(&moduli[j - 1], f).expect("nonzero modulus");
                        v.set(0, j, r);
                    }
                }
            }
            if h > 1 {
                h -= 1;
            } else {
                eta -= 1;
                h = ell;
            }
        }
        finish(v, iterations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f16() -> FieldCtx {
        FieldCtx::make_field(2, 1, 4, vec![1, 1, 0, 0, 1], 1).unwrap()
    }

    fn random_instance(f: &FieldCtx, rng: &mut ChaCha8Rng, ell: usize, dg: usize, binomial: bool) -> MgLssrInstance {
        let g_list: Vec<SkewPoly> = (0..ell)
            .map(|_| {
                if binomial {
                    let mut c = vec![FieldElem::ZERO; dg + 1];
                    c[0] = f.random(rng);
                    c[dg] = f.random_nonzero(rng);
                    SkewPoly::from_coeffs(c)
                } else {
                    SkewPoly::random(dg, f, rng)
                }
            })
            .collect();
        let s_list = (0..ell).map(|_| SkewPoly::random(dg - 1, f, rng)).collect();
        let gammas = (0..=ell).map(|_| rng.gen_range(0..4)).collect();
        MgLssrInstance::new(s_list, g_list, gammas, f).unwrap()
    }

    #[test]
    fn instance_validation_and_normalization() {
        let f = f16();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let g = SkewPoly::random(3, &f, &mut rng);
        let s = SkewPoly::random(6, &f, &mut rng);
        let inst = MgLssrInstance::new(vec![s.clone()], vec![g.clone()], vec![1, 2], &f).unwrap();
        assert_eq!(inst.s_list()[0], s.mod_right(&g, &f).unwrap());
        assert_eq!(inst.mu(), 5);
        assert!(MgLssrInstance::new(vec![], vec![], vec![0], &f).is_err());
        assert!(MgLssrInstance::new(vec![s.clone()], vec![SkewPoly::zero()], vec![0, 0], &f).is_err());
        assert!(MgLssrInstance::new(vec![s], vec![g], vec![0], &f).is_err());
    }

    #[test]
    fn basis_trivial_and_congruent() {
        let f = f16();
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let g = SkewPoly::random(4, &f, &mut rng);
        let inst = MgLssrInstance::new(vec![SkewPoly::zero()], vec![g.clone()], vec![0, 0], &f).unwrap();
        assert_eq!(inst.build_basis(), SkewMatrix::diagonal(vec![SkewPoly::one(), g]));
        let inst = random_instance(&f, &mut rng, 3, 5, false);
        for r in inst.build_basis().rows() {
            for i in 0..3 {
                let lhs = r.entries[0].mul(&inst.s_list()[i], &f).sub(&r.entries[i + 1], &f);
                assert!(lhs.mod_right(&inst.g_list()[i], &f).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn trivial_solutions() {
        let f = f16();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let gs: Vec<_> = (0..2).map(|_| SkewPoly::random(4, &f, &mut rng)).collect();
        let inst = MgLssrInstance::new(vec![SkewPoly::zero(); 2], gs.clone(), vec![0, 0, 0], &f).unwrap();
        for sol in [inst.solve(&f), inst.demand_driven_solve(&f)] {
            assert_eq!(sol.lambda, SkewPoly::one());
            assert!(sol.omegas.iter().all(SkewPoly::is_zero));
        }
        // γ_0 dominating: the first row already solves
        let ss: Vec<_> = (0..2).map(|_| SkewPoly::random(3, &f, &mut rng)).collect();
        let inst = MgLssrInstance::new(ss, gs, vec![10, 0, 0], &f).unwrap();
        for sol in [inst.solve(&f), inst.demand_driven_solve(&f)] {
            assert_eq!(sol.lambda, SkewPoly::one());
            assert_eq!(sol.omegas, inst.s_list());
            assert!(inst.is_valid(&sol, &f));
        }
    }

    #[test]
    fn engines_agree_on_random_instances() {
        let f = f16();
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for round in 0..60 {
            let ell = 1 + round % 3;
            let dg = rng.gen_range(2..7);
            let inst = random_instance(&f, &mut rng, ell, dg, round % 2 == 0);
            let a = inst.solve(&f);
            let (b, tr) = inst.demand_driven_traced(QueryPath::Auto, &f);
            let (c, _) = inst.demand_driven_traced(QueryPath::Generic, &f);
            let mid = reference::intermediate(&inst, true, &f);
            assert!(inst.is_valid(&a, &f));
            assert!(inst.is_valid(&b, &f));
            assert_eq!(a.lambda.degree(), b.lambda.degree());
            assert_eq!(b, c);
            assert_eq!(b, mid.solution);
            assert_eq!(tr.iterations, mid.iterations);
        }
    }

    #[test]
    fn fast_query_matches_generic() {
        let f = f16();
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for _ in 0..40 {
            let dg = rng.gen_range(2..8);
            let inst = random_instance(&f, &mut rng, 2, dg, true);
            assert!(inst.is_binomial());
            let dl = rng.gen_range(0..12);
            let lam = SkewPoly::random(dl, &f, &mut rng);
            for h in 1..=2 {
                for eta in 0..inst.mu() + 3 {
                    assert_eq!(
                        inst.coefficient_query(&lam, h, eta, &f),
                        inst.coefficient_query_generic(&lam, h, eta, &f)
                    );
                }
                assert!(inst.coefficient_query(&SkewPoly::zero(), h, 0, &f).is_zero());
            }
        }
    }

    #[test]
    fn binomial_detection() {
        let f = f16();
        let a = f.basis_elem(1);
        let c = f.basis_elem(2);
        let g = SkewPoly::from_coeffs(vec![f.mul(c, a), FieldElem::ZERO, c]);
        assert_eq!(binomial_tail(&g, &f), Some(a));
        let g = SkewPoly::from_coeffs(vec![a, FieldElem::ONE, FieldElem::ONE]);
        assert_eq!(binomial_tail(&g, &f), None);
        assert_eq!(binomial_tail(&SkewPoly::monomial(c, 3), &f), Some(FieldElem::ZERO));
    }

    #[test]
    fn modulo_reduction_keeps_correctness() {
        let f = f16();
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        for round in 0..60 {
            let ell = 1 + round % 3;
            let dg = rng.gen_range(2..7);
            let inst = random_instance(&f, &mut rng, ell, dg, false);
            let a = reference::intermediate(&inst, true, &f);
            let b = reference::intermediate(&inst, false, &f);
            assert!(inst.is_valid(&a.solution, &f) && inst.is_valid(&b.solution, &f));
            assert_eq!(a.solution.lambda.degree(), b.solution.lambda.degree());
            assert!(a.basis.is_shifted_weak_popov(&inst.shift()));
            assert!(b.basis.is_shifted_weak_popov(&inst.shift()));
        }
    }
}
