//! Acceptance suite: one PASS/FAIL line per criterion. Run with
//! `cargo test -p skewred --test acceptance` (add `--release` for timings).

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skewred::ffield::reset_field_ops;
use skewred::mglssr::{reference, QueryPath};
use skewred::oracle;
use skewred::rowreduce::{deg_det, mulders_storjohann, orthogonality_defect, reduce_shifted_with, ReduceOptions};
use skewred::{
    Execution, FieldCtx, FieldElem, GabCode, MgLssrInstance, MvEngine, MvInstance, Shift, SkewMatrix, SkewPoly,
};

const EXAMPLE1_DEG_DET: usize = 411;
const EXAMPLE1_TIME_LIMIT: Duration = Duration::from_secs(5);
const WEAK_POPOV_TIME_LIMIT: Duration = Duration::from_secs(60);
/// Largest allowed max/min ratio of normalized op counts across sizes.
const SCALING_FACTOR: f64 = 2.0;
const GAB_BEYOND_HALF_MIN_RATE: f64 = 0.90;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn f16() -> FieldCtx {
    FieldCtx::make_field(2, 1, 4, vec![1, 1, 0, 0, 1], 1).unwrap()
}

fn random_entry(f: &FieldCtx, rng: &mut ChaCha8Rng, maxdeg: usize) -> SkewPoly {
    if rng.gen_ratio(1, 6) {
        SkewPoly::zero()
    } else {
        let d = rng.gen_range(0..=maxdeg);
        SkewPoly::random(d, f, rng)
    }
}

fn random_square(f: &FieldCtx, rng: &mut ChaCha8Rng, m: usize, maxdeg: usize) -> SkewMatrix {
    let rows = (0..m).map(|_| (0..m).map(|_| random_entry(f, rng, maxdeg)).collect()).collect();
    SkewMatrix::from_polys(rows).unwrap()
}

fn ratio(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    max / min
}

fn criterion_1() -> Outcome {
    let f = f16();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let s = vec![SkewPoly::random(99, &f, &mut rng), SkewPoly::random(95, &f, &mut rng)];
    let g = vec![SkewPoly::random(100, &f, &mut rng), SkewPoly::random(100, &f, &mut rng)];
    let w = Shift::new(vec![100, 42, 69]);
    let start = Instant::now();
    let inst = MgLssrInstance::new(s, g, w.w.clone(), &f).unwrap();
    let phi = inst.build_basis().apply_shift(&w).unwrap();
    let dd = deg_det(&phi, &f).unwrap();
    let elapsed = start.elapsed();
    outcome(
        dd == EXAMPLE1_DEG_DET && elapsed < EXAMPLE1_TIME_LIMIT,
        format!("deg_det = {dd} (want {EXAMPLE1_DEG_DET}), {:.3} s (limit {:?})", elapsed.as_secs_f64(), EXAMPLE1_TIME_LIMIT),
    )
}

fn criterion_2() -> Outcome {
    let f = f16();
    let start = Instant::now();
    let opts = ReduceOptions { track_unimodular: true, ..Default::default() };
    let results = skewred::batch::map_range(500, Execution::Parallel, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + i as u64);
        let m = rng.gen_range(1..=4);
        let v = random_square(&f, &mut rng, m, 8);
        let red = reduce_shifted_with(&v, &Shift::zero(m), &opts, &f).unwrap();
        let u = red.unimodular.as_ref().unwrap();
        let ui = red.unimodular_inv.as_ref().unwrap();
        let popov = red.matrix.is_weak_popov();
        let rebuilt = ui.mul(&red.matrix, &f).unwrap() == v && u.mul(&v, &f).unwrap() == red.matrix;
        let (full, bound) = match orthogonality_defect(&v, &f) {
            Ok(od) => (true, red.trace.lp_transform_count <= m * (od + m)),
            Err(_) => (false, true),
        };
        (popov, rebuilt, full, bound)
    });
    let elapsed = start.elapsed();
    let bad_popov = results.iter().filter(|r| !r.0).count();
    let bad_u = results.iter().filter(|r| !r.1).count();
    let full = results.iter().filter(|r| r.2).count();
    let bad_bound = results.iter().filter(|r| !r.3).count();
    outcome(
        bad_popov == 0 && bad_u == 0 && bad_bound == 0 && elapsed < WEAK_POPOV_TIME_LIMIT,
        format!(
            "500 matrices: {bad_popov} not weak Popov, {bad_u} bad U, {bad_bound}/{full} full-rank over bound, {:.2} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_3() -> Outcome {
    let f = f16();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    let mut bad = 0;
    while checked < 200 {
        let m = rng.gen_range(1..=4);
        let v = random_square(&f, &mut rng, m, 8);
        if deg_det(&v, &f).is_err() {
            continue;
        }
        let (red, _) = mulders_storjohann(&v, &f);
        checked += 1;
        if orthogonality_defect(&red, &f) != Ok(0) {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{bad}/200 reduced full-rank matrices with nonzero defect"))
}

fn criterion_4() -> Outcome {
    let f = f16();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut product, mut shift, mut tri, mut independent) = (0, 0, 0, 0);
    let mut pairs = 0;
    while pairs < 200 {
        let m = rng.gen_range(1..=3);
        let a = random_square(&f, &mut rng, m, 5);
        let b = random_square(&f, &mut rng, m, 5);
        let (Ok(da), Ok(db)) = (deg_det(&a, &f), deg_det(&b, &f)) else { continue };
        pairs += 1;
        let ab = a.mul(&b, &f).unwrap();
        if deg_det(&ab, &f) != Ok(da + db) {
            product += 1;
        }
        let w = Shift::new((0..m).map(|_| rng.gen_range(0..6)).collect());
        if deg_det(&a.apply_shift(&w).unwrap(), &f) != Ok(da + w.total()) {
            shift += 1;
        }
        if oracle::deg_det_triangular(&a, &f) != Some(da) {
            independent += 1;
        }
        let mut t = SkewMatrix::zeros(m, m);
        let mut diag = 0;
        for i in 0..m {
            let d = rng.gen_range(0..6);
            diag += d;
            t.set(i, i, SkewPoly::random(d, &f, &mut rng));
            for j in i + 1..m {
                t.set(i, j, random_entry(&f, &mut rng, 6));
            }
        }
        if deg_det(&t, &f) != Ok(diag) {
            tri += 1;
        }
    }
    outcome(
        product + shift + tri + independent == 0,
        format!(
            "200 pairs: {product} product, {shift} shift, {tri} triangular, {independent} elimination-route mismatches"
        ),
    )
}

fn random_mglssr(f: &FieldCtx, rng: &mut ChaCha8Rng, ell: usize, binomial: bool) -> MgLssrInstance {
    let gammas: Vec<usize> = (0..=ell).map(|_| rng.gen_range(0..=3)).collect();
    let mut g_list = Vec::new();
    let mut s_list = Vec::new();
    for i in 0..ell {
        let d = rng.gen_range(1..=12 - gammas[i + 1]);
        let g = if binomial {
            let mut c = vec![FieldElem::ZERO; d + 1];
            c[0] = f.random(rng);
            c[d] = FieldElem::ONE;
            SkewPoly::from_coeffs(c)
        } else {
            SkewPoly::random(d, f, rng)
        };
        g_list.push(g);
        s_list.push(random_entry(f, rng, d - 1));
    }
    MgLssrInstance::new(s_list, g_list, gammas, f).unwrap()
}

fn criterion_5() -> Outcome {
    let f = f16();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = Vec::new();
    for trial in 0..100 {
        let ell = rng.gen_range(1..=3);
        let inst = random_mglssr(&f, &mut rng, ell, false);
        let sols = [
            inst.solve(&f),
            inst.demand_driven_solve(&f),
            reference::intermediate(&inst, true, &f).solution,
        ];
        let d = sols[0].lambda.degree();
        let agree = sols.iter().all(|s| s.lambda.degree() == d && s.lambda.is_monic());
        let valid = sols.iter().all(|s| inst.is_valid(s, &f) && oracle::is_mglssr_solution(&inst, s, &f));
        let max_deg: usize = inst.g_list().iter().map(|g| g.degree().unwrap()).sum::<usize>() + 3;
        let minimal = oracle::brute_mglssr(&inst, max_deg, &f)
            .is_some_and(|b| b.lambda.degree() == d && oracle::is_mglssr_solution(&inst, &b, &f));
        if !(agree && valid && minimal) {
            bad.push(trial);
        }
    }
    outcome(bad.is_empty(), format!("100 instances, failing: {bad:?}"))
}

fn binomial_instance(f: &FieldCtx, rng: &mut ChaCha8Rng, ell: usize, mu: usize) -> MgLssrInstance {
    let g_list = (0..ell)
        .map(|_| {
            let mut c = vec![FieldElem::ZERO; mu + 1];
            c[0] = f.random_nonzero(rng);
            c[mu] = FieldElem::ONE;
            SkewPoly::from_coeffs(c)
        })
        .collect();
    let s_list = (0..ell).map(|_| SkewPoly::random(mu - 1, f, rng)).collect();
    MgLssrInstance::new(s_list, g_list, vec![0; ell + 1], f).unwrap()
}

fn criterion_6() -> Outcome {
    let f = f16();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut mismatches = 0;
    for _ in 0..100 {
        let ell = rng.gen_range(1..=3);
        let inst = random_mglssr(&f, &mut rng, ell, true);
        assert!(inst.is_binomial());
        let lambda = SkewPoly::random(rng.gen_range(0..=14), &f, &mut rng);
        for h in 1..=ell {
            let top = inst.gammas()[h] + inst.g_list()[h - 1].degree().unwrap() + 2;
            for eta in 0..top {
                if inst.coefficient_query(&lambda, h, eta, &f) != inst.coefficient_query_generic(&lambda, h, eta, &f) {
                    mismatches += 1;
                }
            }
        }
        let (fast, tf) = inst.demand_driven_traced(QueryPath::Auto, &f);
        let (slow, _) = inst.demand_driven_traced(QueryPath::Generic, &f);
        if fast != slow || !tf.fast_path {
            mismatches += 1;
        }
    }
    let ell = 2;
    let mut normalized = Vec::new();
    for mu in [32usize, 64, 128] {
        let runs = 4;
        let mut total = 0u64;
        for _ in 0..runs {
            let inst = binomial_instance(&f, &mut rng, ell, mu);
            total += inst.demand_driven_traced(QueryPath::Auto, &f).1.field_ops;
        }
        normalized.push(total as f64 / runs as f64 / (ell * mu * mu) as f64);
    }
    let r = ratio(&normalized);
    outcome(
        mismatches == 0 && r <= SCALING_FACTOR,
        format!(
            "{mismatches} fast/generic mismatches; ops/(ℓμ²) at μ=32,64,128: {:.2}, {:.2}, {:.2} (ratio {r:.2}, limit {SCALING_FACTOR})",
            normalized[0], normalized[1], normalized[2]
        ),
    )
}

fn criterion_7() -> Outcome {
    let f = FieldCtx::with_default_modulus(2, 1, 16, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut bad = Vec::new();
    let mut done = 0;
    while done < 100 {
        let ell = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=3);
        let need = ell * (ell + 1) / 2 * (k - 1);
        if need >= 12 {
            continue;
        }
        let n = rng.gen_range(need + 1..=12);
        let inst = MvInstance::random(ell, k, n, &f, &mut rng).unwrap();
        let red = inst.interpolation_step(MvEngine::Reduce, &f).unwrap();
        let walk = inst.interpolation_step(MvEngine::Walk, &f).unwrap();
        let ok = inst.verify(&red.q, &f)
            && inst.verify(&walk.q, &f)
            && red.shifted_degree(&inst) == walk.shifted_degree(&inst)
            && red.shifted_degree(&inst) == oracle::brute_mv_min_degree(&inst, &f);
        if !ok {
            bad.push(done);
        }
        done += 1;
    }
    let big = FieldCtx::with_default_modulus(2, 1, 32, 1).unwrap();
    let (ell, k) = (2, 2);
    let mut normalized = Vec::new();
    for n in [8usize, 16, 32] {
        let runs = 3;
        let mut per_step = 0.0;
        for _ in 0..runs {
            let inst = MvInstance::random(ell, k, n, &big, &mut rng).unwrap();
            let (_, trace) = inst.interpolation_traced(MvEngine::Walk, &big).unwrap();
            per_step += trace.step_field_ops.iter().sum::<u64>() as f64 / trace.step_field_ops.len() as f64;
        }
        normalized.push(per_step / runs as f64 / (ell * n) as f64);
    }
    let r = ratio(&normalized);
    outcome(
        bad.is_empty() && r <= SCALING_FACTOR,
        format!(
            "100 instances, failing {bad:?}; per-step ops/(ℓn) at n=8,16,32: {:.2}, {:.2}, {:.2} (ratio {r:.2}, limit {SCALING_FACTOR})",
            normalized[0], normalized[1], normalized[2]
        ),
    )
}

fn criterion_8() -> Outcome {
    let f = FieldCtx::with_default_modulus(2, 1, 12, 1).unwrap();
    let single = GabCode::with_default_points(12, vec![4], &f).unwrap();
    let mut lines = Vec::new();
    let mut pass = true;
    let mut miscorrections = 0;
    for t in 0..=4 {
        let st = single.monte_carlo(t, 100, 800 + t as u64, Execution::Parallel, &f).unwrap();
        pass &= st.successes == 100;
        miscorrections += st.miscorrections;
        lines.push(format!("t={t}: {}/100", st.successes));
    }
    let inter = GabCode::with_default_points(12, vec![4, 4, 4], &f).unwrap();
    let st = inter.monte_carlo(5, 200, 850, Execution::Parallel, &f).unwrap();
    let rate = st.successes as f64 / 200.0;
    miscorrections += st.miscorrections;
    pass &= rate >= GAB_BEYOND_HALF_MIN_RATE && miscorrections == 0;
    outcome(
        pass,
        format!(
            "ℓ=1 {}; ℓ=3 t=5: {}/200 (min rate {GAB_BEYOND_HALF_MIN_RATE}); miscorrections {miscorrections}",
            lines.join(", "),
            st.successes
        ),
    )
}

fn criterion_9() -> Outcome {
    let f = f16();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut bad = 0;
    for _ in 0..1000 {
        let mut p = || random_entry(&f, &mut rng, 7);
        let (a, b, c) = (p(), p(), p());
        let alpha = f.random(&mut rng);
        let ab = a.mul(&b, &f);
        let checks = [
            ab.mul(&c, &f) == a.mul(&b.mul(&c, &f), &f),
            a.mul(&b.add(&c, &f), &f) == ab.add(&a.mul(&c, &f), &f),
            a.add(&b, &f).mul(&c, &f) == a.mul(&c, &f).add(&b.mul(&c, &f), &f),
            ab.evaluate(alpha, &f) == a.evaluate(b.evaluate(alpha, &f), &f),
            ab.coeffs() == oracle::naive_mul(a.coeffs(), b.coeffs(), &f).as_slice(),
            ab.evaluate(alpha, &f) == oracle::naive_eval(a.coeffs(), oracle::naive_eval(b.coeffs(), alpha, &f), &f),
        ];
        if checks.iter().any(|ok| !ok) {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{bad}/1000 randomized ring-law checks failed"))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("1 example deg_det", criterion_1),
        ("2 weak Popov suite", criterion_2),
        ("3 zero defect", criterion_3),
        ("4 deg_det axioms", criterion_4),
        ("5 shift-register engines", criterion_5),
        ("6 binomial fast path", criterion_6),
        ("7 MV interpolation", criterion_7),
        ("8 interleaved Gabidulin", criterion_8),
        ("9 ring laws", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        reset_field_ops();
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        println!(
            "{} criterion {name}: {} [{:.2} s]",
            if res.pass { "PASS" } else { "FAIL" },
            res.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!res.pass);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
