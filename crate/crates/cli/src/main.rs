use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use skewred::ffield::{field_ops, reset_field_ops};
use skewred::gabidulin::SrEngine;
use skewred::mglssr::{reference, QueryPath};
use skewred::rowreduce::{deg_det, reduce_shifted_with, ReduceOptions};
use skewred::wire::{self, DecodeReport, GabFile, MatrixFile, MgLssrFile, MvFile};
use skewred::{
    add_rank_error, batch, oracle, Execution, FieldCtx, FieldElem, GabCode, MgLssrInstance, MvEngine, MvInstance, Shift,
    SkewPoly,
};

#[derive(Parser)]
#[command(name = "skewred", version, about = "Skew polynomial row reduction and decoding")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random instance as JSON.
    Gen(GenArgs),
    /// Solve a multi-sequence shift-register instance.
    SolveSr(SolveArgs<SrCliEngine>),
    /// Interpolation step of subspace list decoding.
    MvInterp(SolveArgs<MvCliEngine>),
    /// Decode received words of an interleaved Gabidulin code.
    DecodeGab(SolveArgs<SrCliEngine>),
    /// Bring a matrix into (shifted) weak Popov form.
    Rowreduce(RowArgs),
    /// Operation counts over a range of sizes, as CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    #[arg(long, env = "SKEWRED_SEED", default_value_t = 0)]
    seed: u64,
    /// Characteristic.
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// Extension degree of the base field `F_q` over `F_p`.
    #[arg(long, default_value_t = 1)]
    e: u32,
    /// Extension degree `s` of the working field over `F_q`; defaults per kind.
    #[arg(long)]
    s: Option<u32>,
    #[arg(long, default_value_t = 2)]
    ell: usize,
    /// Message dimension (mv: degree bound k; gab: every k_i).
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Per-component dimensions for gab, overriding --k and --ell.
    #[arg(long, value_delimiter = ',')]
    k_list: Option<Vec<usize>>,
    /// Number of points (mv) or code length (gab).
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Error rank for gab.
    #[arg(long, default_value_t = 0)]
    t: usize,
    /// Degree of every modulus for mglssr.
    #[arg(long, default_value_t = 8)]
    deg: usize,
    /// Shifts `γ_0, …, γ_ℓ` for mglssr (default all zero).
    #[arg(long, value_delimiter = ',')]
    gammas: Option<Vec<usize>>,
    /// Binomial moduli `x^d + a` for mglssr.
    #[arg(long)]
    binomial: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Mglssr,
    Mv,
    Gab,
}

#[derive(Args)]
struct SolveArgs<E: ValueEnum + Clone + Send + Sync + 'static> {
    /// Input JSON file, `-` for stdin.
    input: String,
    #[arg(long, value_enum)]
    engine: Option<E>,
    /// Check the result against the brute-force oracle; exit 1 on mismatch.
    #[arg(long)]
    verify: bool,
    /// Include operation counters in the output.
    #[arg(long)]
    trace: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SrCliEngine {
    /// Demand-driven solver.
    Dd,
    /// Row reduction of the full basis.
    Rr,
    /// Intermediate reference algorithm.
    Intermediate,
}

#[derive(Clone, Copy, ValueEnum)]
enum MvCliEngine {
    Reduce,
    Walk,
}

#[derive(Args)]
struct RowArgs {
    input: String,
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(value_enum)]
    suite: BenchSuite,
    #[arg(long, value_delimiter = ',', default_values_t = [8usize, 16, 32])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    ell: usize,
    /// Instances per size.
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, env = "SKEWRED_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "parallel")]
    exec: Execution,
    /// Write CSV to this file instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Debug)]
enum BenchSuite {
    /// Demand-driven solver on binomial instances, size = μ.
    Dd,
    /// Row reduction of the shift-register basis, size = μ.
    Sr,
    /// MV walking, size = n.
    Walk,
    /// MV reduction, size = n.
    MvReduce,
}

/// Exit status and message of a failed command.
enum Failure {
    /// Verification or decoding failure.
    Check(String),
    /// Bad input or parameters.
    Usage(String),
}

impl From<skewred::Error> for Failure {
    fn from(e: skewred::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Gen(a) => generate(&a),
        Cmd::SolveSr(a) => solve_sr(&a),
        Cmd::MvInterp(a) => mv_interp(&a),
        Cmd::DecodeGab(a) => decode_gab(&a),
        Cmd::Rowreduce(a) => rowreduce(&a),
        Cmd::Bench(a) => bench(&a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(|e| Failure::Usage(e.to_string()))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn parse<T: for<'de> serde::Deserialize<'de>>(path: &str) -> Result<T, Failure> {
    wire::from_str(&read_input(path)?).map_err(|e| Failure::Usage(format!("parse error: {e}")))
}

fn emit<T: Serialize>(doc: &T) {
    print_out(&(wire::to_string(doc) + "\n"));
}

/// Writes to stdout, ignoring a closed pipe.
fn print_out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn generate(a: &GenArgs) -> CmdResult {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let field = |default_s: u32| FieldCtx::with_default_modulus(a.p, a.e, a.s.unwrap_or(default_s), 1);
    let text = match a.kind {
        GenKind::Mglssr => {
            if a.deg == 0 {
                return Err(Failure::Usage("need deg >= 1".into()));
            }
            let f = field(4)?;
            let gammas = a.gammas.clone().unwrap_or_else(|| vec![0; a.ell + 1]);
            let g_list = (0..a.ell)
                .map(|_| {
                    if a.binomial {
                        let mut c = vec![FieldElem::ZERO; a.deg + 1];
                        c[0] = f.random_nonzero(&mut rng);
                        c[a.deg] = FieldElem::ONE;
                        SkewPoly::from_coeffs(c)
                    } else {
                        SkewPoly::random(a.deg, &f, &mut rng)
                    }
                })
                .collect();
            let s_list = (0..a.ell).map(|_| SkewPoly::random(a.deg - 1, &f, &mut rng)).collect();
            let inst = MgLssrInstance::new(s_list, g_list, gammas, &f)?;
            wire::to_string(&MgLssrFile::from_instance(&inst, &f))
        }
        GenKind::Mv => {
            let f = field(a.n as u32)?;
            let inst = MvInstance::random(a.ell, a.k, a.n, &f, &mut rng)?;
            wire::to_string(&MvFile::from_instance(&inst, &f))
        }
        GenKind::Gab => {
            let f = field(a.n as u32)?;
            let k_list = a.k_list.clone().unwrap_or_else(|| vec![a.k; a.ell]);
            let code = GabCode::with_default_points(a.n, k_list, &f)?;
            let msgs = code.random_messages(&f, &mut rng);
            let cw = code.encode(&msgs, &f)?;
            let (rx, _) = add_rank_error(&cw, a.t, rng.gen(), &f)?;
            let mut doc = GabFile::new(&code, &rx, &f);
            doc.t = Some(a.t);
            doc.messages = Some(msgs.iter().map(|m| wire::poly_to_json(m, &f)).collect());
            wire::to_string(&doc)
        }
    };
    match &a.out {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print_out(&(text + "\n"));
            Ok(())
        }
    }
}

fn solve_sr(a: &SolveArgs<SrCliEngine>) -> CmdResult {
    let (f, inst) = parse::<MgLssrFile>(&a.input)?.load()?;
    let engine = a.engine.unwrap_or(SrCliEngine::Dd);
    let (sol, trace) = match engine {
        SrCliEngine::Dd => {
            let (s, t) = inst.demand_driven_traced(QueryPath::Auto, &f);
            (s, serde_json::to_value(t).unwrap())
        }
        SrCliEngine::Rr => {
            let (s, t) = inst.solve_traced(&f);
            (s, serde_json::to_value(t).unwrap())
        }
        SrCliEngine::Intermediate => {
            reset_field_ops();
            let run = reference::intermediate(&inst, true, &f);
            (run.solution, json!({ "iterations": run.iterations, "field_ops": field_ops() }))
        }
    };
    let mut out = json!({
        "degree": sol.lambda.degree().finite(),
        "solution": wire::solution_to_json(&sol, &f),
    });
    if a.trace {
        out["trace"] = trace;
    }
    let mut check = Ok(());
    if a.verify {
        let max_deg = inst.g_list().iter().map(|g| g.degree().unwrap()).sum::<usize>() + inst.gammas()[0];
        let brute = oracle::brute_mglssr(&inst, max_deg, &f);
        let ok = oracle::is_mglssr_solution(&inst, &sol, &f)
            && brute.is_some_and(|b| b.lambda.degree() == sol.lambda.degree());
        out["verified"] = Value::Bool(ok);
        if !ok {
            check = Err(Failure::Check("solution is invalid or not of minimal degree".into()));
        }
    }
    emit(&out);
    check
}

fn mv_interp(a: &SolveArgs<MvCliEngine>) -> CmdResult {
    let (f, inst) = parse::<MvFile>(&a.input)?.load()?;
    let engine = match a.engine.unwrap_or(MvCliEngine::Walk) {
        MvCliEngine::Reduce => MvEngine::Reduce,
        MvCliEngine::Walk => MvEngine::Walk,
    };
    let (sol, trace) = inst.interpolation_traced(engine, &f)?;
    let mut out = json!({
        "shifted_degree": sol.shifted_degree(&inst),
        "q": sol.q.iter().map(|p| wire::poly_to_json(p, &f)).collect::<Vec<_>>(),
    });
    if a.trace {
        out["trace"] = json!({
            "lp_transform_count": trace.lp_transform_count,
            "field_ops": trace.field_ops,
            "step_field_ops": trace.step_field_ops,
        });
    }
    let mut check = Ok(());
    if a.verify {
        let ok = inst.verify(&sol.q, &f) && oracle::brute_mv_min_degree(&inst, &f) == sol.shifted_degree(&inst);
        out["verified"] = Value::Bool(ok);
        if !ok {
            check = Err(Failure::Check("interpolation polynomial fails the conditions or is not minimal".into()));
        }
    }
    emit(&out);
    check
}

fn decode_gab(a: &SolveArgs<SrCliEngine>) -> CmdResult {
    let doc = parse::<GabFile>(&a.input)?;
    let (f, code, received) = doc.load()?;
    let engine = match a.engine.unwrap_or(SrCliEngine::Dd) {
        SrCliEngine::Dd => SrEngine::DemandDriven,
        SrCliEngine::Rr => SrEngine::RowReduction,
        SrCliEngine::Intermediate => return Err(Failure::Usage("decode-gab supports --engine dd or rr".into())),
    };
    reset_field_ops();
    let outcome = code.decode_with(&received, engine, &f);
    let ops = field_ops();
    let report = DecodeReport::from_outcome(&outcome, &f);
    let mut out = serde_json::to_value(&report).unwrap();
    if a.trace {
        out["trace"] = json!({ "field_ops": ops, "error_rank": outcome.as_ref().ok().map(|d| d.error_rank) });
    }
    let mut check = match &outcome {
        Ok(_) => Ok(()),
        Err(e) => Err(Failure::Check(format!("decoding failure: {e}"))),
    };
    if a.verify && check.is_ok() {
        if let Some(expected) = &doc.messages {
            let ok = &report.messages == expected;
            out["verified"] = Value::Bool(ok);
            if !ok {
                check = Err(Failure::Check("decoded messages differ from the recorded ones".into()));
            }
        }
    }
    emit(&out);
    check
}

fn rowreduce(a: &RowArgs) -> CmdResult {
    let doc = parse::<MatrixFile>(&a.input)?;
    let (f, m) = doc.load()?;
    let w = match &doc.shift {
        Some(w) => Shift::new(w.clone()),
        None => Shift::zero(m.ncols()),
    };
    let opts = ReduceOptions { track_unimodular: a.verify && m.is_square(), ..Default::default() };
    let red = reduce_shifted_with(&m, &w, &opts, &f)?;
    let dd = if m.is_square() { deg_det(&m, &f).ok() } else { None };
    let mut out = json!({
        "deg_det": dd,
        "weak_popov": red.matrix.is_shifted_weak_popov(&w),
        "matrix": wire::matrix_to_json(&red.matrix, &f),
    });
    if doc.shift.is_some() {
        out["shifted_deg_det"] = json!(dd.map(|d| d + w.total()));
    }
    if a.trace {
        out["trace"] = serde_json::to_value(&red.trace).unwrap();
    }
    let mut check = Ok(());
    if a.verify {
        let mut ok = red.matrix.is_shifted_weak_popov(&w);
        if let (Some(u), Some(ui)) = (&red.unimodular, &red.unimodular_inv) {
            ok &= u.mul(&m, &f)? == red.matrix && ui.mul(&red.matrix, &f)? == m;
            ok &= oracle::deg_det_triangular(&m, &f) == dd;
        }
        out["verified"] = Value::Bool(ok);
        if !ok {
            check = Err(Failure::Check("reduced matrix fails the weak Popov or equivalence checks".into()));
        }
    }
    emit(&out);
    check
}

struct BenchRow {
    size: usize,
    lp_transform_count: usize,
    field_ops: u64,
    wall_time_us: u128,
}

fn bench(a: &BenchArgs) -> CmdResult {
    if a.ell == 0 || a.sizes.contains(&0) {
        return Err(Failure::Usage("need ell >= 1 and positive sizes".into()));
    }
    let max = *a.sizes.iter().max().unwrap_or(&1);
    let f = match a.suite {
        BenchSuite::Dd | BenchSuite::Sr => FieldCtx::with_default_modulus(2, 1, 4, 1)?,
        BenchSuite::Walk | BenchSuite::MvReduce => FieldCtx::with_default_modulus(2, 1, max.max(16) as u32, 1)?,
    };
    let jobs: Vec<(usize, u64)> = a
        .sizes
        .iter()
        .flat_map(|&size| (0..a.reps as u64).map(move |r| (size, r)))
        .collect();
    let rows = batch::map(&jobs, a.exec, |&(size, rep)| {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed ^ ((size as u64) << 32) ^ rep);
        run_bench(a.suite, a.ell, size, &f, &mut rng)
    });
    let mut csv = String::from("suite,ell,size,lp_transform_count,field_ops,wall_time_us\n");
    for r in rows {
        let r = r?;
        let suite = format!("{:?}", a.suite).to_lowercase();
        csv += &format!("{suite},{},{},{},{},{}\n", a.ell, r.size, r.lp_transform_count, r.field_ops, r.wall_time_us);
    }
    match &a.csv {
        Some(p) => std::fs::write(p, csv).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print_out(&csv);
            Ok(())
        }
    }
}

fn run_bench(suite: BenchSuite, ell: usize, size: usize, f: &FieldCtx, rng: &mut ChaCha8Rng) -> Result<BenchRow, Failure> {
    let start = Instant::now();
    let (count, ops) = match suite {
        BenchSuite::Dd | BenchSuite::Sr => {
            let g_list = (0..ell)
                .map(|_| {
                    let mut c = vec![FieldElem::ZERO; size + 1];
                    c[0] = f.random_nonzero(rng);
                    c[size] = FieldElem::ONE;
                    SkewPoly::from_coeffs(c)
                })
                .collect();
            let s_list = (0..ell).map(|_| SkewPoly::random(size - 1, f, rng)).collect();
            let inst = MgLssrInstance::new(s_list, g_list, vec![0; ell + 1], f)?;
            if let BenchSuite::Dd = suite {
                let t = inst.demand_driven_traced(QueryPath::Auto, f).1;
                (t.transformations, t.field_ops)
            } else {
                let t = inst.solve_traced(f).1;
                (t.lp_transform_count, t.field_ops)
            }
        }
        BenchSuite::Walk | BenchSuite::MvReduce => {
            let need = ell * (ell + 1) / 2;
            let k = if size > need { 2 } else { 1 };
            let inst = MvInstance::random(ell, k, size, f, rng)?;
            let engine = if let BenchSuite::Walk = suite { MvEngine::Walk } else { MvEngine::Reduce };
            let t = inst.interpolation_traced(engine, f)?.1;
            (t.lp_transform_count, t.field_ops)
        }
    };
    Ok(BenchRow { size, lp_transform_count: count, field_ops: ops, wall_time_us: start.elapsed().as_micros() })
}

