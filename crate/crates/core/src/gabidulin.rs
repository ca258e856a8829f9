//! Interleaved Gabidulin codes: evaluation encoding, a rank-error channel and
//! a decoder through the Gao-style key equation.
//!
//! With `G` the annihilator of the evaluation points and `R_i` the
//! interpolation of the `i`-th received word, an error-span polynomial `Λ`
//! satisfies `Λ R_i ≡ Λ f_i mod G` with `deg Λ f_i < deg Λ + k_i`. This is
//! a shift-register instance with `g_i = G`, `s_i = R_i`, `γ_0 = n` and
//! `γ_i = n − k_i`; the messages come back by left division `ω_i = Λ·f_i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::batch::{self, Execution};
use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FieldElem};
use crate::mglssr::{MgLssrInstance, QueryPath};
use crate::skewpoly::{annihilator, fq_rank, interpolate, SkewPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GabCode {
    n: usize,
    k_list: Vec<usize>,
    points: Vec<FieldElem>,
}

/// Which shift-register engine the decoder runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SrEngine {
    #[default]
    DemandDriven,
    RowReduction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub messages: Vec<SkewPoly>,
    /// Degree of the error-span polynomial.
    pub rank_used: usize,
    /// Rank of `received − re-encoding`.
    pub error_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodingFailure {
    Malformed(String),
    InexactDivision { sequence: usize },
    DegreeTooLarge { sequence: usize },
    RankMismatch { observed: usize, rank_used: usize },
}

impl std::fmt::Display for DecodingFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecodingFailure::Malformed(m) => write!(f, "malformed received word: {m}"),
            DecodingFailure::InexactDivision { sequence } => write!(f, "ω_{sequence} is not a left multiple of λ"),
            DecodingFailure::DegreeTooLarge { sequence } => write!(f, "message {sequence} exceeds its dimension"),
            DecodingFailure::RankMismatch { observed, rank_used } => {
                write!(f, "re-encoding differs in rank {observed}, more than deg λ = {rank_used}")
            }
        }
    }
}

/// Aggregate of a Monte Carlo run.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MonteCarloStats {
    pub trials: usize,
    pub successes: usize,
    pub failures: usize,
    /// Decoder returned messages different from the transmitted ones.
    pub miscorrections: usize,
}

impl GabCode {
    pub fn new(n: usize, k_list: Vec<usize>, points: Vec<FieldElem>, f: &FieldCtx) -> Result<Self> {
        if n == 0 || n > f.s() as usize {
            return Err(Error::Instance(format!("need 0 < n <= s, got n = {n}, s = {}", f.s())));
        }
        if k_list.is_empty() {
            return Err(Error::Instance("at least one constituent code is required".into()));
        }
        if let Some(&k) = k_list.iter().find(|&&k| k == 0 || k >= n) {
            return Err(Error::Instance(format!("need 0 < k < n, got k = {k}")));
        }
        if points.len() != n {
            return Err(Error::Instance(format!("{} evaluation points for length {n}", points.len())));
        }
        annihilator(&points, f)?;
        Ok(GabCode { n, k_list, points })
    }

    /// Evaluation points `1, z, …, z^{n−1}`, the start of an `F_q`-basis.
    pub fn with_default_points(n: usize, k_list: Vec<usize>, f: &FieldCtx) -> Result<Self> {
        if n > f.s() as usize {
            return Err(Error::Instance(format!("need n <= s, got n = {n}, s = {}", f.s())));
        }
        // z generates F_{q^s} over F_q, so its first s powers are F_q-independent.
        let points = (0..n).map(|j| z_power(f, j as u64)).collect();
        Self::new(n, k_list, points, f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.k_list.len()
    }

    pub fn k_list(&self) -> &[usize] {
        &self.k_list
    }

    pub fn points(&self) -> &[FieldElem] {
        &self.points
    }

    pub fn random_messages<R: Rng + ?Sized>(&self, f: &FieldCtx, rng: &mut R) -> Vec<SkewPoly> {
        self.k_list.iter().map(|&k| SkewPoly::from_coeffs((0..k).map(|_| f.random(rng)).collect())).collect()
    }

    /// Codeword `c_{t,j} = f_t(points[j])`.
    pub fn encode(&self, messages: &[SkewPoly], f: &FieldCtx) -> Result<Vec<Vec<FieldElem>>> {
        if messages.len() != self.ell() {
            return Err(Error::Encode(format!("{} messages for {} constituent codes", messages.len(), self.ell())));
        }
        for (t, (m, &k)) in messages.iter().zip(&self.k_list).enumerate() {
            if m.degree() >= k {
                return Err(Error::Encode(format!("message {t} has degree {} but k = {k}", m.degree())));
            }
        }
        Ok(messages.iter().map(|m| self.points.iter().map(|&p| m.evaluate(p, f)).collect()).collect())
    }

    /// Shift-register instance of the Gao key equation for `received`.
    pub fn gao_instance(&self, received: &[Vec<FieldElem>], f: &FieldCtx) -> Result<MgLssrInstance> {
        self.check_shape(received).map_err(Error::Format)?;
        let g = annihilator(&self.points, f)?;
        let s_list = received.iter().map(|r| interpolate(&self.points, r, f)).collect::<Result<Vec<_>>>()?;
        let mut gammas = vec![self.n];
        gammas.extend(self.k_list.iter().map(|&k| self.n - k));
        MgLssrInstance::new(s_list, vec![g; self.ell()], gammas, f)
    }

    fn check_shape(&self, received: &[Vec<FieldElem>]) -> std::result::Result<(), String> {
        if received.len() != self.ell() {
            return Err(format!("{} words for {} constituent codes", received.len(), self.ell()));
        }
        if let Some(i) = received.iter().position(|r| r.len() != self.n) {
            return Err(format!("word {i} does not have length {}", self.n));
        }
        Ok(())
    }

    pub fn decode(&self, received: &[Vec<FieldElem>], f: &FieldCtx) -> std::result::Result<Decoded, DecodingFailure> {
        self.decode_with(received, SrEngine::DemandDriven, f)
    }

    /// Key equation, left division, then re-encoding: returns messages only
    /// when every quotient is exact, fits its dimension, and the re-encoding
    /// is within rank `deg λ` of `received`.
    pub fn decode_with(
        &self,
        received: &[Vec<FieldElem>],
        engine: SrEngine,
        f: &FieldCtx,
    ) -> std::result::Result<Decoded, DecodingFailure> {
        self.check_shape(received).map_err(DecodingFailure::Malformed)?;
        let inst = self.gao_instance(received, f).map_err(|e| DecodingFailure::Malformed(e.to_string()))?;
        let sol = match engine {
            SrEngine::DemandDriven => inst.demand_driven_traced(QueryPath::Auto, f).0,
            SrEngine::RowReduction => inst.solve(f),
        };
        let rank_used = sol.lambda.degree().unwrap();
        let mut messages = Vec::with_capacity(self.ell());
        for (i, (w, &k)) in sol.omegas.iter().zip(&self.k_list).enumerate() {
            let (q, r) = w.left_divide(&sol.lambda, f).expect("λ is nonzero");
            if !r.is_zero() {
                return Err(DecodingFailure::InexactDivision { sequence: i });
            }
            if q.degree() >= k {
                return Err(DecodingFailure::DegreeTooLarge { sequence: i });
            }
            messages.push(q);
        }
        let code = self.encode(&messages, f).expect("degrees were checked");
        let diff: Vec<FieldElem> =
            received.iter().zip(&code).flat_map(|(r, c)| r.iter().zip(c).map(|(&a, &b)| f.sub(a, b))).collect();
        let observed = fq_rank(&diff, f);
        if observed > rank_used {
            return Err(DecodingFailure::RankMismatch { observed, rank_used });
        }
        Ok(Decoded { messages, rank_used, error_rank: observed })
    }

    /// `trials` seeded runs of encode, channel of rank `t`, decode.
    pub fn monte_carlo(&self, t: usize, trials: usize, seed: u64, exec: Execution, f: &FieldCtx) -> Result<MonteCarloStats> {
        if t > self.n {
            return Err(Error::Channel(format!("error rank {t} exceeds length {}", self.n)));
        }
        let outcomes = batch::map_range(trials, exec, |i| {
            let trial_seed = seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
            let msgs = self.random_messages(f, &mut rng);
            let code = self.encode(&msgs, f).expect("random messages fit");
            let (rx, _) = add_rank_error(&code, t, rng.gen(), f).expect("t was checked");
            match self.decode(&rx, f) {
                Ok(d) if d.messages == msgs => 0u8,
                Ok(_) => 2,
                Err(_) => 1,
            }
        });
        let mut stats = MonteCarloStats { trials, ..Default::default() };
        for o in outcomes {
            match o {
                0 => stats.successes += 1,
                1 => stats.failures += 1,
                _ => stats.miscorrections += 1,
            }
        }
        Ok(stats)
    }
}

fn z_power(f: &FieldCtx, j: u64) -> FieldElem {
    let z = if f.degree() > 1 { f.basis_elem(1) } else { FieldElem::ONE };
    f.pow(z, j)
}

/// One row of field elements per interleaved component.
pub type Words = Vec<Vec<FieldElem>>;

/// Adds an error of `F_q`-rank exactly `t`: `e_{i,j} = Σ_u B_{u,(i,j)} E_u`
/// with `E_1, …, E_t` independent over `F_q` and `B` of rank `t` over `F_q`.
/// Returns the received words and the error.
pub fn add_rank_error(
    codewords: &[Vec<FieldElem>],
    t: usize,
    seed: u64,
    f: &FieldCtx,
) -> Result<(Words, Words)> {
    let cells: usize = codewords.iter().map(Vec::len).sum();
    let n = codewords.first().map_or(0, Vec::len);
    if t > n || t > cells || t > f.s() as usize {
        return Err(Error::Channel(format!("cannot place an error of rank {t} on words of length {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut span: Vec<FieldElem> = Vec::with_capacity(t);
    while span.len() < t {
        span.push(f.random_nonzero(&mut rng));
        if fq_rank(&span, f) < span.len() {
            span.pop();
        }
    }
    let error = loop {
        let err: Vec<Vec<FieldElem>> = codewords
            .iter()
            .map(|w| {
                w.iter()
                    .map(|_| {
                        span.iter().fold(FieldElem::ZERO, |acc, &e| f.add(acc, f.mul(f.random_fixed(&mut rng), e)))
                    })
                    .collect()
            })
            .collect();
        let flat: Vec<FieldElem> = err.iter().flatten().copied().collect();
        if fq_rank(&flat, f) == t {
            break err;
        }
    };
    let received = codewords
        .iter()
        .zip(&error)
        .map(|(c, e)| c.iter().zip(e).map(|(&a, &b)| f.add(a, b)).collect())
        .collect();
    Ok((received, error))
}
