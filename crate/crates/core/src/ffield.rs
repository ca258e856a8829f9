//! Arithmetic in `F_{q^s}` together with a power `θ = Frobenius_q^i` of the
//! Frobenius automorphism over the fixed field `F_q`, `q = p^e`.
//!
//! Elements are stored in the polynomial basis `1, z, z², …` over `F_p`,
//! where `z` is the class of `X` modulo the defining polynomial. The packed
//! representation is the integer `Σ c_k p^k` (for `p = 2` this is the bit
//! vector of coefficients).
//!
//! Every `θ^j`, `j < s`, is precomputed as an `F_p`-linear map, so applying any
//! power of the automorphism costs the same regardless of `j`. Fields with at
//! most [`TABLE_LIMIT`] elements additionally get exponential/logarithm
//! tables; there multiplication, inversion and `θ^j` are single lookups.

use std::cell::Cell;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fields up to this many elements use log/exp tables.
pub const TABLE_LIMIT: u64 = 1 << 16;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 62;

thread_local! {
    static FIELD_OPS: Cell<u64> = const { Cell::new(0) };
}

#[inline]
fn tick() {
    FIELD_OPS.with(|c| c.set(c.get() + 1));
}

/// Number of field operations (`+ − · / θ^j`) performed on this thread.
pub fn field_ops() -> u64 {
    FIELD_OPS.with(|c| c.get())
}

pub fn reset_field_ops() {
    FIELD_OPS.with(|c| c.set(0));
}

/// An element of `F_{q^s}` in packed polynomial-basis form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem(u64);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Packed integer `Σ c_k p^k`.
    #[inline]
    pub fn index(self) -> u64 {
        self.0
    }
}

/// JSON description of a field: `{"p":2,"e":1,"s":4,"modulus":[1,1,0,0,1],"frob_power":1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u64,
    pub e: u32,
    pub s: u32,
    pub modulus: Vec<u64>,
    pub frob_power: u32,
}

struct Tables {
    /// `exp[k] = g^k` for `k < 2(order-1)`, so products need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `q^{i·j mod s} mod (order-1)` for `j < s`.
    frob_exp: Vec<u64>,
}

/// The field `F_{q^s}` with its automorphism `θ(a) = a^{q^i}`. Immutable once
/// built; share it by reference.
pub struct FieldCtx {
    p: u64,
    e: u32,
    s: u32,
    degree: u32,
    modulus: Vec<u64>,
    frob_power: u32,
    order: u64,
    q: u64,
    /// For `p = 2`: the modulus without its leading term, as a bit mask.
    low_bits: u64,
    /// `frob_maps[j][k] = θ^j(z^k)`.
    frob_maps: Vec<Vec<u64>>,
    tables: Option<Tables>,
    subfield_basis: Vec<FieldElem>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("s", &self.s)
            .field("modulus", &self.modulus)
            .field("frob_power", &self.frob_power)
            .field("tables", &self.tables.is_some())
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.e == other.e
            && self.s == other.s
            && self.modulus == other.modulus
            && self.frob_power == other.frob_power
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Builds `F_{q^s}`, `q = p^e`, from an explicit defining polynomial of
    /// degree `s·e` over `F_p` (coefficients ascending) and `θ = Frob_q^{frob_power}`.
    pub fn make_field(p: u64, e: u32, s: u32, modulus: Vec<u64>, frob_power: u32) -> Result<Self> {
        let bad = |m: String| Error::Construction(m);
        if p < 2 || !is_prime(p) {
            return Err(bad(format!("characteristic {p} is not prime")));
        }
        if e == 0 || s == 0 {
            return Err(bad("extension degrees must be positive".into()));
        }
        let degree = s
            .checked_mul(e)
            .ok_or_else(|| bad("extension degree overflow".into()))?;
        let order = checked_pow(p, degree)
            .filter(|&o| o <= MAX_ORDER)
            .ok_or_else(|| bad(format!("field of order {p}^{degree} is too large")))?;
        let q = p.pow(e);
        if frob_power >= s {
            return Err(bad(format!("frob_power {frob_power} must be below s = {s}")));
        }
        if gcd(frob_power as u64, s as u64) != 1 {
            return Err(bad(format!(
                "frob_power {frob_power} is not coprime to s = {s}; the fixed field would not be F_q"
            )));
        }
        if modulus.len() != degree as usize + 1 {
            return Err(bad(format!(
                "modulus must have {} coefficients, got {}",
                degree + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(bad("modulus coefficients must be reduced mod p".into()));
        }
        if modulus[degree as usize] != 1 {
            return Err(bad("modulus must be monic".into()));
        }
        if !fp_poly::is_irreducible(&modulus, p) {
            return Err(bad(format!("modulus {modulus:?} is reducible over F_{p}")));
        }

        let low_bits = if p == 2 {
            modulus[..degree as usize]
                .iter()
                .enumerate()
                .fold(0u64, |acc, (k, &c)| acc | (c << k))
        } else {
            0
        };

        let mut ctx = FieldCtx {
            p,
            e,
            s,
            degree,
            modulus,
            frob_power,
            order,
            q,
            low_bits,
            frob_maps: Vec::new(),
            tables: None,
            subfield_basis: Vec::new(),
        };
        ctx.frob_maps = ctx.build_frob_maps();
        ctx.subfield_basis = ctx.build_subfield_basis();
        if order <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    /// Builds the field using the first monic irreducible polynomial of degree
    /// `s·e` in counting order of its lower coefficients.
    pub fn with_default_modulus(p: u64, e: u32, s: u32, frob_power: u32) -> Result<Self> {
        if p < 2 || !is_prime(p) {
            return Err(Error::Construction(format!("characteristic {p} is not prime")));
        }
        let degree = s
            .checked_mul(e)
            .filter(|&d| d > 0)
            .ok_or_else(|| Error::Construction("extension degrees must be positive".into()))?;
        checked_pow(p, degree)
            .filter(|&o| o <= MAX_ORDER)
            .ok_or_else(|| Error::Construction("field too large".into()))?;
        let modulus = fp_poly::first_irreducible(p, degree as usize);
        Self::make_field(p, e, s, modulus, frob_power)
    }

    pub fn from_desc(desc: &FieldDesc) -> Result<Self> {
        Self::make_field(desc.p, desc.e, desc.s, desc.modulus.clone(), desc.frob_power)
    }

    pub fn desc(&self) -> FieldDesc {
        FieldDesc {
            p: self.p,
            e: self.e,
            s: self.s,
            modulus: self.modulus.clone(),
            frob_power: self.frob_power,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// Degree of `F_{q^s}` over `F_q`.
    pub fn s(&self) -> u32 {
        self.s
    }

    /// Size of the fixed field.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Degree `s·e` of `F_{q^s}` over the prime field.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn frob_power(&self) -> u32 {
        self.frob_power
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// An `F_p`-basis of the fixed field `F_q` inside `F_{q^s}`.
    pub fn subfield_basis(&self) -> &[FieldElem] {
        &self.subfield_basis
    }

    /// Element from its little-endian coefficient vector over `F_p`. Shorter
    /// vectors are zero-padded.
    pub fn elem(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() > self.degree as usize {
            return Err(Error::Context(format!(
                "element has {} coefficients, field degree is {}",
                coeffs.len(),
                self.degree
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::Context(format!("coefficient {c} not reduced mod {}", self.p)));
        }
        Ok(FieldElem(self.encode(coeffs)))
    }

    pub fn elem_from_index(&self, index: u64) -> Result<FieldElem> {
        if index >= self.order {
            return Err(Error::Context(format!("element index {index} out of range")));
        }
        Ok(FieldElem(index))
    }

    /// Little-endian coefficient vector of length `s·e`.
    pub fn coeffs(&self, a: FieldElem) -> Vec<u64> {
        self.decode(a.0)
    }

    /// The image of an element of the prime field.
    pub fn from_int(&self, c: u64) -> FieldElem {
        FieldElem(c % self.p)
    }

    /// `z^k` for `k < s·e`: the polynomial basis.
    pub fn basis_elem(&self, k: u32) -> FieldElem {
        assert!(k < self.degree);
        FieldElem(self.p.pow(k))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order).map(FieldElem)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem(rng.gen_range(0..self.order))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem(rng.gen_range(1..self.order))
    }

    /// Uniform element of the fixed field `F_q`.
    pub fn random_fixed<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        let mut acc = FieldElem::ZERO;
        for &b in &self.subfield_basis {
            let c = rng.gen_range(0..self.p);
            if c != 0 {
                acc = self.add(acc, self.mul(self.from_int(c), b));
            }
        }
        acc
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        tick();
        FieldElem(self.raw_add(a.0, b.0))
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        tick();
        FieldElem(self.raw_sub(a.0, b.0))
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        tick();
        FieldElem(self.raw_neg(a.0))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        tick();
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let k = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
                FieldElem(t.exp[k] as u64)
            }
            None => FieldElem(self.raw_mul(a.0, b.0)),
        }
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        tick();
        Ok(match &self.tables {
            Some(t) => {
                let n = self.order - 1;
                let k = (n - t.log[a.0 as usize] as u64) % n;
                FieldElem(t.exp[k as usize] as u64)
            }
            None => FieldElem(self.raw_pow(a.0, self.order - 2)),
        })
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        let bi = self.inv(b)?;
        Ok(self.mul(a, bi))
    }

    /// `θ^{j mod s}(a)`.
    #[inline]
    pub fn frobenius(&self, a: FieldElem, j: usize) -> FieldElem {
        tick();
        let j = j % self.s as usize;
        if j == 0 || a.0 == 0 {
            return a;
        }
        match &self.tables {
            Some(t) => {
                let n = self.order - 1;
                let k = (t.log[a.0 as usize] as u64 * t.frob_exp[j]) % n;
                FieldElem(t.exp[k as usize] as u64)
            }
            None => FieldElem(self.apply_linear(&self.frob_maps[j], a.0)),
        }
    }

    /// `θ^{-j}(a)`.
    pub fn inverse_frobenius(&self, a: FieldElem, j: usize) -> FieldElem {
        let s = self.s as usize;
        self.frobenius(a, (s - j % s) % s)
    }

    pub fn pow(&self, a: FieldElem, exp: u64) -> FieldElem {
        tick();
        FieldElem(self.raw_pow(a.0, exp))
    }

    /// Whether `a` lies in the fixed field of `θ`, i.e. in `F_q`.
    pub fn is_fixed(&self, a: FieldElem) -> bool {
        self.frobenius(a, 1) == a
    }

    // ---- raw arithmetic, not counted ----

    fn encode(&self, digits: &[u64]) -> u64 {
        if self.p == 2 {
            return digits.iter().enumerate().fold(0, |acc, (k, &c)| acc | (c << k));
        }
        digits.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn decode(&self, mut v: u64) -> Vec<u64> {
        let n = self.degree as usize;
        let mut out = vec![0u64; n];
        if self.p == 2 {
            for (k, o) in out.iter_mut().enumerate() {
                *o = (v >> k) & 1;
            }
            return out;
        }
        for o in out.iter_mut() {
            *o = v % self.p;
            v /= self.p;
        }
        out
    }

    #[inline]
    fn raw_add(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        let (da, db) = (self.decode(a), self.decode(b));
        let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    #[inline]
    fn raw_neg(&self, a: u64) -> u64 {
        if self.p == 2 {
            return a;
        }
        let d: Vec<u64> = self.decode(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.encode(&d)
    }

    #[inline]
    fn raw_sub(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        self.raw_add(a, self.raw_neg(b))
    }

    fn raw_mul(&self, a: u64, b: u64) -> u64 {
        let n = self.degree as usize;
        if self.p == 2 {
            let mut prod: u128 = 0;
            let mut bb = b;
            let mut shift = 0;
            while bb != 0 {
                if bb & 1 == 1 {
                    prod ^= (a as u128) << shift;
                }
                bb >>= 1;
                shift += 1;
            }
            for bit in (n..2 * n - 1).rev() {
                if (prod >> bit) & 1 == 1 {
                    prod ^= 1u128 << bit;
                    prod ^= (self.low_bits as u128) << (bit - n);
                }
            }
            return prod as u64;
        }
        let da = self.decode(a);
        let db = self.decode(b);
        let p = self.p as u128;
        let mut prod = vec![0u128; 2 * n - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % p;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (t, &m) in self.modulus[..n].iter().enumerate() {
                let sub = c * m as u128 % p;
                prod[k - n + t] = (prod[k - n + t] + p - sub) % p;
            }
        }
        let digits: Vec<u64> = prod[..n].iter().map(|&c| c as u64).collect();
        self.encode(&digits)
    }

    fn raw_pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.raw_mul_any(acc, base);
            }
            base = self.raw_mul_any(base, base);
            exp >>= 1;
        }
        acc
    }

    fn raw_mul_any(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => t.exp[t.log[a as usize] as usize + t.log[b as usize] as usize] as u64,
            None => self.raw_mul(a, b),
        }
    }

    /// Applies an `F_p`-linear map given by the images of the basis `z^k`.
    fn apply_linear(&self, images: &[u64], a: u64) -> u64 {
        if self.p == 2 {
            let mut acc = 0u64;
            let mut bits = a;
            while bits != 0 {
                let k = bits.trailing_zeros() as usize;
                acc ^= images[k];
                bits &= bits - 1;
            }
            return acc;
        }
        let digits = self.decode(a);
        let mut acc = vec![0u64; self.degree as usize];
        for (k, &c) in digits.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, d) in acc.iter_mut().zip(self.decode(images[k])) {
                *o = (*o + c * d) % self.p;
            }
        }
        self.encode(&acc)
    }

    fn build_frob_maps(&self) -> Vec<Vec<u64>> {
        let n = self.degree as usize;
        let identity: Vec<u64> = (0..n).map(|k| self.p.pow(k as u32)).collect();
        // θ(z) = z^{q^i}; θ(z^k) = θ(z)^k.
        let z = if n == 1 {
            // X mod (X + c) = -c
            (self.p - self.modulus[0]) % self.p
        } else {
            self.p
        };
        let theta_z = self.raw_pow(z, self.q.pow(self.frob_power));
        let mut theta: Vec<u64> = Vec::with_capacity(n);
        let mut acc = 1u64;
        for _ in 0..n {
            theta.push(acc);
            acc = self.raw_mul(acc, theta_z);
        }
        let mut maps = vec![identity];
        for j in 1..self.s as usize {
            let prev = &maps[j - 1];
            let next: Vec<u64> = prev.iter().map(|&img| self.apply_linear(&theta, img)).collect();
            maps.push(next);
        }
        maps
    }

    fn build_tables(&self) -> Tables {
        let n = self.order - 1;
        let factors = prime_factors(n);
        let generator = (1..self.order)
            .find(|&g| factors.iter().all(|&r| self.raw_pow(g, n / r) != 1))
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; 2 * n as usize];
        let mut log = vec![0u32; self.order as usize];
        let mut acc = 1u64;
        for k in 0..n as usize {
            exp[k] = acc as u32;
            log[acc as usize] = k as u32;
            acc = self.raw_mul(acc, generator);
        }
        for k in n as usize..2 * n as usize {
            exp[k] = exp[k - n as usize];
        }
        let i = self.frob_power as u64;
        let frob_exp = (0..self.s as u64)
            .map(|j| mod_pow(self.q, (i * j) % self.s as u64, n))
            .collect();
        Tables { exp, log, frob_exp }
    }

    /// Kernel of `a ↦ a^q − a` over `F_p`.
    fn build_subfield_basis(&self) -> Vec<FieldElem> {
        let n = self.degree as usize;
        let p = self.p;
        // Frob_q as a matrix: column k = (z^k)^q.
        let cols: Vec<Vec<u64>> = (0..n)
            .map(|k| {
                let img = self.raw_pow(self.p.pow(k as u32), self.q);
                let mut d = self.decode(img);
                d[k] = (d[k] + p - 1) % p;
                d
            })
            .collect();
        // rows[r][k] = cols[k][r]
        let mut rows: Vec<Vec<u64>> = (0..n).map(|r| (0..n).map(|k| cols[k][r]).collect()).collect();
        let kernel = fp_poly::kernel_mod_p(&mut rows, n, p);
        kernel.iter().map(|v| FieldElem(self.encode(v))).collect()
    }
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut acc = 1u128 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Dense polynomials over `F_p` (ascending coefficients), used only while
/// constructing a field.
mod fp_poly {
    use super::{mod_pow, prime_factors};

    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv(a: u64, p: u64) -> u64 {
        mod_pow(a, p - 2, p)
    }

    fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
            }
        }
        trim(out)
    }

    fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lc_inv = inv(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = (r[top] as u128 * lc_inv as u128 % p as u128) as u64;
            let off = top - dm;
            for (t, &mc) in m.iter().enumerate() {
                let sub = (c as u128 * mc as u128 % p as u128) as u64;
                r[off + t] = (r[off + t] + p - sub) % p;
            }
            r = trim(r);
        }
        r
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn pow_mod(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            exp >>= 1;
        }
        acc
    }

    fn sub_x(a: &[u64], p: u64) -> Vec<u64> {
        let mut out = a.to_vec();
        if out.len() < 2 {
            out.resize(2, 0);
        }
        out[1] = (out[1] + p - 1) % p;
        trim(out)
    }

    /// Rabin's test.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let n = f.len() - 1;
        if n == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        // powers[k] = X^{p^k} mod f
        let mut powers = vec![rem(&x, f, p)];
        for k in 1..=n {
            let next = pow_mod(&powers[k - 1], p, f, p);
            powers.push(next);
        }
        if !sub_x(&powers[n], p).is_empty() {
            return false;
        }
        prime_factors(n as u64).into_iter().all(|r| {
            let h = sub_x(&powers[n / r as usize], p);
            gcd(f, &h, p).len() == 1
        })
    }

    pub fn first_irreducible(p: u64, degree: usize) -> Vec<u64> {
        let mut lower: u64 = 0;
        loop {
            let mut f = Vec::with_capacity(degree + 1);
            let mut v = lower;
            for _ in 0..degree {
                f.push(v % p);
                v /= p;
            }
            f.push(1);
            if is_irreducible(&f, p) {
                return f;
            }
            lower += 1;
        }
    }

    /// Kernel basis of the `rows × n` matrix over `F_p`; `rows` is consumed
    /// into echelon form.
    pub fn kernel_mod_p(rows: &mut [Vec<u64>], n: usize, p: u64) -> Vec<Vec<u64>> {
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(r, piv);
            let iv = inv(rows[r][c], p);
            for x in rows[r].iter_mut() {
                *x = (*x as u128 * iv as u128 % p as u128) as u64;
            }
            for i in 0..rows.len() {
                if i != r && rows[i][c] != 0 {
                    let f = rows[i][c];
                    for k in 0..n {
                        let sub = (f as u128 * rows[r][k] as u128 % p as u128) as u64;
                        rows[i][k] = (rows[i][k] + p - sub) % p;
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u64; n];
                v[fc] = 1;
                for (ri, &pc) in pivot_cols.iter().enumerate() {
                    v[pc] = (p - rows[ri][fc]) % p;
                }
                v
            })
            .collect()
    }
}
