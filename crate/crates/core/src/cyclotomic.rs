//! Exact arithmetic in the cyclotomic field ℚ(ζ_N).
//!
//! Elements are stored sparsely with respect to the tensor basis
//! `∏ ζ_q^{e_q}` where `q` ranges over the prime-power factors of `N` and
//! `0 ≤ e_q < φ(q)`.  Here `ζ_q = ζ_N^{N/q}`.  When `N` is a prime power this
//! is the ordinary power basis `1, ζ, …, ζ^{φ(N)−1}` modulo `Φ_N`; for composite
//! conductors it keeps elements such as `ζ_3 − 1` sparse, which matters for
//! conductors like `2·3·5·7·11` where the power basis would make almost every
//! root of unity dense.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expr::{self, fmt_rational};

/// Sparse field value: `(basis index, coefficient)` pairs sorted by index,
/// without zero coefficients.  Index 0 is the element `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Coeff(Vec<(u32, BigRational)>);

impl Coeff {
    pub fn zero() -> Self {
        Coeff(Vec::new())
    }

    pub fn one() -> Self {
        Coeff::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        if q.is_zero() {
            Coeff::zero()
        } else {
            Coeff(vec![(0, q)])
        }
    }

    pub fn from_int(n: i64) -> Self {
        Coeff::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].0 == 0 && self.0[0].1.is_one()
    }

    /// The rational value, if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.0.as_slice() {
            [] => Some(BigRational::zero()),
            [(0, q)] => Some(q.clone()),
            _ => None,
        }
    }

    pub fn terms(&self) -> &[(u32, BigRational)] {
        &self.0
    }

    pub fn neg(&self) -> Coeff {
        Coeff(self.0.iter().map(|(i, c)| (*i, -c)).collect())
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.merge(other, true)
    }

    fn merge(&self, other: &Coeff, negate: bool) -> Coeff {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                out.push(a[i].clone());
                i += 1;
            } else if take_b {
                let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Coeff(out)
    }

    pub fn scale(&self, q: &BigRational) -> Coeff {
        if q.is_zero() {
            return Coeff::zero();
        }
        Coeff(self.0.iter().map(|(i, c)| (*i, c * q)).collect())
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denom_lcm(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()))
    }

    /// Gcd of the coefficient numerators (meaningful for integral values).
    pub fn numer_gcd(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c.numer()))
    }

    /// Sign of the coefficient at the smallest basis index.
    pub fn leading_sign(&self) -> i32 {
        match self.0.first() {
            Some((_, c)) if c.is_negative() => -1,
            Some(_) => 1,
            None => 0,
        }
    }
}

/// Conductors above this use a hash map instead of a dense exponent grid.
const DENSE_LIMIT: u32 = 1 << 16;

/// Integer numerators over a common denominator.
fn integral_parts(a: &Coeff) -> (Vec<(u32, BigInt)>, BigInt) {
    let den = a.denom_lcm();
    let terms = a.0.iter().map(|(i, c)| (*i, c.numer() * (&den / c.denom()))).collect();
    (terms, den)
}

trait Accum: Clone {
    fn acc_zero() -> Self;
    fn acc_is_zero(&self) -> bool;
    fn add_mul(&mut self, a: &Self, b: &Self);
    fn add_signed(&mut self, v: &Self, sign: i64);
}

impl Accum for i128 {
    fn acc_zero() -> Self {
        0
    }
    fn acc_is_zero(&self) -> bool {
        *self == 0
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn add_signed(&mut self, v: &Self, sign: i64) {
        *self += v * sign as i128;
    }
}

impl Accum for BigInt {
    fn acc_zero() -> Self {
        Zero::zero()
    }
    fn acc_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn add_signed(&mut self, v: &Self, sign: i64) {
        match sign {
            1 => *self += v,
            -1 => *self -= v,
            s => *self += v * s,
        }
    }
}

#[derive(Debug)]
struct Factor {
    /// Prime power `q` dividing `N` exactly.
    q: u32,
    /// φ(q): number of exponents stored for this factor.
    d: u32,
    /// `(N/q)^{-1} mod q`; ζ_N^k has exponent `k·t mod q` on this factor.
    t: u32,
    stride: u32,
    /// `x^k mod Φ_q` for `k < q`, as sparse integer coefficient lists.
    table: Vec<Vec<(u32, i64)>>,
}

#[derive(Debug)]
struct FieldInner {
    n: u32,
    phi: Vec<BigInt>,
    degree: usize,
    factors: Vec<Factor>,
}

/// The field ℚ(ζ_N).  Cheap to clone; two handles are equal when their
/// conductors agree.
#[derive(Clone, Debug)]
pub struct CycloField(Arc<FieldInner>);

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.0.n == other.0.n
    }
}
impl Eq for CycloField {}

fn factorize(mut n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut q = 1;
            while n.is_multiple_of(p) {
                n /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

fn mod_inverse(a: u32, m: u32) -> u32 {
    if m == 1 {
        return 0;
    }
    let e = (a as i64).extended_gcd(&(m as i64));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i64) as u32
}

/// Exact quotient of integer polynomials (coefficients low to high) by a
/// monic divisor.  Panics if the division is not exact.
fn div_exact_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
        return vec![BigInt::zero()];
    }
    let mut quo = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quo.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, dc) in den.iter().enumerate() {
            rem[k + i] -= &c * dc;
        }
        quo[k] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quo
}

/// Φ_n by dividing x^n − 1 by Φ_d for every proper divisor d, recursively.
fn cyclotomic_poly(n: u32, memo: &mut HashMap<u32, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = -BigInt::one();
    poly[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_poly(d, memo);
            poly = div_exact_monic(&poly, &phi_d);
        }
    }
    memo.insert(n, poly.clone());
    poly
}

/// `x^k mod Φ_q` for all `k < q` (small integer coefficients).
fn power_table(q: u32) -> Vec<Vec<(u32, i64)>> {
    let mut memo = HashMap::new();
    let phi: Vec<i64> = cyclotomic_poly(q, &mut memo)
        .iter()
        .map(|c| i64::try_from(c).expect("small cyclotomic coefficient"))
        .collect();
    let d = phi.len() - 1;
    let mut table = Vec::with_capacity(q as usize);
    let mut cur = vec![0i64; d];
    if d > 0 {
        cur[0] = 1;
    }
    for _ in 0..q {
        table.push(cur.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i as u32, *c)).collect());
        // multiply by x and reduce with the monic Φ_q
        let top = cur[d - 1];
        for i in (1..d).rev() {
            cur[i] = cur[i - 1] - top * phi[i];
        }
        cur[0] = -top * phi[0];
    }
    table
}

/// Euler's totient.
pub fn totient(n: u32) -> u32 {
    factorize(n).iter().map(|&(p, q)| q / p * (p - 1)).product()
}

impl CycloField {
    /// Construct ℚ(ζ_N).
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("conductor must be positive".into()));
        }
        let mut memo = HashMap::new();
        let phi = cyclotomic_poly(n, &mut memo);
        let mut factors = Vec::new();
        let mut stride = 1;
        for (p, q) in factorize(n) {
            let d = q / p * (p - 1);
            factors.push(Factor { q, d, t: mod_inverse(n / q, q), stride, table: power_table(q) });
            stride *= d;
        }
        let degree = phi.len() - 1;
        debug_assert_eq!(degree as u32, stride);
        Ok(CycloField(Arc::new(FieldInner { n, phi, degree, factors })))
    }

    pub fn conductor(&self) -> u32 {
        self.0.n
    }

    /// φ(N), the degree of the field over ℚ.
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Coefficients of Φ_N, constant term first.
    pub fn phi(&self) -> &[BigInt] {
        &self.0.phi
    }

    fn exponents(&self, idx: u32) -> impl Iterator<Item = u32> + '_ {
        self.0.factors.iter().map(move |f| (idx / f.stride) % f.d)
    }

    /// The exponent `k` with basis element `idx` equal to ζ_N^k.
    pub fn basis_exponent(&self, idx: u32) -> u32 {
        let n = self.0.n as u64;
        let k: u64 = self
            .0
            .factors
            .iter()
            .zip(self.exponents(idx))
            .map(|(f, e)| e as u64 * (n / f.q as u64))
            .sum();
        (k % n) as u32
    }

    /// Expand a product of per-factor exponents `e_q` (taken mod `q`) into the basis.
    fn push_monomial(&self, exps: &[u32], coeff: &BigRational, acc: &mut HashMap<u32, BigRational>) {
        let mut partial: Vec<(u32, i64)> = vec![(0, 1)];
        for (f, &e) in self.0.factors.iter().zip(exps) {
            let row = &f.table[(e % f.q) as usize];
            if row.len() == 1 {
                let (j, c) = row[0];
                for t in partial.iter_mut() {
                    t.0 += j * f.stride;
                    t.1 *= c;
                }
            } else {
                let mut next = Vec::with_capacity(partial.len() * row.len());
                for &(i, a) in &partial {
                    for &(j, c) in row {
                        next.push((i + j * f.stride, a * c));
                    }
                }
                partial = next;
            }
        }
        for (idx, sign) in partial {
            let term = coeff * BigRational::from_integer(sign.into());
            let slot = acc.entry(idx).or_insert_with(BigRational::zero);
            *slot += term;
        }
    }

    fn collect(acc: HashMap<u32, BigRational>) -> Coeff {
        let mut v: Vec<(u32, BigRational)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_unstable_by_key(|t| t.0);
        Coeff(v)
    }

    /// ζ_N^k.
    pub fn zeta_pow(&self, k: i64) -> Coeff {
        let n = self.0.n as i64;
        let k = k.rem_euclid(n) as u64;
        let exps: Vec<u32> =
            self.0.factors.iter().map(|f| ((k * f.t as u64) % f.q as u64) as u32).collect();
        let mut acc = HashMap::new();
        self.push_monomial(&exps, &BigRational::one(), &mut acc);
        Self::collect(acc)
    }

    pub fn zeta(&self) -> Coeff {
        self.zeta_pow(1)
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        if a.is_zero() || b.is_zero() {
            return Coeff::zero();
        }
        if let Some(q) = a.as_rational() {
            return b.scale(&q);
        }
        if let Some(q) = b.as_rational() {
            return a.scale(&q);
        }
        if self.0.n > DENSE_LIMIT {
            return self.mul_sparse(a, b);
        }
        let (an, ad) = integral_parts(a);
        let (bn, bd) = integral_parts(b);
        let bits = |v: &[(u32, BigInt)]| v.iter().map(|(_, c)| c.bits()).max().unwrap_or(0);
        let pairs = (an.len() * bn.len()) as u64;
        let budget = bits(&an) + bits(&bn) + (64 - pairs.leading_zeros() as u64);
        let den = ad * bd;
        if budget < 120 {
            let an: Vec<(u32, i128)> = an.into_iter().map(|(i, c)| (i, i128::try_from(c).expect("fits"))).collect();
            let bn: Vec<(u32, i128)> = bn.into_iter().map(|(i, c)| (i, i128::try_from(c).expect("fits"))).collect();
            let out = self.convolve(&an, &bn);
            Self::from_integral(out.into_iter().map(|(i, v)| (i, BigInt::from(v))), &den)
        } else {
            let out = self.convolve(&an, &bn);
            Self::from_integral(out.into_iter(), &den)
        }
    }

    /// Product of integral elements: multiply in the unreduced exponent grid
    /// `∏ ℤ/q`, then fold each occupied slot into the basis once.
    fn convolve<T: Accum>(&self, a: &[(u32, T)], b: &[(u32, T)]) -> Vec<(u32, T)> {
        let factors = &self.0.factors;
        let mut qstride = Vec::with_capacity(factors.len());
        let mut total = 1usize;
        for f in factors {
            qstride.push(total);
            total *= f.q as usize;
        }
        let ea: Vec<Vec<u32>> = a.iter().map(|(i, _)| self.exponents(*i).collect()).collect();
        let eb: Vec<Vec<u32>> = b.iter().map(|(i, _)| self.exponents(*i).collect()).collect();
        let mut grid: Vec<T> = vec![T::acc_zero(); total];
        for ((_, ca), xa) in a.iter().zip(&ea) {
            for ((_, cb), xb) in b.iter().zip(&eb) {
                let mut slot = 0usize;
                for (k, f) in factors.iter().enumerate() {
                    slot += ((xa[k] + xb[k]) % f.q) as usize * qstride[k];
                }
                grid[slot].add_mul(ca, cb);
            }
        }
        let mut out: Vec<T> = vec![T::acc_zero(); self.0.degree];
        let mut partial: Vec<(u32, i64)> = Vec::new();
        let mut next: Vec<(u32, i64)> = Vec::new();
        for (slot, v) in grid.iter().enumerate() {
            if v.acc_is_zero() {
                continue;
            }
            partial.clear();
            partial.push((0, 1));
            for (k, f) in factors.iter().enumerate() {
                let e = (slot / qstride[k]) % f.q as usize;
                let row = &f.table[e];
                next.clear();
                for &(i, c0) in &partial {
                    for &(j, c) in row {
                        next.push((i + j * f.stride, c0 * c));
                    }
                }
                std::mem::swap(&mut partial, &mut next);
            }
            for &(idx, sign) in &partial {
                out[idx as usize].add_signed(v, sign);
            }
        }
        out.into_iter().enumerate().filter(|(_, v)| !v.acc_is_zero()).map(|(i, v)| (i as u32, v)).collect()
    }

    fn from_integral(terms: impl Iterator<Item = (u32, BigInt)>, den: &BigInt) -> Coeff {
        Coeff(terms.filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, BigRational::new(v, den.clone()))).collect())
    }

    fn mul_sparse(&self, a: &Coeff, b: &Coeff) -> Coeff {
        let nf = self.0.factors.len();
        let ea: Vec<Vec<u32>> = a.0.iter().map(|(i, _)| self.exponents(*i).collect()).collect();
        let eb: Vec<Vec<u32>> = b.0.iter().map(|(i, _)| self.exponents(*i).collect()).collect();
        let mut acc = HashMap::new();
        let mut exps = vec![0u32; nf];
        for (ta, xa) in a.0.iter().zip(&ea) {
            for (tb, xb) in b.0.iter().zip(&eb) {
                for k in 0..nf {
                    exps[k] = xa[k] + xb[k];
                }
                self.push_monomial(&exps, &(&ta.1 * &tb.1), &mut acc);
            }
        }
        Self::collect(acc)
    }

    pub fn pow(&self, a: &Coeff, mut e: u32) -> Coeff {
        let mut base = a.clone();
        let mut acc = Coeff::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Apply the automorphism ζ_q ↦ ζ_q^j on the factor with position `fi`.
    fn conjugate_on_factor(&self, a: &Coeff, fi: usize, j: u32) -> Coeff {
        let f = &self.0.factors[fi];
        let mut acc = HashMap::new();
        for (idx, c) in &a.0 {
            let mut exps: Vec<u32> = self.exponents(*idx).collect();
            exps[fi] = (exps[fi] * j) % f.q;
            self.push_monomial(&exps, c, &mut acc);
        }
        Self::collect(acc)
    }

    /// Multiplicative inverse.  Multiplies by the Galois conjugates factor by
    /// factor until the running norm becomes rational.
    pub fn inv(&self, a: &Coeff) -> Result<Coeff> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = a.as_rational() {
            return Ok(Coeff::from_rational(q.recip()));
        }
        let mut cur = a.clone();
        let mut acc = Coeff::one();
        for (fi, f) in self.0.factors.iter().enumerate() {
            let involves = cur.0.iter().any(|(idx, _)| (idx / f.stride) % f.d != 0);
            if !involves {
                continue;
            }
            let mut conj = Coeff::one();
            for j in 2..f.q {
                if j.gcd(&f.q) == 1 {
                    conj = self.mul(&conj, &self.conjugate_on_factor(&cur, fi, j));
                }
            }
            acc = self.mul(&acc, &conj);
            cur = self.mul(&cur, &conj);
        }
        let norm = cur
            .as_rational()
            .ok_or_else(|| Error::Internal("norm of a cyclotomic element is not rational".into()))?;
        Ok(acc.scale(&norm.recip()))
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Result<Coeff> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self, a: &Coeff) -> Coeff {
        let mut acc = HashMap::new();
        for (idx, c) in &a.0 {
            let exps: Vec<u32> = self.0.factors.iter().zip(self.exponents(*idx)).map(|(f, e)| (f.q - e) % f.q).collect();
            self.push_monomial(&exps, c, &mut acc);
        }
        Self::collect(acc)
    }

    /// Coordinates in the power basis `1, ζ, …, ζ^{φ(N)−1}` modulo Φ_N.
    pub fn power_basis_coeffs(&self, a: &Coeff) -> Vec<BigRational> {
        let d = self.0.degree;
        let phi = &self.0.phi;
        let mut out = vec![BigRational::zero(); d];
        for (idx, c) in &a.0 {
            // x^k mod Φ_N by repeated multiplication by x.
            let k = self.basis_exponent(*idx) as usize;
            if k < d {
                out[k] += c;
                continue;
            }
            let mut cur = vec![BigInt::zero(); d];
            cur[d - 1] = BigInt::one();
            for _ in d..=k {
                let top = cur[d - 1].clone();
                for i in (1..d).rev() {
                    cur[i] = &cur[i - 1] - &top * &phi[i];
                }
                cur[0] = -&top * &phi[0];
            }
            for (o, v) in out.iter_mut().zip(cur) {
                *o += c * BigRational::from_integer(v);
            }
        }
        out
    }

    /// Canonical text: `ζ^k` terms in increasing `k`, written with the symbol `z`.
    pub fn format(&self, a: &Coeff) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(u32, &BigRational)> = a.0.iter().map(|(i, c)| (self.basis_exponent(*i), c)).collect();
        terms.sort_by_key(|t| t.0);
        let mut s = String::new();
        for (n, (k, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { "-" } else { "+" });
            }
            let mono = match k {
                0 => String::new(),
                1 => "z".to_string(),
                k => format!("z^{k}"),
            };
            if mono.is_empty() {
                s.push_str(&fmt_rational(&mag));
            } else if mag.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&fmt_rational(&mag));
                s.push('*');
                s.push_str(&mono);
            }
        }
        s
    }

    pub fn elem(&self, value: Coeff) -> CycloElem {
        CycloElem { field: self.clone(), value }
    }

    /// Parse an expression in rationals and the symbol `z` (alias `zeta`).
    pub fn parse(&self, text: &str) -> Result<CycloElem> {
        let value = expr::parse(text, &mut CoeffBuilder { field: self })?;
        Ok(self.elem(value))
    }
}

struct CoeffBuilder<'a> {
    field: &'a CycloField,
}

impl expr::Builder for CoeffBuilder<'_> {
    type Value = Coeff;
    fn rational(&mut self, v: BigRational) -> Result<Coeff> {
        Ok(Coeff::from_rational(v))
    }
    fn ident(&mut self, name: &str, _pos: usize) -> Result<Coeff> {
        match name {
            "z" | "zeta" => Ok(self.field.zeta()),
            _ => Err(Error::UnknownVariable(name.to_string())),
        }
    }
    fn add(&mut self, a: Coeff, b: Coeff) -> Result<Coeff> {
        Ok(a.add(&b))
    }
    fn sub(&mut self, a: Coeff, b: Coeff) -> Result<Coeff> {
        Ok(a.sub(&b))
    }
    fn mul(&mut self, a: Coeff, b: Coeff) -> Result<Coeff> {
        Ok(self.field.mul(&a, &b))
    }
    fn neg(&mut self, a: Coeff) -> Result<Coeff> {
        Ok(a.neg())
    }
    fn pow(&mut self, a: Coeff, e: u32) -> Result<Coeff> {
        Ok(self.field.pow(&a, e))
    }
}

/// A field element bundled with its field, for checked standalone arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloElem {
    pub field: CycloField,
    pub value: Coeff,
}

impl CycloElem {
    fn check(&self, other: &CycloElem) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.conductor(), other.field.conductor()));
        }
        Ok(())
    }

    pub fn add(&self, o: &CycloElem) -> Result<CycloElem> {
        self.check(o)?;
        Ok(self.field.elem(self.value.add(&o.value)))
    }

    pub fn sub(&self, o: &CycloElem) -> Result<CycloElem> {
        self.check(o)?;
        Ok(self.field.elem(self.value.sub(&o.value)))
    }

    pub fn mul(&self, o: &CycloElem) -> Result<CycloElem> {
        self.check(o)?;
        Ok(self.field.elem(self.field.mul(&self.value, &o.value)))
    }

    pub fn div(&self, o: &CycloElem) -> Result<CycloElem> {
        self.check(o)?;
        Ok(self.field.elem(self.field.div(&self.value, &o.value)?))
    }

    pub fn inv(&self) -> Result<CycloElem> {
        Ok(self.field.elem(self.field.inv(&self.value)?))
    }

    pub fn pow(&self, e: u32) -> CycloElem {
        self.field.elem(self.field.pow(&self.value, e))
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn power_basis_coeffs(&self) -> Vec<BigRational> {
        self.field.power_basis_coeffs(&self.value)
    }
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(&self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn rats(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&c| BigRational::from_integer(c.into())).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(CycloField::new(1).unwrap().phi(), ints(&[-1, 1]).as_slice());
        assert_eq!(CycloField::new(8).unwrap().phi(), ints(&[1, 0, 0, 0, 1]).as_slice());
        assert_eq!(CycloField::new(12).unwrap().phi(), ints(&[1, 0, -1, 0, 1]).as_slice());
        assert!(CycloField::new(0).is_err());
    }

    #[test]
    fn roots_of_unity_relations() {
        let f4 = CycloField::new(4).unwrap();
        let z = f4.zeta();
        assert_eq!(f4.mul(&z, &z), Coeff::from_int(-1));

        let f8 = CycloField::new(8).unwrap();
        let s = f8.parse("z-z^3").unwrap();
        assert_eq!(s.mul(&s).unwrap().value, Coeff::from_int(2));
        assert_eq!(s.power_basis_coeffs(), rats(&[0, 1, 0, -1]));

        let f3 = CycloField::new(3).unwrap();
        let a = f3.parse("1+z").unwrap();
        assert_eq!(a.inv().unwrap(), f3.parse("-z").unwrap());
    }

    #[test]
    fn parse_reduces_exponents() {
        let f4 = CycloField::new(4).unwrap();
        assert_eq!(f4.parse("z^5").unwrap().value, f4.zeta());
        let f8 = CycloField::new(8).unwrap();
        assert_eq!(f8.parse("1/2").unwrap().power_basis_coeffs()[0], BigRational::new(1.into(), 2.into()));
        assert!(matches!(f8.parse("w"), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn composite_conductor_inverse() {
        let f = CycloField::new(2310).unwrap();
        assert_eq!(f.degree(), 480);
        let a = f.parse("z^770 - 1 + 3*z^462").unwrap();
        let prod = a.mul(&a.inv().unwrap()).unwrap();
        assert!(prod.value.is_one());
        assert!(f.pow(&f.zeta(), 2310).is_one());
    }

    #[test]
    fn format_is_canonical() {
        let f8 = CycloField::new(8).unwrap();
        for text in ["0", "z-z^3", "-1/2+2*z^2", "z^3", "-z"] {
            let e = f8.parse(text).unwrap();
            assert_eq!(e.to_string(), text);
        }
        let f = CycloField::new(15).unwrap();
        let e = f.parse("z^7 + 2*z^2 - 1/3").unwrap();
        assert_eq!(f.parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = CycloField::new(8).unwrap().parse("z").unwrap();
        let b = CycloField::new(3).unwrap().parse("z").unwrap();
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch(8, 3))));
        assert!(matches!(a.div(&a.field.parse("0").unwrap()), Err(Error::DivisionByZero)));
    }
}
