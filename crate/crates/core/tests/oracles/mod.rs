//! Reference computations that avoid the library's Gröbner and standard basis
//! machinery wherever possible. Shared by several test targets.
#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;

use reflmap::linalg::Matrix;
use reflmap::poly::{groebner, quotient_dim, Dim, Limits, MonOrder};
use reflmap::{Poly, PolyRing};

pub fn problem_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(name)
}

// Arithmetic modulo the Mersenne prime 2^61 - 1.
const P: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, P - 2)
}

fn int_mod(n: &BigInt) -> u64 {
    let m = BigInt::from(P);
    let r = ((n % &m) + &m) % &m;
    r.to_u64().unwrap()
}

fn rational_mod(q: &BigRational) -> u64 {
    mul_mod(int_mod(q.numer()), inv_mod(int_mod(q.denom())))
}

fn monomials_up_to(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// Codimension of span{m·g : deg(m·g) ≤ d} inside the polynomials of degree
/// at most `d`, by Gaussian elimination on the Macaulay matrix modulo a
/// large prime. Generators must have rational coefficients.
pub fn macaulay_codim(gens: &[Poly], d: u32) -> usize {
    let n = gens[0].ring().nvars();
    let cols = monomials_up_to(n, d);
    let index: HashMap<&Vec<u32>, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut pivots: Vec<Option<Vec<u64>>> = vec![None; cols.len()];
    let mut rank = 0;
    for g in gens {
        let terms: Vec<(Vec<u32>, u64)> = g
            .terms()
            .iter()
            .map(|(m, c)| (m.to_vec(), rational_mod(&c.as_rational().expect("rational coefficients"))))
            .collect();
        let gdeg = g.total_degree().unwrap_or(0);
        if gdeg > d {
            continue;
        }
        for shift in monomials_up_to(n, d - gdeg) {
            let mut row = vec![0u64; cols.len()];
            for (m, c) in &terms {
                let prod: Vec<u32> = m.iter().zip(&shift).map(|(a, b)| a + b).collect();
                row[index[&prod]] = *c;
            }
            for col in 0..cols.len() {
                if row[col] == 0 {
                    continue;
                }
                match &pivots[col] {
                    Some(pr) => {
                        let f = row[col];
                        for (x, y) in row.iter_mut().zip(pr) {
                            if *y != 0 {
                                *x = (*x + P - mul_mod(f, *y)) % P;
                            }
                        }
                    }
                    None => {
                        let inv = inv_mod(row[col]);
                        for x in row.iter_mut() {
                            *x = mul_mod(*x, inv);
                        }
                        pivots[col] = Some(row);
                        rank += 1;
                        break;
                    }
                }
            }
        }
    }
    cols.len() - rank
}

/// Local length at the origin of a planar ideal: dim k[x,y]/(I + m^N) for
/// growing N until two consecutive values agree, which by Nakayama's lemma
/// forces m^N ⊆ I locally. `None` when no plateau appears below `max_n`.
pub fn local_length(gens: &[Poly], max_n: u32) -> Option<u64> {
    let ring = gens[0].ring().clone();
    let (x, y) = (ring.var(0), ring.var(1));
    let limits = Limits::default();
    let mut prev = None;
    for n in 1..=max_n {
        let mut g = gens.to_vec();
        for i in 0..=n {
            g.push(x.pow(i).mul(&y.pow(n - i)));
        }
        let basis = groebner(&g, MonOrder::DegRevLex, &limits).expect("groebner");
        let Dim::Finite(d) = quotient_dim(&basis) else { unreachable!("m^N makes the quotient finite") };
        if prev == Some(d) {
            return Some(d);
        }
        prev = Some(d);
    }
    None
}

/// Local length encoded the way the invariant report stores it.
pub fn encoded_local_length(gens: &[Poly], max_n: u32) -> i64 {
    local_length(gens, max_n).map_or(-1, |v| v as i64)
}

/// `h(M u)` for a matrix acting on the listed variables.
pub fn linear_pullback(h: &Poly, m: &Matrix, vars: &[usize]) -> Poly {
    let ring = h.ring();
    let mut images: Vec<Poly> = (0..ring.nvars()).map(|i| ring.var(i)).collect();
    for (i, &vi) in vars.iter().enumerate() {
        let mut form = ring.zero();
        for (j, &vj) in vars.iter().enumerate() {
            let c = m.get(i, j);
            if !c.is_zero() {
                form = &form + &ring.var(vj).scale(c);
            }
        }
        images[vi] = form;
    }
    h.substitute(ring, &images).expect("substitution")
}

/// Laplace expansion along the first row.
pub fn det(m: &[Vec<Poly>], ring: &PolyRing) -> Poly {
    match m.len() {
        0 => ring.one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = ring.zero();
            for j in 0..n {
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = m[0][j].mul(&det(&minor, ring));
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Every term of `g` has the same weighted degree; returns it.
pub fn weighted_homogeneous_degree(g: &Poly, weights: &[u32]) -> Option<u64> {
    let mut degs = g.terms().iter().map(|(m, _)| m.iter().zip(weights).map(|(e, w)| (*e as u64) * (*w as u64)).sum::<u64>());
    let first = degs.next()?;
    degs.all(|d| d == first).then_some(first)
}

/// Random polynomial text in `vars` with small integer coefficients, no
/// constant term, total degree between `min_deg` and `max_deg`.
pub fn random_poly_text(rng: &mut impl Rng, vars: &[&str], min_deg: u32, max_deg: u32, terms: usize) -> String {
    let mut parts = Vec::new();
    for _ in 0..terms {
        let mut c: i64 = rng.gen_range(-5..=5);
        if c == 0 {
            c = 1;
        }
        let d = rng.gen_range(min_deg..=max_deg);
        let mut exps = vec![0u32; vars.len()];
        for _ in 0..d {
            exps[rng.gen_range(0..vars.len())] += 1;
        }
        let mono: Vec<String> = vars.iter().zip(&exps).filter(|(_, e)| **e > 0).map(|(v, e)| format!("{v}^{e}")).collect();
        parts.push(if mono.is_empty() { format!("({c})") } else { format!("({c})*{}", mono.join("*")) });
    }
    parts.join(" + ")
}

/// `a = c·b` for a nonzero constant `c`.
pub fn proportional(a: &Poly, b: &Poly) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    let field = a.field();
    let (ma, ca) = a.leading().unwrap();
    let (mb, cb) = b.leading().unwrap();
    if ma != mb {
        return false;
    }
    let ratio = field.div(ca, cb).unwrap();
    (a - &b.scale(&ratio)).is_zero()
}

/// Groups used for randomized reflected graphs `w = H(u, v)`.
#[derive(Clone, Copy, Debug)]
pub enum SmallGroup {
    D8,
    C2xC3,
}

impl SmallGroup {
    pub fn order(self) -> u32 {
        match self {
            SmallGroup::D8 => 8,
            SmallGroup::C2xC3 => 6,
        }
    }

    /// Degrees of the basic invariants on the first two coordinates.
    pub fn degrees(self) -> [u32; 2] {
        match self {
            SmallGroup::D8 => [2, 4],
            SmallGroup::C2xC3 => [2, 3],
        }
    }
}

/// Problem file for the reflected graph of `h`, written in `x` and `y`.
pub fn graph_problem_json(group: SmallGroup, h: &str) -> String {
    let (conductor, space, target, builtin, u, v) = match group {
        SmallGroup::D8 => (8, r#"["u", "v", "w"]"#, r#"["X", "Y", "Z"]"#, r#"{"builtin": "dihedral_D8"}"#, "u", "v"),
        SmallGroup::C2xC3 => (
            6,
            r#"["u1", "u2", "u3"]"#,
            r#"["X1", "X2", "X3"]"#,
            r#"{"builtin": "cyclic_product", "degrees": [2, 3]}"#,
            "u1",
            "u2",
        ),
    };
    let w = match group {
        SmallGroup::D8 => "w",
        SmallGroup::C2xC3 => "u3",
    };
    let h_space = h.replace('x', u).replace('y', v);
    format!(
        r#"{{"conductor": {conductor}, "space": {space}, "target": {target}, "group": {builtin},
            "hypersurface": ["{w} - ({h_space})"],
            "chart": {{"source": ["x", "y"], "map": ["x", "y", "{h}"]}}}}"#
    )
}
