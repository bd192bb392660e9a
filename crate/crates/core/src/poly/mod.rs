//! Sparse multivariate polynomials over ℚ(ζ_N) with a named variable context.

mod groebner;
mod mora;
mod order;

pub use groebner::{
    eliminate, groebner, is_squarefree, krull_dim, quotient_dim, Dim, IdealBasis, Limits,
};
pub use mora::{mora_normal_form, standard_basis};
pub use order::MonOrder;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::cyclotomic::{Coeff, CycloField};
use crate::error::{Error, Result};
use crate::expr::{self, fmt_rational};

/// Exponent vector, one entry per ring variable.
pub type Mono = SmallVec<[u32; 8]>;

/// What a variable stands for in the geometric setting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Coordinates `u` of the space the group acts on.
    Space,
    /// Coordinates `X` of the target of the orbit map.
    Target,
    /// Homogeneous coordinates `v` of the projectivized space.
    Projective,
    /// Unfolding parameters, fixed by the group.
    Parameter,
    /// Coordinates of a parametrization chart.
    Source,
}

#[derive(Debug)]
struct RingInner {
    field: CycloField,
    names: Vec<String>,
    roles: Vec<Role>,
}

/// Polynomial ring ℚ(ζ_N)[x₁,…,x_n] with named variables.
#[derive(Clone, Debug)]
pub struct PolyRing(Arc<RingInner>);

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field
                && self.0.names == other.0.names
                && self.0.roles == other.0.roles)
    }
}
impl Eq for PolyRing {}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PolyRing {
    pub fn new<S: Into<String>>(field: &CycloField, vars: impl IntoIterator<Item = (S, Role)>) -> Result<Self> {
        let (names, roles): (Vec<String>, Vec<Role>) = vars.into_iter().map(|(n, r)| (n.into(), r)).unzip();
        if names.is_empty() {
            return Err(Error::Input("a polynomial ring needs at least one variable".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if !valid_ident(n) {
                return Err(Error::Input(format!("`{n}` is not a valid variable name")));
            }
            if names[..i].contains(n) {
                return Err(Error::Input(format!("variable `{n}` declared twice")));
            }
        }
        Ok(PolyRing(Arc::new(RingInner { field: field.clone(), names, roles })))
    }

    pub fn field(&self) -> &CycloField {
        &self.0.field
    }

    pub fn nvars(&self) -> usize {
        self.0.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn roles(&self) -> &[Role] {
        &self.0.roles
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    pub fn with_role(&self, role: Role) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.0.roles[i] == role).collect()
    }

    pub fn zero(&self) -> Poly {
        Poly { ring: self.clone(), terms: Vec::new() }
    }

    pub fn one(&self) -> Poly {
        self.constant(Coeff::one())
    }

    pub fn constant(&self, c: Coeff) -> Poly {
        if c.is_zero() {
            return self.zero();
        }
        Poly { ring: self.clone(), terms: vec![(self.unit_mono(), c)] }
    }

    pub fn int(&self, n: i64) -> Poly {
        self.constant(Coeff::from_int(n))
    }

    pub fn unit_mono(&self) -> Mono {
        SmallVec::from_elem(0, self.nvars())
    }

    pub fn var(&self, i: usize) -> Poly {
        let mut m = self.unit_mono();
        m[i] = 1;
        Poly { ring: self.clone(), terms: vec![(m, Coeff::one())] }
    }

    pub fn var_named(&self, name: &str) -> Result<Poly> {
        self.index(name).map(|i| self.var(i)).ok_or_else(|| Error::UnknownVariable(name.into()))
    }

    pub fn monomial(&self, m: Mono, c: Coeff) -> Poly {
        assert_eq!(m.len(), self.nvars());
        if c.is_zero() {
            return self.zero();
        }
        Poly { ring: self.clone(), terms: vec![(m, c)] }
    }

    /// Parse with the polynomial grammar.  Declared variables take precedence
    /// over the root-of-unity symbols `z`/`zeta`.
    pub fn parse(&self, text: &str) -> Result<Poly> {
        expr::parse(text, &mut PolyBuilder { ring: self })
    }

    /// A ring with the same field and the given variables.
    pub fn derive<S: Into<String>>(&self, vars: impl IntoIterator<Item = (S, Role)>) -> Result<PolyRing> {
        PolyRing::new(self.field(), vars)
    }

    /// Variables as `(name, role)` pairs.
    pub fn vars(&self) -> Vec<(String, Role)> {
        self.0.names.iter().cloned().zip(self.0.roles.iter().copied()).collect()
    }
}

struct PolyBuilder<'a> {
    ring: &'a PolyRing,
}

impl expr::Builder for PolyBuilder<'_> {
    type Value = Poly;
    fn rational(&mut self, v: BigRational) -> Result<Poly> {
        Ok(self.ring.constant(Coeff::from_rational(v)))
    }
    fn ident(&mut self, name: &str, _pos: usize) -> Result<Poly> {
        if let Some(i) = self.ring.index(name) {
            return Ok(self.ring.var(i));
        }
        match name {
            "z" | "zeta" => Ok(self.ring.constant(self.ring.field().zeta())),
            _ => Err(Error::UnknownVariable(name.to_string())),
        }
    }
    fn add(&mut self, a: Poly, b: Poly) -> Result<Poly> {
        Ok(&a + &b)
    }
    fn sub(&mut self, a: Poly, b: Poly) -> Result<Poly> {
        Ok(&a - &b)
    }
    fn mul(&mut self, a: Poly, b: Poly) -> Result<Poly> {
        Ok(&a * &b)
    }
    fn neg(&mut self, a: Poly) -> Result<Poly> {
        Ok(-&a)
    }
    fn pow(&mut self, a: Poly, e: u32) -> Result<Poly> {
        Ok(a.pow(e))
    }
}

/// Polynomial with terms kept in descending degree reverse lexicographic order.
#[derive(Clone, Debug)]
pub struct Poly {
    ring: PolyRing,
    terms: Vec<(Mono, Coeff)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}
impl Eq for Poly {}

pub(crate) fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
}

pub(crate) fn mono_divides(a: &Mono, b: &Mono) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| x <= y)
}

pub(crate) fn mono_div(a: &Mono, b: &Mono) -> Mono {
    a.iter().zip(b.iter()).map(|(x, y)| x - y).collect()
}

pub(crate) fn mono_lcm(a: &Mono, b: &Mono) -> Mono {
    a.iter().zip(b.iter()).map(|(x, y)| *x.max(y)).collect()
}

pub(crate) fn mono_deg(a: &Mono) -> u32 {
    a.iter().sum()
}

fn sort_desc(terms: &mut [(Mono, Coeff)]) {
    terms.sort_by(|a, b| MonOrder::DegRevLex.cmp(&b.0, &a.0));
}

impl Poly {
    /// Build from arbitrary terms; duplicates are combined and zeros dropped.
    pub fn from_terms(ring: &PolyRing, terms: impl IntoIterator<Item = (Mono, Coeff)>) -> Poly {
        let mut acc: HashMap<Mono, Coeff> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), ring.nvars(), "exponent vector length");
            match acc.get_mut(&m) {
                Some(slot) => *slot = slot.add(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<(Mono, Coeff)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        sort_desc(&mut terms);
        Poly { ring: ring.clone(), terms }
    }

    /// Build from terms already sorted in descending degrevlex order without
    /// duplicates or zeros.
    pub(crate) fn from_sorted(ring: &PolyRing, terms: Vec<(Mono, Coeff)>) -> Poly {
        Poly { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> &CycloField {
        self.ring.field()
    }

    pub fn terms(&self) -> &[(Mono, Coeff)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// True for nonzero constants.
    pub fn is_unit_constant(&self) -> bool {
        self.terms.len() == 1 && mono_deg(&self.terms[0].0) == 0
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || self.is_unit_constant()
    }

    pub fn constant_term(&self) -> Coeff {
        match self.terms.last() {
            Some((m, c)) if mono_deg(m) == 0 => c.clone(),
            _ => Coeff::zero(),
        }
    }

    /// Maximal total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| mono_deg(m))
    }

    /// Order of vanishing at the origin; `None` for zero.
    pub fn order_at_origin(&self) -> Option<u32> {
        self.terms.last().map(|(m, _)| mono_deg(m))
    }

    /// Sum of the terms of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        let terms = self.terms.iter().filter(|(m, _)| mono_deg(m) == d).cloned().collect();
        Poly::from_sorted(&self.ring, terms)
    }

    /// Lowest-degree homogeneous form (the tangent cone at the origin).
    pub fn lowest_form(&self) -> Poly {
        match self.order_at_origin() {
            Some(d) => self.homogeneous_part(d),
            None => self.clone(),
        }
    }

    /// Leading term in degrevlex.
    pub fn leading(&self) -> Option<&(Mono, Coeff)> {
        self.terms.first()
    }

    /// Indices of the variables occurring in the polynomial.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars()).filter(|&i| self.terms.iter().any(|(m, _)| m[i] > 0)).collect()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m[var]).max().unwrap_or(0)
    }

    fn check_ring(&self, other: &Poly) {
        assert!(self.ring == other.ring, "polynomials from different rings");
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        self.check_ring(other);
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                std::cmp::Ordering::Less
            } else if j == b.len() {
                std::cmp::Ordering::Greater
            } else {
                MonOrder::DegRevLex.cmp(&a[i].0, &b[j].0)
            };
            match ord {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { b[j].1.neg() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { a[i].1.sub(&b[j].1) } else { a[i].1.add(&b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly::from_sorted(&self.ring, out)
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        if c.is_zero() {
            return self.ring.zero();
        }
        let f = self.field();
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), f.mul(a, c))).collect();
        Poly::from_sorted(&self.ring, terms)
    }

    /// Multiply by the monomial `c·m`.
    pub fn mul_term(&self, m: &Mono, c: &Coeff) -> Poly {
        if c.is_zero() {
            return self.ring.zero();
        }
        let f = self.field();
        let terms = self.terms.iter().map(|(a, x)| (mono_mul(a, m), f.mul(x, c))).collect();
        Poly::from_sorted(&self.ring, terms)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_ring(other);
        if self.is_zero() || other.is_zero() {
            return self.ring.zero();
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let f = self.field();
        let mut acc: HashMap<Mono, Coeff> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = mono_mul(ma, mb);
                let c = f.mul(ca, cb);
                match acc.get_mut(&m) {
                    Some(slot) => *slot = slot.add(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<(Mono, Coeff)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        sort_desc(&mut terms);
        Poly::from_sorted(&self.ring, terms)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn product<'a>(ring: &PolyRing, factors: impl IntoIterator<Item = &'a Poly>) -> Poly {
        factors.into_iter().fold(ring.one(), |acc, f| acc.mul(f))
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m[var] > 0)
            .map(|(m, c)| {
                let mut m2 = m.clone();
                let e = m2[var];
                m2[var] -= 1;
                (m2, c.scale(&BigRational::from_integer(e.into())))
            })
            .collect::<Vec<_>>();
        Poly::from_terms(&self.ring, terms)
    }

    pub fn jacobian(&self, vars: &[usize]) -> Vec<Poly> {
        vars.iter().map(|&v| self.derivative(v)).collect()
    }

    /// Substitute `images[i]` (polynomials of `target`) for variable `i`.
    pub fn substitute(&self, target: &PolyRing, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.ring.nvars() {
            return Err(Error::Input(format!(
                "substitution needs {} images, got {}",
                self.ring.nvars(),
                images.len()
            )));
        }
        if images.iter().any(|p| p.ring != *target) || self.field() != target.field() {
            return Err(Error::RingMismatch);
        }
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![target.one(), p.clone()]).collect();
        let mut acc: HashMap<Mono, Coeff> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = target.constant(c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize]);
            }
            for (tm, tc) in t.terms {
                match acc.get_mut(&tm) {
                    Some(slot) => *slot = slot.add(&tc),
                    None => {
                        acc.insert(tm, tc);
                    }
                }
            }
        }
        Ok(Poly::from_terms(target, acc))
    }

    /// Substitute by variable name; unnamed variables stay as they are.
    pub fn substitute_named(&self, assignment: &[(&str, Poly)]) -> Result<Poly> {
        let mut images: Vec<Poly> = (0..self.ring.nvars()).map(|i| self.ring.var(i)).collect();
        for (name, p) in assignment {
            let i = self.ring.index(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            images[i] = p.clone();
        }
        self.substitute(&self.ring, &images)
    }

    /// Re-express in `target`, matching variables by name.  Variables of
    /// `self` that actually occur must exist in `target`.
    pub fn map_into(&self, target: &PolyRing) -> Result<Poly> {
        let mut idx = Vec::with_capacity(self.ring.nvars());
        for (i, n) in self.ring.names().iter().enumerate() {
            let j = target.index(n);
            if j.is_none() && self.terms.iter().any(|(m, _)| m[i] > 0) {
                return Err(Error::UnknownVariable(n.clone()));
            }
            idx.push(j);
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut out = target.unit_mono();
            for (i, &e) in m.iter().enumerate() {
                if let Some(j) = idx[i] {
                    out[j] += e;
                }
            }
            (out, c.clone())
        });
        Ok(Poly::from_terms(target, terms.collect::<Vec<_>>()))
    }

    /// Exact quotient by `den` (degrevlex division); an error carries the
    /// remainder if `den` does not divide `self`.
    pub fn exact_divide(&self, den: &Poly) -> Result<Poly> {
        self.check_ring(den);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = self.field();
        let (lm, lc) = den.leading().unwrap();
        let lc_inv = f.inv(lc)?;
        let mut rem = self.clone();
        let mut quo = Vec::new();
        let mut leftover = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            if mono_divides(lm, &m) {
                let qm = mono_div(&m, lm);
                let qc = f.mul(&c, &lc_inv);
                rem = &rem - &den.mul_term(&qm, &qc);
                quo.push((qm, qc));
            } else {
                leftover.push((m, c));
                rem.terms.remove(0);
            }
        }
        if !leftover.is_empty() {
            let r = Poly::from_sorted(&self.ring, leftover);
            return Err(Error::NotDivisible { remainder: r.to_string() });
        }
        let q = Poly::from_sorted(&self.ring, quo);
        debug_assert!(q.mul(den) == *self);
        Ok(q)
    }

    /// Weighted degree of every term if all agree.
    pub fn weighted_degree(&self, weights: &[u32]) -> Option<u64> {
        let mut deg = None;
        for (m, _) in &self.terms {
            let d: u64 = m.iter().zip(weights).map(|(e, w)| *e as u64 * *w as u64).sum();
            match deg {
                None => deg = Some(d),
                Some(x) if x != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// Scale so the coefficients are integral with content 1 and the leading
    /// coefficient is positive (in its first basis component).
    pub fn normalized(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let f = self.field();
        let lc_inv = f.inv(&self.terms[0].1).expect("nonzero leading coefficient");
        let monic = self.scale(&lc_inv);
        let den = monic.terms.iter().fold(BigInt::one(), |acc, (_, c)| num_integer::lcm(acc, c.denom_lcm()));
        let scaled = monic.scale(&Coeff::from_rational(BigRational::from_integer(den)));
        let g = scaled.terms.iter().fold(BigInt::zero(), |acc, (_, c)| num_integer::gcd(acc, c.numer_gcd()));
        let mut out = scaled.scale(&Coeff::from_rational(BigRational::new(BigInt::one(), g)));
        if out.terms[0].1.leading_sign() < 0 {
            out = -&out;
        }
        out
    }

    /// Monic in degrevlex.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&self.field().inv(c).expect("nonzero")),
        }
    }

    /// Whether `self = c·other` for a nonzero constant `c`.
    pub fn is_proportional(&self, other: &Poly) -> bool {
        if self.ring != other.ring || self.terms.len() != other.terms.len() {
            return false;
        }
        if self.is_zero() {
            return true;
        }
        self.monic() == other.monic()
    }

    /// Largest exponent of `var` dividing every term.
    pub fn var_multiplicity(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m[var]).min().unwrap_or(0)
    }

    /// Divide out the monomial `m` from every term (caller guarantees divisibility).
    pub fn div_mono(&self, m: &Mono) -> Poly {
        let terms = self.terms.iter().map(|(a, c)| (mono_div(a, m), c.clone())).collect();
        Poly::from_sorted(&self.ring, terms)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let names = self.ring.names();
        let field = self.field();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
                .collect();
            let mono = mono.join("*");
            match c.as_rational() {
                Some(q) => {
                    let neg = q.is_negative();
                    if neg {
                        f.write_str("-")?;
                    } else if k > 0 {
                        f.write_str("+")?;
                    }
                    let mag = q.abs();
                    if mono.is_empty() {
                        f.write_str(&fmt_rational(&mag))?;
                    } else if mag.is_one() {
                        f.write_str(&mono)?;
                    } else {
                        write!(f, "{}*{}", fmt_rational(&mag), mono)?;
                    }
                }
                None => {
                    if k > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "({})", field.format(c))?;
                    if !mono.is_empty() {
                        write!(f, "*{mono}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.merge(rhs, false)
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.merge(rhs, true)
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect();
        Poly::from_sorted(&self.ring, terms)
    }
}

/// Determinant by Laplace expansion along the first row.
pub fn det(m: &[Vec<Poly>], ring: &PolyRing) -> Poly {
    let n = m.len();
    if n == 0 {
        return ring.one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = ring.zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let sub: Vec<Vec<Poly>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect()).collect();
        let term = m[0][j].mul(&det(&sub, ring));
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All `k×k` minors, rows subsets outer and column subsets inner, both in
/// lexicographic order.
pub fn minors(m: &[Vec<Poly>], k: usize, ring: &PolyRing) -> Result<Vec<Poly>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    if k > rows.min(cols) {
        return Err(Error::Precondition(format!("{k}x{k} minors of a {rows}x{cols} matrix")));
    }
    let mut out = Vec::new();
    for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
            let sub: Vec<Vec<Poly>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect()).collect();
            out.push(det(&sub, ring));
        }
    }
    Ok(out)
}
