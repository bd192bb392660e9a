//! Buchberger's algorithm and the ideal-theoretic queries built on it.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{mono_deg, mono_div, mono_divides, mono_lcm, mono_mul, Mono, MonOrder, Poly, PolyRing};
use crate::cyclotomic::{Coeff, CycloField};
use crate::error::{Error, Result};

/// Resource limits for Gröbner and standard basis computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of single reduction steps before giving up.
    pub step_budget: u64,
    /// Re-check every finished Gröbner basis by reducing all S-polynomials.
    pub verify: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { step_budget: 1_000_000, verify: false }
    }
}

impl Limits {
    pub fn with_budget(step_budget: u64) -> Self {
        Limits { step_budget, ..Limits::default() }
    }

    pub fn verified(self) -> Self {
        Limits { verify: true, ..self }
    }
}

/// Dimension of a quotient as a vector space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dim {
    Finite(u64),
    Infinite,
}

impl Dim {
    pub fn finite(self) -> Option<u64> {
        match self {
            Dim::Finite(n) => Some(n),
            Dim::Infinite => None,
        }
    }
}

pub(crate) type Terms = Vec<(Mono, Coeff)>;

pub(crate) struct Budget {
    used: u64,
    limit: u64,
}

impl Budget {
    pub(crate) fn new(limits: &Limits) -> Self {
        Budget { used: 0, limit: limits.step_budget }
    }

    pub(crate) fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::Resource { budget: self.limit });
        }
        Ok(())
    }
}

pub(crate) fn to_order(p: &Poly, order: MonOrder) -> Terms {
    let mut t = p.terms().to_vec();
    if order != MonOrder::DegRevLex {
        t.sort_by(|a, b| order.cmp(&b.0, &a.0));
    }
    t
}

pub(crate) fn from_order(ring: &PolyRing, terms: Terms) -> Poly {
    Poly::from_terms(ring, terms)
}

/// `a − c·m·g` for order-sorted term lists.
pub(crate) fn sub_mul(order: MonOrder, field: &CycloField, a: &[(Mono, Coeff)], c: &Coeff, m: &Mono, g: &[(Mono, Coeff)]) -> Terms {
    let mut out = Vec::with_capacity(a.len() + g.len());
    let mut i = 0;
    let mut gi = g.iter().map(|(gm, gc)| (mono_mul(gm, m), gc)).peekable();
    while i < a.len() || gi.peek().is_some() {
        let ord = match (a.get(i), gi.peek()) {
            (None, _) => Ordering::Less,
            (_, None) => Ordering::Greater,
            (Some((am, _)), Some((bm, _))) => order.cmp(am, bm),
        };
        match ord {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let (bm, bc) = gi.next().unwrap();
                out.push((bm, field.mul(bc, c).neg()));
            }
            Ordering::Equal => {
                let (bm, bc) = gi.next().unwrap();
                let v = a[i].1.sub(&field.mul(bc, c));
                if !v.is_zero() {
                    out.push((bm, v));
                }
                i += 1;
            }
        }
    }
    out
}

pub(crate) fn make_monic(field: &CycloField, t: &mut Terms) {
    if let Some((_, lc)) = t.first() {
        if !lc.is_one() {
            let inv = field.inv(lc).expect("nonzero leading coefficient");
            for (_, c) in t.iter_mut() {
                *c = field.mul(c, &inv);
            }
        }
    }
}

/// Full reduction of `p` by monic `basis` (global orders).
pub(crate) fn reduce_full(order: MonOrder, field: &CycloField, p: Terms, basis: &[&Terms], budget: &mut Budget) -> Result<Terms> {
    let mut rem: Terms = Vec::new();
    let mut p = p;
    let mut start = 0;
    while start < p.len() {
        let (lm, lc) = (&p[start].0, &p[start].1);
        match basis.iter().find(|g| mono_divides(&g[0].0, lm)) {
            Some(g) => {
                budget.tick()?;
                let m = mono_div(lm, &g[0].0);
                let c = lc.clone();
                // the leading term cancels exactly
                p = sub_mul(order, field, &p[start + 1..], &c, &m, &g[1..]);
                start = 0;
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    Ok(rem)
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    sugar: u32,
}

/// Shared pair bookkeeping for Buchberger and Mora.
pub(crate) struct PairSet {
    order: MonOrder,
    pub(crate) polys: Vec<Terms>,
    sugar: Vec<u32>,
    pub(crate) active: Vec<bool>,
    pairs: Vec<Pair>,
}

fn degree_of(t: &Terms) -> u32 {
    t.iter().map(|(m, _)| mono_deg(m)).max().unwrap_or(0)
}

impl PairSet {
    pub(crate) fn new(order: MonOrder) -> Self {
        PairSet { order, polys: Vec::new(), sugar: Vec::new(), active: Vec::new(), pairs: Vec::new() }
    }

    pub(crate) fn active_polys(&self) -> Vec<&Terms> {
        self.polys.iter().zip(&self.active).filter(|(_, a)| **a).map(|(p, _)| p).collect()
    }

    /// Insert `h` (monic, nonzero) and update pairs by the Gebauer–Möller criteria.
    pub(crate) fn insert(&mut self, h: Terms, sugar: u32) {
        let hi = self.polys.len();
        let lh = h[0].0.clone();
        let coprime = |a: &Mono, b: &Mono| a.iter().zip(b.iter()).all(|(x, y)| *x == 0 || *y == 0);

        let cands: Vec<(usize, Mono)> = (0..hi)
            .filter(|&g| self.active[g])
            .map(|g| (g, mono_lcm(&lh, &self.polys[g][0].0)))
            .collect();
        let mut kept: Vec<(usize, Mono)> = Vec::new();
        for (k, (g, l)) in cands.iter().enumerate() {
            let disjoint = coprime(&lh, &self.polys[*g][0].0);
            let dominated = cands[k + 1..].iter().any(|(_, l2)| mono_divides(l2, l))
                || kept.iter().any(|(_, l2)| mono_divides(l2, l));
            if disjoint || !dominated {
                kept.push((*g, l.clone()));
            }
        }
        let new_pairs: Vec<Pair> = kept
            .into_iter()
            .filter(|(g, _)| !coprime(&lh, &self.polys[*g][0].0))
            .map(|(g, l)| {
                let d = mono_deg(&l);
                let s1 = self.sugar[g] + d - mono_deg(&self.polys[g][0].0);
                let s2 = sugar + d - mono_deg(&lh);
                Pair { i: g, j: hi, lcm: l, sugar: s1.max(s2) }
            })
            .collect();

        let polys = &self.polys;
        self.pairs.retain(|p| {
            !(mono_divides(&lh, &p.lcm)
                && mono_lcm(&polys[p.i][0].0, &lh) != p.lcm
                && mono_lcm(&polys[p.j][0].0, &lh) != p.lcm)
        });
        self.pairs.extend(new_pairs);

        for g in 0..hi {
            if self.active[g] && mono_divides(&lh, &self.polys[g][0].0) {
                self.active[g] = false;
            }
        }
        self.polys.push(h);
        self.sugar.push(sugar);
        self.active.push(true);
    }

    /// Remove and return the next pair: smallest lcm (by degree first for
    /// local orders), then smallest sugar, then insertion indices.
    fn pop(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.order;
        let key_cmp = |a: &Pair, b: &Pair| {
            let first = if order.is_local() {
                mono_deg(&a.lcm).cmp(&mono_deg(&b.lcm)).then_with(|| order.cmp(&b.lcm, &a.lcm))
            } else {
                order.cmp(&a.lcm, &b.lcm)
            };
            first.then(a.sugar.cmp(&b.sugar)).then((a.i, a.j).cmp(&(b.i, b.j)))
        };
        let mut best = 0;
        for k in 1..self.pairs.len() {
            if key_cmp(&self.pairs[k], &self.pairs[best]) == Ordering::Less {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    pub(crate) fn next_spoly(&mut self, field: &CycloField) -> Option<(Terms, u32)> {
        let p = self.pop()?;
        let (a, b) = (&self.polys[p.i], &self.polys[p.j]);
        let ma = mono_div(&p.lcm, &a[0].0);
        let mb = mono_div(&p.lcm, &b[0].0);
        let lhs: Terms = a[1..].iter().map(|(m, c)| (mono_mul(m, &ma), c.clone())).collect();
        let s = sub_mul(self.order, field, &lhs, &Coeff::one(), &mb, &b[1..]);
        Some((s, p.sugar))
    }
}

/// A Gröbner basis (global order) or standard basis (local order).
#[derive(Clone, Debug)]
pub struct IdealBasis {
    ring: PolyRing,
    order: MonOrder,
    gens: Vec<Poly>,
    internal: Vec<Terms>,
    reduced: bool,
}

impl IdealBasis {
    pub(crate) fn from_internal(ring: &PolyRing, order: MonOrder, internal: Vec<Terms>, reduced: bool) -> Self {
        let gens = internal.iter().map(|t| from_order(ring, t.clone())).collect();
        IdealBasis { ring: ring.clone(), order, gens, internal, reduced }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn order(&self) -> MonOrder {
        self.order
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn reduced_flag(&self) -> bool {
        self.reduced
    }

    /// Leading monomials with respect to the basis order.
    pub fn leading_monomials(&self) -> Vec<Mono> {
        self.internal.iter().map(|t| t[0].0.clone()).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.internal.iter().any(|t| mono_deg(&t[0].0) == 0)
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.internal.is_empty()
    }

    /// Normal form of `p` (global orders only).
    pub fn normal_form(&self, p: &Poly, limits: &Limits) -> Result<Poly> {
        if self.order.is_local() {
            return super::mora::mora_normal_form(p, &self.gens, limits);
        }
        let refs: Vec<&Terms> = self.internal.iter().collect();
        let mut budget = Budget::new(limits);
        let r = reduce_full(self.order, self.ring.field(), to_order(p, self.order), &refs, &mut budget)?;
        Ok(from_order(&self.ring, r))
    }

    pub fn contains(&self, p: &Poly, limits: &Limits) -> Result<bool> {
        Ok(self.normal_form(p, limits)?.is_zero())
    }

    /// Verify that every S-polynomial of basis pairs reduces to zero.
    pub fn check_spolys(&self, limits: &Limits) -> Result<bool> {
        let field = self.ring.field();
        for i in 0..self.internal.len() {
            for j in i + 1..self.internal.len() {
                let (a, b) = (&self.internal[i], &self.internal[j]);
                let l = mono_lcm(&a[0].0, &b[0].0);
                let ma = mono_div(&l, &a[0].0);
                let mb = mono_div(&l, &b[0].0);
                let ca = field.inv(&a[0].1)?;
                let cb = field.inv(&b[0].1)?;
                let lhs: Terms = a.iter().map(|(m, c)| (mono_mul(m, &ma), field.mul(c, &ca))).collect();
                let s = sub_mul(self.order, field, &lhs, &cb, &mb, b);
                let sp = from_order(&self.ring, s);
                if !self.normal_form(&sp, limits)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Equality of ideals, comparing reduced bases.
    pub fn same_ideal(&self, other: &IdealBasis) -> bool {
        self.reduced && other.reduced && self.order == other.order && self.gens == other.gens
    }
}

/// Reduced Gröbner basis for a global order.
pub fn groebner(gens: &[Poly], order: MonOrder, limits: &Limits) -> Result<IdealBasis> {
    let ring = match gens.first() {
        Some(g) => g.ring().clone(),
        None => return Err(Error::Input("groebner needs at least one generator".into())),
    };
    groebner_in(&ring, gens, order, limits)
}

pub(crate) fn groebner_in(ring: &PolyRing, gens: &[Poly], order: MonOrder, limits: &Limits) -> Result<IdealBasis> {
    if order.is_local() {
        return Err(Error::Precondition("Buchberger's algorithm needs a global order".into()));
    }
    if gens.iter().any(|g| g.ring() != ring) {
        return Err(Error::RingMismatch);
    }
    let field = ring.field().clone();
    let mut budget = Budget::new(limits);
    let mut ps = PairSet::new(order);

    let mut inputs: Vec<Terms> = gens.iter().filter(|g| !g.is_zero()).map(|g| to_order(g, order)).collect();
    // Insert in increasing leading monomial so early pairs are cheap.
    inputs.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    for t in inputs {
        let sugar = degree_of(&t);
        let refs = ps.active_polys();
        let mut h = reduce_full(order, &field, t, &refs, &mut budget)?;
        if h.is_empty() {
            continue;
        }
        make_monic(&field, &mut h);
        if mono_deg(&h[0].0) == 0 {
            return Ok(IdealBasis::from_internal(ring, order, vec![h], true));
        }
        ps.insert(h, sugar);
    }

    while let Some((s, sugar)) = ps.next_spoly(&field) {
        let refs = ps.active_polys();
        let mut h = reduce_full(order, &field, s, &refs, &mut budget)?;
        if h.is_empty() {
            continue;
        }
        make_monic(&field, &mut h);
        if mono_deg(&h[0].0) == 0 {
            return Ok(IdealBasis::from_internal(ring, order, vec![h], true));
        }
        ps.insert(h, sugar);
    }

    // Interreduce the minimal basis.
    let minimal: Vec<Terms> = ps.active_polys().into_iter().cloned().collect();
    let mut reduced = Vec::with_capacity(minimal.len());
    for (k, g) in minimal.iter().enumerate() {
        let others: Vec<&Terms> = minimal.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, t)| t).collect();
        let tail = reduce_full(order, &field, g[1..].to_vec(), &others, &mut budget)?;
        let mut t = vec![g[0].clone()];
        t.extend(tail);
        reduced.push(t);
    }
    reduced.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    let basis = IdealBasis::from_internal(ring, order, reduced, true);
    if limits.verify && !basis.check_spolys(&Limits { verify: false, ..*limits })? {
        return Err(Error::Internal("Gröbner basis failed the S-polynomial check".into()));
    }
    Ok(basis)
}

/// Number of standard monomials; infinite when some variable has no pure
/// power among the leading monomials.
pub fn quotient_dim(basis: &IdealBasis) -> Dim {
    let leads = basis.leading_monomials();
    let n = basis.ring().nvars();
    if basis.is_unit() {
        return Dim::Finite(0);
    }
    let mut bounds = vec![u32::MAX; n];
    for m in &leads {
        let support: Vec<usize> = (0..n).filter(|&i| m[i] > 0).collect();
        if support.len() == 1 {
            let i = support[0];
            bounds[i] = bounds[i].min(m[i]);
        }
    }
    if bounds.contains(&u32::MAX) {
        return Dim::Infinite;
    }
    // Depth-first walk through the box, pruning at divisible monomials
    // (divisibility is monotone along each coordinate).
    fn walk(i: usize, cur: &mut Mono, bounds: &[u32], leads: &[Mono]) -> u64 {
        if i == bounds.len() {
            return 1;
        }
        let mut total = 0;
        for e in 0..bounds[i] {
            cur[i] = e;
            if leads.iter().any(|l| (0..=i).all(|k| l[k] <= cur[k]) && l[i + 1..].iter().all(|&x| x == 0)) {
                break;
            }
            total += walk(i + 1, cur, bounds, leads);
        }
        cur[i] = 0;
        total
    }
    let mut cur: Mono = smallvec::SmallVec::from_elem(0, n);
    Dim::Finite(walk(0, &mut cur, &bounds, &leads))
}

/// Krull dimension from the leading-term ideal; −1 for the unit ideal.
pub fn krull_dim(basis: &IdealBasis) -> i64 {
    if basis.is_unit() {
        return -1;
    }
    let leads = basis.leading_monomials();
    let n = basis.ring().nvars();
    let mut best = 0;
    for mask in 0u64..(1u64 << n) {
        let size = mask.count_ones() as i64;
        if size <= best {
            continue;
        }
        let inside = |m: &Mono| (0..n).all(|i| m[i] == 0 || mask & (1 << i) != 0);
        if !leads.iter().any(inside) {
            best = size;
        }
    }
    best
}

/// Eliminate the variables `drop`; returns the reduced Gröbner basis (in
/// degrevlex) of the elimination ideal in the ring of remaining variables.
pub fn eliminate(gens: &[Poly], drop: &[usize], limits: &Limits) -> Result<IdealBasis> {
    let ring = gens.first().map(|g| g.ring().clone()).ok_or_else(|| Error::Input("nothing to eliminate".into()))?;
    let n = ring.nvars();
    if drop.iter().any(|&i| i >= n) {
        return Err(Error::Input("elimination variable out of range".into()));
    }
    let vars = ring.vars();
    let keep: Vec<usize> = (0..n).filter(|i| !drop.contains(i)).collect();
    if keep.is_empty() {
        return Err(Error::Input("cannot eliminate every variable".into()));
    }
    let mut dropped: Vec<usize> = drop.to_vec();
    dropped.sort_unstable();
    dropped.dedup();
    let big = ring.derive(dropped.iter().chain(&keep).map(|&i| vars[i].clone()))?;
    let small = ring.derive(keep.iter().map(|&i| vars[i].clone()))?;
    let moved: Vec<Poly> = gens.iter().map(|g| g.map_into(&big)).collect::<Result<_>>()?;
    let gb = groebner_in(&big, &moved, MonOrder::BlockElim(dropped.len()), limits)?;
    let k = dropped.len();
    let kept: Vec<Terms> = gb
        .internal
        .iter()
        .filter(|t| t.iter().all(|(m, _)| m[..k].iter().all(|&e| e == 0)))
        .map(|t| {
            let mut out: Terms = t.iter().map(|(m, c)| (m[k..].iter().copied().collect(), c.clone())).collect();
            out.sort_by(|a, b| MonOrder::DegRevLex.cmp(&b.0, &a.0));
            out
        })
        .collect();
    let mut kept = kept;
    kept.sort_by(|a, b| MonOrder::DegRevLex.cmp(&a[0].0, &b[0].0));
    Ok(IdealBasis::from_internal(&small, MonOrder::DegRevLex, kept, true))
}

/// Squarefreeness of a polynomial: the singular locus of V(f) has
/// codimension at least two, i.e. ⟨f, ∂f⟩ has Krull dimension below n−1.
pub fn is_squarefree(f: &Poly, limits: &Limits) -> Result<bool> {
    if f.is_zero() {
        return Ok(false);
    }
    if f.is_constant() {
        return Ok(true);
    }
    let ring = f.ring();
    let n = ring.nvars();
    let mut gens = vec![f.clone()];
    gens.extend(f.jacobian(&(0..n).collect::<Vec<_>>()).into_iter().filter(|p| !p.is_zero()));
    let gb = groebner_in(ring, &gens, MonOrder::DegRevLex, limits)?;
    Ok(krull_dim(&gb) < n as i64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CycloField;
    use crate::poly::Role;

    fn ring(names: &[&str]) -> PolyRing {
        PolyRing::new(&CycloField::new(1).unwrap(), names.iter().map(|n| (*n, Role::Space))).unwrap()
    }

    fn polys(r: &PolyRing, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|t| r.parse(t).unwrap()).collect()
    }

    #[test]
    fn linear_system_in_lex() {
        let r = ring(&["x", "y"]);
        let gb = groebner(&polys(&r, &["x-y", "y-1"]), MonOrder::Lex, &Limits::default()).unwrap();
        assert_eq!(gb.gens(), polys(&r, &["y-1", "x-1"]).as_slice());
    }

    #[test]
    fn leading_ideal_of_two_quadrics() {
        let r = ring(&["x", "y"]);
        let gb = groebner(&polys(&r, &["x^2+y^2", "x*y"]), MonOrder::DegRevLex, &Limits::default()).unwrap();
        let mut leads: Vec<Vec<u32>> = gb.leading_monomials().iter().map(|m| m.to_vec()).collect();
        leads.sort();
        assert_eq!(leads, vec![vec![0, 3], vec![1, 1], vec![2, 0]]);
        assert!(gb.check_spolys(&Limits::default()).unwrap());
        assert_eq!(quotient_dim(&gb), Dim::Finite(4));
        assert_eq!(krull_dim(&gb), 0);
    }

    #[test]
    fn unit_and_principal_ideals() {
        let r = ring(&["x", "y", "z"]);
        let gb = groebner(&polys(&r, &["1"]), MonOrder::DegRevLex, &Limits::default()).unwrap();
        assert_eq!(gb.gens(), &[r.one()]);
        assert_eq!(krull_dim(&gb), -1);
        assert_eq!(quotient_dim(&gb), Dim::Finite(0));
        let gb = groebner(&polys(&r, &["x"]), MonOrder::DegRevLex, &Limits::default()).unwrap();
        assert_eq!(krull_dim(&gb), 2);
        assert_eq!(quotient_dim(&gb), Dim::Infinite);
        let r2 = ring(&["x", "y"]);
        let gb = groebner(&polys(&r2, &["x", "y"]), MonOrder::DegRevLex, &Limits::default()).unwrap();
        assert_eq!(quotient_dim(&gb), Dim::Finite(1));
    }

    #[test]
    fn twisted_cubic_implicitization() {
        let r = ring(&["u", "X", "Y"]);
        let el = eliminate(&polys(&r, &["X-u^2", "Y-u^3"]), &[0], &Limits::default()).unwrap();
        assert_eq!(el.gens().len(), 1);
        let small = el.ring().clone();
        assert!(el.gens()[0].is_proportional(&small.parse("X^3-Y^2").unwrap()));

        let el = eliminate(&polys(&r, &["u-1"]), &[0], &Limits::default()).unwrap();
        assert!(el.is_zero_ideal());
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let r = ring(&["x", "y", "z"]);
        let tiny = Limits::with_budget(3);
        let res = groebner(&polys(&r, &["x+y+z", "x*y+y*z+z*x", "x*y*z-1"]), MonOrder::DegRevLex, &tiny);
        assert!(matches!(res, Err(Error::Resource { budget: 3 })));
    }

    #[test]
    fn squarefree_detection() {
        let r = ring(&["x", "y"]);
        let l = Limits::default();
        assert!(!is_squarefree(&r.parse("(x+y)^2").unwrap(), &l).unwrap());
        assert!(is_squarefree(&r.parse("x^2-y^3").unwrap(), &l).unwrap());
        assert!(!is_squarefree(&r.parse("(x^2-y^3)^2*y").unwrap(), &l).unwrap());
    }
}
