//! Mora's tangent cone algorithm for the local order at the origin.

use super::groebner::{from_order, make_monic, sub_mul, to_order, Budget, IdealBasis, Limits, PairSet, Terms};
use super::{mono_deg, mono_div, mono_divides, MonOrder, Poly, PolyRing};
use crate::cyclotomic::CycloField;
use crate::error::{Error, Result};

const LOCAL: MonOrder = MonOrder::LocalNegDegRevLex;

fn ecart(t: &Terms) -> u32 {
    let top = t.iter().map(|(m, _)| mono_deg(m)).max().unwrap_or(0);
    top - mono_deg(&t[0].0)
}

/// Weak normal form: reduce until the leading monomial is not divisible by
/// any leading monomial of `basis`.  Reducers are picked by minimal ecart;
/// intermediate results with smaller ecart join the reducer set.
fn nf_mora(field: &CycloField, h: Terms, basis: &[&Terms], budget: &mut Budget) -> Result<Terms> {
    let mut t_set: Vec<(Terms, u32)> = basis.iter().map(|g| ((*g).clone(), ecart(g))).collect();
    let mut h = h;
    while !h.is_empty() {
        let lm = h[0].0.clone();
        let pick = t_set
            .iter()
            .enumerate()
            .filter(|(_, (g, _))| mono_divides(&g[0].0, &lm))
            .min_by_key(|(i, (_, e))| (*e, *i))
            .map(|(i, _)| i);
        let Some(gi) = pick else { break };
        budget.tick()?;
        let eh = ecart(&h);
        let (g, eg) = (&t_set[gi].0, t_set[gi].1);
        let m = mono_div(&lm, &g[0].0);
        let c = field.div(&h[0].1, &g[0].1)?;
        let next = sub_mul(LOCAL, field, &h[1..], &c, &m, &g[1..]);
        if eg > eh {
            t_set.push((h, eh));
        }
        h = next;
    }
    Ok(h)
}

/// Mora normal form of `p` with respect to `gens` in the local order.
pub fn mora_normal_form(p: &Poly, gens: &[Poly], limits: &Limits) -> Result<Poly> {
    let ring = p.ring();
    if gens.iter().any(|g| g.ring() != ring) {
        return Err(Error::RingMismatch);
    }
    let field = ring.field();
    let basis: Vec<Terms> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let mut t = to_order(g, LOCAL);
            make_monic(field, &mut t);
            t
        })
        .collect();
    let refs: Vec<&Terms> = basis.iter().collect();
    let mut budget = Budget::new(limits);
    let h = nf_mora(field, to_order(p, LOCAL), &refs, &mut budget)?;
    Ok(from_order(ring, h))
}

/// Standard basis of the ideal generated by `gens` in the local ring at the
/// origin (local negative degree reverse lexicographic order).
pub fn standard_basis(ring: &PolyRing, gens: &[Poly], limits: &Limits) -> Result<IdealBasis> {
    if gens.iter().any(|g| g.ring() != ring) {
        return Err(Error::RingMismatch);
    }
    let field = ring.field().clone();
    let mut budget = Budget::new(limits);
    let mut ps = PairSet::new(LOCAL);
    let unit = |h: Terms| IdealBasis::from_internal(ring, LOCAL, vec![h], false);

    let mut inputs: Vec<Terms> = gens.iter().filter(|g| !g.is_zero()).map(|g| to_order(g, LOCAL)).collect();
    inputs.sort_by(|a, b| LOCAL.cmp(&b[0].0, &a[0].0));
    for t in inputs {
        let sugar = t.iter().map(|(m, _)| mono_deg(m)).max().unwrap_or(0);
        let refs = ps.active_polys();
        let mut h = nf_mora(&field, t, &refs, &mut budget)?;
        if h.is_empty() {
            continue;
        }
        make_monic(&field, &mut h);
        if mono_deg(&h[0].0) == 0 {
            return Ok(unit(h));
        }
        ps.insert(h, sugar);
    }
    while let Some((s, sugar)) = ps.next_spoly(&field) {
        let refs = ps.active_polys();
        let mut h = nf_mora(&field, s, &refs, &mut budget)?;
        if h.is_empty() {
            continue;
        }
        make_monic(&field, &mut h);
        if mono_deg(&h[0].0) == 0 {
            return Ok(unit(h));
        }
        ps.insert(h, sugar);
    }
    let mut basis: Vec<Terms> = ps.active_polys().into_iter().cloned().collect();
    basis.sort_by(|a, b| LOCAL.cmp(&b[0].0, &a[0].0));
    Ok(IdealBasis::from_internal(ring, LOCAL, basis, false))
}
