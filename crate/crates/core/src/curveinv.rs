//! Local invariants of plane curve germs at the origin and the branch matrix
//! report for reflection mappings from surfaces into 3-space.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{is_squarefree, quotient_dim, standard_basis, Dim, Limits, Poly, PolyRing, Role};
use crate::refmap::ReflMapping;

/// A germ of plane curve `poly = 0` at the origin of a two-variable ring.
#[derive(Clone, Debug)]
pub struct LocalCurve {
    pub poly: Poly,
    /// Order of vanishing at the origin; `None` when the germ is empty.
    pub mult: Option<u32>,
    pub tangent_cone: Poly,
}

impl LocalCurve {
    pub fn new(poly: Poly) -> Result<LocalCurve> {
        if poly.ring().nvars() != 2 {
            return Err(Error::Precondition(format!("plane curves need 2 variables, found {}", poly.ring().nvars())));
        }
        let empty = !poly.constant_term().is_zero();
        let mult = if empty { None } else { poly.order_at_origin() };
        let tangent_cone = poly.lowest_form();
        Ok(LocalCurve { poly, mult, tangent_cone })
    }

    /// The germ does not pass through the origin.
    pub fn is_empty(&self) -> bool {
        !self.poly.is_zero() && self.mult.is_none()
    }
}

/// How a branch count was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountTier {
    Empty,
    Smooth,
    TangentCone,
    Newton,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchCount {
    Known { count: u64, tier: CountTier },
    Unknown { reason: String },
}

impl BranchCount {
    pub fn value(&self) -> Option<u64> {
        match self {
            BranchCount::Known { count, .. } => Some(*count),
            BranchCount::Unknown { .. } => None,
        }
    }
}

fn local_dim(gens: Vec<Poly>, limits: &Limits) -> Result<Dim> {
    let ring = gens[0].ring().clone();
    let gens: Vec<Poly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    if gens.is_empty() {
        return Ok(Dim::Infinite);
    }
    Ok(quotient_dim(&standard_basis(&ring, &gens, limits)?))
}

/// Milnor number: local colength of the Jacobian ideal.
pub fn milnor(c: &LocalCurve, limits: &Limits) -> Result<Dim> {
    if c.is_empty() {
        return Ok(Dim::Finite(0));
    }
    if c.poly.is_zero() {
        return Ok(Dim::Infinite);
    }
    local_dim(c.poly.jacobian(&[0, 1]), limits)
}

/// Local intersection multiplicity `dim O/⟨a, b⟩`.
pub fn intersection_number(a: &LocalCurve, b: &LocalCurve, limits: &Limits) -> Result<Dim> {
    if a.is_empty() || b.is_empty() {
        return Ok(Dim::Finite(0));
    }
    local_dim(vec![a.poly.clone(), b.poly.clone()], limits)
}

fn univariate_squarefree(field: &crate::CycloField, coeffs: &[crate::Coeff], limits: &Limits) -> Result<bool> {
    let ring = PolyRing::new(field, [("s", Role::Source)])?;
    let p = Poly::from_terms(&ring, coeffs.iter().enumerate().map(|(i, c)| (smallvec::smallvec![i as u32], c.clone())));
    if p.total_degree().unwrap_or(0) == 0 {
        return Ok(true);
    }
    is_squarefree(&p, limits)
}

/// Compact edges of the Newton polygon, as chains of exponent points
/// from the y-axis to the x-axis.
fn newton_edges(points: &[(u32, u32)]) -> Vec<((i64, i64), (i64, i64))> {
    let m = points.iter().filter(|p| p.1 == 0).map(|p| p.0).min().expect("touches x-axis") as i64;
    let k = points.iter().filter(|p| p.0 == 0).map(|p| p.1).min().expect("touches y-axis") as i64;
    let mut pts: Vec<(i64, i64)> = points.iter().map(|&(i, j)| (i as i64, j as i64)).filter(|&(i, j)| i <= m && j <= k).collect();
    pts.sort();
    pts.dedup_by_key(|p| p.0);
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Number of local branches, by the first tier that applies: smooth germ,
/// reduced tangent cone, or non-degenerate Newton polygon.
pub fn branch_count(c: &LocalCurve, limits: &Limits) -> Result<BranchCount> {
    let Some(mult) = c.mult else {
        return Ok(if c.is_empty() {
            BranchCount::Known { count: 0, tier: CountTier::Empty }
        } else {
            BranchCount::Unknown { reason: "zero polynomial".into() }
        });
    };
    if mult == 1 {
        return Ok(BranchCount::Known { count: 1, tier: CountTier::Smooth });
    }
    if is_squarefree(&c.tangent_cone, limits)? {
        return Ok(BranchCount::Known { count: mult as u64, tier: CountTier::TangentCone });
    }
    let ring = c.poly.ring();
    let a = c.poly.var_multiplicity(0);
    let b = c.poly.var_multiplicity(1);
    if a > 1 || b > 1 {
        return Ok(BranchCount::Unknown { reason: "repeated coordinate axis component".into() });
    }
    let rest = c.poly.div_mono(&smallvec::smallvec![a, b]);
    let mut count = (a + b) as u64;
    if rest.constant_term().is_zero() {
        let points: Vec<(u32, u32)> = rest.terms().iter().map(|(m, _)| (m[0], m[1])).collect();
        let coeff_at = |i: i64, j: i64| -> crate::Coeff {
            rest.terms()
                .iter()
                .find(|(m, _)| m[0] as i64 == i && m[1] as i64 == j)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(crate::Coeff::zero)
        };
        for (p, q) in newton_edges(&points) {
            let (di, dj) = (q.0 - p.0, q.1 - p.1);
            let len = num_integer::gcd(di, dj);
            let edge: Vec<crate::Coeff> = (0..=len).map(|t| coeff_at(p.0 + t * di / len, p.1 + t * dj / len)).collect();
            if !univariate_squarefree(ring.field(), &edge, limits)? {
                return Ok(BranchCount::Unknown { reason: "degenerate Newton polygon edge".into() });
            }
            count += len as u64;
        }
    }
    Ok(BranchCount::Known { count, tier: CountTier::Newton })
}

/// δ from Hironaka's relation `μ = 2δ − r + 1`.
pub fn delta(mu: u64, r: u64) -> Result<u64> {
    let twice = mu + r;
    if twice == 0 || !(twice - 1).is_multiple_of(2) {
        return Err(Error::Internal(format!("μ = {mu} and r = {r} give a non-integral δ")));
    }
    Ok((twice - 1) / 2)
}

/// An aggregate that may fail to exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregate {
    Value(i64),
    Unknown,
    NotFinite,
}

impl Aggregate {
    pub fn value(self) -> Option<i64> {
        match self {
            Aggregate::Value(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Aggregate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Aggregate::Value(v) => write!(f, "{v}"),
            Aggregate::Unknown => write!(f, "unknown"),
            Aggregate::NotFinite => write!(f, "not A-finite"),
        }
    }
}

/// Ordering of the branches in a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ordering {
    /// Reflections first, then the other elements.
    #[default]
    ReflectionsFirst,
    /// Group table order.
    Table,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub group_order: usize,
    /// Group element indices, identity excluded.
    pub ordering: Vec<usize>,
    #[serde(rename = "M")]
    pub m: Vec<i64>,
    /// `None` where the branch count is unknown.
    #[serde(rename = "Delta")]
    pub delta: Vec<Option<i64>>,
    #[serde(rename = "I")]
    pub i: Vec<Vec<i64>>,
    pub branch_counts: Vec<BranchCount>,
    pub k: usize,
    pub mu_total: Aggregate,
    pub delta_total: Aggregate,
    pub branch_total: Aggregate,
    pub finite: bool,
}

fn encode(d: Dim) -> i64 {
    match d {
        Dim::Finite(v) => v as i64,
        Dim::Infinite => -1,
    }
}

/// Build the M/Δ/I report for a surface reflection mapping with a chart.
pub fn full_report(f: &ReflMapping, ordering: Ordering) -> Result<InvariantReport> {
    let chart = f.chart().ok_or_else(|| Error::Precondition("the invariant report needs a chart".into()))?;
    if f.group().dim() != 3 || !f.is_hypersurface() || chart.source.nvars() != 2 {
        return Err(Error::Precondition("the invariant report needs a surface in 3-space".into()));
    }
    if !f.smooth_at_origin()? {
        return Err(Error::Precondition("the submanifold is not smooth at the origin".into()));
    }
    let limits = *f.limits();
    let order: Vec<usize> = match ordering {
        Ordering::ReflectionsFirst => f.group().report_ordering().into_iter().filter(|&s| s != 0).collect(),
        Ordering::Table => (1..f.group().order()).collect(),
    };
    let curves: Vec<LocalCurve> = order
        .par_iter()
        .map(|&s| {
            let b = f.branch_lambda(s)?;
            LocalCurve::new(b.pulled_back.expect("chart present"))
        })
        .collect::<Result<_>>()?;

    struct Local {
        mu: Dim,
        count: BranchCount,
    }
    let locals: Vec<Local> = curves
        .par_iter()
        .map(|c| {
            let mu = milnor(c, &limits)?;
            let count = match mu {
                Dim::Finite(_) => branch_count(c, &limits)?,
                Dim::Infinite => BranchCount::Unknown { reason: "non-reduced".into() },
            };
            Ok(Local { mu, count })
        })
        .collect::<Result<_>>()?;

    let n = curves.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let inter: Vec<Dim> = pairs.par_iter().map(|&(a, b)| intersection_number(&curves[a], &curves[b], &limits)).collect::<Result<_>>()?;

    let mut i = vec![vec![0i64; n]; n];
    for (a, c) in curves.iter().enumerate() {
        i[a][a] = c.is_empty() as i64;
    }
    for (&(a, b), d) in pairs.iter().zip(&inter) {
        i[a][b] = encode(*d);
        i[b][a] = encode(*d);
    }
    let mut m = Vec::with_capacity(n);
    let mut dl = Vec::with_capacity(n);
    for (c, l) in curves.iter().zip(&locals) {
        if c.is_empty() {
            m.push(0);
            dl.push(Some(0));
            continue;
        }
        match l.mu {
            Dim::Infinite => {
                m.push(-1);
                dl.push(Some(-1));
            }
            Dim::Finite(mu) => {
                m.push(mu as i64);
                dl.push(match l.count.value() {
                    Some(r) => Some(delta(mu, r)? as i64),
                    None => None,
                });
            }
        }
    }

    // D_σ and D_{σ⁻¹} are isomorphic
    for (a, &s) in order.iter().enumerate() {
        let inv = f.group().elem(s).inverse_index;
        let b = order.iter().position(|&t| t == inv).expect("inverse in ordering");
        if m[a] != m[b] || (dl[a].is_some() && dl[b].is_some() && dl[a] != dl[b]) {
            return Err(Error::Internal(format!("branches {s} and {inv} have different invariants")));
        }
    }

    let k = curves.iter().filter(|c| c.is_empty()).count();
    let w = f.group().order() as i64;
    let finite = !m.contains(&-1) && !i.iter().flatten().any(|&v| v == -1);
    let (mu_total, delta_total, branch_total) = if !finite {
        (Aggregate::NotFinite, Aggregate::NotFinite, Aggregate::NotFinite)
    } else {
        let sum_i: i64 = i.iter().flatten().sum();
        let mu_total = Aggregate::Value(m.iter().sum::<i64>() + sum_i - w + 2);
        if dl.iter().all(Option::is_some) {
            let d: Vec<i64> = dl.iter().map(|x| x.unwrap()).collect();
            let upper: i64 = pairs.iter().map(|&(a, b)| i[a][b]).sum();
            let dt = d.iter().sum::<i64>() + upper;
            let bt: i64 = (0..n).map(|a| 2 * d[a] - m[a] - i[a][a]).sum::<i64>() + w - 1;
            (mu_total, Aggregate::Value(dt), Aggregate::Value(bt))
        } else {
            (mu_total, Aggregate::Unknown, Aggregate::Unknown)
        }
    };
    Ok(InvariantReport {
        group_order: f.group().order(),
        ordering: order,
        m,
        delta: dl,
        i,
        branch_counts: locals.into_iter().map(|l| l.count).collect(),
        k,
        mu_total,
        delta_total,
        branch_total,
        finite,
    })
}

/// Milnor number of the whole double point curve ∏λ_σ pulled back, computed
/// directly rather than from the matrix.
pub fn direct_mu(f: &ReflMapping) -> Result<Dim> {
    let branches = f.branches()?;
    let chart = f.chart().ok_or_else(|| Error::Precondition("needs a chart".into()))?;
    let mut prod = chart.source.one();
    for b in &branches {
        prod = prod.mul(b.pulled_back.as_ref().expect("chart present"));
    }
    milnor(&LocalCurve::new(prod)?, f.limits())
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cell = |v: Option<i64>| v.map_or_else(|| "?".to_string(), |x| x.to_string());
        let width = self
            .i
            .iter()
            .flatten()
            .copied()
            .chain(self.m.iter().copied())
            .chain(self.delta.iter().flatten().copied())
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1)
            .max(1);
        let row = |vals: Vec<String>| vals.iter().map(|s| format!("{s:>width$}")).collect::<Vec<_>>().join(" ");
        writeln!(f, "ordering: {}", self.ordering.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "))?;
        writeln!(f, "M     = ({})", row(self.m.iter().map(|v| v.to_string()).collect()))?;
        writeln!(f, "Delta = ({})", row(self.delta.iter().map(|v| cell(*v)).collect()))?;
        writeln!(f, "I =")?;
        for r in &self.i {
            writeln!(f, "  [{}]", row(r.iter().map(|v| v.to_string()).collect()))?;
        }
        let counts: Vec<String> = self.branch_counts.iter().map(|c| cell(c.value().map(|v| v as i64))).collect();
        writeln!(f, "branches per element: ({})", counts.join(" "))?;
        writeln!(f, "empty branches: {}", self.k)?;
        writeln!(f, "mu = {}", self.mu_total)?;
        writeln!(f, "delta = {}", self.delta_total)?;
        writeln!(f, "branch count = {}", self.branch_total)?;
        write!(f, "A-finite: {}", if self.finite { "yes" } else { "no" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CycloField;

    fn curve(s: &str) -> LocalCurve {
        let ring = PolyRing::new(&CycloField::new(1).unwrap(), [("x", Role::Source), ("y", Role::Source)]).unwrap();
        LocalCurve::new(ring.parse(s).unwrap()).unwrap()
    }

    fn known(c: &LocalCurve) -> u64 {
        branch_count(c, &Limits::default()).unwrap().value().unwrap()
    }

    #[test]
    fn milnor_numbers() {
        let l = Limits::default();
        assert_eq!(milnor(&curve("x+3*y"), &l).unwrap(), Dim::Finite(0));
        assert_eq!(milnor(&curve("x^2-y^3"), &l).unwrap(), Dim::Finite(2));
        assert_eq!(milnor(&curve("4*(x^3+4*x^2*y-x*y^2-y^3)"), &l).unwrap(), Dim::Finite(4));
        assert_eq!(milnor(&curve("x^2"), &l).unwrap(), Dim::Infinite);
        assert_eq!(milnor(&curve("1+x"), &l).unwrap(), Dim::Finite(0));
    }

    #[test]
    fn intersections() {
        let l = Limits::default();
        assert_eq!(intersection_number(&curve("x+3*y"), &curve("4*x+2*y"), &l).unwrap(), Dim::Finite(1));
        assert_eq!(intersection_number(&curve("x"), &curve("x"), &l).unwrap(), Dim::Infinite);
        assert_eq!(intersection_number(&curve("y-x^2"), &curve("y"), &l).unwrap(), Dim::Finite(2));
    }

    #[test]
    fn branch_tiers() {
        assert_eq!(known(&curve("x+3*y")), 1);
        assert_eq!(known(&curve("x^3+4*x^2*y-x*y^2-y^3")), 3);
        assert_eq!(known(&curve("4*x^3+6*x^2*y+3*x^2-10*x*y^2+6*x*y-3*y^2")), 2);
        // cusp and tacnode need the Newton polygon
        assert_eq!(known(&curve("x^2-y^3")), 1);
        assert_eq!(known(&curve("y^2-x^4")), 2);
        assert_eq!(known(&curve("x*(y^2-x^3)")), 2);
        let deg = branch_count(&curve("(y-x^2)^2-x^5"), &Limits::default()).unwrap();
        assert!(matches!(deg, BranchCount::Unknown { .. }));
    }

    #[test]
    fn hironaka_delta() {
        assert_eq!(delta(4, 3).unwrap(), 3);
        assert_eq!(delta(1, 2).unwrap(), 1);
        assert_eq!(delta(0, 1).unwrap(), 0);
        assert!(delta(2, 2).is_err());
    }

    #[test]
    fn newton_polygon_edges() {
        // (1,2), (3,1), (5,0) are collinear and form a single edge
        let e = newton_edges(&[(0, 4), (1, 2), (3, 1), (5, 0), (2, 2)]);
        assert_eq!(e, vec![((0, 4), (1, 2)), ((1, 2), (5, 0))]);
        let e = newton_edges(&[(0, 5), (1, 2), (3, 1), (6, 0)]);
        assert_eq!(e, vec![((0, 5), (1, 2)), ((1, 2), (3, 1)), ((3, 1), (6, 0))]);
    }
}
