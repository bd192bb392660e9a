//! Reflection mappings `f = ω|_𝒴`: stabilizers, degree, image equation,
//! double point branches and the blow-up charts of their K₂ components.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{linear_form, verify_orbit_map, GroupElem, OrbitCheck, OrbitMap, ReflGroup};
use crate::linalg::Matrix;
use crate::poly::{eliminate, groebner, is_squarefree, krull_dim, minors, IdealBasis, Limits, MonOrder, Poly, PolyRing, Role};

/// A parametrization of 𝒴: one polynomial in the source variables for each
/// ambient variable.
#[derive(Clone, Debug)]
pub struct Chart {
    pub source: PolyRing,
    pub images: Vec<Poly>,
}

impl Chart {
    pub fn pull_back(&self, p: &Poly) -> Result<Poly> {
        p.substitute(&self.source, &self.images)
    }
}

/// The full problem instance.
#[derive(Clone, Debug)]
pub struct ReflMapping {
    group: ReflGroup,
    omega: OrbitMap,
    ambient: PolyRing,
    target: PolyRing,
    equations: Vec<Poly>,
    chart: Option<Chart>,
    limits: Limits,
}

/// Reflection or not, as far as the branch formulas are concerned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchKind {
    Reflection,
    NonReflection,
}

/// Equations of the double point branch attached to one group element.
#[derive(Clone, Debug)]
pub struct BranchIdeal {
    pub sigma: usize,
    pub kind: BranchKind,
    /// λ_σ in the ambient ring (hypersurface case only).
    pub lambda: Option<Poly>,
    /// Generators of the branch ideal in the ambient ring (including 𝒴's equations).
    pub generators: Vec<Poly>,
    /// λ_σ pulled back through the chart, when there is one.
    pub pulled_back: Option<Poly>,
    /// Pulled-back λ_σ is a unit at the origin.
    pub empty_local: Option<bool>,
    /// The branch ideal is the unit ideal.
    pub empty_global: bool,
    /// Krull dimension of the branch ideal (−1 if empty).
    pub dim: i64,
}

/// Result of the image computation.
#[derive(Clone, Debug)]
pub struct ImageEquation {
    /// Normalized generator in the target ring.
    pub g: Poly,
    /// ∏_{σ∈W} σL in the ambient ring.
    pub product: Poly,
}

/// One affine chart `v_j = 1` of the blow-up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K2Chart {
    pub chart: usize,
    pub empty: bool,
    pub dim: i64,
    /// Dimension of the closure of the part off the exceptional divisor.
    pub off_exceptional_dim: i64,
    /// Dimension of the components lying on the exceptional divisor, if any.
    pub exceptional_dim: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K2Report {
    pub charts: Vec<K2Chart>,
}

impl K2Report {
    pub fn empty(&self) -> bool {
        self.charts.iter().all(|c| c.empty)
    }

    pub fn dim(&self) -> i64 {
        self.charts.iter().map(|c| c.dim).max().unwrap_or(-1)
    }

    pub fn off_exceptional_dim(&self) -> i64 {
        self.charts.iter().map(|c| c.off_exceptional_dim).max().unwrap_or(-1)
    }

    pub fn exceptional_dim(&self) -> Option<i64> {
        self.charts.iter().filter_map(|c| c.exceptional_dim).max()
    }
}

fn fresh_name(ring: &PolyRing, base: &str, taken: &[String]) -> String {
    let mut name = base.to_string();
    while ring.index(&name).is_some() || taken.contains(&name) {
        name.push('_');
    }
    name
}

fn is_unit_ideal(gens: &[Poly], limits: &Limits) -> Result<bool> {
    let nonzero: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Ok(false);
    }
    Ok(groebner(&nonzero, MonOrder::DegRevLex, limits)?.is_unit())
}

fn basis_of(ring: &PolyRing, gens: &[Poly], limits: &Limits) -> Result<IdealBasis> {
    let mut nonzero: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        nonzero.push(ring.zero());
    }
    groebner(&nonzero, MonOrder::DegRevLex, limits)
}

fn dim_of(ring: &PolyRing, gens: &[Poly], limits: &Limits) -> Result<i64> {
    if gens.iter().all(Poly::is_zero) {
        return Ok(ring.nvars() as i64);
    }
    Ok(krull_dim(&basis_of(ring, gens, limits)?))
}

/// `α` with `L(σu) − L(u) = α(u)·ℓ_σ(u)` for each equation (rows) and each
/// hyperplane form (columns).
pub fn alpha_sigma(equations: &[Poly], sigma: &GroupElem, space_vars: &[usize]) -> Result<Vec<Vec<Poly>>> {
    if sigma.is_identity() {
        return Err(Error::Precondition("α is undefined for the identity".into()));
    }
    let ring = equations.first().ok_or_else(|| Error::Input("no equations".into()))?.ring().clone();
    let field = ring.field();
    let p = space_vars.len();
    let rows = sigma.ell_rows();
    let k = rows.len();

    // y = T u with the hyperplane forms first, completed by unit vectors.
    let pivots: Vec<usize> = rows.iter().map(|r| r.iter().position(|c| !c.is_zero()).expect("nonzero row")).collect();
    let mut t_rows = rows.clone();
    for c in 0..p {
        if !pivots.contains(&c) {
            let mut e = vec![crate::Coeff::zero(); p];
            e[c] = crate::Coeff::one();
            t_rows.push(e);
        }
    }
    let t = Matrix::from_rows(t_rows)?;
    let t_inv = t.inverse(field)?;
    let subst = |h: &Poly, m: &Matrix| -> Result<Poly> {
        let mut images: Vec<Poly> = (0..ring.nvars()).map(|i| ring.var(i)).collect();
        for (i, &vi) in space_vars.iter().enumerate() {
            images[vi] = linear_form(&ring, m.row(i), space_vars);
        }
        h.substitute(&ring, &images)
    };

    let mut alpha = Vec::with_capacity(equations.len());
    for l in equations {
        let q = &sigma.pull_on(l, space_vars)? - l;
        // q in y-coordinates: the slot of u_i now holds y_i
        let mut rest = subst(&q, &t_inv)?;
        let mut row = Vec::with_capacity(k);
        for &y in space_vars.iter().take(k) {
            let at_zero = rest.substitute_named(&[(ring.names()[y].as_str(), ring.zero())])?;
            let a = (&rest - &at_zero).exact_divide(&ring.var(y)).map_err(|e| Error::Internal(format!("splitting failed: {e}")))?;
            row.push(subst(&a, &t)?);
            rest = at_zero;
        }
        if !rest.is_zero() {
            return Err(Error::Internal("σ⁻¹L − L does not vanish on Fix σ".into()));
        }
        alpha.push(row);
    }
    // The defining identity, exactly.
    let ell: Vec<Poly> = sigma.ell_at(&ring, space_vars);
    for (l, row) in equations.iter().zip(&alpha) {
        let q = &sigma.pull_on(l, space_vars)? - l;
        let s = row.iter().zip(&ell).fold(ring.zero(), |acc, (a, e)| &acc + &a.mul(e));
        if s != q {
            return Err(Error::Internal("α·ℓ_σ ≠ σ⁻¹L − L".into()));
        }
    }
    Ok(alpha)
}

/// Generators of D₂^σ: the (p−r)-minors of α when r ≥ n, otherwise L(σu).
pub fn dsigma_generators(equations: &[Poly], sigma: &GroupElem, space_vars: &[usize]) -> Result<Vec<Poly>> {
    let ring = equations.first().ok_or_else(|| Error::Input("no equations".into()))?.ring().clone();
    let p = space_vars.len();
    let n = p - equations.len();
    let r = sigma.fix_dim;
    let mut gens = equations.to_vec();
    if r >= n {
        let alpha = alpha_sigma(equations, sigma, space_vars)?;
        gens.extend(minors(&alpha, p - r, &ring)?);
    } else {
        for l in equations {
            gens.push(sigma.pull_on(l, space_vars)?);
        }
    }
    Ok(gens)
}

/// Saturation `I : f^∞` by a Rabinowitsch variable.
fn saturate(ring: &PolyRing, gens: &[Poly], f: &Poly, limits: &Limits) -> Result<Vec<Poly>> {
    let s = fresh_name(ring, "s", &[]);
    let mut vars = vec![(s.clone(), Role::Parameter)];
    vars.extend(ring.vars());
    let big = ring.derive(vars)?;
    let sv = big.var(0);
    let mut g: Vec<Poly> = gens.iter().map(|p| p.map_into(&big)).collect::<Result<_>>()?;
    g.push(&big.one() - &sv.mul(&f.map_into(&big)?));
    let el = eliminate(&g, &[0], limits)?;
    el.gens().iter().map(|p| p.map_into(ring)).collect()
}

/// Radical membership: `f ∈ √I` iff `1 ∈ I + ⟨1 − s f⟩`.
fn in_radical(ring: &PolyRing, gens: &[Poly], f: &Poly, limits: &Limits) -> Result<bool> {
    let s = fresh_name(ring, "s", &[]);
    let mut vars = vec![(s, Role::Parameter)];
    vars.extend(ring.vars());
    let big = ring.derive(vars)?;
    let mut g: Vec<Poly> = gens.iter().map(|p| p.map_into(&big)).collect::<Result<_>>()?;
    g.push(&big.one() - &big.var(0).mul(&f.map_into(&big)?));
    is_unit_ideal(&g, limits)
}

/// Affine charts of K₂^σ inside the blow-up of 𝒱×𝒱 along the diagonal.
pub fn k2sigma_charts(equations: &[Poly], sigma: &GroupElem, space_vars: &[usize], limits: &Limits) -> Result<K2Report> {
    let ring = equations.first().ok_or_else(|| Error::Input("no equations".into()))?.ring().clone();
    let field = ring.field().clone();
    let p = space_vars.len();
    let alpha = alpha_sigma(equations, sigma, space_vars)?;

    let mut taken = Vec::new();
    let mut vnames = Vec::with_capacity(p);
    for i in 1..=p {
        let n = fresh_name(&ring, &format!("v{i}"), &taken);
        taken.push(n.clone());
        vnames.push(n);
    }
    let mut vars = ring.vars();
    vars.extend(vnames.iter().map(|n| (n.clone(), Role::Projective)));
    let big = ring.derive(vars)?;
    let u_vars: Vec<usize> = space_vars.to_vec();
    let v_vars: Vec<usize> = (ring.nvars()..ring.nvars() + p).collect();

    let lift = |q: &Poly| q.map_into(&big);
    let mut base: Vec<Poly> = equations.iter().map(lift).collect::<Result<_>>()?;
    let ell_v = sigma.ell_at(&big, &v_vars);
    for row in &alpha {
        let mut s = big.zero();
        for (a, l) in row.iter().zip(&ell_v) {
            s = &s + &lift(a)?.mul(l);
        }
        base.push(s);
    }
    // v in the image of σ − I: annihilated by the left kernel.
    let diff = sigma.matrix.sub(&Matrix::identity(p));
    for w in diff.transpose().kernel(&field) {
        base.push(linear_form(&big, &w, &v_vars));
    }
    // v parallel to σu − u.
    let moved: Vec<Poly> = (0..p)
        .map(|i| {
            let row: Vec<crate::Coeff> = (0..p).map(|j| diff.get(i, j).clone()).collect();
            linear_form(&big, &row, &u_vars)
        })
        .collect();
    for a in 0..p {
        for b in a + 1..p {
            let m = &big.var(v_vars[a]).mul(&moved[b]) - &big.var(v_vars[b]).mul(&moved[a]);
            if !m.is_zero() {
                base.push(m);
            }
        }
    }
    let exceptional: Vec<Poly> = sigma.ell_at(&big, &u_vars);

    let charts: Vec<Result<K2Chart>> = (0..p)
        .into_par_iter()
        .map(|j| {
            let mut k = base.clone();
            k.push(&big.var(v_vars[j]) - &big.one());
            let kb = basis_of(&big, &k, limits)?;
            if kb.is_unit() {
                return Ok(K2Chart { chart: j + 1, empty: true, dim: -1, off_exceptional_dim: -1, exceptional_dim: None });
            }
            let kgens = kb.gens().to_vec();
            let dim = krull_dim(&kb);
            // Off the exceptional divisor this chart is exactly m_j(u) ≠ 0.
            let off = if moved[j].is_zero() { vec![big.one()] } else { saturate(&big, &kgens, &moved[j], limits)? };
            let off_dim = dim_of(&big, &off, limits)?;
            let mut on_e = kgens.clone();
            on_e.extend(exceptional.iter().cloned());
            let e_dim = dim_of(&big, &on_e, limits)?;
            let exc_dim = if e_dim < 0 {
                None
            } else if e_dim >= off_dim {
                // the closure of the off part meets E in dimension below off_dim
                Some(e_dim)
            } else {
                let mut best: Option<i64> = None;
                for g in &off {
                    if g.is_zero() || in_radical(&big, &on_e, g, limits)? {
                        continue;
                    }
                    let d = dim_of(&big, &saturate(&big, &on_e, g, limits)?, limits)?;
                    best = Some(best.map_or(d, |x: i64| x.max(d)));
                }
                best
            };
            Ok(K2Chart { chart: j + 1, empty: false, dim, off_exceptional_dim: off_dim, exceptional_dim: exc_dim })
        })
        .collect();
    Ok(K2Report { charts: charts.into_iter().collect::<Result<_>>()? })
}

impl ReflMapping {
    /// Assemble and validate a mapping.  `ambient` holds the space variables
    /// of the group (by name) plus any parameters; `target` holds one
    /// variable per orbit map component plus the same parameters.
    pub fn new(
        group: ReflGroup,
        omega: OrbitMap,
        ambient: PolyRing,
        target: PolyRing,
        equations: Vec<Poly>,
        chart: Option<Chart>,
        limits: Limits,
    ) -> Result<ReflMapping> {
        let p = group.dim();
        if equations.is_empty() || equations.len() > p {
            return Err(Error::Input(format!("expected between 1 and {p} equations")));
        }
        if equations.iter().any(|l| *l.ring() != ambient) {
            return Err(Error::RingMismatch);
        }
        group.space_vars_in(&ambient)?;
        if target.with_role(Role::Target).len() != p {
            return Err(Error::Input(format!("expected {p} target variables")));
        }
        if omega.omegas.len() != p {
            return Err(Error::Input(format!("expected {p} orbit map components")));
        }
        if let Some(c) = &chart {
            if c.images.len() != ambient.nvars() {
                return Err(Error::Input("chart must give one image per ambient variable".into()));
            }
            for l in &equations {
                if !c.pull_back(l)?.is_zero() {
                    return Err(Error::Precondition(format!("chart does not parametrize the submanifold: {l} does not vanish")));
                }
            }
        }
        Ok(ReflMapping { group, omega, ambient, target, equations, chart, limits })
    }

    pub fn group(&self) -> &ReflGroup {
        &self.group
    }

    pub fn omega(&self) -> &OrbitMap {
        &self.omega
    }

    pub fn ambient(&self) -> &PolyRing {
        &self.ambient
    }

    pub fn target(&self) -> &PolyRing {
        &self.target
    }

    pub fn equations(&self) -> &[Poly] {
        &self.equations
    }

    pub fn chart(&self) -> Option<&Chart> {
        self.chart.as_ref()
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn is_hypersurface(&self) -> bool {
        self.equations.len() == 1
    }

    pub fn space_vars(&self) -> Vec<usize> {
        self.group.space_vars_in(&self.ambient).expect("checked at construction")
    }

    pub fn verify_orbit_map(&self) -> Result<OrbitCheck> {
        verify_orbit_map(&self.group, &self.omega)
    }

    /// σL for every element (group action on the equations).
    pub fn act(&self, sigma: usize, h: &Poly) -> Result<Poly> {
        self.group.elem(sigma).act_on(h, &self.space_vars())
    }

    /// `{σ : ⟨σL⟩ = ⟨L⟩}`.
    pub fn setwise_stabilizer(&self) -> Result<Vec<usize>> {
        let base = groebner(&self.equations, MonOrder::DegRevLex, &self.limits)?;
        let flags: Vec<Result<bool>> = (0..self.group.order())
            .into_par_iter()
            .map(|s| {
                let moved: Vec<Poly> = self.equations.iter().map(|l| self.act(s, l)).collect::<Result<_>>()?;
                Ok(groebner(&moved, MonOrder::DegRevLex, &self.limits)?.same_ideal(&base))
            })
            .collect();
        let mut out = Vec::new();
        for (s, f) in flags.into_iter().enumerate() {
            if f? {
                out.push(s);
            }
        }
        Ok(out)
    }

    /// `{σ : ℓ_σ vanishes on 𝒴}`.
    pub fn pointwise_stabilizer(&self) -> Result<Vec<usize>> {
        let base = groebner(&self.equations, MonOrder::DegRevLex, &self.limits)?;
        let vars = self.space_vars();
        let mut out = vec![0];
        for s in 1..self.group.order() {
            let ell = self.group.elem(s).ell_at(&self.ambient, &vars);
            let mut all = true;
            for l in &ell {
                if !base.contains(l, &self.limits)? {
                    all = false;
                    break;
                }
            }
            if all {
                out.push(s);
            }
        }
        Ok(out)
    }

    /// `|W^𝒴 : W_𝒴|`.
    pub fn degree(&self) -> Result<usize> {
        let set = self.setwise_stabilizer()?.len();
        let point = self.pointwise_stabilizer()?.len();
        if set % point != 0 {
            return Err(Error::Internal(format!("stabilizer orders {set} and {point} are not divisible")));
        }
        Ok(set / point)
    }

    pub fn generically_one_to_one(&self) -> Result<bool> {
        Ok(self.setwise_stabilizer()? == self.pointwise_stabilizer()?)
    }

    fn require_hypersurface(&self) -> Result<&Poly> {
        if !self.is_hypersurface() {
            return Err(Error::Precondition("operation needs a hypersurface (one equation)".into()));
        }
        Ok(&self.equations[0])
    }

    /// ∏_{σ∈W} σL.
    pub fn orbit_product(&self) -> Result<Poly> {
        let l = self.require_hypersurface()?;
        let factors: Vec<Poly> = (0..self.group.order()).into_par_iter().map(|s| self.act(s, l)).collect::<Result<_>>()?;
        Ok(Poly::product(&self.ambient, factors.iter()))
    }

    /// Equation of the image, by eliminating the space variables from
    /// ⟨∏σL, X − ω⟩, with the identity g∘ω = c·∏σL checked exactly.
    pub fn image_equation(&self) -> Result<ImageEquation> {
        let product = self.orbit_product()?;
        let space = self.group.space().vars();
        let targets: Vec<(String, Role)> = self.target.vars().into_iter().filter(|(_, r)| *r == Role::Target).collect();
        let params: Vec<(String, Role)> = self.ambient.vars().into_iter().filter(|(n, _)| self.group.space().index(n).is_none()).collect();
        let mut vars = space.clone();
        vars.extend(targets.iter().cloned());
        vars.extend(params.iter().cloned());
        let big = self.ambient.derive(vars)?;
        let mut gens = vec![product.map_into(&big)?];
        for ((name, _), w) in targets.iter().zip(&self.omega.omegas) {
            gens.push(&big.var_named(name)? - &w.map_into(&big)?);
        }
        let drop: Vec<usize> = (0..space.len()).collect();
        let el = eliminate(&gens, &drop, &self.limits)?;
        if el.gens().len() != 1 {
            return Err(Error::NonPrincipalImage { generators: el.gens().len() });
        }
        let g = el.gens()[0].map_into(&self.target)?.normalized();

        // g(ω) = c·∏σL
        let images: Vec<Poly> = self
            .target
            .names()
            .iter()
            .map(|n| match targets.iter().position(|(t, _)| t == n) {
                Some(i) => self.omega.omegas[i].map_into(&self.ambient),
                None => self.ambient.var_named(n),
            })
            .collect::<Result<_>>()?;
        let back = g.substitute(&self.ambient, &images)?;
        if !back.is_proportional(&product) {
            return Err(Error::Internal("g∘ω is not a multiple of ∏σL".into()));
        }
        Ok(ImageEquation { g, product })
    }

    /// Whether the image equation is reduced; asserts agreement between the
    /// stabilizer criterion and squarefreeness of g.
    pub fn image_reduced(&self, image: &ImageEquation) -> Result<bool> {
        let one_to_one = self.generically_one_to_one()?;
        let squarefree = is_squarefree(&image.g, &self.limits)?;
        if one_to_one != squarefree {
            return Err(Error::Internal(format!(
                "generic injectivity ({one_to_one}) disagrees with squarefreeness of the image ({squarefree})"
            )));
        }
        Ok(one_to_one)
    }

    pub fn alpha_sigma(&self, sigma: usize) -> Result<Vec<Vec<Poly>>> {
        alpha_sigma(&self.equations, self.group.elem(sigma), &self.space_vars())
    }

    /// λ_σ = (σ⁻¹L − L)/ℓ_σ for reflections, σ⁻¹L − L otherwise.
    pub fn branch_lambda(&self, sigma: usize) -> Result<BranchIdeal> {
        let l = self.require_hypersurface()?;
        let e = self.group.elem(sigma);
        if e.is_identity() {
            return Err(Error::Precondition("no branch for the identity".into()));
        }
        let vars = self.space_vars();
        let q = &e.pull_on(l, &vars)? - l;
        let (kind, lambda) = if e.is_reflection {
            let ell = &e.ell_at(&self.ambient, &vars)[0];
            let lam = q.exact_divide(ell).map_err(|err| Error::Internal(format!("λ for a reflection: {err}")))?;
            (BranchKind::Reflection, lam)
        } else {
            (BranchKind::NonReflection, q)
        };
        let generators = vec![l.clone(), lambda.clone()];
        let basis = basis_of(&self.ambient, &generators, &self.limits)?;
        let empty_global = basis.is_unit();
        let dim = krull_dim(&basis);
        let pulled_back = match &self.chart {
            Some(c) => Some(c.pull_back(&lambda)?),
            None => None,
        };
        let empty_local = pulled_back.as_ref().map(|p| !p.constant_term().is_zero());
        Ok(BranchIdeal { sigma, kind, lambda: Some(lambda), generators, pulled_back, empty_local, empty_global, dim })
    }

    /// All branches in table order, skipping the identity.
    pub fn branches(&self) -> Result<Vec<BranchIdeal>> {
        (1..self.group.order()).into_par_iter().map(|s| self.branch_lambda(s)).collect()
    }

    /// D₂^σ in general codimension.
    pub fn dsigma_ideal(&self, sigma: usize) -> Result<BranchIdeal> {
        let e = self.group.elem(sigma);
        if e.is_identity() {
            return Err(Error::Precondition("no branch for the identity".into()));
        }
        let generators = dsigma_generators(&self.equations, e, &self.space_vars())?;
        let basis = basis_of(&self.ambient, &generators, &self.limits)?;
        let kind = if e.is_reflection { BranchKind::Reflection } else { BranchKind::NonReflection };
        Ok(BranchIdeal {
            sigma,
            kind,
            lambda: None,
            generators,
            pulled_back: None,
            empty_local: None,
            empty_global: basis.is_unit(),
            dim: krull_dim(&basis),
        })
    }

    pub fn k2sigma_charts(&self, sigma: usize) -> Result<K2Report> {
        k2sigma_charts(&self.equations, self.group.elem(sigma), &self.space_vars(), &self.limits)
    }

    /// Jacobian of the equations at the origin has full rank.
    pub fn smooth_at_origin(&self) -> Result<bool> {
        let field = self.ambient.field();
        let vars = self.space_vars();
        let rows: Vec<Vec<crate::Coeff>> =
            self.equations.iter().map(|l| vars.iter().map(|&v| l.derivative(v).constant_term()).collect()).collect();
        Ok(Matrix::from_rows(rows)?.rank(field) == self.equations.len())
    }

    /// ∏_{σ≠1} λ_σ · ∏_{σ reflection} ℓ_σ = ∏_{σ≠1} (σ⁻¹L − L).
    pub fn check_product_identity(&self, branches: &[BranchIdeal]) -> Result<bool> {
        let l = self.require_hypersurface()?;
        let vars = self.space_vars();
        let mut lhs = self.ambient.one();
        let mut rhs = self.ambient.one();
        for b in branches {
            let e = self.group.elem(b.sigma);
            lhs = lhs.mul(b.lambda.as_ref().expect("hypersurface branch"));
            if e.is_reflection {
                lhs = lhs.mul(&e.ell_at(&self.ambient, &vars)[0]);
            }
            rhs = rhs.mul(&(&e.pull_on(l, &vars)? - l));
        }
        Ok(lhs == rhs)
    }

    /// ∏λ_σ · det Jω ≡ c·∏_{σ≠1} σL modulo ⟨L⟩ for a nonzero constant c.
    /// Both sides vanish when some σ ≠ 1 preserves L.
    pub fn check_jacobian_identity(&self, branches: &[BranchIdeal]) -> Result<bool> {
        let l = self.require_hypersurface()?;
        let space = self.group.space();
        let p = space.nvars();
        let jac: Vec<Vec<Poly>> = self.omega.omegas.iter().map(|w| w.jacobian(&(0..p).collect::<Vec<_>>())).collect();
        let d = crate::poly::det(&jac, space).map_into(&self.ambient)?;
        let lhs = branches.iter().fold(d, |acc, b| acc.mul(b.lambda.as_ref().expect("hypersurface branch")));
        let rhs = Poly::product(
            &self.ambient,
            (1..self.group.order()).map(|s| self.act(s, l)).collect::<Result<Vec<_>>>()?.iter(),
        );
        let gb = groebner(std::slice::from_ref(l), MonOrder::DegRevLex, &self.limits)?;
        let a = gb.normal_form(&lhs, &self.limits)?;
        let b = gb.normal_form(&rhs, &self.limits)?;
        Ok(if b.is_zero() { a.is_zero() } else { a.is_proportional(&b) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{builtin_group, Builtin, DEFAULT_MAX_ORDER};
    use crate::CycloField;

    fn mapping(b: Builtin, n: u32, l: &str, chart: Option<(&[&str], &[&str])>) -> ReflMapping {
        let field = CycloField::new(n).unwrap();
        let names = ["u", "v", "w"];
        let space = PolyRing::new(&field, names.iter().map(|s| (*s, Role::Space))).unwrap();
        let (group, omega) = builtin_group(&b, &space, DEFAULT_MAX_ORDER).unwrap();
        let target = PolyRing::new(&field, ["X", "Y", "Z"].iter().map(|s| (*s, Role::Target))).unwrap();
        let eq = space.parse(l).unwrap();
        let chart = chart.map(|(src, imgs)| {
            let source = PolyRing::new(&field, src.iter().map(|s| (*s, Role::Source))).unwrap();
            let images = imgs.iter().map(|t| source.parse(t).unwrap()).collect();
            Chart { source, images }
        });
        ReflMapping::new(group, omega, space, target, vec![eq], chart, Limits::default()).unwrap()
    }

    fn f1() -> ReflMapping {
        mapping(Builtin::DihedralD8, 8, "w-2*u-v", Some((&["x", "y"], &["x", "y", "2*x+y"])))
    }

    #[test]
    fn f1_branch_lambdas() {
        let m = f1();
        let br = m.branches().unwrap();
        let src = &m.chart().unwrap().source;
        let lam = |s: usize| br[s - 1].pulled_back.clone().unwrap();
        assert!(lam(5).is_proportional(&src.parse("x+3*y").unwrap()));
        assert!(lam(6).is_proportional(&src.parse("4*x+2*y").unwrap()));
        assert!(lam(7).is_proportional(&src.parse("3*x-y").unwrap()));
        for (s, c) in [(1, 2), (2, 1), (3, 4), (4, 3)] {
            assert_eq!(lam(s), src.int(c));
            assert_eq!(br[s - 1].empty_local, Some(true));
        }
        assert!(m.check_product_identity(&br).unwrap());
        assert!(m.check_jacobian_identity(&br).unwrap());
    }

    #[test]
    fn f1_image_and_degree() {
        let m = f1();
        assert_eq!(m.degree().unwrap(), 1);
        let img = m.image_equation().unwrap();
        let expected = m.target().parse("16*X^4-40*X^3*Z^2-200*X^2*Y+33*X^2*Z^4+70*X*Y*Z^2-10*X*Z^6+625*Y^2-14*Y*Z^4+Z^8").unwrap();
        assert_eq!(img.g, expected);
        assert!(m.image_reduced(&img).unwrap());
    }

    #[test]
    fn graph_of_monomial_has_degree_k() {
        for (k, n) in [(2u32, 2u32), (3, 3)] {
            let m = mapping(Builtin::CyclicProduct(vec![k]), n, &format!("v-u^{k}"), None);
            assert_eq!(m.degree().unwrap(), k as usize);
            assert!(!m.generically_one_to_one().unwrap());
        }
    }

    #[test]
    fn tetrahedral_stabilizers() {
        let m = mapping(Builtin::TetrahedralS4, 8, "u", None);
        assert_eq!(m.setwise_stabilizer().unwrap().len(), 4);
        assert_eq!(m.pointwise_stabilizer().unwrap().len(), 2);
        assert_eq!(m.degree().unwrap(), 2);
    }

    #[test]
    fn alpha_recovers_difference() {
        let m = mapping(Builtin::TetrahedralS4, 8, "u-2*v-w+v^2*w", None);
        for s in 1..m.group().order() {
            // the identity α·ℓ = σ⁻¹L − L is asserted inside
            let a = m.alpha_sigma(s).unwrap();
            assert_eq!(a[0].len(), 3 - m.group().elem(s).fix_dim);
        }
    }

    #[test]
    fn chart_must_lie_on_submanifold() {
        let field = CycloField::new(8).unwrap();
        let space = PolyRing::new(&field, ["u", "v", "w"].iter().map(|s| (*s, Role::Space))).unwrap();
        let (group, omega) = builtin_group(&Builtin::DihedralD8, &space, DEFAULT_MAX_ORDER).unwrap();
        let target = PolyRing::new(&field, ["X", "Y", "Z"].iter().map(|s| (*s, Role::Target))).unwrap();
        let source = PolyRing::new(&field, [("x", Role::Source), ("y", Role::Source)]).unwrap();
        let images = vec![source.var(0), source.var(1), source.var(0)];
        let l = space.parse("w-2*u-v").unwrap();
        let r = ReflMapping::new(group, omega, space, target, vec![l], Some(Chart { source, images }), Limits::default());
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
