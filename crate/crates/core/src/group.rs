//! Finite matrix groups acting on polynomial rings, with the per-element data
//! (fixed space, hyperplane forms) the double point analysis needs.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{Coeff, CycloField};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{det, Poly, PolyRing};

/// Default bound on the group order during closure.
pub const DEFAULT_MAX_ORDER: usize = 1024;

/// One element of a matrix group together with its classification.
#[derive(Clone, Debug)]
pub struct GroupElem {
    pub matrix: Matrix,
    pub inverse: Matrix,
    /// Position in the group table (0 for elements built on their own).
    pub index: usize,
    pub inverse_index: usize,
    /// Dimension of the fixed subspace ker(σ − I).
    pub fix_dim: usize,
    pub is_reflection: bool,
    /// Reduced row echelon rows of σ − I as linear forms in the space
    /// variables; their common zero set is the fixed subspace.
    pub ell: Vec<Poly>,
}

impl GroupElem {
    /// Classify a single invertible matrix acting on the variables of `space`.
    pub fn from_matrix(space: &PolyRing, matrix: Matrix) -> Result<GroupElem> {
        let field = space.field();
        let p = space.nvars();
        if matrix.rows() != p || matrix.cols() != p {
            return Err(Error::Input(format!("expected a {p}x{p} matrix")));
        }
        let inverse = matrix.inverse(field)?;
        let (r, pivots) = matrix.sub(&Matrix::identity(p)).rref(field);
        let ell = (0..pivots.len()).map(|i| linear_form(space, r.row(i), &(0..p).collect::<Vec<_>>())).collect();
        let fix_dim = p - pivots.len();
        Ok(GroupElem { matrix, inverse, index: 0, inverse_index: 0, fix_dim, is_reflection: fix_dim + 1 == p, ell })
    }

    pub fn is_identity(&self) -> bool {
        self.ell.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Rows of σ − I in reduced echelon form.
    pub fn ell_rows(&self) -> Vec<Vec<Coeff>> {
        self.ell
            .iter()
            .map(|l| {
                let ring = l.ring();
                (0..ring.nvars())
                    .map(|i| {
                        let mut m = ring.unit_mono();
                        m[i] = 1;
                        l.terms().iter().find(|(t, _)| *t == m).map(|(_, c)| c.clone()).unwrap_or_else(Coeff::zero)
                    })
                    .collect()
            })
            .collect()
    }

    /// The forms ℓ_σ evaluated at the variables `vars` of another ring.
    pub fn ell_at(&self, ring: &PolyRing, vars: &[usize]) -> Vec<Poly> {
        self.ell_rows().iter().map(|row| linear_form(ring, row, vars)).collect()
    }

    /// `H(M u)` with `u` the variables `vars` of `h`'s ring.
    fn linear_substitution(h: &Poly, m: &Matrix, vars: &[usize]) -> Result<Poly> {
        let ring = h.ring();
        if vars.len() != m.rows() {
            return Err(Error::Input(format!("group of dimension {} acting on {} variables", m.rows(), vars.len())));
        }
        let mut images: Vec<Poly> = (0..ring.nvars()).map(|i| ring.var(i)).collect();
        for (i, &vi) in vars.iter().enumerate() {
            images[vi] = linear_form(ring, m.row(i), vars);
        }
        h.substitute(ring, &images)
    }

    /// The action `(σH)(u) = H(σ⁻¹u)` on the variables `vars`.
    pub fn act_on(&self, h: &Poly, vars: &[usize]) -> Result<Poly> {
        Self::linear_substitution(h, &self.inverse, vars)
    }

    /// `H(σu)`, i.e. the action of σ⁻¹.
    pub fn pull_on(&self, h: &Poly, vars: &[usize]) -> Result<Poly> {
        Self::linear_substitution(h, &self.matrix, vars)
    }
}

/// `Σ row_j · x_{vars[j]}`.
pub fn linear_form(ring: &PolyRing, row: &[Coeff], vars: &[usize]) -> Poly {
    let terms = row.iter().zip(vars).filter(|(c, _)| !c.is_zero()).map(|(c, &v)| {
        let mut m = ring.unit_mono();
        m[v] = 1;
        (m, c.clone())
    });
    Poly::from_terms(ring, terms.collect::<Vec<_>>())
}

/// A finite matrix group with its multiplication table.
#[derive(Clone, Debug)]
pub struct ReflGroup {
    field: CycloField,
    space: PolyRing,
    elements: Vec<GroupElem>,
    mult_table: Vec<Vec<usize>>,
    reflections: Vec<usize>,
    generators: Vec<usize>,
}

impl ReflGroup {
    /// Breadth-first closure of `generators` under multiplication.
    pub fn close(space: &PolyRing, generators: &[Matrix], cap: usize) -> Result<ReflGroup> {
        let field = space.field();
        let p = space.nvars();
        let id = Matrix::identity(p);
        let mut mats = vec![id.clone()];
        let mut seen: HashMap<Matrix, usize> = HashMap::from([(id, 0)]);
        for g in generators {
            if g.rows() != p || g.cols() != p {
                return Err(Error::Input(format!("generator is not {p}x{p}")));
            }
            g.inverse(field)?;
        }
        let mut head = 0;
        while head < mats.len() {
            let x = mats[head].clone();
            head += 1;
            for g in generators {
                let y = x.mul(g, field);
                if !seen.contains_key(&y) {
                    if mats.len() >= cap {
                        return Err(Error::GroupNotClosed { cap });
                    }
                    seen.insert(y.clone(), mats.len());
                    mats.push(y);
                }
            }
        }
        let gens = generators.iter().map(|g| seen[g]).collect();
        Self::build(space, mats, seen, gens)
    }

    /// Use an explicit element list (identity first) after checking closure.
    pub fn from_elements(space: &PolyRing, mats: Vec<Matrix>) -> Result<ReflGroup> {
        let p = space.nvars();
        if mats.first() != Some(&Matrix::identity(p)) {
            return Err(Error::Input("the element list must start with the identity".into()));
        }
        let mut seen = HashMap::new();
        for (i, m) in mats.iter().enumerate() {
            if seen.insert(m.clone(), i).is_some() {
                return Err(Error::Input("repeated group element".into()));
            }
        }
        let gens = (1..mats.len()).collect();
        Self::build(space, mats, seen, gens)
    }

    fn build(space: &PolyRing, mats: Vec<Matrix>, seen: HashMap<Matrix, usize>, generators: Vec<usize>) -> Result<ReflGroup> {
        let field = space.field().clone();
        let n = mats.len();
        let mut table = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                let prod = mats[i].mul(&mats[j], &field);
                table[i][j] = *seen.get(&prod).ok_or_else(|| Error::Input("element list is not closed under multiplication".into()))?;
            }
        }
        let mut elements = Vec::with_capacity(n);
        for (i, m) in mats.into_iter().enumerate() {
            let mut e = GroupElem::from_matrix(space, m)?;
            e.index = i;
            e.inverse_index = table[i].iter().position(|&k| k == 0).ok_or_else(|| Error::Internal("missing inverse".into()))?;
            elements.push(e);
        }
        let reflections = elements.iter().filter(|e| e.is_reflection).map(|e| e.index).collect();
        Ok(ReflGroup { field, space: space.clone(), elements, mult_table: table, reflections, generators })
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    /// Ring of the variables the group acts on.
    pub fn space(&self) -> &PolyRing {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.nvars()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElem] {
        &self.elements
    }

    pub fn elem(&self, i: usize) -> &GroupElem {
        &self.elements[i]
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mult_table[i][j]
    }

    pub fn mult_table(&self) -> &[Vec<usize>] {
        &self.mult_table
    }

    pub fn reflections(&self) -> &[usize] {
        &self.reflections
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Identity first, then reflections, then the remaining elements, each
    /// block in table order.
    pub fn report_ordering(&self) -> Vec<usize> {
        let mut out = vec![0];
        out.extend(self.elements.iter().skip(1).filter(|e| e.is_reflection).map(|e| e.index));
        out.extend(self.elements.iter().skip(1).filter(|e| !e.is_reflection).map(|e| e.index));
        out
    }

    /// Positions in `ring` of the space variables, matched by name.
    pub fn space_vars_in(&self, ring: &PolyRing) -> Result<Vec<usize>> {
        self.space
            .names()
            .iter()
            .map(|n| ring.index(n).ok_or_else(|| Error::UnknownVariable(n.clone())))
            .collect()
    }

    /// `(σH)(u) = H(σ⁻¹u)` for the element with index `i`.
    pub fn act(&self, i: usize, h: &Poly) -> Result<Poly> {
        let vars = self.space_vars_in(h.ring())?;
        self.elements[i].act_on(h, &vars)
    }
}

/// Orbit map components ω₁,…,ω_p in the space variables.
#[derive(Clone, Debug)]
pub struct OrbitMap {
    pub omegas: Vec<Poly>,
    pub degrees: Vec<u32>,
}

impl OrbitMap {
    pub fn new(omegas: Vec<Poly>) -> OrbitMap {
        let degrees = omegas.iter().map(|w| w.total_degree().unwrap_or(0)).collect();
        OrbitMap { omegas, degrees }
    }
}

/// Outcome of checking an orbit map against its group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCheck {
    /// `(generator index, component)` pairs where invariance fails.
    pub not_invariant: Vec<(usize, usize)>,
    /// Components that are not homogeneous.
    pub not_homogeneous: Vec<usize>,
    /// Whether det Jω is a nonzero multiple of the product of all ℓ_σ over reflections.
    pub jacobian_matches: bool,
    pub wrong_count: bool,
}

impl OrbitCheck {
    pub fn passed(&self) -> bool {
        self.not_invariant.is_empty() && self.not_homogeneous.is_empty() && self.jacobian_matches && !self.wrong_count
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.wrong_count {
            out.push("number of orbit map components differs from the dimension".to_string());
        }
        for (g, i) in &self.not_invariant {
            out.push(format!("component {} is not invariant under element {}", i + 1, g));
        }
        for i in &self.not_homogeneous {
            out.push(format!("component {} is not homogeneous", i + 1));
        }
        if !self.jacobian_matches {
            out.push("jacobian determinant is not a multiple of the product of reflecting hyperplanes".to_string());
        }
        out
    }
}

pub fn verify_orbit_map(group: &ReflGroup, omega: &OrbitMap) -> Result<OrbitCheck> {
    let p = group.dim();
    let mut check = OrbitCheck { not_invariant: vec![], not_homogeneous: vec![], jacobian_matches: false, wrong_count: false };
    if omega.omegas.len() != p {
        check.wrong_count = true;
        return Ok(check);
    }
    for &g in group.generators() {
        for (i, w) in omega.omegas.iter().enumerate() {
            if group.act(g, w)? != *w {
                check.not_invariant.push((g, i));
            }
        }
    }
    for (i, w) in omega.omegas.iter().enumerate() {
        if w.weighted_degree(&vec![1; w.ring().nvars()]).is_none() {
            check.not_homogeneous.push(i);
        }
    }
    let space = group.space();
    let omegas: Vec<Poly> = omega.omegas.iter().map(|w| w.map_into(space)).collect::<Result<_>>()?;
    let vars: Vec<usize> = (0..p).collect();
    let jac: Vec<Vec<Poly>> = omegas.iter().map(|w| w.jacobian(&vars)).collect();
    let d = det(&jac, space);
    let prod = Poly::product(space, group.reflections().iter().map(|&r| &group.elem(r).ell[0]));
    check.jacobian_matches = !d.is_zero() && d.is_proportional(&prod);
    Ok(check)
}

/// Named groups with their standard orbit maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Builtin {
    CyclicProduct(Vec<u32>),
    DihedralD8,
    TetrahedralS4,
}

impl Builtin {
    /// Number of coordinates the group acts on non-trivially.
    pub fn natural_dim(&self) -> usize {
        match self {
            Builtin::CyclicProduct(d) => d.len(),
            Builtin::DihedralD8 => 2,
            Builtin::TetrahedralS4 => 3,
        }
    }

    fn required_conductor(&self) -> u32 {
        match self {
            Builtin::CyclicProduct(d) => d.iter().fold(1u32, |a, &b| num_integer::lcm(a, b)),
            _ => 8,
        }
    }
}

fn coeff_matrix(field: &CycloField, rows: &[&[&str]]) -> Matrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| field.parse(s).expect("builtin entry").value).collect()).collect())
        .expect("builtin matrix")
}

/// Diagonal matrix `diag(ζ_{d_1}^{a_1}, …)` for the cyclic product.
pub fn cyclic_element_matrix(field: &CycloField, degrees: &[u32], exponents: &[u32], dim: usize) -> Matrix {
    let n = field.conductor();
    let mut m = Matrix::identity(dim);
    for (i, (&d, &a)) in degrees.iter().zip(exponents).enumerate() {
        m.set(i, i, field.zeta_pow((n / d * (a % d)) as i64));
    }
    m
}

/// Build a builtin group acting on `space`.  Extra space variables beyond the
/// natural dimension are fixed by the group and appear unchanged in ω.
pub fn builtin_group(b: &Builtin, space: &PolyRing, cap: usize) -> Result<(ReflGroup, OrbitMap)> {
    let field = space.field();
    let need = b.required_conductor();
    if !field.conductor().is_multiple_of(need) {
        return Err(Error::Input(format!("conductor {} is not divisible by {}", field.conductor(), need)));
    }
    let p = space.nvars();
    let k = b.natural_dim();
    if p < k {
        return Err(Error::Input(format!("the group needs at least {k} space variables, found {p}")));
    }
    let extra = p - k;
    let u = |i: usize| space.var(i);
    let (group, mut omegas) = match b {
        Builtin::CyclicProduct(degrees) => {
            if degrees.contains(&0) {
                return Err(Error::Input("cyclic factors must have positive order".into()));
            }
            let total: usize = degrees.iter().map(|&d| d as usize).product();
            if total > cap {
                return Err(Error::GroupNotClosed { cap });
            }
            let mut mats = Vec::with_capacity(total);
            let mut exps = vec![0u32; degrees.len()];
            for _ in 0..total {
                mats.push(cyclic_element_matrix(field, degrees, &exps, p));
                for i in (0..exps.len()).rev() {
                    exps[i] += 1;
                    if exps[i] < degrees[i] {
                        break;
                    }
                    exps[i] = 0;
                }
            }
            let mut g = ReflGroup::from_elements(space, mats)?;
            g.generators = (0..degrees.len())
                .map(|i| {
                    let mut e = vec![0; degrees.len()];
                    e[i] = 1;
                    let m = cyclic_element_matrix(field, degrees, &e, p);
                    g.elements.iter().position(|x| x.matrix == m).unwrap_or(0)
                })
                .collect();
            let omegas: Vec<Poly> = degrees.iter().enumerate().map(|(i, &d)| u(i).pow(d)).collect();
            (g, omegas)
        }
        Builtin::DihedralD8 => {
            let list: [&[&[&str]]; 8] = [
                &[&["1", "0"], &["0", "1"]],
                &[&["1", "0"], &["0", "-1"]],
                &[&["0", "1"], &["1", "0"]],
                &[&["-1", "0"], &["0", "1"]],
                &[&["0", "-1"], &["-1", "0"]],
                &[&["0", "-1"], &["1", "0"]],
                &[&["-1", "0"], &["0", "-1"]],
                &[&["0", "1"], &["-1", "0"]],
            ];
            let mats = list.iter().map(|rows| coeff_matrix(field, rows).extend_identity(extra)).collect();
            let mut g = ReflGroup::from_elements(space, mats)?;
            g.generators = vec![1, 5];
            let (x, y) = (u(0), u(1));
            let omegas = vec![&x.pow(2) + &y.pow(2), &x.pow(2) * &y.pow(2)];
            (g, omegas)
        }
        Builtin::TetrahedralS4 => {
            // √2 = ζ₈ − ζ₈³ with ζ₈ = ζ_N^{N/8}
            let e = field.conductor() / 8;
            let h = format!("-1/2*(z^{e}-z^{})", 3 * e);
            let h = h.as_str();
            let list: [&[&[&str]]; 3] = [
                &[&["-1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]],
                &[&["1/2", "-1/2", h], &["-1/2", "1/2", h], &[h, h, "0"]],
                &[&["1", "0", "0"], &["0", "-1", "0"], &["0", "0", "1"]],
            ];
            let gens: Vec<Matrix> = list.iter().map(|rows| coeff_matrix(field, rows).extend_identity(extra)).collect();
            let g = ReflGroup::close(space, &gens, cap)?;
            let (x, y, w) = (u(0), u(1), u(2));
            let two = space.int(2);
            let omegas = vec![
                &(&x.pow(2) + &y.pow(2)) + &w.pow(2),
                &(&(&x + &y) * &(&x - &y)) * &w,
                &(&(&two * &x.pow(2)) - &w.pow(2)) * &(&(&two * &y.pow(2)) - &w.pow(2)),
            ];
            (g, omegas)
        }
    };
    for i in k..p {
        omegas.push(u(i));
    }
    Ok((group, OrbitMap::new(omegas)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Role;

    fn space(n: u32, names: &[&str]) -> PolyRing {
        PolyRing::new(&CycloField::new(n).unwrap(), names.iter().map(|s| (*s, Role::Space))).unwrap()
    }

    #[test]
    fn dihedral_group_of_order_eight() {
        let s = space(8, &["u", "v"]);
        let (g, w) = builtin_group(&Builtin::DihedralD8, &s, DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.reflections(), &[1, 2, 3, 4]);
        assert!(verify_orbit_map(&g, &w).unwrap().passed());
        // closing from two generators gives the same set
        let c = ReflGroup::close(&s, &[g.elem(1).matrix.clone(), g.elem(5).matrix.clone()], 64).unwrap();
        assert_eq!(c.order(), 8);
        assert_eq!(g.act(2, &s.var(0)).unwrap(), s.var(1));
    }

    #[test]
    fn tetrahedral_group() {
        let s = space(8, &["u", "v", "w"]);
        let (g, w) = builtin_group(&Builtin::TetrahedralS4, &s, DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(g.reflections().len(), 6);
        let check = verify_orbit_map(&g, &w).unwrap();
        assert!(check.passed(), "{:?}", check.failures());
    }

    #[test]
    fn cyclic_products() {
        let s = space(15, &["u", "v"]);
        let (g, w) = builtin_group(&Builtin::CyclicProduct(vec![3, 5]), &s, DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(g.order(), 15);
        assert_eq!(g.reflections().len(), 6);
        assert!(verify_orbit_map(&g, &w).unwrap().passed());
        // generator (1,0) sends u to ζ₃⁻¹ u
        let gen = g.generators()[0];
        let expected = s.var(0).scale(&s.field().zeta_pow(-5));
        assert_eq!(g.act(gen, &s.var(0)).unwrap(), expected);
        assert!(builtin_group(&Builtin::CyclicProduct(vec![4]), &s, 16).is_err());
    }

    #[test]
    fn bad_orbit_map_is_reported() {
        let s = space(8, &["u", "v"]);
        let (g, _) = builtin_group(&Builtin::DihedralD8, &s, DEFAULT_MAX_ORDER).unwrap();
        let bad = OrbitMap::new(vec![s.var(0), s.var(1).pow(2)]);
        let check = verify_orbit_map(&g, &bad).unwrap();
        assert!(!check.passed());
        assert!(!check.not_invariant.is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let s = space(8, &["u", "v"]);
        let rot = coeff_matrix(s.field(), &[&["0", "-1"], &["1", "0"]]);
        assert!(matches!(ReflGroup::close(&s, &[rot], 3), Err(Error::GroupNotClosed { cap: 3 })));
    }
}
