//! Declarative problem files (JSON) and their conversion into mappings.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{builtin_group, cyclic_element_matrix, Builtin, GroupElem, OrbitMap, ReflGroup};
use crate::linalg::Matrix;
use crate::poly::{Limits, Poly, PolyRing, Role};
use crate::refmap::{Chart, ReflMapping};
use crate::CycloField;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Builtin {
        builtin: String,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        degrees: Vec<u32>,
    },
    Generators {
        generators: Vec<Vec<Vec<String>>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub source: Vec<String>,
    pub map: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub conductor: u32,
    pub space: Vec<String>,
    pub target: Vec<String>,
    #[serde(default)]
    pub parameters: Vec<String>,
    pub group: GroupSpec,
    #[serde(default)]
    pub omega: Option<Vec<String>>,
    pub hypersurface: Vec<String>,
    #[serde(default)]
    pub chart: Option<ChartSpec>,
    #[serde(default)]
    pub substitutions: BTreeMap<String, String>,
}

/// A fully parsed problem.  The group itself is built on demand, since some
/// questions only need a single element of a large group.
#[derive(Clone, Debug)]
pub struct Problem {
    pub spec: ProblemSpec,
    pub field: CycloField,
    pub space: PolyRing,
    pub ambient: PolyRing,
    pub target: PolyRing,
    pub equations: Vec<Poly>,
    pub chart: Option<Chart>,
    omega: Option<Vec<Poly>>,
    builtin: Option<Builtin>,
    generators: Vec<Matrix>,
}

fn check_names(names: &[String], seen: &mut Vec<String>) -> Result<()> {
    for n in names {
        let ok = n.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_') && n.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !ok || n == "z" || n == "zeta" {
            return Err(Error::Input(format!("invalid variable name {n:?}")));
        }
        if seen.contains(n) {
            return Err(Error::Input(format!("variable {n:?} declared twice")));
        }
        seen.push(n.clone());
    }
    Ok(())
}

fn parse_builtin(name: &str, degrees: &[u32]) -> Result<Builtin> {
    match name {
        "dihedral_D8" => Ok(Builtin::DihedralD8),
        "tetrahedral_S4" => Ok(Builtin::TetrahedralS4),
        "cyclic_product" => {
            if degrees.is_empty() {
                return Err(Error::Input("cyclic_product needs degrees".into()));
            }
            Ok(Builtin::CyclicProduct(degrees.to_vec()))
        }
        other => Err(Error::Input(format!("unknown builtin group {other:?}"))),
    }
}

impl Problem {
    pub fn from_json(text: &str) -> Result<Problem> {
        let spec: ProblemSpec = serde_json::from_str(text).map_err(|e| Error::Input(format!("problem file: {e}")))?;
        Problem::from_spec(spec)
    }

    pub fn from_file(path: &Path) -> Result<Problem> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        Problem::from_json(&text)
    }

    pub fn from_spec(spec: ProblemSpec) -> Result<Problem> {
        let field = CycloField::new(spec.conductor)?;
        let mut seen = Vec::new();
        check_names(&spec.space, &mut seen)?;
        check_names(&spec.target, &mut seen)?;
        check_names(&spec.parameters, &mut seen)?;
        if let Some(c) = &spec.chart {
            check_names(&c.source, &mut seen)?;
        }
        if spec.space.is_empty() {
            return Err(Error::Input("no space variables".into()));
        }
        if spec.target.len() != spec.space.len() {
            return Err(Error::Input("target and space must have the same number of variables".into()));
        }
        for k in spec.substitutions.keys() {
            if !spec.parameters.contains(k) {
                return Err(Error::Input(format!("substitution for undeclared parameter {k:?}")));
            }
        }

        let space = PolyRing::new(&field, spec.space.iter().map(|s| (s.as_str(), Role::Space)))?;
        let full_params: Vec<(&str, Role)> = spec.parameters.iter().map(|s| (s.as_str(), Role::Parameter)).collect();
        let kept: Vec<(&str, Role)> =
            full_params.iter().filter(|(n, _)| !spec.substitutions.contains_key(*n)).cloned().collect();
        let with = |base: &[String], role: Role, params: &[(&str, Role)]| -> Result<PolyRing> {
            let mut v: Vec<(&str, Role)> = base.iter().map(|s| (s.as_str(), role)).collect();
            v.extend(params.iter().cloned());
            PolyRing::new(&field, v)
        };
        let full_ambient = with(&spec.space, Role::Space, &full_params)?;
        let ambient = with(&spec.space, Role::Space, &kept)?;
        let target = with(&spec.target, Role::Target, &kept)?;

        let mut assignment: Vec<(String, Poly)> = Vec::new();
        for (k, v) in &spec.substitutions {
            let c = full_ambient.parse(v)?;
            if !c.is_constant() {
                return Err(Error::Input(format!("substitution for {k:?} must be a constant")));
            }
            assignment.push((k.clone(), c));
        }
        let specialize = |p: Poly, into: &PolyRing| -> Result<Poly> {
            let a: Vec<(&str, Poly)> = assignment.iter().map(|(k, v)| (k.as_str(), v.map_into(p.ring()).expect("constant"))).collect();
            p.substitute_named(&a)?.map_into(into)
        };

        let equations: Vec<Poly> = spec
            .hypersurface
            .iter()
            .map(|s| specialize(full_ambient.parse(s)?, &ambient))
            .collect::<Result<_>>()?;
        if equations.is_empty() {
            return Err(Error::Input("no equations given".into()));
        }

        let chart = match &spec.chart {
            None => None,
            Some(c) => {
                if c.map.len() != spec.space.len() {
                    return Err(Error::Input("chart map needs one entry per space variable".into()));
                }
                let mut sv: Vec<(&str, Role)> = c.source.iter().map(|s| (s.as_str(), Role::Source)).collect();
                sv.extend(full_params.iter().cloned());
                let full_source = PolyRing::new(&field, sv)?;
                let mut sv: Vec<(&str, Role)> = c.source.iter().map(|s| (s.as_str(), Role::Source)).collect();
                sv.extend(kept.iter().cloned());
                let source = PolyRing::new(&field, sv)?;
                let mut images: Vec<Poly> = c.map.iter().map(|s| specialize(full_source.parse(s)?, &source)).collect::<Result<_>>()?;
                for (n, _) in &kept {
                    images.push(source.var_named(n)?);
                }
                Some(Chart { source, images })
            }
        };

        let omega = match &spec.omega {
            None => None,
            Some(list) => {
                if list.len() != spec.space.len() {
                    return Err(Error::Input("omega needs one component per space variable".into()));
                }
                Some(list.iter().map(|s| space.parse(s)).collect::<Result<Vec<_>>>()?)
            }
        };

        let (builtin, generators) = match &spec.group {
            GroupSpec::Builtin { builtin, degrees } => (Some(parse_builtin(builtin, degrees)?), Vec::new()),
            GroupSpec::Generators { generators } => {
                if omega.is_none() {
                    return Err(Error::Input("groups given by generators need omega".into()));
                }
                let p = spec.space.len();
                let mats = generators
                    .iter()
                    .map(|g| {
                        if g.len() != p || g.iter().any(|r| r.len() != p) {
                            return Err(Error::Input(format!("generator matrices must be {p}×{p}")));
                        }
                        Matrix::from_rows(
                            g.iter().map(|r| r.iter().map(|e| Ok(field.parse(e)?.value)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?,
                        )
                    })
                    .collect::<Result<Vec<_>>>()?;
                (None, mats)
            }
        };

        Ok(Problem { spec, field, space, ambient, target, equations, chart, omega, builtin, generators })
    }

    /// Build the group and its orbit map.  An explicit omega in the file
    /// overrides the builtin one.
    pub fn group(&self, cap: usize) -> Result<(ReflGroup, OrbitMap)> {
        let (g, w) = match &self.builtin {
            Some(b) => builtin_group(b, &self.space, cap)?,
            None => (ReflGroup::close(&self.space, &self.generators, cap)?, OrbitMap::new(Vec::new())),
        };
        let w = match &self.omega {
            Some(list) => OrbitMap::new(list.clone()),
            None => w,
        };
        Ok((g, w))
    }

    pub fn mapping(&self, cap: usize, limits: Limits) -> Result<ReflMapping> {
        let (g, w) = self.group(cap)?;
        ReflMapping::new(g, w, self.ambient.clone(), self.target.clone(), self.equations.clone(), self.chart.clone(), limits)
    }

    /// The element of a cyclic product group with the given exponents,
    /// without building the whole group.
    pub fn cyclic_element(&self, exponents: &[u32]) -> Result<GroupElem> {
        let Some(Builtin::CyclicProduct(degrees)) = &self.builtin else {
            return Err(Error::Input("exponents only apply to cyclic_product groups".into()));
        };
        if exponents.len() != degrees.len() {
            return Err(Error::Input(format!("expected {} exponents", degrees.len())));
        }
        let need = degrees.iter().fold(1u32, |a, &b| num_integer::lcm(a, b));
        if !self.field.conductor().is_multiple_of(need) {
            return Err(Error::Input(format!("conductor {} is not divisible by {need}", self.field.conductor())));
        }
        let m = cyclic_element_matrix(&self.field, degrees, exponents, self.space.nvars());
        GroupElem::from_matrix(&self.space, m)
    }

    /// Positions of the space variables in the ambient ring.
    pub fn space_vars(&self) -> Vec<usize> {
        (0..self.space.nvars()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const D8: &str = r#"{
        "conductor": 8,
        "space": ["u", "v", "w"],
        "target": ["X", "Y", "Z"],
        "group": {"builtin": "dihedral_D8"},
        "hypersurface": ["w - 2*u - v"],
        "chart": {"source": ["x", "y"], "map": ["x", "y", "2*x + y"]}
    }"#;

    #[test]
    fn loads_d8() {
        let p = Problem::from_json(D8).unwrap();
        let m = p.mapping(1024, Limits::default()).unwrap();
        assert_eq!(m.group().order(), 8);
        assert_eq!(m.omega().omegas.len(), 3);
    }

    #[test]
    fn parameters_are_substituted() {
        let text = r#"{
            "conductor": 8, "space": ["u","v","w"], "target": ["X","Y","Z"], "parameters": ["t"],
            "group": {"builtin": "tetrahedral_S4"},
            "hypersurface": ["u - t*(2*v + w)"], "substitutions": {"t": "1"}
        }"#;
        let p = Problem::from_json(text).unwrap();
        assert_eq!(p.ambient.nvars(), 3);
        assert_eq!(p.equations[0], p.ambient.parse("u-2*v-w").unwrap());
        let kept = text.replace(r#", "substitutions": {"t": "1"}"#, "");
        let p = Problem::from_json(&kept).unwrap();
        assert_eq!(p.ambient.nvars(), 4);
    }

    #[test]
    fn input_errors() {
        let bad = D8.replace("w - 2*u - v", "w - q");
        assert!(matches!(Problem::from_json(&bad), Err(Error::UnknownVariable(_))));
        let bad = D8.replace("\"X\", ", "");
        assert!(matches!(Problem::from_json(&bad), Err(Error::Input(_))));
        let bad = D8.replace("2*x + y", "x");
        let p = Problem::from_json(&bad).unwrap();
        assert!(matches!(p.mapping(1024, Limits::default()), Err(Error::Precondition(_))));
        assert!(Problem::from_json("{").is_err());
    }

    #[test]
    fn generator_groups_need_omega() {
        let text = r#"{
            "conductor": 1, "space": ["u","v"], "target": ["X","Y"],
            "group": {"generators": [[["-1","0"],["0","1"]]]},
            "hypersurface": ["v - u"]
        }"#;
        assert!(Problem::from_json(text).is_err());
        let with = text.replace(r#""hypersurface""#, r#""omega": ["u^2", "v"], "hypersurface""#);
        let p = Problem::from_json(&with).unwrap();
        let m = p.mapping(16, Limits::default()).unwrap();
        assert_eq!(m.group().order(), 2);
        assert_eq!(m.degree().unwrap(), 1);
    }
}
