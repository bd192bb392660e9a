use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use reflmap::curveinv::full_report;
use reflmap::group::OrbitCheck;
use reflmap::problem::Problem;
use reflmap::refmap::{dsigma_generators, k2sigma_charts, BranchKind, K2Report};
use reflmap::poly::{groebner, krull_dim, MonOrder};
use reflmap::{Error, Result};

use crate::Options;

pub struct Output {
    pub text: String,
    pub code: u8,
}

fn emit<T: Serialize>(opts: &Options, value: &T, text: impl FnOnce() -> String) -> Result<Output> {
    let text = if opts.json {
        let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
        s.push('\n');
        s
    } else {
        text()
    };
    Ok(Output { text, code: 0 })
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct Info {
    order: usize,
    reflections: Vec<usize>,
    fix_dims: Vec<usize>,
    omega: Vec<String>,
    omega_check: OrbitCheck,
    verified: bool,
}

pub fn info(file: &Path, opts: &Options) -> Result<Output> {
    let p = Problem::from_file(file)?;
    let (g, w) = p.group(opts.cap)?;
    let check = reflmap::group::verify_orbit_map(&g, &w)?;
    let info = Info {
        order: g.order(),
        reflections: g.reflections().to_vec(),
        fix_dims: g.elements().iter().map(|e| e.fix_dim).collect(),
        omega: w.omegas.iter().map(|o| o.to_string()).collect(),
        verified: check.passed(),
        omega_check: check.clone(),
    };
    let mut out = emit(opts, &info, || {
        let mut s = String::new();
        writeln!(s, "order {}, reflections {}", info.order, info.reflections.len()).unwrap();
        writeln!(s, "reflection indices: {}", join(&info.reflections)).unwrap();
        writeln!(s, "fixed space dimensions: {}", join(&info.fix_dims)).unwrap();
        for (i, o) in info.omega.iter().enumerate() {
            writeln!(s, "omega[{}] = {o}", i + 1).unwrap();
        }
        if info.verified {
            writeln!(s, "omega verified").unwrap();
        } else {
            writeln!(s, "omega verification failed:").unwrap();
            for f in check.failures() {
                writeln!(s, "  {f}").unwrap();
            }
        }
        s
    })?;
    if !info.verified {
        out.code = 2;
    }
    Ok(out)
}

#[derive(Serialize)]
struct Degree {
    degree: usize,
    setwise_stabilizer: Vec<usize>,
    pointwise_stabilizer: Vec<usize>,
    generically_one_to_one: bool,
}

pub fn degree(file: &Path, opts: &Options) -> Result<Output> {
    let m = Problem::from_file(file)?.mapping(opts.cap, opts.limits)?;
    let set = m.setwise_stabilizer()?;
    let point = m.pointwise_stabilizer()?;
    let d = Degree {
        degree: set.len() / point.len(),
        generically_one_to_one: set == point,
        setwise_stabilizer: set,
        pointwise_stabilizer: point,
    };
    emit(opts, &d, || {
        format!(
            "degree {}\nsetwise stabilizer (order {}): {}\npointwise stabilizer (order {}): {}\ngenerically one-to-one: {}\n",
            d.degree,
            d.setwise_stabilizer.len(),
            join(&d.setwise_stabilizer),
            d.pointwise_stabilizer.len(),
            join(&d.pointwise_stabilizer),
            if d.generically_one_to_one { "yes" } else { "no" }
        )
    })
}

#[derive(Serialize)]
struct Image {
    g: String,
    reduced: bool,
}

pub fn image(file: &Path, opts: &Options) -> Result<Output> {
    let m = Problem::from_file(file)?.mapping(opts.cap, opts.limits)?;
    let img = m.image_equation()?;
    let reduced = m.image_reduced(&img)?;
    let out = Image { g: img.g.to_string(), reduced };
    emit(opts, &out, || format!("g = {}\nreduced: {}\n", out.g, if reduced { "yes" } else { "no" }))
}

#[derive(Serialize)]
struct Branch {
    sigma: usize,
    kind: BranchKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pulled_back: Option<String>,
    generators: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    empty_local: Option<bool>,
    empty_global: bool,
    dim: i64,
}

pub fn branches(file: &Path, opts: &Options) -> Result<Output> {
    let m = Problem::from_file(file)?.mapping(opts.cap, opts.limits)?;
    let list = if m.is_hypersurface() {
        m.branches()?
    } else {
        (1..m.group().order()).map(|s| m.dsigma_ideal(s)).collect::<Result<Vec<_>>>()?
    };
    let out: Vec<Branch> = list
        .into_iter()
        .map(|b| Branch {
            sigma: b.sigma,
            kind: b.kind,
            lambda: b.lambda.as_ref().map(|p| p.to_string()),
            pulled_back: b.pulled_back.as_ref().map(|p| p.to_string()),
            generators: b.generators.iter().map(|p| p.to_string()).collect(),
            empty_local: b.empty_local,
            empty_global: b.empty_global,
            dim: b.dim,
        })
        .collect();
    emit(opts, &out, || {
        let mut s = String::new();
        for b in &out {
            let kind = match b.kind {
                BranchKind::Reflection => "reflection",
                BranchKind::NonReflection => "non-reflection",
            };
            writeln!(s, "sigma {} ({kind})", b.sigma).unwrap();
            match &b.lambda {
                Some(l) => writeln!(s, "  lambda = {l}").unwrap(),
                None => writeln!(s, "  generators: {}", b.generators.join(", ")).unwrap(),
            }
            if let Some(p) = &b.pulled_back {
                writeln!(s, "  on chart = {p}").unwrap();
            }
            if let Some(e) = b.empty_local {
                writeln!(s, "  empty at origin: {}", if e { "yes" } else { "no" }).unwrap();
            }
            writeln!(s, "  empty: {}, dimension {}", if b.empty_global { "yes" } else { "no" }, b.dim).unwrap();
        }
        s
    })
}

pub fn invariants(file: &Path, opts: &Options) -> Result<Output> {
    let m = Problem::from_file(file)?.mapping(opts.cap, opts.limits)?;
    let report = full_report(&m, opts.ordering)?;
    emit(opts, &report, || format!("{report}\n"))
}

#[derive(Serialize)]
struct K2 {
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exponents: Option<Vec<u32>>,
    fix_dim: usize,
    dsigma_empty: bool,
    dsigma_dim: i64,
    k2: K2Report,
}

pub fn k2(file: &Path, sigma: Option<usize>, exponents: Option<&[u32]>, opts: &Options) -> Result<Output> {
    let p = Problem::from_file(file)?;
    let vars = p.space_vars();
    let elem = match (sigma, exponents) {
        (Some(i), None) => {
            let (g, _) = p.group(opts.cap)?;
            if i == 0 || i >= g.order() {
                return Err(Error::Input(format!("sigma must be between 1 and {}", g.order() - 1)));
            }
            g.elem(i).clone()
        }
        (None, Some(e)) => p.cyclic_element(e)?,
        _ => return Err(Error::Input("give exactly one of --sigma or --exponents".into())),
    };
    if elem.is_identity() {
        return Err(Error::Input("the identity has no K₂ component".into()));
    }
    let d = dsigma_generators(&p.equations, &elem, &vars)?;
    let basis = groebner(&d, MonOrder::DegRevLex, &opts.limits)?;
    let report = k2sigma_charts(&p.equations, &elem, &vars, &opts.limits)?;
    let out = K2 {
        sigma,
        exponents: exponents.map(<[u32]>::to_vec),
        fix_dim: elem.fix_dim,
        dsigma_empty: basis.is_unit(),
        dsigma_dim: krull_dim(&basis),
        k2: report,
    };
    emit(opts, &out, || {
        let mut s = String::new();
        writeln!(s, "fixed space dimension {}", out.fix_dim).unwrap();
        if out.dsigma_empty {
            writeln!(s, "D2 branch: empty").unwrap();
        } else {
            writeln!(s, "D2 branch: dimension {}", out.dsigma_dim).unwrap();
        }
        for c in &out.k2.charts {
            if c.empty {
                writeln!(s, "chart v{} = 1: empty", c.chart).unwrap();
            } else {
                let exc = c.exceptional_dim.map_or_else(|| "none".to_string(), |d| d.to_string());
                writeln!(
                    s,
                    "chart v{} = 1: dimension {}, off the exceptional divisor {}, exceptional {exc}",
                    c.chart, c.dim, c.off_exceptional_dim
                )
                .unwrap();
            }
        }
        if out.k2.empty() {
            writeln!(s, "K2: empty").unwrap();
        } else {
            let exc = out.k2.exceptional_dim().map_or_else(|| "none".to_string(), |d| d.to_string());
            writeln!(s, "K2: dimension {}, exceptional component {exc}", out.k2.dim()).unwrap();
        }
        s
    })
}
