mod oracles;

use oracles::{macaulay_codim, problem_path, proportional};
use reflmap::curveinv::{full_report, InvariantReport, Ordering};
use reflmap::group::DEFAULT_MAX_ORDER;
use reflmap::poly::{groebner, krull_dim, minors, quotient_dim, Dim, Limits, MonOrder};
use reflmap::problem::Problem;
use reflmap::refmap::{alpha_sigma, dsigma_generators, ReflMapping};
use reflmap::{CycloField, Poly, PolyRing, Role};

fn problem(name: &str) -> Problem {
    Problem::from_file(&problem_path(name)).unwrap()
}

fn mapping(name: &str) -> ReflMapping {
    problem(name).mapping(DEFAULT_MAX_ORDER, Limits::default().verified()).unwrap()
}

fn flags(k: usize) -> Vec<u32> {
    (0..5).map(|j| u32::from(j < k)).collect()
}

#[test]
fn alpha_of_the_five_factor_example() {
    let p = problem("k2c3c5.json");
    let field = p.field.clone();
    let vars = p.space_vars();
    let ring = p.equations[0].ring().clone();
    let n = field.conductor() as i64;
    let xi_minus_one = |d: i64| &ring.constant(field.zeta_pow(n / d)) - &ring.one();
    let zero = ring.zero();
    let e: Vec<Poly> = [2, 3, 5, 7, 11].iter().map(|&d| xi_minus_one(d)).collect();
    let two = ring.int(2);
    let expected = [
        vec![e[0].clone(), e[1].clone(), e[2].clone(), -&e[3], zero.clone()],
        vec![e[0].clone(), -&e[1], &two * &e[2], zero.clone(), -&e[4]],
    ];
    let sigma5 = p.cyclic_element(&flags(5)).unwrap();
    let alpha = alpha_sigma(&p.equations, &sigma5, &vars).unwrap();
    assert_eq!(alpha.len(), 2);
    for (row, want) in alpha.iter().zip(&expected) {
        assert_eq!(row, want);
    }
    // The smaller elements use the leading columns.
    for k in 1..5 {
        let sigma = p.cyclic_element(&flags(k)).unwrap();
        let a = alpha_sigma(&p.equations, &sigma, &vars).unwrap();
        for (row, want) in a.iter().zip(&expected) {
            assert_eq!(&row[..], &want[..k]);
        }
    }
    // Ten 2x2 minors, each the expanded determinant of two columns.
    let ms = minors(&alpha, 2, &ring).unwrap();
    assert_eq!(ms.len(), 10);
    let mut k = 0;
    for i in 0..5 {
        for j in i + 1..5 {
            let by_hand = &(&expected[0][i] * &expected[1][j]) - &(&expected[0][j] * &expected[1][i]);
            assert_eq!(ms[k], by_hand, "columns {i},{j}");
            k += 1;
        }
    }
}

#[test]
fn double_point_branches_of_the_five_factor_example() {
    let p = problem("k2c3c5.json");
    let vars = p.space_vars();
    let limits = Limits::default().verified();
    for k in 1..=5 {
        let sigma = p.cyclic_element(&flags(k)).unwrap();
        let gens = dsigma_generators(&p.equations, &sigma, &vars).unwrap();
        let gb = groebner(&gens, MonOrder::DegRevLex, &limits).unwrap();
        // Injective α gives a unit minor; otherwise the branch is a line.
        let expected = if k <= 2 { -1 } else { 1 };
        assert_eq!(krull_dim(&gb), expected, "sigma {k}");
    }
}

#[test]
fn image_facts() {
    let f1 = mapping("f1_d8.json");
    let img = f1.image_equation().unwrap();
    assert!(f1.image_reduced(&img).unwrap());
    assert!(f1.generically_one_to_one().unwrap());

    let t0 = mapping("s4_t0.json");
    let img = t0.image_equation().unwrap();
    assert!(!t0.image_reduced(&img).unwrap());
    assert_eq!(t0.setwise_stabilizer().unwrap(), vec![0, 1, 3, 5]);
    assert_eq!(t0.pointwise_stabilizer().unwrap().len(), 2);

    let fold = mapping("fold.json");
    let g = fold.image_equation().unwrap().g;
    let want = g.ring().parse("X^2*Y - Z^2").unwrap();
    assert!(proportional(&g, &want), "{g}");
}

#[test]
fn report_round_trips_through_json() {
    let m = mapping("f2_d8.json");
    for ordering in [Ordering::ReflectionsFirst, Ordering::Table] {
        let rep = full_report(&m, ordering).unwrap();
        let text = serde_json::to_string(&rep).unwrap();
        let back: InvariantReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rep);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in ["M", "Delta", "I", "mu_total", "delta_total"] {
            assert!(value.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let a = full_report(&mapping("s4_chart.json"), Ordering::ReflectionsFirst).unwrap();
    let b = full_report(&mapping("s4_chart.json"), Ordering::ReflectionsFirst).unwrap();
    assert_eq!(a, b);
}

#[test]
fn quotient_dimension_of_fixed_ideals() {
    let field = CycloField::new(1).unwrap();
    let ring = PolyRing::new(&field, [("x", Role::Space), ("y", Role::Space), ("z", Role::Space)]).unwrap();
    let cases = [
        (vec!["x^2 - y", "y^2 - z", "z^2 - x"], 8),
        (vec!["x^3 + y*z", "y^2 - x*z", "z^2 + x*y + x"], 0),
        (vec!["x^2", "y^2", "z^2", "x*y*z"], 7),
    ];
    for (gens, expect) in cases {
        let gens: Vec<Poly> = gens.iter().map(|g| ring.parse(g).unwrap()).collect();
        let gb = groebner(&gens, MonOrder::DegRevLex, &Limits::default().verified()).unwrap();
        let Dim::Finite(d) = quotient_dim(&gb) else { panic!("infinite") };
        if expect > 0 {
            assert_eq!(d, expect);
        }
        // The top-degree forms are pure powers, so degree 8 is past the
        // point where the truncated Macaulay span is the truncated ideal.
        assert_eq!(d as usize, macaulay_codim(&gens, 8));
    }
}
