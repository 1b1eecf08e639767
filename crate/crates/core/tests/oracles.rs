mod common;

use std::collections::BTreeMap;

use bergerkit::curvature::{bianchi_system, curvature_space};
use bergerkit::lie::catalog;
use bergerkit::metric::{
    build_conclusion_metric, build_example1, build_index2_metric, christoffel, curvature_at, einstein_check, flat_chart,
    pp_wave_2d, unit_sphere, walker_block, ConclusionIngredients, CorrectionTerm, Expr, Index2Ingredients, MetricChart,
};
use bergerkit::structure::{assemble, enumerate_index2, StructuredAlgebraSpec};
use common::{naive_curvature_dim, naive_rank};
use nalgebra::DMatrix;
use serde::Deserialize;

#[test]
fn curvature_dimensions_match_component_count() {
    for (n, classical) in [(2usize, 1usize), (3, 6), (4, 20)] {
        assert_eq!(n * n * (n * n - 1) / 12, classical);
        assert_eq!(naive_curvature_dim(n), classical, "component oracle n={n}");
        let g = catalog(&format!("so:{n}")).unwrap();
        assert_eq!(curvature_space(&g).unwrap().dim(), classical, "library n={n}");
        // the library's own constraint matrix, solved densely
        let sys = bianchi_system(&g);
        let unknowns = sys.ncols();
        assert_eq!(unknowns - naive_rank(sys.to_rows()), classical, "dense solve n={n}");
    }
}

#[derive(Deserialize)]
struct CountCase {
    n: usize,
    h: Vec<String>,
    counts: BTreeMap<String, usize>,
}

#[test]
fn index2_counts_match_script_fixture() {
    let cases: Vec<CountCase> = serde_json::from_str(include_str!("../fixtures/index2_counts.json")).unwrap();
    assert!(!cases.is_empty());
    for case in cases {
        let specs = enumerate_index2(case.n, &case.h).unwrap();
        let mut got: BTreeMap<String, usize> = (1..=7).map(|f| (f.to_string(), 0)).collect();
        for s in &specs {
            *got.get_mut(&s.family.unwrap().to_string()).unwrap() += 1;
        }
        assert_eq!(got, case.counts, "n={} h={:?}", case.n, case.h);
        for s in &specs {
            assemble(s).unwrap_or_else(|e| panic!("{}: {e}", s.label));
        }
    }
}

fn sphere_samples(c: &MetricChart) -> Vec<Vec<f64>> {
    c.sample_points(6, 11)
}

#[test]
fn pp_wave_curvature_by_hand() {
    // 2dvdu + Λv²du² on (v, u): Γ^v_{uu} = Λ²v³, Γ^u_{uu} = −Λv, Γ^v_{vu} = Λv,
    // R(∂v, ∂u) = [[Λ, Λ²v²], [0, −Λ]] (one independent component), Ric = Λg.
    let lambda = 0.7;
    let c = pp_wave_2d(lambda);
    for p in c.sample_points(4, 2) {
        let v = p[0];
        let g = christoffel(&c, &p).unwrap();
        assert!((g.get(0, 1, 1) - lambda * lambda * v.powi(3)).abs() < 1e-13);
        assert!((g.get(1, 1, 1) + lambda * v).abs() < 1e-13);
        assert!((g.get(0, 0, 1) - lambda * v).abs() < 1e-13);
        assert!(g.get(1, 0, 1).abs() < 1e-13 && g.get(0, 0, 0).abs() < 1e-13);
        let r = curvature_at(&c, &p).unwrap();
        let expect = DMatrix::from_row_slice(2, 2, &[lambda, lambda * lambda * v * v, 0.0, -lambda]);
        assert!((r.endomorphism(0, 1) - &expect).amax() < 1e-12);
        assert!((r.endomorphism(1, 0) + &expect).amax() < 1e-12);
        assert!((r.ricci() - c.metric_at(&p) * lambda).amax() < 1e-12);
    }
}

#[test]
fn conclusion_builder_reproduces_example1_and_family4() {
    let s2 = unit_sphere();
    let h0_src = "sin(theta)*cos(phi)/(1 + cos(theta))";
    let h0 = s2.parse(h0_src).unwrap();
    let ex1 = build_example1(&s2, &h0, 1.0).unwrap();

    let spec_json = include_str!("../fixtures/algebras/example1_n2.json");
    let spec = StructuredAlgebraSpec::from_json(spec_json).unwrap();
    let f1 = walker_block("f1", &[&["v1^2"]]).unwrap();
    let ing = ConclusionIngredients {
        lambda: 1.0,
        f: vec![f1.clone()],
        h: vec![s2.clone()],
        corrections: vec![CorrectionTerm::N {
            i: 0,
            alpha: 0,
            entries: vec![vec![h0_src.to_string()]],
        }],
    };
    let g = build_conclusion_metric(&spec, &ing).unwrap();
    assert_eq!(g.dim(), ex1.dim());
    for p in sphere_samples(&ex1) {
        assert!((g.metric_at(&p) - ex1.metric_at(&p)).amax() < 1e-15);
    }

    // no corrections → product metric f1 + h
    let prod = build_conclusion_metric(&spec, &ConclusionIngredients { corrections: vec![], ..ing.clone() }).unwrap();
    let ctrl = build_example1(&s2, &Expr::zero(), 1.0).unwrap();
    for p in sphere_samples(&ex1) {
        assert!((prod.metric_at(&p) - ctrl.metric_at(&p)).amax() < 1e-15);
    }
    assert!(einstein_check(&prod, 1.0, &sphere_samples(&prod), 1e-10).unwrap().pass);

    // dependency rules are enforced: N^{1α} may only depend on x_α
    let bad = ConclusionIngredients {
        corrections: vec![CorrectionTerm::N {
            i: 0,
            alpha: 0,
            entries: vec![vec!["u1_1*theta".into()]],
        }],
        ..ing
    };
    assert!(build_conclusion_metric(&spec, &bad).is_err());

    // family 4 with both N-slots on the sphere
    let specs = enumerate_index2(2, &["so:2".to_string()]).unwrap();
    let fam4 = specs
        .iter()
        .find(|s| s.family == Some(4) && s.n_block(0, 0).is_some() && s.n_block(1, 0).is_some())
        .expect("family 4 with both N slots");
    let h2_src = "sin(theta)*sin(phi)/(1 + cos(theta))";
    let direct = build_index2_metric(
        4,
        &Index2Ingredients {
            lambda: 1.0,
            h: s2.clone(),
            h1: h0.clone(),
            h2: s2.parse(h2_src).unwrap(),
            h12: None,
            f_block: None,
        },
    )
    .unwrap();
    let conc = build_conclusion_metric(
        fam4,
        &ConclusionIngredients {
            lambda: 1.0,
            f: vec![f1.clone(), f1],
            h: vec![s2],
            corrections: vec![
                CorrectionTerm::N { i: 0, alpha: 0, entries: vec![vec![h0_src.into()]] },
                CorrectionTerm::N { i: 1, alpha: 0, entries: vec![vec![h2_src.into()]] },
            ],
        },
    )
    .unwrap();
    for p in sphere_samples(&direct) {
        assert!((direct.metric_at(&p) - conc.metric_at(&p)).amax() < 1e-15);
    }
}

#[test]
fn flat_index2_family4_is_einstein() {
    let h = flat_chart(&[1, 1], &["x1", "x2"], 1.0).unwrap();
    let ing = Index2Ingredients {
        lambda: 0.0,
        h1: h.parse("exp(x1)*cos(x2)").unwrap(),
        h2: h.parse("x1*x2").unwrap(),
        h12: None,
        f_block: None,
        h,
    };
    let g = build_index2_metric(4, &ing).unwrap();
    assert!(einstein_check(&g, 0.0, &g.sample_points(10, 4), 1e-10).unwrap().pass);
}
