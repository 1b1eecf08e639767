//! Index-2 Walker charts of families 4 (μ = 0) and 5 (μ = 1) over a flat
//! plane with Λ = 0: Einstein residual and holonomy dimension of each.

use bergerkit::metric::{build_index2_metric, einstein_check, flat_chart, holonomy_estimate, HolonomyConfig, Index2Ingredients};

fn main() {
    let h = flat_chart(&[1, 1], &["x1", "x2"], 1.0).unwrap();
    let ing = Index2Ingredients {
        lambda: 0.0,
        h1: h.parse("x1^2 - x2^2").unwrap(),
        h2: h.parse("x1*x2").unwrap(),
        h12: None,
        f_block: None,
        h,
    };
    for family in [4, 5] {
        let g = build_index2_metric(family, &ing).unwrap();
        let e = einstein_check(&g, ing.lambda, &g.sample_points(20, 1), 1e-8).unwrap();
        let hol = holonomy_estimate(&g, &g.center(), &HolonomyConfig::default()).unwrap();
        println!(
            "family {family}: Einstein residual {:.2e} (pass {}), holonomy dim {} gap {:.2e}",
            e.max_residual, e.pass, hol.dimension, hol.span.gap
        );
        let sv: Vec<String> = hol.span.singular_values.iter().map(|s| format!("{s:.2e}")).collect();
        println!("  singular values {}", sv.join(" "));
    }
}
