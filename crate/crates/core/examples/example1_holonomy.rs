//! Lorentzian Einstein metric `2dvdu + h + (Λv² + H₀)du²` over the round
//! sphere: Einstein residual and numerical holonomy dimension, with and
//! without the harmonic term.

use bergerkit::metric::{build_example1, einstein_check, holonomy_estimate, unit_sphere, Expr, HolonomyConfig};

fn main() {
    let h = unit_sphere();
    let lambda = 1.0;
    for (label, h0) in [
        ("H0 = stereographic x", h.parse("sin(theta)*cos(phi)/(1 + cos(theta))").unwrap()),
        ("H0 = 0", Expr::zero()),
    ] {
        let g = build_example1(&h, &h0, lambda).expect("ingredients pass their checks");
        let samples = g.sample_points(20, 1);
        let e = einstein_check(&g, lambda, &samples, 1e-8).unwrap();
        let hol = holonomy_estimate(&g, &g.center(), &HolonomyConfig::default()).unwrap();
        println!("{label}");
        println!("  Einstein residual {:.2e} (pass {})", e.max_residual, e.pass);
        println!(
            "  holonomy dim {} gap {:.2e} skew {:.1e} drift {:.1e}",
            hol.dimension, hol.span.gap, hol.max_skew_residual, hol.max_transport_drift
        );
        let sv: Vec<String> = hol.span.singular_values.iter().map(|s| format!("{s:.2e}")).collect();
        println!("  singular values {}", sv.join(" "));
    }
}
