//! Writes the bundled chart and algebra fixtures.
//!
//! cargo run --example export_fixtures -- crates/core/fixtures

use std::fs;
use std::path::Path;

use bergerkit::lie::{catalog, so_basis};
use bergerkit::linalg::{int, RatMatrix};
use bergerkit::metric::{
    build_example1, build_index2_metric, flat_chart, pp_wave_2d, unit_sphere, Expr, Index2Ingredients, MetricChart,
};
use bergerkit::structure::{enumerate_index2, LBlock, SpanBlock, StructuredAlgebraSpec};

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), format!("{text}\n")).expect("write fixture");
    println!("wrote {}", dir.join(name).display());
}

fn example1_spec(n: usize) -> StructuredAlgebraSpec {
    StructuredAlgebraSpec {
        label: format!("gl(1)+so({n})|x R^{n}"),
        family: None,
        v_dims: vec![1],
        l_blocks: vec![LBlock {
            name: format!("so({n})"),
            signs: vec![-1; n],
            h: so_basis(&RatMatrix::identity(n).neg()),
        }],
        f: vec![vec![RatMatrix::identity(1)]],
        f_off: vec![],
        n_blocks: vec![SpanBlock {
            i: 0,
            j: 0,
            gens: (0..n).map(|r| RatMatrix::from_triplets(n, 1, [(r, 0, int(1))])).collect(),
        }],
        c_blocks: vec![],
    }
}

fn main() {
    let root = std::env::args().nth(1).unwrap_or_else(|| "crates/core/fixtures".into());
    let charts = Path::new(&root).join("charts");
    let algebras = Path::new(&root).join("algebras");
    fs::create_dir_all(&charts).unwrap();
    fs::create_dir_all(&algebras).unwrap();

    let s2 = unit_sphere();
    write(&charts, "unit_sphere.json", &s2.to_json());
    write(&charts, "flat_r13.json", &flat_chart(&[-1, 1, 1, 1], &["t", "x", "y", "z"], 1.0).unwrap().with_name("flat_r13").to_json());
    write(&charts, "pp_wave_2d.json", &pp_wave_2d(1.0).to_json());

    let h0 = s2.parse("sin(theta)*cos(phi)/(1 + cos(theta))").unwrap();
    let ex1 = build_example1(&s2, &h0, 1.0).unwrap().with_name("example1");
    write(&charts, "example1.json", &ex1.to_json());
    let control = build_example1(&s2, &Expr::zero(), 1.0).unwrap().with_name("example1_control");
    write(&charts, "example1_control.json", &control.to_json());
    // same chart with a non-harmonic H0; build_example1 would refuse it
    let bad = MetricChart::from_strings(
        "example1_nonharmonic",
        &["v", "theta", "phi", "u"],
        &[
            &["0", "0", "0", "1"],
            &["0", "1", "0", "0"],
            &["0", "0", "sin(theta)^2", "0"],
            &["1", "0", "0", "v^2 + cos(theta)"],
        ],
        &[(-1.0, 1.0), (0.3, 2.5), (-2.5, 2.5), (-1.0, 1.0)],
    )
    .unwrap();
    write(&charts, "example1_nonharmonic.json", &bad.to_json());

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
        let g = build_index2_metric(family, &ing).unwrap().with_name(format!("index2_family{family}"));
        write(&charts, &format!("index2_family{family}.json"), &g.to_json());
    }

    write(&algebras, "so3.json", &catalog("so:3").unwrap().to_json());
    write(&algebras, "example1_n2.json", &example1_spec(2).to_json());
    let specs = enumerate_index2(2, &["so:2".to_string()]).unwrap();
    write(&algebras, "index2_n2_so2.json", &serde_json::to_string_pretty(&specs).unwrap());
}
