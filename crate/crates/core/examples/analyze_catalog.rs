//! Curvature report for catalog algebras given on the command line.
//!
//! cargo run --release --example analyze_catalog -- so:3 u:1,1 sl:2:R@so(2,2)

use bergerkit::curvature::analyze;
use bergerkit::lie::catalog;

fn main() {
    let ids: Vec<String> = std::env::args().skip(1).collect();
    let ids = if ids.is_empty() {
        vec!["so:3".to_string(), "u:1,1".to_string(), "sl:2:R@so(2,2)".to_string()]
    } else {
        ids
    };
    for id in ids {
        let g = catalog(&id).expect("catalog id");
        let r = analyze(&g).expect("metric algebra");
        println!(
            "{:<18} dim={:<3} R={:<4} R0={:<4} R1={:<5} LR={:<3} LR1={:<3} berger={:<5} einstein={:<5} nabla={:<4} sym={:<5} prol=({:?},{:?})",
            id, r.dim_g, r.dim_R, r.dim_R0, r.R1_nonempty, r.dim_LR, r.dim_LR1, r.is_berger,
            r.is_einstein_berger, r.dim_nabla, r.is_symmetric_berger, r.dim_prolongation_1, r.dim_prolongation_2
        );
    }
}
