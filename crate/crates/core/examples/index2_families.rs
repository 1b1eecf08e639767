//! Enumerates the index-2 families for a Riemannian holonomy and prints the
//! necessary-condition report of each instance.
//!
//! cargo run --release --example index2_families -- 2 so:2

use bergerkit::structure::{enumerate_index2, validate_all};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(2, |s| s.parse().expect("n"));
    let mut factors: Vec<String> = args.collect();
    if factors.is_empty() && n > 0 {
        factors.push(format!("so:{n}"));
    }
    let specs = enumerate_index2(n, &factors).expect("valid holonomy");
    for (spec, report) in specs.iter().zip(validate_all(&specs)) {
        match report {
            Ok(r) => println!(
                "{:<44} dim={:<3} R1={:<5} L(R1)=g:{:<5} weak-irr={:<12} h-proj={:<5} ids={:<5} N/C-split={}",
                spec.label,
                r.dim,
                r.r1_nonempty,
                r.l_r1_equals_g,
                r.weakly_irreducible.label(),
                r.h_projection_decomposes,
                r.contains_identities,
                r.nilpotent_part_splits
            ),
            Err(e) => println!("{:<44} error: {e}", spec.label),
        }
    }
}
