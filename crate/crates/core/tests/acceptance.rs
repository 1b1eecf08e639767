//! Acceptance gate: one line per criterion, non-zero exit if any fails.
//!
//! cargo test --release --test acceptance

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bergerkit::curvature::{analyze, bianchi_system, curvature_space, einstein_space};
use bergerkit::lie::{catalog, centralizer, decorated_bracket, decorated_project, so_basis, DecoratedElement, DecoratedFrame, MatrixLieAlgebra};
use bergerkit::linalg::RatMatrix;
use bergerkit::metric::{
    build_example1, build_index2_metric, curvature_at, einstein_check, flat_chart, holonomy_estimate, ricci_at, unit_sphere,
    Expr, HolonomyConfig, HolonomyEstimate, Index2Ingredients, MetricChart,
};
use bergerkit::quadratic::{change_basis, standard_witt, verify_witt, witt_rebase, RebaseData, SplitSignature};
use bergerkit::structure::{assemble, enumerate_index2, family4_without_c, is_weakly_irreducible, Decision};
use common::{naive_curvature_dim, naive_rank, rand_decorated, rand_matrix, rand_skew, signs, small_splits};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use std::collections::BTreeMap;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1() -> Check {
    for (n, expect) in [(2usize, 1usize), (3, 6), (4, 20)] {
        ensure(n * n * (n * n - 1) / 12 == expect, "closed form")?;
        let g = catalog(&format!("so:{n}")).map_err(|e| e.to_string())?;
        let lib = curvature_space(&g).map_err(|e| e.to_string())?.dim();
        let sys = bianchi_system(&g);
        let dense = sys.ncols() - naive_rank(sys.to_rows());
        let naive = naive_curvature_dim(n);
        ensure(lib == expect && dense == expect && naive == expect, format!("n={n}: library {lib}, dense {dense}, naive {naive}"))?;
    }
    Ok("dims 1, 6, 20".into())
}

fn r1_nonempty(id: &str) -> Result<bool, String> {
    let g = catalog(id).map_err(|e| e.to_string())?;
    let space = curvature_space(&g).map_err(|e| e.to_string())?;
    Ok(!einstein_space(&g, &space).map_err(|e| e.to_string())?.is_empty())
}

fn c2() -> Check {
    for n in [2, 3] {
        ensure(!r1_nonempty(&format!("sl:{n}:R@so({n},{n})"))?, format!("R1(sl({n})) nonempty"))?;
        ensure(r1_nonempty(&format!("gl:{n}:R@so({n},{n})"))?, format!("R1(gl({n})) empty"))?;
    }
    Ok("sl(n) empty, gl(n) nonempty, n = 2, 3".into())
}

fn einstein_sublist() -> Vec<String> {
    let mut ids = Vec::new();
    for total in 2..=5 {
        for p in 0..=total {
            ids.push(format!("so:{p},{}", total - p));
        }
    }
    for total in 1..=2 {
        for r in 0..=total {
            ids.push(format!("u:{r},{}", total - r));
        }
    }
    ids.push("gl:1:R@so(1,1)".into());
    ids.push("gl:2:R@so(2,2)".into());
    ids.push("gl:1:C@so(2,2)".into());
    ids
}

fn c3() -> Check {
    let yes = einstein_sublist();
    for id in &yes {
        let g = catalog(id).map_err(|e| e.to_string())?;
        ensure(analyze(&g).map_err(|e| e.to_string())?.is_einstein_berger, format!("{id} not Einstein-Berger"))?;
    }
    let no = ["su:2,0", "su:3,0", "sl:2:R@so(2,2)", "sl:3:R@so(3,3)"];
    for id in no {
        let g = catalog(id).map_err(|e| e.to_string())?;
        let r = analyze(&g).map_err(|e| e.to_string())?;
        ensure(!r.is_einstein_berger && !r.R1_nonempty, format!("{id} has R1 nonempty"))?;
    }
    Ok(format!("{} positive, {} negative", yes.len(), no.len()))
}

fn c4() -> Check {
    let ids = einstein_sublist();
    for id in &ids {
        let g = catalog(id).map_err(|e| e.to_string())?;
        let metric = g.metric().ok_or(format!("{id} has no metric"))?.clone();
        let n = g.ambient_dim();
        let ambient = MatrixLieAlgebra::new("so", n, so_basis(metric.gram()), Some(metric)).map_err(|e| e.to_string())?;
        let z = centralizer(&g, &ambient);
        ensure(g.subspace().contains(&z).map_err(|e| e.to_string())?, format!("centralizer of {id} leaves g"))?;
    }
    Ok(format!("{} algebras", ids.len()))
}

fn c5() -> Check {
    let splits = small_splits();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..100 {
        let (m, r, s) = splits[rng.gen_range(0..splits.len())];
        let frame = DecoratedFrame::new(m, signs(r, s));
        let e = frame.e();
        let x = rand_decorated(&mut rng, &frame);
        let y = rand_decorated(&mut rng, &frame);
        let zero = DecoratedElement::zero(&frame);
        let levi = |d: &DecoratedElement| DecoratedElement { b: d.b.clone(), a: d.a.clone(), ..zero.clone() };
        let nil = |d: &DecoratedElement| DecoratedElement { x: d.x.clone(), c: d.c.clone(), ..zero.clone() };
        let br = |p: &DecoratedElement, q: &DecoratedElement| decorated_bracket(&frame, p, q);

        let f1 = DecoratedElement { b: x.b.commutator(&y.b), a: x.a.commutator(&y.a), ..zero.clone() };
        let f2 = DecoratedElement {
            x: x.a.mul(&y.x).add(&y.x.mul(&x.b.transpose())),
            c: x.b.mul(&y.c).add(&y.c.mul(&x.b.transpose())),
            ..zero.clone()
        };
        let xo = DecoratedElement { x: x.x.clone(), ..zero.clone() };
        let yo = DecoratedElement { x: y.x.clone(), ..zero.clone() };
        let f3 = DecoratedElement {
            c: x.x.transpose().mul(&e).mul(&y.x).neg().add(&y.x.transpose().mul(&e).mul(&x.x)),
            ..zero.clone()
        };
        ensure(br(&levi(&x), &levi(&y)) == f1, format!("case {case}: levi bracket"))?;
        ensure(br(&levi(&x), &nil(&y)) == f2, format!("case {case}: levi-nilradical bracket"))?;
        ensure(br(&xo, &yo) == f3, format!("case {case}: X-X bracket"))?;
    }
    for case in 0..100 {
        let (m, r, s) = splits[rng.gen_range(0..splits.len())];
        let frame = DecoratedFrame::new(m, signs(r, s));
        let [a, b, c] = [0, 1, 2].map(|_| rand_decorated(&mut rng, &frame));
        let br = |p: &DecoratedElement, q: &DecoratedElement| decorated_bracket(&frame, p, q);
        let sum = br(&a, &br(&b, &c)).add(&br(&b, &br(&c, &a))).add(&br(&c, &br(&a, &b)));
        ensure(sum == DecoratedElement::zero(&frame), format!("Jacobi case {case}"))?;
    }
    Ok("100 bracket pairs, 100 Jacobi triples".into())
}

fn c6() -> Check {
    let splits = small_splits();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..100 {
        let (m, r, s) = splits[rng.gen_range(0..splits.len())];
        let split = SplitSignature::new(m, r, s);
        let frame = DecoratedFrame::from_split(split);
        let (space, basis) = standard_witt(split);
        let x = rand_matrix(&mut rng, r + s, m);
        let c = rand_skew(&mut rng, m);
        let rebased = witt_rebase(&basis, &RebaseData::new(x.clone(), c.clone())).map_err(|e| e.to_string())?;
        ensure(verify_witt(&rebased, &space), format!("case {case}: rebased basis is not Witt"))?;
        let xi = DecoratedElement { b: RatMatrix::identity(m), x, c, ..DecoratedElement::zero(&frame) };
        let clean = witt_rebase(&basis, &RebaseData::cleaning(&xi.x, &xi.c)).map_err(|e| e.to_string())?;
        ensure(verify_witt(&clean, &space), format!("case {case}: cleaning basis is not Witt"))?;
        let moved = decorated_project(&frame, &change_basis(&xi.assemble(&frame), &basis, &clean)).map_err(|e| e.to_string())?;
        ensure(moved.x.is_zero() && moved.c.is_zero(), format!("case {case}: X or C survives"))?;
    }
    Ok("100 random (X, C)".into())
}

#[derive(Deserialize)]
struct CountCase {
    n: usize,
    h: Vec<String>,
    counts: BTreeMap<String, usize>,
}

fn c7() -> Check {
    let zero = enumerate_index2(0, &[]).map_err(|e| e.to_string())?;
    let fams: Vec<_> = zero.iter().map(|s| s.family).collect();
    ensure(fams == [Some(6), Some(7)], format!("n = 0 gives {fams:?}"))?;

    let cases: Vec<CountCase> = serde_json::from_str(include_str!("../fixtures/index2_counts.json")).map_err(|e| e.to_string())?;
    let case = cases.iter().find(|c| c.n == 2 && c.h == ["so:2"]).ok_or("fixture lacks n = 2, so(2)")?;
    let specs = enumerate_index2(2, &case.h).map_err(|e| e.to_string())?;
    let mut got: BTreeMap<String, usize> = (1..=7).map(|f| (f.to_string(), 0)).collect();
    for s in &specs {
        *got.entry(s.family.map_or("none".into(), |f| f.to_string())).or_default() += 1;
    }
    ensure(got == case.counts, format!("counts {got:?} vs fixture {:?}", case.counts))?;

    let mut checked = 0;
    for s in zero.iter().chain(&specs) {
        let a = assemble(s).map_err(|e| format!("{}: {e}", s.label))?;
        ensure(a.algebra.check_closure().is_ok(), format!("{} not closed", s.label))?;
        let both_n = (0..s.v_dims.len()).all(|i| (0..s.l_blocks.len()).any(|al| s.n_block(i, al).is_some()));
        if s.has_c() || (s.v_dims.len() > 1 && both_n) {
            ensure(is_weakly_irreducible(&a.algebra) == Decision::Yes, format!("{} not weakly irreducible", s.label))?;
            checked += 1;
        }
    }
    for pattern in [(true, false), (false, true)] {
        let ctrl = family4_without_c(2, &case.h, &[pattern]).map_err(|e| e.to_string())?;
        let a = assemble(&ctrl).map_err(|e| e.to_string())?;
        ensure(matches!(is_weakly_irreducible(&a.algebra), Decision::No { .. }), format!("control {} irreducible", ctrl.label))?;
    }
    Ok(format!("families 6-7 at n = 0; counts {:?}; {checked} weakly irreducible; controls reducible", case.counts))
}

fn estimate(chart: &MetricChart) -> Result<HolonomyEstimate, String> {
    holonomy_estimate(chart, &chart.center(), &HolonomyConfig::default()).map_err(|e| e.to_string())
}

fn c8() -> Check {
    let s2 = unit_sphere();
    let h0 = s2.parse("sin(theta)*cos(phi)/(1 + cos(theta))").map_err(|e| e.to_string())?;
    let g = build_example1(&s2, &h0, 1.0).map_err(|e| e.to_string())?;
    let e = einstein_check(&g, 1.0, &g.sample_points(20, 0), 1e-8).map_err(|e| e.to_string())?;
    ensure(e.pass, format!("Einstein residual {:e}", e.max_residual))?;
    let est = estimate(&g)?;
    ensure(est.dimension == 4 && est.span.gap >= 1e3, format!("dimension {}, gap {:e}", est.dimension, est.span.gap))?;
    let ctrl = build_example1(&s2, &Expr::zero(), 1.0).map_err(|e| e.to_string())?;
    let ce = estimate(&ctrl)?;
    ensure(ce.dimension == 2, format!("control dimension {}", ce.dimension))?;
    Ok(format!("residual {:.1e}, dimension 4, gap {:.1e}, control dimension 2", e.max_residual, est.span.gap))
}

fn c9() -> Check {
    let h = flat_chart(&[1, 1], &["x1", "x2"], 1.0).map_err(|e| e.to_string())?;
    let ing = Index2Ingredients {
        lambda: 0.0,
        h1: h.parse("x1^2 - x2^2").map_err(|e| e.to_string())?,
        h2: h.parse("x1*x2").map_err(|e| e.to_string())?,
        h12: None,
        f_block: None,
        h,
    };
    let mut dims = Vec::new();
    let mut failures = Vec::new();
    for family in [4, 5] {
        let g = build_index2_metric(family, &ing).map_err(|e| e.to_string())?;
        let e = einstein_check(&g, 0.0, &g.sample_points(20, 0), 1e-8).map_err(|e| e.to_string())?;
        if !e.pass {
            failures.push(format!("family {family} Einstein residual {:.3e}", e.max_residual));
        }
        dims.push(estimate(&g)?.dimension);
    }
    if dims[1] < dims[0] + 1 {
        failures.push(format!("dimensions {dims:?}"));
    }
    let detail = format!("holonomy dimensions family 4: {}, family 5: {}", dims[0], dims[1]);
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{}; {detail}", failures.join("; ")))
    }
}

fn c10() -> Check {
    let s2 = unit_sphere();
    let mut worst = (0.0f64, 0.0f64);
    for p in s2.sample_points(20, 0) {
        let r = curvature_at(&s2, &p).map_err(|e| e.to_string())?;
        let ric = ricci_at(&s2, &p).map_err(|e| e.to_string())?;
        worst.0 = worst.0.max(r.bianchi_residual());
        worst.1 = worst.1.max((ric - s2.metric_at(&p)).amax());
    }
    ensure(worst.0 <= 1e-9 && worst.1 <= 1e-8, format!("Bianchi {:e}, Ric - g {:e}", worst.0, worst.1))?;
    // exact side: constant curvature on so(2) has Ric = g with the same convention
    let g = catalog("so:2").map_err(|e| e.to_string())?;
    let space = curvature_space(&g).map_err(|e| e.to_string())?;
    let r1 = einstein_space(&g, &space).map_err(|e| e.to_string())?;
    ensure(r1.particular.is_some(), "exact Ric = g has no solution for so(2)")?;
    Ok(format!("Bianchi {:.1e}, |Ric - g| {:.1e}", worst.0, worst.1))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check, Duration); 10] = [
        ("curvature-space dimensions", c1, Duration::from_secs(10)),
        ("Ricci-flat criterion", c2, Duration::from_secs(30)),
        ("Einstein-list spot checks", c3, Duration::from_secs(120)),
        ("centralizers", c4, Duration::from_secs(60)),
        ("decorated bracket table", c5, Duration::MAX),
        ("Witt rebase", c6, Duration::MAX),
        ("index-2 enumeration", c7, Duration::from_secs(120)),
        ("Example 1 metric", c8, Duration::from_secs(120)),
        ("families 4 and 5 metrics", c9, Duration::from_secs(180)),
        ("numeric vs exact curvature", c10, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if took <= limit => (true, d),
            Ok(d) => (false, format!("{d}; took {took:.1?}, limit {limit:?}")),
            Err(d) => (false, d),
        };
        failed += usize::from(!ok);
        println!("criterion {:>2} {}: {name} ({took:.2?}) {detail}", i + 1, if ok { "PASS" } else { "FAIL" });
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
