mod common;

use bergerkit::curvature::{curvature_space, ricci};
use bergerkit::lie::{catalog, decorated_bracket, decorated_project, DecoratedElement, DecoratedFrame};
use bergerkit::linalg::RatMatrix;
use bergerkit::metric::{
    build_example1, christoffel, curvature_at, parallel_transport, unit_sphere, MetricChart, Path,
};
use bergerkit::quadratic::{change_basis, standard_witt, verify_witt, witt_rebase, RebaseData, SplitSignature};
use common::{rand_decorated, rand_matrix, rand_rat, rand_skew, signs, small_splits};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn split_strategy() -> impl Strategy<Value = (usize, usize, usize)> {
    let splits = small_splits();
    (0..splits.len()).prop_map(move |i| splits[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rebase_keeps_witt_gram((m, r, s) in split_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let split = SplitSignature::new(m, r, s);
        let (space, basis) = standard_witt(split);
        let data = RebaseData::new(rand_matrix(&mut rng, r + s, m), rand_skew(&mut rng, m));
        let rebased = witt_rebase(&basis, &data).unwrap();
        prop_assert!(verify_witt(&rebased, &space));
        for i in 0..m {
            prop_assert_eq!(rebased.p(i), basis.p(i));
        }
    }

    #[test]
    fn cleaning_rebase_removes_x_and_c((m, r, s) in split_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let split = SplitSignature::new(m, r, s);
        let frame = DecoratedFrame::from_split(split);
        let (space, basis) = standard_witt(split);
        let xi = DecoratedElement {
            b: RatMatrix::identity(m),
            x: rand_matrix(&mut rng, r + s, m),
            c: rand_skew(&mut rng, m),
            ..DecoratedElement::zero(&frame)
        };
        let clean = witt_rebase(&basis, &RebaseData::cleaning(&xi.x, &xi.c)).unwrap();
        prop_assert!(verify_witt(&clean, &space));
        let moved = decorated_project(&frame, &change_basis(&xi.assemble(&frame), &basis, &clean)).unwrap();
        prop_assert_eq!(moved, DecoratedElement { b: RatMatrix::identity(m), ..DecoratedElement::zero(&frame) });
    }

    #[test]
    fn decorated_bracket_table((m, r, s) in split_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let frame = DecoratedFrame::new(m, signs(r, s));
        let e = frame.e();
        let x = rand_decorated(&mut rng, &frame);
        let y = rand_decorated(&mut rng, &frame);
        let zero = DecoratedElement::zero(&frame);
        let levi = |d: &DecoratedElement| DecoratedElement { b: d.b.clone(), a: d.a.clone(), ..zero.clone() };
        let nil = |d: &DecoratedElement| DecoratedElement { x: d.x.clone(), c: d.c.clone(), ..zero.clone() };

        let z = decorated_bracket(&frame, &levi(&x), &levi(&y));
        prop_assert_eq!(&z.b, &x.b.commutator(&y.b));
        prop_assert_eq!(&z.a, &x.a.commutator(&y.a));
        prop_assert!(z.x.is_zero() && z.c.is_zero());

        let z = decorated_bracket(&frame, &levi(&x), &nil(&y));
        prop_assert!(z.b.is_zero() && z.a.is_zero());
        prop_assert_eq!(&z.x, &x.a.mul(&y.x).add(&y.x.mul(&x.b.transpose())));
        prop_assert_eq!(&z.c, &x.b.mul(&y.c).add(&y.c.mul(&x.b.transpose())));

        let xo = DecoratedElement { x: x.x.clone(), ..zero.clone() };
        let yo = DecoratedElement { x: y.x.clone(), ..zero.clone() };
        let z = decorated_bracket(&frame, &xo, &yo);
        let expect = x.x.transpose().mul(&e).mul(&y.x).neg().add(&y.x.transpose().mul(&e).mul(&x.x));
        prop_assert!(z.b.is_zero() && z.a.is_zero() && z.x.is_zero());
        prop_assert_eq!(&z.c, &expect);

        // C is central in the nilradical
        let co = DecoratedElement { c: x.c.clone(), ..zero.clone() };
        let z = decorated_bracket(&frame, &co, &nil(&y));
        prop_assert_eq!(z, zero);
    }

    #[test]
    fn decorated_jacobi((m, r, s) in split_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let frame = DecoratedFrame::new(m, signs(r, s));
        let [a, b, c] = [0, 1, 2].map(|_| rand_decorated(&mut rng, &frame));
        let br = |p: &DecoratedElement, q: &DecoratedElement| decorated_bracket(&frame, p, q);
        let sum = br(&a, &br(&b, &c)).add(&br(&b, &br(&c, &a))).add(&br(&c, &br(&a, &b)));
        prop_assert_eq!(sum, DecoratedElement::zero(&frame));
    }

    #[test]
    fn ricci_of_curvature_tensors_is_symmetric(id in prop::sample::select(vec!["so:3", "so:2,1", "u:1,1", "gl:2:R@so(2,2)", "gl:1:C@so(2,2)"]), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = catalog(id).unwrap();
        let space = curvature_space(&g).unwrap();
        prop_assume!(space.dim() > 0);
        let coeffs: Vec<_> = (0..space.dim()).map(|_| rand_rat(&mut rng)).collect();
        let r = space.combine(&coeffs);
        prop_assert!(r.satisfies_bianchi(&g));
        let ric = ricci(&g, &r);
        prop_assert_eq!(ric.clone(), ric.transpose());
    }
}

fn example1() -> MetricChart {
    let s2 = unit_sphere();
    let h0 = s2.parse("sin(theta)*cos(phi)/(1 + cos(theta))").unwrap();
    build_example1(&s2, &h0, 1.0).unwrap()
}

fn fd4(f: &dyn Fn(&[f64]) -> f64, p: &[f64], i: usize, h: f64) -> f64 {
    let at = |k: f64| {
        let mut q = p.to_vec();
        q[i] += k * h;
        f(&q)
    };
    (-at(2.0) + 8.0 * at(1.0) - 8.0 * at(-1.0) + at(-2.0)) / (12.0 * h)
}

// Γ from 4th-order finite differences of g only.
fn fd_gamma(chart: &MetricChart, p: &[f64], h: f64) -> Vec<f64> {
    let n = chart.dim();
    let ginv = chart.metric_at(p).try_inverse().unwrap();
    let mut dg = vec![0.0; n * n * n];
    for c in 0..n {
        for a in 0..n {
            for b in 0..n {
                dg[(c * n + a) * n + b] = fd4(&|q| chart.metric_at(q)[(a, b)], p, c, h);
            }
        }
    }
    let d = |c: usize, a: usize, b: usize| dg[(c * n + a) * n + b];
    let mut out = vec![0.0; n * n * n];
    for c in 0..n {
        for a in 0..n {
            for b in 0..n {
                out[(c * n + a) * n + b] =
                    0.5 * (0..n).map(|e| ginv[(c, e)] * (d(a, e, b) + d(b, e, a) - d(e, a, b))).sum::<f64>();
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn symbolic_geometry_matches_finite_differences(seed in any::<u64>()) {
        let chart = example1();
        let p = &chart.sample_points(1, seed)[0];
        let n = chart.dim();
        let gamma = christoffel(&chart, p).unwrap();
        let fd = fd_gamma(&chart, p, 1e-3);
        for c in 0..n {
            for a in 0..n {
                for b in 0..n {
                    prop_assert!((gamma.get(c, a, b) - fd[(c * n + a) * n + b]).abs() < 1e-6);
                }
            }
        }
        // R from finite differences of Γ, which was just checked against g
        let r = curvature_at(&chart, p).unwrap();
        let h = 1e-3;
        let gm = |q: &[f64], c: usize, a: usize, b: usize| christoffel(&chart, q).unwrap().get(c, a, b);
        for a in 0..n {
            for b in 0..n {
                for (c, d) in [(0, 1), (1, 2), (0, 3), (2, 3), (1, 3)] {
                    let mut v = fd4(&|q| gm(q, a, d, b), p, c, h) - fd4(&|q| gm(q, a, c, b), p, d, h);
                    for e in 0..n {
                        v += gamma.get(a, c, e) * gamma.get(e, d, b) - gamma.get(a, d, e) * gamma.get(e, c, b);
                    }
                    prop_assert!((r.get(a, b, c, d) - v).abs() < 1e-6, "R^{}_{}{}{}: {} vs {}", a, b, c, d, r.get(a, b, c, d), v);
                }
            }
        }
        prop_assert!(r.bianchi_residual() < 1e-9);
        prop_assert!(r.skew_residual(&chart.metric_at(p)) < 1e-9);
    }

    #[test]
    fn transport_is_an_isometry(seed in any::<u64>()) {
        let chart = example1();
        let pts = chart.sample_points(3, seed);
        let path = Path::polyline(&[pts[0].clone(), pts[1].clone(), pts[2].clone(), pts[0].clone()]);
        let frame = DMatrix::<f64>::identity(4, 4);
        let t = parallel_transport(&chart, &path, &frame).unwrap();
        let g0 = chart.metric_at(&pts[0]);
        let err = (t.frame.transpose() * &g0 * &t.frame - &g0).amax();
        prop_assert!(err <= 1e-10, "gram err {err:e} drift {:e} steps {}", t.drift, t.steps);
        prop_assert!(t.drift <= 1e-10);
    }
}
