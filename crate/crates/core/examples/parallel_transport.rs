//! Parallel transport around latitude circles of the round sphere, and a
//! closed triangle in a user-supplied chart file.
//!
//! cargo run --release --example parallel_transport -- [chart.json]

use std::f64::consts::PI;

use bergerkit::metric::{parallel_transport, MetricChart, Path};
use nalgebra::DMatrix;

fn main() {
    let sphere = MetricChart::from_strings("s2", &["t", "f"], &[&["1", "0"], &["0", "sin(t)^2"]], &[(0.1, 3.0), (-7.0, 7.0)])
        .expect("sphere chart");
    println!("{:>6} {:>12} {:>12} {:>6}", "theta", "angle", "expected", "steps");
    for theta in [0.3_f64, 0.7, 1.0, 1.3] {
        let frame = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0 / theta.sin()]);
        let r = parallel_transport(&sphere, &Path::angular_loop(&[theta, 0.0], 1), &frame).expect("transport");
        let angle = (r.frame[(1, 0)] * theta.sin()).atan2(r.frame[(0, 0)]).abs();
        // both folded into [0, π]
        let expect = (2.0 * PI * (1.0 - theta.cos())) % (2.0 * PI);
        let expect = expect.min(2.0 * PI - expect);
        println!("{theta:>6.2} {angle:>12.9} {expect:>12.9} {:>6}", r.steps);
    }

    if let Some(path) = std::env::args().nth(1) {
        let chart = MetricChart::from_json(&std::fs::read_to_string(&path).expect("read chart")).expect("chart");
        let pts = chart.sample_points(3, 1);
        let tri = Path::polyline(&[pts[0].clone(), pts[1].clone(), pts[2].clone(), pts[0].clone()]);
        let r = parallel_transport(&chart, &tri, &DMatrix::identity(chart.dim(), chart.dim())).expect("transport");
        println!("\n{}: triangle holonomy (drift {:.1e}, {} steps)\n{:.6}", chart.name(), r.drift, r.steps, r.frame);
    }
}
