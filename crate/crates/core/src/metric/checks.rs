use serde::Serialize;

use super::chart::MetricChart;
use super::expr::Expr;
use super::geometry::{christoffel, curvature_at};
use super::MetricError;

#[derive(Clone, Debug, Serialize)]
pub struct EinsteinReport {
    pub chart: String,
    pub lambda: f64,
    pub tol: f64,
    pub samples: usize,
    /// `max ‖Ric − Λg‖∞` over the samples.
    pub max_residual: f64,
    pub worst_point: Vec<f64>,
    pub pass: bool,
}

/// Checks `Ric = Λ g` at every sample point.
pub fn einstein_check(
    chart: &MetricChart,
    lambda: f64,
    samples: &[Vec<f64>],
    tol: f64,
) -> Result<EinsteinReport, MetricError> {
    let mut worst = 0.0_f64;
    let mut worst_point = Vec::new();
    for p in samples {
        let ric = curvature_at(chart, p)?.ricci();
        let res = (ric - chart.metric_at(p) * lambda).amax();
        if res > worst || worst_point.is_empty() {
            worst = res;
            worst_point = p.clone();
        }
    }
    Ok(EinsteinReport {
        chart: chart.name().to_string(),
        lambda,
        tol,
        samples: samples.len(),
        max_residual: worst,
        worst_point,
        pass: worst <= tol,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LaplaceReport {
    pub chart: String,
    pub function: String,
    pub tol: f64,
    pub samples: usize,
    pub max_abs: f64,
    pub worst_point: Vec<f64>,
    pub pass: bool,
}

fn laplacian_parts(h: &Expr, n: usize) -> (Vec<Expr>, Vec<Vec<Expr>>) {
    let d1: Vec<Expr> = (0..n).map(|a| h.diff(a)).collect();
    let d2 = (0..n).map(|a| (0..n).map(|b| d1[a].diff(b)).collect()).collect();
    (d1, d2)
}

fn laplacian_with(
    chart: &MetricChart,
    d1: &[Expr],
    d2: &[Vec<Expr>],
    p: &[f64],
) -> Result<f64, MetricError> {
    let n = chart.dim();
    let gamma = christoffel(chart, p)?;
    let ginv = chart
        .metric_at(p)
        .try_inverse()
        .ok_or(MetricError::Singular { point: p.to_vec() })?;
    let grad: Vec<f64> = d1.iter().map(|e| e.eval(p)).collect();
    let mut s = 0.0;
    for a in 0..n {
        for b in 0..n {
            let gi = ginv[(a, b)];
            if gi == 0.0 {
                continue;
            }
            let mut hess = d2[a][b].eval(p);
            for c in 0..n {
                hess -= gamma.get(c, a, b) * grad[c];
            }
            s += gi * hess;
        }
    }
    Ok(s)
}

/// Laplace–Beltrami operator `g^{ab}(∂_a∂_b H − Γ^c_{ab} ∂_c H)` at `p`.
pub fn laplacian_at(chart: &MetricChart, h: &Expr, p: &[f64]) -> Result<f64, MetricError> {
    let (d1, d2) = laplacian_parts(h, chart.dim());
    laplacian_with(chart, &d1, &d2, p)
}

/// Checks `Δ_h H = 0` at every sample point.
pub fn laplace_check(
    h_chart: &MetricChart,
    h: &Expr,
    samples: &[Vec<f64>],
    tol: f64,
) -> Result<LaplaceReport, MetricError> {
    let n = h_chart.dim();
    if let Some(v) = h.variables().into_iter().find(|v| *v >= n) {
        return Err(MetricError::Invalid(format!("function uses variable #{v} outside the chart")));
    }
    let (d1, d2) = laplacian_parts(h, n);
    let mut worst = 0.0_f64;
    let mut worst_point = Vec::new();
    for p in samples {
        let v = laplacian_with(h_chart, &d1, &d2, p)?.abs();
        if v > worst || worst_point.is_empty() {
            worst = v;
            worst_point = p.clone();
        }
    }
    Ok(LaplaceReport {
        chart: h_chart.name().to_string(),
        function: h.render(h_chart.coords()),
        tol,
        samples: samples.len(),
        max_abs: worst,
        worst_point,
        pass: worst <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> MetricChart {
        MetricChart::from_strings("r2", &["x", "y"], &[&["1", "0"], &["0", "1"]], &[(-1.0, 1.0), (-1.0, 1.0)]).unwrap()
    }

    #[test]
    fn einstein_on_flat_and_sphere() {
        let f = plane();
        assert!(einstein_check(&f, 0.0, &f.sample_points(5, 0), 1e-12).unwrap().pass);
        let s = MetricChart::from_strings("s2", &["t", "f"], &[&["1", "0"], &["0", "sin(t)^2"]], &[(0.3, 2.8), (-3.0, 3.0)]).unwrap();
        let pts = s.sample_points(10, 1);
        assert!(einstein_check(&s, 1.0, &pts, 1e-10).unwrap().pass);
        let bad = einstein_check(&s, 2.0, &pts, 1e-10).unwrap();
        assert!(!bad.pass && bad.max_residual > 0.1);
    }

    #[test]
    fn laplace_on_the_plane() {
        let f = plane();
        let pts = f.sample_points(6, 2);
        for (src, ok) in [("3", true), ("x^2 - y^2", true), ("x*y + exp(x)*cos(y)", true), ("x^2", false)] {
            let h = f.parse(src).unwrap();
            assert_eq!(laplace_check(&f, &h, &pts, 1e-10).unwrap().pass, ok, "{src}");
        }
        // Δ x² = 2
        assert!((laplacian_at(&f, &f.parse("x^2").unwrap(), &[0.3, 0.1]).unwrap() - 2.0).abs() < 1e-14);
    }
}
