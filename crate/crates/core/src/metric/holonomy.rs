use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::chart::MetricChart;
use super::geometry::curvature_at;
use super::transport::{parallel_transport, Path};
use super::MetricError;
use crate::lie::MatrixLieAlgebra;

#[derive(Clone, Debug)]
pub struct HolonomyConfig {
    /// Number of sample points around the base.
    pub samples: usize,
    /// Half-width of the sampling box as a fraction of each domain interval.
    pub spread: f64,
    pub seed: u64,
    /// Side length of square loops at the base whose logarithms are added.
    pub loop_size: Option<f64>,
    /// Relative singular-value cutoff.
    pub threshold: f64,
    /// Candidate algebra already written in the coordinate frame at the base.
    pub candidate: Option<Vec<DMatrix<f64>>>,
}

impl Default for HolonomyConfig {
    fn default() -> Self {
        Self {
            samples: 8,
            spread: 0.25,
            seed: 0,
            loop_size: None,
            threshold: 1e-7,
            candidate: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    Curvature,
    Transported,
    LoopLog,
}

fn ser_matrix<S: Serializer>(m: &DMatrix<f64>, s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<f64>> = (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
    rows.serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct CollectedElement {
    pub kind: ElementKind,
    /// Where the curvature was evaluated (or the loop started).
    pub point: Vec<f64>,
    /// Coordinate 2-plane `(∂_c, ∂_d)`.
    pub plane: (usize, usize),
    #[serde(serialize_with = "ser_matrix")]
    pub matrix: DMatrix<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpanReport {
    pub singular_values: Vec<f64>,
    pub threshold: f64,
    pub dimension: usize,
    /// `σ_dim / σ_{dim+1}`; infinite when nothing lies below the cutoff or
    /// the next value is exactly zero.
    pub gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HolonomyEstimate {
    pub chart: String,
    pub base: Vec<f64>,
    /// Frame at the base in which the elements are written (columns).
    #[serde(serialize_with = "ser_matrix")]
    pub frame: DMatrix<f64>,
    pub elements: Vec<CollectedElement>,
    pub span: SpanReport,
    pub dimension: usize,
    /// `max |gE + (gE)ᵗ|` over the collected elements, `g` the base metric.
    pub max_skew_residual: f64,
    pub max_transport_drift: f64,
    pub residuals: Option<Vec<f64>>,
}

fn flatten(m: &DMatrix<f64>) -> Vec<f64> {
    (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| (i, j))).map(|(i, j)| m[(i, j)]).collect()
}

/// Numerical rank of the span of `elements` by singular-value thresholding.
pub fn span_dimension(elements: &[DMatrix<f64>], threshold: f64) -> SpanReport {
    if elements.is_empty() {
        return SpanReport {
            singular_values: Vec::new(),
            threshold,
            dimension: 0,
            gap: f64::INFINITY,
        };
    }
    let cols = elements[0].len();
    let rows: Vec<f64> = elements.iter().flat_map(flatten).collect();
    let m = DMatrix::from_row_slice(elements.len(), cols, &rows);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let top = sv.first().copied().unwrap_or(0.0);
    let dimension = if top <= 1e-12 {
        0
    } else {
        sv.iter().filter(|s| **s > threshold * top).count()
    };
    let gap = match (dimension.checked_sub(1).map(|i| sv[i]), sv.get(dimension)) {
        (Some(a), Some(&b)) if b > 0.0 => a / b,
        _ => f64::INFINITY,
    };
    SpanReport {
        singular_values: sv,
        threshold,
        dimension,
        gap,
    }
}

/// Least-squares residual `‖E − Π E‖ / ‖E‖` of every element against the
/// span of `candidate`.
pub fn projection_residuals(elements: &[DMatrix<f64>], candidate: &[DMatrix<f64>]) -> Vec<f64> {
    let Some(first) = candidate.first() else {
        return elements.iter().map(|e| if e.amax() == 0.0 { 0.0 } else { 1.0 }).collect();
    };
    let len = first.len();
    let cols: Vec<f64> = candidate.iter().flat_map(flatten).collect();
    let c = DMatrix::from_column_slice(len, candidate.len(), &cols);
    let svd = c.clone().svd(true, true);
    elements
        .iter()
        .map(|e| {
            let v = DMatrix::from_column_slice(len, 1, &flatten(e));
            let norm = v.norm();
            if norm == 0.0 {
                return 0.0;
            }
            let x = svd.solve(&v, 1e-12).expect("svd computed with u and v");
            (&c * x - &v).norm() / norm
        })
        .collect()
}

/// Writes an exact matrix algebra in the coordinate frame whose columns
/// are the images of the algebra's basis vectors: `F A F⁻¹`.
pub fn candidate_in_frame(alg: &MatrixLieAlgebra, frame: &DMatrix<f64>) -> Result<Vec<DMatrix<f64>>, MetricError> {
    let inv = frame
        .clone()
        .try_inverse()
        .ok_or_else(|| MetricError::IllConditioned("candidate frame is singular".into()))?;
    Ok(alg.basis().iter().map(|b| frame * b.to_f64() * &inv).collect())
}

fn matrix_log(p: &DMatrix<f64>) -> Result<DMatrix<f64>, MetricError> {
    let n = p.nrows();
    let x = p - DMatrix::<f64>::identity(n, n);
    if x.amax() * n as f64 >= 0.5 {
        return Err(MetricError::IllConditioned("loop holonomy too far from the identity for the log series".into()));
    }
    let mut term = x.clone();
    let mut out = x.clone();
    for k in 2..200 {
        term = &term * &x;
        let t = &term / k as f64;
        if k % 2 == 0 {
            out -= &t;
        } else {
            out += &t;
        }
        if t.amax() < 1e-18 {
            break;
        }
    }
    Ok(out)
}

fn sample_around(chart: &MetricChart, base: &[f64], config: &HolonomyConfig) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.samples)
        .map(|_| {
            base.iter()
                .zip(chart.domain())
                .map(|(b, (lo, hi))| {
                    let w = hi - lo;
                    let x = b + config.spread * w * rng.gen_range(-1.0..=1.0);
                    x.clamp(lo + 0.02 * w, hi - 0.02 * w)
                })
                .collect()
        })
        .collect()
}

fn planes(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|c| (c + 1..n).map(move |d| (c, d))).collect()
}

/// Ambrose–Singer style estimate of the holonomy algebra at `base`:
/// curvature endomorphisms at the base and at nearby points (transported
/// back along straight coordinate lines), plus optional loop logarithms.
pub fn holonomy_estimate(chart: &MetricChart, base: &[f64], config: &HolonomyConfig) -> Result<HolonomyEstimate, MetricError> {
    if !chart.contains(base) {
        return Err(MetricError::Invalid(format!("base point {base:?} is outside the domain")));
    }
    let n = chart.dim();
    let g_base = chart.metric_at(base);
    let identity = DMatrix::<f64>::identity(n, n);
    let planes = planes(n);

    let mut elements = Vec::new();
    let r0 = curvature_at(chart, base)?;
    for &(c, d) in &planes {
        elements.push(CollectedElement {
            kind: ElementKind::Curvature,
            point: base.to_vec(),
            plane: (c, d),
            matrix: r0.endomorphism(c, d),
        });
    }

    let points = sample_around(chart, base, config);
    let transported: Vec<Result<(Vec<CollectedElement>, f64), MetricError>> = points
        .par_iter()
        .map(|x| {
            let r = curvature_at(chart, x)?;
            let t = parallel_transport(chart, &Path::line(x, base), &identity)?;
            let p = &t.frame;
            let cond = {
                let sv = p.singular_values();
                sv.max() / sv.min()
            };
            if !cond.is_finite() || cond > 1e10 {
                return Err(MetricError::IllConditioned(format!("transport from {x:?} has condition number {cond:e}")));
            }
            let pinv = p.clone().try_inverse().ok_or_else(|| MetricError::IllConditioned("singular transport".into()))?;
            let els = planes
                .iter()
                .map(|&(c, d)| CollectedElement {
                    kind: ElementKind::Transported,
                    point: x.clone(),
                    plane: (c, d),
                    matrix: p * r.endomorphism(c, d) * &pinv,
                })
                .collect();
            Ok((els, t.drift))
        })
        .collect();
    let mut max_drift = 0.0_f64;
    for r in transported {
        let (els, drift) = r?;
        max_drift = max_drift.max(drift);
        elements.extend(els);
    }

    if let Some(size) = config.loop_size {
        let logs: Vec<Result<(CollectedElement, f64), MetricError>> = planes
            .par_iter()
            .map(|&(c, d)| {
                let t = parallel_transport(chart, &Path::square_loop(base, c, d, size), &identity)?;
                Ok((
                    CollectedElement {
                        kind: ElementKind::LoopLog,
                        point: base.to_vec(),
                        plane: (c, d),
                        matrix: matrix_log(&t.frame)? / (size * size),
                    },
                    t.drift,
                ))
            })
            .collect();
        for r in logs {
            let (el, drift) = r?;
            max_drift = max_drift.max(drift);
            elements.push(el);
        }
    }

    let max_skew_residual = elements
        .iter()
        .map(|e| {
            let m = &g_base * &e.matrix;
            (&m + m.transpose()).amax()
        })
        .fold(0.0, f64::max);
    let mats: Vec<DMatrix<f64>> = elements.iter().map(|e| e.matrix.clone()).collect();
    let span = span_dimension(&mats, config.threshold);
    let residuals = config.candidate.as_ref().map(|c| projection_residuals(&mats, c));
    Ok(HolonomyEstimate {
        chart: chart.name().to_string(),
        base: base.to_vec(),
        frame: identity,
        dimension: span.dimension,
        span,
        elements,
        max_skew_residual,
        max_transport_drift: max_drift,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_chart_has_trivial_holonomy() {
        let c = MetricChart::from_strings("flat", &["x", "y", "z"], &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "-1"]], &[(-1.0, 1.0); 3]).unwrap();
        let h = holonomy_estimate(&c, &[0.0; 3], &HolonomyConfig::default()).unwrap();
        assert_eq!(h.dimension, 0);
    }

    #[test]
    fn sphere_holonomy_is_so2() {
        let s = MetricChart::from_strings("s2", &["t", "f"], &[&["1", "0"], &["0", "sin(t)^2"]], &[(0.3, 2.8), (-3.0, 3.0)]).unwrap();
        let cfg = HolonomyConfig {
            loop_size: Some(0.05),
            ..Default::default()
        };
        let h = holonomy_estimate(&s, &[1.2, 0.1], &cfg).unwrap();
        assert_eq!(h.dimension, 1);
        assert!(h.max_skew_residual < 1e-9);
        assert!(h.elements.iter().any(|e| e.kind == ElementKind::LoopLog));
    }

    #[test]
    fn projection_residual_detects_membership() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let r = projection_residuals(&[a.clone() * 3.0, b.clone()], &[a]);
        assert!(r[0] < 1e-14);
        assert!((r[1] - 1.0).abs() < 1e-14);
    }
}
