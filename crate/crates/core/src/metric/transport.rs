use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::chart::MetricChart;
use super::geometry::christoffel;
use super::MetricError;

type CurveFn = dyn Fn(f64) -> (Vec<f64>, Vec<f64>) + Send + Sync;

/// One smooth piece of a path, parameterised by `t ∈ [0, 1]`.
#[derive(Clone)]
pub enum Piece {
    Line { from: Vec<f64>, to: Vec<f64> },
    /// `t ↦ (γ(t), γ'(t))`.
    Curve(Arc<CurveFn>),
}

impl fmt::Debug for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Piece::Line { from, to } => write!(f, "Line({from:?} -> {to:?})"),
            Piece::Curve(_) => write!(f, "Curve"),
        }
    }
}

impl Piece {
    fn at(&self, t: f64) -> (Vec<f64>, Vec<f64>) {
        match self {
            Piece::Line { from, to } => (
                from.iter().zip(to).map(|(a, b)| a + t * (b - a)).collect(),
                from.iter().zip(to).map(|(a, b)| b - a).collect(),
            ),
            Piece::Curve(f) => f(t),
        }
    }
}

/// Piecewise-smooth path, traversed piece by piece.
#[derive(Clone, Debug, Default)]
pub struct Path {
    pub pieces: Vec<Piece>,
}

impl Path {
    pub fn line(from: &[f64], to: &[f64]) -> Self {
        Path {
            pieces: vec![Piece::Line {
                from: from.to_vec(),
                to: to.to_vec(),
            }],
        }
    }

    pub fn polyline(points: &[Vec<f64>]) -> Self {
        Path {
            pieces: points
                .windows(2)
                .map(|w| Piece::Line {
                    from: w[0].clone(),
                    to: w[1].clone(),
                })
                .collect(),
        }
    }

    pub fn curve(f: impl Fn(f64) -> (Vec<f64>, Vec<f64>) + Send + Sync + 'static) -> Self {
        Path {
            pieces: vec![Piece::Curve(Arc::new(f))],
        }
    }

    /// Counter-clockwise square loop of side `size` in the `(i, j)` plane,
    /// starting and ending at `base`.
    pub fn square_loop(base: &[f64], i: usize, j: usize, size: f64) -> Self {
        let shift = |di: f64, dj: f64| {
            let mut p = base.to_vec();
            p[i] += di;
            p[j] += dj;
            p
        };
        Path::polyline(&[shift(0.0, 0.0), shift(size, 0.0), shift(size, size), shift(0.0, size), shift(0.0, 0.0)])
    }

    /// Full turn in coordinate `j` (e.g. a longitude angle) at fixed other
    /// coordinates.
    pub fn angular_loop(base: &[f64], j: usize) -> Self {
        let b = base.to_vec();
        Path::curve(move |t| {
            let mut p = b.clone();
            p[j] += 2.0 * PI * t;
            let mut v = vec![0.0; p.len()];
            v[j] = 2.0 * PI;
            (p, v)
        })
    }

    pub fn then(mut self, other: Path) -> Self {
        self.pieces.extend(other.pieces);
        self
    }

    pub fn start(&self) -> Option<Vec<f64>> {
        self.pieces.first().map(|p| p.at(0.0).0)
    }

    pub fn end(&self) -> Option<Vec<f64>> {
        self.pieces.last().map(|p| p.at(1.0).0)
    }
}

#[derive(Clone, Debug)]
pub struct TransportResult {
    /// Transported frame; column `k` is the image of column `k` of the input.
    pub frame: DMatrix<f64>,
    /// Total RK4 steps used by the accepted integration.
    pub steps: usize,
    /// `max |Fᵗ g(end) F − F₀ᵗ g(start) F₀|`.
    pub drift: f64,
}

const MIN_STEPS: usize = 16;
const MAX_STEPS: usize = 1 << 15;
const DRIFT_TOL: f64 = 1e-10;
const STEP_TOL: f64 = 1e-9;

// A[c][b] = Σ_a Γ^c_{ab} γ'^a, so that dF/dt = −A F.
fn connection_matrix(chart: &MetricChart, piece: &Piece, t: f64) -> Result<DMatrix<f64>, MetricError> {
    let (p, v) = piece.at(t);
    if !chart.contains(&p) {
        return Err(MetricError::Invalid(format!("path leaves the domain at {p:?}")));
    }
    let g = christoffel(chart, &p)?;
    let n = chart.dim();
    Ok(DMatrix::from_fn(n, n, |c, b| (0..n).map(|a| g.get(c, a, b) * v[a]).sum()))
}

fn rk4(chart: &MetricChart, piece: &Piece, frame: &DMatrix<f64>, steps: usize) -> Result<DMatrix<f64>, MetricError> {
    let h = 1.0 / steps as f64;
    let mut f = frame.clone();
    let mut a0 = connection_matrix(chart, piece, 0.0)?;
    for k in 0..steps {
        let t = k as f64 * h;
        let am = connection_matrix(chart, piece, t + 0.5 * h)?;
        let a1 = connection_matrix(chart, piece, t + h)?;
        let k1 = -(&a0 * &f);
        let k2 = -(&am * (&f + &k1 * (0.5 * h)));
        let k3 = -(&am * (&f + &k2 * (0.5 * h)));
        let k4 = -(&a1 * (&f + &k3 * h));
        f += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        a0 = a1;
    }
    Ok(f)
}

fn gram(chart: &MetricChart, p: &[f64], f: &DMatrix<f64>) -> DMatrix<f64> {
    f.transpose() * chart.metric_at(p) * f
}

/// Parallel transport of `frame` (columns are tangent vectors at the path
/// start, in coordinate components) along `path`. Each piece is integrated
/// with classical RK4, halving the step until successive results agree and
/// the Gram drift over the whole path is at most `1e-10` (each piece gets an
/// equal share of that budget).
pub fn parallel_transport(chart: &MetricChart, path: &Path, frame: &DMatrix<f64>) -> Result<TransportResult, MetricError> {
    if frame.nrows() != chart.dim() {
        return Err(MetricError::Invalid("frame rows must match the chart dimension".into()));
    }
    let (Some(start), Some(end)) = (path.start(), path.end()) else {
        return Ok(TransportResult {
            frame: frame.clone(),
            steps: 0,
            drift: 0.0,
        });
    };
    let g0 = gram(chart, &start, frame);
    let mut f = frame.clone();
    let mut total = 0;
    let piece_tol = DRIFT_TOL / path.pieces.len() as f64;
    for piece in &path.pieces {
        let (p0, _) = piece.at(0.0);
        let (p1, _) = piece.at(1.0);
        let g_in = gram(chart, &p0, &f);
        let mut steps = MIN_STEPS;
        let mut prev = rk4(chart, piece, &f, steps)?;
        loop {
            steps *= 2;
            let next = rk4(chart, piece, &f, steps)?;
            let diff = (&next - &prev).amax() / (1.0 + next.amax());
            let drift = (gram(chart, &p1, &next) - &g_in).amax();
            if diff <= STEP_TOL && drift <= piece_tol {
                f = next;
                total += steps;
                break;
            }
            if steps >= MAX_STEPS {
                return Err(MetricError::NonConvergence { steps, drift });
            }
            prev = next;
        }
    }
    let drift = (gram(chart, &end, &f) - g0).amax();
    Ok(TransportResult { frame: f, steps: total, drift })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere() -> MetricChart {
        MetricChart::from_strings("s2", &["t", "f"], &[&["1", "0"], &["0", "sin(t)^2"]], &[(0.1, 3.0), (-7.0, 7.0)]).unwrap()
    }

    #[test]
    fn flat_loops_are_trivial() {
        let c = MetricChart::from_strings("flat", &["x", "y"], &[&["1", "0"], &["0", "-1"]], &[(-2.0, 2.0), (-2.0, 2.0)]).unwrap();
        let r = parallel_transport(&c, &Path::square_loop(&[0.0, 0.0], 0, 1, 1.0), &DMatrix::identity(2, 2)).unwrap();
        assert!((r.frame - DMatrix::<f64>::identity(2, 2)).amax() < 1e-14);
    }

    #[test]
    fn sphere_cap_loop_rotates_by_enclosed_area() {
        let s = sphere();
        for theta in [0.4_f64, 1.0, 1.3] {
            let base = [theta, 0.0];
            // orthonormal frame (∂t, ∂f / sin t)
            let frame = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0 / theta.sin()]);
            let r = parallel_transport(&s, &Path::angular_loop(&base, 1), &frame).unwrap();
            assert!(r.drift <= 1e-10);
            // components of the image of e1 in the orthonormal frame
            let c = r.frame[(0, 0)];
            let sn = r.frame[(1, 0)] * theta.sin();
            let angle = sn.atan2(c);
            let expect = 2.0 * PI * (1.0 - theta.cos());
            let circ = |x: f64| {
                let d = x.rem_euclid(2.0 * PI);
                d.min(2.0 * PI - d)
            };
            let err = circ(angle - expect).min(circ(angle + expect));
            assert!(err < 1e-8, "theta {theta}: angle {angle}, expected ±{expect}");
        }
    }

    #[test]
    fn leaving_the_domain_errors() {
        let s = sphere();
        assert!(parallel_transport(&s, &Path::line(&[1.0, 0.0], &[3.5, 0.0]), &DMatrix::identity(2, 2)).is_err());
    }
}
