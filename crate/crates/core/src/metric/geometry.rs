use nalgebra::DMatrix;

use super::chart::MetricChart;
use super::MetricError;

/// `Γ^c_{ab}` at a point, stored as `data[(c * n + a) * n + b]`.
#[derive(Clone, Debug)]
pub struct Christoffel {
    n: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, c: usize, a: usize, b: usize) -> f64 {
        self.data[(c * self.n + a) * self.n + b]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Riemann tensor `R^a_{bcd}` with `R(∂_c, ∂_d)∂_b = R^a_{bcd} ∂_a`.
#[derive(Clone, Debug)]
pub struct NumericCurvature {
    n: usize,
    data: Vec<f64>,
}

impl NumericCurvature {
    fn idx(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.n + b) * self.n + c) * self.n + d
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.data[self.idx(a, b, c, d)]
    }

    /// The endomorphism `R(∂_c, ∂_d)` as a matrix acting on coordinate
    /// components.
    pub fn endomorphism(&self, c: usize, d: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |a, b| self.get(a, b, c, d))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Largest violation of `R^a_{bcd} + R^a_{cdb} + R^a_{dbc} = 0`.
    pub fn bianchi_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let s = self.get(a, b, c, d) + self.get(a, c, d, b) + self.get(a, d, b, c);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest violation of `R(∂_c,∂_d) ∈ so(g)`, i.e. `g R + (g R)^t = 0`.
    pub fn skew_residual(&self, g: &DMatrix<f64>) -> f64 {
        let mut worst = 0.0_f64;
        for c in 0..self.n {
            for d in 0..self.n {
                let m = g * self.endomorphism(c, d);
                worst = worst.max((&m + m.transpose()).amax());
            }
        }
        worst
    }

    /// `Ric(X, Y) = tr(Z ↦ R(Z, X)Y)`, i.e. `Ric_{bd} = R^a_{bad}`.
    pub fn ricci(&self) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |b, d| (0..n).map(|a| self.get(a, b, a, d)).sum())
    }
}

pub fn metric_at(chart: &MetricChart, p: &[f64]) -> DMatrix<f64> {
    chart.metric_at(p)
}

fn inverse_at(chart: &MetricChart, p: &[f64]) -> Result<(DMatrix<f64>, DMatrix<f64>), MetricError> {
    let g = chart.metric_at(p);
    let scale = g.amax().max(1.0);
    let det = g.determinant();
    if !det.is_finite() || det.abs() <= 1e-13 * scale.powi(g.nrows() as i32) {
        return Err(MetricError::Singular { point: p.to_vec() });
    }
    let inv = g.clone().try_inverse().ok_or(MetricError::Singular { point: p.to_vec() })?;
    Ok((g, inv))
}

fn check_point(chart: &MetricChart, p: &[f64]) -> Result<(), MetricError> {
    if p.len() != chart.dim() {
        return Err(MetricError::Invalid(format!("point has {} coordinates, chart has {}", p.len(), chart.dim())));
    }
    Ok(())
}

fn eval_dg(chart: &MetricChart, p: &[f64]) -> Vec<f64> {
    let n = chart.dim();
    let dg = chart.dg();
    let mut out = vec![0.0; n * n * n];
    for c in 0..n {
        for a in 0..n {
            for b in a..n {
                let v = dg[c][a][b].eval(p);
                out[(c * n + a) * n + b] = v;
                out[(c * n + b) * n + a] = v;
            }
        }
    }
    out
}

fn gamma_from(n: usize, ginv: &DMatrix<f64>, dg: &[f64]) -> Vec<f64> {
    let d = |c: usize, a: usize, b: usize| dg[(c * n + a) * n + b];
    let mut out = vec![0.0; n * n * n];
    for a in 0..n {
        for b in a..n {
            for c in 0..n {
                let mut s = 0.0;
                for e in 0..n {
                    let gi = ginv[(c, e)];
                    if gi != 0.0 {
                        s += gi * (d(a, e, b) + d(b, e, a) - d(e, a, b));
                    }
                }
                out[(c * n + a) * n + b] = 0.5 * s;
                out[(c * n + b) * n + a] = 0.5 * s;
            }
        }
    }
    out
}

/// Levi-Civita connection `Γ^c_{ab} = ½ g^{ce}(∂_a g_{eb} + ∂_b g_{ea} − ∂_e g_{ab})`.
pub fn christoffel(chart: &MetricChart, p: &[f64]) -> Result<Christoffel, MetricError> {
    check_point(chart, p)?;
    let n = chart.dim();
    let (_, ginv) = inverse_at(chart, p)?;
    let dg = eval_dg(chart, p);
    Ok(Christoffel {
        n,
        data: gamma_from(n, &ginv, &dg),
    })
}

/// `R^a_{bcd} = ∂_cΓ^a_{db} − ∂_dΓ^a_{cb} + Γ^a_{ce}Γ^e_{db} − Γ^a_{de}Γ^e_{cb}`.
pub fn curvature_at(chart: &MetricChart, p: &[f64]) -> Result<NumericCurvature, MetricError> {
    check_point(chart, p)?;
    let n = chart.dim();
    let (_, ginv) = inverse_at(chart, p)?;
    let dg = eval_dg(chart, p);
    let gamma = gamma_from(n, &ginv, &dg);
    let gm = |c: usize, a: usize, b: usize| gamma[(c * n + a) * n + b];
    let d1 = |c: usize, a: usize, b: usize| dg[(c * n + a) * n + b];

    let ddg_e = chart.ddg();
    let mut ddg = vec![0.0; n * n * n * n];
    for e in 0..n {
        for c in e..n {
            for a in 0..n {
                for b in a..n {
                    let v = ddg_e[e][c][a][b].eval(p);
                    for (x, y) in [(e, c), (c, e)] {
                        ddg[((x * n + y) * n + a) * n + b] = v;
                        ddg[((x * n + y) * n + b) * n + a] = v;
                    }
                }
            }
        }
    }
    let d2 = |e: usize, c: usize, a: usize, b: usize| ddg[((e * n + c) * n + a) * n + b];

    // ∂_e g^{cf} = −g^{ch} ∂_e g_{hk} g^{kf}
    let mut dginv = vec![0.0; n * n * n];
    for e in 0..n {
        let de = DMatrix::from_fn(n, n, |h, k| d1(e, h, k));
        let m = -(&ginv * de * &ginv);
        for c in 0..n {
            for f in 0..n {
                dginv[(e * n + c) * n + f] = m[(c, f)];
            }
        }
    }

    // dgamma[e][c][a][b] = ∂_e Γ^c_{ab}
    let mut dgamma = vec![0.0; n * n * n * n];
    for e in 0..n {
        for c in 0..n {
            for a in 0..n {
                for b in a..n {
                    let mut s = 0.0;
                    for f in 0..n {
                        let sym = d1(a, f, b) + d1(b, f, a) - d1(f, a, b);
                        let dsym = d2(e, a, f, b) + d2(e, b, f, a) - d2(e, f, a, b);
                        s += dginv[(e * n + c) * n + f] * sym + ginv[(c, f)] * dsym;
                    }
                    dgamma[((e * n + c) * n + a) * n + b] = 0.5 * s;
                    dgamma[((e * n + c) * n + b) * n + a] = 0.5 * s;
                }
            }
        }
    }
    let dgm = |e: usize, c: usize, a: usize, b: usize| dgamma[((e * n + c) * n + a) * n + b];

    let mut data = vec![0.0; n * n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut v = dgm(c, a, d, b) - dgm(d, a, c, b);
                    for e in 0..n {
                        v += gm(a, c, e) * gm(e, d, b) - gm(a, d, e) * gm(e, c, b);
                    }
                    data[((a * n + b) * n + c) * n + d] = v;
                }
            }
        }
    }
    Ok(NumericCurvature { n, data })
}

pub fn ricci_at(chart: &MetricChart, p: &[f64]) -> Result<DMatrix<f64>, MetricError> {
    Ok(curvature_at(chart, p)?.ricci())
}
