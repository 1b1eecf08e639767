use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::expr::{parse_expr, Expr};
use super::MetricError;

/// A metric `g_{ab}(x)` on an open coordinate box.
#[derive(Clone, Debug)]
pub struct MetricChart {
    name: String,
    coords: Vec<String>,
    g: Vec<Vec<Expr>>,
    domain: Vec<(f64, f64)>,
    // dg[c][a][b] = ∂_c g_ab
    dg: Vec<Vec<Vec<Expr>>>,
    // ddg[c][d][a][b] = ∂_c ∂_d g_ab
    ddg: Vec<Vec<Vec<Vec<Expr>>>>,
}

#[derive(Serialize, Deserialize)]
struct ChartFile {
    #[serde(default)]
    name: String,
    coords: Vec<String>,
    metric: Vec<Vec<String>>,
    domain: Vec<[f64; 2]>,
}

impl MetricChart {
    /// Builds a chart from expressions. Only the upper triangle of `g` is
    /// read; the lower one is mirrored.
    pub fn new(
        name: impl Into<String>,
        coords: Vec<String>,
        g: Vec<Vec<Expr>>,
        domain: Vec<(f64, f64)>,
    ) -> Result<Self, MetricError> {
        let n = coords.len();
        if g.len() != n || g.iter().any(|r| r.len() != n) {
            return Err(MetricError::Invalid(format!("metric must be {n}x{n}")));
        }
        if domain.len() != n {
            return Err(MetricError::Invalid("domain needs one interval per coordinate".into()));
        }
        if let Some((i, _)) = domain.iter().enumerate().find(|(_, (lo, hi))| !(lo < hi)) {
            return Err(MetricError::Invalid(format!("empty interval for `{}`", coords[i])));
        }
        for (i, c) in coords.iter().enumerate() {
            if coords[..i].contains(c) {
                return Err(MetricError::Invalid(format!("duplicate coordinate `{c}`")));
            }
        }
        let mut sym = g;
        for a in 0..n {
            for b in 0..a {
                sym[a][b] = sym[b][a].clone();
            }
        }
        let dg: Vec<Vec<Vec<Expr>>> = (0..n)
            .map(|c| (0..n).map(|a| (0..n).map(|b| sym[a][b].diff(c)).collect()).collect())
            .collect();
        let mut ddg = vec![vec![vec![vec![Expr::zero(); n]; n]; n]; n];
        for c in 0..n {
            for d in c..n {
                for a in 0..n {
                    for b in a..n {
                        let e = dg[c][a][b].diff(d);
                        ddg[c][d][a][b] = e.clone();
                        ddg[c][d][b][a] = e.clone();
                        ddg[d][c][a][b] = e.clone();
                        ddg[d][c][b][a] = e;
                    }
                }
            }
        }
        Ok(Self {
            name: name.into(),
            coords,
            g: sym,
            domain,
            dg,
            ddg,
        })
    }

    /// Parses expression strings; a full symmetric matrix is expected and
    /// the two triangles must agree numerically.
    pub fn from_strings(
        name: impl Into<String>,
        coords: &[&str],
        metric: &[&[&str]],
        domain: &[(f64, f64)],
    ) -> Result<Self, MetricError> {
        let coords: Vec<String> = coords.iter().map(|s| s.to_string()).collect();
        let rows: Vec<Vec<String>> = metric.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        Self::from_parts(name.into(), coords, &rows, domain.to_vec())
    }

    fn from_parts(
        name: String,
        coords: Vec<String>,
        rows: &[Vec<String>],
        domain: Vec<(f64, f64)>,
    ) -> Result<Self, MetricError> {
        let g = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_expr(s, &coords)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let n = coords.len();
        if g.len() != n || g.iter().any(|r| r.len() != n) {
            return Err(MetricError::Invalid(format!("metric must be {n}x{n}")));
        }
        let chart = Self::new(name, coords, g.clone(), domain)?;
        for p in chart.sample_points(4, 0) {
            for a in 0..n {
                for b in 0..a {
                    let (x, y) = (g[a][b].eval(&p), g[b][a].eval(&p));
                    if (x - y).abs() > 1e-12 * (1.0 + x.abs()) {
                        return Err(MetricError::Invalid(format!(
                            "g[{a}][{b}] and g[{b}][{a}] differ"
                        )));
                    }
                }
            }
        }
        Ok(chart)
    }

    pub fn from_json(text: &str) -> Result<Self, MetricError> {
        let f: ChartFile = serde_json::from_str(text).map_err(|e| MetricError::Parse(e.to_string()))?;
        let domain = f.domain.iter().map(|[a, b]| (*a, *b)).collect();
        Self::from_parts(f.name, f.coords, &f.metric, domain)
    }

    pub fn to_json(&self) -> String {
        let f = ChartFile {
            name: self.name.clone(),
            coords: self.coords.clone(),
            metric: self.g.iter().map(|r| r.iter().map(|e| e.render(&self.coords)).collect()).collect(),
            domain: self.domain.iter().map(|(a, b)| [*a, *b]).collect(),
        };
        serde_json::to_string_pretty(&f).expect("chart serializes")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn entry(&self, a: usize, b: usize) -> &Expr {
        &self.g[a][b]
    }

    pub fn entries(&self) -> &[Vec<Expr>] {
        &self.g
    }

    pub(crate) fn dg(&self) -> &[Vec<Vec<Expr>>] {
        &self.dg
    }

    pub(crate) fn ddg(&self) -> &[Vec<Vec<Vec<Expr>>>] {
        &self.ddg
    }

    pub fn parse(&self, src: &str) -> Result<Expr, MetricError> {
        parse_expr(src, &self.coords)
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim() && p.iter().zip(&self.domain).all(|(x, (lo, hi))| lo < x && x < hi)
    }

    pub fn center(&self) -> Vec<f64> {
        self.domain.iter().map(|(a, b)| 0.5 * (a + b)).collect()
    }

    /// Deterministic points in the inner 80% of the domain box.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                self.domain
                    .iter()
                    .map(|(lo, hi)| {
                        let w = hi - lo;
                        lo + 0.1 * w + 0.8 * w * rng.gen::<f64>()
                    })
                    .collect()
            })
            .collect()
    }

    pub fn metric_at(&self, p: &[f64]) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |a, b| self.g[a][b].eval(p))
    }

    /// `(negative, positive)` eigenvalue counts at `p`; `None` when singular.
    pub fn signature_at(&self, p: &[f64]) -> Option<(usize, usize)> {
        let eig = SymmetricEigen::new(self.metric_at(p));
        let scale = eig.eigenvalues.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        if scale == 0.0 || eig.eigenvalues.iter().any(|x| x.abs() <= 1e-12 * scale) {
            return None;
        }
        let neg = eig.eigenvalues.iter().filter(|x| **x < 0.0).count();
        Some((neg, self.dim() - neg))
    }

    /// Signature at the domain centre.
    pub fn signature(&self) -> Option<(usize, usize)> {
        self.signature_at(&self.center())
    }

    /// Checks non-degeneracy and constant signature on sample points.
    pub fn validate(&self, samples: usize, seed: u64) -> Result<(usize, usize), MetricError> {
        let center = self.center();
        let sig = self
            .signature_at(&center)
            .ok_or(MetricError::Singular { point: center })?;
        for p in self.sample_points(samples, seed) {
            match self.signature_at(&p) {
                None => return Err(MetricError::Singular { point: p }),
                Some(s) if s != sig => {
                    return Err(MetricError::Invalid(format!(
                        "signature changes from {sig:?} to {s:?} at {p:?}"
                    )))
                }
                _ => {}
            }
        }
        Ok(sig)
    }
}
