use super::chart::MetricChart;
use super::checks::{einstein_check, laplace_check};
use super::expr::{parse_expr, Expr};
use super::MetricError;
use crate::structure::StructuredAlgebraSpec;

const PRE_SAMPLES: usize = 20;
const PRE_SEED: u64 = 0x5eed;
const PRE_TOL: f64 = 1e-8;

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// `Σ s_i dx_i²` on `(−w, w)^n`.
pub fn flat_chart(signs: &[i32], coords: &[&str], half_width: f64) -> Result<MetricChart, MetricError> {
    if signs.len() != coords.len() {
        return Err(MetricError::Invalid("one sign per coordinate".into()));
    }
    let n = signs.len();
    let g = (0..n)
        .map(|a| (0..n).map(|b| Expr::num(if a == b { signs[a] as f64 } else { 0.0 })).collect())
        .collect();
    MetricChart::new("flat", names(coords), g, vec![(-half_width, half_width); n])
}

/// Round unit sphere in polar coordinates `(theta, phi)`, away from the
/// poles.
pub fn unit_sphere() -> MetricChart {
    MetricChart::from_strings(
        "unit_sphere",
        &["theta", "phi"],
        &[&["1", "0"], &["0", "sin(theta)^2"]],
        &[(0.3, 2.5), (-2.5, 2.5)],
    )
    .expect("valid chart")
}

/// `2 dv du + Λ v² du²` on coordinates `(v, u)`.
pub fn pp_wave_2d(lambda: f64) -> MetricChart {
    let coords = names(&["v", "u"]);
    let g = vec![
        vec![Expr::zero(), Expr::num(1.0)],
        vec![Expr::num(1.0), Expr::mul(Expr::num(lambda), Expr::pow(Expr::var(0), Expr::num(2.0)))],
    ];
    MetricChart::new("pp_wave_2d", coords, g, vec![(-1.0, 1.0); 2]).expect("valid chart")
}

/// Walker block `Σ 2 dv^a du^a + Σ F_ab(v) du^a du^b` on
/// `(v1..vm, u1..um)`; `f` holds the `F_ab` over those coordinates.
pub fn walker_block(name: &str, f: &[&[&str]]) -> Result<MetricChart, MetricError> {
    let m = f.len();
    let coords: Vec<String> = (1..=m).map(|a| format!("v{a}")).chain((1..=m).map(|a| format!("u{a}"))).collect();
    let mut g = vec![vec![Expr::zero(); 2 * m]; 2 * m];
    for a in 0..m {
        g[a][m + a] = Expr::num(1.0);
        g[m + a][a] = Expr::num(1.0);
        if f[a].len() != m {
            return Err(MetricError::Invalid(format!("F must be {m}x{m}")));
        }
        for b in 0..m {
            g[m + a][m + b] = parse_expr(f[a][b], &coords)?;
        }
    }
    MetricChart::new(name, coords, g, vec![(-1.0, 1.0); 2 * m])
}

#[derive(Clone, Debug)]
pub struct HarmonicFunction {
    pub name: &'static str,
    /// Library chart the expression lives on.
    pub chart: &'static str,
    pub expr: &'static str,
    pub nonzero_hessian: bool,
}

/// Closed-form harmonic functions for the bundled charts.
pub fn harmonic_library() -> Vec<HarmonicFunction> {
    vec![
        // real part of the stereographic coordinate
        HarmonicFunction {
            name: "sphere_stereo_x",
            chart: "unit_sphere",
            expr: "sin(theta)*cos(phi)/(1 + cos(theta))",
            nonzero_hessian: true,
        },
        HarmonicFunction {
            name: "sphere_stereo_y",
            chart: "unit_sphere",
            expr: "sin(theta)*sin(phi)/(1 + cos(theta))",
            nonzero_hessian: true,
        },
        // Re z² in the stereographic coordinate
        HarmonicFunction {
            name: "sphere_stereo_x2_y2",
            chart: "unit_sphere",
            expr: "(sin(theta)/(1 + cos(theta)))^2*cos(2*phi)",
            nonzero_hessian: true,
        },
        HarmonicFunction {
            name: "sphere_log_tan",
            chart: "unit_sphere",
            expr: "ln(sin(theta)/(1 + cos(theta)))",
            nonzero_hessian: true,
        },
        HarmonicFunction {
            name: "plane_saddle",
            chart: "flat2",
            expr: "x1^2 - x2^2",
            nonzero_hessian: true,
        },
        HarmonicFunction {
            name: "plane_xy",
            chart: "flat2",
            expr: "x1*x2",
            nonzero_hessian: true,
        },
        HarmonicFunction {
            name: "plane_exp_cos",
            chart: "flat2",
            expr: "exp(x1)*cos(x2)",
            nonzero_hessian: true,
        },
        HarmonicFunction {
            name: "plane_linear",
            chart: "flat2",
            expr: "x1 + 2*x2",
            nonzero_hessian: false,
        },
    ]
}

fn require_einstein(chart: &MetricChart, lambda: f64, what: &str) -> Result<(), MetricError> {
    let r = einstein_check(chart, lambda, &chart.sample_points(PRE_SAMPLES, PRE_SEED), PRE_TOL)?;
    if !r.pass {
        return Err(MetricError::Precondition(format!(
            "{what} `{}` is not Einstein with Λ = {lambda} (residual {:e} at {:?})",
            chart.name(),
            r.max_residual,
            r.worst_point
        )));
    }
    Ok(())
}

fn require_harmonic(chart: &MetricChart, h: &Expr, what: &str) -> Result<(), MetricError> {
    let r = laplace_check(chart, h, &chart.sample_points(PRE_SAMPLES, PRE_SEED), PRE_TOL)?;
    if !r.pass {
        return Err(MetricError::Precondition(format!(
            "{what} = {} is not harmonic on `{}` (|Δ| = {:e} at {:?})",
            r.function,
            chart.name(),
            r.max_abs,
            r.worst_point
        )));
    }
    Ok(())
}

fn check_fresh(h: &MetricChart, reserved: &[String]) -> Result<(), MetricError> {
    if let Some(c) = h.coords().iter().find(|c| reserved.contains(c)) {
        return Err(MetricError::Invalid(format!("coordinate `{c}` clashes with a Walker coordinate")));
    }
    Ok(())
}

fn v2() -> Expr {
    Expr::pow(Expr::var(0), Expr::num(2.0))
}

/// `2 dv du + h + (Λ v² + H₀) du²` on `(v, x¹..xⁿ, u)`.
pub fn build_example1(h: &MetricChart, h0: &Expr, lambda: f64) -> Result<MetricChart, MetricError> {
    require_einstein(h, lambda, "h")?;
    require_harmonic(h, h0, "H0")?;
    let n = h.dim();
    check_fresh(h, &names(&["v", "u"]))?;
    let coords: Vec<String> = std::iter::once("v".to_string())
        .chain(h.coords().iter().cloned())
        .chain(std::iter::once("u".to_string()))
        .collect();
    let shift = |i: usize| i + 1;
    let mut g = vec![vec![Expr::zero(); n + 2]; n + 2];
    g[0][n + 1] = Expr::num(1.0);
    for a in 0..n {
        for b in 0..n {
            g[a + 1][b + 1] = h.entry(a, b).reindex(&shift);
        }
    }
    g[n + 1][n + 1] = Expr::add(Expr::mul(Expr::num(lambda), v2()), h0.reindex(&shift));
    let domain = std::iter::once((-1.0, 1.0))
        .chain(h.domain().iter().copied())
        .chain(std::iter::once((-1.0, 1.0)))
        .collect();
    MetricChart::new(format!("example1[{}]", h.name()), coords, g, domain)
}

/// Ingredients of the index-2 Walker charts. `h1`, `h2`, `h12` are
/// functions on `h`; `f_block` is the 4-dimensional Walker chart on
/// `(v1, v2, u1, u2)` needed by families 2 and 3.
#[derive(Clone, Debug)]
pub struct Index2Ingredients {
    pub lambda: f64,
    pub h: MetricChart,
    pub h1: Expr,
    pub h2: Expr,
    pub h12: Option<Expr>,
    pub f_block: Option<MetricChart>,
}

fn check_walker_form(f: &MetricChart, m: usize) -> Result<(), MetricError> {
    if f.dim() != 2 * m {
        return Err(MetricError::Invalid(format!("Walker block must have dimension {}", 2 * m)));
    }
    for p in f.sample_points(4, PRE_SEED) {
        let g = f.metric_at(&p);
        for a in 0..m {
            for b in 0..m {
                let vu = if a == b { 1.0 } else { 0.0 };
                if g[(a, b)] != 0.0 || (g[(a, m + b)] - vu).abs() > 1e-14 {
                    return Err(MetricError::Invalid(format!(
                        "`{}` is not of the form Σ 2dv du + F du du",
                        f.name()
                    )));
                }
            }
        }
    }
    for a in m..2 * m {
        for b in m..2 * m {
            if f.entry(a, b).variables().iter().any(|v| *v >= m) {
                return Err(MetricError::Invalid(format!("F in `{}` depends on u", f.name())));
            }
        }
    }
    Ok(())
}

/// Index-2 Walker charts on `(v1, v2, x.., u1, u2)`:
/// families 2–3: `Σ 2dv^a du^a + h + (F_ab + H_ab) du^a du^b`;
/// families 4–5: `Σ 2dv^a du^a + h + (Λv1² + H1) du1² + (Λv2² + μ v1² + H2) du2²`
/// with `μ = 0` for family 4 and `μ = 1` for family 5.
pub fn build_index2_metric(family: u8, ing: &Index2Ingredients) -> Result<MetricChart, MetricError> {
    let h = &ing.h;
    let n = h.dim();
    let lambda = ing.lambda;
    require_einstein(h, lambda, "h")?;
    require_harmonic(h, &ing.h1, "H1")?;
    require_harmonic(h, &ing.h2, "H2")?;
    if let Some(h12) = &ing.h12 {
        require_harmonic(h, h12, "H12")?;
    }
    check_fresh(h, &names(&["v1", "v2", "u1", "u2"]))?;
    let coords: Vec<String> = ["v1", "v2"]
        .iter()
        .map(|s| s.to_string())
        .chain(h.coords().iter().cloned())
        .chain(["u1", "u2"].iter().map(|s| s.to_string()))
        .collect();
    let (u1, u2) = (n + 2, n + 3);
    let shift = |i: usize| i + 2;
    let mut g = vec![vec![Expr::zero(); n + 4]; n + 4];
    g[0][u1] = Expr::num(1.0);
    g[1][u2] = Expr::num(1.0);
    for a in 0..n {
        for b in 0..n {
            g[a + 2][b + 2] = h.entry(a, b).reindex(&shift);
        }
    }
    let (h1, h2) = (ing.h1.reindex(&shift), ing.h2.reindex(&shift));
    let h12 = ing.h12.as_ref().map(|e| e.reindex(&shift)).unwrap_or_else(Expr::zero);
    match family {
        2 | 3 => {
            let f = ing
                .f_block
                .as_ref()
                .ok_or_else(|| MetricError::Precondition(format!("family {family} needs the 4-dimensional F block")))?;
            check_walker_form(f, 2)?;
            require_einstein(f, lambda, "F block")?;
            // f coordinates (v1, v2, u1, u2) → (0, 1, u1, u2)
            let map = move |i: usize| if i < 2 { i } else { i + n };
            g[u1][u1] = Expr::add(f.entry(2, 2).reindex(&map), h1);
            g[u1][u2] = Expr::add(f.entry(2, 3).reindex(&map), h12);
            g[u2][u2] = Expr::add(f.entry(3, 3).reindex(&map), h2);
        }
        4 | 5 => {
            if !h12.is_zero() {
                return Err(MetricError::Invalid("families 4 and 5 carry no H12 term".into()));
            }
            let mu = if family == 5 { 1.0 } else { 0.0 };
            let l = Expr::num(lambda);
            g[u1][u1] = Expr::add(Expr::mul(l.clone(), v2()), h1);
            g[u2][u2] = Expr::add(
                Expr::add(
                    Expr::mul(l, Expr::pow(Expr::var(1), Expr::num(2.0))),
                    Expr::mul(Expr::num(mu), v2()),
                ),
                h2,
            );
        }
        _ => {
            return Err(MetricError::Invalid(format!(
                "family {family} has no Walker chart here (family 1 uses build_example1 with a Lorentzian h)"
            )))
        }
    }
    let domain = [(-1.0, 1.0); 2]
        .into_iter()
        .chain(h.domain().iter().copied())
        .chain([(-1.0, 1.0); 2])
        .collect();
    MetricChart::new(format!("index2_family{family}[{}]", h.name()), coords, g, domain)
}

/// Correction terms added to the product metric `Σ f_i + Σ h_α`.
/// Entries are expression strings over the assembled coordinates
/// `v{i}_{a}`, the `h_α` coordinates and `u{i}_{a}` (1-based indices).
#[derive(Clone, Debug)]
pub enum CorrectionTerm {
    /// `Σ F^{ij}_{ab}(v_i) du_j^a du_j^b`, `m_j × m_j`.
    F { i: usize, j: usize, entries: Vec<Vec<String>> },
    /// `Σ N^{iα}_{ab}(x_α) du_i^a du_i^b`, `m_i × m_i`.
    N { i: usize, alpha: usize, entries: Vec<Vec<String>> },
    /// `Σ C^{ij}_{ab}(u_i, u_j) du_i^a du_j^b`, `m_i × m_j`.
    C { i: usize, j: usize, entries: Vec<Vec<String>> },
}

#[derive(Clone, Debug)]
pub struct ConclusionIngredients {
    pub lambda: f64,
    /// Walker blocks `f_i` on `(v1..v_{m_i}, u1..u_{m_i})`.
    pub f: Vec<MetricChart>,
    pub h: Vec<MetricChart>,
    pub corrections: Vec<CorrectionTerm>,
}

/// Experimental: assembles the conjectural Einstein metric for a block
/// spec. Only the ingredients are checked; whether the result is Einstein
/// with the holonomy of the spec is left to `einstein_check` and
/// `holonomy_estimate`.
pub fn build_conclusion_metric(spec: &StructuredAlgebraSpec, ing: &ConclusionIngredients) -> Result<MetricChart, MetricError> {
    let k = spec.v_dims.len();
    if ing.f.len() != k {
        return Err(MetricError::Invalid(format!("{k} V-blocks but {} f-charts", ing.f.len())));
    }
    if ing.h.len() != spec.l_blocks.len() {
        return Err(MetricError::Invalid(format!("{} L-blocks but {} h-charts", spec.l_blocks.len(), ing.h.len())));
    }
    for (i, (f, &m)) in ing.f.iter().zip(&spec.v_dims).enumerate() {
        check_walker_form(f, m)?;
        require_einstein(f, ing.lambda, &format!("f_{}", i + 1))?;
    }
    for (a, (h, l)) in ing.h.iter().zip(&spec.l_blocks).enumerate() {
        if h.dim() != l.dim() {
            return Err(MetricError::Invalid(format!("h_{} has dimension {}, L_{} has {}", a + 1, h.dim(), a + 1, l.dim())));
        }
        require_einstein(h, ing.lambda, &format!("h_{}", a + 1))?;
    }

    let m_total = spec.m();
    let n_total: usize = ing.h.iter().map(MetricChart::dim).sum();
    let dim = 2 * m_total + n_total;
    let v_idx = |i: usize, a: usize| spec.v_offset(i) + a;
    let u_idx = |i: usize, a: usize| m_total + n_total + spec.v_offset(i) + a;
    let h_off: Vec<usize> = (0..ing.h.len())
        .map(|a| m_total + ing.h[..a].iter().map(MetricChart::dim).sum::<usize>())
        .collect();

    let mut coords: Vec<String> = Vec::with_capacity(dim);
    for (i, &m) in spec.v_dims.iter().enumerate() {
        coords.extend((1..=m).map(|a| format!("v{}_{a}", i + 1)));
    }
    for h in &ing.h {
        coords.extend(h.coords().iter().cloned());
    }
    for (i, &m) in spec.v_dims.iter().enumerate() {
        coords.extend((1..=m).map(|a| format!("u{}_{a}", i + 1)));
    }
    let mut domain = vec![(-1.0, 1.0); dim];
    let mut g = vec![vec![Expr::zero(); dim]; dim];

    for (i, f) in ing.f.iter().enumerate() {
        let m = spec.v_dims[i];
        let map = |x: usize| if x < m { v_idx(i, x) } else { u_idx(i, x - m) };
        for x in 0..2 * m {
            domain[map(x)] = f.domain()[x];
            for y in 0..2 * m {
                g[map(x)][map(y)] = f.entry(x, y).reindex(&map);
            }
        }
    }
    for (a, h) in ing.h.iter().enumerate() {
        let off = h_off[a];
        let map = |x: usize| x + off;
        for x in 0..h.dim() {
            domain[off + x] = h.domain()[x];
            for y in 0..h.dim() {
                g[off + x][off + y] = h.entry(x, y).reindex(&map);
            }
        }
    }

    let allowed = |vars: &[usize], ok: &dyn Fn(usize) -> bool, what: &str| -> Result<(), MetricError> {
        match vars.iter().find(|v| !ok(**v)) {
            Some(v) => Err(MetricError::Invalid(format!("{what} may not depend on `{}`", coords[*v]))),
            None => Ok(()),
        }
    };
    let parse_block = |entries: &[Vec<String>], rows: usize, cols: usize, what: &str| -> Result<Vec<Vec<Expr>>, MetricError> {
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(MetricError::Invalid(format!("{what} must be {rows}x{cols}")));
        }
        entries
            .iter()
            .map(|r| r.iter().map(|s| parse_expr(s, &coords)).collect())
            .collect()
    };

    for term in &ing.corrections {
        match term {
            CorrectionTerm::F { i, j, entries } => {
                let (i, j) = (*i, *j);
                if i >= j || j >= k {
                    return Err(MetricError::Invalid(format!("F^{{{}{}}} needs i < j", i + 1, j + 1)));
                }
                if !spec.f_off.iter().any(|b| b.i == i && b.j == j) {
                    return Err(MetricError::Invalid(format!("spec has no f_{}{}", i + 1, j + 1)));
                }
                let what = format!("F^{}{}", i + 1, j + 1);
                let mj = spec.v_dims[j];
                let block = parse_block(entries, mj, mj, &what)?;
                let vi = v_idx(i, 0)..v_idx(i, 0) + spec.v_dims[i];
                for (a, row) in block.into_iter().enumerate() {
                    for (b, e) in row.into_iter().enumerate() {
                        allowed(&e.variables(), &|v| vi.contains(&v), &what)?;
                        let (x, y) = (u_idx(j, a), u_idx(j, b));
                        g[x][y] = Expr::add(g[x][y].clone(), e);
                    }
                }
            }
            CorrectionTerm::N { i, alpha, entries } => {
                let (i, alpha) = (*i, *alpha);
                if i >= k || alpha >= ing.h.len() {
                    return Err(MetricError::Invalid("N term out of range".into()));
                }
                if spec.n_block(i, alpha).is_none() {
                    return Err(MetricError::Invalid(format!("spec has no N_{}{}", i + 1, alpha + 1)));
                }
                let what = format!("N^{}{}", i + 1, alpha + 1);
                let mi = spec.v_dims[i];
                let block = parse_block(entries, mi, mi, &what)?;
                let xa = h_off[alpha]..h_off[alpha] + ing.h[alpha].dim();
                for (a, row) in block.into_iter().enumerate() {
                    for (b, e) in row.into_iter().enumerate() {
                        allowed(&e.variables(), &|v| xa.contains(&v), &what)?;
                        let (x, y) = (u_idx(i, a), u_idx(i, b));
                        g[x][y] = Expr::add(g[x][y].clone(), e);
                    }
                }
            }
            CorrectionTerm::C { i, j, entries } => {
                let (i, j) = (*i, *j);
                if i > j || j >= k {
                    return Err(MetricError::Invalid("C term out of range".into()));
                }
                if !spec.c_blocks.iter().any(|b| b.i == i && b.j == j && b.gens.iter().any(|m| !m.is_zero())) {
                    return Err(MetricError::Invalid(format!("spec has no C_{}{}", i + 1, j + 1)));
                }
                let what = format!("C^{}{}", i + 1, j + 1);
                let block = parse_block(entries, spec.v_dims[i], spec.v_dims[j], &what)?;
                let ui = u_idx(i, 0)..u_idx(i, 0) + spec.v_dims[i];
                let uj = u_idx(j, 0)..u_idx(j, 0) + spec.v_dims[j];
                for (a, row) in block.into_iter().enumerate() {
                    for (b, e) in row.into_iter().enumerate() {
                        allowed(&e.variables(), &|v| ui.contains(&v) || uj.contains(&v), &what)?;
                        // C du_i^a du_j^b contributes ½C to both symmetric slots
                        let (x, y) = (u_idx(i, a), u_idx(j, b));
                        let half = Expr::mul(Expr::num(0.5), e);
                        g[x][y] = Expr::add(g[x][y].clone(), half.clone());
                        g[y][x] = Expr::add(g[y][x].clone(), half);
                    }
                }
            }
        }
    }
    // MetricChart::new reads the upper triangle
    MetricChart::new(format!("conclusion[{}]", spec.label), coords, g, domain)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_library_is_harmonic() {
        let sphere = unit_sphere();
        let plane = flat_chart(&[1, 1], &["x1", "x2"], 1.0).unwrap();
        for f in harmonic_library() {
            let chart = if f.chart == "unit_sphere" { &sphere } else { &plane };
            let e = chart.parse(f.expr).unwrap();
            let r = laplace_check(chart, &e, &chart.sample_points(20, 7), 1e-10).unwrap();
            assert!(r.pass, "{} residual {}", f.name, r.max_abs);
        }
    }

    #[test]
    fn pp_wave_is_einstein() {
        for l in [-1.0, 0.5, 2.0] {
            let c = pp_wave_2d(l);
            assert!(einstein_check(&c, l, &c.sample_points(5, 0), 1e-12).unwrap().pass);
        }
    }

    #[test]
    fn example1_preconditions() {
        let s = unit_sphere();
        let good = s.parse("sin(theta)*cos(phi)/(1 + cos(theta))").unwrap();
        let bad = s.parse("cos(theta)").unwrap();
        assert!(build_example1(&s, &good, 1.0).is_ok());
        assert!(matches!(build_example1(&s, &bad, 1.0), Err(MetricError::Precondition(_))));
        assert!(matches!(build_example1(&s, &good, 2.0), Err(MetricError::Precondition(_))));
    }

    #[test]
    fn index2_family_checks() {
        let h = flat_chart(&[1, 1], &["x1", "x2"], 1.0).unwrap();
        let ing = Index2Ingredients {
            lambda: 0.0,
            h1: h.parse("x1^2 - x2^2").unwrap(),
            h2: h.parse("x1*x2").unwrap(),
            h12: None,
            f_block: None,
            h,
        };
        assert!(build_index2_metric(4, &ing).is_ok());
        assert!(build_index2_metric(2, &ing).is_err());
        assert!(build_index2_metric(6, &ing).is_err());
    }
}
