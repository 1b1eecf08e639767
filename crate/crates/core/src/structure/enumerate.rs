//! Index-2 structured algebras in `so(2, n+2)` built from a Riemannian
//! Einstein holonomy `h = h_1 ⊕ … ⊕ h_t ⊂ so(n)`, plus the validator that
//! checks the necessary conditions for Einstein holonomy.

use rayon::prelude::*;
use serde::Serialize;

use super::reducibility::{is_irreducible, is_weakly_irreducible, Decision};
use super::spec::{assemble, LBlock, SpanBlock, StructuredAlgebraSpec};
use super::StructureError;
use crate::curvature::{curvature_space, einstein_space, l_span_affine};
use crate::lie::{catalog_entry, commutant_within, gl_basis, so_basis, solve_within, MatrixLieAlgebra};
use crate::linalg::rational::rational_sqrt;
use crate::linalg::{int, RatMatrix, Rational};
use crate::quadratic::QuadraticSpace;

/// An irreducible Riemannian holonomy factor admitting Einstein curvature.
#[derive(Clone, Debug)]
pub struct HFactor {
    pub id: String,
    pub dim: usize,
    pub h: Vec<RatMatrix>,
    /// An `h`-invariant orthogonal complex structure, when a rational one exists.
    pub complex_structure: Option<RatMatrix>,
}

fn sign_metric(signs: &[i64]) -> QuadraticSpace {
    let n = signs.len();
    QuadraticSpace::new(RatMatrix::from_triplets(n, n, signs.iter().enumerate().map(|(i, &s)| (i, i, int(s)))))
        .expect("±1 diagonal")
}

fn r1_nonempty(g: &MatrixLieAlgebra) -> Result<bool, StructureError> {
    let space = curvature_space(g)?;
    Ok(!einstein_space(g, &space)?.is_empty())
}

/// Rational `J ∈ so(n)` commuting with `h` and squaring to `−1`.
fn complex_structure(h: &[RatMatrix], n: usize) -> Option<RatMatrix> {
    let so = so_basis(&RatMatrix::identity(n));
    let comm = commutant_within(&so, h);
    let mut cands = comm.clone();
    for i in 0..comm.len() {
        for j in i + 1..comm.len() {
            cands.push(comm[i].add(&comm[j]));
        }
    }
    for j in cands {
        let sq = j.mul(&j);
        let c = -sq.get(0, 0);
        if c > Rational::default() && sq == RatMatrix::identity(n).scale(&-c.clone()) {
            if let Some(root) = rational_sqrt(&c) {
                return Some(j.scale(&(Rational::from_integer(1.into()) / root)));
            }
        }
    }
    None
}

/// Resolves a catalog id to an Einstein-capable Riemannian factor.
pub fn einstein_factor(id: &str) -> Result<HFactor, StructureError> {
    let entry = catalog_entry(id)?;
    let invalid = |why: &str| Err(StructureError::Invalid(format!("holonomy factor `{id}`: {why}")));
    if entry.family.experimental {
        return invalid("experimental catalog entries are excluded");
    }
    let g = entry.algebra;
    let sig = g.metric().map(QuadraticSpace::signature);
    if !sig.is_some_and(|s| s.p == 0 || s.q == 0) {
        return invalid("metric is not definite");
    }
    if g.dim() == 0 {
        return invalid("the zero algebra is not an irreducible holonomy");
    }
    let n = g.ambient_dim();
    if let Decision::No { .. } = is_irreducible(g.basis(), n) {
        return invalid("reducible on R^n");
    }
    if !r1_nonempty(&g)? {
        return invalid("admits no Einstein curvature tensor (R1 is empty)");
    }
    Ok(HFactor {
        id: id.to_string(),
        dim: n,
        complex_structure: complex_structure(g.basis(), n),
        h: g.basis().to_vec(),
    })
}

fn units(r: usize, c: usize) -> Vec<RatMatrix> {
    (0..r)
        .flat_map(|i| (0..c).map(move |j| RatMatrix::from_triplets(r, c, [(i, j, int(1))])))
        .collect()
}

fn j2() -> RatMatrix {
    RatMatrix::from_i64(&[&[0, -1], &[1, 0]])
}

/// `{X ∈ Hom(R², L) : X J₂ᵗ = ±J X}`: the two complex lines inside `R² ⊗ L`.
fn complex_line(j: &RatMatrix, conjugate: bool) -> Vec<RatMatrix> {
    let n = j.nrows();
    let j2t = j2().transpose();
    let sign = if conjugate { int(-1) } else { int(1) };
    let base = units(n, 2);
    let flat = solve_within(
        &base.iter().map(|u| RatMatrix::zeros(n + 2, n + 2).with_block(0, 0, u)).collect::<Vec<_>>(),
        |x| {
            let x = x.block(0, 0, n, 2);
            x.mul(&j2t).sub(&j.mul(&x).scale(&sign)).flatten()
        },
    );
    flat.iter().map(|x| x.block(0, 0, n, 2)).collect()
}

fn neg_block(f: &HFactor) -> LBlock {
    LBlock {
        name: f.id.clone(),
        signs: vec![-1; f.dim],
        h: f.h.clone(),
    }
}

fn lambda2_rank2() -> SpanBlock {
    SpanBlock {
        i: 0,
        j: 0,
        gens: vec![RatMatrix::from_i64(&[&[0, 1], &[-1, 0]])],
    }
}

fn lambda2_split() -> SpanBlock {
    SpanBlock {
        i: 0,
        j: 1,
        gens: vec![RatMatrix::identity(1)],
    }
}

fn product<T: Clone>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    options.iter().fold(vec![Vec::new()], |acc, opts| {
        acc.iter()
            .flat_map(|prefix| {
                opts.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    v
                })
            })
            .collect()
    })
}

fn family1(n: usize, factors: &[HFactor]) -> Vec<StructuredAlgebraSpec> {
    let t = factors.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << t) {
        let chosen: Vec<&HFactor> = (0..t).filter(|a| mask & (1 << a) != 0).map(|a| &factors[a]).collect();
        let used: usize = chosen.iter().map(|f| f.dim).sum();
        let l = n - used;
        if l == 0 {
            continue;
        }
        let mut signs = vec![1];
        signs.extend(vec![-1; l + 1]);
        let gram = sign_metric(&signs);
        let mut blocks = vec![LBlock {
            name: format!("so(1,{})", l + 1),
            h: so_basis(gram.gram()),
            signs,
        }];
        blocks.extend(chosen.iter().map(|f| neg_block(f)));
        let n_blocks = blocks
            .iter()
            .enumerate()
            .map(|(a, b)| SpanBlock {
                i: 0,
                j: a,
                gens: units(b.dim(), 1),
            })
            .collect();
        let names: Vec<&str> = chosen.iter().map(|f| f.id.as_str()).collect();
        out.push(StructuredAlgebraSpec {
            label: format!("1: gl(1)+so(1,{})+[{}] |x R^(1,{})", l + 1, names.join(","), n + 1),
            family: Some(1),
            v_dims: vec![1],
            l_blocks: blocks,
            f: vec![vec![RatMatrix::identity(1)]],
            f_off: vec![],
            n_blocks,
            c_blocks: vec![],
        });
    }
    out
}

fn full_n2(factors: &[HFactor]) -> Vec<SpanBlock> {
    factors
        .iter()
        .enumerate()
        .map(|(a, f)| SpanBlock {
            i: 0,
            j: a,
            gens: units(f.dim, 2),
        })
        .collect()
}

fn rank2_spec(family: u8, label: String, f: Vec<RatMatrix>, factors: &[HFactor], n_blocks: Vec<SpanBlock>) -> StructuredAlgebraSpec {
    StructuredAlgebraSpec {
        label,
        family: Some(family),
        v_dims: vec![2],
        l_blocks: factors.iter().map(neg_block).collect(),
        f: vec![f],
        f_off: vec![],
        n_blocks,
        c_blocks: vec![lambda2_rank2()],
    }
}

fn gl1c() -> Vec<RatMatrix> {
    vec![RatMatrix::identity(2), j2()]
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    L,
    Zero,
}

fn split_spec(family: u8, factors: &[HFactor], pattern: &[(Slot, Slot)]) -> StructuredAlgebraSpec {
    let mut n_blocks = Vec::new();
    let mut tags = Vec::new();
    for (a, (f, &(s1, s2))) in factors.iter().zip(pattern).enumerate() {
        for (i, s) in [(0, s1), (1, s2)] {
            if s == Slot::L {
                n_blocks.push(SpanBlock {
                    i,
                    j: a,
                    gens: units(f.dim, 1),
                });
            }
        }
        let show = |s: Slot| if s == Slot::L { "L" } else { "0" };
        tags.push(format!("({},{})", show(s1), show(s2)));
    }
    let f1 = vec![RatMatrix::identity(1)];
    let (f_off, what) = if family == 5 {
        (
            vec![SpanBlock {
                i: 0,
                j: 1,
                gens: vec![RatMatrix::identity(1)],
            }],
            "upper-triangular",
        )
    } else {
        (vec![], "gl(1)+gl(1)")
    };
    StructuredAlgebraSpec {
        label: format!("{family}: {what}, N={}", tags.join("")),
        family: Some(family),
        v_dims: vec![1, 1],
        l_blocks: factors.iter().map(neg_block).collect(),
        f: vec![f1.clone(), f1],
        f_off,
        n_blocks,
        c_blocks: vec![lambda2_split()],
    }
}

/// Every admissible instance of the index-2 classification for the
/// Riemannian holonomy with factors `h_spec` (catalog ids). Factors are
/// treated as labeled.
pub fn enumerate_index2(n: usize, h_spec: &[String]) -> Result<Vec<StructuredAlgebraSpec>, StructureError> {
    let factors: Vec<HFactor> = h_spec.iter().map(|id| einstein_factor(id)).collect::<Result<_, _>>()?;
    let total: usize = factors.iter().map(|f| f.dim).sum();
    if total != n {
        return Err(StructureError::Invalid(format!(
            "holonomy factors act on R^{total}, expected R^{n}"
        )));
    }
    let mut out = family1(n, &factors);
    if factors.is_empty() {
        out.push(StructuredAlgebraSpec {
            label: "6: gl(2,R) in so(2,2)".into(),
            family: Some(6),
            v_dims: vec![2],
            l_blocks: vec![],
            f: vec![gl_basis(2)],
            f_off: vec![],
            n_blocks: vec![],
            c_blocks: vec![],
        });
        out.push(StructuredAlgebraSpec {
            label: "7: gl(1,C) in so(2,2)".into(),
            family: Some(7),
            v_dims: vec![2],
            l_blocks: vec![],
            f: vec![gl1c()],
            f_off: vec![],
            n_blocks: vec![],
            c_blocks: vec![],
        });
        return Ok(out);
    }

    out.push(rank2_spec(2, "2: gl(2,R), N full".into(), gl_basis(2), &factors, full_n2(&factors)));

    let options: Vec<Vec<(&'static str, Vec<RatMatrix>)>> = factors
        .iter()
        .map(|f| {
            let mut o = vec![("full", units(f.dim, 2))];
            if let Some(j) = &f.complex_structure {
                o.push(("L", complex_line(j, false)));
                o.push(("Lbar", complex_line(j, true)));
            }
            o
        })
        .collect();
    for choice in product(&options) {
        let tags: Vec<&str> = choice.iter().map(|(t, _)| *t).collect();
        let n_blocks = choice
            .into_iter()
            .enumerate()
            .map(|(a, (_, gens))| SpanBlock { i: 0, j: a, gens })
            .collect();
        out.push(rank2_spec(3, format!("3: gl(1,C), N=({})", tags.join(",")), gl1c(), &factors, n_blocks));
    }

    let slots = vec![vec![(Slot::L, Slot::Zero), (Slot::Zero, Slot::L), (Slot::L, Slot::L)]; factors.len()];
    for pattern in product(&slots) {
        out.push(split_spec(4, &factors, &pattern));
    }
    let slots5 = vec![vec![(Slot::L, Slot::L), (Slot::L, Slot::Zero)]; factors.len()];
    for pattern in product(&slots5) {
        out.push(split_spec(5, &factors, &pattern));
    }
    Ok(out)
}

/// The family-4 shape without the `Λ²R²` block, used as a control.
pub fn family4_without_c(n: usize, h_spec: &[String], pattern: &[(bool, bool)]) -> Result<StructuredAlgebraSpec, StructureError> {
    let factors: Vec<HFactor> = h_spec.iter().map(|id| einstein_factor(id)).collect::<Result<_, _>>()?;
    let total: usize = factors.iter().map(|f| f.dim).sum();
    if total != n || pattern.len() != factors.len() {
        return Err(StructureError::Invalid("pattern does not match the factors".into()));
    }
    let slot = |b: bool| if b { Slot::L } else { Slot::Zero };
    let pat: Vec<(Slot, Slot)> = pattern.iter().map(|&(a, b)| (slot(a), slot(b))).collect();
    let mut spec = split_spec(4, &factors, &pat);
    spec.c_blocks.clear();
    spec.label = format!("{} without C", spec.label);
    spec.family = None;
    Ok(spec)
}

/// Necessary conditions for `g` to be the holonomy of an Einstein metric.
#[derive(Clone, Debug, Serialize)]
pub struct EinsteinCandidateReport {
    pub label: String,
    pub family: Option<u8>,
    pub dim: usize,
    pub warnings: Vec<String>,
    pub contains_identities: bool,
    pub nilpotent_part_splits: bool,
    pub r1_nonempty: bool,
    pub l_r1_equals_g: bool,
    pub weakly_irreducible: Decision,
    /// `pr_so(r,s) g = ⊕ h_α` with every `h_α` irreducible and `R₁(h_α) ≠ ∅`.
    pub h_projection_decomposes: bool,
}

impl EinsteinCandidateReport {
    pub fn all_hold(&self) -> bool {
        self.r1_nonempty
            && self.l_r1_equals_g
            && self.weakly_irreducible == Decision::Yes
            && self.h_projection_decomposes
    }
}

pub fn validate_einstein_candidate(spec: &StructuredAlgebraSpec) -> Result<EinsteinCandidateReport, StructureError> {
    let warnings = spec.validate()?;
    let s = assemble(spec)?;
    let g = &s.algebra;
    let space = curvature_space(g)?;
    let r1 = einstein_space(g, &space)?;
    let l_r1 = l_span_affine(g, &r1);

    let n = s.frame.n();
    let m = s.frame.m;
    let proj: Vec<Vec<Rational>> = g.basis().iter().map(|x| x.block(m, m, n, n).flatten()).collect();
    let proj = crate::linalg::SubspaceBasis::span(n * n, &proj);
    let mut h_flat = Vec::new();
    let mut factors_ok = true;
    for (a, l) in spec.l_blocks.iter().enumerate() {
        let o = spec.l_offset(a);
        h_flat.extend(l.h.iter().map(|x| RatMatrix::zeros(n, n).with_block(o, o, x).flatten()));
        let ha = MatrixLieAlgebra::new(l.name.clone(), l.dim(), l.h.clone(), Some(sign_metric(&l.signs)))?;
        factors_ok &= ha.dim() > 0 && !matches!(is_irreducible(ha.basis(), l.dim()), Decision::No { .. }) && r1_nonempty(&ha)?;
    }
    let h_span = crate::linalg::SubspaceBasis::span(n * n, &h_flat);

    Ok(EinsteinCandidateReport {
        label: spec.label.clone(),
        family: spec.family,
        dim: g.dim(),
        warnings,
        contains_identities: s.contains_all_identities(),
        nilpotent_part_splits: s.nilpotent_part_splits(),
        r1_nonempty: !r1.is_empty(),
        l_r1_equals_g: !r1.is_empty() && l_r1 == *g.subspace(),
        weakly_irreducible: is_weakly_irreducible(g),
        h_projection_decomposes: factors_ok && proj == h_span,
    })
}

/// Validates independent specs in parallel, preserving order.
pub fn validate_all(specs: &[StructuredAlgebraSpec]) -> Vec<Result<EinsteinCandidateReport, StructureError>> {
    specs.par_iter().map(validate_einstein_candidate).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn count(specs: &[StructuredAlgebraSpec], fam: u8) -> usize {
        specs.iter().filter(|s| s.family == Some(fam)).count()
    }

    #[test]
    fn empty_holonomy_gives_the_two_so22_algebras() {
        let specs = enumerate_index2(0, &[]).unwrap();
        let fams: Vec<_> = specs.iter().map(|s| s.family.unwrap()).collect();
        assert_eq!(fams, vec![6, 7]);
    }

    #[test]
    fn so2_counts() {
        let specs = enumerate_index2(2, &ids(&["so:2"])).unwrap();
        assert_eq!(
            [1, 2, 3, 4, 5].map(|f| count(&specs, f)),
            [1, 1, 3, 3, 2]
        );
        for s in &specs {
            assemble(s).unwrap();
        }
    }

    #[test]
    fn real_factor_has_no_complex_lines() {
        let specs = enumerate_index2(3, &ids(&["so:3"])).unwrap();
        assert_eq!(count(&specs, 3), 1);
    }

    #[test]
    fn rejects_flat_or_mismatched_factors() {
        assert!(enumerate_index2(1, &[]).is_err());
        assert!(enumerate_index2(1, &ids(&["so:1"])).is_err());
        assert!(enumerate_index2(3, &ids(&["so:2"])).is_err());
        assert!(enumerate_index2(2, &ids(&["so:1,1"])).is_err());
    }

    #[test]
    fn family4_without_c_is_weakly_reducible() {
        for pattern in [vec![(true, false)], vec![(false, true)]] {
            let spec = family4_without_c(2, &ids(&["so:2"]), &pattern).unwrap();
            let s = assemble(&spec).unwrap();
            assert!(matches!(is_weakly_irreducible(&s.algebra), Decision::No { witness: Some(_) }));
        }
        let spec = family4_without_c(4, &ids(&["so:2", "so:2"]), &[(true, false), (false, true)]).unwrap();
        let s = assemble(&spec).unwrap();
        assert!(matches!(is_weakly_irreducible(&s.algebra), Decision::No { .. }));
        // Both slots filled without C is not even closed.
        let spec = family4_without_c(2, &ids(&["so:2"]), &[(true, true)]).unwrap();
        assert!(matches!(assemble(&spec), Err(StructureError::NotClosed { .. })));
    }

    #[test]
    fn lorentzian_example_report() {
        let minus = RatMatrix::identity(2).neg();
        let spec = StructuredAlgebraSpec {
            label: "gl(1)+so(2) |x R^2".into(),
            family: None,
            v_dims: vec![1],
            l_blocks: vec![LBlock {
                name: "so(2)".into(),
                signs: vec![-1, -1],
                h: so_basis(&minus),
            }],
            f: vec![vec![RatMatrix::identity(1)]],
            f_off: vec![],
            n_blocks: vec![SpanBlock { i: 0, j: 0, gens: units(2, 1) }],
            c_blocks: vec![],
        };
        let r = validate_einstein_candidate(&spec).unwrap();
        assert!(r.all_hold(), "{r:?}");
        assert_eq!(r.dim, 4);
    }

    #[test]
    fn block_diagonal_spec_fails_weak_irreducibility() {
        let spec = StructuredAlgebraSpec {
            label: "gl(1)+so(2)".into(),
            family: None,
            v_dims: vec![1],
            l_blocks: vec![LBlock {
                name: "so(2)".into(),
                signs: vec![-1, -1],
                h: so_basis(&RatMatrix::identity(2)),
            }],
            f: vec![vec![RatMatrix::identity(1)]],
            f_off: vec![],
            n_blocks: vec![],
            c_blocks: vec![],
        };
        let r = validate_einstein_candidate(&spec).unwrap();
        assert!(matches!(r.weakly_irreducible, Decision::No { .. }));
        assert!(!r.all_hold());
        assert!(!r.warnings.is_empty());
    }
}
