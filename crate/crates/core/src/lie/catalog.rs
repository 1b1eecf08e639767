//! Explicit rational bases for the classical families of irreducible
//! holonomy algebras and for the linear algebras `g ⊂ gl(n)` embedded in
//! `so(n,n)` as `diag(A, −Aᵗ)`.
//!
//! Complex structures are realised by `z = x + iy ↦ (x, y)` with
//! multiplication by `i` acting as `[[0,−1],[1,0]]` on each pair, and
//! quaternionic structures by right multiplication on `H = R⁴`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::algebra::{commutant_within, gl_basis, so_basis, solve_within, MatrixLieAlgebra};
use super::LieError;
use crate::linalg::{int, RatMatrix};
use crate::quadratic::{standard_space, witt_gram, QuadraticSpace, Signature};

#[derive(Clone, Debug, Serialize)]
pub struct CatalogFamily {
    pub id: &'static str,
    pub name: &'static str,
    pub params: &'static str,
    pub ambient: &'static str,
    pub dim_formula: &'static str,
    pub example: &'static str,
    pub in_berger_list: bool,
    pub in_einstein_list: bool,
    pub symmetric_family: bool,
    pub experimental: bool,
}

const fn fam(
    id: &'static str,
    name: &'static str,
    params: &'static str,
    ambient: &'static str,
    dim_formula: &'static str,
    example: &'static str,
    flags: (bool, bool, bool, bool),
) -> CatalogFamily {
    CatalogFamily {
        id,
        name,
        params,
        ambient,
        dim_formula,
        example,
        in_berger_list: flags.0,
        in_einstein_list: flags.1,
        symmetric_family: flags.2,
        experimental: flags.3,
    }
}

pub static FAMILIES: &[CatalogFamily] = &[
    fam("so:p,q", "so(p,q)", "p+q >= 1", "so(p,q)", "n(n-1)/2, n=p+q", "so:3", (true, true, false, false)),
    fam("so-c:p", "so(p,C)", "p >= 1", "so(p,p)", "p(p-1)", "so-c:3", (true, true, false, false)),
    fam("u:r,s", "u(r,s)", "r+s >= 1", "so(2r,2s)", "(r+s)^2", "u:1,1", (true, true, false, false)),
    fam("su:r,s", "su(r,s)", "r+s >= 1", "so(2r,2s)", "(r+s)^2-1", "su:2", (true, false, false, false)),
    fam("sp:r,s", "sp(r,s)", "r+s >= 1", "so(4r,4s)", "k(2k+1), k=r+s", "sp:1,0", (true, false, false, false)),
    fam("sp-sp1:r,s", "sp(r,s)+sp(1)", "r+s >= 1", "so(4r,4s)", "k(2k+1)+3, k=r+s", "sp-sp1:1,0", (true, true, false, false)),
    fam("sp-sl2:r", "sp(r,R)+sl(2,R)", "r >= 1", "so(2r,2r)", "r(2r+1)+3", "sp-sl2:1", (true, true, false, false)),
    fam("sp-sl2-c:r", "sp(r,C)+sl(2,C)", "r >= 1", "so(4r,4r)", "2r(2r+1)+6", "sp-sl2-c:1", (true, true, false, false)),
    fam("gl:n:R@so(n,n)", "gl(n,R)", "n >= 1", "so(n,n)", "n^2", "gl:2:R@so(2,2)", (true, true, true, false)),
    fam("sl:n:R@so(n,n)", "sl(n,R)", "n >= 2", "so(n,n)", "n^2-1", "sl:2:R@so(2,2)", (true, false, false, false)),
    fam("gl:m:C@so(2m,2m)", "gl(m,C)", "m >= 1", "so(2m,2m)", "2m^2", "gl:1:C@so(2,2)", (true, true, true, false)),
    fam("sl:m:C@so(2m,2m)", "sl(m,C)", "m >= 2", "so(2m,2m)", "2(m^2-1)", "sl:2:C@so(4,4)", (true, false, false, false)),
    fam("sp:2m:R@so(2m,2m)", "sp(2m,R)", "m >= 1", "so(2m,2m)", "m(2m+1)", "sp:2:R@so(2,2)", (true, false, false, false)),
    fam("sp:2k:C@so(4k,4k)", "sp(2k,C)", "k >= 1", "so(4k,4k)", "2k(2k+1)", "sp:2:C@so(4,4)", (true, false, false, false)),
    fam("g2", "G2", "-", "so(7)", "14", "g2", (true, false, false, true)),
    fam("spin7", "spin(7)", "-", "so(8)", "21", "spin7", (true, false, false, true)),
];

pub fn families() -> &'static [CatalogFamily] {
    FAMILIES
}

/// A constructed catalog algebra together with its family record.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub family: &'static CatalogFamily,
    pub params: Vec<usize>,
    pub algebra: MatrixLieAlgebra,
}

fn family(id: &str) -> &'static CatalogFamily {
    FAMILIES.iter().find(|f| f.id == id).expect("known family")
}

fn bad(id: &str, why: &str) -> LieError {
    LieError::InvalidParams(format!("{id}: {why}"))
}

fn parse_counts(id: &str, text: &str, arity: usize) -> Result<Vec<usize>, LieError> {
    let parts: Result<Vec<usize>, _> = text.split(',').map(|t| t.trim().parse::<usize>()).collect();
    let mut parts = parts.map_err(|_| bad(id, "parameters must be non-negative integers"))?;
    if arity == 2 && parts.len() == 1 {
        parts.push(0);
    }
    if parts.len() != arity {
        return Err(bad(id, &format!("expected {arity} parameter(s)")));
    }
    Ok(parts)
}

/// Builds a catalog algebra from its string id, e.g. `so:3`, `so:2,1`,
/// `u:1,1`, `sl:2:R@so(2,2)`.
pub fn catalog(id: &str) -> Result<MatrixLieAlgebra, LieError> {
    Ok(catalog_entry(id)?.algebra)
}

pub fn catalog_entry(id: &str) -> Result<CatalogEntry, LieError> {
    let id = id.trim();
    let (key, rest) = id.split_once(':').unwrap_or((id, ""));
    if rest.contains(':') {
        return nn_entry(id, key, rest);
    }
    let entry = |fid: &str, params: Vec<usize>, algebra: MatrixLieAlgebra| CatalogEntry {
        family: family(fid),
        params,
        algebra,
    };
    match key {
        "so" => {
            let p = parse_counts(id, rest, 2)?;
            if p[0] + p[1] == 0 {
                return Err(bad(id, "need p+q >= 1"));
            }
            Ok(entry("so:p,q", p.clone(), so_pq(p[0], p[1])))
        }
        "so-c" => {
            let p = parse_counts(id, rest, 1)?;
            if p[0] == 0 {
                return Err(bad(id, "need p >= 1"));
            }
            let (gens, gram) = complexify(&so_basis(&RatMatrix::identity(p[0])), &RatMatrix::identity(p[0]));
            Ok(entry("so-c:p", p.clone(), build(format!("so({},C)", p[0]), gens, gram)?))
        }
        "u" | "su" => {
            let p = parse_counts(id, rest, 2)?;
            if p[0] + p[1] == 0 {
                return Err(bad(id, "need r+s >= 1"));
            }
            let u = unitary(p[0], p[1])?;
            if key == "u" {
                Ok(entry("u:r,s", p, u))
            } else {
                let su = u.derived().with_name(format!("su({},{})", p[0], p[1]));
                Ok(entry("su:r,s", p, su))
            }
        }
        "sp" | "sp-sp1" => {
            let p = parse_counts(id, rest, 2)?;
            if p[0] + p[1] == 0 {
                return Err(bad(id, "need r+s >= 1"));
            }
            Ok(entry(
                if key == "sp" { "sp:r,s" } else { "sp-sp1:r,s" },
                p.clone(),
                quaternionic(p[0], p[1], key == "sp-sp1")?,
            ))
        }
        "sp-sl2" | "sp-sl2-c" => {
            let p = parse_counts(id, rest, 1)?;
            if p[0] == 0 {
                return Err(bad(id, "need r >= 1"));
            }
            let (gens, gram) = sp_sl2(p[0]);
            if key == "sp-sl2" {
                Ok(entry("sp-sl2:r", p.clone(), build(format!("sp({},R)+sl(2,R)", p[0]), gens, gram)?))
            } else {
                let (gens, gram) = complexify(&gens, &gram);
                Ok(entry("sp-sl2-c:r", p.clone(), build(format!("sp({},C)+sl(2,C)", p[0]), gens, gram)?))
            }
        }
        "g2" if rest.is_empty() => {
            let gens = form_stabilizer(7, &g2_form());
            Ok(entry("g2", vec![], build("G2".into(), gens, RatMatrix::identity(7))?))
        }
        "spin7" if rest.is_empty() => {
            let gens = form_stabilizer(8, &cayley_form());
            Ok(entry("spin7", vec![], build("spin(7)".into(), gens, RatMatrix::identity(8))?))
        }
        _ => Err(LieError::UnknownFamily(id.to_string())),
    }
}

fn nn_entry(id: &str, key: &str, rest: &str) -> Result<CatalogEntry, LieError> {
    let (body, suffix) = rest.split_once('@').unwrap_or((rest, ""));
    let (size, field) = body.split_once(':').ok_or_else(|| LieError::UnknownFamily(id.into()))?;
    let k: usize = size.trim().parse().map_err(|_| bad(id, "size must be an integer"))?;
    let complex = match field.trim() {
        "R" => false,
        "C" => true,
        _ => return Err(bad(id, "field must be R or C")),
    };
    let min = if key == "gl" { 1 } else { 2 };
    if !matches!(key, "gl" | "sl" | "sp") {
        return Err(LieError::UnknownFamily(id.into()));
    }
    if k < min || (key == "sp" && k % 2 == 1) {
        return Err(bad(id, "size out of range"));
    }
    let (fid, real_gens, name) = match (key, complex) {
        ("gl", false) => ("gl:n:R@so(n,n)", gl_basis(k), format!("gl({k},R)")),
        ("sl", false) => ("sl:n:R@so(n,n)", sl_basis(k), format!("sl({k},R)")),
        ("gl", true) => ("gl:m:C@so(2m,2m)", complexify_linear(&gl_basis(k)), format!("gl({k},C)")),
        ("sl", true) => ("sl:m:C@so(2m,2m)", complexify_linear(&sl_basis(k)), format!("sl({k},C)")),
        ("sp", false) => ("sp:2m:R@so(2m,2m)", sp_basis(k), format!("sp({k},R)")),
        _ => ("sp:2k:C@so(4k,4k)", complexify_linear(&sp_basis(k)), format!("sp({k},C)")),
    };
    let n = if complex { 2 * k } else { k };
    let expected = format!("so({n},{n})");
    if !suffix.is_empty() && suffix.trim() != expected {
        return Err(bad(id, &format!("ambient must be {expected}")));
    }
    let algebra = nn_embed(format!("{name}@{expected}"), n, &real_gens)?;
    Ok(CatalogEntry {
        family: family(fid),
        params: vec![k],
        algebra,
    })
}

fn build(name: String, gens: Vec<RatMatrix>, gram: RatMatrix) -> Result<MatrixLieAlgebra, LieError> {
    let n = gram.nrows();
    let space = QuadraticSpace::new(gram)?;
    MatrixLieAlgebra::new(name, n, gens, Some(space))
}

fn so_pq(p: usize, q: usize) -> MatrixLieAlgebra {
    let space = standard_space(Signature::new(p, q));
    let gens = so_basis(space.gram());
    let name = if q == 0 { format!("so({p})") } else { format!("so({p},{q})") };
    MatrixLieAlgebra::unchecked(name, p + q, gens, Some(space)).expect("well-formed")
}

fn j2() -> RatMatrix {
    RatMatrix::from_i64(&[&[0, -1], &[1, 0]])
}

/// Complexification of a real algebra with invariant form `gram`: generators
/// `M ⊗ 1` and `M ⊗ i` acting on `C^n = R^{2n}`, form `Re` of the complex
/// bilinear extension.
pub fn complexify(gens: &[RatMatrix], gram: &RatMatrix) -> (Vec<RatMatrix>, RatMatrix) {
    let re = RatMatrix::from_i64(&[&[1, 0], &[0, -1]]);
    (complexify_linear(gens), gram.kron(&re))
}

fn complexify_linear(gens: &[RatMatrix]) -> Vec<RatMatrix> {
    let id = RatMatrix::identity(2);
    let j = j2();
    gens.iter().flat_map(|m| [m.kron(&id), m.kron(&j)]).collect()
}

pub fn sl_basis(n: usize) -> Vec<RatMatrix> {
    solve_within(&gl_basis(n), |x| vec![x.trace()])
}

/// Standard symplectic form on `R^{2k}` with pairs `(x_i, y_i)` adjacent.
pub fn symplectic_form(dim: usize) -> RatMatrix {
    assert!(dim % 2 == 0);
    RatMatrix::identity(dim / 2).kron(&j2())
}

pub fn sp_basis(dim: usize) -> Vec<RatMatrix> {
    let omega = symplectic_form(dim);
    solve_within(&gl_basis(dim), |x| {
        // Xᵗ Ω + Ω X = 0 iff Ω X is symmetric.
        let ox = omega.mul(x);
        ox.sub(&ox.transpose()).flatten()
    })
}

/// `g ⊂ gl(n)` embedded as `diag(A, −Aᵗ)` in `so(n,n)` with the pairing Gram.
pub fn nn_embed(name: impl Into<String>, n: usize, gens: &[RatMatrix]) -> Result<MatrixLieAlgebra, LieError> {
    let gram = witt_gram(n, &[]);
    let embedded = gens
        .iter()
        .map(|a| RatMatrix::block_diag(&[a, &a.transpose().neg()]))
        .collect();
    MatrixLieAlgebra::new(name, 2 * n, embedded, Some(QuadraticSpace::new(gram)?))
}

/// Upper-left block `A` of `diag(A, −Aᵗ)`.
pub fn nn_gl_part(x: &RatMatrix) -> RatMatrix {
    let n = x.nrows() / 2;
    x.block(0, 0, n, n)
}

fn unitary(r: usize, s: usize) -> Result<MatrixLieAlgebra, LieError> {
    let k = r + s;
    let gram = standard_space(Signature::new(r, s)).gram().kron(&RatMatrix::identity(2));
    let j = RatMatrix::identity(k).kron(&j2());
    let gens = commutant_within(&so_basis(&gram), &[j]);
    build(format!("u({r},{s})"), gens, gram)
}

/// Right multiplication by `i`, `j`, `k` on `H = span(1, i, j, k)`.
pub fn quaternion_right_units() -> [RatMatrix; 3] {
    let ri = RatMatrix::from_i64(&[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]]);
    let rj = RatMatrix::from_i64(&[&[0, 0, -1, 0], &[0, 0, 0, -1], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
    // x·k = (x·i)·j
    let rk = rj.mul(&ri);
    [ri, rj, rk]
}

fn quaternionic(r: usize, s: usize, with_sp1: bool) -> Result<MatrixLieAlgebra, LieError> {
    let k = r + s;
    let gram = standard_space(Signature::new(r, s)).gram().kron(&RatMatrix::identity(4));
    let units: Vec<RatMatrix> = quaternion_right_units()
        .iter()
        .map(|u| RatMatrix::identity(k).kron(u))
        .collect();
    let mut gens = commutant_within(&so_basis(&gram), &units);
    let name = if with_sp1 {
        gens.extend(units);
        format!("sp({r},{s})+sp(1)")
    } else {
        format!("sp({r},{s})")
    };
    build(name, gens, gram)
}

/// `sp(2r,R) ⊗ 1 + 1 ⊗ sl(2,R)` on `R^{2r} ⊗ R²` with the form `Ω ⊗ Ω`.
fn sp_sl2(r: usize) -> (Vec<RatMatrix>, RatMatrix) {
    let gram = symplectic_form(2 * r).kron(&symplectic_form(2));
    let id2 = RatMatrix::identity(2);
    let id = RatMatrix::identity(2 * r);
    let mut gens: Vec<RatMatrix> = sp_basis(2 * r).iter().map(|a| a.kron(&id2)).collect();
    gens.extend(sp_basis(2).iter().map(|b| id.kron(b)));
    (gens, gram)
}

type Form = BTreeMap<Vec<usize>, i64>;

fn perm_sign(idx: &mut [usize]) -> i64 {
    let mut sign = 1;
    for i in 0..idx.len() {
        for j in 0..idx.len() - 1 - i {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                sign = -sign;
            } else if idx[j] == idx[j + 1] {
                return 0;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        sign
    }
}

fn form_eval(form: &Form, idx: &[usize]) -> i64 {
    let mut sorted = idx.to_vec();
    let sign = perm_sign(&mut sorted);
    if sign == 0 {
        return 0;
    }
    sign * form.get(&sorted).copied().unwrap_or(0)
}

fn form_from(terms: &[(&[usize], i64)]) -> Form {
    terms.iter().map(|(i, c)| (i.iter().map(|x| x - 1).collect(), *c)).collect()
}

fn g2_form() -> Form {
    form_from(&[
        (&[1, 2, 3], 1),
        (&[1, 4, 5], 1),
        (&[1, 6, 7], 1),
        (&[2, 4, 6], 1),
        (&[2, 5, 7], -1),
        (&[3, 4, 7], -1),
        (&[3, 5, 6], -1),
    ])
}

/// `e_8 ∧ φ + *φ` on `R^8`.
fn cayley_form() -> Form {
    let phi = g2_form();
    let mut out = Form::new();
    for (idx, &c) in &phi {
        let mut with8 = vec![7];
        with8.extend(idx);
        let mut sorted = with8.clone();
        let s = perm_sign(&mut sorted);
        out.insert(sorted, s * c);
        let comp: Vec<usize> = (0..7).filter(|i| !idx.contains(i)).collect();
        let mut whole = idx.clone();
        whole.extend(&comp);
        let s = perm_sign(&mut whole);
        out.insert(comp, s * c);
    }
    out
}

fn index_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for t in index_tuples(n, k - 1) {
        let start = t.last().map_or(0, |&x| x + 1);
        for i in start..n {
            let mut u = t.clone();
            u.push(i);
            out.push(u);
        }
    }
    out
}

/// Elements of `so(n)` annihilating an alternating form.
fn form_stabilizer(n: usize, form: &Form) -> Vec<RatMatrix> {
    let degree = form.keys().next().map_or(0, Vec::len);
    let tuples = index_tuples(n, degree);
    solve_within(&so_basis(&RatMatrix::identity(n)), |a| {
        tuples
            .iter()
            .map(|t| {
                let mut acc = int(0);
                for slot in 0..degree {
                    for s in 0..n {
                        let coeff = a.get(s, t[slot]);
                        if coeff.is_zero() {
                            continue;
                        }
                        let mut idx = t.clone();
                        idx[slot] = s;
                        let v = form_eval(form, &idx);
                        if v != 0 {
                            acc += int(v) * coeff;
                        }
                    }
                }
                acc
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_match_formulas() {
        let cases = [
            ("so:3", 3),
            ("so:2,1", 3),
            ("so-c:3", 6),
            ("u:1,1", 4),
            ("u:2", 4),
            ("su:2", 3),
            ("su:3", 8),
            ("sp:1", 3),
            ("sp-sp1:1,0", 6),
            ("sp-sl2:1", 6),
            ("gl:2:R@so(2,2)", 4),
            ("sl:3:R@so(3,3)", 8),
            ("gl:1:C@so(2,2)", 2),
            ("sl:2:C@so(4,4)", 6),
            ("sp:2:R@so(2,2)", 3),
            ("sp:4:R@so(4,4)", 10),
        ];
        for (id, dim) in cases {
            let alg = catalog(id).unwrap();
            assert_eq!(alg.dim(), dim, "{id}");
            alg.check_closure().unwrap();
        }
    }

    #[test]
    fn exceptional_tables() {
        assert_eq!(catalog("g2").unwrap().dim(), 14);
        assert_eq!(catalog("spin7").unwrap().dim(), 21);
    }

    #[test]
    fn rejects_bad_ids() {
        assert!(matches!(catalog("nope:3"), Err(LieError::UnknownFamily(_))));
        assert!(catalog("so:0").is_err());
        assert!(catalog("sp:3:R@so(3,3)").is_err());
        assert!(catalog("gl:2:R@so(3,3)").is_err());
    }

    #[test]
    fn nn_embedding_preserves_isotropic_halves() {
        let alg = catalog("gl:2:R@so(2,2)").unwrap();
        for b in alg.basis() {
            assert!(b.block(0, 2, 2, 2).is_zero());
            assert!(b.block(2, 0, 2, 2).is_zero());
        }
    }
}
