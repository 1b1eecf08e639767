use super::algebra::{bracket, commutant_within, MatrixLieAlgebra};
use crate::linalg::{RatMatrix, SubspaceBasis};

/// `{x ∈ ambient : [x, b] = 0 for every basis element b of g}`, as a
/// subspace of flattened `N x N` matrices.
pub fn centralizer(g: &MatrixLieAlgebra, ambient: &MatrixLieAlgebra) -> SubspaceBasis {
    let n = ambient.ambient_dim();
    let elems = commutant_within(ambient.basis(), g.basis());
    SubspaceBasis::span(n * n, &elems.iter().map(RatMatrix::flatten).collect::<Vec<_>>())
}

/// Smallest ideal of `g` containing `seed` (a subspace of flattened matrices).
pub fn generated_ideal(g: &MatrixLieAlgebra, seed: &SubspaceBasis) -> SubspaceBasis {
    let n = g.ambient_dim();
    let mut current = seed.clone();
    loop {
        let mats: Vec<RatMatrix> = current
            .vectors()
            .iter()
            .map(|v| RatMatrix::unflatten(n, n, v))
            .collect();
        let mut gens = current.vectors();
        for x in &mats {
            for b in g.basis() {
                gens.push(bracket(b, x).flatten());
            }
        }
        let next = SubspaceBasis::span(n * n, &gens);
        if next.dim() == current.dim() {
            return next;
        }
        current = next;
    }
}

/// `true` iff every basis element of `g` maps `candidate ⊂ R^N` into itself.
pub fn invariant_subspace_probe(g: &MatrixLieAlgebra, candidate: &SubspaceBasis) -> bool {
    let vs = candidate.vectors();
    g.basis()
        .iter()
        .all(|b| vs.iter().all(|v| candidate.contains_vector(&b.mul_vec(v))))
}

/// Subalgebra spanned by the elements of `sub` (flattened matrices) with
/// the metric of `parent`.
pub fn subspace_algebra(
    name: impl Into<String>,
    parent: &MatrixLieAlgebra,
    sub: &SubspaceBasis,
) -> MatrixLieAlgebra {
    let n = parent.ambient_dim();
    let gens = sub.vectors().iter().map(|v| RatMatrix::unflatten(n, n, v)).collect();
    MatrixLieAlgebra::unchecked(name, n, gens, parent.metric().cloned()).expect("matching shapes")
}
