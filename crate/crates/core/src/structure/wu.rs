use serde::Serialize;

use super::reducibility::{orthogonal_complement, weak_irreducibility, Decision};
use crate::lie::MatrixLieAlgebra;
use crate::linalg::{format_rational, RatMatrix, Rational};
use crate::quadratic::QuadraticSpace;

#[derive(Clone, Debug, Serialize)]
pub struct WuFactor {
    /// Basis vectors of `V_i` in ambient coordinates.
    #[serde(serialize_with = "ser_vectors")]
    pub basis: Vec<Vec<Rational>>,
    /// `g_i`: the restriction of `g` to `V_i`, written in the basis above.
    #[serde(skip)]
    pub algebra: MatrixLieAlgebra,
    pub dim_algebra: usize,
    pub weakly_irreducible: Decision,
}

#[derive(Clone, Debug, Serialize)]
pub struct WuDecomposition {
    #[serde(serialize_with = "ser_vectors")]
    pub flat: Vec<Vec<Rational>>,
    pub factors: Vec<WuFactor>,
    /// `g` equals the direct sum of the `g_i`.
    pub is_product: bool,
}

fn ser_vectors<S: serde::Serializer>(v: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    v.iter()
        .map(|x| x.iter().map(format_rational).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .serialize(s)
}

impl WuDecomposition {
    pub fn flat_dim(&self) -> usize {
        self.flat.len()
    }
}

/// Restriction of `gens` to the invariant non-degenerate subspace spanned
/// by `cols`, together with its Gram matrix.
fn restrict(gens: &[RatMatrix], gram: &RatMatrix, cols: &[Vec<Rational>]) -> (Vec<RatMatrix>, RatMatrix) {
    let p = RatMatrix::from_columns(gram.nrows(), cols);
    let ptg = p.transpose().mul(gram);
    let sub_gram = ptg.mul(&p);
    let inv = sub_gram.inverse().expect("non-degenerate subspace");
    let restricted = gens.iter().map(|b| inv.mul(&ptg).mul(b).mul(&p)).collect();
    (restricted, sub_gram)
}

fn to_ambient(p: &[Vec<Rational>], local: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = p.first().map_or(0, Vec::len);
    local
        .iter()
        .map(|c| {
            (0..n)
                .map(|r| c.iter().zip(p).fold(Rational::default(), |acc, (x, col)| acc + x * &col[r]))
                .collect()
        })
        .collect()
}

struct Leaf {
    basis: Vec<Vec<Rational>>,
    gens: Vec<RatMatrix>,
    gram: RatMatrix,
    decision: Decision,
}

fn split(basis: Vec<Vec<Rational>>, gens: Vec<RatMatrix>, gram: RatMatrix, out: &mut Vec<Leaf>) {
    let decision = weak_irreducibility(&gens, &gram);
    if let Some(w) = decision.witness() {
        let comp = orthogonal_complement(w, &gram);
        for part in [w.to_vec(), comp] {
            let (g, sg) = restrict(&gens, &gram, &part);
            split(to_ambient(&basis, &part), g, sg, out);
        }
        return;
    }
    out.push(Leaf {
        basis,
        gens,
        gram,
        decision,
    });
}

/// Splits `g ⊂ so(G)` along invariant non-degenerate subspaces until every
/// piece is weakly irreducible (or undecided). One-dimensional pieces with
/// trivial action form the flat factor.
pub fn wu_decompose(g: &MatrixLieAlgebra) -> WuDecomposition {
    let n = g.ambient_dim();
    let gram = g.metric().map_or_else(|| RatMatrix::identity(n), |m| m.gram().clone());
    let identity: Vec<Vec<Rational>> = RatMatrix::identity(n).to_rows();
    let mut leaves = Vec::new();
    split(identity, g.basis().to_vec(), gram, &mut leaves);
    let mut flat = Vec::new();
    let mut factors = Vec::new();
    for leaf in leaves {
        if leaf.gens.iter().all(RatMatrix::is_zero) && leaf.basis.len() == 1 {
            flat.extend(leaf.basis);
            continue;
        }
        let k = leaf.basis.len();
        let metric = QuadraticSpace::new(leaf.gram.clone()).ok();
        let alg = MatrixLieAlgebra::unchecked(format!("{}|V{}", g.name(), factors.len() + 1), k, leaf.gens, metric)
            .expect("square restrictions");
        factors.push(WuFactor {
            basis: leaf.basis,
            dim_algebra: alg.dim(),
            algebra: alg,
            weakly_irreducible: leaf.decision,
        });
    }
    let total: usize = factors.iter().map(|f| f.dim_algebra).sum();
    WuDecomposition {
        flat,
        is_product: total == g.dim(),
        factors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::catalog;

    fn embed(g: &MatrixLieAlgebra, total: usize, offset: usize) -> Vec<RatMatrix> {
        g.basis()
            .iter()
            .map(|b| RatMatrix::zeros(total, total).with_block(offset, offset, b))
            .collect()
    }

    fn euclidean(n: usize, gens: Vec<RatMatrix>) -> MatrixLieAlgebra {
        MatrixLieAlgebra::new("t", n, gens, Some(QuadraticSpace::new(RatMatrix::identity(n)).unwrap())).unwrap()
    }

    #[test]
    fn block_sum_splits_into_two_factors() {
        let mut gens = embed(&catalog("so:2").unwrap(), 5, 0);
        gens.extend(embed(&catalog("so:3").unwrap(), 5, 2));
        let d = wu_decompose(&euclidean(5, gens));
        assert_eq!(d.flat_dim(), 0);
        assert_eq!(d.factors.len(), 2);
        assert!(d.is_product);
        let mut dims: Vec<usize> = d.factors.iter().map(|f| f.basis.len()).collect();
        dims.sort();
        assert_eq!(dims, vec![2, 3]);
    }

    #[test]
    fn irreducible_input_is_one_factor() {
        let d = wu_decompose(&catalog("so:4").unwrap());
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.flat_dim(), 0);
    }

    #[test]
    fn flat_factor_collects_trivial_directions() {
        let gens = embed(&catalog("so:3").unwrap(), 5, 0);
        let d = wu_decompose(&euclidean(5, gens));
        assert_eq!(d.flat_dim(), 2);
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.factors[0].basis.len(), 3);
    }
}
