//! The parabolic subalgebra of `so(m+r, m+s)` preserving the span of
//! `p_1..p_m`, written in a Witt basis as block matrices
//!
//! ```text
//! [ B  −XᵗE  C  ]
//! [ 0   A    X  ]
//! [ 0   0   −Bᵗ ]
//! ```

use serde::{Deserialize, Serialize};

use super::algebra::{so_basis, MatrixLieAlgebra};
use super::LieError;
use crate::linalg::{int, RatMatrix};
use crate::quadratic::{witt_gram, QuadraticSpace, SplitSignature};

/// Block sizes and the diagonal `E` of the middle Gram block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoratedFrame {
    pub m: usize,
    pub signs: Vec<i64>,
}

impl DecoratedFrame {
    pub fn new(m: usize, signs: Vec<i64>) -> Self {
        assert!(signs.iter().all(|&s| s == 1 || s == -1));
        Self { m, signs }
    }

    pub fn from_split(split: SplitSignature) -> Self {
        Self::new(split.m, split.middle_signs())
    }

    pub fn n(&self) -> usize {
        self.signs.len()
    }

    pub fn ambient_dim(&self) -> usize {
        2 * self.m + self.n()
    }

    pub fn e(&self) -> RatMatrix {
        let n = self.n();
        RatMatrix::from_triplets(n, n, self.signs.iter().enumerate().map(|(a, &s)| (a, a, int(s))))
    }

    pub fn gram(&self) -> RatMatrix {
        witt_gram(self.m, &self.signs)
    }

    pub fn space(&self) -> QuadraticSpace {
        QuadraticSpace::new(self.gram()).expect("Witt Gram is non-degenerate")
    }
}

/// `(B, A, X, C)` with `B ∈ gl(m)`, `A ∈ so(E)`, `X` of shape `n × m`
/// (column `i` is the image of `q_i` in the middle block) and `C` skew.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoratedElement {
    pub b: RatMatrix,
    pub a: RatMatrix,
    pub x: RatMatrix,
    pub c: RatMatrix,
}

impl DecoratedElement {
    pub fn zero(frame: &DecoratedFrame) -> Self {
        let (m, n) = (frame.m, frame.n());
        Self {
            b: RatMatrix::zeros(m, m),
            a: RatMatrix::zeros(n, n),
            x: RatMatrix::zeros(n, m),
            c: RatMatrix::zeros(m, m),
        }
    }

    pub fn new(
        frame: &DecoratedFrame,
        b: RatMatrix,
        a: RatMatrix,
        x: RatMatrix,
        c: RatMatrix,
    ) -> Result<Self, LieError> {
        let el = Self { b, a, x, c };
        el.validate(frame)?;
        Ok(el)
    }

    pub fn validate(&self, frame: &DecoratedFrame) -> Result<(), LieError> {
        let (m, n) = (frame.m, frame.n());
        let shape = |mat: &RatMatrix, r: usize, c: usize, what: &str| {
            if mat.nrows() != r || mat.ncols() != c {
                Err(LieError::Shape(format!("{what} must be {r}x{c}")))
            } else {
                Ok(())
            }
        };
        shape(&self.b, m, m, "B")?;
        shape(&self.a, n, n, "A")?;
        shape(&self.x, n, m, "X")?;
        shape(&self.c, m, m, "C")?;
        if !self.c.add(&self.c.transpose()).is_zero() {
            return Err(LieError::NotDecorated("C is not skew".into()));
        }
        let e = frame.e();
        let ea = e.mul(&self.a);
        if !ea.add(&ea.transpose()).is_zero() {
            return Err(LieError::NotDecorated("A is not in so(E)".into()));
        }
        Ok(())
    }

    pub fn assemble(&self, frame: &DecoratedFrame) -> RatMatrix {
        let (m, n) = (frame.m, frame.n());
        let xte = self.x.transpose().mul(&frame.e()).neg();
        RatMatrix::zeros(2 * m + n, 2 * m + n)
            .with_block(0, 0, &self.b)
            .with_block(0, m, &xte)
            .with_block(0, m + n, &self.c)
            .with_block(m, m, &self.a)
            .with_block(m, m + n, &self.x)
            .with_block(m + n, m + n, &self.b.transpose().neg())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            b: self.b.add(&other.b),
            a: self.a.add(&other.a),
            x: self.x.add(&other.x),
            c: self.c.add(&other.c),
        }
    }
}

/// Block components of `x`; fails unless `x` has the decorated shape.
pub fn decorated_project(frame: &DecoratedFrame, x: &RatMatrix) -> Result<DecoratedElement, LieError> {
    let (m, n) = (frame.m, frame.n());
    let dim = frame.ambient_dim();
    if x.nrows() != dim || x.ncols() != dim {
        return Err(LieError::Shape(format!("expected {dim}x{dim}")));
    }
    let el = DecoratedElement {
        b: x.block(0, 0, m, m),
        a: x.block(m, m, n, n),
        x: x.block(m, m + n, n, m),
        c: x.block(0, m + n, m, m),
    };
    el.validate(frame)?;
    if el.assemble(frame) != *x {
        return Err(LieError::NotDecorated(
            "matrix is not in the isotropic parabolic subalgebra".into(),
        ));
    }
    Ok(el)
}

pub fn decorated_bracket(
    frame: &DecoratedFrame,
    x: &DecoratedElement,
    y: &DecoratedElement,
) -> DecoratedElement {
    let z = x.assemble(frame).commutator(&y.assemble(frame));
    decorated_project(frame, &z).expect("the parabolic subalgebra is closed")
}

/// Basis of `gl(m)`, `so(E)`, `Hom(R^m, R^n)` and `Λ²R^m` blocks, in that order.
pub fn decorated_generators(frame: &DecoratedFrame) -> Vec<DecoratedElement> {
    let (m, n) = (frame.m, frame.n());
    let unit = |r: usize, c: usize, i: usize, j: usize| RatMatrix::from_triplets(r, c, [(i, j, int(1))]);
    let zero = DecoratedElement::zero(frame);
    let mut out = Vec::new();
    for i in 0..m {
        for j in 0..m {
            out.push(DecoratedElement {
                b: unit(m, m, i, j),
                ..zero.clone()
            });
        }
    }
    if n > 0 {
        for a in so_basis(&frame.e()) {
            out.push(DecoratedElement { a, ..zero.clone() });
        }
    }
    for a in 0..n {
        for i in 0..m {
            out.push(DecoratedElement {
                x: unit(n, m, a, i),
                ..zero.clone()
            });
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            out.push(DecoratedElement {
                c: unit(m, m, i, j).sub(&unit(m, m, j, i)),
                ..zero.clone()
            });
        }
    }
    out
}

pub fn decorated_frame_algebra(frame: &DecoratedFrame) -> MatrixLieAlgebra {
    let gens = decorated_generators(frame)
        .iter()
        .map(|e| e.assemble(frame))
        .collect();
    let name = format!("so({},{})_R^{}", frame.m + count(&frame.signs, 1), frame.m + count(&frame.signs, -1), frame.m);
    MatrixLieAlgebra::unchecked(name, frame.ambient_dim(), gens, Some(frame.space()))
        .expect("decorated generators are well-formed")
}

fn count(signs: &[i64], s: i64) -> usize {
    signs.iter().filter(|&&x| x == s).count()
}

/// `so(m+r, m+s)_{R^m}` in the standard Witt basis.
pub fn decorated_algebra(split: SplitSignature) -> MatrixLieAlgebra {
    decorated_frame_algebra(&DecoratedFrame::from_split(split))
}

/// `dim gl(m) + dim so(r,s) + m(r+s) + dim Λ²R^m`.
pub fn decorated_dim(split: SplitSignature) -> usize {
    let (m, n) = (split.m, split.n());
    m * m + n * n.saturating_sub(1) / 2 + m * n + m * m.saturating_sub(1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, Rational};

    #[test]
    fn dimensions() {
        for (m, r, s) in [(1, 0, 0), (1, 2, 1), (2, 0, 0), (2, 1, 1), (3, 2, 0)] {
            let split = SplitSignature::new(m, r, s);
            let alg = decorated_algebra(split);
            assert_eq!(alg.dim(), decorated_dim(split));
            alg.check_closure().unwrap();
        }
        assert_eq!(decorated_dim(SplitSignature::new(1, 0, 0)), 1);
        assert_eq!(decorated_dim(SplitSignature::new(2, 0, 0)), 5);
        assert_eq!(decorated_dim(SplitSignature::new(1, 3, 0)), 1 + 3 + 3);
    }

    #[test]
    fn project_round_trip() {
        let frame = DecoratedFrame::new(2, vec![1, -1]);
        let zero = DecoratedElement::zero(&frame);
        assert_eq!(decorated_project(&frame, &zero.assemble(&frame)).unwrap(), zero);
        let el = DecoratedElement::new(
            &frame,
            RatMatrix::from_i64(&[&[1, 2], &[0, -3]]),
            RatMatrix::from_i64(&[&[0, 1], &[1, 0]]),
            RatMatrix::from_rows(vec![vec![rat(1, 2), int(0)], vec![int(4), int(-1)]]).unwrap(),
            RatMatrix::from_i64(&[&[0, 5], &[-5, 0]]),
        )
        .unwrap();
        let mat = el.assemble(&frame);
        assert!(frame.space().is_skew(&mat));
        assert_eq!(decorated_project(&frame, &mat).unwrap(), el);
        let n_only = DecoratedElement { x: el.x.clone(), ..zero.clone() };
        assert_eq!(decorated_project(&frame, &n_only.assemble(&frame)).unwrap(), n_only);
        assert!(decorated_project(&frame, &RatMatrix::identity(6)).is_err());
    }

    #[test]
    fn n_bracket_lands_in_c() {
        let frame = DecoratedFrame::new(2, vec![1]);
        let zero = DecoratedElement::zero(&frame);
        let x = DecoratedElement { x: RatMatrix::from_i64(&[&[1, 0]]), ..zero.clone() };
        let y = DecoratedElement { x: RatMatrix::from_i64(&[&[0, 1]]), ..zero.clone() };
        let z = decorated_bracket(&frame, &x, &y);
        assert_eq!(z.c, RatMatrix::from_rows(vec![vec![Rational::from_integer(0.into()), int(-1)], vec![int(1), int(0)]]).unwrap());
        assert!(z.x.is_zero() && z.b.is_zero() && z.a.is_zero());
    }
}
