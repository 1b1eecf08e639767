use serde::{Deserialize, Serialize};

use super::reducibility::{is_irreducible, Decision};
use super::StructureError;
use crate::lie::{DecoratedElement, DecoratedFrame, MatrixLieAlgebra};
use crate::linalg::{int, RatMatrix, SubspaceBasis};

/// A block `L_α` of the middle space with the algebra `h_α ⊂ so(L_α)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LBlock {
    pub name: String,
    /// Diagonal of the Gram matrix of `L_α`, entries ±1.
    pub signs: Vec<i64>,
    pub h: Vec<RatMatrix>,
}

impl LBlock {
    pub fn dim(&self) -> usize {
        self.signs.len()
    }
}

/// Spanning matrices of a block subspace indexed by `(i, j)`:
/// `f_ij` (shape `m_i × m_j`), `N_iα` (`j = α`, shape `n_α × m_i`) or
/// `C_ij` (the `(V_i, V_j)` block of a skew `m × m` matrix).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanBlock {
    pub i: usize,
    pub j: usize,
    pub gens: Vec<RatMatrix>,
}

/// Block data `(f_i, f_ij, h_α, N_iα, C_ij)` of an algebra inside the
/// parabolic subalgebra preserving the isotropic flag `V_1 ⊂ V_1 ⊕ V_2 ⊂ …`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredAlgebraSpec {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<u8>,
    pub v_dims: Vec<usize>,
    pub l_blocks: Vec<LBlock>,
    /// `f_i ⊂ gl(V_i)`, one generator list per `V`-block.
    pub f: Vec<Vec<RatMatrix>>,
    #[serde(default)]
    pub f_off: Vec<SpanBlock>,
    #[serde(default)]
    pub n_blocks: Vec<SpanBlock>,
    #[serde(default)]
    pub c_blocks: Vec<SpanBlock>,
}

impl StructuredAlgebraSpec {
    pub fn m(&self) -> usize {
        self.v_dims.iter().sum()
    }

    pub fn n(&self) -> usize {
        self.l_blocks.iter().map(LBlock::dim).sum()
    }

    pub fn frame(&self) -> DecoratedFrame {
        DecoratedFrame::new(self.m(), self.l_blocks.iter().flat_map(|l| l.signs.clone()).collect())
    }

    pub fn v_offset(&self, i: usize) -> usize {
        self.v_dims[..i].iter().sum()
    }

    pub fn l_offset(&self, alpha: usize) -> usize {
        self.l_blocks[..alpha].iter().map(LBlock::dim).sum()
    }

    pub fn has_c(&self) -> bool {
        self.c_blocks.iter().any(|b| b.gens.iter().any(|g| !g.is_zero()))
    }

    pub fn n_block(&self, i: usize, alpha: usize) -> Option<&SpanBlock> {
        self.n_blocks.iter().find(|b| b.i == i && b.j == alpha && b.gens.iter().any(|g| !g.is_zero()))
    }

    pub fn from_json(text: &str) -> Result<Self, StructureError> {
        serde_json::from_str(text).map_err(|e| StructureError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    fn check_shapes(&self) -> Result<(), StructureError> {
        let bad = |msg: String| Err(StructureError::Invalid(msg));
        if self.f.len() != self.v_dims.len() {
            return bad(format!("{} V-blocks but {} f_i lists", self.v_dims.len(), self.f.len()));
        }
        if self.v_dims.contains(&0) {
            return bad("V-blocks must be non-zero".into());
        }
        for (i, fi) in self.f.iter().enumerate() {
            let d = self.v_dims[i];
            if fi.iter().any(|x| x.nrows() != d || x.ncols() != d) {
                return bad(format!("f_{} must consist of {d}x{d} matrices", i + 1));
            }
        }
        for (a, l) in self.l_blocks.iter().enumerate() {
            if l.signs.iter().any(|&s| s != 1 && s != -1) {
                return bad(format!("L_{} signs must be ±1", a + 1));
            }
            if l.h.iter().any(|x| x.nrows() != l.dim() || x.ncols() != l.dim()) {
                return bad(format!("h_{} has the wrong shape", a + 1));
            }
        }
        let k = self.v_dims.len();
        for b in &self.f_off {
            if b.i >= b.j || b.j >= k {
                return bad(format!("f_{}{} needs i < j <= k", b.i + 1, b.j + 1));
            }
            if b.gens.iter().any(|x| x.nrows() != self.v_dims[b.i] || x.ncols() != self.v_dims[b.j]) {
                return bad(format!("f_{}{} has the wrong shape", b.i + 1, b.j + 1));
            }
        }
        for b in &self.n_blocks {
            if b.i >= k || b.j >= self.l_blocks.len() {
                return bad(format!("N_{}{} is out of range", b.i + 1, b.j + 1));
            }
            let (r, c) = (self.l_blocks[b.j].dim(), self.v_dims[b.i]);
            if b.gens.iter().any(|x| x.nrows() != r || x.ncols() != c) {
                return bad(format!("N_{}{} must consist of {r}x{c} matrices", b.i + 1, b.j + 1));
            }
        }
        for b in &self.c_blocks {
            if b.i > b.j || b.j >= k {
                return bad(format!("C_{}{} needs i <= j <= k", b.i + 1, b.j + 1));
            }
            if b.gens.iter().any(|x| x.nrows() != self.v_dims[b.i] || x.ncols() != self.v_dims[b.j]) {
                return bad(format!("C_{}{} has the wrong shape", b.i + 1, b.j + 1));
            }
            if b.i == b.j && b.gens.iter().any(|x| !x.add(&x.transpose()).is_zero()) {
                return bad(format!("C_{}{} must be skew", b.i + 1, b.i + 1));
            }
        }
        Ok(())
    }

    /// Labeled decorated generators of the algebra.
    pub fn generators(&self) -> Result<Vec<(String, DecoratedElement)>, StructureError> {
        self.check_shapes()?;
        let frame = self.frame();
        let (m, n) = (frame.m, frame.n());
        let mut out = Vec::new();
        let mut push = |label: String, b: RatMatrix, a: RatMatrix, x: RatMatrix, c: RatMatrix| {
            let el = DecoratedElement::new(&frame, b, a, x, c).map_err(|e| StructureError::Invalid(format!("{label}: {e}")))?;
            out.push((label, el));
            Ok::<(), StructureError>(())
        };
        let zb = || RatMatrix::zeros(m, m);
        let za = || RatMatrix::zeros(n, n);
        let zx = || RatMatrix::zeros(n, m);
        for (i, fi) in self.f.iter().enumerate() {
            let o = self.v_offset(i);
            for g in fi {
                push(format!("f_{}", i + 1), zb().with_block(o, o, g), za(), zx(), zb())?;
            }
        }
        for blk in &self.f_off {
            let (oi, oj) = (self.v_offset(blk.i), self.v_offset(blk.j));
            for g in &blk.gens {
                push(format!("f_{},{}", blk.i + 1, blk.j + 1), zb().with_block(oi, oj, g), za(), zx(), zb())?;
            }
        }
        for (a, l) in self.l_blocks.iter().enumerate() {
            let o = self.l_offset(a);
            for g in &l.h {
                push(format!("h_{}", a + 1), zb(), za().with_block(o, o, g), zx(), zb())?;
            }
        }
        for blk in &self.n_blocks {
            let (oa, oi) = (self.l_offset(blk.j), self.v_offset(blk.i));
            for g in &blk.gens {
                push(format!("N_{},{}", blk.i + 1, blk.j + 1), zb(), za(), zx().with_block(oa, oi, g), zb())?;
            }
        }
        for blk in &self.c_blocks {
            let (oi, oj) = (self.v_offset(blk.i), self.v_offset(blk.j));
            for g in &blk.gens {
                let c = if blk.i == blk.j {
                    zb().with_block(oi, oi, g)
                } else {
                    zb().with_block(oi, oj, g).with_block(oj, oi, &g.transpose().neg())
                };
                push(format!("C_{},{}", blk.i + 1, blk.j + 1), zb(), za(), zx(), c)?;
            }
        }
        Ok(out)
    }

    /// Structural conditions on the blocks. Violations of irreducibility
    /// are errors; undecided irreducibility and a `V_i` without any
    /// `N_iα` are returned as warnings.
    pub fn validate(&self) -> Result<Vec<String>, StructureError> {
        self.check_shapes()?;
        let mut warnings = Vec::new();
        for (i, fi) in self.f.iter().enumerate() {
            match is_irreducible(fi, self.v_dims[i]) {
                Decision::Yes => {}
                Decision::No { .. } => {
                    return Err(StructureError::Invalid(format!("f_{} is reducible on V_{}", i + 1, i + 1)));
                }
                Decision::Inconclusive(why) => warnings.push(format!("f_{}: irreducibility undecided ({why})", i + 1)),
            }
        }
        for (a, l) in self.l_blocks.iter().enumerate() {
            match is_irreducible(&l.h, l.dim()) {
                Decision::Yes => {}
                Decision::No { .. } => {
                    return Err(StructureError::Invalid(format!("h_{} is reducible on L_{}", a + 1, a + 1)));
                }
                Decision::Inconclusive(why) => warnings.push(format!("h_{}: irreducibility undecided ({why})", a + 1)),
            }
        }
        if !self.l_blocks.is_empty() {
            for i in 0..self.v_dims.len() {
                if (0..self.l_blocks.len()).all(|a| self.n_block(i, a).is_none()) {
                    warnings.push(format!("no N_{}α is non-zero", i + 1));
                }
            }
        }
        Ok(warnings)
    }
}

/// An assembled algebra with its labeled generators.
#[derive(Clone, Debug)]
pub struct StructuredAlgebra {
    pub spec: StructuredAlgebraSpec,
    pub frame: DecoratedFrame,
    pub generators: Vec<(String, DecoratedElement)>,
    pub algebra: MatrixLieAlgebra,
}

fn component_name(el: &DecoratedElement) -> Vec<&'static str> {
    let mut out = Vec::new();
    if !el.b.is_zero() {
        out.push("f");
    }
    if !el.a.is_zero() {
        out.push("h");
    }
    if !el.x.is_zero() {
        out.push("N");
    }
    if !el.c.is_zero() {
        out.push("C");
    }
    out
}

/// Builds the algebra spanned by the spec's blocks and verifies closure
/// exactly. A failure names the pair of blocks whose bracket leaves the
/// span and the component that is missing.
pub fn assemble(spec: &StructuredAlgebraSpec) -> Result<StructuredAlgebra, StructureError> {
    let generators = spec.generators()?;
    let frame = spec.frame();
    let mats: Vec<RatMatrix> = generators.iter().map(|(_, e)| e.assemble(&frame)).collect();
    let algebra = MatrixLieAlgebra::unchecked(spec.label.clone(), frame.ambient_dim(), mats.clone(), Some(frame.space()))?;
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            let z = mats[i].commutator(&mats[j]);
            if algebra.contains(&z) {
                continue;
            }
            let el = crate::lie::decorated_project(&frame, &z)?;
            let parts = [
                ("f", DecoratedElement { a: RatMatrix::zeros(frame.n(), frame.n()), x: RatMatrix::zeros(frame.n(), frame.m), c: RatMatrix::zeros(frame.m, frame.m), ..el.clone() }),
                ("h", DecoratedElement { b: RatMatrix::zeros(frame.m, frame.m), x: RatMatrix::zeros(frame.n(), frame.m), c: RatMatrix::zeros(frame.m, frame.m), ..el.clone() }),
                ("N", DecoratedElement { b: RatMatrix::zeros(frame.m, frame.m), a: RatMatrix::zeros(frame.n(), frame.n()), c: RatMatrix::zeros(frame.m, frame.m), ..el.clone() }),
                ("C", DecoratedElement { b: RatMatrix::zeros(frame.m, frame.m), a: RatMatrix::zeros(frame.n(), frame.n()), x: RatMatrix::zeros(frame.n(), frame.m), ..el.clone() }),
            ];
            let missing = parts
                .iter()
                .find(|(_, p)| !algebra.contains(&p.assemble(&frame)))
                .map(|(name, _)| *name)
                .unwrap_or_else(|| component_name(&el).first().copied().unwrap_or("?"));
            return Err(StructureError::NotClosed {
                left: generators[i].0.clone(),
                right: generators[j].0.clone(),
                component: missing.to_string(),
                witness: Box::new(el),
            });
        }
    }
    Ok(StructuredAlgebra {
        spec: spec.clone(),
        frame,
        generators,
        algebra,
    })
}

impl StructuredAlgebra {
    /// `id_{V_i}` (as a `B`-block) lies in the algebra.
    pub fn contains_identity(&self, i: usize) -> bool {
        let o = self.spec.v_offset(i);
        let d = self.spec.v_dims[i];
        let (m, n) = (self.frame.m, self.frame.n());
        let el = DecoratedElement {
            b: RatMatrix::zeros(m, m).with_block(o, o, &RatMatrix::identity(d)),
            a: RatMatrix::zeros(n, n),
            x: RatMatrix::zeros(n, m),
            c: RatMatrix::zeros(m, m),
        };
        self.algebra.contains(&el.assemble(&self.frame))
    }

    pub fn contains_all_identities(&self) -> bool {
        (0..self.spec.v_dims.len()).all(|i| self.contains_identity(i))
    }

    fn span_of(&self, keep: impl Fn(&str) -> bool) -> SubspaceBasis {
        let dim = self.frame.ambient_dim();
        let vs: Vec<_> = self
            .generators
            .iter()
            .filter(|(l, _)| keep(l))
            .map(|(_, e)| e.assemble(&self.frame).flatten())
            .collect();
        SubspaceBasis::span(dim * dim, &vs)
    }

    /// The subspace of matrices with vanishing `B` and `A` blocks.
    fn nc_subspace(&self) -> SubspaceBasis {
        let frame = &self.frame;
        let (m, n) = (frame.m, frame.n());
        let dim = frame.ambient_dim();
        let mut vs = Vec::new();
        for r in 0..n {
            for c in 0..m {
                let x = RatMatrix::from_triplets(n, m, [(r, c, int(1))]);
                vs.push(DecoratedElement { x, ..DecoratedElement::zero(frame) }.assemble(frame).flatten());
            }
        }
        for r in 0..m {
            for c in r + 1..m {
                let k = RatMatrix::from_triplets(m, m, [(r, c, int(1)), (c, r, int(-1))]);
                vs.push(DecoratedElement { c: k, ..DecoratedElement::zero(frame) }.assemble(frame).flatten());
            }
        }
        SubspaceBasis::span(dim * dim, &vs)
    }

    /// `g ∩ (N ⋉ C)` equals the span of the `N_iα` and `C_ij` blocks.
    pub fn nilpotent_part_splits(&self) -> bool {
        let inter = self.algebra.subspace().intersect(&self.nc_subspace()).expect("same ambient");
        let blocks = self.span_of(|l| l.starts_with("N_") || l.starts_with("C_"));
        inter == blocks
    }

    /// `f_0 ⊕ h` (the diagonal `f_i` together with the `h_α`) lies in `g`.
    pub fn reductive_part_contained(&self) -> bool {
        let red = self.span_of(|l| (l.starts_with("f_") && !l.contains(',')) || l.starts_with("h_"));
        self.algebra.subspace().contains(&red).expect("same ambient")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::so_basis;

    pub(crate) fn example1(n: usize) -> StructuredAlgebraSpec {
        let minus = RatMatrix::identity(n).neg();
        StructuredAlgebraSpec {
            label: format!("gl(1)+so({n})|x R^{n}"),
            family: None,
            v_dims: vec![1],
            l_blocks: vec![LBlock {
                name: format!("so({n})"),
                signs: vec![-1; n],
                h: so_basis(&minus),
            }],
            f: vec![vec![RatMatrix::identity(1)]],
            f_off: vec![],
            n_blocks: vec![SpanBlock {
                i: 0,
                j: 0,
                gens: (0..n).map(|r| RatMatrix::from_triplets(n, 1, [(r, 0, int(1))])).collect(),
            }],
            c_blocks: vec![],
        }
    }

    #[test]
    fn lorentzian_example_assembles() {
        let s = assemble(&example1(3)).unwrap();
        assert_eq!(s.algebra.dim(), 1 + 3 + 3);
        assert!(s.contains_all_identities());
        assert!(s.nilpotent_part_splits());
        assert!(s.reductive_part_contained());
        assert!(example1(3).validate().unwrap().is_empty());
    }

    #[test]
    fn closure_failure_names_the_blocks() {
        // Two N-blocks in different V's without C: [N_1, N_2] lands in C.
        let spec = StructuredAlgebraSpec {
            label: "broken".into(),
            family: None,
            v_dims: vec![1, 1],
            l_blocks: vec![LBlock {
                name: "so(2)".into(),
                signs: vec![-1, -1],
                h: so_basis(&RatMatrix::identity(2)),
            }],
            f: vec![vec![RatMatrix::identity(1)], vec![RatMatrix::identity(1)]],
            f_off: vec![],
            n_blocks: (0..2)
                .map(|i| SpanBlock {
                    i,
                    j: 0,
                    gens: (0..2).map(|r| RatMatrix::from_triplets(2, 1, [(r, 0, int(1))])).collect(),
                })
                .collect(),
            c_blocks: vec![],
        };
        match assemble(&spec) {
            Err(StructureError::NotClosed { left, right, component, .. }) => {
                assert!(left.starts_with("N_1") && right.starts_with("N_2"));
                assert_eq!(component, "C");
            }
            other => panic!("expected a closure failure, got {other:?}"),
        }
    }

    #[test]
    fn json_round_trip() {
        let s = example1(2);
        assert_eq!(StructuredAlgebraSpec::from_json(&s.to_json()).unwrap(), s);
    }
}
