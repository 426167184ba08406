//! The slice `S(d*)` of `K\G`, the embedding `eta`, the group map `theta`
//! and the rank functions `U_v`, `L_v`, `B_{v,w}`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{stack_split, BlockLabels, ExactMatrix, Field, LinalgError};
use crate::quiver::{DimVector, GroupElement, QuiverError, Representation};
use crate::star::{StarQuiver, StarVertex};
use crate::zigzag::{RankSignature, ZigzagError, ZigzagMatrices};

mod classify;
mod tables;

pub use classify::{classify, classify_all, FunctionClass};
pub use tables::{render_tables, verify_tables, TableReport, TableRow, TableStatus};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SliceError {
    #[error("label {0} does not exist in C({1})")]
    NoSuchLabel(String, usize),
    #[error("B_{{{0},{1}}} needs the first label strictly before the second")]
    LabelOrder(String, String),
    #[error("dimension vector has {got} entries, Q*({n}) has {expected} vertices")]
    DimLength {
        n: usize,
        expected: usize,
        got: usize,
    },
    #[error("points have different block structures")]
    StructureMismatch,
    #[error("R(d*) is only defined for n >= 2")]
    RNeedsTwo,
    #[error("function {0} has {1} classifications")]
    Unclassified(String, usize),
    #[error("matrix is {0}x{1}, expected {2}x{2}")]
    BadShape(usize, usize, usize),
    #[error(transparent)]
    Zigzag(#[from] ZigzagError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// A block-column label of `C(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SliceLabel {
    X(usize),
    Xs(usize),
    Y(usize),
    Y0Sum,
    Ys(usize),
}

impl SliceLabel {
    pub fn name(self) -> String {
        match self {
            SliceLabel::X(i) => format!("x{i}"),
            SliceLabel::Xs(i) => format!("x{i}s"),
            SliceLabel::Y(i) => format!("y{i}"),
            SliceLabel::Y0Sum => "y0+y0'".to_string(),
            SliceLabel::Ys(i) => format!("y{i}s"),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        if s == "y0+y0'" {
            return Some(SliceLabel::Y0Sum);
        }
        let (kind, rest) = s.split_at(1);
        let (digits, star) = match rest.strip_suffix('s') {
            Some(d) => (d, true),
            None => (rest, false),
        };
        let i: usize = digits.parse().ok()?;
        match (kind, star) {
            ("x", false) => Some(SliceLabel::X(i)),
            ("x", true) => Some(SliceLabel::Xs(i)),
            ("y", false) if i >= 1 => Some(SliceLabel::Y(i)),
            ("y", true) if i >= 1 => Some(SliceLabel::Ys(i)),
            _ => None,
        }
    }

    /// `y^s_i`, reading `y^s_0` as the merged label `y0+y0'`.
    pub fn ys(i: usize) -> Self {
        if i == 0 {
            SliceLabel::Y0Sum
        } else {
            SliceLabel::Ys(i)
        }
    }

    fn valid(self, n: usize) -> bool {
        match self {
            SliceLabel::X(i) | SliceLabel::Xs(i) => i <= n,
            SliceLabel::Y(i) | SliceLabel::Ys(i) => (1..=n).contains(&i),
            SliceLabel::Y0Sum => true,
        }
    }

    /// Position in `C(n)`; the order on labels is positional.
    pub fn position(self, n: usize) -> usize {
        debug_assert!(self.valid(n));
        match self {
            SliceLabel::X(i) => n - i,
            SliceLabel::Xs(i) => n + 1 + i,
            SliceLabel::Y(i) => 2 * n + 2 + (n - i),
            SliceLabel::Y0Sum => 3 * n + 2,
            SliceLabel::Ys(i) => 3 * n + 2 + i,
        }
    }
}

impl fmt::Display for SliceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// `C(n) = x~ <| x^s <| y~ <| (y0+y0') <| y^s`.
pub fn column_labels(n: usize) -> Vec<SliceLabel> {
    let mut out: Vec<SliceLabel> = (0..=n).rev().map(SliceLabel::X).collect();
    out.extend((0..=n).map(SliceLabel::Xs));
    out.extend((1..=n).rev().map(SliceLabel::Y));
    out.push(SliceLabel::Y0Sum);
    out.extend((1..=n).map(SliceLabel::Ys));
    out
}

/// One of `U_v`, `L_v` or `B_{v,w}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SliceFunction {
    U(SliceLabel),
    L(SliceLabel),
    B(SliceLabel, SliceLabel),
}

impl SliceFunction {
    pub fn is_valid(self, n: usize) -> bool {
        match self {
            SliceFunction::U(v) | SliceFunction::L(v) => v.valid(n),
            SliceFunction::B(v, w) => v.valid(n) && w.valid(n) && v.position(n) < w.position(n),
        }
    }
}

impl fmt::Display for SliceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SliceFunction::U(v) => write!(f, "U_{v}"),
            SliceFunction::L(v) => write!(f, "L_{v}"),
            SliceFunction::B(v, w) => write!(f, "B_{v},{w}"),
        }
    }
}

/// Every `U_v`, then every `L_v`, then `B_{v,w}` for `v < w`, all in the
/// order of `C(n)`.
pub fn slice_functions(n: usize) -> Vec<SliceFunction> {
    let labels = column_labels(n);
    let mut out: Vec<SliceFunction> = labels.iter().map(|&v| SliceFunction::U(v)).collect();
    out.extend(labels.iter().map(|&v| SliceFunction::L(v)));
    for (i, &v) in labels.iter().enumerate() {
        for &w in &labels[i + 1..] {
            out.push(SliceFunction::B(v, w));
        }
    }
    out
}

/// `n`, `d*` and the block sizes derived from them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceParams {
    star: StarQuiver,
    dims: DimVector,
    cols: BlockLabels,
    m_rows: BlockLabels,
    n_rows: BlockLabels,
}

impl SliceParams {
    pub fn new(star: StarQuiver, dims: DimVector) -> Result<Self, SliceError> {
        let n = star.n();
        let expected = star.quiver().n_vertices();
        if dims.len() != expected {
            return Err(SliceError::DimLength {
                n,
                expected,
                got: dims.len(),
            });
        }
        let d = |v| dims[star.vertex(v)];
        let cols = BlockLabels::from_pairs(column_labels(n).into_iter().map(|l| {
            let w = match l {
                SliceLabel::X(i) | SliceLabel::Xs(i) => d(StarVertex::X(i)),
                SliceLabel::Y(i) | SliceLabel::Ys(i) => d(StarVertex::Y(i)),
                SliceLabel::Y0Sum => d(StarVertex::Y(0)) + d(StarVertex::Y0Prime),
            };
            (l.name(), w)
        }));
        let tail = |first: StarVertex| {
            let mut v = vec![(first.name(), d(first))];
            v.extend((1..=n).map(|i| (StarVertex::Y(i).name(), d(StarVertex::Y(i)))));
            v.extend((0..=n).map(|i| (StarVertex::X(i).name(), d(StarVertex::X(i)))));
            BlockLabels::from_pairs(v)
        };
        let m_rows = tail(StarVertex::Y(0));
        let n_rows = tail(StarVertex::Y0Prime);
        Ok(SliceParams {
            star,
            dims,
            cols,
            m_rows,
            n_rows,
        })
    }

    pub fn for_n(n: usize, dims: DimVector) -> Result<Self, SliceError> {
        Self::new(StarQuiver::new(n).map_err(ZigzagError::from)?, dims)
    }

    pub fn n(&self) -> usize {
        self.star.n()
    }

    pub fn star(&self) -> &StarQuiver {
        &self.star
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    fn d(&self, v: StarVertex) -> usize {
        self.dims[self.star.vertex(v)]
    }

    /// `d*(y0)`.
    pub fn q(&self) -> usize {
        self.d(StarVertex::Y(0))
    }

    /// `sum_{i >= 1} d*(y_i)`.
    pub fn r(&self) -> usize {
        (1..=self.n()).map(|i| self.d(StarVertex::Y(i))).sum()
    }

    /// `sum_i d*(x_i)`.
    pub fn s(&self) -> usize {
        (0..=self.n()).map(|i| self.d(StarVertex::X(i))).sum()
    }

    /// `d*(y0')`.
    pub fn t(&self) -> usize {
        self.d(StarVertex::Y0Prime)
    }

    pub fn a(&self) -> usize {
        self.q() + self.r() + self.s()
    }

    pub fn b(&self) -> usize {
        self.t() + self.r() + self.s()
    }

    pub fn column_blocks(&self) -> &BlockLabels {
        &self.cols
    }

    pub fn m_row_blocks(&self) -> &BlockLabels {
        &self.m_rows
    }

    pub fn n_row_blocks(&self) -> &BlockLabels {
        &self.n_rows
    }

    fn col(&self, l: SliceLabel) -> std::ops::Range<usize> {
        self.cols.range(&l.name()).expect("label of C(n)")
    }

    fn mrow(&self, v: StarVertex) -> std::ops::Range<usize> {
        self.m_rows.range(&v.name()).expect("row label of M")
    }

    fn nrow(&self, v: StarVertex) -> std::ops::Range<usize> {
        self.n_rows.range(&v.name()).expect("row label of N")
    }

    fn check_label(&self, l: SliceLabel) -> Result<(), SliceError> {
        if l.valid(self.n()) {
            Ok(())
        } else {
            Err(SliceError::NoSuchLabel(l.name(), self.n()))
        }
    }

    /// The fixed `J`/identity skeleton with every free block zero; this is
    /// `eta(0)`.
    pub fn skeleton(self: &Arc<Self>, field: Field) -> SlicePoint {
        let n = self.n();
        let size = self.a() + self.b();
        let mut m = ExactMatrix::zeros(field, self.a(), size);
        let mut nn = ExactMatrix::zeros(field, self.b(), size);
        let j = |k| ExactMatrix::reversal(field, k);
        let one = |k| ExactMatrix::identity(field, k);
        let y0sum = self.col(SliceLabel::Y0Sum).start;
        m.set_block(self.mrow(StarVertex::Y(0)).start, y0sum, &j(self.q()));
        nn.set_block(
            self.nrow(StarVertex::Y0Prime).start,
            y0sum + self.q(),
            &one(self.t()),
        );
        for i in 1..=n {
            let w = self.d(StarVertex::Y(i));
            let c = self.col(SliceLabel::Y(i)).start;
            m.set_block(self.mrow(StarVertex::Y(i)).start, c, &j(w));
            nn.set_block(self.nrow(StarVertex::Y(i)).start, c, &j(w));
            nn.set_block(
                self.nrow(StarVertex::Y(i)).start,
                self.col(SliceLabel::Ys(i)).start,
                &one(w),
            );
        }
        for i in 0..=n {
            let w = self.d(StarVertex::X(i));
            let c = self.col(SliceLabel::X(i)).start;
            m.set_block(self.mrow(StarVertex::X(i)).start, c, &j(w));
            nn.set_block(self.nrow(StarVertex::X(i)).start, c, &j(w));
            nn.set_block(
                self.nrow(StarVertex::X(i)).start,
                self.col(SliceLabel::Xs(i)).start,
                &one(w),
            );
        }
        SlicePoint {
            params: self.clone(),
            m,
            n: nn,
        }
    }

    /// Rows of `M` and `N` that carry free blocks (in the `x^s` columns).
    fn free_rows(&self) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
        (0..self.q() + self.r(), 0..self.t() + self.r())
    }

    fn xs_cols(&self) -> std::ops::Range<usize> {
        self.col(SliceLabel::Xs(0)).start..self.col(SliceLabel::Xs(self.n())).end
    }

    /// A point of `S(d*)` with uniform free blocks `c, d, e, f`.
    pub fn random_point<R: Rng + ?Sized>(
        self: &Arc<Self>,
        field: Field,
        bound: i64,
        rng: &mut R,
    ) -> SlicePoint {
        let mut p = self.skeleton(field);
        let (mr, nr) = self.free_rows();
        let xs = self.xs_cols();
        let top = ExactMatrix::random(field, mr.len(), xs.len(), bound, rng);
        let bottom = ExactMatrix::random(field, nr.len(), xs.len(), bound, rng);
        p.m.set_block(0, xs.start, &top);
        p.n.set_block(0, xs.start, &bottom);
        p
    }

    /// `eta(V)`: `A_V` and `[0 B_V]` in the `x^s` columns over the skeleton.
    pub fn eta(self: &Arc<Self>, v: &Representation) -> Result<SlicePoint, SliceError> {
        let zz = ZigzagMatrices::for_star(self.star.clone())?;
        self.eta_with(&zz, v)
    }

    /// [`SliceParams::eta`] with prebuilt zig-zag matrices.
    pub fn eta_with(
        self: &Arc<Self>,
        zz: &ZigzagMatrices,
        v: &Representation,
    ) -> Result<SlicePoint, SliceError> {
        if v.dims() != &self.dims {
            return Err(SliceError::StructureMismatch);
        }
        let mut p = self.skeleton(v.field());
        let av = zz.matrix_a().evaluate(v)?;
        let bv = zz.matrix_b().evaluate(v)?;
        p.m.set_block(0, self.xs_cols().start, &av);
        p.n.set_block(0, self.col(SliceLabel::Xs(0)).end, &bv);
        Ok(p)
    }

    /// `theta(g)`: the block-diagonal embedding `GL(d*) -> P(d*)`.
    pub fn theta(&self, g: &GroupElement) -> ExactMatrix {
        let field = g
            .factors()
            .first()
            .map(ExactMatrix::field)
            .unwrap_or(Field::Rational);
        let jconj = |m: &ExactMatrix| {
            let j = ExactMatrix::reversal(field, m.rows());
            j.mul(m).mul(&j)
        };
        let gv = |v: StarVertex| g.factor(self.star.vertex(v));
        let blocks: Vec<ExactMatrix> = column_labels(self.n())
            .into_iter()
            .map(|l| match l {
                SliceLabel::X(i) => jconj(gv(StarVertex::X(i))),
                SliceLabel::Xs(i) => gv(StarVertex::X(i)).clone(),
                SliceLabel::Y(i) => jconj(gv(StarVertex::Y(i))),
                SliceLabel::Y0Sum => ExactMatrix::block_diag(
                    field,
                    &[&jconj(gv(StarVertex::Y(0))), gv(StarVertex::Y0Prime)],
                ),
                SliceLabel::Ys(i) => gv(StarVertex::Y(i)).clone(),
            })
            .collect();
        ExactMatrix::block_diag(field, &blocks.iter().collect::<Vec<_>>())
    }

    /// A random element of the parabolic `P(d*)`: block upper triangular
    /// for the widths of `C(n)`, with invertible diagonal blocks.
    pub fn random_parabolic<R: Rng + ?Sized>(
        &self,
        field: Field,
        bound: i64,
        rng: &mut R,
    ) -> ExactMatrix {
        let size = self.a() + self.b();
        let mut p = ExactMatrix::zeros(field, size, size);
        let ranges: Vec<_> = (0..self.cols.len())
            .map(|k| self.cols.offset_at(k)..self.cols.offset_at(k + 1))
            .collect();
        for (i, ri) in ranges.iter().enumerate() {
            for rj in &ranges[i..] {
                let block = if ri == rj {
                    ExactMatrix::random_invertible(field, ri.len(), bound, rng)
                } else {
                    ExactMatrix::random(field, ri.len(), rj.len(), bound, rng)
                };
                p.set_block(ri.start, rj.start, &block);
            }
        }
        p
    }
}

/// A pair `(M, N)` with `M` of size `a x (a+b)` and `N` of size
/// `b x (a+b)`, block columns labelled by `C(n)`. Points of `S(d*)` have
/// the template shape; general points arise after right multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlicePoint {
    params: Arc<SliceParams>,
    m: ExactMatrix,
    n: ExactMatrix,
}

impl SlicePoint {
    pub fn from_stacked(params: Arc<SliceParams>, g: &ExactMatrix) -> Result<Self, SliceError> {
        let size = params.a() + params.b();
        if g.shape() != (size, size) {
            return Err(SliceError::BadShape(g.rows(), g.cols(), size));
        }
        let a = params.a();
        Ok(SlicePoint {
            m: g.submatrix(0, a, 0, size),
            n: g.submatrix(a, size, 0, size),
            params,
        })
    }

    pub fn params(&self) -> &Arc<SliceParams> {
        &self.params
    }

    pub fn upper(&self) -> &ExactMatrix {
        &self.m
    }

    pub fn lower(&self) -> &ExactMatrix {
        &self.n
    }

    pub fn stacked(&self) -> ExactMatrix {
        ExactMatrix::vstack(&[&self.m, &self.n])
    }

    pub fn is_invertible(&self) -> bool {
        self.stacked().is_invertible()
    }

    /// `(M, N) p`.
    pub fn mul_right(&self, p: &ExactMatrix) -> SlicePoint {
        SlicePoint {
            params: self.params.clone(),
            m: self.m.mul(p),
            n: self.n.mul(p),
        }
    }

    /// Same point of `K\G`: equal row spaces of the top `a` and the bottom
    /// `b` rows.
    pub fn same_coset(&self, other: &SlicePoint) -> bool {
        self.params == other.params
            && self.m.same_row_space(&other.m)
            && self.n.same_row_space(&other.n)
    }

    fn prefix(&self, x: &ExactMatrix, v: SliceLabel) -> ExactMatrix {
        let end = self.params.col(v).end;
        x.submatrix(0, x.rows(), 0, end)
    }

    /// `U_v = rank M_[x_n, v]`.
    pub fn u(&self, v: SliceLabel) -> Result<usize, SliceError> {
        self.params.check_label(v)?;
        Ok(self.prefix(&self.m, v).rank())
    }

    /// `L_v = rank N_[x_n, v]`.
    pub fn l(&self, v: SliceLabel) -> Result<usize, SliceError> {
        self.params.check_label(v)?;
        Ok(self.prefix(&self.n, v).rank())
    }

    /// `B_{v,w} = rank (M, N)_[[v, w]]`.
    pub fn bfun(&self, v: SliceLabel, w: SliceLabel) -> Result<usize, SliceError> {
        let p = &self.params;
        p.check_label(v)?;
        p.check_label(w)?;
        if v.position(p.n()) >= w.position(p.n()) {
            return Err(SliceError::LabelOrder(v.name(), w.name()));
        }
        Ok(stack_split(&self.m, &p.cols, &self.n, &p.cols, &v.name(), &w.name())?.rank())
    }

    pub fn value(&self, f: SliceFunction) -> Result<usize, SliceError> {
        match f {
            SliceFunction::U(v) => self.u(v),
            SliceFunction::L(v) => self.l(v),
            SliceFunction::B(v, w) => self.bfun(v, w),
        }
    }

    /// All functions of [`slice_functions`], in order.
    pub fn signature(&self) -> SliceSignature {
        let values = slice_functions(self.params.n())
            .into_iter()
            .map(|f| self.value(f).expect("canonical functions are valid"))
            .collect();
        SliceSignature {
            n: self.params.n(),
            values,
        }
    }

    fn mblock(&self, row: StarVertex, col: SliceLabel) -> ExactMatrix {
        let (r, c) = (self.params.mrow(row), self.params.col(col));
        self.m.submatrix(r.start, r.end, c.start, c.end)
    }

    fn nblock(&self, row: StarVertex, col: SliceLabel) -> ExactMatrix {
        let (r, c) = (self.params.nrow(row), self.params.col(col));
        self.n.submatrix(r.start, r.end, c.start, c.end)
    }

    /// Whether the point has the template shape of `S(d*)`.
    pub fn in_slice(&self) -> bool {
        let mut skel = self.params.skeleton(self.m.field());
        let (mr, nr) = self.params.free_rows();
        let xs = self.params.xs_cols();
        skel.m.set_block(
            0,
            xs.start,
            &self.m.submatrix(mr.start, mr.end, xs.start, xs.end),
        );
        skel.n.set_block(
            0,
            xs.start,
            &self.n.submatrix(nr.start, nr.end, xs.start, xs.end),
        );
        skel == *self
    }

    /// Structural membership in `im eta`, conditions (I1) to (I4).
    pub fn in_image_eta(&self) -> bool {
        use SliceLabel::Xs;
        use StarVertex::{Y0Prime, Y};
        let n = self.params.n();
        for i in 1..=n {
            for j in 0..=n {
                let (mb, nb) = (self.mblock(Y(i), Xs(j)), self.nblock(Y(i), Xs(j)));
                if mb != nb {
                    return false;
                }
                let below = j >= 1 && j < i;
                let above = j >= i + 2;
                if (below || above) && !mb.is_zero() {
                    return false;
                }
                if j == 0 && !nb.is_zero() {
                    return false;
                }
            }
        }
        for i in 2..=n {
            if !self.mblock(Y(0), Xs(i)).is_zero() || !self.nblock(Y0Prime, Xs(i)).is_zero() {
                return false;
            }
        }
        self.nblock(Y0Prime, Xs(0)).is_zero()
    }

    /// Structural membership in `R(d*)`, conditions (R1) to (R4).
    pub fn in_r(&self) -> Result<bool, SliceError> {
        use SliceLabel::Xs;
        use StarVertex::{Y0Prime, Y};
        let n = self.params.n();
        if n < 2 {
            return Err(SliceError::RNeedsTwo);
        }
        let r1 = (1..=n).all(|i| self.mblock(Y(i), Xs(n)) == self.nblock(Y(i), Xs(n)));
        let r2 = (0..=n - 2).all(|i| self.mblock(Y(i), Xs(n)).is_zero())
            && self.nblock(Y0Prime, Xs(n)).is_zero()
            && (1..=n - 2).all(|i| self.nblock(Y(i), Xs(n)).is_zero());
        let r3 = (0..=n).all(|j| self.mblock(Y(n), Xs(j)) == self.nblock(Y(n), Xs(j)));
        let r4 = (0..n)
            .all(|j| self.mblock(Y(n), Xs(j)).is_zero() && self.nblock(Y(n), Xs(j)).is_zero());
        Ok(r1 && r2 && r3 && r4)
    }
}

/// `B_{v,w}` pairs whose minimum values cut `R(d*)` out of `S(d*)`.
pub fn r_conditions(n: usize) -> Vec<(SliceLabel, SliceLabel)> {
    use SliceLabel::*;
    let pos = |l: SliceLabel| l.position(n);
    let labels = column_labels(n);
    let between = |lo: SliceLabel, hi: SliceLabel| {
        labels
            .iter()
            .copied()
            .filter(move |&l| pos(lo) <= pos(l) && pos(l) <= pos(hi))
    };
    let mut out = Vec::new();
    out.extend(between(Y0Sum, SliceLabel::ys(n - 1)).map(|w| (X(n), w)));
    out.extend(between(Y(n - 1), Y(1)).map(|w| (X(n), w)));
    out.extend(between(X(n), X(0)).map(|v| (v, SliceLabel::ys(n - 1))));
    out.extend(between(Xs(0), Xs(n - 1)).map(|v| (v, SliceLabel::ys(n - 1))));
    out
}

/// `B_{v,w}` pairs whose minimum values, together with
/// `L_{x0s} = d*_x`, cut `im eta` out of `S(d*)`.
pub fn image_conditions(n: usize) -> Vec<(SliceLabel, SliceLabel)> {
    let mut out = Vec::new();
    for f in slice_functions(n) {
        if let (SliceFunction::B(v, w), Ok(FunctionClass::Image)) = (f, classify(f, n)) {
            out.push((v, w));
        }
    }
    out
}

/// Membership in `R(d*)` through the rank conditions, with minima read off
/// `skeleton` (the values at `eta(0)`).
pub fn in_r_by_rank(p: &SlicePoint, skeleton: &SlicePoint) -> Result<bool, SliceError> {
    let n = p.params.n();
    if n < 2 {
        return Err(SliceError::RNeedsTwo);
    }
    for (v, w) in r_conditions(n) {
        if p.bfun(v, w)? != skeleton.bfun(v, w)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership in `im eta` through the rank conditions, with minima read off
/// `skeleton`.
pub fn in_image_by_rank(p: &SlicePoint, skeleton: &SlicePoint) -> Result<bool, SliceError> {
    if p.l(SliceLabel::Xs(0))? != p.params.s() {
        return Ok(false);
    }
    for (v, w) in image_conditions(p.params.n()) {
        if p.bfun(v, w)? != skeleton.bfun(v, w)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Values of every `U_v`, `L_v`, `B_{v,w}` at one point, in the order of
/// [`slice_functions`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SliceSignature {
    pub n: usize,
    pub values: Vec<usize>,
}

impl SliceSignature {
    pub fn leq(&self, other: &Self) -> Result<bool, SliceError> {
        if self.n != other.n || self.values.len() != other.values.len() {
            return Err(SliceError::StructureMismatch);
        }
        Ok(self.values.iter().zip(&other.values).all(|(a, b)| a <= b))
    }
}

/// Closure containment `O(p1) <= O(p2)` of `P(d*)`-orbits, decided by
/// comparing all `U`, `L` and `B` values.
pub fn porbit_leq(p1: &SlicePoint, p2: &SlicePoint) -> Result<bool, SliceError> {
    if p1.params != p2.params {
        return Err(SliceError::StructureMismatch);
    }
    p1.signature().leq(&p2.signature())
}

/// Partner value `g(V)` for a quiver-type function.
pub(crate) fn quiver_value(
    sig: &RankSignature,
    fam: &crate::zigzag::DnFamily,
    g: crate::zigzag::RankFunction,
) -> usize {
    sig.values[fam.position(g).expect("partner lies in D_n")]
}
