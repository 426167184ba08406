//! Zig-zag matrices on `Q*(n)` and the rank functions `D_n`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{ExactMatrix, Field};
use crate::quiver::{Quiver, Representation};
use crate::star::{StarArrow, StarError, StarQuiver, StarVertex};

/// Version tag of the canonical `D_n` enumeration order.
pub const DN_VERSION: &str = "dn-v1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZigzagError {
    #[error("[{0}, {1}] is not an interval of the arrow order")]
    NotComparable(String, String),
    #[error("doubled matrix needs a1 <= gamma <= delta, got [[{0}, {1}]]")]
    BadDouble(String, String),
    #[error("arrow {0} does not exist in Q*({1})")]
    NoSuchArrow(String, usize),
    #[error("path entry ({row}, {col}) does not run from its row label to its column label")]
    BadPath { row: usize, col: usize },
    #[error("representation lives on a different quiver than the Q-matrix")]
    WrongQuiver,
    #[error("signatures have different shapes")]
    ShapeMismatch,
    #[error(transparent)]
    Star(#[from] StarError),
}

/// A path: its start vertex and the arrows traversed, in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub start: usize,
    pub arrows: Vec<usize>,
}

/// A formal linear combination of paths with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PathSum(pub Vec<(i64, Path)>);

impl PathSum {
    pub fn zero() -> Self {
        PathSum(Vec::new())
    }

    pub fn arrow(q: &Quiver, a: usize) -> Self {
        PathSum(vec![(
            1,
            Path {
                start: q.arrows()[a].tail,
                arrows: vec![a],
            },
        )])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|(c, _)| *c == 0)
    }

    fn without_arrow(&self, a: usize) -> Self {
        PathSum(
            self.0
                .iter()
                .filter(|(_, p)| !p.arrows.contains(&a))
                .cloned()
                .collect(),
        )
    }
}

/// A matrix whose rows and columns are labelled by vertices and whose
/// entries are linear combinations of paths from the row vertex to the
/// column vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    quiver: Arc<Quiver>,
    rows: Vec<usize>,
    cols: Vec<usize>,
    entries: Vec<PathSum>,
}

fn path_end(q: &Quiver, p: &Path) -> Option<usize> {
    let mut at = p.start;
    for &a in &p.arrows {
        let arrow = q.arrows().get(a)?;
        if arrow.tail != at {
            return None;
        }
        at = arrow.head;
    }
    Some(at)
}

impl QMatrix {
    pub fn new(
        quiver: Arc<Quiver>,
        rows: Vec<usize>,
        cols: Vec<usize>,
        entries: Vec<PathSum>,
    ) -> Result<Self, ZigzagError> {
        assert_eq!(entries.len(), rows.len() * cols.len(), "entry count");
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                for (_, p) in &entries[i * cols.len() + j].0 {
                    if p.start != r || path_end(&quiver, p) != Some(c) {
                        return Err(ZigzagError::BadPath { row: i, col: j });
                    }
                }
            }
        }
        Ok(QMatrix {
            quiver,
            rows,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &PathSum {
        &self.entries[i * self.cols.len() + j]
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    fn sub(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> QMatrix {
        let mut entries = Vec::new();
        for i in r0..=r1 {
            for j in c0..=c1 {
                entries.push(self.entry(i, j).clone());
            }
        }
        QMatrix {
            quiver: self.quiver.clone(),
            rows: self.rows[r0..=r1].to_vec(),
            cols: self.cols[c0..=c1].to_vec(),
            entries,
        }
    }

    fn without_arrow(&self, a: usize) -> QMatrix {
        QMatrix {
            entries: self.entries.iter().map(|e| e.without_arrow(a)).collect(),
            ..self.clone()
        }
    }

    /// The single nonzero arrow of each entry, or `None` for zero entries;
    /// `Some(None)` marks entries that are not a single arrow.
    pub fn arrow_pattern(&self) -> Vec<Vec<Option<String>>> {
        (0..self.rows.len())
            .map(|i| {
                (0..self.cols.len())
                    .map(|j| {
                        let e = self.entry(i, j);
                        match e.0.as_slice() {
                            [] => None,
                            [(1, p)] if p.arrows.len() == 1 => {
                                Some(self.quiver.arrows()[p.arrows[0]].id.clone())
                            }
                            _ => Some("*".to_string()),
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `Phi_V`: block `(i, j)` is `sum c V_p`, sized `d(r_i) x d(c_j)`.
    pub fn evaluate(&self, v: &Representation) -> Result<ExactMatrix, ZigzagError> {
        if **v.quiver() != *self.quiver {
            return Err(ZigzagError::WrongQuiver);
        }
        let d = v.dims();
        let field = v.field();
        let row_off = offsets(self.rows.iter().map(|&r| d[r]));
        let col_off = offsets(self.cols.iter().map(|&c| d[c]));
        let mut out = ExactMatrix::zeros(field, row_off[self.rows.len()], col_off[self.cols.len()]);
        for (i, &r) in self.rows.iter().enumerate() {
            for (j, &c) in self.cols.iter().enumerate() {
                let e = self.entry(i, j);
                if e.is_zero() || d[r] == 0 || d[c] == 0 {
                    continue;
                }
                let mut block = ExactMatrix::zeros(field, d[r], d[c]);
                for (coef, p) in &e.0 {
                    let mut m = ExactMatrix::identity(field, d[p.start]);
                    for &a in &p.arrows {
                        m = m.mul(v.mat(a));
                    }
                    block = block.add(&m.scale(&field.from_i64(*coef)));
                }
                out.set_block(row_off[i], col_off[j], &block);
            }
        }
        Ok(out)
    }
}

fn offsets(widths: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out = vec![0];
    for w in widths {
        out.push(out.last().unwrap() + w);
    }
    out
}

/// Number of leading labels of `labels` that do not occur in `later`.
fn private_prefix(labels: &[usize], later: &[usize]) -> usize {
    labels.iter().take_while(|l| !later.contains(l)).count()
}

/// `(M, N)_[[c_i, c_j]]` on Q-matrices, with `ci`, `cj` positions in the
/// columns of `m`.
fn split_cols(m: &QMatrix, n: &QMatrix, ci: usize, cj: usize) -> QMatrix {
    let k = private_prefix(&n.cols, &m.cols[ci + 1..]);
    let shared = cj - ci;
    debug_assert_eq!(&n.cols[k..k + shared], &m.cols[ci + 1..=cj]);
    let mut cols: Vec<usize> = m.cols[..=ci].to_vec();
    cols.extend_from_slice(&n.cols[..k]);
    cols.extend_from_slice(&m.cols[ci + 1..=cj]);
    let mut rows = m.rows.clone();
    rows.extend_from_slice(&n.rows);
    let mut entries = Vec::new();
    for i in 0..m.rows.len() {
        entries.extend((0..=ci).map(|j| m.entry(i, j).clone()));
        entries.extend((0..k).map(|_| PathSum::zero()));
        entries.extend((ci + 1..=cj).map(|j| m.entry(i, j).clone()));
    }
    for i in 0..n.rows.len() {
        entries.extend((0..=ci).map(|_| PathSum::zero()));
        entries.extend((0..k).map(|j| n.entry(i, j).clone()));
        entries.extend((k..k + shared).map(|j| n.entry(i, j).clone()));
    }
    QMatrix {
        quiver: m.quiver.clone(),
        rows,
        cols,
        entries,
    }
}

/// `((M^T, N^T)_[[r_i, r_j]])^T`, with `ri`, `rj` positions in the rows of
/// `m`.
fn split_rows(m: &QMatrix, n: &QMatrix, ri: usize, rj: usize) -> QMatrix {
    let k = private_prefix(&n.rows, &m.rows[ri + 1..]);
    let shared = rj - ri;
    debug_assert_eq!(&n.rows[k..k + shared], &m.rows[ri + 1..=rj]);
    let mut rows: Vec<usize> = m.rows[..=ri].to_vec();
    rows.extend_from_slice(&n.rows[..k]);
    rows.extend_from_slice(&m.rows[ri + 1..=rj]);
    let mut cols = m.cols.clone();
    cols.extend_from_slice(&n.cols);
    let (mc, nc) = (m.cols.len(), n.cols.len());
    let mut entries = Vec::new();
    for i in 0..=ri {
        entries.extend((0..mc).map(|j| m.entry(i, j).clone()));
        entries.extend((0..nc).map(|_| PathSum::zero()));
    }
    for i in 0..k {
        entries.extend((0..mc).map(|_| PathSum::zero()));
        entries.extend((0..nc).map(|j| n.entry(i, j).clone()));
    }
    for t in 0..shared {
        entries.extend((0..mc).map(|j| m.entry(ri + 1 + t, j).clone()));
        entries.extend((0..nc).map(|j| n.entry(k + t, j).clone()));
    }
    QMatrix {
        quiver: m.quiver.clone(),
        rows,
        cols,
        entries,
    }
}

/// Position of an arrow in the chain `b0 < a1 < b1 < a2 < ... < bn`.
/// `a1'` shares the slot of `a1` but sits on the second chain.
fn chain_pos(a: StarArrow) -> usize {
    match a {
        StarArrow::Beta(i) => 2 * i,
        StarArrow::Alpha(i) => 2 * i - 1,
        StarArrow::Alpha1Prime => 1,
    }
}

/// The partial order generated by the chains `b0 < a1 < b1 < ... < bn` and
/// `a1' < b1 < ... < bn`.
pub fn arrow_leq(g: StarArrow, d: StarArrow) -> bool {
    use StarArrow::*;
    match (g, d) {
        _ if g == d => true,
        (Alpha1Prime, _) => chain_pos(d) >= 2,
        (_, Alpha1Prime) => false,
        _ => chain_pos(g) <= chain_pos(d),
    }
}

fn valid_arrow(a: StarArrow, n: usize) -> bool {
    match a {
        StarArrow::Beta(i) => i <= n,
        StarArrow::Alpha(i) => (1..=n).contains(&i),
        StarArrow::Alpha1Prime => true,
    }
}

/// The arrows of `Q*(n)` along the first chain.
pub fn chain(n: usize) -> Vec<StarArrow> {
    let mut out = vec![StarArrow::Beta(0)];
    for i in 1..=n {
        out.push(StarArrow::Alpha(i));
        out.push(StarArrow::Beta(i));
    }
    out
}

/// The Q-matrices `A` and `B` and everything built from them, for one `n`.
#[derive(Clone, Debug)]
pub struct ZigzagMatrices {
    star: StarQuiver,
    a: QMatrix,
    b: QMatrix,
}

impl ZigzagMatrices {
    pub fn new(n: usize) -> Result<Self, ZigzagError> {
        Self::for_star(StarQuiver::new(n)?)
    }

    pub fn for_star(star: StarQuiver) -> Result<Self, ZigzagError> {
        let n = star.n();
        let q = star.quiver().clone();
        let arrow = |a| PathSum::arrow(&q, star.arrow(a));
        // A: rows y0..yn, cols x0..xn; b_i at (i, i), a_i at (i-1, i).
        let a_rows: Vec<usize> = (0..=n).map(|i| star.vertex(StarVertex::Y(i))).collect();
        let a_cols: Vec<usize> = (0..=n).map(|i| star.vertex(StarVertex::X(i))).collect();
        let mut a_ent = vec![PathSum::zero(); (n + 1) * (n + 1)];
        for i in 0..=n {
            a_ent[i * (n + 1) + i] = arrow(StarArrow::Beta(i));
            if i >= 1 {
                a_ent[(i - 1) * (n + 1) + i] = arrow(StarArrow::Alpha(i));
            }
        }
        // B: rows y0', y1..yn, cols x1..xn; a1' at (0, 0), b_i at (i, i-1),
        // a_i at (i-1, i-1) for i >= 2.
        let mut b_rows = vec![star.vertex(StarVertex::Y0Prime)];
        b_rows.extend((1..=n).map(|i| star.vertex(StarVertex::Y(i))));
        let b_cols: Vec<usize> = (1..=n).map(|i| star.vertex(StarVertex::X(i))).collect();
        let mut b_ent = vec![PathSum::zero(); (n + 1) * n];
        b_ent[0] = arrow(StarArrow::Alpha1Prime);
        for i in 1..=n {
            b_ent[i * n + (i - 1)] = arrow(StarArrow::Beta(i));
            if i >= 2 {
                b_ent[(i - 1) * n + (i - 1)] = arrow(StarArrow::Alpha(i));
            }
        }
        let a = QMatrix::new(q.clone(), a_rows, a_cols, a_ent)?;
        let b = QMatrix::new(q, b_rows, b_cols, b_ent)?;
        Ok(ZigzagMatrices { star, a, b })
    }

    pub fn n(&self) -> usize {
        self.star.n()
    }

    pub fn star(&self) -> &StarQuiver {
        &self.star
    }

    pub fn matrix_a(&self) -> &QMatrix {
        &self.a
    }

    pub fn matrix_b(&self) -> &QMatrix {
        &self.b
    }

    fn check(&self, a: StarArrow) -> Result<(), ZigzagError> {
        if valid_arrow(a, self.n()) {
            Ok(())
        } else {
            Err(ZigzagError::NoSuchArrow(a.name(), self.n()))
        }
    }

    /// Position of an arrow in `A`.
    fn pos_a(a: StarArrow) -> (usize, usize) {
        match a {
            StarArrow::Beta(i) => (i, i),
            StarArrow::Alpha(i) => (i - 1, i),
            StarArrow::Alpha1Prime => unreachable!(),
        }
    }

    /// Position of an arrow in `B`.
    fn pos_b(a: StarArrow) -> (usize, usize) {
        match a {
            StarArrow::Alpha1Prime => (0, 0),
            StarArrow::Beta(i) => (i, i - 1),
            StarArrow::Alpha(i) => (i - 1, i - 1),
        }
    }

    /// `[gamma, delta]`: the submatrix of `A` (or of `B` when
    /// `gamma = a1'`) spanned by the two entries.
    pub fn interval(&self, g: StarArrow, d: StarArrow) -> Result<QMatrix, ZigzagError> {
        self.check(g)?;
        self.check(d)?;
        if !arrow_leq(g, d) {
            return Err(ZigzagError::NotComparable(g.name(), d.name()));
        }
        Ok(if g == StarArrow::Alpha1Prime {
            let (r0, c0) = Self::pos_b(g);
            let (r1, c1) = Self::pos_b(d);
            self.b.sub(r0, r1, c0, c1)
        } else {
            let (r0, c0) = Self::pos_a(g);
            let (r1, c1) = Self::pos_a(d);
            self.a.sub(r0, r1, c0, c1)
        })
    }

    /// `[[gamma, delta]]` for `a1 <= gamma <= delta`.
    pub fn double_interval(&self, g: StarArrow, d: StarArrow) -> Result<QMatrix, ZigzagError> {
        self.check(g)?;
        self.check(d)?;
        let ok = g != StarArrow::Alpha1Prime
            && d != StarArrow::Alpha1Prime
            && arrow_leq(StarArrow::Alpha(1), g)
            && arrow_leq(g, d);
        if !ok {
            return Err(ZigzagError::BadDouble(g.name(), d.name()));
        }
        let m = self.interval(StarArrow::Beta(0), d)?;
        // The B-part runs from a1' to delta; for delta = a1 this is the
        // single entry a1' even though a1' and a1 are incomparable.
        let (r1, c1) = Self::pos_b(d);
        let nn = self.b.sub(0, r1, 0, c1);
        Ok(match g {
            // Columns of m are x0..xj: split after x_{i-1}, through the end.
            StarArrow::Alpha(i) => split_cols(&m, &nn, i - 1, m.cols.len() - 1),
            // Rows of m are y0..yj: split after y_{i-1}, through the end.
            StarArrow::Beta(i) => split_rows(&m, &nn, i - 1, m.rows.len() - 1),
            StarArrow::Alpha1Prime => unreachable!(),
        })
    }

    /// `[[a1, delta]]^0`: `[[a1, delta]]` with `b0` replaced by 0.
    pub fn double_interval_zero(&self, d: StarArrow) -> Result<QMatrix, ZigzagError> {
        let m = self.double_interval(StarArrow::Alpha(1), d)?;
        Ok(m.without_arrow(self.star.arrow(StarArrow::Beta(0))))
    }

    /// The Q-matrix behind a rank function.
    pub fn matrix_of(&self, f: RankFunction) -> Result<QMatrix, ZigzagError> {
        match f {
            RankFunction::Single(g, d) => self.interval(g, d),
            RankFunction::Double(g, d) => self.double_interval(g, d),
            RankFunction::DoubleZero(d) => self.double_interval_zero(d),
        }
    }
}

/// A function in `D_n`: `|g, d|`, `||g, d||` or `||a1, d||^0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RankFunction {
    Single(StarArrow, StarArrow),
    Double(StarArrow, StarArrow),
    DoubleZero(StarArrow),
}

impl RankFunction {
    /// Whether the function belongs to `D_n`.
    pub fn is_member(self, n: usize) -> bool {
        let a1 = StarArrow::Alpha(1);
        match self {
            RankFunction::Single(g, d) => {
                valid_arrow(g, n) && valid_arrow(d, n) && arrow_leq(g, d) && g != a1
            }
            RankFunction::Double(g, d) => {
                valid_arrow(g, n)
                    && valid_arrow(d, n)
                    && g != StarArrow::Alpha1Prime
                    && arrow_leq(a1, g)
                    && arrow_leq(g, d)
            }
            RankFunction::DoubleZero(d) => {
                valid_arrow(d, n) && d != StarArrow::Alpha1Prime && arrow_leq(a1, d)
            }
        }
    }

    /// Parses `|b0,a2|`, `||a1,b1||` or `||a1,b2||0`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        let pair = |inner: &str| {
            let (g, d) = inner.split_once(',')?;
            Some((StarArrow::parse(g.trim())?, StarArrow::parse(d.trim())?))
        };
        if let Some(inner) = s.strip_prefix("||").and_then(|r| r.strip_suffix("||0")) {
            let (g, d) = pair(inner)?;
            return (g == StarArrow::Alpha(1)).then_some(RankFunction::DoubleZero(d));
        }
        if let Some(inner) = s.strip_prefix("||").and_then(|r| r.strip_suffix("||")) {
            let (g, d) = pair(inner)?;
            return Some(RankFunction::Double(g, d));
        }
        let inner = s.strip_prefix('|')?.strip_suffix('|')?;
        let (g, d) = pair(inner)?;
        Some(RankFunction::Single(g, d))
    }
}

impl fmt::Display for RankFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankFunction::Single(g, d) => write!(f, "|{},{}|", g.name(), d.name()),
            RankFunction::Double(g, d) => write!(f, "||{},{}||", g.name(), d.name()),
            RankFunction::DoubleZero(d) => write!(f, "||a1,{}||0", d.name()),
        }
    }
}

/// `D_n` in canonical order: `|g,d|` along the first chain (skipping
/// `g = a1`) then along the second, then `||g,d||`, then `||a1,d||^0`, each
/// lexicographic in chain position.
pub fn enumerate_dn(n: usize) -> Vec<RankFunction> {
    let ch = chain(n);
    let mut out = Vec::new();
    for (i, &g) in ch.iter().enumerate() {
        if g == StarArrow::Alpha(1) {
            continue;
        }
        for &d in &ch[i..] {
            out.push(RankFunction::Single(g, d));
        }
    }
    out.push(RankFunction::Single(
        StarArrow::Alpha1Prime,
        StarArrow::Alpha1Prime,
    ));
    for &d in &ch[2..] {
        out.push(RankFunction::Single(StarArrow::Alpha1Prime, d));
    }
    for (i, &g) in ch.iter().enumerate().skip(1) {
        for &d in &ch[i..] {
            out.push(RankFunction::Double(g, d));
        }
    }
    for &d in &ch[1..] {
        out.push(RankFunction::DoubleZero(d));
    }
    out
}

/// Ranks of every `f` in `D_n` at one representation, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RankSignature {
    pub n: usize,
    #[serde(rename = "enumeration-version")]
    pub version: String,
    pub values: Vec<usize>,
}

impl RankSignature {
    /// Entrywise `self <= other`. Errors on signatures of different shape.
    pub fn leq(&self, other: &Self) -> Result<bool, ZigzagError> {
        if self.n != other.n
            || self.version != other.version
            || self.values.len() != other.values.len()
        {
            return Err(ZigzagError::ShapeMismatch);
        }
        Ok(self.values.iter().zip(&other.values).all(|(a, b)| a <= b))
    }
}

/// The `D_n` family for one `n`, with its Q-matrices built once.
#[derive(Clone, Debug)]
pub struct DnFamily {
    matrices: ZigzagMatrices,
    functions: Vec<(RankFunction, QMatrix)>,
}

impl DnFamily {
    pub fn new(n: usize) -> Result<Self, ZigzagError> {
        let matrices = ZigzagMatrices::new(n)?;
        let functions = enumerate_dn(n)
            .into_iter()
            .map(|f| Ok((f, matrices.matrix_of(f)?)))
            .collect::<Result<_, ZigzagError>>()?;
        Ok(DnFamily {
            matrices,
            functions,
        })
    }

    pub fn n(&self) -> usize {
        self.matrices.n()
    }

    pub fn matrices(&self) -> &ZigzagMatrices {
        &self.matrices
    }

    pub fn star(&self) -> &StarQuiver {
        self.matrices.star()
    }

    pub fn functions(&self) -> impl Iterator<Item = RankFunction> + '_ {
        self.functions.iter().map(|(f, _)| *f)
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn position(&self, f: RankFunction) -> Option<usize> {
        self.functions.iter().position(|(g, _)| *g == f)
    }

    /// `rank Phi_w` for a single function.
    pub fn value(&self, f: RankFunction, w: &Representation) -> Result<usize, ZigzagError> {
        let m = match self.position(f) {
            Some(i) => self.functions[i].1.clone(),
            None => self.matrices.matrix_of(f)?,
        };
        Ok(m.evaluate(w)?.rank())
    }

    pub fn signature(&self, w: &Representation) -> Result<RankSignature, ZigzagError> {
        let values = self
            .functions
            .iter()
            .map(|(_, m)| Ok(m.evaluate(w)?.rank()))
            .collect::<Result<_, ZigzagError>>()?;
        Ok(RankSignature {
            n: self.n(),
            version: DN_VERSION.to_string(),
            values,
        })
    }
}

/// Convenience wrapper over [`DnFamily::signature`].
pub fn signature(w: &Representation, n: usize) -> Result<RankSignature, ZigzagError> {
    DnFamily::new(n)?.signature(w)
}

/// All-ones representation of `Q*(n)` with every dimension 1; handy in
/// tests and examples.
pub fn all_ones(star: &StarQuiver, field: Field) -> Representation {
    let q = star.quiver();
    let d = crate::quiver::DimVector(vec![1; q.n_vertices()]);
    let mats = q
        .arrows()
        .iter()
        .map(|_| ExactMatrix::from_i64_rows(field, &[[1]]))
        .collect();
    Representation::new(q.clone(), field, d, mats).expect("all-ones shapes")
}
