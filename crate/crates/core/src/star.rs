//! The bipartite quiver `Q*(n)` and the embedding of type D quivers into it.
//!
//! `Q*(n)` has vertices `x0..xn, y0, y0', y1..yn` and arrows
//! `b0: y0->x0`, `a1: y0->x1`, `a1': y0'->x1`, `bi: yi->xi` and
//! `ai: y(i-1)->xi`. A type D quiver `Q` is recovered from `Q*(n)` by
//! contracting a set `A` of arrows; representations of `Q` extend to `Q*(n)`
//! by placing identities over `A`.

use std::sync::Arc;

use thiserror::Error;

use crate::linalg::{ExactMatrix, Field};
use crate::quiver::{DimVector, GroupElement, Quiver, QuiverError, Representation, TypeDShape};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StarError {
    #[error("Q*(n) needs n >= 1")]
    ZeroRank,
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("representation does not live on the embedded quiver")]
    WrongQuiver,
    #[error("dimension vector {got:?} does not match the embedding's {expected:?}")]
    DimMismatch {
        expected: Vec<usize>,
        got: Vec<usize>,
    },
}

/// Arrows of `Q*(n)` in their natural order
/// `b0 < a1 < b1 < a2 < ... < bn` plus the extra arrow `a1'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StarArrow {
    Beta(usize),
    Alpha(usize),
    Alpha1Prime,
}

impl StarArrow {
    pub fn name(self) -> String {
        match self {
            StarArrow::Beta(i) => format!("b{i}"),
            StarArrow::Alpha(i) => format!("a{i}"),
            StarArrow::Alpha1Prime => "a1'".to_string(),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        if s == "a1'" {
            return Some(StarArrow::Alpha1Prime);
        }
        let (kind, rest) = s.split_at(1.min(s.len()));
        let i: usize = rest.parse().ok()?;
        match kind {
            "b" => Some(StarArrow::Beta(i)),
            "a" if i >= 1 => Some(StarArrow::Alpha(i)),
            _ => None,
        }
    }
}

/// Vertices of `Q*(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StarVertex {
    X(usize),
    Y(usize),
    Y0Prime,
}

impl StarVertex {
    pub fn name(self) -> String {
        match self {
            StarVertex::X(i) => format!("x{i}"),
            StarVertex::Y(i) => format!("y{i}"),
            StarVertex::Y0Prime => "y0'".to_string(),
        }
    }
}

/// `Q*(n)` together with index lookups for its named vertices and arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarQuiver {
    n: usize,
    quiver: Arc<Quiver>,
}

impl StarQuiver {
    pub fn new(n: usize) -> Result<Self, StarError> {
        if n == 0 {
            return Err(StarError::ZeroRank);
        }
        let mut vertices: Vec<String> = (0..=n).map(|i| StarVertex::X(i).name()).collect();
        vertices.push(StarVertex::Y(0).name());
        vertices.push(StarVertex::Y0Prime.name());
        vertices.extend((1..=n).map(|i| StarVertex::Y(i).name()));
        let mut arrows = Vec::new();
        for a in Self::arrow_order(n) {
            let (t, h) = Self::endpoints(a);
            arrows.push((a.name(), t.name(), h.name()));
        }
        let quiver = Quiver::new(vertices, arrows)?;
        Ok(StarQuiver {
            n,
            quiver: Arc::new(quiver),
        })
    }

    fn arrow_order(n: usize) -> Vec<StarArrow> {
        let mut out = vec![
            StarArrow::Beta(0),
            StarArrow::Alpha(1),
            StarArrow::Alpha1Prime,
            StarArrow::Beta(1),
        ];
        for i in 2..=n {
            out.push(StarArrow::Alpha(i));
            out.push(StarArrow::Beta(i));
        }
        out
    }

    /// `(tail, head)` of an arrow.
    pub fn endpoints(a: StarArrow) -> (StarVertex, StarVertex) {
        match a {
            StarArrow::Beta(i) => (StarVertex::Y(i), StarVertex::X(i)),
            StarArrow::Alpha(i) => (StarVertex::Y(i - 1), StarVertex::X(i)),
            StarArrow::Alpha1Prime => (StarVertex::Y0Prime, StarVertex::X(1)),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn vertex(&self, v: StarVertex) -> usize {
        let n = self.n;
        match v {
            StarVertex::X(i) => {
                assert!(i <= n);
                i
            }
            StarVertex::Y(0) => n + 1,
            StarVertex::Y0Prime => n + 2,
            StarVertex::Y(i) => {
                assert!(i <= n);
                n + 2 + i
            }
        }
    }

    pub fn arrow(&self, a: StarArrow) -> usize {
        match a {
            StarArrow::Beta(0) => 0,
            StarArrow::Alpha(1) => 1,
            StarArrow::Alpha1Prime => 2,
            StarArrow::Beta(1) => 3,
            StarArrow::Alpha(i) => {
                assert!((2..=self.n).contains(&i));
                2 * i
            }
            StarArrow::Beta(i) => {
                assert!(i <= self.n);
                2 * i + 1
            }
        }
    }

    pub fn arrows(&self) -> Vec<StarArrow> {
        Self::arrow_order(self.n)
    }

    /// `d*(v)` read from a dimension vector on this quiver.
    pub fn dim(&self, d: &DimVector, v: StarVertex) -> usize {
        d[self.vertex(v)]
    }
}

/// Which of the two constructions of `d*` applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EmbeddingCase {
    /// One short-branch arrow points into the branch vertex, the other away.
    Composable,
    /// Both short-branch arrows point into the branch vertex; `x0` gets
    /// dimension 0 and `b0` carries an empty matrix.
    BothInward,
}

/// What an arrow of `Q*(n)` becomes under the embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArrowRole {
    /// Contracted; carries an identity matrix.
    Contracted,
    /// Image of an arrow of the (normalized) source quiver.
    Source(usize),
    /// `b0` in the both-inward case, a map to the zero space.
    Padding,
}

/// A deterministic embedding of a type D quiver `Q` (or `Q^op`) into
/// `Q*(n)`, with the induced dimension vector `d*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarEmbedding {
    source: Arc<Quiver>,
    normalized: Arc<Quiver>,
    opposite: bool,
    star: StarQuiver,
    case: EmbeddingCase,
    contracted: Vec<usize>,
    roles: Vec<ArrowRole>,
    vertex_map: Vec<Option<usize>>,
    source_dims: DimVector,
    dims: DimVector,
}

/// Direction of an arrow along a branch walked away from the branch vertex.
fn points_outward(q: &Quiver, arrow: usize, nearer: usize) -> bool {
    q.arrows()[arrow].tail == nearer
}

impl StarEmbedding {
    /// Embeds `(q, d)`.
    ///
    /// Orientation is normalized to `Q^op` only when no short-branch arrow
    /// of `q` points into the branch vertex. For `D4` the long branch is the
    /// leaf of highest index whose removal leaves such an arrow (if any).
    /// In the composable case the inward arrow maps to `a1'` and the
    /// outward one to `b0`; with both inward, the leaf of lower index maps
    /// to `a1` and the other to `a1'`. The long branch is laid along the
    /// zig-zag `x1 <- y1 -> x2 <- ...`, contracting a zig-zag arrow whenever
    /// its direction disagrees with the next arrow of the branch, and `n` is
    /// the smallest value for which the walk fits.
    pub fn new(q: Arc<Quiver>, d: DimVector) -> Result<Self, StarError> {
        if d.len() != q.n_vertices() {
            return Err(QuiverError::DimLength {
                expected: q.n_vertices(),
                got: d.len(),
            }
            .into());
        }
        let shape = TypeDShape::analyze(&q)?;
        let (long_idx, opposite) = match choose_long_branch(&q, &shape) {
            Some(l) => (l, false),
            None => {
                let op = q.opposite();
                (
                    choose_long_branch(&op, &shape).expect("opposite has inward arrows"),
                    true,
                )
            }
        };
        let normalized = Arc::new(if opposite { q.opposite() } else { (*q).clone() });
        let nq: &Quiver = &normalized;
        let b = shape.branch;
        let shorts: Vec<(usize, usize)> = (0..3)
            .filter(|&i| i != long_idx)
            .map(|i| shape.branches[i][0])
            .collect();
        let long = &shape.branches[long_idx];
        let inward: Vec<bool> = shorts
            .iter()
            .map(|&(a, _)| !points_outward(nq, a, b))
            .collect();

        // Walk the long branch along b1, a2, b2, a3, ... starting from x1.
        // `seq` entries are (arrow, points outward, far endpoint).
        let zig = |k: usize| -> (StarArrow, bool, StarVertex) {
            let i = k / 2 + 1;
            if k.is_multiple_of(2) {
                (StarArrow::Beta(i), false, StarVertex::Y(i))
            } else {
                (StarArrow::Alpha(i + 1), true, StarVertex::X(i + 1))
            }
        };
        let mut contracted_star: Vec<StarArrow> = Vec::new();
        let mut placed: Vec<(StarArrow, usize)> = Vec::new();
        let mut far_images: Vec<(StarVertex, usize)> = Vec::new();
        let mut k = 0;
        let mut prev = b;
        for &(arrow, vertex) in long {
            let out = points_outward(nq, arrow, prev);
            let (mut z, mut dir, mut far) = zig(k);
            if dir != out {
                contracted_star.push(z);
                far_images.push((far, prev));
                k += 1;
                (z, dir, far) = zig(k);
            }
            debug_assert_eq!(dir, out);
            placed.push((z, arrow));
            far_images.push((far, vertex));
            k += 1;
            prev = vertex;
        }
        // The last step used zig(k - 1); an alpha there needs its partner beta.
        let last = zig(k - 1).0;
        let n = match last {
            StarArrow::Alpha(i) => {
                contracted_star.push(StarArrow::Beta(i));
                far_images.push((StarVertex::Y(i), prev));
                i
            }
            StarArrow::Beta(i) => i,
            StarArrow::Alpha1Prime => unreachable!(),
        };
        let star = StarQuiver::new(n)?;
        let sq = star.quiver().clone();

        let mut roles = vec![ArrowRole::Contracted; sq.n_arrows()];
        let mut vertex_map: Vec<Option<usize>> = vec![None; sq.n_vertices()];
        for &(z, arrow) in &placed {
            roles[star.arrow(z)] = ArrowRole::Source(arrow);
        }
        for &(v, img) in &far_images {
            vertex_map[star.vertex(v)] = Some(img);
        }
        vertex_map[star.vertex(StarVertex::X(1))] = Some(b);

        let case = if inward[0] && inward[1] {
            EmbeddingCase::BothInward
        } else {
            EmbeddingCase::Composable
        };
        match case {
            EmbeddingCase::Composable => {
                let (din, dout) = if inward[0] { (0, 1) } else { (1, 0) };
                let (gamma, gamma_leaf) = shorts[dout];
                let (delta, delta_leaf) = shorts[din];
                contracted_star.push(StarArrow::Alpha(1));
                roles[star.arrow(StarArrow::Beta(0))] = ArrowRole::Source(gamma);
                roles[star.arrow(StarArrow::Alpha1Prime)] = ArrowRole::Source(delta);
                vertex_map[star.vertex(StarVertex::Y(0))] = Some(b);
                vertex_map[star.vertex(StarVertex::X(0))] = Some(gamma_leaf);
                vertex_map[star.vertex(StarVertex::Y0Prime)] = Some(delta_leaf);
            }
            EmbeddingCase::BothInward => {
                let (gamma, gamma_leaf) = shorts[0];
                let (delta, delta_leaf) = shorts[1];
                roles[star.arrow(StarArrow::Beta(0))] = ArrowRole::Padding;
                roles[star.arrow(StarArrow::Alpha(1))] = ArrowRole::Source(gamma);
                roles[star.arrow(StarArrow::Alpha1Prime)] = ArrowRole::Source(delta);
                vertex_map[star.vertex(StarVertex::Y(0))] = Some(gamma_leaf);
                vertex_map[star.vertex(StarVertex::Y0Prime)] = Some(delta_leaf);
            }
        }
        let mut contracted: Vec<usize> = contracted_star.iter().map(|&a| star.arrow(a)).collect();
        contracted.sort_unstable();
        for &c in &contracted {
            roles[c] = ArrowRole::Contracted;
        }
        let dims = DimVector(
            vertex_map
                .iter()
                .map(|img| img.map_or(0, |z| d[z]))
                .collect(),
        );

        let emb = StarEmbedding {
            source: q,
            normalized,
            opposite,
            star,
            case,
            contracted,
            roles,
            vertex_map,
            source_dims: d,
            dims,
        };
        debug_assert!(emb.is_consistent());
        Ok(emb)
    }

    /// Every source arrow is the image of exactly one star arrow with
    /// matching endpoints, and contracted arrows join vertices with the same
    /// image.
    fn is_consistent(&self) -> bool {
        let sq = self.star.quiver();
        let mut seen = vec![0; self.normalized.n_arrows()];
        for (k, a) in sq.arrows().iter().enumerate() {
            let (t, h) = (self.vertex_map[a.tail], self.vertex_map[a.head]);
            let ok = match self.roles[k] {
                ArrowRole::Contracted => t.is_some() && t == h,
                ArrowRole::Source(s) => {
                    seen[s] += 1;
                    let sa = &self.normalized.arrows()[s];
                    t == Some(sa.tail) && h == Some(sa.head)
                }
                ArrowRole::Padding => h.is_none(),
            };
            if !ok {
                return false;
            }
        }
        seen.iter().all(|&c| c == 1)
    }

    pub fn source(&self) -> &Arc<Quiver> {
        &self.source
    }

    /// The source quiver after orientation normalization.
    pub fn normalized(&self) -> &Arc<Quiver> {
        &self.normalized
    }

    pub fn opposite(&self) -> bool {
        self.opposite
    }

    pub fn star(&self) -> &StarQuiver {
        &self.star
    }

    pub fn n(&self) -> usize {
        self.star.n()
    }

    pub fn case(&self) -> EmbeddingCase {
        self.case
    }

    /// Indices (in `Q*(n)`) of the contracted arrows `A`.
    pub fn contracted(&self) -> &[usize] {
        &self.contracted
    }

    pub fn contracted_names(&self) -> Vec<String> {
        self.contracted
            .iter()
            .map(|&k| self.star.quiver().arrows()[k].id.clone())
            .collect()
    }

    pub fn roles(&self) -> &[ArrowRole] {
        &self.roles
    }

    /// Source vertex each star vertex maps to; `None` only for `x0` in the
    /// both-inward case.
    pub fn vertex_map(&self) -> &[Option<usize>] {
        &self.vertex_map
    }

    pub fn source_dims(&self) -> &DimVector {
        &self.source_dims
    }

    /// `d*`.
    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    /// `V*1`: the source matrices over their image arrows, identities over
    /// `A`, and the empty `d*(y0) x 0` matrix over `b0` when it is padding.
    pub fn extend(&self, v: &Representation) -> Result<Representation, StarError> {
        if **v.quiver() != *self.source {
            return Err(StarError::WrongQuiver);
        }
        if v.dims() != &self.source_dims {
            return Err(StarError::DimMismatch {
                expected: self.source_dims.0.clone(),
                got: v.dims().0.clone(),
            });
        }
        let field = v.field();
        let w = if self.opposite {
            v.transpose()
        } else {
            v.clone()
        };
        let sq = self.star.quiver();
        let mats = sq
            .arrows()
            .iter()
            .zip(&self.roles)
            .map(|(a, role)| match role {
                ArrowRole::Contracted => ExactMatrix::identity(field, self.dims[a.tail]),
                ArrowRole::Source(s) => w.mat(*s).clone(),
                ArrowRole::Padding => ExactMatrix::zeros(field, self.dims[a.tail], 0),
            })
            .collect();
        Ok(Representation::new(
            sq.clone(),
            field,
            self.dims.clone(),
            mats,
        )?)
    }

    /// The image of `g` in `GL(d*)`, constant along contracted arrows, so
    /// that `extend(V g) = extend(V) lift_group(g)`.
    pub fn lift_group(&self, g: &GroupElement, field: Field) -> GroupElement {
        let g = if self.opposite {
            g.transpose_inverse()
        } else {
            g.clone()
        };
        let factors = self
            .vertex_map
            .iter()
            .map(|img| match img {
                Some(z) => g.factor(*z).clone(),
                None => ExactMatrix::zeros(field, 0, 0),
            })
            .collect();
        GroupElement::new(factors).expect("factors of a group element are invertible")
    }

    /// Whether `w` lies in the open set where every contracted arrow carries
    /// an invertible matrix.
    pub fn in_open_set(&self, w: &Representation) -> bool {
        self.contracted.iter().all(|&k| w.mat(k).is_invertible())
    }
}

/// Index into `shape.branches` of the branch to lay along the zig-zag, or
/// `None` if no short branch arrow points into the branch vertex.
fn choose_long_branch(q: &Quiver, shape: &TypeDShape) -> Option<usize> {
    let b = shape.branch;
    let inward = |i: usize| !points_outward(q, shape.branches[i][0].0, b);
    if shape.branches[2].len() > 1 {
        return (inward(0) || inward(1)).then_some(2);
    }
    // D4: all three branches are single arrows, sorted by leaf index.
    (0..3)
        .rev()
        .find(|&l| (0..3).filter(|&i| i != l).any(inward))
}

/// Embeds a type D quiver with dimension vector.
pub fn embed_type_d(q: Arc<Quiver>, d: DimVector) -> Result<StarEmbedding, StarError> {
    StarEmbedding::new(q, d)
}

/// `in_X_Q`.
pub fn in_x_q(w: &Representation, e: &StarEmbedding) -> bool {
    e.in_open_set(w)
}
