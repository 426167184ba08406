//! Quivers, representations and the base-change action.

mod contraction;
mod hom;
mod roots;
mod sampling;

pub use contraction::{contract, contract_by_id, lift_dim, ContractionPlan};
pub use hom::{hom_dim, hom_system};
pub use roots::{
    classify_dynkin, positive_roots, positive_roots_type_d, tits_form, DynkinType, TypeDShape,
};
pub use sampling::{sample_indecomposable, IndecomposableCatalog, Multiplicities, RETRY_BUDGET};

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::linalg::{ExactMatrix, Field};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow `{0}`")]
    DuplicateArrow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("dimension vector has {got} entries, quiver has {expected} vertices")]
    DimLength { expected: usize, got: usize },
    #[error("matrix over `{arrow}` is {got:?}, expected {expected:?}")]
    MatrixShape {
        arrow: String,
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("expected {expected} arrow matrices, got {got}")]
    MatrixCount { expected: usize, got: usize },
    #[error("matrix field {got} does not match {expected}")]
    FieldMismatch { expected: Field, got: Field },
    #[error("group factor at `{0}` is not square and invertible")]
    NotInvertible(String),
    #[error("representations live on different quivers")]
    QuiverMismatch,
    #[error("contraction set contains a cycle through `{0}`")]
    ContractionCycle(String),
    #[error("contraction plan does not match: {0}")]
    PlanMismatch(String),
    #[error("not a Dynkin quiver: {0}")]
    NotDynkin(String),
    #[error("not a type D quiver: {0}")]
    NotTypeD(String),
    #[error("{0:?} is not a positive root")]
    NotRoot(Vec<usize>),
    #[error("no brick of dimension {root:?} after {attempts} attempts (seed {seed})")]
    RetryBudget {
        root: Vec<usize>,
        seed: u64,
        attempts: usize,
    },
    #[error("multiplicity system has no nonnegative integer solution")]
    InconsistentMultiplicities,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

/// A finite quiver. Vertices and arrows are addressed by index; names are
/// kept for I/O and diagnostics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Builds a quiver from vertex names and `(id, tail, head)` triples.
    pub fn new<V, A, T, H>(vertices: V, arrows: A) -> Result<Self, QuiverError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        A: IntoIterator<Item = (T, H, H)>,
        T: Into<String>,
        H: AsRef<str>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(QuiverError::DuplicateVertex(v.clone()));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| QuiverError::UnknownVertex(name.to_string()))
        };
        let mut out = Vec::new();
        for (id, t, h) in arrows {
            let id = id.into();
            if out.iter().any(|a: &Arrow| a.id == id) {
                return Err(QuiverError::DuplicateArrow(id));
            }
            out.push(Arrow {
                id,
                tail: lookup(t.as_ref())?,
                head: lookup(h.as_ref())?,
            });
        }
        Ok(Quiver {
            vertices,
            arrows: out,
        })
    }

    /// Builds a quiver from already-resolved arrows.
    pub fn from_parts(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self, QuiverError> {
        let triples: Vec<(String, String, String)> = arrows
            .iter()
            .map(|a| {
                let name = |i: usize| vertices.get(i).cloned().unwrap_or_else(|| format!("#{i}"));
                (a.id.clone(), name(a.tail), name(a.head))
            })
            .collect();
        Quiver::new(vertices.clone(), triples)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    pub fn require_vertex(&self, name: &str) -> Result<usize, QuiverError> {
        self.vertex(name)
            .ok_or_else(|| QuiverError::UnknownVertex(name.to_string()))
    }

    pub fn require_arrow(&self, id: &str) -> Result<usize, QuiverError> {
        self.arrow(id)
            .ok_or_else(|| QuiverError::UnknownArrow(id.to_string()))
    }

    /// Same vertices and arrow ids, every arrow reversed.
    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow {
                    id: a.id.clone(),
                    tail: a.head,
                    head: a.tail,
                })
                .collect(),
        }
    }

    /// Arrow indices incident to each vertex (a loop appears twice).
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n_vertices()];
        for (k, a) in self.arrows.iter().enumerate() {
            inc[a.tail].push(k);
            inc[a.head].push(k);
        }
        inc
    }
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, a) in self.arrows.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(
                f,
                "{}: {}->{}",
                a.id, self.vertices[a.tail], self.vertices[a.head]
            )?;
        }
        write!(f, "}}")
    }
}

/// Dimension vector indexed like the quiver's vertices.
#[derive(
    Clone,
    Debug,
    PartialEq,
    Eq,
    Hash,
    PartialOrd,
    Ord,
    Default,
    serde::Serialize,
    serde::Deserialize,
)]
#[serde(transparent)]
pub struct DimVector(pub Vec<usize>);

impl DimVector {
    pub fn zeros(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut d = Self::zeros(n);
        d.0[i] = 1;
        d
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn add(&self, other: &Self) -> Self {
        DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Entrywise `self <= other`.
    pub fn fits_in(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(DimVector)
    }
}

impl std::ops::Index<usize> for DimVector {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

impl From<Vec<usize>> for DimVector {
    fn from(v: Vec<usize>) -> Self {
        DimVector(v)
    }
}

/// A representation `V = (V_a)`; `V_a` is `d(ta) x d(ha)` and acts on row
/// vectors from the right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    quiver: Arc<Quiver>,
    field: Field,
    dims: DimVector,
    mats: Vec<ExactMatrix>,
}

impl Representation {
    pub fn new(
        quiver: Arc<Quiver>,
        field: Field,
        dims: DimVector,
        mats: Vec<ExactMatrix>,
    ) -> Result<Self, QuiverError> {
        if dims.len() != quiver.n_vertices() {
            return Err(QuiverError::DimLength {
                expected: quiver.n_vertices(),
                got: dims.len(),
            });
        }
        if mats.len() != quiver.n_arrows() {
            return Err(QuiverError::MatrixCount {
                expected: quiver.n_arrows(),
                got: mats.len(),
            });
        }
        for (a, m) in quiver.arrows().iter().zip(&mats) {
            let expected = (dims[a.tail], dims[a.head]);
            if m.shape() != expected {
                return Err(QuiverError::MatrixShape {
                    arrow: a.id.clone(),
                    expected,
                    got: m.shape(),
                });
            }
            if m.field() != field {
                return Err(QuiverError::FieldMismatch {
                    expected: field,
                    got: m.field(),
                });
            }
        }
        Ok(Representation {
            quiver,
            field,
            dims,
            mats,
        })
    }

    pub fn zero(quiver: Arc<Quiver>, field: Field, dims: DimVector) -> Result<Self, QuiverError> {
        let mats = quiver
            .arrows()
            .iter()
            .map(|a| {
                ExactMatrix::zeros(
                    field,
                    dims.0.get(a.tail).copied().unwrap_or(0),
                    dims.0.get(a.head).copied().unwrap_or(0),
                )
            })
            .collect();
        Self::new(quiver, field, dims, mats)
    }

    /// Entries uniform in `[-bound, bound]` (or uniform in `GF(p)`).
    pub fn random<R: Rng + ?Sized>(
        quiver: Arc<Quiver>,
        field: Field,
        dims: DimVector,
        bound: i64,
        rng: &mut R,
    ) -> Result<Self, QuiverError> {
        if dims.len() != quiver.n_vertices() {
            return Err(QuiverError::DimLength {
                expected: quiver.n_vertices(),
                got: dims.len(),
            });
        }
        let mats = quiver
            .arrows()
            .iter()
            .map(|a| ExactMatrix::random(field, dims[a.tail], dims[a.head], bound, rng))
            .collect();
        Self::new(quiver, field, dims, mats)
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn mats(&self) -> &[ExactMatrix] {
        &self.mats
    }

    pub fn mat(&self, arrow: usize) -> &ExactMatrix {
        &self.mats[arrow]
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(ExactMatrix::is_zero)
    }

    fn same_quiver(&self, other: &Self) -> Result<(), QuiverError> {
        if self.quiver != other.quiver {
            return Err(QuiverError::QuiverMismatch);
        }
        if self.field != other.field {
            return Err(QuiverError::FieldMismatch {
                expected: self.field,
                got: other.field,
            });
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, QuiverError> {
        self.same_quiver(other)?;
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| ExactMatrix::block_diag(self.field, &[a, b]))
            .collect();
        Self::new(
            self.quiver.clone(),
            self.field,
            self.dims.add(&other.dims),
            mats,
        )
    }

    pub fn direct_sum_all<'a>(
        quiver: Arc<Quiver>,
        field: Field,
        parts: impl IntoIterator<Item = &'a Representation>,
    ) -> Result<Self, QuiverError> {
        let n = quiver.n_vertices();
        parts
            .into_iter()
            .try_fold(Self::zero(quiver, field, DimVector::zeros(n))?, |acc, p| {
                acc.direct_sum(p)
            })
    }

    /// `V·g = (g_ta^{-1} V_a g_ha)`.
    pub fn act(&self, g: &GroupElement) -> Result<Self, QuiverError> {
        g.check_dims(&self.dims, self.field)?;
        let mats = self
            .quiver
            .arrows()
            .iter()
            .zip(&self.mats)
            .map(|(a, m)| g.inverses[a.tail].mul(m).mul(&g.factors[a.head]))
            .collect();
        Self::new(self.quiver.clone(), self.field, self.dims.clone(), mats)
    }

    /// The transposed representation on the opposite quiver.
    pub fn transpose(&self) -> Self {
        Representation {
            quiver: Arc::new(self.quiver.opposite()),
            field: self.field,
            dims: self.dims.clone(),
            mats: self.mats.iter().map(ExactMatrix::transpose).collect(),
        }
    }
}

/// An element of `GL(d)`, one invertible factor per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    factors: Vec<ExactMatrix>,
    inverses: Vec<ExactMatrix>,
}

impl GroupElement {
    pub fn new(factors: Vec<ExactMatrix>) -> Result<Self, QuiverError> {
        let inverses = factors
            .iter()
            .enumerate()
            .map(|(z, g)| {
                g.inverse()
                    .ok_or_else(|| QuiverError::NotInvertible(format!("#{z}")))
            })
            .collect::<Result<_, _>>()?;
        Ok(GroupElement { factors, inverses })
    }

    pub fn identity(field: Field, dims: &DimVector) -> Self {
        let factors: Vec<ExactMatrix> = dims
            .0
            .iter()
            .map(|&d| ExactMatrix::identity(field, d))
            .collect();
        GroupElement {
            inverses: factors.clone(),
            factors,
        }
    }

    pub fn random<R: Rng + ?Sized>(
        field: Field,
        dims: &DimVector,
        bound: i64,
        rng: &mut R,
    ) -> Self {
        let factors = dims
            .0
            .iter()
            .map(|&d| ExactMatrix::random_invertible(field, d, bound, rng))
            .collect();
        Self::new(factors).expect("sampled factors are invertible")
    }

    pub fn factors(&self) -> &[ExactMatrix] {
        &self.factors
    }

    pub fn factor(&self, z: usize) -> &ExactMatrix {
        &self.factors[z]
    }

    pub fn inverse(&self) -> Self {
        GroupElement {
            factors: self.inverses.clone(),
            inverses: self.factors.clone(),
        }
    }

    /// The element `(g_z^T)^{-1}` matching [`Representation::transpose`].
    pub fn transpose_inverse(&self) -> Self {
        GroupElement {
            factors: self.inverses.iter().map(ExactMatrix::transpose).collect(),
            inverses: self.factors.iter().map(ExactMatrix::transpose).collect(),
        }
    }

    fn check_dims(&self, dims: &DimVector, field: Field) -> Result<(), QuiverError> {
        if self.factors.len() != dims.len() {
            return Err(QuiverError::DimLength {
                expected: dims.len(),
                got: self.factors.len(),
            });
        }
        for (z, (g, &d)) in self.factors.iter().zip(&dims.0).enumerate() {
            if g.shape() != (d, d) {
                return Err(QuiverError::MatrixShape {
                    arrow: format!("vertex #{z}"),
                    expected: (d, d),
                    got: g.shape(),
                });
            }
            if g.field() != field {
                return Err(QuiverError::FieldMismatch {
                    expected: field,
                    got: g.field(),
                });
            }
        }
        Ok(())
    }
}
