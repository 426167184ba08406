//! Points of `Gr_a(k^n) x Gr_b(k^n)` with a complete flag, as
//! representations of a type D quiver with every arrow pointing at the
//! branch vertex.
//!
//! The quiver has vertices `y` (dim `a`), `x` (dim `b`), `c` (dim `n`) and
//! `v{n-1}, ..., v1` (dim `i` at `v{i}`), with arrows `m: y -> c`,
//! `nn: x -> c` and `f{i}: v{i} -> v{i+1}` (where `v{n}` is `c`).

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::io::{matrix_from_json, matrix_to_json, Entry};
use crate::linalg::{ExactMatrix, Field, LinalgError};
use crate::quiver::{DimVector, Quiver, QuiverError, Representation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrassmannError {
    #[error("n must be at least 2, got {0}")]
    SmallN(usize),
    #[error("{name} is {got:?}, expected {expected:?}")]
    Shape {
        name: &'static str,
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("{0} does not have maximal rank")]
    RankDeficient(&'static str),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// Shape parameters `(a, b, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrassmannShape {
    pub a: usize,
    pub b: usize,
    pub n: usize,
}

impl GrassmannShape {
    pub fn new(a: usize, b: usize, n: usize) -> Result<Self, GrassmannError> {
        if n < 2 {
            return Err(GrassmannError::SmallN(n));
        }
        Ok(GrassmannShape { a, b, n })
    }

    fn chain(i: usize, n: usize) -> String {
        if i == n {
            "c".into()
        } else {
            format!("v{i}")
        }
    }

    pub fn quiver(&self) -> Arc<Quiver> {
        let n = self.n;
        let mut vertices = vec!["y".to_string(), "x".to_string(), "c".to_string()];
        vertices.extend((1..n).rev().map(|i| format!("v{i}")));
        let mut arrows = vec![
            ("m".to_string(), "y".to_string(), "c".to_string()),
            ("nn".to_string(), "x".to_string(), "c".to_string()),
        ];
        arrows.extend((1..n).map(|i| (format!("f{i}"), Self::chain(i, n), Self::chain(i + 1, n))));
        Arc::new(Quiver::new(vertices, arrows).expect("well-formed quiver"))
    }

    pub fn dims(&self) -> DimVector {
        let mut d = vec![self.a, self.b, self.n];
        d.extend((1..self.n).rev());
        DimVector(d)
    }
}

/// A pair of subspaces (row spaces of `m` and `n`) and a complete flag,
/// given by an ordered basis: step `i` is spanned by the first `i` rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassmannPoint {
    pub m: ExactMatrix,
    pub n: ExactMatrix,
    pub flag: ExactMatrix,
}

/// File form of a [`GrassmannPoint`]; the flag defaults to the standard
/// basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub m: Vec<Vec<Entry>>,
    pub n: Vec<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<Vec<Vec<Entry>>>,
}

impl PointSpec {
    pub fn from_point(p: &GrassmannPoint) -> Self {
        PointSpec {
            m: matrix_to_json(&p.m),
            n: matrix_to_json(&p.n),
            flag: Some(matrix_to_json(&p.flag)),
        }
    }

    pub fn to_point(
        &self,
        shape: GrassmannShape,
        field: Field,
    ) -> Result<GrassmannPoint, GrassmannError> {
        let n = shape.n;
        let m = matrix_from_json(&self.m, Some(n), field)?;
        let nn = matrix_from_json(&self.n, Some(n), field)?;
        let flag = match &self.flag {
            Some(f) => matrix_from_json(f, Some(n), field)?,
            None => ExactMatrix::identity(field, n),
        };
        let p = GrassmannPoint { m, n: nn, flag };
        p.check(shape)?;
        Ok(p)
    }
}

impl GrassmannPoint {
    pub fn check(&self, s: GrassmannShape) -> Result<(), GrassmannError> {
        for (name, mat, rows) in [
            ("M", &self.m, s.a),
            ("N", &self.n, s.b),
            ("flag", &self.flag, s.n),
        ] {
            if mat.shape() != (rows, s.n) {
                return Err(GrassmannError::Shape {
                    name,
                    expected: (rows, s.n),
                    got: mat.shape(),
                });
            }
            if mat.rank() != rows.min(s.n) {
                return Err(GrassmannError::RankDeficient(name));
            }
        }
        Ok(())
    }

    /// The representation `(M, N, F_1, ..., F_{n-1})`: `F_{n-1}` is the first
    /// `n-1` basis vectors and `F_i = [I_i | 0]` below it, so the composite
    /// `F_i ... F_{n-1}` spans step `i` of the flag.
    pub fn to_rep(&self, s: GrassmannShape) -> Result<Representation, GrassmannError> {
        self.check(s)?;
        let field = self.m.field();
        let n = s.n;
        let mut mats = vec![self.m.clone(), self.n.clone()];
        for i in 1..n {
            if i == n - 1 {
                mats.push(self.flag.submatrix(0, n - 1, 0, n));
            } else {
                let mut f = ExactMatrix::zeros(field, i, i + 1);
                f.set_block(0, 0, &ExactMatrix::identity(field, i));
                mats.push(f);
            }
        }
        Ok(Representation::new(s.quiver(), field, s.dims(), mats)?)
    }
}
