use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{ExactMatrix, Field, FieldScalar};

use super::{hom_dim, positive_roots, tits_form, DimVector, Quiver, QuiverError, Representation};

/// Attempts made by [`sample_indecomposable`] before giving up.
pub const RETRY_BUDGET: usize = 64;

/// Bound on sampled integer entries over `Q`.
const ENTRY_BOUND: i64 = 9;

/// Krull-Schmidt multiplicities keyed by dimension vector of the summand.
pub type Multiplicities = BTreeMap<DimVector, usize>;

/// Samples a brick (`dim End = 1`) of dimension `root`.
///
/// Over a Dynkin quiver a brick of root dimension is the indecomposable of
/// that dimension, and a generic representation of root dimension is one.
/// Entries are uniform in `[-9, 9]` over `Q` or uniform in `GF(p)`; the
/// sequence is fully determined by `seed`.
pub fn sample_indecomposable(
    q: &Arc<Quiver>,
    root: &DimVector,
    field: Field,
    seed: u64,
) -> Result<Representation, QuiverError> {
    if root.len() != q.n_vertices() {
        return Err(QuiverError::DimLength {
            expected: q.n_vertices(),
            got: root.len(),
        });
    }
    let x: Vec<i64> = root.0.iter().map(|&v| v as i64).collect();
    if root.total() == 0 || tits_form(q, &x) != 1 {
        return Err(QuiverError::NotRoot(root.0.clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRY_BUDGET {
        let v = Representation::random(q.clone(), field, root.clone(), ENTRY_BOUND, &mut rng)?;
        if hom_dim(&v, &v)? == 1 {
            return Ok(v);
        }
    }
    Err(QuiverError::RetryBudget {
        root: root.0.clone(),
        seed,
        attempts: RETRY_BUDGET,
    })
}

/// One sampled indecomposable per positive root, with the Hom matrix
/// between them for decomposing arbitrary representations.
#[derive(Clone, Debug)]
pub struct IndecomposableCatalog {
    quiver: Arc<Quiver>,
    field: Field,
    roots: Vec<DimVector>,
    reps: Vec<Representation>,
    /// `hom[y][x] = dim Hom(X_y, X_x)`.
    hom: Vec<Vec<usize>>,
    hom_inverse: ExactMatrix,
}

fn root_seed(seed: u64, i: usize) -> u64 {
    seed ^ (i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

impl IndecomposableCatalog {
    pub fn new(q: Arc<Quiver>, field: Field, seed: u64) -> Result<Self, QuiverError> {
        let roots = positive_roots(&q)?;
        let reps = roots
            .iter()
            .enumerate()
            .map(|(i, r)| sample_indecomposable(&q, r, field, root_seed(seed, i)))
            .collect::<Result<Vec<_>, _>>()?;
        let hom = reps
            .iter()
            .map(|y| {
                reps.iter()
                    .map(|x| hom_dim(y, x))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let h = ExactMatrix::from_i64_rows_with_cols(
            Field::Rational,
            &hom.iter()
                .map(|r| r.iter().map(|&v| v as i64).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            roots.len(),
        );
        let hom_inverse = h.inverse().ok_or(QuiverError::InconsistentMultiplicities)?;
        Ok(IndecomposableCatalog {
            quiver: q,
            field,
            roots,
            reps,
            hom,
            hom_inverse,
        })
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn roots(&self) -> &[DimVector] {
        &self.roots
    }

    pub fn reps(&self) -> &[Representation] {
        &self.reps
    }

    pub fn hom_matrix(&self) -> &[Vec<usize>] {
        &self.hom
    }

    pub fn index_of(&self, root: &DimVector) -> Option<usize> {
        self.roots.iter().position(|r| r == root)
    }

    /// `dim Hom(X, v)` for every indecomposable `X`, in root order.
    pub fn hom_profile_into(&self, v: &Representation) -> Result<Vec<usize>, QuiverError> {
        self.reps.iter().map(|x| hom_dim(x, v)).collect()
    }

    /// `dim Hom(v, X)` for every indecomposable `X`, in root order.
    pub fn hom_profile_from(&self, v: &Representation) -> Result<Vec<usize>, QuiverError> {
        self.reps.iter().map(|x| hom_dim(v, x)).collect()
    }

    /// Direct sum of catalog indecomposables with the given multiplicities.
    pub fn representative(&self, mult: &Multiplicities) -> Result<Representation, QuiverError> {
        let mut parts = Vec::new();
        for (root, &m) in mult {
            let i = self
                .index_of(root)
                .ok_or_else(|| QuiverError::NotRoot(root.0.clone()))?;
            parts.extend(std::iter::repeat_n(&self.reps[i], m));
        }
        Representation::direct_sum_all(self.quiver.clone(), self.field, parts)
    }

    /// Recovers the indecomposable summands of `v` from `dim Hom(X_y, v)`.
    pub fn multiplicities(&self, v: &Representation) -> Result<Multiplicities, QuiverError> {
        let profile = self.hom_profile_into(v)?;
        let rhs = ExactMatrix::from_i64_rows_with_cols(
            Field::Rational,
            &profile.iter().map(|&h| [h as i64]).collect::<Vec<_>>(),
            1,
        );
        let m = self.hom_inverse.mul(&rhs);
        let mut out = Multiplicities::new();
        for (i, root) in self.roots.iter().enumerate() {
            let FieldScalar::Rational(x) = m.get(i, 0) else {
                unreachable!("catalog solves over Q")
            };
            if !x.is_integer() || x.is_negative() {
                return Err(QuiverError::InconsistentMultiplicities);
            }
            let k = x
                .to_integer()
                .to_usize()
                .ok_or(QuiverError::InconsistentMultiplicities)?;
            if k > 0 {
                out.insert(root.clone(), k);
            }
        }
        let total = out
            .iter()
            .fold(DimVector::zeros(v.dims().len()), |acc, (r, &k)| {
                acc.add(&DimVector(r.0.iter().map(|x| x * k).collect()))
            });
        if &total != v.dims() {
            return Err(QuiverError::InconsistentMultiplicities);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::GroupElement;
    use rand::Rng;

    const Q: Field = Field::Rational;

    fn d4() -> Arc<Quiver> {
        Arc::new(
            Quiver::new(
                ["1", "2", "3", "4"],
                [("a", "1", "2"), ("b", "3", "2"), ("c", "2", "4")],
            )
            .unwrap(),
        )
    }

    #[test]
    fn simple_and_small_roots() {
        let q = d4();
        let s = sample_indecomposable(&q, &DimVector(vec![0, 1, 0, 0]), Q, 1).unwrap();
        assert!(s.is_zero());
        assert_eq!(hom_dim(&s, &s).unwrap(), 1);
        let big = sample_indecomposable(&q, &DimVector(vec![1, 2, 1, 1]), Q, 2).unwrap();
        assert_eq!(hom_dim(&big, &big).unwrap(), 1);
        assert_eq!(big.dims()[0], 1);
        assert!(matches!(
            sample_indecomposable(&q, &DimVector(vec![1, 1, 1, 2]), Q, 3),
            Err(QuiverError::NotRoot(_))
        ));
    }

    #[test]
    fn a2_root() {
        let q = Arc::new(Quiver::new(["1", "2"], [("a", "1", "2")]).unwrap());
        let v = sample_indecomposable(&q, &DimVector(vec![1, 1]), Q, 5).unwrap();
        assert!(!v.mat(0).is_zero());
        assert_eq!(hom_dim(&v, &v).unwrap(), 1);
    }

    #[test]
    fn multiplicities_round_trip() {
        let q = d4();
        let cat = IndecomposableCatalog::new(q.clone(), Q, 9).unwrap();
        assert_eq!(cat.roots().len(), 12);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (i, x) in cat.reps().iter().enumerate() {
            let m = cat.multiplicities(x).unwrap();
            assert_eq!(m, Multiplicities::from([(cat.roots()[i].clone(), 1)]));
            let xx = x.direct_sum(x).unwrap();
            assert_eq!(cat.multiplicities(&xx).unwrap()[&cat.roots()[i]], 2);
        }
        for _ in 0..10 {
            let mut want = Multiplicities::new();
            for _ in 0..3 {
                let r = cat.roots()[rng.gen_range(0..cat.roots().len())].clone();
                *want.entry(r).or_default() += 1;
            }
            let v = cat.representative(&want).unwrap();
            assert_eq!(cat.multiplicities(&v).unwrap(), want);
            let g = GroupElement::random(Q, v.dims(), 3, &mut rng);
            assert_eq!(cat.multiplicities(&v.act(&g).unwrap()).unwrap(), want);
        }
    }

    #[test]
    fn prime_field_catalog() {
        let cat = IndecomposableCatalog::new(d4(), Field::Prime(101), 1).unwrap();
        let want = Multiplicities::from([
            (DimVector(vec![1, 2, 1, 1]), 1),
            (DimVector(vec![0, 1, 0, 0]), 2),
        ]);
        let v = cat.representative(&want).unwrap();
        assert_eq!(cat.multiplicities(&v).unwrap(), want);
    }
}
