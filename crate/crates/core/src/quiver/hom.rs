use crate::linalg::ExactMatrix;

use super::{QuiverError, Representation};

/// Coefficient matrix of the linear system cut out by `Hom(V, W)`.
///
/// Unknowns are the entries of `phi_z` (a `dV(z) x dW(z)` block per vertex,
/// row-major, vertices in order); each arrow contributes the equations
/// `V_a phi_ha - phi_ta W_a = 0`.
pub fn hom_system(v: &Representation, w: &Representation) -> Result<ExactMatrix, QuiverError> {
    v.same_quiver(w)?;
    let q = v.quiver();
    let (dv, dw) = (v.dims(), w.dims());
    let mut offset = Vec::with_capacity(q.n_vertices() + 1);
    offset.push(0);
    for z in 0..q.n_vertices() {
        offset.push(offset[z] + dv[z] * dw[z]);
    }
    let unknowns = offset[q.n_vertices()];
    let equations: usize = q.arrows().iter().map(|a| dv[a.tail] * dw[a.head]).sum();
    let mut sys = ExactMatrix::zeros(v.field(), equations, unknowns);

    let mut row = 0;
    for (k, a) in q.arrows().iter().enumerate() {
        let (t, h) = (a.tail, a.head);
        let (va, wa) = (v.mat(k), w.mat(k));
        for i in 0..dv[t] {
            for j in 0..dw[h] {
                for m in 0..dv[h] {
                    let c = va.get(i, m);
                    if !c.is_zero() {
                        sys.add_at(row, offset[h] + m * dw[h] + j, &c);
                    }
                }
                for l in 0..dw[t] {
                    let c = wa.get(l, j);
                    if !c.is_zero() {
                        sys.add_at(row, offset[t] + i * dw[t] + l, &c.neg());
                    }
                }
                row += 1;
            }
        }
    }
    Ok(sys)
}

/// `dim Hom(V, W)`.
pub fn hom_dim(v: &Representation, w: &Representation) -> Result<usize, QuiverError> {
    Ok(hom_system(v, w)?.nullity())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::linalg::Field;
    use crate::quiver::{DimVector, GroupElement, Quiver};

    const Q: Field = Field::Rational;

    fn a2_rep(x: i64) -> Representation {
        let q = Arc::new(Quiver::new(["1", "2"], [("a", "1", "2")]).unwrap());
        Representation::new(
            q,
            Q,
            DimVector(vec![1, 1]),
            vec![ExactMatrix::from_i64_rows(Q, &[[x]])],
        )
        .unwrap()
    }

    /// Brute-force oracle: `dim Hom` as the dimension of the set of tuples
    /// `phi` with `V_a phi_ha = phi_ta W_a`, by enumerating the kernel of the
    /// map `phi -> (V_a phi_ha - phi_ta W_a)` column by column on basis
    /// tuples, computed with plain matrix products.
    fn hom_dim_oracle(v: &Representation, w: &Representation) -> usize {
        let q = v.quiver();
        let n = q.n_vertices();
        let (dv, dw) = (v.dims(), w.dims());
        let mut images: Vec<Vec<ExactMatrix>> = Vec::new();
        for z in 0..n {
            for r in 0..dv[z] {
                for c in 0..dw[z] {
                    let phi: Vec<ExactMatrix> = (0..n)
                        .map(|y| {
                            let mut m = ExactMatrix::zeros(Q, dv[y], dw[y]);
                            if y == z {
                                m.set_i64(r, c, 1);
                            }
                            m
                        })
                        .collect();
                    images.push(
                        q.arrows()
                            .iter()
                            .enumerate()
                            .map(|(k, a)| {
                                v.mat(k).mul(&phi[a.head]).sub(&phi[a.tail].mul(w.mat(k)))
                            })
                            .collect(),
                    );
                }
            }
        }
        // Flatten each image and take the rank of the resulting matrix.
        let flat: Vec<Vec<i64>> = images
            .iter()
            .map(|img| {
                img.iter()
                    .flat_map(|m| m.entries())
                    .map(|e| e.to_i64().expect("integral"))
                    .collect()
            })
            .collect();
        let cols = flat.first().map_or(0, Vec::len);
        let m = ExactMatrix::from_i64_rows_with_cols(Q, &flat, cols);
        images.len() - m.rank()
    }

    #[test]
    fn a2_examples() {
        assert_eq!(hom_dim(&a2_rep(1), &a2_rep(0)).unwrap(), 1);
        assert_eq!(hom_dim(&a2_rep(0), &a2_rep(1)).unwrap(), 1);
        assert_eq!(hom_dim(&a2_rep(1), &a2_rep(1)).unwrap(), 1);
        assert_eq!(hom_dim(&a2_rep(0), &a2_rep(0)).unwrap(), 2);
    }

    #[test]
    fn arrowless_quiver_is_unconstrained() {
        let q = Arc::new(Quiver::new(["1", "2"], Vec::<(&str, &str, &str)>::new()).unwrap());
        let v = Representation::zero(q.clone(), Q, DimVector(vec![2, 3])).unwrap();
        let w = Representation::zero(q, Q, DimVector(vec![4, 1])).unwrap();
        assert_eq!(hom_dim(&v, &w).unwrap(), 8 + 3);
    }

    fn d4_like() -> Arc<Quiver> {
        Arc::new(
            Quiver::new(
                ["1", "2", "3", "4"],
                [
                    ("a", "1", "3"),
                    ("b", "3", "2"),
                    ("c", "4", "3"),
                    ("l", "2", "2"),
                ],
            )
            .unwrap(),
        )
    }

    #[test]
    fn matches_oracle_additivity_and_invariance() {
        let q = d4_like();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let d1 = DimVector(
                (0..4)
                    .map(|_| rand::Rng::gen_range(&mut rng, 0..3))
                    .collect(),
            );
            let d2 = DimVector(
                (0..4)
                    .map(|_| rand::Rng::gen_range(&mut rng, 0..3))
                    .collect(),
            );
            let d3 = DimVector(
                (0..4)
                    .map(|_| rand::Rng::gen_range(&mut rng, 0..3))
                    .collect(),
            );
            let v = Representation::random(q.clone(), Q, d1.clone(), 2, &mut rng).unwrap();
            let w1 = Representation::random(q.clone(), Q, d2.clone(), 2, &mut rng).unwrap();
            let w2 = Representation::random(q.clone(), Q, d3, 2, &mut rng).unwrap();
            let h = hom_dim(&v, &w1).unwrap();
            assert_eq!(h, hom_dim_oracle(&v, &w1));
            assert_eq!(
                hom_dim(&v, &w1.direct_sum(&w2).unwrap()).unwrap(),
                h + hom_dim(&v, &w2).unwrap()
            );
            let g = GroupElement::random(Q, &d1, 3, &mut rng);
            let k = GroupElement::random(Q, &d2, 3, &mut rng);
            assert_eq!(
                hom_dim(&v.act(&g).unwrap(), &w1.act(&k).unwrap()).unwrap(),
                h
            );
            assert_eq!(hom_dim(&w1.transpose(), &v.transpose()).unwrap(), h);
            if !v.dims().is_empty() && v.dims().total() > 0 {
                assert!(hom_dim(&v, &v).unwrap() >= 1);
            }
        }
    }
}
