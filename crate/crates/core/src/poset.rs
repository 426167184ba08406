//! Orbits of a type D representation variety and their degeneration order.

use std::fmt;
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Field;
use crate::quiver::{
    positive_roots, DimVector, IndecomposableCatalog, Multiplicities, Quiver, QuiverError,
    Representation,
};
use crate::star::{StarEmbedding, StarError};
use crate::zigzag::{DnFamily, RankSignature, ZigzagError};

/// Default cap on the number of orbits [`enumerate_labels`] will produce.
pub const DEFAULT_ORBIT_BUDGET: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("more than {budget} orbits (at least {seen} found before stopping)")]
    Budget { budget: usize, seen: usize },
    #[error("representations do not match the embedding")]
    EmbeddingMismatch,
    #[error("orbits {0} and {1} have equal rank signatures")]
    Antisymmetry(String, String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Star(#[from] StarError),
    #[error(transparent)]
    Zigzag(#[from] ZigzagError),
}

/// A multiset of positive roots, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitLabel(Vec<DimVector>);

impl OrbitLabel {
    pub fn new(mut roots: Vec<DimVector>) -> Self {
        roots.sort();
        OrbitLabel(roots)
    }

    pub fn roots(&self) -> &[DimVector] {
        &self.0
    }

    pub fn total(&self, n_vertices: usize) -> DimVector {
        self.0
            .iter()
            .fold(DimVector::zeros(n_vertices), |acc, r| acc.add(r))
    }

    pub fn multiplicities(&self) -> Multiplicities {
        let mut m = Multiplicities::new();
        for r in &self.0 {
            *m.entry(r.clone()).or_default() += 1;
        }
        m
    }

    pub fn from_multiplicities(m: &Multiplicities) -> Self {
        OrbitLabel::new(
            m.iter()
                .flat_map(|(r, &k)| std::iter::repeat_n(r.clone(), k))
                .collect(),
        )
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .multiplicities()
            .iter()
            .map(|(r, &k)| {
                let v: Vec<String> = r.0.iter().map(ToString::to_string).collect();
                let base = v.join("");
                if k == 1 {
                    base
                } else {
                    format!("{base}^{k}")
                }
            })
            .collect();
        write!(f, "{{{}}}", parts.join(" + "))
    }
}

/// All multisets of `roots` summing to `d`, in lexicographic order of the
/// root indices chosen.
pub fn enumerate_labels(
    roots: &[DimVector],
    d: &DimVector,
    budget: usize,
) -> Result<Vec<OrbitLabel>, PosetError> {
    fn go(
        roots: &[DimVector],
        start: usize,
        rest: &DimVector,
        cur: &mut Vec<DimVector>,
        out: &mut Vec<OrbitLabel>,
        budget: usize,
    ) -> Result<(), PosetError> {
        if rest.total() == 0 {
            if out.len() == budget {
                return Err(PosetError::Budget {
                    budget,
                    seen: budget + 1,
                });
            }
            out.push(OrbitLabel::new(cur.clone()));
            return Ok(());
        }
        for i in start..roots.len() {
            if let Some(next) = rest.checked_sub(&roots[i]) {
                cur.push(roots[i].clone());
                go(roots, i, &next, cur, out, budget)?;
                cur.pop();
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(roots, 0, d, &mut Vec::new(), &mut out, budget)?;
    Ok(out)
}

/// One orbit: its label, a representative and the signature of `V*1`.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub label: OrbitLabel,
    pub rep: Representation,
    pub signature: RankSignature,
}

/// Everything needed to enumerate and compare orbits of `rep_Q(d)`.
#[derive(Clone, Debug)]
pub struct OrbitSpace {
    embedding: StarEmbedding,
    family: DnFamily,
    catalog: IndecomposableCatalog,
}

impl OrbitSpace {
    pub fn new(q: Arc<Quiver>, d: DimVector, field: Field, seed: u64) -> Result<Self, PosetError> {
        let embedding = StarEmbedding::new(q.clone(), d)?;
        let family = DnFamily::new(embedding.n())?;
        let catalog = IndecomposableCatalog::new(q, field, seed)?;
        Ok(OrbitSpace {
            embedding,
            family,
            catalog,
        })
    }

    pub fn embedding(&self) -> &StarEmbedding {
        &self.embedding
    }

    pub fn family(&self) -> &DnFamily {
        &self.family
    }

    pub fn catalog(&self) -> &IndecomposableCatalog {
        &self.catalog
    }

    pub fn dims(&self) -> &DimVector {
        self.embedding.source_dims()
    }

    /// The rank signature of `V*1`.
    pub fn signature(&self, v: &Representation) -> Result<RankSignature, PosetError> {
        Ok(self.family.signature(&self.embedding.extend(v)?)?)
    }

    pub fn labels(&self, budget: usize) -> Result<Vec<OrbitLabel>, PosetError> {
        enumerate_labels(self.catalog.roots(), self.dims(), budget)
    }

    pub fn representative(&self, label: &OrbitLabel) -> Result<Representation, PosetError> {
        Ok(self.catalog.representative(&label.multiplicities())?)
    }

    /// Every orbit with its representative and signature.
    pub fn orbits(&self, budget: usize) -> Result<Vec<Orbit>, PosetError> {
        self.labels(budget)?
            .into_par_iter()
            .map(|label| {
                let rep = self.representative(&label)?;
                let signature = self.signature(&rep)?;
                Ok(Orbit {
                    label,
                    rep,
                    signature,
                })
            })
            .collect()
    }

    pub fn same_orbit(&self, v: &Representation, w: &Representation) -> Result<bool, PosetError> {
        Ok(self.signature(v)? == self.signature(w)?)
    }

    /// Whether the orbit of `w` lies in the closure of the orbit of `v`.
    pub fn degenerates_to(
        &self,
        v: &Representation,
        w: &Representation,
    ) -> Result<bool, PosetError> {
        Ok(self.signature(w)?.leq(&self.signature(v)?)?)
    }

    /// The Hom-dimension criterion for the same relation.
    pub fn bongartz_leq(&self, v: &Representation, w: &Representation) -> Result<bool, PosetError> {
        bongartz_leq(&self.catalog, v, w)
    }

    /// The poset of all orbits ordered by signatures.
    pub fn hasse(&self, budget: usize) -> Result<DegenerationPoset, PosetError> {
        let orbits = self.orbits(budget)?;
        check_antisymmetry(&orbits)?;
        let leq = |i: usize, j: usize| {
            orbits[j]
                .signature
                .leq(&orbits[i].signature)
                .expect("same shape")
        };
        let edges = transitive_reduction(orbits.len(), leq);
        Ok(DegenerationPoset {
            nodes: orbits
                .into_iter()
                .map(|o| PosetNode {
                    label: o.label,
                    signature: Some(o.signature),
                    rep: o.rep,
                })
                .collect(),
            edges,
        })
    }

    /// The same poset computed from `dim Hom(X, -)` alone.
    pub fn hasse_by_oracle(&self, budget: usize) -> Result<DegenerationPoset, PosetError> {
        oracle_poset(&self.catalog, self.dims(), budget)
    }
}

fn check_antisymmetry(orbits: &[Orbit]) -> Result<(), PosetError> {
    let mut seen = std::collections::HashMap::new();
    for o in orbits {
        if let Some(prev) = seen.insert(&o.signature, &o.label) {
            return Err(PosetError::Antisymmetry(
                prev.to_string(),
                o.label.to_string(),
            ));
        }
    }
    Ok(())
}

/// `dim Hom(X, v) <= dim Hom(X, w)` for every indecomposable `X`.
pub fn bongartz_leq(
    cat: &IndecomposableCatalog,
    v: &Representation,
    w: &Representation,
) -> Result<bool, PosetError> {
    if v.dims() != w.dims() {
        return Err(PosetError::EmbeddingMismatch);
    }
    let pv = cat.hom_profile_into(v)?;
    let pw = cat.hom_profile_into(w)?;
    Ok(pv.iter().zip(&pw).all(|(a, b)| a <= b))
}

/// The degeneration poset of any Dynkin quiver by the Hom criterion.
pub fn oracle_poset(
    cat: &IndecomposableCatalog,
    d: &DimVector,
    budget: usize,
) -> Result<DegenerationPoset, PosetError> {
    let labels = enumerate_labels(cat.roots(), d, budget)?;
    let data: Vec<(OrbitLabel, Representation, Vec<usize>)> = labels
        .into_par_iter()
        .map(|label| {
            let rep = cat.representative(&label.multiplicities())?;
            let prof = cat.hom_profile_into(&rep)?;
            Ok((label, rep, prof))
        })
        .collect::<Result<_, PosetError>>()?;
    let leq = |i: usize, j: usize| data[i].2.iter().zip(&data[j].2).all(|(a, b)| a <= b);
    let edges = transitive_reduction(data.len(), leq);
    Ok(DegenerationPoset {
        nodes: data
            .into_iter()
            .map(|(label, rep, _)| PosetNode {
                label,
                signature: None,
                rep,
            })
            .collect(),
        edges,
    })
}

/// Covering pairs `(i, j)` with `i > j` of the partial order where
/// `above(i, j)` means `j` lies below `i`.
pub fn transitive_reduction(
    n: usize,
    above: impl Fn(usize, usize) -> bool + Sync,
) -> Vec<(usize, usize)> {
    let rel: Vec<Vec<bool>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| i != j && above(i, j)).collect())
        .collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rel[i][j] && !(0..n).any(|k| rel[i][k] && rel[k][j]) {
                edges.push((i, j));
            }
        }
    }
    edges
}

#[derive(Clone, Debug)]
pub struct PosetNode {
    pub label: OrbitLabel,
    pub signature: Option<RankSignature>,
    pub rep: Representation,
}

/// Orbits with the covering relation of closure inclusion. An edge
/// `(i, j)` means orbit `j` is maximal among the orbits in the closure of
/// orbit `i`.
#[derive(Clone, Debug)]
pub struct DegenerationPoset {
    pub nodes: Vec<PosetNode>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct NodeJson<'a> {
    id: usize,
    label: &'a [DimVector],
    name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    signature: Option<&'a RankSignature>,
}

#[derive(Serialize)]
struct PosetJson<'a> {
    nodes: Vec<NodeJson<'a>>,
    edges: &'a [(usize, usize)],
}

impl DegenerationPoset {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, label: &OrbitLabel) -> Option<usize> {
        self.nodes.iter().position(|n| &n.label == label)
    }

    /// Edges as label pairs, sorted; independent of node order.
    pub fn labelled_edges(&self) -> Vec<(OrbitLabel, OrbitLabel)> {
        let mut out: Vec<_> = self
            .edges
            .iter()
            .map(|&(i, j)| (self.nodes[i].label.clone(), self.nodes[j].label.clone()))
            .collect();
        out.sort();
        out
    }

    /// Nodes with no incoming edge.
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| !self.edges.iter().any(|&(_, b)| b == j))
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        let n = self.len();
        let mut indeg = vec![0usize; n];
        for &(_, j) in &self.edges {
            indeg[j] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(i) = stack.pop() {
            seen += 1;
            for &(a, b) in &self.edges {
                if a == i {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        stack.push(b);
                    }
                }
            }
        }
        seen == n
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = PosetJson {
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(id, n)| NodeJson {
                    id,
                    label: n.label.roots(),
                    name: n.label.to_string(),
                    signature: n.signature.as_ref(),
                })
                .collect(),
            edges: &self.edges,
        };
        serde_json::to_value(doc).expect("poset serializes")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph degenerations {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", n.label);
        }
        for &(i, j) in &self.edges {
            let _ = writeln!(out, "  n{i} -> n{j};");
        }
        out.push_str("}\n");
        out
    }
}

/// Number of root multisets summing to `d`, by dynamic programming over
/// roots; an enumerator independent of [`enumerate_labels`].
pub fn count_orbits(q: &Quiver, d: &DimVector) -> Result<u64, PosetError> {
    let roots = positive_roots(q)?;
    let dims = d.0.clone();
    let strides: Vec<usize> = {
        let mut s = vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * (dims[i + 1] + 1);
        }
        s
    };
    let size: usize = dims.iter().map(|x| x + 1).product();
    let index = |v: &[usize]| v.iter().zip(&strides).map(|(a, s)| a * s).sum::<usize>();
    let decode = |mut k: usize| -> Vec<usize> {
        strides
            .iter()
            .map(|s| {
                let x = k / s;
                k %= s;
                x
            })
            .collect()
    };
    let mut ways = vec![0u64; size];
    ways[0] = 1;
    for r in &roots {
        if !r.fits_in(d) {
            continue;
        }
        // Unbounded knapsack: iterate targets in increasing index order.
        for k in 0..size {
            let v = decode(k);
            if v.iter().zip(&r.0).all(|(a, b)| a >= b) {
                let prev: Vec<usize> = v.iter().zip(&r.0).map(|(a, b)| a - b).collect();
                ways[k] += ways[index(&prev)];
            }
        }
    }
    Ok(ways[index(&dims)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::GroupElement;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

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

    fn d5() -> Arc<Quiver> {
        Arc::new(
            Quiver::new(
                ["1", "2", "3", "4", "5"],
                [
                    ("a", "1", "3"),
                    ("b", "2", "3"),
                    ("c", "3", "4"),
                    ("d", "5", "4"),
                ],
            )
            .unwrap(),
        )
    }

    fn dv(v: &[usize]) -> DimVector {
        DimVector(v.to_vec())
    }

    #[test]
    fn label_enumeration() {
        let a2 = Quiver::new(["1", "2"], [("a", "1", "2")]).unwrap();
        let roots = positive_roots(&a2).unwrap();
        let labels = enumerate_labels(&roots, &dv(&[1, 1]), 10).unwrap();
        assert_eq!(labels.len(), 2);
        assert!(labels.contains(&OrbitLabel::new(vec![dv(&[1, 1])])));
        assert!(labels.contains(&OrbitLabel::new(vec![dv(&[1, 0]), dv(&[0, 1])])));

        let q = d4();
        let roots = positive_roots(&q).unwrap();
        assert_eq!(
            enumerate_labels(&roots, &dv(&[0, 1, 0, 0]), 10)
                .unwrap()
                .len(),
            1
        );
        for d in [[1, 1, 2, 1], [1, 2, 1, 1], [2, 2, 2, 2], [1, 3, 1, 2]] {
            let d = dv(&d);
            let labels = enumerate_labels(&roots, &d, DEFAULT_ORBIT_BUDGET).unwrap();
            assert_eq!(labels.len() as u64, count_orbits(&q, &d).unwrap());
            assert!(labels.iter().all(|l| l.total(4) == d));
        }
        assert!(matches!(
            enumerate_labels(&roots, &dv(&[2, 2, 2, 2]), 3),
            Err(PosetError::Budget { budget: 3, .. })
        ));
    }

    #[test]
    fn label_display_and_round_trip() {
        let l = OrbitLabel::new(vec![
            dv(&[0, 1, 0, 0]),
            dv(&[1, 1, 0, 0]),
            dv(&[0, 1, 0, 0]),
        ]);
        assert_eq!(l.to_string(), "{0100^2 + 1100}");
        assert_eq!(OrbitLabel::from_multiplicities(&l.multiplicities()), l);
        let json = serde_json::to_string(&l).unwrap();
        assert_eq!(serde_json::from_str::<OrbitLabel>(&json).unwrap(), l);
    }

    #[test]
    fn order_basics() {
        let q = d4();
        let d = dv(&[1, 2, 1, 1]);
        let space = OrbitSpace::new(q.clone(), d.clone(), Q, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let generic = Representation::random(q.clone(), Q, d.clone(), 3, &mut rng).unwrap();
        let zero = Representation::zero(q.clone(), Q, d.clone()).unwrap();
        let g = GroupElement::random(Q, &d, 3, &mut rng);
        assert!(space
            .same_orbit(&generic, &generic.act(&g).unwrap())
            .unwrap());
        assert!(!space.same_orbit(&generic, &zero).unwrap());
        assert!(space.degenerates_to(&generic, &zero).unwrap());
        assert!(!space.degenerates_to(&zero, &generic).unwrap());
        assert!(space.degenerates_to(&generic, &generic).unwrap());
        assert!(space.bongartz_leq(&generic, &zero).unwrap());
        assert!(!space.bongartz_leq(&zero, &generic).unwrap());
        let other = Representation::zero(q, Q, dv(&[1, 1, 1, 1])).unwrap();
        assert!(space.signature(&other).is_err());
    }

    #[test]
    fn a2_pattern_inside_d4() {
        // Only the arrow a: 1 -> 2 carries dimension.
        let q = d4();
        let d = dv(&[1, 1, 0, 0]);
        let space = OrbitSpace::new(q.clone(), d.clone(), Q, 3).unwrap();
        let one = crate::linalg::ExactMatrix::from_i64_rows(Q, &[[1]]);
        let mats = |m: crate::linalg::ExactMatrix| {
            vec![
                m,
                crate::linalg::ExactMatrix::zeros(Q, 0, 1),
                crate::linalg::ExactMatrix::zeros(Q, 1, 0),
            ]
        };
        let v = Representation::new(q.clone(), Q, d.clone(), mats(one)).unwrap();
        let w = Representation::zero(q, Q, d).unwrap();
        assert!(space.degenerates_to(&v, &w).unwrap());
        assert!(space.bongartz_leq(&v, &w).unwrap());
        let sv = space.signature(&v).unwrap();
        let sw = space.signature(&w).unwrap();
        assert!(sw.leq(&sv).unwrap() && sw != sv);
        let poset = space.hasse(10).unwrap();
        assert_eq!(poset.len(), 2);
        assert_eq!(poset.edges.len(), 1);
        let (top, bottom) = poset.edges[0];
        assert_eq!(
            poset.nodes[top].label,
            OrbitLabel::new(vec![dv(&[1, 1, 0, 0])])
        );
        assert_eq!(poset.nodes[bottom].label.roots().len(), 2);
    }

    #[test]
    fn single_orbit_poset() {
        let space = OrbitSpace::new(d4(), dv(&[0, 1, 0, 0]), Q, 1).unwrap();
        let p = space.hasse(10).unwrap();
        assert_eq!((p.len(), p.edges.len()), (1, 0));
        assert!(p.to_dot().contains("n0 [label=\"{0100}\"]"));
    }

    #[test]
    fn signature_poset_matches_oracle() {
        for (q, d) in [
            (d4(), dv(&[1, 1, 2, 1])),
            (d4(), dv(&[1, 2, 1, 1])),
            (d5(), dv(&[1, 1, 2, 1, 1])),
        ] {
            let space = OrbitSpace::new(q.clone(), d.clone(), Q, 5).unwrap();
            let a = space.hasse(1000).unwrap();
            let b = space.hasse_by_oracle(1000).unwrap();
            assert_eq!(a.len() as u64, count_orbits(&q, &d).unwrap());
            assert_eq!(a.labelled_edges(), b.labelled_edges());
            assert!(a.is_acyclic());
            let top = a.maximal();
            assert_eq!(top.len(), 1);
            // The unique maximum is the generic orbit: random points lie
            // below it and most land on it.
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            let top_sig = a.nodes[top[0]].signature.as_ref().unwrap();
            let mut hits = 0;
            for _ in 0..20 {
                let v = Representation::random(q.clone(), Q, d.clone(), 5, &mut rng).unwrap();
                let s = space.signature(&v).unwrap();
                assert!(s.leq(top_sig).unwrap());
                hits += usize::from(&s == top_sig);
            }
            assert!(hits > 10);
            let json = a.to_json();
            assert_eq!(json["nodes"].as_array().unwrap().len(), a.len());
            assert_eq!(json["edges"].as_array().unwrap().len(), a.edges.len());
        }
    }

    #[test]
    fn multiplicities_agree_with_signatures() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (q, d) in [(d4(), dv(&[1, 2, 1, 1])), (d5(), dv(&[1, 1, 2, 1, 1]))] {
            let space = OrbitSpace::new(q.clone(), d.clone(), Q, 2).unwrap();
            let orbits = space.orbits(1000).unwrap();
            for _ in 0..40 {
                // Random points of chosen orbits, moved by random group elements.
                let pick = |rng: &mut ChaCha8Rng| {
                    let o = &orbits[rng.gen_range(0..orbits.len())];
                    let g = GroupElement::random(Q, &d, 3, rng);
                    o.rep.act(&g).unwrap()
                };
                let v = pick(&mut rng);
                let w = pick(&mut rng);
                let cat = space.catalog();
                let same = cat.multiplicities(&v).unwrap() == cat.multiplicities(&w).unwrap();
                assert_eq!(space.same_orbit(&v, &w).unwrap(), same);
            }
        }
    }

    #[test]
    fn transitive_reduction_of_a_chain_and_diamond() {
        let chain = transitive_reduction(4, |i, j| i > j);
        assert_eq!(chain, vec![(1, 0), (2, 1), (3, 2)]);
        // 3 above 1 and 2, both above 0.
        let diamond = transitive_reduction(4, |i, j| {
            (i == 3 && j < 3) || ((i == 1 || i == 2) && j == 0)
        });
        assert_eq!(diamond, vec![(1, 0), (2, 0), (3, 1), (3, 2)]);
    }
}
