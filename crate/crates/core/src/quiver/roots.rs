use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use super::{DimVector, Quiver, QuiverError};

/// Type of a connected Dynkin graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DynkinType {
    A(usize),
    D(usize),
    E(usize),
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A{n}"),
            DynkinType::D(n) => write!(f, "D{n}"),
            DynkinType::E(n) => write!(f, "E{n}"),
        }
    }
}

/// `q(x) = sum x_z^2 - sum_a x_ta x_ha`.
pub fn tits_form(q: &Quiver, x: &[i64]) -> i64 {
    let sq: i64 = x.iter().map(|v| v * v).sum();
    let cross: i64 = q.arrows().iter().map(|a| x[a.tail] * x[a.head]).sum();
    sq - cross
}

/// Neighbours of each vertex in the underlying graph; rejects loops and
/// parallel edges.
fn simple_graph(q: &Quiver) -> Result<Vec<Vec<usize>>, String> {
    let mut adj = vec![Vec::new(); q.n_vertices()];
    for a in q.arrows() {
        if a.tail == a.head {
            return Err(format!("loop `{}`", a.id));
        }
        if adj[a.tail].contains(&a.head) {
            return Err(format!("multiple edges at `{}`", a.id));
        }
        adj[a.tail].push(a.head);
        adj[a.head].push(a.tail);
    }
    Ok(adj)
}

fn components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adj.len()];
    let mut out = Vec::new();
    for s in 0..adj.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            for &y in &adj[comp[i]] {
                if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Walks from `start` away from `from` until a vertex of degree other than 2.
fn branch_from(adj: &[Vec<usize>], from: usize, start: usize) -> Vec<usize> {
    let mut path = vec![start];
    let (mut prev, mut cur) = (from, start);
    while adj[cur].len() == 2 {
        let next = if adj[cur][0] == prev {
            adj[cur][1]
        } else {
            adj[cur][0]
        };
        path.push(next);
        (prev, cur) = (cur, next);
    }
    path
}

/// Dynkin type of each connected component, in order of first vertex.
pub fn classify_dynkin(q: &Quiver) -> Result<Vec<DynkinType>, QuiverError> {
    let adj = simple_graph(q).map_err(QuiverError::NotDynkin)?;
    let mut out = Vec::new();
    for comp in components(&adj) {
        let edges: usize = comp.iter().map(|&z| adj[z].len()).sum::<usize>() / 2;
        if edges + 1 != comp.len() {
            return Err(QuiverError::NotDynkin(
                "underlying graph has a cycle".into(),
            ));
        }
        let branch_points: Vec<usize> = comp
            .iter()
            .copied()
            .filter(|&z| adj[z].len() >= 3)
            .collect();
        match branch_points.as_slice() {
            [] => out.push(DynkinType::A(comp.len())),
            [b] if adj[*b].len() == 3 => {
                let mut lens: Vec<usize> = adj[*b]
                    .iter()
                    .map(|&s| branch_from(&adj, *b, s).len())
                    .collect();
                lens.sort_unstable();
                out.push(match lens.as_slice() {
                    [1, 1, k] => DynkinType::D(k + 3),
                    [1, 2, 2] => DynkinType::E(6),
                    [1, 2, 3] => DynkinType::E(7),
                    [1, 2, 4] => DynkinType::E(8),
                    _ => {
                        return Err(QuiverError::NotDynkin(format!(
                            "branch lengths {lens:?} are not of type A, D or E"
                        )))
                    }
                });
            }
            _ => {
                return Err(QuiverError::NotDynkin(
                    "more than one branch point or a vertex of degree > 3".into(),
                ))
            }
        }
    }
    Ok(out)
}

/// The branch structure of a type D quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDShape {
    /// The unique vertex of degree 3.
    pub branch: usize,
    /// Each branch as `(arrow, vertex)` steps walking away from `branch`,
    /// sorted by length, ties broken by the first vertex index.
    pub branches: [Vec<(usize, usize)>; 3],
}

impl TypeDShape {
    pub fn analyze(q: &Quiver) -> Result<Self, QuiverError> {
        let bad = |m: &str| QuiverError::NotTypeD(m.to_string());
        let adj = simple_graph(q).map_err(QuiverError::NotTypeD)?;
        if components(&adj).len() != 1 {
            return Err(bad("quiver is not connected"));
        }
        if q.n_arrows() + 1 != q.n_vertices() {
            return Err(bad("underlying graph has a cycle"));
        }
        let deg3: Vec<usize> = (0..q.n_vertices()).filter(|&z| adj[z].len() == 3).collect();
        if deg3.len() != 1 || adj.iter().any(|a| a.len() > 3) {
            return Err(bad("need exactly one vertex of degree 3"));
        }
        let b = deg3[0];
        let leaves = adj.iter().filter(|a| a.len() == 1).count();
        if leaves != 3 {
            return Err(bad("need exactly three leaves"));
        }
        let arrow_between = |x: usize, y: usize| {
            q.arrows()
                .iter()
                .position(|a| (a.tail == x && a.head == y) || (a.tail == y && a.head == x))
                .expect("adjacent vertices share an arrow")
        };
        let mut branches: Vec<Vec<(usize, usize)>> = adj[b]
            .iter()
            .map(|&s| {
                let path = branch_from(&adj, b, s);
                let mut prev = b;
                path.into_iter()
                    .map(|z| {
                        let step = (arrow_between(prev, z), z);
                        prev = z;
                        step
                    })
                    .collect()
            })
            .collect();
        branches.sort_by_key(|br| (br.len(), br[0].1));
        if branches[1].len() != 1 {
            return Err(bad("need two branches of length 1"));
        }
        let [s0, s1, long]: [Vec<(usize, usize)>; 3] = branches.try_into().expect("three branches");
        Ok(TypeDShape {
            branch: b,
            branches: [s0, s1, long],
        })
    }

    /// Rank of the Dynkin diagram, i.e. the number of vertices.
    pub fn rank(&self) -> usize {
        1 + self.branches.iter().map(Vec::len).sum::<usize>()
    }
}

/// Symmetrized Euler form `(x, e_i)`.
fn pair_with_simple(q: &Quiver, x: &[i64], i: usize) -> i64 {
    let mut s = 2 * x[i];
    for a in q.arrows() {
        if a.tail == i {
            s -= x[a.head];
        }
        if a.head == i {
            s -= x[a.tail];
        }
    }
    s
}

/// All positive roots of a Dynkin quiver, by reflection closure of the
/// simple roots. Sorted by height, then lexicographically.
pub fn positive_roots(q: &Quiver) -> Result<Vec<DimVector>, QuiverError> {
    classify_dynkin(q)?;
    let n = q.n_vertices();
    let mut found: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        found.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(x) = queue.pop_front() {
        for i in 0..n {
            let c = pair_with_simple(q, &x, i);
            if c == 0 {
                continue;
            }
            let mut y = x.clone();
            y[i] -= c;
            if y.iter().all(|&v| v >= 0) && found.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut roots: Vec<DimVector> = found
        .into_iter()
        .map(|x| DimVector(x.into_iter().map(|v| v as usize).collect()))
        .collect();
    roots.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));
    Ok(roots)
}

/// Positive roots of a type D quiver.
pub fn positive_roots_type_d(q: &Quiver) -> Result<Vec<DimVector>, QuiverError> {
    TypeDShape::analyze(q)?;
    positive_roots(q)
}
