use super::{Arrow, DimVector, Quiver, QuiverError};

/// The data of a contraction `Q -> Q^A`: the contracted arrows and the
/// surjection `nu` on vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContractionPlan {
    arrows: Vec<usize>,
    vertex_map: Vec<usize>,
    target_vertices: usize,
}

impl ContractionPlan {
    /// Contracted arrow indices, ascending.
    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    /// `nu(z)` for each vertex `z` of the source quiver.
    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn image(&self, z: usize) -> usize {
        self.vertex_map[z]
    }

    pub fn target_vertices(&self) -> usize {
        self.target_vertices
    }

    pub fn contains(&self, arrow: usize) -> bool {
        self.arrows.binary_search(&arrow).is_ok()
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Contracts every arrow of `set` at once.
///
/// The subquiver spanned by `set` must be a forest; a cycle (including a
/// loop or a pair of parallel arrows) is rejected. A vertex of `Q^A` is
/// named by joining its members with `+` and placed at the position of its
/// first member. Surviving arrows keep their ids and relative order, and may
/// become loops.
pub fn contract(q: &Quiver, set: &[usize]) -> Result<(Quiver, ContractionPlan), QuiverError> {
    let n = q.n_vertices();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut arrows: Vec<usize> = set.to_vec();
    arrows.sort_unstable();
    arrows.dedup();
    for &k in &arrows {
        let a = q
            .arrows()
            .get(k)
            .ok_or_else(|| QuiverError::UnknownArrow(format!("#{k}")))?;
        let (rt, rh) = (find(&mut parent, a.tail), find(&mut parent, a.head));
        if rt == rh {
            return Err(QuiverError::ContractionCycle(a.id.clone()));
        }
        // Keep the smaller index as root so classes are ordered by first member.
        let (lo, hi) = if rt < rh { (rt, rh) } else { (rh, rt) };
        parent[hi] = lo;
    }

    let mut class_of_root = vec![usize::MAX; n];
    let mut names: Vec<Vec<&str>> = Vec::new();
    let mut vertex_map = Vec::with_capacity(n);
    for z in 0..n {
        let r = find(&mut parent, z);
        if class_of_root[r] == usize::MAX {
            class_of_root[r] = names.len();
            names.push(Vec::new());
        }
        vertex_map.push(class_of_root[r]);
        names[class_of_root[r]].push(&q.vertices()[z]);
    }

    let new_arrows = q
        .arrows()
        .iter()
        .enumerate()
        .filter(|(k, _)| arrows.binary_search(k).is_err())
        .map(|(_, a)| Arrow {
            id: a.id.clone(),
            tail: vertex_map[a.tail],
            head: vertex_map[a.head],
        })
        .collect();
    let vertices: Vec<String> = names.iter().map(|m| m.join("+")).collect();
    let target_vertices = vertices.len();
    let contracted = Quiver::from_parts(vertices, new_arrows)?;
    Ok((
        contracted,
        ContractionPlan {
            arrows,
            vertex_map,
            target_vertices,
        },
    ))
}

/// Contracts the arrows named in `ids`.
pub fn contract_by_id(q: &Quiver, ids: &[&str]) -> Result<(Quiver, ContractionPlan), QuiverError> {
    let set = ids
        .iter()
        .map(|id| q.require_arrow(id))
        .collect::<Result<Vec<_>, _>>()?;
    contract(q, &set)
}

/// Pulls a dimension vector on `Q^A` back to `Q`: `d^A(z) = d(nu(z))`.
pub fn lift_dim(d: &DimVector, plan: &ContractionPlan) -> Result<DimVector, QuiverError> {
    if d.len() != plan.target_vertices {
        return Err(QuiverError::PlanMismatch(format!(
            "dimension vector has {} entries, contracted quiver has {} vertices",
            d.len(),
            plan.target_vertices
        )));
    }
    Ok(DimVector(plan.vertex_map.iter().map(|&v| d[v]).collect()))
}
