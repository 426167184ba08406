use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::{ExactMatrix, LinalgError};

/// Ordered block labels with widths, annotating the rows or columns of a
/// block matrix.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockLabels {
    labels: Vec<(String, usize)>,
}

impl BlockLabels {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, usize)>) -> Self {
        BlockLabels {
            labels: pairs.into_iter().map(|(l, w)| (l.into(), w)).collect(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, width: usize) {
        self.labels.push((label.into(), width));
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn total(&self) -> usize {
        self.labels.iter().map(|(_, w)| w).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.labels.iter().map(|(l, w)| (l.as_str(), *w))
    }

    pub fn names(&self) -> Vec<&str> {
        self.labels.iter().map(|(l, _)| l.as_str()).collect()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|(l, _)| l == label)
    }

    fn require(&self, label: &str) -> Result<usize, LinalgError> {
        self.position(label)
            .ok_or_else(|| LinalgError::UnknownLabel(label.to_string()))
    }

    pub fn width(&self, label: &str) -> Result<usize, LinalgError> {
        Ok(self.labels[self.require(label)?].1)
    }

    /// Offset of the block at `pos`.
    pub fn offset_at(&self, pos: usize) -> usize {
        self.labels[..pos].iter().map(|(_, w)| w).sum()
    }

    /// Index range covered by one block.
    pub fn range(&self, label: &str) -> Result<Range<usize>, LinalgError> {
        let p = self.require(label)?;
        let o = self.offset_at(p);
        Ok(o..o + self.labels[p].1)
    }

    /// Index range covered by the contiguous blocks `first..=last`.
    pub fn span(&self, first: &str, last: &str) -> Result<Range<usize>, LinalgError> {
        let (a, b) = (self.require(first)?, self.require(last)?);
        if a > b {
            return Ok(0..0);
        }
        let o = self.offset_at(a);
        Ok(o..self.offset_at(b + 1))
    }

    /// Indices of the selected blocks, in label order.
    pub fn indices(&self, sel: &[&str]) -> Result<Vec<usize>, LinalgError> {
        let mut pos: Vec<usize> = sel
            .iter()
            .map(|l| self.require(l))
            .collect::<Result<_, _>>()?;
        pos.sort_unstable();
        pos.dedup();
        Ok(pos
            .into_iter()
            .flat_map(|p| {
                let o = self.offset_at(p);
                o..o + self.labels[p].1
            })
            .collect())
    }
}

fn check_total(labels: &BlockLabels, actual: usize) -> Result<(), LinalgError> {
    if labels.total() != actual {
        return Err(LinalgError::LabelWidth {
            labels: labels.total(),
            actual,
        });
    }
    Ok(())
}

/// Submatrix formed by the selected block rows and block columns.
pub fn extract_blocks(
    m: &ExactMatrix,
    rows: &BlockLabels,
    cols: &BlockLabels,
    rowsel: &[&str],
    colsel: &[&str],
) -> Result<ExactMatrix, LinalgError> {
    check_total(rows, m.rows())?;
    check_total(cols, m.cols())?;
    Ok(m.select(&rows.indices(rowsel)?, &cols.indices(colsel)?))
}

/// Stacks `m` over `n`, keeping the columns of `m` up to `ci` apart from the
/// private leading columns of `n`, and aligning the shared columns after
/// `ci` up to `cj`:
///
/// ```text
/// [ M[c1..ci]   0            M(ci..cj] ]
/// [ 0           N[private]   N(ci..cj] ]
/// ```
///
/// The private columns of `n` are its leading blocks whose labels do not
/// occur in `m` after `ci`; every later block of `n` must match the next
/// block of `m` in label and width.
pub fn stack_split(
    m: &ExactMatrix,
    m_cols: &BlockLabels,
    n: &ExactMatrix,
    n_cols: &BlockLabels,
    ci: &str,
    cj: &str,
) -> Result<ExactMatrix, LinalgError> {
    check_total(m_cols, m.cols())?;
    check_total(n_cols, n.cols())?;
    let i = m_cols.require(ci)?;
    let j = m_cols.require(cj)?;
    if i > j {
        return Err(LinalgError::BadSplit(format!("`{ci}` comes after `{cj}`")));
    }
    let later: Vec<&str> = m_cols.labels[i + 1..]
        .iter()
        .map(|(l, _)| l.as_str())
        .collect();
    let k = n_cols
        .labels
        .iter()
        .take_while(|(l, _)| !later.contains(&l.as_str()))
        .count();
    let tail = &n_cols.labels[k..];
    if tail.len() < j - i {
        return Err(LinalgError::BadSplit(format!(
            "right matrix lacks the shared blocks up to `{cj}`"
        )));
    }
    for (t, (label, w)) in tail.iter().enumerate() {
        let Some((ml, mw)) = m_cols.labels.get(i + 1 + t) else {
            return Err(LinalgError::BadSplit(format!("unexpected block `{label}`")));
        };
        if ml != label {
            return Err(LinalgError::BadSplit(format!(
                "shared blocks out of order: `{label}` vs `{ml}`"
            )));
        }
        if mw != w {
            return Err(LinalgError::WidthMismatch {
                label: label.clone(),
                left: *mw,
                right: *w,
            });
        }
    }

    let w_head = m_cols.offset_at(i + 1);
    let w_shared = m_cols.offset_at(j + 1) - w_head;
    let w_priv = n_cols.offset_at(k);
    let field = m.field();
    let mut out = ExactMatrix::zeros(field, m.rows() + n.rows(), w_head + w_priv + w_shared);
    out.set_block(0, 0, &m.submatrix(0, m.rows(), 0, w_head));
    out.set_block(
        0,
        w_head + w_priv,
        &m.submatrix(0, m.rows(), w_head, w_head + w_shared),
    );
    out.set_block(m.rows(), w_head, &n.submatrix(0, n.rows(), 0, w_priv));
    out.set_block(
        m.rows(),
        w_head + w_priv,
        &n.submatrix(0, n.rows(), w_priv, w_priv + w_shared),
    );
    Ok(out)
}
