use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::Field;
use crate::quiver::{DimVector, Representation};
use crate::zigzag::{DnFamily, RankFunction};

use super::{
    classify, column_labels, quiver_value, slice_functions, FunctionClass, SliceError,
    SliceFunction, SliceParams, SliceSignature,
};

/// Outcome of checking one function against its class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableStatus {
    Ok,
    Contradiction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRow")]
pub struct TableRow {
    pub index: usize,
    pub function: String,
    pub class: FunctionClass,
    pub partner: Option<String>,
    /// The constant value, the value at `eta(0)`, or `f o eta - g`.
    pub offset: Option<i64>,
    pub samples: usize,
    pub status: TableStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Serialized row, where the class is a bare tag and the partner a name.
#[derive(Deserialize)]
struct RawRow {
    index: usize,
    function: String,
    class: String,
    partner: Option<String>,
    offset: Option<i64>,
    samples: usize,
    status: TableStatus,
    #[serde(default)]
    detail: Option<String>,
}

impl TryFrom<RawRow> for TableRow {
    type Error = String;

    fn try_from(r: RawRow) -> Result<Self, String> {
        let class = match (r.class.as_str(), &r.partner) {
            ("constant", None) => FunctionClass::Constant,
            ("image", None) => FunctionClass::Image,
            ("quiver", Some(p)) => FunctionClass::Quiver(
                RankFunction::parse(p).ok_or_else(|| format!("bad partner `{p}`"))?,
            ),
            (c, _) => return Err(format!("bad class `{c}` for {}", r.function)),
        };
        Ok(TableRow {
            index: r.index,
            function: r.function,
            class,
            partner: r.partner,
            offset: r.offset,
            samples: r.samples,
            status: r.status,
            detail: r.detail,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub n: usize,
    pub dims: Vec<usize>,
    pub samples: usize,
    pub contradictions: usize,
    pub rows: Vec<TableRow>,
}

impl TableReport {
    pub fn is_clean(&self) -> bool {
        self.contradictions == 0
    }

    /// The class grids followed by one line per contradiction.
    pub fn to_text(&self) -> String {
        let mut out = render_tables(self.n).expect("classification is total");
        let _ = writeln!(
            out,
            "\nd* = {:?}, {} samples, {} functions, {} contradictions",
            self.dims,
            self.samples,
            self.rows.len(),
            self.contradictions
        );
        for row in self
            .rows
            .iter()
            .filter(|r| r.status == TableStatus::Contradiction)
        {
            let _ = writeln!(
                out,
                "  {} [{}]: {}",
                row.function,
                row.class,
                row.detail.as_deref().unwrap_or("")
            );
        }
        out
    }
}

fn grid(header: &[String], rows: &[(String, Vec<String>)]) -> String {
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    let lead = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
    for (_, cells) in rows {
        for (w, c) in widths.iter_mut().zip(cells) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |lead_cell: &str, cells: &[String], out: &mut String| {
        let _ = write!(out, "{lead_cell:<lead$} |");
        for (w, c) in widths.iter().zip(cells) {
            let _ = write!(out, " {c:<w$} |");
        }
        out.push('\n');
    };
    line("", header, &mut out);
    for (l, cells) in rows {
        line(l, cells, &mut out);
    }
    out
}

/// Text tables of the classes of `U_v`, `L_v` and of `B_{v,w}`, laid out
/// with `v` down the side and `w` across the top.
pub fn render_tables(n: usize) -> Result<String, SliceError> {
    let labels = column_labels(n);
    let names: Vec<String> = labels.iter().map(|l| l.name()).collect();
    let cell = |f| classify(f, n).map(|c| c.to_string());
    let ul = vec![
        (
            "U".to_string(),
            labels
                .iter()
                .map(|&v| cell(SliceFunction::U(v)))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        (
            "L".to_string(),
            labels
                .iter()
                .map(|&v| cell(SliceFunction::L(v)))
                .collect::<Result<Vec<_>, _>>()?,
        ),
    ];
    let mut b = Vec::new();
    for (i, &v) in labels.iter().enumerate().take(labels.len() - 1) {
        let mut cells = vec![String::new(); i];
        for &w in &labels[i + 1..] {
            cells.push(cell(SliceFunction::B(v, w))?);
        }
        b.push((v.name(), cells));
    }
    let mut out = grid(&names, &ul);
    out.push('\n');
    out.push_str(&grid(&names[1..], &b));
    Ok(out)
}

/// Checks every slice function on `Q*(n)` against its class, using
/// `samples` random representations (pushed through `eta`) and as many
/// random points of `S(d*)`.
///
/// Constant functions must take one value everywhere; image functions must
/// equal their value at `eta(0)` on `im eta` and never drop below it on the
/// slice; quiver functions must differ from their partner by one integer.
pub fn verify_tables<R: Rng + ?Sized>(
    n: usize,
    dims: DimVector,
    samples: usize,
    field: Field,
    bound: i64,
    rng: &mut R,
) -> Result<TableReport, SliceError> {
    let params = Arc::new(SliceParams::for_n(n, dims.clone())?);
    let fam = DnFamily::new(n)?;
    let q = fam.star().quiver().clone();
    let skeleton = params.skeleton(field).signature();

    let mut reps = Vec::with_capacity(samples);
    let mut points = Vec::with_capacity(samples);
    for _ in 0..samples {
        reps.push(Representation::random(
            q.clone(),
            field,
            dims.clone(),
            bound,
            rng,
        )?);
        points.push(params.random_point(field, bound, rng));
    }
    let on_image: Vec<(SliceSignature, crate::zigzag::RankSignature)> = reps
        .par_iter()
        .map(|v| {
            let p = params.eta_with(fam.matrices(), v)?;
            Ok((p.signature(), fam.signature(v)?))
        })
        .collect::<Result<_, SliceError>>()?;
    let on_slice: Vec<SliceSignature> = points.par_iter().map(|p| p.signature()).collect();

    let mut rows = Vec::new();
    for (index, f) in slice_functions(n).into_iter().enumerate() {
        let class = classify(f, n)?;
        let base = skeleton.values[index] as i64;
        let image_vals = on_image.iter().map(|(s, _)| s.values[index] as i64);
        let slice_vals = on_slice.iter().map(|s| s.values[index] as i64);
        let (offset, detail) = match class {
            FunctionClass::Constant => {
                let seen: BTreeSet<i64> = image_vals.chain(slice_vals).chain([base]).collect();
                let detail = (seen.len() > 1).then(|| format!("values {seen:?}"));
                (Some(base), detail)
            }
            FunctionClass::Image => {
                let on: BTreeSet<i64> = image_vals.collect();
                let low = slice_vals.min();
                let detail = if on.iter().any(|&x| x != base) {
                    Some(format!("values on im eta {on:?}, expected {base}"))
                } else if low.is_some_and(|l| l < base) {
                    Some(format!(
                        "slice value {} below eta(0) value {base}",
                        low.unwrap()
                    ))
                } else {
                    None
                };
                (Some(base), detail)
            }
            FunctionClass::Quiver(g) => {
                let diffs: BTreeSet<i64> = on_image
                    .iter()
                    .map(|(s, d)| s.values[index] as i64 - quiver_value(d, &fam, g) as i64)
                    .collect();
                let offset = if diffs.is_empty() {
                    None
                } else {
                    diffs.iter().next().copied()
                };
                let detail = (diffs.len() > 1).then(|| format!("offsets {diffs:?}"));
                (offset, detail)
            }
        };
        rows.push(TableRow {
            index,
            function: f.to_string(),
            class,
            partner: match class {
                FunctionClass::Quiver(g) => Some(g.to_string()),
                _ => None,
            },
            offset,
            samples,
            status: if detail.is_some() {
                TableStatus::Contradiction
            } else {
                TableStatus::Ok
            },
            detail,
        });
    }
    let contradictions = rows
        .iter()
        .filter(|r| r.status == TableStatus::Contradiction)
        .count();
    Ok(TableReport {
        n,
        dims: dims.0,
        samples,
        contradictions,
        rows,
    })
}
