use std::fmt;

use serde::{Serialize, Serializer};

use crate::star::StarArrow::{self, Alpha, Alpha1Prime, Beta};
use crate::zigzag::RankFunction::{self, Double, DoubleZero, Single};

use super::{SliceError, SliceFunction, SliceLabel};

/// How a slice function behaves on `S(d*)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FunctionClass {
    /// Constant on all of `S(d*)`.
    Constant,
    /// Fixed to its minimum to cut out `im eta`.
    Image,
    /// Differs from the paired function of `D_n` by a constant on `im eta`.
    Quiver(RankFunction),
}

impl fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionClass::Constant => f.write_str("C"),
            FunctionClass::Image => f.write_str("Im"),
            FunctionClass::Quiver(g) => write!(f, "{g}"),
        }
    }
}

impl Serialize for FunctionClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            FunctionClass::Constant => "constant",
            FunctionClass::Image => "image",
            FunctionClass::Quiver(_) => "quiver",
        })
    }
}

fn is_constant(f: SliceFunction, n: usize) -> bool {
    use SliceLabel::*;
    let p = |l: SliceLabel| l.position(n);
    match f {
        SliceFunction::U(v) | SliceFunction::L(v) => p(v) <= p(X(0)) || p(v) >= p(Y0Sum),
        SliceFunction::B(v, w) => {
            w == Ys(n)
                || matches!(v, X(i) if i >= 1 && p(w) < p(Xs(i)))
                || matches!(v, Y(i) if i >= 2 && p(w) >= p(SliceLabel::ys(i - 1)))
                || (v == Y(1) && w == Y0Sum)
                || p(v) >= p(Y(1))
        }
    }
}

fn is_image(f: SliceFunction, n: usize) -> bool {
    use SliceLabel::*;
    let p = |l: SliceLabel| l.position(n);
    let tail = |w: SliceLabel| p(Y0Sum) <= p(w) && p(w) <= p(SliceLabel::ys(n - 1));
    match f {
        SliceFunction::L(Xs(0)) => true,
        SliceFunction::U(_) | SliceFunction::L(_) => false,
        SliceFunction::B(v, w) => {
            (p(v) <= p(X(0)) && tail(w))
                || (v == Xs(0) && tail(w))
                || matches!((v, w), (Xs(i), Ys(j)) if 1 <= i && i <= j && j < n)
                || matches!((v, w), (X(i), Y(j)) if j < i)
        }
    }
}

fn quiver_partner(f: SliceFunction) -> Option<RankFunction> {
    use SliceLabel::*;
    let a = |i: usize| -> StarArrow { Alpha(i) };
    let b = |i: usize| -> StarArrow { Beta(i) };
    Some(match f {
        SliceFunction::U(Xs(i)) => Single(b(0), b(i)),
        SliceFunction::U(Y(i)) => Single(b(0), a(i)),
        SliceFunction::L(Xs(i)) if i >= 1 => Single(Alpha1Prime, b(i)),
        SliceFunction::L(Y(1)) => Single(Alpha1Prime, Alpha1Prime),
        SliceFunction::L(Y(i)) => Single(Alpha1Prime, a(i)),
        SliceFunction::B(v, w) => match (v, w) {
            (X(0), Xs(0)) => Single(b(0), b(0)),
            (X(0), Xs(j)) => Double(a(1), b(j)),
            (X(1), Xs(j)) if j >= 1 => DoubleZero(b(j)),
            (X(i), Xs(j)) if 2 <= i && i <= j => Single(a(i), b(j)),
            (X(0), Y(j)) => Double(a(1), a(j)),
            (X(1), Y(j)) => DoubleZero(a(j)),
            (X(i), Y(j)) if 2 <= i && i <= j => Single(a(i), a(j)),
            (Xs(k), Xs(j)) if k < j => Double(a(k + 1), b(j)),
            (Xs(k), Y(j)) if k < j => Double(a(k + 1), a(j)),
            (Xs(j), Y(i)) if i <= j => Double(b(i), b(j)),
            (Xs(j), Y0Sum) if j >= 1 => Single(b(1), b(j)),
            (Xs(j), Ys(m)) if m < j => Single(b(m + 1), b(j)),
            (Y(j), Y(i)) if i < j => Double(b(i), a(j)),
            (Y(j), Y0Sum) if j >= 2 => Single(b(1), a(j)),
            (Y(j), Ys(m)) if m + 1 < j => Single(b(m + 1), a(j)),
            _ => return None,
        },
        _ => return None,
    })
}

/// The constant / image / quiver class of a slice function on `Q*(n)`.
pub fn classify(f: SliceFunction, n: usize) -> Result<FunctionClass, SliceError> {
    if !f.is_valid(n) {
        let name = match f {
            SliceFunction::U(v) | SliceFunction::L(v) => v.name(),
            SliceFunction::B(v, w) => format!("{v},{w}"),
        };
        return Err(SliceError::NoSuchLabel(name, n));
    }
    let mut hits = Vec::new();
    if is_constant(f, n) {
        hits.push(FunctionClass::Constant);
    }
    if is_image(f, n) {
        hits.push(FunctionClass::Image);
    }
    if let Some(g) = quiver_partner(f) {
        hits.push(FunctionClass::Quiver(g));
    }
    match hits.as_slice() {
        [one] => Ok(*one),
        _ => Err(SliceError::Unclassified(f.to_string(), hits.len())),
    }
}

/// Classes of every function of [`super::slice_functions`].
pub fn classify_all(n: usize) -> Result<Vec<(SliceFunction, FunctionClass)>, SliceError> {
    super::slice_functions(n)
        .into_iter()
        .map(|f| Ok((f, classify(f, n)?)))
        .collect()
}
