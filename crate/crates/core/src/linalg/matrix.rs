use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use super::field::{add_mod, inv_mod, mul_mod, reduce_i64, Field, FieldScalar};
use super::LinalgError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Data {
    Rational(Vec<BigRational>),
    Prime { modulus: u64, values: Vec<u64> },
}

/// Dense row-major matrix over [`Field`].
///
/// Arithmetic between matrices of incompatible shape or field is a
/// programming error and panics; fallible user-facing operations return
/// [`LinalgError`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Data,
}

impl ExactMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        let n = rows * cols;
        let data = match field {
            Field::Rational => Data::Rational(vec![BigRational::zero(); n]),
            Field::Prime(p) => Data::Prime {
                modulus: p,
                values: vec![0; n],
            },
        };
        ExactMatrix { rows, cols, data }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set_i64(i, i, 1);
        }
        m
    }

    /// Antidiagonal permutation matrix.
    pub fn reversal(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set_i64(i, n - 1 - i, 1);
        }
        m
    }

    /// Builds a matrix from integer rows. All rows must have equal length.
    pub fn from_i64_rows<R: AsRef<[i64]>>(field: Field, rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_i64_rows_with_cols(field, rows, cols)
    }

    /// Like [`from_i64_rows`](Self::from_i64_rows) but keeps the column count
    /// meaningful when there are no rows.
    pub fn from_i64_rows_with_cols<R: AsRef<[i64]>>(field: Field, rows: &[R], cols: usize) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged integer rows");
            for (j, &x) in r.iter().enumerate() {
                m.set_i64(i, j, x);
            }
        }
        m
    }

    pub fn from_scalars(
        field: Field,
        rows: usize,
        cols: usize,
        entries: &[FieldScalar],
    ) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::EntryCount {
                rows,
                cols,
                got: entries.len(),
            });
        }
        let mut m = Self::zeros(field, rows, cols);
        for (k, e) in entries.iter().enumerate() {
            if e.field() != field {
                return Err(LinalgError::FieldMismatch(field, e.field()));
            }
            m.set(k / cols.max(1), k % cols.max(1), e);
        }
        Ok(m)
    }

    /// Uniform random entries: integers in `[-bound, bound]` over `Q`, or
    /// uniform residues over `GF(p)` (the bound is ignored there).
    pub fn random<R: Rng + ?Sized>(
        field: Field,
        rows: usize,
        cols: usize,
        bound: i64,
        rng: &mut R,
    ) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        match &mut m.data {
            Data::Rational(v) => {
                for x in v.iter_mut() {
                    *x = BigRational::from_integer(BigInt::from(rng.gen_range(-bound..=bound)));
                }
            }
            Data::Prime { modulus, values } => {
                let p = *modulus;
                for x in values.iter_mut() {
                    *x = rng.gen_range(0..p);
                }
            }
        }
        m
    }

    /// Random invertible matrix, found by rejection.
    pub fn random_invertible<R: Rng + ?Sized>(
        field: Field,
        n: usize,
        bound: i64,
        rng: &mut R,
    ) -> Self {
        loop {
            let m = Self::random(field, n, n, bound, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> Field {
        match &self.data {
            Data::Rational(_) => Field::Rational,
            Data::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn get(&self, i: usize, j: usize) -> FieldScalar {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        let k = i * self.cols + j;
        match &self.data {
            Data::Rational(v) => FieldScalar::Rational(v[k].clone()),
            Data::Prime { modulus, values } => FieldScalar::Prime {
                value: values[k],
                modulus: *modulus,
            },
        }
    }

    pub fn set(&mut self, i: usize, j: usize, x: &FieldScalar) {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        let k = i * self.cols + j;
        match (&mut self.data, x) {
            (Data::Rational(v), FieldScalar::Rational(q)) => v[k] = q.clone(),
            (Data::Prime { modulus, values }, FieldScalar::Prime { value, modulus: m2 })
                if *modulus == *m2 =>
            {
                values[k] = *value
            }
            _ => panic!("field mismatch in set"),
        }
    }

    /// `self[i][j] += x`.
    pub fn add_at(&mut self, i: usize, j: usize, x: &FieldScalar) {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        let k = i * self.cols + j;
        match (&mut self.data, x) {
            (Data::Rational(v), FieldScalar::Rational(q)) => v[k] += q,
            (Data::Prime { modulus, values }, FieldScalar::Prime { value, modulus: m2 })
                if *modulus == *m2 =>
            {
                values[k] = add_mod(values[k], *value, *modulus)
            }
            _ => panic!("field mismatch in add_at"),
        }
    }

    pub fn set_i64(&mut self, i: usize, j: usize, x: i64) {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        let k = i * self.cols + j;
        match &mut self.data {
            Data::Rational(v) => v[k] = BigRational::from_integer(BigInt::from(x)),
            Data::Prime { modulus, values } => values[k] = reduce_i64(x, *modulus),
        }
    }

    /// Row-major copy of all entries.
    pub fn entries(&self) -> Vec<FieldScalar> {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect()
    }

    pub fn row(&self, i: usize) -> Vec<FieldScalar> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Data::Rational(v) => v.iter().all(Zero::is_zero),
            Data::Prime { values, .. } => values.iter().all(|&x| x == 0),
        }
    }

    pub fn transpose(&self) -> Self {
        let (r, c) = (self.rows, self.cols);
        let data = match &self.data {
            Data::Rational(v) => {
                Data::Rational((0..r * c).map(|k| v[(k % r) * c + k / r].clone()).collect())
            }
            Data::Prime { modulus, values } => Data::Prime {
                modulus: *modulus,
                values: (0..r * c).map(|k| values[(k % r) * c + k / r]).collect(),
            },
        };
        ExactMatrix {
            rows: c,
            cols: r,
            data,
        }
    }

    fn check_field(&self, other: &Self) {
        assert_eq!(self.field(), other.field(), "field mismatch");
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_field(other);
        assert_eq!(
            self.cols,
            other.rows,
            "shape mismatch in product: {:?} * {:?}",
            self.shape(),
            other.shape()
        );
        let (n, m, l) = (self.rows, self.cols, other.cols);
        let data = match (&self.data, &other.data) {
            (Data::Rational(a), Data::Rational(b)) => {
                let mut out = vec![BigRational::zero(); n * l];
                for i in 0..n {
                    for k in 0..m {
                        let x = &a[i * m + k];
                        if x.is_zero() {
                            continue;
                        }
                        for j in 0..l {
                            let y = &b[k * l + j];
                            if !y.is_zero() {
                                out[i * l + j] += x * y;
                            }
                        }
                    }
                }
                Data::Rational(out)
            }
            (Data::Prime { modulus, values: a }, Data::Prime { values: b, .. }) => {
                let p = *modulus;
                let mut out = vec![0u64; n * l];
                for i in 0..n {
                    for k in 0..m {
                        let x = a[i * m + k];
                        if x == 0 {
                            continue;
                        }
                        for j in 0..l {
                            let o = &mut out[i * l + j];
                            *o = add_mod(*o, mul_mod(x, b[k * l + j], p), p);
                        }
                    }
                }
                Data::Prime {
                    modulus: p,
                    values: out,
                }
            }
            _ => unreachable!(),
        };
        ExactMatrix {
            rows: n,
            cols: l,
            data,
        }
    }

    fn zip_with(&self, other: &Self, sign: i64) -> Self {
        self.check_field(other);
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sum");
        let data = match (&self.data, &other.data) {
            (Data::Rational(a), Data::Rational(b)) => Data::Rational(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| if sign > 0 { x + y } else { x - y })
                    .collect(),
            ),
            (Data::Prime { modulus, values: a }, Data::Prime { values: b, .. }) => {
                let p = *modulus;
                Data::Prime {
                    modulus: p,
                    values: a
                        .iter()
                        .zip(b)
                        .map(|(&x, &y)| {
                            if sign > 0 {
                                add_mod(x, y, p)
                            } else {
                                add_mod(x, p - y, p)
                            }
                        })
                        .collect(),
                }
            }
            _ => unreachable!(),
        };
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, -1)
    }

    pub fn scale(&self, c: &FieldScalar) -> Self {
        let mut out = self.clone();
        match (&mut out.data, c) {
            (Data::Rational(v), FieldScalar::Rational(q)) => v.iter_mut().for_each(|x| *x *= q),
            (Data::Prime { modulus, values }, FieldScalar::Prime { value, .. }) => {
                let p = *modulus;
                values.iter_mut().for_each(|x| *x = mul_mod(*x, *value, p));
            }
            _ => panic!("field mismatch in scale"),
        }
        out
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        let rows: Vec<usize> = (r0..r1).collect();
        let cols: Vec<usize> = (c0..c1).collect();
        self.select(&rows, &cols)
    }

    /// Rows and columns picked by index, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let c = self.cols;
        let data = match &self.data {
            Data::Rational(v) => Data::Rational(
                rows.iter()
                    .flat_map(|&i| cols.iter().map(move |&j| v[i * c + j].clone()))
                    .collect(),
            ),
            Data::Prime { modulus, values } => Data::Prime {
                modulus: *modulus,
                values: rows
                    .iter()
                    .flat_map(|&i| cols.iter().map(move |&j| values[i * c + j]))
                    .collect(),
            },
        };
        ExactMatrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &cols)
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, cols)
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        self.check_field(block);
        assert!(
            r0 + block.rows <= self.rows && c0 + block.cols <= self.cols,
            "block {:?} at ({r0},{c0}) overflows {:?}",
            block.shape(),
            self.shape()
        );
        let (c, bc) = (self.cols, block.cols);
        match (&mut self.data, &block.data) {
            (Data::Rational(dst), Data::Rational(src)) => {
                for i in 0..block.rows {
                    for j in 0..bc {
                        dst[(r0 + i) * c + c0 + j] = src[i * bc + j].clone();
                    }
                }
            }
            (Data::Prime { values: dst, .. }, Data::Prime { values: src, .. }) => {
                for i in 0..block.rows {
                    dst[(r0 + i) * c + c0..(r0 + i) * c + c0 + bc]
                        .copy_from_slice(&src[i * bc..(i + 1) * bc]);
                }
            }
            _ => unreachable!(),
        }
    }

    /// Side-by-side concatenation. Needs at least one part to know the field.
    pub fn hstack(parts: &[&Self]) -> Self {
        let first = parts.first().expect("hstack of nothing");
        let rows = first.rows;
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(first.field(), rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "row mismatch in hstack");
            out.set_block(0, c0, p);
            c0 += p.cols;
        }
        out
    }

    pub fn vstack(parts: &[&Self]) -> Self {
        let first = parts.first().expect("vstack of nothing");
        let cols = first.cols;
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = Self::zeros(first.field(), rows, cols);
        let mut r0 = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "column mismatch in vstack");
            out.set_block(r0, 0, p);
            r0 += p.rows;
        }
        out
    }

    pub fn block_diag(field: Field, parts: &[&Self]) -> Self {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            out.set_block(r0, c0, p);
            r0 += p.rows;
            c0 += p.cols;
        }
        out
    }

    /// Exact rank over the matrix's field.
    pub fn rank(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        match &self.data {
            Data::Rational(v) => rational_rank(self.rows, self.cols, v),
            Data::Prime { modulus, values } => {
                prime_rank(self.rows, self.cols, values.clone(), *modulus)
            }
        }
    }

    /// Dimension of the right null space, `cols - rank`.
    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        match &self.data {
            Data::Rational(v) => {
                let mut w = v.clone();
                let piv = rref_in_place(&RatArith, self.rows, self.cols, &mut w);
                (
                    ExactMatrix {
                        rows: self.rows,
                        cols: self.cols,
                        data: Data::Rational(w),
                    },
                    piv,
                )
            }
            Data::Prime { modulus, values } => {
                let mut w = values.clone();
                let piv = rref_in_place(&PrimeArith(*modulus), self.rows, self.cols, &mut w);
                (
                    ExactMatrix {
                        rows: self.rows,
                        cols: self.cols,
                        data: Data::Prime {
                            modulus: *modulus,
                            values: w,
                        },
                    },
                    piv,
                )
            }
        }
    }

    /// Canonical basis of the row space: the nonzero rows of the RREF.
    pub fn row_space_basis(&self) -> Self {
        let (r, piv) = self.rref();
        r.submatrix(0, piv.len(), 0, self.cols)
    }

    pub fn same_row_space(&self, other: &Self) -> bool {
        self.cols == other.cols && self.row_space_basis() == other.row_space_basis()
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = Self::hstack(&[self, &Self::identity(self.field(), n)]);
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] >= n {
            return None;
        }
        Some(r.submatrix(0, n, n, 2 * n))
    }

    /// Some `X` with `X * b = c`, if one exists.
    pub fn solve_left(b: &Self, c: &Self) -> Option<Self> {
        assert_eq!(b.cols, c.cols, "column mismatch in solve_left");
        Self::solve_right(&b.transpose(), &c.transpose()).map(|x| x.transpose())
    }

    /// Some `X` with `a * X = c`, if one exists. Free variables are set to 0.
    pub fn solve_right(a: &Self, c: &Self) -> Option<Self> {
        assert_eq!(a.rows, c.rows, "row mismatch in solve_right");
        let (n, m) = (a.cols, c.cols);
        let aug = Self::hstack(&[a, c]);
        let (r, piv) = aug.rref();
        if piv.iter().any(|&p| p >= n) {
            return None;
        }
        let mut x = Self::zeros(a.field(), n, m);
        for (row, &p) in piv.iter().enumerate() {
            for j in 0..m {
                x.set(p, j, &r.get(row, n + j));
            }
        }
        Some(x)
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ExactMatrix {}x{} over {} ",
            self.rows,
            self.cols,
            self.field()
        )?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

trait Arith {
    type E: Clone;
    fn is_zero(&self, x: &Self::E) -> bool;
    fn inv(&self, x: &Self::E) -> Self::E;
    fn mul(&self, x: &Self::E, y: &Self::E) -> Self::E;
    /// `x - c * y`
    fn sub_mul(&self, x: &Self::E, c: &Self::E, y: &Self::E) -> Self::E;
}

struct RatArith;

impl Arith for RatArith {
    type E = BigRational;
    fn is_zero(&self, x: &BigRational) -> bool {
        x.is_zero()
    }
    fn inv(&self, x: &BigRational) -> BigRational {
        x.recip()
    }
    fn mul(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x * y
    }
    fn sub_mul(&self, x: &BigRational, c: &BigRational, y: &BigRational) -> BigRational {
        x - c * y
    }
}

struct PrimeArith(u64);

impl Arith for PrimeArith {
    type E = u64;
    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }
    fn inv(&self, x: &u64) -> u64 {
        inv_mod(*x, self.0)
    }
    fn mul(&self, x: &u64, y: &u64) -> u64 {
        mul_mod(*x, *y, self.0)
    }
    fn sub_mul(&self, x: &u64, c: &u64, y: &u64) -> u64 {
        let p = self.0;
        add_mod(*x, p - mul_mod(*c, *y, p), p)
    }
}

fn rref_in_place<A: Arith>(ar: &A, rows: usize, cols: usize, w: &mut [A::E]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !ar.is_zero(&w[i * cols + c])) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                w.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = ar.inv(&w[r * cols + c]);
        for j in c..cols {
            w[r * cols + j] = ar.mul(&w[r * cols + j], &inv);
        }
        for i in 0..rows {
            if i == r || ar.is_zero(&w[i * cols + c]) {
                continue;
            }
            let f = w[i * cols + c].clone();
            for j in c..cols {
                w[i * cols + j] = ar.sub_mul(&w[i * cols + j], &f, &w[r * cols + j]);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn prime_rank(rows: usize, cols: usize, mut w: Vec<u64>, p: u64) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| w[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for j in c..cols {
                w.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = inv_mod(w[r * cols + c], p);
        for i in r + 1..rows {
            let x = w[i * cols + c];
            if x == 0 {
                continue;
            }
            let f = p - mul_mod(x, inv, p);
            for j in c..cols {
                let y = w[r * cols + j];
                if y != 0 {
                    w[i * cols + j] = add_mod(w[i * cols + j], mul_mod(f, y, p), p);
                }
            }
        }
        r += 1;
    }
    r
}

/// Rank over `Q`: clear denominators row by row, then run fraction-free
/// elimination on integers. An `i128` pass handles the common small-entry
/// case; overflow falls back to big integers.
fn rational_rank(rows: usize, cols: usize, v: &[BigRational]) -> usize {
    let ints = integer_rows(rows, cols, v);
    if let Some(small) = ints
        .iter()
        .map(|x| x.to_i128())
        .collect::<Option<Vec<i128>>>()
    {
        if let Some(r) = int_rank_i128(rows, cols, small) {
            return r;
        }
    }
    int_rank_big(rows, cols, ints)
}

fn integer_rows(rows: usize, cols: usize, v: &[BigRational]) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let row = &v[i * cols..(i + 1) * cols];
        let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        out.extend(row.iter().map(|x| x.numer() * (&l / x.denom())));
    }
    out
}

fn int_rank_i128(rows: usize, cols: usize, mut w: Vec<i128>) -> Option<usize> {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| w[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for j in c..cols {
                w.swap(piv * cols + j, r * cols + j);
            }
        }
        let a = w[r * cols + c];
        for i in r + 1..rows {
            let b = w[i * cols + c];
            if b == 0 {
                continue;
            }
            let g = gcd_i128(a, b);
            let (fa, fb) = (a / g, b / g);
            let mut row_gcd = 0i128;
            for j in c..cols {
                let x = w[i * cols + j].checked_mul(fa)?;
                let y = w[r * cols + j].checked_mul(fb)?;
                let z = x.checked_sub(y)?;
                w[i * cols + j] = z;
                row_gcd = gcd_i128(row_gcd, z);
            }
            if row_gcd > 1 {
                for j in c..cols {
                    w[i * cols + j] /= row_gcd;
                }
            }
        }
        r += 1;
    }
    Some(r)
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i128
}

fn int_rank_big(rows: usize, cols: usize, mut w: Vec<BigInt>) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !w[i * cols + c].is_zero()) else {
            continue;
        };
        if piv != r {
            for j in c..cols {
                w.swap(piv * cols + j, r * cols + j);
            }
        }
        let a = w[r * cols + c].clone();
        for i in r + 1..rows {
            let b = w[i * cols + c].clone();
            if b.is_zero() {
                continue;
            }
            let g = a.gcd(&b);
            let (fa, fb) = (&a / &g, &b / &g);
            let mut row_gcd = BigInt::zero();
            for j in c..cols {
                let z = &w[i * cols + j] * &fa - &w[r * cols + j] * &fb;
                row_gcd = row_gcd.gcd(&z);
                w[i * cols + j] = z;
            }
            if row_gcd > BigInt::one() {
                for j in c..cols {
                    w[i * cols + j] = &w[i * cols + j] / &row_gcd;
                }
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: Field = Field::Rational;
    const BIG_P: u64 = 1_000_000_007;

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_i64_rows(Q, rows)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ExactMatrix::zeros(Q, 0, 5).rank(), 0);
        assert_eq!(ExactMatrix::identity(Q, 3).rank(), 3);
        assert_eq!(m(&[&[1, 1], &[0, 1], &[0, 1], &[0, 1]]).rank(), 2);
        assert_eq!(ExactMatrix::zeros(Q, 4, 0).rank(), 0);
    }

    #[test]
    fn nullity_examples() {
        assert_eq!(ExactMatrix::zeros(Q, 0, 4).nullity(), 4);
        assert_eq!(ExactMatrix::identity(Q, 4).nullity(), 0);
        assert_eq!(m(&[&[1, 1, 0], &[0, 1, 1]]).nullity(), 1);
    }

    #[test]
    fn rational_entries_and_big_fallback() {
        let half = Q.parse_scalar("1/2").unwrap();
        let mut a = m(&[&[1, 2], &[2, 4]]);
        a.set(0, 1, &half);
        assert_eq!(a.rank(), 2);
        a.set(1, 1, &Q.from_i64(1));
        assert_eq!(a.rank(), 1);

        // Entries near 2^62 overflow the small path on the first update.
        let big = 1i64 << 62;
        let b = m(&[&[big, big - 1, 3], &[big - 1, big, 5], &[1, 2, 7]]);
        let b_prime = ExactMatrix::from_i64_rows(
            Field::Prime(BIG_P),
            &[[big, big - 1, 3], [big - 1, big, 5], [1, 2, 7]],
        );
        assert_eq!(b.rank(), 3);
        assert_eq!(b_prime.rank(), 3);
        let dup = ExactMatrix::vstack(&[&b, &b]);
        assert_eq!(dup.rank(), 3);
    }

    #[test]
    fn inverse_and_solve() {
        let a = m(&[&[2, 1], &[7, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), ExactMatrix::identity(Q, 2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert!(m(&[&[1, 2, 3]]).inverse().is_none());

        let b = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let c = m(&[&[3, 4, 7]]);
        let x = ExactMatrix::solve_left(&b, &c).unwrap();
        assert_eq!(x.mul(&b), c);
        assert!(ExactMatrix::solve_left(&b, &m(&[&[1, 1, 1]])).is_none());
    }

    #[test]
    fn prime_inverse() {
        let f = Field::Prime(7);
        let a = ExactMatrix::from_i64_rows(f, &[[3, 1], [1, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(inv.mul(&a), ExactMatrix::identity(f, 2));
    }

    #[test]
    fn stacking_and_blocks() {
        let a = m(&[&[1, 2]]);
        let b = m(&[&[3]]);
        let d = ExactMatrix::block_diag(Q, &[&a, &b]);
        assert_eq!(d, m(&[&[1, 2, 0], &[0, 0, 3]]));
        assert_eq!(ExactMatrix::hstack(&[&a, &b]), m(&[&[1, 2, 3]]));
        assert_eq!(d.submatrix(0, 2, 1, 3), m(&[&[2, 0], &[0, 3]]));
        assert_eq!(d.select(&[1, 0], &[2]), m(&[&[3], &[0]]));
        assert_eq!(d.transpose(), m(&[&[1, 0], &[2, 0], &[0, 3]]));
    }

    #[test]
    fn row_space_equality() {
        let a = m(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = m(&[&[1, 2, 1], &[1, 0, -1]]);
        assert!(a.same_row_space(&b));
        assert!(!a.same_row_space(&m(&[&[1, 0, 0], &[0, 1, 0]])));
    }

    fn arb_small(max: usize) -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
        (0..=max, 0..=max).prop_flat_map(|(r, c)| {
            (
                Just(r),
                Just(c),
                proptest::collection::vec(-9i64..=9, r * c),
            )
        })
    }

    fn build(field: Field, r: usize, c: usize, v: &[i64]) -> ExactMatrix {
        let rows: Vec<Vec<i64>> = v.chunks(c.max(1)).take(r).map(|x| x.to_vec()).collect();
        if c == 0 {
            return ExactMatrix::zeros(field, r, 0);
        }
        ExactMatrix::from_i64_rows_with_cols(field, &rows, c)
    }

    proptest! {
        #[test]
        fn rank_of_transpose((r, c, v) in arb_small(6)) {
            let a = build(Q, r, c, &v);
            prop_assert_eq!(a.rank(), a.transpose().rank());
            prop_assert_eq!(a.rank() + a.nullity(), c);
        }

        #[test]
        fn rank_invariant_under_invertible_action((r, c, v) in arb_small(5), seed in any::<u64>()) {
            let a = build(Q, r, c, &v);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = ExactMatrix::random_invertible(Q, r, 3, &mut rng);
            let h = ExactMatrix::random_invertible(Q, c, 3, &mut rng);
            prop_assert_eq!(g.mul(&a).mul(&h).rank(), a.rank());
            let mut perm: Vec<usize> = (0..r).collect();
            perm.reverse();
            prop_assert_eq!(a.select_rows(&perm).rank(), a.rank());
        }

        #[test]
        fn rational_and_prime_ranks_agree((r, c, v) in arb_small(6)) {
            let a = build(Q, r, c, &v);
            let b = build(Field::Prime(BIG_P), r, c, &v);
            prop_assert_eq!(a.rank(), b.rank());
        }

        #[test]
        fn rref_rank_matches_elimination((r, c, v) in arb_small(6)) {
            let a = build(Q, r, c, &v);
            prop_assert_eq!(a.rref().1.len(), a.rank());
        }
    }
}
