//! Dense matrices over small finite fields.
//!
//! Rows are stored individually. Over GF(2) a row is a bit vector packed 64
//! entries per word and every row operation is word-parallel; over other fields
//! entries are packed field elements held one per `u32`.

use std::fmt;

use crate::gf::Field;
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq, Hash)]
enum RowData {
    Bits(Vec<u64>),
    Dense(Vec<u32>),
}

/// A row vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Row {
    len: usize,
    data: RowData,
}

impl Row {
    pub fn zero(field: &Field, len: usize) -> Row {
        let data = if field.is_gf2() {
            RowData::Bits(vec![0; len.div_ceil(64)])
        } else {
            RowData::Dense(vec![0; len])
        };
        Row { len, data }
    }

    pub fn unit(field: &Field, len: usize, i: usize) -> Row {
        let mut r = Row::zero(field, len);
        r.set(i, 1);
        r
    }

    pub fn from_values(field: &Field, values: &[u32]) -> Row {
        let mut r = Row::zero(field, values.len());
        for (i, &v) in values.iter().enumerate() {
            if v != 0 {
                r.set(i, v);
            }
        }
        r
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> u32 {
        match &self.data {
            RowData::Bits(w) => ((w[i >> 6] >> (i & 63)) & 1) as u32,
            RowData::Dense(d) => d[i],
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: u32) {
        match &mut self.data {
            RowData::Bits(w) => {
                let bit = 1u64 << (i & 63);
                if v & 1 == 1 {
                    w[i >> 6] |= bit;
                } else {
                    w[i >> 6] &= !bit;
                }
            }
            RowData::Dense(d) => d[i] = v,
        }
    }

    pub fn to_vec(&self) -> Vec<u32> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            RowData::Bits(w) => w.iter().all(|&x| x == 0),
            RowData::Dense(d) => d.iter().all(|&x| x == 0),
        }
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        match &self.data {
            RowData::Bits(w) => w
                .iter()
                .position(|&x| x != 0)
                .map(|k| k * 64 + w[k].trailing_zeros() as usize),
            RowData::Dense(d) => d.iter().position(|&x| x != 0),
        }
    }

    /// self += c * other
    pub fn axpy(&mut self, c: u32, other: &Row, f: &Field) {
        if c == 0 {
            return;
        }
        match (&mut self.data, &other.data) {
            (RowData::Bits(a), RowData::Bits(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x ^= *y;
                }
            }
            (RowData::Dense(a), RowData::Dense(b)) => {
                if f.is_prime_field() {
                    let p = f.characteristic() as u64;
                    let c = c as u64;
                    for (x, &y) in a.iter_mut().zip(b) {
                        if y != 0 {
                            *x = ((*x as u64 + c * y as u64) % p) as u32;
                        }
                    }
                } else {
                    for (x, &y) in a.iter_mut().zip(b) {
                        if y != 0 {
                            *x = f.add(*x, f.mul(c, y));
                        }
                    }
                }
            }
            _ => panic!("row storage mismatch"),
        }
    }

    pub fn scale(&mut self, c: u32, f: &Field) {
        match &mut self.data {
            RowData::Bits(w) => {
                if c == 0 {
                    w.iter_mut().for_each(|x| *x = 0);
                }
            }
            RowData::Dense(d) => d.iter_mut().for_each(|x| *x = f.mul(*x, c)),
        }
    }

    /// Sum of entrywise products.
    pub fn dot(&self, other: &Row, f: &Field) -> u32 {
        match (&self.data, &other.data) {
            (RowData::Bits(a), RowData::Bits(b)) => {
                let ones: u32 = a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum();
                ones & 1
            }
            (RowData::Dense(a), RowData::Dense(b)) => a
                .iter()
                .zip(b)
                .fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y))),
            _ => panic!("row storage mismatch"),
        }
    }

    /// Concatenation self ++ other.
    pub fn concat(&self, other: &Row, f: &Field) -> Row {
        let mut out = Row::zero(f, self.len + other.len);
        for i in 0..self.len {
            let v = self.get(i);
            if v != 0 {
                out.set(i, v);
            }
        }
        for i in 0..other.len {
            let v = other.get(i);
            if v != 0 {
                out.set(self.len + i, v);
            }
        }
        out
    }

    /// Entries in `start..start+len`.
    pub fn slice(&self, start: usize, len: usize, f: &Field) -> Row {
        let mut out = Row::zero(f, len);
        for i in 0..len {
            let v = self.get(start + i);
            if v != 0 {
                out.set(i, v);
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn mul_mat(&self, m: &Matrix) -> Row {
        let f = &m.field;
        let mut out = Row::zero(f, m.ncols);
        match &self.data {
            RowData::Bits(w) => {
                for (k, &word) in w.iter().enumerate() {
                    let mut bits = word;
                    while bits != 0 {
                        let i = k * 64 + bits.trailing_zeros() as usize;
                        out.axpy(1, &m.rows[i], f);
                        bits &= bits - 1;
                    }
                }
            }
            RowData::Dense(d) => {
                for (i, &c) in d.iter().enumerate() {
                    if c != 0 {
                        out.axpy(c, &m.rows[i], f);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_vec())
    }
}

/// A matrix as a list of rows over a common field.
#[derive(Clone)]
pub struct Matrix {
    field: Field,
    ncols: usize,
    rows: Vec<Row>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Matrix) -> bool {
        self.field == other.field && self.ncols == other.ncols && self.rows == other.rows
    }
}

impl Eq for Matrix {}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {:?}", self.nrows(), self.ncols, self.field)?;
        for r in &self.rows {
            writeln!(f, "  {:?}", r)?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zero(field: &Field, nrows: usize, ncols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            ncols,
            rows: (0..nrows).map(|_| Row::zero(field, ncols)).collect(),
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        Matrix::scalar(field, n, 1)
    }

    pub fn scalar(field: &Field, n: usize, c: u32) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    pub fn from_fn(
        field: &Field,
        nrows: usize,
        ncols: usize,
        mut f: impl FnMut(usize, usize) -> u32,
    ) -> Matrix {
        let mut m = Matrix::zero(field, nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                let v = f(i, j);
                if v != 0 {
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn from_rows(field: &Field, ncols: usize, rows: Vec<Row>) -> Matrix {
        debug_assert!(rows.iter().all(|r| r.len() == ncols));
        Matrix {
            field: field.clone(),
            ncols,
            rows,
        }
    }

    pub fn from_values(field: &Field, values: &[Vec<u32>]) -> Matrix {
        let ncols = values.first().map_or(0, |r| r.len());
        let rows = values.iter().map(|r| Row::from_values(field, r)).collect();
        Matrix::from_rows(field, ncols, rows)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.rows[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.rows[i].set(j, v)
    }

    pub fn row(&self, i: usize) -> &Row {
        &self.rows[i]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut Row {
        &mut self.rows[i]
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Row> {
        self.rows
    }

    pub fn push_row(&mut self, r: Row) {
        assert_eq!(r.len(), self.ncols);
        self.rows.push(r);
    }

    pub fn to_values(&self) -> Vec<Vec<u32>> {
        self.rows.iter().map(|r| r.to_vec()).collect()
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        self.rows.swap(i, j);
    }

    /// row i += c * row j
    pub fn row_axpy(&mut self, i: usize, j: usize, c: u32) {
        assert_ne!(i, j);
        let src = self.rows[j].clone();
        self.rows[i].axpy(c, &src, &self.field);
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols, other.nrows(), "dimension mismatch");
        Matrix {
            field: self.field.clone(),
            ncols: other.ncols,
            rows: self.rows.iter().map(|r| r.mul_mat(other)).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.add_scaled(other, 1)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add_scaled(other, self.field.neg(1))
    }

    /// self + c * other
    pub fn add_scaled(&self, other: &Matrix, c: u32) -> Matrix {
        let mut out = self.clone();
        for (r, o) in out.rows.iter_mut().zip(&other.rows) {
            r.axpy(c, o, &self.field);
        }
        out
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let mut out = self.clone();
        for r in &mut out.rows {
            r.scale(c, &self.field);
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(&self.field, self.ncols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in 0..self.ncols {
                let v = r.get(j);
                if v != 0 {
                    out.set(j, i, v);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(&self.field, self.nrows())
    }

    pub fn trace(&self) -> u32 {
        (0..self.nrows()).fold(0, |acc, i| self.field.add(acc, self.get(i, i)))
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut acc = Matrix::identity(&self.field, self.nrows());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Entrywise map, e.g. a field automorphism.
    pub fn map(&self, f: impl Fn(u32) -> u32) -> Matrix {
        Matrix::from_fn(&self.field, self.nrows(), self.ncols, |i, j| f(self.get(i, j)))
    }

    /// Number of nonzero entries in each row.
    pub fn row_weights(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| (0..self.ncols).filter(|&j| r.get(j) != 0).count())
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut b = SubspaceBasis::new(&self.field, self.ncols);
        for r in &self.rows {
            b.insert(r.clone());
        }
        b.dim()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.nrows();
        let f = &self.field;
        let mut a = self.clone();
        let mut inv = Matrix::identity(f, n);
        for col in 0..n {
            let piv = (col..n).find(|&i| a.get(i, col) != 0)?;
            a.swap_rows(col, piv);
            inv.swap_rows(col, piv);
            let s = f.inv(a.get(col, col));
            a.rows[col].scale(s, f);
            inv.rows[col].scale(s, f);
            let (pa, pi) = (a.rows[col].clone(), inv.rows[col].clone());
            for i in 0..n {
                if i != col {
                    let c = a.get(i, col);
                    if c != 0 {
                        let c = f.neg(c);
                        a.rows[i].axpy(c, &pa, f);
                        inv.rows[i].axpy(c, &pi, f);
                    }
                }
            }
        }
        Some(inv)
    }

    /// Basis (as rows) of { v : v * self = 0 }.
    pub fn left_nullspace(&self) -> Matrix {
        let f = &self.field;
        let r = self.nrows();
        let c = self.ncols;
        let mut basis = SubspaceBasis::new(f, c + r);
        let mut null = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let aug = row.concat(&Row::unit(f, r, i), f);
            let red = basis.reduce(aug);
            match red.first_nonzero() {
                Some(p) if p < c => {
                    basis.insert_reduced(red);
                }
                Some(_) => null.push(red.slice(c, r, f)),
                None => unreachable!("identity block keeps rows independent"),
            }
        }
        Matrix::from_rows(f, r, null)
    }

    /// Basis (as rows) of { v : self * v^T = 0 }.
    pub fn right_nullspace(&self) -> Matrix {
        self.transpose().left_nullspace()
    }

    /// Characteristic polynomial det(xI - A) via reduction to Hessenberg form.
    pub fn charpoly(&self) -> Poly {
        assert!(self.is_square());
        let f = &self.field;
        let n = self.nrows();
        let mut h: Vec<Vec<u32>> = self.to_values();
        for j in 0..n.saturating_sub(2) {
            let Some(i) = (j + 1..n).find(|&i| h[i][j] != 0) else {
                continue;
            };
            if i != j + 1 {
                h.swap(i, j + 1);
                for row in h.iter_mut() {
                    row.swap(i, j + 1);
                }
            }
            let pinv = f.inv(h[j + 1][j]);
            for k in j + 2..n {
                let c = f.mul(h[k][j], pinv);
                if c == 0 {
                    continue;
                }
                // row_k -= c row_{j+1}; col_{j+1} += c col_k
                let (top, bottom) = h.split_at_mut(k);
                let src = &top[j + 1];
                let dst = &mut bottom[0];
                for (x, &y) in dst.iter_mut().zip(src.iter()) {
                    *x = f.sub(*x, f.mul(c, y));
                }
                for row in h.iter_mut() {
                    row[j + 1] = f.add(row[j + 1], f.mul(c, row[k]));
                }
            }
        }
        let mut p: Vec<Poly> = vec![Poly::one()];
        for k in 0..n {
            let lin = Poly::from_coeffs(vec![f.neg(h[k][k]), 1]);
            let mut next = lin.mul(&p[k], f);
            let mut t = 1u32;
            for i in (0..k).rev() {
                t = f.mul(t, h[i + 1][i]);
                let c = f.mul(t, h[i][k]);
                if c != 0 {
                    next = next.sub(&p[i].scale(c, f), f);
                }
            }
            p.push(next);
        }
        p.pop().unwrap()
    }

    /// p(A) by Horner's rule.
    pub fn eval_poly(&self, p: &Poly) -> Matrix {
        let n = self.nrows();
        let mut acc = Matrix::zero(&self.field, n, n);
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul(self);
            if c != 0 {
                for i in 0..n {
                    let v = self.field.add(acc.get(i, i), c);
                    acc.set(i, i, v);
                }
            }
        }
        acc
    }
}

/// A subspace held as a semi-echelon basis: every basis row has a pivot
/// entry 1, and each row vanishes at the pivots of all earlier rows.
#[derive(Clone)]
pub struct SubspaceBasis {
    field: Field,
    len: usize,
    rows: Vec<Row>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn new(field: &Field, len: usize) -> SubspaceBasis {
        SubspaceBasis {
            field: field.clone(),
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.len
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_rows(&self.field, self.len, self.rows.clone())
    }

    /// Remainder of v after clearing all pivot positions.
    pub fn reduce(&self, mut v: Row) -> Row {
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v.get(p);
            if c != 0 {
                v.axpy(self.field.neg(c), r, &self.field);
            }
        }
        v
    }

    /// Coordinates of v in the basis rows, with the reduced remainder.
    pub fn coordinates(&self, mut v: Row) -> (Vec<u32>, Row) {
        let mut coords = Vec::with_capacity(self.rows.len());
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v.get(p);
            coords.push(c);
            if c != 0 {
                v.axpy(self.field.neg(c), r, &self.field);
            }
        }
        (coords, v)
    }

    pub fn contains(&self, v: &Row) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    /// Inserts a vector already reduced against this basis. Returns false for zero.
    pub fn insert_reduced(&mut self, mut v: Row) -> bool {
        let Some(p) = v.first_nonzero() else {
            return false;
        };
        let s = self.field.inv(v.get(p));
        v.scale(s, &self.field);
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    /// Adds v to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: Row) -> bool {
        let r = self.reduce(v);
        self.insert_reduced(r)
    }
}
