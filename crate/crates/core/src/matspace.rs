//! Dense matrices and linear forms over a finite field.
//!
//! Matrices are vectorized row-major everywhere: entry `(i, j)` of an
//! `r x c` matrix is coordinate `i * c + j` of a linear form.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    ctx: FieldCtx,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|&a| self.ctx.format_elem(a)).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

fn same_field(a: &FieldCtx, b: &FieldCtx) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::FieldMismatch(a.name(), b.name()))
    }
}

impl Mat {
    pub fn zeros(ctx: &FieldCtx, rows: usize, cols: usize) -> Mat {
        assert!(rows > 0 && cols > 0, "matrices have positive dimensions");
        Mat {
            ctx: ctx.clone(),
            rows,
            cols,
            data: vec![FieldElem::ZERO; rows * cols],
        }
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Mat {
        let mut m = Mat::zeros(ctx, n, n);
        for i in 0..n {
            m.data[i * n + i] = ctx.one();
        }
        m
    }

    /// Matrix unit `e_{i,j}` (0-indexed).
    pub fn unit(ctx: &FieldCtx, rows: usize, cols: usize, i: usize, j: usize) -> Mat {
        let mut m = Mat::zeros(ctx, rows, cols);
        m.data[i * cols + j] = ctx.one();
        m
    }

    pub fn from_elems(ctx: &FieldCtx, rows: usize, cols: usize, data: Vec<FieldElem>) -> Result<Mat> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::dim(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        if let Some(a) = data.iter().find(|&&a| !ctx.contains(a)) {
            return Err(Error::ForeignElement(a.index()));
        }
        Ok(Mat {
            ctx: ctx.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Prime-subfield integers, row-major.
    pub fn from_ints(ctx: &FieldCtx, rows: usize, cols: usize, vals: &[i64]) -> Result<Mat> {
        Mat::from_elems(ctx, rows, cols, vals.iter().map(|&v| ctx.from_int(v)).collect())
    }

    /// The `index`-th matrix in base-`q` enumeration of all entries,
    /// entry `0` least significant.
    pub fn from_index(ctx: &FieldCtx, rows: usize, cols: usize, mut index: u64) -> Mat {
        let q = ctx.order();
        let data = (0..rows * cols)
            .map(|_| {
                let v = index % q;
                index /= q;
                ctx.elem(v).expect("reduced modulo the field order")
            })
            .collect();
        Mat {
            ctx: ctx.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn random<R: Rng + ?Sized>(ctx: &FieldCtx, rows: usize, cols: usize, rng: &mut R) -> Mat {
        let data = (0..rows * cols).map(|_| ctx.random(rng)).collect();
        Mat {
            ctx: ctx.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn random_invertible<R: Rng + ?Sized>(ctx: &FieldCtx, n: usize, rng: &mut R) -> Mat {
        loop {
            let m = Mat::random(ctx, n, n, rng);
            if !m.det().expect("square").is_zero() {
                return m;
            }
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[FieldElem] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        debug_assert!(self.ctx.contains(v));
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    fn check_same_shape(&self, other: &Mat) -> Result<()> {
        same_field(&self.ctx, &other.ctx)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dim(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.ctx.add(a, b))
            .collect();
        Ok(Mat { data, ..self.clone() })
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.ctx.sub(a, b))
            .collect();
        Ok(Mat { data, ..self.clone() })
    }

    pub fn neg(&self) -> Mat {
        let data = self.data.iter().map(|&a| self.ctx.neg(a)).collect();
        Mat { data, ..self.clone() }
    }

    pub fn scale(&self, s: FieldElem) -> Mat {
        let data = self.data.iter().map(|&a| self.ctx.mul(s, a)).collect();
        Mat { data, ..self.clone() }
    }

    pub fn matmul(&self, other: &Mat) -> Result<Mat> {
        same_field(&self.ctx, &other.ctx)?;
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.ctx;
        let mut out = Mat::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.data[k * other.cols + j]));
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(&self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    pub fn trace(&self) -> Result<FieldElem> {
        if !self.is_square() {
            return Err(Error::dim("trace of a non-square matrix"));
        }
        Ok((0..self.rows).fold(self.ctx.zero(), |acc, i| self.ctx.add(acc, self.get(i, i))))
    }

    /// `ab - ba`.
    pub fn commutator(&self, other: &Mat) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::dim("commutator of non-square matrices"));
        }
        self.check_same_shape(other)?;
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<FieldElem>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        echelonize(&self.ctx, &mut rows, self.cols).len()
    }

    pub fn det(&self) -> Result<FieldElem> {
        if !self.is_square() {
            return Err(Error::dim("determinant of a non-square matrix"));
        }
        let f = &self.ctx;
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = f.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Ok(f.zero());
            };
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = f.neg(det);
            }
            let pv = a[col * n + col];
            det = f.mul(det, pv);
            let pinv = f.inv(pv)?;
            for r in col + 1..n {
                let factor = f.mul(a[r * n + col], pinv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    a[r * n + j] = f.sub(a[r * n + j], f.mul(factor, a[col * n + j]));
                }
            }
        }
        Ok(det)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::dim("inverse of a non-square matrix"));
        }
        let f = &self.ctx;
        let n = self.rows;
        let w = 2 * n;
        let mut a = vec![FieldElem::ZERO; n * w];
        for i in 0..n {
            a[i * w..i * w + n].copy_from_slice(self.row(i));
            a[i * w + n + i] = f.one();
        }
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r * w + col].is_zero()).ok_or(Error::Singular)?;
            if piv != col {
                for j in 0..w {
                    a.swap(piv * w + j, col * w + j);
                }
            }
            let pinv = f.inv(a[col * w + col])?;
            for j in 0..w {
                a[col * w + j] = f.mul(a[col * w + j], pinv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * w + col];
                if factor.is_zero() {
                    continue;
                }
                for j in 0..w {
                    a[r * w + j] = f.sub(a[r * w + j], f.mul(factor, a[col * w + j]));
                }
            }
        }
        let data = (0..n).flat_map(|i| a[i * w + n..(i + 1) * w].to_vec()).collect();
        Ok(Mat {
            ctx: f.clone(),
            rows: n,
            cols: n,
            data,
        })
    }

    /// Applies `f` to every entry, producing a matrix over `ctx`.
    pub fn map_into(&self, ctx: &FieldCtx, f: impl Fn(FieldElem) -> FieldElem) -> Mat {
        Mat {
            ctx: ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f(a)).collect(),
        }
    }
}

/// Reduces `rows` in place to reduced row echelon form (leftmost pivot,
/// first nonzero row as pivot row). Returns the pivot columns; the
/// nonzero rows are moved to the front.
pub fn echelonize(ctx: &FieldCtx, rows: &mut [Vec<FieldElem>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let pinv = ctx.inv(rows[r][col]).expect("pivot is nonzero");
        for v in rows[r].iter_mut() {
            *v = ctx.mul(*v, pinv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = ctx.sub(*x, ctx.mul(factor, y));
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Incrementally built row space supporting membership tests.
#[derive(Clone, Debug)]
pub struct RowSpace {
    ctx: FieldCtx,
    ncols: usize,
    rows: Vec<(usize, Vec<FieldElem>)>,
}

impl RowSpace {
    pub fn new(ctx: &FieldCtx, ncols: usize) -> RowSpace {
        RowSpace {
            ctx: ctx.clone(),
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        let f = &self.ctx;
        let mut v = v.to_vec();
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if c.is_zero() {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
        v
    }

    pub fn contains(&self, v: &[FieldElem]) -> bool {
        self.reduce(v).iter().all(|a| a.is_zero())
    }

    /// Adds `v`; returns `true` iff it was outside the span.
    pub fn insert(&mut self, v: &[FieldElem]) -> bool {
        assert_eq!(v.len(), self.ncols);
        let mut r = self.reduce(v);
        let Some(piv) = r.iter().position(|a| !a.is_zero()) else {
            return false;
        };
        let inv = self.ctx.inv(r[piv]).expect("nonzero");
        for x in r.iter_mut() {
            *x = self.ctx.mul(*x, inv);
        }
        self.rows.push((piv, r));
        true
    }
}

/// A linear form in `nvars` variables.
#[derive(Clone, PartialEq, Eq)]
pub struct LinForm {
    ctx: FieldCtx,
    coeffs: Vec<FieldElem>,
}

impl fmt::Debug for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coeffs.iter().map(|&a| self.ctx.format_elem(a)).collect();
        write!(f, "<{}>", c.join(" "))
    }
}

impl LinForm {
    pub fn new(ctx: &FieldCtx, coeffs: Vec<FieldElem>) -> Result<LinForm> {
        if coeffs.is_empty() {
            return Err(Error::dim("linear form over zero variables"));
        }
        if let Some(a) = coeffs.iter().find(|&&a| !ctx.contains(a)) {
            return Err(Error::ForeignElement(a.index()));
        }
        Ok(LinForm {
            ctx: ctx.clone(),
            coeffs,
        })
    }

    pub fn from_ints(ctx: &FieldCtx, vals: &[i64]) -> Result<LinForm> {
        LinForm::new(ctx, vals.iter().map(|&v| ctx.from_int(v)).collect())
    }

    pub fn zero(ctx: &FieldCtx, nvars: usize) -> LinForm {
        LinForm {
            ctx: ctx.clone(),
            coeffs: vec![FieldElem::ZERO; nvars],
        }
    }

    pub fn coordinate(ctx: &FieldCtx, nvars: usize, idx: usize) -> LinForm {
        let mut f = LinForm::zero(ctx, nvars);
        f.coeffs[idx] = ctx.one();
        f
    }

    /// The form `a -> sum_{ij} m_{ij} a_{ij}`.
    pub fn from_mat(m: &Mat) -> LinForm {
        LinForm {
            ctx: m.ctx.clone(),
            coeffs: m.data.clone(),
        }
    }

    /// Coefficients reshaped as a matrix (inverse of [`LinForm::from_mat`]).
    pub fn to_mat(&self, rows: usize, cols: usize) -> Result<Mat> {
        Mat::from_elems(&self.ctx, rows, cols, self.coeffs.clone())
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|a| a.is_zero())
    }

    pub fn eval(&self, v: &[FieldElem]) -> Result<FieldElem> {
        if v.len() != self.coeffs.len() {
            return Err(Error::dim(format!(
                "form over {} variables applied to {} values",
                self.coeffs.len(),
                v.len()
            )));
        }
        Ok(self.eval_unchecked(v))
    }

    pub(crate) fn eval_unchecked(&self, v: &[FieldElem]) -> FieldElem {
        let f = &self.ctx;
        self.coeffs
            .iter()
            .zip(v)
            .fold(f.zero(), |acc, (&c, &x)| if c.is_zero() || x.is_zero() { acc } else { f.add(acc, f.mul(c, x)) })
    }

    pub fn add(&self, other: &LinForm) -> Result<LinForm> {
        same_field(&self.ctx, &other.ctx)?;
        if self.nvars() != other.nvars() {
            return Err(Error::dim("adding forms over different variable counts"));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| self.ctx.add(a, b))
            .collect();
        Ok(LinForm {
            ctx: self.ctx.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, s: FieldElem) -> LinForm {
        LinForm {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|&a| self.ctx.mul(s, a)).collect(),
        }
    }

    /// `[self | zeros(extra)]` or `[zeros(extra) | self]`.
    pub fn pad(&self, before: usize, after: usize) -> LinForm {
        let mut coeffs = vec![FieldElem::ZERO; before];
        coeffs.extend_from_slice(&self.coeffs);
        coeffs.resize(before + self.coeffs.len() + after, FieldElem::ZERO);
        LinForm {
            ctx: self.ctx.clone(),
            coeffs,
        }
    }
}

/// Evaluates `f` on the row-major vectorization of `a`.
pub fn eval_form(f: &LinForm, a: &Mat) -> Result<FieldElem> {
    same_field(f.ctx(), a.ctx())?;
    f.eval(a.entries())
}

/// Greedy maximal independent subset, scanning in order and keeping a form
/// iff it lies outside the span of the forms already kept.
pub fn select_independent(forms: &[LinForm]) -> Vec<usize> {
    let Some(first) = forms.first() else {
        return Vec::new();
    };
    let mut space = RowSpace::new(first.ctx(), first.nvars());
    forms
        .iter()
        .enumerate()
        .filter(|(_, f)| space.insert(f.coeffs()))
        .map(|(i, _)| i)
        .collect()
}

/// Matrices `b_j` with `forms[i](b_j) = delta_ij`, for `n^2` independent
/// forms over `n x n` matrices.
pub fn dual_basis(forms: &[LinForm], n: usize) -> Result<Vec<Mat>> {
    let nn = n * n;
    if forms.len() != nn {
        return Err(Error::Dependent(format!("{} forms, expected {}", forms.len(), nn)));
    }
    let ctx = forms[0].ctx().clone();
    if let Some(f) = forms.iter().find(|f| f.nvars() != nn || f.ctx() != &ctx) {
        return Err(Error::dim(format!("form over {} variables, expected {}", f.nvars(), nn)));
    }
    let coeff = Mat::from_elems(&ctx, nn, nn, forms.iter().flat_map(|f| f.coeffs().to_vec()).collect())?;
    let inv = coeff
        .inverse()
        .map_err(|_| Error::Dependent("forms are linearly dependent".into()))?;
    (0..nn)
        .map(|j| Mat::from_elems(&ctx, n, n, (0..nn).map(|r| inv.get(r, j)).collect()))
        .collect()
}
