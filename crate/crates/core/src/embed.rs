//! Regular representation of GF(p^n) inside M_n(GF(p)).
//!
//! `embed_elem(x)` is the matrix of multiplication by `x` in the power basis
//! `1, t, ..., t^{n-1}`: column `j` holds the coefficients of `x * t^j`.

use crate::error::{Error, Result};
use crate::field::{make_context, FieldCtx, FieldElem};
use crate::matspace::Mat;

/// The prime subfield GF(p) of `ext`.
pub fn base_field(ext: &FieldCtx) -> FieldCtx {
    make_context(ext.p(), 1).expect("characteristic is prime")
}

pub fn embed_elem(ext: &FieldCtx, x: FieldElem) -> Result<Mat> {
    if !ext.contains(x) {
        return Err(Error::ForeignElement(x.index()));
    }
    let base = base_field(ext);
    let n = ext.degree();
    let t = if n == 1 {
        ext.one()
    } else {
        ext.from_coeffs(&(0..n).map(|i| u64::from(i == 1)).collect::<Vec<_>>())?
    };
    let mut out = Mat::zeros(&base, n, n);
    let mut col = x;
    for j in 0..n {
        for (i, c) in ext.coeffs(col).into_iter().enumerate() {
            out.set(i, j, base.elem(c)?);
        }
        col = ext.mul(col, t);
    }
    Ok(out)
}

/// Blockwise embedding `M_k(GF(p^n)) -> M_{kn}(GF(p))`.
pub fn embed_block(a: &Mat, n: usize) -> Result<Mat> {
    let ext = a.ctx();
    if ext.degree() != n {
        return Err(Error::FieldMismatch(ext.name(), format!("GF({}^{})", ext.p(), n)));
    }
    let base = base_field(ext);
    let mut out = Mat::zeros(&base, a.rows() * n, a.cols() * n);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let block = embed_elem(ext, a.get(i, j))?;
            for r in 0..n {
                for c in 0..n {
                    out.set(i * n + r, j * n + c, block.get(r, c));
                }
            }
        }
    }
    Ok(out)
}
