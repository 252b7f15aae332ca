//! Bilinear decompositions and quadratic circuits for matrix product, in
//! the one-layer-of-products normal form.
//!
//! A bilinear decomposition of shape `(n1, n2, n3)` computes the product of
//! an `n1 x n2` matrix `x` and an `n2 x n3` matrix `y` as
//! `out = sum_r w_r * u_r(x) * v_r(y)`. A quadratic circuit over `n x n`
//! inputs multiplies two linear forms in the joint variables `(x, y)`
//! (x coordinates first, then y, both row-major).

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::matspace::{LinForm, Mat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearTriple {
    pub u: LinForm,
    pub v: LinForm,
    pub w: Vec<FieldElem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearDecomp {
    ctx: FieldCtx,
    dims: (usize, usize, usize),
    triples: Vec<BilinearTriple>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadTriple {
    pub a: LinForm,
    pub b: LinForm,
    pub alpha: Vec<FieldElem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadCircuit {
    ctx: FieldCtx,
    n: usize,
    triples: Vec<QuadTriple>,
}

/// First formal coefficient at which a bilinear decomposition differs from
/// the matrix-product tensor. Indices are 0-based `(row, col)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub x: (usize, usize),
    pub y: (usize, usize),
    pub out: (usize, usize),
    pub expected: FieldElem,
    pub found: FieldElem,
}

impl std::fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "coefficient of x[{},{}]*y[{},{}] in output ({},{}) is {} (expected {})",
            self.x.0,
            self.x.1,
            self.y.0,
            self.y.1,
            self.out.0,
            self.out.1,
            self.found.index(),
            self.expected.index()
        )
    }
}

/// First formal coefficient at which a quadratic circuit differs from matrix
/// product. `vars` indexes the joint `(x, y)` variables with `vars.0 <= vars.1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadDiscrepancy {
    pub vars: (usize, usize),
    pub out: (usize, usize),
    pub expected: FieldElem,
    pub found: FieldElem,
}

impl std::fmt::Display for QuadDiscrepancy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "coefficient of monomial (v{}, v{}) in output ({},{}) is {} (expected {})",
            self.vars.0,
            self.vars.1,
            self.out.0,
            self.out.1,
            self.found.index(),
            self.expected.index()
        )
    }
}

impl BilinearDecomp {
    pub fn new(ctx: &FieldCtx, dims: (usize, usize, usize), triples: Vec<BilinearTriple>) -> Result<Self> {
        let (n1, n2, n3) = dims;
        if n1 == 0 || n2 == 0 || n3 == 0 {
            return Err(Error::dim("zero dimension"));
        }
        if triples.is_empty() {
            return Err(Error::dim("a decomposition needs at least one product"));
        }
        for (r, t) in triples.iter().enumerate() {
            if t.u.nvars() != n1 * n2 || t.v.nvars() != n2 * n3 || t.w.len() != n1 * n3 {
                return Err(Error::dim(format!("triple {r} has the wrong shape")));
            }
            if t.u.ctx() != ctx || t.v.ctx() != ctx || t.w.iter().any(|&a| !ctx.contains(a)) {
                return Err(Error::FieldMismatch(ctx.name(), t.u.ctx().name()));
            }
        }
        Ok(BilinearDecomp {
            ctx: ctx.clone(),
            dims,
            triples,
        })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn is_square(&self) -> bool {
        self.dims.0 == self.dims.1 && self.dims.1 == self.dims.2
    }

    /// Side length for square decompositions.
    pub fn n(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.dims.0)
        } else {
            Err(Error::dim(format!("rectangular shape {:?}", self.dims)))
        }
    }

    /// Number of product gates.
    pub fn m(&self) -> usize {
        self.triples.len()
    }

    pub fn triples(&self) -> &[BilinearTriple] {
        &self.triples
    }

    pub fn u_forms(&self) -> Vec<LinForm> {
        self.triples.iter().map(|t| t.u.clone()).collect()
    }

    pub fn without_triple(&self, r: usize) -> Result<Self> {
        let mut triples = self.triples.clone();
        triples.remove(r);
        BilinearDecomp::new(&self.ctx, self.dims, triples)
    }
}

impl QuadCircuit {
    pub fn new(ctx: &FieldCtx, n: usize, triples: Vec<QuadTriple>) -> Result<Self> {
        if n == 0 {
            return Err(Error::dim("zero dimension"));
        }
        if triples.is_empty() {
            return Err(Error::dim("a circuit needs at least one product"));
        }
        let nn = n * n;
        for (r, t) in triples.iter().enumerate() {
            if t.a.nvars() != 2 * nn || t.b.nvars() != 2 * nn || t.alpha.len() != nn {
                return Err(Error::dim(format!("gate {r} has the wrong shape")));
            }
            if t.a.ctx() != ctx || t.b.ctx() != ctx || t.alpha.iter().any(|&a| !ctx.contains(a)) {
                return Err(Error::FieldMismatch(ctx.name(), t.a.ctx().name()));
            }
        }
        Ok(QuadCircuit {
            ctx: ctx.clone(),
            n,
            triples,
        })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.triples.len()
    }

    pub fn triples(&self) -> &[QuadTriple] {
        &self.triples
    }
}

/// The textbook `n^3`-product decomposition; triple `(i, j, k)` (in that
/// lexicographic order) is `x_{i,k} * y_{k,j}` feeding output `(i, j)`.
pub fn naive_decomp(n: usize, ctx: &FieldCtx) -> BilinearDecomp {
    assert!(n >= 1);
    let nn = n * n;
    let mut triples = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut w = vec![FieldElem::ZERO; nn];
                w[i * n + j] = ctx.one();
                triples.push(BilinearTriple {
                    u: LinForm::coordinate(ctx, nn, i * n + k),
                    v: LinForm::coordinate(ctx, nn, k * n + j),
                    w,
                });
            }
        }
    }
    BilinearDecomp::new(ctx, (n, n, n), triples).expect("well-formed")
}

/// Strassen's seven-product scheme for 2x2 matrices.
pub fn strassen_decomp(ctx: &FieldCtx) -> BilinearDecomp {
    // coordinates (11, 12, 21, 22)
    const U: [[i64; 4]; 7] = [
        [1, 0, 0, 1],
        [0, 0, 1, 1],
        [1, 0, 0, 0],
        [0, 0, 0, 1],
        [1, 1, 0, 0],
        [-1, 0, 1, 0],
        [0, 1, 0, -1],
    ];
    const V: [[i64; 4]; 7] = [
        [1, 0, 0, 1],
        [1, 0, 0, 0],
        [0, 1, 0, -1],
        [-1, 0, 1, 0],
        [0, 0, 0, 1],
        [1, 1, 0, 0],
        [0, 0, 1, 1],
    ];
    const W: [[i64; 4]; 7] = [
        [1, 0, 0, 1],
        [0, 0, 1, -1],
        [0, 1, 0, 1],
        [1, 0, 1, 0],
        [-1, 1, 0, 0],
        [0, 0, 0, 1],
        [1, 0, 0, 0],
    ];
    let triples = (0..7)
        .map(|r| BilinearTriple {
            u: LinForm::from_ints(ctx, &U[r]).expect("4 coefficients"),
            v: LinForm::from_ints(ctx, &V[r]).expect("4 coefficients"),
            w: W[r].iter().map(|&c| ctx.from_int(c)).collect(),
        })
        .collect();
    BilinearDecomp::new(ctx, (2, 2, 2), triples).expect("well-formed")
}

/// Full formal coefficient comparison against the matrix-product tensor.
/// Returns the first discrepancy in `(x, y, out)` lexicographic order.
pub fn check_mp(d: &BilinearDecomp) -> Option<Discrepancy> {
    let f = &d.ctx;
    let (n1, n2, n3) = d.dims;
    let (nx, ny, no) = (n1 * n2, n2 * n3, n1 * n3);
    let mut t = vec![FieldElem::ZERO; nx * ny * no];
    for tr in &d.triples {
        for (a, &ua) in tr.u.coeffs().iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            for (b, &vb) in tr.v.coeffs().iter().enumerate() {
                if vb.is_zero() {
                    continue;
                }
                let uv = f.mul(ua, vb);
                for (o, &wo) in tr.w.iter().enumerate() {
                    if !wo.is_zero() {
                        let idx = (a * ny + b) * no + o;
                        t[idx] = f.add(t[idx], f.mul(uv, wo));
                    }
                }
            }
        }
    }
    for a in 0..nx {
        let (i, k) = (a / n2, a % n2);
        for b in 0..ny {
            let (k2, j) = (b / n3, b % n3);
            for o in 0..no {
                let (oi, oj) = (o / n3, o % n3);
                let expected = if k == k2 && i == oi && j == oj { f.one() } else { f.zero() };
                let found = t[(a * ny + b) * no + o];
                if found != expected {
                    return Some(Discrepancy {
                        x: (i, k),
                        y: (k2, j),
                        out: (oi, oj),
                        expected,
                        found,
                    });
                }
            }
        }
    }
    None
}

pub fn verify_mp(d: &BilinearDecomp) -> bool {
    check_mp(d).is_none()
}

/// Symmetric coefficient table of the quadratic form `a * b` over `nvars`
/// variables: entry `(s, t)` with `s <= t` is the coefficient of `v_s v_t`.
pub(crate) fn quadratic_coeffs(ctx: &FieldCtx, a: &LinForm, b: &LinForm) -> Vec<FieldElem> {
    let nv = a.nvars();
    let (ac, bc) = (a.coeffs(), b.coeffs());
    let mut q = vec![FieldElem::ZERO; nv * nv];
    for s in 0..nv {
        for t in s..nv {
            let v = if s == t {
                ctx.mul(ac[s], bc[s])
            } else {
                ctx.add(ctx.mul(ac[s], bc[t]), ctx.mul(ac[t], bc[s]))
            };
            q[s * nv + t] = v;
        }
    }
    q
}

/// Formal verification of a quadratic circuit: every output polynomial must
/// equal `sum_k x_{i,k} y_{k,j}` coefficient by coefficient.
pub fn check_quadratic(q: &QuadCircuit) -> Option<QuadDiscrepancy> {
    let f = &q.ctx;
    let n = q.n;
    let nn = n * n;
    let nv = 2 * nn;
    let mut acc = vec![FieldElem::ZERO; nn * nv * nv];
    for g in &q.triples {
        if g.alpha.iter().all(|a| a.is_zero()) {
            continue;
        }
        let prod = quadratic_coeffs(f, &g.a, &g.b);
        for (o, &al) in g.alpha.iter().enumerate() {
            if al.is_zero() {
                continue;
            }
            let base = o * nv * nv;
            for (idx, &c) in prod.iter().enumerate() {
                if !c.is_zero() {
                    acc[base + idx] = f.add(acc[base + idx], f.mul(al, c));
                }
            }
        }
    }
    for s in 0..nv {
        for t in s..nv {
            for o in 0..nn {
                let (i, j) = (o / n, o % n);
                let expected = if s < nn && t >= nn {
                    let (xi, xk) = (s / n, s % n);
                    let (yk, yj) = ((t - nn) / n, (t - nn) % n);
                    if xi == i && yj == j && xk == yk {
                        f.one()
                    } else {
                        f.zero()
                    }
                } else {
                    f.zero()
                };
                let found = acc[o * nv * nv + s * nv + t];
                if found != expected {
                    return Some(QuadDiscrepancy {
                        vars: (s, t),
                        out: (i, j),
                        expected,
                        found,
                    });
                }
            }
        }
    }
    None
}

pub fn verify_quadratic(q: &QuadCircuit) -> bool {
    check_quadratic(q).is_none()
}

pub fn evaluate(d: &BilinearDecomp, x: &Mat, y: &Mat) -> Result<Mat> {
    let (n1, n2, n3) = d.dims;
    if (x.rows(), x.cols()) != (n1, n2) || (y.rows(), y.cols()) != (n2, n3) {
        return Err(Error::dim(format!("inputs do not match shape {:?}", d.dims)));
    }
    if x.ctx() != &d.ctx || y.ctx() != &d.ctx {
        return Err(Error::FieldMismatch(d.ctx.name(), x.ctx().name()));
    }
    let f = &d.ctx;
    let mut out = vec![FieldElem::ZERO; n1 * n3];
    for tr in &d.triples {
        let p = f.mul(tr.u.eval_unchecked(x.entries()), tr.v.eval_unchecked(y.entries()));
        if p.is_zero() {
            continue;
        }
        for (o, &w) in out.iter_mut().zip(&tr.w) {
            *o = f.add(*o, f.mul(w, p));
        }
    }
    Mat::from_elems(f, n1, n3, out)
}

pub fn evaluate_quadratic(q: &QuadCircuit, x: &Mat, y: &Mat) -> Result<Mat> {
    let n = q.n;
    if (x.rows(), x.cols(), y.rows(), y.cols()) != (n, n, n, n) {
        return Err(Error::dim(format!("inputs are not {n}x{n}")));
    }
    if x.ctx() != &q.ctx || y.ctx() != &q.ctx {
        return Err(Error::FieldMismatch(q.ctx.name(), x.ctx().name()));
    }
    let f = &q.ctx;
    let mut joint = x.entries().to_vec();
    joint.extend_from_slice(y.entries());
    let mut out = vec![FieldElem::ZERO; n * n];
    for g in &q.triples {
        let p = f.mul(g.a.eval_unchecked(&joint), g.b.eval_unchecked(&joint));
        if p.is_zero() {
            continue;
        }
        for (o, &al) in out.iter_mut().zip(&g.alpha) {
            *o = f.add(*o, f.mul(al, p));
        }
    }
    Mat::from_elems(f, n, n, out)
}

/// Rewrites `x y = (x c)(c^{-1} y)`: new u-forms are `x -> u(x c)` and new
/// v-forms are `y -> v(c^{-1} y)`.
///
/// `sandwich(sandwich(d, c1), c2) == sandwich(d, c2 * c1)`.
pub fn sandwich(d: &BilinearDecomp, c: &Mat) -> Result<BilinearDecomp> {
    let n = d.n()?;
    if (c.rows(), c.cols()) != (n, n) {
        return Err(Error::dim(format!("sandwiching matrix must be {n}x{n}")));
    }
    if c.ctx() != &d.ctx {
        return Err(Error::FieldMismatch(d.ctx.name(), c.ctx().name()));
    }
    let c_inv_t = c.inverse()?.transpose();
    let c_t = c.transpose();
    let triples = d
        .triples
        .iter()
        .map(|t| {
            let u = t.u.to_mat(n, n)?.matmul(&c_t)?;
            let v = c_inv_t.matmul(&t.v.to_mat(n, n)?)?;
            Ok(BilinearTriple {
                u: LinForm::from_mat(&u),
                v: LinForm::from_mat(&v),
                w: t.w.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    BilinearDecomp::new(&d.ctx, d.dims, triples)
}

/// Canonical inclusion of bilinear into quadratic circuits.
pub fn to_quadratic(d: &BilinearDecomp) -> Result<QuadCircuit> {
    let n = d.n()?;
    let nn = n * n;
    let triples = d
        .triples
        .iter()
        .map(|t| QuadTriple {
            a: t.u.pad(0, nn),
            b: t.v.pad(nn, 0),
            alpha: t.w.clone(),
        })
        .collect();
    QuadCircuit::new(&d.ctx, n, triples)
}
