//! Linear codes of matrices: `Gamma(a) = (gamma_1(a), ..., gamma_m(a))`
//! with `weight(Gamma(a)) >= n * rank(a)`.
//!
//! Codes are derived from circuits for matrix product: the x-forms of a
//! bilinear decomposition, or the output-coefficient forms of a quadratic
//! circuit.

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuits::{check_mp, check_quadratic, quadratic_coeffs, BilinearDecomp, QuadCircuit};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::matspace::{LinForm, Mat, RowSpace};

/// Largest matrix space scanned in exhaustive mode.
pub const EXHAUSTIVE_CAP: u64 = 1 << 24;

/// Violations kept verbatim in a [`CodeReport`].
const MAX_RECORDED_VIOLATIONS: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixCode {
    ctx: FieldCtx,
    n: usize,
    forms: Vec<LinForm>,
}

impl MatrixCode {
    pub fn new(ctx: &FieldCtx, n: usize, forms: Vec<LinForm>) -> Result<Self> {
        if forms.is_empty() {
            return Err(Error::dim("a code needs at least one coordinate"));
        }
        if let Some(f) = forms.iter().find(|f| f.nvars() != n * n) {
            return Err(Error::dim(format!("form over {} variables in a code on {n}x{n} matrices", f.nvars())));
        }
        if let Some(f) = forms.iter().find(|f| f.ctx() != ctx) {
            return Err(Error::FieldMismatch(ctx.name(), f.ctx().name()));
        }
        Ok(MatrixCode {
            ctx: ctx.clone(),
            n,
            forms,
        })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Code length.
    pub fn m(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[LinForm] {
        &self.forms
    }

    pub fn without_form(&self, i: usize) -> Result<Self> {
        let mut forms = self.forms.clone();
        forms.remove(i);
        MatrixCode::new(&self.ctx, self.n, forms)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CodeReport {
    pub checked: u64,
    /// `(matrix, weight, rank)` for matrices with `weight < n * rank`; at
    /// most the first 1000 are kept, see `violation_count`.
    pub violations: Vec<(Mat, usize, usize)>,
    pub violation_count: u64,
    /// Minimum of `weight / (n * rank)` over tested matrices of nonzero rank.
    pub min_ratio: Option<Ratio<u64>>,
}

impl CodeReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

pub fn encode(code: &MatrixCode, a: &Mat) -> Result<Vec<FieldElem>> {
    if a.ctx() != &code.ctx {
        return Err(Error::FieldMismatch(code.ctx.name(), a.ctx().name()));
    }
    if (a.rows(), a.cols()) != (code.n, code.n) {
        return Err(Error::dim(format!("code on {0}x{0} matrices", code.n)));
    }
    Ok(code.forms.iter().map(|f| f.eval_unchecked(a.entries())).collect())
}

pub fn weight(v: &[FieldElem]) -> usize {
    v.iter().filter(|a| !a.is_zero()).count()
}

/// Number of coordinates where `u` and `v` differ, i.e. `weight(u - v)`.
pub fn hamming(u: &[FieldElem], v: &[FieldElem]) -> usize {
    assert_eq!(u.len(), v.len(), "hamming distance of vectors of different length");
    u.iter().zip(v).filter(|(a, b)| a != b).count()
}

/// The code of x-forms `(u_1, ..., u_m)` of a decomposition of MP_n.
pub fn code_from_bilinear(d: &BilinearDecomp) -> Result<MatrixCode> {
    let n = d.n()?;
    if let Some(disc) = check_mp(d) {
        return Err(Error::NotMatrixProduct(disc.to_string()));
    }
    MatrixCode::new(d.ctx(), n, d.u_forms())
}

/// The code `gamma_k(z) = sum_{ij} alpha^{(k)}_{ij} z_{ij}` of a quadratic
/// circuit for MP_n.
pub fn code_from_quadratic(q: &QuadCircuit) -> Result<MatrixCode> {
    if let Some(disc) = check_quadratic(q) {
        return Err(Error::NotMatrixProduct(disc.to_string()));
    }
    let forms = q
        .triples()
        .iter()
        .map(|g| LinForm::new(q.ctx(), g.alpha.clone()))
        .collect::<Result<Vec<_>>>()?;
    MatrixCode::new(q.ctx(), q.n(), forms)
}

/// Checks `weight(Gamma(a)) >= n * rank(a)` on every matrix (exhaustive)
/// or on a seeded sample.
pub fn check_rank_distance(code: &MatrixCode, mode: CheckMode) -> Result<CodeReport> {
    let f = &code.ctx;
    let n = code.n;
    let mut report = CodeReport {
        checked: 0,
        violations: Vec::new(),
        violation_count: 0,
        min_ratio: None,
    };
    let mut visit = |a: Mat| {
        let w = weight(&encode(code, &a).expect("shape checked"));
        let r = a.rank();
        report.checked += 1;
        if r == 0 {
            return;
        }
        let ratio = Ratio::new(w as u64, (n * r) as u64);
        report.min_ratio = Some(report.min_ratio.map_or(ratio, |m| m.min(ratio)));
        if w < n * r {
            report.violation_count += 1;
            if report.violations.len() < MAX_RECORDED_VIOLATIONS {
                report.violations.push((a, w, r));
            }
        }
    };
    match mode {
        CheckMode::Exhaustive => {
            let total = f
                .order()
                .checked_pow((n * n) as u32)
                .filter(|&t| t <= EXHAUSTIVE_CAP)
                .ok_or_else(|| Error::pre(format!("{} has too many {n}x{n} matrices to enumerate", f.name())))?;
            for idx in 0..total {
                visit(Mat::from_index(f, n, n, idx));
            }
        }
        CheckMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                visit(Mat::random(f, n, n, &mut rng));
            }
        }
    }
    Ok(report)
}

/// Coefficient of `v_s v_t z_o` (`s <= t`) in `sum_k mu_k eta_k gamma_k(z)`,
/// flattened as `(o * nv + s) * nv + t`.
fn circuit_trilinear_coeffs(q: &QuadCircuit) -> Vec<FieldElem> {
    let f = q.ctx();
    let nn = q.n() * q.n();
    let nv = 2 * nn;
    let mut acc = vec![FieldElem::ZERO; nn * nv * nv];
    for g in q.triples() {
        let prod = quadratic_coeffs(f, &g.a, &g.b);
        for (o, &c) in g.alpha.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (st, &pc) in prod.iter().enumerate() {
                if !pc.is_zero() {
                    let idx = o * nv * nv + st;
                    acc[idx] = f.add(acc[idx], f.mul(c, pc));
                }
            }
        }
    }
    acc
}

/// Coefficients of `trace(x y z^t) = sum_{i,j,l} x_{il} y_{lj} z_{ij}` in the
/// same layout as [`circuit_trilinear_coeffs`].
fn trace_trilinear_coeffs(ctx: &FieldCtx, n: usize) -> Vec<FieldElem> {
    let nn = n * n;
    let nv = 2 * nn;
    let mut acc = vec![FieldElem::ZERO; nn * nv * nv];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let s = i * n + l;
                let t = nn + l * n + j;
                let o = i * n + j;
                let idx = o * nv * nv + s * nv + t;
                acc[idx] = ctx.add(acc[idx], ctx.one());
            }
        }
    }
    acc
}

fn trace_identity_at(q: &QuadCircuit, code: &MatrixCode, x: &Mat, y: &Mat, z: &Mat) -> bool {
    let f = q.ctx();
    let mut joint = x.entries().to_vec();
    joint.extend_from_slice(y.entries());
    let gammas = encode(code, z).expect("shape checked");
    let lhs = q.triples().iter().zip(&gammas).fold(f.zero(), |acc, (g, &gz)| {
        let prod = f.mul(g.a.eval_unchecked(&joint), g.b.eval_unchecked(&joint));
        f.add(acc, f.mul(prod, gz))
    });
    let rhs = x
        .matmul(y)
        .and_then(|xy| xy.matmul(&z.transpose()))
        .and_then(|m| m.trace())
        .expect("square inputs");
    lhs == rhs
}

/// Checks `sum_k mu_k(x,y) eta_k(x,y) gamma_k(z) = trace(x y z^t)`.
///
/// Exhaustive mode compares formal coefficients and, when the input space
/// has at most 2^16 triples, also evaluates both sides on every triple.
pub fn trace_identity_check(q: &QuadCircuit, mode: CheckMode) -> Result<bool> {
    let code = code_from_quadratic(q)?;
    let f = q.ctx();
    let n = q.n();
    match mode {
        CheckMode::Exhaustive => {
            if circuit_trilinear_coeffs(q) != trace_trilinear_coeffs(f, n) {
                return Ok(false);
            }
            let per = f.order().checked_pow((n * n) as u32);
            if let Some(per) = per.filter(|&c| c.checked_pow(3).is_some_and(|t| t <= 1 << 16)) {
                for i in 0..per {
                    let x = Mat::from_index(f, n, n, i);
                    for j in 0..per {
                        let y = Mat::from_index(f, n, n, j);
                        for l in 0..per {
                            if !trace_identity_at(q, &code, &x, &y, &Mat::from_index(f, n, n, l)) {
                                return Ok(false);
                            }
                        }
                    }
                }
            }
            Ok(true)
        }
        CheckMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let x = Mat::random(f, n, n, &mut rng);
                let y = Mat::random(f, n, n, &mut rng);
                let z = Mat::random(f, n, n, &mut rng);
                if !trace_identity_at(q, &code, &x, &y, &z) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeSpan {
    /// `dim span` of the `2n^2` discrete partial derivatives.
    pub lhs_dim: usize,
    /// `weight(Gamma(z0))`: gates with `gamma_k(z0) != 0`.
    pub k: usize,
    /// `dim span {mu_k, eta_k : gamma_k(z0) != 0}`.
    pub gate_span_dim: usize,
    /// Every derivative lies in the span of the surviving gate forms.
    pub contained: bool,
    /// Every derivative has zero constant term.
    pub homogeneous: bool,
    /// `lhs_dim <= 2k`.
    pub ok: bool,
}

/// Discrete-derivative span bound for a quadratic circuit at `z0`.
///
/// The restricted sum `f(w) = sum_k gamma_k(z0) mu_k(w) eta_k(w)` over the
/// joint variables `w = (x, y)` is differenced along every unit vector,
/// `D_s(w) = f(w + e_s) - f(w)`. Each `D_s` is affine; its linear part is
/// recovered from `D_s(0)` and `D_s(e_t) - D_s(0)`.
pub fn derivative_span_check(q: &QuadCircuit, z0: &Mat) -> Result<DerivativeSpan> {
    let code = code_from_quadratic(q)?;
    let gammas = encode(&code, z0)?;
    let f = q.ctx();
    let nv = 2 * q.n() * q.n();
    let live: Vec<(usize, FieldElem)> = gammas
        .iter()
        .enumerate()
        .filter(|(_, g)| !g.is_zero())
        .map(|(k, &g)| (k, g))
        .collect();
    let restricted = |w: &[FieldElem]| {
        live.iter().fold(f.zero(), |acc, &(k, g)| {
            let gate = &q.triples()[k];
            let prod = f.mul(gate.a.eval_unchecked(w), gate.b.eval_unchecked(w));
            f.add(acc, f.mul(g, prod))
        })
    };
    let unit = |s: usize| {
        let mut e = vec![FieldElem::ZERO; nv];
        e[s] = f.one();
        e
    };
    let shifted = |w: &[FieldElem], s: usize| {
        let mut v = w.to_vec();
        v[s] = f.add(v[s], f.one());
        v
    };
    let derivative = |s: usize, w: &[FieldElem]| f.sub(restricted(&shifted(w, s)), restricted(w));

    let zero = vec![FieldElem::ZERO; nv];
    let mut pd = RowSpace::new(f, nv);
    let mut rows = Vec::with_capacity(nv);
    let mut homogeneous = true;
    for s in 0..nv {
        let c0 = derivative(s, &zero);
        homogeneous &= c0.is_zero();
        let row: Vec<FieldElem> = (0..nv).map(|t| f.sub(derivative(s, &unit(t)), c0)).collect();
        pd.insert(&row);
        rows.push(row);
    }
    let mut gates = RowSpace::new(f, nv);
    for &(k, _) in &live {
        gates.insert(q.triples()[k].a.coeffs());
        gates.insert(q.triples()[k].b.coeffs());
    }
    let contained = rows.iter().all(|r| gates.contains(r));
    let k = live.len();
    Ok(DerivativeSpan {
        lhs_dim: pd.dim(),
        k,
        gate_span_dim: gates.dim(),
        contained,
        homogeneous,
        ok: pd.dim() <= 2 * k,
    })
}
