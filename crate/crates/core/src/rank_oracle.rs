//! Exact bilinear rank of tiny 3-tensors by complete search.
//!
//! Two modes of the tensor are treated as matrix indices and the third as
//! a slice index. A set of rank-1 matrices `u v^t` spans every slice iff
//! it extends to a decomposition, so the search picks projectively
//! normalized rank-1 matrices in increasing index order and prunes once the
//! slices not yet covered need more dimensions than terms remain.

use std::time::{Duration, Instant};

use crate::circuits::BilinearDecomp;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::matspace::{echelonize, RowSpace};

/// Largest candidate space `p^(d1 + d2)` the search accepts.
pub const MAX_CANDIDATE_SPACE: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor3 {
    ctx: FieldCtx,
    dims: (usize, usize, usize),
    entries: Vec<FieldElem>,
}

/// `u (x) v (x) w`; one product of a bilinear decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneTerm {
    pub u: Vec<FieldElem>,
    pub v: Vec<FieldElem>,
    pub w: Vec<FieldElem>,
}

impl Tensor3 {
    pub fn new(ctx: &FieldCtx, dims: (usize, usize, usize), entries: Vec<FieldElem>) -> Result<Self> {
        if entries.len() != dims.0 * dims.1 * dims.2 {
            return Err(Error::dim(format!(
                "{} entries for a {}x{}x{} tensor",
                entries.len(),
                dims.0,
                dims.1,
                dims.2
            )));
        }
        if let Some(e) = entries.iter().find(|&&e| !ctx.contains(e)) {
            return Err(Error::ForeignElement(e.index()));
        }
        Ok(Tensor3 {
            ctx: ctx.clone(),
            dims,
            entries,
        })
    }

    pub fn zeros(ctx: &FieldCtx, dims: (usize, usize, usize)) -> Self {
        Tensor3 {
            ctx: ctx.clone(),
            dims,
            entries: vec![FieldElem::ZERO; dims.0 * dims.1 * dims.2],
        }
    }

    /// Sum of rank-1 terms.
    pub fn from_terms(ctx: &FieldCtx, dims: (usize, usize, usize), terms: &[RankOneTerm]) -> Result<Self> {
        let mut t = Tensor3::zeros(ctx, dims);
        for term in terms {
            if (term.u.len(), term.v.len(), term.w.len()) != dims {
                return Err(Error::dim("rank-1 term does not match tensor dimensions"));
            }
            for (i, &a) in term.u.iter().enumerate() {
                for (j, &b) in term.v.iter().enumerate() {
                    let ab = ctx.mul(a, b);
                    if ab.is_zero() {
                        continue;
                    }
                    for (l, &c) in term.w.iter().enumerate() {
                        let idx = t.index(i, j, l);
                        t.entries[idx] = ctx.add(t.entries[idx], ctx.mul(ab, c));
                    }
                }
            }
        }
        Ok(t)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.entries
    }

    fn index(&self, i: usize, j: usize, l: usize) -> usize {
        (i * self.dims.1 + j) * self.dims.2 + l
    }

    pub fn get(&self, i: usize, j: usize, l: usize) -> FieldElem {
        self.entries[self.index(i, j, l)]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Reorders modes: result mode `m` is input mode `perm[m]`.
    fn permuted(&self, perm: [usize; 3]) -> Tensor3 {
        let d = [self.dims.0, self.dims.1, self.dims.2];
        let nd = (d[perm[0]], d[perm[1]], d[perm[2]]);
        let mut out = Tensor3::zeros(&self.ctx, nd);
        for i in 0..nd.0 {
            for j in 0..nd.1 {
                for l in 0..nd.2 {
                    let mut src = [0; 3];
                    src[perm[0]] = i;
                    src[perm[1]] = j;
                    src[perm[2]] = l;
                    let idx = out.index(i, j, l);
                    out.entries[idx] = self.get(src[0], src[1], src[2]);
                }
            }
        }
        out
    }

    /// Slices along the last mode, each flattened row-major over the first two.
    fn slices(&self) -> Vec<Vec<FieldElem>> {
        let (a, b, c) = self.dims;
        (0..c)
            .map(|l| (0..a).flat_map(|i| (0..b).map(move |j| (i, j))).map(|(i, j)| self.get(i, j, l)).collect())
            .collect()
    }

    /// Dimension of the span of the slices along each mode; every value is a
    /// lower bound on the rank.
    pub fn slice_span_dims(&self) -> [usize; 3] {
        [[1, 2, 0], [0, 2, 1], [0, 1, 2]].map(|perm| {
            let t = self.permuted(perm);
            let mut s = RowSpace::new(&self.ctx, t.dims.0 * t.dims.1);
            for sl in t.slices() {
                s.insert(&sl);
            }
            s.dim()
        })
    }
}

/// Entry `(a, b, o)` is 1 iff `x_a y_b` occurs in output `o` of the `n x n`
/// matrix product; `a = (i,k)`, `b = (k,j)`, `o = (i,j)` flattened row-major.
pub fn mp_tensor(n: usize, ctx: &FieldCtx) -> Tensor3 {
    let nn = n * n;
    let mut t = Tensor3::zeros(ctx, (nn, nn, nn));
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let idx = t.index(i * n + k, k * n + j, i * n + j);
                t.entries[idx] = ctx.one();
            }
        }
    }
    t
}

/// `sum_r u_r (x) v_r (x) w_r`.
pub fn tensor_from_decomp(d: &BilinearDecomp) -> Tensor3 {
    let (n1, n2, n3) = d.dims();
    Tensor3::from_terms(d.ctx(), (n1 * n2, n2 * n3, n1 * n3), &terms_from_decomp(d)).expect("decomposition shapes")
}

pub fn terms_from_decomp(d: &BilinearDecomp) -> Vec<RankOneTerm> {
    d.triples()
        .iter()
        .map(|t| RankOneTerm {
            u: t.u.coeffs().to_vec(),
            v: t.v.coeffs().to_vec(),
            w: t.w.clone(),
        })
        .collect()
}

/// Coefficients of `(a0 + a1 X)(b0 + b1 X)`: entry `(i, j, l)` is 1 iff `i + j = l`.
pub fn karatsuba_tensor(ctx: &FieldCtx) -> Tensor3 {
    let mut t = Tensor3::zeros(ctx, (2, 2, 3));
    for i in 0..2 {
        for j in 0..2 {
            let idx = t.index(i, j, i + j);
            t.entries[idx] = ctx.one();
        }
    }
    t
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankDecision {
    Found(Vec<RankOneTerm>),
    /// Complete search: the rank exceeds the budget.
    ExhaustedNo,
    TimedOut,
}

/// Nonzero vectors with first nonzero coordinate 1, in index order.
fn normalized_vectors(ctx: &FieldCtx, len: usize) -> Vec<Vec<FieldElem>> {
    let q = ctx.order();
    let total = q.pow(len as u32);
    (1..total)
        .map(|mut idx| {
            (0..len)
                .map(|_| {
                    let d = idx % q;
                    idx /= q;
                    ctx.elem(d).expect("digit below order")
                })
                .collect::<Vec<_>>()
        })
        .filter(|v| v.iter().find(|e| !e.is_zero()) == Some(&ctx.one()))
        .collect()
}

struct Search {
    ctx: FieldCtx,
    cands: Vec<Vec<FieldElem>>,
    /// Independent slices.
    slices: Vec<Vec<FieldElem>>,
    deadline: Option<Instant>,
    timed_out: bool,
    chosen: Vec<usize>,
}

impl Search {
    fn residual(&self, w: &RowSpace) -> (usize, RowSpace) {
        let mut sw = w.clone();
        for row in &self.slices {
            sw.insert(row);
        }
        (sw.dim() - w.dim(), sw)
    }

    fn dfs(&mut self, w: &RowSpace, start: usize, remaining: usize) -> bool {
        if let Some(dl) = self.deadline {
            if Instant::now() >= dl {
                self.timed_out = true;
                return false;
            }
        }
        let (res, sw) = self.residual(w);
        if res == 0 {
            return true;
        }
        if res > remaining {
            return false;
        }
        let tight = res == remaining;
        for idx in start..self.cands.len() {
            if self.timed_out {
                return false;
            }
            let cand = &self.cands[idx];
            if w.contains(cand) || (tight && !sw.contains(cand)) {
                continue;
            }
            let mut next = w.clone();
            next.insert(cand);
            self.chosen.push(idx);
            if self.dfs(&next, idx + 1, remaining - 1) {
                return true;
            }
            self.chosen.pop();
        }
        false
    }
}

/// Solves `slice_l = sum_r w_{l,r} R_r` for independent `R_r`.
fn solve_coefficients(ctx: &FieldCtx, rs: &[Vec<FieldElem>], slices: &[Vec<FieldElem>]) -> Option<Vec<Vec<FieldElem>>> {
    let r = rs.len();
    let len = slices.first().map_or(0, |s| s.len());
    let ncols = r + slices.len();
    let mut rows: Vec<Vec<FieldElem>> = (0..len)
        .map(|e| rs.iter().map(|v| v[e]).chain(slices.iter().map(|s| s[e])).collect())
        .collect();
    let pivots = echelonize(ctx, &mut rows, ncols);
    if pivots.iter().any(|&p| p >= r) {
        return None;
    }
    let mut w = vec![vec![FieldElem::ZERO; r]; slices.len()];
    for (row, &p) in rows.iter().zip(&pivots) {
        for (l, wl) in w.iter_mut().enumerate() {
            wl[p] = row[r + l];
        }
    }
    Some(w)
}

/// Decides whether `t` has rank at most `r`.
///
/// `Found` carries a decomposition re-verified against `t`; `ExhaustedNo`
/// proves the rank exceeds `r`.
pub fn rank_decide(t: &Tensor3, r: usize, time_limit: Option<Duration>) -> Result<RankDecision> {
    let deadline = time_limit.map(|d| Instant::now() + d);
    rank_decide_until(t, r, deadline)
}

fn mode_choice(t: &Tensor3) -> Result<[usize; 3]> {
    let q = t.ctx.order();
    let d = [t.dims.0, t.dims.1, t.dims.2];
    let perm = [[0, 1, 2], [0, 2, 1], [1, 2, 0]]
        .into_iter()
        .min_by_key(|p| d[p[0]] + d[p[1]])
        .expect("nonempty");
    let space = q.checked_pow((d[perm[0]] + d[perm[1]]) as u32);
    if space.map_or(true, |s| s > MAX_CANDIDATE_SPACE) {
        return Err(Error::FieldTooLarge {
            p: t.ctx.p(),
            d: t.ctx.degree(),
            what: "rank search over these tensor dimensions",
        });
    }
    Ok(perm)
}

fn rank_decide_until(t: &Tensor3, r: usize, deadline: Option<Instant>) -> Result<RankDecision> {
    let perm = mode_choice(t)?;
    let pt = t.permuted(perm);
    let (a, b, _) = pt.dims;
    let f = &t.ctx;
    let us = normalized_vectors(f, a);
    let vs = normalized_vectors(f, b);
    let cands: Vec<Vec<FieldElem>> = us
        .iter()
        .flat_map(|u| vs.iter().map(move |v| u.iter().flat_map(|&x| v.iter().map(move |&y| f.mul(x, y))).collect()))
        .collect();
    let slices = pt.slices();
    let mut span = RowSpace::new(f, a * b);
    let basis: Vec<Vec<FieldElem>> = slices.iter().filter(|s| span.insert(s)).cloned().collect();
    let mut search = Search {
        ctx: f.clone(),
        cands,
        slices: basis,
        deadline,
        timed_out: false,
        chosen: Vec::new(),
    };
    let found = search.dfs(&RowSpace::new(f, a * b), 0, r);
    if !found {
        return Ok(if search.timed_out {
            RankDecision::TimedOut
        } else {
            RankDecision::ExhaustedNo
        });
    }
    let rs: Vec<Vec<FieldElem>> = search.chosen.iter().map(|&i| search.cands[i].clone()).collect();
    let w = solve_coefficients(&search.ctx, &rs, &slices).expect("chosen terms span every slice");
    let nv = vs.len();
    // undo the mode permutation: term mode perm[m] gets vector of permuted mode m
    let terms: Vec<RankOneTerm> = search
        .chosen
        .iter()
        .enumerate()
        .map(|(ri, &ci)| {
            let by_mode = [us[ci / nv].clone(), vs[ci % nv].clone(), w.iter().map(|wl| wl[ri]).collect()];
            let mut orig: [Vec<FieldElem>; 3] = Default::default();
            for m in 0..3 {
                orig[perm[m]] = by_mode[m].clone();
            }
            let [u, v, w] = orig;
            RankOneTerm { u, v, w }
        })
        .collect();
    if Tensor3::from_terms(f, t.dims, &terms)? != *t {
        return Err(Error::Certificate {
            step: "rank_decide".into(),
            detail: "recovered decomposition does not reproduce the tensor".into(),
        });
    }
    Ok(RankDecision::Found(terms))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    /// Proven lower bound.
    pub lower: usize,
    /// Size of the best decomposition known.
    pub upper: usize,
    pub witness: Vec<RankOneTerm>,
    /// Some decision timed out before the interval closed.
    pub timed_out: bool,
}

impl RankReport {
    pub fn exact(&self) -> bool {
        self.lower == self.upper
    }
}

/// Rank of `t`, or an interval if the time limit runs out.
///
/// Decompositions in `witnesses` that reproduce `t` seed the upper bound;
/// the trivial decomposition along the smallest pair of modes is always
/// available. Budgets are refuted upward from the largest slice-span
/// dimension.
pub fn rank(t: &Tensor3, time_limit: Option<Duration>, witnesses: &[Vec<RankOneTerm>]) -> Result<RankReport> {
    mode_choice(t)?;
    let deadline = time_limit.map(|d| Instant::now() + d);
    let mut best: Option<Vec<RankOneTerm>> = None;
    for wit in witnesses {
        if Tensor3::from_terms(&t.ctx, t.dims, wit).is_ok_and(|s| s == *t) && best.as_ref().map_or(true, |b| wit.len() < b.len()) {
            best = Some(wit.clone());
        }
    }
    let trivial = trivial_terms(t);
    if best.as_ref().map_or(true, |b| trivial.len() < b.len()) {
        best = Some(trivial);
    }
    let mut witness = best.expect("trivial decomposition exists");
    let mut lower = t.slice_span_dims().into_iter().max().unwrap_or(0);
    let mut timed_out = false;
    while lower < witness.len() {
        match rank_decide_until(t, lower, deadline)? {
            RankDecision::Found(terms) => witness = terms,
            RankDecision::ExhaustedNo => lower += 1,
            RankDecision::TimedOut => {
                timed_out = true;
                break;
            }
        }
    }
    Ok(RankReport {
        lower,
        upper: witness.len(),
        witness,
        timed_out,
    })
}

/// One term per nonzero `(i, j)` fiber: `e_i (x) e_j (x) t[i, j, :]`, taken
/// along whichever mode yields fewest terms.
fn trivial_terms(t: &Tensor3) -> Vec<RankOneTerm> {
    let f = &t.ctx;
    let (d1, d2, d3) = t.dims;
    let unit = |len: usize, i: usize| {
        let mut v = vec![FieldElem::ZERO; len];
        v[i] = f.one();
        v
    };
    let mut options: Vec<Vec<RankOneTerm>> = Vec::new();
    let mut a = Vec::new();
    for i in 0..d1 {
        for j in 0..d2 {
            let w: Vec<FieldElem> = (0..d3).map(|l| t.get(i, j, l)).collect();
            if w.iter().any(|e| !e.is_zero()) {
                a.push(RankOneTerm { u: unit(d1, i), v: unit(d2, j), w });
            }
        }
    }
    options.push(a);
    let mut b = Vec::new();
    for i in 0..d1 {
        for l in 0..d3 {
            let v: Vec<FieldElem> = (0..d2).map(|j| t.get(i, j, l)).collect();
            if v.iter().any(|e| !e.is_zero()) {
                b.push(RankOneTerm { u: unit(d1, i), v, w: unit(d3, l) });
            }
        }
    }
    options.push(b);
    let mut c = Vec::new();
    for j in 0..d2 {
        for l in 0..d3 {
            let u: Vec<FieldElem> = (0..d1).map(|i| t.get(i, j, l)).collect();
            if u.iter().any(|e| !e.is_zero()) {
                c.push(RankOneTerm { u, v: unit(d2, j), w: unit(d3, l) });
            }
        }
    }
    options.push(c);
    options.into_iter().min_by_key(|o| o.len()).expect("three options")
}
