//! Nonzero-point search for black-box polynomials.
//!
//! [`find_sparse_witness`] looks for a point of `P(a_1, ..., a_k)` written in
//! dual-basis coordinates `a_j = sum_i alpha_{j,i} b_i` whose support is at
//! most the degree bound. Variables are flattened as `j * n^2 + i`.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::VanishWitness;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::matspace::{LinForm, Mat};

/// Sub-searches during support descent enumerate all assignments up to this
/// many points and sample this many otherwise.
const DESCENT_STEP_CAP: u64 = 1 << 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub seed: u64,
    /// Random evaluations for plain nonzero-point search and random subsets.
    pub budget: u64,
    /// Largest number of `(support, values)` candidates enumerated exhaustively.
    pub exhaustive_limit: u64,
    /// Evaluations allowed while shrinking the support of a known point.
    pub descent_budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 0,
            budget: 100_000,
            exhaustive_limit: 10_000_000,
            descent_budget: 5_000_000,
        }
    }
}

impl SearchConfig {
    pub fn with_seed(seed: u64) -> Self {
        SearchConfig {
            seed,
            ..Default::default()
        }
    }
}

/// Finds `rho` with `P(rho) != 0`.
///
/// Hints are tried first. When the whole space has at most `budget` points
/// it is enumerated in index order (so `NotFound` then proves `P = 0`);
/// otherwise seeded random points are drawn.
pub fn find_nonzero_assignment(
    poly: &dyn Fn(&[FieldElem]) -> FieldElem,
    nvars: usize,
    degree: usize,
    ctx: &FieldCtx,
    hints: &[Vec<FieldElem>],
    cfg: &SearchConfig,
) -> Result<Vec<FieldElem>> {
    let mut evaluations = 0u64;
    for h in hints {
        if h.len() == nvars && h.iter().all(|&a| ctx.contains(a)) {
            evaluations += 1;
            if !poly(h).is_zero() {
                return Ok(h.clone());
            }
        }
    }
    let q = ctx.order();
    if let Some(total) = q.checked_pow(nvars as u32).filter(|&t| t <= cfg.budget) {
        let mut point = vec![FieldElem::ZERO; nvars];
        for mut idx in 0..total {
            for slot in point.iter_mut() {
                *slot = ctx.elem(idx % q).expect("digit below order");
                idx /= q;
            }
            evaluations += 1;
            if !poly(&point).is_zero() {
                return Ok(point);
            }
        }
        return Err(Error::NotFound {
            what: format!("polynomial in {nvars} variables vanishes on all {total} points"),
            evaluations,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.budget {
        let point: Vec<FieldElem> = (0..nvars).map(|_| ctx.random(&mut rng)).collect();
        evaluations += 1;
        if !poly(&point).is_zero() {
            return Ok(point);
        }
    }
    Err(Error::NotFound {
        what: format!("nonzero point of a degree-{degree} polynomial in {nvars} variables"),
        evaluations,
    })
}

/// Forms `mu_i` with `mu_i(b_j) = delta_ij`.
fn forms_of_duals(duals: &[Mat]) -> Result<Vec<LinForm>> {
    let first = duals.first().ok_or_else(|| Error::Dependent("empty dual basis".into()))?;
    let (ctx, n) = (first.ctx().clone(), first.rows());
    let nn = n * n;
    if duals.len() != nn || duals.iter().any(|b| (b.rows(), b.cols()) != (n, n) || b.ctx() != &ctx) {
        return Err(Error::Dependent(format!("expected {nn} dual matrices of size {n}x{n}")));
    }
    let cols = Mat::from_elems(&ctx, nn, nn, (0..nn).flat_map(|r| duals.iter().map(move |b| b.entries()[r])).collect())?;
    let inv = cols.inverse().map_err(|_| Error::Dependent("dual matrices are linearly dependent".into()))?;
    (0..nn).map(|i| LinForm::new(&ctx, inv.row(i).to_vec())).collect()
}

struct Sparse<'a> {
    poly: &'a dyn Fn(&[Mat]) -> FieldElem,
    duals: &'a [Mat],
    ctx: FieldCtx,
    n: usize,
    k: usize,
    evaluations: u64,
}

impl Sparse<'_> {
    fn nvars(&self) -> usize {
        self.k * self.n * self.n
    }

    fn materialize(&self, alpha: &[FieldElem]) -> Vec<Mat> {
        let f = &self.ctx;
        let nn = self.n * self.n;
        (0..self.k)
            .map(|j| {
                let mut data = vec![FieldElem::ZERO; nn];
                for (i, &c) in alpha[j * nn..(j + 1) * nn].iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (slot, &e) in data.iter_mut().zip(self.duals[i].entries()) {
                        *slot = f.add(*slot, f.mul(c, e));
                    }
                }
                Mat::from_elems(f, self.n, self.n, data).expect("shape")
            })
            .collect()
    }

    fn nonzero(&mut self, alpha: &[FieldElem]) -> bool {
        self.evaluations += 1;
        !(self.poly)(&self.materialize(alpha)).is_zero()
    }

    /// First nonzero point over supports of size `0..=max_size`, ordered by
    /// size, then support lexicographically, then values lexicographically.
    fn exhaustive(&mut self, max_size: usize) -> Option<Vec<FieldElem>> {
        let nv = self.nvars();
        let q = self.ctx.order();
        let mut alpha = vec![FieldElem::ZERO; nv];
        for s in 0..=max_size.min(nv) {
            let mut supp: Vec<usize> = (0..s).collect();
            loop {
                let mut digits = vec![1u64; s];
                loop {
                    for (&v, &dg) in supp.iter().zip(&digits) {
                        alpha[v] = self.ctx.elem(dg).expect("digit below order");
                    }
                    if self.nonzero(&alpha) {
                        return Some(alpha);
                    }
                    let Some(pos) = (0..s).rev().find(|&i| digits[i] + 1 < q) else {
                        break;
                    };
                    digits[pos] += 1;
                    digits[pos + 1..].iter_mut().for_each(|d| *d = 1);
                }
                for &v in &supp {
                    alpha[v] = FieldElem::ZERO;
                }
                let Some(pos) = (0..s).rev().find(|&i| supp[i] < nv - s + i) else {
                    break;
                };
                supp[pos] += 1;
                for i in pos + 1..s {
                    supp[i] = supp[i - 1] + 1;
                }
            }
        }
        None
    }

    /// Shrinks the support of a nonzero point one variable at a time until it
    /// has at most `target` entries, then keeps zeroing single entries while
    /// that alone preserves nonvanishing.
    fn descend(&mut self, mut alpha: Vec<FieldElem>, target: usize, budget: u64, rng: &mut ChaCha8Rng) -> Vec<FieldElem> {
        let start = self.evaluations;
        let q = self.ctx.order();
        'outer: loop {
            let supp = support_of(&alpha);
            for &v in &supp {
                let mut trial = alpha.clone();
                trial[v] = FieldElem::ZERO;
                if self.nonzero(&trial) {
                    alpha = trial;
                    continue 'outer;
                }
            }
            if supp.len() <= target {
                return alpha;
            }
            for &v in &supp {
                if self.evaluations - start >= budget {
                    return alpha;
                }
                let rest: Vec<usize> = supp.iter().copied().filter(|&w| w != v).collect();
                let mut trial = alpha.clone();
                trial[v] = FieldElem::ZERO;
                let total = q.checked_pow(rest.len() as u32).filter(|&t| t <= DESCENT_STEP_CAP);
                let tries = total.unwrap_or(DESCENT_STEP_CAP);
                for idx in 0..tries {
                    let mut x = idx;
                    for &w in &rest {
                        trial[w] = if total.is_some() {
                            let d = x % q;
                            x /= q;
                            self.ctx.elem(d).expect("digit below order")
                        } else {
                            self.ctx.random(rng)
                        };
                    }
                    if self.nonzero(&trial) {
                        alpha = trial;
                        continue 'outer;
                    }
                }
            }
            return alpha;
        }
    }

    /// Random supports of size `size` with random nonzero values.
    fn random_subsets(&mut self, size: usize, budget: u64, rng: &mut ChaCha8Rng) -> Option<Vec<FieldElem>> {
        let nv = self.nvars();
        for _ in 0..budget {
            let mut alpha = vec![FieldElem::ZERO; nv];
            for v in sample(rng, nv, size.min(nv)) {
                alpha[v] = self.ctx.random_nonzero(rng);
            }
            if self.nonzero(&alpha) {
                return Some(alpha);
            }
        }
        None
    }
}

fn support_of(alpha: &[FieldElem]) -> Vec<usize> {
    alpha.iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(i, _)| i).collect()
}

fn candidate_count(nv: usize, max_size: usize, q: u64) -> u128 {
    let mut total: u128 = 0;
    let mut choose: u128 = 1;
    let mut values: u128 = 1;
    for s in 0..=max_size.min(nv) {
        if s > 0 {
            choose = choose * (nv - s + 1) as u128 / s as u128;
            values = values.saturating_mul((q - 1) as u128);
        }
        total = total.saturating_add(choose.saturating_mul(values));
    }
    total
}

/// Finds matrices `a_1, ..., a_k` with `P != 0` whose dual-basis coordinates
/// have at most `min(degree, k n^2)` nonzero entries.
///
/// Hints are converted to coordinates; the sparsest nonvanishing hint within
/// the bound is returned unless an exhaustive scan of strictly smaller
/// supports finds something. Without such a hint, supports up to the bound
/// are scanned exhaustively when at most `exhaustive_limit` candidates exist.
/// Larger instances shrink a hint (or a random sparse point) by descent.
/// `vanishing` lists the dual coordinates `mu_i` zero on every matrix.
pub fn find_sparse_witness(
    poly: &dyn Fn(&[Mat]) -> FieldElem,
    degree: usize,
    duals: &[Mat],
    k: usize,
    hints: &[Vec<Mat>],
    cfg: &SearchConfig,
) -> Result<VanishWitness> {
    let mu = forms_of_duals(duals)?;
    let first = &duals[0];
    let mut s = Sparse {
        poly,
        duals,
        ctx: first.ctx().clone(),
        n: first.rows(),
        k,
        evaluations: 0,
    };
    let nn = s.n * s.n;
    let nv = s.nvars();
    let limit = degree.min(nv);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut best_hint: Option<Vec<FieldElem>> = None;
    for h in hints {
        if h.len() != k || h.iter().any(|a| (a.rows(), a.cols()) != (s.n, s.n) || a.ctx() != &s.ctx) {
            continue;
        }
        let alpha: Vec<FieldElem> = h
            .iter()
            .flat_map(|a| mu.iter().map(move |f| f.eval_unchecked(a.entries())))
            .collect();
        if s.nonzero(&alpha) && best_hint.as_ref().map_or(true, |b| support_of(b).len() > support_of(&alpha).len()) {
            best_hint = Some(alpha);
        }
    }
    let hint_size = best_hint.as_ref().map(|a| support_of(a).len());
    let hint_fits = hint_size.is_some_and(|h| h <= limit);

    let finish = |s: &Sparse, alpha: Vec<FieldElem>| -> Result<VanishWitness> {
        let support = support_of(&alpha).into_iter().map(|v| (v / nn, v % nn)).collect();
        VanishWitness::new(s.materialize(&alpha), &mu, support)
    };

    let scan_up_to = match hint_size {
        Some(0) if hint_fits => None,
        Some(h) if hint_fits => Some(h - 1),
        _ => Some(limit),
    };
    if let Some(max) = scan_up_to {
        if candidate_count(nv, max, s.ctx.order()) <= cfg.exhaustive_limit as u128 {
            if let Some(alpha) = s.exhaustive(max) {
                return finish(&s, alpha);
            }
            if !hint_fits {
                return Err(Error::NotFound {
                    what: format!("no nonzero point with support at most {limit} (complete scan)"),
                    evaluations: s.evaluations,
                });
            }
        }
    }
    let start = match best_hint {
        Some(alpha) => alpha,
        None => match s.random_subsets(limit, cfg.budget, &mut rng) {
            Some(alpha) => alpha,
            None => {
                return Err(Error::NotFound {
                    what: format!("nonzero point on random supports of size {limit}"),
                    evaluations: s.evaluations,
                })
            }
        },
    };
    let alpha = s.descend(start, limit, cfg.descent_budget, &mut rng);
    if support_of(&alpha).len() > limit {
        return Err(Error::NotFound {
            what: format!(
                "support descent stopped at {} coordinates, bound is {limit}",
                support_of(&alpha).len()
            ),
            evaluations: s.evaluations,
        });
    }
    finish(&s, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_context;
    use crate::matspace::dual_basis;

    fn gf(p: u64) -> FieldCtx {
        make_context(p, 1).unwrap()
    }

    fn standard_duals(f: &FieldCtx, n: usize) -> Vec<Mat> {
        let forms: Vec<LinForm> = (0..n * n).map(|i| LinForm::coordinate(f, n * n, i)).collect();
        dual_basis(&forms, n).unwrap()
    }

    #[test]
    fn nonzero_assignment_examples() {
        let f2 = gf(2);
        let cfg = SearchConfig::default();
        let xy = |v: &[FieldElem]| f2.mul(v[0], v[1]);
        let pt = find_nonzero_assignment(&xy, 2, 2, &f2, &[], &cfg).unwrap();
        assert_eq!(pt, vec![f2.one(), f2.one()]);
        let det = |v: &[FieldElem]| Mat::from_elems(&f2, 2, 2, v.to_vec()).unwrap().det().unwrap();
        let pt = find_nonzero_assignment(&det, 4, 2, &f2, &[], &cfg).unwrap();
        assert!(Mat::from_elems(&f2, 2, 2, pt).unwrap().is_invertible());
        let zero = |_: &[FieldElem]| FieldElem::ZERO;
        assert!(matches!(
            find_nonzero_assignment(&zero, 3, 1, &f2, &[], &cfg),
            Err(Error::NotFound { evaluations: 8, .. })
        ));
    }

    #[test]
    fn nonzero_assignment_random_phase() {
        let f = gf(101);
        let cfg = SearchConfig {
            budget: 1000,
            ..Default::default()
        };
        // x0 * x1 * x2 * x3 vanishes on a small fraction of points
        let prod = |v: &[FieldElem]| v.iter().fold(f.one(), |acc, &x| f.mul(acc, x));
        let pt = find_nonzero_assignment(&prod, 4, 4, &f, &[], &cfg).unwrap();
        assert!(!prod(&pt).is_zero());
        let hint = vec![f.from_int(3); 4];
        assert_eq!(find_nonzero_assignment(&prod, 4, 4, &f, &[hint.clone()], &cfg).unwrap(), hint);
    }

    #[test]
    fn sparse_without_hint_is_lexicographic() {
        let f2 = gf(2);
        let duals = standard_duals(&f2, 2);
        let p = |m: &[Mat]| m[0].sub(&m[1]).unwrap().det().unwrap();
        let w = find_sparse_witness(&p, 2, &duals, 2, &[], &SearchConfig::default()).unwrap();
        assert_eq!(w.mats, vec![Mat::identity(&f2, 2), Mat::zeros(&f2, 2, 2)]);
        assert_eq!(w.support, vec![(0, 0), (0, 3)]);
        assert_eq!(w.vanishing, vec![1, 2]);
    }

    #[test]
    fn sparse_with_hint() {
        let f2 = gf(2);
        let duals = standard_duals(&f2, 2);
        let p = |m: &[Mat]| m[0].sub(&m[1]).unwrap().det().unwrap();
        let hint = vec![Mat::zeros(&f2, 2, 2), Mat::identity(&f2, 2)];
        let w = find_sparse_witness(&p, 2, &duals, 2, &[hint.clone()], &SearchConfig::default()).unwrap();
        assert_eq!(w.mats, hint);
        assert_eq!(w.vanishing, vec![1, 2]);
        assert_eq!(w.support, vec![(1, 0), (1, 3)]);
    }

    #[test]
    fn sparse_constant_and_zero() {
        let f3 = gf(3);
        let duals = standard_duals(&f3, 2);
        let one = |_: &[Mat]| f3.one();
        let w = find_sparse_witness(&one, 0, &duals, 3, &[], &SearchConfig::default()).unwrap();
        assert!(w.support.is_empty());
        assert!(w.mats.iter().all(|m| m.is_zero()));
        assert_eq!(w.vanishing, vec![0, 1, 2, 3]);
        let zero = |_: &[Mat]| FieldElem::ZERO;
        assert!(matches!(
            find_sparse_witness(&zero, 1, &duals, 1, &[], &SearchConfig::default()),
            Err(Error::NotFound { .. })
        ));
    }

    #[test]
    fn slack_bound_accepts_any_point() {
        let f2 = gf(2);
        let duals = standard_duals(&f2, 2);
        let p = |m: &[Mat]| m[0].det().unwrap();
        let w = find_sparse_witness(&p, 100, &duals, 1, &[], &SearchConfig::default()).unwrap();
        assert!(w.mats[0].is_invertible());
    }

    #[test]
    fn descent_shrinks_dense_hint() {
        let f2 = gf(2);
        let n = 3;
        let duals = standard_duals(&f2, n);
        let p = |m: &[Mat]| m[0].sub(&m[1]).unwrap().det().unwrap();
        // a dense pair whose difference is invertible
        let a = Mat::from_ints(&f2, 3, 3, &[1, 1, 0, 1, 0, 1, 0, 1, 1]).unwrap();
        let b = Mat::from_ints(&f2, 3, 3, &[0, 1, 1, 1, 1, 1, 1, 0, 1]).unwrap();
        assert!(a.sub(&b).unwrap().is_invertible());
        let cfg = SearchConfig {
            exhaustive_limit: 0,
            ..Default::default()
        };
        let w = find_sparse_witness(&p, 3, &duals, 2, &[vec![a, b]], &cfg).unwrap();
        assert!(w.support.len() <= 3);
        assert!(w.mats[0].sub(&w.mats[1]).unwrap().is_invertible());
        assert!(w.vanishing.len() >= 6);
    }

    #[test]
    fn nonstandard_duals() {
        let f3 = gf(3);
        let forms = vec![
            LinForm::from_ints(&f3, &[1, 0, 0, 1]).unwrap(),
            LinForm::from_ints(&f3, &[0, 1, 0, 0]).unwrap(),
            LinForm::from_ints(&f3, &[0, 0, 1, 0]).unwrap(),
            LinForm::from_ints(&f3, &[0, 0, 0, 1]).unwrap(),
        ];
        let duals = dual_basis(&forms, 2).unwrap();
        assert_eq!(forms_of_duals(&duals).unwrap(), forms);
        let p = |m: &[Mat]| m[0].det().unwrap();
        let w = find_sparse_witness(&p, 2, &duals, 1, &[], &SearchConfig::default()).unwrap();
        assert!(w.mats[0].is_invertible());
        for &i in &w.vanishing {
            assert!(forms[i].eval(w.mats[0].entries()).unwrap().is_zero());
        }
        assert_eq!(w.vanishing.len(), 4 - w.support.len());
    }

    #[test]
    fn candidate_counts() {
        assert_eq!(candidate_count(4, 0, 2), 1);
        assert_eq!(candidate_count(4, 2, 2), 1 + 4 + 6);
        assert_eq!(candidate_count(4, 2, 3), 1 + 8 + 24);
    }
}
