//! One-shot verification runners, one per proof ingredient.
//!
//! Each runner performs exhaustive checks at small sizes and seeded sampled
//! checks beyond, and reports the number of instances examined.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuits::{naive_decomp, sandwich, strassen_decomp, to_quadratic, BilinearDecomp};
use crate::embed::{base_field, embed_elem};
use crate::error::Result;
use crate::field::{is_prime, make_context, FieldCtx, FieldElem};
use crate::lowerbound::{
    best_agreeing_pair, best_agreeing_triple, blaser_certificate, commutator_family, find_nonzero_assignment,
    find_sparse_witness, pair_bound_holds, plotkin_min_length_over, triple_bound_holds, vanish_family, SearchConfig,
};
use crate::matcodes::{
    check_rank_distance, code_from_bilinear, code_from_quadratic, derivative_span_check, hamming,
    trace_identity_check, CheckMode,
};
use crate::matspace::{dual_basis, select_independent, LinForm, Mat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LemmaLimits {
    pub seed: u64,
    /// Random instances for sampled parts.
    pub samples: u64,
}

impl Default for LemmaLimits {
    fn default() -> Self {
        LemmaLimits {
            seed: 0,
            samples: 100_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub name: &'static str,
    pub passed: bool,
    pub instances: u64,
    pub detail: String,
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {} instances={} {}", self.name, self.instances, self.detail)
    }
}

type Runner = fn(&LemmaLimits) -> Result<LemmaReport>;

pub const LEMMA_NAMES: [&str; 13] = [
    "nonzero-point",
    "sparse-witness",
    "embed",
    "intersect",
    "distance",
    "difference-family",
    "code-distance",
    "trace-identity",
    "derivative-span",
    "inverse-pair",
    "commutator-pair",
    "commutator-family",
    "commutator-bound",
];

fn runner(name: &str) -> Option<Runner> {
    Some(match name {
        "nonzero-point" => nonzero_point,
        "sparse-witness" => sparse_witness,
        "embed" => embedding,
        "intersect" => intersect,
        "distance" => distance,
        "difference-family" => difference_family,
        "code-distance" => code_distance,
        "trace-identity" => trace_identity,
        "derivative-span" => derivative_span,
        "inverse-pair" => inverse_pair,
        "commutator-pair" => commutator_pair,
        "commutator-family" => commutator_family_runner,
        "commutator-bound" => commutator_bound,
        _ => return None,
    })
}

/// Runs one named runner, or all of them for `"all"`. Errors raised inside a
/// runner become failing reports.
pub fn run(scope: &str, limits: &LemmaLimits) -> Option<Vec<LemmaReport>> {
    let names: Vec<&'static str> = if scope == "all" {
        LEMMA_NAMES.to_vec()
    } else {
        vec![*LEMMA_NAMES.iter().find(|&&n| n == scope)?]
    };
    Some(
        names
            .into_iter()
            .map(|name| {
                runner(name).expect("listed")(limits).unwrap_or_else(|e| LemmaReport {
                    name,
                    passed: false,
                    instances: 0,
                    detail: format!("error: {e}"),
                })
            })
            .collect(),
    )
}

struct Tally {
    name: &'static str,
    instances: u64,
    failures: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            instances: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        }
    }

    fn report(self, detail: impl Into<String>) -> Result<LemmaReport> {
        let passed = self.failures.is_empty();
        let detail = if passed {
            detail.into()
        } else {
            format!("first failures: {}", self.failures.join("; "))
        };
        Ok(LemmaReport {
            name: self.name,
            passed,
            instances: self.instances,
            detail,
        })
    }
}

fn gf(p: u64) -> FieldCtx {
    make_context(p, 1).expect("small prime")
}

fn coordinate_forms(f: &FieldCtx, n: usize) -> Vec<LinForm> {
    (0..n * n).map(|i| LinForm::coordinate(f, n * n, i)).collect()
}

/// Rows of a random invertible matrix: `n^2` independent forms.
fn random_forms(f: &FieldCtx, n: usize, rng: &mut ChaCha8Rng) -> Vec<LinForm> {
    let m = Mat::random_invertible(f, n * n, rng);
    (0..n * n).map(|i| LinForm::new(f, m.row(i).to_vec()).expect("row")).collect()
}

fn standard_circuits(f: &FieldCtx) -> Vec<(String, BilinearDecomp)> {
    let mut out: Vec<(String, BilinearDecomp)> = (2..=3).map(|n| (format!("naive{n}"), naive_decomp(n, f))).collect();
    out.push(("strassen".into(), strassen_decomp(f)));
    out
}

fn nonzero_point(l: &LemmaLimits) -> Result<LemmaReport> {
    let mut tally = Tally::new("nonzero-point");
    let mut rng = ChaCha8Rng::seed_from_u64(l.seed);
    let cfg = SearchConfig::with_seed(l.seed);
    for p in [5u64, 7, 11] {
        let f = gf(p);
        for _ in 0..(l.samples / 1000).max(20) {
            let nvars = rng.gen_range(1..=4);
            let degree = rng.gen_range(1..p as usize);
            // product of `degree` nonzero affine forms
            let factors: Vec<Vec<FieldElem>> = (0..degree)
                .map(|_| loop {
                    let v: Vec<FieldElem> = (0..=nvars).map(|_| f.random(&mut rng)).collect();
                    if v[1..].iter().any(|e| !e.is_zero()) {
                        break v;
                    }
                })
                .collect();
            let poly = |x: &[FieldElem]| {
                factors.iter().fold(f.one(), |acc, c| {
                    let val = x.iter().zip(&c[1..]).fold(c[0], |s, (&xi, &ci)| f.add(s, f.mul(xi, ci)));
                    f.mul(acc, val)
                })
            };
            let pt = find_nonzero_assignment(&poly, nvars, degree, &f, &[], &cfg);
            tally.check(pt.as_ref().is_ok_and(|v| !poly(v).is_zero()), || format!("GF({p}) degree {degree}"));
            if nvars <= 3 {
                // zero fraction at most degree / p
                let total = p.pow(nvars as u32);
                let zeros = (0..total)
                    .filter(|&idx| {
                        let x: Vec<FieldElem> = (0..nvars).map(|i| f.elem(idx / p.pow(i as u32) % p).unwrap()).collect();
                        poly(&x).is_zero()
                    })
                    .count() as u64;
                tally.check(zeros * p <= degree as u64 * total, || format!("GF({p}): {zeros} zeros of {total}"));
            }
        }
        let zero = |_: &[FieldElem]| FieldElem::ZERO;
        tally.check(find_nonzero_assignment(&zero, 2, 1, &f, &[], &cfg).is_err(), || "zero polynomial".into());
    }
    tally.report("random products of affine forms over GF(5), GF(7), GF(11)")
}

fn sparse_witness(l: &LemmaLimits) -> Result<LemmaReport> {
    let mut tally = Tally::new("sparse-witness");
    let mut rng = ChaCha8Rng::seed_from_u64(l.seed);
    let cfg = SearchConfig::with_seed(l.seed);
    for p in [2u64, 3] {
        let f = gf(p);
        for trial in 0..40 {
            let n = 2;
            let forms = if trial == 0 { coordinate_forms(&f, n) } else { random_forms(&f, n, &mut rng) };
            let duals = dual_basis(&forms, n)?;
            let k = 1 + trial % 2;
            let poly = |m: &[Mat]| {
                let x = if k == 1 { m[0].clone() } else { m[0].sub(&m[1]).unwrap() };
                x.det().unwrap()
            };
            let d = n;
            match find_sparse_witness(&poly, d, &duals, k, &[], &cfg) {
                Ok(w) => {
                    let nonzero = !poly(&w.mats).is_zero();
                    let sparse = w.support.len() <= d;
                    let vanish = crate::lowerbound::forms_vanishing_on(&forms, &w.mats)?.len() >= n * n - d;
                    tally.check(nonzero && sparse && vanish, || format!("GF({p}) trial {trial}"));
                }
                Err(e) => tally.check(false, || format!("GF({p}) trial {trial}: {e}")),
            }
        }
    }
    tally.report("det-type polynomials, support <= degree and n^2 - d vanishing forms")
}

fn embedding(_: &LemmaLimits) -> Result<LemmaReport> {
    let mut tally = Tally::new("embed");
    let mut fields = 0;
    for p in (2u64..=4096).filter(|&p| is_prime(p)) {
        let mut order = p;
        let mut n = 1;
        while order <= 1 << 12 {
            fields += 1;
            check_embedding(&mut tally, &make_context(p, n)?)?;
            n += 1;
            order *= p;
        }
    }
    tally.report(format!("{fields} fields with p^n <= 2^12, every element"))
}

/// Every element `x`: `phi(x + y) = phi(x) + phi(y)` for basis `y`,
/// `phi(x t) = phi(x) phi(t)`, injectivity, and `x != 0 => phi(x)` invertible.
/// With linearity these give multiplicativity on all pairs, which is also
/// checked directly when the field has at most 256 elements.
fn check_embedding(tally: &mut Tally, ext: &FieldCtx) -> Result<()> {
    let n = ext.degree();
    let base = base_field(ext);
    let elems = ext.enumerate()?;
    let images: Vec<Mat> = elems.iter().map(|&x| embed_elem(ext, x)).collect::<Result<_>>()?;
    let name = ext.name();
    tally.check(images[1] == Mat::identity(&base, n), || format!("{name}: phi(1) != I"));
    let basis: Vec<FieldElem> = (0..n)
        .map(|i| ext.from_coeffs(&(0..n).map(|j| u64::from(i == j)).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    let t = if n > 1 { basis[1] } else { ext.one() };
    let phi_t = embed_elem(ext, t)?;
    let distinct: HashSet<&[FieldElem]> = images.iter().map(|m| m.entries()).collect();
    tally.check(distinct.len() == elems.len(), || format!("{name}: not injective"));
    for (&x, phx) in elems.iter().zip(&images) {
        for &y in &basis {
            let lhs = &images[ext.add(x, y).index() as usize];
            tally.check(*lhs == phx.add(&images[y.index() as usize])?, || format!("{name}: additivity at {}", x.index()));
        }
        let lhs = &images[ext.mul(x, t).index() as usize];
        tally.check(*lhs == phx.matmul(&phi_t)?, || format!("{name}: phi(x t) at {}", x.index()));
        tally.check(x.is_zero() || phx.is_invertible(), || format!("{name}: phi({}) singular", x.index()));
    }
    if elems.len() <= 256 {
        for (&x, phx) in elems.iter().zip(&images) {
            for (&y, phy) in elems.iter().zip(&images) {
                let lhs = &images[ext.mul(x, y).index() as usize];
                tally.check(*lhs == phx.matmul(phy)?, || format!("{name}: phi(xy) at ({}, {})", x.index(), y.index()));
            }
        }
    }
    Ok(())
}

/// Calls `visit` on every multiset of `k` indices below `q`, as a
/// nondecreasing index tuple.
fn for_each_multiset(q: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; k];
    loop {
        visit(&idx);
        let Some(pos) = (0..k).rev().find(|&i| idx[i] + 1 < q) else {
            return;
        };
        idx[pos] += 1;
        let v = idx[pos];
        idx[pos + 1..].iter_mut().for_each(|x| *x = v);
    }
}

fn all_vectors(f: &FieldCtx, t: usize) -> Vec<Vec<FieldElem>> {
    let p = f.order();
    (0..p.pow(t as u32))
        .map(|idx| (0..t).map(|i| f.elem(idx / p.pow(i as u32) % p).unwrap()).collect())
        .collect()
}

fn random_vectors(f: &FieldCtx, k: usize, t: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<FieldElem>> {
    (0..k).map(|_| (0..t).map(|_| f.random(rng)).collect()).collect()
}

/// Pair agreement `>= t/p - t/k` for `k > p` and triple agreement
/// `>= t/p^2 - 3t/(pk)` for `k > 2p`.
fn intersect_exhaustive(tally: &mut Tally) {
    for (p, tmax, ks) in [(2u64, 5usize, vec![3usize, 4]), (3, 3, vec![4])] {
        let f = gf(p);
        for t in 1..=tmax {
            let vs = all_vectors(&f, t);
            for &k in &ks {
                for_each_multiset(vs.len(), k, |idx| {
                    let sel: Vec<Vec<FieldElem>> = idx.iter().map(|&i| vs[i].clone()).collect();
                    let (_, _, c) = best_agreeing_pair(&sel).expect("k >= 2");
                    tally.check(pair_bound_holds(c, t, k, p), || format!("pair GF({p}) t={t} k={k} {idx:?}"));
                });
            }
        }
    }
    let f2 = gf(2);
    for t in 1..=4 {
        let vs = all_vectors(&f2, t);
        for_each_multiset(vs.len(), 5, |idx| {
            let sel: Vec<Vec<FieldElem>> = idx.iter().map(|&i| vs[i].clone()).collect();
            let (_, _, _, c) = best_agreeing_triple(&sel).expect("k >= 3");
            tally.check(triple_bound_holds(c, t, 5, 2), || format!("triple t={t} {idx:?}"));
        });
    }
}

fn intersect(l: &LemmaLimits) -> Result<LemmaReport> {
    let mut tally = Tally::new("intersect");
    intersect_exhaustive(&mut tally);
    let exhaustive = tally.instances;
    let mut rng = ChaCha8Rng::seed_from_u64(l.seed);
    for s in 0..l.samples {
        let p = if s % 2 == 0 { 2 } else { 3 };
        let f = gf(p);
        let t = rng.gen_range(1..=24);
        let pair_k = rng.gen_range(p as usize + 1..=12);
        let v = random_vectors(&f, pair_k, t, &mut rng);
        let (_, _, c) = best_agreeing_pair(&v)?;
        tally.check(pair_bound_holds(c, t, pair_k, p), || format!("sampled pair GF({p}) t={t} k={pair_k}"));
        let triple_k = rng.gen_range(2 * p as usize + 1..=10);
        let v = random_vectors(&f, triple_k, t, &mut rng);
        let (_, _, _, c) = best_agreeing_triple(&v)?;
        tally.check(triple_bound_holds(c, t, triple_k, p), || format!("sampled triple GF({p}) t={t} k={triple_k}"));
    }
    tally.report(format!("{exhaustive} exhaustive, {} sampled, each checked for pairs and triples", l.samples))
}

fn distance(_: &LemmaLimits) -> Result<LemmaReport> {
    let mut tally = Tally::new("distance");
    for (p, tmax, ks) in [(2u64, 6usize, vec![3usize, 4]), (3, 3, vec![3, 4])] {
        let f = gf(p);
        for t in 1..=tmax {
            let vs = all_vectors(&f, t);
            for &k in &ks {
                for_each_multiset(vs.len(), k, |idx| {
                    if idx.windows(2).any(|w| w[0] == w[1]) {
                        return;
                    }
                    let dmin = (0..k)
                        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
                        .map(|(i, j)| hamming(&vs[idx[i]], &vs[idx[j]]))
                        .min()
                        .unwrap();
                    let len = plotkin_min_length_over(dmin, k, p).expect("k > 2");
                    tally.check(num_rational::Ratio::from_integer(t as u64) >= len, || {
                        format!("GF({p}) t={t} k={k} distance {dmin}")
                    });
                });
            }
        }
    }
    tally.report("all sets of distinct vectors, GF(2) t <= 6 and GF(3) t <= 3, k in {3, 4}")
}

fn difference_family(l: &LemmaLimits) -> Result<LemmaReport> {
    let mut tally = Tally::new("difference-family");
    let mut rng = ChaCha8Rng::seed_from_u64(l.seed);
    let cfg = SearchConfig::with_seed(l.seed);
    for p in [2u64, 3] {
        let f = gf(p);
        for (n, k) in [(2usize, 2usize), (3, 2), (4, 2), (2, 3)] {
            for random in [false, true] {
                let forms = if random { random_forms(&f, n, &mut rng) } else { coordinate_forms(&f, n) };
                let need = (n * n).saturating_sub(crate::lowerbound::binom(k, 2) * n);
                match vanish_family(&forms, n, k, &f, &cfg) {
                    Ok(w) => tally.check(
                        w.differences_invertible() && w.recheck(&forms) && w.vanishing.len() >= need,
                        || format!("GF({p}) n={n} k={k}: {} vanishing", w.vanishing.len()),
                    ),
                    Err(e) => tally.check(false, || format!("GF({p}) n={n} k={k}: {e}")),
                }
            }
        }
    }
    tally.report("(n,k) in {(2,2),(3,2),(4,2),(2,3)} over GF(2), GF(3), coordinate and random forms")
}

fn code_distance(l: &LemmaLimits) -> Result<LemmaReport> {
    let mut tally = Tally::new("code-distance");
    let mut checked = 0;
    for p in [2u64, 3] {
        let f = gf(p);
        for d in [naive_decomp(2, &f), strassen_decomp(&f)] {
            for code in [code_from_bilinear(&d)?, code_from_quadratic(&to_quadratic(&d)?)?] {
                let r = check_rank_distance(&code, CheckMode::Exhaustive)?;
                checked += r.checked;
                tally.check(r.passed(), || format!("GF({p}) {} violations", r.violation_count));
            }
        }
        let code = code_from_bilinear(&naive_decomp(3, &f))?;
        let r = check_rank_distance(&code, CheckMode::Sample { count: l.samples.min(10_000), seed: l.seed })?;
        checked += r.checked;
        tally.check(r.passed(), || format!("GF({p}) n=3 sampled"));
    }
    tally.report(format!("{checked} matrices: exhaustive M_2 over GF(2), GF(3); sampled n=3"))
}

fn trace_identity(l: &LemmaLimits) -> Result<LemmaReport> {
    let mut tally = Tally::new("trace-identity");
    for p in [2u64, 3] {
        let f = gf(p);
        for (name, d) in standard_circuits(&f) {
            let q = to_quadratic(&d)?;
            let mode = if d.n()? == 2 {
                CheckMode::Exhaustive
            } else {
                CheckMode::Sample { count: 1000, seed: l.seed }
            };
            tally.check(trace_identity_check(&q, mode)?, || format!("GF({p}) {name}"));
        }
    }
    tally.report("formal at n = 2, 1000 sampled triples at n = 3")
}

fn derivative_span(_: &LemmaLimits) -> Result<LemmaReport> {
    let mut tally = Tally::new("derivative-span");
    for p in [2u64, 3] {
        let f = gf(p);
        for d in [naive_decomp(2, &f), strassen_decomp(&f)] {
            let q = to_quadratic(&d)?;
            for idx in 0..f.order().pow(4) {
                let z0 = Mat::from_index(&f, 2, 2, idx);
                let r = derivative_span_check(&q, &z0)?;
                tally.check(r.ok && r.contained && r.lhs_dim == 4 * z0.rank(), || {
                    format!("GF({p}) z0 #{idx}: dim {} k {}", r.lhs_dim, r.k)
                });
            }
        }
    }
    tally.report("every z0 in M_2(GF(2)), M_2(GF(3)), naive and Strassen")
}

fn inverse_pair(l: &LemmaLimits) -> Result<LemmaReport> {
    let mut tally = Tally::new("inverse-pair");
    let cfg = SearchConfig::with_seed(l.seed);
    for p in [2u64, 3] {
        let f = gf(p);
        let mut circuits = standard_circuits(&f);
        circuits.push(("naive4".into(), naive_decomp(4, &f)));
        for (name, d) in circuits {
            let n = d.n()?;
            let k = 4;
            let forms = d.u_forms();
            let w = vanish_family(&forms, n, k, &f, &cfg)?;
            let words: Vec<Vec<FieldElem>> = w.mats.iter().map(|a| forms.iter().map(|u| u.eval_unchecked(a.entries())).collect()).collect();
            let (i, j, agree) = best_agreeing_pair(&words)?;
            let c = w.mats[i].sub(&w.mats[j])?;
            let m = forms.len();
            let on_c = forms.iter().filter(|u| u.eval_unchecked(c.entries()).is_zero()).count();
            let swapped = sandwich(&d, &c)?;
            let id = Mat::identity(&f, n);
            let on_id = swapped.u_forms().iter().filter(|u| u.eval_unchecked(id.entries()).is_zero()).count();
            let guaranteed = k as u64 <= p || pair_bound_holds(agree, m, k, p);
            tally.check(c.is_invertible() && agree == on_c && on_c == on_id && guaranteed, || {
                format!("GF({p}) {name}: agree {agree}, on c {on_c}, on I {on_id}")
            });
        }
    }
    tally.report("k = 4 family, best pair difference invertible, count preserved by sandwiching")
}

fn commutator_case(tally: &mut Tally, p: u64, n: usize, k: usize, forms: &[LinForm], cfg: &SearchConfig) {
    let f = gf(p);
    let need = (n * n).saturating_sub(2 * crate::lowerbound::binom(k, 3) * n);
    let sel = select_independent(forms);
    match commutator_family(n, k, forms, &f, cfg) {
        Ok(w) => {
            let independent = w.vanishing.iter().filter(|i| sel.contains(i)).count();
            tally.check(w.commutators_invertible() && w.recheck(forms) && independent >= need, || {
                format!("GF({p}) n={n} k={k}: {independent} vanishing, need {need}")
            })
        }
        Err(e) => tally.check(false, || format!("GF({p}) n={n} k={k}: {e}")),
    }
}

fn commutator_pair(l: &LemmaLimits) -> Result<LemmaReport> {
    let mut tally = Tally::new("commutator-pair");
    let mut rng = ChaCha8Rng::seed_from_u64(l.seed);
    let cfg = SearchConfig::with_seed(l.seed);
    for (p, n) in [(5u64, 2usize), (7, 2), (3, 4)] {
        let f = gf(p);
        commutator_case(&mut tally, p, n, 3, &coordinate_forms(&f, n), &cfg);
        commutator_case(&mut tally, p, n, 3, &random_forms(&f, n, &mut rng), &cfg);
    }
    tally.report("k = 3 over (p,n) in {(5,2),(7,2),(3,4)}, coordinate and random forms")
}

fn commutator_family_runner(l: &LemmaLimits) -> Result<LemmaReport> {
    let mut tally = Tally::new("commutator-family");
    let cfg = SearchConfig::with_seed(l.seed);
    for (p, n, k) in [(3u64, 4usize, 3usize), (2, 6, 3), (17, 2, 4)] {
        commutator_case(&mut tally, p, n, k, &coordinate_forms(&gf(p), n), &cfg);
    }
    tally.report("(p,n,k) in {(3,4,3),(2,6,3),(17,2,4)}")
}

fn commutator_bound(_: &LemmaLimits) -> Result<LemmaReport> {
    let mut tally = Tally::new("commutator-bound");
    let mut invertible_pairs = 0;
    for p in [2u64, 3] {
        let f = gf(p);
        let mats: Vec<Mat> = (0..f.order().pow(4)).map(|i| Mat::from_index(&f, 2, 2, i)).collect();
        for d in [naive_decomp(2, &f), strassen_decomp(&f)] {
            for a in &mats {
                for b in &mats {
                    if !a.commutator(b)?.is_invertible() {
                        continue;
                    }
                    invertible_pairs += 1;
                    let cert = blaser_certificate(&d, a, b);
                    tally.check(cert.as_ref().is_ok_and(|c| c.bound <= d.m()), || {
                        format!("GF({p}) m={} pair {:?} {:?}", d.m(), a.entries(), b.entries())
                    });
                }
            }
        }
    }
    tally.report(format!("{invertible_pairs} pairs with invertible commutator, bound <= m"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multisets_are_counted() {
        let mut n = 0;
        for_each_multiset(4, 2, |_| n += 1);
        assert_eq!(n, 10);
        let mut n = 0;
        for_each_multiset(3, 3, |idx| {
            assert!(idx.windows(2).all(|w| w[0] <= w[1]));
            n += 1;
        });
        assert_eq!(n, 10);
    }

    #[test]
    fn cheap_runners_pass() {
        let limits = LemmaLimits { seed: 0, samples: 2000 };
        for name in ["nonzero-point", "sparse-witness", "distance", "trace-identity", "derivative-span", "code-distance"] {
            let reports = run(name, &limits).unwrap();
            assert!(reports[0].passed, "{}", reports[0]);
            assert!(reports[0].instances > 0);
        }
        assert!(run("no-such-lemma", &limits).is_none());
    }
}
