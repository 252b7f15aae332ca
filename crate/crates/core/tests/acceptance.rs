//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs with a custom harness so the lines always print. Set
//! `MPBOUNDS_LONG=1` to also run the optional long refutation.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mpbounds::circuits::{
    evaluate, naive_decomp, strassen_decomp, to_quadratic, verify_mp, BilinearDecomp, BilinearTriple,
};
use mpbounds::field::{is_prime, make_context, FieldCtx, FieldElem};
use mpbounds::formats::{parse_certificate, parse_decomp, write_certificate};
use mpbounds::lemmas::{self, LemmaLimits};
use mpbounds::lowerbound::{
    check_certificate, commutator_family, gf2_pipeline, gfp_pipeline, vanish_family, SearchConfig,
};
use mpbounds::matcodes::{code_from_bilinear, derivative_span_check, trace_identity_check, CheckMode};
use mpbounds::matspace::{LinForm, Mat};
use mpbounds::rank_oracle::{
    karatsuba_tensor, mp_tensor, rank, rank_decide, terms_from_decomp, RankDecision, RankOneTerm, Tensor3,
};

struct Outcome {
    passed: bool,
    /// Deterministic description; compared across repeated runs.
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn gf(p: u64) -> FieldCtx {
    make_context(p, 1).unwrap()
}

fn circuits_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("circuits")
}

fn shipped(name: &str) -> BilinearDecomp {
    parse_decomp(&std::fs::read_to_string(circuits_dir().join(name)).unwrap()).unwrap()
}

fn eval(form: &LinForm, a: &Mat) -> FieldElem {
    form.eval(a.entries()).unwrap()
}

fn coordinate_forms(f: &FieldCtx, n: usize) -> Vec<LinForm> {
    (0..n * n).map(|i| LinForm::coordinate(f, n * n, i)).collect()
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `d` with one coefficient shifted by `delta`; `slot` runs over u, v, w
/// coefficients of every triple in order.
fn corrupt(d: &BilinearDecomp, slot: usize, delta: FieldElem) -> BilinearDecomp {
    let f = d.ctx();
    let mut triples: Vec<BilinearTriple> = d.triples().to_vec();
    let mut s = slot;
    for t in &mut triples {
        let (nu, nv, nw) = (t.u.nvars(), t.v.nvars(), t.w.len());
        if s < nu {
            let mut c = t.u.coeffs().to_vec();
            c[s] = f.add(c[s], delta);
            t.u = LinForm::new(f, c).unwrap();
            break;
        }
        s -= nu;
        if s < nv {
            let mut c = t.v.coeffs().to_vec();
            c[s] = f.add(c[s], delta);
            t.v = LinForm::new(f, c).unwrap();
            break;
        }
        s -= nv;
        if s < nw {
            t.w[s] = f.add(t.w[s], delta);
            break;
        }
        s -= nw;
    }
    BilinearDecomp::new(f, d.dims(), triples).unwrap()
}

fn slots(d: &BilinearDecomp) -> usize {
    d.triples().iter().map(|t| t.u.nvars() + t.v.nvars() + t.w.len()).sum()
}

fn c1_circuits() -> Outcome {
    let start = Instant::now();
    let mut verified = 0;
    let mut bad = Vec::new();
    let mut all = Vec::new();
    for p in [2u64, 3, 5] {
        let f = gf(p);
        for n in 1..=4 {
            all.push((format!("naive n={n} GF({p})"), naive_decomp(n, &f)));
        }
        all.push((format!("strassen GF({p})"), strassen_decomp(&f)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for (name, d) in &all {
        // formal check, plus evaluation against the schoolbook product
        let n = d.n().unwrap();
        let x = Mat::random(d.ctx(), n, n, &mut rng);
        let y = Mat::random(d.ctx(), n, n, &mut rng);
        if verify_mp(d) && evaluate(d, &x, &y).unwrap() == x.matmul(&y).unwrap() {
            verified += 1;
        } else {
            bad.push(name.clone());
        }
    }
    let verify_time = start.elapsed();
    let mut corruptions = 0u64;
    let mut missed = 0u64;
    for (_, d) in &all {
        let f = d.ctx();
        let nonzero: Vec<FieldElem> = (1..f.order()).map(|i| f.elem(i).unwrap()).collect();
        let positions = slots(d);
        if d.n().unwrap() <= 3 {
            for s in 0..positions {
                for &delta in &nonzero {
                    corruptions += 1;
                    missed += u64::from(verify_mp(&corrupt(d, s, delta)));
                }
            }
        } else {
            for _ in 0..300 {
                let s = rng.gen_range(0..positions);
                let delta = nonzero[rng.gen_range(0..nonzero.len())];
                corruptions += 1;
                missed += u64::from(verify_mp(&corrupt(d, s, delta)));
            }
        }
    }
    let passed = bad.is_empty() && missed == 0 && verify_time < Duration::from_secs(1);
    outcome(
        passed,
        format!(
            "{verified}/{} circuits verify (failing: {bad:?}); {corruptions} single-coefficient corruptions, {missed} undetected; verification under 1 s: {}",
            all.len(),
            verify_time < Duration::from_secs(1)
        ),
    )
}

fn c2_embedding() -> Outcome {
    let start = Instant::now();
    let reports = lemmas::run("embed", &LemmaLimits::default()).unwrap();
    let rep = &reports[0];
    let fields = (2u64..=4096)
        .filter(|&p| is_prime(p))
        .map(|p| (1..).take_while(|&n| p.checked_pow(n).is_some_and(|q| q <= 1 << 12)).count())
        .sum::<usize>();
    let fast = start.elapsed() < Duration::from_secs(30);
    outcome(
        rep.passed && fast && rep.detail.starts_with(&format!("{fields} fields")),
        format!("{rep}; expected {fields} fields; under 30 s: {fast}"),
    )
}

/// `(checked, violations)` for `weight(code(a)) >= n rank(a)`.
fn weight_rank(forms: &[LinForm], n: usize, mats: impl Iterator<Item = Mat>) -> (u64, u64) {
    let mut checked = 0;
    let mut violations = 0;
    for a in mats {
        let weight = forms.iter().filter(|u| !eval(u, &a).is_zero()).count();
        checked += 1;
        violations += u64::from(weight < n * a.rank());
    }
    (checked, violations)
}

fn c3_code_property() -> Outcome {
    let mut checked = 0;
    let mut violations = 0;
    for p in [2u64, 3] {
        let f = gf(p);
        for d in [naive_decomp(2, &f), strassen_decomp(&f)] {
            let code = code_from_bilinear(&d).unwrap();
            let all = (0..p.pow(4)).map(|i| Mat::from_index(&f, 2, 2, i));
            let (c, v) = weight_rank(code.forms(), 2, all);
            checked += c;
            violations += v;
        }
        let code = code_from_bilinear(&naive_decomp(3, &f)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        let sampled: Vec<Mat> = (0..10_000).map(|_| Mat::random(&f, 3, 3, &mut rng)).collect();
        let (c, v) = weight_rank(code.forms(), 3, sampled.into_iter());
        checked += c;
        violations += v;
    }
    outcome(violations == 0, format!("{checked} matrices, {violations} violations"))
}

fn c4_quadratic() -> Outcome {
    let f2 = gf(2);
    let formal = trace_identity_check(&to_quadratic(&naive_decomp(2, &f2)).unwrap(), CheckMode::Exhaustive).unwrap();
    let sampled = [strassen_decomp(&f2), naive_decomp(3, &f2)]
        .iter()
        .all(|d| trace_identity_check(&to_quadratic(d).unwrap(), CheckMode::Sample { count: 1000, seed: 0 }).unwrap());
    let mut spans = 0;
    let mut span_failures = 0;
    for d in [naive_decomp(2, &f2), strassen_decomp(&f2)] {
        let q = to_quadratic(&d).unwrap();
        for i in 0..16 {
            let z0 = Mat::from_index(&f2, 2, 2, i);
            let r = derivative_span_check(&q, &z0).unwrap();
            spans += 1;
            span_failures += u32::from(!(r.ok && r.lhs_dim == 4 * z0.rank()));
        }
    }
    outcome(
        formal && sampled && span_failures == 0,
        format!("formal identity {formal}, sampled identity {sampled}, {spans} derivative spans with {span_failures} failures"),
    )
}

fn agreements(vs: &[Vec<u64>], group: &[usize]) -> usize {
    (0..vs[0].len()).filter(|&c| group.iter().all(|&i| vs[i][c] == vs[group[0]][c])).count()
}

/// Largest pair and triple agreement, computed directly.
fn max_agreements(vs: &[Vec<u64>]) -> (usize, usize) {
    let k = vs.len();
    let mut pair = 0;
    let mut triple = 0;
    for i in 0..k {
        for j in i + 1..k {
            pair = pair.max(agreements(vs, &[i, j]));
            for l in j + 1..k {
                triple = triple.max(agreements(vs, &[i, j, l]));
            }
        }
    }
    (pair, triple)
}

fn pair_ok(c: usize, t: usize, k: usize, p: u64) -> bool {
    Ratio::from_integer(c as i64) >= Ratio::new(t as i64, p as i64) - Ratio::new(t as i64, k as i64)
}

fn triple_ok(c: usize, t: usize, k: usize, p: u64) -> bool {
    let p = p as i64;
    Ratio::from_integer(c as i64) >= Ratio::new(t as i64, p * p) - Ratio::new(3 * t as i64, p * k as i64)
}

fn vectors(p: u64, t: usize) -> Vec<Vec<u64>> {
    (0..p.pow(t as u32)).map(|i| (0..t).map(|c| i / p.pow(c as u32) % p).collect()).collect()
}

/// Visits every multiset of `k` items from `items`.
fn multisets(items: &[Vec<u64>], k: usize, start: usize, chosen: &mut Vec<Vec<u64>>, visit: &mut dyn FnMut(&[Vec<u64>])) {
    if chosen.len() == k {
        visit(chosen);
        return;
    }
    for i in start..items.len() {
        chosen.push(items[i].clone());
        multisets(items, k, i, chosen, visit);
        chosen.pop();
    }
}

fn c5_agreement() -> Outcome {
    let start = Instant::now();
    let mut exhaustive = 0u64;
    let mut violations = 0u64;
    for (p, tmax, ks) in [(2u64, 5usize, vec![3usize, 4]), (3, 5, vec![4])] {
        for t in 1..=tmax {
            let vs = vectors(p, t);
            for &k in &ks {
                if p == 3 && t > 3 {
                    continue;
                }
                multisets(&vs, k, 0, &mut Vec::new(), &mut |sel| {
                    exhaustive += 1;
                    violations += u64::from(!pair_ok(max_agreements(sel).0, t, k, p));
                });
            }
        }
    }
    for t in 1..=4 {
        multisets(&vectors(2, t), 5, 0, &mut Vec::new(), &mut |sel| {
            exhaustive += 1;
            violations += u64::from(!triple_ok(max_agreements(sel).1, t, 5, 2));
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut sampled = 0u64;
    for s in 0..100_000u64 {
        let p = 2 + s % 2;
        let t = rng.gen_range(1..=24);
        let k = rng.gen_range(2 * p as usize + 1..=10);
        let vs: Vec<Vec<u64>> = (0..k).map(|_| (0..t).map(|_| rng.gen_range(0..p)).collect()).collect();
        let (pair, triple) = max_agreements(&vs);
        sampled += 1;
        violations += u64::from(!pair_ok(pair, t, k, p) || !triple_ok(triple, t, k, p));
    }
    let library = lemmas::run("intersect", &LemmaLimits::default()).unwrap();
    let fast = start.elapsed() < Duration::from_secs(300);
    outcome(
        violations == 0 && library[0].passed && fast,
        format!(
            "{exhaustive} exhaustive sets, {sampled} sampled sets, {violations} violations; library runner: {}",
            library[0]
        ),
    )
}

fn c6_families() -> Outcome {
    let start = Instant::now();
    let cfg = SearchConfig::with_seed(0);
    let mut lines = Vec::new();
    let mut ok = true;
    for p in [2u64, 3] {
        let f = gf(p);
        for (n, k) in [(2usize, 2usize), (3, 2), (4, 2), (2, 3)] {
            let forms = coordinate_forms(&f, n);
            let w = vanish_family(&forms, n, k, &f, &cfg).unwrap();
            let vanishing = forms.iter().filter(|u| w.mats.iter().all(|a| eval(u, a).is_zero())).count();
            let invertible = (0..k).all(|i| (i + 1..k).all(|j| !w.mats[i].sub(&w.mats[j]).unwrap().det().unwrap().is_zero()));
            let need = (n * n).saturating_sub(binom(k, 2) * n);
            ok &= invertible && vanishing >= need && vanishing == w.vanishing.len();
            lines.push(format!("vanish GF({p}) n={n} k={k}: {vanishing} >= {need}"));
        }
    }
    for (p, n, k) in [(3u64, 4usize, 3usize), (2, 6, 3)] {
        let f = gf(p);
        let forms = coordinate_forms(&f, n);
        let w = commutator_family(n, k, &forms, &f, &cfg).unwrap();
        let vanishing = forms.iter().filter(|u| w.mats.iter().all(|a| eval(u, a).is_zero())).count();
        let mut invertible = true;
        for i in 0..k {
            for j in i + 1..k {
                for l in j + 1..k {
                    let x = w.mats[i].sub(&w.mats[l]).unwrap();
                    let y = w.mats[j].sub(&w.mats[l]).unwrap();
                    let comm = x.matmul(&y).unwrap().sub(&y.matmul(&x).unwrap()).unwrap();
                    invertible &= !comm.det().unwrap().is_zero();
                }
            }
        }
        let need = (n * n).saturating_sub(2 * binom(k, 3) * n);
        ok &= invertible && vanishing >= need;
        lines.push(format!("commutator GF({p}) n={n} k={k}: {vanishing} >= {need}"));
    }
    ok &= start.elapsed() < Duration::from_secs(300);
    outcome(ok, lines.join("; "))
}

fn c7_commutator_bound() -> Outcome {
    let f = gf(2);
    let d = strassen_decomp(&f);
    let forms = d.u_forms();
    let id = Mat::identity(&f, 2);
    let mats: Vec<Mat> = (0..16).map(|i| Mat::from_index(&f, 2, 2, i)).collect();
    let mut pairs = 0;
    let mut invertible = 0;
    let mut counterexamples = 0;
    for a in &mats {
        for b in &mats {
            pairs += 1;
            let comm = a.matmul(b).unwrap().sub(&b.matmul(a).unwrap()).unwrap();
            if comm.det().unwrap().is_zero() {
                continue;
            }
            invertible += 1;
            let t = forms.iter().filter(|u| [&id, a, b].iter().all(|m| eval(u, m).is_zero())).count();
            counterexamples += u32::from(t + 6 > d.m());
        }
    }
    outcome(
        counterexamples == 0 && pairs == 256,
        format!("{pairs} pairs, {invertible} with invertible commutator, {counterexamples} counterexamples"),
    )
}

/// Certificates and their text for the pipeline criterion.
fn pipeline_certificates() -> (bool, Vec<String>, Vec<String>) {
    let cfg = SearchConfig::with_seed(0);
    let mut ok = true;
    let mut lines = Vec::new();
    let mut texts = Vec::new();
    let mut names: Vec<String> = std::fs::read_dir(circuits_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".mpd"))
        .collect();
    names.sort();
    let mut runs: Vec<(String, &str)> = names.iter().map(|n| (n.clone(), "gf2")).collect();
    for n in ["naive_n4_gf3.mpd", "naive_n6_gf2.mpd", "strassen_gf5.mpd"] {
        runs.push((n.to_string(), "gfp"));
    }
    for (name, kind) in runs {
        let d = shipped(&name);
        let cert = match kind {
            "gf2" => gf2_pipeline(&code_from_bilinear(&d).unwrap(), 3, &cfg),
            _ => gfp_pipeline(&d, 4, 3, &cfg),
        };
        match cert {
            Ok(c) => {
                let text = write_certificate(&c);
                let reparsed = parse_certificate(&text).unwrap();
                let rechecked = check_certificate(&reparsed).is_ok();
                ok &= rechecked && c.bound <= d.m() && reparsed == c;
                lines.push(format!("{kind} {name}: bound {} <= {} recheck {rechecked}", c.bound, d.m()));
                texts.push(text);
            }
            Err(e) => {
                ok = false;
                lines.push(format!("{kind} {name}: {e}"));
            }
        }
    }
    (ok, lines, texts)
}

fn c8_pipelines() -> Outcome {
    let start = Instant::now();
    let (ok, lines, _) = pipeline_certificates();
    // the checker as a separate process, on files written by the binary
    let dir = std::env::temp_dir().join(format!("mpbounds-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut cli_ok = true;
    for (kind, name) in [("gf2", "strassen_gf2.mpd"), ("gfp", "naive_n4_gf3.mpd"), ("gfp", "naive_n6_gf2.mpd")] {
        let cert = dir.join(format!("{kind}-{name}.cert"));
        let bound = bin().args(["bound", kind]).arg(circuits_dir().join(name)).arg("--out").arg(&cert).output().unwrap();
        let verify = bin().arg("verify").arg(&cert).output().unwrap();
        cli_ok &= bound.status.success() && verify.status.success();
    }
    std::fs::remove_dir_all(&dir).ok();
    let fast = start.elapsed() < Duration::from_secs(600);
    outcome(ok && cli_ok && fast, format!("{}; binary re-check {cli_ok}", lines.join("; ")))
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mpbounds"))
}

/// Largest rank among the three flattenings, an exact rank for rank <= 2.
fn max_flattening_rank(t: &Tensor3) -> usize {
    let (a, b, c) = t.dims();
    let f = t.ctx();
    let flat = |rows: usize, cols: usize, at: &dyn Fn(usize, usize) -> FieldElem| {
        let data = (0..rows * cols).map(|i| at(i / cols, i % cols)).collect();
        Mat::from_elems(f, rows, cols, data).unwrap().rank()
    };
    let r1 = flat(a, b * c, &|i, j| t.get(i, j / c, j % c));
    let r2 = flat(b, a * c, &|i, j| t.get(j / c, i, j % c));
    let r3 = flat(c, a * b, &|i, j| t.get(j / b, j % b, i));
    r1.max(r2).max(r3)
}

fn random_tensor(f: &FieldCtx, dims: (usize, usize, usize), terms: usize, rng: &mut ChaCha8Rng) -> Tensor3 {
    let nonzero = |len: usize, rng: &mut ChaCha8Rng| loop {
        let v: Vec<FieldElem> = (0..len).map(|_| f.random(rng)).collect();
        if v.iter().any(|e| !e.is_zero()) {
            break v;
        }
    };
    let terms: Vec<RankOneTerm> = (0..terms)
        .map(|_| RankOneTerm { u: nonzero(dims.0, rng), v: nonzero(dims.1, rng), w: nonzero(dims.2, rng) })
        .collect();
    Tensor3::from_terms(f, dims, &terms).unwrap()
}

fn c9_rank_oracle() -> Outcome {
    let start = Instant::now();
    let f2 = gf(2);
    let kara = karatsuba_tensor(&f2);
    let refuted = rank_decide(&kara, 2, None).unwrap() == RankDecision::ExhaustedNo;
    let found = matches!(rank_decide(&kara, 3, None).unwrap(), RankDecision::Found(ref t) if Tensor3::from_terms(&f2, kara.dims(), t).unwrap() == kara);
    let mp2 = mp_tensor(2, &f2);
    let strassen = terms_from_decomp(&strassen_decomp(&f2));
    let rep = rank(&mp2, Some(Duration::from_millis(300)), &[strassen]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut agree = 0;
    for i in 0..100 {
        let f = gf(if i % 2 == 0 { 2 } else { 3 });
        let dims = [(2, 2, 2), (2, 3, 2), (3, 2, 2)][i % 3];
        let t = random_tensor(&f, dims, 1 + i % 2, &mut rng);
        let r = rank(&t, None, &[]).unwrap();
        agree += u32::from(r.exact() && r.lower == max_flattening_rank(&t));
    }
    let fast = start.elapsed() < Duration::from_secs(120);
    let mut detail = format!(
        "karatsuba budget 2 refuted {refuted}, budget 3 found {found}; mp2 upper {}; {agree}/100 random tensors agree",
        rep.upper
    );
    let mut ok = refuted && found && rep.upper == 7 && agree == 100 && fast;
    if std::env::var("MPBOUNDS_LONG").is_ok_and(|v| v == "1") {
        let six = rank_decide(&mp2, 6, None).unwrap();
        ok &= six == RankDecision::ExhaustedNo;
        detail.push_str(&format!("; optional mp2 budget 6: {six:?}"));
    }
    outcome(ok, detail)
}

fn c10_determinism() -> Outcome {
    let mut same = true;
    let mut names = Vec::new();
    for (name, f) in [
        ("3", c3_code_property as fn() -> Outcome),
        ("4", c4_quadratic),
        ("6", c6_families),
        ("7", c7_commutator_bound),
    ] {
        let (a, b) = (f(), f());
        same &= a.detail == b.detail && a.passed == b.passed;
        names.push(name);
    }
    let (_, l1, t1) = pipeline_certificates();
    let (_, l2, t2) = pipeline_certificates();
    let certs_same = l1 == l2 && t1 == t2;
    let limits = LemmaLimits { seed: 7, samples: 5000 };
    let lemma_same = lemmas::run("all", &limits) == lemmas::run("all", &limits);
    let dir = std::env::temp_dir().join(format!("mpbounds-det-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut files_same = true;
    for kind in ["gf2", "gfp"] {
        let input = circuits_dir().join(if kind == "gf2" { "naive_n3_gf2.mpd" } else { "naive_n4_gf3.mpd" });
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = dir.join(format!("{kind}-{run}.cert"));
            let out = bin().args(["bound", kind]).arg(&input).args(["--seed", "11", "--out"]).arg(&path).output().unwrap();
            let stdout = String::from_utf8_lossy(&out.stdout).replace(&path.display().to_string(), "OUT");
            outputs.push((stdout, std::fs::read(&path).unwrap_or_default()));
        }
        files_same &= outputs[0] == outputs[1] && !outputs[0].1.is_empty();
    }
    std::fs::remove_dir_all(&dir).ok();
    outcome(
        same && certs_same && lemma_same && files_same,
        format!(
            "criteria {} repeat identically: {same}; certificates: {certs_same}; lemma reports: {lemma_same}; binary output files: {files_same}",
            names.join(",")
        ),
    )
}

fn main() {
    // `cargo test -- --list` and filters from the default harness are not
    // meaningful here; any argument other than the criterion numbers is ignored.
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("circuit verification", c1_circuits),
        ("embedding", c2_embedding),
        ("code property", c3_code_property),
        ("quadratic machinery", c4_quadratic),
        ("agreement bounds", c5_agreement),
        ("family constructions", c6_families),
        ("commutator bound consistency", c7_commutator_bound),
        ("pipelines", c8_pipelines),
        ("rank oracle", c9_rank_oracle),
        ("determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status} criterion {}: {name} ({:.2} s): {}", i + 1, start.elapsed().as_secs_f64(), o.detail);
        failed += usize::from(!o.passed);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
