//! Bound certificates and their independent checker.
//!
//! A certificate carries its source object (a code or a circuit) and a list
//! of named steps. Each step records witness matrices, index lists and
//! claimed integers; [`check_certificate`] recomputes every claim from the
//! witnesses alone.

use super::agreement::plotkin_min_length_over;
use super::{forms_vanishing_on, pairs, triple_commutator, triples};
use crate::circuits::{sandwich, verify_mp, BilinearDecomp};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::matcodes::{encode, hamming, MatrixCode};
use crate::matspace::{LinForm, Mat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertKind {
    Gf2Code,
    GfpBilinear,
}

impl CertKind {
    pub fn name(self) -> &'static str {
        match self {
            CertKind::Gf2Code => "gf2_code",
            CertKind::GfpBilinear => "gfp_bilinear",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "gf2_code" => Some(CertKind::Gf2Code),
            "gfp_bilinear" => Some(CertKind::GfpBilinear),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertSource {
    Code(MatrixCode),
    Circuit(BilinearDecomp),
}

impl CertSource {
    pub fn ctx(&self) -> &FieldCtx {
        match self {
            CertSource::Code(c) => c.ctx(),
            CertSource::Circuit(d) => d.ctx(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            CertSource::Code(c) => c.n(),
            CertSource::Circuit(d) => d.dims().0,
        }
    }

    /// Code length or gate count.
    pub fn m(&self) -> usize {
        match self {
            CertSource::Code(c) => c.m(),
            CertSource::Circuit(d) => d.m(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CertStep {
    pub name: String,
    /// Ordered family of matrices produced by a search.
    pub family: Vec<Mat>,
    pub mats: Vec<(String, Mat)>,
    pub lists: Vec<(String, Vec<usize>)>,
    pub claims: Vec<(String, u64)>,
}

fn cert_err(step: &str, detail: impl Into<String>) -> Error {
    Error::Certificate {
        step: step.to_string(),
        detail: detail.into(),
    }
}

impl CertStep {
    pub fn new(name: &str) -> Self {
        CertStep {
            name: name.to_string(),
            ..Default::default()
        }
    }

    pub fn with_family(mut self, family: Vec<Mat>) -> Self {
        self.family = family;
        self
    }

    pub fn with_mat(mut self, name: &str, m: Mat) -> Self {
        self.mats.push((name.to_string(), m));
        self
    }

    pub fn with_list(mut self, name: &str, l: Vec<usize>) -> Self {
        self.lists.push((name.to_string(), l));
        self
    }

    pub fn with_claim(mut self, name: &str, v: u64) -> Self {
        self.claims.push((name.to_string(), v));
        self
    }

    pub fn mat(&self, name: &str) -> Result<&Mat> {
        self.mats
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, m)| m)
            .ok_or_else(|| cert_err(&self.name, format!("missing matrix `{name}`")))
    }

    pub fn list(&self, name: &str) -> Result<&[usize]> {
        self.lists
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, l)| l.as_slice())
            .ok_or_else(|| cert_err(&self.name, format!("missing list `{name}`")))
    }

    pub fn claim(&self, name: &str) -> Result<u64> {
        self.claims
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| *v)
            .ok_or_else(|| cert_err(&self.name, format!("missing claim `{name}`")))
    }

    fn expect(&self, name: &str, actual: u64) -> Result<()> {
        let claimed = self.claim(name)?;
        if claimed == actual {
            Ok(())
        } else {
            Err(cert_err(&self.name, format!("claim {name} = {claimed}, recomputed {actual}")))
        }
    }

    fn fail(&self, detail: impl Into<String>) -> Error {
        cert_err(&self.name, detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCertificate {
    pub kind: CertKind,
    pub source: CertSource,
    pub seed: u64,
    pub steps: Vec<CertStep>,
    /// Forms vanishing on `{I, a, b}` (bilinear kind only).
    pub t: Option<usize>,
    pub bound: usize,
    pub m_actual: usize,
}

impl BoundCertificate {
    pub fn ctx(&self) -> &FieldCtx {
        self.source.ctx()
    }

    pub fn n(&self) -> usize {
        self.source.n()
    }

    pub fn step(&self, name: &str) -> Option<&CertStep> {
        self.steps.iter().find(|s| s.name == name)
    }

    fn require(&self, name: &str) -> Result<&CertStep> {
        self.step(name).ok_or_else(|| cert_err(name, "step missing"))
    }
}

/// `ceil(1.5 n^2)`.
pub(crate) fn half_again(n: usize) -> usize {
    (3 * n * n).div_ceil(2)
}

fn vanish_count(forms: &[LinForm], mats: &[&Mat]) -> usize {
    forms
        .iter()
        .filter(|f| mats.iter().all(|a| f.eval_unchecked(a.entries()).is_zero()))
        .count()
}

fn vanishing_set(forms: &[LinForm], mats: &[&Mat]) -> Vec<usize> {
    let owned: Vec<Mat> = mats.iter().map(|m| (*m).clone()).collect();
    forms_vanishing_on(forms, &owned).expect("shapes checked")
}

fn check_shapes(step: &CertStep, ctx: &FieldCtx, n: usize) -> Result<()> {
    for m in step.family.iter().chain(step.mats.iter().map(|(_, m)| m)) {
        if m.ctx() != ctx || (m.rows(), m.cols()) != (n, n) {
            return Err(step.fail(format!("witness matrix is not {n}x{n} over {}", ctx.name())));
        }
    }
    Ok(())
}

fn check_gf2(cert: &BoundCertificate, code: &MatrixCode) -> Result<()> {
    let n = code.n();
    let ctx = code.ctx();
    let nn = n * n;
    let fam = cert.require("family")?;
    check_shapes(fam, ctx, n)?;
    let k = fam.family.len();
    fam.expect("k", k as u64)?;
    for (i, j) in pairs(k) {
        if !fam.family[i].sub(&fam.family[j])?.is_invertible() {
            return Err(fam.fail(format!("difference of members {i} and {j} is singular")));
        }
    }
    let vanishing = fam.list("vanishing")?;
    if vanishing.windows(2).any(|w| w[0] >= w[1]) || vanishing.last().is_some_and(|&i| i >= code.m()) {
        return Err(fam.fail("vanishing list must be strictly increasing coordinate indices"));
    }
    for &i in vanishing {
        if fam.family.iter().any(|a| !code.forms()[i].eval_unchecked(a.entries()).is_zero()) {
            return Err(fam.fail(format!("coordinate {i} does not vanish on the family")));
        }
    }
    let r = vanishing.len();
    fam.expect("r", r as u64)?;

    let dist = cert.require("distance")?;
    let kept = dist.list("kept")?;
    let complement: Vec<usize> = (0..code.m()).filter(|i| vanishing.binary_search(i).is_err()).collect();
    if kept != complement.as_slice() {
        return Err(dist.fail("kept coordinates are not the complement of the vanishing ones"));
    }
    let restricted: Vec<Vec<FieldElem>> = fam
        .family
        .iter()
        .map(|a| {
            let full = encode(code, a)?;
            Ok(kept.iter().map(|&c| full[c]).collect())
        })
        .collect::<Result<_>>()?;
    let min_d = pairs(k).map(|(i, j)| hamming(&restricted[i], &restricted[j])).min().unwrap_or(usize::MAX);
    dist.expect("N", nn as u64)?;
    if k >= 2 {
        dist.expect("min_distance", min_d as u64)?;
    }
    if min_d < nn {
        return Err(dist.fail(format!("pairwise distance {min_d} below {nn}")));
    }

    let pl = cert.require("plotkin")?;
    pl.expect("k", k as u64)?;
    pl.expect("N", nn as u64)?;
    pl.expect("p", ctx.p())?;
    let len = plotkin_min_length_over(nn, k, ctx.p()).map_err(|e| pl.fail(e.to_string()))?;
    pl.expect("num", *len.numer())?;
    pl.expect("den", *len.denom())?;
    let length = len.ceil().to_integer() as usize;
    pl.expect("length", length as u64)?;
    if kept.len() < length {
        return Err(pl.fail(format!("{} kept coordinates cannot hold {k} vectors at distance {nn}", kept.len())));
    }
    if cert.bound != r + length {
        return Err(cert_err("bound", format!("bound {} != r + length = {}", cert.bound, r + length)));
    }
    if cert.t.is_some() {
        return Err(cert_err("bound", "code certificates carry no t"));
    }
    Ok(())
}

fn check_gfp(cert: &BoundCertificate, d: &BilinearDecomp) -> Result<()> {
    let circ = CertStep::new("circuit");
    if !d.is_square() || !verify_mp(d) {
        return Err(circ.fail("source circuit does not compute the matrix product"));
    }
    let n = d.dims().0;
    let ctx = d.ctx();
    let id = Mat::identity(ctx, n);
    let mut c_inv: Option<Mat> = None;

    if let Some(inv) = cert.step("inverse_family") {
        check_shapes(inv, ctx, n)?;
        let k = inv.family.len();
        inv.expect("k", k as u64)?;
        for (i, j) in pairs(k) {
            if !inv.family[i].sub(&inv.family[j])?.is_invertible() {
                return Err(inv.fail(format!("difference of members {i} and {j} is singular")));
            }
        }
        let pair = inv.list("pair")?;
        let &[i, j] = pair else {
            return Err(inv.fail("pair must list two indices"));
        };
        if i >= j || j >= k {
            return Err(inv.fail("pair indices out of order or range"));
        }
        let c = inv.mat("c")?;
        if *c != inv.family[i].sub(&inv.family[j])? {
            return Err(inv.fail("c is not the difference of the chosen pair"));
        }
        if !c.is_invertible() {
            return Err(inv.fail("c is singular"));
        }
        inv.expect("agree", vanish_count(&d.u_forms(), &[c]) as u64)?;
        c_inv = Some(c.clone());
    }

    let mut work = d.clone();
    if let Some(sw) = cert.step("sandwich") {
        check_shapes(sw, ctx, n)?;
        let c = sw.mat("c")?;
        if c_inv.as_ref().is_some_and(|ci| ci != c) {
            return Err(sw.fail("sandwiching matrix differs from the chosen difference"));
        }
        work = sandwich(d, c).map_err(|e| sw.fail(e.to_string()))?;
        if !verify_mp(&work) {
            return Err(sw.fail("sandwiched circuit does not compute the matrix product"));
        }
        let on_id = vanish_count(&work.u_forms(), &[&id]) as u64;
        sw.expect("vanish_on_identity", on_id)?;
        if let Some(inv) = cert.step("inverse_family") {
            if inv.claim("agree")? != on_id {
                return Err(sw.fail("forms vanishing on I differ from forms vanishing on c"));
            }
        }
    }
    let forms = work.u_forms();
    let on_identity = vanishing_set(&forms, &[&id]);

    let mut chosen: Option<(Mat, Mat)> = None;
    if let Some(cf) = cert.step("commutator_family") {
        check_shapes(cf, ctx, n)?;
        let k = cf.family.len();
        cf.expect("k", k as u64)?;
        for (i, j, l) in triples(k) {
            if !triple_commutator(&cf.family[i], &cf.family[j], &cf.family[l])?.is_invertible() {
                return Err(cf.fail(format!("commutator for members ({i}, {j}, {l}) is singular")));
            }
        }
        let &[i, j, l] = cf.list("triple")? else {
            return Err(cf.fail("triple must list three indices"));
        };
        if !(i < j && j < l && l < k) {
            return Err(cf.fail("triple indices out of order or range"));
        }
        if cf.list("coords")? != on_identity.as_slice() {
            return Err(cf.fail("coords are not the forms vanishing on I"));
        }
        let (fi, fj, fl) = (&cf.family[i], &cf.family[j], &cf.family[l]);
        let agree = on_identity
            .iter()
            .filter(|&&s| {
                let (x, y, z) = (
                    forms[s].eval_unchecked(fi.entries()),
                    forms[s].eval_unchecked(fj.entries()),
                    forms[s].eval_unchecked(fl.entries()),
                );
                x == y && y == z
            })
            .count();
        cf.expect("agree", agree as u64)?;
        let (a, b) = (cf.mat("a")?, cf.mat("b")?);
        if *a != fi.sub(fl)? || *b != fj.sub(fl)? {
            return Err(cf.fail("a, b are not the differences of the chosen triple"));
        }
        chosen = Some((a.clone(), b.clone()));
    }

    let bl = cert.require("blaser")?;
    check_shapes(bl, ctx, n)?;
    let (a, b) = (bl.mat("a")?, bl.mat("b")?);
    if chosen.as_ref().is_some_and(|(ca, cb)| ca != a || cb != b) {
        return Err(bl.fail("a, b differ from the commutator-family choice"));
    }
    if !a.commutator(b)?.is_invertible() {
        return Err(bl.fail("[a, b] is singular"));
    }
    bl.expect("commutator_invertible", 1)?;
    let vanishing = vanishing_set(&forms, &[&id, a, b]);
    if bl.list("vanishing")? != vanishing.as_slice() {
        return Err(bl.fail("vanishing list differs from recomputation"));
    }
    let t = vanishing.len();
    bl.expect("t", t as u64)?;
    bl.expect("half_again", half_again(n) as u64)?;
    if cert.t != Some(t) {
        return Err(cert_err("bound", format!("t = {:?}, recomputed {t}", cert.t)));
    }
    if cert.bound != t + half_again(n) {
        return Err(cert_err("bound", format!("bound {} != t + ceil(1.5 n^2) = {}", cert.bound, t + half_again(n))));
    }
    Ok(())
}

/// Re-derives every claim of a certificate from its witnesses.
///
/// Also rejects certificates whose bound exceeds the source's actual size,
/// which would contradict the lemmas the bound rests on.
pub fn check_certificate(cert: &BoundCertificate) -> Result<()> {
    if cert.m_actual != cert.source.m() {
        return Err(cert_err("header", format!("gates {} but source has {}", cert.m_actual, cert.source.m())));
    }
    match (cert.kind, &cert.source) {
        (CertKind::Gf2Code, CertSource::Code(code)) => check_gf2(cert, code)?,
        (CertKind::GfpBilinear, CertSource::Circuit(d)) => check_gfp(cert, d)?,
        _ => return Err(cert_err("header", "certificate kind does not match its source")),
    }
    if cert.bound > cert.m_actual {
        return Err(cert_err(
            "consistency",
            format!("bound {} exceeds the actual size {}", cert.bound, cert.m_actual),
        ));
    }
    Ok(())
}

/// Certificate that `m >= t + ceil(1.5 n^2)` for a circuit given `a, b` with
/// invertible commutator, where `t` counts u-forms vanishing on `I, a, b`.
pub fn blaser_certificate(d: &BilinearDecomp, a: &Mat, b: &Mat) -> Result<BoundCertificate> {
    let n = d.n()?;
    if !verify_mp(d) {
        return Err(Error::NotMatrixProduct("input circuit fails verification".into()));
    }
    let step = blaser_step(d, a, b)?;
    let t = step.claim("t")? as usize;
    let cert = BoundCertificate {
        kind: CertKind::GfpBilinear,
        source: CertSource::Circuit(d.clone()),
        seed: 0,
        steps: vec![step],
        t: Some(t),
        bound: t + half_again(n),
        m_actual: d.m(),
    };
    check_certificate(&cert)?;
    Ok(cert)
}

pub(crate) fn blaser_step(work: &BilinearDecomp, a: &Mat, b: &Mat) -> Result<CertStep> {
    let n = work.n()?;
    for m in [a, b] {
        if m.ctx() != work.ctx() {
            return Err(Error::FieldMismatch(work.ctx().name(), m.ctx().name()));
        }
        if (m.rows(), m.cols()) != (n, n) {
            return Err(Error::dim(format!("witness must be {n}x{n}")));
        }
    }
    if !a.commutator(b)?.is_invertible() {
        return Err(cert_err("blaser", "[a, b] is singular; certificate refused"));
    }
    let id = Mat::identity(work.ctx(), n);
    let vanishing = vanishing_set(&work.u_forms(), &[&id, a, b]);
    Ok(CertStep::new("blaser")
        .with_mat("a", a.clone())
        .with_mat("b", b.clone())
        .with_list("vanishing", vanishing.clone())
        .with_claim("t", vanishing.len() as u64)
        .with_claim("commutator_invertible", 1)
        .with_claim("half_again", half_again(n) as u64))
}
