use super::agreement::{best_agreeing_pair, best_agreeing_triple, plotkin_min_length_over};
use super::certificate::{blaser_step, check_certificate, half_again, BoundCertificate, CertKind, CertSource, CertStep};
use super::families::{commutator_family, vanish_family};
use super::search::SearchConfig;
use super::{binom, pairs};
use crate::circuits::{sandwich, verify_mp, BilinearDecomp};
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::matcodes::{encode, hamming, MatrixCode};
use crate::matspace::{LinForm, Mat};

fn step_err(step: &str, e: Error) -> Error {
    match e {
        Error::Certificate { .. } => e,
        other => Error::Certificate {
            step: step.into(),
            detail: other.to_string(),
        },
    }
}

/// Length lower bound for a matrix code: `k` matrices with invertible
/// differences whose codewords, after dropping the `r` coordinates vanishing
/// on all of them, are pairwise at distance at least `n^2`.
pub fn gf2_pipeline(code: &MatrixCode, k: usize, cfg: &SearchConfig) -> Result<BoundCertificate> {
    let ctx = code.ctx();
    let n = code.n();
    let nn = n * n;
    if k <= 2 {
        return Err(Error::pre(format!("distance bound needs k > 2, got k = {k}")));
    }
    let fam = vanish_family(code.forms(), n, k, ctx, cfg).map_err(|e| step_err("family", e))?;
    let r = fam.vanishing.len();
    let kept: Vec<usize> = (0..code.m()).filter(|i| fam.vanishing.binary_search(i).is_err()).collect();
    let restricted: Vec<Vec<FieldElem>> = fam
        .mats
        .iter()
        .map(|a| {
            let full = encode(code, a)?;
            Ok(kept.iter().map(|&c| full[c]).collect())
        })
        .collect::<Result<_>>()?;
    let min_d = pairs(k).map(|(i, j)| hamming(&restricted[i], &restricted[j])).min().expect("k > 2");
    if min_d < nn {
        return Err(Error::Certificate {
            step: "distance".into(),
            detail: format!("restricted codewords at distance {min_d} < {nn}; the code violates the rank-distance property"),
        });
    }
    let len = plotkin_min_length_over(nn, k, ctx.p())?;
    let length = len.ceil().to_integer() as usize;
    let steps = vec![
        CertStep::new("family")
            .with_family(fam.mats.clone())
            .with_list("vanishing", fam.vanishing.clone())
            .with_claim("k", k as u64)
            .with_claim("r", r as u64),
        CertStep::new("distance")
            .with_list("kept", kept)
            .with_claim("N", nn as u64)
            .with_claim("min_distance", min_d as u64),
        CertStep::new("plotkin")
            .with_claim("k", k as u64)
            .with_claim("N", nn as u64)
            .with_claim("p", ctx.p())
            .with_claim("num", *len.numer())
            .with_claim("den", *len.denom())
            .with_claim("length", length as u64),
    ];
    let cert = BoundCertificate {
        kind: CertKind::Gf2Code,
        source: CertSource::Code(code.clone()),
        seed: cfg.seed,
        steps,
        t: None,
        bound: r + length,
        m_actual: code.m(),
    };
    check_certificate(&cert)?;
    Ok(cert)
}

fn codeword(forms: &[LinForm], a: &Mat, coords: &[usize]) -> Vec<FieldElem> {
    coords.iter().map(|&s| forms[s].eval_unchecked(a.entries())).collect()
}

/// Bilinear lower bound `m >= t + ceil(1.5 n^2)`.
///
/// 1. A family with invertible differences; the best agreeing pair gives an
///    invertible `c` on which many u-forms vanish.
/// 2. Sandwiching by `c` moves those forms onto the identity.
/// 3. A family with invertible triple commutators; the best agreeing triple
///    among the forms vanishing on `I` gives `a, b`.
/// 4. The commutator certificate for `(a, b)`.
pub fn gfp_pipeline(d: &BilinearDecomp, k1: usize, k2: usize, cfg: &SearchConfig) -> Result<BoundCertificate> {
    let n = d.n()?;
    let ctx = d.ctx();
    if !verify_mp(d) {
        return Err(Error::NotMatrixProduct("input circuit fails verification".into()));
    }
    if n % 2 != 0 {
        return Err(Error::pre(format!("commutator family needs even n, got n = {n}")));
    }
    if k2 < 3 {
        return Err(Error::pre(format!("commutator family needs k2 >= 3, got {k2}")));
    }
    let need = 4 * binom(k2, 3) as u64;
    if ctx.p().checked_pow((n / 2) as u32).is_some_and(|q| q <= need) {
        return Err(Error::pre(format!(
            "commutator family needs {}^{} > 4 C({k2},3) = {need}",
            ctx.p(),
            n / 2
        )));
    }
    if k1 < 2 {
        return Err(Error::pre(format!("inverse family needs k1 >= 2, got {k1}")));
    }

    let forms = d.u_forms();
    let all: Vec<usize> = (0..forms.len()).collect();
    let fam1 = vanish_family(&forms, n, k1, ctx, cfg).map_err(|e| step_err("inverse_family", e))?;
    let words: Vec<Vec<FieldElem>> = fam1.mats.iter().map(|a| codeword(&forms, a, &all)).collect();
    let (i, j, agree) = best_agreeing_pair(&words)?;
    let c = fam1.mats[i].sub(&fam1.mats[j])?;
    let inverse_step = CertStep::new("inverse_family")
        .with_family(fam1.mats.clone())
        .with_list("pair", vec![i, j])
        .with_mat("c", c.clone())
        .with_claim("k", k1 as u64)
        .with_claim("agree", agree as u64);

    let work = sandwich(d, &c).map_err(|e| step_err("sandwich", e))?;
    let wforms = work.u_forms();
    let id = Mat::identity(ctx, n);
    let on_id: Vec<usize> = (0..wforms.len())
        .filter(|&s| wforms[s].eval_unchecked(id.entries()).is_zero())
        .collect();
    let sandwich_step = CertStep::new("sandwich")
        .with_mat("c", c.clone())
        .with_claim("vanish_on_identity", on_id.len() as u64);

    // forms vanishing on I come first so the independent subset favours them
    let order: Vec<usize> = on_id
        .iter()
        .copied()
        .chain((0..wforms.len()).filter(|s| on_id.binary_search(s).is_err()))
        .collect();
    let ordered: Vec<LinForm> = order.iter().map(|&s| wforms[s].clone()).collect();
    let fam2 = commutator_family(n, k2, &ordered, ctx, cfg).map_err(|e| step_err("commutator_family", e))?;
    let words: Vec<Vec<FieldElem>> = fam2.mats.iter().map(|a| codeword(&wforms, a, &on_id)).collect();
    let (ti, tj, tl, tcount) = best_agreeing_triple(&words)?;
    let a = fam2.mats[ti].sub(&fam2.mats[tl])?;
    let b = fam2.mats[tj].sub(&fam2.mats[tl])?;
    let comm_step = CertStep::new("commutator_family")
        .with_family(fam2.mats.clone())
        .with_list("triple", vec![ti, tj, tl])
        .with_list("coords", on_id.clone())
        .with_mat("a", a.clone())
        .with_mat("b", b.clone())
        .with_claim("k", k2 as u64)
        .with_claim("agree", tcount as u64);

    let bl = blaser_step(&work, &a, &b).map_err(|e| step_err("blaser", e))?;
    let t = bl.claim("t")? as usize;
    let cert = BoundCertificate {
        kind: CertKind::GfpBilinear,
        source: CertSource::Circuit(d.clone()),
        seed: cfg.seed,
        steps: vec![inverse_step, sandwich_step, comm_step, bl],
        t: Some(t),
        bound: t + half_again(n),
        m_actual: d.m(),
    };
    check_certificate(&cert)?;
    Ok(cert)
}
