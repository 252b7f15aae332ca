use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::search::{find_sparse_witness, SearchConfig};
use super::{binom, pairs, triple_commutator, triples, VanishWitness};
use crate::embed::{embed_block, embed_elem};
use crate::error::{Error, Result};
use crate::field::{make_context, FieldCtx, FieldElem};
use crate::matspace::{dual_basis, select_independent, LinForm, Mat};

fn require_prime(ctx: &FieldCtx) -> Result<()> {
    if ctx.is_prime_field() {
        Ok(())
    } else {
        Err(Error::pre(format!("matrix families are built over prime fields, got {}", ctx.name())))
    }
}

fn at_most_power(k: usize, p: u64, e: usize) -> bool {
    p.checked_pow(e as u32).map_or(true, |q| (k as u64) <= q)
}

/// Images of the first `k <= p^n` elements of GF(p^n) in M_n(GF(p)); every pairwise
/// difference is invertible.
pub fn invertible_difference_family(n: usize, k: usize, ctx: &FieldCtx) -> Result<Vec<Mat>> {
    require_prime(ctx)?;
    if !at_most_power(k, ctx.p(), n) {
        return Err(Error::pre(format!("need k <= {}^{n}, got k = {k}", ctx.p())));
    }
    let ext = make_context(ctx.p(), n)?;
    let mats = (0..k as u64)
        .map(|i| embed_elem(&ext, ext.elem(i)?))
        .collect::<Result<Vec<_>>>()?;
    for (i, j) in pairs(k) {
        if !mats[i].sub(&mats[j])?.is_invertible() {
            return Err(Error::Certificate {
                step: "invertible_difference_family".into(),
                detail: format!("difference of members {i} and {j} is singular"),
            });
        }
    }
    Ok(mats)
}

/// Duals of a maximal independent subset of `forms`, which must have `n^2`
/// members.
fn independent_duals(forms: &[LinForm], n: usize) -> Result<Vec<Mat>> {
    let sel = select_independent(forms);
    if sel.len() != n * n {
        return Err(Error::Dependent(format!("forms span dimension {}, need {}", sel.len(), n * n)));
    }
    let chosen: Vec<LinForm> = sel.iter().map(|&i| forms[i].clone()).collect();
    dual_basis(&chosen, n)
}

fn det_of_product(ctx: &FieldCtx, n: usize, factors: impl Iterator<Item = Result<Mat>>) -> FieldElem {
    let mut acc = Mat::identity(ctx, n);
    for f in factors {
        acc = acc.matmul(&f.expect("square factors")).expect("square factors");
    }
    acc.det().expect("square")
}

/// `k` matrices with pairwise invertible differences on which at least
/// `n^2 - C(k,2) n` of the independent forms vanish.
///
/// `vanishing` indexes into `forms` and includes dependent forms.
pub fn vanish_family(forms: &[LinForm], n: usize, k: usize, ctx: &FieldCtx, cfg: &SearchConfig) -> Result<VanishWitness> {
    require_prime(ctx)?;
    if !at_most_power(k, ctx.p(), n) {
        return Err(Error::pre(format!("need k <= {}^{n}, got k = {k}", ctx.p())));
    }
    let duals = independent_duals(forms, n)?;
    let hint = invertible_difference_family(n, k, ctx)?;
    let poly = |m: &[Mat]| det_of_product(ctx, n, pairs(k).map(|(i, j)| m[i].sub(&m[j])));
    let degree = binom(k, 2) * n;
    let found = find_sparse_witness(&poly, degree, &duals, k, &[hint], cfg)?;
    let w = VanishWitness::new(found.mats, forms, found.support)?;
    if !w.differences_invertible() {
        return Err(Error::Certificate {
            step: "vanish_family".into(),
            detail: "a pairwise difference is singular".into(),
        });
    }
    Ok(w)
}

/// `k` matrices with every `[a_i - a_l, a_j - a_l]` (`i < j < l`) invertible
/// on which at least `n^2 - 2 C(k,3) n` of the independent forms vanish.
///
/// The existence point is a random `k`-tuple in M_2(GF(p^{n/2})), embedded
/// blockwise.
pub fn commutator_family(n: usize, k: usize, forms: &[LinForm], ctx: &FieldCtx, cfg: &SearchConfig) -> Result<VanishWitness> {
    require_prime(ctx)?;
    if n % 2 != 0 {
        return Err(Error::pre(format!("commutator family needs even n, got n = {n}")));
    }
    let half = n / 2;
    let need = 4 * binom(k, 3) as u64;
    if !ctx.p().checked_pow(half as u32).map_or(true, |q| q > need) {
        return Err(Error::pre(format!(
            "commutator family needs {}^{half} > 4 C({k},3) = {need}",
            ctx.p()
        )));
    }
    let duals = independent_duals(forms, n)?;
    let poly = |m: &[Mat]| det_of_product(ctx, n, triples(k).map(|(i, j, l)| triple_commutator(&m[i], &m[j], &m[l])));
    let degree = 2 * binom(k, 3) * n;
    let hints = if k >= 3 {
        let ext = make_context(ctx.p(), half)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut found = None;
        let mut evaluations = 0;
        while evaluations < cfg.budget {
            evaluations += 1;
            let small: Vec<Mat> = (0..k).map(|_| Mat::random(&ext, 2, 2, &mut rng)).collect();
            if !det_of_product(&ext, 2, triples(k).map(|(i, j, l)| triple_commutator(&small[i], &small[j], &small[l]))).is_zero() {
                found = Some(small);
                break;
            }
        }
        let small = found.ok_or_else(|| Error::NotFound {
            what: format!("{k} matrices in M_2({}) with invertible triple commutators", ext.name()),
            evaluations,
        })?;
        vec![small.iter().map(|a| embed_block(a, half)).collect::<Result<Vec<_>>>()?]
    } else {
        Vec::new()
    };
    let found = find_sparse_witness(&poly, degree, &duals, k, &hints, cfg)?;
    let w = VanishWitness::new(found.mats, forms, found.support)?;
    if !w.commutators_invertible() {
        return Err(Error::Certificate {
            step: "commutator_family".into(),
            detail: "a triple commutator is singular".into(),
        });
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldCtx {
        make_context(p, 1).unwrap()
    }

    fn coords(f: &FieldCtx, n: usize) -> Vec<LinForm> {
        (0..n * n).map(|i| LinForm::coordinate(f, n * n, i)).collect()
    }

    fn independent_vanishing(w: &VanishWitness, forms: &[LinForm]) -> usize {
        let sel = select_independent(forms);
        w.vanishing.iter().filter(|i| sel.contains(i)).count()
    }

    #[test]
    fn difference_family_examples() {
        let f2 = gf(2);
        let fam = invertible_difference_family(2, 2, &f2).unwrap();
        assert_eq!(fam, vec![Mat::zeros(&f2, 2, 2), Mat::identity(&f2, 2)]);
        let fam = invertible_difference_family(2, 4, &f2).unwrap();
        assert_eq!(fam.len(), 4);
        for (i, j) in pairs(4) {
            assert!(!fam[i].sub(&fam[j]).unwrap().det().unwrap().is_zero());
        }
        assert_eq!(invertible_difference_family(3, 1, &f2).unwrap().len(), 1);
        assert!(invertible_difference_family(2, 5, &f2).is_err());
        assert!(invertible_difference_family(2, 2, &make_context(2, 2).unwrap()).is_err());
    }

    #[test]
    fn vanish_family_examples() {
        let f2 = gf(2);
        let cfg = SearchConfig::default();
        let w = vanish_family(&coords(&f2, 2), 2, 2, &f2, &cfg).unwrap();
        assert_eq!(w.mats, vec![Mat::zeros(&f2, 2, 2), Mat::identity(&f2, 2)]);
        assert_eq!(w.vanishing, vec![1, 2]);
        let w = vanish_family(&coords(&f2, 3), 3, 2, &f2, &cfg).unwrap();
        assert!(w.vanishing.len() >= 6);
        assert!(w.differences_invertible());
        let w = vanish_family(&coords(&f2, 2), 2, 3, &f2, &cfg).unwrap();
        assert!(w.differences_invertible());
        assert!(vanish_family(&coords(&f2, 2), 2, 4, &f2, &cfg).unwrap().differences_invertible());
        assert!(vanish_family(&coords(&f2, 2), 2, 1, &f2, &cfg).unwrap().vanishing.len() == 4);
        assert!(vanish_family(&coords(&f2, 2)[..3], 2, 2, &f2, &cfg).is_err());
    }

    #[test]
    fn vanish_family_with_repeated_forms() {
        let f3 = gf(3);
        let base = coords(&f3, 2);
        let forms: Vec<LinForm> = base.iter().chain(base.iter()).cloned().collect();
        let w = vanish_family(&forms, 2, 2, &f3, &SearchConfig::default()).unwrap();
        assert!(w.recheck(&forms));
        assert!(independent_vanishing(&w, &forms) >= 2);
        assert_eq!(w.vanishing.len() % 2, 0);
    }

    #[test]
    fn commutator_family_small() {
        let f3 = gf(3);
        let w = commutator_family(2, 2, &coords(&f3, 2), &f3, &SearchConfig::default()).unwrap();
        assert!(w.support.is_empty());
        assert_eq!(w.vanishing.len(), 4);
        assert!(commutator_family(3, 3, &coords(&f3, 3), &f3, &SearchConfig::default()).is_err());
        // 3^1 = 3 is not above 4
        assert!(commutator_family(2, 3, &coords(&f3, 2), &f3, &SearchConfig::default()).is_err());
    }

    #[test]
    fn commutator_family_gf3_n4() {
        let f3 = gf(3);
        let forms = coords(&f3, 4);
        let w = commutator_family(4, 3, &forms, &f3, &SearchConfig::default()).unwrap();
        assert!(w.commutators_invertible());
        assert!(w.vanishing.len() >= 16 - 8);
        assert!(w.recheck(&forms));
    }
}
