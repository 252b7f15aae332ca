//! Lower-bound proof engine.
//!
//! Sparse nonzero-point search, structured matrix families, agreement and
//! Plotkin-type counting, and self-verifying bound certificates for
//! bilinear circuits and matrix codes.

mod agreement;
mod certificate;
mod families;
mod pipeline;
mod search;

pub use agreement::{
    best_agreeing_pair, best_agreeing_triple, check_pairwise_distance, pair_bound_holds, plotkin_min_length,
    plotkin_min_length_over, triple_bound_holds,
};
pub use certificate::{
    blaser_certificate, check_certificate, BoundCertificate, CertKind, CertSource, CertStep,
};
pub use families::{commutator_family, invertible_difference_family, vanish_family};
pub use pipeline::{gf2_pipeline, gfp_pipeline};
pub use search::{find_nonzero_assignment, find_sparse_witness, SearchConfig};

use crate::error::Result;
use crate::matspace::{LinForm, Mat};

/// Matrices together with the supplied forms vanishing on all of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishWitness {
    pub mats: Vec<Mat>,
    /// Indices into the form list the witness was built against.
    pub vanishing: Vec<usize>,
    /// `(matrix, dual coordinate)` pairs with nonzero coefficient.
    pub support: Vec<(usize, usize)>,
}

impl VanishWitness {
    /// Builds the witness, computing `vanishing` by evaluating every form.
    pub fn new(mats: Vec<Mat>, forms: &[LinForm], support: Vec<(usize, usize)>) -> Result<Self> {
        let vanishing = forms_vanishing_on(forms, &mats)?;
        Ok(VanishWitness {
            mats,
            vanishing,
            support,
        })
    }

    /// True iff every listed form is zero on every matrix.
    pub fn recheck(&self, forms: &[LinForm]) -> bool {
        self.vanishing.iter().all(|&i| {
            forms
                .get(i)
                .is_some_and(|f| self.mats.iter().all(|a| f.eval(a.entries()).is_ok_and(|v| v.is_zero())))
        })
    }

    pub fn differences_invertible(&self) -> bool {
        pairs(self.mats.len()).all(|(i, j)| self.mats[i].sub(&self.mats[j]).is_ok_and(|d| d.is_invertible()))
    }

    /// `[a_i - a_l, a_j - a_l]` invertible for all `i < j < l`.
    pub fn commutators_invertible(&self) -> bool {
        triples(self.mats.len()).all(|(i, j, l)| {
            triple_commutator(&self.mats[i], &self.mats[j], &self.mats[l]).is_ok_and(|c| c.is_invertible())
        })
    }
}

pub(crate) fn triple_commutator(ai: &Mat, aj: &Mat, al: &Mat) -> Result<Mat> {
    ai.sub(al)?.commutator(&aj.sub(al)?)
}

/// Indices of forms that are zero on every matrix.
pub fn forms_vanishing_on(forms: &[LinForm], mats: &[Mat]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, f) in forms.iter().enumerate() {
        let mut all = true;
        for a in mats {
            if !f.eval(a.entries())?.is_zero() {
                all = false;
                break;
            }
        }
        if all {
            out.push(i);
        }
    }
    Ok(out)
}

pub(crate) fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub(crate) fn pairs(k: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..k).flat_map(move |i| (i + 1..k).map(move |j| (i, j)))
}

pub(crate) fn triples(k: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..k).flat_map(move |i| (i + 1..k).flat_map(move |j| (j + 1..k).map(move |l| (i, j, l))))
}
