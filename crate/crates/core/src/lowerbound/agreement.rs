use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::matcodes::hamming;

fn agree(vs: &[&[FieldElem]]) -> usize {
    (0..vs[0].len()).filter(|&c| vs.iter().all(|v| v[c] == vs[0][c])).count()
}

fn same_length(vectors: &[Vec<FieldElem>]) -> Result<()> {
    match vectors.iter().find(|v| v.len() != vectors[0].len()) {
        Some(v) => Err(Error::dim(format!("vectors of length {} and {}", vectors[0].len(), v.len()))),
        None => Ok(()),
    }
}

/// Pair `(i, j)`, `i < j`, agreeing on the most coordinates; ties go to the
/// lexicographically smallest pair.
pub fn best_agreeing_pair(vectors: &[Vec<FieldElem>]) -> Result<(usize, usize, usize)> {
    if vectors.len() < 2 {
        return Err(Error::pre("need at least two vectors"));
    }
    same_length(vectors)?;
    let mut best = (0, 1, agree(&[&vectors[0], &vectors[1]]));
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            let a = agree(&[&vectors[i], &vectors[j]]);
            if a > best.2 {
                best = (i, j, a);
            }
        }
    }
    Ok(best)
}

/// Triple `(i, j, l)`, `i < j < l`, maximizing the coordinates where all
/// three agree; ties go to the lexicographically smallest triple.
pub fn best_agreeing_triple(vectors: &[Vec<FieldElem>]) -> Result<(usize, usize, usize, usize)> {
    if vectors.len() < 3 {
        return Err(Error::pre("need at least three vectors"));
    }
    same_length(vectors)?;
    let mut best = (0, 1, 2, agree(&[&vectors[0], &vectors[1], &vectors[2]]));
    let k = vectors.len();
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                let a = agree(&[&vectors[i], &vectors[j], &vectors[l]]);
                if a > best.3 {
                    best = (i, j, l, a);
                }
            }
        }
    }
    Ok(best)
}

/// `count >= t/p - t/k` for `k` vectors of length `t` over GF(p), in exact
/// integer arithmetic.
pub fn pair_bound_holds(count: usize, t: usize, k: usize, p: u64) -> bool {
    let (c, t, k) = (count as i128, t as i128, k as i128);
    let p = p as i128;
    c * p * k >= t * k - t * p
}

/// `count >= t/p^2 - 3t/(pk)`.
pub fn triple_bound_holds(count: usize, t: usize, k: usize, p: u64) -> bool {
    let (c, t, k) = (count as i128, t as i128, k as i128);
    let p = p as i128;
    c * p * p * k >= t * k - 3 * t * p
}

/// Least length `t` admitting `k` binary vectors with pairwise distance at
/// least `n_dist`: `2N - 4N/(k+2) = 2Nk/(k+2)`.
pub fn plotkin_min_length(n_dist: usize, k: usize) -> Result<Ratio<u64>> {
    plotkin_min_length_over(n_dist, k, 2)
}

/// The same bound over GF(p): `t >= N p k / (p k - k + p)`. It follows from
/// the pair-agreement bound and reduces to the binary formula at `p = 2`.
pub fn plotkin_min_length_over(n_dist: usize, k: usize, p: u64) -> Result<Ratio<u64>> {
    if k <= 2 {
        return Err(Error::pre(format!("distance bound needs k > 2, got k = {k}")));
    }
    let (n, k) = (n_dist as u64, k as u64);
    Ok(Ratio::new(n * p * k, p * k - k + p))
}

/// All pairwise Hamming distances are at least `n_dist`.
pub fn check_pairwise_distance(vectors: &[Vec<FieldElem>], n_dist: usize) -> bool {
    (0..vectors.len()).all(|i| (i + 1..vectors.len()).all(|j| hamming(&vectors[i], &vectors[j]) >= n_dist))
}
