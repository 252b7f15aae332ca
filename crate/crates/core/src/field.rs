//! Exact arithmetic in GF(p) and GF(p^d).
//!
//! Elements are stored packed as `c_0 + c_1 p + ... + c_{d-1} p^{d-1}` where
//! `c_i` is the coefficient of `t^i` in the power basis of the context's
//! modulus root `t`. Packing order coincides with the lexicographic order of
//! coefficient tuples read from the top coefficient down, so `0..p^d` is the
//! enumeration order.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};

/// Largest field that may be enumerated element by element.
pub const ENUMERATION_CAP: u64 = 1 << 20;

/// Extension fields up to this order get log/exp tables.
const TABLE_CAP: u64 = 1 << 16;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct FieldElem(u64);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);

    /// Packed representation; equals the enumeration index.
    pub fn index(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    p: u64,
    d: usize,
    modulus: Vec<u64>,
    order: u64,
    tables: Option<Tables>,
}

/// A finite field GF(p^d) with a fixed, deterministically chosen modulus.
///
/// Cloning is cheap; all clones share the same immutable data.
#[derive(Clone)]
pub struct FieldCtx(Arc<Inner>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.d == other.0.d)
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

fn cache() -> &'static Mutex<HashMap<(u64, usize), FieldCtx>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), FieldCtx>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2u64;
    while q.saturating_mul(q) <= p {
        if p % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}

/// Builds GF(p^d) using the lexicographically smallest monic irreducible
/// polynomial of degree d, comparing coefficient tuples `(c_0, c_1, ...)`
/// with the constant term most significant.
pub fn make_context(p: u64, d: usize) -> Result<FieldCtx> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if d == 0 {
        return Err(Error::ZeroDegree);
    }
    if let Some(ctx) = cache().lock().unwrap().get(&(p, d)) {
        return Ok(ctx.clone());
    }
    let order = checked_pow(p, d).filter(|&q| q <= 1 << 62).ok_or(Error::FieldTooLarge {
        p,
        d,
        what: "packed arithmetic",
    })?;
    let modulus = if d == 1 {
        vec![0, 1]
    } else {
        smallest_irreducible(p, d)
    };
    let mut inner = Inner {
        p,
        d,
        modulus,
        order,
        tables: None,
    };
    if d > 1 && order <= TABLE_CAP {
        inner.tables = Some(build_tables(&inner));
    }
    let ctx = FieldCtx(Arc::new(inner));
    let mut guard = cache().lock().unwrap();
    Ok(guard.entry((p, d)).or_insert(ctx).clone())
}

fn checked_pow(p: u64, d: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..d {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Remainder of `f` modulo the monic polynomial `g` (ascending coefficients).
fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        if lead != 0 {
            for (j, &gj) in g.iter().enumerate() {
                let sub = mulmod(lead, gj, p);
                r[shift + j] = (r[shift + j] + p - sub) % p;
            }
        }
        r.pop();
    }
    r
}

fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.len() > 1 && *f.last().unwrap() == 0 {
        f.pop();
    }
    f
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mulmod(x, y, p)) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !(b.len() == 1 && b[0] == 0) {
        // make b monic, then reduce
        let inv = pow_mod(*b.last().unwrap(), p - 2, p);
        let monic: Vec<u64> = b.iter().map(|&c| mulmod(c, inv, p)).collect();
        let r = trim(poly_rem(&a, &monic, p));
        a = monic;
        b = if r.is_empty() { vec![0] } else { r };
    }
    a
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

/// `f` (monic) has no factor of degree `1..=deg f / 2`, checked as
/// `gcd(X^{p^i} - X, f) = 1` for each such degree `i`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    let x = {
        let mut x = vec![0u64; d.max(2)];
        x[1] = 1;
        poly_rem(&x, f, p)
    };
    let mut h = x.clone();
    for _ in 1..=d / 2 {
        // h <- h^p mod f
        let mut acc = vec![1u64];
        let mut base = h.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, f, p);
            }
            base = poly_mulmod(&base, &base, f, p);
            e >>= 1;
        }
        h = acc;
        let mut diff = h.clone();
        diff.resize(d.max(diff.len()), 0);
        for (i, &c) in x.iter().enumerate() {
            diff[i] = (diff[i] + p - c) % p;
        }
        let g = poly_gcd(f, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u64, d: usize) -> Vec<u64> {
    let count = checked_pow(p, d).expect("checked by caller");
    for idx in 0..count {
        // big-endian digits: c_0 is the most significant
        let mut coeffs = vec![0u64; d + 1];
        let mut x = idx;
        for i in (0..d).rev() {
            coeffs[i] = x % p;
            x /= p;
        }
        coeffs[d] = 1;
        if coeffs[0] != 0 && is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn factor_primes(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn build_tables(inner: &Inner) -> Tables {
    let q = inner.order;
    let group = q - 1;
    let primes = factor_primes(group);
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mul_packed(inner, acc, b);
            }
            b = poly_mul_packed(inner, b, b);
            e >>= 1;
        }
        acc
    };
    let generator = (2..q)
        .find(|&g| primes.iter().all(|&r| pow(g, group / r) != 1))
        .unwrap_or(1);
    let mut exp = vec![0u32; group as usize];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u64;
    for (i, slot) in exp.iter_mut().enumerate() {
        *slot = x as u32;
        log[x as usize] = i as u32;
        x = poly_mul_packed(inner, x, generator);
    }
    Tables { exp, log }
}

fn unpack(inner: &Inner, mut x: u64, out: &mut [u64]) {
    for slot in out.iter_mut().take(inner.d) {
        *slot = x % inner.p;
        x /= inner.p;
    }
}

fn pack(inner: &Inner, digits: &[u64]) -> u64 {
    digits[..inner.d]
        .iter()
        .rev()
        .fold(0u64, |acc, &c| acc * inner.p + c)
}

fn poly_mul_packed(inner: &Inner, a: u64, b: u64) -> u64 {
    let (p, d) = (inner.p, inner.d);
    let mut da = [0u64; 64];
    let mut db = [0u64; 64];
    unpack(inner, a, &mut da);
    unpack(inner, b, &mut db);
    let mut prod = [0u64; 128];
    for i in 0..d {
        if da[i] == 0 {
            continue;
        }
        for j in 0..d {
            prod[i + j] = (prod[i + j] + mulmod(da[i], db[j], p)) % p;
        }
    }
    for i in (d..2 * d - 1).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for j in 0..d {
            let sub = mulmod(c, inner.modulus[j], p);
            prod[i - d + j] = (prod[i - d + j] + p - sub) % p;
        }
    }
    pack(inner, &prod)
}

impl FieldCtx {
    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.d
    }

    /// Monic modulus, ascending coefficients, `d + 1` entries.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.d == 1
    }

    pub fn name(&self) -> String {
        if self.0.d == 1 {
            format!("GF({})", self.0.p)
        } else {
            format!("GF({}^{})", self.0.p, self.0.d)
        }
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElem {
        FieldElem(v.rem_euclid(self.0.p as i64) as u64)
    }

    pub fn elem(&self, index: u64) -> Result<FieldElem> {
        if index < self.0.order {
            Ok(FieldElem(index))
        } else {
            Err(Error::ForeignElement(index))
        }
    }

    pub fn contains(&self, a: FieldElem) -> bool {
        a.0 < self.0.order
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() != self.0.d {
            return Err(Error::dim(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.0.d
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.0.p) {
            return Err(Error::ForeignElement(c));
        }
        Ok(FieldElem(pack(&self.0, coeffs)))
    }

    pub fn coeffs(&self, a: FieldElem) -> Vec<u64> {
        let mut out = vec![0u64; self.0.d];
        unpack(&self.0, a.0, &mut out);
        out
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.0.p;
        if self.0.d == 1 {
            let s = a.0 + b.0;
            return FieldElem(if s >= p { s - p } else { s });
        }
        if p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut acc = 0u64;
        let mut scale = 1u64;
        for _ in 0..self.0.d {
            let s = (x % p + y % p) % p;
            acc += s * scale;
            scale = scale.wrapping_mul(p);
            x /= p;
            y /= p;
        }
        FieldElem(acc)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        if self.0.d == 1 {
            return FieldElem(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut x = a.0;
        let mut acc = 0u64;
        let mut scale = 1u64;
        for _ in 0..self.0.d {
            let c = x % p;
            acc += ((p - c) % p) * scale;
            scale = scale.wrapping_mul(p);
            x /= p;
        }
        FieldElem(acc)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem(0);
        }
        if self.0.d == 1 {
            let p = self.0.p;
            return FieldElem(if p < 1 << 32 {
                a.0 * b.0 % p
            } else {
                mulmod(a.0, b.0, p)
            });
        }
        if let Some(t) = &self.0.tables {
            let n = t.exp.len();
            let e = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
            return FieldElem(t.exp[if e >= n { e - n } else { e }] as u64);
        }
        FieldElem(poly_mul_packed(&self.0, a.0, b.0))
    }

    pub fn pow(&self, mut a: FieldElem, mut e: u64) -> FieldElem {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.0.tables {
            let n = t.exp.len();
            let l = t.log[a.0 as usize] as usize;
            return Ok(FieldElem(t.exp[(n - l) % n] as u64));
        }
        // a^(q-2)
        Ok(self.pow(a, self.0.order - 2))
    }

    /// All elements in packed (lexicographic coefficient) order.
    pub fn enumerate(&self) -> Result<Vec<FieldElem>> {
        if self.0.order > ENUMERATION_CAP {
            return Err(Error::FieldTooLarge {
                p: self.0.p,
                d: self.0.d,
                what: "enumeration",
            });
        }
        Ok((0..self.0.order).map(FieldElem).collect())
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem(rng.gen_range(0..self.0.order))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem(rng.gen_range(1..self.0.order))
    }

    /// Text encoding: decimal for prime fields, colon-separated ascending
    /// coefficients otherwise.
    pub fn format_elem(&self, a: FieldElem) -> String {
        if self.0.d == 1 {
            a.0.to_string()
        } else {
            self.coeffs(a)
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(":")
        }
    }

    pub fn parse_elem(&self, s: &str) -> Option<FieldElem> {
        if self.0.d == 1 {
            let v: u64 = s.parse().ok()?;
            return (v < self.0.p).then_some(FieldElem(v));
        }
        let coeffs: Vec<u64> = s
            .split(':')
            .map(|c| c.parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .ok()?;
        self.from_coeffs(&coeffs).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn moduli() {
        assert_eq!(make_context(2, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(make_context(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(make_context(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    /// Scan every monic quadratic over GF(3) by brute-force root search.
    #[test]
    fn gf9_modulus_is_first_rootless_quadratic() {
        let mut first = None;
        'outer: for c0 in 0..3u64 {
            for c1 in 0..3u64 {
                let rootless = (0..3u64).all(|x| (x * x + c1 * x + c0) % 3 != 0);
                if rootless {
                    first = Some(vec![c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        assert_eq!(make_context(3, 2).unwrap().modulus(), first.unwrap().as_slice());
    }

    #[test]
    fn errors() {
        assert_eq!(make_context(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(make_context(2, 0).unwrap_err(), Error::ZeroDegree);
        let f = make_context(5, 1).unwrap();
        assert_eq!(f.inv(f.zero()).unwrap_err(), Error::DivisionByZero);
        assert!(make_context(2, 21).unwrap().enumerate().is_err());
    }

    #[test]
    fn small_arithmetic() {
        let f2 = make_context(2, 1).unwrap();
        assert_eq!(f2.add(f2.one(), f2.one()), f2.zero());
        let f3 = make_context(3, 1).unwrap();
        let two = f3.from_int(2);
        assert_eq!(f3.mul(two, two), f3.one());
        let f4 = make_context(2, 2).unwrap();
        let t = f4.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f4.mul(t, t), f4.from_coeffs(&[1, 1]).unwrap());
    }

    #[test]
    fn enumeration_order() {
        let f2 = make_context(2, 1).unwrap();
        assert_eq!(f2.enumerate().unwrap(), vec![FieldElem(0), FieldElem(1)]);
        let f4 = make_context(2, 2).unwrap();
        let coeffs: Vec<_> = f4.enumerate().unwrap().into_iter().map(|a| f4.coeffs(a)).collect();
        assert_eq!(coeffs, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
        let f3 = make_context(3, 1).unwrap();
        assert_eq!(f3.enumerate().unwrap().len(), 3);
    }

    #[test]
    fn text_encoding() {
        let f4 = make_context(2, 2).unwrap();
        let a = f4.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f4.format_elem(a), "1:1");
        assert_eq!(f4.parse_elem("1:1"), Some(a));
        assert_eq!(f4.parse_elem("1:2"), None);
        let f5 = make_context(5, 1).unwrap();
        assert_eq!(f5.parse_elem("4"), Some(FieldElem(4)));
        assert_eq!(f5.parse_elem("5"), None);
    }

    fn check_axioms(f: &FieldCtx, triples: impl Iterator<Item = (FieldElem, FieldElem, FieldElem)>) {
        for (a, b, c) in triples {
            assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            assert_eq!(f.add(a, b), f.add(b, a));
            assert_eq!(f.mul(a, b), f.mul(b, a));
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            assert_eq!(f.add(a, f.neg(a)), f.zero());
        }
    }

    #[test]
    fn axioms_exhaustive_small() {
        for (p, d) in [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (2, 4), (2, 5), (2, 6), (7, 2)] {
            let f = make_context(p, d).unwrap();
            if f.order() > 64 {
                continue;
            }
            let els = f.enumerate().unwrap();
            let els = &els;
            let triples = els
                .iter()
                .flat_map(|&a| els.iter().flat_map(move |&b| els.iter().map(move |&c| (a, b, c))));
            check_axioms(&f, triples);
        }
    }

    #[test]
    fn axioms_sampled_large() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        // tabled, untabled and wide prime fields
        for (p, d) in [(2, 8), (3, 5), (2, 20), (5, 9), (1_000_003, 1), (4_294_967_311, 1)] {
            let f = make_context(p, d).unwrap();
            let triples: Vec<_> = (0..10_000)
                .map(|_| (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng)))
                .collect();
            check_axioms(&f, triples.into_iter());
        }
    }

    #[test]
    fn inverse_exhaustive() {
        for (p, d) in [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2), (2, 12), (3, 7), (5, 5), (13, 3)] {
            let f = make_context(p, d).unwrap();
            if f.order() > 1 << 12 {
                continue;
            }
            for a in f.enumerate().unwrap().into_iter().skip(1) {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one(), "{:?} {:?}", f, a);
            }
        }
        // untabled path
        let f = make_context(2, 17).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let a = f.random_nonzero(&mut rng);
            assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
    }

    #[test]
    fn reproducible_moduli() {
        for (p, d) in [(2, 6), (3, 4), (5, 3)] {
            let a = make_context(p, d).unwrap().modulus().to_vec();
            let b = make_context(p, d).unwrap().modulus().to_vec();
            assert_eq!(a, b);
        }
    }

    /// Brute-force divisor scan over every monic polynomial of degree <= d/2.
    fn has_small_factor(f: &[u64], p: u64) -> bool {
        let d = f.len() - 1;
        (1..=d / 2).any(|e| {
            (0..p.pow(e as u32)).any(|idx| {
                let mut g: Vec<u64> = (0..e).map(|i| idx / p.pow(i as u32) % p).collect();
                g.push(1);
                poly_rem(f, &g, p).iter().all(|&c| c == 0)
            })
        })
    }

    #[test]
    fn irreducibility_matches_divisor_scan() {
        for (p, d) in [(2u64, 2usize), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3)] {
            for idx in 0..p.pow(d as u32) {
                let mut f: Vec<u64> = (0..d).map(|i| idx / p.pow(i as u32) % p).collect();
                f.push(1);
                assert_eq!(is_irreducible(&f, p), !has_small_factor(&f, p), "{f:?} mod {p}");
            }
        }
    }

    #[test]
    fn moduli_are_irreducible_by_root_and_factor_scan() {
        for (p, d) in [(2, 3), (2, 4), (2, 6), (3, 3), (3, 4), (5, 2)] {
            let f = make_context(p, d).unwrap();
            assert!(!has_small_factor(f.modulus(), p));
            assert_eq!(*f.modulus().last().unwrap(), 1);
        }
    }
}
