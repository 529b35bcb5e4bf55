//! Factorization of integer polynomials: square-free decomposition, Berlekamp
//! modulo a small prime, quadratic Hensel lifting, Zassenhaus recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::ExactPoly;
use super::scalar::ExactScalar;
use super::zpoly::ZPoly;
use crate::error::{Error, Result};

/// `p = content * prod factor^multiplicity`, factors irreducible over Q,
/// primitive with positive leading coefficient, sorted by (degree, coefficients).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    #[serde(with = "super::scalar::serde_scalar")]
    pub content: ExactScalar,
    pub factors: Vec<(ExactPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> ExactPoly {
        self.factors.iter().fold(ExactPoly::constant(self.content.clone()), |acc, (f, m)| acc.mul(&f.pow(*m)))
    }
}

/// Factors a nonzero polynomial with integer coefficients over Z.
pub fn factor_over_z(p: &ExactPoly) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("factorization"));
    }
    let z = p.to_zpoly()?;
    let (content, prim) = z.content_primitive();
    let mut factors = Vec::new();
    for (part, mult) in prim.square_free() {
        for f in factor_square_free(&part) {
            factors.push((f, mult));
        }
    }
    factors.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs())));
    Ok(Factorization {
        content: ExactScalar::from_integer(content),
        factors: factors.into_iter().map(|(f, m)| (f.to_exact(), m)).collect(),
    })
}

/// Irreducible factors of a primitive square-free polynomial of positive degree.
pub(crate) fn factor_square_free(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.degree().unwrap_or(0);
    if n <= 1 {
        return vec![f.clone()];
    }
    // Pull out x first: it is cheap and keeps the constant term nonzero.
    if f.coeffs()[0].is_zero() {
        let rest = f.div_exact(&ZPoly::from_i64(&[0, 1])).expect("x divides f");
        let mut out = vec![ZPoly::from_i64(&[0, 1])];
        out.extend(factor_square_free(&rest));
        return out;
    }
    let lc = f.leading().expect("nonzero").clone();
    let p = choose_prime(f, &lc);
    let fp = fp_monic(&fp_from_z(f, p), p);
    let local = berlekamp(&fp, p);
    if local.len() == 1 {
        return vec![f.clone()];
    }
    // Coefficient bound for factors, scaled by the leading coefficient.
    let norm_bound = (BigInt::from(n + 1).sqrt() + 1u32) * f.max_abs() * (BigInt::one() << n) * lc.abs();
    let target = norm_bound * 2u32;
    let mut modulus = BigInt::from(p);
    while modulus <= target {
        modulus = &modulus * &modulus;
    }
    let lifted = hensel_lift(f, &local, p, &modulus);
    recombine(f, lifted, &modulus)
}

fn choose_prime(f: &ZPoly, lc: &BigInt) -> u64 {
    let mut p = 2u64;
    loop {
        if !(lc % p).is_zero() {
            let fp = fp_from_z(f, p);
            let d = fp_deriv(&fp, p);
            if !d.is_empty() && fp_gcd(&fp, &d, p).len() == 1 {
                return p;
            }
        }
        p = next_prime(p);
        assert!(p < 1 << 31, "no suitable prime below 2^31");
    }
}

fn next_prime(p: u64) -> u64 {
    let mut q = p + 1;
    while !is_prime(q) {
        q += 1;
    }
    q
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// ---- polynomials over F_p, ascending coefficients in [0, p) ----

type Fp = Vec<u64>;

fn fp_trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_from_z(f: &ZPoly, p: u64) -> Fp {
    let pb = BigInt::from(p);
    fp_trim(f.coeffs().iter().map(|c| c.mod_floor(&pb).to_u64().expect("reduced")).collect())
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let e = i128::from(a as i64).extended_gcd(&i128::from(p as i64));
    e.x.rem_euclid(p as i128) as u64
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    let inv = inv_mod(*a.last().expect("nonzero"), p);
    a.iter().map(|&c| c * inv % p).collect()
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    fp_trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(out)
}

fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.clone());
    }
    let inv = inv_mod(b[db], p);
    let mut r = a.clone();
    let mut q = vec![0u64; a.len() - db];
    for i in (0..q.len()).rev() {
        let f = r[i + db] * inv % p;
        if f == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + p - f * bj % p) % p;
        }
        q[i] = f;
    }
    r.truncate(db);
    (fp_trim(q), fp_trim(r))
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        fp_monic(&a, p)
    }
}

fn fp_deriv(a: &Fp, p: u64) -> Fp {
    fp_trim(a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect())
}

/// Extended gcd: (s, t) with s a + t b = 1, assuming gcd(a, b) = 1.
fn fp_xgcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], Vec::new());
    let (mut t0, mut t1): (Fp, Fp) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t2 = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    debug_assert_eq!(r0.len(), 1, "inputs must be coprime");
    let inv = inv_mod(r0[0], p);
    let sc = |v: &Fp| fp_trim(v.iter().map(|&c| c * inv % p).collect());
    (sc(&s0), sc(&t0))
}

/// Berlekamp's algorithm for a monic square-free polynomial over F_p.
fn berlekamp(f: &Fp, p: u64) -> Vec<Fp> {
    let n = f.len() - 1;
    // Rows of Q are x^(i p) mod f.
    let xp = fp_powmod_x(p, f, p);
    let mut rows = Vec::with_capacity(n);
    let mut cur: Fp = vec![1];
    for _ in 0..n {
        let mut row = cur.clone();
        row.resize(n, 0);
        rows.push(row);
        cur = fp_divrem(&fp_mul(&cur, &xp, p), f, p).1;
    }
    // Null space of (Q - I)^T: vectors v with sum_i v_i (Q_i - e_i) = 0.
    let mut a = vec![vec![0u64; n]; n];
    for (i, row) in rows.iter().enumerate() {
        for j in 0..n {
            let mut v = row[j];
            if i == j {
                v = (v + p - 1) % p;
            }
            a[j][i] = v;
        }
    }
    let basis = nullspace_mod_p(a, p);
    let r = basis.len();
    let mut factors = vec![f.clone()];
    for g in basis.iter().skip(1) {
        if factors.len() == r {
            break;
        }
        let g = fp_trim(g.clone());
        for s in 0..p {
            if factors.len() == r {
                break;
            }
            let mut gs = g.clone();
            if gs.is_empty() {
                gs.push(0);
            }
            gs[0] = (gs[0] + p - s) % p;
            let gs = fp_trim(gs);
            let mut next = Vec::with_capacity(factors.len() + 1);
            for h in factors.drain(..) {
                if h.len() <= 2 {
                    next.push(h);
                    continue;
                }
                let d = fp_gcd(&h, &gs, p);
                if d.len() > 1 && d.len() < h.len() {
                    let q = fp_monic(&fp_divrem(&h, &d, p).0, p);
                    next.push(d);
                    next.push(q);
                } else {
                    next.push(h);
                }
            }
            factors = next;
        }
    }
    factors.sort();
    factors
}

fn fp_powmod_x(e: u64, f: &Fp, p: u64) -> Fp {
    let mut result: Fp = vec![1];
    let mut base = fp_divrem(&vec![0, 1], f, p).1;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = fp_divrem(&fp_mul(&result, &base, p), f, p).1;
        }
        base = fp_divrem(&fp_mul(&base, &base, p), f, p).1;
        e >>= 1;
    }
    result
}

/// Basis of { v : A v = 0 } over F_p, with the constant vector first when f is monic.
fn nullspace_mod_p(mut a: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let m = a[0].len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m {
        let Some(pr) = (row..n).find(|&r| a[r][col] != 0) else { continue };
        a.swap(pr, row);
        let inv = inv_mod(a[row][col], p);
        for c in 0..m {
            a[row][c] = a[row][c] * inv % p;
        }
        for r in 0..n {
            if r != row && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..m {
                    a[r][c] = (a[r][c] + p - f * a[row][c] % p) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    let free: Vec<usize> = (0..m).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; m];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[r][fc]) % p;
            }
            v
        })
        .collect()
}

// ---- polynomials modulo a big modulus ----

fn bm_reduce(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn bm_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: Vec<BigInt> = (0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect();
    bm_reduce(&v, m)
}

fn bm_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: Vec<BigInt> = (0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect();
    bm_reduce(&v, m)
}

fn bm_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    bm_reduce(&out, m)
}

/// Division by a monic polynomial modulo m.
fn bm_divrem_monic(a: &[BigInt], h: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let dh = h.len() - 1;
    debug_assert!(h[dh].is_one());
    if a.len() <= dh {
        return (Vec::new(), a.to_vec());
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - dh];
    for i in (0..q.len()).rev() {
        let f = r[i + dh].mod_floor(m);
        if f.is_zero() {
            continue;
        }
        for (j, hj) in h.iter().enumerate() {
            r[i + j] -= &f * hj;
        }
        q[i] = f;
    }
    r.truncate(dh);
    (bm_reduce(&q, m), bm_reduce(&r, m))
}

fn to_big(a: &Fp) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts f = lc * prod(local) mod p to monic factors modulo `modulus` (a power of p).
fn hensel_lift(f: &ZPoly, local: &[Fp], p: u64, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    let lc = f.leading().expect("nonzero").mod_floor(modulus);
    let lc_inv = lc.extended_gcd(modulus).x.mod_floor(modulus);
    let monic = bm_reduce(&f.coeffs().iter().map(|c| c * &lc_inv).collect::<Vec<_>>(), modulus);
    lift_tree(&monic, local, p, modulus)
}

/// f is monic modulo `modulus` and congruent to prod(local) mod p.
fn lift_tree(f: &[BigInt], local: &[Fp], p: u64, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    if local.len() == 1 {
        return vec![f.to_vec()];
    }
    let (left, right) = local.split_at(local.len() / 2);
    let prod = |fs: &[Fp]| fs.iter().fold(vec![1u64], |acc, x| fp_mul(&acc, x, p));
    let g0 = prod(left);
    let h0 = prod(right);
    let (s0, t0) = fp_xgcd(&g0, &h0, p);
    let (mut g, mut h, mut s, mut t) = (to_big(&g0), to_big(&h0), to_big(&s0), to_big(&t0));
    let mut m = BigInt::from(p);
    while &m < modulus {
        m = (&m * &m).min(modulus.clone());
        let e = bm_sub(f, &bm_mul(&g, &h, &m), &m);
        let (q, r) = bm_divrem_monic(&bm_mul(&s, &e, &m), &h, &m);
        let g1 = bm_add(&bm_add(&g, &bm_mul(&t, &e, &m), &m), &bm_mul(&q, &g, &m), &m);
        let h1 = bm_add(&h, &r, &m);
        let b = bm_sub(&bm_add(&bm_mul(&s, &g1, &m), &bm_mul(&t, &h1, &m), &m), &[BigInt::one()], &m);
        let (c, d) = bm_divrem_monic(&bm_mul(&s, &b, &m), &h1, &m);
        let s1 = bm_sub(&s, &d, &m);
        let t1 = bm_sub(&bm_sub(&t, &bm_mul(&t, &b, &m), &m), &bm_mul(&c, &g1, &m), &m);
        g = g1;
        h = h1;
        s = s1;
        t = t1;
    }
    let mut out = lift_tree(&g, left, p, modulus);
    out.extend(lift_tree(&h, right, p, modulus));
    out
}

fn symmetric(a: &[BigInt], m: &BigInt) -> ZPoly {
    let half: BigInt = m >> 1usize;
    ZPoly::new(
        a.iter()
            .map(|c| {
                let c = c.mod_floor(m);
                if c > half {
                    c - m
                } else {
                    c
                }
            })
            .collect(),
    )
}

/// Zassenhaus recombination by subsets of increasing size.
fn recombine(f: &ZPoly, mut lifted: Vec<Vec<BigInt>>, modulus: &BigInt) -> Vec<ZPoly> {
    let mut f = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let lc = f.leading().expect("nonzero").clone();
        let mut hit = None;
        for subset in Subsets::new(lifted.len(), size) {
            let mut prod = vec![lc.mod_floor(modulus)];
            for &i in &subset {
                prod = bm_mul(&prod, &lifted[i], modulus);
            }
            let cand = symmetric(&prod, modulus).primitive();
            // Constant terms must divide before the full trial division is worth doing.
            let (c_f, c_h) = (&f.coeffs()[0], &cand.coeffs()[0]);
            if c_h.is_zero() || !(c_f % c_h).is_zero() {
                continue;
            }
            if let Some(q) = f.div_exact(&cand) {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push(cand);
                f = q.primitive();
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => size += 1,
        }
    }
    found.push(f);
    found
}

/// Lexicographic k-subsets of 0..n.
struct Subsets {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Subsets {
    fn new(n: usize, k: usize) -> Self {
        Subsets { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}
