//! Exact rank of column sets over GF(p) and over the rationals.

use num::{BigRational, Zero};

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Rank of `vectors` over GF(p); entries are already reduced mod p.
pub fn rank_mod_p<'a>(vectors: impl IntoIterator<Item = &'a [u64]>, p: u64) -> usize {
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    for v in vectors {
        let mut v = v.to_vec();
        for (piv, b) in &basis {
            let c = v[*piv];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = (*x + (p - c) * y % p) % p;
                }
            }
        }
        if let Some(piv) = v.iter().position(|&x| x != 0) {
            let inv = inv_mod(v[piv], p);
            v.iter_mut().for_each(|x| *x = *x * inv % p);
            basis.push((piv, v));
        }
    }
    basis.len()
}

/// Rank of `vectors` over ℚ, exactly.
pub fn rank_rational<'a>(vectors: impl IntoIterator<Item = &'a [BigRational]>) -> usize {
    let mut basis: Vec<(usize, Vec<BigRational>)> = Vec::new();
    for v in vectors {
        let mut v = v.to_vec();
        for (piv, b) in &basis {
            let c = v[*piv].clone();
            if !c.is_zero() {
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &c * y;
                }
            }
        }
        if let Some(piv) = v.iter().position(|x| !x.is_zero()) {
            let inv = v[piv].recip();
            v.iter_mut().for_each(|x| *x *= &inv);
            basis.push((piv, v));
        }
    }
    basis.len()
}

/// `a/b mod p`, or `None` when `p` divides `b`.
pub fn reduce_mod_p(x: &BigRational, p: u64) -> Option<u64> {
    use num::{BigInt, Integer, ToPrimitive};
    let pb = BigInt::from(p);
    let num = x.numer().mod_floor(&pb).to_u64()?;
    let den = x.denom().mod_floor(&pb).to_u64()?;
    (den != 0).then(|| num * inv_mod(den, p) % p)
}
