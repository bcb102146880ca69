//! Truncated products of dense integer polynomials.
//!
//! Large products go through Kronecker substitution: every polynomial is packed
//! into one big integer with slots wide enough that no carry can cross a slot
//! boundary, and the single big-integer product is unpacked again. That one
//! product runs through GMP, whose FFT multiplication is what makes expansions
//! with tens of thousands of huge coefficients affordable.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;

/// Below this many coefficient pairs the schoolbook loop is faster.
const KRONECKER_MIN_PAIRS: usize = 200_000;

/// First `n` coefficients of `a * b`.
pub(crate) fn mul_truncated(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let a = &a[..a.len().min(n)];
    let b = &b[..b.len().min(n)];
    if a.is_empty() || b.is_empty() || n == 0 {
        return vec![BigInt::zero(); n];
    }
    let nnz_a = a.iter().filter(|c| !c.is_zero()).count();
    let nnz_b = b.iter().filter(|c| !c.is_zero()).count();
    if nnz_a.saturating_mul(nnz_b) < KRONECKER_MIN_PAIRS {
        return schoolbook(a, b, n);
    }
    kronecker(a, b, n)
}

pub(crate) fn schoolbook(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n.saturating_sub(i)) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn split_signs(a: &[BigInt]) -> (Vec<BigUint>, Vec<BigUint>) {
    let mut pos = Vec::with_capacity(a.len());
    let mut neg = Vec::with_capacity(a.len());
    for c in a {
        let (sign, mag) = c.clone().into_parts();
        match sign {
            Sign::Minus => {
                pos.push(BigUint::zero());
                neg.push(mag);
            }
            _ => {
                pos.push(mag);
                neg.push(BigUint::zero());
            }
        }
    }
    (pos, neg)
}

fn max_bits(v: &[BigUint]) -> u64 {
    v.iter().map(|c| c.bits()).max().unwrap_or(0)
}

fn pack(coeffs: &[BigUint], slot: usize) -> rug::Integer {
    let mut digits = vec![0u32; coeffs.len() * slot];
    for (i, c) in coeffs.iter().enumerate() {
        let d = c.to_u32_digits();
        digits[i * slot..i * slot + d.len()].copy_from_slice(&d);
    }
    rug::Integer::from_digits(&digits, rug::integer::Order::Lsf)
}

fn unpack(x: &rug::Integer, slot: usize, n: usize) -> Vec<BigUint> {
    let digits: Vec<u32> = x.to_digits(rug::integer::Order::Lsf);
    (0..n)
        .map(|i| {
            let s = i * slot;
            if s >= digits.len() {
                BigUint::zero()
            } else {
                BigUint::from_slice(&digits[s..(s + slot).min(digits.len())])
            }
        })
        .collect()
}

/// Unsigned truncated product by packing.
fn kronecker_unsigned(a: &[BigUint], b: &[BigUint], n: usize) -> Option<Vec<BigUint>> {
    let (ba, bb) = (max_bits(a), max_bits(b));
    if ba == 0 || bb == 0 {
        return None;
    }
    let terms = a.len().min(b.len()) as u64;
    let bits = ba + bb + (64 - terms.leading_zeros() as u64) + 1;
    let slot = bits.div_ceil(32) as usize;
    let prod = rug::Integer::from(pack(a, slot) * pack(b, slot));
    Some(unpack(&prod, slot, n))
}

fn kronecker(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let (ap, an) = split_signs(a);
    let (bp, bn) = split_signs(b);
    let mut out = vec![BigInt::zero(); n];
    let parts = [(&ap, &bp, true), (&an, &bn, true), (&ap, &bn, false), (&an, &bp, false)];
    for (x, y, positive) in parts {
        if let Some(p) = kronecker_unsigned(x, y, n) {
            for (o, c) in out.iter_mut().zip(p) {
                if c.is_zero() {
                    continue;
                }
                let c = BigInt::from_biguint(Sign::Plus, c);
                if positive {
                    *o += c;
                } else {
                    *o -= c;
                }
            }
        }
    }
    out
}

/// `a^e` truncated to `n` coefficients, by repeated squaring.
pub(crate) fn pow_truncated(a: &[BigInt], mut e: u32, n: usize) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = a[..a.len().min(n)].to_vec();
    let mut acc: Option<Vec<BigInt>> = None;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(x) => mul_truncated(&x, &base, n),
            });
        }
        e >>= 1;
        if e > 0 {
            base = mul_truncated(&base, &base, n);
        }
    }
    let mut out = acc.unwrap_or_else(|| {
        let mut one = vec![BigInt::zero(); n];
        if n > 0 {
            one[0] = BigInt::from(1);
        }
        one
    });
    out.resize(n, BigInt::zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn kronecker_matches_schoolbook(
            a in prop::collection::vec(-1_000_000_000_000i64..1_000_000_000_000, 1..60),
            b in prop::collection::vec(-1_000i64..1_000, 1..60),
            n in 1usize..130,
        ) {
            let a: Vec<BigInt> = a.into_iter().map(BigInt::from).collect();
            let b: Vec<BigInt> = b.into_iter().map(BigInt::from).collect();
            prop_assert_eq!(kronecker(&a, &b, n), schoolbook(&a, &b, n));
        }
    }

    #[test]
    fn huge_coefficients_survive_packing() {
        let big = BigInt::from(3).pow(500u32);
        let a = vec![big.clone(), -big.clone(), BigInt::from(7), big.clone()];
        let b = vec![-big.clone(), BigInt::from(1), big.clone()];
        assert_eq!(kronecker(&a, &b, 7), schoolbook(&a, &b, 7));
    }

    #[test]
    fn powers() {
        // (1 + x)^5
        let a = vec![BigInt::from(1), BigInt::from(1)];
        let p = pow_truncated(&a, 5, 8);
        let expect: Vec<BigInt> = [1, 5, 10, 10, 5, 1, 0, 0].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(p, expect);
        assert_eq!(pow_truncated(&a, 0, 2), vec![BigInt::from(1), BigInt::from(0)]);
    }
}
