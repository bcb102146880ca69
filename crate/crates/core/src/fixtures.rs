//! Classical q-expansions built from closed formulas, used as independent
//! test data for the lift: theta series, Eisenstein series, Δ, j, Cohen's
//! Eisenstein series of half-integral weight and products of these.
//!
//! `prec` always means the exponent bound: the returned window covers `q^n`
//! for `n < prec`.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::intpoly;
use crate::qseries::{LiftInput, ProductView, QExp, Weight};
use crate::scalars::{bernoulli_number, binomial, kronecker_unchecked, Cyc, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FixtureError {
    #[error("unsupported Eisenstein weight {0} (need an even weight of at least 4)")]
    UnsupportedWeight(u32),
    #[error("Cohen-Eisenstein series need k >= 2, got {0}")]
    CohenIndex(u32),
    #[error("unknown fixture '{0}'")]
    Unknown(String),
}

fn to_cyc_series(lo: i64, values: Vec<BigInt>, weight: Weight) -> QExp {
    QExp::from_rationals(lo, values.into_iter().map(Rational::from_integer).collect(), weight)
}

pub fn theta(prec: u64) -> QExp {
    let mut v = vec![BigInt::zero(); prec as usize];
    let mut n = 0u64;
    while n * n < prec {
        v[(n * n) as usize] += if n == 0 { 1 } else { 2 };
        n += 1;
    }
    to_cyc_series(0, v, Weight::new(1, 2))
}

/// `θ_0 = Σ_n q^{n²}` for `j = 0`, `θ_1 = Σ_n q^{(n+1/2)²}` for `j = 1`.
pub fn theta_component(j: u32, prec: u64) -> QExp {
    match j {
        0 => theta(prec),
        1 => {
            let hi = 4 * prec as i64;
            let mut terms = Vec::new();
            let mut m = 1i64;
            while m * m < hi {
                terms.push((m * m, Cyc::from_int(2)));
                m += 2;
            }
            QExp::from_coefficients(4, 0, hi, Weight::new(1, 2), terms)
        }
        _ => panic!("theta components are indexed by 0 and 1"),
    }
}

/// `σ_m(n)` for `n < len`, by a divisor sieve.
pub(crate) fn divisor_sums(m: u32, len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for d in 1..len {
        let p = BigInt::from(d).pow(m);
        let mut k = d;
        while k < len {
            out[k] += &p;
            k += d;
        }
    }
    out
}

/// `E_wt = 1 - (2 wt / B_wt) Σ σ_{wt-1}(n) q^n`.
pub fn eisenstein(wt: u32, prec: u64) -> Result<QExp, FixtureError> {
    if wt < 4 || wt % 2 == 1 || wt > crate::scalars::BERNOULLI_BOUND {
        return Err(FixtureError::UnsupportedWeight(wt));
    }
    let factor = -(Rational::from_integer(BigInt::from(2 * wt)) / bernoulli_number(wt).unwrap());
    let sigma = divisor_sums(wt - 1, prec as usize);
    let values = sigma
        .into_iter()
        .enumerate()
        .map(|(n, s)| if n == 0 { Rational::one() } else { &factor * Rational::from_integer(s) })
        .collect();
    Ok(QExp::from_rationals(0, values, Weight::integral(wt as i64)))
}

/// `Δ = (E_4³ - E_6²)/1728`.
pub fn delta(prec: u64) -> QExp {
    let e4 = eisenstein(4, prec).unwrap();
    let e6 = eisenstein(6, prec).unwrap();
    let d = e4.pow(3).sub(&e6.pow(2).with_weight(Weight::integral(12))).unwrap();
    d.scale_rational(&crate::scalars::rational(1, 1728))
}

/// Partition numbers `p(0..len)` from Euler's pentagonal recurrence.
pub(crate) fn partitions(len: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); len];
    if len == 0 {
        return p;
    }
    p[0] = BigInt::one();
    for n in 1..len {
        let mut acc = BigInt::zero();
        let mut k = 1usize;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let sign_pos = k % 2 == 1;
            let mut term = p[n - g1].clone();
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= n {
                term += &p[n - g2];
            }
            if sign_pos {
                acc += term;
            } else {
                acc -= term;
            }
            k += 1;
        }
        p[n] = acc;
    }
    p
}

static J_CACHE: LazyLock<Mutex<Option<Arc<Vec<BigInt>>>>> = LazyLock::new(|| Mutex::new(None));

/// Integer coefficients of `q·j = E_4³ · Π(1-q^n)^{-24}`, at least `len` of them.
fn j_shifted(len: usize) -> Arc<Vec<BigInt>> {
    let mut cache = J_CACHE.lock().unwrap();
    if let Some(v) = cache.as_ref() {
        if v.len() >= len {
            return v.clone();
        }
    }
    let sigma3 = divisor_sums(3, len);
    let e4: Vec<BigInt> = sigma3
        .into_iter()
        .enumerate()
        .map(|(n, s)| if n == 0 { BigInt::one() } else { s * 240 })
        .collect();
    let e4_cubed = intpoly::pow_truncated(&e4, 3, len);
    let inv_eta24 = intpoly::pow_truncated(&partitions(len), 24, len);
    let v = Arc::new(intpoly::mul_truncated(&e4_cubed, &inv_eta24, len));
    *cache = Some(v.clone());
    v
}

/// `j = q^{-1} + 744 + 196884 q + …`, window `[-1, prec)`.
pub fn j_invariant(prec: u64) -> QExp {
    let len = (prec + 1) as usize;
    let v = j_shifted(len);
    to_cyc_series(-1, v[..len].to_vec(), Weight::integral(0))
}

/// `m = D f²` with `D` a fundamental discriminant (1 allowed), if possible.
pub fn fundamental_split(m: i64) -> Option<(i64, u64)> {
    if m == 0 || !matches!(m.rem_euclid(4), 0 | 1) {
        return None;
    }
    let sign = m.signum();
    let mut rest = m.unsigned_abs();
    let mut f = 1u64;
    let mut core = 1u64;
    let mut p = 2u64;
    while p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        f *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
        p += 1;
    }
    core *= rest;
    let d0 = sign * core as i64;
    if d0.rem_euclid(4) == 1 {
        Some((d0, f))
    } else {
        // m ≡ 0 mod 4 forces f even here
        debug_assert!(f % 2 == 0);
        Some((4 * d0, f / 2))
    }
}

static L_CACHE: LazyLock<Mutex<HashMap<(u32, i64), Rational>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

/// `L(1-k, χ_D)` for a fundamental discriminant `D` (with `χ_1` trivial), from
/// generalized Bernoulli numbers `B_{k,χ} = Σ_i C(k,i) B_i |D|^{i-1} Σ_a χ(a) a^{k-i}`.
pub fn l_value_fundamental(d: i64, k: u32) -> Rational {
    if let Some(v) = L_CACHE.lock().unwrap().get(&(k, d)) {
        return v.clone();
    }
    let v = if d == 1 && k == 1 {
        crate::scalars::rational(-1, 2)
    } else if d == 1 {
        -bernoulli_number(k).unwrap().clone() / Rational::from_integer(BigInt::from(k))
    } else {
        let m = d.unsigned_abs() as usize;
        let sums = power_sums(d, k);
        let md = BigInt::from(m);
        let mut b = Rational::zero();
        for i in 0..=k {
            let bi = bernoulli_number(i).unwrap();
            if bi.is_zero() {
                continue;
            }
            let coeff = Rational::from_integer(binomial(k as u64, i as u64)) * bi;
            let scale = if i == 0 {
                Rational::new(BigInt::one(), md.clone())
            } else {
                Rational::from_integer(md.pow(i - 1))
            };
            b += coeff * scale * Rational::from_integer(sums[(k - i) as usize].clone());
        }
        -b / Rational::from_integer(BigInt::from(k))
    };
    L_CACHE.lock().unwrap().insert((k, d), v.clone());
    v
}

/// `(x/q)` for `x` in `0..q`, `q` an odd prime.
fn legendre_table(q: usize) -> Vec<i8> {
    let mut t = vec![-1i8; q];
    t[0] = 0;
    let mut sq = 0usize;
    for x in 1..=q / 2 {
        sq += 2 * x - 1;
        if sq >= q {
            sq -= q;
        }
        t[sq] = 1;
    }
    t
}

/// `χ_D(a)` for `a` in `0..=h`, as a product of local characters: a Legendre
/// symbol modulo each odd prime dividing `D` and a character modulo 8 for
/// the 2-part.
fn character_table(d: i64, h: usize) -> Vec<i8> {
    let mut odd_primes = Vec::new();
    let mut rest = d.unsigned_abs() as usize;
    let mut two_adic = 1usize;
    while rest % 2 == 0 {
        rest /= 2;
        two_adic *= 2;
    }
    let mut q = 3;
    while q * q <= rest {
        if rest % q == 0 {
            odd_primes.push(q);
            rest /= q;
        }
        q += 2;
    }
    if rest > 1 {
        odd_primes.push(rest);
    }
    // D = D_2 · Π q*, q* = ±q ≡ 1 mod 4
    let odd_disc: i64 = odd_primes.iter().map(|&q| if q % 4 == 1 { q as i64 } else { -(q as i64) }).product();
    let d2 = d / odd_disc;
    debug_assert_eq!(d2.unsigned_abs() as usize, two_adic);
    let mod8: [i8; 8] = std::array::from_fn(|r| kronecker_unchecked(d2, r as i64) as i8);
    let tables: Vec<Vec<i8>> = odd_primes.iter().map(|&q| legendre_table(q)).collect();
    let mut pos = vec![0usize; tables.len()];
    let mut chi = vec![0i8; h + 1];
    for (a, slot) in chi.iter_mut().enumerate() {
        let mut v = mod8[a % 8];
        for (t, p) in tables.iter().zip(pos.iter_mut()) {
            v *= t[*p];
            *p += 1;
            if *p == t.len() {
                *p = 0;
            }
        }
        *slot = v;
    }
    chi
}

/// `Σ_{a=1}^{|D|} χ_D(a) a^j` for `j = 0..=k`, pairing `a` with `|D| - a`
/// through `χ_D(-1) = sign D`.
fn power_sums(d: i64, k: u32) -> Vec<BigInt> {
    let m = d.unsigned_abs() as usize;
    let chi = character_table(d, m / 2);
    let size = (m as f64).powi(k as i32 + 1);
    if size < 1e17 {
        sums_in::<i64>(&chi, m, d.signum(), k)
    } else if size < 1e36 {
        sums_in::<i128>(&chi, m, d.signum(), k)
    } else {
        sums_in::<BigInt>(&chi, m, d.signum(), k)
    }
}

fn sums_in<T>(chi: &[i8], m: usize, sign: i64, k: u32) -> Vec<BigInt>
where
    T: Clone + From<i64> + std::ops::AddAssign + std::ops::SubAssign + std::ops::Mul<Output = T> + Into<BigInt>,
{
    let mut s: Vec<T> = vec![T::from(0); k as usize + 1];
    for (a, &c) in chi.iter().enumerate().skip(1) {
        if c == 0 {
            continue;
        }
        let b = m - a;
        let mut pa = T::from(1);
        let mut pb = T::from(1);
        for sj in s.iter_mut() {
            let mut term = pa.clone();
            if b != a {
                if sign > 0 {
                    term += pb.clone();
                } else {
                    term -= pb.clone();
                }
            }
            if c > 0 {
                *sj += term;
            } else {
                *sj -= term;
            }
            pa = pa * T::from(a as i64);
            pb = pb * T::from(b as i64);
        }
    }
    s.into_iter().map(Into::into).collect()
}

fn mobius(mut n: u64) -> i64 {
    let mut r = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            r = -r;
        }
        p += 1;
    }
    if n > 1 {
        r = -r;
    }
    r
}

/// Cohen's `H(k, n)`.
pub fn cohen_coefficient(k: u32, n: u64) -> Rational {
    if n == 0 {
        return l_value_fundamental(1, 2 * k);
    }
    let m = if k % 2 == 0 { n as i64 } else { -(n as i64) };
    let Some((d, f)) = fundamental_split(m) else {
        return Rational::zero();
    };
    let l = l_value_fundamental(d, k);
    let mut s = BigInt::zero();
    for e in 1..=f {
        if f % e != 0 {
            continue;
        }
        let mu = mobius(e);
        if mu == 0 {
            continue;
        }
        let chi = kronecker_unchecked(d, e as i64);
        if chi == 0 {
            continue;
        }
        let sigma: BigInt = (1..=f / e).filter(|x| (f / e) % x == 0).map(|x| BigInt::from(x).pow(2 * k - 1)).sum();
        let term = BigInt::from(e).pow(k - 1) * sigma;
        if mu * chi as i64 > 0 {
            s += term;
        } else {
            s -= term;
        }
    }
    l * Rational::from_integer(s)
}

/// `H_{k+1/2} = Σ H(k,n) q^n`.
pub fn cohen_eisenstein(k: u32, prec: u64) -> Result<QExp, FixtureError> {
    if k < 2 {
        return Err(FixtureError::CohenIndex(k));
    }
    let values = (0..prec).map(|n| cohen_coefficient(k, n)).collect();
    Ok(QExp::from_rationals(0, values, Weight::half_integral(k as i64)))
}

/// `θ·E_wt(4τ)`, expanded.
pub fn plus_product(wt: u32, prec: u64) -> Result<QExp, FixtureError> {
    let e = eisenstein(wt, prec.div_ceil(4))?.rescale(4);
    Ok(theta(prec).mul(&e).truncate(prec as i64))
}

/// `θ·E_wt(4τ)` as a lazy product.
pub fn plus_product_view(wt: u32, prec: u64) -> Result<ProductView, FixtureError> {
    let e = eisenstein(wt, prec.div_ceil(4))?.rescale(4);
    Ok(ProductView::new(&theta(prec), &e))
}

/// `H_{k+1/2}·j(4τ)` as a lazy product with window top at least `prec`.
pub fn cohen_times_j4(k: u32, prec: u64) -> Result<ProductView, FixtureError> {
    let h = cohen_eisenstein(k, prec + 4)?;
    let j4 = j_invariant(prec.div_ceil(4) + 1).rescale(4);
    Ok(ProductView::new(&h, &j4))
}

/// Every fixture name understood by [`named`].
pub fn names() -> Vec<String> {
    let mut v: Vec<String> = ["zero", "one", "q", "theta", "theta0", "theta1"].iter().map(|s| s.to_string()).collect();
    for wt in [4, 6, 8, 10, 12, 14] {
        v.push(format!("e{wt}"));
    }
    v.extend(["delta", "j"].iter().map(|s| s.to_string()));
    for k in 2..=6 {
        v.push(format!("cohen{}2", 2 * k + 1));
    }
    v.extend(["plus_e4", "plus_e6", "cohen52_j"].iter().map(|s| s.to_string()));
    v
}

/// Half-integral index `k` (weight `k + 1/2`) of a fixture, where it has one.
pub fn half_integral_index(name: &str) -> Option<u32> {
    match name {
        "theta" | "theta0" | "theta1" => Some(0),
        "plus_e4" => Some(4),
        "plus_e6" => Some(6),
        "cohen52_j" => Some(2),
        _ => cohen_name(name),
    }
}

fn cohen_name(name: &str) -> Option<u32> {
    let digits = name.strip_prefix("cohen")?.strip_suffix('2')?;
    let twice_plus_one: u32 = digits.parse().ok()?;
    (twice_plus_one % 2 == 1 && twice_plus_one >= 5).then_some((twice_plus_one - 1) / 2)
}

/// A fixture by name; products stay lazy.
pub fn named(name: &str, prec: u64) -> Result<LiftInput, FixtureError> {
    let unit = |a: i64| QExp::from_coefficients(1, 0, prec as i64, Weight::integral(0), [(a, Cyc::one())]);
    let series = match name {
        "zero" => QExp::zero(1, 0, prec as i64, Weight::integral(0)),
        "one" => unit(0),
        "q" => unit(1),
        "theta" => theta(prec),
        "theta0" => theta_component(0, prec),
        "theta1" => theta_component(1, prec),
        "delta" => delta(prec),
        "j" => j_invariant(prec),
        "plus_e4" => return Ok(LiftInput::Product(plus_product_view(4, prec)?)),
        "plus_e6" => return Ok(LiftInput::Product(plus_product_view(6, prec)?)),
        "cohen52_j" => return Ok(LiftInput::Product(cohen_times_j4(2, prec)?)),
        _ => {
            if let Some(wt) = name.strip_prefix('e').and_then(|w| w.parse::<u32>().ok()) {
                eisenstein(wt, prec)?
            } else if let Some(k) = cohen_name(name) {
                cohen_eisenstein(k, prec)?
            } else {
                return Err(FixtureError::Unknown(name.to_string()));
            }
        }
    };
    Ok(LiftInput::Series(series))
}

/// Exact integer value of a rational, for tests and diagnostics.
pub fn as_integer(r: &Rational) -> Option<i64> {
    r.is_integer().then(|| r.to_integer().to_i64()).flatten()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::CoefficientSource;
    use crate::scalars::{int, rational};

    fn c(f: &QExp, n: i64) -> Rational {
        f.coeff_int(n).unwrap().as_rational().unwrap()
    }

    #[test]
    fn theta_examples() {
        let t = theta(5);
        let v: Vec<Rational> = (0..5).map(|n| c(&t, n)).collect();
        assert_eq!(v, vec![int(1), int(2), int(0), int(0), int(2)]);
        let t0 = theta_component(0, 100);
        let t1 = theta_component(1, 100);
        assert!(t1.coefficients().keys().all(|a| a.rem_euclid(4) == 1));
        let sum = t0.rescale(4).add(&t1.rescale(4)).unwrap();
        assert_eq!(sum, theta(400));
    }

    #[test]
    fn eisenstein_examples() {
        let e4 = eisenstein(4, 50).unwrap();
        assert_eq!((0..3).map(|n| c(&e4, n)).collect::<Vec<_>>(), vec![int(1), int(240), int(2160)]);
        assert!(eisenstein(2, 5).is_err());
        assert!(eisenstein(5, 5).is_err());
        // brute-force divisor sums
        let e6 = eisenstein(6, 30).unwrap();
        for n in 1..30i64 {
            let s: i64 = (1..=n).filter(|d| n % d == 0).map(|d| d.pow(5)).sum();
            assert_eq!(c(&e6, n), int(-504 * s));
        }
    }

    #[test]
    fn classical_product_identities() {
        let e4 = eisenstein(4, 50).unwrap();
        let e6 = eisenstein(6, 50).unwrap();
        assert_eq!(e4.mul(&e4), eisenstein(8, 50).unwrap());
        assert_eq!(e4.mul(&e6), eisenstein(10, 50).unwrap());
        assert_eq!(e4.mul(&eisenstein(10, 50).unwrap()), eisenstein(14, 50).unwrap());
    }

    /// `q Π (1 - q^n)^24` expanded by brute-force polynomial multiplication.
    fn delta_product(len: usize) -> Vec<i64> {
        let mut p = vec![0i64; len];
        p[1] = 1;
        for n in 1..len {
            for _ in 0..24 {
                for i in (n..len).rev() {
                    p[i] -= p[i - n];
                }
            }
        }
        p
    }

    #[test]
    fn delta_examples() {
        let d = delta(30);
        let expect = delta_product(30);
        for n in 0..30 {
            assert_eq!(c(&d, n as i64), int(expect[n]), "n={n}");
        }
        assert_eq!((0..4).map(|n| c(&d, n)).collect::<Vec<_>>(), vec![int(0), int(1), int(-24), int(252)]);
        assert_eq!(d.weight(), Weight::integral(12));
    }

    #[test]
    fn partition_numbers() {
        let p = partitions(12);
        let expect = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56];
        assert_eq!(p, expect.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
    }

    #[test]
    fn j_examples() {
        let j = j_invariant(40);
        assert_eq!(j.window(), (-1, 40));
        assert_eq!(c(&j, -1), int(1));
        assert_eq!(c(&j, 0), int(744));
        assert_eq!(c(&j, 1), int(196884));
        assert_eq!(c(&j, 2), int(21493760));
        // j·Δ = E_4³
        let lhs = j.mul(&delta(41));
        let e4c = eisenstein(4, 41).unwrap().pow(3);
        assert!(lhs.agrees_with(&e4c));
        assert!(lhs.window().1 >= 39);
    }

    #[test]
    fn fundamental_splitting() {
        assert_eq!(fundamental_split(1), Some((1, 1)));
        assert_eq!(fundamental_split(12), Some((12, 1)));
        assert_eq!(fundamental_split(-3), Some((-3, 1)));
        assert_eq!(fundamental_split(-4), Some((-4, 1)));
        assert_eq!(fundamental_split(-16), Some((-4, 2)));
        assert_eq!(fundamental_split(20), Some((5, 2)));
        assert_eq!(fundamental_split(32), Some((8, 2)));
        assert_eq!(fundamental_split(2), None);
        for m in -200i64..200 {
            if let Some((d, f)) = fundamental_split(m) {
                assert_eq!(d * (f * f) as i64, m);
            }
        }
    }

    /// L(1-k, χ_D) from Hurwitz values: |D|^{k-1} Σ χ(a) ζ(1-k, a/|D|).
    #[test]
    fn l_values_match_hurwitz_oracle() {
        use crate::scalars::tests::hurwitz_neg_float;
        for d in [-3i64, -4, -7, -8, 5, 8, 12, 13, -15, 21] {
            for k in 1..=4u32 {
                let m = d.unsigned_abs() as f64;
                let oracle: f64 = (1..=d.unsigned_abs())
                    .map(|a| kronecker_unchecked(d, a as i64) as f64 * hurwitz_neg_float(k, a as f64 / m))
                    .sum::<f64>()
                    * m.powi(k as i32 - 1);
                let exact = crate::scalars::rational_to_f64(&l_value_fundamental(d, k));
                assert!((exact - oracle).abs() < 1e-8 * (1.0 + oracle.abs()), "D={d} k={k}: {exact} vs {oracle}");
            }
        }
        assert_eq!(l_value_fundamental(-4, 1), rational(1, 2));
        assert_eq!(l_value_fundamental(5, 2), rational(-2, 5));
    }

    #[test]
    fn character_tables_match_kronecker() {
        for d in [-3i64, -4, -7, -8, 5, 8, 12, -15, 21, -24, 28, 40, -84, 105, -120, 136] {
            let chi = character_table(d, 300);
            for (a, &c) in chi.iter().enumerate() {
                assert_eq!(c as i32, kronecker_unchecked(d, a as i64), "D={d} a={a}");
            }
        }
    }

    #[test]
    fn cohen_examples() {
        let h = cohen_eisenstein(2, 30).unwrap();
        assert_eq!(c(&h, 0), rational(1, 120));
        assert_eq!(c(&h, 1), rational(-1, 12));
        assert_eq!(c(&h, 2), int(0));
        assert_eq!(c(&h, 3), int(0));
        assert_eq!(c(&h, 5), rational(-2, 5));
        assert!(cohen_eisenstein(1, 3).is_err());
        assert_eq!(h.residues_mod4().unwrap(), [true, true, false, false]);
        let h3 = cohen_eisenstein(3, 30).unwrap();
        // (-1)^k n ≡ 0, 1 mod 4 means n ≡ 0, 3 mod 4 for odd k
        assert_eq!(h3.residues_mod4().unwrap(), [true, false, false, true]);
        assert_eq!(c(&h3, 0), rational(-1, 252));
    }

    #[test]
    fn plus_products() {
        let p = plus_product(4, 100).unwrap();
        assert_eq!(c(&p, 0), int(1));
        assert_eq!(c(&p, 1), int(2));
        assert_eq!(c(&p, 4), int(242));
        assert_eq!(p.residues_mod4().unwrap(), [true, true, false, false]);
        assert_eq!(p.weight(), Weight::new(9, 2));
        let v = plus_product_view(4, 100).unwrap();
        for n in 0..100 {
            assert_eq!(v.coefficient(n), p.get(n).unwrap());
        }
    }

    #[test]
    fn cohen_j_product_window() {
        let v = cohen_times_j4(2, 50).unwrap();
        assert_eq!(v.window().0, -4);
        assert!(v.window().1 >= 50);
        assert_eq!(v.coefficient(-4), Cyc::from_rational(rational(1, 120)));
        assert_eq!(v.coefficient(-3), Cyc::from_rational(rational(-1, 12)));
    }

    #[test]
    fn fixture_registry() {
        for name in names() {
            let f = named(&name, 20).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(f.window().1 >= 20 || name == "theta1", "{name}");
        }
        assert_eq!(half_integral_index("cohen52"), Some(2));
        assert_eq!(half_integral_index("cohen72"), Some(3));
        assert!(named("nope", 5).is_err());
    }
}
