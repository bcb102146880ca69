//! Exact scalars: big rationals, elements of cyclotomic fields, fourth roots
//! of unity, the Kronecker symbol, Bernoulli polynomials and the values of
//! partial zeta functions and Dirichlet L-functions at non-positive integers.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::characters::DirichletCharacter;

/// Arbitrary precision rational number, always in lowest terms.
pub type Rational = BigRational;

/// Largest index for which Bernoulli numbers are tabulated.
pub const BERNOULLI_BOUND: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("the Kronecker symbol (0/0) is undefined")]
    KroneckerZeroZero,
    #[error("eps_d needs an odd argument, got {0}")]
    EvenArgument(i64),
    #[error("Bernoulli index {k} exceeds the tabulated bound {bound}")]
    BernoulliBound { k: u32, bound: u32 },
    #[error("partial zeta values need k >= 1 and a positive modulus")]
    BadZetaArguments,
    #[error("cyclotomic order must be positive")]
    ZeroOrder,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar: {0}")]
    Parse(String),
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats a rational as `"p/q"`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let s = s.trim();
    let bad = || ScalarError::Parse(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Ratio::to_f64 only fails on overflow; fall back to the sign.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomials

struct CycloTable {
    phi: usize,
    /// Monic cyclotomic polynomial, lowest degree first.
    modulus: Vec<i64>,
    /// `x^j mod Φ_m` for `0 <= j < m`.
    powers: Vec<Vec<i64>>,
}

static TABLES: LazyLock<RwLock<HashMap<u32, Arc<CycloTable>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

fn table(m: u32) -> Arc<CycloTable> {
    if let Some(t) = TABLES.read().expect("cyclotomic table lock").get(&m) {
        return t.clone();
    }
    let modulus = cyclotomic_poly(m);
    let phi = modulus.len() - 1;
    let mut powers = Vec::with_capacity(m as usize);
    let mut cur = vec![0i64; phi.max(1)];
    cur[0] = 1;
    if phi == 0 {
        cur = vec![1];
    }
    for _ in 0..m {
        powers.push(trim_i64(cur.clone()));
        // multiply by x and reduce
        let mut next = vec![0i64; phi + 1];
        next[1..(phi + 1)].copy_from_slice(&cur[..phi]);
        let top = next[phi];
        if top != 0 {
            for j in 0..phi {
                next[j] -= top * modulus[j];
            }
        }
        next.truncate(phi);
        cur = next;
    }
    let t = Arc::new(CycloTable {
        phi,
        modulus,
        powers,
    });
    TABLES
        .write()
        .expect("cyclotomic table lock")
        .insert(m, t.clone());
    t
}

fn trim_i64(mut v: Vec<i64>) -> Vec<i64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Φ_m by exact division of `x^m - 1` by Φ_d for the proper divisors d of m.
fn cyclotomic_poly(m: u32) -> Vec<i64> {
    let mut p = vec![0i64; m as usize + 1];
    p[0] = -1;
    p[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let divisor = table(d).modulus.clone();
            p = exact_div_monic(&p, &divisor);
        }
    }
    p
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for j in 0..=dn {
                rem[i + j] -= c * den[j];
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    q
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    let mut n0 = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n0 {
        if n0 % p == 0 {
            while n0 % p == 0 {
                n0 /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n0 > 1 {
        result -= result / n0;
    }
    result
}

// ---------------------------------------------------------------------------
// Cyclotomic scalars

/// An element `Σ c_i ζ_m^i` of Q(ζ_m), stored in the power basis
/// `1, ζ, …, ζ^{φ(m)-1}` after reduction modulo Φ_m.
///
/// Values that happen to be rational are always stored with order 1, so the
/// common case of rational series never touches the polynomial machinery.
#[derive(Clone, Debug)]
pub struct Cyc {
    order: u32,
    coeffs: Vec<Rational>,
}

impl Cyc {
    pub fn zero() -> Self {
        Cyc {
            order: 1,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Cyc::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut c = Cyc {
            order: 1,
            coeffs: vec![r],
        };
        c.normalize();
        c
    }

    pub fn from_int(n: i64) -> Self {
        Cyc::from_rational(int(n))
    }

    /// `ζ_order^e`.
    pub fn root_of_unity(order: u32, e: i64) -> Self {
        assert!(order > 0, "cyclotomic order must be positive");
        let t = table(order);
        let idx = e.rem_euclid(order as i64) as usize;
        let coeffs = t.powers[idx].iter().map(|&c| int(c)).collect();
        let mut c = Cyc { order, coeffs };
        c.normalize();
        c
    }

    /// Builds `Σ r ζ_order^e` from arbitrary exponents.
    pub fn from_terms(order: u32, terms: &[(i64, Rational)]) -> Result<Self, ScalarError> {
        if order == 0 {
            return Err(ScalarError::ZeroOrder);
        }
        let t = table(order);
        let mut coeffs = vec![Rational::zero(); t.phi];
        for (e, r) in terms {
            let idx = e.rem_euclid(order as i64) as usize;
            for (j, &p) in t.powers[idx].iter().enumerate() {
                if p != 0 {
                    coeffs[j] += r * int(p);
                }
            }
        }
        let mut c = Cyc { order, coeffs };
        c.normalize();
        Ok(c)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.len() <= 1 {
            self.order = 1;
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// The value as a rational, if it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Borrowed rational value of a nonzero rational element.
    pub(crate) fn nonzero_rational(&self) -> Option<&Rational> {
        match self.coeffs.len() {
            1 => Some(&self.coeffs[0]),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Nonzero power-basis terms `(i, c_i)`.
    pub fn terms(&self) -> Vec<(usize, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    fn promoted(&self, order: u32) -> Vec<Rational> {
        let t = table(order);
        let mut out = vec![Rational::zero(); t.phi];
        if self.order == 1 {
            if let Some(c) = self.coeffs.first() {
                out[0] = c.clone();
            }
            return out;
        }
        debug_assert_eq!(order % self.order, 0);
        let step = (order / self.order) as usize;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, &p) in t.powers[i * step].iter().enumerate() {
                if p != 0 {
                    out[j] += c * int(p);
                }
            }
        }
        out
    }

    fn common_order(&self, other: &Cyc) -> u32 {
        self.order.lcm(&other.order)
    }

    pub fn scale(&self, r: &Rational) -> Cyc {
        if r.is_zero() {
            return Cyc::zero();
        }
        Cyc {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Cyc {
        self.scale(&int(n))
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Cyc {
        if self.order == 1 {
            return self.clone();
        }
        let terms: Vec<(i64, Rational)> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (-(i as i64), c.clone()))
            .collect();
        Cyc::from_terms(self.order, &terms).expect("positive order")
    }

    pub fn pow(&self, mut e: u32) -> Cyc {
        let mut base = self.clone();
        let mut acc = Cyc::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, by solving the multiplication-matrix system.
    pub fn inv(&self) -> Result<Cyc, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.order == 1 {
            return Ok(Cyc::from_rational(self.coeffs[0].recip()));
        }
        let t = table(self.order);
        let n = t.phi;
        // column j = self * x^j
        let mut mat = vec![vec![Rational::zero(); n + 1]; n];
        for j in 0..n {
            let col = (self * &Cyc::root_of_unity(self.order, j as i64)).promoted(self.order);
            for i in 0..n {
                mat[i][j] = col[i].clone();
            }
        }
        mat[0][n] = Rational::one();
        let sol = solve_augmented(mat).ok_or(ScalarError::DivisionByZero)?;
        let mut c = Cyc {
            order: self.order,
            coeffs: sol,
        };
        c.normalize();
        Ok(c)
    }

    pub fn to_complex(&self) -> Complex64 {
        let m = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let theta = std::f64::consts::TAU * (i as f64) / m;
                Complex64::from_polar(rational_to_f64(c), theta)
            })
            .sum()
    }
}

/// Gauss-Jordan elimination on an augmented `n x (n+1)` rational matrix.
pub(crate) fn solve_augmented(mut mat: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let n = mat.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !mat[r][col].is_zero())?;
        mat.swap(col, pivot);
        let inv = mat[col][col].recip();
        for j in col..=n {
            mat[col][j] = &mat[col][j] * &inv;
        }
        for r in 0..n {
            if r != col && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                for j in col..=n {
                    let delta = &factor * &mat[col][j];
                    mat[r][j] -= delta;
                }
            }
        }
    }
    Some(mat.into_iter().map(|row| row[n].clone()).collect())
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        if self.is_rational() != other.is_rational() && (self.order == 1 || other.order == 1) {
            // a normalized rational never equals a non-rational
            return false;
        }
        let l = self.common_order(other);
        self.promoted(l) == other.promoted(l)
    }
}

impl Eq for Cyc {}

impl<'a> Add<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn add(self, rhs: &'a Cyc) -> Cyc {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let mut out = if self.order == rhs.order {
            let n = self.coeffs.len().max(rhs.coeffs.len());
            let mut v = Vec::with_capacity(n);
            for i in 0..n {
                match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                    (Some(a), Some(b)) => v.push(a + b),
                    (Some(a), None) => v.push(a.clone()),
                    (None, Some(b)) => v.push(b.clone()),
                    (None, None) => unreachable!(),
                }
            }
            Cyc {
                order: self.order,
                coeffs: v,
            }
        } else {
            let l = self.common_order(rhs);
            let a = self.promoted(l);
            let b = rhs.promoted(l);
            Cyc {
                order: l,
                coeffs: a.into_iter().zip(b).map(|(x, y)| x + y).collect(),
            }
        };
        out.normalize();
        out
    }
}

impl Add for Cyc {
    type Output = Cyc;
    fn add(self, rhs: Cyc) -> Cyc {
        &self + &rhs
    }
}

impl<'a> Neg for &'a Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        -&self
    }
}

impl<'a> Sub<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn sub(self, rhs: &'a Cyc) -> Cyc {
        self + &(-rhs)
    }
}

impl Sub for Cyc {
    type Output = Cyc;
    fn sub(self, rhs: Cyc) -> Cyc {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn mul(self, rhs: &'a Cyc) -> Cyc {
        if self.is_zero() || rhs.is_zero() {
            return Cyc::zero();
        }
        if self.order == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.order == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        let l = self.common_order(rhs);
        let a = if self.order == l {
            self.coeffs.clone()
        } else {
            self.promoted(l)
        };
        let b = if rhs.order == l {
            rhs.coeffs.clone()
        } else {
            rhs.promoted(l)
        };
        let mut prod = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let t = table(l);
        let phi = t.phi;
        for i in (phi..prod.len()).rev() {
            let c = std::mem::take(&mut prod[i]);
            if c.is_zero() {
                continue;
            }
            for j in 0..phi {
                let m = t.modulus[j];
                if m != 0 {
                    prod[i - phi + j] -= &c * int(m);
                }
            }
        }
        prod.truncate(phi);
        let mut out = Cyc {
            order: l,
            coeffs: prod,
        };
        out.normalize();
        out
    }
}

impl Mul for Cyc {
    type Output = Cyc;
    fn mul(self, rhs: Cyc) -> Cyc {
        &self * &rhs
    }
}

impl From<Rational> for Cyc {
    fn from(r: Rational) -> Self {
        Cyc::from_rational(r)
    }
}

impl From<i64> for Cyc {
    fn from(n: i64) -> Self {
        Cyc::from_int(n)
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let parts: Vec<String> = self
            .terms()
            .into_iter()
            .map(|(i, c)| format!("({c})z{}^{i}", self.order))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Cyc {
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self.as_rational() {
            Some(r) => json!(format_rational(&r)),
            None => {
                let terms: Vec<serde_json::Value> = self
                    .terms()
                    .into_iter()
                    .map(|(i, c)| json!([i, format_rational(c)]))
                    .collect();
                json!({ "order": self.order, "terms": terms })
            }
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Cyc, ScalarError> {
        let bad = || ScalarError::Parse(v.to_string());
        match v {
            serde_json::Value::String(s) => Ok(Cyc::from_rational(parse_rational(s)?)),
            serde_json::Value::Number(n) => {
                let i = n.as_i64().ok_or_else(bad)?;
                Ok(Cyc::from_int(i))
            }
            serde_json::Value::Object(map) => {
                let order = map.get("order").and_then(|o| o.as_u64()).ok_or_else(bad)?;
                let order = u32::try_from(order).map_err(|_| bad())?;
                let raw = map.get("terms").and_then(|t| t.as_array()).ok_or_else(bad)?;
                let mut terms = Vec::with_capacity(raw.len());
                for t in raw {
                    let pair = t.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
                    let e = pair[0].as_i64().ok_or_else(bad)?;
                    let r = match &pair[1] {
                        serde_json::Value::String(s) => parse_rational(s)?,
                        serde_json::Value::Number(n) => int(n.as_i64().ok_or_else(bad)?),
                        _ => return Err(bad()),
                    };
                    terms.push((e, r));
                }
                Cyc::from_terms(order, &terms)
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for Cyc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        Cyc::from_json(&v).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Fourth roots of unity

/// One of `1, i, -1, -i`, stored as an exponent of `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FourthRoot(u8);

impl FourthRoot {
    pub const ONE: FourthRoot = FourthRoot(0);
    pub const I: FourthRoot = FourthRoot(1);
    pub const MINUS_ONE: FourthRoot = FourthRoot(2);
    pub const MINUS_I: FourthRoot = FourthRoot(3);

    pub fn from_exponent(e: i64) -> Self {
        FourthRoot(e.rem_euclid(4) as u8)
    }

    pub fn from_sign(s: i32) -> Self {
        if s < 0 {
            FourthRoot::MINUS_ONE
        } else {
            FourthRoot::ONE
        }
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn conj(self) -> Self {
        FourthRoot((4 - self.0) % 4)
    }

    pub fn to_cyc(self) -> Cyc {
        Cyc::root_of_unity(4, self.0 as i64)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl Mul for FourthRoot {
    type Output = FourthRoot;
    fn mul(self, rhs: FourthRoot) -> FourthRoot {
        FourthRoot((self.0 + rhs.0) % 4)
    }
}

// ---------------------------------------------------------------------------
// Quadratic symbols

/// Jacobi symbol `(a/n)` for odd positive `n`.
fn jacobi(a: i64, n: i64) -> i32 {
    debug_assert!(n > 0 && n % 2 == 1);
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// The Kronecker symbol `(t/d)`, with `(t/2) = (2/t)` for odd `t` and
/// `(t/-1)` the sign of `t`.
pub fn kronecker(t: i64, d: i64) -> Result<i32, ScalarError> {
    if t == 0 && d == 0 {
        return Err(ScalarError::KroneckerZeroZero);
    }
    Ok(kronecker_unchecked(t, d))
}

pub(crate) fn kronecker_unchecked(t: i64, d: i64) -> i32 {
    if d == 0 {
        return if t == 1 || t == -1 { 1 } else { 0 };
    }
    let mut result = 1;
    let mut d = d;
    if d < 0 {
        d = -d;
        if t < 0 {
            result = -1;
        }
    }
    let v = d.trailing_zeros();
    if v > 0 {
        if t % 2 == 0 {
            return 0;
        }
        d >>= v;
        let r = t.rem_euclid(8);
        if v % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
    }
    result * jacobi(t, d)
}

/// `ε_d`: 1 if d ≡ 1 mod 4 and i if d ≡ 3 mod 4.
pub fn eps_d(d: i64) -> Result<FourthRoot, ScalarError> {
    match d.rem_euclid(4) {
        1 => Ok(FourthRoot::ONE),
        3 => Ok(FourthRoot::I),
        _ => Err(ScalarError::EvenArgument(d)),
    }
}

// ---------------------------------------------------------------------------
// Bernoulli numbers and partial zeta values

static BERNOULLI: LazyLock<Vec<Rational>> = LazyLock::new(|| {
    let n = BERNOULLI_BOUND as usize;
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::one());
    for m in 1..=n {
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = Rational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            acc += bj * Rational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / int(m as i64 + 1));
    }
    b
});

/// B_k with B_1 = -1/2.
pub fn bernoulli_number(k: u32) -> Result<&'static Rational, ScalarError> {
    if k > BERNOULLI_BOUND {
        return Err(ScalarError::BernoulliBound {
            k,
            bound: BERNOULLI_BOUND,
        });
    }
    Ok(&BERNOULLI[k as usize])
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// The Bernoulli polynomial B_k(x) = Σ_j C(k,j) B_j x^{k-j}.
pub fn bernoulli_poly(k: u32, x: &Rational) -> Result<Rational, ScalarError> {
    bernoulli_number(k)?;
    // Horner in x over the coefficients C(k, i) B_{k-i} of x^i.
    let mut acc = Rational::zero();
    for i in (0..=k).rev() {
        let c = Rational::from_integer(binomial(k as u64, i as u64)) * &BERNOULLI[(k - i) as usize];
        acc = acc * x + c;
    }
    Ok(acc)
}

/// ζ_N^{(d)}(1-k) = -N^{k-1} B_k(d/N)/k, the value at 1-k of
/// Σ_{n ≡ d (N), n > 0} n^{-s}. Any residue `d` is accepted; it is
/// represented in `1..=N`.
pub fn partial_zeta_neg(modulus: u64, d: i64, k: u32) -> Result<Rational, ScalarError> {
    if modulus == 0 || k == 0 {
        return Err(ScalarError::BadZetaArguments);
    }
    let n = modulus as i64;
    let d = (d - 1).rem_euclid(n) + 1;
    let x = rational(d, n);
    let b = bernoulli_poly(k, &x)?;
    let scale = Rational::from_integer(num_traits::pow(BigInt::from(modulus), (k - 1) as usize));
    Ok(-(b * scale) / int(k as i64))
}

/// L(1-k, χ) = Σ_{(d,N)=1} χ(d) ζ_N^{(d)}(1-k) for χ taken modulo its
/// declared modulus.
pub fn dirichlet_l_neg(chi: &DirichletCharacter, k: u32) -> Result<Cyc, ScalarError> {
    let n = chi.modulus();
    let mut acc = Cyc::zero();
    for d in 1..=n {
        let v = chi.value(d as i64);
        if v.is_zero() {
            continue;
        }
        let z = partial_zeta_neg(n, d as i64, k)?;
        acc = &acc + &v.scale(&z);
    }
    Ok(acc)
}

/// Integer `n^e` as a rational.
pub fn int_pow(n: i64, e: u32) -> Rational {
    Rational::from_integer(num_traits::pow(BigInt::from(n), e as usize))
}

pub fn is_square_free(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut p = 2;
    let mut m = n;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        if m % p == 0 {
            m /= p;
        }
        p += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Euler's criterion, an independent route to the Legendre symbol.
    fn legendre_euler(a: i64, p: i64) -> i32 {
        let a = a.rem_euclid(p);
        if a == 0 {
            return 0;
        }
        let mut r = 1i64;
        let mut b = a;
        let mut e = (p - 1) / 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        if r == 1 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_examples() {
        for d in 1..50 {
            assert_eq!(kronecker(1, d).unwrap(), 1);
        }
        assert_eq!(kronecker(2, 7).unwrap(), 1);
        assert_eq!(kronecker(-1, 3).unwrap(), -1);
        assert_eq!(kronecker(3, 2).unwrap(), kronecker(2, 3).unwrap());
        assert_eq!(kronecker(3, 2).unwrap(), -1);
        assert_eq!(kronecker(0, 0), Err(ScalarError::KroneckerZeroZero));
    }

    #[test]
    fn kronecker_matches_euler_criterion_on_primes() {
        for p in [3i64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            for a in -40..40 {
                assert_eq!(kronecker(a, p).unwrap(), legendre_euler(a, p), "a={a} p={p}");
            }
        }
    }

    #[test]
    fn kronecker_even_convention_for_odd_t() {
        for t in (-51i64..52).filter(|t| t % 2 != 0) {
            assert_eq!(kronecker(t, 2).unwrap(), kronecker(2, t.abs()).unwrap());
        }
    }

    #[test]
    fn kronecker_completely_multiplicative_in_d() {
        for t in [-7i64, -4, -3, 2, 3, 5, 8, 12] {
            for a in 1..=100i64 {
                for b in 1..=100i64 {
                    if a * b > 100 || gcd((a * b) as u64, 2 * t.unsigned_abs()) != 1 {
                        continue;
                    }
                    assert_eq!(
                        kronecker(t, a * b).unwrap(),
                        kronecker(t, a).unwrap() * kronecker(t, b).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn eps_d_examples() {
        assert_eq!(eps_d(1).unwrap(), FourthRoot::ONE);
        assert_eq!(eps_d(3).unwrap(), FourthRoot::I);
        assert_eq!(eps_d(7).unwrap(), FourthRoot::I);
        assert_eq!(eps_d(-1).unwrap(), FourthRoot::I);
        assert!(eps_d(4).is_err());
    }

    #[test]
    fn bernoulli_examples() {
        let x = rational(3, 7);
        assert_eq!(bernoulli_poly(0, &x).unwrap(), int(1));
        assert_eq!(bernoulli_poly(1, &int(0)).unwrap(), rational(-1, 2));
        assert_eq!(bernoulli_poly(2, &rational(1, 2)).unwrap(), rational(-1, 12));
        assert_eq!(*bernoulli_number(4).unwrap(), rational(-1, 30));
        assert_eq!(*bernoulli_number(12).unwrap(), rational(-691, 2730));
        assert!(bernoulli_poly(65, &x).is_err());
    }

    #[test]
    fn bernoulli_difference_equation() {
        for k in 1..=12u32 {
            for den in 1..=10i64 {
                for num in -12..=12i64 {
                    let x = rational(num, den);
                    let lhs = bernoulli_poly(k, &(&x + int(1))).unwrap() - bernoulli_poly(k, &x).unwrap();
                    let rhs = int(k as i64) * num_traits::pow(x.clone(), (k - 1) as usize);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    /// Euler–Maclaurin evaluation of the Hurwitz zeta function at s = 1-k,
    /// with Bernoulli numbers taken from ζ(2j) by direct summation. The
    /// remainder vanishes identically at negative integers.
    pub(crate) fn hurwitz_neg_float(k: u32, a: f64) -> f64 {
        let s = 1.0 - k as f64;
        let m = 0usize;
        let big = m as f64 + a;
        let mut sum: f64 = (0..m).map(|n| (n as f64 + a).powf(-s)).sum();
        sum += big.powf(1.0 - s) / (s - 1.0);
        sum += 0.5 * big.powf(-s);
        let mut j = 1u32;
        loop {
            // rising product s (s+1) ... (s+2j-2)
            let mut rising = 1.0;
            for i in 0..(2 * j - 1) {
                rising *= s + i as f64;
            }
            if rising == 0.0 {
                break;
            }
            let p = 2 * j as i32;
            let cut = 20000.0f64;
            let head: f64 = (1..20000).map(|n| (n as f64).powi(-p)).sum();
            let tail = cut.powi(1 - p) / (p - 1) as f64 + 0.5 * cut.powi(-p) + p as f64 * cut.powi(-p - 1) / 12.0;
            let zeta2j = head + tail;
            let mut fact = 1.0;
            for i in 1..=(2 * j) {
                fact *= i as f64;
            }
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            let b2j = sign * 2.0 * fact * zeta2j / std::f64::consts::TAU.powi(2 * j as i32);
            sum += b2j / fact * rising * big.powf(-s - 2.0 * j as f64 + 1.0);
            j += 1;
        }
        sum
    }

    #[test]
    fn partial_zeta_examples() {
        assert_eq!(partial_zeta_neg(1, 1, 2).unwrap(), rational(-1, 12));
        assert!((hurwitz_neg_float(2, 1.0) + 1.0 / 12.0).abs() < 1e-9);
        assert_eq!(partial_zeta_neg(4, 1, 1).unwrap(), rational(1, 4));
        assert_eq!(partial_zeta_neg(4, 3, 1).unwrap(), rational(-1, 4));
        assert_eq!(partial_zeta_neg(4, 7, 1).unwrap(), rational(-1, 4));
    }

    #[test]
    fn partial_zeta_matches_hurwitz_oracle() {
        for n in 1..=8u64 {
            for d in 1..=n {
                for k in 1..=5u32 {
                    let exact = rational_to_f64(&partial_zeta_neg(n, d as i64, k).unwrap());
                    let oracle = (n as f64).powi(k as i32 - 1) * hurwitz_neg_float(k, d as f64 / n as f64);
                    assert!((exact - oracle).abs() < 1e-9, "N={n} d={d} k={k}");
                }
            }
        }
    }

    #[test]
    fn splitting_identity() {
        for n in 1..=6u64 {
            for t in 1..=6u64 {
                for d in 1..=n {
                    for k in 1..=5u32 {
                        let lhs = partial_zeta_neg(n, d as i64, k).unwrap();
                        let mut rhs = Rational::zero();
                        for m in 1..=t {
                            rhs += partial_zeta_neg(n * t, (d + n * m) as i64, k).unwrap();
                        }
                        assert_eq!(lhs, rhs, "N={n} t={t} d={d} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        for m in 1..40u32 {
            assert_eq!(cyclotomic_poly(m).len() as u64 - 1, totient(m as u64));
        }
    }

    #[test]
    fn cyc_embedding_sqrt2() {
        let z = Cyc::root_of_unity(8, 1) + Cyc::root_of_unity(8, -1);
        let c = z.to_complex();
        assert!((c.re - 2f64.sqrt()).abs() < 1e-12 && c.im.abs() < 1e-12);
        // and exactly: (ζ + ζ^{-1})^2 = 2
        assert_eq!(&z * &z, Cyc::from_int(2));
    }

    #[test]
    fn cyc_mixed_orders_promote() {
        let i4 = Cyc::root_of_unity(4, 1);
        let i8 = Cyc::root_of_unity(8, 2);
        assert_eq!(i4, i8);
        let w3 = Cyc::root_of_unity(3, 1);
        let s = &i4 + &w3;
        assert_eq!(s.order(), 12);
        assert_eq!(&(&s - &w3), &i4);
        // 1 + ω + ω² = 0
        let sum = &(&Cyc::one() + &w3) + &w3.pow(2);
        assert!(sum.is_zero());
    }

    #[test]
    fn cyc_inverse_and_conj() {
        let a = &Cyc::root_of_unity(5, 1) + &Cyc::from_int(2);
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        let c = a.conj().to_complex();
        let d = a.to_complex().conj();
        assert!((c - d).norm() < 1e-12);
        assert!(Cyc::zero().inv().is_err());
    }

    #[test]
    fn cyc_json_round_trip() {
        let a = Cyc::from_terms(12, &[(1, rational(1, 3)), (5, int(-2)), (7, rational(5, 2))]).unwrap();
        let back = Cyc::from_json(&a.to_json()).unwrap();
        assert_eq!(a, back);
        assert_eq!(Cyc::from_rational(rational(-3, 4)).to_json(), serde_json::json!("-3/4"));
    }

    fn arb_cyc() -> impl Strategy<Value = Cyc> {
        (
            prop::sample::select(vec![1u32, 3, 4, 5, 8, 12]),
            prop::collection::vec((0i64..24, -20i64..20, 1i64..6), 0..5),
        )
            .prop_map(|(order, terms)| {
                let t: Vec<(i64, Rational)> = terms.into_iter().map(|(e, n, d)| (e, rational(n, d))).collect();
                Cyc::from_terms(order, &t).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn cyc_ring_laws(a in arb_cyc(), b in arb_cyc(), c in arb_cyc()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            let lhs = (&a * &b).to_complex();
            let rhs = a.to_complex() * b.to_complex();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }

        #[test]
        fn fourth_roots_close_under_multiplication(a in 0i64..4, b in 0i64..4) {
            let x = FourthRoot::from_exponent(a);
            let y = FourthRoot::from_exponent(b);
            prop_assert_eq!((x * y).to_cyc(), &x.to_cyc() * &y.to_cyc());
        }
    }
}
