//! Truncated q-expansions with exponents in `(1/w)Z`.
//!
//! A [`QExp`] stores integer numerators `a` (meaning `q^{a/w}`) together with a
//! half-open window `[lo, hi)` of numerators inside which every coefficient is
//! known. Coefficients below `lo` are zero by construction (finite principal
//! part); coefficients at or above `hi` are unknown. Every operation keeps the
//! window pessimistic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intpoly;
use crate::scalars::{Cyc, Rational, ScalarError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("weight mismatch: {0} vs {1}")]
    WeightMismatch(Weight, Weight),
    #[error("expected integer exponents, got exponent denominator {0}")]
    FractionalExponents(u64),
    #[error("malformed q-expansion: {0}")]
    Malformed(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Weight `num/den`, kept in lowest terms with `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight {
    pub num: i64,
    pub den: i64,
}

impl Weight {
    pub fn new(num: i64, den: i64) -> Weight {
        assert!(den != 0, "weight denominator is zero");
        let g = num.gcd(&den).max(1);
        let s = den.signum();
        Weight {
            num: s * num / g,
            den: s * den / g,
        }
    }

    pub fn integral(k: i64) -> Weight {
        Weight::new(k, 1)
    }

    /// `k + 1/2`.
    pub fn half_integral(k: i64) -> Weight {
        Weight::new(2 * k + 1, 2)
    }

    pub fn is_integral(self) -> bool {
        self.den == 1
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn plus(self, o: Weight) -> Weight {
        Weight::new(self.num * o.den + o.num * self.den, self.den * o.den)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Optional hints carried along with a series. Never used for correctness.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character: Option<String>,
}

#[derive(Clone, Debug)]
pub struct QExp {
    w: u64,
    coeffs: BTreeMap<i64, Cyc>,
    lo: i64,
    hi: i64,
    weight: Weight,
    meta: Metadata,
}

impl QExp {
    /// The zero series on `[lo, hi)` over `(1/w)Z`.
    pub fn zero(w: u64, lo: i64, hi: i64, weight: Weight) -> QExp {
        assert!(w > 0, "exponent denominator must be positive");
        QExp {
            w,
            coeffs: BTreeMap::new(),
            lo,
            hi: hi.max(lo),
            weight,
            meta: Metadata::default(),
        }
    }

    /// Series from `(numerator, coefficient)` pairs; zeros and entries outside
    /// the window are dropped, repeated numerators are summed.
    pub fn from_coefficients<I>(w: u64, lo: i64, hi: i64, weight: Weight, coeffs: I) -> QExp
    where
        I: IntoIterator<Item = (i64, Cyc)>,
    {
        let mut f = QExp::zero(w, lo, hi, weight);
        for (a, c) in coeffs {
            f.add_at(a, &c);
        }
        f
    }

    /// Integer-exponent series with rational coefficients `values[i]` at `q^{lo+i}`,
    /// known on `[lo, lo + values.len())`.
    pub fn from_rationals(lo: i64, values: Vec<Rational>, weight: Weight) -> QExp {
        let hi = lo + values.len() as i64;
        let mut f = QExp::zero(1, lo, hi, weight);
        for (i, v) in values.into_iter().enumerate() {
            if !v.is_zero() {
                f.coeffs.insert(lo + i as i64, Cyc::from_rational(v));
            }
        }
        f
    }

    pub fn exponent_denominator(&self) -> u64 {
        self.w
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn metadata(&self) -> &Metadata {
        &self.meta
    }

    pub fn with_metadata(mut self, meta: Metadata) -> QExp {
        self.meta = meta;
        self
    }

    pub fn with_weight(mut self, weight: Weight) -> QExp {
        self.weight = weight;
        self
    }

    /// Stored (nonzero) coefficients keyed by numerator.
    pub fn coefficients(&self) -> &BTreeMap<i64, Cyc> {
        &self.coeffs
    }

    /// Coefficient at numerator `a`, or `None` when `a` is not in the window.
    pub fn get(&self, a: i64) -> Option<Cyc> {
        if a >= self.hi {
            return None;
        }
        Some(self.coeffs.get(&a).cloned().unwrap_or_else(Cyc::zero))
    }

    /// Coefficient of `q^n` for an integer `n`, or `None` beyond the window.
    pub fn coeff_int(&self, n: i64) -> Option<Cyc> {
        self.get(n * self.w as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when every stored coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.coeffs.values().all(Cyc::is_rational)
    }

    fn add_at(&mut self, a: i64, c: &Cyc) {
        if c.is_zero() || a < self.lo || a >= self.hi {
            return;
        }
        let sum = match self.coeffs.get(&a) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.coeffs.remove(&a);
        } else {
            self.coeffs.insert(a, sum);
        }
    }

    /// The same series over `(1/w2)Z`; `w` must divide `w2`.
    pub fn aligned(&self, w2: u64) -> QExp {
        assert!(w2 % self.w == 0, "cannot align {} to {}", self.w, w2);
        let m = (w2 / self.w) as i64;
        if m == 1 {
            return self.clone();
        }
        QExp {
            w: w2,
            coeffs: self.coeffs.iter().map(|(a, c)| (a * m, c.clone())).collect(),
            lo: self.lo * m,
            hi: self.hi * m,
            weight: self.weight,
            meta: self.meta.clone(),
        }
    }

    fn common(f: &QExp, g: &QExp) -> (QExp, QExp) {
        let w = num_integer::lcm(f.w, g.w);
        (f.aligned(w), g.aligned(w))
    }

    /// Sum; fails when the weight tags differ.
    pub fn add(&self, other: &QExp) -> Result<QExp, SeriesError> {
        if self.weight != other.weight {
            return Err(SeriesError::WeightMismatch(self.weight, other.weight));
        }
        Ok(self.add_unchecked(other))
    }

    /// Sum ignoring weight tags (the result keeps the left tag).
    pub fn add_unchecked(&self, other: &QExp) -> QExp {
        let (mut f, g) = QExp::common(self, other);
        f.lo = f.lo.min(g.lo);
        f.hi = f.hi.min(g.hi);
        f.coeffs.retain(|&a, _| a < f.hi);
        for (a, c) in &g.coeffs {
            f.add_at(*a, c);
        }
        if f.meta != other.meta {
            f.meta = Metadata::default();
        }
        f
    }

    pub fn sub(&self, other: &QExp) -> Result<QExp, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QExp {
        let mut f = self.clone();
        for c in f.coeffs.values_mut() {
            *c = -&*c;
        }
        f
    }

    pub fn scale(&self, c: &Cyc) -> QExp {
        let mut f = self.clone();
        if c.is_zero() {
            f.coeffs.clear();
            return f;
        }
        for v in f.coeffs.values_mut() {
            *v = &*v * c;
        }
        f
    }

    pub fn scale_rational(&self, r: &Rational) -> QExp {
        self.scale(&Cyc::from_rational(r.clone()))
    }

    /// Window of a product: `[lf + lg, min(hf + lg, hg + lf))`.
    fn product_window(f: &QExp, g: &QExp) -> (i64, i64) {
        let lo = f.lo + g.lo;
        let hi = (f.hi + g.lo).min(g.hi + f.lo).max(lo);
        (lo, hi)
    }

    /// Product; weights add, the window follows the convolution rule.
    pub fn mul(&self, other: &QExp) -> QExp {
        let (f, g) = QExp::common(self, other);
        let (lo, hi) = QExp::product_window(&f, &g);
        let mut out = QExp::zero(f.w, lo, hi, f.weight.plus(g.weight));
        if f.is_zero() || g.is_zero() || hi <= lo {
            return out;
        }
        if f.is_rational() && g.is_rational() {
            out.coeffs = mul_rational(&f, &g, lo, hi);
            return out;
        }
        for (a, x) in f.coeffs.range(..hi - g.lo) {
            for (b, y) in g.coeffs.range(..hi - a) {
                out.add_at(a + b, &(x * y));
            }
        }
        out
    }

    /// `f^e` for `e ≥ 1` by repeated squaring.
    pub fn pow(&self, e: u32) -> QExp {
        assert!(e >= 1, "pow needs a positive exponent");
        let mut acc: Option<QExp> = None;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap()
    }

    /// Keeps only numerators below `hi`.
    pub fn truncate(&self, hi: i64) -> QExp {
        let mut f = self.clone();
        f.hi = f.hi.min(hi).max(f.lo);
        let cut = f.hi;
        f.coeffs.retain(|&a, _| a < cut);
        f
    }

    /// `f(tτ)`.
    pub fn rescale(&self, t: u64) -> QExp {
        assert!(t >= 1, "rescale factor must be positive");
        let ti = t as i64;
        QExp {
            w: self.w,
            coeffs: self.coeffs.iter().map(|(a, c)| (a * ti, c.clone())).collect(),
            lo: self.lo * ti,
            hi: self.hi * ti,
            weight: self.weight,
            meta: Metadata {
                level: self.meta.level.map(|l| l * t),
                character: self.meta.character.clone(),
            },
        }
    }

    /// `Σ c_{ns} q^n`; exponents that are not integer multiples of `s` are dropped.
    pub fn u_op(&self, s: u64) -> QExp {
        assert!(s >= 1, "U operator index must be positive");
        let step = (s * self.w) as i64;
        let lo = Integer::div_ceil(&self.lo, &step);
        let hi = Integer::div_ceil(&self.hi, &step);
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(a, _)| *a % step == 0)
            .map(|(a, c)| (a / step, c.clone()))
            .collect();
        QExp {
            w: 1,
            coeffs,
            lo,
            hi: hi.max(lo),
            weight: self.weight,
            meta: Metadata::default(),
        }
    }

    fn require_integral(&self) -> Result<(), SeriesError> {
        if self.w != 1 {
            return Err(SeriesError::FractionalExponents(self.w));
        }
        Ok(())
    }

    /// `f_j = Σ_{n ≡ j (4)} c_n q^{n/4}` for `j = 0..3`.
    pub fn decompose_mod4(&self) -> Result<[QExp; 4], SeriesError> {
        self.require_integral()?;
        let mut parts: [QExp; 4] = std::array::from_fn(|_| {
            let mut p = QExp::zero(4, self.lo, self.hi, self.weight);
            p.meta = self.meta.clone();
            p
        });
        for (a, c) in &self.coeffs {
            parts[a.rem_euclid(4) as usize].coeffs.insert(*a, c.clone());
        }
        Ok(parts)
    }

    /// Zeroes coefficients whose exponent is not in `allowed` modulo `m`.
    pub fn filter_residues(&self, m: u64, allowed: &[i64]) -> Result<QExp, SeriesError> {
        self.require_integral()?;
        let m = m as i64;
        let keep: Vec<i64> = allowed.iter().map(|r| r.rem_euclid(m)).collect();
        let mut f = self.clone();
        f.coeffs.retain(|a, _| keep.contains(&a.rem_euclid(m)));
        Ok(f)
    }

    /// Residues mod 4 of the stored integer exponents.
    pub fn residues_mod4(&self) -> Result<[bool; 4], SeriesError> {
        self.require_integral()?;
        let mut seen = [false; 4];
        for a in self.coeffs.keys() {
            seen[a.rem_euclid(4) as usize] = true;
        }
        Ok(seen)
    }

    /// Smallest exponent denominator describing the stored support.
    ///
    /// The window shrinks to the largest sub-window expressible on the
    /// coarser lattice.
    pub fn normalize(&self) -> QExp {
        let mut g = self.w;
        for a in self.coeffs.keys() {
            g = g.gcd(&a.unsigned_abs());
            if g == 1 {
                return self.clone();
            }
        }
        if g == 1 {
            return self.clone();
        }
        let gi = g as i64;
        QExp {
            w: self.w / g,
            coeffs: self.coeffs.iter().map(|(a, c)| (a / gi, c.clone())).collect(),
            lo: Integer::div_ceil(&self.lo, &gi),
            hi: Integer::div_floor(&self.hi, &gi).max(Integer::div_ceil(&self.lo, &gi)),
            weight: self.weight,
            meta: self.meta.clone(),
        }
    }

    /// Equal coefficients on the intersection of the two windows.
    pub fn agrees_with(&self, other: &QExp) -> bool {
        self.first_disagreement(other).is_none()
    }

    /// First numerator (over the common lattice) where the series differ inside
    /// the common window, with the common exponent denominator.
    pub fn first_disagreement(&self, other: &QExp) -> Option<(i64, u64)> {
        let (f, g) = QExp::common(self, other);
        let hi = f.hi.min(g.hi);
        let keys: std::collections::BTreeSet<i64> = f
            .coeffs
            .range(..hi)
            .map(|(a, _)| *a)
            .chain(g.coeffs.range(..hi).map(|(a, _)| *a))
            .collect();
        keys.into_iter()
            .find(|a| f.coeffs.get(a) != g.coeffs.get(a))
            .map(|a| (a, f.w))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(a, c)| serde_json::json!([a, c.to_json()]))
            .collect();
        serde_json::json!({
            "weight": self.weight,
            "exponent_denominator": self.w,
            "window": [self.lo, self.hi],
            "coefficients": coeffs,
            "metadata": self.meta,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<QExp, SeriesError> {
        let bad = |what: &str| SeriesError::Malformed(what.to_string());
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        let weight: Weight = serde_json::from_value(obj.get("weight").cloned().ok_or_else(|| bad("missing weight"))?)
            .map_err(|e| bad(&format!("weight: {e}")))?;
        if weight.den == 0 {
            return Err(bad("weight denominator is zero"));
        }
        let weight = Weight::new(weight.num, weight.den);
        let w = obj
            .get("exponent_denominator")
            .and_then(|x| x.as_u64())
            .filter(|&w| w > 0)
            .ok_or_else(|| bad("exponent_denominator must be a positive integer"))?;
        let window = obj
            .get("window")
            .and_then(|x| x.as_array())
            .filter(|a| a.len() == 2)
            .ok_or_else(|| bad("window must be [lo, hi]"))?;
        let lo = window[0].as_i64().ok_or_else(|| bad("window lo"))?;
        let hi = window[1].as_i64().ok_or_else(|| bad("window hi"))?;
        if hi < lo {
            return Err(bad("window hi below lo"));
        }
        let meta: Metadata = match obj.get("metadata") {
            Some(m) => serde_json::from_value(m.clone()).map_err(|e| bad(&format!("metadata: {e}")))?,
            None => Metadata::default(),
        };
        let raw = obj
            .get("coefficients")
            .and_then(|x| x.as_array())
            .ok_or_else(|| bad("coefficients must be a list"))?;
        let mut f = QExp::zero(w, lo, hi, weight);
        f.meta = meta;
        for entry in raw {
            let pair = entry.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("coefficient entry"))?;
            let a = pair[0].as_i64().ok_or_else(|| bad("coefficient numerator"))?;
            if a < lo || a >= hi {
                return Err(bad(&format!("coefficient at {a} outside window [{lo}, {hi})")));
            }
            let c = Cyc::from_json(&pair[1])?;
            f.add_at(a, &c);
        }
        Ok(f)
    }
}

impl PartialEq for QExp {
    /// Same weight, same window and same coefficients once both live on a
    /// common exponent lattice.
    fn eq(&self, other: &QExp) -> bool {
        if self.weight != other.weight {
            return false;
        }
        let (f, g) = QExp::common(self, other);
        f.lo == g.lo && f.hi == g.hi && f.coeffs == g.coeffs
    }
}

impl fmt::Display for QExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (a, c) in &self.coeffs {
            let e = Rational::new(BigInt::from(*a), BigInt::from(self.w));
            let mon = if e.is_zero() {
                String::new()
            } else if e.is_one() {
                "q".to_string()
            } else {
                format!("q^{}", crate::scalars::format_rational(&e).trim_end_matches("/1"))
            };
            let coef = if c.is_rational() { c.to_string() } else { format!("({c})") };
            parts.push(match (coef.as_str(), mon.is_empty()) {
                (_, true) => coef,
                ("1", false) => mon,
                _ => format!("{coef}*{mon}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        let hi = Rational::new(BigInt::from(self.hi), BigInt::from(self.w));
        write!(f, "{} + O(q^{})", parts.join(" + "), crate::scalars::format_rational(&hi).trim_end_matches("/1"))
    }
}

/// Integer numerators over one common denominator, indexed from an offset.
struct ScaledDense {
    offset: i64,
    nums: Vec<BigInt>,
    support: Vec<usize>,
    den: BigInt,
}

impl ScaledDense {
    fn new(f: &QExp, hi: i64) -> ScaledDense {
        let mut den = BigInt::one();
        for (_, c) in f.coeffs.range(..hi) {
            let r = c.nonzero_rational().expect("rational coefficient");
            den = den.lcm(r.denom());
        }
        let len = (hi - f.lo).max(0) as usize;
        let mut nums = vec![BigInt::zero(); len];
        let mut support = Vec::new();
        for (a, c) in f.coeffs.range(..hi) {
            let r = c.nonzero_rational().unwrap();
            let i = (a - f.lo) as usize;
            nums[i] = r.numer() * (&den / r.denom());
            support.push(i);
        }
        ScaledDense {
            offset: f.lo,
            nums,
            support,
            den,
        }
    }
}

fn mul_rational(f: &QExp, g: &QExp, lo: i64, hi: i64) -> BTreeMap<i64, Cyc> {
    let fd = ScaledDense::new(f, hi - g.lo);
    let gd = ScaledDense::new(g, hi - f.lo);
    let n = (hi - lo) as usize;
    let pairs = fd.support.len().saturating_mul(gd.support.len());
    let acc = if pairs > 2_000_000 {
        intpoly::mul_truncated(&fd.nums, &gd.nums, n)
    } else {
        let mut acc = vec![BigInt::zero(); n];
        for &i in &fd.support {
            for &j in &gd.support {
                if i + j >= n {
                    break;
                }
                acc[i + j] += &fd.nums[i] * &gd.nums[j];
            }
        }
        acc
    };
    let den = &fd.den * &gd.den;
    acc.into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (fd.offset + gd.offset + i as i64, Cyc::from_rational(Rational::new(c, den.clone()))))
        .collect()
}

/// Anything the lift can read coefficients from.
pub trait CoefficientSource {
    fn exponent_denominator(&self) -> u64;
    fn window(&self) -> (i64, i64);
    fn weight(&self) -> Weight;
    /// Coefficient at numerator `a`, which must lie below the window top.
    fn coefficient(&self, a: i64) -> Cyc;
    /// Residues mod 4 that can carry nonzero coefficients (integer exponents).
    fn residues_mod4(&self) -> Result<[bool; 4], SeriesError>;
}

impl CoefficientSource for QExp {
    fn exponent_denominator(&self) -> u64 {
        self.w
    }
    fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }
    fn weight(&self) -> Weight {
        self.weight
    }
    fn coefficient(&self, a: i64) -> Cyc {
        assert!(a < self.hi, "coefficient {a} beyond window top {}", self.hi);
        self.coeffs.get(&a).cloned().unwrap_or_else(Cyc::zero)
    }
    fn residues_mod4(&self) -> Result<[bool; 4], SeriesError> {
        QExp::residues_mod4(self)
    }
}

/// Rational factor stored by denominator class for the lazy product.
#[derive(Clone)]
struct GroupedFactor {
    lo: i64,
    nums: Vec<BigInt>,
    class: Vec<u16>,
    dens: Vec<BigInt>,
    support: Vec<i64>,
}

impl GroupedFactor {
    fn new(f: &QExp) -> Option<GroupedFactor> {
        let len = (f.hi - f.lo) as usize;
        let mut nums = vec![BigInt::zero(); len];
        let mut class = vec![0u16; len];
        let mut dens: Vec<BigInt> = Vec::new();
        let mut support = Vec::with_capacity(f.coeffs.len());
        for (a, c) in &f.coeffs {
            let r = c.nonzero_rational()?;
            let k = match dens.iter().position(|d| d == r.denom()) {
                Some(k) => k,
                None => {
                    if dens.len() == u16::MAX as usize {
                        return None;
                    }
                    dens.push(r.denom().clone());
                    dens.len() - 1
                }
            };
            let i = (a - f.lo) as usize;
            nums[i] = r.numer().clone();
            class[i] = k as u16;
            support.push(*a);
        }
        Some(GroupedFactor {
            lo: f.lo,
            nums,
            class,
            dens,
            support,
        })
    }

    fn at(&self, a: i64) -> Option<(&BigInt, u16)> {
        let i = a - self.lo;
        if i < 0 || i as usize >= self.nums.len() {
            return None;
        }
        let n = &self.nums[i as usize];
        (!n.is_zero()).then(|| (n, self.class[i as usize]))
    }
}

/// A product `f·g` whose coefficients are computed only when asked for.
///
/// Meant for products whose full expansion would be far more expensive than
/// the handful of coefficients a lift reads.
#[derive(Clone)]
pub struct ProductView {
    f: QExp,
    g: QExp,
    lo: i64,
    hi: i64,
    weight: Weight,
    grouped: Option<(GroupedFactor, GroupedFactor)>,
}

impl ProductView {
    pub fn new(f: &QExp, g: &QExp) -> ProductView {
        let (f, g) = QExp::common(f, g);
        let (lo, hi) = QExp::product_window(&f, &g);
        let grouped = if f.is_rational() && g.is_rational() {
            GroupedFactor::new(&f).zip(GroupedFactor::new(&g))
        } else {
            None
        };
        ProductView {
            weight: f.weight.plus(g.weight),
            f,
            g,
            lo,
            hi,
            grouped,
        }
    }

    pub fn factors(&self) -> (&QExp, &QExp) {
        (&self.f, &self.g)
    }

    /// Full expansion on `[lo, min(hi, top))`.
    pub fn materialize(&self, top: i64) -> QExp {
        let hi = self.hi.min(top).max(self.lo);
        QExp::mul(&self.f.truncate(hi - self.g.lo), &self.g.truncate(hi - self.f.lo)).truncate(hi)
    }

    fn coefficient_grouped(&self, a: i64, fg: &GroupedFactor, gg: &GroupedFactor) -> Cyc {
        // iterate over whichever factor has fewer terms in range
        let f_range = range_count(&fg.support, fg.lo, a - gg.lo);
        let g_range = range_count(&gg.support, gg.lo, a - fg.lo);
        let (outer, inner, outer_range) = if f_range.len() <= g_range.len() {
            (fg, gg, f_range)
        } else {
            (gg, fg, g_range)
        };
        let ni = inner.dens.len();
        let mut acc: Vec<BigInt> = vec![BigInt::zero(); outer.dens.len() * ni];
        for &b in &outer.support[outer_range] {
            let i = b - outer.lo;
            let (x, cx) = (&outer.nums[i as usize], outer.class[i as usize]);
            if let Some((y, cy)) = inner.at(a - b) {
                acc[cx as usize * ni + cy as usize] += x * y;
            }
        }
        let mut total = Rational::zero();
        for (k, s) in acc.into_iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let d = &outer.dens[k / ni] * &inner.dens[k % ni];
            total += Rational::new(s, d);
        }
        Cyc::from_rational(total)
    }
}

/// Index range of `support` (sorted) holding values in `[from, to]`.
fn range_count(support: &[i64], from: i64, to: i64) -> std::ops::Range<usize> {
    let s = support.partition_point(|&x| x < from);
    let e = support.partition_point(|&x| x <= to);
    s..e.max(s)
}

impl CoefficientSource for ProductView {
    fn exponent_denominator(&self) -> u64 {
        self.f.w
    }
    fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }
    fn weight(&self) -> Weight {
        self.weight
    }
    fn coefficient(&self, a: i64) -> Cyc {
        assert!(a < self.hi, "coefficient {a} beyond window top {}", self.hi);
        if a < self.lo {
            return Cyc::zero();
        }
        if let Some((fg, gg)) = &self.grouped {
            return self.coefficient_grouped(a, fg, gg);
        }
        let mut acc = Cyc::zero();
        for (b, x) in self.f.coeffs.range(..=a - self.g.lo) {
            if let Some(y) = self.g.coeffs.get(&(a - b)) {
                acc = &acc + &(x * y);
            }
        }
        acc
    }
    fn residues_mod4(&self) -> Result<[bool; 4], SeriesError> {
        let rf = self.f.residues_mod4()?;
        let rg = self.g.residues_mod4()?;
        let mut out = [false; 4];
        for i in 0..4 {
            for j in 0..4 {
                if rf[i] && rg[j] {
                    out[(i + j) % 4] = true;
                }
            }
        }
        Ok(out)
    }
}

/// Input to a lift: an explicit series or a lazy product.
#[derive(Clone)]
pub enum LiftInput {
    Series(QExp),
    Product(ProductView),
}

impl LiftInput {
    /// Explicit expansion on `[lo, min(hi, top))`.
    pub fn materialize(&self, top: i64) -> QExp {
        match self {
            LiftInput::Series(f) => f.truncate(top),
            LiftInput::Product(p) => p.materialize(top),
        }
    }
}

impl From<QExp> for LiftInput {
    fn from(f: QExp) -> Self {
        LiftInput::Series(f)
    }
}

impl From<ProductView> for LiftInput {
    fn from(p: ProductView) -> Self {
        LiftInput::Product(p)
    }
}

impl CoefficientSource for LiftInput {
    fn exponent_denominator(&self) -> u64 {
        match self {
            LiftInput::Series(f) => f.w,
            LiftInput::Product(p) => p.exponent_denominator(),
        }
    }
    fn window(&self) -> (i64, i64) {
        match self {
            LiftInput::Series(f) => (f.lo, f.hi),
            LiftInput::Product(p) => p.window(),
        }
    }
    fn weight(&self) -> Weight {
        match self {
            LiftInput::Series(f) => f.weight,
            LiftInput::Product(p) => p.weight(),
        }
    }
    fn coefficient(&self, a: i64) -> Cyc {
        match self {
            LiftInput::Series(f) => CoefficientSource::coefficient(f, a),
            LiftInput::Product(p) => p.coefficient(a),
        }
    }
    fn residues_mod4(&self) -> Result<[bool; 4], SeriesError> {
        match self {
            LiftInput::Series(f) => f.residues_mod4(),
            LiftInput::Product(p) => p.residues_mod4(),
        }
    }
}
