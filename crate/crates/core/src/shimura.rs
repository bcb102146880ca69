//! Shimura lifts of half-integral weight q-expansions: diamond orbits, the
//! lifts `S_1`, `S_t` (square-free `t`) and `S_{ts²}` at level `MN`, the
//! level-change identity, the level predictor and the correction used when
//! neither plus-space hypothesis holds at odd level.
//!
//! Coefficient of `q^l`, `l ≥ 1`, at level `L` and index `T`:
//! `Σ_{d | l, (d, LT) = 1} d^{k-1} (εT/d) c^{(d)}_{T l²/d²}`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::characters::{make_character, CharacterError, CharacterSpec, DirichletCharacter};
use crate::qseries::{CoefficientSource, LiftInput, QExp, SeriesError, Weight};
use crate::scalars::{gcd, is_square_free, kronecker, lcm, partial_zeta_neg, prime_divisors, rational, Cyc, Rational, ScalarError};

/// Sign applied to every constant term. The plain formula `-Σ ζ c_0 / 2`
/// disagrees with the q-coefficients on both level-one fixtures: `S_1 H_{5/2}`
/// has `q`-coefficient `H(2,1) = -1/12`, forcing `-E_4/2880`, while the formula
/// gives `+1/2880`; likewise `θ·E_4(4τ)` forces `+E_8/240` against `-1/240`.
pub const CONSTANT_SIGN: i32 = -1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShimuraError {
    #[error("insufficient input precision: coefficients on [0, {required}] are needed, the input is known below {available}")]
    Precision { required: i64, available: i64 },
    #[error("input weight {got} does not match k + 1/2 = {expected}")]
    Weight { expected: Weight, got: Weight },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("t = {0} is not square-free; the general lift handles t·s²")]
    NotSquareFree(u64),
    #[error(
        "level case (vi): t = {t} ≡ 2 mod 4 with 4 ∤ N = {n}; f(tτ) lies in no plus space at level Nt, \
         so the square-free lift is not available (the general lift has level 2N)"
    )]
    RescalingObstruction { t: u64, n: u64 },
    #[error("for odd t = {t} and 4 ∤ N the plus-space sign must be (-1/t) = {expected}, got {got}")]
    EpsilonMismatch { t: u64, expected: i32, got: i32 },
    #[error("input is not in the plus space for eps = {eps}: residue {residue} mod 4 occurs")]
    NotPlusSpace { eps: i32, residue: u8 },
    #[error("input exponents are not integral (denominator {0})")]
    Fractional(u64),
    #[error("{d} is not a unit modulo {n}")]
    NonUnit { d: i64, n: u64 },
    #[error("explicit diamond orbit has no series for d = {0}")]
    MissingOrbit(u64),
    #[error("diamond orbit modulus {modulus} does not divide the level {level}")]
    OrbitModulus { modulus: u64, level: u64 },
    #[error("{0}")]
    NotCovered(String),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// The family `c^{(d)}` of expansions of `⟨d⟩f`.
#[derive(Clone, Debug, PartialEq)]
pub enum DiamondOrbit {
    /// `⟨d⟩f = χ(d) f`.
    Character(DirichletCharacter),
    /// Caller-supplied `⟨d⟩f` for every unit `d` modulo `modulus`.
    Explicit { modulus: u64, series: BTreeMap<u64, QExp> },
}

impl DiamondOrbit {
    pub fn trivial() -> DiamondOrbit {
        DiamondOrbit::Character(DirichletCharacter::trivial(1))
    }

    pub fn modulus(&self) -> u64 {
        match self {
            DiamondOrbit::Character(chi) => chi.modulus(),
            DiamondOrbit::Explicit { modulus, .. } => *modulus,
        }
    }

    fn check(&self) -> Result<(), ShimuraError> {
        if let DiamondOrbit::Explicit { modulus, series } = self {
            for d in (1..=*modulus).filter(|&d| gcd(d, *modulus) == 1) {
                if !series.contains_key(&(d % modulus)) {
                    return Err(ShimuraError::MissingOrbit(d));
                }
            }
        }
        Ok(())
    }

    /// The orbit of `⟨p⟩f` together with a scalar: for character orbits the
    /// orbit is unchanged and the scalar is `χ(p)`.
    fn shifted(&self, p: u64) -> Result<(DiamondOrbit, Cyc), ShimuraError> {
        match self {
            DiamondOrbit::Character(chi) => {
                if !chi.is_unit(p as i64) {
                    return Err(ShimuraError::NonUnit { d: p as i64, n: chi.modulus() });
                }
                Ok((self.clone(), chi.value(p as i64)))
            }
            DiamondOrbit::Explicit { modulus, series } => {
                let m = *modulus;
                if gcd(p, m) != 1 {
                    return Err(ShimuraError::NonUnit { d: p as i64, n: m });
                }
                let mut out = BTreeMap::new();
                for &d in series.keys() {
                    let src = series.get(&((d * p) % m)).ok_or(ShimuraError::MissingOrbit((d * p) % m))?;
                    out.insert(d, src.clone());
                }
                Ok((DiamondOrbit::Explicit { modulus: m, series: out }, Cyc::one()))
            }
        }
    }

    /// Orbit for the opposite sign: `c^{(d)}` times `(-1/d)`.
    pub fn switch_epsilon(&self) -> Result<DiamondOrbit, ShimuraError> {
        match self {
            DiamondOrbit::Character(chi) => {
                let m = lcm(chi.modulus(), 4);
                let minus = make_character(m, CharacterSpec::Kronecker(-4))?;
                Ok(DiamondOrbit::Character(chi.induce(m)?.product(&minus)))
            }
            DiamondOrbit::Explicit { modulus, series } => {
                if modulus % 4 != 0 {
                    return Err(ShimuraError::Parameter(format!(
                        "(-1/d) is not defined modulo {modulus}; switching the sign needs 4 | N"
                    )));
                }
                let series = series
                    .iter()
                    .map(|(&d, f)| (d, f.scale_rational(&Rational::from_integer(kronecker(-1, d as i64).unwrap().into()))))
                    .collect();
                Ok(DiamondOrbit::Explicit { modulus: *modulus, series })
            }
        }
    }

    fn to_json(&self) -> Value {
        match self {
            DiamondOrbit::Character(chi) => json!({ "character": chi }),
            DiamondOrbit::Explicit { modulus, series } => json!({
                "explicit": {
                    "modulus": modulus,
                    "series": series.iter().map(|(d, f)| json!([d, f.to_json()])).collect::<Vec<_>>(),
                }
            }),
        }
    }

    fn from_json(v: &Value) -> Result<DiamondOrbit, ShimuraError> {
        let bad = |m: &str| ShimuraError::Series(SeriesError::Malformed(m.to_string()));
        if let Some(c) = v.get("character") {
            let chi: DirichletCharacter = serde_json::from_value(c.clone()).map_err(|e| bad(&e.to_string()))?;
            return Ok(DiamondOrbit::Character(chi));
        }
        let e = v.get("explicit").ok_or_else(|| bad("orbit needs 'character' or 'explicit'"))?;
        let modulus = e.get("modulus").and_then(Value::as_u64).ok_or_else(|| bad("orbit modulus"))?;
        let mut series = BTreeMap::new();
        for item in e.get("series").and_then(Value::as_array).ok_or_else(|| bad("orbit series"))? {
            let d = item.get(0).and_then(Value::as_u64).ok_or_else(|| bad("orbit key"))?;
            let f = QExp::from_json(item.get(1).ok_or_else(|| bad("orbit entry"))?)?;
            series.insert(d, f);
        }
        Ok(DiamondOrbit::Explicit { modulus, series })
    }
}

/// `⟨d⟩f` for a unit `d` modulo the orbit modulus.
pub fn diamond(f: &QExp, orbit: &DiamondOrbit, d: i64) -> Result<QExp, ShimuraError> {
    let m = orbit.modulus();
    if gcd(d.rem_euclid(m as i64) as u64, m) != 1 {
        return Err(ShimuraError::NonUnit { d, n: m });
    }
    match orbit {
        DiamondOrbit::Character(chi) => Ok(f.scale(&chi.value(d))),
        DiamondOrbit::Explicit { series, .. } => {
            let key = d.rem_euclid(m as i64) as u64;
            series.get(&key).cloned().ok_or(ShimuraError::MissingOrbit(key))
        }
    }
}

/// All parameters of a lift `S_{ts²}^{(MN)} f` with output `q^0 … q^prec`.
pub struct LiftRequest {
    pub f: LiftInput,
    pub orbit: DiamondOrbit,
    pub n: u64,
    pub k: u32,
    pub t: u64,
    pub s: u64,
    pub m: u64,
    pub epsilon: i32,
    pub plus_space: bool,
    pub constant_sign: i32,
    pub prec: u64,
}

impl LiftRequest {
    /// Level-`N`, index-1 request with a trivial orbit and the default sign.
    pub fn new(f: impl Into<LiftInput>, n: u64, k: u32, prec: u64) -> LiftRequest {
        LiftRequest {
            f: f.into(),
            orbit: DiamondOrbit::Character(DirichletCharacter::trivial(n.max(1))),
            n,
            k,
            t: 1,
            s: 1,
            m: 1,
            epsilon: 1,
            plus_space: true,
            constant_sign: CONSTANT_SIGN,
            prec,
        }
    }

    pub fn with_index(mut self, t: u64, s: u64) -> LiftRequest {
        self.t = t;
        self.s = s;
        self
    }

    pub fn with_level_factor(mut self, m: u64) -> LiftRequest {
        self.m = m;
        self
    }

    pub fn with_epsilon(mut self, eps: i32) -> LiftRequest {
        self.epsilon = eps;
        self
    }

    pub fn with_orbit(mut self, orbit: DiamondOrbit) -> LiftRequest {
        self.orbit = orbit;
        self
    }

    pub fn level(&self) -> u64 {
        self.m * self.n
    }

    /// Largest input index read: `t s² prec²`.
    pub fn required_input(&self) -> i64 {
        (self.t * self.s * self.s * self.prec * self.prec) as i64
    }

    /// JSON mirror of the fields; lazy inputs are expanded on their window.
    pub fn to_json(&self) -> Value {
        let (_, hi) = self.f.window();
        json!({
            "f": self.f.materialize(hi).to_json(),
            "orbit": self.orbit.to_json(),
            "N": self.n,
            "k": self.k,
            "t": self.t,
            "s": self.s,
            "M": self.m,
            "epsilon": self.epsilon,
            "plus_space": self.plus_space,
            "constant_sign": self.constant_sign,
            "prec": self.prec,
        })
    }

    pub fn from_json(v: &Value) -> Result<LiftRequest, ShimuraError> {
        let bad = |m: &str| ShimuraError::Series(SeriesError::Malformed(m.to_string()));
        let u = |key: &str| v.get(key).and_then(Value::as_u64).ok_or_else(|| bad(key));
        let i = |key: &str| v.get(key).and_then(Value::as_i64).ok_or_else(|| bad(key));
        Ok(LiftRequest {
            f: QExp::from_json(v.get("f").ok_or_else(|| bad("f"))?)?.into(),
            orbit: DiamondOrbit::from_json(v.get("orbit").ok_or_else(|| bad("orbit"))?)?,
            n: u("N")?,
            k: u("k")? as u32,
            t: u("t")?,
            s: u("s")?,
            m: u("M")?,
            epsilon: i("epsilon")? as i32,
            plus_space: v.get("plus_space").and_then(Value::as_bool).ok_or_else(|| bad("plus_space"))?,
            constant_sign: i("constant_sign")? as i32,
            prec: u("prec")?,
        })
    }
}

/// How the constant term is assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ConstantRecipe {
    /// Double sum over `d` mod `L` and `m` mod `t` with `ζ_{Lt}`.
    SquareFree,
    /// Single sum over `h` mod `4LT` with `ζ_{4LT}`.
    Extended,
}

/// Weights `w_d` (d a unit mod `level`) with constant term `-Σ w_d c_0^{(d)}`
/// for the square-free recipe.
pub fn square_free_constant_weights(level: u64, t: u64, eps: i32, k: u32) -> Result<BTreeMap<u64, Rational>, ShimuraError> {
    let lt = level * t;
    let mut out = BTreeMap::new();
    for d in (1..=level).filter(|&d| gcd(d, level) == 1) {
        let mut acc = Rational::zero();
        for m in 0..t {
            let h = d + level * m;
            if gcd(h, t) != 1 {
                continue;
            }
            let kr = kronecker(eps as i64 * t as i64, h as i64)?;
            if kr != 0 {
                acc += partial_zeta_neg(lt, h as i64, k)? * Rational::from_integer(kr.into());
            }
        }
        out.insert(d % level, acc / rational(2, 1));
    }
    Ok(prune(out))
}

/// Weights for the extended recipe with modulus `4LT`, keyed by `h mod level`.
pub fn extended_constant_weights(level: u64, big_t: u64, eps: i32, k: u32) -> Result<BTreeMap<u64, Rational>, ShimuraError> {
    let modulus = 4 * level * big_t;
    let mut out: BTreeMap<u64, Rational> = BTreeMap::new();
    for h in (1..=modulus).filter(|&h| gcd(h, level * big_t) == 1) {
        let kr = kronecker(eps as i64 * big_t as i64, h as i64)?;
        if kr == 0 {
            continue;
        }
        let z = partial_zeta_neg(modulus, h as i64, k)? * Rational::from_integer(kr.into()) / rational(2, 1);
        *out.entry(h % level).or_insert_with(Rational::zero) += z;
    }
    Ok(prune(out))
}

/// True when `h ↦ (a/h)` is periodic modulo `p` on positive integers.
pub fn kronecker_periodic(a: i64, p: u64) -> bool {
    let span = lcm(p, 4 * a.unsigned_abs().max(1));
    (1..=span).all(|h| kronecker(a, h as i64).unwrap() == kronecker(a, (h + p) as i64).unwrap())
}

/// The short form of the square-free weights, available when `(εt/·)` is
/// periodic modulo `level` (weights `(εt/d) ζ_N^{(d)}/2`), or, for even `t`
/// and `level ≡ 4 mod 8`, modulo `2·level` (weights
/// `(εt/d)(ζ_{2N}^{(d)} - ζ_{2N}^{(d+N)})/2`). `None` elsewhere.
pub fn simplified_constant_weights(level: u64, t: u64, eps: i32, k: u32) -> Result<Option<BTreeMap<u64, Rational>>, ShimuraError> {
    let a = eps as i64 * t as i64;
    let mut out = BTreeMap::new();
    if kronecker_periodic(a, level) {
        for d in (1..=level).filter(|&d| gcd(d, level) == 1) {
            let kr = kronecker(a, d as i64)?;
            out.insert(d % level, partial_zeta_neg(level, d as i64, k)? * Rational::from_integer(kr.into()) / rational(2, 1));
        }
    } else if t % 2 == 0 && level % 8 == 4 && kronecker_periodic(a, 2 * level) {
        for d in (1..=level).filter(|&d| gcd(d, level) == 1) {
            let kr = kronecker(a, d as i64)?;
            let diff = partial_zeta_neg(2 * level, d as i64, k)? - partial_zeta_neg(2 * level, (d + level) as i64, k)?;
            out.insert(d % level, diff * Rational::from_integer(kr.into()) / rational(2, 1));
        }
    } else {
        return Ok(None);
    }
    Ok(Some(prune(out)))
}

fn prune(m: BTreeMap<u64, Rational>) -> BTreeMap<u64, Rational> {
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Reads `c^{(d)}_n`, caching base coefficients of lazy inputs.
struct Reader<'a> {
    f: &'a LiftInput,
    orbit: &'a DiamondOrbit,
    cache: RefCell<HashMap<i64, Cyc>>,
}

impl<'a> Reader<'a> {
    fn new(f: &'a LiftInput, orbit: &'a DiamondOrbit) -> Self {
        Reader {
            f,
            orbit,
            cache: RefCell::new(HashMap::new()),
        }
    }

    fn base(&self, n: i64) -> Cyc {
        if n < self.f.window().0 {
            return Cyc::zero();
        }
        if let Some(c) = self.cache.borrow().get(&n) {
            return c.clone();
        }
        let c = self.f.coefficient(n);
        self.cache.borrow_mut().insert(n, c.clone());
        c
    }

    fn c(&self, d: u64, n: i64) -> Cyc {
        match self.orbit {
            DiamondOrbit::Character(chi) => {
                let v = chi.value(d as i64);
                if v.is_zero() {
                    return v;
                }
                let b = self.base(n);
                if v.is_one() {
                    b
                } else {
                    &b * &v
                }
            }
            DiamondOrbit::Explicit { modulus, series } => {
                let g = &series[&(d % modulus)];
                if n < g.window().0 {
                    Cyc::zero()
                } else {
                    CoefficientSource::coefficient(g, n)
                }
            }
        }
    }
}

/// Validated parameters shared by every lift.
struct Core<'a> {
    f: &'a LiftInput,
    orbit: &'a DiamondOrbit,
    level: u64,
    big_t: u64,
    k: u32,
    eps: i32,
    sigma: i32,
    prec: u64,
}

fn check_input(f: &LiftInput, orbit: &DiamondOrbit, level: u64, k: u32, required: i64) -> Result<(), ShimuraError> {
    if level == 0 {
        return Err(ShimuraError::Parameter("N and M must be positive".into()));
    }
    if k == 0 {
        return Err(ShimuraError::Parameter("k must be at least 1 (weight 1/2 input has no lift of weight 0 here)".into()));
    }
    orbit.check()?;
    if level % orbit.modulus() != 0 {
        return Err(ShimuraError::OrbitModulus { modulus: orbit.modulus(), level });
    }
    let is_zero = matches!(f, LiftInput::Series(g) if g.is_zero());
    let expected = Weight::half_integral(k as i64);
    if !is_zero && f.weight() != expected {
        return Err(ShimuraError::Weight { expected, got: f.weight() });
    }
    let mut windows = vec![(f.exponent_denominator(), f.window(), is_zero)];
    if let DiamondOrbit::Explicit { series, .. } = orbit {
        windows.extend(series.values().map(|g| (g.exponent_denominator(), g.window(), g.is_zero())));
    }
    for (w, (_, hi), zero) in windows {
        if w != 1 && !zero {
            return Err(ShimuraError::Fractional(w));
        }
        if hi <= required {
            return Err(ShimuraError::Precision { required, available: hi });
        }
    }
    Ok(())
}

impl Core<'_> {
    fn compute(&self, recipe: ConstantRecipe) -> Result<QExp, ShimuraError> {
        let reader = Reader::new(self.f, self.orbit);
        let lt = self.level * self.big_t;
        let et = self.eps as i64 * self.big_t as i64;
        let mut coeffs: Vec<(i64, Cyc)> = Vec::with_capacity(self.prec as usize + 1);

        let weights = match recipe {
            ConstantRecipe::SquareFree => square_free_constant_weights(self.level, self.big_t, self.eps, self.k)?,
            ConstantRecipe::Extended => extended_constant_weights(self.level, self.big_t, self.eps, self.k)?,
        };
        let mut c0 = Cyc::zero();
        for (&d, w) in &weights {
            c0 = &c0 + &reader.c(d, 0).scale(w);
        }
        coeffs.push((0, c0.scale_int(-(self.sigma as i64))));

        let dk: Vec<Rational> = (0..=self.prec)
            .map(|d| {
                if d == 0 {
                    Rational::zero()
                } else {
                    num_traits::pow(Rational::from_integer(d.into()), self.k as usize - 1)
                }
            })
            .collect();
        for l in 1..=self.prec {
            let mut acc = Cyc::zero();
            for d in divisors(l) {
                if gcd(d, lt) != 1 {
                    continue;
                }
                let kr = kronecker(et, d as i64)?;
                if kr == 0 {
                    continue;
                }
                let r = l / d;
                let n = (self.big_t * r * r) as i64;
                let c = reader.c(d % self.level, n);
                if c.is_zero() {
                    continue;
                }
                acc = &acc + &c.scale(&(&dk[d as usize] * Rational::from_integer(kr.into())));
            }
            coeffs.push((l as i64, acc));
        }
        Ok(QExp::from_coefficients(1, 0, self.prec as i64 + 1, Weight::integral(2 * self.k as i64), coeffs))
    }
}

fn core<'a>(req: &'a LiftRequest, orbit: &'a DiamondOrbit, level: u64, big_t: u64) -> Result<Core<'a>, ShimuraError> {
    if req.epsilon.abs() != 1 || req.constant_sign.abs() != 1 {
        return Err(ShimuraError::Parameter("epsilon and the constant sign must be +1 or -1".into()));
    }
    if big_t == 0 || req.s == 0 || req.t == 0 {
        return Err(ShimuraError::Parameter("t and s must be positive".into()));
    }
    check_input(&req.f, orbit, level, req.k, (big_t * req.prec * req.prec) as i64)?;
    Ok(Core {
        f: &req.f,
        orbit,
        level,
        big_t,
        k: req.k,
        eps: req.epsilon,
        sigma: req.constant_sign,
        prec: req.prec,
    })
}

/// Residues mod 4 carrying coefficients, across the whole orbit.
fn support_mod4(req: &LiftRequest) -> Result<[bool; 4], ShimuraError> {
    let mut r = req.f.residues_mod4()?;
    if let DiamondOrbit::Explicit { series, .. } = &req.orbit {
        for g in series.values() {
            let x = g.residues_mod4()?;
            for i in 0..4 {
                r[i] |= x[i];
            }
        }
    }
    Ok(r)
}

/// Whether the input lies in the plus space for `eps`, judged from the
/// residues of its support.
pub fn in_plus_space(req: &LiftRequest, eps: i32) -> Result<bool, ShimuraError> {
    let r = support_mod4(req)?;
    let bad = if eps == 1 { [2usize, 3] } else { [1, 2] };
    Ok(!bad.iter().any(|&i| r[i]))
}

/// Hypotheses of the square-free lift at level `level`.
fn square_free_hypotheses(req: &LiftRequest, level: u64, t: u64) -> Result<(), ShimuraError> {
    if !is_square_free(t) {
        return Err(ShimuraError::NotSquareFree(t));
    }
    if level % 4 == 0 {
        return Ok(());
    }
    if t % 2 == 0 {
        return Err(ShimuraError::RescalingObstruction { t, n: level });
    }
    let expected = kronecker(-1, t as i64)?;
    if req.epsilon != expected {
        return Err(ShimuraError::EpsilonMismatch { t, expected, got: req.epsilon });
    }
    let r = support_mod4(req)?;
    let residue = if req.epsilon == 1 { [2u8, 3] } else { [1, 2] }.into_iter().find(|&i| r[i as usize]);
    if let Some(residue) = residue {
        return Err(ShimuraError::NotPlusSpace { eps: req.epsilon, residue });
    }
    Ok(())
}

/// `S_1^{(MN)} f`.
pub fn shimura_s1(req: &LiftRequest) -> Result<QExp, ShimuraError> {
    if req.t != 1 || req.s != 1 {
        return Err(ShimuraError::Parameter("S_1 needs t = s = 1".into()));
    }
    shimura_st(req)
}

/// `S_t^{(MN)} f` for square-free `t` with the hypotheses checked.
pub fn shimura_st(req: &LiftRequest) -> Result<QExp, ShimuraError> {
    if req.s != 1 {
        return Err(ShimuraError::Parameter("the square-free lift needs s = 1".into()));
    }
    let level = req.level();
    square_free_hypotheses(req, level, req.t)?;
    core(req, &req.orbit, level, req.t)?.compute(ConstantRecipe::SquareFree)
}

/// `S_{ts²}^{(MN)} f` from the formula for arbitrary index, with the constant
/// term summed modulo `4·MN·ts²`. No plus-space hypothesis is required.
pub fn shimura_general(req: &LiftRequest) -> Result<QExp, ShimuraError> {
    let big_t = req.t * req.s * req.s;
    core(req, &req.orbit, req.level(), big_t)?.compute(ConstantRecipe::Extended)
}

/// `T = t s²` with `t` square-free.
pub fn square_free_split(big_t: u64) -> (u64, u64) {
    let mut t = 1;
    let mut s = 1;
    for p in prime_divisors(big_t) {
        let mut e = 0;
        let mut m = big_t;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e % 2 == 1 {
            t *= p;
        }
        s *= p.pow(e / 2);
    }
    (t, s)
}

/// Routes to the square-free lift when `t s²` is square-free and to the
/// general lift otherwise.
pub fn lift(req: &LiftRequest) -> Result<QExp, ShimuraError> {
    if req.t == 0 || req.s == 0 {
        return Err(ShimuraError::Parameter("t and s must be positive".into()));
    }
    let (t, s) = square_free_split(req.t * req.s * req.s);
    if s == 1 {
        let level = req.level();
        square_free_hypotheses(req, level, t)?;
        core(req, &req.orbit, level, t)?.compute(ConstantRecipe::SquareFree)
    } else {
        shimura_general(req)
    }
}

fn subsets(primes: &[u64]) -> Vec<Vec<u64>> {
    (0..1usize << primes.len())
        .map(|mask| primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect())
        .collect()
}

/// `Σ_{J ⊆ I} (-1)^{|J|} p_J^{k-1} (εt/p_J) · (S_t^{(N)} ⟨p_J⟩f)(p_J τ)` where
/// `I` holds the primes of `M` not dividing `Nt`. This is the right-hand side
/// of the level-change identity for `S_t^{(MN)} f`, with the weight-`2k` slash
/// by `diag(√p, 1/√p)` written as `F ↦ p^k F(pτ)`.
pub fn level_change_rhs(req: &LiftRequest) -> Result<QExp, ShimuraError> {
    let big_t = req.t * req.s * req.s;
    let i_set: Vec<u64> = prime_divisors(req.m).into_iter().filter(|p| (req.n * big_t) % p != 0).collect();
    let base_level = req.n;
    let mut total: Option<QExp> = None;
    for j in subsets(&i_set) {
        let pj: u64 = j.iter().product();
        let (orbit, scalar) = req.orbit.shifted(pj)?;
        let sub = core(req, &orbit, base_level, big_t)?;
        let recipe = if big_t == req.t && req.s == 1 {
            square_free_hypotheses(req, base_level, req.t)?;
            ConstantRecipe::SquareFree
        } else {
            ConstantRecipe::Extended
        };
        let lifted = sub.compute(recipe)?;
        let kr = kronecker(req.epsilon as i64 * big_t as i64, pj as i64)?;
        let sign = if j.len() % 2 == 0 { 1 } else { -1 };
        let factor = num_traits::pow(Rational::from_integer(pj.into()), req.k as usize - 1) * Rational::from_integer((sign * kr).into());
        let term = lifted.scale(&scalar.scale(&factor)).rescale(pj).truncate(req.prec as i64 + 1);
        total = Some(match total {
            None => term,
            Some(acc) => acc.add_unchecked(&term),
        });
    }
    Ok(total.expect("J = ∅ always contributes").with_metadata(Default::default()))
}

/// Case labels (i)–(viii) of the level prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LevelCase {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "iv")]
    IV,
    #[serde(rename = "v")]
    V,
    #[serde(rename = "vi")]
    VI,
    #[serde(rename = "vii")]
    VII,
    #[serde(rename = "viii")]
    VIII,
}

impl fmt::Display for LevelCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LevelCase::I => "i",
            LevelCase::II => "ii",
            LevelCase::III => "iii",
            LevelCase::IV => "iv",
            LevelCase::V => "v",
            LevelCase::VI => "vi",
            LevelCase::VII => "vii",
            LevelCase::VIII => "viii",
        };
        write!(f, "({s})")
    }
}

/// `level = factor · p_J · lcm(N, s)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelVerdict {
    pub case: LevelCase,
    pub level: u64,
    pub needs_correction: bool,
    pub p_j: u64,
    pub lcm_ns: u64,
    pub factor: u64,
}

/// What is known about the input beyond `N, t, s, M`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LevelFlags {
    /// `t` odd and `f` in the plus space for `ε = (-1/t)`.
    pub plus_space_matching: bool,
    /// `f` lies in one of the two `ψ^ε` subspaces.
    pub psi_subspace_known: bool,
}

impl LevelFlags {
    /// Flags implied by a request: plus-space membership from the support,
    /// and the `ψ^ε` subspace whenever the orbit is a character.
    pub fn from_request(req: &LiftRequest) -> Result<LevelFlags, ShimuraError> {
        let (t, _) = square_free_split(req.t * req.s * req.s);
        let matching = t % 2 == 1 && req.epsilon == kronecker(-1, t as i64)? && in_plus_space(req, req.epsilon)?;
        Ok(LevelFlags {
            plus_space_matching: matching,
            psi_subspace_known: matches!(req.orbit, DiamondOrbit::Character(_)),
        })
    }
}

/// Level of `S_{ts²}^{(MN)} f` by the first matching case.
pub fn predict_level(n: u64, t: u64, s: u64, m: u64, flags: LevelFlags) -> Result<LevelVerdict, ShimuraError> {
    if n == 0 || t == 0 || s == 0 || m == 0 {
        return Err(ShimuraError::Parameter("N, t, s, M must be positive".into()));
    }
    if !is_square_free(t) {
        return Err(ShimuraError::NotSquareFree(t));
    }
    let odd = |x: u64| x % 2 == 1;
    let i_set: Vec<u64> = prime_divisors(m).into_iter().filter(|p| (n * t) % p != 0).collect();
    let p_j: u64 = i_set.iter().filter(|&&p| s % p != 0).product();
    let lcm_ns = lcm(n, s);
    let case_i = odd(t) && flags.plus_space_matching;
    let case = if case_i {
        LevelCase::I
    } else if n % 4 == 0 {
        LevelCase::II
    } else if odd(n * t) && !odd(m) {
        LevelCase::III
    } else if s % 4 == 0 {
        LevelCase::IV
    } else if odd(n) && !odd(s) {
        LevelCase::V
    } else if odd(n * s) && !odd(t) {
        LevelCase::VI
    } else if n % 4 == 2 && s % 4 != 0 {
        LevelCase::VII
    } else if odd(m * n * s * t) {
        if !flags.psi_subspace_known {
            return Err(ShimuraError::NotCovered(
                "level case (viii) needs f inside one psi^eps subspace; decompose f into its two components first".into(),
            ));
        }
        LevelCase::VIII
    } else {
        return Err(ShimuraError::NotCovered("no case of the level prediction applies".into()));
    };
    let factor = match case {
        LevelCase::VI | LevelCase::VII | LevelCase::VIII => 2,
        _ => 1,
    };
    Ok(LevelVerdict {
        case,
        level: factor * p_j * lcm_ns,
        needs_correction: case == LevelCase::VIII,
        p_j,
        lcm_ns,
        factor,
    })
}

/// `S f - (1/2)(2/t) · (S ⟨2⟩f)|C_2` with `S = S_{ts²}^{(MN)}` from the
/// general formula; on q-expansions the second term is
/// `(2/t) 2^{k-1} (S⟨2⟩f)(2τ)`.
pub fn corrected_combination(req: &LiftRequest, psi_subspace_known: bool) -> Result<QExp, ShimuraError> {
    let level = req.level();
    let big_t = req.t * req.s * req.s;
    if level * big_t % 2 == 0 {
        return Err(ShimuraError::Parameter("the correction applies only when MNst is odd".into()));
    }
    let flags = LevelFlags {
        plus_space_matching: false,
        psi_subspace_known,
    };
    let (t, _) = square_free_split(big_t);
    if LevelFlags::from_request(req)?.plus_space_matching {
        return Err(ShimuraError::Parameter(format!(
            "level case (i) applies (plus space with eps = (-1/{t})); no correction is needed"
        )));
    }
    predict_level(req.n, t, req.s, req.m, flags)?;
    let main = core(req, &req.orbit, level, big_t)?.compute(ConstantRecipe::Extended)?;
    let (orbit2, scalar) = req.orbit.shifted(2)?;
    let twisted = core(req, &orbit2, level, big_t)?.compute(ConstantRecipe::Extended)?;
    let kr = kronecker(2, t as i64)?;
    let factor = num_traits::pow(Rational::from_integer(2.into()), req.k as usize - 1) * Rational::from_integer(kr.into());
    let correction = twisted.scale(&scalar.scale(&factor)).rescale(2).truncate(req.prec as i64 + 1);
    Ok(main.add_unchecked(&correction.neg()))
}
