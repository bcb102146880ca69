//! Dirichlet characters stored as value tables, together with the derived
//! characters ω_χ (modulo 4N), χ_t (modulo 8·t₂) and η = χ·(εt/·) (modulo Nt).

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalars::{gcd, kronecker_unchecked, lcm, Cyc, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("character table is not multiplicative at ({0}, {1})")]
    NotMultiplicative(u64, u64),
    #[error("character table is missing the unit {0}")]
    MissingValue(u64),
    #[error("value at {0} is not a root of unity")]
    NotRootOfUnity(u64),
    #[error("value given at non-unit {0}")]
    ValueAtNonUnit(u64),
    #[error("d -> ({t}/d) is not a character modulo {modulus}")]
    IncompatibleConductor { t: i64, modulus: u64 },
    #[error(
        "t = {t} is 2 mod 4 while 4 does not divide N = {n}: the twist by (t/d) is not \
         defined modulo Nt and the rescaled form leaves the plus space"
    )]
    RescalingObstruction { n: u64, t: u64 },
    #[error(
        "d -> chi(d)({et}/d) is not well defined modulo {modulus}; for odd t with 4 not \
         dividing N the sign must be eps = (-1/t)"
    )]
    EtaNotWellDefined { et: i64, modulus: u64 },
    #[error("malformed character description: {0}")]
    Malformed(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// How a character was specified; kept for serialization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharacterSpec {
    Trivial,
    Kronecker(i64),
    /// Values on units as `(d, value)` pairs.
    Explicit(Vec<(u64, Cyc)>),
}

/// A Dirichlet character modulo `modulus`, with values `ζ_order^e` on units
/// and 0 elsewhere.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u32,
    table: Vec<Option<u32>>,
    spec: CharacterSpec,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        if self.modulus != other.modulus {
            return false;
        }
        let l = lcm(self.order as u64, other.order as u64) as u32;
        self.table.iter().zip(&other.table).all(|(a, b)| match (a, b) {
            (Some(x), Some(y)) => x * (l / self.order) == y * (l / other.order),
            (None, None) => true,
            _ => false,
        })
    }
}

impl DirichletCharacter {
    pub fn trivial(modulus: u64) -> Self {
        make_character(modulus, CharacterSpec::Trivial).expect("trivial character")
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Order of the root of unity in which values are expressed.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn spec(&self) -> &CharacterSpec {
        &self.spec
    }

    fn index(&self, d: i64) -> usize {
        d.rem_euclid(self.modulus as i64) as usize
    }

    pub fn is_unit(&self, d: i64) -> bool {
        self.table[self.index(d)].is_some()
    }

    /// Exponent e with χ(d) = ζ_order^e, or `None` on non-units.
    pub fn exponent(&self, d: i64) -> Option<u32> {
        self.table[self.index(d)]
    }

    pub fn value(&self, d: i64) -> Cyc {
        match self.exponent(d) {
            Some(e) => Cyc::root_of_unity(self.order, e as i64),
            None => Cyc::zero(),
        }
    }

    /// χ(-1) ∈ {±1}.
    pub fn parity(&self) -> i32 {
        match self.exponent(-1) {
            Some(0) => 1,
            Some(_) => -1,
            None => unreachable!("-1 is always a unit"),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(|v| matches!(v, None | Some(0)))
    }

    /// Real value in {-1, 0, 1} for quadratic or trivial characters.
    pub fn real_value(&self, d: i64) -> Option<i32> {
        match self.exponent(d) {
            None => Some(0),
            Some(0) => Some(1),
            Some(e) if 2 * e == self.order => Some(-1),
            Some(_) => None,
        }
    }

    /// The character induced to a multiple of the modulus.
    pub fn induce(&self, modulus: u64) -> Result<DirichletCharacter, CharacterError> {
        if modulus == 0 || modulus % self.modulus != 0 {
            return Err(CharacterError::Malformed(format!(
                "cannot induce modulus {} to {modulus}",
                self.modulus
            )));
        }
        if modulus == self.modulus {
            return Ok(self.clone());
        }
        let table = (0..modulus)
            .map(|d| {
                if gcd(d, modulus) == 1 {
                    self.exponent(d as i64)
                } else {
                    None
                }
            })
            .collect();
        Ok(DirichletCharacter {
            modulus,
            order: self.order,
            table,
            spec: self.induced_spec(modulus),
        }
        .reduced_order())
    }

    fn induced_spec(&self, _modulus: u64) -> CharacterSpec {
        match &self.spec {
            CharacterSpec::Explicit(_) => CharacterSpec::Explicit(Vec::new()),
            other => other.clone(),
        }
    }

    /// Pointwise product, with modulus the lcm of the two moduli.
    pub fn product(&self, other: &DirichletCharacter) -> DirichletCharacter {
        let modulus = lcm(self.modulus, other.modulus);
        let order = lcm(self.order as u64, other.order as u64) as u32;
        let (sa, sb) = (order / self.order, order / other.order);
        let table = (0..modulus)
            .map(|d| match (self.exponent(d as i64), other.exponent(d as i64)) {
                (Some(a), Some(b)) if gcd(d, modulus) == 1 => Some((a * sa + b * sb) % order),
                _ => None,
            })
            .collect();
        DirichletCharacter {
            modulus,
            order,
            table,
            spec: CharacterSpec::Explicit(Vec::new()),
        }
        .reduced_order()
        .with_explicit_spec()
    }

    fn reduced_order(mut self) -> Self {
        let mut g = self.order;
        for e in self.table.iter().flatten() {
            g = g.gcd(e);
        }
        if g > 1 {
            for e in self.table.iter_mut().flatten() {
                *e /= g;
            }
            self.order /= g;
        }
        if self.order == 0 {
            self.order = 1;
        }
        self
    }

    fn with_explicit_spec(mut self) -> Self {
        self.spec = CharacterSpec::Explicit(Vec::new());
        self
    }
}

/// Finds e with v = ζ_order^e for a root of unity `v`; returns `(order, e)`.
fn root_exponent(v: &Cyc) -> Option<(u32, u32)> {
    let base = if v.order() % 2 == 0 { v.order() } else { 2 * v.order() };
    (0..base).find_map(|e| (Cyc::root_of_unity(base, e as i64) == *v).then_some((base, e)))
}

/// Builds and validates a character modulo `modulus`.
pub fn make_character(modulus: u64, spec: CharacterSpec) -> Result<DirichletCharacter, CharacterError> {
    if modulus == 0 {
        return Err(CharacterError::ZeroModulus);
    }
    let units: Vec<u64> = (0..modulus).filter(|&d| gcd(d, modulus) == 1).collect();
    let chi = match &spec {
        CharacterSpec::Trivial => DirichletCharacter {
            modulus,
            order: 1,
            table: (0..modulus).map(|d| (gcd(d, modulus) == 1).then_some(0)).collect(),
            spec: spec.clone(),
        },
        CharacterSpec::Kronecker(t) => {
            let t = *t;
            if t == 0 {
                return Err(CharacterError::IncompatibleConductor { t, modulus });
            }
            let period = 4 * t.unsigned_abs();
            let span = lcm(modulus, period);
            let mut table = vec![None; modulus as usize];
            for &r in &units {
                let rep = if r == 0 { modulus } else { r };
                let v = kronecker_unchecked(t, rep as i64);
                if v == 0 {
                    return Err(CharacterError::IncompatibleConductor { t, modulus });
                }
                let mut d = rep;
                while d <= span + rep {
                    if kronecker_unchecked(t, d as i64) != v {
                        return Err(CharacterError::IncompatibleConductor { t, modulus });
                    }
                    d += modulus;
                }
                table[r as usize] = Some(if v == 1 { 0 } else { 1 });
            }
            DirichletCharacter {
                modulus,
                order: 2,
                table,
                spec: spec.clone(),
            }
        }
        CharacterSpec::Explicit(values) => {
            let mut found: Vec<Option<(u32, u32)>> = vec![None; modulus as usize];
            for (d, v) in values {
                let r = d % modulus;
                if gcd(r, modulus) != 1 {
                    return Err(CharacterError::ValueAtNonUnit(*d));
                }
                found[r as usize] = Some(root_exponent(v).ok_or(CharacterError::NotRootOfUnity(*d))?);
            }
            let mut order = 1u32;
            for &r in &units {
                let (o, _) = found[r as usize].ok_or(CharacterError::MissingValue(r.max(1)))?;
                order = lcm(order as u64, o as u64) as u32;
            }
            let table = (0..modulus)
                .map(|d| found[d as usize].map(|(o, e)| e * (order / o)))
                .collect();
            DirichletCharacter {
                modulus,
                order,
                table,
                spec: spec.clone(),
            }
        }
    };
    // χ(1) = 1 and multiplicativity on units
    if chi.exponent(1) != Some(0) {
        return Err(CharacterError::NotMultiplicative(1, 1));
    }
    for &a in &units {
        for &b in &units {
            let ea = chi.table[a as usize].unwrap();
            let eb = chi.table[b as usize].unwrap();
            let eab = chi.table[((a * b) % modulus) as usize].unwrap();
            if (ea + eb) % chi.order != eab % chi.order {
                return Err(CharacterError::NotMultiplicative(a, b));
            }
        }
    }
    let spec_kept = chi.spec.clone();
    let mut chi = chi.reduced_order();
    chi.spec = spec_kept;
    Ok(chi)
}

/// ω_χ(d) = (4χ(-1)/d)·χ(d), a character modulo 4N.
pub fn omega_chi(chi: &DirichletCharacter) -> DirichletCharacter {
    let modulus = 4 * chi.modulus();
    let order = lcm(chi.order() as u64, 2) as u32;
    let scale = order / chi.order();
    let sign = 4 * chi.parity() as i64;
    let table = (0..modulus)
        .map(|d| {
            if gcd(d, modulus) != 1 {
                return None;
            }
            let base = chi.exponent(d as i64).expect("unit mod N") * scale;
            let twist = if kronecker_unchecked(sign, d as i64) == -1 { order / 2 } else { 0 };
            Some((base + twist) % order)
        })
        .collect();
    DirichletCharacter {
        modulus,
        order,
        table,
        spec: CharacterSpec::Explicit(Vec::new()),
    }
    .reduced_order()
    .with_explicit_spec()
}

/// Odd part of `t`.
pub fn odd_part(mut t: u64) -> u64 {
    while t > 0 && t % 2 == 0 {
        t /= 2;
    }
    t
}

/// χ_t = (t/·), an even character of modulus 8·t₂.
pub fn chi_t(t: u64) -> DirichletCharacter {
    make_character(8 * odd_part(t), CharacterSpec::Kronecker(t as i64)).expect("(t/.) has conductor dividing 8 t_2")
}

/// Whether the twist d ↦ (εt/d) can be defined modulo Nt at all: 4 | N,
/// 4 | t, or t odd.
pub fn valid_eta(n: u64, t: u64) -> bool {
    n % 4 == 0 || t % 4 == 0 || t % 2 == 1
}

/// η(d) = χ(d)·(εt/d), a character modulo Nt.
pub fn eta_char(chi: &DirichletCharacter, t: u64, eps: i32) -> Result<DirichletCharacter, CharacterError> {
    let n = chi.modulus();
    if !valid_eta(n, t) {
        return Err(CharacterError::RescalingObstruction { n, t });
    }
    let modulus = n * t;
    let et = eps as i64 * t as i64;
    let order = lcm(chi.order() as u64, 2) as u32;
    let scale = order / chi.order();
    let span = lcm(modulus, 4 * t);
    let mut table = vec![None; modulus as usize];
    for r in 0..modulus {
        if gcd(r, modulus) != 1 {
            continue;
        }
        let rep = if r == 0 { modulus } else { r };
        let v = kronecker_unchecked(et, rep as i64);
        let mut d = rep;
        while d <= span + rep {
            if kronecker_unchecked(et, d as i64) != v || v == 0 {
                return Err(CharacterError::EtaNotWellDefined { et, modulus });
            }
            d += modulus;
        }
        let base = chi.exponent(r as i64).expect("unit") * scale;
        table[r as usize] = Some((base + if v == -1 { order / 2 } else { 0 }) % order);
    }
    Ok(DirichletCharacter {
        modulus,
        order,
        table,
        spec: CharacterSpec::Explicit(Vec::new()),
    }
    .reduced_order()
    .with_explicit_spec())
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize)]
struct CharacterJson {
    modulus: u64,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    t: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    values: Option<Vec<(u64, Cyc)>>,
}

impl Serialize for DirichletCharacter {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let j = match &self.spec {
            CharacterSpec::Trivial => CharacterJson {
                modulus: self.modulus,
                kind: "trivial".into(),
                t: None,
                values: None,
            },
            CharacterSpec::Kronecker(t) => CharacterJson {
                modulus: self.modulus,
                kind: "kronecker".into(),
                t: Some(*t),
                values: None,
            },
            CharacterSpec::Explicit(_) => CharacterJson {
                modulus: self.modulus,
                kind: "explicit".into(),
                t: None,
                values: Some(
                    (1..=self.modulus)
                        .filter(|&d| gcd(d, self.modulus) == 1)
                        .map(|d| (d, self.value(d as i64)))
                        .collect(),
                ),
            },
        };
        j.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DirichletCharacter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = CharacterJson::deserialize(d)?;
        let spec = match j.kind.as_str() {
            "trivial" => CharacterSpec::Trivial,
            "kronecker" => CharacterSpec::Kronecker(
                j.t.ok_or_else(|| serde::de::Error::custom("kronecker character needs t"))?,
            ),
            "explicit" => CharacterSpec::Explicit(
                j.values.ok_or_else(|| serde::de::Error::custom("explicit character needs values"))?,
            ),
            other => return Err(serde::de::Error::custom(format!("unknown character kind {other}"))),
        };
        make_character(j.modulus, spec).map_err(serde::de::Error::custom)
    }
}

/// Parses `trivial`, `kronecker:<t>` or a JSON character description.
pub fn parse_character(text: &str, default_modulus: u64) -> Result<DirichletCharacter, CharacterError> {
    let text = text.trim();
    if text.starts_with('{') {
        return serde_json::from_str(text).map_err(|e| CharacterError::Malformed(e.to_string()));
    }
    if text == "trivial" {
        return make_character(default_modulus, CharacterSpec::Trivial);
    }
    if let Some(t) = text.strip_prefix("kronecker:") {
        let t: i64 = t.trim().parse().map_err(|_| CharacterError::Malformed(text.into()))?;
        return make_character(default_modulus, CharacterSpec::Kronecker(t));
    }
    Err(CharacterError::Malformed(text.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{dirichlet_l_neg, int, rational, rational_to_f64};

    fn quadratic_mod3() -> DirichletCharacter {
        make_character(3, CharacterSpec::Explicit(vec![(1, Cyc::from_int(1)), (2, Cyc::from_int(-1))])).unwrap()
    }

    /// All characters modulo n, found by brute force over exponent
    /// assignments on units checked for multiplicativity.
    /// Every character mod n: values are assigned freely on a greedy generating
    /// set of the unit group, extended over words, and kept when consistent.
    fn all_characters(n: u64) -> Vec<DirichletCharacter> {
        let units: Vec<u64> = (1..=n).filter(|&d| gcd(d, n) == 1).collect();
        let order = crate::scalars::totient(n) as u32;
        let order = if order % 2 == 0 { order } else { 2 * order };
        let mut gens: Vec<u64> = Vec::new();
        let mut span: Vec<u64> = vec![1 % n.max(1)];
        for &u in &units {
            if span.contains(&(u % n.max(1))) {
                continue;
            }
            gens.push(u);
            let mut next = span.clone();
            let mut frontier = span.clone();
            while let Some(x) = frontier.pop() {
                let y = x * u % n.max(1);
                if !next.contains(&y) {
                    next.push(y);
                    frontier.push(y);
                }
            }
            span = next;
        }
        let mut out = Vec::new();
        let mut assignment = vec![0u32; gens.len()];
        loop {
            // extend along words in the generators
            let mut table: Vec<(u64, u32)> = vec![(1 % n.max(1), 0)];
            let mut consistent = true;
            let mut i = 0;
            while i < table.len() && consistent {
                let (x, e) = table[i];
                for (g, &a) in gens.iter().zip(&assignment) {
                    let y = x * g % n.max(1);
                    let f = (e + a) % order;
                    match table.iter().find(|(z, _)| *z == y) {
                        Some(&(_, f0)) => consistent &= f0 == f,
                        None => table.push((y, f)),
                    }
                }
                i += 1;
            }
            if consistent {
                let values: Vec<(u64, Cyc)> = units
                    .iter()
                    .map(|&d| {
                        let e = table.iter().find(|(z, _)| *z == d % n.max(1)).unwrap().1;
                        (d, Cyc::root_of_unity(order, e as i64))
                    })
                    .collect();
                let chi = make_character(n, CharacterSpec::Explicit(values)).unwrap();
                if !out.contains(&chi) {
                    out.push(chi);
                }
            }
            let mut i = 0;
            loop {
                if i == assignment.len() {
                    return out;
                }
                assignment[i] += 1;
                if assignment[i] < order {
                    break;
                }
                assignment[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn make_character_examples() {
        let triv = make_character(1, CharacterSpec::Trivial).unwrap();
        assert!(triv.value(7).is_one());
        let chi4 = make_character(4, CharacterSpec::Kronecker(-4)).unwrap();
        assert_eq!(chi4.value(1), Cyc::from_int(1));
        assert_eq!(chi4.value(3), Cyc::from_int(-1));
        assert!(chi4.value(2).is_zero());
        let q3 = quadratic_mod3();
        assert_eq!(q3.value(2), Cyc::from_int(-1));
        assert_eq!(q3.real_value(5), Some(-1));
    }

    #[test]
    fn make_character_rejects_bad_tables() {
        let bad = make_character(5, CharacterSpec::Explicit(vec![
            (1, Cyc::from_int(1)),
            (2, Cyc::from_int(-1)),
            (3, Cyc::from_int(1)),
            (4, Cyc::from_int(1)),
        ]));
        assert!(matches!(bad, Err(CharacterError::NotMultiplicative(..))));
        assert!(matches!(
            make_character(1, CharacterSpec::Kronecker(-4)),
            Err(CharacterError::IncompatibleConductor { .. })
        ));
        assert!(matches!(
            make_character(3, CharacterSpec::Explicit(vec![(1, Cyc::from_int(1))])),
            Err(CharacterError::MissingValue(2))
        ));
    }

    #[test]
    fn character_count_and_orders() {
        for n in 1..=12u64 {
            let chars = all_characters(n);
            assert_eq!(chars.len() as u64, crate::scalars::totient(n), "n={n}");
            for chi in chars {
                // every value has order dividing φ(n)
                let phi = crate::scalars::totient(n) as u32;
                for d in 1..=n {
                    if let Some(e) = chi.exponent(d as i64) {
                        assert_eq!((e as u64 * phi as u64) % chi.order() as u64, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn omega_examples() {
        let w = omega_chi(&DirichletCharacter::trivial(1));
        assert_eq!(w.modulus(), 4);
        assert!(w.is_trivial());
        let w = omega_chi(&make_character(4, CharacterSpec::Kronecker(-4)).unwrap());
        assert_eq!(w.modulus(), 16);
        assert!(w.is_trivial());
        let w = omega_chi(&quadratic_mod3());
        assert_eq!(w.value(5), Cyc::from_int(-1));
    }

    #[test]
    fn omega_is_even() {
        for n in 1..=12u64 {
            for chi in all_characters(n) {
                let w = omega_chi(&chi);
                assert_eq!(w.parity(), 1);
                assert!(w.value(4 * n as i64 - 1).is_one());
            }
        }
    }

    #[test]
    fn chi_t_examples() {
        assert!(chi_t(1).is_trivial());
        let c2 = chi_t(2);
        assert_eq!(c2.value(7), Cyc::from_int(1));
        assert_eq!(c2.value(3), Cyc::from_int(-1));
        for t in 1..=30u64 {
            let c = chi_t(t);
            assert_eq!(c.modulus(), 8 * odd_part(t));
            assert_eq!(c.parity(), 1, "t={t}");
        }
    }

    #[test]
    fn eta_examples() {
        let e = eta_char(&DirichletCharacter::trivial(1), 1, 1).unwrap();
        assert!(e.is_trivial());
        let e = eta_char(&DirichletCharacter::trivial(1), 3, -1).unwrap();
        assert_eq!(e.value(2), Cyc::from_int(-1));
        let e = eta_char(&DirichletCharacter::trivial(4), 2, 1).unwrap();
        assert_eq!(e.modulus(), 8);
        for d in [1i64, 3, 5, 7] {
            assert_eq!(e.real_value(d), Some(kronecker_unchecked(2, d)));
        }
        assert!(matches!(
            eta_char(&DirichletCharacter::trivial(1), 2, 1),
            Err(CharacterError::RescalingObstruction { .. })
        ));
        assert!(matches!(
            eta_char(&DirichletCharacter::trivial(1), 3, 1),
            Err(CharacterError::EtaNotWellDefined { .. })
        ));
    }

    #[test]
    fn eta_parity() {
        for n in 1..=6u64 {
            for chi in all_characters(n) {
                for t in 1..=9u64 {
                    for eps in [1, -1] {
                        if let Ok(eta) = eta_char(&chi, t, eps) {
                            assert_eq!(eta.parity(), chi.parity() * eps, "N={n} t={t} eps={eps}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dirichlet_l_examples() {
        let triv = DirichletCharacter::trivial(1);
        assert_eq!(dirichlet_l_neg(&triv, 2).unwrap(), Cyc::from_rational(rational(-1, 12)));
        assert_eq!(dirichlet_l_neg(&triv, 4).unwrap(), Cyc::from_rational(rational(1, 120)));
        let chi4 = make_character(4, CharacterSpec::Kronecker(-4)).unwrap();
        assert_eq!(dirichlet_l_neg(&chi4, 1).unwrap(), Cyc::from_rational(rational(1, 2)));
        assert_eq!(dirichlet_l_neg(&chi4, 3).unwrap(), Cyc::from_rational(rational(-1, 2)));
        let _ = int(0);
    }

    /// L(1-k, χ) from Hurwitz values computed by the floating-point oracle.
    #[test]
    fn dirichlet_l_matches_hurwitz_oracle() {
        for n in 1..=8u64 {
            for chi in all_characters(n) {
                for k in 1..=5u32 {
                    let exact = dirichlet_l_neg(&chi, k).unwrap().to_complex();
                    let mut oracle = num_complex::Complex64::new(0.0, 0.0);
                    for d in 1..=n {
                        let v = chi.value(d as i64).to_complex();
                        let h = crate::scalars::tests::hurwitz_neg_float(k, d as f64 / n as f64);
                        oracle += v * (n as f64).powi(k as i32 - 1) * h;
                    }
                    assert!((exact - oracle).norm() < 1e-9, "N={n} k={k}");
                }
            }
        }
        let _ = rational_to_f64(&rational(1, 2));
    }

    #[test]
    fn json_round_trip() {
        for chi in [
            DirichletCharacter::trivial(5),
            make_character(12, CharacterSpec::Kronecker(-3)).unwrap(),
            omega_chi(&quadratic_mod3()),
        ] {
            let s = serde_json::to_string(&chi).unwrap();
            let back: DirichletCharacter = serde_json::from_str(&s).unwrap();
            assert_eq!(back, chi);
            assert_eq!(serde_json::to_string(&back).unwrap(), s);
        }
        let c = parse_character("kronecker:-4", 4).unwrap();
        assert_eq!(c.parity(), -1);
    }
}
