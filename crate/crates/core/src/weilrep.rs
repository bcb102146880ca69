//! Finite quadratic modules, their Weil representations on words in the
//! generators of the metaplectic group, the ψ character on Γ_0(4), the
//! automorphisms m_h of `D_B(N)`, and vector-valued q-expansions.
//!
//! Matrices are complex floating point: nothing on the exact lift path uses
//! them, they only check the representation-theoretic formulas.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::qseries::QExp;
use crate::scalars::{eps_d, kronecker, rational, Rational, ScalarError, FourthRoot};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeilError {
    #[error("invalid quadratic module: {0}")]
    InvalidModule(String),
    #[error("matrix [[{0}, {1}], [{2}, {3}]] is not in Γ_0(4)")]
    NotInGamma04(i64, i64, i64, i64),
    #[error("{h} is not a unit modulo {n}")]
    NonUnit { h: i64, n: u64 },
    #[error("branch must be +1 or -1, got {0}")]
    Branch(i32),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A finite abelian group `Π Z/n_i` with a `Q/Z`-valued quadratic form.
///
/// Elements are indexed in mixed radix with the first generator fastest.
/// `Q` is stored as numerators over the common denominator `level`.
#[derive(Clone, Debug, PartialEq)]
pub struct FqModule {
    orders: Vec<u64>,
    level: i64,
    qn: Vec<i64>,
    signature: i64,
}

impl FqModule {
    /// Module from generator orders, a quadratic form on element tuples and a
    /// signature mod 8. Checks evenness, bilinearity and non-degeneracy.
    pub fn new<F>(orders: Vec<u64>, q: F, signature: i64) -> Result<FqModule, WeilError>
    where
        F: Fn(&[u64]) -> Rational,
    {
        if orders.contains(&0) {
            return Err(WeilError::InvalidModule("generator of order 0".into()));
        }
        let size: u64 = orders.iter().product();
        let mut m = FqModule {
            orders,
            level: 1,
            qn: Vec::new(),
            signature: signature.rem_euclid(8),
        };
        let values: Vec<Rational> = (0..size as usize).map(|i| q(&m.element(i))).collect();
        let mut level = 1i64;
        for v in &values {
            let d: i64 = v.denom().try_into().map_err(|_| WeilError::InvalidModule("denominator too large".into()))?;
            level = level.lcm(&d);
        }
        m.level = level;
        m.qn = values
            .iter()
            .map(|v| {
                let x = v * Rational::from_integer(level.into());
                i64::try_from(x.to_integer()).unwrap().rem_euclid(level)
            })
            .collect();
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), WeilError> {
        let n = self.cardinality();
        let bad = |s: String| Err(WeilError::InvalidModule(s));
        if self.qn[0] != 0 {
            return bad("Q(0) != 0".into());
        }
        let b = |x: usize, y: usize| self.bilinear_num(x, y);
        for x in 0..n {
            if self.qn[self.neg(x)] != self.qn[x] {
                return bad(format!("Q(-x) != Q(x) at {:?}", self.element(x)));
            }
            let mut radical = x != 0;
            for y in 0..n {
                if b(x, y) != 0 {
                    radical = false;
                }
                let xy = self.add(x, y);
                for z in 0..n.min(8) {
                    if b(xy, z) != (b(x, z) + b(y, z)) % self.level {
                        return bad("form is not bilinear".into());
                    }
                }
            }
            if radical {
                return bad(format!("degenerate at {:?}", self.element(x)));
            }
        }
        Ok(())
    }

    /// `D_1`: `Z/2` with `Q(1) = 1/4`, signature 1.
    pub fn d1() -> FqModule {
        FqModule::new(vec![2], |e| rational(e[0] as i64 * e[0] as i64, 4), 1).unwrap()
    }

    /// `D_1(-1)`: `Z/2` with `Q(1) = 3/4`, signature -1.
    pub fn d1_dual() -> FqModule {
        FqModule::new(vec![2], |e| rational(-(e[0] as i64 * e[0] as i64), 4), -1).unwrap()
    }

    /// `D_B(N)`: pairs `(c, r)` mod N with `Q = cr/N`, signature 0.
    pub fn db(n: u64) -> FqModule {
        FqModule::new(vec![n, n], |e| rational((e[0] * e[1]) as i64, n as i64), 0).unwrap()
    }

    /// `D_1(N) = D_1 ⊕ D_B(N)`.
    pub fn d1n(n: u64) -> FqModule {
        FqModule::d1().direct_sum(&FqModule::db(n))
    }

    pub fn direct_sum(&self, other: &FqModule) -> FqModule {
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        let level = self.level.lcm(&other.level);
        let (f1, f2) = (level / self.level, level / other.level);
        let n1 = self.cardinality();
        let mut qn = Vec::with_capacity(n1 * other.cardinality());
        for j in 0..other.cardinality() {
            for i in 0..n1 {
                qn.push((self.qn[i] * f1 + other.qn[j] * f2) % level);
            }
        }
        FqModule {
            orders,
            level,
            qn,
            signature: (self.signature + other.signature).rem_euclid(8),
        }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn signature(&self) -> i64 {
        self.signature
    }

    pub fn cardinality(&self) -> usize {
        self.qn.len()
    }

    pub fn element(&self, mut index: usize) -> Vec<u64> {
        self.orders
            .iter()
            .map(|&o| {
                let c = index as u64 % o;
                index /= o as usize;
                c
            })
            .collect()
    }

    pub fn index(&self, e: &[u64]) -> usize {
        let mut idx = 0usize;
        let mut scale = 1usize;
        for (c, &o) in e.iter().zip(&self.orders) {
            idx += (c % o) as usize * scale;
            scale *= o as usize;
        }
        idx
    }

    pub fn add(&self, mut x: usize, mut y: usize) -> usize {
        let (mut idx, mut scale) = (0usize, 1usize);
        for &o in &self.orders {
            let o = o as usize;
            idx += ((x % o + y % o) % o) * scale;
            x /= o;
            y /= o;
            scale *= o;
        }
        idx
    }

    pub fn neg(&self, mut x: usize) -> usize {
        let (mut idx, mut scale) = (0usize, 1usize);
        for &o in &self.orders {
            let o = o as usize;
            idx += ((o - x % o) % o) * scale;
            x /= o;
            scale *= o;
        }
        idx
    }

    /// `Q(x)` in `[0, 1)`.
    pub fn q_value(&self, x: usize) -> Rational {
        rational(self.qn[x], self.level)
    }

    fn bilinear_num(&self, x: usize, y: usize) -> i64 {
        (self.qn[self.add(x, y)] - self.qn[x] - self.qn[y]).rem_euclid(self.level)
    }

    /// `(x, y) = Q(x+y) - Q(x) - Q(y)` in `[0, 1)`.
    pub fn bilinear(&self, x: usize, y: usize) -> Rational {
        rational(self.bilinear_num(x, y), self.level)
    }

    fn e_q(&self, x: usize) -> Complex64 {
        e_frac(self.qn[x], self.level)
    }

    fn e_minus_b(&self, x: usize, y: usize) -> Complex64 {
        e_frac(-self.bilinear_num(x, y), self.level)
    }
}

fn e_frac(num: i64, den: i64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * num as f64 / den as f64)
}

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RepMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl RepMatrix {
    pub fn identity(n: usize) -> RepMatrix {
        let mut m = RepMatrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::one();
        }
        m
    }

    pub fn zeros(n: usize) -> RepMatrix {
        RepMatrix {
            n,
            data: vec![Complex64::zero(); n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> RepMatrix {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        RepMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, o: &RepMatrix) -> RepMatrix {
        let n = self.n;
        let mut out = RepMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * o.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> RepMatrix {
        let n = self.n;
        let mut out = RepMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> RepMatrix {
        RepMatrix {
            n: self.n,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn max_diff(&self, o: &RepMatrix) -> f64 {
        self.data.iter().zip(&o.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `max |M M^† - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        self.mul(&self.adjoint()).max_diff(&RepMatrix::identity(self.n))
    }

    /// Kronecker product where the index of `self` runs fastest, matching the
    /// element order of [`FqModule::direct_sum`].
    pub fn tensor(&self, o: &RepMatrix) -> RepMatrix {
        let (a, b) = (self.n, o.n);
        let n = a * b;
        let mut out = RepMatrix::zeros(n);
        for y in 0..b {
            for y2 in 0..b {
                let bv = o.get(y, y2);
                for x in 0..a {
                    for x2 in 0..a {
                        out.data[(x + a * y) * n + (x2 + a * y2)] = self.get(x, x2) * bv;
                    }
                }
            }
        }
        out
    }
}

pub fn weil_t(d: &FqModule) -> RepMatrix {
    let n = d.cardinality();
    let mut m = RepMatrix::zeros(n);
    for g in 0..n {
        m.set(g, g, d.e_q(g));
    }
    m
}

/// `ρ(S) e_γ = ζ_8^{-sig}/√Δ Σ_δ e(-(γ,δ)) e_δ`.
pub fn weil_s(d: &FqModule) -> RepMatrix {
    let n = d.cardinality();
    let pref = e_frac(-d.signature(), 8) / (n as f64).sqrt();
    let mut m = RepMatrix::zeros(n);
    for g in 0..n {
        for h in 0..n {
            // column γ, row δ
            m.set(h, g, pref * d.e_minus_b(g, h));
        }
    }
    m
}

/// `ρ(S^{-1}) = ρ(S)·ρ(S²)^{-1}`.
pub fn weil_s_inv(d: &FqModule) -> RepMatrix {
    let s = weil_s(d);
    let z = s.mul(&s);
    s.mul(&z.adjoint())
}

/// Generators of the metaplectic group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gen {
    S,
    SInv,
    T,
    TInv,
}

impl Gen {
    pub fn matrix(self) -> [[i64; 2]; 2] {
        match self {
            Gen::S => [[0, -1], [1, 0]],
            Gen::SInv => [[0, 1], [-1, 0]],
            Gen::T => [[1, 1], [0, 1]],
            Gen::TInv => [[1, -1], [0, 1]],
        }
    }

    fn act(self, tau: Complex64) -> Complex64 {
        let [[a, b], [c, dd]] = self.matrix();
        (tau * a as f64 + b as f64) / (tau * c as f64 + dd as f64)
    }

    /// The metaplectic square root `φ(τ)` attached to the generator.
    fn phi(self, tau: Complex64) -> Complex64 {
        match self {
            Gen::S => tau.sqrt(),
            Gen::SInv => Complex64::one() / (-Complex64::one() / tau).sqrt(),
            Gen::T | Gen::TInv => Complex64::one(),
        }
    }
}

/// Ordered product `ρ(g_1)…ρ(g_n)`.
pub fn weil_word(d: &FqModule, word: &[Gen]) -> RepMatrix {
    let (s, si, t) = (weil_s(d), weil_s_inv(d), weil_t(d));
    let ti = t.adjoint();
    word.iter().fold(RepMatrix::identity(d.cardinality()), |acc, g| {
        let m = match g {
            Gen::S => &s,
            Gen::SInv => &si,
            Gen::T => &t,
            Gen::TInv => &ti,
        };
        acc.mul(m)
    })
}

/// Integer matrix of a word together with its metaplectic branch: +1 when
/// `φ(τ)` is the principal root of `cτ + d`, -1 otherwise.
pub fn word_matrix(word: &[Gen]) -> ([[i64; 2]; 2], i32) {
    let mut m = [[1i64, 0], [0, 1]];
    for g in word {
        let x = g.matrix();
        m = [
            [m[0][0] * x[0][0] + m[0][1] * x[1][0], m[0][0] * x[0][1] + m[0][1] * x[1][1]],
            [m[1][0] * x[0][0] + m[1][1] * x[1][0], m[1][0] * x[0][1] + m[1][1] * x[1][1]],
        ];
    }
    // φ_w(τ) = Π φ_{g_i}(g_{i+1}…g_n τ), evaluated at a generic point
    let tau0 = Complex64::new(0.1234, 0.9876);
    let mut tau = tau0;
    let mut phi = Complex64::one();
    for g in word.iter().rev() {
        phi *= g.phi(tau);
        tau = g.act(tau);
    }
    let principal = (tau0 * m[1][0] as f64 + m[1][1] as f64).sqrt();
    let branch = if (phi - principal).norm() < (phi + principal).norm() { 1 } else { -1 };
    (m, branch)
}

/// `ψ = ±(c/d)·conj(ε_d)` on `Γ_0(4)`.
pub fn psi_char(a: i64, b: i64, c: i64, d: i64, branch: i32) -> Result<FourthRoot, WeilError> {
    if a * d - b * c != 1 || c % 4 != 0 {
        return Err(WeilError::NotInGamma04(a, b, c, d));
    }
    if branch != 1 && branch != -1 {
        return Err(WeilError::Branch(branch));
    }
    let sym = kronecker(c, d)?;
    Ok(FourthRoot::from_sign(branch * sym) * eps_d(d)?.conj())
}

/// `m_h` on `D_B(N)`: `e_{c,r} ↦ e_{hc, h^{-1} r}`, as an index permutation.
pub fn m_h(n: u64, h: i64) -> Result<Vec<usize>, WeilError> {
    let hn = h.rem_euclid(n as i64) as u64;
    if hn.gcd(&n) != 1 {
        return Err(WeilError::NonUnit { h, n });
    }
    let inv = (1..=n).find(|x| (x * hn) % n == 1 % n).unwrap_or(1) % n;
    let m = FqModule::db(n);
    Ok((0..m.cardinality())
        .map(|i| {
            let el = m.element(i);
            m.index(&[(hn * el[0]) % n, (inv * el[1]) % n])
        })
        .collect())
}

/// Vector-valued expansion: one q-expansion per module element (missing
/// components are zero).
#[derive(Clone, Debug, PartialEq)]
pub struct VVQExp {
    pub module: FqModule,
    pub components: BTreeMap<usize, QExp>,
}

impl VVQExp {
    pub fn new(module: FqModule) -> VVQExp {
        VVQExp {
            module,
            components: BTreeMap::new(),
        }
    }

    pub fn with_component(mut self, gamma: usize, f: QExp) -> VVQExp {
        self.components.insert(gamma, f);
        self
    }

    pub fn component(&self, gamma: usize) -> Option<&QExp> {
        self.components.get(&gamma)
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(QExp::is_zero)
    }
}

/// Every exponent of component γ is congruent to `Q(γ)` modulo 1.
pub fn vv_support_check(f: &VVQExp) -> bool {
    f.components.iter().all(|(&g, comp)| {
        let qg = f.module.q_value(g);
        let w = Rational::from_integer(comp.exponent_denominator().into());
        comp.coefficients().keys().all(|&a| {
            let x = Rational::from_integer(a.into()) / &w - &qg;
            x.is_integer()
        })
    })
}

/// Outcome of the invariant suite run by the self-test command.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SelfTestReport {
    pub checks: Vec<SelfTestCheck>,
    pub passed: bool,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SelfTestCheck {
    pub module: String,
    pub relation: String,
    pub max_error: f64,
    pub passed: bool,
}

/// Runs the Weil representation relations on `D_1`, `D_1(-1)`, `D_B(N)` and
/// `D_1(N)` for `N ≤ bound`, plus the Γ_0(4) formula on `random_words` random
/// words. `perturb` adds a deliberate error to ρ(S) (negative control).
pub fn self_test(bound: u64, random_words: usize, seed: u64, perturb: bool) -> SelfTestReport {
    let tol = 1e-12;
    let mut checks = Vec::new();
    let mut modules = vec![("D_1".to_string(), FqModule::d1()), ("D_1(-1)".to_string(), FqModule::d1_dual())];
    for n in 1..=bound {
        modules.push((format!("D_B({n})"), FqModule::db(n)));
        modules.push((format!("D_1({n})"), FqModule::d1n(n)));
    }
    let mut push = |module: &str, relation: &str, err: f64, tol: f64| {
        checks.push(SelfTestCheck {
            module: module.to_string(),
            relation: relation.to_string(),
            max_error: err,
            passed: err < tol,
        })
    };
    for (name, d) in &modules {
        let mut s = weil_s(d);
        if perturb {
            let v = s.get(0, 0);
            s.set(0, 0, v + Complex64::new(1e-3, 0.0));
        }
        let t = weil_t(d);
        let s2 = s.mul(&s);
        let st = s.mul(&t);
        let st3 = st.mul(&st).mul(&st);
        push(name, "S^2 = (ST)^3", s2.max_diff(&st3), tol);
        push(name, "S unitary", s.unitarity_defect(), tol);
        push(name, "T unitary", t.unitarity_defect(), tol);
        if name.starts_with("D_1(") && !name.starts_with("D_1(-") {
            let n: u64 = name[4..name.len() - 1].parse().unwrap();
            let ts = weil_s(&FqModule::d1()).tensor(&weil_s(&FqModule::db(n)));
            push(name, "S = S_1 ⊗ S_B", s.max_diff(&ts), tol);
            let tt = weil_t(&FqModule::d1()).tensor(&weil_t(&FqModule::db(n)));
            push(name, "T = T_1 ⊗ T_B", t.max_diff(&tt), tol);
        }
    }
    if random_words > 0 {
        let err = gamma04_formula_error(random_words, seed, perturb);
        push("D_1", "Γ_0(4) words = ψ·diag(1, i^{bd})", err, 1e-10);
    }
    let passed = checks.iter().all(|c| c.passed);
    SelfTestReport { checks, passed }
}

/// Largest deviation of `ρ_1(word)` from `ψ·diag(1, i^{bd})` over random words
/// whose matrices lie in Γ_0(4).
pub fn gamma04_formula_error(count: usize, seed: u64, perturb: bool) -> f64 {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let d1 = FqModule::d1();
    let gens = [Gen::S, Gen::T, Gen::TInv];
    let mut worst = 0.0f64;
    let mut found = 0;
    while found < count {
        let len = rng.random_range(1..=12);
        let word: Vec<Gen> = (0..len).map(|_| gens[rng.random_range(0..gens.len())]).collect();
        let ([[a, b], [c, d]], branch) = word_matrix(&word);
        if c % 4 != 0 {
            continue;
        }
        found += 1;
        let mut rho = weil_word(&d1, &word);
        if perturb {
            let v = rho.get(0, 0);
            rho.set(0, 0, v + Complex64::new(1e-3, 0.0));
        }
        let psi = psi_char(a, b, c, d, branch).unwrap().to_complex();
        let ibd = FourthRoot::from_exponent(b * d).to_complex();
        let expect = RepMatrix::from_rows(vec![vec![psi, Complex64::zero()], vec![Complex64::zero(), psi * ibd]]);
        worst = worst.max(rho.max_diff(&expect));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Cyc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn d1_generators() {
        let d = FqModule::d1();
        let t = weil_t(&d);
        let expect_t = RepMatrix::from_rows(vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 1.0)]]);
        assert!(t.max_diff(&expect_t) < 1e-12);
        let h = c(0.5, -0.5);
        let expect_s = RepMatrix::from_rows(vec![vec![h, h], vec![h, -h]]);
        assert!(weil_s(&d).max_diff(&expect_s) < 1e-12);
        assert!(weil_s(&FqModule::db(1)).max_diff(&RepMatrix::identity(1)) < 1e-12);
    }

    #[test]
    fn words() {
        let d = FqModule::d1();
        use Gen::*;
        assert!(weil_word(&d, &[S, S]).max_diff(&weil_word(&d, &[S, T, S, T, S, T])) < 1e-12);
        assert!(weil_word(&d, &[]).max_diff(&RepMatrix::identity(2)) < 1e-15);
        let r = weil_word(&d, &[S, TInv, SInv]);
        let h = c(0.5, -0.5);
        let expect = RepMatrix::from_rows(vec![vec![h, h * c(0.0, 1.0)], vec![h * c(0.0, 1.0), h]]);
        assert!(r.max_diff(&expect) < 1e-12);
        // R lies over [[1,0],[1,1]] with the principal root of τ + 1
        assert_eq!(word_matrix(&[S, TInv, SInv]), ([[1, 0], [1, 1]], 1));
        // Z = S² = (-I, i)
        let (m, branch) = word_matrix(&[S, S]);
        assert_eq!(m, [[-1, 0], [0, -1]]);
        assert_eq!(branch, 1);
        assert_eq!(psi_char(-1, 0, 0, -1, 1).unwrap(), FourthRoot::MINUS_I);
        let z = weil_word(&d, &[S, S]);
        assert!(z.max_diff(&RepMatrix::identity(2).scale(c(0.0, -1.0))) < 1e-12);
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi_char(1, 0, 4, 1, 1).unwrap(), FourthRoot::ONE);
        assert_eq!(psi_char(1, 1, 0, 1, 1).unwrap(), FourthRoot::ONE);
        assert_eq!(psi_char(3, 1, 8, 3, 1).unwrap(), FourthRoot::I);
        assert_eq!(psi_char(3, 1, 8, 3, -1).unwrap(), FourthRoot::MINUS_I);
        assert!(psi_char(1, 0, 2, 1, 1).is_err());
        assert!(psi_char(1, 0, 4, 2, 1).is_err());
    }

    #[test]
    fn relations_for_all_small_modules() {
        let report = self_test(12, 100, 7, false);
        for chk in &report.checks {
            assert!(chk.passed, "{} {}: {}", chk.module, chk.relation, chk.max_error);
        }
        assert!(report.passed);
        let bad = self_test(1, 10, 7, true);
        assert!(!bad.passed);
    }

    #[test]
    fn module_structure() {
        let d = FqModule::d1n(3);
        assert_eq!(d.cardinality(), 18);
        assert_eq!(d.signature(), 1);
        assert_eq!(FqModule::d1_dual().q_value(1), rational(3, 4));
        // Z/2 with Q(1) = 1/2 is degenerate
        assert!(FqModule::new(vec![2], |e| rational(e[0] as i64, 2), 0).is_err());
        assert!(FqModule::new(vec![3], |e| rational(e[0] as i64, 3), 0).is_err());
        let db = FqModule::db(5);
        let el = db.index(&[2, 3]);
        assert_eq!(db.q_value(el), rational(1, 5));
    }

    #[test]
    fn m_h_examples() {
        let p = m_h(5, 2).unwrap();
        let db = FqModule::db(5);
        assert_eq!(db.element(p[db.index(&[1, 1])]), vec![2, 3]);
        for n in 1..=12u64 {
            let db = FqModule::db(n);
            let units: Vec<i64> = (1..=n as i64).filter(|&h| (h as u64).gcd(&n) == 1).collect();
            let id = m_h(n, 1).unwrap();
            assert!(id.iter().enumerate().all(|(i, &j)| i == j));
            for &h in &units {
                let ph = m_h(n, h).unwrap();
                for x in 0..db.cardinality() {
                    assert_eq!(db.q_value(ph[x]), db.q_value(x));
                }
                for &g in &units {
                    let pg = m_h(n, g).unwrap();
                    let phg = m_h(n, (h * g) % n as i64).unwrap();
                    for x in 0..db.cardinality() {
                        assert_eq!(ph[pg[x]], phg[x]);
                    }
                }
            }
        }
        assert!(m_h(6, 2).is_err());
    }

    #[test]
    fn support_law() {
        let d = FqModule::d1();
        let theta = VVQExp::new(d.clone())
            .with_component(0, crate::fixtures::theta_component(0, 50))
            .with_component(1, crate::fixtures::theta_component(1, 50));
        assert!(vv_support_check(&theta));
        let wrong = VVQExp::new(d.clone()).with_component(1, crate::fixtures::theta(10));
        assert!(!vv_support_check(&wrong));
        assert!(vv_support_check(&VVQExp::new(d)));
        let _ = Cyc::zero();
    }
}
