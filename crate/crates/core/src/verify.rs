//! Numerical and exact checks on lifted expansions: evaluation with a tail
//! bound, modularity residuals at sample points and an exact fit against
//! monomials in `E_4, E_6` at level one.

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::characters::DirichletCharacter;
use crate::fixtures;
use crate::qseries::{QExp, Weight};
use crate::scalars::{int, solve_augmented, Rational};
use crate::weilrep::psi_char;

/// Tail bounds above this make a residual meaningless.
pub const TAIL_LIMIT: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("expansion has a pole (lowest exponent {0}); numeric checks need a holomorphic series")]
    Meromorphic(i64),
    #[error("tail of the truncated series is only bounded by {bound:e} at τ = {tau}; more coefficients are needed")]
    Tail { bound: f64, tau: Complex64 },
    #[error("level must be positive, and divisible by 4 for half-integral weight (got {0})")]
    Level(u64),
    #[error("exact comparison needs coefficients q^0 … q^{needed}, the series stops below {available}")]
    Window { needed: i64, available: i64 },
    #[error("exact comparison needs rational coefficients and integral exponents")]
    NotRational,
    #[error("weight {0} has no level-one forms to compare with")]
    OddWeight(i64),
    #[error("{0}")]
    Multiplier(String),
}

/// Value of a truncated expansion together with an upper bound for the
/// discarded tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// `Σ c_a q^{a/w}` at `τ`. The tail bound assumes `|c_a| ≤ C a^α` with
/// `α = 2·weight` and `C` twice the largest ratio seen in the window.
pub fn eval_qexp(f: &QExp, tau: Complex64) -> Evaluation {
    let w = f.exponent_denominator() as f64;
    let step = (Complex64::new(0.0, std::f64::consts::TAU) * tau / w).exp();
    let x = step.norm();
    let mut value = Complex64::zero();
    let alpha = (2.0 * f.weight().to_f64()).max(1.0);
    let mut c_growth: f64 = 0.0;
    for (&a, c) in f.coefficients() {
        let z = c.to_complex();
        value += z * step.powi(a as i32);
        if a >= 1 {
            c_growth = c_growth.max(z.norm() / (a as f64).powf(alpha));
        }
    }
    let (_, hi) = f.window();
    let tail_bound = if c_growth == 0.0 {
        0.0
    } else {
        let c = 2.0 * c_growth;
        let h = hi.max(1) as f64;
        let r = ((h + 1.0) / h).powf(alpha) * x;
        if r >= 1.0 {
            f64::INFINITY
        } else {
            c * h.powf(alpha) * x.powf(h) / (1.0 - r)
        }
    };
    Evaluation { value, tail_bound }
}

/// Multiplier system for the modularity check.
#[derive(Clone, Debug)]
pub enum Multiplier {
    /// Integral weight with nebentypus `χ(d)`.
    Dirichlet(DirichletCharacter),
    /// Half-integral weight: `χ(d)` times the theta multiplier to the power
    /// `2κ`, with principal square roots.
    Theta(DirichletCharacter),
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualSample {
    pub matrix: [[i64; 2]; 2],
    pub tau: [f64; 2],
    pub residual: f64,
    pub tail_bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularityReport {
    pub level: u64,
    pub max_residual: f64,
    pub samples: Vec<ResidualSample>,
}

pub fn sample_points() -> [Complex64; 3] {
    [Complex64::new(0.3, 0.8), Complex64::new(-0.25, 1.1), Complex64::new(0.05, 0.6)]
}

pub fn sample_matrices(level: u64) -> [[[i64; 2]; 2]; 3] {
    let l = level as i64;
    [[[1, 1], [0, 1]], [[1, 0], [l, 1]], [[1 + l, 1], [l, 1]]]
}

/// Largest relative defect `|F(γτ) - j(γ,τ) F(τ)| / max(1, |F(τ)|)` over
/// the sample matrices and points.
pub fn modularity_residual(f: &QExp, level: u64, multiplier: &Multiplier) -> Result<ModularityReport, VerifyError> {
    let weight = f.weight();
    if level == 0 || (!weight.is_integral() && level % 4 != 0) {
        return Err(VerifyError::Level(level));
    }
    if let Some((&a, _)) = f.coefficients().iter().find(|(a, c)| **a < 0 && !c.is_zero()) {
        return Err(VerifyError::Meromorphic(a));
    }
    let kappa = weight.to_f64();
    let mut samples = Vec::new();
    for m in sample_matrices(level) {
        let [[a, b], [c, d]] = m;
        let chi = match multiplier {
            Multiplier::Dirichlet(chi) | Multiplier::Theta(chi) => chi.value(d).to_complex(),
        };
        let factor = match multiplier {
            Multiplier::Dirichlet(_) => {
                if !weight.is_integral() {
                    return Err(VerifyError::Multiplier("a Dirichlet multiplier needs integral weight".into()));
                }
                chi
            }
            Multiplier::Theta(_) => {
                if weight.is_integral() {
                    return Err(VerifyError::Multiplier("the theta multiplier needs half-integral weight".into()));
                }
                let psi = psi_char(a, b, c, d, 1).map_err(|e| VerifyError::Multiplier(e.to_string()))?.to_complex();
                chi * psi.powi((2.0 * kappa).round() as i32)
            }
        };
        for tau in sample_points() {
            let j = Complex64::new(c as f64, 0.0) * tau + d as f64;
            let gtau = (tau * a as f64 + b as f64) / j;
            let auto = if weight.is_integral() {
                j.powi(kappa.round() as i32)
            } else {
                j.sqrt().powi((2.0 * kappa).round() as i32)
            };
            let lhs = eval_qexp(f, gtau);
            let rhs = eval_qexp(f, tau);
            let tail = lhs.tail_bound.max(rhs.tail_bound * auto.norm());
            if tail > TAIL_LIMIT {
                let at = if lhs.tail_bound > TAIL_LIMIT { gtau } else { tau };
                return Err(VerifyError::Tail { bound: tail, tau: at });
            }
            let residual = (lhs.value - factor * auto * rhs.value).norm() / rhs.value.norm().max(1.0);
            samples.push(ResidualSample {
                matrix: m,
                tau: [tau.re, tau.im],
                residual,
                tail_bound: tail,
            });
        }
    }
    let max_residual = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    Ok(ModularityReport {
        level,
        max_residual,
        samples,
    })
}

/// Outcome of the exact fit `f = Σ x_{a,b} E_4^a E_6^b`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Level1Fit {
    /// `((a, b), x_{a,b})` with nonzero `x`.
    pub terms: Vec<((u32, u32), String)>,
    /// First exponent where the fit and `f` disagree.
    pub mismatch: Option<i64>,
    pub checked_below: i64,
}

impl Level1Fit {
    pub fn ok(&self) -> bool {
        self.mismatch.is_none()
    }
}

fn monomials(wt: i64) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut b = 0;
    while 6 * b <= wt {
        if (wt - 6 * b) % 4 == 0 {
            out.push((((wt - 6 * b) / 4) as u32, b as u32));
        }
        b += 1;
    }
    out
}

/// Fits `f` of weight `wt` exactly on the first `dim` coefficients and
/// checks the fit on the rest of the window.
pub fn level1_exact_check(f: &QExp, wt: i64) -> Result<Level1Fit, VerifyError> {
    if wt < 0 || wt % 2 == 1 || wt == 2 {
        return Err(VerifyError::OddWeight(wt));
    }
    if f.exponent_denominator() != 1 || !f.is_rational() {
        return Err(VerifyError::NotRational);
    }
    let (lo, hi) = f.window();
    let basis_idx = monomials(wt);
    let dim = basis_idx.len();
    if lo > 0 || hi < dim as i64 {
        return Err(VerifyError::Window { needed: dim as i64 - 1, available: hi });
    }
    if let Some((&a, _)) = f.coefficients().iter().find(|(a, c)| **a < 0 && !c.is_zero()) {
        return Err(VerifyError::Meromorphic(a));
    }
    let prec = hi as u64;
    let e4 = fixtures::eisenstein(4, prec).expect("weight 4 exists");
    let e6 = fixtures::eisenstein(6, prec).expect("weight 6 exists");
    let mut basis = Vec::new();
    for &(a, b) in &basis_idx {
        let mut g = QExp::from_rationals(0, (0..prec).map(|n| if n == 0 { int(1) } else { int(0) }).collect(), Weight::integral(0));
        if a > 0 {
            g = g.mul(&e4.pow(a));
        }
        if b > 0 {
            g = g.mul(&e6.pow(b));
        }
        basis.push(g.truncate(hi));
    }
    let coeff = |g: &QExp, n: i64| g.coeff_int(n).and_then(|c| c.as_rational()).unwrap_or_else(Rational::zero);
    let mat: Vec<Vec<Rational>> = (0..dim as i64)
        .map(|n| {
            let mut row: Vec<Rational> = basis.iter().map(|g| coeff(g, n)).collect();
            row.push(coeff(f, n));
            row
        })
        .collect();
    let x = solve_augmented(mat).expect("the leading coefficients of E4^a E6^b are independent");
    let mut mismatch = None;
    for n in 0..hi {
        let fitted: Rational = basis.iter().zip(&x).map(|(g, xi)| coeff(g, n) * xi).sum();
        if fitted != coeff(f, n) {
            mismatch = Some(n);
            break;
        }
    }
    Ok(Level1Fit {
        terms: basis_idx
            .into_iter()
            .zip(x)
            .filter(|(_, v)| !v.is_zero())
            .map(|(m, v)| (m, v.to_string()))
            .collect(),
        mismatch,
        checked_below: hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational;

    #[test]
    fn theta_at_i() {
        let e = eval_qexp(&fixtures::theta(60), Complex64::new(0.0, 1.0));
        // Σ e^{-2π n²}
        assert!((e.value.re - 1.003_734_885_487_739_3).abs() < 1e-14);
        assert!(e.tail_bound < 1e-12);
    }

    #[test]
    fn tail_bound_dominates_true_tail() {
        let long = fixtures::eisenstein(4, 400).unwrap();
        let short = long.truncate(25);
        let tau = Complex64::new(0.1, 0.3);
        let a = eval_qexp(&long, tau);
        let b = eval_qexp(&short, tau);
        assert!((a.value - b.value).norm() <= b.tail_bound);
    }

    #[test]
    fn eisenstein_level_one() {
        let e4 = fixtures::eisenstein(4, 200).unwrap();
        let r = modularity_residual(&e4, 1, &Multiplier::Dirichlet(DirichletCharacter::trivial(1))).unwrap();
        assert!(r.max_residual < 1e-9, "{}", r.max_residual);
        // q is not modular
        let q = QExp::from_coefficients(1, 0, 200, Weight::integral(4), vec![(1, crate::scalars::Cyc::one())]);
        let r = modularity_residual(&q, 1, &Multiplier::Dirichlet(DirichletCharacter::trivial(1))).unwrap();
        assert!(r.max_residual > 1e-3);
    }

    #[test]
    fn theta_multiplier() {
        let th = fixtures::theta(400);
        let triv = DirichletCharacter::trivial(4);
        let r = modularity_residual(&th, 4, &Multiplier::Theta(triv.clone())).unwrap();
        assert!(r.max_residual < 1e-9, "{}", r.max_residual);
        let h = fixtures::cohen_eisenstein(2, 400).unwrap();
        let r = modularity_residual(&h, 4, &Multiplier::Theta(triv)).unwrap();
        assert!(r.max_residual < 1e-8, "{}", r.max_residual);
        assert!(matches!(modularity_residual(&th, 2, &Multiplier::Theta(DirichletCharacter::trivial(1))), Err(VerifyError::Level(2))));
    }

    #[test]
    fn numeric_rejections() {
        let j = fixtures::j_invariant(200);
        assert_eq!(
            modularity_residual(&j, 1, &Multiplier::Dirichlet(DirichletCharacter::trivial(1))).unwrap_err(),
            VerifyError::Meromorphic(-1)
        );
        let e4 = fixtures::eisenstein(4, 8).unwrap();
        assert!(matches!(
            modularity_residual(&e4, 1, &Multiplier::Dirichlet(DirichletCharacter::trivial(1))),
            Err(VerifyError::Tail { .. })
        ));
    }

    #[test]
    fn exact_fits() {
        let e4 = fixtures::eisenstein(4, 30).unwrap();
        let fit = level1_exact_check(&e4.mul(&e4), 8).unwrap();
        assert!(fit.ok());
        assert_eq!(fit.terms, vec![((2, 0), "1".to_string())]);
        let d = fixtures::delta(30);
        let fit = level1_exact_check(&d, 12).unwrap();
        assert!(fit.ok());
        assert_eq!(fit.terms.len(), 2);
        let q = QExp::from_rationals(0, vec![int(0), int(1), int(0), int(0)], Weight::integral(4));
        let fit = level1_exact_check(&q, 4).unwrap();
        assert_eq!(fit.mismatch, Some(1));
        let e4s = e4.scale_rational(&rational(1, 3));
        let mut coeffs: Vec<_> = e4s.coefficients().iter().map(|(a, c)| (*a, c.clone())).collect();
        coeffs[5].1 = coeffs[5].1.scale(&rational(2, 1));
        let broken = QExp::from_coefficients(1, 0, 30, Weight::integral(4), coeffs);
        assert_eq!(level1_exact_check(&broken, 4).unwrap().mismatch, Some(5));
        assert!(matches!(level1_exact_check(&e4.truncate(1), 12), Err(VerifyError::Window { .. })));
        assert_eq!(level1_exact_check(&e4, 2).unwrap_err(), VerifyError::OddWeight(2));
    }
}
