//! Plus-space membership, the coefficient projections `P_ε`, `P_2`, and the
//! bijection `L_ε` between plus-space forms and two-component vector-valued
//! forms for `D_1` (ε = +1) or `D_1(-1)` (ε = -1).

use thiserror::Error;

use crate::qseries::{QExp, SeriesError, Weight};
use crate::weilrep::{vv_support_check, FqModule, VVQExp};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlusError {
    #[error("xi must be +1 or -1, got {0}")]
    BadSign(i32),
    #[error(
        "the residue filter is a projection of modular forms only when 4 | N (N = {0}); \
         for 4 not dividing N use Kohnen's projection, which is not implemented"
    )]
    KohnenProjection(u64),
    #[error("not in the plus space: coefficient at q^{n} with eps = {eps}")]
    NotPlusSpace { n: i64, eps: i32 },
    #[error("vector-valued form has the wrong module or violates the support law")]
    Support,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Weight `k + 1/2`, sign ξ and level data; `epsilon = (-1)^k ξ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlusContext {
    pub k: u32,
    pub xi: i32,
    pub epsilon: i32,
    pub n: u64,
    pub four_divides_n: bool,
}

impl PlusContext {
    pub fn new(k: u32, xi: i32, n: u64) -> Result<PlusContext, PlusError> {
        if xi != 1 && xi != -1 {
            return Err(PlusError::BadSign(xi));
        }
        let epsilon = if k % 2 == 0 { xi } else { -xi };
        Ok(PlusContext {
            k,
            xi,
            epsilon,
            n,
            four_divides_n: n % 4 == 0,
        })
    }

    /// Context with the given ε directly (ξ is derived).
    pub fn with_epsilon(k: u32, epsilon: i32, n: u64) -> Result<PlusContext, PlusError> {
        let xi = if k % 2 == 0 { epsilon } else { -epsilon };
        PlusContext::new(k, xi, n)
    }

    fn residue(&self) -> i64 {
        (self.epsilon as i64).rem_euclid(4)
    }

    pub fn module(&self) -> FqModule {
        if self.epsilon == 1 {
            FqModule::d1()
        } else {
            FqModule::d1_dual()
        }
    }
}

fn integral(f: &QExp) -> Option<QExp> {
    let g = f.normalize();
    (g.exponent_denominator() == 1).then_some(g)
}

fn first_violation(f: &QExp, eps: i32) -> Option<i64> {
    f.coefficients()
        .keys()
        .copied()
        .find(|n| !matches!((eps as i64 * n).rem_euclid(4), 0 | 1))
}

/// Every nonzero coefficient sits at `n` with `ε n ≡ 0, 1 (mod 4)`. Series
/// with genuinely fractional exponents are never in the plus space.
pub fn is_plus_space(f: &QExp, ctx: &PlusContext) -> bool {
    match integral(f) {
        Some(g) => first_violation(&g, ctx.epsilon).is_none(),
        None => false,
    }
}

fn require_four(ctx: &PlusContext) -> Result<(), PlusError> {
    if ctx.four_divides_n {
        Ok(())
    } else {
        Err(PlusError::KohnenProjection(ctx.n))
    }
}

/// `P_ε`: keeps exponents `≡ 0, ε (mod 4)`.
pub fn project_plus(f: &QExp, ctx: &PlusContext) -> Result<QExp, PlusError> {
    require_four(ctx)?;
    let g = integral(f).ok_or(SeriesError::FractionalExponents(f.exponent_denominator()))?;
    Ok(g.filter_residues(4, &[0, ctx.residue()])?)
}

/// `P_2`: keeps exponents `≡ 0, 2 (mod 4)`.
pub fn project_two(f: &QExp, ctx: &PlusContext) -> Result<QExp, PlusError> {
    require_four(ctx)?;
    let g = integral(f).ok_or(SeriesError::FractionalExponents(f.exponent_denominator()))?;
    Ok(g.filter_residues(4, &[0, 2])?)
}

/// `L_ε f = f_0 e_0 + f_ε e_1` with `f_j = Σ_{n ≡ j (4)} c_n q^{n/4}`.
pub fn lift_l(f: &QExp, ctx: &PlusContext) -> Result<VVQExp, PlusError> {
    let g = integral(f).ok_or(SeriesError::FractionalExponents(f.exponent_denominator()))?;
    if let Some(n) = first_violation(&g, ctx.epsilon) {
        return Err(PlusError::NotPlusSpace { n, eps: ctx.epsilon });
    }
    let parts = g.decompose_mod4()?;
    let [p0, _, _, _] = &parts;
    let pe = &parts[ctx.residue() as usize];
    Ok(VVQExp::new(ctx.module())
        .with_component(0, p0.clone())
        .with_component(1, pe.clone()))
}

/// `g_0(4τ) + g_ε(4τ)`.
pub fn lift_l_inverse(g: &VVQExp, ctx: &PlusContext) -> Result<QExp, PlusError> {
    if g.module != ctx.module() || !vv_support_check(g) || g.components.keys().any(|&c| c > 1) {
        return Err(PlusError::Support);
    }
    let mut out: Option<QExp> = None;
    for comp in g.components.values() {
        // q^{a/w} at 4τ is q^{4a/w}, an integer power by the support law
        let w = comp.exponent_denominator() as i64;
        let (lo, hi) = comp.window();
        let scaled = QExp::from_coefficients(
            1,
            num_integer::Integer::div_ceil(&(4 * lo), &w),
            num_integer::Integer::div_ceil(&(4 * hi), &w),
            comp.weight(),
            comp.coefficients().iter().map(|(a, c)| (4 * a / w, c.clone())),
        );
        out = Some(match out {
            None => scaled,
            Some(acc) => acc.add_unchecked(&scaled),
        });
    }
    Ok(out.unwrap_or_else(|| QExp::zero(1, 0, 0, Weight::half_integral(ctx.k as i64))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalars::{rational, Cyc};
    use proptest::prelude::*;

    fn plus1(k: u32) -> PlusContext {
        PlusContext::new(k, 1, 4).unwrap()
    }

    #[test]
    fn context_sign() {
        assert_eq!(PlusContext::new(3, 1, 1).unwrap().epsilon, -1);
        assert_eq!(PlusContext::new(2, -1, 1).unwrap().epsilon, -1);
        assert_eq!(PlusContext::with_epsilon(3, 1, 1).unwrap().xi, -1);
        assert!(PlusContext::new(2, 0, 1).is_err());
    }

    #[test]
    fn membership() {
        assert!(is_plus_space(&fixtures::theta(100), &plus1(0)));
        let q2 = QExp::from_rationals(0, vec![rational(0, 1), rational(0, 1), rational(1, 1)], Weight::integral(0));
        assert!(!is_plus_space(&q2, &plus1(0)));
        assert!(is_plus_space(&fixtures::cohen_eisenstein(2, 200).unwrap(), &plus1(2)));
        assert!(is_plus_space(&fixtures::cohen_eisenstein(3, 200).unwrap(), &PlusContext::new(3, 1, 4).unwrap()));
        assert!(!is_plus_space(&fixtures::cohen_eisenstein(3, 200).unwrap(), &PlusContext::with_epsilon(3, 1, 4).unwrap()));
        assert!(!is_plus_space(&fixtures::theta_component(1, 10), &plus1(0)));
    }

    #[test]
    fn projections() {
        let pp = fixtures::plus_product(4, 120).unwrap();
        assert_eq!(project_plus(&pp, &plus1(4)).unwrap(), pp);
        let f = QExp::from_rationals(0, vec![rational(0, 1), rational(1, 1), rational(1, 1), rational(0, 1), rational(1, 1)], Weight::integral(0));
        let p = project_plus(&f, &plus1(0)).unwrap();
        let expect = QExp::from_rationals(0, vec![rational(0, 1), rational(1, 1), rational(0, 1), rational(0, 1), rational(1, 1)], Weight::integral(0));
        assert_eq!(p, expect);
        assert_eq!(project_plus(&p, &plus1(0)).unwrap(), p);
        let two = project_two(&f, &plus1(0)).unwrap();
        assert_eq!(two.coefficients().keys().copied().collect::<Vec<_>>(), vec![2, 4]);
        let odd = PlusContext::new(0, 1, 3).unwrap();
        assert_eq!(project_plus(&f, &odd), Err(PlusError::KohnenProjection(3)));
    }

    #[test]
    fn theta_lifts_to_vector_theta() {
        let ctx = plus1(0);
        let th = fixtures::theta(100);
        let v = lift_l(&th, &ctx).unwrap();
        assert!(vv_support_check(&v));
        let c0 = v.component(0).unwrap().normalize();
        let c1 = v.component(1).unwrap();
        assert!(c0.agrees_with(&fixtures::theta(25)));
        assert!(c1.agrees_with(&fixtures::theta_component(1, 25)));
        assert_eq!(lift_l_inverse(&v, &ctx).unwrap(), th);
        let vt = VVQExp::new(FqModule::d1())
            .with_component(0, fixtures::theta(25))
            .with_component(1, fixtures::theta_component(1, 25));
        assert_eq!(lift_l_inverse(&vt, &ctx).unwrap(), fixtures::theta(100));
    }

    #[test]
    fn zero_and_cohen() {
        let ctx = plus1(2);
        let z = QExp::zero(1, 0, 50, Weight::half_integral(2));
        let lz = lift_l(&z, &ctx).unwrap();
        assert!(lz.is_zero());
        assert_eq!(lift_l_inverse(&lz, &ctx).unwrap(), z);
        let h = fixtures::cohen_eisenstein(2, 200).unwrap();
        let lh = lift_l(&h, &ctx).unwrap();
        assert_eq!(lh.component(0).unwrap().get(0), Some(Cyc::from_rational(rational(1, 120))));
        assert_eq!(lift_l_inverse(&lh, &ctx).unwrap(), h);
        let bad = QExp::from_rationals(0, vec![rational(0, 1), rational(0, 1), rational(5, 1)], Weight::half_integral(2));
        assert_eq!(lift_l(&bad, &ctx).unwrap_err(), PlusError::NotPlusSpace { n: 2, eps: 1 });
    }

    #[test]
    fn minus_branch() {
        let ctx = PlusContext::with_epsilon(3, -1, 4).unwrap();
        let h = fixtures::cohen_eisenstein(3, 200).unwrap();
        let v = lift_l(&h, &ctx).unwrap();
        assert_eq!(v.module, FqModule::d1_dual());
        assert!(vv_support_check(&v));
        assert_eq!(lift_l_inverse(&v, &ctx).unwrap(), h);
        assert_eq!(lift_l_inverse(&v, &PlusContext::with_epsilon(3, 1, 4).unwrap()), Err(PlusError::Support));
    }

    fn plus_series(eps: i32) -> impl Strategy<Value = QExp> {
        prop::collection::vec((-20i64..20, 1i64..5), 0..40).prop_map(move |vals| {
            let mut coeffs = Vec::new();
            for (n, (num, den)) in vals.into_iter().enumerate() {
                let n = n as i64;
                if matches!((eps as i64 * n).rem_euclid(4), 0 | 1) {
                    coeffs.push((n, Cyc::from_rational(rational(num, den))));
                }
            }
            QExp::from_coefficients(1, 0, 40, Weight::half_integral(2), coeffs)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn round_trips(f in plus_series(1), g in plus_series(-1)) {
            let c1 = PlusContext::with_epsilon(2, 1, 4).unwrap();
            let c2 = PlusContext::with_epsilon(2, -1, 4).unwrap();
            prop_assert!(is_plus_space(&f, &c1));
            prop_assert_eq!(project_plus(&f, &c1).unwrap(), f.clone());
            let v = lift_l(&f, &c1).unwrap();
            prop_assert!(vv_support_check(&v));
            prop_assert_eq!(lift_l_inverse(&v, &c1).unwrap(), f.clone());
            prop_assert_eq!(lift_l(&lift_l_inverse(&v, &c1).unwrap(), &c1).unwrap(), v);
            let w = lift_l(&g, &c2).unwrap();
            prop_assert_eq!(lift_l_inverse(&w, &c2).unwrap(), g);
        }

        #[test]
        fn projection_lands_in_plus_space(vals in prop::collection::vec(-9i64..9, 1..60), eps in prop::sample::select(vec![1, -1])) {
            let f = QExp::from_rationals(0, vals.iter().map(|&v| rational(v, 1)).collect(), Weight::half_integral(1));
            let ctx = PlusContext::with_epsilon(1, eps, 8).unwrap();
            let p = project_plus(&f, &ctx).unwrap();
            prop_assert!(is_plus_space(&p, &ctx));
            prop_assert_eq!(project_plus(&p, &ctx).unwrap(), p.clone());
            prop_assert_eq!(p == f, is_plus_space(&f, &ctx));
        }
    }
}
