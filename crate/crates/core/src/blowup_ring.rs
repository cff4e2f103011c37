//! Cohomology of the blow-up `M̃` of `M` along `N`.
//!
//! A class is kept in the canonical Gysin-pair form
//! `f*(a) + Σ_{j=0}^{r-2} ĩ^!(p*(β_j) ξ^j)`: any `ξ^{r-1}` component of an
//! exceptional term is traded for an `f*` term through
//! `f*i^!(y) = ĩ^!(p*(y) c_{r-1}(Q))`.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::graded_poly::{CoefficientMode, Poly};
use crate::manifold::{Ambient, MClass, ManifoldModel, Submanifold};
use crate::proj_bundle::ProjectiveBundleRing;

static NEXT_CONTEXT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, PartialEq, Eq)]
pub struct BlowupElement {
    ctx: u64,
    pub m_part: MClass,
    /// `β_j` for `j = 0..r-1`, coefficients of `ξ^j` under `ĩ^!`.
    pub exc: Vec<Poly>,
}

impl BlowupElement {
    pub fn is_zero(&self) -> bool {
        self.m_part.is_zero() && self.exc.iter().all(Poly::is_zero)
    }
}

impl fmt::Debug for BlowupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {:?})", self.m_part, self.exc)
    }
}

#[derive(Debug, Clone)]
pub struct BlowupContext {
    id: u64,
    ambient: Ambient,
    pe: ProjectiveBundleRing,
    c_q_top: Poly,
}

impl BlowupContext {
    /// Builds `H*(P(E))` after checking the dimension equation and the
    /// embedding tables, then checks Whitney: `i*c(M) = c(N)c(E)`.
    pub fn new(
        model: ManifoldModel,
        sub: Submanifold,
        rank: u32,
        e_classes: &[Poly],
    ) -> Result<Self> {
        let mode = model.ring.mode();
        let unit = mode.unit_degree();
        let (dm, dn) = (model.ring.dimension(), sub.ring.dimension());
        if dm != dn + unit * rank {
            return Err(Error::DimensionMismatch(format!(
                "dim M = {dm} but dim N + {unit}·r = {dn} + {}",
                unit * rank
            )));
        }
        let pe = ProjectiveBundleRing::build(sub.ring.clone(), rank, e_classes)?;
        let e_total = pe.e_total();
        let ambient = Ambient::new(model, sub, rank, &e_total)?;
        if let Some((degree, lhs, rhs)) = ambient.whitney_defect(&e_total) {
            return Err(Error::WhitneyViolation {
                degree,
                pulled_back: lhs.to_string(),
                product: rhs.to_string(),
            });
        }
        let c_q_top = pe.chern_q_top();
        Ok(BlowupContext {
            id: NEXT_CONTEXT_ID.fetch_add(1, Ordering::Relaxed),
            ambient,
            pe,
            c_q_top,
        })
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn bundle(&self) -> &ProjectiveBundleRing {
        &self.pe
    }

    pub fn mode(&self) -> CoefficientMode {
        self.ambient.mode()
    }

    pub fn rank(&self) -> u32 {
        self.pe.rank()
    }

    pub fn is_formal(&self) -> bool {
        self.ambient.model().is_formal()
    }

    /// Real dimension of `M̃` (equal to that of `M`).
    pub fn dimension(&self) -> u32 {
        self.ambient.dimension()
    }

    pub fn zero(&self) -> BlowupElement {
        BlowupElement {
            ctx: self.id,
            m_part: self.ambient.zero(),
            exc: vec![self.pe.base().zero(); self.rank() as usize - 1],
        }
    }

    pub fn one(&self) -> BlowupElement {
        self.f_pullback(&self.ambient.one())
    }

    fn check(&self, x: &BlowupElement) -> Result<()> {
        if x.ctx == self.id {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// Brings `f*(m) + ĩ^!(γ)` into canonical form.
    pub fn canonicalize(&self, m: &MClass, gamma: &Poly) -> BlowupElement {
        let r = self.rank() as usize;
        let mut betas = self.pe.expand_in_xi(gamma);
        let top = betas.pop().expect("rank >= 1");
        let mut m_part = self.ambient.normalize(m);
        if !top.is_zero() {
            // γ - p*(β) c_{r-1}(Q) has no ξ^{r-1} term; f*i^!(β) absorbs it.
            let correction = self.pe.mul(&top, &self.c_q_top);
            let rest = self.pe.expand_in_xi(&correction);
            for (b, c) in betas.iter_mut().zip(rest) {
                *b = &*b - &c;
            }
            m_part = self.ambient.add(&m_part, &self.ambient.i_shriek(&top));
        }
        debug_assert_eq!(betas.len(), r - 1);
        BlowupElement {
            ctx: self.id,
            m_part,
            exc: betas,
        }
    }

    /// `Σ β_j ξ^j` as a class on `P(E)`.
    pub fn exceptional_gamma(&self, x: &BlowupElement) -> Poly {
        self.pe.from_xi_coefficients(&x.exc)
    }

    pub fn f_pullback(&self, a: &MClass) -> BlowupElement {
        let mut x = self.zero();
        x.m_part = self.ambient.normalize(a);
        x
    }

    pub fn i_tilde_shriek(&self, gamma: &Poly) -> BlowupElement {
        self.canonicalize(&self.ambient.zero(), gamma)
    }

    /// `ĩ*(f*a + ĩ^!γ) = p*(i*a) - ξγ`.
    pub fn i_tilde_pullback(&self, x: &BlowupElement) -> Poly {
        let from_m = self.pe.pullback(&self.ambient.i_star(&x.m_part));
        let self_int = self.pe.mul(&self.pe.xi_poly(), &self.exceptional_gamma(x));
        self.pe.normalize(&(&from_m - &self_int))
    }

    pub fn add(&self, x: &BlowupElement, y: &BlowupElement) -> Result<BlowupElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(BlowupElement {
            ctx: self.id,
            m_part: self.ambient.add(&x.m_part, &y.m_part),
            exc: x.exc.iter().zip(&y.exc).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, x: &BlowupElement, y: &BlowupElement) -> Result<BlowupElement> {
        self.add(x, &self.neg(y))
    }

    pub fn neg(&self, x: &BlowupElement) -> BlowupElement {
        self.scale(x, &BigInt::from(-1))
    }

    pub fn scale(&self, x: &BlowupElement, k: &BigInt) -> BlowupElement {
        BlowupElement {
            ctx: x.ctx,
            m_part: self.ambient.scale(&x.m_part, k),
            exc: x.exc.iter().map(|b| b.scale(k)).collect(),
        }
    }

    /// `(a, γ)(a', γ') = (aa', p*(i*a)γ' + p*(i*a')γ - ξγγ')`, canonicalized.
    pub fn multiply(&self, x: &BlowupElement, y: &BlowupElement) -> Result<BlowupElement> {
        self.check(x)?;
        self.check(y)?;
        let pe = &self.pe;
        let (g, h) = (self.exceptional_gamma(x), self.exceptional_gamma(y));
        let m_part = self.ambient.mul(&x.m_part, &y.m_part);
        let ia = pe.pullback(&self.ambient.i_star(&x.m_part));
        let ib = pe.pullback(&self.ambient.i_star(&y.m_part));
        let cross = &pe.mul(&ia, &h) + &pe.mul(&ib, &g);
        let self_int = pe.mul(&pe.xi_poly(), &pe.mul(&g, &h));
        Ok(self.canonicalize(&m_part, &(&cross - &self_int)))
    }

    pub fn pow(&self, x: &BlowupElement, exp: u32) -> Result<BlowupElement> {
        (0..exp).try_fold(self.one(), |acc, _| self.multiply(&acc, x))
    }

    /// `∫_M a + ∫_N fiber_integral(γ)` for a possibly non-canonical pair.
    pub fn integrate_pair(&self, m: &MClass, gamma: &Poly) -> Result<BigInt> {
        let a = self.ambient.integrate(m)?;
        let b = self.pe.integrate(gamma)?;
        Ok(Poly::constant(self.mode(), a + b).constant_term())
    }

    pub fn integrate(&self, x: &BlowupElement) -> Result<BigInt> {
        self.check(x)?;
        self.integrate_pair(&x.m_part, &self.exceptional_gamma(x))
    }

    /// Homogeneous component of degree `d`.
    pub fn degree_part(&self, x: &BlowupElement, d: u32) -> BlowupElement {
        let unit = self.mode().unit_degree();
        BlowupElement {
            ctx: x.ctx,
            m_part: self.ambient.degree_part(&x.m_part, d),
            exc: x
                .exc
                .iter()
                .enumerate()
                .map(|(j, b)| match d.checked_sub(unit * (j as u32 + 1)) {
                    Some(e) => b.degree_part(e),
                    None => self.pe.base().zero(),
                })
                .collect(),
        }
    }

    /// `ĩ^!(1)`, the Poincaré dual of the exceptional divisor.
    pub fn exceptional_class(&self) -> BlowupElement {
        self.i_tilde_shriek(&self.pe.ring().one())
    }

    /// `η = -ĩ^!(1)`.
    pub fn eta(&self) -> BlowupElement {
        self.neg(&self.exceptional_class())
    }

    /// `c(M̃) - f*c(M)`: minus the exceptional pushforward of
    /// `p*c(N) · (1/ξ)(Σ c_i(E)(1+ξ)^{r-i}(1-ξ) - c(E))`. The division by
    /// `ξ` happens in the free ring, before the fundamental relation.
    pub fn defect(&self) -> Result<BlowupElement> {
        let pe = &self.pe;
        let mode = self.mode();
        let r = self.rank();
        let xi = pe.xi_poly();
        let one_plus = &Poly::one(mode) + &xi;
        let one_minus = &Poly::one(mode) - &xi;
        let mut bracket = -&pe.e_total();
        for i in 0..=r {
            let term = &(&pe.e_class(i) * &one_plus.pow(r - i)) * &one_minus;
            bracket = &bracket + &term;
        }
        let quotient = bracket.exact_divide_by_generator(pe.xi())?;
        let inner = pe.mul(
            &pe.pullback(&self.ambient.submanifold().total_class),
            &quotient,
        );
        Ok(self.i_tilde_shriek(&-inner))
    }

    fn blowup_total_class(&self) -> Result<BlowupElement> {
        let pulled = self.f_pullback(&self.ambient.total_class());
        self.add(&pulled, &self.defect()?)
    }

    /// Total Chern class of `M̃`.
    pub fn chern_blowup(&self) -> Result<BlowupElement> {
        if self.mode() != CoefficientMode::Integers {
            return Err(Error::WrongCoefficients(
                "Chern classes need integer coefficients; use the Stiefel-Whitney variant".into(),
            ));
        }
        self.blowup_total_class()
    }

    /// Total Stiefel-Whitney class of `M̃` (real codimension `r`, `ξ` of
    /// degree 1).
    pub fn sw_blowup(&self) -> Result<BlowupElement> {
        if self.mode() != CoefficientMode::Mod2 {
            return Err(Error::WrongCoefficients(
                "Stiefel-Whitney classes need Z/2 coefficients".into(),
            ));
        }
        self.blowup_total_class()
    }

    /// Whichever of [`Self::chern_blowup`] and [`Self::sw_blowup`] fits the
    /// coefficient mode.
    pub fn total_class(&self) -> Result<BlowupElement> {
        self.blowup_total_class()
    }

    /// Components of a class in degrees `0..=max_degree`.
    pub fn components(&self, x: &BlowupElement, max_degree: u32) -> Vec<(u32, BlowupElement)> {
        (0..=max_degree)
            .map(|d| (d, self.degree_part(x, d)))
            .collect()
    }

    /// Random canonical element of a given degree.
    pub fn random_element<R: rand::Rng + ?Sized>(&self, degree: u32, rng: &mut R) -> BlowupElement {
        let m = self.random_m_class(degree, rng);
        let unit = self.mode().unit_degree();
        let gamma = match degree.checked_sub(unit) {
            Some(d) => crate::sampling::random_homogeneous(self.pe.ring(), d, rng),
            None => self.pe.ring().zero(),
        };
        self.canonicalize(&m, &gamma)
    }

    pub fn random_m_class<R: rand::Rng + ?Sized>(&self, degree: u32, rng: &mut R) -> MClass {
        let basis = self.ambient.basis(degree);
        let mut out = self.ambient.zero();
        if basis.is_empty() {
            return out;
        }
        for _ in 0..rng.gen_range(1..=crate::sampling::MAX_TERMS) {
            let b = &basis[rng.gen_range(0..basis.len())];
            let k = BigInt::from(
                rng.gen_range(-crate::sampling::MAX_COEFFICIENT..=crate::sampling::MAX_COEFFICIENT),
            );
            out = self.ambient.add(&out, &self.ambient.scale(b, &k));
        }
        self.ambient.normalize(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{formal, linear_subspace, Field};
    use crate::sampling::random_homogeneous;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Z: CoefficientMode = CoefficientMode::Integers;
    const Z2: CoefficientMode = CoefficientMode::Mod2;

    fn cp_point(n: u32) -> BlowupContext {
        linear_subspace(Field::Complex, Z, n, 0)
            .unwrap()
            .into_context()
            .unwrap()
    }

    fn cp3_line() -> BlowupContext {
        linear_subspace(Field::Complex, Z, 3, 1)
            .unwrap()
            .into_context()
            .unwrap()
    }

    fn formal_ctx(mode: CoefficientMode, dim_m: u32, dim_n: u32) -> BlowupContext {
        formal(mode, dim_m, dim_n, None)
            .unwrap()
            .into_context()
            .unwrap()
    }

    fn pe(ctx: &BlowupContext, s: &str) -> Poly {
        let ring = ctx.bundle().ring();
        Poly::parse(s, ctx.mode(), |n| ring.generator(n).cloned()).unwrap()
    }

    fn m(ctx: &BlowupContext, s: &str) -> MClass {
        ctx.ambient().parse_base(s).unwrap()
    }

    fn binomial(n: u32, k: i64) -> i64 {
        if k < 0 || k > n as i64 {
            return 0;
        }
        (0..k).fold(1i64, |b, i| b * (n as i64 - i) / (i + 1))
    }

    #[test]
    fn build_examples() {
        cp_point(2);
        cp3_line();
        let mut data = linear_subspace(Field::Complex, Z, 3, 1).unwrap();
        data.e_classes = vec![];
        match data.into_context() {
            Err(Error::WhitneyViolation { degree, .. }) => assert_eq!(degree, 2),
            other => panic!("expected a Whitney violation, got {other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let mut data = linear_subspace(Field::Complex, Z, 3, 1).unwrap();
        data.rank = 1;
        data.e_classes.truncate(1);
        assert!(matches!(
            data.into_context(),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn f_pullback_examples() {
        let ctx = cp3_line();
        let one = ctx.f_pullback(&ctx.ambient().one());
        assert_eq!(one, ctx.one());
        assert!(one.exc.iter().all(Poly::is_zero));
        assert!(ctx.f_pullback(&ctx.ambient().zero()).is_zero());
        let (a, b) = (m(&ctx, "h"), m(&ctx, "2*h^2"));
        assert_eq!(
            ctx.multiply(&ctx.f_pullback(&a), &ctx.f_pullback(&b))
                .unwrap(),
            ctx.f_pullback(&ctx.ambient().mul(&a, &b))
        );
    }

    #[test]
    fn i_tilde_shriek_examples() {
        // r = 2, c1(E) = 2 hN
        let ctx = cp3_line();
        let x = ctx.i_tilde_shriek(&pe(&ctx, "hN*xi"));
        assert_eq!(x.m_part, m(&ctx, "h^3"));
        assert!(x.exc[0].is_zero()); // -hN * 2hN = 0 on CP1
        let x = ctx.i_tilde_shriek(&pe(&ctx, "xi"));
        assert_eq!(x.m_part, m(&ctx, "h^2"));
        assert_eq!(x.exc, vec![pe(&ctx, "-2*hN")]);

        let f = formal_ctx(Z, 8, 4);
        let x = f.i_tilde_shriek(&pe(&f, "cN1*xi"));
        assert_eq!(x.m_part.shriek, pe(&f, "cN1"));
        assert_eq!(x.exc, vec![pe(&f, "-cN1*e1")]);

        for (dm, dn) in [(6, 2), (8, 2), (10, 4)] {
            let f = formal_ctx(Z, dm, dn);
            let y = pe(&f, "3*cN1 - e1");
            let q = f.bundle().chern_q_top();
            let x = f.i_tilde_shriek(&f.bundle().mul(&y, &q));
            assert_eq!(
                x,
                f.canonicalize(&f.ambient().i_shriek(&y), &f.bundle().ring().zero())
            );
            assert!(x.exc.iter().all(Poly::is_zero));

            let one = f.i_tilde_shriek(&f.bundle().ring().one());
            assert!(one.m_part.is_zero());
            assert!(one.exc[0].is_one());
            assert!(one.exc[1..].iter().all(Poly::is_zero));
        }
    }

    #[test]
    fn i_tilde_pullback_examples() {
        let ctx = cp3_line();
        let a = m(&ctx, "h + 3*h^2");
        assert_eq!(
            ctx.i_tilde_pullback(&ctx.f_pullback(&a)),
            ctx.bundle().pullback(&ctx.ambient().i_star(&a))
        );
        assert_eq!(
            ctx.i_tilde_pullback(&ctx.exceptional_class()),
            pe(&ctx, "-xi")
        );
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for c in [
            cp_point(2),
            cp3_line(),
            formal_ctx(Z, 6, 2),
            formal_ctx(Z2, 5, 2),
        ] {
            let ring = c.bundle().ring().clone();
            for _ in 0..20 {
                let d = rng.gen_range(0..=ring.dimension());
                let gamma = random_homogeneous(&ring, d, &mut rng);
                let lhs = c.i_tilde_pullback(&c.i_tilde_shriek(&gamma));
                let rhs = -c.bundle().mul(&gamma, &c.bundle().xi_poly());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn multiply_examples() {
        let ctx = cp3_line();
        let a = m(&ctx, "h");
        let gamma = pe(&ctx, "xi + hN");
        let lhs = ctx
            .multiply(&ctx.f_pullback(&a), &ctx.i_tilde_shriek(&gamma))
            .unwrap();
        let ia = ctx.bundle().pullback(&ctx.ambient().i_star(&a));
        let rhs = ctx.i_tilde_shriek(&ctx.bundle().mul(&ia, &gamma));
        assert_eq!(lhs, rhs);

        for r in 2..=6 {
            let c = formal_ctx(Z, 2 * r, 0);
            let eta = c.eta();
            let mut power = eta.clone();
            for nu in 1..r {
                power = c.multiply(&power, &eta).unwrap();
                let expected = c.neg(&c.i_tilde_shriek(&c.bundle().xi_poly().pow(nu)));
                assert_eq!(power, expected, "r = {r}, ν = {nu}");
            }
        }

        let ctx = cp_point(2);
        let eta_sq = ctx.pow(&ctx.eta(), 2).unwrap();
        assert_eq!(ctx.integrate(&eta_sq).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn multiply_rejects_foreign_elements() {
        let (a, b) = (cp_point(2), cp_point(2));
        assert_eq!(
            a.multiply(&a.one(), &b.one()).unwrap_err(),
            Error::ContextMismatch
        );
    }

    #[test]
    fn integrate_examples() {
        let ctx = cp3_line();
        let top = m(&ctx, "5*h^3");
        assert_eq!(
            ctx.integrate(&ctx.f_pullback(&top)).unwrap(),
            BigInt::from(5)
        );
        let f = formal_ctx(Z, 6, 2);
        assert!(matches!(
            f.integrate(&f.one()),
            Err(Error::NoIntegration { .. })
        ));

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for c in [cp_point(2), cp_point(4), cp3_line()] {
            for _ in 0..20 {
                let d = c.dimension();
                let mm = c.random_m_class(d, &mut rng);
                let gamma = random_homogeneous(c.bundle().ring(), d - 2, &mut rng);
                assert_eq!(
                    c.integrate_pair(&mm, &gamma).unwrap(),
                    c.integrate(&c.canonicalize(&mm, &gamma)).unwrap()
                );
            }
        }
    }

    #[test]
    fn line_bundle_blowups_change_nothing() {
        for (dm, dn) in [(2, 0), (4, 2), (6, 4), (8, 6)] {
            let f = formal_ctx(Z, dm, dn);
            assert_eq!(f.rank(), 1);
            assert!(f.defect().unwrap().is_zero());
            assert_eq!(
                f.chern_blowup().unwrap(),
                f.f_pullback(&f.ambient().total_class())
            );
        }
        for (dm, dn) in [(1, 0), (3, 2), (5, 4)] {
            let f = formal_ctx(Z2, dm, dn);
            assert!(f.defect().unwrap().is_zero());
        }
    }

    #[test]
    fn point_blowup_binomial_formula() {
        for r in 2..=6u32 {
            let c = formal_ctx(Z, 2 * r, 0);
            let defect = c.defect().unwrap();
            let eta = c.eta();
            let mut expected = c.zero();
            for nu in 1..=r {
                let k = binomial(r, nu as i64) - binomial(r, nu as i64 - 1);
                let term = c.scale(&c.pow(&eta, nu).unwrap(), &BigInt::from(k));
                expected = c.add(&expected, &term).unwrap();
            }
            assert_eq!(defect, expected, "r = {r}");
        }
    }

    #[test]
    fn second_chern_class_of_a_surface_blowup_in_dimension_six() {
        let c = formal_ctx(Z, 6, 2);
        let c2 = c.degree_part(&c.chern_blowup().unwrap(), 4);
        let amb = c.ambient();
        let c2m = m(&c, "cM2");
        let pd_n = amb.i_shriek(&amb.n_ring().one());
        let lhs = c.f_pullback(&amb.add(&c2m, &pd_n));
        let c1_times_exc = c
            .multiply(&c.f_pullback(&m(&c, "cM1")), &c.exceptional_class())
            .unwrap();
        assert_eq!(c2, c.sub(&lhs, &c1_times_exc).unwrap());
    }

    #[test]
    fn first_chern_class_formula() {
        for r in 2..=6u32 {
            for dn in [0, 2, 4] {
                let c = formal_ctx(Z, dn + 2 * r, dn);
                let c1 = c.degree_part(&c.chern_blowup().unwrap(), 2);
                let expected = c
                    .sub(
                        &c.f_pullback(&m(&c, "cM1")),
                        &c.scale(&c.exceptional_class(), &BigInt::from(r - 1)),
                    )
                    .unwrap();
                assert_eq!(c1, expected, "r = {r}, dim N = {dn}");
            }
        }
    }

    #[test]
    fn exceptional_class_examples() {
        let c = formal_ctx(Z, 6, 4);
        assert_eq!(c.rank(), 1);
        let e = c.exceptional_class();
        assert!(e.exc.is_empty());
        assert_eq!(e.m_part, c.ambient().i_shriek(&c.ambient().n_ring().one()));
    }

    #[test]
    fn stiefel_whitney_examples() {
        for r in 2..=4u32 {
            let c = formal_ctx(Z2, r, 0);
            let defect = c.defect().unwrap();
            let eta = c.eta();
            let mut expected = c.zero();
            for nu in 1..=r {
                let k = (binomial(r, nu as i64) - binomial(r, nu as i64 - 1)).rem_euclid(2);
                if k == 1 {
                    expected = c.add(&expected, &c.pow(&eta, nu).unwrap()).unwrap();
                }
            }
            assert_eq!(defect, expected, "r = {r}");
        }
        // r = 3: 2η + 0η² - 2η³ vanishes mod 2
        assert!(formal_ctx(Z2, 3, 0).defect().unwrap().is_zero());

        let c = formal_ctx(Z2, 3, 1);
        assert_eq!(c.rank(), 2);
        let w1 = c.degree_part(&c.sw_blowup().unwrap(), 1);
        let expected = c
            .add(&c.f_pullback(&m(&c, "wM1")), &c.exceptional_class())
            .unwrap();
        assert_eq!(w1, expected);
        assert!(c.chern_blowup().is_err());
        assert!(cp_point(2).sw_blowup().is_err());
    }

    #[test]
    fn euler_characteristics() {
        for n in 2..=5 {
            let c = cp_point(n);
            let top = c.degree_part(&c.chern_blowup().unwrap(), 2 * n);
            assert_eq!(c.integrate(&top).unwrap(), BigInt::from(2 * n));
        }
        let c = cp3_line();
        let top = c.degree_part(&c.chern_blowup().unwrap(), 6);
        assert_eq!(c.integrate(&top).unwrap(), BigInt::from(6));
    }

    #[test]
    fn chern_classes_vanish_above_dimension() {
        for c in [cp_point(3), cp3_line(), formal_ctx(Z, 8, 2)] {
            let total = c.chern_blowup().unwrap();
            for d in c.dimension() + 1..=c.dimension() + 6 {
                assert!(c.degree_part(&total, d).is_zero());
            }
        }
    }
}
