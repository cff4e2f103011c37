//! Instance checks of the structural identities of blow-up cohomology.
//!
//! Every check compares two independently computed sides exactly and is
//! deterministic in `(context, trials, seed)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::blowup_ring::{BlowupContext, BlowupElement};
use crate::error::Result;
use crate::graded_poly::{CoefficientMode, Poly};
use crate::linalg::kernel;
use crate::manifold::MClass;
use crate::sampling::random_homogeneous;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub inputs: Vec<(String, String)>,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub status: Status,
    pub trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        write!(f, "{tag} {} ({} trials)", self.check_name, self.trials)?;
        if let Some(cx) = &self.counterexample {
            for (k, v) in &cx.inputs {
                write!(f, "\n    {k} = {v}")?;
            }
            write!(f, "\n    left  = {}\n    right = {}", cx.left, cx.right)?;
        }
        Ok(())
    }
}

/// Accumulates trials and keeps the first failure.
struct Tally {
    name: &'static str,
    trials: usize,
    counterexample: Option<Counterexample>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            trials: 0,
            counterexample: None,
        }
    }

    fn record<T: PartialEq + fmt::Debug>(
        &mut self,
        inputs: &[(&str, String)],
        left: &T,
        right: &T,
    ) {
        self.trials += 1;
        if left != right && self.counterexample.is_none() {
            self.counterexample = Some(Counterexample {
                inputs: inputs
                    .iter()
                    .map(|(k, v)| (k.to_string(), v.clone()))
                    .collect(),
                left: format!("{left:?}"),
                right: format!("{right:?}"),
            });
        }
    }

    fn finish(self) -> CheckReport {
        CheckReport {
            check_name: self.name.to_owned(),
            status: if self.counterexample.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            trials: self.trials,
            counterexample: self.counterexample,
        }
    }
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn random_gamma(ctx: &BlowupContext, rng: &mut ChaCha8Rng) -> Poly {
    let ring = ctx.bundle().ring();
    let d = rng.gen_range(0..=ring.dimension());
    random_homogeneous(ring, d, rng)
}

fn random_blowup(ctx: &BlowupContext, rng: &mut ChaCha8Rng) -> BlowupElement {
    let d = rng.gen_range(0..=ctx.dimension());
    ctx.random_element(d, rng)
}

fn random_base(ctx: &BlowupContext, rng: &mut ChaCha8Rng) -> Poly {
    let ring = ctx.ambient().n_ring();
    let d = rng.gen_range(0..=ring.dimension());
    random_homogeneous(ring, d, rng)
}

/// `x · ĩ^!(γ) = ĩ^!(ĩ*(x) · γ)`: product law versus pushforward of a
/// product on `P(E)`.
pub fn check_projection_formula(
    ctx: &BlowupContext,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = rng_for(seed, 1);
    let mut tally = Tally::new("projection_formula");
    let pe = ctx.bundle();
    let fixed = [
        (ctx.one(), pe.ring().one()),
        (ctx.f_pullback(&ctx.ambient().total_class()), pe.xi_poly()),
    ];
    let random = (0..trials).map(|_| (random_blowup(ctx, &mut rng), random_gamma(ctx, &mut rng)));
    for (x, gamma) in fixed.into_iter().chain(random) {
        let left = ctx.multiply(&x, &ctx.i_tilde_shriek(&gamma))?;
        let right = ctx.i_tilde_shriek(&pe.mul(&ctx.i_tilde_pullback(&x), &gamma));
        tally.record(
            &[("x", format!("{x:?}")), ("gamma", gamma.to_string())],
            &left,
            &right,
        );
    }
    Ok(tally.finish())
}

/// `i*i^!(y) = y·c_r(E)` on `M` and `ĩ*ĩ^!(γ) = -γξ` on `M̃`.
pub fn check_self_intersection(
    ctx: &BlowupContext,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = rng_for(seed, 2);
    let mut tally = Tally::new("self_intersection");
    let amb = ctx.ambient();
    let n = amb.n_ring();
    let pe = ctx.bundle();
    let ys = std::iter::once(n.one()).chain((0..trials).map(|_| random_base(ctx, &mut rng)));
    for y in ys.collect::<Vec<_>>() {
        let left = amb.i_star(&amb.i_shriek(&y));
        let right = n.mul(&y, amb.e_top());
        tally.record(
            &[("level", "M".into()), ("y", y.to_string())],
            &left,
            &right,
        );
    }
    let gammas =
        std::iter::once(pe.ring().one()).chain((0..trials).map(|_| random_gamma(ctx, &mut rng)));
    for gamma in gammas.collect::<Vec<_>>() {
        let left = ctx.i_tilde_pullback(&ctx.i_tilde_shriek(&gamma));
        let right = -pe.mul(&gamma, &pe.xi_poly());
        tally.record(
            &[("level", "M~".into()), ("gamma", gamma.to_string())],
            &left,
            &right,
        );
    }
    Ok(tally.finish())
}

/// `f*i^!(y) = ĩ^!(p*(y) c_{r-1}(Q))`, with `c_{r-1}(Q)` taken from the
/// inverted relation `p*c(E) = c(Q)(1 - ξ)` rather than the closed form the
/// canonicalization uses.
pub fn check_formule_clef(ctx: &BlowupContext, trials: usize, seed: u64) -> Result<CheckReport> {
    let mut rng = rng_for(seed, 3);
    let mut tally = Tally::new("formule_clef");
    let amb = ctx.ambient();
    let n = amb.n_ring();
    let pe = ctx.bundle();
    let unit = ctx.mode().unit_degree();
    let c_q_top = pe.chern_q().degree_part(unit * (ctx.rank() - 1));
    let mut ys = vec![n.zero(), n.one()];
    ys.extend(
        n.generators()
            .iter()
            .map(|g| n.normalize(&Poly::generator(ctx.mode(), g))),
    );
    ys.extend((0..trials).map(|_| random_base(ctx, &mut rng)));
    for y in ys {
        let left = ctx.f_pullback(&amb.i_shriek(&y));
        let right = ctx.i_tilde_shriek(&pe.mul(&pe.pullback(&y), &c_q_top));
        tally.record(&[("y", y.to_string())], &left, &right);
    }
    Ok(tally.finish())
}

/// Kernel of `i*` in one degree, as classes of `M`.
pub fn i_star_kernel(ctx: &BlowupContext, degree: u32) -> Vec<MClass> {
    let amb = ctx.ambient();
    let basis = amb.basis(degree);
    let n = amb.n_ring();
    let target = n.basis(degree);
    let columns: Vec<Vec<BigInt>> = basis
        .iter()
        .map(|b| {
            let img = amb.i_star(b);
            target.iter().map(|m| img.coefficient(m)).collect()
        })
        .collect();
    kernel(&columns, ctx.mode())
        .into_iter()
        .map(|coeffs| {
            basis
                .iter()
                .zip(&coeffs)
                .fold(amb.zero(), |acc, (b, k)| amb.add(&acc, &amb.scale(b, k)))
        })
        .map(|x| amb.normalize(&x))
        .collect()
}

/// For `ỹ = ĩ^!(ȳ) + f*(a)` with `i*(a) = 0`: `ĩ*(ỹ) = -ȳξ`, and the residual
/// `λ = ỹ - ĩ^!(ȳ)` satisfies `ĩ*(λ) = 0`.
pub fn check_lemma_y_xi(ctx: &BlowupContext, trials: usize, seed: u64) -> Result<CheckReport> {
    let mut rng = rng_for(seed, 4);
    let mut tally = Tally::new("lemma_y_xi");
    let pe = ctx.bundle();
    let unit = ctx.mode().unit_degree();
    let kernels: Vec<Vec<MClass>> = (0..=ctx.dimension())
        .map(|d| i_star_kernel(ctx, d))
        .collect();
    let mut cases = vec![(pe.ring().one(), ctx.ambient().zero())];
    for _ in 0..trials {
        let y_bar = random_gamma(ctx, &mut rng);
        let d = y_bar.homogeneous_degree().unwrap_or(0) + unit;
        let mut a = ctx.ambient().zero();
        if let Some(ker) = kernels.get(d as usize).filter(|k| !k.is_empty()) {
            for _ in 0..rng.gen_range(1..=3) {
                let k = BigInt::from(rng.gen_range(-9..=9));
                a = ctx.ambient().add(
                    &a,
                    &ctx.ambient().scale(&ker[rng.gen_range(0..ker.len())], &k),
                );
            }
        }
        cases.push((y_bar, a));
    }
    for (y_bar, a) in cases {
        let inputs = [("y_bar", y_bar.to_string()), ("a", a.to_string())];
        tally.record(
            &inputs,
            &ctx.ambient().i_star(&a),
            &ctx.ambient().n_ring().zero(),
        );
        let shriek = ctx.i_tilde_shriek(&y_bar);
        let y_tilde = ctx.add(&shriek, &ctx.f_pullback(&a))?;
        let expected = -pe.mul(&y_bar, &pe.xi_poly());
        tally.record(&inputs, &ctx.i_tilde_pullback(&y_tilde), &expected);
        let lambda = ctx.sub(&y_tilde, &shriek)?;
        tally.record(&inputs, &ctx.i_tilde_pullback(&lambda), &pe.ring().zero());
    }
    Ok(tally.finish())
}

/// Closed-form special cases, each applied when the context meets its
/// hypotheses. The first Chern class formula holds for every blow-up; the
/// binomial formula needs a point with trivial normal bundle; the `c₂`
/// formula needs a surface in a 6-manifold.
pub fn check_special_cases(ctx: &BlowupContext) -> Result<CheckReport> {
    let mut tally = Tally::new("special_cases");
    let amb = ctx.ambient();
    let unit = ctx.mode().unit_degree();
    let r = ctx.rank();
    let total = ctx.total_class()?;
    let c_m = amb.total_class();

    // c₁(M̃) = f*c₁(M) - (r-1) ĩ^!(1)
    let c1 = ctx.degree_part(&total, unit);
    let expected = ctx.sub(
        &ctx.f_pullback(&amb.degree_part(&c_m, unit)),
        &ctx.scale(&ctx.exceptional_class(), &BigInt::from(r - 1)),
    )?;
    tally.record(&[("case", "first Chern class".into())], &c1, &expected);

    let point_blowup = amb.n_ring().dimension() == 0 && ctx.bundle().e_total().is_one();
    if point_blowup {
        let defect = ctx.sub(&total, &ctx.f_pullback(&c_m))?;
        let eta = ctx.eta();
        let mut expected = ctx.zero();
        let mut power = ctx.one();
        for nu in 1..=r {
            power = ctx.multiply(&power, &eta)?;
            let k = binomial(BigInt::from(r), BigInt::from(nu))
                - binomial(BigInt::from(r), BigInt::from(nu - 1));
            expected = ctx.add(&expected, &ctx.scale(&power, &k))?;
        }
        tally.record(&[("case", "point blow-up".into())], &defect, &expected);

        if !ctx.is_formal() {
            let chi = ctx.integrate(&ctx.degree_part(&total, ctx.dimension()))?;
            let chi_m = amb.integrate(&amb.degree_part(&c_m, amb.dimension()))?;
            let mut expected = chi_m + BigInt::from(r - 1);
            if ctx.mode() == CoefficientMode::Mod2 {
                expected = expected.mod_floor(&BigInt::from(2));
            }
            tally.record(
                &[("case", "Euler characteristic of a point blow-up".into())],
                &chi,
                &expected,
            );
        }
    }

    if ctx.mode() == CoefficientMode::Integers
        && amb.dimension() == 6
        && amb.n_ring().dimension() == 2
    {
        let c2 = ctx.degree_part(&total, 4);
        let pd_n = amb.i_shriek(&amb.n_ring().one());
        let first = ctx.f_pullback(&amb.add(&amb.degree_part(&c_m, 4), &pd_n));
        let second = ctx.multiply(
            &ctx.f_pullback(&amb.degree_part(&c_m, 2)),
            &ctx.exceptional_class(),
        )?;
        let expected = ctx.sub(&first, &second)?;
        tally.record(
            &[("case", "c2 of a surface blow-up in dimension 6".into())],
            &c2,
            &expected,
        );
    }
    Ok(tally.finish())
}

/// `ĩ*c(M̃) = c(P(E))·(1 - ξ)`.
pub fn check_tangent_restriction(ctx: &BlowupContext) -> Result<CheckReport> {
    let mut tally = Tally::new("tangent_restriction");
    let pe = ctx.bundle();
    let left = ctx.i_tilde_pullback(&ctx.total_class()?);
    let one_minus = &pe.ring().one() - &pe.xi_poly();
    let right = pe.mul(
        &pe.chern_total(&ctx.ambient().submanifold().total_class),
        &one_minus,
    );
    tally.record(&[], &left, &right);
    Ok(tally.finish())
}

/// `ĩ*f*c(M) = p*c(N) p*c(E)`.
pub fn check_whitney_pullback(ctx: &BlowupContext) -> Result<CheckReport> {
    let mut tally = Tally::new("whitney_pullback");
    let pe = ctx.bundle();
    let left = ctx.i_tilde_pullback(&ctx.f_pullback(&ctx.ambient().total_class()));
    let right = pe.mul(&ctx.ambient().submanifold().total_class, &pe.e_total());
    tally.record(&[], &left, &right);
    Ok(tally.finish())
}

/// Commutative ring axioms for the blow-up product.
pub fn check_ring_axioms(ctx: &BlowupContext, trials: usize, seed: u64) -> Result<CheckReport> {
    let mut rng = rng_for(seed, 5);
    let mut tally = Tally::new("ring_axioms");
    for _ in 0..trials {
        let (x, y, z) = (
            random_blowup(ctx, &mut rng),
            random_blowup(ctx, &mut rng),
            random_blowup(ctx, &mut rng),
        );
        let inputs = [
            ("x", format!("{x:?}")),
            ("y", format!("{y:?}")),
            ("z", format!("{z:?}")),
        ];
        let xy = ctx.multiply(&x, &y)?;
        tally.record(&inputs, &xy, &ctx.multiply(&y, &x)?);
        tally.record(
            &inputs,
            &ctx.multiply(&xy, &z)?,
            &ctx.multiply(&x, &ctx.multiply(&y, &z)?)?,
        );
        tally.record(
            &inputs,
            &ctx.multiply(&x, &ctx.add(&y, &z)?)?,
            &ctx.add(&xy, &ctx.multiply(&x, &z)?)?,
        );
        tally.record(&inputs, &ctx.multiply(&ctx.one(), &x)?, &x);
    }
    Ok(tally.finish())
}

/// `ĩ*` is a ring homomorphism.
pub fn check_pullback_homomorphism(
    ctx: &BlowupContext,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = rng_for(seed, 6);
    let mut tally = Tally::new("pullback_homomorphism");
    let pe = ctx.bundle();
    for _ in 0..trials {
        let (x, y) = (random_blowup(ctx, &mut rng), random_blowup(ctx, &mut rng));
        let left = ctx.i_tilde_pullback(&ctx.multiply(&x, &y)?);
        let right = pe.mul(&ctx.i_tilde_pullback(&x), &ctx.i_tilde_pullback(&y));
        tally.record(
            &[("x", format!("{x:?}")), ("y", format!("{y:?}"))],
            &left,
            &right,
        );
    }
    Ok(tally.finish())
}

/// Canonicalization preserves integrals. Only for contexts with an
/// integration functional.
pub fn check_integration_invariance(
    ctx: &BlowupContext,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = rng_for(seed, 7);
    let mut tally = Tally::new("integration_invariance");
    let unit = ctx.mode().unit_degree();
    for _ in 0..trials {
        let d = ctx.dimension();
        let m = ctx.random_m_class(d, &mut rng);
        let gamma = random_homogeneous(ctx.bundle().ring(), d - unit, &mut rng);
        let left = ctx.integrate_pair(&m, &gamma)?;
        let right = ctx.integrate(&ctx.canonicalize(&m, &gamma))?;
        tally.record(
            &[("m", m.to_string()), ("gamma", gamma.to_string())],
            &left,
            &right,
        );
    }
    Ok(tally.finish())
}

/// Components of the total class above the dimension vanish.
pub fn check_degree_vanishing(ctx: &BlowupContext) -> Result<CheckReport> {
    let mut tally = Tally::new("degree_vanishing");
    let total = ctx.total_class()?;
    let unit = ctx.mode().unit_degree();
    for d in ctx.dimension() + 1..=ctx.dimension() + 2 * unit * ctx.rank() {
        tally.record(
            &[("degree", d.to_string())],
            &ctx.degree_part(&total, d),
            &ctx.zero(),
        );
    }
    Ok(tally.finish())
}

/// Every applicable check, in a fixed order.
pub fn run_all(ctx: &BlowupContext, trials: usize, seed: u64) -> Result<Vec<CheckReport>> {
    type Check<'a> = Box<dyn Fn() -> Result<CheckReport> + Send + Sync + 'a>;
    let mut checks: Vec<Check> = vec![
        Box::new(|| check_projection_formula(ctx, trials, seed)),
        Box::new(|| check_self_intersection(ctx, trials, seed)),
        Box::new(|| check_formule_clef(ctx, trials, seed)),
        Box::new(|| check_lemma_y_xi(ctx, trials, seed)),
        Box::new(|| check_special_cases(ctx)),
        Box::new(|| check_tangent_restriction(ctx)),
        Box::new(|| check_whitney_pullback(ctx)),
        Box::new(|| check_ring_axioms(ctx, trials, seed)),
        Box::new(|| check_pullback_homomorphism(ctx, trials, seed)),
        Box::new(|| check_degree_vanishing(ctx)),
    ];
    if !ctx.is_formal() {
        checks.push(Box::new(|| check_integration_invariance(ctx, trials, seed)));
    }
    // Checks are independent; results keep the declared order.
    std::thread::scope(|s| {
        let handles: Vec<_> = checks.iter().map(|c| s.spawn(c)).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check panicked"))
            .collect()
    })
}
