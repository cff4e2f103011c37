//! Cohomology of the projectivisation `P(E)` of a bundle `E` over `N`.
//!
//! `H*(P(E)) = H*(N)[ξ] / (ξ^r + c₁(E)ξ^{r-1} + … + c_r(E))`, with `ξ` the
//! first Chern class of the dual tautological line bundle. Base classes are
//! used as their own pullbacks: the base generators are generators of the
//! bundle ring, so `p*` is the identity on polynomials.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded_poly::{CoefficientMode, Generator, Monomial, Poly};
use crate::quotient_ring::{RewriteRule, RingPresentation};

pub const XI_NAME: &str = "xi";
pub const XI_SPACE: &str = "PE";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveBundleRing {
    base: Arc<RingPresentation>,
    rank: u32,
    e_classes: Vec<Poly>,
    xi: Generator,
    ring: Arc<RingPresentation>,
}

impl ProjectiveBundleRing {
    /// Builds `H*(P(E))` from the base ring and `c₁(E), …, c_r(E)` (missing
    /// trailing classes are zero). In mod-2 mode `rank` is the real rank and
    /// the classes are Stiefel-Whitney classes.
    pub fn build(base: Arc<RingPresentation>, rank: u32, e_classes: &[Poly]) -> Result<Self> {
        let mode = base.mode();
        let unit = mode.unit_degree();
        if rank == 0 {
            return Err(Error::DegreeMismatch("bundle rank must be positive".into()));
        }
        if e_classes.len() > rank as usize {
            return Err(Error::DegreeMismatch(format!(
                "{} classes given for a rank-{rank} bundle",
                e_classes.len()
            )));
        }
        let mut classes = Vec::with_capacity(rank as usize);
        for i in 1..=rank {
            let c = match e_classes.get(i as usize - 1) {
                Some(c) => base.normal_form(c)?,
                None => base.zero(),
            };
            if !c.is_homogeneous_of(unit * i) {
                return Err(Error::DegreeMismatch(format!(
                    "class {i} of E must have degree {}, got {c}",
                    unit * i
                )));
            }
            classes.push(c);
        }

        let xi = Generator::new(XI_NAME, unit, XI_SPACE);
        if base.generators().contains(&xi) {
            return Err(Error::InvalidPresentation {
                ring: base.label().to_owned(),
                reason: "base already has a generator named xi in the bundle space".into(),
            });
        }
        let mut generators = base.generators().to_vec();
        generators.push(xi.clone());
        let dimension = base.dimension() + unit * (rank - 1);
        let mut ring = RingPresentation::new(
            format!("P(E) over {}", base.label()),
            mode,
            generators,
            dimension,
        );
        for rule in base.rules() {
            ring.add_rule(rule.clone())?;
        }
        let xi_poly = Poly::generator(mode, &xi);
        let mut rhs = Poly::zero(mode);
        for (i, c) in classes.iter().enumerate() {
            rhs = &rhs - &(c * &xi_poly.pow(rank - 1 - i as u32));
        }
        ring.add_rule(RewriteRule::new(xi.clone(), rank, rhs))?;

        for (space, bound) in base.space_bounds() {
            ring = ring.with_space_bound(space, *bound);
        }
        let mut spaces: Vec<&str> = base.generators().iter().map(Generator::space).collect();
        spaces.sort();
        spaces.dedup();
        for space in spaces {
            let bound = base
                .space_bounds()
                .get(space)
                .copied()
                .unwrap_or(u32::MAX)
                .min(base.dimension());
            ring = ring.with_space_bound(space, bound);
        }

        if let Some(table) = base.integrals() {
            let top = Monomial::power(&xi, rank - 1);
            let lifted: BTreeMap<Monomial, _> = table
                .iter()
                .map(|(m, v)| (m.mul(&top), v.clone()))
                .collect();
            ring = ring.with_integrals(lifted);
        }

        Ok(ProjectiveBundleRing {
            base,
            rank,
            e_classes: classes,
            xi,
            ring: Arc::new(ring),
        })
    }

    pub fn base(&self) -> &Arc<RingPresentation> {
        &self.base
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn mode(&self) -> CoefficientMode {
        self.base.mode()
    }

    pub fn xi(&self) -> &Generator {
        &self.xi
    }

    pub fn xi_poly(&self) -> Poly {
        Poly::generator(self.mode(), &self.xi)
    }

    /// `c_i(E)` for `0 <= i <= r`, with `c₀ = 1`.
    pub fn e_class(&self, i: u32) -> Poly {
        match i {
            0 => self.base.one(),
            i if i <= self.rank => self.e_classes[i as usize - 1].clone(),
            _ => self.base.zero(),
        }
    }

    pub fn e_total(&self) -> Poly {
        (0..=self.rank).fold(self.base.zero(), |acc, i| &acc + &self.e_class(i))
    }

    pub fn normalize(&self, p: &Poly) -> Poly {
        self.ring.normalize(p)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.ring.mul(a, b)
    }

    /// `p*`: base classes already live in the bundle ring.
    pub fn pullback(&self, beta: &Poly) -> Poly {
        self.normalize(beta)
    }

    /// Coefficients `[β₀, …, β_{r-1}]` with `γ = Σ p*(β_j) ξ^j`.
    pub fn expand_in_xi(&self, gamma: &Poly) -> Vec<Poly> {
        let nf = self.normalize(gamma);
        let mut coeffs = nf.coefficients_in(&self.xi);
        debug_assert!(coeffs.len() <= self.rank as usize);
        coeffs.resize(self.rank as usize, self.base.zero());
        coeffs
    }

    /// Inverse of [`Self::expand_in_xi`].
    pub fn from_xi_coefficients(&self, betas: &[Poly]) -> Poly {
        let xi = self.xi_poly();
        let sum = betas
            .iter()
            .enumerate()
            .fold(Poly::zero(self.mode()), |acc, (j, b)| {
                &acc + &(b * &xi.pow(j as u32))
            });
        self.normalize(&sum)
    }

    /// Pushforward along `p`: the coefficient of `ξ^{r-1}`.
    pub fn fiber_integrate(&self, gamma: &Poly) -> Poly {
        self.expand_in_xi(gamma).pop().expect("rank >= 1")
    }

    pub fn integrate(&self, gamma: &Poly) -> Result<num_bigint::BigInt> {
        self.base.integrate(&self.fiber_integrate(gamma))
    }

    /// Total Chern class of the quotient bundle `Q = p*E / l`, from
    /// `p*c(E) = c(Q)(1 - ξ)`.
    pub fn chern_q(&self) -> Poly {
        let one_minus = &Poly::one(self.mode()) - &self.xi_poly();
        let inv = one_minus
            .geometric_inverse(self.ring.dimension())
            .expect("1 - xi is a unit");
        let unit = self.mode().unit_degree();
        self.mul(&self.e_total(), &inv)
            .project_degrees(0, unit * (self.rank - 1))
    }

    /// Top class `c_{r-1}(Q) = ξ^{r-1} + c₁(E)ξ^{r-2} + … + c_{r-1}(E)`.
    pub fn chern_q_top(&self) -> Poly {
        let xi = self.xi_poly();
        let sum = (0..self.rank).fold(Poly::zero(self.mode()), |acc, i| {
            &acc + &(&self.e_class(i) * &xi.pow(self.rank - 1 - i))
        });
        self.normalize(&sum)
    }

    /// Vertical tangent bundle: `c(V) = Σ c_i(E)(1 + ξ)^{r-i}`.
    pub fn chern_vertical(&self) -> Poly {
        let one_plus = &Poly::one(self.mode()) + &self.xi_poly();
        let sum = (0..=self.rank).fold(Poly::zero(self.mode()), |acc, i| {
            &acc + &(&self.e_class(i) * &one_plus.pow(self.rank - i))
        });
        self.normalize(&sum)
    }

    /// `c(P(E)) = c(V) · p*c(N)`.
    pub fn chern_total(&self, c_base: &Poly) -> Poly {
        self.mul(&self.chern_vertical(), &self.pullback(c_base))
    }

    /// `ξ^r + Σ c_i(E) ξ^{r-i}` before reduction.
    pub fn fundamental_polynomial(&self) -> Poly {
        let xi = self.xi_poly();
        (0..=self.rank).fold(Poly::zero(self.mode()), |acc, i| {
            &acc + &(&self.e_class(i) * &xi.pow(self.rank - i))
        })
    }
}
