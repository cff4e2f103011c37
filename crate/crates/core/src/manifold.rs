//! The ambient manifold `M` with its submanifold `N`, joined by the Gysin
//! maps `i*: H*(M) → H*(N)` and `i^!: H*(N) → H*(M)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::graded_poly::{CoefficientMode, Generator, Monomial, Poly};
use crate::quotient_ring::RingPresentation;

pub const M_SPACE: &str = "M";
pub const N_SPACE: &str = "N";

/// Name of the `i`-th formal characteristic class of a space, e.g. `cM2`
/// or `wN1`.
pub fn formal_class_name(mode: CoefficientMode, space: &str, i: u32) -> String {
    let letter = match mode {
        CoefficientMode::Integers => 'c',
        CoefficientMode::Mod2 => 'w',
    };
    format!("{letter}{space}{i}")
}

/// A ring with no relations beyond the dimension cutoff, generated by the
/// formal classes `c_1, …, c_{dim/unit}` of `space` (plus `extra`).
pub fn formal_ring(
    label: &str,
    mode: CoefficientMode,
    space: &str,
    dimension: u32,
    extra: Vec<Generator>,
) -> (RingPresentation, Poly) {
    let unit = mode.unit_degree();
    let classes: Vec<Generator> = (1..=dimension / unit)
        .map(|i| Generator::new(&formal_class_name(mode, space, i), unit * i, space))
        .collect();
    let total = classes
        .iter()
        .fold(Poly::one(mode), |acc, g| &acc + &Poly::generator(mode, g));
    let mut gens = classes;
    gens.extend(extra);
    (RingPresentation::new(label, mode, gens, dimension), total)
}

/// `N` with its total characteristic class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submanifold {
    pub ring: Arc<RingPresentation>,
    pub total_class: Poly,
}

/// How `H*(M)` is represented.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelKind {
    /// An explicit presentation with `i*` given on generators and `i^!` on
    /// the normal-form basis of `H*(N)`.
    Presented {
        i_star: BTreeMap<Generator, Poly>,
        i_shriek: BTreeMap<Monomial, Poly>,
    },
    /// Elements are pairs `(u, v)` meaning `u + i^!(v)`, with `u` a
    /// polynomial in the formal classes of `M` and `v ∈ H*(N)`. The product
    /// is forced by the projection and self-intersection formulas:
    /// `(u,v)(u',v') = (uu', v·i*u' + v'·i*u + v·v'·c_r(E))`.
    FormalGysin,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldModel {
    pub ring: Arc<RingPresentation>,
    pub total_class: Poly,
    pub kind: ModelKind,
}

impl ManifoldModel {
    pub fn presented(
        ring: Arc<RingPresentation>,
        total_class: Poly,
        i_star: BTreeMap<Generator, Poly>,
        i_shriek: BTreeMap<Monomial, Poly>,
    ) -> Self {
        ManifoldModel {
            ring,
            total_class,
            kind: ModelKind::Presented { i_star, i_shriek },
        }
    }

    /// Formal `M` of the given real dimension, generated by its own
    /// characteristic classes.
    pub fn formal(mode: CoefficientMode, dimension: u32) -> Self {
        let (ring, total) = formal_ring("M", mode, M_SPACE, dimension, Vec::new());
        ManifoldModel {
            ring: Arc::new(ring),
            total_class: total,
            kind: ModelKind::FormalGysin,
        }
    }

    pub fn is_formal(&self) -> bool {
        matches!(self.kind, ModelKind::FormalGysin)
    }
}

/// A class of `H*(M)`: `base + i^!(shriek)`. In presented models the shriek
/// component is always zero because `i^!` lands in the presentation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MClass {
    pub base: Poly,
    pub shriek: Poly,
}

impl MClass {
    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.shriek.is_zero()
    }
}

impl fmt::Debug for MClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.base.is_zero(), self.shriek.is_zero()) {
            (_, true) => write!(f, "{}", self.base),
            (true, false) => write!(f, "i!({})", self.shriek),
            (false, false) => write!(f, "{} + i!({})", self.base, self.shriek),
        }
    }
}

/// `M` together with the embedding of `N`: the data needed to multiply in
/// `H*(M)` and move classes along `i*` and `i^!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ambient {
    model: ManifoldModel,
    sub: Submanifold,
    codim: u32,
    e_top: Poly,
    i_star: BTreeMap<Generator, Poly>,
}

impl Ambient {
    /// Binds `M` to `N`. For formal models `i*` on the formal classes is
    /// derived from the Whitney sum `i*c(M) = c(N)c(E)`; presented tables
    /// are checked for the projection formula, ring compatibility and
    /// integration compatibility.
    pub fn new(model: ManifoldModel, sub: Submanifold, codim: u32, e_total: &Poly) -> Result<Self> {
        let mode = model.ring.mode();
        if sub.ring.mode() != mode {
            return Err(Error::ModeMismatch(mode, sub.ring.mode()));
        }
        let unit = mode.unit_degree();
        let e_top = e_total.degree_part(unit * codim);
        let i_star = match &model.kind {
            ModelKind::Presented { i_star, .. } => i_star.clone(),
            ModelKind::FormalGysin => {
                let whitney = sub.ring.mul(&sub.total_class, e_total);
                model
                    .ring
                    .generators()
                    .iter()
                    .map(|g| (g.clone(), whitney.degree_part(g.degree())))
                    .collect()
            }
        };
        let ambient = Ambient {
            model,
            sub,
            codim,
            e_top,
            i_star,
        };
        ambient.check_tables()?;
        Ok(ambient)
    }

    pub fn model(&self) -> &ManifoldModel {
        &self.model
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.model.ring
    }

    pub fn submanifold(&self) -> &Submanifold {
        &self.sub
    }

    pub fn n_ring(&self) -> &Arc<RingPresentation> {
        &self.sub.ring
    }

    pub fn mode(&self) -> CoefficientMode {
        self.model.ring.mode()
    }

    pub fn codim(&self) -> u32 {
        self.codim
    }

    /// Degree shift of `i^!`.
    pub fn shriek_shift(&self) -> u32 {
        self.mode().unit_degree() * self.codim
    }

    pub fn e_top(&self) -> &Poly {
        &self.e_top
    }

    pub fn i_star_table(&self) -> &BTreeMap<Generator, Poly> {
        &self.i_star
    }

    pub fn dimension(&self) -> u32 {
        self.model.ring.dimension()
    }

    pub fn zero(&self) -> MClass {
        MClass {
            base: self.model.ring.zero(),
            shriek: self.sub.ring.zero(),
        }
    }

    pub fn one(&self) -> MClass {
        self.from_base(&self.model.ring.one())
    }

    pub fn from_base(&self, p: &Poly) -> MClass {
        MClass {
            base: self.model.ring.normalize(p),
            shriek: self.sub.ring.zero(),
        }
    }

    pub fn parse_base(
        &self,
        text: &str,
    ) -> std::result::Result<MClass, crate::graded_poly::ParseError> {
        let ring = &self.model.ring;
        Poly::parse(text, ring.mode(), |n| ring.generator(n).cloned()).map(|p| self.from_base(&p))
    }

    pub fn total_class(&self) -> MClass {
        self.from_base(&self.model.total_class)
    }

    pub fn normalize(&self, x: &MClass) -> MClass {
        MClass {
            base: self.model.ring.normalize(&x.base),
            shriek: self.sub.ring.normalize(&x.shriek),
        }
    }

    pub fn add(&self, x: &MClass, y: &MClass) -> MClass {
        MClass {
            base: &x.base + &y.base,
            shriek: &x.shriek + &y.shriek,
        }
    }

    pub fn sub(&self, x: &MClass, y: &MClass) -> MClass {
        MClass {
            base: &x.base - &y.base,
            shriek: &x.shriek - &y.shriek,
        }
    }

    pub fn neg(&self, x: &MClass) -> MClass {
        MClass {
            base: -&x.base,
            shriek: -&x.shriek,
        }
    }

    pub fn scale(&self, x: &MClass, k: &BigInt) -> MClass {
        MClass {
            base: x.base.scale(k),
            shriek: x.shriek.scale(k),
        }
    }

    fn i_star_base(&self, u: &Poly) -> Poly {
        let image = u
            .map_generators(&self.i_star)
            .expect("i* images are validated homogeneous");
        self.sub.ring.normalize(&image)
    }

    pub fn mul(&self, x: &MClass, y: &MClass) -> MClass {
        let n = &self.sub.ring;
        let base = self.model.ring.mul(&x.base, &y.base);
        let shriek = if x.shriek.is_zero() && y.shriek.is_zero() {
            n.zero()
        } else {
            let a = n.mul(&x.shriek, &self.i_star_base(&y.base));
            let b = n.mul(&y.shriek, &self.i_star_base(&x.base));
            let c = n.mul(&n.mul(&x.shriek, &y.shriek), &self.e_top);
            &(&a + &b) + &c
        };
        MClass { base, shriek }
    }

    pub fn pow(&self, x: &MClass, exp: u32) -> MClass {
        (0..exp).fold(self.one(), |acc, _| self.mul(&acc, x))
    }

    /// `i*(u + i^!(v)) = i*u + v·c_r(E)`.
    pub fn i_star(&self, x: &MClass) -> Poly {
        let n = &self.sub.ring;
        &self.i_star_base(&x.base) + &n.mul(&x.shriek, &self.e_top)
    }

    pub fn i_shriek(&self, beta: &Poly) -> MClass {
        let n = &self.sub.ring;
        match &self.model.kind {
            ModelKind::FormalGysin => MClass {
                base: self.model.ring.zero(),
                shriek: n.normalize(beta),
            },
            ModelKind::Presented { i_shriek, .. } => {
                let mut base = self.model.ring.zero();
                for (m, c) in n.normalize(beta).terms() {
                    let image = i_shriek
                        .get(m)
                        .expect("i^! table covers the basis of H*(N)");
                    base = &base + &image.scale(c);
                }
                self.from_base(&base)
            }
        }
    }

    pub fn degree_part(&self, x: &MClass, degree: u32) -> MClass {
        MClass {
            base: x.base.degree_part(degree),
            shriek: match degree.checked_sub(self.shriek_shift()) {
                Some(d) => x.shriek.degree_part(d),
                None => self.sub.ring.zero(),
            },
        }
    }

    pub fn integrate(&self, x: &MClass) -> Result<BigInt> {
        let base = self.model.ring.integrate(&x.base)?;
        if x.shriek.is_zero() {
            return Ok(base);
        }
        let n = self.sub.ring.integrate(&x.shriek)?;
        Ok(self.mode_reduce(base + n))
    }

    fn mode_reduce(&self, v: BigInt) -> BigInt {
        Poly::constant(self.mode(), v).constant_term()
    }

    /// Additive basis of `H^degree(M)` in this representation.
    pub fn basis(&self, degree: u32) -> Vec<MClass> {
        let mut out: Vec<MClass> = self
            .model
            .ring
            .basis(degree)
            .into_iter()
            .map(|m| self.from_base(&Poly::term(self.mode(), 1, m)))
            .collect();
        if self.model.is_formal() {
            if let Some(d) = degree.checked_sub(self.shriek_shift()) {
                out.extend(self.sub.ring.basis(d).into_iter().map(|m| MClass {
                    base: self.model.ring.zero(),
                    shriek: Poly::term(self.mode(), 1, m),
                }));
            }
        }
        out
    }

    /// Lowest degree where `i*c(M)` and `c(N)c(E)` differ, with both sides.
    pub fn whitney_defect(&self, e_total: &Poly) -> Option<(u32, Poly, Poly)> {
        let lhs = self.i_star(&self.total_class());
        let rhs = self.sub.ring.mul(&self.sub.total_class, e_total);
        (0..=self.sub.ring.dimension()).find_map(|d| {
            let (l, r) = (lhs.degree_part(d), rhs.degree_part(d));
            (l != r).then_some((d, l, r))
        })
    }

    fn check_tables(&self) -> Result<()> {
        let n = &self.sub.ring;
        let m = &self.model.ring;
        for (g, img) in &self.i_star {
            if !m.generators().contains(g) {
                return Err(Error::TableInconsistency(format!(
                    "i* given on {g}, which is not a generator of {}",
                    m.label()
                )));
            }
            if !img.is_homogeneous_of(g.degree()) {
                return Err(Error::TableInconsistency(format!(
                    "i*({g}) = {img} is not of degree {}",
                    g.degree()
                )));
            }
            n.normal_form(img)?;
        }
        for g in m.generators() {
            if !self.i_star.contains_key(g) {
                return Err(Error::TableInconsistency(format!("i* missing on {g}")));
            }
        }
        // i* must kill the relations of M.
        for rule in m.rules() {
            let lhs = Poly::term(m.mode(), 1, rule.lhs());
            let diff = &self.i_star_base(&lhs) - &self.i_star_base(&rule.rhs);
            if !n.normalize(&diff).is_zero() {
                return Err(Error::TableInconsistency(format!(
                    "i* does not respect the relation {} = {}",
                    rule.lhs(),
                    rule.rhs
                )));
            }
        }

        let ModelKind::Presented { i_shriek, .. } = &self.model.kind else {
            return Ok(());
        };
        let basis = n.full_basis();
        for b in &basis {
            let Some(img) = i_shriek.get(b) else {
                return Err(Error::TableInconsistency(format!("i^! missing on {b}")));
            };
            let want = b.degree() + self.shriek_shift();
            if !img.is_homogeneous_of(want) {
                return Err(Error::TableInconsistency(format!(
                    "i^!({b}) = {img} is not of degree {want}"
                )));
            }
            m.normal_form(img)?;
        }
        for key in i_shriek.keys() {
            if !basis.contains(key) {
                return Err(Error::TableInconsistency(format!(
                    "i^! given on {key}, which is not a basis monomial of H*(N)"
                )));
            }
        }
        // Projection formula on generators: i^!(β · i*a) = i^!(β) · a.
        for b in &basis {
            let beta = Poly::term(self.mode(), 1, b.clone());
            for g in m.generators() {
                let a = self.from_base(&Poly::generator(self.mode(), g));
                let lhs = self.i_shriek(&n.mul(&beta, &self.i_star(&a)));
                let rhs = self.mul(&self.i_shriek(&beta), &a);
                if lhs != rhs {
                    return Err(Error::TableInconsistency(format!(
                        "projection formula fails for β = {b}, a = {g}: {lhs} vs {rhs}"
                    )));
                }
            }
        }
        if m.has_integration() && n.has_integration() {
            for b in n.basis(n.dimension()) {
                let beta = Poly::term(self.mode(), 1, b.clone());
                let lhs = self.integrate(&self.i_shriek(&beta))?;
                let rhs = n.integrate(&beta)?;
                if lhs != rhs {
                    return Err(Error::TableInconsistency(format!(
                        "∫_M i^!({b}) = {lhs} but ∫_N {b} = {rhs}"
                    )));
                }
            }
        }
        Ok(())
    }
}
