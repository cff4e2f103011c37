//! Presented graded rings: a free polynomial ring modulo one monic rewrite
//! rule per generator, cut off above a dimension bound.
//!
//! Rules must admit a triangular order: the rule for `g` may only mention
//! generators earlier in the order, plus `g` itself at a lower power. Under
//! that restriction reduction is plain division and normal forms are unique.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graded_poly::{CoefficientMode, Generator, Monomial, Poly};

/// `generator^exponent ↦ rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub generator: Generator,
    pub exponent: u32,
    pub rhs: Poly,
}

impl RewriteRule {
    pub fn new(generator: Generator, exponent: u32, rhs: Poly) -> Self {
        RewriteRule {
            generator,
            exponent,
            rhs,
        }
    }

    pub fn lhs(&self) -> Monomial {
        Monomial::power(&self.generator, self.exponent)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingPresentation {
    label: String,
    mode: CoefficientMode,
    generators: Vec<Generator>,
    rules: Vec<RewriteRule>,
    dimension: u32,
    /// Per-space caps: the factor of a monomial built from generators of
    /// that space vanishes above the cap. Models pulled-back subrings such
    /// as H*(N) inside H*(P(E)).
    space_bounds: BTreeMap<String, u32>,
    integrals: Option<BTreeMap<Monomial, BigInt>>,
}

/// Which applicable rule fires first during reduction. Only used to probe
/// confluence; results agree for every valid presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewriteOrder {
    FirstRule,
    LastRule,
}

impl RingPresentation {
    pub fn new(
        label: impl Into<String>,
        mode: CoefficientMode,
        generators: Vec<Generator>,
        dimension: u32,
    ) -> Self {
        RingPresentation {
            label: label.into(),
            mode,
            generators,
            rules: Vec::new(),
            dimension,
            space_bounds: BTreeMap::new(),
            integrals: None,
        }
    }

    /// The ring of a point: no generators, concentrated in degree 0.
    pub fn point(label: impl Into<String>, mode: CoefficientMode) -> Self {
        let mut ring = RingPresentation::new(label, mode, Vec::new(), 0);
        ring.integrals = Some(BTreeMap::from([(Monomial::one(), BigInt::from(1))]));
        ring
    }

    /// `H*(CP^n)` (or `H*(RP^n; Z/2)` for a degree-1 generator): one
    /// generator `h`, `h^(n+1) = 0`, `∫ h^n = 1`.
    pub fn truncated_polynomial(
        label: impl Into<String>,
        mode: CoefficientMode,
        generator: Generator,
        n: u32,
    ) -> Self {
        let dim = n * generator.degree();
        let mut ring = RingPresentation::new(label, mode, vec![generator.clone()], dim);
        ring.rules
            .push(RewriteRule::new(generator.clone(), n + 1, Poly::zero(mode)));
        ring.integrals = Some(BTreeMap::from([(
            Monomial::power(&generator, n),
            BigInt::from(1),
        )]));
        ring
    }

    pub fn with_rule(mut self, rule: RewriteRule) -> Result<Self> {
        self.add_rule(rule)?;
        Ok(self)
    }

    pub fn add_rule(&mut self, rule: RewriteRule) -> Result<()> {
        if !self.generators.contains(&rule.generator) {
            return Err(Error::ForeignGenerator {
                generator: rule.generator.to_string(),
                ring: self.label.clone(),
            });
        }
        if self.rules.iter().any(|r| r.generator == rule.generator) {
            return Err(Error::InvalidPresentation {
                ring: self.label.clone(),
                reason: format!("second rule for generator {}", rule.generator),
            });
        }
        if rule.exponent == 0 {
            return Err(Error::InvalidPresentation {
                ring: self.label.clone(),
                reason: "rule with exponent 0".into(),
            });
        }
        self.rules.push(rule);
        Ok(())
    }

    pub fn with_space_bound(mut self, space: &str, bound: u32) -> Self {
        self.space_bounds.insert(space.to_owned(), bound);
        self
    }

    pub fn with_integrals(mut self, integrals: BTreeMap<Monomial, BigInt>) -> Self {
        self.integrals = Some(integrals);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn mode(&self) -> CoefficientMode {
        self.mode
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| g.name() == name)
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn rule_for(&self, g: &Generator) -> Option<&RewriteRule> {
        self.rules.iter().find(|r| &r.generator == g)
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn space_bounds(&self) -> &BTreeMap<String, u32> {
        &self.space_bounds
    }

    pub fn integrals(&self) -> Option<&BTreeMap<Monomial, BigInt>> {
        self.integrals.as_ref()
    }

    pub fn has_integration(&self) -> bool {
        self.integrals.is_some()
    }

    pub fn zero(&self) -> Poly {
        Poly::zero(self.mode)
    }

    pub fn one(&self) -> Poly {
        Poly::one(self.mode)
    }

    /// True if the monomial survives the dimension and per-space cutoffs.
    pub fn in_range(&self, m: &Monomial) -> bool {
        m.degree() <= self.dimension
            && self
                .space_bounds
                .iter()
                .all(|(space, bound)| m.space_degree(space) <= *bound)
    }

    /// Normal-form monomials have no rule lhs as a divisor and lie in range.
    pub fn is_normal_monomial(&self, m: &Monomial) -> bool {
        self.in_range(m)
            && self
                .rules
                .iter()
                .all(|r| m.exponent(&r.generator) < r.exponent)
    }

    fn check_generators(&self, p: &Poly) -> Result<()> {
        if p.mode() != self.mode {
            return Err(Error::ModeMismatch(self.mode, p.mode()));
        }
        for g in p.generators() {
            if !self.generators.contains(&g) {
                return Err(Error::ForeignGenerator {
                    generator: g.to_string(),
                    ring: self.label.clone(),
                });
            }
        }
        Ok(())
    }

    /// The unique normal form of `p`.
    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        self.check_generators(p)?;
        Ok(self.reduce(p, RewriteOrder::FirstRule))
    }

    /// Normal form without the generator-membership check; for callers that
    /// only ever combine elements of this ring.
    pub fn normalize(&self, p: &Poly) -> Poly {
        debug_assert!(
            self.check_generators(p).is_ok(),
            "{p} not in {}",
            self.label
        );
        self.reduce(p, RewriteOrder::FirstRule)
    }

    pub fn reduce(&self, p: &Poly, order: RewriteOrder) -> Poly {
        let mut pending = p.retain(|m| self.in_range(m));
        let mut done = Poly::zero(self.mode);
        while let Some((m, c)) = pending.pop_leading() {
            let mut applicable = self
                .rules
                .iter()
                .filter(|r| m.exponent(&r.generator) >= r.exponent);
            let rule = match order {
                RewriteOrder::FirstRule => applicable.next(),
                RewriteOrder::LastRule => applicable.next_back(),
            };
            let Some(rule) = rule else {
                done.add_term(m, c);
                continue;
            };
            let quotient = m
                .checked_div(&rule.lhs())
                .expect("rule lhs divides the monomial");
            for (rm, rc) in rule.rhs.terms() {
                let next = quotient.mul(rm);
                if self.in_range(&next) {
                    pending.add_term(next, &c * rc);
                }
            }
        }
        done
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.normalize(&(a * b))
    }

    pub fn pow(&self, a: &Poly, exp: u32) -> Poly {
        (0..exp).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// Pairs the top-degree part of `p` against the integration table.
    pub fn integrate(&self, p: &Poly) -> Result<BigInt> {
        let table = self
            .integrals
            .as_ref()
            .ok_or_else(|| Error::NoIntegration {
                ring: self.label.clone(),
            })?;
        let nf = self.normal_form(p)?;
        let mut total = BigInt::zero();
        for (m, c) in nf.terms().filter(|(m, _)| m.degree() == self.dimension) {
            let v = table.get(m).ok_or_else(|| Error::MissingIntegral {
                monomial: m.to_string(),
                ring: self.label.clone(),
            })?;
            total += c * v;
        }
        Ok(match self.mode {
            CoefficientMode::Integers => total,
            CoefficientMode::Mod2 => Poly::constant(self.mode, total).constant_term(),
        })
    }

    /// All monomials in the ring's generators of exactly `degree` that are
    /// within range (not necessarily normal).
    pub fn monomials_of_degree(&self, degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        enumerate_monomials(&self.generators, degree, &mut Monomial::one(), 0, &mut out);
        out.retain(|m| self.in_range(m));
        out
    }

    /// Normal-form monomials of `degree`; an additive basis in that degree.
    pub fn basis(&self, degree: u32) -> Vec<Monomial> {
        let mut b = self.monomials_of_degree(degree);
        b.retain(|m| self.is_normal_monomial(m));
        b
    }

    /// Basis of every degree `0..=dimension`.
    pub fn full_basis(&self) -> Vec<Monomial> {
        (0..=self.dimension).flat_map(|d| self.basis(d)).collect()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_presentation(self)
    }

    pub fn element(self: &Arc<Self>, p: &Poly) -> Result<RingElement> {
        Ok(RingElement {
            value: self.normal_form(p)?,
            ring: Arc::clone(self),
        })
    }
}

fn enumerate_monomials(
    gens: &[Generator],
    remaining: u32,
    acc: &mut Monomial,
    start: usize,
    out: &mut Vec<Monomial>,
) {
    if remaining == 0 {
        out.push(acc.clone());
        return;
    }
    for (i, g) in gens.iter().enumerate().skip(start) {
        let mut e = 1;
        while g.degree() * e <= remaining {
            let saved = acc.clone();
            *acc = acc.mul(&Monomial::power(g, e));
            enumerate_monomials(gens, remaining - g.degree() * e, acc, i + 1, out);
            *acc = saved;
            e += 1;
        }
    }
}

/// A class in a presented ring, kept in normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElement {
    value: Poly,
    ring: Arc<RingPresentation>,
}

impl RingElement {
    pub fn value(&self) -> &Poly {
        &self.value
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    fn same_ring(&self, other: &RingElement) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::ForeignGenerator {
                generator: other.ring.label.clone(),
                ring: self.ring.label.clone(),
            })
        }
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        Ok(RingElement {
            value: self.ring.normalize(&(&self.value + &other.value)),
            ring: Arc::clone(&self.ring),
        })
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        Ok(RingElement {
            value: self.ring.mul(&self.value, &other.value),
            ring: Arc::clone(&self.ring),
        })
    }

    pub fn integrate(&self) -> Result<BigInt> {
        self.ring.integrate(&self.value)
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.value, self.ring.label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationFailure {
    pub reason: String,
    pub monomial: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub ring: String,
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        match self.failures.first() {
            None => Ok(()),
            Some(f) => Err(Error::InvalidPresentation {
                ring: self.ring,
                reason: match &f.monomial {
                    Some(m) => format!("{} at {m}", f.reason),
                    None => f.reason.clone(),
                },
            }),
        }
    }
}

// Past this many monomials the confluence probe is skipped; the structural
// checks still run.
const CONFLUENCE_PROBE_LIMIT: usize = 50_000;

/// Checks rule homogeneity, the existence of a triangular order, the
/// integration table's support, and (for small rings) confluence by reducing
/// every in-range monomial under two rewrite orders.
pub fn validate_presentation(ring: &RingPresentation) -> ValidationReport {
    let mut failures = Vec::new();
    let fail = |failures: &mut Vec<ValidationFailure>, reason: &str, monomial: Option<String>| {
        failures.push(ValidationFailure {
            reason: reason.to_owned(),
            monomial,
        })
    };

    for rule in &ring.rules {
        let lhs = rule.lhs();
        if rule.rhs.mode() != ring.mode {
            fail(
                &mut failures,
                "rhs coefficient mode differs from the ring",
                Some(lhs.to_string()),
            );
        }
        if !rule.rhs.is_homogeneous_of(lhs.degree()) {
            fail(&mut failures, "inhomogeneous rhs", Some(lhs.to_string()));
        }
        if rule.rhs.max_exponent(&rule.generator) >= rule.exponent {
            fail(
                &mut failures,
                "rhs does not lower the leading exponent",
                Some(lhs.to_string()),
            );
        }
        for g in rule.rhs.generators() {
            if !ring.generators.contains(&g) {
                fail(
                    &mut failures,
                    &format!("foreign generator {g} in rhs"),
                    Some(lhs.to_string()),
                );
            }
        }
    }

    if !has_triangular_order(ring) {
        fail(
            &mut failures,
            "no triangular order exists for the rules",
            None,
        );
    }

    if let Some(table) = &ring.integrals {
        for m in table.keys() {
            if m.degree() != ring.dimension || !ring.is_normal_monomial(m) {
                fail(
                    &mut failures,
                    "integration table entry is not a top-degree normal monomial",
                    Some(m.to_string()),
                );
            }
        }
    }

    if failures.is_empty() {
        let mut probed = 0usize;
        'outer: for d in 0..=ring.dimension {
            for m in ring.monomials_of_degree(d) {
                probed += 1;
                if probed > CONFLUENCE_PROBE_LIMIT {
                    break 'outer;
                }
                let p = Poly::term(ring.mode, 1, m.clone());
                let a = ring.reduce(&p, RewriteOrder::FirstRule);
                let b = ring.reduce(&p, RewriteOrder::LastRule);
                if a != b {
                    fail(
                        &mut failures,
                        "rewriting is not confluent",
                        Some(m.to_string()),
                    );
                    break 'outer;
                }
            }
        }
    }

    ValidationReport {
        ring: ring.label.clone(),
        failures,
    }
}

/// Kahn's algorithm on "rule for g mentions h" edges, ignoring self-edges
/// (those are checked by the exponent condition).
fn has_triangular_order(ring: &RingPresentation) -> bool {
    let ruled: BTreeSet<&Generator> = ring.rules.iter().map(|r| &r.generator).collect();
    let mut deps: BTreeMap<&Generator, BTreeSet<Generator>> = BTreeMap::new();
    for rule in &ring.rules {
        let mentioned = rule
            .rhs
            .generators()
            .into_iter()
            .filter(|h| h != &rule.generator && ruled.contains(h))
            .collect();
        deps.insert(&rule.generator, mentioned);
    }
    let mut placed: BTreeSet<Generator> = BTreeSet::new();
    loop {
        let ready: Vec<&Generator> = deps
            .iter()
            .filter(|(g, d)| !placed.contains(**g) && d.iter().all(|h| placed.contains(h)))
            .map(|(g, _)| *g)
            .collect();
        if ready.is_empty() {
            break;
        }
        placed.extend(ready.into_iter().cloned());
    }
    placed.len() == deps.len()
}
