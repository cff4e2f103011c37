//! Scenario files: a JSON description of `(M, N, i*, i^!, E)`.
//!
//! ```json
//! {"M": "cp:3", "N": "cp-linear:1"}
//! {"M": "cp:2", "N": "point", "E": {"rank": 2, "chern": []}}
//! {"mode": "formal", "dims": {"M": 6, "N": 2}, "E": {"rank": 2, "chern": ["e1", "e2"]}}
//! ```
//!
//! Explicit presentations replace a preset string with
//! `{"dim", "generators": {name: degree}, "rules": {"g^k": rhs}, "integrals": {monomial: n}, "total_chern"}`
//! and then need an `"embedding": {"i_star": {...}, "i_shriek": {...}}`.
//! Classes are polynomial strings over the declared generator names.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Deserialize;

use crate::blowup_ring::BlowupContext;
use crate::error::{Error, Result};
use crate::graded_poly::{CoefficientMode, Generator, Monomial, Poly};
use crate::manifold::{ManifoldModel, ModelKind, Submanifold, M_SPACE, N_SPACE};
use crate::presets::{self, BlowupData, Field};
use crate::quotient_ring::{RewriteRule, RingPresentation};

/// A validated scenario. Building the blow-up context already ran every
/// consistency check on the input.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub label: String,
    pub data: BlowupData,
    pub context: BlowupContext,
}

impl Scenario {
    pub fn mode(&self) -> CoefficientMode {
        self.context.mode()
    }

    pub fn is_formal(&self) -> bool {
        self.context.is_formal()
    }

    fn build(label: String, data: BlowupData) -> Result<Self> {
        let context = data.context()?;
        Ok(Scenario {
            label,
            data,
            context,
        })
    }
}

pub fn parse_coefficients(text: &str) -> Result<CoefficientMode> {
    match text {
        "z" | "Z" | "integers" => Ok(CoefficientMode::Integers),
        "z2" | "Z2" | "Z/2" | "mod2" => Ok(CoefficientMode::Mod2),
        other => Err(Error::Unsupported(format!(
            "unknown coefficients `{other}` (expected z or z2)"
        ))),
    }
}

/// `M` and `N` given by preset names, e.g. `("cp:3", "cp-linear:1")`.
pub fn from_presets(m: &str, n: &str, mode: CoefficientMode) -> Result<Scenario> {
    let data = preset_pair(m, n, mode)?;
    Scenario::build(format!("{m}/{n}"), data)
}

pub fn formal_scenario(mode: CoefficientMode, dim_m: u32, dim_n: u32) -> Result<Scenario> {
    let data = presets::formal(mode, dim_m, dim_n, None)?;
    Scenario::build(format!("formal dimM={dim_m} dimN={dim_n}"), data)
}

/// Parses and validates a scenario file. `coefficients` overrides the
/// file's own setting when given.
pub fn parse_scenario_with(text: &str, coefficients: Option<CoefficientMode>) -> Result<Scenario> {
    let raw: RawScenario = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mode = match (coefficients, &raw.coefficients) {
        (Some(mode), _) => mode,
        (None, Some(c)) => parse_coefficients(c)?,
        (None, None) => CoefficientMode::Integers,
    };
    let ctx = Locator { text, mode };
    let formal = match raw.mode.as_deref() {
        None | Some("concrete") => false,
        Some("formal") => true,
        Some(other) => return Err(ctx.error(other, 1, format!("unknown mode `{other}`"))),
    };
    let (label, data) = if formal {
        ctx.formal(&raw)?
    } else {
        ctx.concrete(&raw)?
    };
    Scenario::build(raw.label.clone().unwrap_or(label), data)
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    parse_scenario_with(text, None)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    label: Option<String>,
    mode: Option<String>,
    coefficients: Option<String>,
    #[serde(rename = "M")]
    m: Option<RawSpace>,
    #[serde(rename = "N")]
    n: Option<RawSpace>,
    dims: Option<RawDims>,
    embedding: Option<RawEmbedding>,
    #[serde(rename = "E")]
    e: Option<RawBundle>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawSpace {
    Preset(String),
    Presentation(RawPresentation),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPresentation {
    dim: u32,
    generators: BTreeMap<String, u32>,
    #[serde(default)]
    rules: BTreeMap<String, String>,
    integrals: Option<BTreeMap<String, RawInt>>,
    total_chern: String,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawInt {
    Int(i64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDims {
    #[serde(rename = "M")]
    m: u32,
    #[serde(rename = "N")]
    n: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEmbedding {
    #[serde(default)]
    i_star: BTreeMap<String, String>,
    #[serde(default)]
    i_shriek: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBundle {
    rank: u32,
    chern: Option<Vec<String>>,
}

/// Turns failures inside string values into errors located in the source.
struct Locator<'a> {
    text: &'a str,
    mode: CoefficientMode,
}

impl Locator<'_> {
    /// Position of `column` (1-based) inside the first string literal equal
    /// to `value`; falls back to the start of the file.
    fn error(&self, value: &str, column: usize, message: String) -> Error {
        let needle = serde_json::to_string(value).unwrap_or_default();
        let offset = self
            .text
            .find(&needle)
            .map(|i| i + 1 + column.saturating_sub(1))
            .unwrap_or(0);
        let before = &self.text[..offset.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.len() - before.rfind('\n').map(|i| i + 1).unwrap_or(0) + 1;
        Error::Parse {
            line,
            column: col,
            message,
        }
    }

    fn poly(&self, text: &str, ring: &RingPresentation) -> Result<Poly> {
        Poly::parse(text, self.mode, |s| ring.generator(s).cloned())
            .map_err(|e| self.error(text, e.column, e.message))
    }

    fn monomial(&self, text: &str, ring: &RingPresentation) -> Result<Monomial> {
        let p = self.poly(text, ring)?;
        let mut terms = p.terms();
        match (terms.next(), terms.next()) {
            (Some((m, c)), None) if *c == BigInt::from(1) => Ok(m.clone()),
            _ => Err(self.error(text, 1, format!("`{text}` is not a monomial"))),
        }
    }

    fn formal(&self, raw: &RawScenario) -> Result<(String, BlowupData)> {
        if raw.m.is_some() || raw.n.is_some() || raw.embedding.is_some() {
            return Err(Error::Unsupported(
                "formal scenarios take `dims` instead of `M`, `N` and `embedding`".into(),
            ));
        }
        let dims = raw
            .dims
            .as_ref()
            .ok_or_else(|| Error::Unsupported("formal scenario without `dims`".into()))?;
        let names = match raw.e.as_ref().and_then(|e| e.chern.as_ref()) {
            Some(names) => {
                for name in names {
                    let ok = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if !ok {
                        return Err(self.error(
                            name,
                            1,
                            format!(
                                "formal normal bundle classes are generator names, got `{name}`"
                            ),
                        ));
                    }
                }
                Some(names.as_slice())
            }
            None => None,
        };
        let data = presets::formal(self.mode, dims.m, dims.n, names)?;
        check_rank(raw.e.as_ref(), data.rank)?;
        Ok((format!("formal dimM={} dimN={}", dims.m, dims.n), data))
    }

    fn concrete(&self, raw: &RawScenario) -> Result<(String, BlowupData)> {
        let (m, n) = match (&raw.m, &raw.n) {
            (Some(m), Some(n)) => (m, n),
            _ => {
                return Err(Error::Unsupported(
                    "concrete scenarios need both `M` and `N`".into(),
                ))
            }
        };
        let mut data = match (m, n) {
            (RawSpace::Preset(m), RawSpace::Preset(n)) if raw.embedding.is_none() => {
                preset_pair(m, n, self.mode)?
            }
            _ => self.explicit(m, n, raw)?,
        };
        let label = match (m, n) {
            (RawSpace::Preset(m), RawSpace::Preset(n)) => format!("{m}/{n}"),
            _ => "custom".to_owned(),
        };
        if let Some(e) = &raw.e {
            check_rank(Some(e), data.rank)?;
            if let Some(chern) = &e.chern {
                data.e_classes = self.classes(chern, &data.sub.ring)?;
            }
        }
        Ok((label, data))
    }

    fn classes(&self, texts: &[String], ring: &RingPresentation) -> Result<Vec<Poly>> {
        texts.iter().map(|t| self.poly(t, ring)).collect()
    }

    fn space(&self, raw: &RawSpace, space: &str) -> Result<(Arc<RingPresentation>, Poly)> {
        match raw {
            RawSpace::Preset(name) => standalone_preset(name, space, self.mode),
            RawSpace::Presentation(p) => self.presentation(p, space),
        }
    }

    fn presentation(
        &self,
        raw: &RawPresentation,
        space: &str,
    ) -> Result<(Arc<RingPresentation>, Poly)> {
        let gens: Vec<Generator> = raw
            .generators
            .iter()
            .map(|(name, &deg)| Generator::new(name, deg, space))
            .collect();
        let mut ring = RingPresentation::new(space, self.mode, gens, raw.dim);
        for (lhs, rhs) in &raw.rules {
            let m = self.monomial(lhs, &ring)?;
            let [(g, k)] = m.factors() else {
                return Err(self.error(
                    lhs,
                    1,
                    format!("rule left side `{lhs}` is not a generator power"),
                ));
            };
            let rhs = self.poly(rhs, &ring)?;
            ring.add_rule(RewriteRule::new(g.clone(), *k, rhs))?;
        }
        if let Some(integrals) = &raw.integrals {
            let mut table = BTreeMap::new();
            for (mono, value) in integrals {
                let v = match value {
                    RawInt::Int(v) => BigInt::from(*v),
                    RawInt::Text(t) => t
                        .parse()
                        .map_err(|_| self.error(t, 1, format!("`{t}` is not an integer")))?,
                };
                table.insert(self.monomial(mono, &ring)?, v);
            }
            ring = ring.with_integrals(table);
        }
        ring.validate().into_result()?;
        let total = self.poly(&raw.total_chern, &ring)?;
        Ok((Arc::new(ring), total))
    }

    fn explicit(&self, m: &RawSpace, n: &RawSpace, raw: &RawScenario) -> Result<BlowupData> {
        let embedding = raw.embedding.as_ref().ok_or_else(|| {
            Error::Unsupported("explicit presentations need an `embedding`".into())
        })?;
        let e = raw
            .e
            .as_ref()
            .ok_or_else(|| Error::Unsupported("explicit presentations need `E`".into()))?;
        let (m_ring, m_total) = self.space(m, M_SPACE)?;
        let (n_ring, n_total) = self.space(n, N_SPACE)?;
        let (i_star, i_shriek) = self.embedding(embedding, &m_ring, &n_ring)?;
        let e_classes = match &e.chern {
            Some(chern) => self.classes(chern, &n_ring)?,
            None => Vec::new(),
        };
        Ok(BlowupData {
            model: ManifoldModel::presented(m_ring, m_total, i_star, i_shriek),
            sub: Submanifold {
                ring: n_ring,
                total_class: n_total,
            },
            rank: e.rank,
            e_classes,
        })
    }

    #[allow(clippy::type_complexity)]
    fn embedding(
        &self,
        raw: &RawEmbedding,
        m_ring: &RingPresentation,
        n_ring: &RingPresentation,
    ) -> Result<(BTreeMap<Generator, Poly>, BTreeMap<Monomial, Poly>)> {
        let mut i_star = BTreeMap::new();
        for (g, image) in &raw.i_star {
            let gen = m_ring
                .generator(g)
                .ok_or_else(|| self.error(g, 1, format!("`{g}` is not a generator of M")))?;
            i_star.insert(gen.clone(), self.poly(image, n_ring)?);
        }
        let mut i_shriek = BTreeMap::new();
        for (mono, image) in &raw.i_shriek {
            i_shriek.insert(self.monomial(mono, n_ring)?, self.poly(image, m_ring)?);
        }
        Ok((i_star, i_shriek))
    }
}

fn check_rank(e: Option<&RawBundle>, rank: u32) -> Result<()> {
    match e {
        Some(e) if e.rank != rank => Err(Error::DimensionMismatch(format!(
            "normal bundle rank {} but the dimensions force rank {rank}",
            e.rank
        ))),
        _ => Ok(()),
    }
}

fn split_preset(name: &str) -> Result<(&str, u32)> {
    let (kind, n) = name
        .split_once(':')
        .ok_or_else(|| Error::UnknownPreset(name.to_owned()))?;
    let n = n
        .parse()
        .map_err(|_| Error::UnknownPreset(name.to_owned()))?;
    Ok((kind, n))
}

fn field_of(kind: &str) -> Option<Field> {
    match kind {
        "cp" => Some(Field::Complex),
        "rp" => Some(Field::Real),
        _ => None,
    }
}

fn preset_pair(m: &str, n: &str, mode: CoefficientMode) -> Result<BlowupData> {
    let (kind, dim) = split_preset(m)?;
    let field = field_of(kind).ok_or_else(|| Error::UnknownPreset(m.to_owned()))?;
    let k = if n == "point" {
        0
    } else {
        let (sub_kind, k) = split_preset(n)?;
        let expected = [kind.to_owned(), format!("{kind}-linear")];
        if !expected.iter().any(|e| e == sub_kind) {
            return Err(Error::UnknownPreset(format!("{n} inside {m}")));
        }
        k
    };
    presets::linear_subspace(field, mode, dim, k)
}

/// A preset standing on its own, for use beside an explicit presentation.
fn standalone_preset(
    name: &str,
    space: &str,
    mode: CoefficientMode,
) -> Result<(Arc<RingPresentation>, Poly)> {
    if name == "point" {
        return Ok((
            Arc::new(RingPresentation::point("point", mode)),
            Poly::one(mode),
        ));
    }
    let (kind, n) = split_preset(name)?;
    let field = field_of(kind).ok_or_else(|| Error::UnknownPreset(name.to_owned()))?;
    if !(1..=presets::MAX_PROJECTIVE_DIM).contains(&n) {
        return Err(Error::UnknownPreset(name.to_owned()));
    }
    let (ring, _, total) = presets::projective_space(field, mode, n, space)?;
    Ok((ring, total))
}

impl Scenario {
    /// The `i^!` table of a presented scenario, if any.
    pub fn i_shriek_table(&self) -> Option<&BTreeMap<Monomial, Poly>> {
        match &self.data.model.kind {
            ModelKind::Presented { i_shriek, .. } => Some(i_shriek),
            ModelKind::FormalGysin => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_examples() {
        let s = parse_scenario(r#"{"M":"cp:2","N":"point","E":{"rank":2,"chern":[]}}"#).unwrap();
        assert_eq!(s.label, "cp:2/point");
        assert_eq!(s.context.rank(), 2);
        assert!(!s.is_formal());

        let s = parse_scenario(
            r#"{"mode":"formal","dims":{"M":6,"N":2},"E":{"rank":2,"chern":["e1","e2"]}}"#,
        )
        .unwrap();
        assert!(s.is_formal());
        assert_eq!(s.context.dimension(), 6);
    }

    #[test]
    fn whitney_violation_reports_degree() {
        let err =
            parse_scenario(r#"{"M":"cp:3","N":"cp-linear:1","E":{"rank":2,"chern":["0","0"]}}"#)
                .unwrap_err();
        assert!(
            matches!(err, Error::WhitneyViolation { degree: 2, .. }),
            "{err}"
        );
        // (1 + hN)^2 is the correct normal bundle
        parse_scenario(r#"{"M":"cp:3","N":"cp-linear:1","E":{"rank":2,"chern":["2*hN","hN^2"]}}"#)
            .unwrap();
    }

    #[test]
    fn syntax_errors_are_located() {
        let err = parse_scenario("{\n  \"M\": \"cp:2\",\n  \"N\" \"point\"\n}").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");

        let err = parse_scenario("{\"M\":\"cp:3\",\n\"N\":\"cp-linear:1\",\n\"E\":{\"rank\":2,\"chern\":[\"2*hN\",\"hN^^2\"]}}")
            .unwrap_err();
        let Error::Parse { line, column, .. } = err else {
            panic!("{err}")
        };
        assert_eq!(line, 3);
        assert!(column > 20);
    }

    #[test]
    fn unknown_presets() {
        for (m, n) in [
            ("cp:9", "point"),
            ("hp:2", "point"),
            ("cp:2", "rp-linear:1"),
            ("cp:2", "torus"),
        ] {
            let err = from_presets(m, n, CoefficientMode::Integers).unwrap_err();
            assert!(matches!(err, Error::UnknownPreset(_)), "{m} {n}: {err}");
        }
    }

    #[test]
    fn rank_must_match() {
        let err = parse_scenario(r#"{"M":"cp:2","N":"point","E":{"rank":3}}"#).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
    }

    const EXPLICIT: &str = r#"{
        "M": {"dim": 6, "generators": {"h": 2}, "rules": {"h^4": "0"},
              "integrals": {"h^3": 1}, "total_chern": "1 + 4*h + 6*h^2 + 4*h^3"},
        "N": "cp:1",
        "embedding": {"i_star": {"h": "hN"}, "i_shriek": {"1": "h^2", "hN": "h^3"}},
        "E": {"rank": 2, "chern": ["2*hN"]}
    }"#;

    #[test]
    fn explicit_presentation_matches_preset() {
        let explicit = parse_scenario(EXPLICIT).unwrap();
        let preset = from_presets("cp:3", "cp-linear:1", CoefficientMode::Integers).unwrap();
        let (a, b) = (&explicit.context, &preset.context);
        let ta = a.total_class().unwrap();
        let tb = b.total_class().unwrap();
        assert_eq!(
            a.integrate(&a.degree_part(&ta, 6)).unwrap(),
            BigInt::from(6)
        );
        assert_eq!(
            a.integrate(&a.degree_part(&ta, 6)).unwrap(),
            b.integrate(&b.degree_part(&tb, 6)).unwrap()
        );
    }

    #[test]
    fn corrupted_i_shriek_is_rejected() {
        let bad = EXPLICIT.replace(r#""hN": "h^3""#, r#""hN": "2*h^3""#);
        let err = parse_scenario(&bad).unwrap_err();
        assert!(matches!(err, Error::TableInconsistency(_)), "{err}");
    }

    #[test]
    fn coefficient_override() {
        let s = parse_scenario_with(r#"{"M":"cp:2","N":"point"}"#, Some(CoefficientMode::Mod2))
            .unwrap();
        assert_eq!(s.mode(), CoefficientMode::Mod2);
        assert_eq!(s.context.rank(), 4);
        let s = parse_scenario(r#"{"coefficients":"z2","M":"rp:3","N":"rp-linear:1"}"#).unwrap();
        assert_eq!(s.context.rank(), 2);
    }
}
