//! Ready-made blow-up data: points and linear subspaces of projective
//! spaces, and formal manifolds of given dimensions.
//!
//! Presets go through exactly the same validation as user-supplied data.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::blowup_ring::BlowupContext;
use crate::error::{Error, Result};
use crate::graded_poly::{CoefficientMode, Generator, Monomial, Poly};
use crate::manifold::{formal_ring, ManifoldModel, Submanifold, M_SPACE, N_SPACE};
use crate::quotient_ring::RingPresentation;

pub const MAX_PROJECTIVE_DIM: u32 = 8;

/// Everything needed to build a [`BlowupContext`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupData {
    pub model: ManifoldModel,
    pub sub: Submanifold,
    pub rank: u32,
    pub e_classes: Vec<Poly>,
}

impl BlowupData {
    pub fn into_context(self) -> Result<BlowupContext> {
        BlowupContext::new(self.model, self.sub, self.rank, &self.e_classes)
    }

    pub fn context(&self) -> Result<BlowupContext> {
        self.clone().into_context()
    }
}

/// Projective space family: complex (`h` of degree 2) or real (`a` of
/// degree 1, mod 2 only).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Complex,
    Real,
}

impl Field {
    pub fn prefix(self) -> &'static str {
        match self {
            Field::Complex => "cp",
            Field::Real => "rp",
        }
    }

    fn generator_degree(self) -> u32 {
        match self {
            Field::Complex => 2,
            Field::Real => 1,
        }
    }

    fn generator_name(self) -> &'static str {
        match self {
            Field::Complex => "h",
            Field::Real => "a",
        }
    }

    fn check_mode(self, mode: CoefficientMode) -> Result<()> {
        if self == Field::Real && mode == CoefficientMode::Integers {
            return Err(Error::WrongCoefficients(
                "real projective spaces are only modelled with Z/2 coefficients".into(),
            ));
        }
        Ok(())
    }
}

fn check_dim(n: u32) -> Result<()> {
    if !(1..=MAX_PROJECTIVE_DIM).contains(&n) {
        return Err(Error::UnknownPreset(format!(
            "projective dimension {n} outside 1..={MAX_PROJECTIVE_DIM}"
        )));
    }
    Ok(())
}

/// `H*(KP^n)` with total class `(1 + h)^{n+1}`.
pub fn projective_space(
    field: Field,
    mode: CoefficientMode,
    n: u32,
    space: &str,
) -> Result<(Arc<RingPresentation>, Generator, Poly)> {
    field.check_mode(mode)?;
    let suffix = if space == M_SPACE { "" } else { space };
    let h = Generator::new(
        &format!("{}{suffix}", field.generator_name()),
        field.generator_degree(),
        space,
    );
    let ring = RingPresentation::truncated_polynomial(
        format!("{}:{n}", field.prefix()),
        mode,
        h.clone(),
        n,
    );
    let total = ring.normalize(&(&Poly::one(mode) + &Poly::generator(mode, &h)).pow(n + 1));
    Ok((Arc::new(ring), h, total))
}

/// Splits a total class into `[c_1, …, c_rank]` by degree.
pub fn classes_by_degree(total: &Poly, rank: u32, mode: CoefficientMode) -> Vec<Poly> {
    let unit = mode.unit_degree();
    (1..=rank).map(|i| total.degree_part(unit * i)).collect()
}

/// `KP^k` linearly embedded in `KP^n` (`k = 0` is a point): `i*h = h_N`,
/// `i^!(h_N^j) = h^{j+n-k}`, normal bundle `(1 + h_N)^{n-k}`.
pub fn linear_subspace(field: Field, mode: CoefficientMode, n: u32, k: u32) -> Result<BlowupData> {
    check_dim(n)?;
    if k >= n {
        return Err(Error::UnknownPreset(format!(
            "{}-linear:{k} does not fit in {}:{n}",
            field.prefix(),
            field.prefix()
        )));
    }
    let (m_ring, h, m_total) = projective_space(field, mode, n, M_SPACE)?;
    let (n_ring, h_n, n_total) = if k == 0 {
        let ring = Arc::new(RingPresentation::point("point", mode));
        // h_N is never used for a point
        let h_n = Generator::new("hN", field.generator_degree(), N_SPACE);
        (ring, h_n, Poly::one(mode))
    } else {
        projective_space(field, mode, k, N_SPACE)?
    };

    let i_star_h = if k == 0 {
        Poly::zero(mode)
    } else {
        Poly::generator(mode, &h_n)
    };
    let i_star = BTreeMap::from([(h.clone(), i_star_h)]);
    let i_shriek: BTreeMap<Monomial, Poly> = (0..=k)
        .map(|j| {
            (
                Monomial::power(&h_n, j),
                Poly::term(mode, 1, Monomial::power(&h, j + n - k)),
            )
        })
        .collect();

    let real_codim = field.generator_degree() * (n - k);
    let unit = mode.unit_degree();
    let rank = real_codim / unit;
    let e_total = if k == 0 {
        Poly::one(mode)
    } else {
        n_ring.normalize(&(&Poly::one(mode) + &Poly::generator(mode, &h_n)).pow(n - k))
    };

    Ok(BlowupData {
        model: ManifoldModel::presented(m_ring, m_total, i_star, i_shriek),
        sub: Submanifold {
            ring: n_ring,
            total_class: n_total,
        },
        rank,
        e_classes: classes_by_degree(&e_total, rank, mode),
    })
}

/// Formal `N` of dimension `dim_n` with generators `cN_i` and the normal
/// bundle classes named by `e_names` (defaults `e1, …, er`).
pub fn formal(
    mode: CoefficientMode,
    dim_m: u32,
    dim_n: u32,
    e_names: Option<&[String]>,
) -> Result<BlowupData> {
    let unit = mode.unit_degree();
    if dim_m <= dim_n || !(dim_m - dim_n).is_multiple_of(unit) {
        return Err(Error::DimensionMismatch(format!(
            "formal blow-up needs dim M - dim N a positive multiple of {unit}, got {dim_m} and {dim_n}"
        )));
    }
    if !dim_m.is_multiple_of(unit) || !dim_n.is_multiple_of(unit) {
        return Err(Error::DimensionMismatch(format!(
            "dimensions must be multiples of {unit} for {mode:?} coefficients"
        )));
    }
    let rank = (dim_m - dim_n) / unit;
    let names: Vec<String> = match e_names {
        Some(names) => names.to_vec(),
        None => (1..=rank).map(|i| format!("e{i}")).collect(),
    };
    if names.len() > rank as usize {
        return Err(Error::DegreeMismatch(format!(
            "{} normal bundle classes for rank {rank}",
            names.len()
        )));
    }
    let e_gens: Vec<Generator> = names
        .iter()
        .enumerate()
        .map(|(i, name)| Generator::new(name, unit * (i as u32 + 1), N_SPACE))
        .collect();
    let (n_ring, n_total) = formal_ring("N", mode, N_SPACE, dim_n, e_gens.clone());
    let mut seen = std::collections::BTreeSet::new();
    for g in n_ring.generators() {
        if !seen.insert(g.name()) {
            return Err(Error::InvalidPresentation {
                ring: "N".into(),
                reason: format!("duplicate generator name {}", g.name()),
            });
        }
    }
    let e_classes = e_gens.iter().map(|g| Poly::generator(mode, g)).collect();
    Ok(BlowupData {
        model: ManifoldModel::formal(mode, dim_m),
        sub: Submanifold {
            ring: Arc::new(n_ring),
            total_class: n_total,
        },
        rank,
        e_classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: CoefficientMode = CoefficientMode::Integers;
    const Z2: CoefficientMode = CoefficientMode::Mod2;

    #[test]
    fn projective_presets_validate() {
        for n in 1..=MAX_PROJECTIVE_DIM {
            for k in 0..n {
                let data = linear_subspace(Field::Complex, Z, n, k).unwrap();
                data.context()
                    .unwrap_or_else(|e| panic!("cp:{n} ⊃ {k}: {e}"));
                let data = linear_subspace(Field::Complex, Z2, n, k).unwrap();
                data.context().unwrap();
                let data = linear_subspace(Field::Real, Z2, n, k).unwrap();
                data.context().unwrap();
            }
        }
    }

    #[test]
    fn out_of_range_presets() {
        assert!(linear_subspace(Field::Complex, Z, 9, 0).is_err());
        assert!(linear_subspace(Field::Complex, Z, 3, 3).is_err());
        assert!(linear_subspace(Field::Real, Z, 3, 1).is_err());
    }

    #[test]
    fn formal_presets() {
        let data = formal(Z, 6, 2, None).unwrap();
        assert_eq!(data.rank, 2);
        let names: Vec<&str> = data
            .sub
            .ring
            .generators()
            .iter()
            .map(|g| g.name())
            .collect();
        assert_eq!(names, ["cN1", "e1", "e2"]);
        data.context().unwrap();
        assert!(formal(Z, 5, 2, None).is_err());
        assert!(formal(Z, 2, 2, None).is_err());
        assert_eq!(formal(Z2, 5, 2, None).unwrap().rank, 3);
    }
}
