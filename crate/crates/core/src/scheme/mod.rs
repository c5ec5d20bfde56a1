//! Fat flat subschemes: linear subspaces with multiplicities, none
//! containing another.

mod builders;
mod plane;

pub use builders::{
    build_fat_flat, build_integer_target, build_quasi_star, build_rational_target, generic_extras, star_configuration,
    ExtraSpec, StarData,
};
pub use plane::{build_plane_family, PlaneFamily};

use crate::error::{Error, Result};
use crate::field::Rational;
use crate::projective::{collinear, subspace_contains, LinForm, Point, Subspace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FatComponent {
    pub subspace: Subspace,
    pub multiplicity: u32,
    pub label: Option<String>,
}

impl FatComponent {
    pub fn new(subspace: Subspace, multiplicity: u32) -> Self {
        Self { subspace, multiplicity, label: None }
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

/// How a scheme was built: the star it contains, if any, and what the
/// construction predicts for its Waldschmidt constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub kind: String,
    pub star: Option<StarProvenance>,
    pub predicted_waldschmidt: Option<Rational>,
    /// When set, `alpha(I^(k)) = value * k` for every `k`.
    pub predicted_linear_alpha: Option<u64>,
}

/// The hyperplanes of a star configuration `m S_N(e, s)` contained in the scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarProvenance {
    pub e: usize,
    pub s: usize,
    pub m: u32,
    pub hyperplanes: Vec<LinForm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FatFlatScheme {
    ambient_dim: usize,
    components: Vec<FatComponent>,
    construction: Option<Construction>,
}

impl FatFlatScheme {
    pub fn new(ambient_dim: usize, components: Vec<FatComponent>) -> Result<Self> {
        let scheme = Self { ambient_dim, components, construction: None };
        scheme.validate()?;
        Ok(scheme)
    }

    pub fn with_construction(mut self, construction: Construction) -> Self {
        self.construction = Some(construction);
        self
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn components(&self) -> &[FatComponent] {
        &self.components
    }

    pub fn construction(&self) -> Option<&Construction> {
        self.construction.as_ref()
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.components.iter().map(|c| c.multiplicity).max().unwrap_or(0)
    }

    /// Checks the invariants: shared ambient space, positive multiplicities,
    /// distinct supports, and no support containing another.
    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::InvalidScheme("a scheme needs at least one component".into()));
        }
        for (i, c) in self.components.iter().enumerate() {
            if c.subspace.ambient_dim() != self.ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: self.ambient_dim,
                    found: c.subspace.ambient_dim(),
                });
            }
            if c.multiplicity == 0 {
                return Err(Error::InvalidScheme(format!("component {i} has multiplicity 0")));
            }
        }
        for i in 0..self.components.len() {
            for j in i + 1..self.components.len() {
                let (a, b) = (&self.components[i].subspace, &self.components[j].subspace);
                if a == b {
                    return Err(Error::InvalidScheme(format!("components {i} and {j} coincide")));
                }
                if subspace_contains(a, b) || subspace_contains(b, a) {
                    return Err(Error::Containment(format!("components {i} and {j} are nested")));
                }
            }
        }
        Ok(())
    }

    /// The scheme `m X`: every multiplicity times `m`, support unchanged.
    pub fn scale_multiplicities(&self, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameters("scaling factor must be positive".into()));
        }
        let components = self
            .components
            .iter()
            .map(|c| FatComponent { multiplicity: c.multiplicity * m, ..c.clone() })
            .collect();
        let construction = self.construction.clone().map(|mut c| {
            if let Some(star) = c.star.as_mut() {
                star.m *= m;
            }
            c.predicted_waldschmidt = c.predicted_waldschmidt.map(|w| w * Rational::from_integer(m.into()));
            c.predicted_linear_alpha = c.predicted_linear_alpha.map(|a| a * m as u64);
            c
        });
        Ok(Self { ambient_dim: self.ambient_dim, components, construction })
    }

    /// Apply `x -> T x` to every component.
    pub fn transformed(&self, t: &[Vec<Rational>]) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|c| Ok(FatComponent { subspace: c.subspace.transformed(t)?, ..c.clone() }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.ambient_dim, components)
    }
}

/// The vanishing orders defining the `k`-th symbolic power: each component
/// with multiplicity `k * mu`. Powers of ideals of linear subspaces are
/// unmixed, so the symbolic power is the intersection of these.
pub fn symbolic_multiplicities(scheme: &FatFlatScheme, k: u32) -> Vec<(Subspace, u32)> {
    scheme.components.iter().map(|c| (c.subspace.clone(), c.multiplicity * k)).collect()
}

/// Fat points `m_1 p_1 + ... + m_n p_n` in the plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FatPointsP2 {
    points: Vec<Point>,
    multiplicities: Vec<u32>,
}

impl FatPointsP2 {
    pub fn new(points: Vec<Point>, multiplicities: Vec<u32>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameters("no points".into()));
        }
        if points.len() != multiplicities.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), found: multiplicities.len() });
        }
        if multiplicities.iter().any(|&m| m == 0) {
            return Err(Error::InvalidParameters("multiplicities must be positive".into()));
        }
        for p in &points {
            if p.ambient_dim() != 2 {
                return Err(Error::DimensionMismatch { expected: 2, found: p.ambient_dim() });
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Error::DuplicatePoints(i, j));
                }
            }
        }
        Ok(Self { points, multiplicities })
    }

    pub fn from_ints(points: &[[i64; 3]], multiplicities: &[u32]) -> Result<Self> {
        let pts = points.iter().map(|p| Point::from_ints(p)).collect::<Result<Vec<_>>>()?;
        Self::new(pts, multiplicities.to_vec())
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_collinear(&self) -> bool {
        self.points.len() < 3 || collinear(&self.points).expect("points are distinct")
    }

    /// The subscheme on the given indices with the given multiplicities.
    pub fn restrict(&self, indices: &[usize], multiplicities: &[u32]) -> Result<Self> {
        let pts = indices
            .iter()
            .map(|&i| self.points.get(i).cloned().ok_or_else(|| Error::InvalidParameters(format!("index {i}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(pts, multiplicities.to_vec())
    }

    pub fn to_scheme(&self) -> FatFlatScheme {
        let components = self
            .points
            .iter()
            .zip(&self.multiplicities)
            .enumerate()
            .map(|(i, (p, &m))| FatComponent::new(p.to_subspace(), m).labeled(format!("p{}", i + 1)))
            .collect();
        FatFlatScheme::new(2, components).expect("distinct points form a valid scheme")
    }

    pub fn from_scheme(scheme: &FatFlatScheme) -> Result<Self> {
        if scheme.ambient_dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: scheme.ambient_dim() });
        }
        let points = scheme
            .components()
            .iter()
            .map(|c| Point::from_subspace(&c.subspace))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points, scheme.components().iter().map(|c| c.multiplicity).collect())
    }

    /// Apply `x -> T x` to every point.
    pub fn transformed(&self, t: &[Vec<Rational>]) -> Result<Self> {
        let points = self.points.iter().map(|p| p.transformed(t)).collect::<Result<Vec<_>>>()?;
        Self::new(points, self.multiplicities.clone())
    }

    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mults: Vec<u32> = order.iter().map(|&i| self.multiplicities[i]).collect();
        self.restrict(order, &mults)
    }
}
