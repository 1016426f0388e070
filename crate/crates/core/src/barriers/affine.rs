//! Affine facet barriers and their Boolean min-composition over a corridor
//! of convex obstacles and bounding walls.
//!
//! Composition rule: for each obstacle only its separating facet (the facet
//! with the largest value at the reference point) participates, then the
//! global barrier is the minimum over those facets and all wall facets.
//! Taking the raw minimum over every obstacle facet would mark the whole
//! corridor unsafe, since any point is behind the far side of some obstacle.

use nalgebra::DVector;

use super::BarrierError;
use crate::scalar::{real, Scalar};

/// Single affine constraint `h(p) = normal . p - offset`; safe where
/// nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineFacet<T: Scalar> {
    pub normal: DVector<T>,
    pub offset: T,
}

impl<T: Scalar> AffineFacet<T> {
    pub fn new(normal: DVector<T>, offset: T) -> Result<Self, BarrierError> {
        if normal.norm() <= T::zero() {
            return Err(BarrierError::Invalid("facet normal must be nonzero".into()));
        }
        Ok(AffineFacet { normal, offset })
    }

    pub fn eval(&self, p: &DVector<T>) -> T {
        self.normal.dot(p) - self.offset
    }
}

/// Convex obstacle described by facets that are safe on the outside.
#[derive(Debug, Clone, PartialEq)]
pub struct Obstacle<T: Scalar> {
    pub facets: Vec<AffineFacet<T>>,
}

impl<T: Scalar> Obstacle<T> {
    /// Regular dodecahedron with the given center and circumradius.
    pub fn dodecahedron(center: &DVector<T>, circumradius: T) -> Self {
        let phi: T = real((1.0 + 5f64.sqrt()) / 2.0);
        let scale = T::one() / (T::one() + phi * phi).sqrt();
        // inradius / circumradius for the regular dodecahedron
        let inradius =
            circumradius * phi / ((real::<T>(3.0)).sqrt() * (real::<T>(3.0) - phi).sqrt());
        let mut facets = Vec::with_capacity(12);
        for s1 in [T::one(), -T::one()] {
            for s2 in [T::one(), -T::one()] {
                let patterns = [
                    [T::zero(), s1, s2 * phi],
                    [s1, s2 * phi, T::zero()],
                    [s1 * phi, T::zero(), s2],
                ];
                for p in patterns {
                    let normal = DVector::from_row_slice(&p) * scale;
                    let offset = normal.dot(center) + inradius;
                    facets.push(AffineFacet { normal, offset });
                }
            }
        }
        Obstacle { facets }
    }

    /// Separating facet: index with the largest value at `reference`,
    /// lowest index on ties.
    pub fn separating_facet(&self, reference: &DVector<T>) -> usize {
        let mut best = 0;
        let mut best_value = self.facets[0].eval(reference);
        for (j, facet) in self.facets.iter().enumerate().skip(1) {
            let value = facet.eval(reference);
            if value > best_value {
                best = j;
                best_value = value;
            }
        }
        best
    }
}

/// Identifier of one facet of the composed barrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FacetId {
    Obstacle { obstacle: usize, facet: usize },
    Wall { wall: usize },
}

/// Corridor of convex obstacles (safe outside) and walls (safe inside the
/// half-space).
#[derive(Debug, Clone, PartialEq)]
pub struct CorridorEnvironment<T: Scalar> {
    pub obstacles: Vec<Obstacle<T>>,
    pub walls: Vec<AffineFacet<T>>,
}

impl<T: Scalar> CorridorEnvironment<T> {
    pub fn new(
        obstacles: Vec<Obstacle<T>>,
        walls: Vec<AffineFacet<T>>,
    ) -> Result<Self, BarrierError> {
        for (i, obstacle) in obstacles.iter().enumerate() {
            if obstacle.facets.len() < 4 {
                return Err(BarrierError::Invalid(format!(
                    "obstacle {i} has {} facets, need at least 4",
                    obstacle.facets.len()
                )));
            }
            for (j, facet) in obstacle.facets.iter().enumerate() {
                let norm = facet.normal.norm();
                if (norm - T::one()).abs() > real(1e-9) {
                    return Err(BarrierError::Invalid(format!(
                        "obstacle {i} facet {j} normal has length {norm}, must be unit"
                    )));
                }
            }
        }
        Ok(CorridorEnvironment { obstacles, walls })
    }

    pub fn facet(&self, id: FacetId) -> &AffineFacet<T> {
        match id {
            FacetId::Obstacle { obstacle, facet } => &self.obstacles[obstacle].facets[facet],
            FacetId::Wall { wall } => &self.walls[wall],
        }
    }

    /// Active facet at `reference`: per obstacle the separating facet, then
    /// the global minimizer across those and the walls. Ties resolve to the
    /// lowest index in canonical order (obstacles first, then walls).
    pub fn select_active_facet(&self, reference: &DVector<T>) -> FacetId {
        let mut best_id = None;
        let mut best_value = T::zero();
        for (i, obstacle) in self.obstacles.iter().enumerate() {
            let j = obstacle.separating_facet(reference);
            let value = obstacle.facets[j].eval(reference);
            if best_id.is_none() || value < best_value {
                best_id = Some(FacetId::Obstacle {
                    obstacle: i,
                    facet: j,
                });
                best_value = value;
            }
        }
        for (k, wall) in self.walls.iter().enumerate() {
            let value = wall.eval(reference);
            if best_id.is_none() || value < best_value {
                best_id = Some(FacetId::Wall { wall: k });
                best_value = value;
            }
        }
        best_id.expect("environment has at least one facet")
    }

    /// Composed barrier value at `p` together with the active facet.
    pub fn composed_eval(&self, p: &DVector<T>) -> (T, FacetId) {
        let id = self.select_active_facet(p);
        (self.facet(id).eval(p), id)
    }
}
