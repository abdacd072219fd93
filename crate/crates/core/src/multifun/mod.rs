//! Multivalued functions between digital images and the deciders for weak
//! continuity, strong continuity and connectivity preservation.

mod witness;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::grid::{sv_indices, DigitalImage, Point, PointMap, PointSet};

pub use witness::{find_witness, verify_witness, ContinuityWitness, Refutation, WitnessSearch};

/// A total map from the points of `domain` to nonempty subsets of
/// `codomain`. Point-images are stored as sorted codomain indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiFn {
    domain: DigitalImage,
    codomain: DigitalImage,
    values: Vec<Vec<usize>>,
}

impl MultiFn {
    pub fn new(
        domain: DigitalImage,
        codomain: DigitalImage,
        map: &BTreeMap<Point, PointSet>,
    ) -> Result<Self> {
        if map.len() != domain.len() {
            for p in map.keys() {
                domain.require(p)?;
            }
            let missing = domain
                .points()
                .iter()
                .find(|p| !map.contains_key(p))
                .unwrap();
            return Err(Error::InvalidInput(format!("no value given for {missing}")));
        }
        let values = domain
            .points()
            .iter()
            .map(|x| {
                let fx = map
                    .get(x)
                    .ok_or_else(|| Error::InvalidInput(format!("no value given for {x}")))?;
                Self::check_value(&codomain, x, fx)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiFn {
            domain,
            codomain,
            values,
        })
    }

    /// Builds the function from a closure evaluated at every domain point.
    pub fn from_fn(
        domain: DigitalImage,
        codomain: DigitalImage,
        f: impl Fn(&Point) -> PointSet,
    ) -> Result<Self> {
        let values = domain
            .points()
            .iter()
            .map(|x| Self::check_value(&codomain, x, &f(x)))
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiFn {
            domain,
            codomain,
            values,
        })
    }

    /// `x -> {f(x)}` for a single-valued map.
    pub fn singleton(domain: DigitalImage, codomain: DigitalImage, f: &PointMap) -> Result<Self> {
        let idx = sv_indices(f, &domain, &codomain)?;
        Ok(MultiFn {
            domain,
            codomain,
            values: idx.into_iter().map(|v| vec![v]).collect(),
        })
    }

    pub fn identity(image: DigitalImage) -> Self {
        let values = (0..image.len()).map(|i| vec![i]).collect();
        MultiFn {
            domain: image.clone(),
            codomain: image,
            values,
        }
    }

    fn check_value(codomain: &DigitalImage, x: &Point, fx: &PointSet) -> Result<Vec<usize>> {
        if fx.is_empty() {
            return Err(Error::InvalidInput(format!("empty point-image at {x}")));
        }
        fx.iter()
            .map(|y| {
                codomain.index_of(y).ok_or_else(|| {
                    Error::InvalidInput(format!("value {y} at {x} is outside the codomain"))
                })
            })
            .collect()
    }

    /// Caller guarantees sorted, nonempty, in-range point-images.
    pub(crate) fn from_indices(
        domain: DigitalImage,
        codomain: DigitalImage,
        values: Vec<Vec<usize>>,
    ) -> Self {
        debug_assert_eq!(values.len(), domain.len());
        debug_assert!(values.iter().all(|v| !v.is_empty()
            && v.windows(2).all(|w| w[0] < w[1])
            && v.iter().all(|&i| i < codomain.len())));
        MultiFn {
            domain,
            codomain,
            values,
        }
    }

    pub fn domain(&self) -> &DigitalImage {
        &self.domain
    }

    pub fn codomain(&self) -> &DigitalImage {
        &self.codomain
    }

    pub fn value(&self, x: &Point) -> Result<PointSet> {
        let i = self.domain.require(x)?;
        Ok(self.codomain.points_of(self.values[i].iter().copied()))
    }

    pub fn value_idx(&self, i: usize) -> &[usize] {
        &self.values[i]
    }

    pub fn values_idx(&self) -> &[Vec<usize>] {
        &self.values
    }

    pub fn to_map(&self) -> BTreeMap<Point, PointSet> {
        self.domain
            .points()
            .iter()
            .zip(&self.values)
            .map(|(x, v)| (x.clone(), self.codomain.points_of(v.iter().copied())))
            .collect()
    }

    /// `F(A)`, the union of the point-images over `a`.
    pub fn image_of_set(&self, a: &PointSet) -> Result<PointSet> {
        let idx = self.domain.indices_of(a)?;
        Ok(self.codomain.points_of(self.image_of_idx(&idx)))
    }

    pub(crate) fn image_of_idx(&self, a: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = a
            .iter()
            .flat_map(|&i| self.values[i].iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The restriction of `self` to a subset of its domain.
    pub fn restrict(&self, a: &PointSet) -> Result<MultiFn> {
        let idx = self.domain.indices_of(a)?;
        Ok(MultiFn {
            domain: self.domain.restrict(a)?,
            codomain: self.codomain.clone(),
            values: idx.into_iter().map(|i| self.values[i].clone()).collect(),
        })
    }

    pub fn is_surjective(&self) -> bool {
        self.image_of_idx(&(0..self.domain.len()).collect::<Vec<_>>())
            .len()
            == self.codomain.len()
    }

    pub fn point_images_connected(&self) -> bool {
        self.values
            .iter()
            .all(|v| self.codomain.is_connected_idx(v))
    }

    /// First point whose image is disconnected.
    pub(crate) fn disconnected_point_image(&self) -> Option<usize> {
        (0..self.values.len()).find(|&i| !self.codomain.is_connected_idx(&self.values[i]))
    }

    /// Adjacent domain pairs `(i, j)` with `i < j`.
    fn adjacent_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.domain.len()).flat_map(move |i| {
            self.domain
                .neighbors_idx(i)
                .iter()
                .filter(move |&&j| j > i)
                .map(move |&j| (i, j))
        })
    }

    pub(crate) fn first_weak_violation(&self) -> Option<(usize, usize)> {
        self.adjacent_pairs().find(|&(i, j)| {
            !self
                .codomain
                .sets_adjacent_idx(&self.values[i], &self.values[j])
        })
    }

    /// Adjacent domain points always have adjacent point-images.
    pub fn is_weak(&self) -> bool {
        self.first_weak_violation().is_none()
    }

    /// Every point of each adjacent pair's image is adjacent or equal to a
    /// point of the other image.
    pub fn is_strong(&self) -> bool {
        let y = &self.codomain;
        let covers = |a: &[usize], b: &[usize]| {
            a.iter()
                .all(|&p| b.iter().any(|&q| y.adjacent_or_equal_idx(p, q)))
        };
        self.adjacent_pairs().all(|(i, j)| {
            covers(&self.values[i], &self.values[j]) && covers(&self.values[j], &self.values[i])
        })
    }

    /// Connectivity preservation via its pointwise characterization: weak
    /// continuity plus connected point-images.
    pub fn is_cp(&self) -> bool {
        self.point_images_connected() && self.is_weak()
    }
}

/// `(G ∘ F)(x) = ⋃_{y ∈ F(x)} G(y)`.
pub fn compose(f: &MultiFn, g: &MultiFn) -> Result<MultiFn> {
    if f.codomain != g.domain {
        return Err(Error::InvalidInput(
            "codomain of the first function differs from the domain of the second".into(),
        ));
    }
    let values = f.values.iter().map(|fx| g.image_of_idx(fx)).collect();
    Ok(MultiFn::from_indices(
        f.domain.clone(),
        g.codomain.clone(),
        values,
    ))
}

/// Outcome of the bounded witness search, as reported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Continuity {
    WitnessFound {
        level: usize,
    },
    /// Inconclusive: no witness at any level up to `r_max`.
    NotFoundUpTo {
        r_max: usize,
    },
    /// Certified discontinuous by a necessary condition.
    Refuted(Refutation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub weak: bool,
    pub strong: bool,
    pub connectivity_preserving: bool,
    pub continuous: Continuity,
    pub witness: Option<ContinuityWitness>,
}

pub fn analyze(f: &MultiFn, r_max: usize) -> Result<PropertyReport> {
    let search = find_witness(f, r_max)?;
    let (continuous, witness) = match search {
        WitnessSearch::Found(w) => (Continuity::WitnessFound { level: w.level }, Some(w)),
        WitnessSearch::NotFound { r_max } => (Continuity::NotFoundUpTo { r_max }, None),
        WitnessSearch::Refuted(r) => (Continuity::Refuted(r), None),
    };
    Ok(PropertyReport {
        weak: f.is_weak(),
        strong: f.is_strong(),
        connectivity_preserving: f.is_cp(),
        continuous,
        witness,
    })
}
