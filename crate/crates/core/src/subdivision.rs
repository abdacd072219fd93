//! The `r`-th subdivision `S(X,r)`, its floor projection back to `X`, and
//! multivalued functions induced by single-valued maps on a subdivision.
//!
//! Subdivision points are kept as integer numerator tuples `z` (standing for
//! `z / r`), so adjacency in `S(X,r)` is ordinary `c_u` adjacency of the
//! numerators and every computation stays exact.

use crate::error::{Error, Result};
use crate::grid::{sv_indices, DigitalImage, Point, PointMap, PointSet};
use crate::multifun::{verify_witness, ContinuityWitness, MultiFn};

#[derive(Clone, Debug)]
pub struct SubdividedImage {
    base: DigitalImage,
    scale: usize,
    image: DigitalImage,
    projection: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

/// Builds `S(X,r)`: each point `x` becomes the block `r*x + {0..r-1}^n`.
pub fn subdivide(x: &DigitalImage, r: usize) -> Result<SubdividedImage> {
    if r < 1 {
        return Err(Error::InvalidInput(
            "subdivision level must be at least 1".into(),
        ));
    }
    let spec = x.spec();
    let n = spec.dim();
    let offsets = block_offsets(n, r);
    let scale = r as i64;
    let mut points = Vec::with_capacity(x.len() * offsets.len());
    for p in x.points() {
        for off in &offsets {
            let z: Vec<i64> = p
                .coords()
                .iter()
                .zip(off)
                .map(|(c, d)| c * scale + d)
                .collect();
            points.push(Point::new(z));
        }
    }
    points.sort();
    let image = DigitalImage::from_sorted(spec, points);
    let projection: Vec<usize> = image
        .points()
        .iter()
        .map(|z| {
            x.index_of(&floor_div(z, scale))
                .expect("subdivision point projects into its base")
        })
        .collect();
    let mut blocks = vec![Vec::new(); x.len()];
    for (zi, &xi) in projection.iter().enumerate() {
        blocks[xi].push(zi);
    }
    Ok(SubdividedImage {
        base: x.clone(),
        scale: r,
        image,
        projection,
        blocks,
    })
}

/// `{0..r-1}^n` in lexicographic order.
fn block_offsets(n: usize, r: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..r as i64).map(move |d| {
                    let mut v = prefix.clone();
                    v.push(d);
                    v
                })
            })
            .collect();
    }
    out
}

pub(crate) fn floor_div(z: &Point, scale: i64) -> Point {
    Point::new(
        z.coords()
            .iter()
            .map(|c| c.div_euclid(scale))
            .collect::<Vec<_>>(),
    )
}

impl SubdividedImage {
    pub fn base(&self) -> &DigitalImage {
        &self.base
    }

    pub fn scale(&self) -> usize {
        self.scale
    }

    /// The numerator points as a digital image with the base adjacency.
    pub fn image(&self) -> &DigitalImage {
        &self.image
    }

    /// `E_r(z)`, the base point under a numerator tuple.
    pub fn project(&self, z: &Point) -> Result<Point> {
        let zi = self.image.require(z)?;
        Ok(self.base.point(self.projection[zi]).clone())
    }

    /// `E_r^{-1}(x)`: the `r^n` numerators in the block of `x`.
    pub fn preimage(&self, x: &Point) -> Result<PointSet> {
        let xi = self.base.require(x)?;
        Ok(self.image.points_of(self.blocks[xi].iter().copied()))
    }

    pub fn project_idx(&self, zi: usize) -> usize {
        self.projection[zi]
    }

    pub fn block_idx(&self, xi: usize) -> &[usize] {
        &self.blocks[xi]
    }
}

/// The multivalued function `x -> { f(z) : z in E_r^{-1}(x) }`.
pub fn induced_from(s: &SubdividedImage, f: &PointMap, y: &DigitalImage) -> Result<MultiFn> {
    let values = sv_indices(f, s.image(), y)?;
    Ok(induced_from_idx(s, &values, y))
}

pub(crate) fn induced_from_idx(s: &SubdividedImage, values: &[usize], y: &DigitalImage) -> MultiFn {
    let images = s
        .blocks
        .iter()
        .map(|block| {
            let mut v: Vec<usize> = block.iter().map(|&z| values[z]).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    MultiFn::from_indices(s.base.clone(), y.clone(), images)
}

/// Whether every adjacent pair of `x` has adjacent representatives in the
/// `r`-th subdivisions of the two singletons.
pub fn check_sub_adj_preserving(x: &DigitalImage, r: usize) -> Result<bool> {
    if r < 1 {
        return Err(Error::InvalidInput(
            "subdivision level must be at least 1".into(),
        ));
    }
    let spec = x.spec();
    let offsets = block_offsets(spec.dim(), r);
    let scale = r as i64;
    let block = |p: &Point| -> Vec<Vec<i64>> {
        offsets
            .iter()
            .map(|off| {
                p.coords()
                    .iter()
                    .zip(off)
                    .map(|(c, d)| c * scale + d)
                    .collect()
            })
            .collect()
    };
    for i in 0..x.len() {
        let bi = block(x.point(i));
        for &j in x.neighbors_idx(i).iter().filter(|&&j| j > i) {
            let bj = block(x.point(j));
            let linked = bi
                .iter()
                .any(|a| bj.iter().any(|b| spec.adjacent_coords(a, b)));
            if !linked {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Lifts a witness at level `r` to level `m*r` by precomposing with the
/// contraction `z -> floor(z/m)` on numerators.
pub fn refine_witness(f: &MultiFn, w: &ContinuityWitness, m: usize) -> Result<ContinuityWitness> {
    if m < 1 {
        return Err(Error::InvalidInput(
            "refinement factor must be at least 1".into(),
        ));
    }
    if !verify_witness(f, w) {
        return Err(Error::InvalidInput(
            "witness does not induce the function".into(),
        ));
    }
    if m == 1 {
        return Ok(w.clone());
    }
    let finer = subdivide(f.domain(), w.level * m)?;
    let assignment = finer
        .image()
        .points()
        .iter()
        .map(|z| {
            let coarse = floor_div(z, m as i64);
            (z.clone(), w.assignment[&coarse].clone())
        })
        .collect();
    Ok(ContinuityWitness {
        level: w.level * m,
        assignment,
    })
}
