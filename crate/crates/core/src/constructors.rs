//! Structured multivalued functions: retractions onto a subset, extensions
//! from a subset, surjections, and wedges. Each constructor checks the
//! hypotheses its guarantee depends on and reports the one that fails.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::grid::{is_sv_continuous, DigitalImage, Point, PointMap, PointSet};
use crate::multifun::{verify_witness, ContinuityWitness, MultiFn};
use crate::subdivision::{refine_witness, subdivide};

/// True iff `F(a) = {a}` for every `a` in `a_set`. The codomain of `f` must
/// be exactly `a_set`.
pub fn is_retraction(f: &MultiFn, a_set: &PointSet) -> Result<bool> {
    f.domain().indices_of(a_set)?;
    if f.codomain().point_set() != *a_set {
        return Err(Error::InvalidInput(
            "codomain of a retraction must be the retract".into(),
        ));
    }
    for a in a_set {
        if f.value(a)? != PointSet::from([a.clone()]) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn retract_target(x: &DigitalImage, a: &PointSet) -> Result<(DigitalImage, Vec<usize>)> {
    if a.is_empty() {
        return Err(Error::InvalidInput("retract must be nonempty".into()));
    }
    let idx = x.indices_of(a)?;
    Ok((x.restrict(a)?, idx))
}

/// `x -> {x}` on `A`, and `x -> L_A(x)` (points of `A` within one step of
/// the nearest) elsewhere. Weakly continuous on a connected image.
pub fn retract_nearest(x: &DigitalImage, a: &PointSet) -> Result<MultiFn> {
    let (target, a_idx) = retract_target(x, a)?;
    if !x.is_connected_image() {
        return Err(Error::InvalidInput("image must be connected".into()));
    }
    let mut in_a = vec![false; x.len()];
    for &i in &a_idx {
        in_a[i] = true;
    }
    let from_a = x.distances_from(&a_idx);
    let values = (0..x.len())
        .map(|i| {
            let p = x.point(i);
            if in_a[i] {
                return vec![target.index_of(p).unwrap()];
            }
            let best = from_a[i].expect("connected image reaches A");
            let from_x = x.distances_from(&[i]);
            a_idx
                .iter()
                .filter(|&&j| from_x[j].is_some_and(|d| d <= best + 1))
                .map(|&j| target.index_of(x.point(j)).unwrap())
                .collect()
        })
        .collect();
    Ok(MultiFn::from_indices(x.clone(), target, values))
}

/// `x -> {x}` on `A`, and `x -> Bd_X(A)` elsewhere.
pub fn retract_boundary(x: &DigitalImage, a: &PointSet) -> Result<MultiFn> {
    let (target, a_idx) = retract_target(x, a)?;
    let bd: Vec<usize> = x
        .boundary_idx(&a_idx)
        .into_iter()
        .map(|j| target.index_of(x.point(j)).unwrap())
        .collect();
    if a_idx.len() < x.len() && bd.is_empty() {
        return Err(Error::InvalidInput(
            "boundary of the retract is empty, so points off it would have empty images".into(),
        ));
    }
    let values = x
        .points()
        .iter()
        .map(|p| match target.index_of(p) {
            Some(t) => vec![t],
            None => bd.clone(),
        })
        .collect();
    Ok(MultiFn::from_indices(x.clone(), target, values))
}

/// `F(x) = Y` for every `x`.
pub fn const_total(x: &DigitalImage, y: &DigitalImage) -> Result<MultiFn> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::InvalidInput("images must be nonempty".into()));
    }
    let all: Vec<usize> = (0..y.len()).collect();
    Ok(MultiFn::from_indices(
        x.clone(),
        y.clone(),
        vec![all; x.len()],
    ))
}

/// Sends the `i`-th component of `X` onto the whole of component
/// `i mod k` of `Y`, where `k` is the number of components of `Y`.
pub fn const_component_surjection(x: &DigitalImage, y: &DigitalImage) -> Result<MultiFn> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::InvalidInput("images must be nonempty".into()));
    }
    let x_comps = x.components_idx(&(0..x.len()).collect::<Vec<_>>());
    let y_comps = y.components_idx(&(0..y.len()).collect::<Vec<_>>());
    if x_comps.len() < y_comps.len() {
        return Err(Error::InvalidInput(format!(
            "domain has {} components but codomain has {}",
            x_comps.len(),
            y_comps.len()
        )));
    }
    let mut values = vec![Vec::new(); x.len()];
    for (i, comp) in x_comps.iter().enumerate() {
        for &p in comp {
            values[p] = y_comps[i % y_comps.len()].clone();
        }
    }
    Ok(MultiFn::from_indices(x.clone(), y.clone(), values))
}

/// Checks `F.domain ⊆ X` and returns, per point of `X`, its index in the
/// domain of `f` if it has one.
fn embed_domain(f: &MultiFn, x: &DigitalImage) -> Result<Vec<Option<usize>>> {
    if f.domain().spec() != x.spec() {
        return Err(Error::InvalidInput("adjacency of X_0 and X differ".into()));
    }
    for p in f.domain().points() {
        if !x.contains(p) {
            return Err(Error::InvalidInput(format!("{p} lies in X_0 but not in X")));
        }
    }
    Ok(x.points().iter().map(|p| f.domain().index_of(p)).collect())
}

fn extend_with(f: &MultiFn, x: &DigitalImage, embed: &[Option<usize>], fill: &[usize]) -> MultiFn {
    let values = embed
        .iter()
        .map(|e| match e {
            Some(i) => f.value_idx(*i).to_vec(),
            None => fill.to_vec(),
        })
        .collect();
    MultiFn::from_indices(x.clone(), f.codomain().clone(), values)
}

/// Extends `F: X_0 -> Y` to `X` by sending every new point to `F(X_0)`.
pub fn extend_weak(f: &MultiFn, x: &DigitalImage) -> Result<MultiFn> {
    let embed = embed_domain(f, x)?;
    if !f.is_weak() {
        return Err(Error::Precondition("F is not weakly continuous".into()));
    }
    let all = f.image_of_idx(&(0..f.domain().len()).collect::<Vec<_>>());
    if all.is_empty() && embed.iter().any(Option::is_none) {
        return Err(Error::InvalidInput("X_0 is empty".into()));
    }
    Ok(extend_with(f, x, &embed, &all))
}

/// What a connectivity-preserving extension assigns off `X_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FillVariant {
    /// The whole codomain; needs `Y` connected.
    Codomain,
    /// `F(X_0)`; needs it connected.
    Image,
    /// `F(Bd_X(X_0))`; needs it connected and nonempty.
    BoundaryImage,
}

/// Connectivity-preserving extension of a connectivity-preserving `F`.
pub fn extend_cp(f: &MultiFn, x: &DigitalImage, variant: FillVariant) -> Result<MultiFn> {
    let embed = embed_domain(f, x)?;
    if f.domain().is_empty() {
        return Err(Error::Precondition("X_0 is empty".into()));
    }
    if !f.is_cp() {
        return Err(Error::Precondition(
            "F is not connectivity preserving".into(),
        ));
    }
    let y = f.codomain();
    let fill = match variant {
        FillVariant::Codomain => {
            if !y.is_connected_image() {
                return Err(Error::Precondition("codomain Y not connected".into()));
            }
            (0..y.len()).collect()
        }
        FillVariant::Image => {
            let all = f.image_of_idx(&(0..f.domain().len()).collect::<Vec<_>>());
            if !y.is_connected_idx(&all) {
                return Err(Error::Precondition("image F(X_0) not connected".into()));
            }
            all
        }
        FillVariant::BoundaryImage => {
            let x0: Vec<usize> = (0..x.len()).filter(|&i| embed[i].is_some()).collect();
            let bd: Vec<usize> = x
                .boundary_idx(&x0)
                .into_iter()
                .map(|i| embed[i].unwrap())
                .collect();
            if bd.is_empty() && x0.len() < x.len() {
                return Err(Error::Precondition("Bd_X(X_0) is empty".into()));
            }
            let img = f.image_of_idx(&bd);
            if !y.is_connected_idx(&img) {
                return Err(Error::Precondition("Bd_X(X_0) image not connected".into()));
            }
            img
        }
    };
    Ok(extend_with(f, x, &embed, &fill))
}

/// Given a continuous retraction `R: X -> A` with its witness `R'` and a
/// continuous single-valued `f: A -> Y`, returns the function induced by
/// `f ∘ R'` together with that witness. It extends `f`.
pub fn extend_via_retraction(
    r: &MultiFn,
    r_witness: &ContinuityWitness,
    f: &PointMap,
    y: &DigitalImage,
) -> Result<(MultiFn, ContinuityWitness)> {
    let a = r.codomain();
    if !is_retraction(r, &a.point_set())? {
        return Err(Error::InvalidInput("R is not a retraction".into()));
    }
    if !verify_witness(r, r_witness) {
        return Err(Error::InvalidInput("witness does not generate R".into()));
    }
    if !is_sv_continuous(f, a, y)? {
        return Err(Error::InvalidInput("f is not continuous".into()));
    }
    let assignment: PointMap = r_witness
        .assignment
        .iter()
        .map(|(z, v)| (z.clone(), f[v].clone()))
        .collect();
    let s = subdivide(r.domain(), r_witness.level)?;
    let ext = crate::subdivision::induced_from(&s, &assignment, y)?;
    Ok((
        ext,
        ContinuityWitness {
            level: r_witness.level,
            assignment,
        },
    ))
}

/// Union of two images meeting in exactly one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wedge {
    pub image: DigitalImage,
    pub wedge_point: Point,
}

/// `X ∧ X'`. Besides the single shared point, no point of one side may be
/// adjacent to a point of the other side other than through it.
pub fn wedge_images(x: &DigitalImage, x2: &DigitalImage) -> Result<Wedge> {
    if x.spec() != x2.spec() {
        return Err(Error::InvalidInput(
            "not a wedge: adjacencies differ".into(),
        ));
    }
    let common: Vec<&Point> = x.points().iter().filter(|p| x2.contains(p)).collect();
    let [x0] = common.as_slice() else {
        return Err(Error::InvalidInput(format!(
            "not a wedge: the images share {} points",
            common.len()
        )));
    };
    let spec = x.spec();
    for p in x.points().iter().filter(|p| p != x0) {
        for q in x2.points().iter().filter(|q| q != x0) {
            if spec.adjacent_coords(p.coords(), q.coords()) {
                return Err(Error::InvalidInput(format!(
                    "not a wedge: {p} and {q} are adjacent across the two pieces"
                )));
            }
        }
    }
    let image = DigitalImage::new(
        spec,
        x.points()
            .iter()
            .chain(x2.points().iter().filter(|q| q != x0))
            .cloned(),
    )?;
    Ok(Wedge {
        image,
        wedge_point: (*x0).clone(),
    })
}

/// `F ∧ F'` on `X ∧ X'` into `Y ∧ Y'`; requires `F(x_0) = {y_0} = F'(x_0)`.
pub fn wedge_fns(f: &MultiFn, f2: &MultiFn) -> Result<MultiFn> {
    let dom = wedge_images(f.domain(), f2.domain())?;
    let cod = wedge_images(f.codomain(), f2.codomain())?;
    let x0 = &dom.wedge_point;
    let y0 = PointSet::from([cod.wedge_point.clone()]);
    if f.value(x0)? != y0 {
        return Err(Error::Precondition(format!(
            "F(x_0) must equal {{y_0}} = {{{}}}",
            cod.wedge_point
        )));
    }
    if f2.value(x0)? != y0 {
        return Err(Error::Precondition(format!(
            "F'(x_0) must equal {{y_0}} = {{{}}}",
            cod.wedge_point
        )));
    }
    let map: BTreeMap<Point, PointSet> = f.to_map().into_iter().chain(f2.to_map()).collect();
    MultiFn::new(dom.image, cod.image, &map)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Glues witnesses of `F` and `F'` into a witness of `F ∧ F'`, after
/// refining both to the least common multiple of their levels.
pub fn wedge_witness(
    f: &MultiFn,
    w: &ContinuityWitness,
    f2: &MultiFn,
    w2: &ContinuityWitness,
) -> Result<ContinuityWitness> {
    wedge_fns(f, f2)?;
    if !verify_witness(f, w) || !verify_witness(f2, w2) {
        return Err(Error::InvalidInput(
            "witness does not generate its function".into(),
        ));
    }
    let level = w.level / gcd(w.level, w2.level) * w2.level;
    let a = refine_witness(f, w, level / w.level)?;
    let b = refine_witness(f2, w2, level / w2.level)?;
    let mut assignment = a.assignment;
    for (z, v) in b.assignment {
        if let Some(prev) = assignment.get(&z) {
            if *prev != v {
                return Err(Error::InvalidInput(format!(
                    "witnesses disagree at the shared numerator {z}"
                )));
            }
        }
        assignment.insert(z, v);
    }
    Ok(ContinuityWitness { level, assignment })
}
