//! Lattice points, digital images with `c_u` adjacency, and the graph
//! queries every other module is built on.
//!
//! An image stores its points in lexicographic order; the position of a point
//! in that order is its *index*, and most of the heavy lifting in the crate
//! works on indices. The point-level methods here validate membership and
//! translate to and from indices.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// A lattice point of `Z^n`, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<i64>);

impl Point {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        Point(coords.into())
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl<const N: usize> From<[i64; N]> for Point {
    fn from(coords: [i64; N]) -> Self {
        Point(coords.to_vec())
    }
}

impl From<Vec<i64>> for Point {
    fn from(coords: Vec<i64>) -> Self {
        Point(coords)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A set of points, iterated in lexicographic order.
pub type PointSet = BTreeSet<Point>;

/// A single-valued map between images, keyed by domain point.
pub type PointMap = BTreeMap<Point, Point>;

/// Ambient dimension `n` together with the `c_u` parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AdjacencySpec {
    dim: usize,
    u: usize,
}

impl AdjacencySpec {
    pub fn new(dim: usize, u: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if u == 0 || u > dim {
            return Err(Error::InvalidInput(format!(
                "adjacency parameter u={u} must satisfy 1 <= u <= {dim}"
            )));
        }
        Ok(AdjacencySpec { dim, u })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn u(&self) -> usize {
        self.u
    }

    /// `c_u` test on raw coordinates of equal length.
    pub(crate) fn adjacent_coords(&self, x: &[i64], y: &[i64]) -> bool {
        let mut differing = 0;
        for (a, b) in x.iter().zip(y) {
            match (a - b).abs() {
                0 => {}
                1 => differing += 1,
                _ => return false,
            }
        }
        differing >= 1 && differing <= self.u
    }

    pub fn is_adjacent(&self, x: &Point, y: &Point) -> Result<bool> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.adjacent_coords(&x.0, &y.0))
    }

    /// Nonzero displacement vectors of the `c_u` neighborhood in `Z^n`.
    pub fn offsets(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut cur = vec![-1i64; self.dim];
        loop {
            let nonzero = cur.iter().filter(|&&c| c != 0).count();
            if nonzero >= 1 && nonzero <= self.u {
                out.push(cur.clone());
            }
            // odometer over {-1,0,1}^n
            let mut i = self.dim;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < 1 {
                    cur[i] += 1;
                    break;
                }
                cur[i] = -1;
            }
        }
    }

    pub(crate) fn check_dim(&self, p: &Point) -> Result<()> {
        if p.dim() != self.dim {
            return Err(Error::InvalidInput(format!(
                "point {p} has dimension {}, expected {}",
                p.dim(),
                self.dim
            )));
        }
        Ok(())
    }
}

/// `c_u` adjacency between two lattice points.
pub fn is_adjacent(spec: AdjacencySpec, x: &Point, y: &Point) -> Result<bool> {
    spec.is_adjacent(x, y)
}

/// A finite set of lattice points with its adjacency graph.
#[derive(Clone, Debug)]
pub struct DigitalImage {
    spec: AdjacencySpec,
    points: Vec<Point>,
    index: HashMap<Point, usize>,
    adjacency: Vec<Vec<usize>>,
}

impl PartialEq for DigitalImage {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.points == other.points
    }
}

impl Eq for DigitalImage {}

impl DigitalImage {
    /// Builds an image, rejecting duplicate points and dimension mismatches.
    pub fn new(spec: AdjacencySpec, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        let mut pts: Vec<Point> = points.into_iter().collect();
        for p in &pts {
            spec.check_dim(p)?;
        }
        pts.sort();
        if let Some(w) = pts.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!("duplicate point {}", w[0])));
        }
        Ok(Self::from_sorted(spec, pts))
    }

    pub(crate) fn from_sorted(spec: AdjacencySpec, points: Vec<Point>) -> Self {
        let index: HashMap<Point, usize> = points
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let adjacency = build_adjacency(spec, &points, &index);
        DigitalImage {
            spec,
            points,
            index,
            adjacency,
        }
    }

    /// `[a,b]_Z` with `c_1` adjacency.
    pub fn interval(a: i64, b: i64) -> Self {
        let spec = AdjacencySpec { dim: 1, u: 1 };
        Self::from_sorted(spec, (a..=b).map(|v| Point(vec![v])).collect())
    }

    pub fn spec(&self) -> AdjacencySpec {
        self.spec
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn point_set(&self) -> PointSet {
        self.points.iter().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.index.contains_key(p)
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Index of `p`, or a domain error naming it.
    pub fn require(&self, p: &Point) -> Result<usize> {
        self.spec.check_dim(p)?;
        self.index_of(p)
            .ok_or_else(|| Error::NotInDomain(p.to_string()))
    }

    /// Sorted indices of every point of `set`, failing on the first outsider.
    pub fn indices_of(&self, set: &PointSet) -> Result<Vec<usize>> {
        let mut out = set
            .iter()
            .map(|p| self.require(p))
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        Ok(out)
    }

    pub fn points_of(&self, indices: impl IntoIterator<Item = usize>) -> PointSet {
        indices
            .into_iter()
            .map(|i| self.points[i].clone())
            .collect()
    }

    /// Neighbors of the `i`-th point inside the image, ascending.
    pub fn neighbors_idx(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn adjacent_idx(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }

    pub fn adjacent_or_equal_idx(&self, i: usize, j: usize) -> bool {
        i == j || self.adjacent_idx(i, j)
    }

    /// The sub-image on `set`, with the same adjacency.
    pub fn restrict(&self, set: &PointSet) -> Result<DigitalImage> {
        self.indices_of(set)?;
        Ok(Self::from_sorted(self.spec, set.iter().cloned().collect()))
    }

    pub fn neighbors(&self, x: &Point) -> Result<PointSet> {
        let i = self.require(x)?;
        Ok(self.points_of(self.adjacency[i].iter().copied()))
    }

    /// Whether `a` and `b` share a point or contain an adjacent pair.
    pub fn sets_adjacent(&self, a: &PointSet, b: &PointSet) -> Result<bool> {
        let ia = self.indices_of(a)?;
        let ib = self.indices_of(b)?;
        Ok(self.sets_adjacent_idx(&ia, &ib))
    }

    pub fn sets_adjacent_idx(&self, a: &[usize], b: &[usize]) -> bool {
        a.iter()
            .any(|&i| b.iter().any(|&j| self.adjacent_or_equal_idx(i, j)))
    }

    pub fn is_connected(&self, set: &PointSet) -> Result<bool> {
        let idx = self.indices_of(set)?;
        Ok(self.is_connected_idx(&idx))
    }

    pub fn is_connected_image(&self) -> bool {
        self.is_connected_idx(&(0..self.len()).collect::<Vec<_>>())
    }

    /// Connectivity of the induced subgraph on `members` (duplicates allowed).
    pub fn is_connected_idx(&self, members: &[usize]) -> bool {
        if members.len() <= 1 {
            return true;
        }
        let mut inside = vec![false; self.len()];
        let mut total = 0;
        for &m in members {
            if !inside[m] {
                inside[m] = true;
                total += 1;
            }
        }
        self.flood(members[0], &inside).len() == total
    }

    /// Points reachable from `start` without leaving `inside`.
    fn flood(&self, start: usize, inside: &[bool]) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        seen[start] = true;
        let mut out = vec![start];
        let mut head = 0;
        while head < out.len() {
            let v = out[head];
            head += 1;
            for &w in &self.adjacency[v] {
                if inside[w] && !seen[w] {
                    seen[w] = true;
                    out.push(w);
                }
            }
        }
        out
    }

    /// Maximal connected pieces of `set`, ordered by their least point.
    pub fn components(&self, set: &PointSet) -> Result<Vec<PointSet>> {
        let idx = self.indices_of(set)?;
        Ok(self
            .components_idx(&idx)
            .into_iter()
            .map(|c| self.points_of(c))
            .collect())
    }

    pub fn components_idx(&self, members: &[usize]) -> Vec<Vec<usize>> {
        let mut inside = vec![false; self.len()];
        for &m in members {
            inside[m] = true;
        }
        let mut done = vec![false; self.len()];
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        let mut out = Vec::new();
        for &m in &sorted {
            if done[m] {
                continue;
            }
            let mut comp = self.flood(m, &inside);
            comp.sort_unstable();
            for &c in &comp {
                done[c] = true;
            }
            out.push(comp);
        }
        out
    }

    /// Breadth-first path lengths from the nearest of `sources`;
    /// `None` for unreachable points.
    pub fn distances_from(&self, sources: &[usize]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap() + 1;
            for &w in &self.adjacency[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    fn check_target(&self, x: &Point, a: &PointSet) -> Result<(usize, Vec<usize>)> {
        let xi = self.require(x)?;
        if a.is_empty() {
            return Err(Error::InvalidInput("target set is empty".into()));
        }
        Ok((xi, self.indices_of(a)?))
    }

    /// Length of a shortest path in the image from `x` to any point of `a`.
    pub fn dist_to_set(&self, x: &Point, a: &PointSet) -> Result<usize> {
        let (xi, ai) = self.check_target(x, a)?;
        self.distances_from(&ai)[xi].ok_or_else(|| Error::Unreachable(x.to_string()))
    }

    /// Points of `a` whose distance from `x` is within one of the minimum.
    pub fn near_set(&self, x: &Point, a: &PointSet) -> Result<PointSet> {
        let (xi, ai) = self.check_target(x, a)?;
        let from_x = self.distances_from(&[xi]);
        let best = ai
            .iter()
            .filter_map(|&j| from_x[j])
            .min()
            .ok_or_else(|| Error::Unreachable(x.to_string()))?;
        Ok(self.points_of(
            ai.into_iter()
                .filter(|&j| matches!(from_x[j], Some(d) if d <= best + 1)),
        ))
    }

    /// Points of `a` with a neighbor in the image outside `a`.
    pub fn boundary(&self, a: &PointSet) -> Result<PointSet> {
        let ai = self.indices_of(a)?;
        Ok(self.points_of(self.boundary_idx(&ai)))
    }

    pub fn boundary_idx(&self, members: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.len()];
        for &m in members {
            inside[m] = true;
        }
        let mut out: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&m| self.adjacency[m].iter().any(|&w| !inside[w]))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn build_adjacency(
    spec: AdjacencySpec,
    points: &[Point],
    index: &HashMap<Point, usize>,
) -> Vec<Vec<usize>> {
    let neighborhood = 3usize.saturating_pow(spec.dim as u32) - 1;
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); points.len()];
    if neighborhood <= 4 * points.len().max(1) && spec.dim <= 12 {
        let offsets = spec.offsets();
        let mut probe = vec![0i64; spec.dim];
        for (i, p) in points.iter().enumerate() {
            for off in &offsets {
                for (k, slot) in probe.iter_mut().enumerate() {
                    *slot = p.0[k] + off[k];
                }
                // cloning into a Point for the lookup keeps HashMap<Point, _> simple
                if let Some(&j) = index.get(&Point(probe.clone())) {
                    adjacency[i].push(j);
                }
            }
            adjacency[i].sort_unstable();
        }
    } else {
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if spec.adjacent_coords(&points[i].0, &points[j].0) {
                    adjacency[i].push(j);
                    adjacency[j].push(i);
                }
            }
        }
    }
    adjacency
}

/// Adjacency form of single-valued continuity: adjacent points of `x` land
/// on equal or adjacent points of `y`.
pub fn is_sv_continuous(f: &PointMap, x: &DigitalImage, y: &DigitalImage) -> Result<bool> {
    let values = sv_indices(f, x, y)?;
    Ok((0..x.len()).all(|i| {
        x.neighbors_idx(i)
            .iter()
            .all(|&j| y.adjacent_or_equal_idx(values[i], values[j]))
    }))
}

/// Validates `f` as a total map `x -> y` and returns its values as indices.
pub(crate) fn sv_indices(f: &PointMap, x: &DigitalImage, y: &DigitalImage) -> Result<Vec<usize>> {
    if f.len() != x.len() {
        return Err(Error::InvalidInput(format!(
            "map has {} entries but the domain has {} points",
            f.len(),
            x.len()
        )));
    }
    x.points()
        .iter()
        .map(|p| {
            let v = f
                .get(p)
                .ok_or_else(|| Error::InvalidInput(format!("map is undefined at {p}")))?;
            y.index_of(v).ok_or_else(|| {
                Error::InvalidInput(format!("value {v} at {p} is outside the codomain"))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1(v: i64) -> Point {
        Point::from([v])
    }

    fn set1(vs: &[i64]) -> PointSet {
        vs.iter().map(|&v| p1(v)).collect()
    }

    fn spec(n: usize, u: usize) -> AdjacencySpec {
        AdjacencySpec::new(n, u).unwrap()
    }

    #[test]
    fn adjacency_examples() {
        let s21 = spec(2, 1);
        assert!(s21
            .is_adjacent(&Point::from([0, 0]), &Point::from([0, 1]))
            .unwrap());
        assert!(!s21
            .is_adjacent(&Point::from([0, 0]), &Point::from([1, 1]))
            .unwrap());
        assert!(spec(2, 2)
            .is_adjacent(&Point::from([0, 0]), &Point::from([1, 1]))
            .unwrap());
        assert!(!spec(1, 1).is_adjacent(&p1(3), &p1(3)).unwrap());
        assert!(matches!(
            s21.is_adjacent(&p1(0), &Point::from([0, 0])),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn spec_rejects_bad_u() {
        assert!(AdjacencySpec::new(2, 0).is_err());
        assert!(AdjacencySpec::new(2, 3).is_err());
        assert!(AdjacencySpec::new(0, 0).is_err());
    }

    #[test]
    fn neighborhood_sizes_in_the_lattice() {
        let expected = [
            (1, 1, 2),
            (2, 1, 4),
            (2, 2, 8),
            (3, 1, 6),
            (3, 2, 18),
            (3, 3, 26),
        ];
        for (n, u, count) in expected {
            assert_eq!(spec(n, u).offsets().len(), count, "n={n} u={u}");
        }
        for n in 1..=5 {
            assert_eq!(spec(n, 1).offsets().len(), 2 * n);
            assert_eq!(spec(n, n).offsets().len(), 3usize.pow(n as u32) - 1);
        }
    }

    #[test]
    fn neighbors_are_relative_to_the_image() {
        let line = DigitalImage::interval(0, 4);
        assert_eq!(line.neighbors(&p1(2)).unwrap(), set1(&[1, 3]));
        let pts = [Point::from([1, 0]), Point::from([0, 1])];
        let x8 = DigitalImage::new(spec(2, 2), pts.clone()).unwrap();
        let x4 = DigitalImage::new(spec(2, 1), pts.clone()).unwrap();
        assert_eq!(
            x8.neighbors(&pts[0]).unwrap(),
            PointSet::from([Point::from([0, 1])])
        );
        assert!(x4.neighbors(&pts[0]).unwrap().is_empty());
        assert!(matches!(line.neighbors(&p1(9)), Err(Error::NotInDomain(_))));
    }

    #[test]
    fn duplicate_points_rejected() {
        let err = DigitalImage::new(spec(1, 1), [p1(0), p1(0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn set_adjacency() {
        let x = DigitalImage::interval(0, 2);
        assert!(x.sets_adjacent(&set1(&[0]), &set1(&[0, 2])).unwrap());
        assert!(!x.sets_adjacent(&set1(&[0]), &set1(&[2])).unwrap());
        assert!(x.sets_adjacent(&set1(&[0, 1]), &set1(&[2])).unwrap());
    }

    #[test]
    fn connectivity() {
        let x = DigitalImage::interval(0, 2);
        assert!(x.is_connected(&set1(&[0, 1, 2])).unwrap());
        assert!(!x.is_connected(&set1(&[0, 2])).unwrap());
        assert!(x.is_connected(&PointSet::new()).unwrap());
        let pts = [Point::from([1, 0]), Point::from([0, 1])];
        let all: PointSet = pts.iter().cloned().collect();
        let x8 = DigitalImage::new(spec(2, 2), pts.clone()).unwrap();
        let x4 = DigitalImage::new(spec(2, 1), pts).unwrap();
        assert!(x8.is_connected(&all).unwrap());
        assert!(!x4.is_connected(&all).unwrap());
    }

    #[test]
    fn components_in_order() {
        let x = DigitalImage::interval(0, 4);
        assert_eq!(
            x.components(&set1(&[0, 2, 4])).unwrap(),
            vec![set1(&[0]), set1(&[2]), set1(&[4])]
        );
        assert_eq!(x.components(&x.point_set()).unwrap(), vec![x.point_set()]);
        let pts = [
            Point::from([0, 0]),
            Point::from([1, 1]),
            Point::from([3, 3]),
        ];
        let img = DigitalImage::new(spec(2, 2), pts.clone()).unwrap();
        assert_eq!(
            img.components(&img.point_set()).unwrap(),
            vec![
                PointSet::from([pts[0].clone(), pts[1].clone()]),
                PointSet::from([pts[2].clone()])
            ]
        );
    }

    #[test]
    fn distances_and_near_sets() {
        let x = DigitalImage::interval(0, 4);
        let a = set1(&[0, 4]);
        assert_eq!(x.dist_to_set(&p1(2), &a).unwrap(), 2);
        assert_eq!(x.dist_to_set(&p1(0), &a).unwrap(), 0);
        assert_eq!(x.dist_to_set(&p1(1), &a).unwrap(), 1);
        assert_eq!(x.near_set(&p1(1), &a).unwrap(), set1(&[0]));
        assert_eq!(x.near_set(&p1(2), &a).unwrap(), set1(&[0, 4]));
        assert_eq!(x.near_set(&p1(0), &a).unwrap(), set1(&[0]));
    }

    #[test]
    fn distance_errors() {
        let x = DigitalImage::interval(0, 4);
        assert!(matches!(
            x.dist_to_set(&p1(2), &PointSet::new()),
            Err(Error::InvalidInput(_))
        ));
        let split = DigitalImage::new(spec(1, 1), [p1(0), p1(1), p1(5)]).unwrap();
        assert!(matches!(
            split.dist_to_set(&p1(5), &set1(&[0])),
            Err(Error::Unreachable(_))
        ));
        assert!(matches!(
            split.near_set(&p1(5), &set1(&[0])),
            Err(Error::Unreachable(_))
        ));
    }

    #[test]
    fn boundaries() {
        let x = DigitalImage::interval(0, 4);
        assert_eq!(x.boundary(&set1(&[1, 2, 3])).unwrap(), set1(&[1, 3]));
        assert!(x.boundary(&x.point_set()).unwrap().is_empty());
        assert_eq!(x.boundary(&set1(&[2])).unwrap(), set1(&[2]));
    }

    #[test]
    fn sv_continuity() {
        let x = DigitalImage::interval(0, 2);
        let id: PointMap = x.points().iter().map(|p| (p.clone(), p.clone())).collect();
        assert!(is_sv_continuous(&id, &x, &x).unwrap());

        let dom = DigitalImage::interval(0, 1);
        let double: PointMap = [(p1(0), p1(0)), (p1(1), p1(2))].into();
        assert!(!is_sv_continuous(&double, &dom, &x).unwrap());

        let constant: PointMap = x.points().iter().map(|p| (p.clone(), p1(1))).collect();
        assert!(is_sv_continuous(&constant, &x, &x).unwrap());

        let partial: PointMap = [(p1(0), p1(0))].into();
        assert!(is_sv_continuous(&partial, &dom, &x).is_err());
        let outside: PointMap = [(p1(0), p1(0)), (p1(1), p1(7))].into();
        assert!(is_sv_continuous(&outside, &dom, &x).is_err());
    }

    #[test]
    fn pairwise_and_offset_adjacency_agree() {
        // a sparse 3-d image takes the pairwise branch
        let s = spec(3, 2);
        let pts: Vec<Point> = vec![
            Point::from([0, 0, 0]),
            Point::from([1, 1, 0]),
            Point::from([1, 1, 1]),
        ];
        let img = DigitalImage::new(s, pts.clone()).unwrap();
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                assert_eq!(
                    img.adjacent_idx(i, j),
                    s.is_adjacent(&pts[i], &pts[j]).unwrap()
                );
            }
        }
    }
}
