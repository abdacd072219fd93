//! Subdivision witnesses for continuity of a multivalued function, and the
//! bounded backtracking search that looks for them.
//!
//! Within a level the search visits subdivision points in lexicographic
//! order and tries candidate values in lexicographic order, so the first
//! witness returned is the lexicographically least assignment at the least
//! level. Pruning (forward checking on adjacency, block coverage counts)
//! only discards dead branches and never changes which witness comes first.

use std::fmt;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::grid::{sv_indices, Point, PointMap};
use crate::multifun::MultiFn;
use crate::subdivision::{induced_from_idx, subdivide, SubdividedImage};

/// A level `r` and a single-valued map on the numerators of `S(X,r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuityWitness {
    pub level: usize,
    pub assignment: PointMap,
}

/// A necessary condition for continuity that fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    DisconnectedPointImage { at: Point },
    NotWeaklyContinuous { x: Point, y: Point },
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refutation::DisconnectedPointImage { at } => {
                write!(f, "point-image of {at} is not connected")
            }
            Refutation::NotWeaklyContinuous { x, y } => {
                write!(
                    f,
                    "adjacent points {x} and {y} have non-adjacent point-images"
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessSearch {
    Found(ContinuityWitness),
    /// No witness at levels `1..=r_max`; says nothing beyond `r_max`.
    NotFound {
        r_max: usize,
    },
    Refuted(Refutation),
}

impl WitnessSearch {
    pub fn witness(&self) -> Option<&ContinuityWitness> {
        match self {
            WitnessSearch::Found(w) => Some(w),
            _ => None,
        }
    }
}

/// True iff the assignment is continuous on `S(domain, level)` and induces
/// exactly `f`.
pub fn verify_witness(f: &MultiFn, w: &ContinuityWitness) -> bool {
    if w.level < 1 {
        return false;
    }
    let Ok(s) = subdivide(f.domain(), w.level) else {
        return false;
    };
    let Ok(values) = sv_indices(&w.assignment, s.image(), f.codomain()) else {
        return false;
    };
    let img = s.image();
    let y = f.codomain();
    let continuous = (0..img.len()).all(|i| {
        img.neighbors_idx(i)
            .iter()
            .all(|&j| y.adjacent_or_equal_idx(values[i], values[j]))
    });
    continuous && induced_from_idx(&s, &values, y).values_idx() == f.values_idx()
}

/// Searches levels `1..=r_max` for a witness. Functions failing a necessary
/// condition (connected point-images, weak continuity) are refuted without
/// searching.
pub fn find_witness(f: &MultiFn, r_max: usize) -> Result<WitnessSearch> {
    if r_max < 1 {
        return Err(Error::InvalidInput("r_max must be at least 1".into()));
    }
    if let Some(i) = f.disconnected_point_image() {
        return Ok(WitnessSearch::Refuted(Refutation::DisconnectedPointImage {
            at: f.domain().point(i).clone(),
        }));
    }
    if let Some((i, j)) = f.first_weak_violation() {
        return Ok(WitnessSearch::Refuted(Refutation::NotWeaklyContinuous {
            x: f.domain().point(i).clone(),
            y: f.domain().point(j).clone(),
        }));
    }
    for r in 1..=r_max {
        if let Some(w) = search_level(f, r)? {
            return Ok(WitnessSearch::Found(w));
        }
    }
    Ok(WitnessSearch::NotFound { r_max })
}

/// The lexicographically least witness at exactly level `r`, if any.
pub(crate) fn search_level(f: &MultiFn, r: usize) -> Result<Option<ContinuityWitness>> {
    let s = subdivide(f.domain(), r)?;
    let block_size = r.pow(f.domain().spec().dim() as u32);
    if f.values_idx().iter().any(|v| v.len() > block_size) {
        return Ok(None);
    }
    let mut search = LevelSearch::new(f, &s);
    if !search.run() {
        return Ok(None);
    }
    let assignment = s
        .image()
        .points()
        .iter()
        .zip(&search.assigned)
        .map(|(z, v)| (z.clone(), f.codomain().point(v.unwrap()).clone()))
        .collect();
    Ok(Some(ContinuityWitness {
        level: r,
        assignment,
    }))
}

struct LevelSearch<'a> {
    s: &'a SubdividedImage,
    /// Closed neighborhoods of codomain points.
    near: Vec<BitSet>,
    domains: Vec<BitSet>,
    assigned: Vec<Option<usize>>,
    /// Per base point: how often each codomain value occurs in its block.
    counts: Vec<Vec<u32>>,
    uncovered: Vec<usize>,
    remaining: Vec<usize>,
    trail: Vec<(usize, BitSet)>,
}

impl<'a> LevelSearch<'a> {
    fn new(f: &'a MultiFn, s: &'a SubdividedImage) -> Self {
        let y = f.codomain();
        let near = (0..y.len())
            .map(|v| {
                BitSet::from_indices(
                    y.len(),
                    std::iter::once(v).chain(y.neighbors_idx(v).iter().copied()),
                )
            })
            .collect();
        let domains = (0..s.image().len())
            .map(|z| BitSet::from_indices(y.len(), f.value_idx(s.project_idx(z)).iter().copied()))
            .collect();
        let base = s.base().len();
        LevelSearch {
            s,
            near,
            domains,
            assigned: vec![None; s.image().len()],
            counts: vec![vec![0; y.len()]; base],
            uncovered: (0..base).map(|x| f.value_idx(x).len()).collect(),
            remaining: (0..base).map(|x| s.block_idx(x).len()).collect(),
            trail: Vec::new(),
        }
    }

    fn run(&mut self) -> bool {
        self.descend(0)
    }

    fn descend(&mut self, z: usize) -> bool {
        if z == self.assigned.len() {
            return true;
        }
        let candidates: Vec<usize> = self.domains[z].iter().collect();
        for v in candidates {
            let mark = self.trail.len();
            if self.assign(z, v) && self.descend(z + 1) {
                return true;
            }
            self.unassign(z, v, mark);
        }
        false
    }

    /// Records `z -> v` and propagates; false if some constraint is dead.
    /// The caller must call `unassign` on failure.
    fn assign(&mut self, z: usize, v: usize) -> bool {
        self.assigned[z] = Some(v);
        let x = self.s.project_idx(z);
        self.remaining[x] -= 1;
        self.counts[x][v] += 1;
        if self.counts[x][v] == 1 {
            self.uncovered[x] -= 1;
        }
        if self.uncovered[x] > self.remaining[x] {
            return false;
        }
        for &w in self.s.image().neighbors_idx(z) {
            if self.assigned[w].is_some() {
                continue;
            }
            let mut narrowed = self.domains[w].clone();
            narrowed.intersect_with(&self.near[v]);
            if narrowed != self.domains[w] {
                let old = std::mem::replace(&mut self.domains[w], narrowed);
                self.trail.push((w, old));
                if self.domains[w].is_empty() {
                    return false;
                }
            }
        }
        true
    }

    fn unassign(&mut self, z: usize, v: usize, mark: usize) {
        while self.trail.len() > mark {
            let (w, old) = self.trail.pop().unwrap();
            self.domains[w] = old;
        }
        let x = self.s.project_idx(z);
        if self.counts[x][v] == 1 {
            self.uncovered[x] += 1;
        }
        self.counts[x][v] -= 1;
        self.remaining[x] += 1;
        self.assigned[z] = None;
    }
}
