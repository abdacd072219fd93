//! Fixtures and seeded generators shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use digitop::constructors::wedge_images;
use digitop::subdivision::{induced_from, subdivide};
use digitop::{AdjacencySpec, ContinuityWitness, DigitalImage, MultiFn, Point, PointMap, PointSet};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn p1(v: i64) -> Point {
    Point::from([v])
}

pub fn set1(vs: &[i64]) -> PointSet {
    vs.iter().map(|&v| p1(v)).collect()
}

pub fn image(n: usize, u: usize, pts: &[&[i64]]) -> DigitalImage {
    DigitalImage::new(
        AdjacencySpec::new(n, u).unwrap(),
        pts.iter().map(|c| Point::new(c.to_vec())),
    )
    .unwrap()
}

pub fn line(vs: &[i64]) -> DigitalImage {
    DigitalImage::new(AdjacencySpec::new(1, 1).unwrap(), vs.iter().map(|&v| p1(v))).unwrap()
}

/// `F: [0,1] -> [0,2]` with `c_1`, given both point-images.
pub fn f01(a: &[i64], b: &[i64]) -> MultiFn {
    let map = BTreeMap::from([(p1(0), set1(a)), (p1(1), set1(b))]);
    MultiFn::new(
        DigitalImage::interval(0, 1),
        DigitalImage::interval(0, 2),
        &map,
    )
    .unwrap()
}

/// Two images whose subdivisions differ in cut points: a diagonal pair and a
/// vertical pair, both with 8-adjacency.
pub fn diagonal_pair() -> DigitalImage {
    image(2, 2, &[&[1, 0], &[0, 1]])
}

pub fn vertical_pair() -> DigitalImage {
    image(2, 2, &[&[0, 0], &[0, 1]])
}

/// Small images (at most three points) used for exhaustive sweeps.
pub fn fixture_images() -> Vec<(&'static str, DigitalImage)> {
    vec![
        ("point", DigitalImage::interval(0, 0)),
        ("[0,1]", DigitalImage::interval(0, 1)),
        ("[0,2]", DigitalImage::interval(0, 2)),
        ("{0,2}", line(&[0, 2])),
        ("diagonal pair c2", diagonal_pair()),
        ("corner c1", image(2, 1, &[&[0, 0], &[1, 0], &[1, 1]])),
        ("corner c2", image(2, 2, &[&[0, 0], &[1, 1], &[2, 1]])),
    ]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// A random image of `1..=max_points` points in a small box of `Z^n`.
pub fn random_image(rng: &mut ChaCha8Rng, max_points: usize) -> DigitalImage {
    let n = rng.gen_range(1..=2);
    let u = rng.gen_range(1..=n);
    let side: i64 = if n == 1 { 7 } else { 3 };
    let mut cells: Vec<Vec<i64>> = if n == 1 {
        (0..side).map(|a| vec![a]).collect()
    } else {
        (0..side)
            .flat_map(|a| (0..side).map(move |b| vec![a, b]))
            .collect()
    };
    cells.shuffle(rng);
    let k = rng.gen_range(1..=max_points.min(cells.len()));
    DigitalImage::new(
        AdjacencySpec::new(n, u).unwrap(),
        cells.into_iter().take(k).map(Point::new),
    )
    .unwrap()
}

/// A random image with the given adjacency.
pub fn random_image_with(
    rng: &mut ChaCha8Rng,
    spec: AdjacencySpec,
    max_points: usize,
) -> DigitalImage {
    loop {
        let img = random_image(rng, max_points);
        if img.spec() == spec {
            return img;
        }
    }
}

/// A random connected image, grown from a seed point.
pub fn random_connected_image(rng: &mut ChaCha8Rng, max_points: usize) -> DigitalImage {
    loop {
        let img = random_image(rng, max_points);
        if img.is_connected_image() {
            return img;
        }
    }
}

pub fn random_subset(rng: &mut ChaCha8Rng, img: &DigitalImage) -> PointSet {
    loop {
        let s: PointSet = img
            .points()
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .cloned()
            .collect();
        if !s.is_empty() {
            return s;
        }
    }
}

/// A multivalued function with independent random nonempty point-images.
pub fn random_multifn(rng: &mut ChaCha8Rng, x: &DigitalImage, y: &DigitalImage) -> MultiFn {
    let p = if rng.gen_bool(0.6) { 0.25 } else { 0.5 };
    let map: BTreeMap<Point, PointSet> = x
        .points()
        .iter()
        .map(|q| loop {
            let s: PointSet = y
                .points()
                .iter()
                .filter(|_| rng.gen_bool(p))
                .cloned()
                .collect();
            if !s.is_empty() {
                break (q.clone(), s);
            }
        })
        .collect();
    MultiFn::new(x.clone(), y.clone(), &map).unwrap()
}

/// A random continuous single-valued map on `S(X,r)`, built greedily in
/// lexicographic order; the block over `pin.0`, if given, is sent to
/// `pin.1`. Returns the induced function and the map as a witness.
pub fn random_continuous(
    rng: &mut ChaCha8Rng,
    x: &DigitalImage,
    y: &DigitalImage,
    r: usize,
    pin: Option<(&Point, &Point)>,
) -> Option<(MultiFn, ContinuityWitness)> {
    let s = subdivide(x, r).unwrap();
    let img = s.image();
    'attempt: for _ in 0..50 {
        let mut values: Vec<Option<usize>> = vec![None; img.len()];
        if let Some((x0, y0)) = pin {
            let yi = y.index_of(y0).unwrap();
            for z in s.preimage(x0).unwrap() {
                values[img.index_of(&z).unwrap()] = Some(yi);
            }
        }
        // a random anchor value keeps maps from collapsing toward low indices
        let anchor = rng.gen_range(0..y.len());
        for z in 0..img.len() {
            if values[z].is_some() {
                continue;
            }
            let cands: Vec<usize> = (0..y.len())
                .filter(|&v| {
                    img.neighbors_idx(z)
                        .iter()
                        .all(|&w| values[w].is_none_or(|u| y.adjacent_or_equal_idx(u, v)))
                })
                .collect();
            if cands.is_empty() {
                continue 'attempt;
            }
            let stay = values.iter().flatten().next().copied().unwrap_or(anchor);
            values[z] = Some(if cands.contains(&stay) && rng.gen_bool(0.5) {
                stay
            } else {
                *cands.choose(rng).unwrap()
            });
        }
        let assignment: PointMap = img
            .points()
            .iter()
            .zip(&values)
            .map(|(z, v)| (z.clone(), y.point(v.unwrap()).clone()))
            .collect();
        let f = induced_from(&s, &assignment, y).unwrap();
        return Some((
            f,
            ContinuityWitness {
                level: r,
                assignment,
            },
        ));
    }
    None
}

/// Two images meeting in exactly the point `corner` and otherwise apart:
/// one inside the box below the corner, one inside the box above it.
pub fn random_wedge_pieces(
    rng: &mut ChaCha8Rng,
    spec: AdjacencySpec,
    max_points: usize,
) -> (DigitalImage, DigitalImage, Point) {
    let n = spec.dim();
    let side: i64 = if n == 1 { 3 } else { 2 };
    let corner = Point::new(vec![side; n]);
    let boxed = |lo: i64| -> Vec<Point> {
        let mut cells = vec![vec![]];
        for _ in 0..n {
            cells = cells
                .into_iter()
                .flat_map(|c: Vec<i64>| {
                    (lo..=lo + side).map(move |v| {
                        let mut c = c.clone();
                        c.push(v);
                        c
                    })
                })
                .collect();
        }
        cells.into_iter().map(Point::new).collect()
    };
    loop {
        let piece = |lo: i64, rng: &mut ChaCha8Rng| {
            let mut cells: Vec<Point> = boxed(lo).into_iter().filter(|c| *c != corner).collect();
            cells.shuffle(rng);
            let k = rng.gen_range(0..max_points);
            DigitalImage::new(spec, cells.into_iter().take(k).chain([corner.clone()])).unwrap()
        };
        let a = piece(0, rng);
        let b = piece(side, rng);
        if wedge_images(&a, &b).is_ok() {
            return (a, b, corner);
        }
    }
}
