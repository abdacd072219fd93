//! Workloads shared by the benchmarks.

use digitop::{AdjacencySpec, DigitalImage, MultiFn, Point, PointSet};

/// An `w x h` rectangle in `Z^2` with adjacency `c_u`.
pub fn rectangle(w: i64, h: i64, u: usize) -> DigitalImage {
    let points = (0..w).flat_map(|a| (0..h).map(move |b| Point::new(vec![a, b])));
    DigitalImage::new(AdjacencySpec::new(2, u).unwrap(), points).unwrap()
}

/// A comb: every other column of a rectangle, joined along the bottom row.
pub fn comb(w: i64, h: i64) -> DigitalImage {
    let points = (0..w)
        .flat_map(|a| (0..h).map(move |b| (a, b)))
        .filter(|&(a, b)| b == 0 || a % 2 == 0)
        .map(|(a, b)| Point::new(vec![a, b]));
    DigitalImage::new(AdjacencySpec::new(2, 1).unwrap(), points).unwrap()
}

/// `[0,n] -> [0,2n]`, `x -> {2x, 2x+1}` clipped: connectivity preserving,
/// and its witness needs level 2.
pub fn stretch(n: i64) -> MultiFn {
    let x = DigitalImage::interval(0, n);
    let y = DigitalImage::interval(0, 2 * n);
    MultiFn::from_fn(x, y, |p| {
        let v = 2 * p.coords()[0];
        [v, (v + 1).min(2 * n)]
            .into_iter()
            .map(|c| Point::new(vec![c]))
            .collect::<PointSet>()
    })
    .unwrap()
}
