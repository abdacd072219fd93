//! Exhaustive oracles over tiny images.
//!
//! These checks work straight from the definitions (images of connected
//! sets, every candidate assignment on a subdivision) and share no code
//! path with the adjacency-based deciders in [`crate::multifun`] beyond the
//! image graph itself. Every enumeration is capped; exceeding a cap is an
//! error rather than a silent truncation.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::grid::{sv_indices, DigitalImage, PointMap};
use crate::multifun::{analyze, compose, Continuity, MultiFn};
use crate::subdivision::subdivide;

/// Largest domain for the connected-subset enumeration.
pub const DEFINITION_CAP: usize = 20;
/// Largest number of candidate assignments tried by
/// [`continuity_by_enumeration`].
pub const ENUMERATION_CAP: u64 = 10_000_000;
/// Largest number of functions in a census.
pub const CENSUS_CAP: u64 = 1_000_000;

/// Calls `visit` with the bitmask of every nonempty connected subset of
/// `image`, each exactly once. Stops early when `visit` returns false, in
/// which case the result is false.
pub fn for_each_connected_subset(
    image: &DigitalImage,
    cap: usize,
    mut visit: impl FnMut(u64) -> bool,
) -> Result<bool> {
    let n = image.len();
    if n > cap.min(63) {
        return Err(Error::Resource(format!(
            "{n} points exceed the subset-enumeration cap of {}",
            cap.min(63)
        )));
    }
    let nbr: Vec<u64> = (0..n)
        .map(|i| image.neighbors_idx(i).iter().fold(0u64, |m, &j| m | 1 << j))
        .collect();
    for v in 0..n {
        let above = !((2u64 << v) - 1);
        let start = 1u64 << v;
        if !extend(
            &nbr,
            start,
            nbr[v] & above,
            start | nbr[v],
            above,
            &mut visit,
        ) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One step of the exclusive-neighborhood enumeration: `sub` is connected,
/// `ext` holds candidates that may still join it, `closed` is `sub` plus its
/// neighborhood.
fn extend(
    nbr: &[u64],
    sub: u64,
    mut ext: u64,
    closed: u64,
    above: u64,
    visit: &mut impl FnMut(u64) -> bool,
) -> bool {
    if !visit(sub) {
        return false;
    }
    while ext != 0 {
        let w = ext.trailing_zeros() as usize;
        ext &= ext - 1;
        let fresh = nbr[w] & !closed & above;
        if !extend(
            nbr,
            sub | 1 << w,
            ext | fresh,
            closed | nbr[w],
            above,
            visit,
        ) {
            return false;
        }
    }
    true
}

fn mask_members(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Connectivity preservation straight from its definition: the image of
/// every connected subset of the domain is connected.
pub fn cp_by_definition(f: &MultiFn) -> Result<bool> {
    let y = f.codomain();
    let mut in_image = vec![false; y.len()];
    for_each_connected_subset(f.domain(), DEFINITION_CAP, |mask| {
        let mut members = Vec::new();
        in_image.iter_mut().for_each(|b| *b = false);
        for x in mask_members(mask) {
            for &v in f.value_idx(x) {
                if !in_image[v] {
                    in_image[v] = true;
                    members.push(v);
                }
            }
        }
        y.is_connected_idx(&members)
    })
}

/// Single-valued continuity from its definition: connected subsets have
/// connected images.
pub fn sv_continuous_by_definition(
    f: &PointMap,
    x: &DigitalImage,
    y: &DigitalImage,
) -> Result<bool> {
    let values = sv_indices(f, x, y)?;
    for_each_connected_subset(x, DEFINITION_CAP, |mask| {
        let members: Vec<usize> = mask_members(mask).into_iter().map(|i| values[i]).collect();
        y.is_connected_idx(&members)
    })
}

/// Tries every assignment on `S(X,r)` that could induce `f` (each numerator
/// takes a value in the image of its base point) and reports whether one
/// is continuous and covers every point-image exactly.
pub fn continuity_by_enumeration(f: &MultiFn, r: usize) -> Result<bool> {
    continuity_by_enumeration_capped(f, r, ENUMERATION_CAP)
}

pub fn continuity_by_enumeration_capped(f: &MultiFn, r: usize, cap: u64) -> Result<bool> {
    let s = subdivide(f.domain(), r)?;
    let img = s.image();
    let choices: Vec<&[usize]> = (0..img.len())
        .map(|z| f.value_idx(s.project_idx(z)))
        .collect();
    let total = choices
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
        .filter(|&t| t <= cap)
        .ok_or_else(|| {
            Error::Resource(format!(
                "more than {cap} candidate assignments at level {r}"
            ))
        })?;
    let y = f.codomain();
    let mut digits = vec![0usize; img.len()];
    for _ in 0..total {
        let values: Vec<usize> = digits.iter().zip(&choices).map(|(&d, c)| c[d]).collect();
        let continuous = (0..img.len()).all(|i| {
            img.neighbors_idx(i)
                .iter()
                .all(|&j| y.adjacent_or_equal_idx(values[i], values[j]))
        });
        if continuous {
            let covers = (0..f.domain().len()).all(|x| {
                let mut seen: Vec<usize> = s.block_idx(x).iter().map(|&z| values[z]).collect();
                seen.sort_unstable();
                seen.dedup();
                seen == f.value_idx(x)
            });
            if covers {
                return Ok(true);
            }
        }
        for k in (0..digits.len()).rev() {
            digits[k] += 1;
            if digits[k] < choices[k].len() {
                break;
            }
            digits[k] = 0;
        }
    }
    Ok(false)
}

/// Number of multivalued functions `X -> Y` with nonempty point-images.
pub fn function_count(x: &DigitalImage, y: &DigitalImage) -> Option<u64> {
    if y.len() >= 64 {
        return None;
    }
    let per_point = (1u64 << y.len()) - 1;
    (0..x.len()).try_fold(1u64, |acc, _| acc.checked_mul(per_point))
}

/// Every multivalued function `X -> Y`, in lexicographic order of the
/// point-image bitmasks (first domain point most significant).
pub fn enumerate_multifns(
    x: &DigitalImage,
    y: &DigitalImage,
    cap: u64,
) -> Result<impl Iterator<Item = MultiFn>> {
    let total = function_count(x, y)
        .filter(|&t| t <= cap)
        .ok_or_else(|| Error::Resource(format!("more than {cap} functions")))?;
    if y.is_empty() && !x.is_empty() {
        return Err(Error::InvalidInput(
            "no nonempty point-images into an empty codomain".into(),
        ));
    }
    let (x, y) = (x.clone(), y.clone());
    let top = (1u64 << y.len()) - 1;
    let mut masks = vec![1u64; x.len()];
    let mut produced = 0u64;
    Ok(std::iter::from_fn(move || {
        if produced == total {
            return None;
        }
        produced += 1;
        let values = masks.iter().map(|&m| mask_members(m)).collect();
        let f = MultiFn::from_indices(x.clone(), y.clone(), values);
        for k in (0..masks.len()).rev() {
            if masks[k] < top {
                masks[k] += 1;
                break;
            }
            masks[k] = 1;
        }
        Some(f)
    }))
}

/// Coarse continuity class used in census signatures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ContinuityClass {
    WitnessFound,
    NotFound,
    Refuted,
}

impl From<&Continuity> for ContinuityClass {
    fn from(c: &Continuity) -> Self {
        match c {
            Continuity::WitnessFound { .. } => ContinuityClass::WitnessFound,
            Continuity::NotFoundUpTo { .. } => ContinuityClass::NotFound,
            Continuity::Refuted(_) => ContinuityClass::Refuted,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub weak: bool,
    pub strong: bool,
    pub cp: bool,
    pub continuous: ContinuityClass,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub weak: u64,
    pub strong: u64,
    pub cp: u64,
    pub witness_found: u64,
}

/// One inhabited class combination with its lexicographically first member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusClass {
    pub signature: Signature,
    pub count: u64,
    pub representative: MultiFn,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRecord {
    pub domain: DigitalImage,
    pub codomain: DigitalImage,
    pub r_max: usize,
    pub total: u64,
    pub counts: ClassCounts,
    /// Functions where `is_cp` and [`cp_by_definition`] disagree.
    pub cp_mismatches: u64,
    /// Inhabited signatures, in order of their first representative.
    pub classes: Vec<CensusClass>,
}

impl CensusRecord {
    pub fn class(&self, signature: Signature) -> Option<&CensusClass> {
        self.classes.iter().find(|c| c.signature == signature)
    }
}

fn classify(f: &MultiFn, r_max: usize) -> Result<(Signature, bool)> {
    let report = analyze(f, r_max)?;
    let sig = Signature {
        weak: report.weak,
        strong: report.strong,
        cp: report.connectivity_preserving,
        continuous: (&report.continuous).into(),
    };
    Ok((sig, cp_by_definition(f)? == sig.cp))
}

/// Classifies every multivalued function `X -> Y`.
pub fn census(x: &DigitalImage, y: &DigitalImage, r_max: usize) -> Result<CensusRecord> {
    census_capped(x, y, r_max, CENSUS_CAP)
}

pub fn census_capped(
    x: &DigitalImage,
    y: &DigitalImage,
    r_max: usize,
    cap: u64,
) -> Result<CensusRecord> {
    let mut record = CensusRecord {
        domain: x.clone(),
        codomain: y.clone(),
        r_max,
        total: 0,
        counts: ClassCounts::default(),
        cp_mismatches: 0,
        classes: Vec::new(),
    };
    let mut slot: HashMap<Signature, usize> = HashMap::new();
    for f in enumerate_multifns(x, y, cap)? {
        let (sig, agrees) = classify(&f, r_max)?;
        record.total += 1;
        record.counts.weak += sig.weak as u64;
        record.counts.strong += sig.strong as u64;
        record.counts.cp += sig.cp as u64;
        record.counts.witness_found += (sig.continuous == ContinuityClass::WitnessFound) as u64;
        record.cp_mismatches += !agrees as u64;
        match slot.get(&sig) {
            Some(&k) => record.classes[k].count += 1,
            None => {
                slot.insert(sig, record.classes.len());
                record.classes.push(CensusClass {
                    signature: sig,
                    count: 1,
                    representative: f,
                });
            }
        }
    }
    Ok(record)
}

/// Result of checking every composable pair `G ∘ F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureScan {
    pub pairs: u64,
    pub weak_pairs: u64,
    pub strong_pairs: u64,
    pub cp_pairs: u64,
    pub continuous_pairs: u64,
    pub weak_violations: u64,
    pub strong_violations: u64,
    pub cp_violations: u64,
    /// Pairs with witnesses for `F` and `G` but none for `G ∘ F` up to `r_max`.
    pub non_closure_count: u64,
    pub first_non_closure: Option<(MultiFn, MultiFn)>,
}

/// Checks closure of weak, strong and connectivity-preserving functions
/// under composition over all of `X -> Y -> W`, and looks for continuous
/// pairs whose composite has no witness up to `r_max`.
pub fn composition_closure_scan(
    x: &DigitalImage,
    y: &DigitalImage,
    w: &DigitalImage,
    r_max: usize,
) -> Result<ClosureScan> {
    let classified = |a: &DigitalImage, b: &DigitalImage| -> Result<Vec<(MultiFn, Signature)>> {
        enumerate_multifns(a, b, CENSUS_CAP)?
            .map(|f| classify(&f, r_max).map(|(sig, _)| (f, sig)))
            .collect()
    };
    let first = classified(x, y)?;
    let second = classified(y, w)?;
    let mut scan = ClosureScan {
        pairs: 0,
        weak_pairs: 0,
        strong_pairs: 0,
        cp_pairs: 0,
        continuous_pairs: 0,
        weak_violations: 0,
        strong_violations: 0,
        cp_violations: 0,
        non_closure_count: 0,
        first_non_closure: None,
    };
    let mut composite_found: HashMap<Vec<Vec<usize>>, bool> = HashMap::new();
    for (f, fs) in &first {
        for (g, gs) in &second {
            scan.pairs += 1;
            let gf = compose(f, g)?;
            if fs.weak && gs.weak {
                scan.weak_pairs += 1;
                scan.weak_violations += !gf.is_weak() as u64;
            }
            if fs.strong && gs.strong {
                scan.strong_pairs += 1;
                scan.strong_violations += !gf.is_strong() as u64;
            }
            if fs.cp && gs.cp {
                scan.cp_pairs += 1;
                scan.cp_violations += !gf.is_cp() as u64;
            }
            if fs.continuous == ContinuityClass::WitnessFound
                && gs.continuous == ContinuityClass::WitnessFound
            {
                scan.continuous_pairs += 1;
                let found = match composite_found.get(gf.values_idx()) {
                    Some(&b) => b,
                    None => {
                        let b = crate::multifun::find_witness(&gf, r_max)?
                            .witness()
                            .is_some();
                        composite_found.insert(gf.values_idx().to_vec(), b);
                        b
                    }
                };
                if !found {
                    scan.non_closure_count += 1;
                    if scan.first_non_closure.is_none() {
                        scan.first_non_closure = Some((f.clone(), g.clone()));
                    }
                }
            }
        }
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{AdjacencySpec, Point, PointSet};
    use std::collections::BTreeMap;

    fn p(v: i64) -> Point {
        Point::from([v])
    }

    fn s(vs: &[i64]) -> PointSet {
        vs.iter().map(|&v| p(v)).collect()
    }

    fn f01(a: &[i64], b: &[i64]) -> MultiFn {
        let map = BTreeMap::from([(p(0), s(a)), (p(1), s(b))]);
        MultiFn::new(
            DigitalImage::interval(0, 1),
            DigitalImage::interval(0, 2),
            &map,
        )
        .unwrap()
    }

    /// Connected subsets by filtering all subsets, for comparison.
    fn connected_by_filter(img: &DigitalImage) -> Vec<u64> {
        (1u64..1 << img.len())
            .filter(|&m| img.is_connected_idx(&mask_members(m)))
            .collect()
    }

    #[test]
    fn connected_subset_enumeration_is_exact() {
        let spec = AdjacencySpec::new(2, 2).unwrap();
        let grid = DigitalImage::new(
            spec,
            (0..3).flat_map(|a| (0..3).map(move |b| Point::from([a, b]))),
        )
        .unwrap();
        for img in [DigitalImage::interval(0, 5), grid] {
            let mut seen = Vec::new();
            for_each_connected_subset(&img, DEFINITION_CAP, |m| {
                seen.push(m);
                true
            })
            .unwrap();
            let n = seen.len();
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len(), n, "duplicates");
            assert_eq!(seen, connected_by_filter(&img));
        }
    }

    #[test]
    fn line_has_triangular_many_connected_subsets() {
        let mut count = 0;
        for_each_connected_subset(&DigitalImage::interval(0, 5), 20, |_| {
            count += 1;
            true
        })
        .unwrap();
        assert_eq!(count, 21);
    }

    #[test]
    fn definition_level_cp() {
        let x = DigitalImage::interval(0, 2);
        let all = MultiFn::from_fn(x.clone(), x.clone(), |_| x.point_set()).unwrap();
        assert!(cp_by_definition(&all).unwrap());
        assert!(!cp_by_definition(&f01(&[0, 2], &[1])).unwrap());
        let big = DigitalImage::interval(0, 20);
        assert!(matches!(
            cp_by_definition(&MultiFn::identity(big)),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn cp_matches_definition_on_all_343() {
        let x = DigitalImage::interval(0, 2);
        let mut n = 0;
        for f in enumerate_multifns(&x, &x, CENSUS_CAP).unwrap() {
            assert_eq!(f.is_cp(), cp_by_definition(&f).unwrap(), "{:?}", f.to_map());
            n += 1;
        }
        assert_eq!(n, 343);
    }

    #[test]
    fn enumeration_examples() {
        let f = f01(&[0, 1], &[2]);
        assert!(continuity_by_enumeration(&f, 2).unwrap());
        assert!(!continuity_by_enumeration(&f, 1).unwrap());
        assert!(
            continuity_by_enumeration(&MultiFn::identity(DigitalImage::interval(0, 2)), 1).unwrap()
        );
        assert!(matches!(
            continuity_by_enumeration_capped(&f, 2, 3),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn multifn_enumeration_order() {
        let x = DigitalImage::interval(0, 1);
        let y = DigitalImage::interval(0, 1);
        let all: Vec<_> = enumerate_multifns(&x, &y, 100).unwrap().collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[0].values_idx(), &[vec![0], vec![0]]);
        assert_eq!(all[1].values_idx(), &[vec![0], vec![1]]);
        assert_eq!(all[3].values_idx(), &[vec![1], vec![0]]);
        assert_eq!(all[8].values_idx(), &[vec![0, 1], vec![0, 1]]);
        assert!(matches!(
            enumerate_multifns(&x, &y, 8),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn single_point_census() {
        let pt = DigitalImage::interval(0, 0);
        let rec = census(&pt, &pt, 2).unwrap();
        assert_eq!(rec.total, 1);
        assert_eq!(rec.classes.len(), 1);
        assert_eq!(
            rec.classes[0].signature,
            Signature {
                weak: true,
                strong: true,
                cp: true,
                continuous: ContinuityClass::WitnessFound
            }
        );
    }

    #[test]
    fn census_counts_add_up() {
        let rec = census(
            &DigitalImage::interval(0, 1),
            &DigitalImage::interval(0, 2),
            4,
        )
        .unwrap();
        assert_eq!(rec.total, 49);
        assert_eq!(rec.classes.iter().map(|c| c.count).sum::<u64>(), 49);
        assert_eq!(rec.cp_mismatches, 0);
        assert!(rec.counts.strong <= rec.counts.weak);
        assert!(rec.counts.witness_found <= rec.counts.cp && rec.counts.cp <= rec.counts.weak);
    }
}
