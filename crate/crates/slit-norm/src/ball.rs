//! Geometry of the stable-norm unit ball: vertex enumeration, boundary
//! polylines, and the deviation-from-circle profile.
//!
//! Vertex directions are exactly the visible classes together with the
//! Farey children of visible classes, so the first quadrant is enumerated by
//! walking child chains out of each visible class.

use std::collections::BTreeSet;

use crate::scalar::{hypot_int, Float};
use crate::torus::{parent_classes, DirectionKind, HClass, VerticalSlitTorus};

/// How a vertex direction arises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    Visible,
    ChildOfVisible,
}

impl std::fmt::Display for VertexKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VertexKind::Visible => "visible",
            VertexKind::ChildOfVisible => "child-of-visible",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexEntry<F> {
    pub class: HClass,
    pub norm: F,
    pub kind: VertexKind,
}

/// First-quadrant vertex directions sorted by slope, `(1,0)` first and
/// `(0,1)` last.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexList<F> {
    pub entries: Vec<VertexEntry<F>>,
}

impl<F: Float> VertexList<F> {
    pub fn classes(&self) -> impl Iterator<Item = HClass> + '_ {
        self.entries.iter().map(|e| e.class)
    }

    /// Index pairs of slope-consecutive entries.
    pub fn consecutive_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..self.entries.len()).map(|i| (i - 1, i))
    }

    pub fn position_of(&self, class: HClass) -> Option<usize> {
        self.entries.iter().position(|e| e.class == class)
    }
}

/// Slope order on first-quadrant classes: n1/m1 < n2/m2, decided exactly.
fn slope_cmp(a: HClass, b: HClass) -> std::cmp::Ordering {
    (a.n as i128 * b.m as i128).cmp(&(b.n as i128 * a.m as i128))
}

/// All primitive first-quadrant vertex directions of stable norm at most
/// `max_norm`: the visible classes plus every Farey child of a visible class
/// meeting the bound. Complete, because a vertex direction is visible or has
/// a visible parent. Classes reachable from two visible parents are emitted
/// once.
pub fn enumerate_vertices<F: Float>(torus: &VerticalSlitTorus, max_norm: F) -> VertexList<F> {
    let bound = max_norm.as_f64();
    let mut seen: BTreeSet<(i64, i64)> = BTreeSet::new();
    let limit = torus.visibility_bound();

    // Visible classes, including the axes.
    if bound >= 1.0 {
        seen.insert((1, 0));
        seen.insert((0, 1));
    }
    for m in 1..=limit {
        if (m as f64) > bound {
            break;
        }
        let n_max = (bound * bound - (m * m) as f64).sqrt().floor() as i64;
        for n in 1..=n_max {
            if num_integer::gcd(m, n) == 1 {
                seen.insert((m, n));
            }
        }
    }

    // Child chains out of each visible class. The chain through the k-th
    // child of (b, a) toward a neighbor seed (v, u) is (k b + v, k a + u);
    // its Euclidean norm grows monotonically in k, and the stable norm
    // dominates the Euclidean one, so the walk stops exactly when the
    // Euclidean norm passes the bound and the stable norm is checked per
    // candidate.
    let visible: Vec<(i64, i64)> = seen.iter().copied().collect();
    let mut chain = |base: (i64, i64), seed: (i64, i64)| {
        let mut k = 1i64;
        loop {
            let cand = (k * base.0 + seed.0, k * base.1 + seed.1);
            if (cand.0 as f64).hypot(cand.1 as f64) > bound {
                break;
            }
            let v: F = torus
                .norm_value(HClass::new(cand.0, cand.1))
                .expect("chain classes are nonzero");
            if v.as_f64() <= bound {
                seen.insert(cand);
            }
            k += 1;
        }
    };
    for &(b, a) in &visible {
        for seed in chain_seeds(b, a) {
            chain((b, a), seed);
        }
    }

    let mut entries: Vec<VertexEntry<F>> = seen
        .into_iter()
        .map(|(m, n)| {
            let class = HClass::new(m, n);
            let norm: F = torus.norm_value(class).expect("nonzero class");
            let kind = if torus.is_visible(class).expect("primitive by construction") {
                VertexKind::Visible
            } else {
                VertexKind::ChildOfVisible
            };
            VertexEntry { class, norm, kind }
        })
        .filter(|e| e.norm.as_f64() <= bound)
        .collect();
    entries.sort_by(|a, b| slope_cmp(a.class, b.class));
    debug_assert!(entries.iter().all(|e| {
        torus.classify(e.class).expect("primitive") == DirectionKind::Vertex
    }));
    VertexList { entries }
}

/// Stern-Brocot neighbor seeds of a first-quadrant primitive class: the
/// chains `k * base + seed` enumerate all first-quadrant Farey children of
/// `base`. Non-integer slopes are seeded by their Farey parents; integer
/// slopes sit on the tree spine and are seeded by `(1, a-1)` and the
/// vertical root `(0, 1)`.
fn chain_seeds(b: i64, a: i64) -> Vec<(i64, i64)> {
    match (b, a) {
        (1, 0) => vec![(0, 1)],
        (0, 1) => vec![(1, 0)],
        (1, a) => vec![(1, a - 1), (0, 1)],
        _ => {
            let (low, high) = parent_classes(b, a);
            vec![low, high]
        }
    }
}

/// Classification tag used in profile output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionTag {
    Visible,
    VertexChild,
    Flat,
}

impl std::fmt::Display for DirectionTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DirectionTag::Visible => "visible",
            DirectionTag::VertexChild => "vertex",
            DirectionTag::Flat => "flat",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationSample<F> {
    /// Arc-length coordinate on the flattened first-octant arc, in [0, 1].
    pub coord: F,
    /// `1 - |h|_2 / |h|_stable`; zero exactly at visible directions.
    pub gap: F,
    pub class: HClass,
    pub kind: DirectionTag,
}

/// Samples the gap between the unit circle and the stable-norm unit sphere
/// over the first octant (slopes in [0, 1]), flattened to [0, 1] by arc
/// length. Slopes are taken from a Farey refinement (which hits every
/// small-denominator vertex exactly) merged with a uniform angular fill
/// snapped to nearby rationals (which renders the flats).
pub fn deviation_profile<F: Float>(
    torus: &VerticalSlitTorus,
    octant_samples: usize,
) -> Vec<DeviationSample<F>> {
    assert!(octant_samples >= 2, "need at least two samples");
    let mut slopes: BTreeSet<(i64, i64)> = BTreeSet::new(); // (n, m), slope n/m

    // Farey refinement: smallest order whose sequence on [0,1] has at least
    // octant_samples/2 terms (|F_k| grows like 3k^2/pi^2).
    let mut order = 2i64;
    loop {
        let count: i64 = (1..=order)
            .map(|den| (0..=den).filter(|n| num_integer::gcd(*n, den) == 1).count() as i64)
            .sum();
        if count as usize >= octant_samples / 2 || order > 4096 {
            break;
        }
        order += 1;
    }
    for m in 1..=order {
        for n in 0..=m {
            if num_integer::gcd(m, n) == 1 {
                slopes.insert((n, m));
            }
        }
    }

    // Uniform fill: angles snapped to bounded-denominator rationals.
    let snap_den = 4 * order;
    for i in 0..octant_samples {
        let theta = (i as f64 / (octant_samples - 1) as f64) * std::f64::consts::FRAC_PI_4;
        let slope = theta.tan();
        let (n, m) = best_rational_at_most(slope, snap_den);
        slopes.insert((n, m));
    }

    let mut slopes: Vec<(i64, i64)> = slopes.into_iter().collect();
    slopes.sort_by(|a, b| (a.0 as i128 * b.1 as i128).cmp(&(b.0 as i128 * a.1 as i128)));
    slopes
        .into_iter()
        .map(|(n, m)| {
            let class = HClass::new(m, n);
            let value: F = torus.norm_value(class).expect("nonzero");
            let euclid = hypot_int::<F>(m, n);
            let gap = F::one() - euclid / value;
            let theta = (n as f64).atan2(m as f64);
            let coord = F::from_f64_lossy(theta / std::f64::consts::FRAC_PI_4);
            let kind = if torus.is_visible(class).expect("primitive") {
                DirectionTag::Visible
            } else if torus.classify(class).expect("primitive") == DirectionKind::Vertex {
                DirectionTag::VertexChild
            } else {
                DirectionTag::Flat
            };
            DeviationSample { coord, gap, class, kind }
        })
        .collect()
}

/// Best rational approximation of `x >= 0` with denominator at most
/// `max_den`, via the Stern-Brocot descent.
fn best_rational_at_most(x: f64, max_den: i64) -> (i64, i64) {
    let (mut ln, mut lm) = (x.floor() as i64, 1i64);
    let (mut hn, mut hm) = (ln + 1, 1i64);
    let (mut bn, mut bm) = if (x - ln as f64).abs() <= (hn as f64 - x).abs() {
        (ln, lm)
    } else {
        (hn, hm)
    };
    loop {
        let (mn, mm) = (ln + hn, lm + hm);
        if mm > max_den {
            break;
        }
        if (mn as f64 / mm as f64 - x).abs() < (bn as f64 / bm as f64 - x).abs() {
            (bn, bm) = (mn, mm);
        }
        if (mn as f64) <= x * mm as f64 {
            (ln, lm) = (mn, mm);
        } else {
            (hn, hm) = (mn, mm);
        }
    }
    (bn, bm)
}

/// Boundary polyline of the inner approximation of the unit sphere over the
/// first quadrant: the normalized vertex directions `v / |v|` with both
/// coordinates at most `max_denominator`, ordered by slope. Every vertex
/// direction is an extreme point of the ball, so the angle-ordered points
/// are in convex position; the polyline is exact along flats whose endpoint
/// vertices are included.
pub fn boundary_polyline<F: Float>(
    torus: &VerticalSlitTorus,
    max_denominator: i64,
) -> Vec<[F; 2]> {
    assert!(max_denominator >= 1);
    let mut classes: Vec<HClass> = Vec::new();
    for m in 0..=max_denominator {
        for n in 0..=max_denominator {
            if (m == 0 && n == 0) || num_integer::gcd(m, n) != 1 {
                continue;
            }
            let class = HClass::new(m, n);
            if torus.classify(class).expect("primitive") == DirectionKind::Vertex {
                classes.push(class);
            }
        }
    }
    classes.sort_by(|a, b| slope_cmp(*a, *b));
    classes
        .into_iter()
        .map(|c| {
            let v: F = torus.norm_value(c).expect("nonzero");
            [F::from_f64_lossy(c.m as f64) / v, F::from_f64_lossy(c.n as f64) / v]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::Rational;

    fn torus(num: i64, den: i64) -> VerticalSlitTorus {
        VerticalSlitTorus::new(Rational::new(num, den).unwrap()).unwrap()
    }

    fn h(m: i64, n: i64) -> HClass {
        HClass::new(m, n)
    }

    #[test]
    fn vertex_enumeration_examples() {
        let t = torus(2, 5);
        let list = enumerate_vertices::<f64>(&t, 2.0);
        let classes: Vec<HClass> = list.classes().collect();
        assert_eq!(classes, vec![h(1, 0), h(1, 1), h(0, 1)]);

        let list = enumerate_vertices::<f64>(&t, 3.2);
        assert!(list.position_of(h(3, 1)).is_some());
        let e = &list.entries[list.position_of(h(3, 1)).unwrap()];
        assert!((e.norm - 3.165094).abs() < 1e-6);
        assert_eq!(e.kind, VertexKind::ChildOfVisible);
    }

    #[test]
    fn enumeration_matches_brute_force_scan() {
        for (num, den) in [(2i64, 5i64), (3, 10)] {
            let t = torus(num, den);
            let bound = 12.0;
            let list = enumerate_vertices::<f64>(&t, bound);
            let got: BTreeSet<(i64, i64)> = list.classes().map(|c| (c.m, c.n)).collect();
            let mut want: BTreeSet<(i64, i64)> = BTreeSet::new();
            let top = bound.ceil() as i64;
            for m in 0..=top {
                for n in 0..=top {
                    if (m == 0 && n == 0) || num_integer::gcd(m, n) != 1 {
                        continue;
                    }
                    let class = h(m, n);
                    if t.classify(class).unwrap() == DirectionKind::Vertex
                        && t.norm_value::<f64>(class).unwrap() <= bound
                    {
                        want.insert((m, n));
                    }
                }
            }
            assert_eq!(got, want, "vertex sets differ for rho = {num}/{den}");
        }
    }

    #[test]
    fn chains_terminate_for_good() {
        // After the Euclidean cut the stable norm stays above the bound for
        // at least five more chain steps.
        let t = torus(2, 5);
        let bound = 15.0;
        for (base, seed) in [((2i64, 1i64), (1i64, 0i64)), ((1, 1), (1, 0)), ((2, 1), (1, 1))] {
            let mut k = 1i64;
            while ((k * base.0 + seed.0) as f64).hypot((k * base.1 + seed.1) as f64) <= bound {
                k += 1;
            }
            for extra in 0..5 {
                let cand = h((k + extra) * base.0 + seed.0, (k + extra) * base.1 + seed.1);
                assert!(t.norm_value::<f64>(cand).unwrap() > bound);
            }
        }
    }

    #[test]
    fn profile_gaps() {
        let t = torus(2, 5);
        let samples = deviation_profile::<f64>(&t, 64);
        assert!(samples.len() >= 32);
        for s in &samples {
            assert!(s.gap >= -1e-15, "negative gap at {}", s.class);
            assert!((0.0..=1.0).contains(&s.coord));
            match s.kind {
                DirectionTag::Visible => assert!(s.gap.abs() < 1e-15),
                _ => assert!(s.gap > 0.0),
            }
        }
        let find = |m: i64, n: i64| samples.iter().find(|s| s.class == h(m, n));
        let s = find(1, 0).expect("axis sampled");
        assert_eq!(s.gap, 0.0);
        if let Some(s) = find(3, 1) {
            let expected = 1.0 - 10f64.sqrt() / (1.16f64.sqrt() + 4.36f64.sqrt());
            assert!((s.gap - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn profile_gap_spot_values() {
        let t = torus(2, 5);
        let v72 = t.norm_value::<f64>(h(7, 2)).unwrap();
        let gap = 1.0 - 53f64.sqrt() / v72;
        assert!((gap - 0.002935).abs() < 1e-6);
        let v31 = t.norm_value::<f64>(h(3, 1)).unwrap();
        let gap = 1.0 - 10f64.sqrt() / v31;
        // 1 - sqrt(10)/3.16509426 = 8.8986e-4.
        assert!((gap - 0.000890).abs() < 1e-6);
    }

    #[test]
    fn polyline_examples() {
        let t = torus(2, 5);
        let pts = boundary_polyline::<f64>(&t, 1);
        let r2 = 0.5f64.sqrt();
        assert_eq!(pts.len(), 3);
        assert!((pts[0][0] - 1.0).abs() < 1e-15 && pts[0][1].abs() < 1e-15);
        assert!((pts[1][0] - r2).abs() < 1e-15 && (pts[1][1] - r2).abs() < 1e-15);
        assert!((pts[2][1] - 1.0).abs() < 1e-15);

        let pts = boundary_polyline::<f64>(&t, 3);
        let t21 = [2.0 / 5f64.sqrt(), 1.0 / 5f64.sqrt()];
        let v31 = 1.16f64.sqrt() + 4.36f64.sqrt();
        assert!(pts.iter().any(|p| (p[0] - t21[0]).abs() < 1e-12 && (p[1] - t21[1]).abs() < 1e-12));
        assert!(pts
            .iter()
            .any(|p| (p[0] - 3.0 / v31).abs() < 1e-12 && (p[1] - 1.0 / v31).abs() < 1e-12));
    }

    #[test]
    fn containment_in_unit_disk() {
        // Normalized boundary points stay inside the closed Euclidean unit
        // disk, touching the circle exactly at the visible directions.
        let t = torus(2, 5);
        let mut classes: Vec<HClass> = Vec::new();
        for m in 0..=8i64 {
            for n in 0..=8i64 {
                if (m == 0 && n == 0) || num_integer::gcd(m, n) != 1 {
                    continue;
                }
                classes.push(h(m, n));
            }
        }
        classes.sort_by(|a, b| slope_cmp(*a, *b));
        for c in classes {
            let v = t.norm_value::<f64>(c).unwrap();
            let r = ((c.m as f64 / v).powi(2) + (c.n as f64 / v).powi(2)).sqrt();
            if t.is_visible(c).unwrap() {
                assert!((r - 1.0).abs() < 1e-12, "{c}: radius {r}");
            } else {
                assert!(r < 1.0 - 1e-12, "{c}: radius {r} not strictly inside");
            }
        }
    }

    #[test]
    fn polyline_points_have_unit_norm_by_replay() {
        let t = torus(2, 5);
        let maxd = 6;
        let mut classes: Vec<HClass> = Vec::new();
        for m in 0..=maxd {
            for n in 0..=maxd {
                if (m == 0 && n == 0) || num_integer::gcd(m, n) != 1 {
                    continue;
                }
                if t.classify(h(m, n)).unwrap() == DirectionKind::Vertex {
                    classes.push(h(m, n));
                }
            }
        }
        classes.sort_by(|a, b| slope_cmp(*a, *b));
        let pts = boundary_polyline::<f64>(&t, maxd);
        assert_eq!(pts.len(), classes.len());
        for (p, c) in pts.iter().zip(&classes) {
            // The point is class / norm(class), so scaling it back by the
            // norm and renormalizing through the stable norm yields 1.
            let v = t.norm_value::<f64>(*c).unwrap();
            assert!((p[0] * v - c.m as f64).abs() < 1e-9 * v);
            assert!((p[1] * v - c.n as f64).abs() < 1e-9 * v);
            let euclid_dir = p[0].hypot(p[1]);
            let stable_of_point = euclid_dir * v / (c.m as f64).hypot(c.n as f64);
            assert!((stable_of_point - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn hull_closure_for_flats() {
        let t = torus(2, 5);
        for (m, n) in [(7i64, 2i64), (11, 3), (10, 3), (13, 4)] {
            if t.classify(h(m, n)).unwrap() != DirectionKind::FlatInterior {
                continue;
            }
            let ((b, a), (d, c)) = parent_classes(m, n);
            let v = t.norm_value::<f64>(h(m, n)).unwrap();
            let v1 = t.norm_value::<f64>(h(b, a)).unwrap();
            let v2 = t.norm_value::<f64>(h(d, c)).unwrap();
            let p = [m as f64 / v, n as f64 / v];
            let p1 = [b as f64 / v1, a as f64 / v1];
            let p2 = [d as f64 / v2, c as f64 / v2];
            // p = lambda p1 + (1 - lambda) p2 with lambda = v1 / (v1 + v2).
            let lambda = v1 / (v1 + v2);
            let q = [
                lambda * p1[0] + (1.0 - lambda) * p2[0],
                lambda * p1[1] + (1.0 - lambda) * p2[1],
            ];
            assert!((p[0] - q[0]).abs() < 1e-9 && (p[1] - q[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn vertex_extremality_margins() {
        let t = torus(2, 5);
        let list = enumerate_vertices::<f64>(&t, 8.0);
        let pts: Vec<[f64; 2]> = list
            .entries
            .iter()
            .map(|e| [e.class.m as f64 / e.norm, e.class.n as f64 / e.norm])
            .collect();
        for i in 1..pts.len() - 1 {
            let (a, p, b) = (pts[i - 1], pts[i], pts[i + 1]);
            // The boundary runs counterclockwise by slope, so a strictly
            // extreme p makes (a, p, b) a positively oriented triple.
            let area = (p[0] - a[0]) * (b[1] - a[1]) - (p[1] - a[1]) * (b[0] - a[0]);
            assert!(
                area > 1e-12,
                "vertex {} not strictly outside chord of neighbors (area {area})",
                list.entries[i].class
            );
        }
    }
}
