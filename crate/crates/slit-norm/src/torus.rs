//! The square torus with a vertical slit: visibility, the stable-norm
//! closed forms with certificates, and vertex/flat classification.
//!
//! The slit length is an exact rational so that every combinatorial decision
//! (visibility of a class, visibility of its Farey parents) is exact; only
//! the final lengths are evaluated in floating point.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;

use crate::farey::{self, Rational};
use crate::scalar::{hypot_int, Float};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormError {
    #[error("slit length must satisfy 0 < rho < 1, got {0}")]
    InvalidSlitLength(Rational),
    #[error("the zero class has no direction")]
    ZeroClass,
    #[error("operation requires a primitive class, got {0}")]
    NonPrimitive(HClass),
    #[error("could not parse homology class from {0:?}")]
    Parse(String),
}

/// An integral homology class `(m, n)` on a slit torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HClass {
    pub m: i64,
    pub n: i64,
}

impl HClass {
    pub fn new(m: i64, n: i64) -> Self {
        HClass { m, n }
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0 && self.n == 0
    }

    /// gcd of the coordinates; 1 for primitive classes, 0 only for the zero class.
    pub fn gcd_factor(&self) -> i64 {
        num_integer::gcd(self.m.abs(), self.n.abs())
    }

    pub fn is_primitive(&self) -> bool {
        self.gcd_factor() == 1
    }

    /// `(primitive part, gcd factor)`; the zero class is its own primitive part.
    pub fn primitive_part(&self) -> (HClass, i64) {
        let k = self.gcd_factor();
        if k <= 1 {
            (*self, k.max(1))
        } else {
            (HClass::new(self.m / k, self.n / k), k)
        }
    }

    pub fn scaled(&self, k: i64) -> HClass {
        HClass::new(self.m * k, self.n * k)
    }
}

impl fmt::Display for HClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.m, self.n)
    }
}

impl FromStr for HClass {
    type Err = NormError;

    fn from_str(s: &str) -> Result<Self, NormError> {
        let bad = || NormError::Parse(s.to_owned());
        let (m, n) = s.split_once(',').ok_or_else(bad)?;
        Ok(HClass::new(
            m.trim().parse().map_err(|_| bad())?,
            n.trim().parse().map_err(|_| bad())?,
        ))
    }
}

/// How a stable-norm value is realized geometrically.
#[derive(Debug, Clone, PartialEq)]
pub enum CertificateKind<F> {
    /// A straight segment to the class; the norm is Euclidean.
    VisibleSegment,
    /// A simple two-segment minimizer bending once at a slit endpoint.
    TwoSegmentSimple { bend: [F; 2] },
    /// A flat direction: the norm splits additively over the Farey parents.
    FlatSplit { children: Vec<NormCertificate<F>> },
}

/// The stable norm of a class together with the decomposition that
/// produced it. Replaying the geometry reproduces `value` to 1e-12
/// relative.
#[derive(Debug, Clone, PartialEq)]
pub struct NormCertificate<F> {
    pub class: HClass,
    pub value: F,
    pub kind: CertificateKind<F>,
}

impl<F: Float> NormCertificate<F> {
    /// Recomputes the length from the certificate geometry (the gcd factor
    /// times the primitive geometry length).
    pub fn replay_length(&self) -> F {
        let (h0, k) = self.class.primitive_part();
        let kf = F::from_f64_lossy(k as f64);
        match &self.kind {
            CertificateKind::VisibleSegment => kf * hypot_int::<F>(h0.m, h0.n),
            CertificateKind::TwoSegmentSimple { bend } => {
                let tx = F::from_f64_lossy(h0.m as f64);
                let ty = F::from_f64_lossy(h0.n as f64);
                let leg1 = bend[0].hypot(bend[1]);
                let leg2 = (tx - bend[0]).hypot(ty - bend[1]);
                kf * (leg1 + leg2)
            }
            CertificateKind::FlatSplit { children } => children
                .iter()
                .map(|c| c.replay_length())
                .fold(F::zero(), |acc, v| acc + v),
        }
    }
}

/// Vertex-or-flat classification of a primitive direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionKind {
    /// The unit ball is strictly convex here (a vertex of the ball).
    Vertex,
    /// The boundary point lies in the interior of a flat.
    FlatInterior,
}

impl fmt::Display for DirectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DirectionKind::Vertex => "vertex",
            DirectionKind::FlatInterior => "flat",
        })
    }
}

/// Farey parent classes of a primitive first-quadrant class `(m, n)` with
/// `m >= 2`, `n >= 1`: the classes `(b, a)` and `(d, c)` whose slopes
/// `a/b < c/d` are the Farey parents of `n/m`.
pub fn parent_classes(m: i64, n: i64) -> ((i64, i64), (i64, i64)) {
    debug_assert!(m >= 2 && n >= 1 && num_integer::gcd(m, n) == 1);
    let slope = Rational::new(n, m).expect("m >= 2");
    let parents = farey::farey_parents(&slope).expect("slope is not an integer");
    let to_class = |r: &Rational| {
        (
            r.denom().to_i64().expect("parent fits i64"),
            r.numer().to_i64().expect("parent fits i64"),
        )
    };
    (to_class(&parents.low), to_class(&parents.high))
}

/// The flat square torus of area 1 with a vertical slit of length `rho`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerticalSlitTorus {
    rho: Rational,
}

impl VerticalSlitTorus {
    pub fn new(rho: Rational) -> Result<Self, NormError> {
        if rho <= Rational::zero() || rho >= Rational::one() {
            return Err(NormError::InvalidSlitLength(rho));
        }
        Ok(VerticalSlitTorus { rho })
    }

    pub fn rho(&self) -> &Rational {
        &self.rho
    }

    /// `floor(1/rho)`: the largest visible first coordinate.
    pub fn visibility_bound(&self) -> i64 {
        self.rho
            .recip()
            .expect("rho > 0")
            .floor_int()
            .to_i64()
            .expect("bound fits i64")
    }

    fn visible_coord(&self, m: i64) -> bool {
        // |m| * rho <= 1, decided exactly.
        &Rational::integer(m.abs()) * &self.rho <= Rational::one()
    }

    /// Whether the straight segment to the (primitive) class misses every
    /// slit: `|m| * rho <= 1`, with the closed inequality.
    pub fn is_visible(&self, h: HClass) -> Result<bool, NormError> {
        self.require_primitive(h)?;
        Ok(self.visible_coord(h.m))
    }

    /// Vertex iff the class is visible or has at least one visible Farey
    /// parent; flat otherwise.
    pub fn classify(&self, h: HClass) -> Result<DirectionKind, NormError> {
        self.require_primitive(h)?;
        let (am, an) = (h.m.abs(), h.n.abs());
        if am == 0 || an == 0 || self.visible_coord(am) {
            return Ok(DirectionKind::Vertex);
        }
        let ((b, _), (d, _)) = parent_classes(am, an);
        if self.visible_coord(b) || self.visible_coord(d) {
            Ok(DirectionKind::Vertex)
        } else {
            Ok(DirectionKind::FlatInterior)
        }
    }

    /// The stable norm of `h` with its certificate.
    pub fn stable_norm<F: Float>(&self, h: HClass) -> Result<NormCertificate<F>, NormError> {
        if h.is_zero() {
            return Err(NormError::ZeroClass);
        }
        let (h0, k) = h.primitive_part();
        Ok(self.build_certificate(k, h0.m, h0.n).0)
    }

    /// Convenience accessor for the bare value.
    pub fn norm_value<F: Float>(&self, h: HClass) -> Result<F, NormError> {
        Ok(self.stable_norm::<F>(h)?.value)
    }

    /// Builds the certificate of `k * (m0, n0)` with `(m0, n0)` primitive.
    /// Returns the certificate and the primitive (k = 1) value; the value is
    /// always computed on `(|m0|, |n0|)` so that norms are bitwise symmetric
    /// under sign flips and exactly homogeneous in `k`.
    fn build_certificate<F: Float>(&self, k: i64, m0: i64, n0: i64) -> (NormCertificate<F>, F) {
        let class = HClass::new(k * m0, k * n0);
        let kf = F::from_f64_lossy(k as f64);
        let (am, an) = (m0.abs(), n0.abs());
        let (sm, sn) = (if m0 < 0 { -1 } else { 1 }, if n0 < 0 { -1 } else { 1 });

        if am == 0 || an == 0 || self.visible_coord(am) {
            let v = hypot_int::<F>(am, an);
            let cert = NormCertificate {
                class,
                value: kf * v,
                kind: CertificateKind::VisibleSegment,
            };
            return (cert, v);
        }

        let ((b, a), (d, c)) = parent_classes(am, an);
        if self.visible_coord(b) || self.visible_coord(d) {
            let a_rho = &Rational::integer(a) + &self.rho;
            let c_rho = &Rational::integer(c) - &self.rho;
            let low_term = length_of(b, &a_rho);
            let high_term = length_of(d, &c_rho);
            let v = F::from_f64_lossy(low_term) + F::from_f64_lossy(high_term);
            // The minimizer bends at (b, a+rho) in the first quadrant; the
            // reflected quadrants bend at the mirrored slit endpoint, which
            // sits on the other parent when n < 0.
            let bend = if sn > 0 {
                [sm as f64 * b as f64, a_rho.to_f64()]
            } else {
                [sm as f64 * d as f64, -c_rho.to_f64()]
            };
            let cert = NormCertificate {
                class,
                value: kf * v,
                kind: CertificateKind::TwoSegmentSimple {
                    bend: [F::from_f64_lossy(bend[0]), F::from_f64_lossy(bend[1])],
                },
            };
            return (cert, v);
        }

        let (low_cert, low_v) = self.build_certificate::<F>(k, sm * b, sn * a);
        let (high_cert, high_v) = self.build_certificate::<F>(k, sm * d, sn * c);
        let v = low_v + high_v;
        let cert = NormCertificate {
            class,
            value: kf * v,
            kind: CertificateKind::FlatSplit {
                children: vec![low_cert, high_cert],
            },
        };
        (cert, v)
    }

    /// A minimizing polyline for a primitive class, lifted to the abelian
    /// cover. Two-segment minimizers bend at a slit endpoint; flat classes
    /// yield the concatenation of parent minimizers (a multicurve lift).
    ///
    /// For `m = 0` the lift of the vertical circle at `x = 1/2` is returned:
    /// it has the right length and avoids the slits entirely, whereas the
    /// segment from the origin along `x = 0` would run through slit
    /// interiors.
    pub fn minimizing_path<F: Float>(&self, h: HClass) -> Result<Vec<[F; 2]>, NormError> {
        if h.is_zero() {
            return Err(NormError::ZeroClass);
        }
        self.require_primitive(h)?;
        if h.m == 0 {
            let half = F::from_f64_lossy(0.5);
            return Ok(vec![[half, F::zero()], [half, F::from_f64_lossy(h.n as f64)]]);
        }
        let mut points = vec![[F::zero(), F::zero()]];
        self.extend_path(h.m, h.n, F::zero(), F::zero(), &mut points);
        Ok(points)
    }

    fn extend_path<F: Float>(&self, m0: i64, n0: i64, ox: F, oy: F, out: &mut Vec<[F; 2]>) {
        let (am, an) = (m0.abs(), n0.abs());
        let (sm, sn) = (if m0 < 0 { -1.0 } else { 1.0 }, if n0 < 0 { -1.0 } else { 1.0 });
        let target = [ox + F::from_f64_lossy(m0 as f64), oy + F::from_f64_lossy(n0 as f64)];

        if am == 0 || an == 0 || self.visible_coord(am) {
            out.push(target);
            return;
        }
        let ((b, a), (d, c)) = parent_classes(am, an);
        if self.visible_coord(b) || self.visible_coord(d) {
            let bend = if sn > 0.0 {
                [sm * b as f64, (&Rational::integer(a) + &self.rho).to_f64()]
            } else {
                [sm * d as f64, -(&Rational::integer(c) - &self.rho).to_f64()]
            };
            out.push([ox + F::from_f64_lossy(bend[0]), oy + F::from_f64_lossy(bend[1])]);
            out.push(target);
            return;
        }
        let (sm_i, sn_i) = (if m0 < 0 { -1 } else { 1 }, if n0 < 0 { -1 } else { 1 });
        self.extend_path(sm_i * b, sn_i * a, ox, oy, out);
        let mid = *out.last().expect("path is nonempty");
        self.extend_path(sm_i * d, sn_i * c, mid[0], mid[1], out);
    }

    fn require_primitive(&self, h: HClass) -> Result<(), NormError> {
        if h.is_zero() {
            return Err(NormError::ZeroClass);
        }
        if !h.is_primitive() {
            return Err(NormError::NonPrimitive(h));
        }
        Ok(())
    }
}

/// `sqrt(x^2 + y^2)` for an integer x and exact rational y, evaluated in f64.
fn length_of(x: i64, y: &Rational) -> f64 {
    let sq = &Rational::integer(x * x) + &(y * y);
    sq.to_f64().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn torus(num: i64, den: i64) -> VerticalSlitTorus {
        VerticalSlitTorus::new(Rational::new(num, den).unwrap()).unwrap()
    }

    fn h(m: i64, n: i64) -> HClass {
        HClass::new(m, n)
    }

    /// Test-only clearance check for the vertical-slit scene: the segment
    /// from p0 to p1 crosses no open slit interior. Slit interiors sit at
    /// integer x with fractional height in (0, rho).
    fn segment_clear_vertical(rho: f64, p0: [f64; 2], p1: [f64; 2]) -> bool {
        let (x0, x1) = (p0[0].min(p1[0]), p0[0].max(p1[0]));
        if p0[0] == p1[0] {
            if p0[0].fract() != 0.0 {
                return true;
            }
            let (lo, hi) = (p0[1].min(p1[1]), p0[1].max(p1[1]));
            for q in (lo.floor() as i64)..=(hi.ceil() as i64) {
                let (slo, shi) = (q as f64, q as f64 + rho);
                if lo < shi - 1e-12 && hi > slo + 1e-12 && !(lo >= shi || hi <= slo) {
                    let overlap = hi.min(shi) - lo.max(slo);
                    if overlap > 1e-9 {
                        return false;
                    }
                }
            }
            return true;
        }
        let mut k = x0.floor() as i64 + 1;
        while (k as f64) < x1 - 1e-12 {
            if (k as f64) > x0 + 1e-12 {
                let t = (k as f64 - p0[0]) / (p1[0] - p0[0]);
                let y = p0[1] + t * (p1[1] - p0[1]);
                let frac = y - y.floor();
                if frac > 1e-9 && frac < rho - 1e-9 {
                    return false;
                }
            }
            k += 1;
        }
        true
    }

    #[test]
    fn rho_domain() {
        assert!(VerticalSlitTorus::new(Rational::new(2, 5).unwrap()).is_ok());
        assert!(VerticalSlitTorus::new(Rational::new(0, 1).unwrap()).is_err());
        assert!(VerticalSlitTorus::new(Rational::new(1, 1).unwrap()).is_err());
        assert!(VerticalSlitTorus::new(Rational::new(-1, 5).unwrap()).is_err());
    }

    #[test]
    fn visibility_examples() {
        let t = torus(2, 5);
        assert!(t.is_visible(h(2, 1)).unwrap());
        for n in [0, 1, 5, 17, -4] {
            assert!(t.is_visible(h(1, n)).unwrap());
        }
        assert!(!t.is_visible(h(3, 1)).unwrap());
        assert_eq!(t.is_visible(h(2, 4)), Err(NormError::NonPrimitive(h(2, 4))));
        // Boundary case m * rho = 1 is visible (closed inequality).
        let t4 = torus(1, 4);
        assert!(t4.is_visible(h(4, 1)).unwrap());
        assert!(!t4.is_visible(h(5, 1)).unwrap());
    }

    #[test]
    fn parents_match_spec_examples() {
        assert_eq!(parent_classes(3, 1), ((1, 0), (2, 1)));
        assert_eq!(parent_classes(7, 2), ((4, 1), (3, 1)));
        assert_eq!(parent_classes(5, 2), ((3, 1), (2, 1)));
    }

    #[test]
    fn norm_examples_rho_2_5() {
        let t = torus(2, 5);

        let c = t.stable_norm::<f64>(h(3, 1)).unwrap();
        let expected = 1.16f64.sqrt() + 4.36f64.sqrt();
        assert!((c.value - expected).abs() < 1e-12, "{} vs {}", c.value, expected);
        assert!((c.value - 3.165094).abs() < 1e-6);
        match &c.kind {
            CertificateKind::TwoSegmentSimple { bend } => {
                assert!((bend[0] - 1.0).abs() < 1e-15 && (bend[1] - 0.4).abs() < 1e-15);
            }
            other => panic!("expected two-segment certificate, got {other:?}"),
        }

        let c = t.stable_norm::<f64>(h(1, 1)).unwrap();
        assert_eq!(c.value, 2f64.sqrt());
        assert!(matches!(c.kind, CertificateKind::VisibleSegment));

        let c = t.stable_norm::<f64>(h(7, 2)).unwrap();
        let expected = (1.16f64.sqrt() + 9.36f64.sqrt()) + (1.16f64.sqrt() + 4.36f64.sqrt());
        assert!((c.value - expected).abs() < 1e-12);
        assert!((c.value - 7.301539).abs() < 1e-6);
        match &c.kind {
            CertificateKind::FlatSplit { children } => {
                assert_eq!(children.len(), 2);
                assert_eq!(children[0].class, h(4, 1));
                assert_eq!(children[1].class, h(3, 1));
                assert_eq!(c.value, children[0].value + children[1].value);
            }
            other => panic!("expected flat certificate, got {other:?}"),
        }

        let c = t.stable_norm::<f64>(h(5, 2)).unwrap();
        let expected = 10.96f64.sqrt() + 4.36f64.sqrt();
        assert!((c.value - expected).abs() < 1e-12);
        assert!((c.value - 5.398650).abs() < 1e-6);

        assert_eq!(t.stable_norm::<f64>(h(0, 0)), Err(NormError::ZeroClass));
    }

    #[test]
    fn classification_examples() {
        let t = torus(2, 5);
        assert_eq!(t.classify(h(2, 1)).unwrap(), DirectionKind::Vertex);
        assert_eq!(t.classify(h(3, 1)).unwrap(), DirectionKind::Vertex);
        assert_eq!(t.classify(h(7, 2)).unwrap(), DirectionKind::FlatInterior);
    }

    #[test]
    fn paths_match_certificates_and_avoid_slits() {
        let t = torus(2, 5);
        let rho = 0.4;
        assert_eq!(
            t.minimizing_path::<f64>(h(1, 1)).unwrap(),
            vec![[0.0, 0.0], [1.0, 1.0]]
        );
        // Bend at (b, a+rho) = (1, 0.4), matching the certificate.
        let p = t.minimizing_path::<f64>(h(3, 1)).unwrap();
        assert_eq!(p, vec![[0.0, 0.0], [1.0, 0.4], [3.0, 1.0]]);

        for class in [
            h(3, 1),
            h(7, 2),
            h(5, 2),
            h(11, 3),
            h(3, -1),
            h(-3, 1),
            h(-7, -2),
            h(5, -2),
            h(0, 1),
            h(0, -1),
            h(1, 0),
        ] {
            let path = t.minimizing_path::<f64>(class).unwrap();
            let mut len = 0.0;
            for w in path.windows(2) {
                len += (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]);
                assert!(
                    segment_clear_vertical(rho, w[0], w[1]),
                    "segment {:?} -> {:?} of class {class} hits a slit",
                    w[0],
                    w[1]
                );
            }
            let value = t.norm_value::<f64>(class).unwrap();
            assert!(
                (len - value).abs() <= 1e-12 * value,
                "path length {len} vs norm {value} for {class}"
            );
        }
    }

    #[test]
    fn single_precision_instantiation() {
        let t = torus(2, 5);
        for (m, n) in [(3i64, 1i64), (7, 2), (1, 1), (5, -2)] {
            let narrow = t.norm_value::<f32>(h(m, n)).unwrap();
            let wide = t.norm_value::<f64>(h(m, n)).unwrap();
            assert!(
                (narrow as f64 - wide).abs() < 1e-6 * wide,
                "({m},{n}): f32 {narrow} vs f64 {wide}"
            );
        }
        let path = t.minimizing_path::<f32>(h(3, 1)).unwrap();
        assert_eq!(path.len(), 3);
    }

    #[test]
    fn certificate_replay() {
        let t = torus(3, 10);
        for (m, n) in [(3, 1), (7, 2), (14, 4), (6, 2), (-9, 5), (25, 7), (0, 4)] {
            let c = t.stable_norm::<f64>(h(m, n)).unwrap();
            let replay = c.replay_length();
            assert!(
                (replay - c.value).abs() <= 1e-12 * c.value,
                "replay {replay} vs value {} for ({m},{n})",
                c.value
            );
        }
    }

    #[test]
    fn euclidean_bound_strict_for_non_visible() {
        let t = torus(2, 5);
        for m in 1..=25i64 {
            for n in 1..=25i64 {
                if num_integer::gcd(m, n) != 1 {
                    continue;
                }
                let v = t.norm_value::<f64>(h(m, n)).unwrap();
                let e = (m as f64).hypot(n as f64);
                if t.is_visible(h(m, n)).unwrap() {
                    assert_eq!(v, e);
                } else {
                    assert!(v > e + 1e-9, "norm {v} not above euclidean {e} for ({m},{n})");
                }
            }
        }
    }

    #[test]
    fn vertex_strictness_and_flat_additivity() {
        let t = torus(2, 5);
        for m in 3..=30i64 {
            for n in 1..=30i64 {
                if num_integer::gcd(m, n) != 1 || t.is_visible(h(m, n)).unwrap() {
                    continue;
                }
                let ((b, a), (d, c)) = parent_classes(m, n);
                let sum = t.norm_value::<f64>(h(b, a)).unwrap() + t.norm_value::<f64>(h(d, c)).unwrap();
                let v = t.norm_value::<f64>(h(m, n)).unwrap();
                match t.classify(h(m, n)).unwrap() {
                    DirectionKind::Vertex => {
                        assert!(sum - v > 1e-9, "no margin for vertex ({m},{n}): {v} vs {sum}")
                    }
                    DirectionKind::FlatInterior => assert_eq!(v, sum),
                }
            }
        }
    }

    proptest! {
        #[test]
        fn sign_symmetry_and_homogeneity_are_exact(m in -40i64..=40, n in -40i64..=40, k in 1i64..=5) {
            prop_assume!(m != 0 || n != 0);
            let t = torus(2, 5);
            let v = t.norm_value::<f64>(h(m, n)).unwrap();
            prop_assert_eq!(v, t.norm_value::<f64>(h(-m, n)).unwrap());
            prop_assert_eq!(v, t.norm_value::<f64>(h(m, -n)).unwrap());
            prop_assert_eq!(v, t.norm_value::<f64>(h(-m, -n)).unwrap());
            let kv = t.norm_value::<f64>(h(k * m, k * n)).unwrap();
            let (h0, g) = h(m, n).primitive_part();
            let base = t.norm_value::<f64>(h0).unwrap();
            prop_assert_eq!(kv, (k * g) as f64 * base);
            prop_assert_eq!(v, g as f64 * base);
        }

        #[test]
        fn triangle_inequality(m1 in -30i64..=30, n1 in -30i64..=30, m2 in -30i64..=30, n2 in -30i64..=30) {
            prop_assume!((m1 != 0 || n1 != 0) && (m2 != 0 || n2 != 0));
            prop_assume!(m1 + m2 != 0 || n1 + n2 != 0);
            let t = torus(3, 10);
            let a = t.norm_value::<f64>(h(m1, n1)).unwrap();
            let b = t.norm_value::<f64>(h(m2, n2)).unwrap();
            let c = t.norm_value::<f64>(h(m1 + m2, n1 + n2)).unwrap();
            prop_assert!(c <= a + b + 1e-9);
        }
    }
}
