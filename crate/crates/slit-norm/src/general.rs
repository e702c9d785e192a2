//! Stable norms on sheared, rational-slit, and irrational-slit tori.
//!
//! A determinant-1 matrix acting on the vertical-slit torus changes lengths
//! but not the vertex/flat combinatorics, so sheared norms classify in the
//! unsheared coordinates and measure after applying the matrix. A square
//! torus with a rational-slope slit pulls back to a vertical-slit torus
//! through an integral unimodular change of basis. Irrational slit tori are
//! handled through the visible-neighbor criterion `|m alpha - n beta| <= 1`
//! and, for classes with no visible neighbor, through finite-depth
//! convergent approximations.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::farey::{self, Rational};
use crate::oracle::CoverScene;
use crate::scalar::Float;
use crate::torus::{parent_classes, CertificateKind, HClass, NormCertificate, VerticalSlitTorus};

const BOUNDARY_TOL: f64 = 1e-12;
const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeneralError {
    #[error("matrix determinant is {0}, not 1")]
    NotUnimodular(String),
    #[error("the zero class has no direction")]
    ZeroClass,
    #[error("operation requires a primitive class, got {0}")]
    NonPrimitive(HClass),
    #[error("slit slope is not rational")]
    SlopeNotRational,
    #[error("class {0} is visible; the two-term formula applies to non-visible classes")]
    ClassIsVisible(HClass),
    #[error("visibility of {0} is within tolerance of the boundary |m alpha - n beta| = 1")]
    VisibilityIndeterminate(HClass),
    #[error("flat split did not stabilize under deeper convergents for {0}")]
    SplitUnstable(HClass),
    #[error("invalid slit torus: {0}")]
    InvalidTorus(String),
}

/// A 2x2 matrix with exact rational entries, stored row-major.
///
/// Decimal inputs parse to exact rationals, so determinants are checked
/// exactly; a matrix whose exact determinant differs from 1 by at most
/// 1e-12 is accepted (classification never uses the matrix, so an
/// approximately unimodular matrix only perturbs lengths).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    entries: [Rational; 4],
}

impl LinearMap {
    pub fn new(entries: [Rational; 4]) -> Result<Self, GeneralError> {
        let m = LinearMap { entries };
        let det = m.det();
        if det != Rational::one() && (det.to_f64() - 1.0).abs() > BOUNDARY_TOL {
            return Err(GeneralError::NotUnimodular(det.to_string()));
        }
        Ok(m)
    }

    pub fn from_integers(entries: [i64; 4]) -> Result<Self, GeneralError> {
        Self::new(entries.map(Rational::integer))
    }

    pub fn identity() -> Self {
        LinearMap {
            entries: [
                Rational::one(),
                Rational::zero(),
                Rational::zero(),
                Rational::one(),
            ],
        }
    }

    pub fn det(&self) -> Rational {
        let [a, b, c, d] = &self.entries;
        &(a * d) - &(b * c)
    }

    /// Inverse via the adjugate; exact.
    pub fn inverse(&self) -> LinearMap {
        let [a, b, c, d] = &self.entries;
        let det = self.det();
        let div = |x: &Rational| {
            Rational::from_big(x.numer() * det.denom(), x.denom() * det.numer())
                .expect("unimodular determinant is nonzero")
        };
        LinearMap {
            entries: [div(d), div(&-b), div(&-c), div(a)],
        }
    }

    pub fn apply_rational(&self, v: [&Rational; 2]) -> [Rational; 2] {
        let [a, b, c, d] = &self.entries;
        [&(a * v[0]) + &(b * v[1]), &(c * v[0]) + &(d * v[1])]
    }

    /// Applies the map to an integral class; None if the image is not integral.
    pub fn apply_class(&self, h: HClass) -> Option<HClass> {
        let v = self.apply_rational([&Rational::integer(h.m), &Rational::integer(h.n)]);
        if v[0].is_integer() && v[1].is_integer() {
            Some(HClass::new(v[0].numer().to_i64()?, v[1].numer().to_i64()?))
        } else {
            None
        }
    }

    /// Column vectors, the lattice basis of the sheared cover.
    pub fn columns(&self) -> [[Rational; 2]; 2] {
        let [a, b, c, d] = &self.entries;
        [[a.clone(), c.clone()], [b.clone(), d.clone()]]
    }

    /// Euclidean length of the image of an exact vector.
    fn image_length(&self, v: [&Rational; 2]) -> f64 {
        let w = self.apply_rational(v);
        let sq = &(&w[0] * &w[0]) + &(&w[1] * &w[1]);
        sq.to_f64().sqrt()
    }

    fn image_point(&self, v: [&Rational; 2]) -> [f64; 2] {
        let w = self.apply_rational(v);
        [w[0].to_f64(), w[1].to_f64()]
    }
}

/// Stable norm on the sheared torus `MX`: classification happens in the
/// unsheared coordinates exactly as on the vertical-slit torus; lengths are
/// measured after applying the matrix.
pub fn norm_sheared<F: Float>(
    map: &LinearMap,
    rho: &Rational,
    h: HClass,
) -> Result<NormCertificate<F>, GeneralError> {
    if h.is_zero() {
        return Err(GeneralError::ZeroClass);
    }
    let torus = VerticalSlitTorus::new(rho.clone())
        .map_err(|e| GeneralError::InvalidTorus(e.to_string()))?;
    let (h0, k) = h.primitive_part();
    let (cert, _) = sheared_build::<F>(map, &torus, k, h0.m, h0.n);
    Ok(cert)
}

fn sheared_build<F: Float>(
    map: &LinearMap,
    torus: &VerticalSlitTorus,
    k: i64,
    m0: i64,
    n0: i64,
) -> (NormCertificate<F>, F) {
    let class = HClass::new(k * m0, k * n0);
    let kf = F::from_f64_lossy(k as f64);
    let (am, an) = (m0.abs(), n0.abs());
    let visible = am == 0
        || an == 0
        || torus.is_visible(HClass::new(am, an)).expect("primitive");

    if visible {
        let v = F::from_f64_lossy(
            map.image_length([&Rational::integer(m0), &Rational::integer(n0)]),
        );
        let cert = NormCertificate { class, value: kf * v, kind: CertificateKind::VisibleSegment };
        return (cert, v);
    }

    let ((b, a), (d, c)) = parent_classes(am, an);
    let rho = torus.rho();
    let b_vis = torus.is_visible(HClass::new(b, a)).expect("primitive parent");
    let d_vis = torus.is_visible(HClass::new(d, c)).expect("primitive parent");
    if b_vis || d_vis {
        // Minimizer decomposition in the unsheared plane, by quadrant; the
        // first leg starts at the origin and ends on a slit endpoint.
        let int = Rational::integer;
        let (v1, v2) = match (m0 >= 0, n0 >= 0) {
            (true, true) => (
                (int(b), &int(a) + rho),
                (int(d), &int(c) - rho),
            ),
            (true, false) => (
                (int(d), &(-&int(c)) + rho),
                (int(b), &(-&int(a)) - rho),
            ),
            (false, true) => (
                (int(-b), &int(a) + rho),
                (int(-d), &int(c) - rho),
            ),
            (false, false) => (
                (int(-d), &(-&int(c)) + rho),
                (int(-b), &(-&int(a)) - rho),
            ),
        };
        let l1 = map.image_length([&v1.0, &v1.1]);
        let l2 = map.image_length([&v2.0, &v2.1]);
        let v = F::from_f64_lossy(l1) + F::from_f64_lossy(l2);
        let bend = map.image_point([&v1.0, &v1.1]);
        let cert = NormCertificate {
            class,
            value: kf * v,
            kind: CertificateKind::TwoSegmentSimple {
                bend: [F::from_f64_lossy(bend[0]), F::from_f64_lossy(bend[1])],
            },
        };
        return (cert, v);
    }

    let (sm, sn) = (if m0 < 0 { -1 } else { 1 }, if n0 < 0 { -1 } else { 1 });
    let (low_cert, low_v) = sheared_build::<F>(map, torus, k, sm * b, sn * a);
    let (high_cert, high_v) = sheared_build::<F>(map, torus, k, sm * d, sn * c);
    let v = low_v + high_v;
    let cert = NormCertificate {
        class,
        value: kf * v,
        kind: CertificateKind::FlatSplit { children: vec![low_cert, high_cert] },
    };
    (cert, v)
}

/// Three-valued visibility for tori whose slit data carries a tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visibility {
    Visible,
    Hidden,
    /// `|m alpha - n beta|` is within 1e-12 of 1.
    Indeterminate,
}

#[derive(Debug, Clone)]
enum SlitRepr {
    Exact { beta: Rational, alpha: Rational },
    Real { beta: f64, alpha: f64 },
}

/// Kind of slit direction on a square torus.
#[derive(Debug, Clone, PartialEq)]
pub enum SlopeKind {
    Vertical,
    Rational(Rational),
    Irrational(f64),
}

/// A square torus of area 1 whose slit is the segment from a lattice point
/// to that point plus `(beta, alpha)`.
#[derive(Debug, Clone)]
pub struct GeneralSlitTorus {
    repr: SlitRepr,
}

impl GeneralSlitTorus {
    /// Exact slit vector; the sign is normalized so the vector points
    /// upward (or rightward when horizontal).
    pub fn exact(beta: Rational, alpha: Rational) -> Result<Self, GeneralError> {
        let (beta, alpha) = if alpha < Rational::zero()
            || (alpha.is_zero() && beta < Rational::zero())
        {
            (-&beta, -&alpha)
        } else {
            (beta, alpha)
        };
        // Scene construction validates length and slit disjointness.
        if beta.is_zero() {
            CoverScene::vertical(alpha.clone())
                .map_err(|e| GeneralError::InvalidTorus(e.to_string()))?;
        } else {
            CoverScene::exact_slit(beta.clone(), alpha.clone())
                .map_err(|e| GeneralError::InvalidTorus(e.to_string()))?;
        }
        Ok(GeneralSlitTorus { repr: SlitRepr::Exact { beta, alpha } })
    }

    /// Slit vector given in doubles, treated as irrational data: predicates
    /// carry an absolute tolerance of 1e-12.
    pub fn real(beta: f64, alpha: f64) -> Result<Self, GeneralError> {
        let (beta, alpha) = if alpha < 0.0 || (alpha == 0.0 && beta < 0.0) {
            (-beta, -alpha)
        } else {
            (beta, alpha)
        };
        CoverScene::real_slit(beta, alpha).map_err(|e| GeneralError::InvalidTorus(e.to_string()))?;
        Ok(GeneralSlitTorus { repr: SlitRepr::Real { beta, alpha } })
    }

    pub fn slit_f64(&self) -> [f64; 2] {
        match &self.repr {
            SlitRepr::Exact { beta, alpha } => [beta.to_f64(), alpha.to_f64()],
            SlitRepr::Real { beta, alpha } => [*beta, *alpha],
        }
    }

    /// Slit length `L = |(beta, alpha)|`.
    pub fn slit_length(&self) -> f64 {
        let [b, a] = self.slit_f64();
        b.hypot(a)
    }

    pub fn slope_kind(&self) -> SlopeKind {
        match &self.repr {
            SlitRepr::Exact { beta, alpha } => {
                if beta.is_zero() {
                    SlopeKind::Vertical
                } else {
                    let slope = Rational::from_big(
                        alpha.numer() * beta.denom(),
                        alpha.denom() * beta.numer(),
                    )
                    .expect("beta nonzero");
                    SlopeKind::Rational(slope)
                }
            }
            SlitRepr::Real { beta, alpha } => SlopeKind::Irrational(alpha / beta),
        }
    }

    /// The brute-force scene of the abelian cover, for cross-checks.
    pub fn oracle_scene(&self) -> CoverScene {
        match &self.repr {
            SlitRepr::Exact { beta, alpha } => {
                if beta.is_zero() {
                    CoverScene::vertical(alpha.clone()).expect("validated at construction")
                } else {
                    CoverScene::exact_slit(beta.clone(), alpha.clone())
                        .expect("validated at construction")
                }
            }
            SlitRepr::Real { beta, alpha } => {
                CoverScene::real_slit(*beta, *alpha).expect("validated at construction")
            }
        }
    }

    /// `|m alpha - n beta|` compared with 1: exact for exact slit data, and
    /// within an absolute tolerance of 1e-12 otherwise (boundary-adjacent
    /// cases are flagged rather than silently classified).
    pub fn visibility(&self, h: HClass) -> Result<Visibility, GeneralError> {
        if h.is_zero() {
            return Err(GeneralError::ZeroClass);
        }
        if !h.is_primitive() {
            return Err(GeneralError::NonPrimitive(h));
        }
        match &self.repr {
            SlitRepr::Exact { beta, alpha } => {
                let area = (&(&Rational::integer(h.m) * alpha)
                    - &(&Rational::integer(h.n) * beta))
                    .abs();
                Ok(if area <= Rational::one() { Visibility::Visible } else { Visibility::Hidden })
            }
            SlitRepr::Real { beta, alpha } => {
                let area = (h.m as f64 * alpha - h.n as f64 * beta).abs();
                Ok(if (area - 1.0).abs() <= BOUNDARY_TOL {
                    Visibility::Indeterminate
                } else if area < 1.0 {
                    Visibility::Visible
                } else {
                    Visibility::Hidden
                })
            }
        }
    }

    /// Pulls a rational-slope torus back to a vertical-slit torus: returns
    /// the unimodular integral `M` and the pulled-back slit length, with
    /// `M (0, rho') = (beta, alpha)`.
    pub fn pull_back(&self) -> Result<(LinearMap, Rational), GeneralError> {
        let SlitRepr::Exact { beta, alpha } = &self.repr else {
            return Err(GeneralError::SlopeNotRational);
        };
        if beta.is_zero() {
            return Ok((LinearMap::identity(), alpha.clone()));
        }
        // Primitive integer direction (q, p) parallel to the slit, same
        // orientation.
        let den = num_integer::lcm(beta.denom().clone(), alpha.denom().clone());
        let qn = (beta.numer() * (&den / beta.denom())).to_i64().ok_or_else(|| {
            GeneralError::InvalidTorus("slit denominators too large".into())
        })?;
        let pn = (alpha.numer() * (&den / alpha.denom())).to_i64().ok_or_else(|| {
            GeneralError::InvalidTorus("slit denominators too large".into())
        })?;
        let g = num_integer::gcd(qn.abs(), pn.abs());
        let (q, p) = (qn / g, pn / g);
        let rho = Rational::from_big(beta.numer().clone(), beta.denom() * q).expect("q nonzero");
        if rho <= Rational::zero() || rho >= Rational::one() {
            return Err(GeneralError::InvalidTorus(format!(
                "pulled-back slit length {rho} outside (0, 1)"
            )));
        }
        // Bezout: v p - u q = 1 with the smallest nonnegative u (p != 0
        // here since alpha > 0 after normalization).
        let ext = num_integer::Integer::extended_gcd(&p, &q);
        debug_assert_eq!(ext.gcd, 1);
        let (mut v, mut u) = (ext.x, -ext.y);
        let t = u.div_euclid(p.abs()) * if p > 0 { 1 } else { -1 };
        v -= t * q;
        u -= t * p;
        debug_assert!(u >= 0 && u < p.abs());
        debug_assert_eq!(v * p - u * q, 1);
        let map = LinearMap::from_integers([v, q, u, p])?;
        debug_assert_eq!(
            map.apply_rational([&Rational::zero(), &rho]),
            [beta.clone(), alpha.clone()]
        );
        Ok((map, rho))
    }

    /// Stable norm for any nonzero class, dispatching on the slit kind.
    pub fn norm<F: Float>(&self, h: HClass) -> Result<NormCertificate<F>, GeneralError> {
        if h.is_zero() {
            return Err(GeneralError::ZeroClass);
        }
        match &self.repr {
            SlitRepr::Exact { .. } => rational_slit_norm(self, h),
            SlitRepr::Real { .. } => {
                let (h0, k) = h.primitive_part();
                let cert0 = match self.visibility(h0)? {
                    Visibility::Visible => NormCertificate {
                        class: h0,
                        value: crate::scalar::hypot_int::<F>(h0.m, h0.n),
                        kind: CertificateKind::VisibleSegment,
                    },
                    Visibility::Hidden => irrational_norm::<F>(self, h0)?.certificate,
                    Visibility::Indeterminate => {
                        return Err(GeneralError::VisibilityIndeterminate(h0))
                    }
                };
                Ok(scale_certificate(cert0, h, k))
            }
        }
    }
}

fn scale_certificate<F: Float>(cert: NormCertificate<F>, class: HClass, k: i64) -> NormCertificate<F> {
    let kf = F::from_f64_lossy(k as f64);
    NormCertificate { class, value: kf * cert.value, kind: cert.kind }
}

/// Stable norm on a rational (or vertical) slit torus via the pull-back:
/// classify and decompose on the vertical model, measure through `M`.
pub fn rational_slit_norm<F: Float>(
    torus: &GeneralSlitTorus,
    h: HClass,
) -> Result<NormCertificate<F>, GeneralError> {
    if h.is_zero() {
        return Err(GeneralError::ZeroClass);
    }
    let (map, rho) = torus.pull_back()?;
    let inv = map.inverse();
    let back = inv.apply_class(h).expect("integral unimodular inverse");
    let cert = norm_sheared::<F>(&map, &rho, back)?;
    Ok(NormCertificate { class: h, value: cert.value, kind: cert.kind })
}

/// Outcome of the irrational two-term evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct IrrationalNorm<F> {
    pub certificate: NormCertificate<F>,
    /// Set when two distinct candidate decompositions agree within 1e-9
    /// relative, i.e. the minimum is not numerically decisive.
    pub near_tie: bool,
}

/// Visible neighbors of a non-visible primitive class: integral solutions
/// of `n q - m p = +-1` with `|q alpha - p beta| <= 1`. The solutions lie on
/// two lines, and non-visibility bounds the parameter range, so the search
/// is finite (and `|q| <= |m| + 1` throughout).
fn visible_neighbors(
    torus: &GeneralSlitTorus,
    h: HClass,
) -> Result<Vec<HClass>, GeneralError> {
    let [beta, alpha] = torus.slit_f64();
    let (m, n) = (h.m, h.n);
    let area = m as f64 * alpha - n as f64 * beta;
    let mut found: Vec<HClass> = Vec::new();
    for s in [1i64, -1] {
        // Base solution of n q - m p = s.
        let ext = num_integer::Integer::extended_gcd(&n, &m);
        debug_assert_eq!(ext.gcd.abs(), 1);
        let (q0, p0) = (s * ext.gcd.signum() * ext.x, -s * ext.gcd.signum() * ext.y);
        debug_assert_eq!(n * q0 - m * p0, s);
        // |(q0 + t m) alpha - (p0 + t n) beta| <= 1 is linear in t.
        let a0 = q0 as f64 * alpha - p0 as f64 * beta;
        let (lo, hi) = ((-1.0 - a0) / area, (1.0 - a0) / area);
        let (lo, hi) = (lo.min(hi).floor() as i64 - 1, lo.max(hi).ceil() as i64 + 1);
        for t in lo..=hi {
            let cand = HClass::new(q0 + t * m, p0 + t * n);
            if cand.is_zero() {
                continue;
            }
            match torus.visibility(cand)? {
                Visibility::Visible => found.push(cand),
                Visibility::Indeterminate => {
                    return Err(GeneralError::VisibilityIndeterminate(cand))
                }
                Visibility::Hidden => {}
            }
        }
    }
    // Identify (q, p) with -(q, p): keep one canonical representative.
    found.sort();
    found.dedup();
    let mut canonical: Vec<HClass> = Vec::new();
    for z in found {
        if !canonical.contains(&HClass::new(-z.m, -z.n)) {
            canonical.push(z);
        }
    }
    Ok(canonical)
}

/// The two-term length of the decomposition `h = z1 + z2`. The slit vector
/// is added to the part z with `sign(cross(z, h)) = sign(m alpha - n beta)`
/// and subtracted from the other; on the vertical torus this is the rule
/// that the lower-slope parent carries `+rho`, and the signed visibility
/// quantity `m alpha - n beta = rho' m'` transports it to general slits.
fn two_term_value(torus: &GeneralSlitTorus, z1: HClass, z2: HClass) -> (f64, [f64; 2]) {
    let [beta, alpha] = torus.slit_f64();
    let cross = |z: HClass, w: HClass| z.m as i128 * w.n as i128 - z.n as i128 * w.m as i128;
    let h = HClass::new(z1.m + z2.m, z1.n + z2.n);
    let side = h.m as f64 * alpha - h.n as f64 * beta;
    let z1_plus = (cross(z1, h) > 0) == (side > 0.0);
    let (plus, minus) = if z1_plus { (z1, z2) } else { (z2, z1) };
    let p1 = [plus.m as f64 + beta, plus.n as f64 + alpha];
    let p2 = [minus.m as f64 - beta, minus.n as f64 - alpha];
    let value = p1[0].hypot(p1[1]) + p2[0].hypot(p2[1]);
    (value, p1)
}

/// Two-term formula (or convergent flat split) for a primitive non-visible
/// class on an irrational slit torus.
pub fn irrational_norm<F: Float>(
    torus: &GeneralSlitTorus,
    h: HClass,
) -> Result<IrrationalNorm<F>, GeneralError> {
    irrational_norm_rec(torus, h, 0)
}

fn irrational_norm_rec<F: Float>(
    torus: &GeneralSlitTorus,
    h: HClass,
    depth: usize,
) -> Result<IrrationalNorm<F>, GeneralError> {
    if h.is_zero() {
        return Err(GeneralError::ZeroClass);
    }
    if !h.is_primitive() {
        return Err(GeneralError::NonPrimitive(h));
    }
    if torus.visibility(h)? == Visibility::Visible {
        return Err(GeneralError::ClassIsVisible(h));
    }
    if depth > 64 {
        return Err(GeneralError::SplitUnstable(h));
    }

    let neighbors = visible_neighbors(torus, h)?;
    if !neighbors.is_empty() {
        // Each visible neighbor z admits the decompositions z + (h - z) and
        // (-z) + (h + z); the true one is the image of the vertical-model
        // Farey parents, and the shorter candidate wins (ties flagged).
        let mut candidates: Vec<(f64, [f64; 2])> = Vec::new();
        for z in &neighbors {
            for rep in [*z, HClass::new(-z.m, -z.n)] {
                let partner = HClass::new(h.m - rep.m, h.n - rep.n);
                if partner.is_zero() {
                    continue;
                }
                candidates.push(two_term_value(torus, rep, partner));
            }
        }
        candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite lengths"));
        let best = candidates[0];
        let near_tie = candidates
            .iter()
            .skip(1)
            .any(|c| (c.0 - best.0).abs() <= TIE_TOL * best.0 && (c.1 != best.1));
        let certificate = NormCertificate {
            class: h,
            value: F::from_f64_lossy(best.0),
            kind: CertificateKind::TwoSegmentSimple {
                bend: [F::from_f64_lossy(best.1[0]), F::from_f64_lossy(best.1[1])],
            },
        };
        return Ok(IrrationalNorm { certificate, near_tie });
    }

    // No visible neighbor: the direction lies in a flat. Split along the
    // pushed-forward Farey parents of the convergent approximations, and
    // require the split to be stable under five extra convergent steps.
    let split = stable_flat_split(torus, h)?;
    let evaluate = |z: HClass| -> Result<(NormCertificate<F>, bool), GeneralError> {
        match torus.visibility(z)? {
            Visibility::Visible => Ok((
                NormCertificate {
                    class: z,
                    value: crate::scalar::hypot_int::<F>(z.m, z.n),
                    kind: CertificateKind::VisibleSegment,
                },
                false,
            )),
            Visibility::Hidden => {
                let r = irrational_norm_rec::<F>(torus, z, depth + 1)?;
                Ok((r.certificate, r.near_tie))
            }
            Visibility::Indeterminate => Err(GeneralError::VisibilityIndeterminate(z)),
        }
    };
    let (c1, t1) = evaluate(split.0)?;
    let (c2, t2) = evaluate(split.1)?;
    let value = c1.value + c2.value;
    Ok(IrrationalNorm {
        certificate: NormCertificate {
            class: h,
            value,
            kind: CertificateKind::FlatSplit { children: vec![c1, c2] },
        },
        near_tie: t1 || t2,
    })
}

/// Approximates the irrational torus by tori whose slit has the slope of a
/// continued-fraction convergent of `alpha/beta` (same length `L`), pulls
/// the class back to the vertical model there, and pushes its Farey parents
/// forward. Convergent depth starts at 20 and the resulting pair must agree
/// at depth +5.
fn stable_flat_split(
    torus: &GeneralSlitTorus,
    h: HClass,
) -> Result<(HClass, HClass), GeneralError> {
    let mut previous: Option<(HClass, HClass)> = None;
    for depth in [20usize, 25, 30, 35] {
        match convergent_split(torus, h, depth) {
            Some(pair) => {
                if let Some(prev) = previous {
                    if prev == pair {
                        return Ok(pair);
                    }
                }
                previous = Some(pair);
            }
            None => previous = None,
        }
    }
    Err(GeneralError::SplitUnstable(h))
}

fn convergent_split(torus: &GeneralSlitTorus, h: HClass, depth: usize) -> Option<(HClass, HClass)> {
    let [beta, alpha] = torus.slit_f64();
    let len = torus.slit_length();
    let cf = farey::continued_fraction_real(alpha / beta, depth, 1e-15);
    let conv = cf.convergents.last()?;
    let (mut q, mut p) = (conv.denom().to_i64()?, conv.numer().to_i64()?);
    if (q as f64 * beta + p as f64 * alpha) < 0.0 {
        (q, p) = (-q, -p);
    }
    // Vertical model of the approximating torus: slit length rho_k.
    let rho_k = len / ((q as f64).hypot(p as f64));
    if !(0.0..1.0).contains(&rho_k) {
        return None;
    }
    let g = num_integer::gcd(q.abs(), p.abs());
    let (q, p) = (q / g, p / g);
    let ext = num_integer::Integer::extended_gcd(&p, &q);
    let (mut v, mut u) = (ext.x, -ext.y);
    if p != 0 {
        let t = u.div_euclid(p.abs()) * if p > 0 { 1 } else { -1 };
        v -= t * q;
        u -= t * p;
    }
    if v * p - u * q != 1 {
        return None;
    }
    // back = M^-1 h with M = [[v, q], [u, p]].
    let back = HClass::new(p * h.m - q * h.n, -u * h.m + v * h.n);
    let (b0, k) = back.primitive_part();
    if k != 1 {
        return None;
    }
    let (am, an) = (b0.m.abs(), b0.n.abs());
    if am < 2 || an < 1 || (am as f64) * rho_k <= 1.0 {
        return None;
    }
    let ((b, a), (d, c)) = parent_classes(am, an);
    if (b as f64) * rho_k <= 1.0 || (d as f64) * rho_k <= 1.0 {
        return None;
    }
    let (sm, sn) = (if b0.m < 0 { -1 } else { 1 }, if b0.n < 0 { -1 } else { 1 });
    // Push forward through M.
    let fwd = |x: i64, y: i64| HClass::new(v * x + q * y, u * x + p * y);
    let z1 = fwd(sm * b, sn * a);
    let z2 = fwd(sm * d, sn * c);
    Some((z1.min(z2), z1.max(z2)))
}

/// Torus description used by the command-line interface and file formats.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TorusSpec {
    /// Square torus, vertical slit of length `rho` ("p/q" or decimal).
    Vertical { rho: String },
    /// Sheared torus `M X`: row-major matrix entries, each "p/q" or decimal.
    Sheared { matrix: [String; 4], rho: String },
    /// Square torus with a general slit vector; components parse exactly
    /// when rational ("3/10", "0.3") and as doubles otherwise.
    GeneralSlit { slit_vector: [String; 2] },
}

/// A parsed torus specification.
#[derive(Debug, Clone)]
pub enum BuiltTorus {
    Vertical(VerticalSlitTorus),
    Sheared { map: LinearMap, rho: Rational },
    General(GeneralSlitTorus),
}

impl TorusSpec {
    pub fn build(&self) -> Result<BuiltTorus, GeneralError> {
        match self {
            TorusSpec::Vertical { rho } => {
                let rho = farey::parse_exact(rho)
                    .map_err(|e| GeneralError::InvalidTorus(e.to_string()))?;
                VerticalSlitTorus::new(rho)
                    .map(BuiltTorus::Vertical)
                    .map_err(|e| GeneralError::InvalidTorus(e.to_string()))
            }
            TorusSpec::Sheared { matrix, rho } => {
                let rho = farey::parse_exact(rho)
                    .map_err(|e| GeneralError::InvalidTorus(e.to_string()))?;
                let mut entries = Vec::with_capacity(4);
                for e in matrix {
                    entries.push(
                        farey::parse_exact(e)
                            .map_err(|e| GeneralError::InvalidTorus(e.to_string()))?,
                    );
                }
                let map = LinearMap::new([
                    entries[0].clone(),
                    entries[1].clone(),
                    entries[2].clone(),
                    entries[3].clone(),
                ])?;
                VerticalSlitTorus::new(rho.clone())
                    .map_err(|e| GeneralError::InvalidTorus(e.to_string()))?;
                Ok(BuiltTorus::Sheared { map, rho })
            }
            TorusSpec::GeneralSlit { slit_vector } => {
                let exact: Option<(Rational, Rational)> = match (
                    farey::parse_exact(&slit_vector[0]),
                    farey::parse_exact(&slit_vector[1]),
                ) {
                    (Ok(b), Ok(a)) => Some((b, a)),
                    _ => None,
                };
                let torus = match exact {
                    Some((b, a)) => GeneralSlitTorus::exact(b, a)?,
                    None => {
                        let b: f64 = slit_vector[0].parse().map_err(|_| {
                            GeneralError::InvalidTorus(format!(
                                "cannot parse slit component {:?}",
                                slit_vector[0]
                            ))
                        })?;
                        let a: f64 = slit_vector[1].parse().map_err(|_| {
                            GeneralError::InvalidTorus(format!(
                                "cannot parse slit component {:?}",
                                slit_vector[1]
                            ))
                        })?;
                        GeneralSlitTorus::real(b, a)?
                    }
                };
                Ok(BuiltTorus::General(torus))
            }
        }
    }
}
