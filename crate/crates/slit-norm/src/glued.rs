//! Half-translation surfaces glued from slit tori along a flat cylinder:
//! block-additive stable norm, vertex sets, and flat faces.
//!
//! When the cylinder is wider than the slits, a crossing costs more than it
//! can save, so minimizers stay inside their component tori and the norm is
//! the sum of the per-block component norms.

use std::fmt;
use std::str::FromStr;

use crate::ball::{enumerate_vertices, VertexList};
use crate::scalar::Float;
use crate::torus::{HClass, NormCertificate, VerticalSlitTorus};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GluedError {
    #[error("cylinder width {width} must exceed every slit length (max {max_rho})")]
    CylinderTooShort { width: f64, max_rho: f64 },
    #[error("need at least two component tori")]
    TooFewComponents,
    #[error("the zero class has no direction")]
    ZeroClass,
    #[error("class has {got} blocks, surface has {expected} components")]
    WrongBlockCount { expected: usize, got: usize },
    #[error("classes {0} and {1} are not consecutive vertices at this bound")]
    NotAdjacent(HClass, HClass),
    #[error("class {0} is not a vertex within the given norm bound")]
    VertexNotInList(HClass),
    #[error("weights must be nonnegative and sum to 1, got {0:?}")]
    InvalidWeights(Vec<f64>),
    #[error(transparent)]
    Norm(#[from] crate::torus::NormError),
}

/// An integral homology class on the glued surface, one `(m_i, n_i)` block
/// per component torus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GluedClass {
    pub blocks: Vec<HClass>,
}

impl GluedClass {
    pub fn new(blocks: Vec<HClass>) -> Self {
        GluedClass { blocks }
    }

    /// Embedding of a component class: zero everywhere except block `i`.
    pub fn embed(components: usize, i: usize, h: HClass) -> Self {
        let mut blocks = vec![HClass::new(0, 0); components];
        blocks[i] = h;
        GluedClass { blocks }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.is_zero())
    }

    pub fn nonzero_blocks(&self) -> impl Iterator<Item = (usize, HClass)> + '_ {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.is_zero())
            .map(|(i, b)| (i, *b))
    }
}

impl fmt::Display for GluedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for GluedClass {
    type Err = crate::torus::NormError;

    /// Parses semicolon-joined blocks: "m1,n1;m2,n2;...".
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let blocks = s
            .split(';')
            .map(|b| b.trim().parse())
            .collect::<Result<Vec<HClass>, _>>()?;
        Ok(GluedClass { blocks })
    }
}

/// `n >= 2` slit tori glued along a flat cylinder of width `w`.
#[derive(Debug, Clone)]
pub struct GluedSurface {
    components: Vec<VerticalSlitTorus>,
    width: f64,
}

impl GluedSurface {
    /// Rejects `w <= max rho`: additivity is proven only for wide
    /// cylinders, and the crossing correction `2(w - rho)` changes sign at
    /// the threshold.
    pub fn new(components: Vec<VerticalSlitTorus>, width: f64) -> Result<Self, GluedError> {
        if components.len() < 2 {
            return Err(GluedError::TooFewComponents);
        }
        let max_rho = components
            .iter()
            .map(|t| t.rho().to_f64())
            .fold(0.0f64, f64::max);
        if width.is_nan() || width <= max_rho {
            return Err(GluedError::CylinderTooShort { width, max_rho });
        }
        Ok(GluedSurface { components, width })
    }

    /// `n` identical copies of one torus.
    pub fn uniform(torus: VerticalSlitTorus, copies: usize, width: f64) -> Result<Self, GluedError> {
        Self::new(vec![torus; copies], width)
    }

    pub fn components(&self) -> &[VerticalSlitTorus] {
        &self.components
    }

    pub fn width(&self) -> f64 {
        self.width
    }
}

/// Block-additive norm with per-block certificates (None for zero blocks).
#[derive(Debug, Clone, PartialEq)]
pub struct GluedNorm<F> {
    pub value: F,
    pub blocks: Vec<Option<NormCertificate<F>>>,
}

pub fn glued_norm<F: Float>(
    surface: &GluedSurface,
    class: &GluedClass,
) -> Result<GluedNorm<F>, GluedError> {
    if class.blocks.len() != surface.components.len() {
        return Err(GluedError::WrongBlockCount {
            expected: surface.components.len(),
            got: class.blocks.len(),
        });
    }
    if class.is_zero() {
        return Err(GluedError::ZeroClass);
    }
    let mut value = F::zero();
    let mut blocks = Vec::with_capacity(class.blocks.len());
    for (torus, block) in surface.components.iter().zip(&class.blocks) {
        if block.is_zero() {
            blocks.push(None);
        } else {
            let cert = torus.stable_norm::<F>(*block)?;
            value = value + cert.value;
            blocks.push(Some(cert));
        }
    }
    Ok(GluedNorm { value, blocks })
}

/// A vertex direction of the glued ball: a single nonzero block holding a
/// vertex of that component's ball.
#[derive(Debug, Clone, PartialEq)]
pub struct GluedVertex<F> {
    pub component: usize,
    pub block: HClass,
    pub norm: F,
    pub class: GluedClass,
}

/// The vertex directions of the glued unit ball up to `max_norm`: exactly
/// the per-component vertex embeddings (every class with two or more
/// nonzero blocks lies in a flat).
pub fn glued_vertices<F: Float>(surface: &GluedSurface, max_norm: F) -> Vec<GluedVertex<F>> {
    let n = surface.components.len();
    let mut out = Vec::new();
    for (i, torus) in surface.components.iter().enumerate() {
        for e in enumerate_vertices::<F>(torus, max_norm).entries {
            out.push(GluedVertex {
                component: i,
                block: e.class,
                norm: e.norm,
                class: GluedClass::embed(n, i, e.class),
            });
        }
    }
    out
}

/// Supporting functional of the segment through two unit points: the linear
/// form equal to 1 at both. Errs on collinear-with-origin input.
fn edge_functional(p: [f64; 2], q: [f64; 2]) -> Option<[f64; 2]> {
    let det = p[0] * q[1] - p[1] * q[0];
    if det.abs() < 1e-14 {
        return None;
    }
    Some([(q[1] - p[1]) / det, (p[0] - q[0]) / det])
}

fn unit_point<F: Float>(e: &crate::ball::VertexEntry<F>) -> [f64; 2] {
    let v = e.norm.as_f64();
    [e.class.m as f64 / v, e.class.n as f64 / v]
}

/// Certifies a three-dimensional face of the glued unit ball (as
/// approximated by the vertex set up to `max_norm`) through the four unit
/// points of `v1, v2` (component 1) and `w1, w2` (component 2): the pairs
/// must be slope-consecutive vertices at this bound, and the glued norm of
/// the convex combination with weights `lambda` must be 1 within 1e-9.
pub fn flat_face_check<F: Float>(
    surface: &GluedSurface,
    max_norm: F,
    v1: HClass,
    v2: HClass,
    w1: HClass,
    w2: HClass,
    lambda: [f64; 4],
) -> Result<bool, GluedError> {
    if surface.components.len() < 2 {
        return Err(GluedError::TooFewComponents);
    }
    if lambda.iter().any(|l| *l < -1e-12) || (lambda.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(GluedError::InvalidWeights(lambda.to_vec()));
    }

    let mut norms = [0.0f64; 2];
    for (i, (a, b), (la, lb)) in [
        (0usize, (v1, v2), (lambda[0], lambda[1])),
        (1, (w1, w2), (lambda[2], lambda[3])),
    ] {
        let list: VertexList<F> = enumerate_vertices(&surface.components[i], max_norm);
        let ia = list.position_of(a).ok_or(GluedError::VertexNotInList(a))?;
        let ib = list.position_of(b).ok_or(GluedError::VertexNotInList(b))?;
        let (lo, hi) = (ia.min(ib), ia.max(ib));
        if hi - lo != 1 {
            return Err(GluedError::NotAdjacent(a, b));
        }
        let pa = unit_point(&list.entries[ia]);
        let pb = unit_point(&list.entries[ib]);
        let Some(functional) = edge_functional(pa, pb) else {
            return Err(GluedError::NotAdjacent(a, b));
        };
        // The segment [pa, pb] is an edge of the inner polytope: every
        // other vertex lies weakly inside the functional's halfplane.
        for e in &list.entries {
            let p = unit_point(e);
            if functional[0] * p[0] + functional[1] * p[1] > 1.0 + 1e-9 {
                return Ok(false);
            }
        }
        let x = [
            la * pa[0] + lb * pb[0],
            la * pa[1] + lb * pb[1],
        ];
        // On the edge, the component norm is the functional's value.
        norms[i] = functional[0] * x[0] + functional[1] * x[1];
    }
    Ok((norms[0] + norms[1] - 1.0).abs() <= 1e-9)
}
