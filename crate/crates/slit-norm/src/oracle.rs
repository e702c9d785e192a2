//! Brute-force ground truth: shortest any-angle paths in the plane minus the
//! lattice-periodic family of open slit segments.
//!
//! The oracle builds a visibility graph over slit endpoints and runs an A*
//! search with an admissible Euclidean heuristic. Nodes and edges are pruned
//! with a length bound that is certified after the fact: a pruned node or
//! edge only matters if it could carry a path shorter than the bound, so a
//! found path at most the bound proves the prune was harmless; otherwise the
//! bound is relaxed and the search repeats.
//!
//! Clearance is decided exactly in integer arithmetic whenever the slit data
//! is rational, and in doubles with an absolute tolerance of 1e-12 otherwise.
//! Paths may touch slit endpoints and may run along a slit side between its
//! two endpoints (the closed-complement metric); they may never cross an
//! open slit interior.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::farey::Rational;
use crate::scalar::Float;
use crate::torus::HClass;

const REAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("invalid scene: {0}")]
    InvalidScene(String),
    #[error("the zero class has no shortest path")]
    ZeroClass,
    #[error("target unreachable; the search window is inconsistent")]
    TargetUnreachable,
    #[error("search window too small even after doubling")]
    WindowTooSmall,
}

/// A shortest path found by the oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathResult<F> {
    pub length: F,
    pub polyline: Vec<[F; 2]>,
    pub nodes_expanded: usize,
}

#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
enum Geometry {
    /// Vertical slits of rational length on the unit lattice. Clearance uses
    /// exact fractional-part comparisons and covers every slit, not just the
    /// windowed ones.
    Vertical { rho: Rational },
    /// A rational slit vector on a rational lattice basis; coordinates are
    /// scaled to integers so predicates are exact.
    Exact {
        slit: [Rational; 2],
        lattice: [[Rational; 2]; 2],
    },
    /// An irrational slit vector on the unit lattice; doubles with tolerance.
    Real { slit: [f64; 2] },
}

/// The plane minus the lattice translates of one open slit segment.
#[derive(Debug, Clone)]
pub struct CoverScene {
    geometry: Geometry,
    padding: i64,
}

impl CoverScene {
    /// Unit lattice, vertical slit of length `rho`.
    pub fn vertical(rho: Rational) -> Result<Self, OracleError> {
        if rho <= Rational::zero() || rho >= Rational::one() {
            return Err(OracleError::InvalidScene(format!(
                "vertical slit length must be in (0,1), got {rho}"
            )));
        }
        Ok(CoverScene { geometry: Geometry::Vertical { rho }, padding: 1 })
    }

    /// Unit lattice, exact slit vector `(beta, alpha)`.
    pub fn exact_slit(beta: Rational, alpha: Rational) -> Result<Self, OracleError> {
        let scene = CoverScene {
            geometry: Geometry::Exact {
                slit: [beta, alpha],
                lattice: [
                    [Rational::one(), Rational::zero()],
                    [Rational::zero(), Rational::one()],
                ],
            },
            padding: 1,
        };
        scene.validate()?;
        Ok(scene)
    }

    /// Irrational slit vector `(beta, alpha)` on the unit lattice.
    pub fn real_slit(beta: f64, alpha: f64) -> Result<Self, OracleError> {
        let scene = CoverScene { geometry: Geometry::Real { slit: [beta, alpha] }, padding: 1 };
        scene.validate()?;
        Ok(scene)
    }

    /// Applies a linear map with the given column vectors to the whole
    /// scene: the cover of a sheared torus `MX` has lattice `M Z^2` and
    /// slit `M (0, rho)`.
    pub fn with_lattice(self, columns: [[Rational; 2]; 2]) -> Result<Self, OracleError> {
        let apply = |v: [&Rational; 2]| -> [Rational; 2] {
            [
                &(&columns[0][0] * v[0]) + &(&columns[1][0] * v[1]),
                &(&columns[0][1] * v[0]) + &(&columns[1][1] * v[1]),
            ]
        };
        let geometry = match self.geometry {
            Geometry::Vertical { rho } => Geometry::Exact {
                slit: apply([&Rational::zero(), &rho]),
                lattice: columns,
            },
            Geometry::Exact { slit, lattice } => Geometry::Exact {
                slit: apply([&slit[0], &slit[1]]),
                lattice: [
                    apply([&lattice[0][0], &lattice[0][1]]),
                    apply([&lattice[1][0], &lattice[1][1]]),
                ],
            },
            Geometry::Real { .. } => {
                return Err(OracleError::InvalidScene(
                    "lattice shear is only supported for rational slit data".into(),
                ))
            }
        };
        let scene = CoverScene { geometry, padding: self.padding };
        scene.validate()?;
        Ok(scene)
    }

    /// Overrides the one-cell window padding (used by the monotone-window check).
    pub fn with_padding(self, padding: i64) -> Self {
        CoverScene { padding: padding.max(1), ..self }
    }

    fn validate(&self) -> Result<(), OracleError> {
        match &self.geometry {
            Geometry::Vertical { .. } => Ok(()),
            Geometry::Exact { slit, lattice } => {
                let det = &(&lattice[0][0] * &lattice[1][1]) - &(&lattice[0][1] * &lattice[1][0]);
                if det.is_zero() {
                    return Err(OracleError::InvalidScene("lattice basis is singular".into()));
                }
                let [b, a] = slit;
                if b.is_zero() && a.is_zero() {
                    return Err(OracleError::InvalidScene("slit vector is zero".into()));
                }
                self.check_disjoint(b.to_f64(), a.to_f64())
            }
            Geometry::Real { slit } => {
                let len = slit[0].hypot(slit[1]);
                if len.is_nan() || len <= 0.0 {
                    return Err(OracleError::InvalidScene("slit vector is zero".into()));
                }
                self.check_disjoint(slit[0], slit[1])
            }
        }
    }

    /// Distinct slits must be disjoint: an overlap needs a nonzero lattice
    /// vector parallel to the slit and shorter than it.
    fn check_disjoint(&self, beta: f64, alpha: f64) -> Result<(), OracleError> {
        let len = beta.hypot(alpha);
        let (cols, det) = match &self.geometry {
            Geometry::Exact { lattice, .. } => {
                let c = [
                    [lattice[0][0].to_f64(), lattice[0][1].to_f64()],
                    [lattice[1][0].to_f64(), lattice[1][1].to_f64()],
                ];
                (c, (c[0][0] * c[1][1] - c[0][1] * c[1][0]).abs())
            }
            _ => ([[1.0, 0.0], [0.0, 1.0]], 1.0),
        };
        let bound = (len / det.min(1.0)).ceil() as i64 + 1;
        for i in -bound..=bound {
            for j in -bound..=bound {
                if i == 0 && j == 0 {
                    continue;
                }
                let wx = i as f64 * cols[0][0] + j as f64 * cols[1][0];
                let wy = i as f64 * cols[0][1] + j as f64 * cols[1][1];
                let cross = wx * alpha - wy * beta;
                if cross.abs() <= REAL_TOL && wx.hypot(wy) < len - REAL_TOL {
                    return Err(OracleError::InvalidScene(
                        "slits at distinct lattice points overlap".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Euclidean length of one slit.
    pub fn slit_length(&self) -> f64 {
        match &self.geometry {
            Geometry::Vertical { rho } => rho.to_f64(),
            Geometry::Exact { slit, .. } => slit[0].to_f64().hypot(slit[1].to_f64()),
            Geometry::Real { slit } => slit[0].hypot(slit[1]),
        }
    }

    /// The physical coordinates of the lattice point `(m, n)` (the search
    /// target for a class is `lattice * (m, n)`).
    pub fn class_point(&self, h: HClass) -> [f64; 2] {
        match &self.geometry {
            Geometry::Vertical { .. } | Geometry::Real { .. } => [h.m as f64, h.n as f64],
            Geometry::Exact { lattice, .. } => {
                let x = h.m as f64 * lattice[0][0].to_f64() + h.n as f64 * lattice[1][0].to_f64();
                let y = h.m as f64 * lattice[0][1].to_f64() + h.n as f64 * lattice[1][1].to_f64();
                [x, y]
            }
        }
    }

    /// Whether the closed segment between two exact rational points meets no
    /// open slit interior (touching endpoints is allowed). For scenes with
    /// irrational slit data the test falls back to doubles.
    pub fn segment_clear(&self, p0: [&Rational; 2], p1: [&Rational; 2]) -> bool {
        match &self.geometry {
            Geometry::Vertical { rho } => {
                let scale = common_denominator(&[p0[0], p0[1], p1[0], p1[1], rho]);
                let a = scale_point(p0, &scale);
                let b = scale_point(p1, &scale);
                let rho_s = scale_rational(rho, &scale);
                let sc = scale.to_i128().expect("scale fits i128");
                vertical_clear(a, b, rho_s, sc)
            }
            Geometry::Exact { slit, lattice } => {
                let scale =
                    common_denominator(&[p0[0], p0[1], p1[0], p1[1], &slit[0], &slit[1],
                        &lattice[0][0], &lattice[0][1], &lattice[1][0], &lattice[1][1]]);
                let ctx = ExactContext::new(slit, lattice, &scale);
                ctx.clear(scale_point(p0, &scale), scale_point(p1, &scale))
            }
            Geometry::Real { slit } => {
                let a = [p0[0].to_f64(), p0[1].to_f64()];
                let b = [p1[0].to_f64(), p1[1].to_f64()];
                real_clear(a, b, *slit)
            }
        }
    }

    /// Clearance of the straight segment from the origin to the class point
    /// (the visibility probe).
    pub fn straight_segment_clear(&self, h: HClass) -> bool {
        let zero = Rational::zero();
        match &self.geometry {
            Geometry::Exact { lattice, .. } => {
                let x = &(&Rational::integer(h.m) * &lattice[0][0])
                    + &(&Rational::integer(h.n) * &lattice[1][0]);
                let y = &(&Rational::integer(h.m) * &lattice[0][1])
                    + &(&Rational::integer(h.n) * &lattice[1][1]);
                self.segment_clear([&zero, &zero], [&x, &y])
            }
            _ => {
                let m = Rational::integer(h.m);
                let n = Rational::integer(h.n);
                self.segment_clear([&zero, &zero], [&m, &n])
            }
        }
    }

    /// Shortest path from the origin to the point of `target` in the cover.
    pub fn shortest_path<F: Float>(&self, target: HClass) -> Result<PathResult<F>, OracleError> {
        if target.is_zero() {
            return Err(OracleError::ZeroClass);
        }
        let mut pad = self.padding;
        let direct = {
            let p = self.class_point(target);
            p[0].hypot(p[1])
        };
        let mut slack = 2.0f64.max(2.0 * self.slit_length());
        for _attempt in 0..12 {
            let bound = direct + slack;
            let graph = self.build_graph(target, pad, bound);
            match graph.astar(bound) {
                Some(found) => {
                    if found.length > bound - 1e-9 {
                        // The prune may have been binding; relax and retry.
                        slack = (found.length - direct) * 1.05 + 0.5;
                        continue;
                    }
                    if found.touches_window_boundary {
                        pad *= 2;
                        continue;
                    }
                    return Ok(PathResult {
                        length: F::from_f64_lossy(found.length),
                        polyline: found
                            .polyline
                            .into_iter()
                            .map(|p| [F::from_f64_lossy(p[0]), F::from_f64_lossy(p[1])])
                            .collect(),
                        nodes_expanded: found.nodes_expanded,
                    });
                }
                None => {
                    slack *= 2.0;
                    pad *= 2;
                }
            }
        }
        Err(OracleError::WindowTooSmall)
    }

    /// The stable-norm observation: shortest-path length of the primitive
    /// part times the gcd factor.
    pub fn oracle_norm<F: Float>(&self, h: HClass) -> Result<F, OracleError> {
        if h.is_zero() {
            return Err(OracleError::ZeroClass);
        }
        let (h0, k) = h.primitive_part();
        let path = self.shortest_path::<F>(h0)?;
        Ok(F::from_f64_lossy(k as f64) * path.length)
    }

    /// Batch variant sharded across the current rayon pool; results keep the
    /// input order.
    pub fn batch_oracle_norms<F: Float>(&self, targets: &[HClass]) -> Vec<Result<F, OracleError>> {
        targets.par_iter().map(|h| self.oracle_norm::<F>(*h)).collect()
    }

    /// Materializes the visibility graph for debugging output.
    pub fn dump_graph(&self, target: HClass) -> Result<GraphDump, OracleError> {
        if target.is_zero() {
            return Err(OracleError::ZeroClass);
        }
        let direct = {
            let p = self.class_point(target);
            p[0].hypot(p[1])
        };
        let bound = direct + 2.0f64.max(2.0 * self.slit_length());
        let graph = self.build_graph(target, self.padding, bound);
        let mut edges = Vec::new();
        for u in 0..graph.nodes.len() {
            for v in (u + 1)..graph.nodes.len() {
                if graph.slide_partner(u) == Some(v) || graph.edge_clear(u, v) {
                    edges.push((u, v, graph.dist(u, v)));
                }
            }
        }
        Ok(GraphDump {
            nodes: graph.nodes.iter().map(|n| n.pos).collect(),
            edges,
            start: graph.start,
            target: graph.target,
        })
    }

    fn build_graph(&self, target: HClass, pad: i64, bound: f64) -> Graph<'_> {
        let (zx_lo, zx_hi) = (target.m.min(0) - pad, target.m.max(0) + pad);
        let (zy_lo, zy_hi) = (target.n.min(0) - pad, target.n.max(0) + pad);
        let target_pos = self.class_point(target);

        let mut nodes = Vec::new();
        let mut start = usize::MAX;
        let mut tgt = usize::MAX;
        for zx in zx_lo..=zx_hi {
            for zy in zy_lo..=zy_hi {
                for endpoint in 0..2u8 {
                    let node = self.make_node(zx, zy, endpoint);
                    let admit = node.pos[0].hypot(node.pos[1])
                        + (node.pos[0] - target_pos[0]).hypot(node.pos[1] - target_pos[1])
                        <= bound + 1e-9;
                    let is_start = zx == 0 && zy == 0 && endpoint == 0;
                    let is_target = zx == target.m && zy == target.n && endpoint == 0;
                    if admit || is_start || is_target {
                        if is_start {
                            start = nodes.len();
                        }
                        if is_target {
                            tgt = nodes.len();
                        }
                        nodes.push(node);
                    }
                }
            }
        }
        Graph {
            scene: self,
            nodes,
            start,
            target: tgt,
            window: (zx_lo, zx_hi, zy_lo, zy_hi),
        }
    }

    fn make_node(&self, zx: i64, zy: i64, endpoint: u8) -> Node {
        match &self.geometry {
            Geometry::Vertical { rho } => {
                let scale = rho.denom().to_i128().expect("denominator fits i128");
                let num = rho.numer().to_i128().expect("numerator fits i128");
                let ys = zy as i128 * scale + if endpoint == 1 { num } else { 0 };
                Node {
                    zx,
                    zy,
                    endpoint,
                    xs: zx as i128 * scale,
                    ys,
                    pos: [zx as f64, ys as f64 / scale as f64],
                }
            }
            Geometry::Exact { slit, lattice } => {
                let scale = common_denominator(&[
                    &slit[0], &slit[1],
                    &lattice[0][0], &lattice[0][1], &lattice[1][0], &lattice[1][1],
                ]);
                let sc = |r: &Rational| scale_rational(r, &scale);
                let e = endpoint as i128;
                let xs = zx as i128 * sc(&lattice[0][0]) + zy as i128 * sc(&lattice[1][0])
                    + e * sc(&slit[0]);
                let ys = zx as i128 * sc(&lattice[0][1]) + zy as i128 * sc(&lattice[1][1])
                    + e * sc(&slit[1]);
                let s = scale.to_i128().expect("scale fits i128") as f64;
                Node { zx, zy, endpoint, xs, ys, pos: [xs as f64 / s, ys as f64 / s] }
            }
            Geometry::Real { slit } => {
                let e = endpoint as f64;
                Node {
                    zx,
                    zy,
                    endpoint,
                    xs: 0,
                    ys: 0,
                    pos: [zx as f64 + e * slit[0], zy as f64 + e * slit[1]],
                }
            }
        }
    }

    fn node_segment_clear(&self, a: &Node, b: &Node) -> bool {
        match &self.geometry {
            Geometry::Vertical { rho } => {
                let scale = rho.denom().to_i128().expect("denominator fits i128");
                let num = rho.numer().to_i128().expect("numerator fits i128");
                vertical_clear([a.xs, a.ys], [b.xs, b.ys], num, scale)
            }
            Geometry::Exact { slit, lattice } => {
                let scale = common_denominator(&[
                    &slit[0], &slit[1],
                    &lattice[0][0], &lattice[0][1], &lattice[1][0], &lattice[1][1],
                ]);
                let ctx = ExactContext::new(slit, lattice, &scale);
                ctx.clear([a.xs, a.ys], [b.xs, b.ys])
            }
            Geometry::Real { slit } => real_clear(a.pos, b.pos, *slit),
        }
    }
}

/// Serializable description of a scene, for the CLI and for debugging dumps.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct SceneSpec {
    /// Components given as exact rationals ("2/5") or decimals ("0.3").
    pub slit_vector: [String; 2],
    /// Window padding in lattice cells.
    #[serde(default = "default_window")]
    pub window: i64,
}

fn default_window() -> i64 {
    1
}

impl SceneSpec {
    pub fn build(&self) -> Result<CoverScene, OracleError> {
        let parse = |s: &str| -> Result<Option<Rational>, OracleError> {
            if let Ok(r) = crate::farey::parse_exact(s) {
                return Ok(Some(r));
            }
            s.parse::<f64>().map_err(|_| {
                OracleError::InvalidScene(format!("cannot parse slit component {s:?}"))
            })?;
            Ok(None)
        };
        let scene = match (parse(&self.slit_vector[0])?, parse(&self.slit_vector[1])?) {
            (Some(beta), Some(alpha)) => {
                if beta.is_zero() {
                    CoverScene::vertical(alpha)?
                } else {
                    CoverScene::exact_slit(beta, alpha)?
                }
            }
            _ => {
                let beta: f64 = self.slit_vector[0].parse().expect("validated above");
                let alpha: f64 = self.slit_vector[1].parse().expect("validated above");
                CoverScene::real_slit(beta, alpha)?
            }
        };
        Ok(scene.with_padding(self.window))
    }
}

/// A materialized visibility graph (debug output).
#[derive(Debug, Clone, Serialize)]
pub struct GraphDump {
    pub nodes: Vec<[f64; 2]>,
    pub edges: Vec<(usize, usize, f64)>,
    pub start: usize,
    pub target: usize,
}

#[derive(Debug, Clone)]
struct Node {
    zx: i64,
    zy: i64,
    endpoint: u8,
    xs: i128,
    ys: i128,
    pos: [f64; 2],
}

struct Graph<'a> {
    scene: &'a CoverScene,
    nodes: Vec<Node>,
    start: usize,
    target: usize,
    window: (i64, i64, i64, i64),
}

struct Found {
    length: f64,
    polyline: Vec<[f64; 2]>,
    nodes_expanded: usize,
    touches_window_boundary: bool,
}

#[derive(PartialEq)]
struct QueueItem {
    f: f64,
    node: usize,
}

impl Eq for QueueItem {}

impl Ord for QueueItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on f.
        other.f.partial_cmp(&self.f).expect("finite costs")
    }
}

impl PartialOrd for QueueItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Graph<'_> {
    fn dist(&self, u: usize, v: usize) -> f64 {
        let (a, b) = (&self.nodes[u], &self.nodes[v]);
        (a.pos[0] - b.pos[0]).hypot(a.pos[1] - b.pos[1])
    }

    /// The other endpoint of the same slit, joined by a slide edge of
    /// weight equal to the slit length.
    fn slide_partner(&self, u: usize) -> Option<usize> {
        let n = &self.nodes[u];
        let want = 1 - n.endpoint;
        // Partner sits next to u in construction order when both admitted.
        let candidates = if n.endpoint == 0 { [u + 1, u.wrapping_sub(1)] } else { [u.wrapping_sub(1), u + 1] };
        for c in candidates {
            if let Some(p) = self.nodes.get(c) {
                if p.zx == n.zx && p.zy == n.zy && p.endpoint == want {
                    return Some(c);
                }
            }
        }
        None
    }

    fn edge_clear(&self, u: usize, v: usize) -> bool {
        self.scene.node_segment_clear(&self.nodes[u], &self.nodes[v])
    }

    fn astar(&self, bound: f64) -> Option<Found> {
        let n = self.nodes.len();
        if self.start >= n || self.target >= n {
            return None;
        }
        let tpos = self.nodes[self.target].pos;
        let h = |i: usize| {
            let p = self.nodes[i].pos;
            (p[0] - tpos[0]).hypot(p[1] - tpos[1])
        };
        let mut g = vec![f64::INFINITY; n];
        let mut parent = vec![usize::MAX; n];
        let mut closed = vec![false; n];
        let mut heap = BinaryHeap::new();
        g[self.start] = 0.0;
        heap.push(QueueItem { f: h(self.start), node: self.start });
        let mut expanded = 0usize;

        while let Some(QueueItem { node: u, .. }) = heap.pop() {
            if closed[u] {
                continue;
            }
            closed[u] = true;
            expanded += 1;
            if u == self.target {
                break;
            }
            let slide = self.slide_partner(u);
            for v in 0..n {
                if v == u || closed[v] {
                    continue;
                }
                let w = if slide == Some(v) {
                    self.scene.slit_length()
                } else {
                    let w = self.dist(u, v);
                    if g[u] + w + h(v) > bound + 1e-9 {
                        continue;
                    }
                    if !self.edge_clear(u, v) {
                        continue;
                    }
                    w
                };
                let cand = g[u] + w;
                if cand < g[v] - 1e-15 {
                    g[v] = cand;
                    parent[v] = u;
                    heap.push(QueueItem { f: cand + h(v), node: v });
                }
            }
        }

        if !g[self.target].is_finite() {
            return None;
        }
        let mut path_nodes = vec![self.target];
        while *path_nodes.last().expect("nonempty") != self.start {
            path_nodes.push(parent[*path_nodes.last().expect("nonempty")]);
        }
        path_nodes.reverse();
        let (zx_lo, zx_hi, zy_lo, zy_hi) = self.window;
        let touches = path_nodes.iter().any(|&i| {
            let nd = &self.nodes[i];
            nd.zx == zx_lo || nd.zx == zx_hi || nd.zy == zy_lo || nd.zy == zy_hi
        });
        Some(Found {
            length: g[self.target],
            polyline: path_nodes.iter().map(|&i| self.nodes[i].pos).collect(),
            nodes_expanded: expanded,
            touches_window_boundary: touches,
        })
    }
}

/// Least common multiple of the denominators, as a positive BigInt.
fn common_denominator(values: &[&Rational]) -> num_bigint::BigInt {
    let mut acc = num_bigint::BigInt::from(1);
    for v in values {
        acc = num_integer::lcm(acc, v.denom().clone());
    }
    acc
}

fn scale_rational(r: &Rational, scale: &num_bigint::BigInt) -> i128 {
    let v = r.numer() * (scale / r.denom());
    v.to_i128().expect("scaled coordinate fits i128")
}

fn scale_point(p: [&Rational; 2], scale: &num_bigint::BigInt) -> [i128; 2] {
    [scale_rational(p[0], scale), scale_rational(p[1], scale)]
}

/// Exact clearance against the vertical slit family. Coordinates are scaled
/// by `scale`; the slits occupy, on every vertical line at a multiple of
/// `scale`, the open heights `(q*scale, q*scale + rho_num)` for all integers
/// q. Covers every slit in the plane, with no windowing.
fn vertical_clear(p0: [i128; 2], p1: [i128; 2], rho_num: i128, scale: i128) -> bool {
    let ([x0, y0], [x1, y1]) = if p0[0] <= p1[0] { (p0, p1) } else { (p1, p0) };
    if x0 == x1 {
        if x0.rem_euclid(scale) != 0 {
            return true;
        }
        let (lo, hi) = (y0.min(y1), y0.max(y1));
        // Blocked iff the open interval (lo, hi) meets some open (qS, qS+P).
        let mut q = lo.div_euclid(scale);
        while q * scale < hi {
            let (slo, shi) = (q * scale, q * scale + rho_num);
            if lo < shi && hi > slo {
                return false;
            }
            q += 1;
        }
        return true;
    }
    let dx = x1 - x0;
    let dy = y1 - y0;
    // Segment endpoints may themselves sit on a slit line.
    for (x, y) in [(x0, y0), (x1, y1)] {
        if x.rem_euclid(scale) == 0 {
            let r = y.rem_euclid(scale);
            if r > 0 && r < rho_num {
                return false;
            }
        }
    }
    // Vertical lines at multiples of `scale` strictly between x0 and x1.
    let mut k = x0.div_euclid(scale) + 1;
    while k * scale <= x1 {
        let kx = k * scale;
        if kx > x0 && kx < x1 {
            // Height at the crossing, times dx*scale: y = y0 + (kx-x0)*dy/dx.
            let a = y0 * dx + (kx - x0) * dy;
            let modulus = scale * dx;
            let r = a.rem_euclid(modulus);
            if r > 0 && r < rho_num * dx {
                return false;
            }
        }
        k += 1;
    }
    true
}

fn orient(a: [i128; 2], b: [i128; 2], c: [i128; 2]) -> i128 {
    let v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    v.signum()
}

fn strictly_between_collinear(a: [i128; 2], b: [i128; 2], p: [i128; 2]) -> bool {
    // Assumes a, b, p collinear.
    let lo0 = a[0].min(b[0]);
    let hi0 = a[0].max(b[0]);
    let lo1 = a[1].min(b[1]);
    let hi1 = a[1].max(b[1]);
    if a[0] != b[0] {
        p[0] > lo0 && p[0] < hi0
    } else {
        p[1] > lo1 && p[1] < hi1
    }
}

/// Whether the closed segment [a, b] meets the open segment (c, d).
fn segment_meets_open(a: [i128; 2], b: [i128; 2], c: [i128; 2], d: [i128; 2]) -> bool {
    let o1 = orient(c, d, a);
    let o2 = orient(c, d, b);
    let o3 = orient(a, b, c);
    let o4 = orient(a, b, d);
    if o1 == 0 && o2 == 0 {
        // Collinear: blocked iff the overlap of [a,b] with (c,d) has interior.
        let use_x = c[0] != d[0];
        let (alo, ahi, clo, chi) = if use_x {
            (a[0].min(b[0]), a[0].max(b[0]), c[0].min(d[0]), c[0].max(d[0]))
        } else {
            (a[1].min(b[1]), a[1].max(b[1]), c[1].min(d[1]), c[1].max(d[1]))
        };
        return alo.max(clo) < ahi.min(chi);
    }
    if o1 == 0 && strictly_between_collinear(c, d, a) {
        return true;
    }
    if o2 == 0 && strictly_between_collinear(c, d, b) {
        return true;
    }
    // Proper crossing with the intersection interior to the slit: the slit
    // endpoints must lie strictly on opposite sides of [a,b], and a, b
    // strictly on opposite sides of the slit line.
    o1 * o2 < 0 && o3 * o4 < 0
}

struct ExactContext {
    slit: [i128; 2],
    cols: [[i128; 2]; 2],
    inv_rows: [[f64; 2]; 2],
    scale: f64,
}

impl ExactContext {
    fn new(slit: &[Rational; 2], lattice: &[[Rational; 2]; 2], scale: &num_bigint::BigInt) -> Self {
        let sc = |r: &Rational| scale_rational(r, scale);
        let cols = [
            [sc(&lattice[0][0]), sc(&lattice[0][1])],
            [sc(&lattice[1][0]), sc(&lattice[1][1])],
        ];
        let s = scale.to_i128().expect("scale fits i128") as f64;
        let a = cols[0][0] as f64 / s;
        let b = cols[1][0] as f64 / s;
        let c = cols[0][1] as f64 / s;
        let d = cols[1][1] as f64 / s;
        let det = a * d - b * c;
        ExactContext {
            slit: [sc(&slit[0]), sc(&slit[1])],
            cols,
            inv_rows: [[d / det, -b / det], [-c / det, a / det]],
            scale: s,
        }
    }

    fn anchor(&self, zx: i64, zy: i64) -> [i128; 2] {
        [
            zx as i128 * self.cols[0][0] + zy as i128 * self.cols[1][0],
            zx as i128 * self.cols[0][1] + zy as i128 * self.cols[1][1],
        ]
    }

    fn clear(&self, p0: [i128; 2], p1: [i128; 2]) -> bool {
        // Lattice cells whose slits could reach the segment's bounding box.
        let to_lattice = |x: f64, y: f64| {
            [
                self.inv_rows[0][0] * x + self.inv_rows[0][1] * y,
                self.inv_rows[1][0] * x + self.inv_rows[1][1] * y,
            ]
        };
        let xs = [p0[0] as f64 / self.scale, p1[0] as f64 / self.scale];
        let ys = [p0[1] as f64 / self.scale, p1[1] as f64 / self.scale];
        let corners = [
            to_lattice(xs[0], ys[0]),
            to_lattice(xs[0], ys[1]),
            to_lattice(xs[1], ys[0]),
            to_lattice(xs[1], ys[1]),
        ];
        let slit_reach = 2.0 + (self.slit[0].abs().max(self.slit[1].abs()) as f64) / self.scale;
        let lo = |i: usize| {
            corners.iter().map(|c| c[i]).fold(f64::INFINITY, f64::min) - slit_reach
        };
        let hi = |i: usize| {
            corners.iter().map(|c| c[i]).fold(f64::NEG_INFINITY, f64::max) + slit_reach
        };
        for zx in (lo(0).floor() as i64)..=(hi(0).ceil() as i64) {
            for zy in (lo(1).floor() as i64)..=(hi(1).ceil() as i64) {
                let c = self.anchor(zx, zy);
                let d = [c[0] + self.slit[0], c[1] + self.slit[1]];
                if segment_meets_open(p0, p1, c, d) {
                    return false;
                }
            }
        }
        true
    }
}

fn orient_f64(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> i32 {
    let v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    if v > REAL_TOL {
        1
    } else if v < -REAL_TOL {
        -1
    } else {
        0
    }
}

fn strictly_between_f64(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> bool {
    if (a[0] - b[0]).abs() > (a[1] - b[1]).abs() {
        p[0] > a[0].min(b[0]) + REAL_TOL && p[0] < a[0].max(b[0]) - REAL_TOL
    } else {
        p[1] > a[1].min(b[1]) + REAL_TOL && p[1] < a[1].max(b[1]) - REAL_TOL
    }
}

fn segment_meets_open_f64(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let o1 = orient_f64(c, d, a);
    let o2 = orient_f64(c, d, b);
    let o3 = orient_f64(a, b, c);
    let o4 = orient_f64(a, b, d);
    if o1 == 0 && o2 == 0 {
        let use_x = (c[0] - d[0]).abs() > (c[1] - d[1]).abs();
        let (alo, ahi, clo, chi) = if use_x {
            (a[0].min(b[0]), a[0].max(b[0]), c[0].min(d[0]), c[0].max(d[0]))
        } else {
            (a[1].min(b[1]), a[1].max(b[1]), c[1].min(d[1]), c[1].max(d[1]))
        };
        return alo.max(clo) < ahi.min(chi) - REAL_TOL;
    }
    if o1 == 0 && strictly_between_f64(c, d, a) {
        return true;
    }
    if o2 == 0 && strictly_between_f64(c, d, b) {
        return true;
    }
    o1 * o2 < 0 && o3 * o4 < 0
}

fn real_clear(a: [f64; 2], b: [f64; 2], slit: [f64; 2]) -> bool {
    let reach = 2.0 + slit[0].abs().max(slit[1].abs());
    let (xlo, xhi) = (a[0].min(b[0]) - reach, a[0].max(b[0]) + reach);
    let (ylo, yhi) = (a[1].min(b[1]) - reach, a[1].max(b[1]) + reach);
    for zx in (xlo.floor() as i64)..=(xhi.ceil() as i64) {
        for zy in (ylo.floor() as i64)..=(yhi.ceil() as i64) {
            let c = [zx as f64, zy as f64];
            let d = [c[0] + slit[0], c[1] + slit[1]];
            if segment_meets_open_f64(a, b, c, d) {
                return false;
            }
        }
    }
    true
}
