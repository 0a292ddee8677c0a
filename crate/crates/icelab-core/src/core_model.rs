//! Vertex weights, gauge transformations, the anisotropy parameter, and the
//! configuration / boundary-condition data model shared by all other modules.
//!
//! Conventions. A vertex carries four incident edge occupancies
//! `(bottom, left; top, right)`, conserved as `bottom + left = top + right`
//! (up-right paths enter from below/left and leave above/right). Columns are
//! indexed `1..=width` left to right and rows `1..=height` bottom to top.
//! With spectral parameters, the weight of the six types at parameter `u` is
//!
//! ```text
//! a1 = w(0,0;0,0) = 1              a2 = w(1,1;1,1) = 1
//! b1 = w(1,0;1,0) = (1-u)/(1-tu)   b2 = w(0,1;0,1) = t(1-u)/(1-tu)
//! c1 = w(1,0;0,1) = u(1-t)/(1-tu)  c2 = w(0,1;1,0) = (1-t)/(1-tu)
//! ```
//!
//! so that `b1 + c1 = b2 + c2 = 1` identically (stochasticity).

use crate::error::{Error, Result};
use num_complex::Complex64;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// The six local vertex types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexType {
    A1,
    A2,
    B1,
    B2,
    C1,
    C2,
}

impl VertexType {
    pub const ALL: [VertexType; 6] = [
        VertexType::A1,
        VertexType::A2,
        VertexType::B1,
        VertexType::B2,
        VertexType::C1,
        VertexType::C2,
    ];

    /// Edge occupancies `(bottom, left, top, right)`.
    pub fn edges(self) -> (u8, u8, u8, u8) {
        match self {
            VertexType::A1 => (0, 0, 0, 0),
            VertexType::A2 => (1, 1, 1, 1),
            VertexType::B1 => (1, 0, 1, 0),
            VertexType::B2 => (0, 1, 0, 1),
            VertexType::C1 => (1, 0, 0, 1),
            VertexType::C2 => (0, 1, 1, 0),
        }
    }

    /// Type of the occupancy quadruple, if it is one of the six conserved ones.
    pub fn from_edges(bottom: u8, left: u8, top: u8, right: u8) -> Option<VertexType> {
        match (bottom, left, top, right) {
            (0, 0, 0, 0) => Some(VertexType::A1),
            (1, 1, 1, 1) => Some(VertexType::A2),
            (1, 0, 1, 0) => Some(VertexType::B1),
            (0, 1, 0, 1) => Some(VertexType::B2),
            (1, 0, 0, 1) => Some(VertexType::C1),
            (0, 1, 1, 0) => Some(VertexType::C2),
            _ => None,
        }
    }

    pub fn glyph(self) -> char {
        match self {
            VertexType::A1 => '1',
            VertexType::A2 => '2',
            VertexType::B1 => '3',
            VertexType::B2 => '4',
            VertexType::C1 => '5',
            VertexType::C2 => '6',
        }
    }

    pub fn from_glyph(ch: char) -> Option<VertexType> {
        match ch {
            '1' => Some(VertexType::A1),
            '2' => Some(VertexType::A2),
            '3' => Some(VertexType::B1),
            '4' => Some(VertexType::B2),
            '5' => Some(VertexType::C1),
            '6' => Some(VertexType::C2),
            _ => None,
        }
    }

    pub fn is_b(self) -> bool {
        matches!(self, VertexType::B1 | VertexType::B2)
    }

    pub fn is_c(self) -> bool {
        matches!(self, VertexType::C1 | VertexType::C2)
    }
}

/// Spectral parameterization `(u, t)` of the weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParams {
    pub u: Complex64,
    pub t: Complex64,
}

/// Positivity regime of a spectral pair, recorded as a flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositivityRegime {
    /// both u and t real with 0 < u,t or u,t > 1
    RealPositive,
    /// |u| = |t| = 1
    UnitCircle,
    /// neither of the two positive regimes
    Other,
}

impl SpectralParams {
    pub fn new(u: Complex64, t: Complex64) -> Result<Self> {
        let denom = (ONE - t * u).norm();
        if denom < 1e-14 {
            return Err(Error::SingularParameter { value: denom });
        }
        Ok(SpectralParams { u, t })
    }

    pub fn regime(&self) -> PositivityRegime {
        let real = self.u.im.abs() < 1e-14 && self.t.im.abs() < 1e-14;
        if real {
            let (u, t) = (self.u.re, self.t.re);
            if (u > 0.0 && t > 0.0 && u < 1.0 && t < 1.0) || (u > 1.0 && t > 1.0) {
                return PositivityRegime::RealPositive;
            }
        }
        if (self.u.norm() - 1.0).abs() < 1e-14 && (self.t.norm() - 1.0).abs() < 1e-14 {
            return PositivityRegime::UnitCircle;
        }
        PositivityRegime::Other
    }
}

/// The six local Boltzmann weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightTable {
    pub a1: Complex64,
    pub a2: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
}

/// One-parameter reweightings that preserve every Boltzmann probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaugeKind {
    /// multiply all six weights by alpha
    GlobalScale,
    /// (c1, c2) -> (alpha c1, c2 / alpha)
    CTilt,
    /// (a1, a2) -> (alpha a1, a2 / alpha)
    ATilt,
    /// (b1, b2) -> (alpha b1, b2 / alpha)
    BTilt,
}

impl WeightTable {
    pub fn new(
        a1: Complex64,
        a2: Complex64,
        b1: Complex64,
        b2: Complex64,
        c1: Complex64,
        c2: Complex64,
    ) -> Self {
        WeightTable { a1, a2, b1, b2, c1, c2 }
    }

    pub fn uniform() -> Self {
        WeightTable::new(ONE, ONE, ONE, ONE, ONE, ONE)
    }

    /// Weights from the spectral parameterization; rows of the stochastic
    /// matrix sum to one exactly.
    pub fn from_spectral(p: SpectralParams) -> Result<Self> {
        let denom = ONE - p.t * p.u;
        if denom.norm() < 1e-14 {
            return Err(Error::SingularParameter { value: denom.norm() });
        }
        Ok(WeightTable {
            a1: ONE,
            a2: ONE,
            b1: (ONE - p.u) / denom,
            b2: p.t * (ONE - p.u) / denom,
            c1: p.u * (ONE - p.t) / denom,
            c2: (ONE - p.t) / denom,
        })
    }

    pub fn weight(&self, v: VertexType) -> Complex64 {
        match v {
            VertexType::A1 => self.a1,
            VertexType::A2 => self.a2,
            VertexType::B1 => self.b1,
            VertexType::B2 => self.b2,
            VertexType::C1 => self.c1,
            VertexType::C2 => self.c2,
        }
    }

    /// Weight of an occupancy quadruple, zero when conservation fails.
    pub fn weight_of_edges(&self, bottom: u8, left: u8, top: u8, right: u8) -> Complex64 {
        match VertexType::from_edges(bottom, left, top, right) {
            Some(v) => self.weight(v),
            None => ZERO,
        }
    }

    /// Anisotropy parameter (a1 a2 + b1 b2 - c1 c2) / (2 sqrt(a1 a2 b1 b2)),
    /// principal square root (positive on the positive real axis).
    pub fn delta(&self) -> Result<Complex64> {
        let ab = self.a1 * self.a2 * self.b1 * self.b2;
        if ab.norm() < 1e-300 {
            return Err(Error::Domain(
                "delta undefined: a1*a2*b1*b2 vanishes".into(),
            ));
        }
        let num = self.a1 * self.a2 + self.b1 * self.b2 - self.c1 * self.c2;
        Ok(num / (2.0 * ab.sqrt()))
    }

    /// Gauge invariants (a1 a2 / b1 b2, a1 a2 / c1 c2).
    pub fn gauge_invariants(&self) -> (Complex64, Complex64) {
        let aa = self.a1 * self.a2;
        (aa / (self.b1 * self.b2), aa / (self.c1 * self.c2))
    }

    pub fn gauge_transform(&self, kind: GaugeKind, alpha: Complex64) -> Result<WeightTable> {
        if alpha.norm() < 1e-300 {
            return Err(Error::ZeroGaugeFactor);
        }
        let mut w = *self;
        match kind {
            GaugeKind::GlobalScale => {
                w.a1 *= alpha;
                w.a2 *= alpha;
                w.b1 *= alpha;
                w.b2 *= alpha;
                w.c1 *= alpha;
                w.c2 *= alpha;
            }
            GaugeKind::CTilt => {
                w.c1 *= alpha;
                w.c2 /= alpha;
            }
            GaugeKind::ATilt => {
                w.a1 *= alpha;
                w.a2 /= alpha;
            }
            GaugeKind::BTilt => {
                w.b1 *= alpha;
                w.b2 /= alpha;
            }
        }
        Ok(w)
    }
}

/// Per-site weights, either one table for every site or the factored
/// inhomogeneous family u_{ij} = x_i * y_j at fixed t.
#[derive(Debug, Clone)]
pub enum WeightField {
    Homogeneous(WeightTable),
    /// column parameters x (length = width), row parameters y (length = height)
    Spectral {
        x: Vec<Complex64>,
        y: Vec<Complex64>,
        t: Complex64,
    },
}

impl WeightField {
    pub fn spectral(x: &[Complex64], y: &[Complex64], t: Complex64) -> Self {
        WeightField::Spectral { x: x.to_vec(), y: y.to_vec(), t }
    }

    /// Weight table at column i, row j (1-based).
    pub fn table_at(&self, i: usize, j: usize) -> Result<WeightTable> {
        match self {
            WeightField::Homogeneous(w) => Ok(*w),
            WeightField::Spectral { x, y, t } => {
                let u = x[i - 1] * y[j - 1];
                WeightTable::from_spectral(SpectralParams::new(u, *t)?)
            }
        }
    }
}

/// Declared boundary occupancies of a rectangle, one bit per boundary edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryData {
    /// bottom edges of each column (paths entering from below), length = width
    pub bottom_in: Vec<u8>,
    /// left edges of each row (paths entering from the left), length = height
    pub left_in: Vec<u8>,
    /// top edges of each column (paths exiting above), length = width
    pub top_out: Vec<u8>,
    /// right edges of each row (paths exiting to the right), length = height
    pub right_out: Vec<u8>,
}

impl BoundaryData {
    pub fn new(
        bottom_in: Vec<u8>,
        left_in: Vec<u8>,
        top_out: Vec<u8>,
        right_out: Vec<u8>,
    ) -> Result<Self> {
        let b = BoundaryData { bottom_in, left_in, top_out, right_out };
        b.check_flow()?;
        Ok(b)
    }

    /// Domain wall boundary conditions on an n x n square: paths enter at
    /// every bottom edge and exit at every right edge.
    pub fn dwbc(n: usize) -> Self {
        BoundaryData {
            bottom_in: vec![1; n],
            left_in: vec![0; n],
            top_out: vec![0; n],
            right_out: vec![1; n],
        }
    }

    fn count(v: &[u8]) -> usize {
        v.iter().map(|&b| b as usize).sum()
    }

    /// Flow conservation: entering paths equal exiting paths.
    pub fn check_flow(&self) -> Result<()> {
        let inflow = Self::count(&self.bottom_in) + Self::count(&self.left_in);
        let outflow = Self::count(&self.top_out) + Self::count(&self.right_out);
        if inflow != outflow {
            return Err(Error::Invariant(format!(
                "boundary flow mismatch: {inflow} paths in, {outflow} out"
            )));
        }
        Ok(())
    }
}

/// Boundary condition for enumeration and sampling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundaryCondition {
    /// all four sides pinned
    Fixed(BoundaryData),
    /// step initial condition (every bottom edge occupied, empty left) with
    /// free exit data on top and right
    StepFree,
}

/// A six-vertex configuration on a `width x height` rectangle, stored as two
/// edge-occupancy grids.
///
/// Vertical edge (i, j) sits below row j+1 of column i, j in 0..=height;
/// j = 0 are the bottom boundary stubs and j = height the top ones.
/// Horizontal edge (i, j) sits left of column i+1 in row j, i in 0..=width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SixVertexConfig {
    width: usize,
    height: usize,
    vertical: Vec<u8>,
    horizontal: Vec<u8>,
}

impl SixVertexConfig {
    /// Validating constructor: every vertex must satisfy path conservation.
    pub fn new(width: usize, height: usize, vertical: Vec<u8>, horizontal: Vec<u8>) -> Result<Self> {
        if vertical.len() != width * (height + 1) || horizontal.len() != (width + 1) * height {
            return Err(Error::Invariant("edge grid dimensions mismatch".into()));
        }
        let cfg = SixVertexConfig { width, height, vertical, horizontal };
        for j in 1..=height {
            for i in 1..=width {
                if cfg.vertex_type(i, j).is_none() {
                    return Err(Error::Invariant(format!(
                        "path conservation violated at vertex ({i},{j})"
                    )));
                }
            }
        }
        Ok(cfg)
    }

    pub(crate) fn from_raw_edges(
        width: usize,
        height: usize,
        vertical: Vec<u8>,
        horizontal: Vec<u8>,
    ) -> Self {
        SixVertexConfig { width, height, vertical, horizontal }
    }

    /// Rebuild a configuration from its vertex types (row-major, bottom row
    /// first), checking that adjacent vertices agree on shared edges.
    pub fn from_vertex_types(width: usize, height: usize, types: &[VertexType]) -> Result<Self> {
        if types.len() != width * height {
            return Err(Error::Invariant("vertex grid dimensions mismatch".into()));
        }
        let mut vertical = vec![0u8; width * (height + 1)];
        let mut horizontal = vec![0u8; (width + 1) * height];
        for j in 1..=height {
            for i in 1..=width {
                let (bottom, left, top, right) = types[(j - 1) * width + (i - 1)].edges();
                let vb = (i - 1) + width * (j - 1);
                let vt = (i - 1) + width * j;
                let hl = (i - 1) + (width + 1) * (j - 1);
                let hr = i + (width + 1) * (j - 1);
                if j > 1 && vertical[vb] != bottom {
                    return Err(Error::Invariant(format!(
                        "vertical edge mismatch below vertex ({i},{j})"
                    )));
                }
                if i > 1 && horizontal[hl] != left {
                    return Err(Error::Invariant(format!(
                        "horizontal edge mismatch left of vertex ({i},{j})"
                    )));
                }
                vertical[vb] = bottom;
                vertical[vt] = top;
                horizontal[hl] = left;
                horizontal[hr] = right;
            }
        }
        Ok(SixVertexConfig { width, height, vertical, horizontal })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn vertical_edge(&self, i: usize, j: usize) -> u8 {
        self.vertical[(i - 1) + self.width * j]
    }

    #[inline]
    pub fn horizontal_edge(&self, i: usize, j: usize) -> u8 {
        self.horizontal[i + (self.width + 1) * (j - 1)]
    }

    /// Edge occupancies around vertex (i, j): (bottom, left, top, right).
    #[inline]
    pub fn edges_at(&self, i: usize, j: usize) -> (u8, u8, u8, u8) {
        (
            self.vertical_edge(i, j - 1),
            self.horizontal_edge(i - 1, j),
            self.vertical_edge(i, j),
            self.horizontal_edge(i, j),
        )
    }

    pub fn vertex_type(&self, i: usize, j: usize) -> Option<VertexType> {
        let (b, l, t, r) = self.edges_at(i, j);
        VertexType::from_edges(b, l, t, r)
    }

    /// Boundary occupancies read off the edge grids.
    pub fn boundary(&self) -> BoundaryData {
        BoundaryData {
            bottom_in: (1..=self.width).map(|i| self.vertical_edge(i, 0)).collect(),
            left_in: (1..=self.height).map(|j| self.horizontal_edge(0, j)).collect(),
            top_out: (1..=self.width).map(|i| self.vertical_edge(i, self.height)).collect(),
            right_out: (1..=self.height).map(|j| self.horizontal_edge(self.width, j)).collect(),
        }
    }

    /// Number of paths exiting through the top boundary.
    pub fn top_exit_count(&self) -> usize {
        (1..=self.width).map(|i| self.vertical_edge(i, self.height) as usize).sum()
    }

    /// Product of per-site weights.
    pub fn boltzmann_weight(&self, field: &WeightField) -> Result<Complex64> {
        let mut w = ONE;
        for j in 1..=self.height {
            for i in 1..=self.width {
                let vt = self.vertex_type(i, j).ok_or_else(|| {
                    Error::Invariant(format!("path conservation violated at ({i},{j})"))
                })?;
                w *= field.table_at(i, j)?.weight(vt);
            }
        }
        Ok(w)
    }

    /// Plain-text grid serialization: header `6VX w h`, then one line per
    /// row (bottom row first), one glyph from {1..6} per vertex.
    pub fn to_grid_string(&self) -> String {
        let mut s = format!("6VX {} {}\n", self.width, self.height);
        for j in 1..=self.height {
            for i in 1..=self.width {
                s.push(self.vertex_type(i, j).expect("validated config").glyph());
            }
            s.push('\n');
        }
        s
    }

    pub fn from_grid_string(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Invariant("empty grid text".into()))?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("6VX") {
            return Err(Error::Invariant("missing 6VX header".into()));
        }
        let width: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Invariant("bad width in header".into()))?;
        let height: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Invariant("bad height in header".into()))?;
        let mut types = Vec::with_capacity(width * height);
        for _ in 0..height {
            let line = lines
                .next()
                .ok_or_else(|| Error::Invariant("truncated grid text".into()))?;
            if line.chars().count() != width {
                return Err(Error::Invariant("row length mismatch".into()));
            }
            for ch in line.chars() {
                types.push(
                    VertexType::from_glyph(ch)
                        .ok_or_else(|| Error::Invariant(format!("bad glyph '{ch}'")))?,
                );
            }
        }
        SixVertexConfig::from_vertex_types(width, height, &types)
    }
}
