//! Newton diagrams in the plane.
//!
//! A diagram is the convex hull of `A + (ℝ≥0)²` for a nonempty set `A ⊂ ℕ²`.
//! It is stored as its vertex chain, ordered by increasing `x` (hence
//! decreasing `y`); the chain implicitly starts with a vertical ray above the
//! first vertex and ends with a horizontal ray right of the last one. A
//! single vertex is a translated quadrant.
//!
//! The inclination of a compact edge with horizontal length `M` and vertical
//! length `N` is `M/N`. Walking the chain left to right the inclinations
//! strictly increase, so canonical representations list their parts from
//! the right end of the polygon to the left.

mod derivative;
mod svg;

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::num::JsonInt;

pub use derivative::elementary_derivative_closed_form;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("cannot build a Newton diagram from an empty support")]
    EmptySupport,
    #[error("lattice points must have nonnegative coordinates")]
    NegativeCoordinate,
    #[error("vertex chain is not a strictly convex staircase: {0}")]
    InvalidChain(String),
    #[error("invalid canonical representation: {0}")]
    InvalidRepresentation(String),
    #[error("weights must be strictly positive")]
    NonPositiveWeight,
    #[error("expected coprime m and n, got ({m},{n})")]
    NotCoprime { m: BigInt, n: BigInt },
    #[error("expected m > n >= 1, got ({m},{n})")]
    InvalidRange { m: BigInt, n: BigInt },
    #[error("derivative order {k} exceeds the vertical extent {extent} of the right part")]
    SplitTooDeep { k: u64, extent: BigInt },
    #[error("split index {s} exceeds the number of long canonical parts {parts}")]
    SplitIndexOutOfRange { s: usize, parts: usize },
    #[error("diagram must touch the horizontal axis for this operation")]
    NotConvenient,
    #[error("lattice enumeration over {rows} rows is beyond the supported size")]
    LatticeTooLarge { rows: BigInt },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub x: BigInt,
    pub y: BigInt,
}

impl LatticePoint {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        LatticePoint { x: x.into(), y: y.into() }
    }

    pub fn origin() -> Self {
        LatticePoint { x: BigInt::zero(), y: BigInt::zero() }
    }

    fn is_nonnegative(&self) -> bool {
        !self.x.is_negative() && !self.y.is_negative()
    }
}

impl Add for &LatticePoint {
    type Output = LatticePoint;
    fn add(self, o: &LatticePoint) -> LatticePoint {
        LatticePoint { x: &self.x + &o.x, y: &self.y + &o.y }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Cross product of `b - a` and `c - b`; positive for a strict left turn.
fn turn(a: &LatticePoint, b: &LatticePoint, c: &LatticePoint) -> BigInt {
    (&b.x - &a.x) * (&c.y - &b.y) - (&b.y - &a.y) * (&c.x - &b.x)
}

/// Compares inclinations `m1/n1` and `m2/n2` of two edges with positive
/// vertical lengths.
fn cmp_inclination(m1: &BigInt, n1: &BigInt, m2: &BigInt, n2: &BigInt) -> Ordering {
    (m1 * n2).cmp(&(m2 * n1))
}

/// One elementary summand `{(M,0),(0,N)}` of a canonical representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Part {
    pub m: BigInt,
    pub n: BigInt,
}

impl Part {
    pub fn new(m: impl Into<BigInt>, n: impl Into<BigInt>) -> Self {
        Part { m: m.into(), n: n.into() }
    }

    pub fn inclination(&self) -> BigRational {
        BigRational::new(self.m.clone(), self.n.clone())
    }

    fn cmp_inclination(&self, other: &Part) -> Ordering {
        cmp_inclination(&self.m, &self.n, &other.m, &other.n)
    }

    pub fn is_primitive(&self) -> bool {
        self.m.gcd(&self.n).is_one()
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DiagramJson", into = "DiagramJson")]
pub struct NewtonDiagram {
    vertices: Vec<LatticePoint>,
}

impl NewtonDiagram {
    /// Newton diagram of a finite nonempty set of lattice points.
    pub fn from_support<I>(points: I) -> Result<Self, DiagramError>
    where
        I: IntoIterator<Item = LatticePoint>,
    {
        let mut pts: Vec<LatticePoint> = points.into_iter().collect();
        if pts.is_empty() {
            return Err(DiagramError::EmptySupport);
        }
        if !pts.iter().all(LatticePoint::is_nonnegative) {
            return Err(DiagramError::NegativeCoordinate);
        }
        pts.sort();
        // Pareto-minimal staircase, then the lower convex chain over it.
        let mut stair: Vec<LatticePoint> = Vec::new();
        for p in pts {
            if stair.last().is_none_or(|last| p.y < last.y) {
                stair.push(p);
            }
        }
        Ok(NewtonDiagram { vertices: convex_chain(stair) })
    }

    /// Builds a diagram from an explicit vertex chain. Collinear
    /// pseudo-vertices are dropped; anything else that is not a strictly
    /// monotone convex chain is rejected.
    pub fn from_vertices(vertices: Vec<LatticePoint>) -> Result<Self, DiagramError> {
        if vertices.is_empty() {
            return Err(DiagramError::EmptySupport);
        }
        if !vertices.iter().all(LatticePoint::is_nonnegative) {
            return Err(DiagramError::NegativeCoordinate);
        }
        for w in vertices.windows(2) {
            if w[1].x <= w[0].x || w[1].y >= w[0].y {
                return Err(DiagramError::InvalidChain(format!("{} -> {} is not strictly right and down", w[0], w[1])));
            }
        }
        for w in vertices.windows(3) {
            if turn(&w[0], &w[1], &w[2]).is_negative() {
                return Err(DiagramError::InvalidChain(format!("reflex vertex at {}", w[1])));
            }
        }
        Ok(NewtonDiagram { vertices: convex_chain(vertices) })
    }

    /// The translated quadrant `p + (ℝ≥0)²`.
    pub fn quadrant(p: LatticePoint) -> Self {
        assert!(p.is_nonnegative(), "quadrant apex must be a lattice point of ℕ²");
        NewtonDiagram { vertices: vec![p] }
    }

    /// The elementary diagram of `{(m,0),(0,n)}`; the full quadrant when
    /// either leg is zero.
    pub fn elementary(m: impl Into<BigInt>, n: impl Into<BigInt>) -> Self {
        let (m, n) = (m.into(), n.into());
        assert!(!m.is_negative() && !n.is_negative(), "elementary legs must be nonnegative");
        if m.is_zero() || n.is_zero() {
            return Self::quadrant(LatticePoint::origin());
        }
        NewtonDiagram {
            vertices: vec![LatticePoint { x: BigInt::zero(), y: n }, LatticePoint { x: m, y: BigInt::zero() }],
        }
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn first_vertex(&self) -> &LatticePoint {
        &self.vertices[0]
    }

    pub fn last_vertex(&self) -> &LatticePoint {
        self.vertices.last().expect("nonempty chain")
    }

    /// Compact edges of the Newton polygon, left to right.
    pub fn compact_edges(&self) -> impl Iterator<Item = (&LatticePoint, &LatticePoint)> {
        self.vertices.windows(2).map(|w| (&w[0], &w[1]))
    }

    /// Touches both coordinate axes.
    pub fn is_convenient(&self) -> bool {
        self.first_vertex().x.is_zero() && self.last_vertex().y.is_zero()
    }

    /// Vertical extent of the Newton polygon.
    pub fn height(&self) -> BigInt {
        &self.first_vertex().y - &self.last_vertex().y
    }

    pub fn translate(&self, by: &LatticePoint) -> Self {
        let vertices: Vec<LatticePoint> = self.vertices.iter().map(|v| v + by).collect();
        assert!(vertices.iter().all(LatticePoint::is_nonnegative), "translation leaves ℕ²");
        NewtonDiagram { vertices }
    }

    /// Whether the point lies in the (closed) diagram.
    pub fn contains(&self, p: &LatticePoint) -> bool {
        let first = self.first_vertex();
        let last = self.last_vertex();
        if p.x < first.x || p.y < last.y {
            return false;
        }
        if p.y >= first.y || p.x >= last.x {
            return true;
        }
        for (a, b) in self.compact_edges() {
            if p.y >= b.y && p.y <= a.y {
                return !turn(a, b, p).is_negative();
            }
        }
        unreachable!("a point inside the bounding box lies at the height of some edge")
    }

    /// Whether the point lies on a compact edge (vertices included).
    pub fn on_polygon(&self, p: &LatticePoint) -> bool {
        if self.vertices.len() == 1 {
            return p == self.first_vertex();
        }
        self.compact_edges()
            .any(|(a, b)| turn(a, b, p).is_zero() && p.x >= a.x && p.x <= b.x && p.y <= a.y && p.y >= b.y)
    }

    /// Minkowski sum, computed by merging edge sequences by inclination.
    pub fn minkowski_sum(&self, other: &NewtonDiagram) -> NewtonDiagram {
        let a = self.canonical_rep(false);
        let b = other.canonical_rep(false);
        let offset = &a.offset + &b.offset;
        let mut parts = a.parts;
        parts.extend(b.parts);
        CanonicalRep::from_unsorted(offset, parts).to_diagram()
    }

    /// `ω`-weighted initial part: the face minimising `⟨·, ω⟩`.
    pub fn initial_part(&self, w: (&BigRational, &BigRational)) -> Result<Face, DiagramError> {
        if !w.0.is_positive() || !w.1.is_positive() {
            return Err(DiagramError::NonPositiveWeight);
        }
        let weight = |p: &LatticePoint| {
            w.0 * BigRational::from_integer(p.x.clone()) + w.1 * BigRational::from_integer(p.y.clone())
        };
        let values: Vec<BigRational> = self.vertices.iter().map(weight).collect();
        let min = values.iter().min().expect("nonempty chain");
        let hits: Vec<usize> = (0..values.len()).filter(|&i| &values[i] == min).collect();
        Ok(match hits.as_slice() {
            [i] => Face::Vertex(self.vertices[*i].clone()),
            [i, j] => Face::Edge(self.vertices[*i].clone(), self.vertices[*j].clone()),
            _ => unreachable!("a strictly convex chain has at most two minimisers"),
        })
    }

    /// Canonical representation: offset plus the compact edges as parts, in
    /// decreasing inclination. In long form every edge `(M,N)` with
    /// `g = gcd(M,N)` is split into `g` copies of `(M/g, N/g)`.
    pub fn canonical_rep(&self, long: bool) -> CanonicalRep {
        let offset = LatticePoint { x: self.first_vertex().x.clone(), y: self.last_vertex().y.clone() };
        let mut parts = Vec::new();
        for (a, b) in self.compact_edges().collect::<Vec<_>>().into_iter().rev() {
            let part = Part { m: &b.x - &a.x, n: &a.y - &b.y };
            if long {
                let g = part.m.gcd(&part.n);
                let prim = Part { m: &part.m / &g, n: &part.n / &g };
                let copies = usize::try_from(&g).expect("edge lattice length fits in memory");
                parts.extend(std::iter::repeat_n(prim, copies));
            } else {
                parts.push(part);
            }
        }
        CanonicalRep { offset, parts, long }
    }
}

/// Lower convex chain of a staircase (x increasing, y decreasing), dropping
/// collinear points.
fn convex_chain(stair: Vec<LatticePoint>) -> Vec<LatticePoint> {
    let mut hull: Vec<LatticePoint> = Vec::with_capacity(stair.len());
    for p in stair {
        while hull.len() >= 2 && !turn(&hull[hull.len() - 2], &hull[hull.len() - 1], &p).is_positive() {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

impl fmt::Display for NewtonDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", vs.join(","))
    }
}

/// A face of a diagram: a vertex or a closed compact edge (left end first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Face {
    Vertex(LatticePoint),
    Edge(LatticePoint, LatticePoint),
}

impl Add for &Face {
    type Output = Face;

    /// Minkowski sum of two faces with a common supporting weight.
    fn add(self, o: &Face) -> Face {
        match (self, o) {
            (Face::Vertex(p), Face::Vertex(q)) => Face::Vertex(p + q),
            (Face::Vertex(p), Face::Edge(a, b)) | (Face::Edge(a, b), Face::Vertex(p)) => Face::Edge(a + p, b + p),
            (Face::Edge(a, b), Face::Edge(c, d)) => Face::Edge(a + c, b + d),
        }
    }
}

/// Minkowski decomposition `offset + Σ parts` of a Newton diagram into
/// elementary diagrams, parts in decreasing inclination.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CanonicalJson", into = "CanonicalJson")]
pub struct CanonicalRep {
    offset: LatticePoint,
    parts: Vec<Part>,
    long: bool,
}

impl CanonicalRep {
    /// Validates ordering and primitivity. In short form inclinations must be
    /// strictly decreasing, in long form weakly decreasing with coprime parts.
    pub fn new(offset: LatticePoint, parts: Vec<Part>, long: bool) -> Result<Self, DiagramError> {
        let bad = |msg: String| Err(DiagramError::InvalidRepresentation(msg));
        if !offset.is_nonnegative() {
            return Err(DiagramError::NegativeCoordinate);
        }
        if let Some(p) = parts.iter().find(|p| !p.m.is_positive() || !p.n.is_positive()) {
            return bad(format!("part {p} must have positive legs"));
        }
        for w in parts.windows(2) {
            match w[0].cmp_inclination(&w[1]) {
                Ordering::Less => return bad(format!("{} before {} increases the inclination", w[0], w[1])),
                Ordering::Equal if !long => return bad(format!("{} and {} share an inclination", w[0], w[1])),
                _ => {}
            }
        }
        if long {
            if let Some(p) = parts.iter().find(|p| !p.is_primitive()) {
                return bad(format!("long form part {p} is not primitive"));
            }
        }
        Ok(CanonicalRep { offset, parts, long })
    }

    /// Sorts arbitrary positive parts by decreasing inclination and merges
    /// them into short canonical form.
    fn from_unsorted(offset: LatticePoint, mut parts: Vec<Part>) -> Self {
        parts.sort_by(|a, b| b.cmp_inclination(a));
        let mut merged: Vec<Part> = Vec::with_capacity(parts.len());
        for p in parts {
            match merged.last_mut() {
                Some(last) if last.cmp_inclination(&p) == Ordering::Equal => {
                    last.m += p.m;
                    last.n += p.n;
                }
                _ => merged.push(p),
            }
        }
        CanonicalRep { offset, parts: merged, long: false }
    }

    /// Sum of elementary diagrams at the origin; `long` selects the form of
    /// the result.
    pub fn from_parts(parts: Vec<Part>, long: bool) -> Self {
        let short = Self::from_unsorted(LatticePoint::origin(), parts);
        if long {
            short.to_long()
        } else {
            short
        }
    }

    pub fn offset(&self) -> &LatticePoint {
        &self.offset
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn is_long(&self) -> bool {
        self.long
    }

    pub fn vertical_extent(&self) -> BigInt {
        self.parts.iter().map(|p| &p.n).sum()
    }

    pub fn horizontal_extent(&self) -> BigInt {
        self.parts.iter().map(|p| &p.m).sum()
    }

    /// The points `A_j = offset + (Σ_{i>j} M_i, Σ_{i≤j} N_i)`, `0 ≤ j ≤ r`.
    pub fn corner_points(&self) -> Vec<LatticePoint> {
        let mut x = self.horizontal_extent();
        let mut y = BigInt::zero();
        let mut out = vec![&self.offset + &LatticePoint { x: x.clone(), y: y.clone() }];
        for p in &self.parts {
            x -= &p.m;
            y += &p.n;
            out.push(&self.offset + &LatticePoint { x: x.clone(), y: y.clone() });
        }
        out
    }

    pub fn to_diagram(&self) -> NewtonDiagram {
        NewtonDiagram::from_support(self.corner_points()).expect("corner points are nonempty")
    }

    pub fn to_long(&self) -> CanonicalRep {
        self.to_diagram().canonical_rep(true)
    }

    pub fn to_short(&self) -> CanonicalRep {
        self.to_diagram().canonical_rep(false)
    }

    /// Parts grouped as `(count, part)` runs of equal consecutive entries.
    pub fn grouped(&self) -> Vec<(usize, &Part)> {
        let mut out: Vec<(usize, &Part)> = Vec::new();
        for p in &self.parts {
            match out.last_mut() {
                Some((c, last)) if *last == p => *c += 1,
                _ => out.push((1, p)),
            }
        }
        out
    }
}

impl fmt::Display for CanonicalRep {
    /// Writes the decomposition as e.g. `3(8,1)` or `(2,1)+(3,2)`; an empty
    /// sum is the quadrant `(0,0)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            write!(f, "(0,0)")?;
        } else {
            let terms: Vec<String> = self
                .grouped()
                .into_iter()
                .map(|(c, p)| if c == 1 { p.to_string() } else { format!("{c}{p}") })
                .collect();
            write!(f, "{}", terms.join("+"))?;
        }
        if self.offset != LatticePoint::origin() {
            write!(f, " at {}", self.offset)?;
        }
        Ok(())
    }
}

impl Serialize for LatticePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [JsonInt(self.x.clone()), JsonInt(self.y.clone())].serialize(s)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramJson {
    vertices: Vec<[JsonInt; 2]>,
}

impl TryFrom<DiagramJson> for NewtonDiagram {
    type Error = DiagramError;
    fn try_from(j: DiagramJson) -> Result<Self, DiagramError> {
        NewtonDiagram::from_vertices(j.vertices.into_iter().map(|[x, y]| LatticePoint { x: x.0, y: y.0 }).collect())
    }
}

impl From<NewtonDiagram> for DiagramJson {
    fn from(d: NewtonDiagram) -> Self {
        DiagramJson { vertices: d.vertices.into_iter().map(|v| [JsonInt(v.x), JsonInt(v.y)]).collect() }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CanonicalJson {
    offset: [JsonInt; 2],
    parts: Vec<[JsonInt; 2]>,
    long: bool,
}

impl TryFrom<CanonicalJson> for CanonicalRep {
    type Error = DiagramError;
    fn try_from(j: CanonicalJson) -> Result<Self, DiagramError> {
        let [x, y] = j.offset;
        let parts = j.parts.into_iter().map(|[m, n]| Part { m: m.0, n: n.0 }).collect();
        CanonicalRep::new(LatticePoint { x: x.0, y: y.0 }, parts, j.long)
    }
}

impl From<CanonicalRep> for CanonicalJson {
    fn from(c: CanonicalRep) -> Self {
        CanonicalJson {
            offset: [JsonInt(c.offset.x), JsonInt(c.offset.y)],
            parts: c.parts.into_iter().map(|p| [JsonInt(p.m), JsonInt(p.n)]).collect(),
            long: c.long,
        }
    }
}
