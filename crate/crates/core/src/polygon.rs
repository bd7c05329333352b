//! Newton polygon of a Newton-convenient polynomial.
//!
//! The hull is built by the rotating-ray sweep: start at the lowest support
//! point on the y-axis, swing a downward ray counterclockwise until it meets
//! the support, jump to the rightmost point met, repeat until the x-axis.
//! All comparisons are exact.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::poly::{rat_int, PuiseuxPoly, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SupportPoint {
    pub x: Rat,
    pub y: u32,
}

impl SupportPoint {
    pub fn new(x: Rat, y: u32) -> Self {
        SupportPoint { x, y }
    }

    pub fn int(x: i64, y: u32) -> Self {
        SupportPoint { x: rat_int(x), y }
    }
}

impl fmt::Display for SupportPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub start: SupportPoint,
    pub end: SupportPoint,
    /// Δy/Δx, negative for real edges; zero on a virtual edge.
    pub slope: Rat,
    pub height: u32,
    /// Support points on the closed segment, sorted by x.
    pub on_edge: Vec<SupportPoint>,
    /// Bookkeeping edge for the root y = 0 when y divides the polynomial.
    pub is_virtual: bool,
}

impl Edge {
    /// Virtual edge standing for the factor y^e.
    pub fn virtual_edge(e: u32) -> Edge {
        let origin = SupportPoint::int(0, 0);
        Edge {
            start: origin,
            end: origin,
            slope: rat_int(0),
            height: e,
            on_edge: Vec::new(),
            is_virtual: true,
        }
    }

    /// Exponent r of the roots c·x^r this edge contributes: -1/slope.
    pub fn root_exponent(&self) -> Rat {
        if self.is_virtual {
            rat_int(0)
        } else {
            -self.slope.recip()
        }
    }

    /// Value of i + r·j along the supporting line.
    pub fn level(&self) -> Rat {
        self.start.x + self.root_exponent() * rat_int(self.start.y as i64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<SupportPoint>,
    pub edges: Vec<Edge>,
}

impl NewtonPolygon {
    /// Total height: y-coordinate of the first vertex.
    pub fn height(&self) -> u32 {
        self.vertices.first().map(|v| v.y).unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolygonError {
    #[error("polynomial is not Newton convenient: {0}")]
    NotConvenient(&'static str),
    #[error("a virtual edge has no truncation")]
    VirtualEdge,
}

pub fn support(f: &PuiseuxPoly) -> Vec<SupportPoint> {
    f.terms()
        .map(|((x, y), _)| SupportPoint::new(*x, *y))
        .collect()
}

pub fn build_polygon(f: &PuiseuxPoly) -> Result<NewtonPolygon, PolygonError> {
    if f.is_zero() {
        return Err(PolygonError::NotConvenient("zero polynomial"));
    }
    if !f.vanishes_at_origin() {
        return Err(PolygonError::NotConvenient("f(O) != 0"));
    }
    let pts = support(f);
    if pts.iter().all(|p| !p.x.is_zero()) {
        return Err(PolygonError::NotConvenient("a power of x divides f"));
    }
    if pts.iter().all(|p| p.y != 0) {
        return Err(PolygonError::NotConvenient("y divides f"));
    }
    let first = pts
        .iter()
        .filter(|p| p.x.is_zero())
        .min_by_key(|p| p.y)
        .copied()
        .expect("checked above");

    let mut vertices = vec![first];
    let mut edges = Vec::new();
    let mut cur = first;
    while cur.y > 0 {
        // steepest descent first; among equal slopes the rightmost point
        let next = pts
            .iter()
            .filter(|q| q.y < cur.y && q.x > cur.x)
            .map(|q| (slope(cur, *q), *q))
            .min_by(|(s1, q1), (s2, q2)| s1.cmp(s2).then(q2.x.cmp(&q1.x)))
            .map(|(_, q)| q)
            .ok_or(PolygonError::NotConvenient(
                "no support point below the current vertex",
            ))?;
        let s = slope(cur, next);
        let mut on_edge: Vec<SupportPoint> = pts
            .iter()
            .filter(|q| q.x >= cur.x && q.x <= next.x && slope_or_start(cur, **q) == Some(s))
            .copied()
            .collect();
        on_edge.push(cur);
        on_edge.sort();
        on_edge.dedup();
        edges.push(Edge {
            start: cur,
            end: next,
            slope: s,
            height: cur.y - next.y,
            on_edge,
            is_virtual: false,
        });
        vertices.push(next);
        cur = next;
    }
    Ok(NewtonPolygon { vertices, edges })
}

fn slope(a: SupportPoint, b: SupportPoint) -> Rat {
    (rat_int(b.y as i64) - rat_int(a.y as i64)) / (b.x - a.x)
}

fn slope_or_start(a: SupportPoint, b: SupportPoint) -> Option<Rat> {
    if b.x == a.x {
        None
    } else {
        Some(slope(a, b))
    }
}

/// Terms of f supported on the closed edge.
pub fn truncation(f: &PuiseuxPoly, e: &Edge) -> Result<PuiseuxPoly, PolygonError> {
    if e.is_virtual {
        return Err(PolygonError::VirtualEdge);
    }
    Ok(f.filter(|x, y| e.on_edge.contains(&SupportPoint::new(x, y))))
}

/// truncation(f, e) = x^u · y^v · g with u, v maximal.
pub fn edge_poly(f: &PuiseuxPoly, e: &Edge) -> Result<(PuiseuxPoly, Rat, u32), PolygonError> {
    let t = truncation(f, e)?;
    let u = e.start.x;
    let v = e.end.y;
    let (_, g) = t.strip_y().expect("edge truncation is nonzero");
    let g = g.shift_monomial(-u, 0);
    debug_assert!(g.terms().all(|((x, _), _)| !x.is_negative()));
    Ok((g, u, v))
}
