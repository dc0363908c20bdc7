//! Planar primitives and the distance kernels the pipeline is built on.
//!
//! All sets are closed: a disk tangent to a square intersects it, and a
//! segment touching a disk boundary has distance zero to it.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::math::{self, SQRT_2};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        math::hypot(self.x, self.y)
    }

    #[inline]
    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Linear interpolation `self + t (other - self)`.
    #[inline]
    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(
            self.x + t * (other.x - self.x),
            self.y + t * (other.y - self.y),
        )
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Closed disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    pub const fn new(center: Point, radius: f64) -> Self {
        Disk { center, radius }
    }

    pub fn is_valid(&self) -> bool {
        self.center.is_finite() && self.radius.is_finite() && self.radius > 0.0
    }

    pub fn diam(&self) -> f64 {
        2.0 * self.radius
    }

    pub fn contains(&self, p: Point) -> bool {
        self.center.dist(p) <= self.radius
    }

    /// Closed-set intersection test; tangency counts.
    pub fn intersects(&self, other: &Disk) -> bool {
        self.center.dist(other.center) <= self.radius + other.radius
    }

    /// Nearest point of the disk to `p` (`p` itself when inside).
    pub fn project(&self, p: Point) -> Point {
        let d = self.center.dist(p);
        if d <= self.radius {
            p
        } else {
            self.center + (p - self.center) * (self.radius / d)
        }
    }

    pub fn boundary_point(&self, angle: f64) -> Point {
        Point::new(
            self.center.x + self.radius * math::cos(angle),
            self.center.y + self.radius * math::sin(angle),
        )
    }
}

/// Straight segment; `a == b` is allowed and behaves as a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    /// Parameter in `[0, 1]` of the point of the segment nearest to `p`.
    pub fn closest_param(&self, p: Point) -> f64 {
        let ab = self.b - self.a;
        let len2 = ab.dot(ab);
        if len2 == 0.0 {
            return 0.0;
        }
        ((p - self.a).dot(ab) / len2).clamp(0.0, 1.0)
    }

    pub fn point_at(&self, t: f64) -> Point {
        if t == 0.0 {
            self.a
        } else if t == 1.0 {
            self.b
        } else {
            self.a.lerp(self.b, t)
        }
    }

    pub fn closest_point(&self, p: Point) -> Point {
        self.point_at(self.closest_param(p))
    }

    pub fn dist_to_point(&self, p: Point) -> f64 {
        self.closest_point(p).dist(p)
    }

    pub fn reversed(&self) -> Segment {
        Segment::new(self.b, self.a)
    }
}

/// Parameters `(t, u)` of the intersection point of two non-parallel
/// segments, when it lies on both.
pub fn segment_crossing(s: &Segment, o: &Segment) -> Option<(f64, f64)> {
    let r = s.b - s.a;
    let q = o.b - o.a;
    let denom = r.cross(q);
    if denom == 0.0 {
        return None;
    }
    let w = o.a - s.a;
    let t = w.cross(q) / denom;
    let u = w.cross(r) / denom;
    if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        Some((t, u))
    } else {
        None
    }
}

/// Closest pair of points between two segments: `(on s, on o)`.
pub fn segment_closest_pair(s: &Segment, o: &Segment) -> (Point, Point) {
    if let Some((t, _)) = segment_crossing(s, o) {
        let p = s.point_at(t);
        return (p, p);
    }
    let candidates = [
        (s.a, o.closest_point(s.a)),
        (s.b, o.closest_point(s.b)),
        (s.closest_point(o.a), o.a),
        (s.closest_point(o.b), o.b),
    ];
    let mut best = candidates[0];
    let mut best_d = best.0.dist(best.1);
    for c in &candidates[1..] {
        let d = c.0.dist(c.1);
        if d < best_d {
            best = *c;
            best_d = d;
        }
    }
    best
}

/// Axis-parallel closed square `[x, x+side] x [y, y+side]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisSquare {
    /// Lower-left corner.
    pub corner: Point,
    pub side: f64,
}

impl AxisSquare {
    pub const fn new(corner: Point, side: f64) -> Self {
        AxisSquare { corner, side }
    }

    pub fn diam(&self) -> f64 {
        self.side * SQRT_2
    }

    pub fn perimeter(&self) -> f64 {
        4.0 * self.side
    }

    pub fn area(&self) -> f64 {
        self.side * self.side
    }

    pub fn center(&self) -> Point {
        Point::new(
            self.corner.x + 0.5 * self.side,
            self.corner.y + 0.5 * self.side,
        )
    }

    pub fn max_corner(&self) -> Point {
        Point::new(self.corner.x + self.side, self.corner.y + self.side)
    }

    /// Corners in counter-clockwise order starting at the lower-left one.
    pub fn corners(&self) -> [Point; 4] {
        let (x0, y0) = (self.corner.x, self.corner.y);
        let (x1, y1) = (x0 + self.side, y0 + self.side);
        [
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ]
    }

    pub fn boundary(&self) -> [Segment; 4] {
        let c = self.corners();
        [
            Segment::new(c[0], c[1]),
            Segment::new(c[1], c[2]),
            Segment::new(c[2], c[3]),
            Segment::new(c[3], c[0]),
        ]
    }

    pub fn contains(&self, p: Point) -> bool {
        let m = self.max_corner();
        p.x >= self.corner.x && p.x <= m.x && p.y >= self.corner.y && p.y <= m.y
    }

    /// Nearest point of the solid square to `p`.
    pub fn clamp(&self, p: Point) -> Point {
        let m = self.max_corner();
        Point::new(
            p.x.clamp(self.corner.x, m.x),
            p.y.clamp(self.corner.y, m.y),
        )
    }

    /// Distance from `p` to the boundary of the square (positive inside too).
    pub fn dist_to_boundary(&self, p: Point) -> f64 {
        if !self.contains(p) {
            return dist_point_square(p, self);
        }
        let m = self.max_corner();
        (p.x - self.corner.x)
            .min(m.x - p.x)
            .min(p.y - self.corner.y)
            .min(m.y - p.y)
    }

    /// Liang–Barsky clip: parameter interval of `s` inside the square.
    fn clip(&self, s: &Segment) -> Option<(f64, f64)> {
        let m = self.max_corner();
        let d = s.b - s.a;
        let mut t0: f64 = 0.0;
        let mut t1: f64 = 1.0;
        let checks = [
            (-d.x, s.a.x - self.corner.x),
            (d.x, m.x - s.a.x),
            (-d.y, s.a.y - self.corner.y),
            (d.y, m.y - s.a.y),
        ];
        for (p, q) in checks {
            if p == 0.0 {
                if q < 0.0 {
                    return None;
                }
            } else {
                let t = q / p;
                if p < 0.0 {
                    t0 = t0.max(t);
                } else {
                    t1 = t1.min(t);
                }
                if t0 > t1 {
                    return None;
                }
            }
        }
        Some((t0, t1))
    }

    /// Closest pair `(on square, on segment)` between the solid square and `s`.
    pub fn closest_pair_to_segment(&self, s: &Segment) -> (Point, Point) {
        if let Some((t0, _)) = self.clip(s) {
            let p = s.point_at(t0);
            return (p, p);
        }
        let mut best = (self.clamp(s.a), s.a);
        let mut best_d = best.0.dist(best.1);
        let mut consider = |pair: (Point, Point)| {
            let d = pair.0.dist(pair.1);
            if d < best_d {
                best = pair;
                best_d = d;
            }
        };
        consider((self.clamp(s.b), s.b));
        for c in self.corners() {
            consider((c, s.closest_point(c)));
        }
        best
    }

    /// Distance from the solid square to `s`; zero iff they intersect.
    pub fn dist_to_segment(&self, s: &Segment) -> f64 {
        if self.clip(s).is_some() {
            return 0.0;
        }
        let (p, q) = self.closest_pair_to_segment(s);
        p.dist(q)
    }
}

/// Euclidean distance from `p` to the solid square (zero inside).
pub fn dist_point_square(p: Point, q: &AxisSquare) -> f64 {
    let m = q.max_corner();
    let dx = (q.corner.x - p.x).max(0.0).max(p.x - m.x);
    let dy = (q.corner.y - p.y).max(0.0).max(p.y - m.y);
    math::hypot(dx, dy)
}

/// Closed intersection test between a square and a disk.
pub fn square_disk_intersects(q: &AxisSquare, d: &Disk) -> bool {
    dist_point_square(d.center, q) <= d.radius
}

/// Finite set of segments. Lengths are multiset lengths: duplicate
/// segments count twice.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GeometricGraph {
    segments: Vec<Segment>,
}

impl GeometricGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_segments(segments: Vec<Segment>) -> Self {
        GeometricGraph { segments }
    }

    pub fn push(&mut self, s: Segment) {
        self.segments.push(s);
    }

    pub fn extend_from(&mut self, other: &GeometricGraph) {
        self.segments.extend_from_slice(&other.segments);
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn num_segments(&self) -> usize {
        self.segments.len()
    }

    /// Total Euclidean length of the edges.
    pub fn length(&self) -> f64 {
        self.segments.iter().map(Segment::length).fold(0.0, |a, b| a + b)
    }

    pub fn dist_to_point(&self, p: Point) -> Result<f64> {
        self.segments
            .iter()
            .map(|s| s.dist_to_point(p))
            .reduce(f64::min)
            .ok_or(Error::EmptyGraph)
    }
}

/// `max(0, dist(center, G) - radius)`; zero iff the disk meets `g`.
pub fn dist_disk_graph(d: &Disk, g: &GeometricGraph) -> Result<f64> {
    Ok((g.dist_to_point(d.center)? - d.radius).max(0.0))
}

/// Distance between the solid square and the graph.
pub fn dist_square_graph(q: &AxisSquare, g: &GeometricGraph) -> Result<f64> {
    g.segments()
        .iter()
        .map(|s| q.dist_to_segment(s))
        .reduce(f64::min)
        .ok_or(Error::EmptyGraph)
}

/// Distance between two graphs (both nonempty).
pub fn dist_graph_graph(g: &GeometricGraph, h: &GeometricGraph) -> Result<f64> {
    Ok(shortest_connector(g, h)?.length())
}

/// A closed region that can be joined to a geometric graph by a shortest
/// segment.
pub trait Connectable {
    /// Closest pair `(on self, on s)`.
    fn closest_pair(&self, s: &Segment) -> (Point, Point);
}

impl Connectable for Disk {
    fn closest_pair(&self, s: &Segment) -> (Point, Point) {
        let on_seg = s.closest_point(self.center);
        (self.project(on_seg), on_seg)
    }
}

impl Connectable for AxisSquare {
    fn closest_pair(&self, s: &Segment) -> (Point, Point) {
        self.closest_pair_to_segment(s)
    }
}

impl Connectable for Segment {
    fn closest_pair(&self, s: &Segment) -> (Point, Point) {
        segment_closest_pair(self, s)
    }
}

impl Connectable for GeometricGraph {
    fn closest_pair(&self, s: &Segment) -> (Point, Point) {
        let mut best: Option<(Point, Point, f64)> = None;
        for own in &self.segments {
            let (p, q) = segment_closest_pair(own, s);
            let d = p.dist(q);
            if best.is_none_or(|b| d < b.2) {
                best = Some((p, q, d));
            }
        }
        let (p, q, _) = best.expect("closest pair against an empty graph");
        (p, q)
    }
}

/// Shortest segment from region `a` to graph `g`, oriented from `a` to `g`.
///
/// When the two meet the result is degenerate and lies on `g`. A graph
/// region must be nonempty.
pub fn shortest_connector<A: Connectable + ?Sized>(a: &A, g: &GeometricGraph) -> Result<Segment> {
    let mut best: Option<(Point, Point, f64)> = None;
    for s in g.segments() {
        let (p, q) = a.closest_pair(s);
        let d = p.dist(q);
        if best.is_none_or(|b| d < b.2) {
            best = Some((p, q, d));
        }
    }
    let (p, q, d) = best.ok_or(Error::EmptyGraph)?;
    if d == 0.0 {
        Ok(Segment::new(q, q))
    } else {
        Ok(Segment::new(p, q))
    }
}
