//! Euclidean substrate: points, normalized lines, circles, and the classical
//! constructions (power, radical axis, inversion, polar) under one tolerance
//! policy.

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Comparison policy: `|a − b| ≤ abs_eps + rel_eps·scale`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tol {
    pub abs_eps: f64,
    pub rel_eps: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol { abs_eps: 1e-9, rel_eps: 1e-9 }
    }
}

impl Tol {
    pub fn new(abs_eps: f64, rel_eps: f64) -> Result<Self> {
        if abs_eps > 0.0 && rel_eps > 0.0 && abs_eps.is_finite() && rel_eps.is_finite() {
            Ok(Tol { abs_eps, rel_eps })
        } else {
            Err(Error::InvalidInput)
        }
    }

    /// Same policy multiplied by `k`; checkers use this to widen the kernel
    /// tolerance for root-found quantities.
    pub fn scaled(self, k: f64) -> Self {
        Tol { abs_eps: self.abs_eps * k, rel_eps: self.rel_eps * k }
    }

    pub fn bound(&self, scale: f64) -> f64 {
        self.abs_eps + self.rel_eps * scale.abs()
    }

    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.bound(a.abs().max(b.abs()))
    }

    pub fn zero(&self, x: f64, scale: f64) -> bool {
        x.abs() <= self.bound(scale)
    }

    pub fn close_pt(&self, p: Point, q: Point) -> bool {
        p.dist(q) <= self.bound(p.norm().max(q.norm()))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

pub const fn pt(x: f64, y: f64) -> Point {
    Point { x, y }
}

impl Point {
    pub const ORIGIN: Point = pt(0.0, 0.0);

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }
    pub fn norm2(self) -> f64 {
        self.dot(self)
    }
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }
    /// Counterclockwise quarter turn.
    pub fn rot90(self) -> Point {
        pt(-self.y, self.x)
    }
    pub fn unit(self) -> Point {
        self / self.norm()
    }
    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        pt(self.x + o.x, self.y + o.y)
    }
}
impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        pt(self.x - o.x, self.y - o.y)
    }
}
impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        pt(self.x * k, self.y * k)
    }
}
impl Div<f64> for Point {
    type Output = Point;
    fn div(self, k: f64) -> Point {
        pt(self.x / k, self.y / k)
    }
}
impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        pt(-self.x, -self.y)
    }
}

/// `a·x + b·y + c = 0` with `a² + b² = 1` and the first nonzero of `(a, b)`
/// positive, so equal lines have equal coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Line {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Line> {
        let n = a.hypot(b);
        if !(n > 0.0) || !n.is_finite() || !c.is_finite() {
            return Err(Error::InvalidInput);
        }
        let (mut a, mut b, mut c) = (a / n, b / n, c / n);
        if a < -1e-12 || (a.abs() <= 1e-12 && b < 0.0) {
            a = -a;
            b = -b;
            c = -c;
        }
        Ok(Line { a, b, c })
    }

    pub fn through(p: Point, q: Point) -> Result<Line> {
        let d = q - p;
        Line::new(-d.y, d.x, d.y * p.x - d.x * p.y)
    }

    pub fn from_point_dir(p: Point, d: Point) -> Result<Line> {
        Line::through(p, p + d)
    }

    pub fn normal(&self) -> Point {
        pt(self.a, self.b)
    }
    /// Direction with `normal = rot90(direction)`.
    pub fn direction(&self) -> Point {
        pt(self.b, -self.a)
    }
    /// Signed distance of `p` from the line.
    pub fn eval(&self, p: Point) -> f64 {
        self.a * p.x + self.b * p.y + self.c
    }
    pub fn foot(&self, p: Point) -> Point {
        p - self.normal() * self.eval(p)
    }
    pub fn reflect(&self, p: Point) -> Point {
        p - self.normal() * (2.0 * self.eval(p))
    }
    pub fn contains(&self, p: Point, tol: &Tol) -> bool {
        tol.zero(self.eval(p), p.norm().max(self.c.abs()))
    }
    pub fn approx_eq(&self, o: &Line, tol: &Tol) -> bool {
        tol.close(self.a, o.a) && tol.close(self.b, o.b) && tol.close(self.c, o.c)
    }
    pub fn meet(&self, o: &Line) -> Option<Point> {
        let det = self.a * o.b - self.b * o.a;
        if det.abs() < 1e-14 {
            return None;
        }
        Some(pt((self.b * o.c - self.c * o.b) / det, (self.c * o.a - self.a * o.c) / det))
    }
    pub fn coeffs(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    /// Panics on a non-positive or non-finite radius; use [`Circle::try_new`]
    /// for untrusted input.
    pub fn new(center: Point, radius: f64) -> Circle {
        Circle::try_new(center, radius).expect("circle radius must be positive and finite")
    }

    pub fn try_new(center: Point, radius: f64) -> Result<Circle> {
        if radius > 0.0 && radius.is_finite() && center.is_finite() {
            Ok(Circle { center, radius })
        } else {
            Err(Error::InvalidInput)
        }
    }

    pub fn at_angle(&self, theta: f64) -> Point {
        self.center + pt(theta.cos(), theta.sin()) * self.radius
    }

    pub fn contains(&self, p: Point, tol: &Tol) -> bool {
        tol.zero(p.dist(self.center) - self.radius, self.radius.max(p.norm()))
    }

    pub fn approx_eq(&self, o: &Circle, tol: &Tol) -> bool {
        tol.close_pt(self.center, o.center) && tol.close(self.radius, o.radius)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GObject {
    Circle(Circle),
    Line(Line),
    Point(Point),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tangency {
    None,
    External,
    Internal,
    LineTangent,
}

pub fn power_of_point(p: Point, c: &Circle) -> f64 {
    (p - c.center).norm2() - c.radius * c.radius
}

pub fn radical_axis(c1: &Circle, c2: &Circle, tol: &Tol) -> Result<Line> {
    let (o1, o2) = (c1.center, c2.center);
    if tol.close_pt(o1, o2) {
        return Err(Error::ConcentricCircles);
    }
    let d = (o2 - o1) * 2.0;
    let k = o1.norm2() - c1.radius * c1.radius - o2.norm2() + c2.radius * c2.radius;
    Line::new(d.x, d.y, k)
}

/// Inversion with centre `z` and power `k2`. Objects through `z` switch
/// between the circle and line variants.
pub fn invert(z: Point, k2: f64, obj: &GObject, tol: &Tol) -> Result<GObject> {
    if !(k2 > 0.0) {
        return Err(Error::InvalidInput);
    }
    match *obj {
        GObject::Point(p) => {
            let v = p - z;
            if tol.zero(v.norm(), z.norm()) {
                return Err(Error::DegenerateImage);
            }
            Ok(GObject::Point(z + v * (k2 / v.norm2())))
        }
        GObject::Circle(c) => {
            let v = c.center - z;
            let pw = v.norm2() - c.radius * c.radius;
            if tol.zero(pw, v.norm2().max(c.radius * c.radius)) {
                let u = v.unit();
                let foot = z + u * (k2 / (2.0 * c.radius));
                return Ok(GObject::Line(Line::from_point_dir(foot, u.rot90())?));
            }
            Ok(GObject::Circle(Circle::try_new(z + v * (k2 / pw), c.radius * k2 / pw.abs())?))
        }
        GObject::Line(l) => {
            let h = l.eval(z);
            if tol.zero(h, z.norm().max(l.c.abs())) {
                return Ok(GObject::Line(l));
            }
            let f = l.foot(z);
            let centre = z + (f - z) * (k2 / (2.0 * h * h));
            Ok(GObject::Circle(Circle::try_new(centre, k2 / (2.0 * h.abs()))?))
        }
    }
}

pub fn polar(p: Point, c: &Circle, tol: &Tol) -> Result<Line> {
    let v = p - c.center;
    if tol.zero(v.norm(), c.radius) {
        return Err(Error::CenterPole);
    }
    Line::new(v.x, v.y, -v.dot(c.center) - c.radius * c.radius)
}

pub fn circumcircle(a: Point, b: Point, c: Point, tol: &Tol) -> Result<Circle> {
    let (ab, ac) = (b - a, c - a);
    let d = 2.0 * ab.cross(ac);
    let scale = ab.norm2().max(ac.norm2());
    if tol.zero(d, scale) {
        return Err(Error::CollinearPoints);
    }
    let off = pt(
        ac.y * ab.norm2() - ab.y * ac.norm2(),
        ab.x * ac.norm2() - ac.x * ab.norm2(),
    ) / d;
    Circle::try_new(a + off, off.norm())
}

fn circle_circle(c1: &Circle, c2: &Circle, tol: &Tol) -> Result<Vec<Point>> {
    let v = c2.center - c1.center;
    let d = v.norm();
    if tol.zero(d, c1.radius.max(c2.radius)) {
        return if tol.close(c1.radius, c2.radius) {
            Err(Error::IdenticalObjects)
        } else {
            Ok(vec![])
        };
    }
    let u = v / d;
    let a = (d * d + c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * d);
    match circle_tangency(c1, c2, tol) {
        Tangency::External | Tangency::Internal => return Ok(vec![c1.center + u * a]),
        _ => {}
    }
    let h2 = c1.radius * c1.radius - a * a;
    if h2 < 0.0 {
        return Ok(vec![]);
    }
    let m = c1.center + u * a;
    let n = u.rot90() * h2.sqrt();
    Ok(vec![m + n, m - n])
}

fn line_circle(l: &Line, c: &Circle, tol: &Tol) -> Vec<Point> {
    let h = l.eval(c.center);
    let f = l.foot(c.center);
    if tol.zero(h.abs() - c.radius, c.radius) {
        return vec![f];
    }
    if h.abs() > c.radius {
        return vec![];
    }
    let s = (c.radius * c.radius - h * h).sqrt();
    let d = l.direction();
    vec![f - d * s, f + d * s]
}

pub fn intersect(a: &GObject, b: &GObject, tol: &Tol) -> Result<Vec<Point>> {
    use GObject::*;
    match (a, b) {
        (Circle(c1), Circle(c2)) => circle_circle(c1, c2, tol),
        (Line(l), Circle(c)) | (Circle(c), Line(l)) => Ok(line_circle(l, c, tol)),
        (Line(l1), Line(l2)) => match l1.meet(l2) {
            Some(p) => Ok(vec![p]),
            None if l1.approx_eq(l2, tol) => Err(Error::IdenticalObjects),
            None => Ok(vec![]),
        },
        (Point(p), Point(q)) => {
            if tol.close_pt(*p, *q) {
                Err(Error::IdenticalObjects)
            } else {
                Ok(vec![])
            }
        }
        (Point(p), Line(l)) | (Line(l), Point(p)) => {
            Ok(if l.contains(*p, tol) { vec![*p] } else { vec![] })
        }
        (Point(p), Circle(c)) | (Circle(c), Point(p)) => {
            Ok(if c.contains(*p, tol) { vec![*p] } else { vec![] })
        }
    }
}

fn circle_tangency(c1: &Circle, c2: &Circle, tol: &Tol) -> Tangency {
    let d = c1.center.dist(c2.center);
    let scale = d.max(c1.radius + c2.radius);
    if tol.zero(d - (c1.radius + c2.radius), scale) {
        Tangency::External
    } else if !tol.zero(d, scale) && tol.zero(d - (c1.radius - c2.radius).abs(), scale) {
        Tangency::Internal
    } else {
        Tangency::None
    }
}

pub fn tangency(a: &GObject, b: &GObject, tol: &Tol) -> Tangency {
    use GObject::*;
    match (a, b) {
        (Circle(c1), Circle(c2)) => circle_tangency(c1, c2, tol),
        (Line(l), Circle(c)) | (Circle(c), Line(l)) => {
            if tol.zero(l.eval(c.center).abs() - c.radius, c.radius.max(c.center.norm())) {
                Tangency::LineTangent
            } else {
                Tangency::None
            }
        }
        _ => Tangency::None,
    }
}

/// Foot of the bisector from `s` in triangle `sab`: `AT/TB = SA/SB`.
pub fn angle_bisector_foot(s: Point, a: Point, b: Point, tol: &Tol) -> Result<Point> {
    let ab = a.dist(b);
    let (sa, sb) = (s.dist(a), s.dist(b));
    if tol.zero(ab, sa.max(sb)) || tol.zero(sa + sb - ab, ab) {
        return Err(Error::DegenerateTriangle);
    }
    Ok((a * sb + b * sa) / (sa + sb))
}

/// Midpoint of the arc `ab` of `c` that does not contain `avoid`.
pub fn arc_midpoint(c: &Circle, a: Point, b: Point, avoid: Point, tol: &Tol) -> Result<Point> {
    let on = |p: Point| tol.zero(p.dist(c.center) - c.radius, c.radius.max(c.center.norm()));
    if !(on(a) && on(b) && on(avoid)) {
        return Err(Error::PointsNotOnCircle);
    }
    if tol.close_pt(a, b) {
        return Err(Error::IdenticalObjects);
    }
    let chord = Line::through(a, b)?;
    let n = chord.normal();
    let m1 = c.center + n * c.radius;
    let m2 = c.center - n * c.radius;
    Ok(if chord.eval(m1) * chord.eval(avoid) < 0.0 { m1 } else { m2 })
}

/// Distance from `p` to the total-least-squares line through `pts`,
/// maximized over `pts`.
pub fn collinearity_residual(pts: &[Point]) -> f64 {
    let n = pts.len() as f64;
    let m = pts.iter().fold(Point::ORIGIN, |acc, &p| acc + p) / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &p in pts {
        let d = p - m;
        sxx += d.x * d.x;
        sxy += d.x * d.y;
        syy += d.y * d.y;
    }
    // Normal of the best-fit line is the eigenvector of the smaller eigenvalue.
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let normal = pt(-theta.sin(), theta.cos());
    pts.iter().map(|&p| (p - m).dot(normal).abs()).fold(0.0, f64::max)
}

/// Unsigned angle at `vertex` between the rays to `p` and `q`, in `[0, π]`.
pub fn angle_at(vertex: Point, p: Point, q: Point) -> f64 {
    let (u, v) = ((p - vertex).unit(), (q - vertex).unit());
    u.cross(v).atan2(u.dot(v)).abs()
}
