//! Poincaré-disk view of the plane relative to an absolute circle Ω:
//! classification of generalized cycles, distances and radii, hyperbolic
//! inflation, and the hyperbolic centre of a circle.
//!
//! Inflation is computed through a half-plane chart. Oriented inversion in a
//! point `Z ∈ Ω` with power `4R²` sends Ω to the tangent line at the antipode
//! `Z*`; translating `Z*` to the origin and rotating puts the disk onto
//! `x > 0` with Ω on `x = 0`. There a hyperbolic circle is a cycle `(x, y, r)`
//! with `|r| < x` and hyperbolic radius `artanh(|r|/x)`. The boost `𝓛_v`
//! preserves `x = 0` and subtracts `artanh v` from the rapidity
//! `artanh(r/x)`, so inflating by `ρ` is the boost with `v = tanh ρ` (the
//! diameter moves by `ln((1+v)/(1−v))`, twice the radius shift).

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::cycle::{lorentz, Axis, Cycle, Oriented};
use crate::error::{Error, Result};
use crate::geom::{pt, Circle, GObject, Point, Tol};
use crate::pencil::{member_through_point, sharygin_points, CircleEq, Pencil};
use crate::numeric::bisect;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Absolute {
    pub omega: Circle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HClass {
    HCircle,
    Horocycle,
    Equidistant,
    Geodesic,
    HPoint,
    Exterior,
}

impl Absolute {
    pub fn new(omega: Circle) -> Absolute {
        Absolute { omega }
    }

    pub fn unit() -> Absolute {
        Absolute { omega: Circle::new(Point::ORIGIN, 1.0) }
    }

    /// Coordinates in the unit-disk normalization.
    fn local(&self, p: Point) -> Point {
        (p - self.omega.center) / self.omega.radius
    }
}

pub fn classify(obj: &GObject, abs: &Absolute, tol: &Tol) -> HClass {
    let (o, big_r) = (abs.omega.center, abs.omega.radius);
    match *obj {
        GObject::Point(p) => {
            if p.dist(o) < big_r - tol.bound(big_r) {
                HClass::HPoint
            } else {
                HClass::Exterior
            }
        }
        GObject::Line(l) => {
            let h = l.eval(o).abs();
            if tol.zero(h, big_r) {
                HClass::Geodesic
            } else if h < big_r {
                HClass::Equidistant
            } else {
                HClass::Exterior
            }
        }
        GObject::Circle(c) => {
            let d = c.center.dist(o);
            let r = c.radius;
            let scale = (d + r).max(big_r);
            if tol.zero(d * d - big_r * big_r - r * r, scale * scale) {
                HClass::Geodesic
            } else if tol.zero(d + r - big_r, scale) {
                HClass::Horocycle
            } else if d + r < big_r {
                HClass::HCircle
            } else if d < big_r + r - tol.bound(scale) && d > (big_r - r).abs() + tol.bound(scale) {
                HClass::Equidistant
            } else {
                HClass::Exterior
            }
        }
    }
}

/// Distance in the curvature −1 metric of the disk bounded by Ω.
pub fn hyp_distance(p: Point, q: Point, abs: &Absolute) -> Result<f64> {
    let (p, q) = (abs.local(p), abs.local(q));
    if p.norm() >= 1.0 || q.norm() >= 1.0 {
        return Err(Error::OutsideDisk);
    }
    // |1 − p·q̄|² = 1 − 2 p·q + |p|²|q|² for complex p, q.
    let den = (1.0 - 2.0 * p.dot(q) + p.norm2() * q.norm2()).sqrt();
    Ok(2.0 * (p.dist(q) / den).atanh())
}

fn diametral(c: &Circle, abs: &Absolute, tol: &Tol) -> Result<(f64, f64, Point)> {
    if classify(&GObject::Circle(*c), abs, tol) != HClass::HCircle {
        return Err(Error::NotAHyperbolicCircle);
    }
    let v = abs.local(c.center);
    let d = v.norm();
    let r = c.radius / abs.omega.radius;
    let u = if d > 0.0 { v / d } else { pt(1.0, 0.0) };
    Ok((d + r, d - r, u))
}

pub fn hyp_radius(c: &Circle, abs: &Absolute, tol: &Tol) -> Result<f64> {
    let (far, near, _) = diametral(c, abs, tol)?;
    Ok(far.atanh() - near.atanh())
}

/// Hyperbolic centre: the midpoint of the diametral segment along the ray
/// from the disk centre.
pub fn poincare_center(c: &Circle, abs: &Absolute, tol: &Tol) -> Result<Point> {
    let (far, near, u) = diametral(c, abs, tol)?;
    let m = (0.5 * (far.atanh() + near.atanh())).tanh();
    Ok(abs.omega.center + u * (m * abs.omega.radius))
}

/// Inversion that keeps track of orientation; objects through the centre
/// switch between cycles and axes.
pub fn invert_oriented(z: Point, k2: f64, obj: &Oriented) -> Result<Oriented> {
    match *obj {
        Oriented::Cycle(c) => {
            let v = c.center() - z;
            let pw = v.norm2() - c.r * c.r;
            if pw.abs() > 1e-14 * v.norm2().max(c.r * c.r) {
                let centre = z + v * (k2 / pw);
                return Ok(Oriented::Cycle(Cycle::new(centre.x, centre.y, -k2 * c.r / pw)));
            }
            if c.r == 0.0 || v.norm() == 0.0 {
                return Err(Error::DegenerateImage);
            }
            let u = v.unit();
            let dir = u.rot90() * -c.r.signum();
            Ok(Oriented::Axis(Axis::through(z + u * (k2 / (2.0 * c.r.abs())), dir)?))
        }
        Oriented::Axis(a) => {
            let n = a.normal();
            let h = z.dot(n) - a.offset;
            if h.abs() <= 1e-14 * (1.0 + a.offset.abs()) {
                return Ok(Oriented::Axis(a.reversed()));
            }
            let centre = z - n * (k2 / (2.0 * h));
            Ok(Oriented::Cycle(Cycle::new(centre.x, centre.y, -k2 / (2.0 * h))))
        }
    }
}

/// Disk → half-plane chart anchored at a point `Z` of Ω.
#[derive(Clone, Copy, Debug)]
struct Chart {
    z: Point,
    z_star: Point,
    k2: f64,
    cos: f64,
    sin: f64,
}

impl Chart {
    fn new(abs: &Absolute, theta: f64) -> Chart {
        let u = pt(theta.cos(), theta.sin());
        let (o, r) = (abs.omega.center, abs.omega.radius);
        // Rotation by −atan2(−u) takes −u to +x.
        let a = -(-u.y).atan2(-u.x);
        Chart { z: o + u * r, z_star: o - u * r, k2: 4.0 * r * r, cos: a.cos(), sin: a.sin() }
    }

    fn rot(&self, v: Point, inverse: bool) -> Point {
        let s = if inverse { -self.sin } else { self.sin };
        pt(self.cos * v.x - s * v.y, s * v.x + self.cos * v.y)
    }

    fn forward(&self, obj: &Oriented) -> Result<Oriented> {
        Ok(match invert_oriented(self.z, self.k2, obj)? {
            Oriented::Cycle(c) => {
                let p = self.rot(c.center() - self.z_star, false);
                Oriented::Cycle(Cycle::new(p.x, p.y, c.r))
            }
            Oriented::Axis(a) => {
                let d = self.rot(a.direction(), false);
                Oriented::Axis(Axis { dx: d.x, dy: d.y, offset: a.offset - self.z_star.dot(a.normal()) })
            }
        })
    }

    fn back(&self, obj: &Oriented) -> Result<Oriented> {
        let moved = match *obj {
            Oriented::Cycle(c) => {
                let p = self.rot(c.center(), true) + self.z_star;
                Oriented::Cycle(Cycle::new(p.x, p.y, c.r))
            }
            Oriented::Axis(a) => {
                let d = self.rot(a.direction(), true);
                let n = d.rot90();
                Oriented::Axis(Axis { dx: d.x, dy: d.y, offset: a.offset + self.z_star.dot(n) })
            }
        };
        invert_oriented(self.z, self.k2, &moved)
    }
}

/// How far `obj` stays from passing through the chart anchor at `z`.
fn chart_score(z: Point, obj: &Oriented, scale: f64) -> f64 {
    match obj {
        Oriented::Cycle(c) => {
            let v = c.center() - z;
            (v.norm2() - c.r * c.r).abs() / (v.norm2() + c.r * c.r)
        }
        Oriented::Axis(a) => (z.dot(a.normal()) - a.offset).abs() / scale,
    }
}

fn best_chart(obj: &Oriented, abs: &Absolute) -> Result<Chart> {
    let (theta, score) = (0..8)
        .map(|i| {
            let t = i as f64 * FRAC_PI_4;
            (t, chart_score(abs.omega.at_angle(t), obj, abs.omega.radius))
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    if score < 1e-9 {
        return Err(Error::DegenerateImage);
    }
    Ok(Chart::new(abs, theta))
}

/// Extended hyperbolic inflation by `rho`. Inside the disk it adds `rho` to
/// the signed hyperbolic radius; everywhere it stays in the pencil spanned by
/// the input and Ω and preserves oriented tangency.
pub fn hyp_inflate(obj: &Oriented, rho: f64, abs: &Absolute) -> Result<Oriented> {
    let chart = best_chart(obj, abs)?;
    let Oriented::Cycle(m) = chart.forward(obj)? else {
        return Err(Error::DegenerateImage);
    };
    let boosted = lorentz(rho.tanh(), &m).map_err(|_| Error::DegenerateImage)?;
    chart.back(&Oriented::Cycle(boosted))
}

/// The quantity hyperbolic inflation shifts: the signed hyperbolic radius
/// inside the disk, continued outside through the chart (where it is
/// `−artanh(r/x)`, the inversion having flipped orientation). Inflating by
/// twice its negative reverses the cycle.
pub fn rapidity(c: &Cycle, abs: &Absolute) -> Result<f64> {
    let obj = Oriented::Cycle(*c);
    let Oriented::Cycle(m) = best_chart(&obj, abs)?.forward(&obj)? else {
        return Err(Error::DegenerateImage);
    };
    if !(m.r.abs() < m.x.abs()) {
        return Err(Error::DegenerateImage);
    }
    Ok(-(m.r / m.x).atanh())
}

pub fn hyp_inflate_point(p: Point, rho: f64, abs: &Absolute) -> Result<Oriented> {
    hyp_inflate(&Oriented::Cycle(Cycle::new(p.x, p.y, 0.0)), rho, abs)
}

/// Signed hyperbolic radius of a cycle strictly inside the disk.
pub fn signed_hyp_radius(c: &Cycle, abs: &Absolute, tol: &Tol) -> Result<f64> {
    match c.circle() {
        None => Ok(0.0),
        Some(circle) => Ok(c.r.signum() * hyp_radius(&circle, abs, tol)?),
    }
}

/// Independent route to inflation of a cycle inside the disk: walk along the
/// members of pencil(c, Ω) between the hyperbolic centre and Ω, bisecting on
/// the hyperbolic radius.
pub fn hyp_inflate_via_pencil(c: &Cycle, rho: f64, abs: &Absolute, tol: &Tol) -> Result<Cycle> {
    let target = signed_hyp_radius(c, abs, tol)? + rho;
    let centre = match c.circle() {
        Some(circle) => poincare_center(&circle, abs, tol)?,
        None => c.center(),
    };
    if target == 0.0 {
        return Ok(Cycle::new(centre.x, centre.y, 0.0));
    }
    let e1 = match c.circle() {
        Some(circle) => CircleEq::from_circle(&circle),
        None => CircleEq::point_circle(c.center(), 0.0),
    };
    let pen = Pencil::new(e1, CircleEq::from_circle(&abs.omega))?;
    let ray = {
        let v = centre - abs.omega.center;
        if v.norm() > 1e-12 * abs.omega.radius { v.unit() } else { pt(1.0, 0.0) }
    };
    let reach = abs.omega.radius - centre.dist(abs.omega.center);
    let member_at = |s: f64| -> Result<Circle> {
        member_through_point(&pen, centre + ray * s, tol)?.to_circle(tol)
    };
    let radius_at = |s: f64| member_at(s).and_then(|m| hyp_radius(&m, abs, tol)).unwrap_or(f64::NAN);
    let want = target.abs();
    let s = bisect(|s| radius_at(s) - want, reach * 1e-12, reach * (1.0 - 1e-15), 1e-15 * abs.omega.radius);
    let m = member_at(s)?;
    Ok(Cycle::new(m.center.x, m.center.y, target.signum() * m.radius))
}

/// The hyperbolic centre as a limiting point: the one of the pencil with Ω
/// that lies inside the disk.
pub fn inner_sharygin_point(c: &Circle, abs: &Absolute, tol: &Tol) -> Result<Point> {
    let lp = sharygin_points(c, &abs.omega, tol)?;
    let inside = |p: Point| p.dist(abs.omega.center) < abs.omega.radius;
    Ok(if inside(lp.s) { lp.s } else { lp.s_prime })
}
