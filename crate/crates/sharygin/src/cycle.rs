//! Oriented circles ("cycles") and oriented lines ("axes"), their embedding as
//! points of the (2,1) Minkowski space, inflation and the Lorentz boosts of the
//! cycle space.
//!
//! Conventions: a positive radius means clockwise. The left of an axis is its
//! direction rotated a quarter turn counterclockwise, and `offset` is the
//! signed distance of the line from the origin along that left normal. A
//! cycle touches an axis in an orientation-compatible way exactly when
//! `offset − centre·normal = r`, i.e. the cycle sits to the right of the axis
//! when it is clockwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{pt, tangency, Circle, GObject, Line, Point, Tangency, Tol};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cycle {
    pub x: f64,
    pub y: f64,
    pub r: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub dx: f64,
    pub dy: f64,
    pub offset: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Oriented {
    Cycle(Cycle),
    Axis(Axis),
}

impl Cycle {
    pub const fn new(x: f64, y: f64, r: f64) -> Cycle {
        Cycle { x, y, r }
    }

    pub fn center(&self) -> Point {
        pt(self.x, self.y)
    }

    pub fn from_circle(c: &Circle, clockwise: bool) -> Cycle {
        Cycle::new(c.center.x, c.center.y, if clockwise { c.radius } else { -c.radius })
    }

    /// Underlying unoriented circle; `None` for a point cycle.
    pub fn circle(&self) -> Option<Circle> {
        (self.r != 0.0).then(|| Circle { center: self.center(), radius: self.r.abs() })
    }

    pub fn reversed(&self) -> Cycle {
        Cycle::new(self.x, self.y, -self.r)
    }

    pub fn approx_eq(&self, o: &Cycle, tol: &Tol) -> bool {
        tol.close_pt(self.center(), o.center()) && tol.close(self.r, o.r)
    }
}

impl Axis {
    pub fn new(dx: f64, dy: f64, offset: f64) -> Result<Axis> {
        let n = dx.hypot(dy);
        if !(n > 0.0) || !n.is_finite() || !offset.is_finite() {
            return Err(Error::InvalidInput);
        }
        Ok(Axis { dx: dx / n, dy: dy / n, offset })
    }

    pub fn through(p: Point, dir: Point) -> Result<Axis> {
        let a = Axis::new(dir.x, dir.y, 0.0)?;
        Ok(Axis { offset: p.dot(a.normal()), ..a })
    }

    pub fn direction(&self) -> Point {
        pt(self.dx, self.dy)
    }

    pub fn normal(&self) -> Point {
        self.direction().rot90()
    }

    pub fn line(&self) -> Line {
        let n = self.normal();
        Line::new(n.x, n.y, -self.offset).expect("unit direction")
    }

    pub fn reversed(&self) -> Axis {
        Axis { dx: -self.dx, dy: -self.dy, offset: -self.offset }
    }

    /// Signed distance of `p` to the left of the axis.
    pub fn left_distance(&self, p: Point) -> f64 {
        p.dot(self.normal()) - self.offset
    }

    pub fn approx_eq(&self, o: &Axis, tol: &Tol) -> bool {
        tol.close(self.dx, o.dx) && tol.close(self.dy, o.dy) && tol.close(self.offset, o.offset)
    }
}

impl Oriented {
    pub fn reversed(&self) -> Oriented {
        match self {
            Oriented::Cycle(c) => Oriented::Cycle(c.reversed()),
            Oriented::Axis(a) => Oriented::Axis(a.reversed()),
        }
    }

    pub fn approx_eq(&self, o: &Oriented, tol: &Tol) -> bool {
        match (self, o) {
            (Oriented::Cycle(a), Oriented::Cycle(b)) => a.approx_eq(b, tol),
            (Oriented::Axis(a), Oriented::Axis(b)) => a.approx_eq(b, tol),
            _ => false,
        }
    }
}

pub fn sigma(c: &Cycle) -> MPoint {
    MPoint { x: c.x, y: c.y, z: c.r }
}

pub fn sigma_inv(m: &MPoint) -> Cycle {
    Cycle::new(m.x, m.y, m.z)
}

/// Squared interval `Δx² + Δy² − Δz²`.
pub fn q(u: &MPoint, v: &MPoint) -> f64 {
    let (dx, dy, dz) = (u.x - v.x, u.y - v.y, u.z - v.z);
    dx * dx + dy * dy - dz * dz
}

fn q_scale(a: &Cycle, b: &Cycle) -> f64 {
    (a.center() - b.center()).norm2() + a.r * a.r + b.r * b.r
}

/// Oriented tangency: the interval vanishes and the underlying circles really
/// touch, internally for equal orientations and externally for opposite ones.
pub fn tangent_cycles(c1: &Cycle, c2: &Cycle, tol: &Tol) -> bool {
    if !tol.zero(q(&sigma(c1), &sigma(c2)), q_scale(c1, c2)) {
        return false;
    }
    match (c1.circle(), c2.circle()) {
        (Some(a), Some(b)) => {
            let want = if c1.r * c2.r < 0.0 { Tangency::External } else { Tangency::Internal };
            tangency(&GObject::Circle(a), &GObject::Circle(b), tol) == want
        }
        (Some(a), None) => a.contains(c2.center(), tol),
        (None, Some(b)) => b.contains(c1.center(), tol),
        (None, None) => false,
    }
}

/// Orientation-compatible contact of a cycle with an axis.
pub fn tangent_cycle_axis(c: &Cycle, a: &Axis, tol: &Tol) -> bool {
    tol.zero(a.offset - c.center().dot(a.normal()) - c.r, c.r.abs().max(a.offset.abs()).max(c.center().norm()))
}

/// Length of the oriented common tangent segment, `√q`.
pub fn tangent_length(c1: &Cycle, c2: &Cycle, tol: &Tol) -> Result<f64> {
    let v = q(&sigma(c1), &sigma(c2));
    if v < -tol.bound(q_scale(c1, c2)) {
        return Err(Error::NoCommonTangentAxis);
    }
    Ok(v.max(0.0).sqrt())
}

/// Adds `rho` to the signed radius, or moves an axis `rho` to its left.
pub fn inflate(obj: &Oriented, rho: f64) -> Oriented {
    match *obj {
        Oriented::Cycle(c) => Oriented::Cycle(Cycle::new(c.x, c.y, c.r + rho)),
        Oriented::Axis(a) => Oriented::Axis(Axis { offset: a.offset + rho, ..a }),
    }
}

/// Boost of speed `v` along the x-axis, acting on cycles.
pub fn lorentz(v: f64, c: &Cycle) -> Result<Cycle> {
    if !(v.abs() < 1.0) {
        return Err(Error::SpeedOutOfRange);
    }
    let g = (1.0 - v * v).sqrt();
    Ok(Cycle::new((c.x - v * c.r) / g, c.y, (c.r - v * c.x) / g))
}
