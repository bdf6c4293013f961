//! Metric properties of a Sharygin point: collinearity of second
//! intersections, the bisector and ratio properties, equal angles, the
//! involution behind them, and the homologies between the two circles.
//!
//! The checks do not verify that `S` really is a Sharygin point; they just
//! measure the property, which is what makes perturbed-`S` negative controls
//! meaningful.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{angle_at, collinearity_residual, polar, power_of_point, pt, Circle, Line, Point, Tol};
use crate::pencil::sharygin_points;

/// The other intersection of line `sp` with `c`; `p` itself for a tangent.
pub fn second_intersection(s: Point, p: Point, c: &Circle, tol: &Tol) -> Result<Point> {
    if !c.contains(p, tol) {
        return Err(Error::LineMissesCircle);
    }
    let v = p - s;
    let sp = v.norm();
    if tol.zero(sp, c.radius) {
        return Err(Error::InvalidInput);
    }
    // Signed positions along the ray from s multiply to Pow_c(s).
    let other = power_of_point(s, c) / sp;
    Ok(s + v * (other / sp))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Property1 {
    pub images: [Point; 4],
    pub collinearity_residual: f64,
}

/// `A, B` on `w1` and `C, D` on `w2`, all on one line; the four second
/// intersections through `S` should be collinear.
pub fn property1_check(
    s: Point,
    w1: &Circle,
    w2: &Circle,
    [a, b, c, d]: [Point; 4],
    tol: &Tol,
) -> Result<Property1> {
    let scale = w1.radius.max(w2.radius);
    if collinearity_residual(&[a, b, c, d]) > tol.scaled(10.0).bound(scale) {
        return Err(Error::InvalidInput);
    }
    let images = [
        second_intersection(s, a, w1, tol)?,
        second_intersection(s, b, w1, tol)?,
        second_intersection(s, c, w2, tol)?,
        second_intersection(s, d, w2, tol)?,
    ];
    Ok(Property1 { images, collinearity_residual: collinearity_residual(&images) })
}

/// Tangency defect of the image line under the tangent-chord case: the chord
/// `AB` of `w1` touches `w2`, and the line through the images of `A, B`
/// should touch `w2` too.
pub fn corollary1_defect(s: Point, w1: &Circle, w2: &Circle, a: Point, b: Point, tol: &Tol) -> Result<f64> {
    let (a2, b2) = (second_intersection(s, a, w1, tol)?, second_intersection(s, b, w1, tol)?);
    let l = Line::through(a2, b2)?;
    Ok((l.eval(w2.center).abs() - w2.radius).abs())
}

/// `|SA/XA − SB/XB|` where `X` is the contact point of `AB` with `w2`.
pub fn property2_check(s: Point, w2: &Circle, a: Point, b: Point, tol: &Tol) -> Result<f64> {
    let l = Line::through(a, b)?;
    if !tol.scaled(10.0).zero(l.eval(w2.center).abs() - w2.radius, w2.radius) {
        return Err(Error::InvalidInput);
    }
    let x = l.foot(w2.center);
    Ok((s.dist(a) / x.dist(a) - s.dist(b) / x.dist(b)).abs())
}

/// `(SA + SB) / AB`.
pub fn property3_ratio(s: Point, a: Point, b: Point) -> f64 {
    (s.dist(a) + s.dist(b)) / a.dist(b)
}

/// `|∠ASC − ∠BSD|`, unsigned angles.
pub fn property4_check(s: Point, [a, b, c, d]: [Point; 4]) -> f64 {
    (angle_at(s, a, c) - angle_at(s, b, d)).abs()
}

/// `t ↦ (αt + β) / (γt − α)` on an affine parameter of a line; `∞` is a
/// legitimate point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineInvolution {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl LineInvolution {
    pub fn apply(&self, t: f64) -> f64 {
        if t.is_infinite() {
            return if self.gamma == 0.0 { f64::INFINITY } else { self.alpha / self.gamma };
        }
        let den = self.gamma * t - self.alpha;
        if den == 0.0 {
            f64::INFINITY
        } else {
            (self.alpha * t + self.beta) / den
        }
    }
}

fn homogeneous(t: f64) -> (f64, f64) {
    if t.is_infinite() { (0.0, 1.0) } else { (1.0, t) }
}

/// The involution swapping both pairs. Pass `f64::INFINITY` for the point at
/// infinity.
pub fn involution_from_pairs(p1: (f64, f64), p2: (f64, f64)) -> Result<LineInvolution> {
    // A pair (t, t') satisfies γ·t·t' − α·(t + t') − β = 0, linear in (α, β, γ).
    let row = |(t, u): (f64, f64)| {
        let ((t0, t1), (u0, u1)) = (homogeneous(t), homogeneous(u));
        Vector3::new(-(t1 * u0 + t0 * u1), -t0 * u0, t1 * u1)
    };
    let (r1, r2) = (row(p1), row(p2));
    let k = r1.cross(&r2);
    let scale = r1.norm() * r2.norm();
    if k.norm() <= 1e-12 * scale {
        return Err(Error::InconsistentPairs);
    }
    let k = k / k.norm();
    let inv = LineInvolution { alpha: k[0], beta: k[1], gamma: k[2] };
    if (inv.alpha * inv.alpha + inv.beta * inv.gamma).abs() <= 1e-12 {
        return Err(Error::InconsistentPairs);
    }
    Ok(inv)
}

/// A plane projectivity on homogeneous `(x : y : w)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectiveMap {
    pub m: Matrix3<f64>,
}

impl ProjectiveMap {
    pub fn apply(&self, p: Point) -> Point {
        let v = self.m * Vector3::new(p.x, p.y, 1.0);
        pt(v[0] / v[2], v[1] / v[2])
    }

    /// Conic image `M⁻ᵀ C M⁻¹`.
    pub fn transport(&self, c: &Matrix3<f64>) -> Option<Matrix3<f64>> {
        let inv = self.m.try_inverse()?;
        Some(inv.transpose() * c * inv)
    }
}

pub fn circle_matrix(c: &Circle) -> Matrix3<f64> {
    let (x, y) = (c.center.x, c.center.y);
    Matrix3::new(1.0, 0.0, -x, 0.0, 1.0, -y, -x, -y, x * x + y * y - c.radius * c.radius)
}

/// `‖A − λB‖ / ‖λB‖` for the best scalar `λ`.
pub fn projective_residual(a: &Matrix3<f64>, b: &Matrix3<f64>) -> f64 {
    let lambda = a.dot(b) / b.dot(b);
    (a - b * lambda).norm() / (b * lambda).norm()
}

/// The two homologies with centre `S` (the first Sharygin point) and axis the
/// common polar, each pinned by sending a point of `w1` to one of the two
/// points where the line through `S` meets `w2`. For concentric circles these
/// are the two homotheties. In general neither of them carries `w1` onto
/// `w2`; `transport_residual` measures by how much.
#[derive(Clone, Copy, Debug)]
pub struct HomologyPair {
    pub center: Point,
    pub axis: Option<Line>,
    pub maps: [ProjectiveMap; 2],
    pub transport_residual: [f64; 2],
}

pub fn sharygin_homologies(w1: &Circle, w2: &Circle, tol: &Tol) -> Result<HomologyPair> {
    let s = sharygin_points(w1, w2, tol)?.s;
    let (c1, c2) = (circle_matrix(w1), circle_matrix(w2));
    let sh = Vector3::new(s.x, s.y, 1.0);
    let finish = |maps: [ProjectiveMap; 2], axis: Option<Line>| {
        let res = maps.map(|m| m.transport(&c1).map_or(f64::INFINITY, |t| projective_residual(&t, &c2)));
        Ok(HomologyPair { center: s, axis, maps, transport_residual: res })
    };

    if tol.close_pt(w1.center, w2.center) {
        let maps = [1.0, -1.0].map(|sign| {
            let k = sign * w2.radius / w1.radius;
            ProjectiveMap {
                m: Matrix3::new(k, 0.0, (1.0 - k) * s.x, 0.0, k, (1.0 - k) * s.y, 0.0, 0.0, 1.0),
            }
        });
        return finish(maps, None);
    }

    let axis = polar(s, w1, tol)?;
    let lh = Vector3::new(axis.a, axis.b, axis.c);
    // A point of w1 whose line through S crosses w2 twice.
    let (a, hits) = (0..64)
        .map(|i| w1.at_angle(i as f64 * std::f64::consts::TAU / 64.0))
        .find_map(|a| {
            let l = Line::through(s, a).ok()?;
            let h = l.eval(w2.center);
            if w2.radius - h.abs() < 1e-3 * w2.radius {
                return None;
            }
            let f = l.foot(w2.center);
            let off = l.direction() * (w2.radius * w2.radius - h * h).sqrt();
            Some((a, [f + off, f - off]))
        })
        .ok_or(Error::NonGeneric)?;
    let ah = Vector3::new(a.x, a.y, 1.0);
    let maps = hits.map(|c| {
        // c = (a + μ·s)/(1 + μ) in affine coordinates.
        let mu = (a - c).dot(c - s) / (c - s).norm2();
        let k = 1.0 + mu * lh.dot(&sh) / lh.dot(&ah);
        ProjectiveMap { m: Matrix3::identity() + sh * lh.transpose() * ((k - 1.0) / lh.dot(&sh)) }
    });
    finish(maps, Some(axis))
}
