//! Coaxial pencils over circle equations `a(x²+y²) + bx + cy + d = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{pt, Circle, Line, Point, Tol};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleEq {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// What a circle equation actually describes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EqKind {
    Real(Circle),
    Point(Point),
    Imaginary,
    Line(Line),
}

impl CircleEq {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<CircleEq> {
        let e = CircleEq { a, b, c, d };
        if e.max_abs() == 0.0 || !e.to_array().iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput);
        }
        Ok(e)
    }

    pub fn from_circle(c: &Circle) -> CircleEq {
        Self::point_circle(c.center, c.radius)
    }

    /// The radius-zero circle at `p`; `r` other than zero gives the ordinary circle.
    pub fn point_circle(p: Point, r: f64) -> CircleEq {
        CircleEq { a: 1.0, b: -2.0 * p.x, c: -2.0 * p.y, d: p.norm2() - r * r }
    }

    pub fn from_line(l: &Line) -> CircleEq {
        CircleEq { a: 0.0, b: l.a, c: l.b, d: l.c }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn from_array(v: [f64; 4]) -> CircleEq {
        CircleEq { a: v[0], b: v[1], c: v[2], d: v[3] }
    }

    fn max_abs(&self) -> f64 {
        self.to_array().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn eval(&self, p: Point) -> f64 {
        self.a * p.norm2() + self.b * p.x + self.c * p.y + self.d
    }

    pub fn scale(&self, k: f64) -> CircleEq {
        CircleEq::from_array(self.to_array().map(|v| v * k))
    }

    pub fn add(&self, o: &CircleEq) -> CircleEq {
        CircleEq { a: self.a + o.a, b: self.b + o.b, c: self.c + o.c, d: self.d + o.d }
    }

    /// Representative with the largest-magnitude coefficient equal to 1.
    pub fn canonical(&self) -> CircleEq {
        let v = self.to_array();
        let big = v.iter().copied().max_by(|x, y| x.abs().total_cmp(&y.abs())).unwrap();
        self.scale(1.0 / big)
    }

    /// Centre and squared radius, when the equation is not a line.
    pub fn center_radius2(&self) -> Option<(Point, f64)> {
        if self.a.abs() <= 1e-14 * self.max_abs() {
            return None;
        }
        let c = pt(-self.b / (2.0 * self.a), -self.c / (2.0 * self.a));
        Some((c, c.norm2() - self.d / self.a))
    }

    pub fn kind(&self, tol: &Tol) -> EqKind {
        match self.center_radius2() {
            None => match Line::new(self.b, self.c, self.d) {
                Ok(l) => EqKind::Line(l),
                Err(_) => EqKind::Imaginary,
            },
            Some((c, r2)) => {
                let scale = c.norm2().max(r2.abs()).max(1.0);
                if tol.zero(r2, scale) {
                    EqKind::Point(c)
                } else if r2 < 0.0 {
                    EqKind::Imaginary
                } else {
                    EqKind::Real(Circle { center: c, radius: r2.sqrt() })
                }
            }
        }
    }

    pub fn to_circle(&self, tol: &Tol) -> Result<Circle> {
        match self.kind(tol) {
            EqKind::Real(c) => Ok(c),
            _ => Err(Error::NotACircle),
        }
    }

    /// Projective equality: the 4-vectors are parallel.
    pub fn approx_eq(&self, o: &CircleEq, tol: &Tol) -> bool {
        let (u, v) = (self.canonical().to_array(), o.canonical().to_array());
        u.iter().zip(v).all(|(x, y)| tol.close(*x, y))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pencil {
    pub e1: CircleEq,
    pub e2: CircleEq,
}

/// Limiting points of a non-intersecting pair, ordered by `x` then `y`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitingPair {
    pub s: Point,
    pub s_prime: Point,
}

fn norm4(v: [f64; 4]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl Pencil {
    pub fn new(e1: CircleEq, e2: CircleEq) -> Result<Pencil> {
        if span_residual(&e2, &e1) <= 1e-12 {
            return Err(Error::InvalidInput);
        }
        Ok(Pencil { e1, e2 })
    }

    pub fn of_circles(c1: &Circle, c2: &Circle) -> Result<Pencil> {
        Pencil::new(CircleEq::from_circle(c1), CircleEq::from_circle(c2))
    }

    /// Distance of the normalized 4-vector `e` from the span of the pencil.
    pub fn residual(&self, e: &CircleEq) -> f64 {
        let (u, v) = (self.e1.to_array(), self.e2.to_array());
        let w = e.to_array();
        let nw = norm4(w);
        let w = w.map(|x| x / nw);
        // Gram–Schmidt on (u, v), then project w.
        let nu = norm4(u);
        let u = u.map(|x| x / nu);
        let pv: f64 = (0..4).map(|i| u[i] * v[i]).sum();
        let mut v2 = [0.0; 4];
        for i in 0..4 {
            v2[i] = v[i] - pv * u[i];
        }
        let nv = norm4(v2);
        let v2 = v2.map(|x| x / nv);
        let (pu, pw): (f64, f64) = ((0..4).map(|i| u[i] * w[i]).sum(), (0..4).map(|i| v2[i] * w[i]).sum());
        let mut r = [0.0; 4];
        for i in 0..4 {
            r[i] = w[i] - pu * u[i] - pw * v2[i];
        }
        norm4(r)
    }
}

/// Distance of normalized `e` from the line spanned by `f`.
fn span_residual(e: &CircleEq, f: &CircleEq) -> f64 {
    let (u, w) = (f.to_array(), e.to_array());
    let (nu, nw) = (norm4(u), norm4(w));
    let p: f64 = (0..4).map(|i| u[i] * w[i]).sum::<f64>() / (nu * nw);
    (1.0 - p * p).max(0.0).sqrt()
}

/// `(1−t)·e1 + t·e2`. At `t = ±∞` this is the projective limit `e2 − e1`,
/// the one member no finite `t` reaches.
pub fn pencil_member(p: &Pencil, t: f64) -> CircleEq {
    if t.is_infinite() {
        return p.e2.add(&p.e1.scale(-1.0));
    }
    p.e1.scale(1.0 - t).add(&p.e2.scale(t))
}

/// The two limiting points of the pencil spanned by non-intersecting `c1`, `c2`.
pub fn sharygin_points(c1: &Circle, c2: &Circle, tol: &Tol) -> Result<LimitingPair> {
    let v = c2.center - c1.center;
    let d = v.norm();
    let (r1, r2) = (c1.radius, c2.radius);
    let scale = d.max(r1).max(r2);
    if tol.zero(d, scale) {
        if tol.close(r1, r2) {
            return Err(Error::IntersectingCircles);
        }
        return Ok(LimitingPair { s: c1.center, s_prime: c1.center });
    }
    let apart = d - (r1 + r2) > tol.bound(scale);
    let nested = (r1 - r2).abs() - d > tol.bound(scale);
    if !(apart || nested) {
        return Err(Error::IntersectingCircles);
    }
    let u = v / d;
    // Along the centre line the limiting points x satisfy x² − 2·x0·x + r1² = 0.
    let x0 = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let s = (x0 * x0 - r1 * r1).max(0.0).sqrt();
    let big = x0 + x0.signum() * s;
    let small = r1 * r1 / big;
    let (p, q) = (c1.center + u * small, c1.center + u * big);
    Ok(order_pair(p, q, tol))
}

fn order_pair(p: Point, q: Point, tol: &Tol) -> LimitingPair {
    let q_first = if tol.close(p.x, q.x) { q.y < p.y } else { q.x < p.x };
    if q_first {
        LimitingPair { s: q, s_prime: p }
    } else {
        LimitingPair { s: p, s_prime: q }
    }
}

/// The unique member whose equation vanishes at `p`.
pub fn member_through_point(pen: &Pencil, p: Point, tol: &Tol) -> Result<CircleEq> {
    let m = pen.e1.scale(pen.e2.eval(p)).add(&pen.e2.scale(-pen.e1.eval(p)));
    let big = m.max_abs();
    let ref_scale = pen.e1.max_abs() * pen.e2.max_abs() * (1.0 + p.norm2());
    if tol.zero(big, ref_scale) || tol.zero(m.a, big) {
        return Err(Error::OnRadicalAxis);
    }
    Ok(m.canonical())
}

/// `(2a·l_c − l_a·b − l_b·c)² − (b² + c² − 4ad)`: zero iff the circle is tangent
/// to the normalized line `l`.
fn tangency_form(l: &Line, e: &CircleEq) -> f64 {
    let k = 2.0 * e.a * l.c - l.a * e.b - l.b * e.c;
    k * k - (e.b * e.b + e.c * e.c - 4.0 * e.a * e.d)
}

/// Real circles of the pencil tangent to `l`. Tangency is a binary quadratic
/// form in the homogeneous pencil coordinates, so there are at most two.
pub fn member_tangent_to_line(pen: &Pencil, l: &Line, tol: &Tol) -> Vec<CircleEq> {
    let (e1, e2) = (pen.e1.scale(1.0 / pen.e1.max_abs()), pen.e2.scale(1.0 / pen.e2.max_abs()));
    let alpha = tangency_form(l, &e1);
    let gamma = tangency_form(l, &e2);
    let beta = tangency_form(l, &e1.add(&e2)) - alpha - gamma;
    let disc = beta * beta - 4.0 * alpha * gamma;
    let form_scale = alpha.abs().max(beta.abs()).max(gamma.abs());
    if form_scale == 0.0 || disc < -1e-14 * form_scale * form_scale {
        return vec![];
    }
    let sq = disc.max(0.0).sqrt();
    let q = -0.5 * (beta + if beta >= 0.0 { sq } else { -sq });
    let mut out: Vec<CircleEq> = vec![];
    for (lam, mu) in [(q, alpha), (gamma, q)] {
        if lam == 0.0 && mu == 0.0 {
            continue;
        }
        let m = e1.scale(lam).add(&e2.scale(mu));
        let Some((c, r2)) = m.center_radius2() else { continue };
        if r2 <= tol.bound(c.norm2().max(1.0)) {
            continue;
        }
        let m = m.canonical();
        if !out.iter().any(|o| o.approx_eq(&m, tol)) {
            out.push(m);
        }
    }
    out
}

/// `|PS|² / Pow_c(P)`. Two points lie on a common member of pencil(S, c) iff
/// their ratios agree.
pub fn in_pencil_ratio(p: Point, s: Point, c: &Circle, tol: &Tol) -> Result<f64> {
    let pw = crate::geom::power_of_point(p, c);
    if tol.zero(pw, c.radius * c.radius + p.dist(c.center).powi(2)) {
        return Err(Error::ZeroDenominator);
    }
    Ok((p - s).norm2() / pw)
}
