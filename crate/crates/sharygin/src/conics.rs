//! Conics as symmetric 3×3 forms up to scale, including line pairs and
//! double lines, plus the two-pencil intersection lemma, principal axes, and
//! circles touching a central conic twice.

use nalgebra::{Matrix3, SMatrix, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{pt, Circle, Line, Point, Tol};

/// `pᵀQp = 0` for `p = (x, y, 1)`; stored with unit Frobenius norm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 6]", try_from = "[f64; 6]")]
pub struct ConicQ {
    pub q: Matrix3<f64>,
}

impl From<ConicQ> for [f64; 6] {
    fn from(c: ConicQ) -> [f64; 6] {
        c.coeffs()
    }
}

impl TryFrom<[f64; 6]> for ConicQ {
    type Error = Error;

    fn try_from(v: [f64; 6]) -> Result<ConicQ> {
        ConicQ::from_coeffs(v)
    }
}

impl ConicQ {
    pub fn new(m: Matrix3<f64>) -> Result<ConicQ> {
        let n = m.norm();
        if !(n > 0.0) || !n.is_finite() || (m - m.transpose()).norm() > 1e-12 * n {
            return Err(Error::InvalidInput);
        }
        Ok(ConicQ { q: (m + m.transpose()) / (2.0 * n) })
    }

    /// `A x² + 2B xy + C y² + 2D x + 2E y + F`.
    pub fn from_coeffs([a, b, c, d, e, f]: [f64; 6]) -> Result<ConicQ> {
        ConicQ::new(Matrix3::new(a, b, d, b, c, e, d, e, f))
    }

    pub fn coeffs(&self) -> [f64; 6] {
        let q = &self.q;
        [q[(0, 0)], q[(0, 1)], q[(1, 1)], q[(0, 2)], q[(1, 2)], q[(2, 2)]]
    }

    pub fn eval(&self, p: Point) -> f64 {
        let v = Vector3::new(p.x, p.y, 1.0);
        v.dot(&(self.q * v))
    }

    pub fn gradient(&self, p: Point) -> Point {
        let g = self.q * Vector3::new(p.x, p.y, 1.0);
        pt(2.0 * g[0], 2.0 * g[1])
    }

    pub fn rank(&self, tol: f64) -> usize {
        let sv = self.q.singular_values();
        let top = sv.max();
        sv.iter().filter(|s| **s > tol * top).count()
    }

    pub fn add(&self, k: f64, o: &ConicQ) -> Result<ConicQ> {
        ConicQ::new(self.q + o.q * k)
    }

    /// Isometric 6-vector of the upper triangle (off-diagonals times √2).
    fn vec6(&self) -> [f64; 6] {
        let s = std::f64::consts::SQRT_2;
        let [a, b, c, d, e, f] = self.coeffs();
        [a, s * b, c, s * d, s * e, f]
    }

    fn from_vec6(v: &[f64]) -> Result<ConicQ> {
        let s = std::f64::consts::SQRT_2;
        ConicQ::from_coeffs([v[0], v[1] / s, v[2], v[3] / s, v[4] / s, v[5]])
    }

    /// Distance between the two projective classes (sign-insensitive).
    pub fn projective_distance(&self, o: &ConicQ) -> f64 {
        (self.q - o.q).norm().min((self.q + o.q).norm())
    }

    /// Least-squares distance of this (unit) conic from `span{a, b}`.
    pub fn span_residual(&self, a: &ConicQ, b: &ConicQ) -> f64 {
        let m = SMatrix::<f64, 6, 2>::from_columns(&[a.vec6().into(), b.vec6().into()]);
        let target = nalgebra::Vector6::from(self.vec6());
        let svd = m.svd(true, true);
        let x = svd.solve(&target, 1e-14).expect("svd solve");
        (m * x - target).norm()
    }
}

pub fn line_pair(l1: &Line, l2: &Line) -> ConicQ {
    let (u, v) = (Vector3::from(l1.coeffs()), Vector3::from(l2.coeffs()));
    ConicQ::new((u * v.transpose() + v * u.transpose()) / 2.0).expect("nonzero line pair")
}

pub fn double_line(l: &Line) -> ConicQ {
    let u = Vector3::from(l.coeffs());
    ConicQ::new(u * u.transpose()).expect("nonzero double line")
}

pub fn conic_from_circle(c: &Circle) -> ConicQ {
    let (x, y) = (c.center.x, c.center.y);
    ConicQ::new(Matrix3::new(1.0, 0.0, -x, 0.0, 1.0, -y, -x, -y, x * x + y * y - c.radius * c.radius))
        .expect("circle matrix is nonzero")
}

pub fn circle_from_conic(c: &ConicQ, tol: &Tol) -> Result<Circle> {
    let [a, b, cc, d, e, f] = c.coeffs();
    if !tol.close(a, cc) || !tol.zero(b, a.abs()) || tol.zero(a, 1.0) {
        return Err(Error::NotACircle);
    }
    let centre = pt(-d / a, -e / a);
    let r2 = centre.norm2() - f / a;
    if r2 <= 0.0 {
        return Err(Error::NotACircle);
    }
    Circle::try_new(centre, r2.sqrt())
}

/// The conic lying in both `span{c1, c3}` and `span{f12, f23}`.
pub fn conic_pencil_lemma(c1: &ConicQ, c3: &ConicQ, f12: &ConicQ, f23: &ConicQ) -> Result<ConicQ> {
    let cols = [c1.vec6(), c3.vec6(), f12.vec6().map(|x| -x), f23.vec6().map(|x| -x)];
    let m = SMatrix::<f64, 6, 4>::from_columns(&cols.map(nalgebra::Vector6::from));
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let top = svd.singular_values.max();
    let null: Vec<usize> = (0..4).filter(|&i| svd.singular_values[i] <= 1e-10 * top).collect();
    match null.len() {
        0 => Err(Error::NoIntersection),
        1 => {
            let k = v_t.row(null[0]);
            let v: Vec<f64> = (0..6).map(|i| k[0] * cols[0][i] + k[1] * cols[1][i]).collect();
            ConicQ::from_vec6(&v).map_err(|_| Error::NonGeneric)
        }
        _ => Err(Error::NonGeneric),
    }
}

/// Centre, eigen-directions and the constant term of a central conic: in the
/// frame `centre + u·axes[0] + w·axes[1]` the equation is
/// `λ₀u² + λ₁w² + f0 = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Principal {
    pub center: Point,
    pub lambda: [f64; 2],
    pub axes: [Point; 2],
    pub f0: f64,
}

pub fn principal(c: &ConicQ) -> Result<Principal> {
    let [a, b, cc, d, e, f] = c.coeffs();
    let det = a * cc - b * b;
    if det.abs() <= 1e-12 * (a * a + 2.0 * b * b + cc * cc) {
        return Err(Error::NonCentralConic);
    }
    let center = pt((b * e - cc * d) / det, (b * d - a * e) / det);
    let f0 = f + d * center.x + e * center.y;
    // Symmetric 2×2 eigen-decomposition, ascending eigenvalues.
    let (m, h) = ((a + cc) / 2.0, ((a - cc) / 2.0).hypot(b));
    let lambda = [m - h, m + h];
    let theta = 0.5 * (2.0 * b).atan2(a - cc);
    let big = pt(theta.cos(), theta.sin());
    Ok(Principal { center, lambda, axes: [big.rot90(), big], f0 })
}

pub fn conic_center(c: &ConicQ) -> Result<Point> {
    Ok(principal(c)?.center)
}

pub fn conic_axes(c: &ConicQ) -> Result<(Line, Line)> {
    let p = principal(c)?;
    Ok((Line::from_point_dir(p.center, p.axes[0])?, Line::from_point_dir(p.center, p.axes[1])?))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bitangent {
    pub circle: Circle,
    pub contacts: [Point; 2],
}

/// Circle centred at `centre + t·axes[which]` touching the conic at two points
/// symmetric about that axis. Eliminating `w²` with the conic leaves a
/// quadratic in `u` whose double root is `u* = t·λ'/(λ' − λ)`; the contact is
/// real iff `w*² > 0`.
pub fn bitangent_circle_on_axis(gamma: &ConicQ, t: f64, which: usize) -> Result<Bitangent> {
    if which > 1 {
        return Err(Error::InvalidInput);
    }
    let p = principal(gamma)?;
    let (l1, l2) = (p.lambda[which], p.lambda[1 - which]);
    let (e1, e2) = (p.axes[which], p.axes[1 - which]);
    let scale = l1.abs().max(l2.abs());
    if (l1 - l2).abs() <= 1e-12 * scale {
        // A circle: only the concentric limit exists.
        let r2 = -p.f0 / l1;
        if t.abs() > 1e-12 * r2.abs().sqrt().max(1.0) || !(r2 > 0.0) {
            return Err(Error::NoRealBitangent);
        }
        let r = r2.sqrt();
        let circle = Circle::try_new(p.center, r)?;
        return Ok(Bitangent { circle, contacts: [p.center + e2 * r, p.center - e2 * r] });
    }
    let u = t * l2 / (l2 - l1);
    let w2 = -(p.f0 + l1 * u * u) / l2;
    if !(w2 > 0.0) {
        return Err(Error::NoRealBitangent);
    }
    let w = w2.sqrt();
    let radius = ((u - t) * (u - t) + w2).sqrt();
    let centre = p.center + e1 * t;
    let foot = p.center + e1 * u;
    Ok(Bitangent { circle: Circle::try_new(centre, radius)?, contacts: [foot + e2 * w, foot - e2 * w] })
}

/// Centres of circles touching one of `w`, `w1` from inside and the other
/// from outside: an ellipse with foci at the two centres.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CenterLocus {
    pub focus1: Point,
    pub focus2: Point,
    pub length_sum: f64,
}

impl CenterLocus {
    /// Point of the ellipse at eccentric angle `theta`, and the radius of the
    /// circle centred there.
    pub fn sample(&self, theta: f64, w: &Circle) -> (Point, f64) {
        let c = (self.focus1 + self.focus2) / 2.0;
        let a = self.length_sum / 2.0;
        let f = self.focus1.dist(self.focus2) / 2.0;
        let b = (a * a - f * f).sqrt();
        let u = if f > 0.0 { (self.focus2 - self.focus1) / (2.0 * f) } else { pt(1.0, 0.0) };
        let p = c + u * (a * theta.cos()) + u.rot90() * (b * theta.sin());
        (p, (w.radius - p.dist(w.center)).abs())
    }
}

pub fn tangent_center_locus(w: &Circle, w1: &Circle) -> Result<CenterLocus> {
    let sum = w.radius + w1.radius;
    if w.center.dist(w1.center) >= sum {
        return Err(Error::EmptyFamily);
    }
    Ok(CenterLocus { focus1: w.center, focus2: w1.center, length_sum: sum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{tangency, GObject, Tangency};

    const T: Tol = Tol { abs_eps: 1e-9, rel_eps: 1e-9 };

    fn line(a: f64, b: f64, c: f64) -> Line {
        Line::new(a, b, c).unwrap()
    }

    #[test]
    fn degenerate_members() {
        let xy = line_pair(&line(1.0, 0.0, 0.0), &line(0.0, 1.0, 0.0));
        let want = ConicQ::from_coeffs([0.0, 1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(xy.projective_distance(&want) < 1e-15);
        let l = line(1.0, -2.0, 0.5);
        assert!(line_pair(&l, &l).projective_distance(&double_line(&l)) < 1e-15);
        assert_eq!(double_line(&l).rank(1e-12), 1);
        for p in [pt(0.0, 3.0), pt(-2.0, 0.0)] {
            assert!(xy.eval(p).abs() < 1e-15);
        }
        let x0 = double_line(&line(1.0, 0.0, 0.0));
        assert!(x0.projective_distance(&ConicQ::from_coeffs([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap()) < 1e-15);
    }

    #[test]
    fn circle_round_trip() {
        let u = conic_from_circle(&Circle::new(Point::ORIGIN, 1.0));
        assert!(u.projective_distance(&ConicQ::from_coeffs([1.0, 0.0, 1.0, 0.0, 0.0, -1.0]).unwrap()) < 1e-15);
        let c = Circle::new(pt(1.5, -0.3), 0.7);
        let back = circle_from_conic(&conic_from_circle(&c), &T).unwrap();
        assert!(back.center.dist(c.center) < 1e-12 && (back.radius - c.radius).abs() < 1e-12);
        let ellipse = ConicQ::from_coeffs([0.25, 0.0, 1.0, 0.0, 0.0, -1.0]).unwrap();
        assert_eq!(circle_from_conic(&ellipse, &T), Err(Error::NotACircle));
    }

    #[test]
    fn lemma_shared_member() {
        let c1 = conic_from_circle(&Circle::new(Point::ORIGIN, 1.0));
        let c3 = ConicQ::from_coeffs([1.0, 0.2, 3.0, -1.0, 0.5, 0.1]).unwrap();
        let f23 = ConicQ::from_coeffs([-0.4, 1.1, 0.3, 0.9, -0.2, 0.7]).unwrap();
        let out = conic_pencil_lemma(&c1, &c3, &c1, &f23).unwrap();
        assert!(out.projective_distance(&c1) < 1e-10);
        // With f23 inside span{c3, c1} the two spans coincide.
        let f23 = c3.add(0.7, &c1).unwrap();
        assert_eq!(conic_pencil_lemma(&c1, &c3, &c1, &f23), Err(Error::NonGeneric));
    }

    #[test]
    fn lemma_on_four_point_pencil() {
        let (a, b, c, d) = (pt(0.1, 1.0), pt(1.2, 0.3), pt(-0.4, -1.1), pt(-1.3, 0.2));
        let l = |p, q| Line::through(p, q).unwrap();
        let f12 = line_pair(&l(a, b), &l(c, d));
        let f23 = line_pair(&l(a, c), &l(b, d));
        let c1 = f12.add(0.8, &f23).unwrap();
        let c3 = f12.add(-2.5, &f23).unwrap();
        // span{c1, c3} = span{f12, f23}: the lemma needs a third member.
        assert!(matches!(conic_pencil_lemma(&c1, &c3, &f12, &f23), Err(Error::NonGeneric)));
        // The third degenerate member of the pencil through a, b, c, d.
        let want = line_pair(&l(a, d), &l(b, c));
        let other = ConicQ::from_coeffs([0.3, -1.2, 0.8, 0.4, 2.0, -0.6]).unwrap();
        let out = conic_pencil_lemma(&want, &other, &f12, &f23).unwrap();
        assert!(out.projective_distance(&want) < 1e-9);
        for p in [a, b, c, d, l(a, d).meet(&l(b, c)).unwrap()] {
            assert!(out.eval(p).abs() < 1e-12);
        }
    }

    #[test]
    fn centre_and_axes() {
        let e = ConicQ::from_coeffs([0.25, 0.0, 1.0, 0.0, 0.0, -1.0]).unwrap();
        assert!(T.close_pt(conic_center(&e).unwrap(), Point::ORIGIN));
        let (a0, a1) = conic_axes(&e).unwrap();
        let lines = [a0, a1];
        assert!(lines.iter().any(|l| l.approx_eq(&line(1.0, 0.0, 0.0), &T)));
        assert!(lines.iter().any(|l| l.approx_eq(&line(0.0, 1.0, 0.0), &T)));
        // 45° rotation of x²/4 + y² = 1.
        let r = ConicQ::from_coeffs([0.625, -0.375, 0.625, 0.0, 0.0, -1.0]).unwrap();
        let p = principal(&r).unwrap();
        for ax in p.axes {
            assert!((ax.x.abs() - ax.y.abs()).abs() < 1e-12);
        }
        let parabola = ConicQ::from_coeffs([1.0, 0.0, 0.0, 0.0, -0.5, 0.0]).unwrap();
        assert_eq!(conic_center(&parabola), Err(Error::NonCentralConic));
    }

    fn contact_residuals(g: &ConicQ, b: &Bitangent) -> f64 {
        let mut worst: f64 = 0.0;
        for p in b.contacts {
            let gr = g.gradient(p).unit();
            let rad = (p - b.circle.center).unit();
            worst = worst
                .max(g.eval(p).abs())
                .max((p.dist(b.circle.center) - b.circle.radius).abs())
                .max(gr.cross(rad).abs());
        }
        worst
    }

    #[test]
    fn bitangent_examples() {
        let circle = conic_from_circle(&Circle::new(Point::ORIGIN, 2.0));
        let b = bitangent_circle_on_axis(&circle, 0.0, 0).unwrap();
        assert!((b.circle.radius - 2.0).abs() < 1e-12);
        assert!(b.contacts[0].dist(-b.contacts[1]) < 1e-12);

        let e = ConicQ::from_coeffs([0.25, 0.0, 1.0, 0.0, 0.0, -1.0]).unwrap();
        let p = principal(&e).unwrap();
        let major = (0..2).find(|&i| p.axes[i].x.abs() > 0.9).unwrap();
        let b = bitangent_circle_on_axis(&e, 0.4, major).unwrap();
        assert!(contact_residuals(&e, &b) < 1e-8);
        assert!((b.contacts[0].x - b.contacts[1].x).abs() < 1e-12);
        assert!((b.contacts[0].y + b.contacts[1].y).abs() < 1e-12);
        // Lagrange oracle: the contact is the nearest point of the ellipse to the centre.
        let c = b.circle.center;
        let nearest = (0..200_000)
            .map(|i| {
                let th = i as f64 * std::f64::consts::TAU / 200_000.0;
                pt(2.0 * th.cos(), th.sin()).dist(c)
            })
            .fold(f64::INFINITY, f64::min);
        assert!((nearest - b.circle.radius).abs() < 1e-9);
        // Far along the major axis no double contact exists.
        assert_eq!(bitangent_circle_on_axis(&e, 1.9, major), Err(Error::NoRealBitangent));
    }

    #[test]
    fn bitangent_on_hyperbola_and_rotated() {
        let g = ConicQ::from_coeffs([1.0, 0.3, -0.5, 0.2, -0.1, -1.0]).unwrap();
        for which in 0..2 {
            for t in [-3.0, -1.0, 0.5, 2.0] {
                if let Ok(b) = bitangent_circle_on_axis(&g, t, which) {
                    assert!(contact_residuals(&g, &b) < 1e-8);
                    let chord = (b.contacts[0] - b.contacts[1]).unit();
                    assert!(chord.dot(principal(&g).unwrap().axes[which]).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn centre_locus() {
        let (w, w1) = (Circle::new(Point::ORIGIN, 3.0), Circle::new(pt(1.0, 0.0), 1.0));
        let loc = tangent_center_locus(&w, &w1).unwrap();
        assert_eq!(loc.length_sum, 4.0);
        for i in 0..20 {
            let (p, r) = loc.sample(i as f64 * 0.31, &w);
            let g = GObject::Circle(Circle::new(p, r));
            assert_eq!(tangency(&g, &GObject::Circle(w), &T), Tangency::Internal);
            assert_eq!(tangency(&g, &GObject::Circle(w1), &T), Tangency::External);
        }
        let conc = tangent_center_locus(&Circle::new(Point::ORIGIN, 3.0), &Circle::new(Point::ORIGIN, 1.0)).unwrap();
        let (p, _) = conc.sample(1.0, &w);
        assert!((p.norm() - 2.0).abs() < 1e-12);
        assert_eq!(
            tangent_center_locus(&Circle::new(Point::ORIGIN, 1.0), &Circle::new(pt(3.0, 0.0), 1.0)),
            Err(Error::EmptyFamily)
        );
    }
}
