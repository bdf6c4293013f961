use std::f64::consts::{PI, TAU};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::scenario::{Report, Scenario, SceneObject};
use crate::error::{Error, Result};
use crate::geom::{angle_at, circumcircle, polar, pt, Circle, Line, Point, Tol};
use crate::numeric::{nelder_mead2, scan_roots};
use crate::pencil::sharygin_points;
use crate::props::{property3_ratio, second_intersection};

pub const OLYMPIAD1_SOLVE_TOL: f64 = 1e-10;
pub const OLYMPIAD1_TOL: f64 = 1e-7;
pub const OLYMPIAD1_POLAR_TOL: f64 = 1e-8;
pub const OLYMPIAD2_TOL: f64 = 1e-7;

/// Distance between the canonical coefficient vectors of two lines, the
/// constant term measured against `scale`.
pub fn line_residual(l: &Line, m: &Line, scale: f64) -> f64 {
    let ([a, b, c], [p, q, r]) = (l.coeffs(), m.coeffs());
    let d = |s: f64| (a - s * p).abs().max((b - s * q).abs()).max((c - s * r).abs() / scale);
    d(1.0).min(d(-1.0))
}

/// Largest gap between the polars of `p` with respect to `c1` and `c2`.
pub fn polar_coincidence(p: Point, c1: &Circle, c2: &Circle, scale: f64) -> Result<f64> {
    let tol = Tol::default();
    Ok(line_residual(&polar(p, c1, &tol)?, &polar(p, c2, &tol)?, scale))
}

pub fn incircle(a: Point, b: Point, c: Point) -> Result<Circle> {
    let (la, lb, lc) = (b.dist(c), c.dist(a), a.dist(b));
    let per = la + lb + lc;
    let area = (b - a).cross(c - a).abs() / 2.0;
    if area <= 1e-12 * per * per {
        return Err(Error::DegenerateTriangle);
    }
    Ok(Circle::new((a * la + b * lb + c * lc) / per, 2.0 * area / per))
}

/// A triangle on a circle of radius between 0.5 and 2 with every angle at
/// least 20°.
fn gen_triangle(rng: &mut ChaCha8Rng) -> [Point; 3] {
    loop {
        let o = pt(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let k = rng.gen_range(0.5..2.0);
        let v: [Point; 3] = std::array::from_fn(|_| {
            let t = rng.gen_range(0.0..TAU);
            o + pt(t.cos(), t.sin()) * k
        });
        let [a, b, c] = v;
        if [angle_at(a, b, c), angle_at(b, c, a), angle_at(c, a, b)].iter().all(|&x| x > PI / 9.0) {
            return v;
        }
    }
}

/// Olympiad 1 configuration at parameter `λ`: `D = A + λ(B − A)`, and `E`
/// on `AC` with `AD·AB = AE·AC` so that `BCED` is cyclic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Olympiad1 {
    pub a: Point,
    pub b: Point,
    pub c: Point,
    pub d: Point,
    pub e: Point,
    pub k: Point,
    pub l: Point,
    pub m: Point,
    pub klm: Circle,
}

impl Olympiad1 {
    /// Admissible `λ`: both `D` and `E` inside their sides.
    pub fn lambda_max(a: Point, b: Point, c: Point) -> f64 {
        (a.dist(c).powi(2) / a.dist(b).powi(2)).min(1.0)
    }

    pub fn build(a: Point, b: Point, c: Point, lambda: f64) -> Result<Olympiad1> {
        let tol = Tol::default();
        let mu = lambda * a.dist(b).powi(2) / a.dist(c).powi(2);
        let (d, e) = (a + (b - a) * lambda, a + (c - a) * mu);
        let (be, cd) = (Line::through(b, e)?, Line::through(c, d)?);
        let k = be.meet(&cd).ok_or(Error::NonGeneric)?;
        let bis = ((b - a).unit() + (c - a).unit()).unit();
        let ak = k - a;
        let iso = Line::from_point_dir(a, bis * (2.0 * ak.dot(bis)) - ak)?;
        let l = iso.meet(&be).ok_or(Error::NonGeneric)?;
        let m = iso.meet(&cd).ok_or(Error::NonGeneric)?;
        let klm = circumcircle(k, l, m, &tol)?;
        Ok(Olympiad1 { a, b, c, d, e, k, l, m, klm })
    }

    fn signed_defect(&self, p: Point, q: Point, scale: f64) -> Option<f64> {
        let line = Line::through(p, q).ok()?;
        Some((line.eval(self.klm.center).abs() - self.klm.radius) / scale)
    }

    pub fn de_defect(&self, scale: f64) -> f64 {
        self.signed_defect(self.d, self.e, scale).map_or(f64::INFINITY, f64::abs)
    }

    pub fn bc_defect(&self, scale: f64) -> f64 {
        self.signed_defect(self.b, self.c, scale).map_or(f64::INFINITY, f64::abs)
    }
}

/// The values of `λ` at which `(KLM)` touches `DE`.
pub fn olympiad1_solve(a: Point, b: Point, c: Point) -> Result<Vec<Olympiad1>> {
    let scale = circumcircle(a, b, c, &Tol::default())?.radius;
    let hi = Olympiad1::lambda_max(a, b, c);
    let f = |t: f64| Olympiad1::build(a, b, c, t).ok().and_then(|o| o.signed_defect(o.d, o.e, scale));
    let roots = scan_roots(f, 1e-3 * hi, (1.0 - 1e-3) * hi, 2000, 1e-16);
    roots.into_iter().map(|t| Olympiad1::build(a, b, c, t)).collect()
}

pub fn olympiad1_report(name: &str, a: Point, b: Point, c: Point) -> Result<Report> {
    let started = Instant::now();
    let tol = Tol::default();
    let scale = circumcircle(a, b, c, &tol)?.radius;
    let sols: Vec<_> = olympiad1_solve(a, b, c)?.into_iter().filter(|o| o.de_defect(scale) <= OLYMPIAD1_SOLVE_TOL).collect();
    if sols.is_empty() {
        return Err(Error::NoIntersection);
    }
    let mut r = Report::new(name);
    let worst = |f: &dyn Fn(&Olympiad1) -> Result<f64>| -> Result<f64> {
        sols.iter().try_fold(0.0_f64, |acc, o| Ok(acc.max(f(o)?)))
    };
    r.record("de_defect", worst(&|o| Ok(o.de_defect(scale)))?, OLYMPIAD1_SOLVE_TOL);
    r.record("bc_defect", worst(&|o| Ok(o.bc_defect(scale)))?, OLYMPIAD1_TOL);
    r.record(
        "polar_coincidence",
        worst(&|o| polar_coincidence(o.a, &circumcircle(o.b, o.c, o.e, &tol)?, &o.klm, scale))?,
        OLYMPIAD1_POLAR_TOL,
    );
    r.note("solutions", sols.len().to_string());
    Ok(r.finish(started))
}

fn olympiad1_triangle(seed: u64) -> Result<[Point; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let [a, b, c] = gen_triangle(&mut rng);
        // Near AB = AC the isogonal of AK is AK itself and K, L, M merge.
        if (a.dist(b) - a.dist(c)).abs() < 0.1 * a.dist(b).max(a.dist(c)) {
            continue;
        }
        let scale = circumcircle(a, b, c, &Tol::default())?.radius;
        if olympiad1_solve(a, b, c).is_ok_and(|s| s.iter().any(|o| o.de_defect(scale) <= OLYMPIAD1_SOLVE_TOL)) {
            return Ok([a, b, c]);
        }
    }
    Err(Error::GenerationExhausted)
}

pub fn gen_olympiad1(seed: u64) -> Result<Scenario> {
    let [a, b, c] = olympiad1_triangle(seed)?;
    let mut s = Scenario::new("olympiad1", seed);
    for (id, p) in [("A", a), ("B", b), ("C", c)] {
        s.insert(id, SceneObject::Point(p));
    }
    s.expected_checks = ["de_defect", "bc_defect", "polar_coincidence"].map(String::from).to_vec();
    Ok(s)
}

/// Seeded triangle; solves for `(KLM)` touching `DE` and measures its
/// tangency with `BC` and whether `A` is a Sharygin point of `(BCED)` and
/// `(KLM)`.
pub fn olympiad1_check(seed: u64) -> Result<Report> {
    let s = gen_olympiad1(seed)?;
    olympiad1_report(&s.name, s.point("A")?, s.point("B")?, s.point("C")?)
}

fn ratios(s: Point, [a, b, c]: [Point; 3]) -> [f64; 3] {
    [property3_ratio(s, a, b), property3_ratio(s, b, c), property3_ratio(s, c, a)]
}

fn variance(v: [f64; 3]) -> f64 {
    let m = (v[0] + v[1] + v[2]) / 3.0;
    v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / 3.0
}

/// The point with `(AS+BS)/AB = (BS+CS)/BC = (CS+AS)/CA`: a simplex search
/// on the variance of the three ratios from the incentre, then Newton on
/// the two differences (the variance flattens out long before the ratios
/// agree to working precision).
pub fn equal_ratio_point(tri: [Point; 3]) -> Result<Point> {
    let [a, b, c] = tri;
    let inc = incircle(a, b, c)?;
    let f = |x: [f64; 2]| variance(ratios(pt(x[0], x[1]), tri));
    let (x, v) = nelder_mead2(f, [inc.center.x, inc.center.y], 0.2 * inc.radius, 1e-30, 4000);
    if !(v <= 1e-12) {
        return Err(Error::SearchDiverged);
    }
    let mut s = pt(x[0], x[1]);
    let grad = |s: Point, p: Point, q: Point| ((s - p).unit() + (s - q).unit()) / p.dist(q);
    for _ in 0..50 {
        let [r1, r2, r3] = ratios(s, tri);
        let (g1, g2, g3) = (grad(s, a, b), grad(s, b, c), grad(s, c, a));
        let (j1, j2) = (g1 - g2, g2 - g3);
        let det = j1.cross(j2);
        if det.abs() < 1e-14 {
            return Err(Error::SearchDiverged);
        }
        let (f1, f2) = (r1 - r2, r2 - r3);
        // Solve [j1; j2]·δ = −(f1, f2).
        let delta = pt(-(f1 * j2.y - f2 * j1.y) / det, -(j1.x * f2 - j2.x * f1) / det);
        s = s + delta;
        if delta.norm() <= 1e-16 * inc.radius.max(s.norm()) {
            break;
        }
    }
    let [r1, r2, r3] = ratios(s, tri);
    if !s.is_finite() || (r1 - r2).abs().max((r2 - r3).abs()) > 1e-12 || s.dist(inc.center) >= inc.radius {
        return Err(Error::SearchDiverged);
    }
    Ok(s)
}

pub fn olympiad2_report(name: &str, tri: [Point; 3]) -> Result<Report> {
    let started = Instant::now();
    let tol = Tol::default();
    let [a, b, c] = tri;
    let circ = circumcircle(a, b, c, &tol)?;
    let scale = circ.radius;
    let inc = incircle(a, b, c)?;
    let s = equal_ratio_point(tri)?;
    let [a1, b1, c1] = [a, b, c].map(|p| second_intersection(s, p, &circ, &tol));
    let inc1 = incircle(a1?, b1?, c1?)?;
    let mut r = Report::new(name);
    r.record("incircle_center", inc.center.dist(inc1.center) / scale, OLYMPIAD2_TOL);
    r.record("incircle_radius", (inc.radius - inc1.radius).abs() / scale, OLYMPIAD2_TOL);
    match polar_coincidence(s, &circ, &inc, scale) {
        // Concentric circles (equilateral case): `S` is the common centre and has no polar.
        Err(Error::CenterPole) => r.note("polar_coincidence", "S is the common centre"),
        res => r.record("polar_coincidence", res?, OLYMPIAD2_TOL),
    }
    // Independent route: the limiting point of the two circles inside the incircle.
    let lp = sharygin_points(&circ, &inc, &tol)?;
    let inner = if lp.s.dist(inc.center) < lp.s_prime.dist(inc.center) { lp.s } else { lp.s_prime };
    r.record("limiting_point", s.dist(inner) / scale, OLYMPIAD2_TOL);
    Ok(r.finish(started))
}

pub fn gen_olympiad2(seed: u64) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let [a, b, c] = gen_triangle(&mut rng);
    let mut s = Scenario::new("olympiad2", seed);
    for (id, p) in [("A", a), ("B", b), ("C", c)] {
        s.insert(id, SceneObject::Point(p));
    }
    s.expected_checks =
        ["incircle_center", "incircle_radius", "polar_coincidence", "limiting_point"].map(String::from).to_vec();
    s
}

/// Seeded triangle; finds the equal-ratio point `S` and compares the
/// incircles of `ABC` and of the triangle cut out by `AS, BS, CS` on the
/// circumcircle.
pub fn olympiad2_check(seed: u64) -> Result<Report> {
    let s = gen_olympiad2(seed);
    olympiad2_report(&s.name, [s.point("A")?, s.point("B")?, s.point("C")?])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn olympiad1_generic() {
        for seed in 0..20 {
            let r = olympiad1_check(seed).unwrap();
            assert!(r.pass, "seed {seed}: {r:?}");
        }
    }

    #[test]
    fn olympiad1_isosceles_degenerates() {
        let (a, b, c) = (pt(0.0, 2.0), pt(-1.0, 0.0), pt(1.0, 0.0));
        // The reflected line is AK itself, so K, L, M coincide.
        assert!(Olympiad1::build(a, b, c, 0.4).is_err());
        // Slightly off symmetry the theorem still holds.
        let r = olympiad1_report("near", a, b, pt(1.05, 0.0)).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn olympiad1_away_from_tangency_is_not_tangent() {
        let [a, b, c] = olympiad1_triangle(4).unwrap();
        let scale = circumcircle(a, b, c, &Tol::default()).unwrap().radius;
        let sols = olympiad1_solve(a, b, c).unwrap();
        let t = 0.5 * Olympiad1::lambda_max(a, b, c);
        let o = Olympiad1::build(a, b, c, t).unwrap();
        if sols.iter().all(|s| (s.d.dist(o.d)) > 1e-2) {
            assert!(o.bc_defect(scale) > 1e-4 && o.de_defect(scale) > 1e-4);
        }
    }

    #[test]
    fn olympiad2_generic() {
        for seed in 0..20 {
            let r = olympiad2_check(seed).unwrap();
            assert!(r.pass, "seed {seed}: {r:?}");
        }
    }

    #[test]
    fn olympiad2_equilateral_is_exact() {
        let tri = [0.0, 1.0, 2.0].map(|k: f64| {
            let t = PI / 2.0 + k * TAU / 3.0;
            pt(t.cos(), t.sin())
        });
        let s = equal_ratio_point(tri).unwrap();
        assert!(s.norm() < 1e-12);
        let r = olympiad2_report("equilateral", tri).unwrap();
        assert!(r.residual("incircle_center") <= 1e-12 && r.residual("incircle_radius") <= 1e-12, "{r:?}");
    }

    #[test]
    fn wrong_point_breaks_incircles() {
        let tri = [pt(0.0, 0.0), pt(4.0, 0.0), pt(1.0, 3.0)];
        let circ = circumcircle(tri[0], tri[1], tri[2], &Tol::default()).unwrap();
        let inc = incircle(tri[0], tri[1], tri[2]).unwrap();
        let tol = Tol::default();
        let img = tri.map(|p| second_intersection(inc.center, p, &circ, &tol).unwrap());
        let inc1 = incircle(img[0], img[1], img[2]).unwrap();
        assert!(inc.center.dist(inc1.center) / circ.radius > 1e-3);
    }
}
