use std::f64::consts::{PI, TAU};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::olympiad::{line_residual, polar_coincidence};
use super::scenario::Report;
use crate::error::{Error, Result};
use crate::geom::{angle_at, intersect, invert, polar, pt, Circle, GObject, Line, Point, Tol};
use crate::pencil::sharygin_points;
use crate::props::{property1_check, property2_check, property3_ratio, property4_check};

pub const LEMMA_TOL: f64 = 1e-9;
pub const PROPERTY_TOL: f64 = 1e-8;
/// Perturbing `S` by 1% of the scale must push every property residual
/// above this.
pub const CONTROL_FLOOR: f64 = 1e-3;

/// Two non-intersecting circles, nested or apart (seeded choice), kept away
/// from tangency and from the concentric case.
pub fn gen_circle_pair(rng: &mut ChaCha8Rng) -> (Circle, Circle) {
    loop {
        let o = pt(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let r1 = rng.gen_range(0.5..2.0);
        let w1 = Circle::new(o, r1);
        let t = rng.gen_range(0.0..TAU);
        let dir = pt(t.cos(), t.sin());
        let w2 = if rng.gen_bool(0.5) {
            let r2 = rng.gen_range(0.1..0.9) * r1;
            Circle::new(o + dir * rng.gen_range(0.0..r1 - r2), r2)
        } else {
            let r2 = rng.gen_range(0.2..2.0);
            Circle::new(o + dir * (r1 + r2 + rng.gen_range(0.0..3.0)), r2)
        };
        let d = w1.center.dist(w2.center);
        let gap = (d - (w1.radius + w2.radius)).max((w1.radius - w2.radius).abs() - d);
        if gap > 0.05 * r1 && d > 0.05 * r1 {
            return (w1, w2);
        }
    }
}

/// Polars of a Sharygin point `S` coincide and pass through `S'`, and
/// inversion at `S` makes the circles concentric.
pub fn lemma_report(w1: &Circle, w2: &Circle) -> Result<Report> {
    let started = Instant::now();
    let tol = Tol::default();
    let scale = w1.radius.max(w2.radius);
    let lp = sharygin_points(w1, w2, &tol)?;
    let mut r = Report::new("lemma");
    let mut polars: f64 = 0.0;
    let mut concentric: f64 = 0.0;
    for (s, other) in [(lp.s, lp.s_prime), (lp.s_prime, lp.s)] {
        polars = polars.max(polar_coincidence(s, w1, w2, scale)?);
        // The common polar is the perpendicular to the centre line through the other point.
        let expected = Line::from_point_dir(other, (w2.center - w1.center).rot90())?;
        polars = polars.max(line_residual(&polar(s, w1, &tol)?, &expected, scale));
        let k2 = scale * scale;
        let images = [w1, w2].map(|w| match invert(s, k2, &GObject::Circle(*w), &tol) {
            Ok(GObject::Circle(c)) => Ok(c),
            _ => Err(Error::DegenerateImage),
        });
        let (i1, i2) = (images[0]?, images[1]?);
        concentric = concentric.max(i1.center.dist(i2.center) / i1.radius.max(i2.radius));
    }
    r.record("polar_coincidence", polars, LEMMA_TOL);
    r.record("concentric_images", concentric, LEMMA_TOL);
    Ok(r.finish(started))
}

pub fn lemma_check(seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w1, w2) = gen_circle_pair(&mut rng);
    let mut r = lemma_report(&w1, &w2)?;
    r.scenario = "lemma".into();
    Ok(r)
}

fn chord(l: &Line, c: &Circle) -> Option<(Point, Point)> {
    match intersect(&GObject::Line(*l), &GObject::Circle(*c), &Tol::default()).ok()?.as_slice() {
        [p, q] if p.dist(*q) > 1e-3 * c.radius => Some((*p, *q)),
        _ => None,
    }
}

/// A Sharygin configuration: circles, one of their Sharygin points, a secant
/// line meeting both, and two chords of `w1` tangent to `w2`. When `w2` lies
/// outside `w1` the contact points fall on the chords' extensions, and the
/// properties take their extended forms: `|SA − SB| / AB` for the ratio and
/// `∠ASC + ∠BSD = π` for the angles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropertyConfig {
    pub w1: Circle,
    pub w2: Circle,
    pub s: Point,
    pub nested: bool,
    pub secant: [Point; 4],
    pub tangent_chords: [(Point, Point); 2],
}

impl PropertyConfig {
    pub fn generate(seed: u64) -> Result<PropertyConfig> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let (w1, w2) = gen_circle_pair(&mut rng);
            let lp = sharygin_points(&w1, &w2, &Tol::default())?;
            let s = if rng.gen_bool(0.5) { lp.s } else { lp.s_prime };
            let through = w2.center + {
                let t = rng.gen_range(0.0..TAU);
                pt(t.cos(), t.sin()) * (w2.radius * rng.gen_range(0.0..0.8))
            };
            let t = rng.gen_range(0.0..TAU);
            let secant = Line::from_point_dir(through, pt(t.cos(), t.sin()))?;
            let mut tangents = vec![];
            for _ in 0..50 {
                let t = rng.gen_range(0.0..TAU);
                let x = w2.center + pt(t.cos(), t.sin()) * w2.radius;
                if let Some(ch) = Line::from_point_dir(x, pt(-t.sin(), t.cos())).ok().and_then(|l| chord(&l, &w1)) {
                    if tangents.iter().all(|&(p, _): &(Point, Point)| p.dist(ch.0) > 0.1 * w1.radius) {
                        tangents.push(ch);
                    }
                }
                if tangents.len() == 2 {
                    break;
                }
            }
            let (Some((a, b)), Some((c, d)), &[t1, t2]) = (chord(&secant, &w1), chord(&secant, &w2), tangents.as_slice()) else {
                continue;
            };
            // Keep `S` off the secant and off the chords so every angle is defined.
            let far = |l: Line| l.eval(s).abs() > 0.05 * w1.radius;
            if far(secant) && far(Line::through(t1.0, t1.1)?) && far(Line::through(t2.0, t2.1)?) {
                let nested = w1.center.dist(w2.center) < w1.radius;
                return Ok(PropertyConfig { w1, w2, s, nested, secant: [a, b, c, d], tangent_chords: [t1, t2] });
            }
        }
        Err(Error::GenerationExhausted)
    }

    pub fn scale(&self) -> f64 {
        self.w1.radius.max(self.w2.radius)
    }

    /// Property residuals measured at `s` (which need not be a Sharygin
    /// point), each relative to the size of what it compares: image
    /// collinearity against the images' spread, the bisector ratio, ratio
    /// invariance across the two tangent chords, and the angle equality.
    pub fn residuals(&self, s: Point) -> Result<[f64; 4]> {
        let tol = Tol::default();
        let p1 = property1_check(s, &self.w1, &self.w2, self.secant, &tol)?;
        let spread = p1.images.iter().flat_map(|p| p1.images.iter().map(move |q| p.dist(*q))).fold(0.0, f64::max);
        let [(a, b), (c, d)] = self.tangent_chords;
        let bisector = property2_check(s, &self.w2, a, b, &tol)?.max(property2_check(s, &self.w2, c, d, &tol)?);
        let ratio = |p: Point, q: Point| {
            if self.nested {
                property3_ratio(s, p, q)
            } else {
                (s.dist(p) - s.dist(q)).abs() / p.dist(q)
            }
        };
        let (q1, q2) = (ratio(a, b), ratio(c, d));
        // The ratio is at least 1 (at most 1 in the extended form) by the
        // triangle inequality; only its distance from 1 carries information.
        let ratio_gap = (q1 - q2).abs() / (q1 - 1.0).abs().max((q2 - 1.0).abs());
        let [pa, pb, pc, pd] = self.secant;
        let (x, y) = (angle_at(s, pa, pc), angle_at(s, pb, pd));
        let angle = if self.nested {
            property4_check(s, self.secant) / x.max(y)
        } else {
            (x + y - PI).abs() / (PI - x).max(PI - y)
        };
        Ok([p1.collinearity_residual / spread, bisector / (s.dist(a) / a.dist(b)), ratio_gap, angle])
    }
}

pub const PROPERTY_NAMES: [&str; 4] = ["collinearity", "bisector", "ratio_invariance", "angle"];

/// The same configuration with `S` moved by 1% of the configuration's size
/// as seen from `S` (the scale, or the distance to `w1`'s centre when `S` is
/// the far limiting point), in a seeded direction. Returns the largest of
/// the four residuals there.
pub fn property_control(cfg: &PropertyConfig, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let t = rng.gen_range(0.0..TAU);
    let step = 0.01 * cfg.scale().max(cfg.s.dist(cfg.w1.center));
    Ok(cfg.residuals(cfg.s + pt(t.cos(), t.sin()) * step)?.into_iter().fold(0.0, f64::max))
}

/// Properties 1–4 at a Sharygin point plus the perturbed control, recorded
/// as `CONTROL_FLOOR / control` so that it stays within 1 exactly when the
/// perturbed configuration is caught.
pub fn properties_check(seed: u64) -> Result<Report> {
    let started = Instant::now();
    let cfg = PropertyConfig::generate(seed)?;
    let mut r = Report::new("properties");
    for (name, v) in PROPERTY_NAMES.iter().zip(cfg.residuals(cfg.s)?) {
        r.record(name, v, PROPERTY_TOL);
    }
    r.record("negative_control", CONTROL_FLOOR / property_control(&cfg, seed)?, 1.0);
    r.note("configuration", if cfg.nested { "nested" } else { "apart" });
    Ok(r.finish(started))
}
