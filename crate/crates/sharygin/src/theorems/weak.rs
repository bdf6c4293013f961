use std::f64::consts::TAU;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::scenario::{Report, Scenario, SceneObject};
use crate::cycle::{tangent_cycle_axis, Axis, Cycle, Oriented};
use crate::error::{Error, Result};
use crate::props::property3_ratio;
use crate::geom::{
    circumcircle, collinearity_residual, intersect, invert, pt, Circle, GObject,
    Line, Point, Tol,
};
use crate::hyperbolic::{hyp_inflate, rapidity, Absolute};
use crate::numeric::scan_roots;
use crate::pencil::{member_tangent_to_line, CircleEq, Pencil};

/// Acceptance threshold for the Weak MT residuals, relative to the
/// circumradius of `(ABCD)`.
pub const WEAK_MT_TOL: f64 = 1e-7;

/// All circles through `a` and `b` tangent to `k`. Inversion in `a` turns
/// them into the tangents from the image of `b` to the image of `k`.
pub fn circle_through_2pts_tangent_to_circle(a: Point, b: Point, k: &Circle) -> Vec<Circle> {
    let tol = Tol::default();
    if k.contains(a, &tol) || k.contains(b, &tol) || tol.close_pt(a, b) {
        return vec![];
    }
    // Any power works; one comparable to the figure keeps the images tame.
    let k2 = a.dist(b).max(k.radius).max(a.dist(k.center)).powi(2);
    let Ok(GObject::Point(b1)) = invert(a, k2, &GObject::Point(b), &tol) else { return vec![] };
    let Ok(GObject::Circle(k1)) = invert(a, k2, &GObject::Circle(*k), &tol) else { return vec![] };
    let v = b1 - k1.center;
    let d = v.norm();
    if d <= k1.radius {
        return vec![];
    }
    let u = v / d;
    let (cos, sin) = (k1.radius / d, (1.0 - (k1.radius / d).powi(2)).sqrt());
    let mut out = vec![];
    for s in [1.0, -1.0] {
        let touch = k1.center + (u * cos + u.rot90() * (s * sin)) * k1.radius;
        let Ok(line) = Line::through(b1, touch) else { continue };
        if let Ok(GObject::Circle(c)) = invert(a, k2, &GObject::Line(line), &tol) {
            out.push(c);
        }
    }
    out
}

/// A Weak MT configuration: `(ABCD)` with `ω ∋ A, B` and `ω₁ ∋ C, D` as
/// cycles, the axes `AB`, `CD` oriented from the first point to the second,
/// and (for generated instances) the cycle `κ` touching all four.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakMt {
    pub abcd: Circle,
    pub a: Point,
    pub b: Point,
    pub c: Point,
    pub d: Point,
    pub omega: Cycle,
    pub omega1: Cycle,
    pub kappa: Option<Cycle>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Placement {
    Outside,
    Inside,
    Crossing,
    Concentric,
}

impl WeakMt {
    pub fn from_scenario(s: &Scenario) -> Result<WeakMt> {
        Ok(WeakMt {
            abcd: s.circle("ABCD")?,
            a: s.point("A")?,
            b: s.point("B")?,
            c: s.point("C")?,
            d: s.point("D")?,
            omega: s.cycle("omega")?,
            omega1: s.cycle("omega1")?,
            kappa: if s.has("kappa") { Some(s.cycle("kappa")?) } else { None },
        })
    }

    pub fn to_scenario(&self, name: &str, seed: u64) -> Scenario {
        let mut s = Scenario::new(name, seed);
        s.insert("ABCD", SceneObject::Circle(self.abcd));
        for (id, p) in [("A", self.a), ("B", self.b), ("C", self.c), ("D", self.d)] {
            s.insert(id, SceneObject::Point(p));
        }
        s.insert("omega", SceneObject::Cycle(self.omega));
        s.insert("omega1", SceneObject::Cycle(self.omega1));
        if let Some(k) = self.kappa {
            s.insert("kappa", SceneObject::Cycle(k));
        }
        s
    }

    pub fn scale(&self) -> f64 {
        self.abcd.radius
    }

    pub fn line_ab(&self) -> Result<Line> {
        Line::through(self.a, self.b)
    }

    pub fn line_cd(&self) -> Result<Line> {
        Line::through(self.c, self.d)
    }

    pub fn axis_ab(&self) -> Result<Axis> {
        Axis::through(self.a, self.b - self.a)
    }

    pub fn axis_cd(&self) -> Result<Axis> {
        Axis::through(self.c, self.d - self.c)
    }

    /// `E = AB ∩ CD`.
    pub fn e(&self) -> Result<Point> {
        self.line_ab()?.meet(&self.line_cd()?).ok_or(Error::NonGeneric)
    }

    /// `S, S₁ = ω ∩ ω₁`.
    pub fn s_points(&self) -> Result<[Point; 2]> {
        let (w, w1) = (self.omega.circle().ok_or(Error::InvalidInput)?, self.omega1.circle().ok_or(Error::InvalidInput)?);
        match intersect(&GObject::Circle(w), &GObject::Circle(w1), &Tol::default())?[..] {
            [p, q] => Ok([p, q]),
            _ => Err(Error::NoIntersection),
        }
    }

    /// Whether `κ` touches one of `ω, ω₁` internally and the other
    /// externally, i.e. the two cycles have opposite orientations.
    pub fn mixed_types(&self) -> bool {
        self.omega.r * self.omega1.r < 0.0
    }

    /// Similar copy: `p ↦ o + k·p`.
    fn mapped(&self, o: Point, k: f64) -> WeakMt {
        let p = |q: Point| o + q * k;
        let c = |y: Cycle| {
            let m = p(y.center());
            Cycle::new(m.x, m.y, y.r * k)
        };
        WeakMt {
            abcd: Circle::new(p(self.abcd.center), self.abcd.radius * k),
            a: p(self.a),
            b: p(self.b),
            c: p(self.c),
            d: p(self.d),
            omega: c(self.omega),
            omega1: c(self.omega1),
            kappa: self.kappa.map(c),
        }
    }
}

fn chord(axis: &Axis, abcd: &Circle) -> Option<(Point, Point)> {
    let d = axis.direction();
    let foot = abcd.center - axis.normal() * axis.left_distance(abcd.center);
    let h2 = abcd.radius * abcd.radius - foot.dist(abcd.center).powi(2);
    (h2 > 0.0).then(|| (foot - d * h2.sqrt(), foot + d * h2.sqrt()))
}

/// The cycle on `c` that touches `k` with compatible orientation: internal
/// contact shares κ's orientation, external contact opposes it.
fn orient_against(c: &Circle, k: &Cycle) -> Cycle {
    let d = c.center.dist(k.center());
    let internal = (d - (c.radius - k.r.abs()).abs()).abs() < (d - (c.radius + k.r.abs())).abs();
    Cycle::from_circle(c, internal == (k.r > 0.0))
}

/// The proper circle through the chord ends touching κ (the other solution
/// of the two-point problem is the chord's own line), oriented against κ.
fn through_chord(p: Point, q: Point, k: &Cycle) -> Option<Cycle> {
    let kc = k.circle()?;
    let line = Line::through(p, q).ok()?;
    let sols: Vec<Circle> = circle_through_2pts_tangent_to_circle(p, q, &kc)
        .into_iter()
        .filter(|c| c.radius < 1e3 * kc.radius.max(p.dist(q)) && line.eval(c.center).abs() < 1e3 * c.radius.min(1e6))
        .collect();
    match sols[..] {
        [c] => Some(orient_against(&c, k)),
        _ => None,
    }
}

/// Same cycles by the inflation route, for κ inside or outside Ω: the
/// reversed axes touch −κ, and the inflation taking −κ back to κ carries
/// them onto cycles through their chord ends (it stays in the pencil with Ω)
/// that touch κ.
pub fn weak_mt_by_inflation(inst: &WeakMt) -> Result<(Cycle, Cycle)> {
    let kappa = inst.kappa.ok_or(Error::MissingObject)?;
    let abs = Absolute::new(inst.abcd);
    let h = rapidity(&kappa, &abs)?;
    let image = |ax: Axis| match hyp_inflate(&Oriented::Axis(ax.reversed()), 2.0 * h, &abs)? {
        Oriented::Cycle(c) => Ok(c),
        Oriented::Axis(_) => Err(Error::DegenerateImage),
    };
    Ok((image(inst.axis_ab()?)?, image(inst.axis_cd()?)?))
}

/// One attempt in the unit frame; `None` when the sample is unusable.
fn try_build(rng: &mut ChaCha8Rng, placement: Placement) -> Option<WeakMt> {
    let abcd = Circle::new(Point::ORIGIN, 1.0);
    let ang = rng.gen_range(0.0..TAU);
    let rk: f64 = rng.gen_range(0.1..0.8);
    let dist = match placement {
        Placement::Outside => rng.gen_range(1.1..2.5),
        Placement::Inside => rng.gen_range(0.0..0.6),
        Placement::Crossing => rng.gen_range((1.0 - rk).abs() + 0.05..1.0 + rk - 0.05),
        Placement::Concentric => 0.0,
    };
    let (p1, p2): (f64, f64) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
    let flip = rng.gen_bool(0.5);
    let k = pt(ang.cos(), ang.sin()) * dist;
    match placement {
        Placement::Outside if dist < 1.0 + rk + 0.02 => return None,
        Placement::Inside | Placement::Concentric if dist + rk > 1.0 - 0.02 => return None,
        _ => {}
    }
    if (p1 - p2).sin().abs() < 0.3 {
        return None;
    }
    // Clockwise κ and the axes touching it; `flip` reverses everything.
    let sign = if flip { -1.0 } else { 1.0 };
    let kappa = Cycle::new(k.x, k.y, sign * rk);
    let axes: Vec<Axis> = [p1, p2]
        .iter()
        .map(|&p| {
            let rad = pt(p.cos(), p.sin());
            Axis::through(k + rad * rk, pt(rad.y, -rad.x) * sign).unwrap()
        })
        .collect();
    debug_assert!(axes.iter().all(|ax| tangent_cycle_axis(&kappa, ax, &Tol::default().scaled(100.0))));
    let (a, b) = chord(&axes[0], &abcd)?;
    let (c, d) = chord(&axes[1], &abcd)?;
    if a.dist(b) < 0.3 || c.dist(d) < 0.3 {
        return None;
    }
    let (omega, omega1) = (through_chord(a, b, &kappa)?, through_chord(c, d, &kappa)?);
    if omega.r.abs() > 20.0 || omega1.r.abs() > 20.0 {
        return None;
    }
    let inst = WeakMt { abcd, a, b, c, d, omega, omega1, kappa: Some(kappa) };
    let [s, s1] = inst.s_points().ok()?;
    if s.dist(s1) < 1e-3 {
        return None;
    }
    inst.e().ok()?;
    Some(inst)
}

pub(crate) fn generate_with(rng: &mut ChaCha8Rng, placement: Option<Placement>, mixed_only: bool) -> Result<WeakMt> {
    for _ in 0..10_000 {
        let p = placement.unwrap_or(match rng.gen_range(0..3) {
            0 => Placement::Inside,
            1 => Placement::Outside,
            _ => Placement::Crossing,
        });
        let o = pt(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let k = rng.gen_range(0.5..2.0);
        if let Some(inst) = try_build(rng, p) {
            if mixed_only && !inst.mixed_types() {
                continue;
            }
            return Ok(inst.mapped(o, k));
        }
    }
    Err(Error::GenerationExhausted)
}

fn generate(seed: u64, placement: Option<Placement>, mixed_only: bool) -> Result<WeakMt> {
    generate_with(&mut ChaCha8Rng::seed_from_u64(seed), placement, mixed_only)
}

/// Condition-a) instance: κ first, then its tangent axes, then `ω, ω₁`.
pub fn gen_weak_mt_instance(seed: u64) -> Result<WeakMt> {
    generate(seed, None, false)
}

/// The same with κ touching one of `ω, ω₁` internally and the other
/// externally, as the Simplified and Main Theorems assume.
pub fn gen_mixed_instance(seed: u64) -> Result<WeakMt> {
    generate(seed, None, true)
}

/// κ concentric with `(ABCD)`.
pub fn gen_concentric_instance(seed: u64) -> Result<WeakMt> {
    generate(seed, Some(Placement::Concentric), false)
}

pub fn gen_weak_mt(seed: u64) -> Result<Scenario> {
    let mut s = gen_weak_mt_instance(seed)?.to_scenario("weak-mt", seed);
    s.expected_checks = ["residual_a", "residual_b", "residual_c"].map(String::from).to_vec();
    Ok(s)
}

fn circle_tangency_defect(c1: &Circle, c2: &Circle) -> f64 {
    let d = c1.center.dist(c2.center);
    (d - (c1.radius + c2.radius)).abs().min((d - (c1.radius - c2.radius).abs()).abs())
}

pub(crate) fn line_tangency_defect(l: &Line, c: &Circle) -> f64 {
    (l.eval(c.center).abs() - c.radius).abs()
}

/// Defect of condition a) for the stored κ.
pub fn residual_a(inst: &WeakMt) -> Result<f64> {
    let k = inst.kappa.and_then(|k| k.circle()).ok_or(Error::MissingObject)?;
    let circ = |c: &Cycle| c.circle().ok_or(Error::InvalidInput);
    Ok([
        line_tangency_defect(&inst.line_ab()?, &k),
        line_tangency_defect(&inst.line_cd()?, &k),
        circle_tangency_defect(&circ(&inst.omega)?, &k),
        circle_tangency_defect(&circ(&inst.omega1)?, &k),
    ]
    .into_iter()
    .fold(0.0, f64::max)
        / inst.scale())
}

/// Condition b) with oriented tangency: a cycle about `O` of signed radius
/// `ρ` touches `ω` iff `ρ = r_ω ± |O O_ω|`; b) asks for a common `ρ`.
pub fn residual_b(inst: &WeakMt) -> f64 {
    let o = inst.abcd.center;
    let cands = |c: &Cycle| [c.r + o.dist(c.center()), c.r - o.dist(c.center())];
    let mut best = f64::INFINITY;
    for x in cands(&inst.omega) {
        for y in cands(&inst.omega1) {
            best = best.min((x - y).abs());
        }
    }
    best / inst.scale()
}

/// Members of the pencil `(S, (ABCD))` tangent to `AB`.
pub fn c_members(inst: &WeakMt, s: Point) -> Result<Vec<Circle>> {
    members_tangent_to_ab(inst, CircleEq::point_circle(s, 0.0))
}

/// Members of the pencil `(Γ, (ABCD))` tangent to `AB`.
pub fn c_members_in(inst: &WeakMt, gamma: &Circle) -> Result<Vec<Circle>> {
    members_tangent_to_ab(inst, CircleEq::from_circle(gamma))
}

fn members_tangent_to_ab(inst: &WeakMt, e: CircleEq) -> Result<Vec<Circle>> {
    let pen = Pencil::new(e, CircleEq::from_circle(&inst.abcd))?;
    let tol = Tol::default();
    Ok(member_tangent_to_line(&pen, &inst.line_ab()?, &tol).iter().filter_map(|e| e.to_circle(&tol).ok()).collect())
}

/// Condition c): the best `CD`-defect among the members tangent to `AB`,
/// taken at both intersection points of `ω, ω₁`. A member can be nearly a
/// line when `S` is close to the centre, so each defect is measured against
/// the larger of the circumradius and the member's own radius.
pub fn residual_c(inst: &WeakMt) -> Result<f64> {
    let cd = inst.line_cd()?;
    let mut worst: f64 = 0.0;
    for s in inst.s_points()? {
        let best = c_members(inst, s)?
            .iter()
            .map(|m| line_tangency_defect(&cd, m) / m.radius.max(inst.scale()))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(best);
    }
    Ok(worst)
}

/// The pencil in angle form: `θ ↦ cos θ·ê₁ + sin θ·ê₂` with unit coefficient
/// vectors, so `θ ∈ [0, π)` covers every member once.
fn angle_basis(pen: &Pencil) -> ([f64; 4], [f64; 4]) {
    let unit = |e: &CircleEq| {
        let v = e.to_array();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.map(|x| x / n)
    };
    (unit(&pen.e1), unit(&pen.e2))
}

fn angle_member(u: &([f64; 4], [f64; 4]), th: f64) -> CircleEq {
    let (c, s) = (th.cos(), th.sin());
    CircleEq::from_array([0, 1, 2, 3].map(|i| c * u.0[i] + s * u.1[i]))
}

/// Angle parameter of a member of the pencil, in `[0, π)`.
fn member_angle(u: &([f64; 4], [f64; 4]), e: &CircleEq) -> f64 {
    let v = e.to_array();
    let dot = |a: &[f64; 4], b: &[f64; 4]| (0..4).map(|i| a[i] * b[i]).sum::<f64>();
    let (g11, g12, g22) = (dot(&u.0, &u.0), dot(&u.0, &u.1), dot(&u.1, &u.1));
    let (b1, b2) = (dot(&u.0, &v), dot(&u.1, &v));
    let det = g11 * g22 - g12 * g12;
    let (x, y) = ((b1 * g22 - b2 * g12) / det, (b2 * g11 - b1 * g12) / det);
    y.atan2(x).rem_euclid(std::f64::consts::PI)
}

/// Brute-force counterpart of `member_tangent_to_line`: sample the pencil
/// angle on a grid, watch the sign of `dist(centre, l)² − r²`, and bisect.
/// Returns the angle parameters of the tangent members.
pub fn tangent_angles_by_scan(pen: &Pencil, l: &Line, samples: usize) -> Vec<f64> {
    let u = angle_basis(pen);
    let g = |th: f64| {
        let e = angle_member(&u, th);
        if e.a.abs() < 1e-12 {
            return None;
        }
        let centre = pt(-e.b / (2.0 * e.a), -e.c / (2.0 * e.a));
        let r2 = centre.norm2() - e.d / e.a;
        // Scaled by a² to keep near-line members finite.
        Some((l.eval(centre).powi(2) - r2) * e.a * e.a)
    };
    scan_roots(g, 0.0, std::f64::consts::PI, samples, 1e-15)
}

pub fn tangent_members_by_scan(pen: &Pencil, l: &Line, samples: usize) -> Vec<Circle> {
    let u = angle_basis(pen);
    tangent_angles_by_scan(pen, l, samples)
        .into_iter()
        .filter_map(|th| angle_member(&u, th).to_circle(&Tol::default()).ok())
        .collect()
}

/// Largest gap, in the pencil's angle parameter, between the closed-form
/// tangent members and their nearest brute-force roots.
pub fn residual_c_oracle_gap(inst: &WeakMt) -> Result<f64> {
    let tol = Tol::default();
    let mut worst: f64 = 0.0;
    for s in inst.s_points()? {
        let pen = Pencil::new(CircleEq::point_circle(s, 0.0), CircleEq::from_circle(&inst.abcd))?;
        let ab = inst.line_ab()?;
        let scanned = tangent_angles_by_scan(&pen, &ab, 10_000);
        let u = angle_basis(&pen);
        for e in member_tangent_to_line(&pen, &ab, &tol) {
            let th = member_angle(&u, &e);
            let gap = scanned
                .iter()
                .map(|&x| {
                    let d = (x - th).abs();
                    d.min(std::f64::consts::PI - d)
                })
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(gap);
        }
    }
    Ok(worst)
}

pub fn check_weak_mt(s: &Scenario) -> Result<Report> {
    let started = Instant::now();
    let inst = WeakMt::from_scenario(s)?;
    let mut r = Report::new(&s.name);
    if inst.kappa.is_some() {
        r.record("residual_a", residual_a(&inst)?, WEAK_MT_TOL);
    }
    r.record("residual_b", residual_b(&inst), WEAK_MT_TOL);
    let c = match residual_c(&inst) {
        Err(Error::NoIntersection) => f64::INFINITY,
        other => other?,
    };
    r.record("residual_c", c, WEAK_MT_TOL);
    r.note("types", if inst.mixed_types() { "mixed" } else { "same" });
    Ok(r.finish(started))
}

/// Named points of the Weak MT proof (with `ω = (SAB)`, `ω₁ = (SCD)`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakMtTrace {
    pub s: Point,
    pub s1: Point,
    pub e: Point,
    pub t1: Point,
    pub t2: Point,
    pub w1: Point,
    pub w2: Point,
    pub v1: Point,
    pub v2: Point,
    pub p: Point,
    pub q: Point,
    pub y: Point,
}

/// Residuals of the proof's intermediate identities, relative to the
/// circumradius where they are lengths.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceIdentities {
    /// `|(SA+SB)/AB − √(SW₁/T₁W₁)|`.
    pub ratio: f64,
    /// `|sin ∠(T₁T₂, W₁W₂)|`.
    pub parallel: f64,
    /// Collinearity of `S, E, Y`.
    pub collinear: f64,
    /// Concyclicity of `W₁, W₂, P, Q`: distance of `Q` from `(W₁W₂P)`.
    pub concyclic: f64,
    /// `V₁V₂ ∥ W₁W₂`, as the proof's Desargues step needs.
    pub v_parallel: f64,
}

fn sin_between(u: Point, v: Point) -> f64 {
    (u.unit().cross(v.unit())).abs()
}

/// Contact of a line with a circle.
fn contact(l: &Line, c: &Circle) -> Point {
    l.foot(c.center)
}

/// Contact of two tangent circles.
fn contact_cc(a: &Circle, b: &Circle) -> Point {
    let u = (b.center - a.center).unit();
    let d = a.center.dist(b.center);
    // Internal tangency with b larger puts the contact behind a's centre.
    let s = if (d - (a.radius + b.radius)).abs() <= (d - (a.radius - b.radius).abs()).abs() || a.radius >= b.radius {
        1.0
    } else {
        -1.0
    };
    a.center + u * (s * a.radius)
}

/// Computes the proof's points and measures its identities, at the first
/// intersection `S` of `ω, ω₁`. `T₁, T₂` are the contacts of the c)-circle
/// with `AB`, `CD`; they lie on bisectors of `∠ASB`, `∠CSD` (the internal
/// ones when the contacts fall inside the chords, where `SA/AT₁` is
/// `(SA+SB)/AB`). `W₁, W₂` are the second intersections of `ST₁`, `ST₂` with
/// `ω, ω₁` — the arc midpoints. `V₁, V₂, P` are the contacts of κ with `AB`,
/// `CD`, `ω₁`; `Y = V₁W₁ ∩ V₂W₂` and `Q` is the second intersection of
/// `V₁W₁` with `ω`.
pub fn weak_mt_trace(s: &Scenario) -> Result<(WeakMtTrace, TraceIdentities)> {
    let inst = WeakMt::from_scenario(s)?;
    let tol = Tol::new(1e-7, 1e-7)?;
    let [sp, s1] = inst.s_points()?;
    let w = inst.omega.circle().ok_or(Error::InvalidInput)?;
    let w1c = inst.omega1.circle().ok_or(Error::InvalidInput)?;
    let (ab, cd) = (inst.line_ab()?, inst.line_cd()?);
    let e = inst.e()?;
    let gamma = c_members(&inst, sp)?
        .into_iter()
        .min_by(|x, y| line_tangency_defect(&cd, x).total_cmp(&line_tangency_defect(&cd, y)))
        .ok_or(Error::EmptyFamily)?;
    let (t1, t2) = (contact(&ab, &gamma), contact(&cd, &gamma));
    let w1 = crate::props::second_intersection(t1, sp, &w, &tol)?;
    let w2 = crate::props::second_intersection(t2, sp, &w1c, &tol)?;
    let k = inst.kappa.and_then(|k| k.circle()).ok_or(Error::MissingObject)?;
    let (v1, v2) = (contact(&ab, &k), contact(&cd, &k));
    let p = contact_cc(&k, &w1c);
    let y = Line::through(v1, w1)?.meet(&Line::through(v2, w2)?).ok_or(Error::NonGeneric)?;
    let q = crate::props::second_intersection(v1, w1, &w, &tol)?;
    let scale = inst.scale();
    let inside = t1.dist(inst.a) + t1.dist(inst.b) <= inst.a.dist(inst.b) * (1.0 + 1e-12);
    let chord_ratio = if inside {
        property3_ratio(sp, inst.a, inst.b)
    } else {
        (sp.dist(inst.a) - sp.dist(inst.b)).abs() / inst.a.dist(inst.b)
    };
    let ratio = (chord_ratio - (sp.dist(w1) / t1.dist(w1)).sqrt()).abs();
    let parallel = sin_between(t2 - t1, w2 - w1);
    let v_parallel = sin_between(v2 - v1, w2 - w1);
    let collinear = collinearity_residual(&[sp, e, y]) / scale;
    let concyclic = match circumcircle(w1, w2, p, &tol) {
        Ok(c) => (q.dist(c.center) - c.radius).abs() / scale,
        Err(_) => f64::INFINITY,
    };
    Ok((
        WeakMtTrace { s: sp, s1, e, t1, t2, w1, w2, v1, v2, p, q, y },
        TraceIdentities { ratio, parallel, collinear, concyclic, v_parallel },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_tangent_circles() {
        let k = Circle::new(pt(0.0, 2.0), 1.0);
        let mut sols = circle_through_2pts_tangent_to_circle(pt(-1.0, 0.0), pt(1.0, 0.0), &k);
        sols.sort_by(|a, b| a.radius.total_cmp(&b.radius));
        assert_eq!(sols.len(), 2);
        let t = Tol::new(1e-10, 1e-10).unwrap();
        assert!(sols[0].approx_eq(&Circle::new(pt(0.0, 0.0), 1.0), &t), "{:?}", sols[0]);
        assert!(sols[1].approx_eq(&Circle::new(pt(0.0, 4.0 / 3.0), 5.0 / 3.0), &t), "{:?}", sols[1]);
    }

    #[test]
    fn two_points_inside_give_internal_tangency() {
        let k = Circle::new(pt(0.3, -0.1), 2.0);
        let (a, b) = (pt(-0.5, 0.2), pt(0.7, 0.9));
        let sols = circle_through_2pts_tangent_to_circle(a, b, &k);
        assert_eq!(sols.len(), 2);
        for c in sols {
            let d = c.center.dist(k.center);
            assert!((d - (k.radius - c.radius)).abs() < 1e-10);
            assert!((c.center.dist(a) - c.radius).abs() < 1e-10 && (c.center.dist(b) - c.radius).abs() < 1e-10);
        }
    }

    #[test]
    fn two_point_solutions_pass_and_touch() {
        let k = Circle::new(pt(2.0, 1.0), 0.7);
        let (a, b) = (pt(-1.0, 0.4), pt(0.5, -1.2));
        let sols = circle_through_2pts_tangent_to_circle(a, b, &k);
        assert_eq!(sols.len(), 2);
        for c in sols {
            assert!((c.center.dist(a) - c.radius).abs() < 1e-10);
            assert!((c.center.dist(b) - c.radius).abs() < 1e-10);
            assert!(circle_tangency_defect(&c, &k) < 1e-10);
        }
        assert!(circle_through_2pts_tangent_to_circle(pt(2.0, 1.7), b, &k).is_empty());
    }

    #[test]
    fn generator_is_deterministic_and_satisfies_a() {
        let a = gen_weak_mt(1).unwrap();
        assert_eq!(a, gen_weak_mt(1).unwrap());
        assert_ne!(a, gen_weak_mt(2).unwrap());
        for seed in 0..40 {
            let inst = gen_weak_mt_instance(seed).unwrap();
            assert!(residual_a(&inst).unwrap() < 1e-10, "seed {seed}");
            let k = inst.kappa.unwrap().circle().unwrap();
            // ω is one of the two circles through A, B touching κ.
            let w = inst.omega.circle().unwrap();
            let sols = circle_through_2pts_tangent_to_circle(inst.a, inst.b, &k);
            assert!(sols.iter().any(|c| c.approx_eq(&w, &Tol::new(1e-8, 1e-8).unwrap())), "seed {seed}");
        }
    }

    #[test]
    fn weak_mt_holds_on_generated_instances() {
        for seed in 0..60 {
            let s = gen_weak_mt(seed).unwrap();
            let r = check_weak_mt(&s).unwrap();
            assert!(r.pass, "seed {seed}: {r:?}");
        }
    }

    #[test]
    fn concentric_instances_are_exact() {
        for seed in 0..10 {
            let inst = gen_concentric_instance(seed).unwrap();
            assert!(residual_b(&inst) < 1e-13, "seed {seed}");
        }
    }

    #[test]
    fn perturbed_instance_fails() {
        for seed in 0..20 {
            let mut inst = gen_weak_mt_instance(seed).unwrap();
            inst.omega1.r *= 1.05;
            let r = check_weak_mt(&inst.to_scenario("perturbed", seed)).unwrap();
            assert!(!r.pass);
            assert!(r.residual("residual_b") > 1e-3, "seed {seed}: {r:?}");
            assert!(r.residual("residual_c") > 1e-3, "seed {seed}: {r:?}");
        }
    }

    #[test]
    fn inflation_route_agrees() {
        let mut checked = 0;
        for seed in 0..60 {
            let inst = gen_weak_mt_instance(seed).unwrap();
            let k = inst.kappa.unwrap();
            let d = k.center().dist(inst.abcd.center);
            if (d - inst.abcd.radius).abs() < k.r.abs() {
                // κ crosses (ABCD); inflation cannot reverse it.
                continue;
            }
            let (w, w1) = weak_mt_by_inflation(&inst).unwrap();
            let t = Tol::new(1e-8, 1e-8).unwrap();
            assert!(w.approx_eq(&inst.omega, &t) && w1.approx_eq(&inst.omega1, &t), "seed {seed}");
            checked += 1;
        }
        assert!(checked > 20);
    }

    #[test]
    fn trace_identities_hold() {
        for seed in 0..60 {
            let s = gen_weak_mt(seed).unwrap();
            let (tr, id) = weak_mt_trace(&s).unwrap();
            for (name, v) in [
                ("ratio", id.ratio),
                ("parallel", id.parallel),
                ("collinear", id.collinear),
                ("concyclic", id.concyclic),
                ("v_parallel", id.v_parallel),
            ] {
                assert!(v < 1e-7, "seed {seed}: {name} = {v:e}");
            }
            let inst = WeakMt::from_scenario(&s).unwrap();
            // Incidences of the named points.
            let t = Tol::new(1e-8, 1e-8).unwrap();
            assert!(inst.line_ab().unwrap().contains(tr.t1, &t) && inst.line_cd().unwrap().contains(tr.t2, &t));
            assert!(inst.omega.circle().unwrap().contains(tr.w1, &t));
            assert!(inst.omega1.circle().unwrap().contains(tr.w2, &t));
        }
    }

    #[test]
    fn trace_ratio_matches_property3() {
        let mut inside = 0;
        for seed in 0..80 {
            let s = gen_weak_mt(seed).unwrap();
            let inst = WeakMt::from_scenario(&s).unwrap();
            let (tr, id) = weak_mt_trace(&s).unwrap();
            if tr.t1.dist(inst.a) + tr.t1.dist(inst.b) < inst.a.dist(inst.b) + 1e-12 {
                let r = property3_ratio(tr.s, inst.a, inst.b);
                assert!((r - (tr.s.dist(tr.w1) / tr.t1.dist(tr.w1)).sqrt()).abs() < 1e-9);
                assert!((r - property3_ratio(tr.s, inst.c, inst.d)).abs() < 1e-9 || id.ratio < 1e-9);
                inside += 1;
            }
        }
        assert!(inside > 10);
    }

    #[test]
    fn concentric_trace_is_parallel() {
        for seed in 0..10 {
            let s = gen_concentric_instance(seed).unwrap().to_scenario("concentric", seed);
            let (_, id) = weak_mt_trace(&s).unwrap();
            assert!(id.parallel < 1e-12, "seed {seed}: {:e}", id.parallel);
        }
    }

    #[test]
    fn scan_oracle_agrees() {
        for seed in 0..10 {
            let inst = gen_weak_mt_instance(seed).unwrap();
            assert!(residual_c_oracle_gap(&inst).unwrap() < 1e-8, "seed {seed}");
        }
    }
}
