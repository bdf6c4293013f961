use std::f64::consts::TAU;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::scenario::{Report, Scenario, SceneObject};
use super::weak::{c_members_in, generate_with, line_tangency_defect, WeakMt};
use crate::conics::{
    bitangent_circle_on_axis, circle_from_conic, conic_from_circle, line_pair, principal, tangent_center_locus, ConicQ,
    Principal,
};
use crate::error::{Error, Result};
use crate::geom::{tangency, Circle, GObject, Point, Tangency, Tol};
use crate::numeric::{quadratic_roots, scan_roots};

pub const SIMPLIFIED_TOL: f64 = 1e-7;
pub const MAIN_TOL: f64 = 1e-6;
pub const AXES_TOL: f64 = 1e-8;

fn circles(inst: &WeakMt) -> Result<(Circle, Circle)> {
    Ok((inst.omega.circle().ok_or(Error::InvalidInput)?, inst.omega1.circle().ok_or(Error::InvalidInput)?))
}

/// `Γ` must touch one of `ω, ω₁` internally and the other externally.
pub fn gamma_admissible(inst: &WeakMt, gamma: &Circle) -> Result<()> {
    let (w, w1) = circles(inst)?;
    let tol = Tol::default();
    let g = GObject::Circle(*gamma);
    match (tangency(&g, &GObject::Circle(w), &tol), tangency(&g, &GObject::Circle(w1), &tol)) {
        (Tangency::Internal, Tangency::External) | (Tangency::External, Tangency::Internal) => Ok(()),
        _ => Err(Error::GammaNotAdmissible),
    }
}

/// Members of the pencil `((ABCD), Γ)` tangent to `AB`, and the best
/// tangency defect of one of them against `CD` (relative to the larger of
/// the circumradius and the member's radius).
pub fn simplified_defect(inst: &WeakMt, gamma: &Circle) -> Result<f64> {
    let cd = inst.line_cd()?;
    Ok(c_members_in(inst, gamma)?
        .iter()
        .map(|m| line_tangency_defect(&cd, m) / m.radius.max(inst.scale()))
        .fold(f64::INFINITY, f64::min))
}

pub fn check_simplified_mt(s: &Scenario, gamma: &Circle) -> Result<Report> {
    let started = Instant::now();
    let inst = WeakMt::from_scenario(s)?;
    gamma_admissible(&inst, gamma)?;
    let mut r = Report::new(&s.name);
    r.record("cd_defect", simplified_defect(&inst, gamma)?, SIMPLIFIED_TOL);
    Ok(r.finish(started))
}

/// Checks every circle whose id starts with `Gamma`, recording
/// `cd_defect[<id>]` for each.
pub fn check_simplified_all(s: &Scenario) -> Result<Report> {
    let started = Instant::now();
    let inst = WeakMt::from_scenario(s)?;
    let mut r = Report::new(&s.name);
    for id in s.objects.keys().filter(|k| k.starts_with("Gamma")) {
        let g = s.circle(id)?;
        gamma_admissible(&inst, &g)?;
        r.record(&format!("cd_defect[{id}]"), simplified_defect(&inst, &g)?, SIMPLIFIED_TOL);
    }
    if r.residuals.is_empty() {
        return Err(Error::MissingObject);
    }
    Ok(r.finish(started))
}

/// A random admissible `Γ`: a point of the centre locus of circles touching
/// one of `ω, ω₁` from inside and the other from outside.
pub fn sample_admissible_gamma(inst: &WeakMt, rng: &mut ChaCha8Rng) -> Result<Circle> {
    let (w, w1) = circles(inst)?;
    let locus = tangent_center_locus(&w, &w1)?;
    for _ in 0..1000 {
        let (p, r) = locus.sample(rng.gen_range(0.0..TAU), &w);
        if r < 1e-3 * inst.scale() {
            continue;
        }
        let g = Circle::new(p, r);
        if gamma_admissible(inst, &g).is_ok() {
            return Ok(g);
        }
    }
    Err(Error::GenerationExhausted)
}

/// A mixed-type instance and `n` admissible circles `Γ` for it.
pub fn gen_simplified_mt(seed: u64, n: usize) -> Result<(Scenario, Vec<Circle>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = generate_with(&mut rng, None, true)?;
    let gammas = (0..n).map(|_| sample_admissible_gamma(&inst, &mut rng)).collect::<Result<Vec<_>>>()?;
    let mut s = inst.to_scenario("simplified-mt", seed);
    for (i, g) in gammas.iter().enumerate() {
        s.insert(&format!("Gamma{}", i + 1), SceneObject::Circle(*g));
    }
    s.expected_checks = (1..=n).map(|i| format!("cd_defect[Gamma{i}]")).collect();
    Ok((s, gammas))
}

/// `(ABCD) + t·(AB ∪ CD)`, both terms normalized: the pencil of conics
/// through `A, B, C, D`.
pub fn pencil_conic(inst: &WeakMt, t: f64) -> Result<ConicQ> {
    conic_from_circle(&inst.abcd).add(t, &line_pair(&inst.line_ab()?, &inst.line_cd()?))
}

/// `|sin|` of the angle between the conic's axes and the bisectors of `AB`,
/// `CD`.
pub fn axes_bisector_residual(inst: &WeakMt, p: &Principal) -> f64 {
    let u = (inst.b - inst.a).unit();
    let v = (inst.d - inst.c).unit();
    let bis = (u + v).norm().max((u - v).norm());
    let b = if (u + v).norm() == bis { (u + v).unit() } else { (u - v).unit() };
    p.axes.iter().map(|e| e.cross(b).abs().min(e.dot(b).abs())).fold(0.0, f64::max)
}

/// Signed radius of the cycle centred at `p` touching both `ω` and `ω₁`
/// (the two tangency equations differ by a linear one).
fn locus_radius(inst: &WeakMt, p: Point) -> f64 {
    let (w, w1) = (inst.omega, inst.omega1);
    (w.r * w.r - w1.r * w1.r - (p - w.center()).norm2() + (p - w1.center()).norm2()) / (2.0 * (w.r - w1.r))
}

/// Which principal axis runs along the oriented bisector
/// `AB/|AB| − CD/|CD|`.
fn bisector_axis(inst: &WeakMt, p: &Principal) -> usize {
    let dir = (inst.b - inst.a).unit() - (inst.d - inst.c).unit();
    if p.axes[0].dot(dir).abs() >= p.axes[1].dot(dir).abs() {
        0
    } else {
        1
    }
}

/// The Main Theorem's hypotheses for the conic at `t`, made checkable:
/// the conic is central with its centre inside both `ω` and `ω₁`, and the
/// circle it promises is actually real. On the principal axis along the
/// oriented bisector the centres `P` of cycles touching both `ω, ω₁` are the
/// roots of a quadratic; the circle touching the conic twice around such a
/// `P` must have real contact points. The centre condition alone does not
/// ensure that.
pub fn main_theorem_precondition(inst: &WeakMt, t: f64) -> Result<(ConicQ, Principal)> {
    if !inst.mixed_types() {
        return Err(Error::InvalidInput);
    }
    let gamma = pencil_conic(inst, t)?;
    let p = principal(&gamma)?;
    let (w, w1) = circles(inst)?;
    if p.center.dist(w.center) >= w.radius || p.center.dist(w1.center) >= w1.radius {
        return Err(Error::ConicCenterOutside);
    }
    if circle_from_conic(&gamma, &Tol::default()).is_ok() {
        return Ok((gamma, p));
    }
    let which = bisector_axis(inst, &p);
    let e = p.axes[which];
    // r(c + s·e) = α + β·s.
    let (w0, w1c) = (inst.omega, inst.omega1);
    let alpha = locus_radius(inst, p.center);
    let beta = e.dot(w0.center() - w1c.center()) / (w0.r - w1c.r);
    let d0 = p.center - w0.center();
    let (qa, qb, qc) = (1.0 - beta * beta, 2.0 * (e.dot(d0) - beta * (alpha - w0.r)), d0.norm2() - (alpha - w0.r).powi(2));
    let real = quadratic_roots(qa, qb, qc).into_iter().any(|s| bitangent_circle_on_axis(&gamma, s, which).is_ok());
    if real {
        Ok((gamma, p))
    } else {
        Err(Error::NoRealBitangent)
    }
}

fn cycle_kind(gamma: &ConicQ, p: &Principal) -> &'static str {
    if circle_from_conic(gamma, &Tol::default()).is_ok() {
        "circle"
    } else if p.lambda[0] * p.lambda[1] > 0.0 {
        "ellipse"
    } else {
        "hyperbola"
    }
}

struct Found {
    defect: f64,
    axis: usize,
    circle: Circle,
    signed: f64,
}

/// Scans the centres of circles touching `γ` twice along each principal
/// axis, with either orientation, for those touching `ω` (oriented), and
/// measures their tangency defect against `ω₁`.
fn scan_bitangents(inst: &WeakMt, gamma: &ConicQ, p: &Principal) -> Option<Found> {
    let (w, w1) = (inst.omega, inst.omega1);
    let reach = 40.0 * inst.scale() + p.center.dist(inst.abcd.center);
    let mut best: Option<Found> = None;
    for axis in 0..2 {
        for eps in [1.0, -1.0] {
            let radius_at = |s: f64| bitangent_circle_on_axis(gamma, s, axis).ok().map(|b| b.circle);
            let f = |s: f64| radius_at(s).map(|c| c.center.dist(w.center()) - (eps * c.radius - w.r).abs());
            for s in scan_roots(f, -reach, reach, 16_000, 1e-15 * reach) {
                let Some(c) = radius_at(s) else { continue };
                let defect = (c.center.dist(w1.center()) - (eps * c.radius - w1.r).abs()).abs() / c.radius.max(inst.scale());
                if best.as_ref().map_or(true, |b| defect < b.defect) {
                    best = Some(Found { defect, axis, circle: c, signed: eps * c.radius });
                }
            }
        }
    }
    best
}

pub fn check_main_theorem(s: &Scenario, t_gamma: f64) -> Result<Report> {
    let started = Instant::now();
    let inst = WeakMt::from_scenario(s)?;
    let (gamma, p) = main_theorem_precondition(&inst, t_gamma)?;
    let mut r = Report::new(&s.name);
    r.note("conic", cycle_kind(&gamma, &p));
    if let Ok(c) = circle_from_conic(&gamma, &Tol::default()) {
        // Circles touching a circle twice are concentric with it.
        let o = c.center;
        let cands = [inst.omega.r + o.dist(inst.omega.center()), inst.omega.r - o.dist(inst.omega.center())];
        let defect = cands
            .iter()
            .map(|&rho| (o.dist(inst.omega1.center()) - (rho - inst.omega1.r).abs()).abs() / rho.abs().max(inst.scale()))
            .fold(f64::INFINITY, f64::min);
        r.record("omega1_defect", defect, MAIN_TOL);
        return Ok(r.finish(started));
    }
    r.record("axes_bisector", axes_bisector_residual(&inst, &p), AXES_TOL);
    match scan_bitangents(&inst, &gamma, &p) {
        Some(found) => {
            r.record("omega1_defect", found.defect, MAIN_TOL);
            let kind = |c: &crate::cycle::Cycle| if found.signed * c.r > 0.0 { "internal" } else { "external" };
            r.note("axis", found.axis.to_string());
            r.note("tangency_omega", kind(&inst.omega));
            r.note("tangency_omega1", kind(&inst.omega1));
            r.note(
                "circle",
                format!("{} {} {}", found.circle.center.x, found.circle.center.y, found.circle.radius),
            );
        }
        None => r.record("omega1_defect", f64::INFINITY, MAIN_TOL),
    }
    Ok(r.finish(started))
}

/// A mixed-type instance together with a conic parameter satisfying the
/// checkable hypotheses. The conic is stored as `gamma`.
pub fn gen_main_theorem(seed: u64) -> Result<(Scenario, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let inst = generate_with(&mut rng, None, true)?;
        for _ in 0..200 {
            let t = rng.gen_range(-3.0..3.0);
            if let Ok((gamma, p)) = main_theorem_precondition(&inst, t) {
                if cycle_kind(&gamma, &p) == "circle" {
                    continue;
                }
                let mut s = inst.to_scenario("main", seed);
                s.insert("gamma", SceneObject::Conic(gamma));
                s.expected_checks = ["axes_bisector", "omega1_defect"].map(String::from).to_vec();
                return Ok((s, t));
            }
        }
    }
    Err(Error::GenerationExhausted)
}

/// The same instance with `ω₁` swapped for another circle through `C, D`
/// (its centre slid along the perpendicular bisector), which breaks the
/// common tangent circle.
pub fn perturb_omega1(inst: &WeakMt, shift: f64) -> WeakMt {
    let n = (inst.d - inst.c).unit().rot90();
    let centre = inst.omega1.center() + n * (shift * inst.scale());
    let r = centre.dist(inst.c).copysign(inst.omega1.r);
    WeakMt { omega1: crate::cycle::Cycle::new(centre.x, centre.y, r), ..*inst }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theorems::weak::gen_mixed_instance;

    #[test]
    fn kappa_is_its_own_member() {
        for seed in 0..20 {
            let inst = gen_mixed_instance(seed).unwrap();
            let k = inst.kappa.unwrap().circle().unwrap();
            gamma_admissible(&inst, &k).unwrap();
            assert!(simplified_defect(&inst, &k).unwrap() < 1e-10, "seed {seed}");
        }
    }

    #[test]
    fn simplified_holds_for_sampled_gammas() {
        for seed in 0..40 {
            let (s, gammas) = gen_simplified_mt(seed, 3).unwrap();
            for g in gammas {
                let r = check_simplified_mt(&s, &g).unwrap();
                assert!(r.pass, "seed {seed}: {r:?}");
            }
        }
    }

    #[test]
    fn both_external_is_rejected() {
        let inst = gen_mixed_instance(3).unwrap();
        let (w, w1) = circles(&inst).unwrap();
        // A tiny circle externally touching ω, grown until it touches ω₁ externally.
        let u = (w1.center - w.center).unit().rot90();
        let far = w.center + u * (w.radius + 0.5);
        let not_touching = Circle::new(far, 0.1);
        assert_eq!(gamma_admissible(&inst, &not_touching), Err(Error::GammaNotAdmissible));
        let s = inst.to_scenario("x", 3);
        // Both external: a circle through the far side of each.
        let c = Circle::new(w.center + (w.center - w1.center).unit() * (w.radius + 0.2), 0.2);
        assert_eq!(check_simplified_mt(&s, &c).map(|r| r.pass), Err(Error::GammaNotAdmissible));
    }

    #[test]
    fn main_theorem_on_circle_member() {
        for seed in 0..10 {
            let inst = gen_mixed_instance(seed).unwrap();
            let s = inst.to_scenario("circle", seed);
            match check_main_theorem(&s, 0.0) {
                Ok(r) => assert!(r.residual("omega1_defect") < 1e-12, "seed {seed}: {r:?}"),
                Err(e) => assert_eq!(e, Error::ConicCenterOutside),
            }
        }
    }

    #[test]
    fn main_theorem_holds() {
        for seed in 0..25 {
            let (s, t) = gen_main_theorem(seed).unwrap();
            let r = check_main_theorem(&s, t).unwrap();
            assert!(r.pass, "seed {seed}: {r:?}");
        }
    }

    #[test]
    fn main_theorem_negative_control() {
        let mut reported = 0;
        for seed in 0..25 {
            let (s, t) = gen_main_theorem(seed).unwrap();
            let bad = perturb_omega1(&WeakMt::from_scenario(&s).unwrap(), 0.2);
            match check_main_theorem(&bad.to_scenario("bad", seed), t) {
                Ok(r) => {
                    assert!(!r.pass && r.residual("omega1_defect") > 1e-5, "seed {seed}: {r:?}");
                    reported += 1;
                }
                Err(e) => assert!(matches!(e, Error::ConicCenterOutside | Error::NoRealBitangent), "{e}"),
            }
        }
        assert!(reported > 5);
    }
}
