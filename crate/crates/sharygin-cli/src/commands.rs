//! Command implementations. Each returns an [`Outcome`] rather than printing
//! or exiting, so the binary stays a thin shell and tests can call them.

use std::fmt::Write;
use std::path::Path;

use serde_json::json;
use sharygin::cycle::{inflate, lorentz, tangent_cycle_axis, tangent_cycles, Axis, Cycle, Oriented};
use sharygin::geom::{invert, polar, tangency};
use sharygin::hyperbolic::{hyp_inflate, Absolute};
use sharygin::pencil::sharygin_points;
use sharygin::theorems::{self as th, Report, Scenario, SceneObject};
use sharygin::{pt, Circle, Error, GObject, Line, Point, Tangency, Tol};

use crate::num::fmt12;
use crate::scenario_file::ScenarioFile;
use crate::svg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    pub fn invalid(msg: impl std::fmt::Display) -> Outcome {
        Outcome { code: EXIT_INVALID, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

/// Kernel errors print as their variant name plus the precondition it
/// guards.
fn kernel(e: Error) -> Outcome {
    let why = match e {
        Error::IntersectingCircles => "the circles must not intersect",
        Error::SpeedOutOfRange => "the speed must satisfy |v| < 1",
        Error::OutsideDisk => "the point must lie inside the absolute",
        Error::CenterPole => "the pole must differ from the centre",
        Error::GammaNotAdmissible => "Gamma must touch one of omega, omega1 internally and the other externally",
        Error::ConicCenterOutside => "the conic's centre must lie inside omega and omega1",
        Error::MissingObject => "the scenario lacks an object the check needs",
        _ => "invalid input",
    };
    Outcome::invalid(format!("{e}: {why}"))
}

fn read(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome::invalid(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Outcome> {
    std::fs::write(path, text).map_err(|e| Outcome::invalid(format!("{}: {e}", path.display())))
}

pub fn load(path: &Path) -> Result<ScenarioFile, Outcome> {
    ScenarioFile::parse(&read(path)?).map_err(|e| Outcome::invalid(format!("{}: {e}", path.display())))
}

fn numbers(s: &str) -> Result<Vec<f64>, Outcome> {
    s.split_whitespace()
        .map(|w| w.parse::<f64>().ok().filter(|v| v.is_finite()))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Outcome::invalid(format!("expected numbers, found `{s}`")))
}

fn circle_arg(s: &str) -> Result<Circle, Outcome> {
    match numbers(s)?[..] {
        [x, y, r] => Circle::try_new(pt(x, y), r).map_err(|_| Outcome::invalid(format!("`{s}`: radius must be positive"))),
        _ => Err(Outcome::invalid(format!("a circle is `x y r`, found `{s}`"))),
    }
}

fn point_str(p: Point) -> String {
    format!("({}, {})", fmt12(p.x), fmt12(p.y))
}

/// The two limiting points of a non-intersecting pair, optionally drawn with
/// their common polar.
pub fn cmd_sharygin(c1: &Circle, c2: &Circle, svg_out: Option<&Path>) -> Outcome {
    let tol = Tol::default();
    let lp = match sharygin_points(c1, c2, &tol) {
        Ok(lp) => lp,
        Err(e) => return kernel(e),
    };
    let mut out = format!("S  = {}\nS' = {}\n", point_str(lp.s), point_str(lp.s_prime));
    let common = polar(lp.s, c1, &tol).ok();
    if let Some(l) = common {
        let term = |v: f64| if v < 0.0 { format!("- {}", fmt12(-v)) } else { format!("+ {}", fmt12(v)) };
        let _ = writeln!(out, "common polar: {} x {} y {} = 0", fmt12(l.a), term(l.b), term(l.c));
    }
    if let Some(path) = svg_out {
        let mut s = Scenario::new("sharygin points", 0);
        s.insert("w1", SceneObject::Circle(*c1));
        s.insert("w2", SceneObject::Circle(*c2));
        s.insert("S", SceneObject::Point(lp.s));
        s.insert("S'", SceneObject::Point(lp.s_prime));
        if let Some(l) = common {
            s.insert("polar", SceneObject::Line(l));
        }
        if let Err(o) = write_file(path, &svg::render(&s)) {
            return o;
        }
    }
    Outcome::ok(out)
}

pub fn cmd_sharygin_args(circles: &[String], scenario: Option<&Path>, ids: &[String], svg_out: Option<&Path>) -> Outcome {
    let pair = match (circles, scenario) {
        ([a, b], None) => circle_arg(a).and_then(|a| Ok((a, circle_arg(b)?))),
        ([], Some(path)) => load(path).and_then(|f| match ids {
            [a, b] => {
                let get = |id: &str| f.scenario.circle(id).map_err(kernel);
                Ok((get(a)?, get(b)?))
            }
            _ => Err(Outcome::invalid("--ids takes two object ids")),
        }),
        _ => Err(Outcome::invalid("give two circles `x y r`, or --scenario FILE --ids ID1 ID2")),
    };
    match pair {
        Ok((a, b)) => cmd_sharygin(&a, &b, svg_out),
        Err(o) => o,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformKind {
    Inflate,
    Lorentz,
    HypInflate,
    Invert,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TransformParams {
    pub rho: Option<String>,
    pub v: Option<f64>,
    pub absolute: Option<String>,
    pub center: Option<String>,
    pub k2: Option<f64>,
}

/// `2`, `-0.5`, `ln3`, `ln(3)`.
pub fn parse_rho(s: &str) -> Result<f64, Outcome> {
    let bad = || Outcome::invalid(format!("invalid rho `{s}`"));
    let t = s.trim();
    let v = match t.strip_prefix("-ln").map(|r| (-1.0, r)).or_else(|| t.strip_prefix("ln").map(|r| (1.0, r))) {
        Some((sign, r)) => sign * r.trim_matches(|c| c == '(' || c == ')').parse::<f64>().map_err(|_| bad())?.ln(),
        None => t.parse::<f64>().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Transform operands: `x y r` is a cycle (a circle for `invert`),
/// `axis dx dy offset` an oriented line, `line a b c` and `point x y` plain
/// objects for `invert`.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Operand {
    Oriented(Oriented),
    Plain(GObject),
}

fn operand(s: &str, kind: TransformKind) -> Result<Operand, Outcome> {
    let mut it = s.split_whitespace();
    let head = it.clone().next().unwrap_or("");
    let tagged = ["axis", "line", "point", "cycle", "circle"].contains(&head);
    if tagged {
        it.next();
    }
    let rest: Vec<&str> = it.collect();
    let v = numbers(&rest.join(" "))?;
    let bad = || Outcome::invalid(format!("cannot read `{s}` as an operand"));
    let invert = kind == TransformKind::Invert;
    Ok(match (if tagged { head } else { "" }, &v[..]) {
        ("" | "cycle" | "circle", &[x, y, r]) if invert => {
            Operand::Plain(GObject::Circle(Circle::try_new(pt(x, y), r.abs()).map_err(|_| bad())?))
        }
        ("line", &[a, b, c]) if invert => Operand::Plain(GObject::Line(Line::new(a, b, c).map_err(|_| bad())?)),
        ("point", &[x, y]) if invert => Operand::Plain(GObject::Point(pt(x, y))),
        ("" | "cycle", &[x, y, r]) => Operand::Oriented(Oriented::Cycle(Cycle::new(x, y, r))),
        ("axis", &[dx, dy, off]) if !invert => Operand::Oriented(Oriented::Axis(Axis::new(dx, dy, off).map_err(|_| bad())?)),
        _ => return Err(bad()),
    })
}

fn show(op: &Operand) -> String {
    let j = |v: &[f64]| v.iter().map(|x| fmt12(*x)).collect::<Vec<_>>().join(" ");
    match op {
        Operand::Oriented(Oriented::Cycle(c)) => j(&[c.x, c.y, c.r]),
        Operand::Oriented(Oriented::Axis(a)) => format!("axis {}", j(&[a.dx, a.dy, a.offset])),
        Operand::Plain(GObject::Circle(c)) => j(&[c.center.x, c.center.y, c.radius]),
        Operand::Plain(GObject::Line(l)) => format!("line {}", j(&l.coeffs())),
        Operand::Plain(GObject::Point(p)) => format!("point {}", j(&[p.x, p.y])),
    }
}

fn touching(a: &Operand, b: &Operand, tol: &Tol) -> Option<bool> {
    match (a, b) {
        (Operand::Oriented(Oriented::Cycle(x)), Operand::Oriented(Oriented::Cycle(y))) => Some(tangent_cycles(x, y, tol)),
        (Operand::Oriented(Oriented::Cycle(c)), Operand::Oriented(Oriented::Axis(ax)))
        | (Operand::Oriented(Oriented::Axis(ax)), Operand::Oriented(Oriented::Cycle(c))) => Some(tangent_cycle_axis(c, ax, tol)),
        (Operand::Plain(x), Operand::Plain(y)) => Some(!matches!(tangency(x, y, tol), Tangency::None)),
        _ => None,
    }
}

pub fn cmd_transform(kind: TransformKind, p: &TransformParams, objects: &[String], check_tangency: bool) -> Outcome {
    match transform(kind, p, objects, check_tangency) {
        Ok(s) => Outcome::ok(s),
        Err(o) => o,
    }
}

fn transform(kind: TransformKind, p: &TransformParams, objects: &[String], check_tangency: bool) -> Result<String, Outcome> {
    let tol = Tol::default();
    let ops = objects.iter().map(|s| operand(s, kind)).collect::<Result<Vec<_>, _>>()?;
    let need = |name: &str| Outcome::invalid(format!("{kind:?} needs --{name}"));
    let rho = || p.rho.as_deref().ok_or_else(|| need("rho")).and_then(parse_rho);
    let images: Vec<Operand> = match kind {
        TransformKind::Inflate => {
            let r = rho()?;
            ops.iter()
                .map(|o| match o {
                    Operand::Oriented(x) => Operand::Oriented(inflate(x, r)),
                    Operand::Plain(_) => unreachable!("inflate operands are oriented"),
                })
                .collect()
        }
        TransformKind::Lorentz => {
            let v = p.v.ok_or_else(|| need("v"))?;
            ops.iter()
                .map(|o| match o {
                    Operand::Oriented(Oriented::Cycle(c)) => lorentz(v, c).map(|c| Operand::Oriented(Oriented::Cycle(c))).map_err(kernel),
                    _ => Err(Outcome::invalid("lorentz acts on cycles `x y r` only")),
                })
                .collect::<Result<_, _>>()?
        }
        TransformKind::HypInflate => {
            let r = rho()?;
            let abs = Absolute::new(circle_arg(p.absolute.as_deref().ok_or_else(|| need("absolute"))?)?);
            ops.iter()
                .map(|o| match o {
                    Operand::Oriented(x) => hyp_inflate(x, r, &abs).map(Operand::Oriented).map_err(kernel),
                    Operand::Plain(_) => unreachable!("hyp-inflate operands are oriented"),
                })
                .collect::<Result<_, _>>()?
        }
        TransformKind::Invert => {
            let z = match numbers(p.center.as_deref().ok_or_else(|| need("center"))?)?[..] {
                [x, y] => pt(x, y),
                _ => return Err(Outcome::invalid("--center is `x y`")),
            };
            let k2 = p.k2.unwrap_or(1.0);
            ops.iter()
                .map(|o| match o {
                    Operand::Plain(g) => invert(z, k2, g, &tol).map(Operand::Plain).map_err(kernel),
                    Operand::Oriented(_) => unreachable!("invert operands are plain"),
                })
                .collect::<Result<_, _>>()?
        }
    };
    let mut out: String = images.iter().map(|o| show(o) + "\n").collect();
    if check_tangency {
        let yn = |b: Option<bool>| b.map_or("-", |b| if b { "yes" } else { "no" });
        out += "pair  before  after\n";
        for i in 0..ops.len() {
            for j in i + 1..ops.len() {
                let (b, a) = (touching(&ops[i], &ops[j], &tol), touching(&images[i], &images[j], &tol));
                let _ = writeln!(out, "{} {}  {}  {}", i + 1, j + 1, yn(b), yn(a));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    WeakMt,
    SimplifiedMt,
    Main,
    Olympiad1,
    Olympiad2,
    Properties,
    Lemma,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::WeakMt => "weak-mt",
            Suite::SimplifiedMt => "simplified-mt",
            Suite::Main => "main",
            Suite::Olympiad1 => "olympiad1",
            Suite::Olympiad2 => "olympiad2",
            Suite::Properties => "properties",
            Suite::Lemma => "lemma",
        }
    }

    /// The seeded scenario a suite checks, with any parameter the checker
    /// needs. Properties and lemma configurations are not scenarios.
    pub fn generate(self, seed: u64) -> sharygin::Result<ScenarioFile> {
        let mut f: ScenarioFile = match self {
            Suite::WeakMt => th::gen_weak_mt(seed)?.into(),
            Suite::SimplifiedMt => th::gen_simplified_mt(seed, 3)?.0.into(),
            Suite::Main => {
                let (s, t) = th::gen_main_theorem(seed)?;
                let mut f = ScenarioFile::from(s);
                f.params.insert("t_gamma".into(), t);
                f
            }
            Suite::Olympiad1 => th::gen_olympiad1(seed)?.into(),
            Suite::Olympiad2 => th::gen_olympiad2(seed).into(),
            Suite::Properties | Suite::Lemma => return Err(Error::InvalidInput),
        };
        f.scenario.name = self.name().into();
        Ok(f)
    }

    pub fn check(self, f: &ScenarioFile) -> sharygin::Result<Report> {
        let s = &f.scenario;
        let mut r = match self {
            Suite::WeakMt => th::check_weak_mt(s)?,
            Suite::SimplifiedMt => th::check_simplified_all(s)?,
            Suite::Main => th::check_main_theorem(s, *f.params.get("t_gamma").ok_or(Error::MissingObject)?)?,
            Suite::Olympiad1 => th::olympiad1_report(&s.name, s.point("A")?, s.point("B")?, s.point("C")?)?,
            Suite::Olympiad2 => th::olympiad2_report(&s.name, [s.point("A")?, s.point("B")?, s.point("C")?])?,
            Suite::Properties | Suite::Lemma => return Err(Error::InvalidInput),
        };
        for (id, &t) in &f.tol {
            r.set_tolerance(id, t);
        }
        Ok(r)
    }

    pub fn run_seed(self, seed: u64) -> sharygin::Result<Report> {
        match self {
            Suite::Properties => th::properties_check(seed),
            Suite::Lemma => th::lemma_check(seed),
            _ => self.check(&self.generate(seed)?),
        }
    }
}

fn summarize(suite: &str, runs: &[(u64, sharygin::Result<Report>)]) -> (String, bool) {
    use std::collections::BTreeMap;
    let mut worst: BTreeMap<&str, (f64, f64)> = BTreeMap::new();
    let mut out = String::new();
    let mut passed = 0;
    for (seed, run) in runs {
        match run {
            Ok(r) => {
                for (k, &v) in &r.residuals {
                    let e = worst.entry(k.as_str()).or_insert((0.0, r.tolerances[k]));
                    if !(v <= e.0) {
                        e.0 = v;
                    }
                }
                if r.pass {
                    passed += 1;
                } else {
                    let bad: Vec<String> = r
                        .residuals
                        .iter()
                        .filter(|(k, &v)| !(v <= r.tolerances[*k]))
                        .map(|(k, &v)| format!("{k} = {}", fmt12(v)))
                        .collect();
                    let _ = writeln!(out, "seed {seed}: FAIL {}", bad.join(", "));
                }
            }
            Err(e) => {
                let _ = writeln!(out, "seed {seed}: error {e}");
            }
        }
    }
    let width = worst.keys().map(|k| k.len()).max().unwrap_or(5).max(5);
    let mut table = format!("suite {suite}\n{:<width$}  {:<20}  tolerance\n", "check", "max residual");
    for (k, (v, t)) in &worst {
        let _ = writeln!(table, "{k:<width$}  {:<20}  {}", fmt12(*v), fmt12(*t));
    }
    let _ = writeln!(table, "passed {passed}/{}", runs.len());
    (table + &out, passed == runs.len())
}

fn reports_json(suite: &str, runs: &[(u64, sharygin::Result<Report>)]) -> String {
    let entries: Vec<_> = runs
        .iter()
        .map(|(seed, run)| match run {
            Ok(r) => json!({ "seed": seed, "report": r }),
            Err(e) => json!({ "seed": seed, "error": e.to_string() }),
        })
        .collect();
    let passed = runs.iter().filter(|(_, r)| r.as_ref().is_ok_and(|r| r.pass)).count();
    let doc = json!({ "suite": suite, "total": runs.len(), "passed": passed, "runs": entries });
    serde_json::to_string_pretty(&doc).expect("reports serialize") + "\n"
}

/// Runs seeds `start..start + seeds`, or the single scenario in `file`.
pub fn cmd_verify(suite: Suite, seeds: u64, start: u64, file: Option<&Path>, json_out: Option<&Path>) -> Outcome {
    let runs: Vec<(u64, sharygin::Result<Report>)> = match file {
        Some(path) => {
            let f = match load(path) {
                Ok(f) => f,
                Err(o) => return o,
            };
            match suite.check(&f) {
                Ok(r) => vec![(f.scenario.seed, Ok(r))],
                Err(e @ (Error::MissingObject | Error::InvalidInput | Error::GammaNotAdmissible | Error::ConicCenterOutside)) => {
                    return kernel(e)
                }
                Err(e) => vec![(f.scenario.seed, Err(e))],
            }
        }
        None => (start..start + seeds).map(|s| (s, suite.run_seed(s))).collect(),
    };
    let (text, all) = summarize(suite.name(), &runs);
    if let Some(path) = json_out {
        if let Err(o) = write_file(path, &reports_json(suite.name(), &runs)) {
            return o;
        }
    }
    Outcome { code: if all { EXIT_OK } else { EXIT_FAIL }, stdout: text, stderr: String::new() }
}

pub fn cmd_render(file: &Path, out: &Path) -> Outcome {
    let f = match load(file) {
        Ok(f) => f,
        Err(o) => return o,
    };
    match write_file(out, &svg::render(&f.scenario)) {
        Ok(()) => Outcome::ok(format!("wrote {}\n", out.display())),
        Err(o) => o,
    }
}

pub fn cmd_generate(suite: Suite, seed: u64, out: Option<&Path>) -> Outcome {
    let f = match suite.generate(seed) {
        Ok(f) => f,
        Err(Error::InvalidInput) => return Outcome::invalid(format!("suite {} has no scenario files", suite.name())),
        Err(e) => return Outcome { code: EXIT_FAIL, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    let text = f.to_text();
    match out {
        Some(path) => match write_file(path, &text) {
            Ok(()) => Outcome::ok(format!("wrote {}\n", path.display())),
            Err(o) => o,
        },
        None => Outcome::ok(text),
    }
}
