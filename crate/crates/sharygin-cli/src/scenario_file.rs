//! Line-oriented scenario files.
//!
//! ```text
//! file     := { line "\n" }
//! line     := blank | comment | entry
//! comment  := "#" { any }
//! entry    := key ":" value
//! name:    <text to end of line, trimmed>
//! seed:    <unsigned integer>
//! checks:  <id> { <id> }                 (may repeat; ids accumulate)
//! tol:     <check-id> <number>           (tolerance override)
//! param:   <key> <number>                (checker parameter, e.g. t_gamma)
//! object:  <id> <kind> <number> { <number> }
//! kind     := point (x y) | line (a b c) | circle (x y r, r > 0)
//!           | cycle (x y r, signed; clockwise when r > 0)
//!           | conic (A B C D E F for A x² + 2B xy + C y² + 2D x + 2E y + F)
//! number   := decimal with optional sign, fraction and exponent
//! ```
//!
//! Ids are unique across objects. Lines and conics are normalized on load
//! unless already canonical, so a saved file reloads to the same values.
//! Numbers are written in shortest round-trip form.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::Matrix3;
use sharygin::conics::ConicQ;
use sharygin::cycle::Cycle;
use sharygin::theorems::{Scenario, SceneObject};
use sharygin::{pt, Circle, Line};

#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScenarioFile {
    pub scenario: Scenario,
    pub tol: BTreeMap<String, f64>,
    pub params: BTreeMap<String, f64>,
}

impl From<Scenario> for ScenarioFile {
    fn from(scenario: Scenario) -> ScenarioFile {
        ScenarioFile { scenario, ..ScenarioFile::default() }
    }
}

/// Whitespace-separated words of a line with their 1-based columns.
fn words(s: &str, offset: usize) -> Vec<(usize, &str)> {
    let mut out = vec![];
    let mut start = None;
    for (i, ch) in s.char_indices().chain(std::iter::once((s.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (true, Some(b)) => {
                out.push((offset + s[..b].chars().count() + 1, &s[b..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

fn number(line: usize, (column, w): (usize, &str)) -> Result<f64, ParseError> {
    let ok = !w.is_empty()
        && w.chars().all(|c| c.is_ascii_digit() || "+-.eE".contains(c))
        && w.chars().any(|c| c.is_ascii_digit());
    match w.parse::<f64>() {
        Ok(v) if ok && v.is_finite() => Ok(v),
        _ => Err(ParseError { line, column, message: format!("expected a number, found `{w}`") }),
    }
}

fn arity(kind: &str) -> Option<usize> {
    Some(match kind {
        "point" => 2,
        "line" | "circle" | "cycle" => 3,
        "conic" => 6,
        _ => return None,
    })
}

fn canonical_line(v: &[f64]) -> Option<Line> {
    let (a, b, c) = (v[0], v[1], v[2]);
    let exact = (a.hypot(b) - 1.0).abs() <= 4.0 * f64::EPSILON && (a > 1e-12 || (a.abs() <= 1e-12 && b > 0.0));
    if exact {
        Some(Line { a, b, c })
    } else {
        Line::new(a, b, c).ok()
    }
}

fn canonical_conic(v: &[f64]) -> Option<ConicQ> {
    let m = Matrix3::new(v[0], v[1], v[3], v[1], v[2], v[4], v[3], v[4], v[5]);
    if (m.norm() - 1.0).abs() <= 8.0 * f64::EPSILON {
        Some(ConicQ { q: m })
    } else {
        ConicQ::new(m).ok()
    }
}

fn object(kind: &str, v: &[f64]) -> Option<SceneObject> {
    Some(match kind {
        "point" => SceneObject::Point(pt(v[0], v[1])),
        "line" => SceneObject::Line(canonical_line(v)?),
        "circle" => SceneObject::Circle(Circle::try_new(pt(v[0], v[1]), v[2]).ok()?),
        "cycle" => SceneObject::Cycle(Cycle::new(v[0], v[1], v[2])),
        "conic" => SceneObject::Conic(canonical_conic(v)?),
        _ => return None,
    })
}

pub fn params(obj: &SceneObject) -> Vec<f64> {
    match obj {
        SceneObject::Point(p) => vec![p.x, p.y],
        SceneObject::Line(l) => l.coeffs().to_vec(),
        SceneObject::Circle(c) => vec![c.center.x, c.center.y, c.radius],
        SceneObject::Cycle(c) => vec![c.x, c.y, c.r],
        SceneObject::Conic(q) => q.coeffs().to_vec(),
    }
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<ScenarioFile, ParseError> {
        let mut file = ScenarioFile::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |column: usize, message: String| ParseError { line, column, message };
            let trimmed = raw.trim_start();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let indent = raw.chars().count() - trimmed.chars().count();
            let Some(colon) = trimmed.find(':') else {
                return Err(err(indent + 1, "expected `key: value`".into()));
            };
            let key = trimmed[..colon].trim();
            let rest = &trimmed[colon + 1..];
            let offset = indent + trimmed[..colon + 1].chars().count();
            let ws = words(rest, offset);
            let end = raw.chars().count() + 1;
            match key {
                "name" => file.scenario.name = rest.trim().to_string(),
                "seed" => {
                    let [(col, w)] = ws[..] else {
                        return Err(err(ws.first().map_or(end, |w| w.0), "expected one seed".into()));
                    };
                    file.scenario.seed = w.parse().map_err(|_| err(col, format!("invalid seed `{w}`")))?;
                }
                "checks" => file.scenario.expected_checks.extend(ws.iter().map(|w| w.1.to_string())),
                "tol" | "param" => {
                    let [(_, id), v] = ws[..] else {
                        return Err(err(ws.first().map_or(end, |w| w.0), format!("expected `{key}: <id> <number>`")));
                    };
                    let map = if key == "tol" { &mut file.tol } else { &mut file.params };
                    map.insert(id.to_string(), number(line, v)?);
                }
                "object" => {
                    let [(id_col, id), (kind_col, kind), ref nums @ ..] = ws[..] else {
                        return Err(err(ws.first().map_or(end, |w| w.0), "expected `object: <id> <kind> <params>`".into()));
                    };
                    let Some(n) = arity(kind) else {
                        return Err(err(kind_col, format!("unknown kind `{kind}`")));
                    };
                    if nums.len() != n {
                        let col = nums.get(n).map_or(end, |w| w.0);
                        return Err(err(col, format!("{kind} takes {n} numbers, found {}", nums.len())));
                    }
                    let v = nums.iter().map(|&w| number(line, w)).collect::<Result<Vec<_>, _>>()?;
                    let obj = object(kind, &v).ok_or_else(|| err(nums[0].0, format!("invalid {kind}")))?;
                    if file.scenario.has(id) {
                        return Err(err(id_col, format!("duplicate id `{id}`")));
                    }
                    file.scenario.insert(id, obj);
                }
                _ => return Err(err(indent + 1, format!("unknown key `{key}`"))),
            }
        }
        Ok(file)
    }

    pub fn to_text(&self) -> String {
        let s = &self.scenario;
        let mut out = format!("name: {}\nseed: {}\n", s.name, s.seed);
        if !s.expected_checks.is_empty() {
            out += &format!("checks: {}\n", s.expected_checks.join(" "));
        }
        for (k, v) in &self.tol {
            out += &format!("tol: {k} {v:?}\n");
        }
        for (k, v) in &self.params {
            out += &format!("param: {k} {v:?}\n");
        }
        for (id, obj) in &s.objects {
            let nums: Vec<String> = params(obj).iter().map(|v| format!("{v:?}")).collect();
            out += &format!("object: {id} {} {}\n", obj.kind(), nums.join(" "));
        }
        out
    }
}
