use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::conics::ConicQ;
use crate::cycle::Cycle;
use crate::error::{Error, Result};
use crate::geom::{Circle, Line, Point};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum SceneObject {
    Point(Point),
    Line(Line),
    Circle(Circle),
    Cycle(Cycle),
    Conic(ConicQ),
}

impl SceneObject {
    pub fn kind(&self) -> &'static str {
        match self {
            SceneObject::Point(_) => "point",
            SceneObject::Line(_) => "line",
            SceneObject::Circle(_) => "circle",
            SceneObject::Cycle(_) => "cycle",
            SceneObject::Conic(_) => "conic",
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            SceneObject::Point(p) => p.is_finite(),
            SceneObject::Line(l) => l.coeffs().iter().all(|v| v.is_finite()),
            SceneObject::Circle(c) => c.center.is_finite() && c.radius.is_finite(),
            SceneObject::Cycle(c) => c.x.is_finite() && c.y.is_finite() && c.r.is_finite(),
            SceneObject::Conic(q) => q.coeffs().iter().all(|v| v.is_finite()),
        }
    }
}

/// A named configuration; generators fill it from a seed so the same seed
/// always gives the same objects.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub seed: u64,
    pub objects: BTreeMap<String, SceneObject>,
    pub expected_checks: Vec<String>,
}

impl Scenario {
    pub fn new(name: impl Into<String>, seed: u64) -> Scenario {
        Scenario { name: name.into(), seed, ..Scenario::default() }
    }

    pub fn insert(&mut self, id: &str, obj: SceneObject) {
        self.objects.insert(id.to_string(), obj);
    }

    fn get(&self, id: &str) -> Result<&SceneObject> {
        self.objects.get(id).ok_or(Error::MissingObject)
    }

    pub fn point(&self, id: &str) -> Result<Point> {
        match self.get(id)? {
            SceneObject::Point(p) => Ok(*p),
            _ => Err(Error::InvalidInput),
        }
    }

    pub fn line(&self, id: &str) -> Result<Line> {
        match self.get(id)? {
            SceneObject::Line(l) => Ok(*l),
            _ => Err(Error::InvalidInput),
        }
    }

    /// Circles also accept a cycle (its orientation dropped).
    pub fn circle(&self, id: &str) -> Result<Circle> {
        match self.get(id)? {
            SceneObject::Circle(c) => Ok(*c),
            SceneObject::Cycle(c) => c.circle().ok_or(Error::InvalidInput),
            _ => Err(Error::InvalidInput),
        }
    }

    /// Cycles also accept a circle, read as clockwise.
    pub fn cycle(&self, id: &str) -> Result<Cycle> {
        match self.get(id)? {
            SceneObject::Cycle(c) => Ok(*c),
            SceneObject::Circle(c) => Ok(Cycle::from_circle(c, true)),
            _ => Err(Error::InvalidInput),
        }
    }

    pub fn conic(&self, id: &str) -> Result<ConicQ> {
        match self.get(id)? {
            SceneObject::Conic(q) => Ok(*q),
            _ => Err(Error::InvalidInput),
        }
    }

    pub fn has(&self, id: &str) -> bool {
        self.objects.contains_key(id)
    }
}

/// Residuals of one run against their tolerances. `pass` holds exactly when
/// every residual is finite and within its tolerance. Wall time is kept out
/// of the serialized form so reports of a seed stay byte-identical.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub residuals: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    pub notes: BTreeMap<String, String>,
    pub pass: bool,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl Report {
    pub fn new(scenario: impl Into<String>) -> Report {
        Report { scenario: scenario.into(), ..Report::default() }
    }

    pub fn record(&mut self, id: &str, residual: f64, tol: f64) {
        self.residuals.insert(id.to_string(), residual);
        self.tolerances.insert(id.to_string(), tol);
    }

    pub fn note(&mut self, key: &str, value: impl Into<String>) {
        self.notes.insert(key.to_string(), value.into());
    }

    pub fn finish(mut self, started: Instant) -> Report {
        self.pass = !self.residuals.is_empty()
            && self.residuals.iter().all(|(k, &r)| r.is_finite() && r <= self.tolerances[k]);
        self.wall_time = started.elapsed();
        self
    }

    /// Replaces the tolerance of a recorded check and re-evaluates `pass`.
    /// Unknown ids are ignored.
    pub fn set_tolerance(&mut self, id: &str, tol: f64) {
        if let Some(t) = self.tolerances.get_mut(id) {
            *t = tol;
            self.pass = self.residuals.iter().all(|(k, &r)| r.is_finite() && r <= self.tolerances[k]);
        }
    }

    pub fn residual(&self, id: &str) -> f64 {
        self.residuals.get(id).copied().unwrap_or(f64::NAN)
    }

    /// Largest residual relative to its tolerance.
    pub fn worst_ratio(&self) -> f64 {
        self.residuals
            .iter()
            .map(|(k, &r)| if r.is_finite() { r / self.tolerances[k] } else { f64::INFINITY })
            .fold(0.0, f64::max)
    }
}
