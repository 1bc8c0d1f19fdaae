//! Randomized identity suites, one per theorem or displayed equation.
//!
//! Every check runs a number of seeded trials per fixture. A trial draws its
//! inputs from a stream keyed by (seed, check id, fixture, trial), so any
//! failure can be replayed in isolation.

mod basic;
mod canonical;
mod cotangent;
mod helpers;
mod lifted;
mod poisson;

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use crate::algebroid::{so3, Algebroid};
use crate::error::{Error, Result};
use crate::poisson::{build_poisson, PoissonStructure};
use crate::random::Gen;
use crate::ring::{Chart, Poly};
use crate::tensor::{wedge, ContractionOrder, GradedTensor, ACTIVE_ORDER};

/// Named algebroids and Poisson structures the suites iterate over.
#[derive(Clone, Default)]
pub struct Fixtures {
    pub algebroids: Vec<(String, Arc<Algebroid>)>,
    pub poisson: Vec<(String, Arc<PoissonStructure>)>,
}

impl Fixtures {
    /// so(3), canonical algebroids on 1–3 coordinates, a rank-2 algebroid
    /// with non-constant anchor over (x), and three Poisson structures.
    pub fn standard() -> Fixtures {
        let canon = |names: &[&str]| Algebroid::canonical(&Chart::new(names.iter().copied()).unwrap()).unwrap();
        let mut f = Fixtures::default();
        f.algebroids.push(("so3".into(), so3()));
        f.algebroids.push(("canonical1".into(), canon(&["x"])));
        f.algebroids.push(("canonical2".into(), canon(&["x", "y"])));
        f.algebroids.push(("canonical3".into(), canon(&["x", "y", "z"])));
        f.algebroids.push(("rank2".into(), rank2()));
        let xp = canon(&["x", "p"]);
        let p = wedge(&xp.basis(1), &xp.basis(0)).unwrap();
        f.poisson.push(("canonical_xp".into(), Arc::new(build_poisson(xp.chart(), &p).unwrap())));
        let xy = canon(&["x", "y", "p_x", "p_y"]);
        let p = wedge(&xy.basis(2), &xy.basis(0)).unwrap().add(&wedge(&xy.basis(3), &xy.basis(1)).unwrap()).unwrap();
        f.poisson.push(("canonical_xypp".into(), Arc::new(build_poisson(xy.chart(), &p).unwrap())));
        f.poisson.push(("so3_linear".into(), so3().linear_poisson().unwrap()));
        f
    }
}

/// Rank 2 over (x): anchor x∂_x, x²∂_x; [e_1, e_2] = (x − x²)e_1 + x e_2.
pub fn rank2() -> Arc<Algebroid> {
    let chart = Chart::new(["x"]).unwrap();
    let p = |s: &str| chart.parse(s).unwrap();
    let mut table = crate::algebroid::StructureTable::new();
    table.insert((0, 1), [(0, p("x - x^2")), (1, p("x"))].into_iter().collect());
    Algebroid::build(chart.clone(), vec!["1".into(), "2".into()], vec![vec![p("x")], vec![p("x^2")]], &table)
        .expect("rank-2 fixture is valid")
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Trials per check and fixture, unless a check fixes its own count.
    pub trials: usize,
    pub max_degree: u32,
    /// Only run the check with this id, bare or prefixed by the suite name.
    pub check: Option<String>,
    pub fixture: Option<String>,
    pub trial: Option<usize>,
    /// Insertion order used by the Theorem 2 calibration checks.
    pub order: ContractionOrder,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 7, trials: 50, max_degree: 2, check: None, fixture: None, trial: None, order: ACTIVE_ORDER }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub fixture: String,
    pub trial: usize,
    pub inputs: Vec<(String, String)>,
    pub residual: String,
    /// Arguments of the `suite` subcommand that replay this trial alone.
    pub replay: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub suite: String,
    pub id: String,
    pub status: Status,
    pub trials: usize,
    pub failures: usize,
    pub witness: Option<Witness>,
    pub error: Option<String>,
    pub notes: Vec<String>,
    pub millis: u64,
}

#[derive(Clone, Copy)]
pub(crate) enum Scope {
    /// Every algebroid fixture.
    Algebroids,
    /// Algebroids over a nonempty chart.
    Charted,
    /// Canonical algebroids.
    Canonical,
    /// Every Poisson fixture.
    Poisson,
    /// Poisson fixtures with constant invertible matrix.
    Symplectic,
    /// A single run without fixture.
    Once,
}

#[derive(Clone, Copy)]
pub(crate) enum Trials {
    Config,
    Fixed(usize),
    AtLeast(usize),
}

pub(crate) type Body = fn(&mut Trial) -> Result<Option<String>>;

pub(crate) struct Check {
    pub id: &'static str,
    pub scope: Scope,
    pub trials: Trials,
    pub body: Body,
}

pub(crate) const fn check(id: &'static str, scope: Scope, body: Body) -> Check {
    Check { id, scope, trials: Trials::Config, body }
}

pub(crate) const fn once(id: &'static str, scope: Scope, body: Body) -> Check {
    Check { id, scope, trials: Trials::Fixed(1), body }
}

pub struct Case {
    pub name: String,
    pub algebroid: Option<Arc<Algebroid>>,
    pub poisson: Option<Arc<PoissonStructure>>,
}

/// State of one trial: the random stream, recorded inputs and notes.
pub struct Trial<'a> {
    pub case: &'a Case,
    pub gen: Gen,
    pub index: usize,
    pub order: ContractionOrder,
    inputs: Vec<(String, String)>,
    notes: Vec<String>,
}

impl Trial<'_> {
    pub fn alg(&self) -> Arc<Algebroid> {
        self.case.algebroid.clone().expect("check needs an algebroid fixture")
    }

    pub fn ps(&self) -> Arc<PoissonStructure> {
        self.case.poisson.clone().expect("check needs a Poisson fixture")
    }

    pub fn record(&mut self, name: &str, t: &GradedTensor) {
        self.inputs.push((name.to_string(), t.pretty()));
    }

    pub fn record_poly(&mut self, name: &str, chart: &Chart, p: &Poly) {
        self.inputs.push((name.to_string(), chart.print(p)));
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.gen.below(n)
    }

    pub fn func(&mut self, name: &str, a: &Arc<Algebroid>) -> Poly {
        let p = self.gen.function(a);
        self.record_poly(name, a.chart(), &p);
        p
    }

    pub fn form(&mut self, name: &str, a: &Arc<Algebroid>, k: usize) -> GradedTensor {
        let t = self.gen.form(a, k);
        self.record(name, &t);
        t
    }

    pub fn mv(&mut self, name: &str, a: &Arc<Algebroid>, k: usize) -> GradedTensor {
        let t = self.gen.multivector(a, k);
        self.record(name, &t);
        t
    }

    pub fn section(&mut self, name: &str, a: &Arc<Algebroid>) -> GradedTensor {
        self.mv(name, a, 1)
    }

    pub fn sym(&mut self, name: &str, a: &Arc<Algebroid>, k: usize) -> GradedTensor {
        let t = self.gen.sym(a, k);
        self.record(name, &t);
        t
    }

    pub fn mixed(&mut self, name: &str, a: &Arc<Algebroid>, k: usize) -> GradedTensor {
        let t = self.gen.mixed(a, k);
        self.record(name, &t);
        t
    }
}

struct Suite {
    name: &'static str,
    checks: Vec<Check>,
}

fn registry() -> Vec<Suite> {
    let mut out = Vec::new();
    let mut add = |name: &'static str, checks: Vec<Check>| out.push(Suite { name, checks });
    add("theorem-1", basic::theorem_1());
    add("theorem-2", basic::theorem_2());
    add("theorem-3", basic::theorem_3());
    add("theorem-4", basic::theorem_4());
    add("eq-1-12", basic::eq_1_12());
    add("theorem-5", poisson::theorem_5());
    add("eq-2-6", poisson::eq_2_6());
    add("theorem-6", poisson::theorem_6());
    add("theorem-7", poisson::theorem_7());
    add("theorem-8", lifted::theorem_8());
    add("theorem-9", lifted::theorem_9());
    add("theorem-10", lifted::theorem_10());
    add("theorem-11", lifted::theorem_11());
    add("theorem-12", lifted::theorem_12());
    add("theorem-13", lifted::theorem_13());
    add("theorem-14", lifted::theorem_14());
    add("theorem-15", cotangent::theorem_15());
    add("theorem-16", cotangent::theorem_16());
    add("theorem-17", cotangent::theorem_17());
    add("theorem-18", cotangent::theorem_18());
    add("theorem-19", canonical::theorem_19());
    add("theorem-20", canonical::theorem_20());
    add("theorem-21", canonical::theorem_21());
    add("theorem-22", canonical::theorem_22());
    add("theorem-23", canonical::theorem_23());
    add("theorem-24", canonical::theorem_24());
    add("eq-7-12", canonical::eq_7_12());
    add("eq-7-13", canonical::eq_7_13());
    out
}

/// Suite ids in execution order.
pub fn suite_names() -> Vec<&'static str> {
    registry().iter().map(|s| s.name).collect()
}

/// Check ids of one suite.
pub fn check_ids(suite: &str) -> Result<Vec<String>> {
    let reg = registry();
    let s = reg.iter().find(|s| s.name == suite).ok_or_else(|| Error::UnknownName(suite.to_string()))?;
    Ok(s.checks.iter().map(|c| format!("{}/{}", s.name, c.id)).collect())
}

fn cases(scope: Scope, fixtures: &Fixtures) -> Vec<Case> {
    let alg = |(n, a): &(String, Arc<Algebroid>)| Case { name: n.clone(), algebroid: Some(a.clone()), poisson: None };
    let pois = |(n, p): &(String, Arc<PoissonStructure>)| Case {
        name: n.clone(),
        algebroid: Some(p.owner().clone()),
        poisson: Some(p.clone()),
    };
    match scope {
        Scope::Algebroids => fixtures.algebroids.iter().map(alg).collect(),
        Scope::Charted => fixtures.algebroids.iter().filter(|(_, a)| a.nvars() > 0).map(alg).collect(),
        Scope::Canonical => fixtures.algebroids.iter().filter(|(_, a)| a.is_canonical()).map(alg).collect(),
        Scope::Poisson => fixtures.poisson.iter().map(pois).collect(),
        Scope::Symplectic => fixtures.poisson.iter().filter(|(_, p)| helpers::is_symplectic(p)).map(pois).collect(),
        Scope::Once => vec![Case { name: "-".into(), algebroid: None, poisson: None }],
    }
}

struct Outcome {
    case: usize,
    trial: usize,
    result: std::result::Result<Option<String>, String>,
    inputs: Vec<(String, String)>,
    notes: Vec<String>,
}

fn selected(cfg: &SuiteConfig, suite: &str, id: &str) -> bool {
    match &cfg.check {
        None => true,
        Some(f) => {
            let full = format!("{suite}/{id}");
            full == *f || id == f
        }
    }
}

/// Runs one suite, or every suite for the name `all`. Reports are sorted by id.
pub fn run(name: &str, fixtures: &Fixtures, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let reg = registry();
    let suites: Vec<&Suite> = if name == "all" {
        reg.iter().collect()
    } else {
        vec![reg.iter().find(|s| s.name == name).ok_or_else(|| Error::UnknownName(name.to_string()))?]
    };
    let mut reports = Vec::new();
    for suite in suites {
        for chk in &suite.checks {
            if !selected(cfg, suite.name, chk.id) {
                continue;
            }
            reports.push(run_check(suite.name, chk, fixtures, cfg));
        }
    }
    if reports.is_empty() {
        if let Some(c) = &cfg.check {
            return Err(Error::UnknownName(c.clone()));
        }
    }
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(reports)
}

fn run_check(suite: &str, chk: &Check, fixtures: &Fixtures, cfg: &SuiteConfig) -> CheckReport {
    let id = format!("{suite}/{}", chk.id);
    let cases: Vec<Case> = cases(chk.scope, fixtures)
        .into_iter()
        .filter(|c| cfg.fixture.as_ref().map_or(true, |f| *f == c.name))
        .collect();
    let count = match chk.trials {
        Trials::Config => cfg.trials,
        Trials::Fixed(n) => n,
        Trials::AtLeast(n) => n.max(cfg.trials),
    };
    let work: Vec<(usize, usize)> = (0..cases.len())
        .flat_map(|c| (0..count).map(move |t| (c, t)))
        .filter(|&(_, t)| cfg.trial.map_or(true, |only| only == t))
        .collect();
    let start = Instant::now();
    let outcomes: Vec<Outcome> = work
        .par_iter()
        .map(|&(c, t)| {
            let case = &cases[c];
            let gen = Gen::for_trial(cfg.seed, &[&id, &case.name], t as u64).with_max_degree(cfg.max_degree);
            let mut trial = Trial { case, gen, index: t, order: cfg.order, inputs: Vec::new(), notes: Vec::new() };
            let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| (chk.body)(&mut trial)));
            let result = match result {
                Ok(Ok(r)) => Ok(r),
                Ok(Err(e)) => Err(e.to_string()),
                Err(p) => Err(panic_message(p)),
            };
            Outcome {
                case: c,
                trial: t,
                result,
                inputs: trial.inputs,
                notes: trial.notes,
            }
        })
        .collect();
    let millis = start.elapsed().as_millis() as u64;
    let mut notes = BTreeSet::new();
    let mut failures = 0;
    let mut witness: Option<(usize, Witness)> = None;
    let mut error = None;
    for o in &outcomes {
        notes.extend(o.notes.iter().cloned());
        match &o.result {
            Ok(None) => {}
            Ok(Some(residual)) => {
                failures += 1;
                let size: usize = o.inputs.iter().map(|(_, v)| v.len()).sum::<usize>() + residual.len();
                if witness.as_ref().map_or(true, |(s, _)| size < *s) {
                    let fixture = cases[o.case].name.clone();
                    let mut replay: Vec<String> = vec![
                        "suite".into(),
                        "--name".into(),
                        suite.to_string(),
                        "--seed".into(),
                        cfg.seed.to_string(),
                        "--max-degree".into(),
                        cfg.max_degree.to_string(),
                        "--check".into(),
                        id.clone(),
                        "--fixture".into(),
                        fixture.clone(),
                        "--trials".into(),
                        cfg.trials.to_string(),
                        "--trial".into(),
                        o.trial.to_string(),
                    ];
                    if cfg.order != ACTIVE_ORDER {
                        replay.extend(["--contraction-order".into(), cfg.order.name().into()]);
                    }
                    witness = Some((
                        size,
                        Witness { fixture, trial: o.trial, inputs: o.inputs.clone(), residual: residual.clone(), replay },
                    ));
                }
            }
            Err(e) => {
                if error.is_none() {
                    error = Some(format!("{} trial {}: {e}", cases[o.case].name, o.trial));
                }
            }
        }
    }
    let status = if error.is_some() {
        Status::Error
    } else if failures > 0 {
        Status::Fail
    } else {
        Status::Pass
    };
    CheckReport {
        suite: suite.to_string(),
        id,
        status,
        trials: outcomes.len(),
        failures,
        witness: witness.map(|(_, w)| w),
        error,
        notes: notes.into_iter().collect(),
        millis,
    }
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = p.downcast_ref::<&str>() {
        format!("panic: {s}")
    } else if let Some(s) = p.downcast_ref::<String>() {
        format!("panic: {s}")
    } else {
        "panic".to_string()
    }
}
