//! Model files: JSON schema, loading with validation, canonical dumping.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use algebroid_core::algebroid::{Origin, StructureTable};
use algebroid_core::poisson::build_poisson;
use algebroid_core::{Algebroid, Chart, Error as CoreError, GradedTensor, Kind, PoissonStructure, Poly};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default)]
    pub charts: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub algebroids: BTreeMap<String, AlgebroidSpec>,
    #[serde(default)]
    pub poisson: BTreeMap<String, PoissonSpec>,
    #[serde(default)]
    pub tensors: BTreeMap<String, TensorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<SuiteSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlgebroidSpec {
    pub chart: String,
    pub fibers: Vec<String>,
    pub anchor: Vec<Vec<String>>,
    #[serde(default)]
    pub c: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PoissonSpec {
    pub chart: String,
    pub bivector: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TensorSpec {
    pub owner: String,
    pub kind: String,
    pub degree: usize,
    #[serde(default)]
    pub terms: BTreeMap<String, String>,
}

/// Suite defaults stored with a model; command-line flags take precedence.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u32>,
}

/// A resolved model. Every algebroid and Poisson structure has been validated.
#[derive(Clone, Default)]
pub struct Model {
    pub charts: BTreeMap<String, Chart>,
    pub algebroids: BTreeMap<String, Arc<Algebroid>>,
    pub poisson: BTreeMap<String, Arc<PoissonStructure>>,
    pub tensors: BTreeMap<String, GradedTensor>,
    pub owners: BTreeMap<String, String>,
    pub suite: Option<SuiteSpec>,
}

/// Something in a model that failed validation, with the engine's witness.
#[derive(Clone, Debug)]
pub struct Invalid {
    pub item: String,
    pub error: CoreError,
}

fn parse_err(location: impl Into<String>, msg: impl std::fmt::Display) -> CliError {
    CliError::Parse { location: location.into(), msg: msg.to_string() }
}

fn is_witness(e: &CoreError) -> bool {
    matches!(e, CoreError::JacobiViolation { .. } | CoreError::AnchorNotMorphism { .. } | CoreError::NotPoisson { .. })
}

pub fn kind_from_name(s: &str) -> Option<Kind> {
    match s {
        "mv" => Some(Kind::MultiVector),
        "form" => Some(Kind::Form),
        "mixed" => Some(Kind::Mixed),
        "sym" => Some(Kind::Sym),
        _ => None,
    }
}

pub fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::MultiVector => "mv",
        Kind::Form => "form",
        Kind::Mixed => "mixed",
        Kind::Sym => "sym",
    }
}

/// Parses "1,2" into 0-based indices; the empty string is the empty key.
fn parse_indices(s: &str, bound: usize, loc: &str) -> Result<Vec<usize>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|part| {
            let i: usize = part.trim().parse().map_err(|_| parse_err(loc, format!("bad index `{part}`")))?;
            if i == 0 || i > bound {
                return Err(parse_err(loc, format!("index {i} out of range 1..={bound}")));
            }
            Ok(i - 1)
        })
        .collect()
}

fn parse_poly(chart: &Chart, src: &str, loc: &str) -> Result<Poly, CliError> {
    chart.parse(src).map_err(|e| parse_err(loc, e))
}

pub fn read_model_file(path: &Path) -> Result<ModelFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_model_file(&text).map_err(|e| match e {
        CliError::Parse { location, msg } => CliError::Parse { location: format!("{}: {location}", path.display()), msg },
        other => other,
    })
}

pub fn parse_model_file(text: &str) -> Result<ModelFile, CliError> {
    serde_json::from_str(text)
        .map_err(|e| parse_err(format!("line {} column {}", e.line(), e.column()), e))
}

/// Merges several model files; a name defined twice is an input error.
pub fn merge(files: Vec<ModelFile>) -> Result<ModelFile, CliError> {
    fn put<V: PartialEq>(into: &mut BTreeMap<String, V>, from: BTreeMap<String, V>, what: &str) -> Result<(), CliError> {
        for (k, v) in from {
            match into.get(&k) {
                Some(old) if *old != v => return Err(parse_err(format!("{what} `{k}`"), "defined twice with different contents")),
                _ => {
                    into.insert(k, v);
                }
            }
        }
        Ok(())
    }
    let mut out = ModelFile::default();
    for f in files {
        put(&mut out.charts, f.charts, "chart")?;
        put(&mut out.algebroids, f.algebroids, "algebroid")?;
        put(&mut out.poisson, f.poisson, "poisson structure")?;
        put(&mut out.tensors, f.tensors, "tensor")?;
        if f.suite.is_some() {
            out.suite = f.suite;
        }
    }
    Ok(out)
}

/// Resolves a model. Validation failures are collected, not raised; tensors
/// over an invalid owner are reported against that owner and skipped.
pub fn resolve(file: &ModelFile) -> Result<(Model, Vec<Invalid>), CliError> {
    let mut model = Model { suite: file.suite.clone(), ..Model::default() };
    let mut invalid = Vec::new();
    for (name, coords) in &file.charts {
        let chart = Chart::new(coords.iter().cloned()).map_err(|e| parse_err(format!("charts.{name}"), e))?;
        model.charts.insert(name.clone(), chart);
    }
    let chart_of = |model: &Model, name: &str, loc: &str| -> Result<Chart, CliError> {
        model.charts.get(name).cloned().ok_or_else(|| parse_err(loc, format!("unknown chart `{name}`")))
    };
    for (name, spec) in &file.algebroids {
        let loc = format!("algebroids.{name}");
        let chart = chart_of(&model, &spec.chart, &loc)?;
        let m = spec.fibers.len();
        let mut anchor = Vec::with_capacity(spec.anchor.len());
        for (i, row) in spec.anchor.iter().enumerate() {
            let row: Vec<Poly> = row
                .iter()
                .enumerate()
                .map(|(a, s)| parse_poly(&chart, s, &format!("{loc}.anchor[{i}][{a}]")))
                .collect::<Result<_, _>>()?;
            anchor.push(row);
        }
        let mut table = StructureTable::new();
        for (pair, row) in &spec.c {
            let ploc = format!("{loc}.c.\"{pair}\"");
            let ij = parse_indices(pair, m, &ploc)?;
            if ij.len() != 2 {
                return Err(parse_err(ploc, "structure keys are pairs `i,j`"));
            }
            let mut out = BTreeMap::new();
            for (k, src) in row {
                let kloc = format!("{ploc}.\"{k}\"");
                let kk = parse_indices(k, m, &kloc)?;
                if kk.len() != 1 {
                    return Err(parse_err(kloc, "structure entries are keyed by a single index"));
                }
                out.insert(kk[0], parse_poly(&chart, src, &kloc)?);
            }
            table.insert((ij[0], ij[1]), out);
        }
        match Algebroid::build(chart, spec.fibers.clone(), anchor, &table) {
            Ok(a) => {
                model.algebroids.insert(name.clone(), a.recognise_canonical());
            }
            Err(e) if is_witness(&e) => invalid.push(Invalid { item: format!("algebroid/{name}"), error: e }),
            Err(e) => return Err(parse_err(loc, e)),
        }
    }
    for (name, spec) in &file.poisson {
        let loc = format!("poisson.{name}");
        let chart = chart_of(&model, &spec.chart, &loc)?;
        let owner = Algebroid::canonical(&chart).map_err(|e| parse_err(&loc, e))?;
        let mut p = GradedTensor::zero(&owner, Kind::MultiVector, 2);
        for (key, src) in &spec.bivector {
            let kloc = format!("{loc}.bivector.\"{key}\"");
            let ij = parse_indices(key, chart.len(), &kloc)?;
            if ij.len() != 2 {
                return Err(parse_err(kloc, "bivector keys are pairs `i,j`"));
            }
            p.add_raw_term(&ij, &parse_poly(&chart, src, &kloc)?);
        }
        match build_poisson(&chart, &p) {
            Ok(ps) => {
                model.poisson.insert(name.clone(), Arc::new(ps));
            }
            Err(e) if is_witness(&e) => invalid.push(Invalid { item: format!("poisson/{name}"), error: e }),
            Err(e) => return Err(parse_err(loc, e)),
        }
    }
    let bad_owners: Vec<String> = invalid.iter().map(|i| i.item.split_once('/').unwrap().1.to_string()).collect();
    for (name, spec) in &file.tensors {
        let loc = format!("tensors.{name}");
        if bad_owners.contains(&spec.owner) {
            continue;
        }
        let owner = model.owner(&spec.owner).map_err(|_| parse_err(&loc, format!("unknown owner `{}`", spec.owner)))?;
        let t = build_tensor(&owner, spec, &loc)?;
        model.tensors.insert(name.clone(), t);
        model.owners.insert(name.clone(), spec.owner.clone());
    }
    Ok((model, invalid))
}

fn build_tensor(owner: &Arc<Algebroid>, spec: &TensorSpec, loc: &str) -> Result<GradedTensor, CliError> {
    let kind = kind_from_name(&spec.kind)
        .ok_or_else(|| parse_err(format!("{loc}.kind"), format!("unknown kind `{}`", spec.kind)))?;
    let m = owner.rank();
    let mut t = GradedTensor::zero(owner, kind, spec.degree);
    let chart = owner.chart();
    for (key, src) in &spec.terms {
        let kloc = format!("{loc}.terms.\"{key}\"");
        let raw = if kind == Kind::Mixed {
            let (form, j) = key
                .split_once('|')
                .ok_or_else(|| parse_err(&kloc, "mixed keys end with `|j`"))?;
            let mut raw = parse_indices(form, m, &kloc)?;
            let j = parse_indices(j, m, &kloc)?;
            if j.len() != 1 {
                return Err(parse_err(kloc, "mixed keys end with a single vector index"));
            }
            raw.extend(j);
            raw
        } else {
            parse_indices(key, m, &kloc)?
        };
        let expected = spec.degree + usize::from(kind == Kind::Mixed);
        if raw.len() != expected {
            return Err(parse_err(kloc, format!("key has {} indices, degree needs {expected}", raw.len())));
        }
        let p = parse_poly(chart, src, &kloc)?;
        if kind == Kind::Mixed && spec.degree == 0 {
            t.accumulate(&GradedTensor::from_terms(owner, kind, 0, [(raw, p)]));
        } else {
            t.add_raw_term(&raw, &p);
        }
    }
    Ok(t)
}

/// Strict loading: any validation failure is an error.
pub fn load_model(paths: &[impl AsRef<Path>]) -> Result<Model, CliError> {
    let files = paths.iter().map(|p| read_model_file(p.as_ref())).collect::<Result<Vec<_>, _>>()?;
    let (model, invalid) = resolve(&merge(files)?)?;
    if let Some(bad) = invalid.into_iter().next() {
        return Err(CliError::Validation { item: bad.item, error: bad.error });
    }
    Ok(model)
}

impl Model {
    /// Owner algebroid by name: an algebroid, a Poisson structure (its
    /// canonical owner) or a chart (its canonical algebroid).
    pub fn owner(&self, name: &str) -> Result<Arc<Algebroid>, CliError> {
        if let Some(a) = self.algebroids.get(name) {
            return Ok(a.clone());
        }
        if let Some(p) = self.poisson.get(name) {
            return Ok(p.owner().clone());
        }
        if let Some(c) = self.charts.get(name) {
            return Algebroid::canonical(c).map_err(CliError::Core);
        }
        Err(CliError::UnknownName(name.to_string()))
    }

    /// Poisson structure whose owner is `a`, if the model has one.
    pub fn poisson_over(&self, a: &Arc<Algebroid>) -> Option<Arc<PoissonStructure>> {
        self.poisson.values().find(|p| **p.owner() == **a).cloned()
    }

    /// A printable name for an owner algebroid, derived from its origin when
    /// it is not part of the model.
    pub fn owner_label(&self, a: &Arc<Algebroid>) -> String {
        if let Some((n, _)) = self.algebroids.iter().find(|(_, b)| Arc::ptr_eq(a, b)) {
            return n.clone();
        }
        if let Some((n, _)) = self.poisson.iter().find(|(_, p)| Arc::ptr_eq(a, p.owner())) {
            return n.clone();
        }
        if let Some((n, _)) = self.algebroids.iter().find(|(_, b)| ***b == **a) {
            return n.clone();
        }
        match a.origin() {
            Origin::TangentLift(src) => format!("T({})", self.owner_label(src)),
            Origin::CotangentLift(src) => format!("T*({})", self.owner_label(src)),
            _ => {
                if let Some((n, _)) = self.charts.iter().find(|(_, c)| *c == a.chart()) {
                    if a.is_canonical() {
                        return n.clone();
                    }
                }
                format!("[{}]", a.chart().coords().join(","))
            }
        }
    }

    /// Canonical serialization of the model as loaded.
    pub fn to_file(&self) -> ModelFile {
        let mut out = ModelFile { suite: self.suite.clone(), ..ModelFile::default() };
        for (n, c) in &self.charts {
            out.charts.insert(n.clone(), c.coords().to_vec());
        }
        for (n, a) in &self.algebroids {
            let chart = self
                .charts
                .iter()
                .find(|(_, c)| *c == a.chart())
                .map(|(k, _)| k.clone())
                .unwrap_or_default();
            out.algebroids.insert(n.clone(), algebroid_spec(a, chart));
        }
        for (n, p) in &self.poisson {
            let chart = self.charts.iter().find(|(_, c)| *c == p.chart()).map(|(k, _)| k.clone()).unwrap_or_default();
            out.poisson.insert(n.clone(), poisson_spec(p, chart));
        }
        for (n, t) in &self.tensors {
            out.tensors.insert(n.clone(), tensor_spec(t, self.owners[n].clone()));
        }
        out
    }
}

pub fn algebroid_spec(a: &Algebroid, chart: String) -> AlgebroidSpec {
    let c = a.chart();
    let anchor = (0..a.rank()).map(|i| a.anchor_row(i).iter().map(|p| c.print(p)).collect()).collect();
    let mut table = BTreeMap::new();
    for ((i, j), row) in a.structure_table() {
        let row: BTreeMap<String, String> = row
            .iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, p)| ((k + 1).to_string(), c.print(p)))
            .collect();
        if !row.is_empty() {
            table.insert(format!("{},{}", i + 1, j + 1), row);
        }
    }
    AlgebroidSpec { chart, fibers: a.fibers().to_vec(), anchor, c: table }
}

pub fn poisson_spec(p: &PoissonStructure, chart: String) -> PoissonSpec {
    PoissonSpec { chart, bivector: p.bivector().to_key_map() }
}

pub fn tensor_spec(t: &GradedTensor, owner: String) -> TensorSpec {
    TensorSpec { owner, kind: kind_name(t.kind()).into(), degree: t.degree(), terms: t.to_key_map() }
}

/// Pretty JSON with a trailing newline; the canonical on-disk form.
pub fn dump(file: &ModelFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("model serializes");
    s.push('\n');
    s
}
