use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use algebroid_core::calculus::{d_tau, fn_bracket, lie_derivative, nr_bracket, schouten, sym_schouten};
use algebroid_core::lifts::{
    canonical_transport, complete_lift, cot_complete_vec, g_map, h_map, j_map, jstar, vertical_lift, vertical_pi,
    vertical_tau, LiftedSection, Transport,
};
use algebroid_core::poisson::{cotangent_algebroid, extended_bracket, koszul_schouten, tangent_poisson};
use algebroid_core::suites::{self, CheckReport, Fixtures, SuiteConfig};
use algebroid_core::tensor::{contract, contract_mixed, ContractionOrder, ACTIVE_ORDER};
use algebroid_core::{Algebroid, Error as CoreError, GradedTensor, Kind, PoissonStructure, Rational};
use serde_json::{json, Value};

use crate::args::{BracketKind, Cli, Command, LiftArgs, LiftKind, SuiteArgs, Via};
use crate::model::{self, algebroid_spec, poisson_spec, resolve, tensor_spec, Model, ModelFile};
use crate::report::{Item, Report, Status};
use crate::{CliError, Outcome};

type Res<T> = Result<T, CliError>;

pub fn execute(cli: &Cli, echo: Vec<String>) -> Outcome {
    let start = Instant::now();
    if let Command::Dump = cli.command {
        return match model::load_model(&cli.models) {
            Ok(m) => Outcome { stdout: model::dump(&m.to_file()), stderr: String::new(), code: 0 },
            Err(e) => finish(Report::input_error(echo, e.to_string())),
        };
    }
    let items = match dispatch(cli) {
        Ok(items) => items,
        Err(e) => return finish(Report::input_error(echo, e.to_string())),
    };
    finish(Report::new(echo, items, start.elapsed().as_millis() as u64))
}

fn finish(report: Report) -> Outcome {
    Outcome { stdout: report.to_json(), stderr: report.summary(), code: report.exit_code() }
}

fn dispatch(cli: &Cli) -> Res<Vec<Item>> {
    if let Command::Validate = cli.command {
        return validate(&cli.models);
    }
    let model = model::load_model(&cli.models)?;
    let m = &model;
    match &cli.command {
        Command::Validate | Command::Dump => unreachable!(),
        Command::Bracket { kind, a, b, poisson } => bracket(m, *kind, a, b, poisson.as_deref()),
        Command::D { form, algebroid } => {
            let t = tensor(m, form, algebroid.as_deref())?;
            Ok(vec![Item::pass("d", tensor_json(m, &d_tau(&t)?))])
        }
        Command::Lie { x, form, algebroid } => {
            let (x, mu) = (tensor(m, x, algebroid.as_deref())?, tensor(m, form, algebroid.as_deref())?);
            Ok(vec![Item::pass("lie", tensor_json(m, &lie_derivative(&x, &mu)?))])
        }
        Command::Contract { x, form, algebroid } => {
            let (x, mu) = (tensor(m, x, algebroid.as_deref())?, tensor(m, form, algebroid.as_deref())?);
            let r = if x.kind() == Kind::Mixed { contract_mixed(&x, &mu)? } else { contract(&x, &mu)? };
            Ok(vec![Item::pass("contract", tensor_json(m, &r))])
        }
        Command::Lift(args) => lift(m, args),
        Command::Suite(args) => suite(m, &cli.models, args),
        Command::Eval { at, a, poly, algebroid } => eval(m, at, a.as_deref(), poly.as_deref(), algebroid.as_deref()),
    }
}

fn validate(paths: &[PathBuf]) -> Res<Vec<Item>> {
    let files = paths.iter().map(|p| model::read_model_file(p)).collect::<Res<Vec<_>>>()?;
    let (m, invalid) = resolve(&model::merge(files)?)?;
    let mut items = Vec::new();
    for (n, a) in &m.algebroids {
        let r = json!({ "pretty": algebroid_summary(a), "rank": a.rank(), "chart": a.chart().coords() });
        items.push(Item::pass(format!("algebroid/{n}"), r));
    }
    for (n, p) in &m.poisson {
        let r = json!({ "pretty": p.bivector().pretty(), "constant": p.is_constant() });
        items.push(Item::pass(format!("poisson/{n}"), r));
    }
    for (n, t) in &m.tensors {
        items.push(Item::pass(format!("tensor/{n}"), tensor_json(&m, t)));
    }
    for bad in invalid {
        let mut item = Item::new(bad.item, Status::Fail);
        item.error = Some(bad.error.to_string());
        item.witness = Some(error_witness(&bad.error));
        items.push(item);
    }
    items.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(items)
}

fn error_witness(e: &CoreError) -> Value {
    match e {
        CoreError::JacobiViolation { triple, residual } => json!({ "triple": triple, "residual": residual }),
        CoreError::AnchorNotMorphism { pair, residual } => json!({ "pair": pair, "residual": residual }),
        CoreError::NotPoisson { residual } => json!({ "residual": residual }),
        other => json!({ "message": other.to_string() }),
    }
}

fn algebroid_summary(a: &Algebroid) -> String {
    format!("rank {} over ({})", a.rank(), a.chart().coords().join(", "))
}

/// A named model tensor, or a basis element `e<fiber>` / `estar<fiber>` of `owner`.
fn tensor(m: &Model, name: &str, owner: Option<&str>) -> Res<GradedTensor> {
    let hint = owner.map(|o| m.owner(o)).transpose()?;
    if let Some(t) = m.tensors.get(name) {
        if let Some(h) = &hint {
            if **t.owner() != **h {
                return Err(CoreError::ChartMismatch(format!("`{name}` is not a tensor over `{}`", owner.unwrap())).into());
            }
        }
        return Ok(t.clone());
    }
    if let Some(a) = &hint {
        let index = |label: &str| a.fibers().iter().position(|f| f == label);
        if let Some(i) = name.strip_prefix("estar").and_then(index) {
            return Ok(a.dual_basis(i));
        }
        if let Some(i) = name.strip_prefix('e').and_then(index) {
            return Ok(a.basis(i));
        }
    }
    Err(CliError::UnknownName(name.to_string()))
}

pub fn tensor_json(m: &Model, t: &GradedTensor) -> Value {
    let spec = tensor_spec(t, m.owner_label(t.owner()));
    json!({
        "pretty": t.pretty(),
        "owner": spec.owner,
        "kind": spec.kind,
        "degree": spec.degree,
        "terms": spec.terms,
    })
}

fn lifted_json(m: &Model, l: &LiftedSection) -> Value {
    let mut v = tensor_json(m, l.tensor());
    v["provenance"] = json!(l.provenance().name());
    v
}

fn poisson_for(m: &Model, name: Option<&str>, owner: &Arc<Algebroid>) -> Res<Arc<PoissonStructure>> {
    match name {
        Some(n) => m.poisson.get(n).cloned().ok_or_else(|| CliError::UnknownName(n.to_string())),
        None => m.poisson_over(owner).ok_or_else(|| {
            CliError::Usage(format!("no Poisson structure over `{}`; pass --poisson", m.owner_label(owner)))
        }),
    }
}

fn bracket(m: &Model, kind: BracketKind, a: &str, b: &str, poisson: Option<&str>) -> Res<Vec<Item>> {
    let (x, y) = (tensor(m, a, None)?, tensor(m, b, None)?);
    let (id, r) = match kind {
        BracketKind::Schouten => ("schouten", schouten(&x, &y)?),
        BracketKind::Sym => ("sym", sym_schouten(&x, &y)?),
        BracketKind::Nr => ("nr", nr_bracket(&x, &y)?),
        BracketKind::Fn => ("fn", fn_bracket(&x, &y)?),
        BracketKind::Koszul | BracketKind::Extended => {
            let ps = poisson_for(m, poisson, x.owner())?;
            let (x, y) = (ps.adopt(&x)?, ps.adopt(&y)?);
            if kind == BracketKind::Koszul {
                ("koszul", koszul_schouten(&ps, &x, &y)?)
            } else {
                ("extended", extended_bracket(&ps, &x, &y)?)
            }
        }
    };
    Ok(vec![Item::pass(format!("bracket/{id}"), tensor_json(m, &r))])
}

fn lift(m: &Model, args: &LiftArgs) -> Res<Vec<Item>> {
    let id = format!("lift/{}", kind_id(args.kind));
    let need = |what: &str, v: &Option<String>| -> Res<String> {
        v.clone().ok_or_else(|| CliError::Usage(format!("lift --kind {} needs --{what}", kind_id(args.kind))))
    };
    let input = || -> Res<GradedTensor> { tensor(m, &need("a", &args.a)?, args.algebroid.as_deref()) };
    let named = |default: String| args.name.clone().unwrap_or(default);
    let section = |l: LiftedSection| -> Res<Vec<Item>> { Ok(vec![Item::pass(&id, lifted_json(m, &l))]) };
    match args.kind {
        LiftKind::V => section(vertical_lift(&input()?)?),
        LiftKind::T => section(complete_lift(&input()?)?),
        LiftKind::Vpi => section(vertical_pi(&input()?)?),
        LiftKind::Vtau => section(vertical_tau(&input()?)?),
        LiftKind::G => section(cot_complete_vec(&input()?)?),
        LiftKind::J => section(j_map(&input()?)?),
        LiftKind::Gmix => section(g_map(&input()?)?),
        LiftKind::Jstar => section(jstar(&input()?)?),
        LiftKind::Hmap => section(h_map(&input()?)?),
        LiftKind::Kappa | LiftKind::Alpha => {
            let t = input()?;
            let l = match args.via {
                Via::V => vertical_lift(&t)?,
                Via::T => complete_lift(&t)?,
            };
            let dir = if args.kind == LiftKind::Kappa { Transport::Kappa } else { Transport::Alpha };
            section(canonical_transport(dir, &l)?)
        }
        LiftKind::TangentAlgebroid => {
            let src = need("algebroid", &args.algebroid)?;
            let a = m.owner(&src)?;
            Ok(vec![Item::pass(&id, algebroid_json(&*a.tangent_lift()?, named(format!("T_{src}"))))])
        }
        LiftKind::CotangentAlgebroid => {
            if let Some(p) = &args.poisson {
                let ps = m.poisson.get(p).ok_or_else(|| CliError::UnknownName(p.clone()))?;
                let c = cotangent_algebroid(ps)?;
                return Ok(vec![Item::pass(&id, algebroid_json(&*c, named(format!("Tstar_{p}"))))]);
            }
            let src = need("algebroid", &args.algebroid)?;
            let a = m.owner(&src)?;
            Ok(vec![Item::pass(&id, algebroid_json(&*a.cotangent_lift()?, named(format!("Tstar_{src}"))))])
        }
        LiftKind::LinearPoisson => {
            let src = need("algebroid", &args.algebroid)?;
            let a = m.owner(&src)?;
            Ok(vec![Item::pass(&id, poisson_json(&*a.linear_poisson()?, named(format!("P_{src}"))))])
        }
        LiftKind::TangentPoisson => {
            let p = need("poisson", &args.poisson)?;
            let ps = m.poisson.get(&p).ok_or_else(|| CliError::UnknownName(p.clone()))?;
            Ok(vec![Item::pass(&id, poisson_json(&tangent_poisson(ps)?, named(format!("T_{p}"))))])
        }
    }
}

fn kind_id(k: LiftKind) -> &'static str {
    match k {
        LiftKind::V => "V",
        LiftKind::T => "T",
        LiftKind::Vpi => "Vpi",
        LiftKind::Vtau => "Vtau",
        LiftKind::G => "G",
        LiftKind::J => "J",
        LiftKind::Gmix => "Gmix",
        LiftKind::Kappa => "kappa",
        LiftKind::Alpha => "alpha",
        LiftKind::Jstar => "jstar",
        LiftKind::Hmap => "hmap",
        LiftKind::TangentAlgebroid => "tangent-algebroid",
        LiftKind::CotangentAlgebroid => "cotangent-algebroid",
        LiftKind::LinearPoisson => "linear-poisson",
        LiftKind::TangentPoisson => "tangent-poisson",
    }
}

/// A loadable model fragment holding one constructed algebroid.
fn algebroid_json(a: &Algebroid, name: String) -> Value {
    let mut f = ModelFile::default();
    f.charts.insert(name.clone(), a.chart().coords().to_vec());
    f.algebroids.insert(name.clone(), algebroid_spec(a, name));
    json!({ "pretty": algebroid_summary(a), "model": f })
}

fn poisson_json(p: &PoissonStructure, name: String) -> Value {
    let mut f = ModelFile::default();
    f.charts.insert(name.clone(), p.chart().coords().to_vec());
    f.poisson.insert(name.clone(), poisson_spec(p, name));
    json!({ "pretty": p.bivector().pretty(), "model": f })
}

fn parse_point(at: &str) -> Res<Vec<(String, Rational)>> {
    at.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|kv| {
            let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Usage(format!("expected coord=value, got `{kv}`")))?;
            let v: Rational = v.trim().parse().map_err(|_| CliError::Usage(format!("bad rational `{v}`")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn eval(m: &Model, at: &str, a: Option<&str>, poly: Option<&str>, owner: Option<&str>) -> Res<Vec<Item>> {
    let point = parse_point(at)?;
    let values = |chart: &algebroid_core::Chart| -> Res<Vec<Option<Rational>>> {
        let mut vals = vec![None; chart.len()];
        for (k, v) in &point {
            let i = chart.index_of(k).ok_or_else(|| CoreError::UnknownVariable(k.clone()))?;
            vals[i] = Some(v.clone());
        }
        Ok(vals)
    };
    if let Some(src) = poly {
        let o = m.owner(owner.expect("clap requires --algebroid with --poly"))?;
        let chart = o.chart();
        let p = chart.parse(src)?.substitute(&values(chart)?);
        return Ok(vec![Item::pass("eval", json!({ "pretty": chart.print(&p) }))]);
    }
    let name = a.ok_or_else(|| CliError::Usage("eval needs --a or --poly".into()))?;
    let t = tensor(m, name, owner)?;
    let vals = values(t.owner().chart())?;
    Ok(vec![Item::pass("eval", tensor_json(m, &t.map_coeffs(|p| p.substitute(&vals))))])
}

fn fixtures(m: &Model, has_model: bool) -> Fixtures {
    if !has_model {
        return Fixtures::standard();
    }
    Fixtures {
        algebroids: m.algebroids.iter().map(|(n, a)| (n.clone(), a.clone())).collect(),
        poisson: m.poisson.iter().map(|(n, p)| (n.clone(), p.clone())).collect(),
    }
}

fn suite(m: &Model, paths: &[PathBuf], args: &SuiteArgs) -> Res<Vec<Item>> {
    if args.list {
        let names: Vec<&str> = if args.name == "all" { suites::suite_names() } else { vec![args.name.as_str()] };
        return names
            .into_iter()
            .map(|n| Ok(Item::pass(n, json!({ "checks": suites::check_ids(n)? }))))
            .collect();
    }
    let defaults = m.suite.clone().unwrap_or_default();
    let base = SuiteConfig::default();
    let order = match &args.contraction_order {
        None => ACTIVE_ORDER,
        Some(s) => ContractionOrder::from_name(s)
            .ok_or_else(|| CliError::Usage(format!("unknown contraction order `{s}`; use default or reversed")))?,
    };
    let cfg = SuiteConfig {
        seed: args.seed.or(defaults.seed).unwrap_or(base.seed),
        trials: args.trials.or(defaults.trials).unwrap_or(base.trials),
        max_degree: args.max_degree.or(defaults.max_degree).unwrap_or(base.max_degree),
        check: args.check.clone(),
        fixture: args.fixture.clone(),
        trial: args.trial,
        order,
    };
    let fx = fixtures(m, !paths.is_empty());
    if let Some(f) = &cfg.fixture {
        let known = fx.algebroids.iter().map(|(n, _)| n).chain(fx.poisson.iter().map(|(n, _)| n)).any(|n| n == f);
        if !known {
            return Err(CliError::UnknownName(f.clone()));
        }
    }
    let reports = suites::run(&args.name, &fx, &cfg)?;
    Ok(reports.iter().map(|r| suite_item(r, paths)).collect())
}

fn shell_quote(s: &str) -> String {
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "-_./=,:".contains(c)) {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\'', r"'\''"))
    }
}

fn suite_item(r: &CheckReport, paths: &[PathBuf]) -> Item {
    let status = match r.status {
        suites::Status::Pass => Status::Pass,
        suites::Status::Fail => Status::Fail,
        suites::Status::Error => Status::Error,
    };
    let mut item = Item::new(&r.id, status);
    item.trials = Some(r.trials);
    item.failures = Some(r.failures);
    item.error = r.error.clone();
    item.notes = r.notes.clone();
    item.millis = r.millis;
    if let Some(w) = &r.witness {
        let mut replay: Vec<String> = Vec::new();
        for p in paths {
            replay.push("--model".into());
            replay.push(p.display().to_string());
        }
        replay.extend(w.replay.iter().cloned());
        let command = std::iter::once("algebroid".to_string())
            .chain(replay.iter().map(|s| shell_quote(s)))
            .collect::<Vec<_>>()
            .join(" ");
        let inputs: BTreeMap<&str, &str> = w.inputs.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
        item.witness = Some(json!({
            "fixture": w.fixture,
            "trial": w.trial,
            "inputs": inputs,
            "residual": w.residual,
            "replay": replay,
            "replay_command": command,
        }));
    }
    item
}
