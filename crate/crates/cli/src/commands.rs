//! Command dispatch: each command reads its arguments, runs one operation and
//! returns a JSON fragment with a pass/fail status.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use diarep::classify::{classify_injective, classify_projective, decompose_injective, decompose_projective, phi_proj, psi_inj, Decomposition};
use diarep::diagram::DiagramSpec;
use diarep::fincat::{CatFunctor, Convention, FinCategory, Obj};
use diarep::functors::{
    coinduce, cok_i, cok_p, induce, ker_i, ker_p, lif, restrict_rep, sta_lower, sta_upper, AdjunctionKind, AdjunctionWitness, PrimeQuotient,
};
use diarep::generate::{self, GenRng};
use diarep::linalg::{Field, Matrix};
use diarep::modcat::ModuleSummary;
use diarep::rep::{hom_basis, ModSystem, Representation};
use diarep::report::ValidationReport;

use crate::workspace::{Command, Workspace};
use crate::{CliError, CliResult};

/// Global options shared by all commands.
#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub field: Field,
    pub max_dim: usize,
    pub convention: Convention,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub status: Status,
    pub result: Value,
}

impl Outcome {
    fn new(pass: bool, result: Value) -> Outcome {
        Outcome { status: if pass { Status::Pass } else { Status::Fail }, result }
    }
}

/// Largest object count accepted by `generate`.
pub const MAX_OBJECTS: usize = 8;

struct Args<'a> {
    cmd: &'a Command,
}

impl<'a> Args<'a> {
    fn missing(&self, arg: &str) -> CliError {
        CliError::MissingArgument { op: self.cmd.op.clone(), arg: arg.to_string() }
    }

    fn opt_str(&self, key: &str) -> CliResult<Option<&'a str>> {
        match self.cmd.args.get(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => Ok(Some(s)),
            Some(v) => Err(CliError::Input(format!("`{}`: argument `{key}` must be a string, got {v}", self.cmd.op))),
        }
    }

    fn str(&self, key: &str) -> CliResult<&'a str> {
        self.opt_str(key)?.ok_or_else(|| self.missing(key))
    }

    fn usize_or(&self, key: &str, default: usize) -> CliResult<usize> {
        match self.cmd.args.get(key) {
            None => Ok(default),
            Some(toml::Value::Integer(v)) if *v >= 0 => Ok(*v as usize),
            Some(v) => Err(CliError::Input(format!("`{}`: argument `{key}` must be a nonnegative integer, got {v}", self.cmd.op))),
        }
    }

    fn bool_or(&self, key: &str, default: bool) -> CliResult<bool> {
        match self.cmd.args.get(key) {
            None => Ok(default),
            Some(toml::Value::Boolean(b)) => Ok(*b),
            Some(v) => Err(CliError::Input(format!("`{}`: argument `{key}` must be a boolean, got {v}", self.cmd.op))),
        }
    }

    fn strings(&self, key: &str) -> CliResult<Option<Vec<String>>> {
        match self.cmd.args.get(key) {
            None => Ok(None),
            Some(toml::Value::Array(items)) => items
                .iter()
                .map(|v| match v {
                    toml::Value::String(s) => Ok(s.clone()),
                    v => Err(CliError::Input(format!("`{}`: `{key}` must list strings, got {v}", self.cmd.op))),
                })
                .collect::<CliResult<Vec<_>>>()
                .map(Some),
            Some(toml::Value::String(s)) => Ok(Some(vec![s.clone()])),
            Some(v) => Err(CliError::Input(format!("`{}`: `{key}` must list strings, got {v}", self.cmd.op))),
        }
    }

    fn choice(&self, key: &str, default: &'a str, allowed: &[&str]) -> CliResult<&'a str> {
        let v = self.opt_str(key)?.unwrap_or(default);
        if allowed.contains(&v) {
            Ok(v)
        } else {
            Err(CliError::Input(format!("`{}`: `{key}` must be one of {}, got `{v}`", self.cmd.op, allowed.join(", "))))
        }
    }
}

fn object(c: &FinCategory, name: &str) -> CliResult<Obj> {
    c.object(name).map_err(|_| CliError::UnresolvedReference { kind: "object", name: name.to_string() })
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn args_json(cmd: &Command) -> Value {
    to_json(&cmd.args)
}

/// Runs one command; `index` separates the random streams of commands.
pub fn run(ws: &mut Workspace, cmd: &Command, index: usize, opts: &Options) -> CliResult<Outcome> {
    let args = Args { cmd };
    let mut rng = generate::rng(opts.seed.wrapping_add(index as u64));
    let result = match cmd.op.as_str() {
        "validate" => validate(ws, &args),
        "hom" => hom(ws, &args),
        "induce" => induce_cmd(ws, &args),
        "restrict" => restrict_cmd(ws, &args),
        "lif" => lif_cmd(ws, &args),
        "cok" | "ker" => cok_ker(ws, &args, opts),
        "stalk" => stalk(ws, &args, opts),
        "stratify" => stratify(ws, &args),
        "adjoint-check" => adjoint_check(ws, &args, opts, &mut rng),
        "classify" => classify(ws, &args, opts),
        "decompose" => decompose(ws, &args, opts),
        "appendix-check" => appendix_check(ws, &args, opts, &mut rng),
        "generate" => generate_cmd(ws, &args, opts, &mut rng),
        op => Err(CliError::UnknownCommand(op.to_string())),
    };
    match result {
        Err(CliError::Math(e)) => Ok(Outcome::new(false, json!({ "error": e.to_string(), "args": args_json(cmd) }))),
        other => other,
    }
}

fn validate(ws: &Workspace, args: &Args) -> CliResult<Outcome> {
    let reports: Vec<ValidationReport> = match args.opt_str("target")? {
        Some(name) => ws.validate_named(name, args.opt_str("kind")?)?,
        None => ws.validate_all(),
    };
    let pass = reports.iter().all(|r| r.passed());
    Ok(Outcome::new(pass, json!({ "reports": reports })))
}

fn hom(ws: &Workspace, args: &Args) -> CliResult<Outcome> {
    let (m, n) = (ws.representation(args.str("source")?)?, ws.representation(args.str("target")?)?);
    let basis = hom_basis(m, n)?;
    let basis: Vec<&Vec<Matrix>> = basis.iter().map(|b| &b.components).collect();
    Ok(Outcome::new(true, json!({ "dimension": basis.len(), "basis": basis })))
}

/// Stores `rep` under the `as` argument, when given.
fn bind(ws: &mut Workspace, args: &Args, rep: &Representation) -> CliResult<()> {
    if let Some(name) = args.opt_str("as")? {
        if ws.representations.contains_key(name) {
            return Err(CliError::Input(format!("`{}`: representation `{name}` already exists", args.cmd.op)));
        }
        ws.representations.insert(name.to_string(), rep.clone());
    }
    Ok(())
}

/// The same representation over `target`, which must equal its diagram.
fn rehome(rep: &Representation, target: &Arc<DiagramSpec>, what: &str) -> CliResult<Representation> {
    if **rep.diagram() != **target {
        return Err(CliError::Input(format!("representation does not live over {what}")));
    }
    Ok(Representation::from_parts(target, rep.modules().to_vec(), rep.structural_maps().to_vec())?)
}

fn induce_cmd(ws: &mut Workspace, args: &Args) -> CliResult<Outcome> {
    let n = ws.representation(args.str("rep")?)?.clone();
    let d = ws.diagrams.get(args.str("diagram")?).cloned().ok_or_else(|| CliError::UnresolvedReference {
        kind: "diagram",
        name: args.str("diagram").unwrap_or_default().to_string(),
    })?;
    let side = args.choice("side", "left", &["left", "right"])?;
    let g = CatFunctor::by_names(n.diagram().index(), d.index())
        .map_err(|e| CliError::Input(format!("the category of the representation is not a subcategory by names: {e}")))?;
    if d.restrict(&g)? != **n.diagram() {
        return Err(CliError::Input("the representation's diagram is not the restriction of the target diagram".into()));
    }
    let rep = if side == "left" { induce(&d, &g, &n)?.rep } else { coinduce(&d, &g, &n)?.rep };
    bind(ws, args, &rep)?;
    Ok(Outcome::new(rep.is_valid(), json!({ "side": side, "representation": rep.summary() })))
}

fn restrict_cmd(ws: &mut Workspace, args: &Args) -> CliResult<Outcome> {
    let m = ws.representation(args.str("rep")?)?.clone();
    let c = m.diagram().index();
    let names = args.strings("objects")?.ok_or_else(|| args.missing("objects"))?;
    let keep = names.iter().map(|o| object(c, o)).collect::<CliResult<BTreeSet<_>>>()?;
    let keep: Vec<Obj> = keep.into_iter().collect();
    let (_, g) = c.full_subcategory(&keep);
    let rep = restrict_rep(&g, &m)?;
    bind(ws, args, &rep)?;
    Ok(Outcome::new(true, json!({ "representation": rep.summary() })))
}

/// The prime quotient named by `object` (its `P_i`) or by an `ideal` carrier.
fn prime_quotient(d: &Arc<DiagramSpec>, args: &Args) -> CliResult<PrimeQuotient> {
    let c = d.index();
    if let Some(o) = args.opt_str("object")? {
        return Ok(PrimeQuotient::at_object(d, object(c, o)?)?);
    }
    let carrier = args.strings("ideal")?.ok_or_else(|| args.missing("object or ideal"))?;
    let carrier = carrier
        .iter()
        .map(|m| c.morphism(m).map_err(|_| CliError::UnresolvedReference { kind: "morphism", name: m.clone() }))
        .collect::<CliResult<Vec<_>>>()?;
    let ideal = c.classify_ideal(&carrier)?;
    Ok(PrimeQuotient::new(d, &ideal)?)
}

fn quotient_objects(pq: &PrimeQuotient) -> Vec<String> {
    pq.quotient().objects().to_vec()
}

fn lif_cmd(ws: &mut Workspace, args: &Args) -> CliResult<Outcome> {
    let n = ws.representation(args.str("rep")?)?.clone();
    let dname = args.str("diagram")?;
    let d = ws.diagrams.get(dname).cloned().ok_or_else(|| CliError::UnresolvedReference { kind: "diagram", name: dname.to_string() })?;
    let pq = prime_quotient(&d, args)?;
    let n = rehome(&n, &pq.diagram, "the quotient diagram")?;
    let rep = lif(&d, &pq, &n)?;
    bind(ws, args, &rep)?;
    Ok(Outcome::new(rep.is_valid(), json!({ "quotient": quotient_objects(&pq), "representation": rep.summary() })))
}

fn cok_ker(ws: &mut Workspace, args: &Args, opts: &Options) -> CliResult<Outcome> {
    let m = ws.representation(args.str("rep")?)?.clone();
    let pq = prime_quotient(m.diagram(), args)?;
    let rep = if args.cmd.op == "cok" { cok_p(&pq, &m, opts.convention)?.rep } else { ker_p(&pq, &m, opts.convention)?.rep };
    let mut result = json!({ "quotient": quotient_objects(&pq), "representation": rep.summary() });
    if let Some(o) = args.opt_str("object")? {
        let i = object(m.diagram().index(), o)?;
        let stalk = if args.cmd.op == "cok" { cok_i(&m, i, opts.convention)? } else { ker_i(&m, i, opts.convention)? };
        result["stalk"] = to_json(&ModuleSummary::from(&stalk));
    }
    bind(ws, args, &rep)?;
    Ok(Outcome::new(rep.is_valid(), result))
}

fn stalk(ws: &mut Workspace, args: &Args, opts: &Options) -> CliResult<Outcome> {
    let m = ws.representation(args.str("rep")?)?.clone();
    let d = m.diagram().clone();
    let i = object(d.index(), args.str("object")?)?;
    let which = args.choice("which", "cok", &["cok", "ker", "upper", "lower"])?;
    let result = match which {
        "cok" => json!({ "which": which, "module": ModuleSummary::from(&cok_i(&m, i, opts.convention)?) }),
        "ker" => json!({ "which": which, "module": ModuleSummary::from(&ker_i(&m, i, opts.convention)?) }),
        _ => {
            let rep = if which == "upper" { sta_upper(&d, i, m.module(i))? } else { sta_lower(&d, i, m.module(i))? };
            bind(ws, args, &rep)?;
            json!({ "which": which, "representation": rep.summary() })
        }
    };
    Ok(Outcome::new(true, result))
}

fn stratify(ws: &Workspace, args: &Args) -> CliResult<Outcome> {
    let name = args.str("category")?;
    let c = ws.categories.get(name).ok_or_else(|| CliError::UnresolvedReference { kind: "category", name: name.to_string() })?;
    let rootedness = c.rootedness();
    let s = c.stratify()?;
    Ok(Outcome::new(true, json!({ "levels": s.levels, "exhausted": s.exhausted, "rootedness": rootedness })))
}

fn adjoint_check(ws: &Workspace, args: &Args, opts: &Options, rng: &mut GenRng) -> CliResult<Outcome> {
    let pair = args.opt_str("pair")?.unwrap_or("all");
    let kinds: Vec<AdjunctionKind> = if pair == "all" {
        AdjunctionKind::ALL.to_vec()
    } else {
        vec![pair.parse().map_err(|e| CliError::input("`adjoint-check`", e))?]
    };
    let samples = args.usize_or("samples", 5)?;
    let fixed = match args.opt_str("diagram")? {
        Some(name) => Some(ws.diagrams.get(name).cloned().ok_or_else(|| CliError::UnresolvedReference { kind: "diagram", name: name.to_string() })?),
        None => None,
    };
    let mut witnesses = Vec::new();
    for kind in kinds {
        let mut got = Vec::with_capacity(samples);
        for _ in 0..samples {
            let d = match &fixed {
                Some(d) => d.clone(),
                None => {
                    let d = generate::strict_diagram(rng, opts.field, 4)?;
                    Arc::new(if rng.random_bool(0.5) { generate::twist(rng, &d)?.0 } else { d })
                }
            };
            got.push(generate::adjunction_sample(rng, kind, &d, opts.max_dim, opts.convention)?);
        }
        witnesses.push(AdjunctionWitness::new(kind, got));
    }
    let pass = witnesses.iter().all(|w| w.passed);
    Ok(Outcome::new(pass, json!({ "adjunctions": witnesses })))
}

fn classify(ws: &Workspace, args: &Args, opts: &Options) -> CliResult<Outcome> {
    let name = args.str("rep")?;
    let m = ws.representation(name)?;
    let side = args.choice("side", "projective", &["projective", "injective", "both"])?;
    let mut verdicts = Vec::new();
    let mut result = json!({});
    if side != "injective" {
        verdicts.push(classify_projective(name, m, opts.convention)?);
        result["phi_proj"] = to_json(&phi_proj(m, opts.convention)?);
    }
    if side != "projective" {
        verdicts.push(classify_injective(name, m, opts.convention)?);
        result["psi_inj"] = to_json(&psi_inj(m, opts.convention)?);
    }
    let pass = verdicts.iter().all(|v| v.agreement);
    result["verdicts"] = to_json(&verdicts);
    Ok(Outcome::new(pass, result))
}

fn decomposition_json(d: &Decomposition) -> Value {
    json!({
        "label": d.label,
        "candidate": d.candidate.summary(),
        "isomorphism": d.isomorphism.as_ref().map(|w| w.components.clone()),
    })
}

fn decompose(ws: &Workspace, args: &Args, opts: &Options) -> CliResult<Outcome> {
    let m = ws.representation(args.str("rep")?)?;
    let side = args.choice("side", "projective", &["projective", "injective"])?;
    let found = if side == "projective" { vec![decompose_projective(m, opts.convention)?] } else { decompose_injective(m, opts.convention)? };
    let pass = found.iter().any(|d| d.isomorphism.is_some());
    Ok(Outcome::new(pass, json!({ "side": side, "decompositions": found.iter().map(decomposition_json).collect::<Vec<_>>() })))
}

fn violation_sites(r: &ValidationReport) -> BTreeSet<(String, Vec<String>)> {
    r.violations.iter().map(|v| (v.axiom.clone(), v.witness.clone())).collect()
}

fn appendix_check(ws: &Workspace, args: &Args, opts: &Options, rng: &mut GenRng) -> CliResult<Outcome> {
    let (dname, rep) = match args.opt_str("rep")? {
        Some(name) => {
            let rep = ws.representation(name)?.clone();
            let dname = ws.diagram_name(rep.diagram()).ok_or_else(|| CliError::Input(format!("diagram of `{name}` is not declared")))?.to_string();
            (dname, Some(rep))
        }
        None => (args.str("diagram")?.to_string(), None),
    };
    let ring = ws.rings.get(&dname).ok_or_else(|| CliError::Input(format!("`{dname}` is not declared as a ring diagram")))?;
    let d = ws.diagrams[&dname].clone();
    let sys = match &rep {
        Some(rep) => ModSystem::from_representation(ring, rep),
        None => generate::mod_system(rng, ring, opts.max_dim),
    };
    let rep = match rep {
        Some(rep) => rep,
        None => sys.to_representation(&d)?,
    };
    let (mod_report, rep_report) = (sys.validate(), rep.validate());
    let verdicts_agree = mod_report.passed() == rep_report.passed() && violation_sites(&mod_report) == violation_sites(&rep_report);
    let back = sys.to_representation(&d)?;
    let module_round_trip = back.structural_maps() == rep.structural_maps();
    let transposes = rep.transpose_structural_maps()?;
    let again = Representation::from_transposes(&d, rep.modules().to_vec(), &transposes)?;
    let transpose_round_trip = again.structural_maps() == rep.structural_maps();
    let mut result = json!({
        "module_axioms": mod_report,
        "representation_axioms": rep_report,
        "verdicts_agree": verdicts_agree,
        "module_round_trip": module_round_trip,
        "transpose_round_trip": transpose_round_trip,
    });
    let mut pass = verdicts_agree && module_round_trip && transpose_round_trip;
    if args.bool_or("mutate", false)? {
        let c = &ring.index;
        let generators = c.irreducibles();
        let sites: Vec<(usize, Vec<Matrix>)> = (0..c.num_morphisms())
            .filter(|f| !generators.contains(f))
            .map(|f| (f, generate::semilinear_basis(ring, f, &sys.modules[c.source(f)], &sys.modules[c.target(f)])))
            .filter(|(_, b)| !b.is_empty())
            .collect();
        if let Some((f, basis)) = sites.get(if sites.is_empty() { 0 } else { rng.random_range(0..sites.len()) }) {
            let mut bad = sys.clone();
            bad.maps[*f] = bad.maps[*f].add(&basis[rng.random_range(0..basis.len())]);
            let (a, b) = (bad.validate(), bad.to_representation(&d)?.validate());
            let same = !a.passed() && !b.passed() && violation_sites(&a) == violation_sites(&b);
            pass &= same;
            result["mutation"] = json!({ "site": c.morphism_name(*f), "module_axioms": a, "representation_axioms": b, "same_failures": same });
        } else {
            result["mutation"] = Value::Null;
        }
    }
    Ok(Outcome::new(pass, result))
}

fn generate_cmd(ws: &mut Workspace, args: &Args, opts: &Options, rng: &mut GenRng) -> CliResult<Outcome> {
    let kind = args.choice("kind", "diagram", &["quiver", "poset", "diagram", "representation", "ring"])?;
    let objects = args.usize_or("objects", 3)?;
    if objects > MAX_OBJECTS {
        return Err(CliError::Input(format!("`generate`: size bound exceeded, at most {MAX_OBJECTS} objects")));
    }
    let prefix = args.opt_str("as")?.unwrap_or("G").to_string();
    let mut out = Workspace::empty(opts.field);
    if objects == 0 {
        return Ok(Outcome::new(true, json!({ "workspace": out.to_text() })));
    }
    let sized = |e: diarep::Error| match e {
        diarep::Error::SizeBoundExceeded(m) => CliError::Input(format!("`generate`: size bound exceeded: {m}")),
        e => CliError::Math(e),
    };
    match kind {
        "quiver" => {
            out.categories.insert(prefix.clone(), generate::acyclic_quiver(rng, objects, 40).map_err(sized)?);
        }
        "poset" => {
            out.categories.insert(prefix.clone(), generate::poset(rng, objects).map_err(sized)?);
        }
        "diagram" => {
            let d = generate::strict_diagram(rng, opts.field, objects).map_err(sized)?;
            let d = if args.bool_or("twist", true)? { generate::twist(rng, &d)?.0 } else { d };
            out.categories.insert(format!("{prefix}_index"), d.index().clone());
            out.diagrams.insert(prefix.clone(), Arc::new(d));
        }
        "representation" => {
            let dname = args.str("diagram")?;
            let d = ws.diagrams.get(dname).cloned().ok_or_else(|| CliError::UnresolvedReference { kind: "diagram", name: dname.to_string() })?;
            out.diagrams.insert(dname.to_string(), d.clone());
            if let Some(r) = ws.rings.get(dname) {
                out.rings.insert(dname.to_string(), r.clone());
            }
            out.representations.insert(prefix.clone(), generate::representation(rng, &d, opts.max_dim)?);
        }
        _ => {
            let ring = generate::ring_diagram(rng, opts.field)?;
            let d = Arc::new(DiagramSpec::from_ring_diagram(&ring)?);
            let sys = generate::mod_system(rng, &ring, opts.max_dim);
            out.representations.insert(format!("{prefix}_module"), sys.to_representation(&d)?);
            out.categories.insert(format!("{prefix}_index"), ring.index.clone());
            out.rings.insert(prefix.clone(), ring);
            out.diagrams.insert(prefix.clone(), d);
        }
    }
    let reports = out.validate_all();
    let pass = reports.iter().all(|r| r.passed());
    let text = out.to_text();
    merge(ws, out)?;
    Ok(Outcome::new(pass, json!({ "workspace": text, "reports": reports })))
}

/// Adds generated items; a name already bound to a different item is an error.
fn merge(ws: &mut Workspace, out: Workspace) -> CliResult<()> {
    fn put<T: PartialEq>(map: &mut std::collections::BTreeMap<String, T>, name: String, item: T) -> CliResult<()> {
        match map.get(&name) {
            Some(existing) if *existing != item => Err(CliError::Input(format!("`generate`: name `{name}` is already taken"))),
            Some(_) => Ok(()),
            None => {
                map.insert(name, item);
                Ok(())
            }
        }
    }
    for (n, c) in out.categories {
        put(&mut ws.categories, n, c)?;
    }
    for (n, d) in out.diagrams {
        put(&mut ws.diagrams, n, d)?;
    }
    for (n, r) in out.rings {
        ws.rings.entry(n).or_insert(r);
    }
    for (n, r) in out.representations {
        put(&mut ws.representations, n, r)?;
    }
    Ok(())
}
