//! The declarative workspace format.
//!
//! A workspace is a TOML document whose named sections are written
//! `[category A3]`, `[diagram D]`, ... and read as `[category."A3"]`.
//! Matrices are arrays of rows; entries are field-element strings (`"1/2"`,
//! `"2"`) or integers.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use diarep::diagram::{DiagramSpec, RingDiagram};
use diarep::fincat::{identity_name, FinCategory, Mor, Obj};
use diarep::linalg::{Field, Matrix, Scalar};
use diarep::modcat::{same_algebra, Algebra, Bimodule, Module};
use diarep::rep::{ModSystem, RepMorphism, Representation};
use diarep::report::ValidationReport;

use crate::{CliError, CliResult};

/// Section kinds that carry a name.
pub const SECTIONS: [&str; 6] = ["category", "algebra", "bimodule", "diagram", "representation", "morphism"];

pub const COMMANDS: [&str; 14] = [
    "validate",
    "hom",
    "induce",
    "restrict",
    "lif",
    "cok",
    "ker",
    "stalk",
    "stratify",
    "adjoint-check",
    "classify",
    "decompose",
    "appendix-check",
    "generate",
];

/// One entry of the `[run]` block.
#[derive(Clone, Debug, PartialEq)]
pub struct Command {
    pub op: String,
    pub args: toml::Table,
}

impl Command {
    pub fn new(op: &str, args: toml::Table) -> CliResult<Command> {
        if !COMMANDS.contains(&op) {
            return Err(CliError::UnknownCommand(op.to_string()));
        }
        Ok(Command { op: op.to_string(), args })
    }
}

/// A loaded workspace: every named item resolved and constructed.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub field: Field,
    pub categories: BTreeMap<String, FinCategory>,
    pub algebras: BTreeMap<String, Arc<Algebra>>,
    pub bimodules: BTreeMap<String, Bimodule>,
    pub diagrams: BTreeMap<String, Arc<DiagramSpec>>,
    /// Diagrams declared from a ring diagram, under the same name.
    pub rings: BTreeMap<String, RingDiagram>,
    pub representations: BTreeMap<String, Representation>,
    pub morphisms: BTreeMap<String, RepMorphism>,
    pub commands: Vec<Command>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    field: Option<RawField>,
    #[serde(default)]
    category: BTreeMap<String, RawCategory>,
    #[serde(default)]
    algebra: BTreeMap<String, RawAlgebra>,
    #[serde(default)]
    bimodule: BTreeMap<String, RawBimodule>,
    #[serde(default)]
    diagram: BTreeMap<String, RawDiagram>,
    #[serde(default)]
    representation: BTreeMap<String, RawRepresentation>,
    #[serde(default)]
    morphism: BTreeMap<String, RawMorphism>,
    run: Option<RawRun>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    name: String,
}

#[derive(Clone, Deserialize)]
#[serde(untagged)]
enum RawScalar {
    Int(i64),
    Text(String),
}

type RawMatrix = Vec<Vec<RawScalar>>;

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawCategory {
    Quiver {
        vertices: Vec<String>,
        #[serde(default)]
        arrows: Vec<[String; 3]>,
    },
    Poset {
        elements: Vec<String>,
        #[serde(default)]
        relations: Vec<[String; 2]>,
    },
    Monoid {
        #[serde(default = "default_object")]
        object: String,
        elements: Vec<String>,
        unit: String,
        products: Vec<[String; 3]>,
    },
    Cyclic {
        order: usize,
    },
    Table {
        objects: Vec<String>,
        morphisms: Vec<[String; 3]>,
        identities: BTreeMap<String, String>,
        #[serde(default)]
        composites: Vec<[String; 3]>,
    },
}

fn default_object() -> String {
    "*".to_string()
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawAlgebra {
    Ground,
    Truncated { degree: usize },
    CyclicGroup { order: usize },
    UpperTriangular,
    Structure { left: Vec<RawMatrix>, unit: Vec<RawScalar> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBimodule {
    left: String,
    right: String,
    dim: usize,
    left_action: Vec<RawMatrix>,
    right_action: Vec<RawMatrix>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawDiagram {
    Trivial {
        category: String,
        algebra: String,
        #[serde(default)]
        twist: BTreeMap<String, RawMatrix>,
    },
    Ring {
        category: String,
        algebras: BTreeMap<String, String>,
        #[serde(default)]
        edge_maps: BTreeMap<String, RawMatrix>,
    },
    General {
        category: String,
        algebras: BTreeMap<String, String>,
        bimodules: BTreeMap<String, String>,
        #[serde(default)]
        tau: Vec<RawTau>,
        #[serde(default)]
        eta: BTreeMap<String, RawMatrix>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTau {
    g: String,
    f: String,
    matrix: RawMatrix,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRepresentation {
    diagram: String,
    #[serde(default)]
    modules: BTreeMap<String, RawModule>,
    #[serde(default)]
    maps: BTreeMap<String, RawMatrix>,
    /// Maps are the module-side `m_α: M_s → M_t` over a ring diagram.
    #[serde(default)]
    semilinear: bool,
}

/// Either `free = n` or `dim` with an optional `action`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModule {
    free: Option<usize>,
    dim: Option<usize>,
    action: Option<Vec<RawMatrix>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMorphism {
    source: String,
    target: String,
    #[serde(default)]
    components: BTreeMap<String, RawMatrix>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    #[serde(default)]
    commands: Vec<toml::Table>,
}

/// Rewrites `[kind name]` headers into TOML table headers, keeping line numbers.
fn rewrite_headers(text: &str) -> CliResult<String> {
    let mut out = String::with_capacity(text.len() + 64);
    for (n, line) in text.lines().enumerate() {
        let t = line;
        let first = t.strip_prefix('[').map(|r| r.trim_start().split(|ch: char| ch.is_whitespace() || ch == ']').next().unwrap_or(""));
        let is_header = first.is_some_and(|k| !k.is_empty() && k.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_'));
        if is_header {
            let close = t.rfind(']').ok_or_else(|| parse_error(n + 1, 1, "unterminated section header"))?;
            let inner = t[1..close].trim();
            if let Some((kind, name)) = inner.split_once(char::is_whitespace) {
                if !SECTIONS.contains(&kind) {
                    return Err(parse_error(n + 1, 2, &format!("unknown section kind `{kind}`")));
                }
                let name = name.trim();
                let key = if name.starts_with('"') { name.to_string() } else { quote(name) };
                out.push_str(&format!("[{kind}.{key}]{}\n", &t[close + 1..]));
                continue;
            }
            if SECTIONS.contains(&inner) {
                return Err(parse_error(n + 1, 2, &format!("section `{inner}` needs a name")));
            }
        }
        out.push_str(line);
        out.push('\n');
    }
    Ok(out)
}

fn parse_error(line: usize, column: usize, message: &str) -> CliError {
    CliError::Parse { line, column, message: message.to_string() }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map(|k| before.len() - k).unwrap_or(before.len() + 1);
    (line, column)
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn unresolved(kind: &'static str, name: &str) -> CliError {
    CliError::UnresolvedReference { kind, name: name.to_string() }
}

fn scalar(field: Field, raw: &RawScalar, ctx: &str) -> CliResult<Scalar> {
    match raw {
        RawScalar::Int(v) => Ok(field.from_i64(*v)),
        RawScalar::Text(s) => field.parse_scalar(s).map_err(|e| CliError::input(ctx, e)),
    }
}

fn matrix(field: Field, raw: &RawMatrix, rows: usize, cols: usize, ctx: &str) -> CliResult<Matrix> {
    if raw.len() != rows || raw.iter().any(|r| r.len() != cols) {
        let got = raw.first().map(|r| r.len()).unwrap_or(0);
        return Err(CliError::Input(format!("{ctx}: expected a {rows}x{cols} matrix, got {}x{got}", raw.len())));
    }
    let entries = raw.iter().map(|r| r.iter().map(|x| scalar(field, x, ctx)).collect::<CliResult<Vec<_>>>()).collect::<CliResult<Vec<_>>>()?;
    Matrix::from_rows(field, rows, cols, &entries).map_err(|e| CliError::input(ctx, e))
}

fn object(c: &FinCategory, name: &str) -> CliResult<Obj> {
    c.object(name).map_err(|_| unresolved("object", name))
}

fn morphism(c: &FinCategory, name: &str) -> CliResult<Mor> {
    c.morphism(name).map_err(|_| unresolved("morphism", name))
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(|s| s.as_str()).collect()
}

/// Fills identities with identity matrices and composites by multiplication.
fn complete_functorial(c: &FinCategory, known: &mut [Option<Matrix>], identity: impl Fn(Obj) -> Matrix) -> CliResult<Vec<Matrix>> {
    for i in 0..c.num_objects() {
        if known[c.identity(i)].is_none() {
            known[c.identity(i)] = Some(identity(i));
        }
    }
    loop {
        let mut changed = false;
        for (g, f) in c.composable_pairs() {
            let gf = c.comp(g, f);
            if known[gf].is_none() {
                if let (Some(a), Some(b)) = (&known[g], &known[f]) {
                    known[gf] = Some(a.mul(b));
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    known
        .iter()
        .enumerate()
        .map(|(f, m)| m.clone().ok_or_else(|| CliError::Input(format!("no map given for `{}` and it is not a composite of given maps", c.morphism_name(f)))))
        .collect()
}

impl Workspace {
    pub fn empty(field: Field) -> Workspace {
        Workspace {
            field,
            categories: BTreeMap::new(),
            algebras: BTreeMap::new(),
            bimodules: BTreeMap::new(),
            diagrams: BTreeMap::new(),
            rings: BTreeMap::new(),
            representations: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            commands: Vec::new(),
        }
    }

    /// Parses and resolves a workspace; `default_field` applies without a `[field]` section.
    pub fn parse(text: &str, default_field: Field) -> CliResult<Workspace> {
        let rewritten = rewrite_headers(text)?;
        let raw: RawDoc = toml::from_str(&rewritten).map_err(|e| {
            let (line, column) = e.span().map(|s| line_column(&rewritten, s.start)).unwrap_or((0, 0));
            CliError::Parse { line, column, message: e.message().to_string() }
        })?;
        let field = match &raw.field {
            Some(f) => f.name.parse().map_err(|e| CliError::input("[field]", e))?,
            None => default_field,
        };
        let mut ws = Workspace::empty(field);
        for (name, c) in &raw.category {
            let cat = ws.build_category(c).map_err(|e| match e {
                CliError::Math(e) => CliError::input(format!("category `{name}`"), e),
                e => e,
            })?;
            ws.categories.insert(name.clone(), cat);
        }
        for (name, a) in &raw.algebra {
            let alg = ws.build_algebra(name, a)?;
            ws.algebras.insert(name.clone(), alg);
        }
        for (name, b) in &raw.bimodule {
            let bim = ws.build_bimodule(name, b)?;
            ws.bimodules.insert(name.clone(), bim);
        }
        for (name, d) in &raw.diagram {
            ws.build_diagram(name, d)?;
        }
        for (name, r) in &raw.representation {
            let rep = ws.build_representation(name, r)?;
            ws.representations.insert(name.clone(), rep);
        }
        for (name, m) in &raw.morphism {
            let mor = ws.build_morphism(name, m)?;
            ws.morphisms.insert(name.clone(), mor);
        }
        if let Some(run) = &raw.run {
            for t in &run.commands {
                let mut args = t.clone();
                let op = match args.remove("op") {
                    Some(toml::Value::String(op)) => op,
                    _ => return Err(CliError::Input("every command needs a string `op`".into())),
                };
                ws.commands.push(Command::new(&op, args)?);
            }
        }
        Ok(ws)
    }

    fn build_category(&self, raw: &RawCategory) -> CliResult<FinCategory> {
        Ok(match raw {
            RawCategory::Quiver { vertices, arrows } => {
                let arrows: Vec<(&str, &str, &str)> = arrows.iter().map(|[a, s, t]| (a.as_str(), s.as_str(), t.as_str())).collect();
                FinCategory::from_quiver(&strs(vertices), &arrows)?
            }
            RawCategory::Poset { elements, relations } => {
                let rel: Vec<(&str, &str)> = relations.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
                FinCategory::from_poset(&strs(elements), &rel)?
            }
            RawCategory::Monoid { object, elements, unit, products } => {
                let prods: Vec<(&str, &str, &str)> = products.iter().map(|[a, b, c]| (a.as_str(), b.as_str(), c.as_str())).collect();
                FinCategory::from_monoid(object, &strs(elements), unit, &prods)?
            }
            RawCategory::Cyclic { order } => {
                if *order == 0 {
                    return Err(CliError::Input("a cyclic group needs positive order".into()));
                }
                FinCategory::cyclic_group(*order)
            }
            RawCategory::Table { objects, morphisms, identities, composites } => {
                let mors: Vec<(String, String, String)> = morphisms.iter().map(|[a, s, t]| (a.clone(), s.clone(), t.clone())).collect();
                let mut comp: BTreeMap<(String, String), String> = composites.iter().map(|[g, f, h]| ((g.clone(), f.clone()), h.clone())).collect();
                for (m, s, t) in &mors {
                    for (g, f) in [(identities.get(t), Some(m)), (Some(m), identities.get(s))] {
                        if let (Some(g), Some(f)) = (g, f) {
                            comp.entry((g.clone(), f.clone())).or_insert_with(|| m.clone());
                        }
                    }
                }
                FinCategory::from_table(objects, &mors, identities, &comp)?
            }
        })
    }

    fn build_algebra(&self, name: &str, raw: &RawAlgebra) -> CliResult<Arc<Algebra>> {
        let f = self.field;
        let ctx = format!("algebra `{name}`");
        Ok(match raw {
            RawAlgebra::Ground => Algebra::ground(f),
            RawAlgebra::Truncated { degree } if *degree > 0 => Algebra::truncated_polynomial(f, *degree),
            RawAlgebra::CyclicGroup { order } if *order > 0 => Algebra::cyclic_group_algebra(f, *order),
            RawAlgebra::Truncated { .. } | RawAlgebra::CyclicGroup { .. } => return Err(CliError::Input(format!("{ctx}: size must be positive"))),
            RawAlgebra::UpperTriangular => Algebra::upper_triangular(f),
            RawAlgebra::Structure { left, unit } => {
                let d = left.len();
                let left = left.iter().map(|m| matrix(f, m, d, d, &ctx)).collect::<CliResult<Vec<_>>>()?;
                let unit = unit.iter().map(|s| scalar(f, s, &ctx)).collect::<CliResult<Vec<_>>>()?;
                if unit.len() != d {
                    return Err(CliError::Input(format!("{ctx}: unit has {} entries, expected {d}", unit.len())));
                }
                let alg = Algebra::from_left_multiplication(name, f, left, Matrix::column_vector(f, &unit)).map_err(|e| CliError::input(&ctx, e))?;
                let report = alg.validate();
                if !report.passed() {
                    return Err(CliError::ValidationFailure { subject: ctx, report });
                }
                Arc::new(alg)
            }
        })
    }

    fn algebra(&self, name: &str) -> CliResult<&Arc<Algebra>> {
        self.algebras.get(name).ok_or_else(|| unresolved("algebra", name))
    }

    fn category(&self, name: &str) -> CliResult<&FinCategory> {
        self.categories.get(name).ok_or_else(|| unresolved("category", name))
    }

    fn build_bimodule(&self, name: &str, raw: &RawBimodule) -> CliResult<Bimodule> {
        let ctx = format!("bimodule `{name}`");
        let (l, r) = (self.algebra(&raw.left)?, self.algebra(&raw.right)?);
        let n = raw.dim;
        let left = raw.left_action.iter().map(|m| matrix(self.field, m, n, n, &ctx)).collect::<CliResult<Vec<_>>>()?;
        let right = raw.right_action.iter().map(|m| matrix(self.field, m, n, n, &ctx)).collect::<CliResult<Vec<_>>>()?;
        let b = Bimodule::new(l, r, n, left, right).map_err(|e| CliError::input(&ctx, e))?;
        let report = b.validate();
        if !report.passed() {
            return Err(CliError::ValidationFailure { subject: ctx, report });
        }
        Ok(b)
    }

    fn object_algebras(&self, c: &FinCategory, algebras: &BTreeMap<String, String>, ctx: &str) -> CliResult<Vec<Arc<Algebra>>> {
        for o in algebras.keys() {
            object(c, o)?;
        }
        (0..c.num_objects())
            .map(|i| {
                let o = c.object_name(i);
                let a = algebras.get(o).ok_or_else(|| CliError::Input(format!("{ctx}: no algebra for object `{o}`")))?;
                self.algebra(a).cloned()
            })
            .collect()
    }

    fn build_diagram(&mut self, name: &str, raw: &RawDiagram) -> CliResult<()> {
        let ctx = format!("diagram `{name}`");
        let field = self.field;
        let d = match raw {
            RawDiagram::Trivial { category, algebra, twist } => {
                let c = self.category(category)?;
                let alg = self.algebra(algebra)?;
                let d = DiagramSpec::trivial(c, alg);
                if twist.is_empty() {
                    d
                } else {
                    let mut phi = vec![Matrix::identity(field, alg.dim()); c.num_morphisms()];
                    for (m, raw) in twist {
                        phi[morphism(c, m)?] = matrix(field, raw, alg.dim(), alg.dim(), &ctx)?;
                    }
                    d.twisted(&phi).map_err(|e| CliError::input(&ctx, e))?
                }
            }
            RawDiagram::Ring { category, algebras, edge_maps } => {
                let c = self.category(category)?.clone();
                let algs = self.object_algebras(&c, algebras, &ctx)?;
                let mut known = vec![None; c.num_morphisms()];
                for (m, raw) in edge_maps {
                    let f = morphism(&c, m)?;
                    known[f] = Some(matrix(field, raw, algs[c.target(f)].dim(), algs[c.source(f)].dim(), &ctx)?);
                }
                let edge_maps = complete_functorial(&c, &mut known, |i| Matrix::identity(field, algs[i].dim()))?;
                let ring = RingDiagram { index: c, algebras: algs, edge_maps };
                let report = ring.validate();
                if !report.passed() {
                    return Err(CliError::ValidationFailure { subject: ctx, report });
                }
                let d = DiagramSpec::from_ring_diagram(&ring).map_err(|e| CliError::input(&ctx, e))?;
                self.rings.insert(name.to_string(), ring);
                d
            }
            RawDiagram::General { category, algebras, bimodules, tau, eta } => {
                let c = self.category(category)?.clone();
                let algs = self.object_algebras(&c, algebras, &ctx)?;
                for m in bimodules.keys() {
                    morphism(&c, m)?;
                }
                let bims = (0..c.num_morphisms())
                    .map(|f| {
                        let m = c.morphism_name(f);
                        let b = bimodules.get(m).ok_or_else(|| CliError::Input(format!("{ctx}: no bimodule for morphism `{m}`")))?;
                        self.bimodules.get(b).cloned().ok_or_else(|| unresolved("bimodule", b))
                    })
                    .collect::<CliResult<Vec<Bimodule>>>()?;
                let n = c.num_morphisms();
                let mut taus = vec![None; n * n];
                for t in tau {
                    let (g, f) = (morphism(&c, &t.g)?, morphism(&c, &t.f)?);
                    let gf = c.compose(g, f).ok_or_else(|| CliError::Input(format!("{ctx}: ({}, {}) are not composable", t.g, t.f)))?;
                    let pair = bims[g].tensor_bimodule(&bims[f]).map_err(|e| CliError::input(&ctx, e))?;
                    taus[g * n + f] = Some(matrix(field, &t.matrix, bims[gf].dim(), pair.bimodule.dim(), &ctx)?);
                }
                let etas = (0..c.num_objects())
                    .map(|i| {
                        let o = c.object_name(i);
                        let raw = eta.get(o).ok_or_else(|| CliError::Input(format!("{ctx}: no unit witness at `{o}`")))?;
                        matrix(field, raw, bims[c.identity(i)].dim(), algs[i].dim(), &ctx)
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                for o in eta.keys() {
                    object(&c, o)?;
                }
                DiagramSpec::new(c, algs, bims, taus, etas).map_err(|e| CliError::input(&ctx, e))?
            }
        };
        self.diagrams.insert(name.to_string(), Arc::new(d));
        Ok(())
    }

    fn diagram(&self, name: &str) -> CliResult<&Arc<DiagramSpec>> {
        self.diagrams.get(name).ok_or_else(|| unresolved("diagram", name))
    }

    fn build_module(&self, alg: &Arc<Algebra>, raw: &RawModule, ctx: &str) -> CliResult<Module> {
        match (raw.free, raw.dim, &raw.action) {
            (Some(free), None, None) => Ok(Module::free(alg, free)),
            (None, Some(dim), None) if alg.dim() == 1 => Ok(Module::vector_space(alg, dim)),
            (None, Some(_), None) => Err(CliError::Input(format!("{ctx}: the algebra is not the ground field, give `action`"))),
            (None, Some(dim), Some(action)) => {
                if action.len() != alg.dim() {
                    return Err(CliError::Input(format!("{ctx}: expected {} action matrices, got {}", alg.dim(), action.len())));
                }
                let action = action.iter().map(|m| matrix(self.field, m, dim, dim, ctx)).collect::<CliResult<Vec<_>>>()?;
                let m = Module::new(alg, dim, action).map_err(|e| CliError::input(ctx, e))?;
                let report = m.validate();
                if !report.passed() {
                    return Err(CliError::ValidationFailure { subject: ctx.to_string(), report });
                }
                Ok(m)
            }
            _ => Err(CliError::Input(format!("{ctx}: give either `free` or `dim` with an optional `action`"))),
        }
    }

    fn build_representation(&self, name: &str, raw: &RawRepresentation) -> CliResult<Representation> {
        let ctx = format!("representation `{name}`");
        let d = self.diagram(&raw.diagram)?;
        let c = d.index();
        for o in raw.modules.keys() {
            object(c, o)?;
        }
        let modules = (0..c.num_objects())
            .map(|i| match raw.modules.get(c.object_name(i)) {
                Some(m) => self.build_module(d.algebra(i), m, &format!("{ctx} at `{}`", c.object_name(i))),
                None => Ok(Module::zero(d.algebra(i))),
            })
            .collect::<CliResult<Vec<_>>>()?;
        let mut given = BTreeMap::new();
        for (m, rm) in &raw.maps {
            let f = morphism(c, m)?;
            let (s, t) = (modules[c.source(f)].dim(), modules[c.target(f)].dim());
            let cols = if raw.semilinear { s } else { d.apply(f, &modules[c.source(f)]).map_err(|e| CliError::input(&ctx, e))?.module.dim() };
            given.insert(f, matrix(self.field, rm, t, cols, &format!("{ctx} map `{m}`"))?);
        }
        for f in 0..c.num_morphisms() {
            if c.is_identity(f) || given.contains_key(&f) {
                continue;
            }
            let (s, t) = (&modules[c.source(f)], modules[c.target(f)].dim());
            if s.dim() == 0 || t == 0 {
                let cols = if raw.semilinear { s.dim() } else { d.apply(f, s).map_err(|e| CliError::input(&ctx, e))?.module.dim() };
                given.insert(f, Matrix::zeros(self.field, t, cols));
            }
        }
        if raw.semilinear {
            let ring = self.rings.get(&raw.diagram).ok_or_else(|| CliError::Input(format!("{ctx}: semilinear maps need a ring diagram")))?;
            let mut known: Vec<Option<Matrix>> = (0..c.num_morphisms()).map(|f| given.get(&f).cloned()).collect();
            let maps = complete_functorial(c, &mut known, |i| Matrix::identity(self.field, modules[i].dim()))?;
            let sys = ModSystem { ring: ring.clone(), modules, maps };
            return sys.to_representation(d).map_err(|e| CliError::input(&ctx, e));
        }
        let non_identity_given = (0..c.num_morphisms()).all(|f| c.is_identity(f) || given.contains_key(&f));
        if non_identity_given {
            let structural = (0..c.num_morphisms())
                .map(|f| match given.get(&f) {
                    Some(m) => Ok(m.clone()),
                    None => {
                        let i = c.source(f);
                        let t = d.apply(f, &modules[i]).map_err(|e| CliError::input(&ctx, e))?;
                        d.eta_component(i, &t).inverse().ok_or_else(|| CliError::Input(format!("{ctx}: unit witness at `{}` is not invertible", c.object_name(i))))
                    }
                })
                .collect::<CliResult<Vec<_>>>()?;
            Representation::from_parts(d, modules, structural).map_err(|e| CliError::input(&ctx, e))
        } else {
            Representation::build(d, modules, &given).map_err(|e| CliError::input(&ctx, e))
        }
    }

    pub fn representation(&self, name: &str) -> CliResult<&Representation> {
        self.representations.get(name).ok_or_else(|| unresolved("representation", name))
    }

    fn build_morphism(&self, name: &str, raw: &RawMorphism) -> CliResult<RepMorphism> {
        let ctx = format!("morphism `{name}`");
        let (m, n) = (self.representation(&raw.source)?, self.representation(&raw.target)?);
        let c = m.diagram().index();
        for o in raw.components.keys() {
            object(c, o)?;
        }
        let components = (0..c.num_objects())
            .map(|i| {
                let (r, s) = (n.module(i).dim(), m.module(i).dim());
                match raw.components.get(c.object_name(i)) {
                    Some(raw) => matrix(self.field, raw, r, s, &ctx),
                    None => Ok(Matrix::zeros(self.field, r, s)),
                }
            })
            .collect::<CliResult<Vec<_>>>()?;
        RepMorphism::new(m, n, components).map_err(|e| CliError::input(&ctx, e))
    }

    /// Validation reports for every item named `name`, optionally of one kind.
    pub fn validate_named(&self, name: &str, kind: Option<&str>) -> CliResult<Vec<ValidationReport>> {
        let mut out = Vec::new();
        let wanted = |k: &str| kind.is_none_or(|w| w == k);
        if let Some(c) = self.categories.get(name).filter(|_| wanted("category")) {
            out.push(titled(c.validate(), "category", name));
        }
        if let Some(a) = self.algebras.get(name).filter(|_| wanted("algebra")) {
            out.push(titled(a.validate(), "algebra", name));
        }
        if let Some(b) = self.bimodules.get(name).filter(|_| wanted("bimodule")) {
            out.push(titled(b.validate(), "bimodule", name));
        }
        if let Some(d) = self.diagrams.get(name).filter(|_| wanted("diagram")) {
            if let Some(r) = self.rings.get(name) {
                out.push(titled(r.validate(), "ring diagram", name));
            }
            out.push(titled(d.validate(), "diagram", name));
        }
        if let Some(r) = self.representations.get(name).filter(|_| wanted("representation")) {
            out.push(titled(r.validate(), "representation", name));
        }
        if let Some(m) = self.morphisms.get(name).filter(|_| wanted("morphism")) {
            out.push(titled(m.validate(), "morphism", name));
        }
        if out.is_empty() {
            return Err(unresolved("item", name));
        }
        Ok(out)
    }

    /// Validation reports for every item, in section order.
    pub fn validate_all(&self) -> Vec<ValidationReport> {
        let mut out = Vec::new();
        out.extend(self.categories.iter().map(|(n, c)| titled(c.validate(), "category", n)));
        out.extend(self.algebras.iter().map(|(n, a)| titled(a.validate(), "algebra", n)));
        out.extend(self.bimodules.iter().map(|(n, b)| titled(b.validate(), "bimodule", n)));
        for (n, d) in &self.diagrams {
            if let Some(r) = self.rings.get(n) {
                out.push(titled(r.validate(), "ring diagram", n));
            }
            out.push(titled(d.validate(), "diagram", n));
        }
        out.extend(self.representations.iter().map(|(n, r)| titled(r.validate(), "representation", n)));
        out.extend(self.morphisms.iter().map(|(n, m)| titled(m.validate(), "morphism", n)));
        out
    }

    /// Validates everything the commands reference, except for `validate` itself.
    pub fn check_referenced(&self, commands: &[Command]) -> CliResult<()> {
        for cmd in commands.iter().filter(|c| c.op != "validate" && c.op != "generate") {
            for (key, value) in &cmd.args {
                let toml::Value::String(name) = value else { continue };
                let kind = match key.as_str() {
                    "rep" | "source" | "target" => "representation",
                    "diagram" => "diagram",
                    "category" => "category",
                    _ => continue,
                };
                let Ok(reports) = self.validate_named(name, Some(kind)) else { continue };
                let mut reports = reports;
                if kind == "representation" {
                    let d = self.representations[name].diagram();
                    reports.insert(0, titled(d.validate(), "diagram of representation", name));
                }
                if let Some(r) = reports.into_iter().find(|r| !r.passed()) {
                    return Err(CliError::ValidationFailure { subject: r.subject.clone(), report: r });
                }
            }
        }
        Ok(())
    }

    /// Name of a diagram in this workspace, by identity or equality.
    pub fn diagram_name(&self, d: &Arc<DiagramSpec>) -> Option<&str> {
        self.diagrams.iter().find(|(_, e)| Arc::ptr_eq(e, d)).or_else(|| self.diagrams.iter().find(|(_, e)| ***e == **d)).map(|(n, _)| n.as_str())
    }

    /// Serializes the workspace; parsing the result gives an equal workspace.
    pub fn to_text(&self) -> String {
        Writer::new(self).finish()
    }
}

fn titled(mut r: ValidationReport, kind: &str, name: &str) -> ValidationReport {
    r.subject = format!("{kind} `{name}`");
    r
}

/// Names every item reachable from the workspace and prints the sections.
struct Writer<'a> {
    ws: &'a Workspace,
    categories: Vec<(String, FinCategory)>,
    algebras: Vec<(String, Arc<Algebra>)>,
    bimodules: Vec<(String, Bimodule)>,
    diagrams: Vec<(String, Arc<DiagramSpec>)>,
    taken: std::collections::BTreeSet<String>,
}

impl<'a> Writer<'a> {
    fn new(ws: &'a Workspace) -> Writer<'a> {
        let mut w = Writer {
            ws,
            categories: ws.categories.iter().map(|(n, c)| (n.clone(), c.clone())).collect(),
            algebras: ws.algebras.iter().map(|(n, a)| (n.clone(), a.clone())).collect(),
            bimodules: ws.bimodules.iter().map(|(n, b)| (n.clone(), b.clone())).collect(),
            diagrams: ws.diagrams.iter().map(|(n, d)| (n.clone(), d.clone())).collect(),
            taken: Default::default(),
        };
        w.taken.extend(ws.categories.keys().cloned());
        w.taken.extend(ws.algebras.keys().cloned());
        w.taken.extend(ws.bimodules.keys().cloned());
        w.taken.extend(ws.diagrams.keys().cloned());
        w.taken.extend(ws.representations.keys().cloned());
        w.taken.extend(ws.morphisms.keys().cloned());
        for (n, r) in &ws.representations {
            w.diagram(r.diagram(), &format!("{n}_diagram"));
        }
        for (n, r) in &ws.rings {
            for a in &r.algebras {
                w.algebra(a, &format!("{n}_{}", a.name()));
            }
        }
        let diagrams = w.diagrams.clone();
        for (n, d) in &diagrams {
            w.category(d.index(), &format!("{n}_index"));
            for a in d.algebras() {
                w.algebra(a, a.name());
            }
            if w.diagram_kind(n, d) == "general" {
                for f in 0..d.index().num_morphisms() {
                    w.bimodule(d.bimodule(f), &format!("{n}_{}", d.index().morphism_name(f)));
                }
            }
        }
        let bimodules = w.bimodules.clone();
        for (_, b) in &bimodules {
            w.algebra(b.left_algebra(), b.left_algebra().name());
            w.algebra(b.right_algebra(), b.right_algebra().name());
        }
        w
    }

    fn fresh(&mut self, hint: &str) -> String {
        let base = if hint.is_empty() { "item" } else { hint };
        let mut name = base.to_string();
        let mut k = 2;
        while self.taken.contains(&name) {
            name = format!("{base}_{k}");
            k += 1;
        }
        self.taken.insert(name.clone());
        name
    }

    fn category(&mut self, c: &FinCategory, hint: &str) -> String {
        if let Some((n, _)) = self.categories.iter().find(|(_, e)| e == c) {
            return n.clone();
        }
        let n = self.fresh(hint);
        self.categories.push((n.clone(), c.clone()));
        n
    }

    fn algebra(&mut self, a: &Arc<Algebra>, hint: &str) -> String {
        if let Some((n, _)) = self.algebras.iter().find(|(_, e)| same_algebra(e, a)) {
            return n.clone();
        }
        let n = self.fresh(hint);
        self.algebras.push((n.clone(), a.clone()));
        n
    }

    fn bimodule(&mut self, b: &Bimodule, hint: &str) -> String {
        if let Some((n, _)) = self.bimodules.iter().find(|(_, e)| e == b) {
            return n.clone();
        }
        let n = self.fresh(hint);
        self.bimodules.push((n.clone(), b.clone()));
        n
    }

    fn diagram(&mut self, d: &Arc<DiagramSpec>, hint: &str) -> String {
        if let Some((n, _)) = self.diagrams.iter().find(|(_, e)| Arc::ptr_eq(e, d)).or_else(|| self.diagrams.iter().find(|(_, e)| **e == **d)) {
            return n.clone();
        }
        let n = self.fresh(hint);
        self.diagrams.push((n.clone(), d.clone()));
        n
    }

    fn diagram_kind(&self, name: &str, d: &DiagramSpec) -> &'static str {
        if self.ws.rings.contains_key(name) {
            return "ring";
        }
        let a0 = &d.algebras()[0];
        if d.algebras().iter().all(|a| same_algebra(a, a0)) && *d == DiagramSpec::trivial(d.index(), a0) {
            "trivial"
        } else {
            "general"
        }
    }

    fn finish(mut self) -> String {
        let mut out = String::new();
        out.push_str(&format!("[field]\nname = {}\n", quote(&self.ws.field.to_string())));
        for (n, c) in &self.categories {
            out.push_str(&format!("\n{}\n{}", header("category", n), category_body(c)));
        }
        for (n, a) in &self.algebras {
            out.push_str(&format!("\n{}\n{}", header("algebra", n), algebra_body(a)));
        }
        let bimodules = self.bimodules.clone();
        for (n, b) in &bimodules {
            let (l, r) = (self.algebra(b.left_algebra(), "left"), self.algebra(b.right_algebra(), "right"));
            out.push_str(&format!("\n{}\n", header("bimodule", n)));
            out.push_str(&format!("left = {}\nright = {}\ndim = {}\n", quote(&l), quote(&r), b.dim()));
            out.push_str(&format!("left_action = {}\nright_action = {}\n", matrices(b.left_action()), matrices(b.right_action())));
        }
        let diagrams = self.diagrams.clone();
        for (n, d) in &diagrams {
            out.push_str(&format!("\n{}\n", header("diagram", n)));
            out.push_str(&self.diagram_body(n, d));
        }
        for (n, r) in &self.ws.representations {
            let dn = self.diagram(r.diagram(), "diagram");
            out.push_str(&format!("\n{}\ndiagram = {}\n", header("representation", n), quote(&dn)));
            out.push_str(&representation_body(r));
        }
        for (n, m) in &self.ws.morphisms {
            let (s, t) = (self.rep_name(&m.source), self.rep_name(&m.target));
            out.push_str(&format!("\n{}\nsource = {}\ntarget = {}\n", header("morphism", n), quote(&s), quote(&t)));
            let c = m.source.diagram().index();
            for i in 0..c.num_objects() {
                out.push_str(&format!("components.{} = {}\n", quote(c.object_name(i)), matrix_text(&m.components[i])));
            }
        }
        if !self.ws.commands.is_empty() {
            out.push_str("\n[run]\ncommands = [\n");
            for cmd in &self.ws.commands {
                let mut parts = vec![format!("op = {}", quote(&cmd.op))];
                parts.extend(cmd.args.iter().map(|(k, v)| format!("{} = {}", key(k), v)));
                out.push_str(&format!("  {{ {} }},\n", parts.join(", ")));
            }
            out.push_str("]\n");
        }
        out
    }

    fn rep_name(&self, r: &Representation) -> String {
        self.ws.representations.iter().find(|(_, e)| *e == r).map(|(n, _)| n.clone()).unwrap_or_default()
    }

    fn diagram_body(&mut self, name: &str, d: &Arc<DiagramSpec>) -> String {
        let c = d.index();
        let cn = self.category(c, "index");
        let mut out = String::new();
        match self.diagram_kind(name, d) {
            "ring" => {
                let ring = self.ws.rings[name].clone();
                out.push_str(&format!("kind = \"ring\"\ncategory = {}\n", quote(&cn)));
                for i in 0..c.num_objects() {
                    let a = self.algebra(&ring.algebras[i], ring.algebras[i].name());
                    out.push_str(&format!("algebras.{} = {}\n", quote(c.object_name(i)), quote(&a)));
                }
                for f in (0..c.num_morphisms()).filter(|&f| !c.is_identity(f)) {
                    out.push_str(&format!("edge_maps.{} = {}\n", quote(c.morphism_name(f)), matrix_text(&ring.edge_maps[f])));
                }
            }
            "trivial" => {
                let a = self.algebra(&d.algebras()[0], d.algebras()[0].name());
                out.push_str(&format!("kind = \"trivial\"\ncategory = {}\nalgebra = {}\n", quote(&cn), quote(&a)));
            }
            _ => {
                out.push_str(&format!("kind = \"general\"\ncategory = {}\n", quote(&cn)));
                for i in 0..c.num_objects() {
                    let a = self.algebra(d.algebra(i), d.algebra(i).name());
                    out.push_str(&format!("algebras.{} = {}\n", quote(c.object_name(i)), quote(&a)));
                }
                for f in 0..c.num_morphisms() {
                    let b = self.bimodule(d.bimodule(f), "bimodule");
                    out.push_str(&format!("bimodules.{} = {}\n", quote(c.morphism_name(f)), quote(&b)));
                }
                for i in 0..c.num_objects() {
                    out.push_str(&format!("eta.{} = {}\n", quote(c.object_name(i)), matrix_text(d.eta(i))));
                }
                out.push_str("tau = [\n");
                for (g, f) in c.composable_pairs() {
                    out.push_str(&format!(
                        "  {{ g = {}, f = {}, matrix = {} }},\n",
                        quote(c.morphism_name(g)),
                        quote(c.morphism_name(f)),
                        matrix_text(d.tau(g, f))
                    ));
                }
                out.push_str("]\n");
            }
        }
        out
    }
}

fn is_bare(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|ch| ch.is_ascii_alphanumeric() || "_-.*<>+/:".contains(ch))
}

fn header(kind: &str, name: &str) -> String {
    if is_bare(name) {
        format!("[{kind} {name}]")
    } else {
        format!("[{kind} {}]", quote(name))
    }
}

fn key(k: &str) -> String {
    if !k.is_empty() && k.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_' || ch == '-') {
        k.to_string()
    } else {
        quote(k)
    }
}

fn matrix_text(m: &Matrix) -> String {
    let rows: Vec<String> = m.to_strings().iter().map(|r| format!("[{}]", r.iter().map(|s| quote(s)).collect::<Vec<_>>().join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

fn matrices(ms: &[Matrix]) -> String {
    format!("[{}]", ms.iter().map(matrix_text).collect::<Vec<_>>().join(", "))
}

fn string_list<S: AsRef<str>>(items: &[S]) -> String {
    format!("[{}]", items.iter().map(|s| quote(s.as_ref())).collect::<Vec<_>>().join(", "))
}

fn category_body(c: &FinCategory) -> String {
    let objects: Vec<&str> = c.objects().iter().map(|s| s.as_str()).collect();
    let generators = c.irreducibles();
    let identities_named = (0..c.num_objects()).all(|i| c.morphism_name(c.identity(i)) == identity_name(c.object_name(i)));
    if identities_named {
        let arrows: Vec<(&str, &str, &str)> =
            generators.iter().map(|&f| (c.morphism_name(f), c.object_name(c.source(f)), c.object_name(c.target(f)))).collect();
        if FinCategory::from_quiver(&objects, &arrows).is_ok_and(|q| q == *c) {
            let arrows: Vec<String> = arrows.iter().map(|(a, s, t)| string_list(&[a, s, t])).collect();
            return format!("kind = \"quiver\"\nvertices = {}\narrows = [{}]\n", string_list(&objects), arrows.join(", "));
        }
        let relations: Vec<(&str, &str)> = generators.iter().map(|&f| (c.object_name(c.source(f)), c.object_name(c.target(f)))).collect();
        if FinCategory::from_poset(&objects, &relations).is_ok_and(|p| p == *c) {
            let relations: Vec<String> = relations.iter().map(|(s, t)| string_list(&[s, t])).collect();
            return format!("kind = \"poset\"\nelements = {}\nrelations = [{}]\n", string_list(&objects), relations.join(", "));
        }
    }
    let morphisms: Vec<String> = (0..c.num_morphisms())
        .map(|f| string_list(&[c.morphism_name(f), c.object_name(c.source(f)), c.object_name(c.target(f))]))
        .collect();
    let identities: Vec<String> =
        (0..c.num_objects()).map(|i| format!("{} = {}", quote(c.object_name(i)), quote(c.morphism_name(c.identity(i))))).collect();
    let composites: Vec<String> = c
        .composable_pairs()
        .into_iter()
        .filter(|&(g, f)| !c.is_identity(g) && !c.is_identity(f))
        .map(|(g, f)| string_list(&[c.morphism_name(g), c.morphism_name(f), c.morphism_name(c.comp(g, f))]))
        .collect();
    format!(
        "kind = \"table\"\nobjects = {}\nmorphisms = [{}]\nidentities = {{ {} }}\ncomposites = [{}]\n",
        string_list(&objects),
        morphisms.join(", "),
        identities.join(", "),
        composites.join(", ")
    )
}

fn algebra_body(a: &Arc<Algebra>) -> String {
    let f = a.field();
    let d = a.dim();
    if **a == *Algebra::ground(f) {
        return "kind = \"ground\"\n".into();
    }
    if **a == *Algebra::truncated_polynomial(f, d) {
        return format!("kind = \"truncated\"\ndegree = {d}\n");
    }
    if **a == *Algebra::cyclic_group_algebra(f, d) {
        return format!("kind = \"cyclic_group\"\norder = {d}\n");
    }
    if d == 3 && **a == *Algebra::upper_triangular(f) {
        return "kind = \"upper_triangular\"\n".into();
    }
    let left: Vec<Matrix> = (0..d).map(|b| a.left_multiplication(b).clone()).collect();
    let unit: Vec<String> = (0..d).map(|k| a.unit().get(k, 0).to_string()).collect();
    format!("kind = \"structure\"\nleft = {}\nunit = {}\n", matrices(&left), string_list(&unit))
}

fn representation_body(r: &Representation) -> String {
    let d = r.diagram();
    let c = d.index();
    let mut out = String::new();
    for i in 0..c.num_objects() {
        let m = r.module(i);
        if m.dim() == 0 {
            continue;
        }
        let alg = d.algebra(i);
        let body = if alg.dim() == 1 && *m == Module::vector_space(alg, m.dim()) {
            format!("{{ dim = {} }}", m.dim())
        } else {
            format!("{{ dim = {}, action = {} }}", m.dim(), matrices(m.action()))
        };
        out.push_str(&format!("modules.{} = {}\n", quote(c.object_name(i)), body));
    }
    for f in 0..c.num_morphisms() {
        if c.is_identity(f) {
            let i = c.source(f);
            let default = d.eta_component(i, r.tensor(f)).inverse();
            if default.as_ref() == Some(r.structural(f)) {
                continue;
            }
        }
        out.push_str(&format!("maps.{} = {}\n", quote(c.morphism_name(f)), matrix_text(r.structural(f))));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const A2: &str = r#"
[field]
name = "Fp:3"

[category A2]
kind = "quiver"
vertices = ["1", "2"]
arrows = [["a", "1", "2"]]

[algebra k]
kind = "ground"

[diagram D]
kind = "trivial"
category = "A2"
algebra = "k"

[representation M]
diagram = "D"
modules."1" = { dim = 1 }
modules."2" = { dim = 1 }
maps.a = [["1"]]
"#;

    #[test]
    fn minimal_workspace_parses() {
        let ws = Workspace::parse(A2, Field::Prime(2)).unwrap();
        assert_eq!(ws.field, Field::Prime(3));
        let m = ws.representation("M").unwrap();
        assert_eq!(m.dims(), vec![1, 1]);
        assert!(m.validate().passed());
    }

    #[test]
    fn headers_keep_line_numbers() {
        let text = "[field]\nname = \"Q\"\n\n[category C]\nkind = \"quiver\"\nvertices = [\"1\"\n";
        match Workspace::parse(text, Field::Rational) {
            Err(CliError::Parse { line, .. }) => assert!(line >= 6, "line {line}"),
            other => panic!("expected a parse error, got {other:?}"),
        }
        match Workspace::parse("[widget W]\n", Field::Rational) {
            Err(CliError::Parse { line: 1, .. }) => {}
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_references_are_reported() {
        let text = A2.replace("algebra = \"k\"", "algebra = \"K\"");
        match Workspace::parse(&text, Field::Prime(3)) {
            Err(CliError::UnresolvedReference { kind: "algebra", name }) => assert_eq!(name, "K"),
            other => panic!("expected an unresolved reference, got {other:?}"),
        }
    }

    #[test]
    fn serialization_is_idempotent() {
        let ws = Workspace::parse(A2, Field::Prime(3)).unwrap();
        let once = ws.to_text();
        let again = Workspace::parse(&once, Field::Prime(2)).unwrap();
        assert_eq!(again.to_text(), once);
        assert_eq!(again.representation("M").unwrap(), ws.representation("M").unwrap());
    }
}
