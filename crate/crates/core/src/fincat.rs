//! Finite categories, functors between them, comma categories, morphism
//! ideals and the order-theoretic classification of index categories.
//!
//! Objects and morphisms are addressed by dense indices into lists sorted by
//! their string ids, so every enumeration in the crate is deterministic.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::ValidationReport;

/// Index of an object in [`FinCategory::objects`].
pub type Obj = usize;
/// Index of a morphism in [`FinCategory::morphisms`].
pub type Mor = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MorphismData {
    pub id: String,
    pub source: Obj,
    pub target: Obj,
}

/// A finite category with a dense composition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<MorphismData>,
    identity: Vec<Mor>,
    /// `compose[g * n + f] = g ∘ f`, `None` when `t(f) != s(g)`.
    compose: Vec<Option<Mor>>,
    object_index: HashMap<String, Obj>,
    morphism_index: HashMap<String, Mor>,
}

/// Name of the identity of `x` produced by the quiver and poset builders.
pub fn identity_name(x: &str) -> String {
    format!("e_{x}")
}

impl FinCategory {
    /// Assembles a category from named data without checking the axioms.
    ///
    /// Fails only on structural problems: duplicate or unknown ids, identities
    /// with wrong endpoints, composites with wrong endpoints, and missing
    /// entries for composable pairs.
    pub fn from_parts(
        objects: &[String],
        morphisms: &[(String, String, String)],
        identities: &BTreeMap<String, String>,
        composites: &BTreeMap<(String, String), String>,
    ) -> Result<FinCategory> {
        let mut objs: Vec<String> = objects.to_vec();
        objs.sort();
        for w in objs.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateId(w[0].clone()));
            }
        }
        let object_index: HashMap<String, Obj> = objs.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let mut mors: Vec<(String, String, String)> = morphisms.to_vec();
        mors.sort();
        for w in mors.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateId(w[0].0.clone()));
            }
        }
        let obj = |s: &str| object_index.get(s).copied().ok_or_else(|| Error::UnknownObject(s.to_string()));
        let morphisms: Vec<MorphismData> = mors
            .iter()
            .map(|(id, s, t)| Ok(MorphismData { id: id.clone(), source: obj(s)?, target: obj(t)? }))
            .collect::<Result<_>>()?;
        let morphism_index: HashMap<String, Mor> =
            morphisms.iter().enumerate().map(|(k, m)| (m.id.clone(), k)).collect();
        let mor = |s: &str| morphism_index.get(s).copied().ok_or_else(|| Error::UnknownMorphism(s.to_string()));
        let mut identity = Vec::with_capacity(objs.len());
        for (i, o) in objs.iter().enumerate() {
            let e = identities.get(o).ok_or_else(|| Error::MissingIdentity(o.clone()))?;
            let e = mor(e)?;
            if morphisms[e].source != i || morphisms[e].target != i {
                return Err(Error::MissingIdentity(o.clone()));
            }
            identity.push(e);
        }
        let n = morphisms.len();
        let mut compose = vec![None; n * n];
        for ((g, f), gf) in composites {
            let (g, f, gf) = (mor(g)?, mor(f)?, mor(gf)?);
            if morphisms[f].target != morphisms[g].source {
                return Err(Error::NotComposable(morphisms[g].id.clone(), morphisms[f].id.clone()));
            }
            if morphisms[gf].source != morphisms[f].source || morphisms[gf].target != morphisms[g].target {
                return Err(Error::Invalid(format!(
                    "composite `{}` of ({}, {}) has the wrong endpoints",
                    morphisms[gf].id, morphisms[g].id, morphisms[f].id
                )));
            }
            compose[g * n + f] = Some(gf);
        }
        for g in 0..n {
            for f in 0..n {
                if morphisms[f].target == morphisms[g].source && compose[g * n + f].is_none() {
                    return Err(Error::IncompleteTable(morphisms[g].id.clone(), morphisms[f].id.clone()));
                }
            }
        }
        Ok(FinCategory { objects: objs, morphisms, identity, compose, object_index, morphism_index })
    }

    /// Assembles a category and rejects it unless all axioms hold.
    pub fn from_table(
        objects: &[String],
        morphisms: &[(String, String, String)],
        identities: &BTreeMap<String, String>,
        composites: &BTreeMap<(String, String), String>,
    ) -> Result<FinCategory> {
        let c = FinCategory::from_parts(objects, morphisms, identities, composites)?;
        c.ensure_valid()?;
        Ok(c)
    }

    fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        match report.first() {
            None => Ok(()),
            Some(v) if v.axiom == "associativity" => Err(Error::NonAssociativeTable(
                v.witness[0].clone(),
                v.witness[1].clone(),
                v.witness[2].clone(),
            )),
            Some(v) => Err(Error::MissingIdentity(v.witness[0].clone())),
        }
    }

    /// Free category on an acyclic quiver; morphisms are all paths.
    ///
    /// The identity at `x` is named `e_x`; a path `a` then `b` is named `b*a`.
    pub fn from_quiver(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<FinCategory> {
        let vset: BTreeSet<&str> = vertices.iter().copied().collect();
        for (_, s, t) in arrows {
            for v in [s, t] {
                if !vset.contains(v) {
                    return Err(Error::UnknownObject(v.to_string()));
                }
            }
            if s == t {
                return Err(Error::CyclicQuiver(s.to_string()));
            }
        }
        // Topological sort; a leftover vertex lies on a cycle.
        let mut indeg: BTreeMap<&str, usize> = vset.iter().map(|v| (*v, 0)).collect();
        for (_, _, t) in arrows {
            *indeg.get_mut(t).unwrap() += 1;
        }
        let mut queue: VecDeque<&str> = indeg.iter().filter(|(_, d)| **d == 0).map(|(v, _)| *v).collect();
        let mut order = Vec::new();
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for (_, s, t) in arrows {
                if *s == v {
                    let d = indeg.get_mut(t).unwrap();
                    *d -= 1;
                    if *d == 0 {
                        queue.push_back(t);
                    }
                }
            }
        }
        if order.len() < vset.len() {
            let stuck = indeg.iter().find(|(_, d)| **d > 0).map(|(v, _)| v.to_string()).unwrap();
            return Err(Error::CyclicQuiver(stuck));
        }
        // Paths as arrow sequences in composition order (first arrow first).
        let mut paths: Vec<(Vec<usize>, &str, &str)> = vset.iter().map(|v| (Vec::new(), *v, *v)).collect();
        let mut frontier: Vec<(Vec<usize>, &str, &str)> =
            arrows.iter().enumerate().map(|(k, (_, s, t))| (vec![k], *s, *t)).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (p, s, t) in &frontier {
                for (k, (_, s2, t2)) in arrows.iter().enumerate() {
                    if s2 == t {
                        let mut q = p.clone();
                        q.push(k);
                        next.push((q, *s, *t2));
                    }
                }
            }
            paths.append(&mut frontier);
            frontier = next;
        }
        let name = |p: &[usize], s: &str| -> String {
            if p.is_empty() {
                identity_name(s)
            } else {
                p.iter().rev().map(|k| arrows[*k].0).collect::<Vec<_>>().join("*")
            }
        };
        let by_seq: HashMap<Vec<usize>, String> = paths.iter().filter(|p| !p.0.is_empty()).map(|(p, s, _)| (p.clone(), name(p, s))).collect();
        let objects: Vec<String> = vset.iter().map(|v| v.to_string()).collect();
        let morphisms: Vec<(String, String, String)> =
            paths.iter().map(|(p, s, t)| (name(p, s), s.to_string(), t.to_string())).collect();
        let identities: BTreeMap<String, String> = vset.iter().map(|v| (v.to_string(), identity_name(v))).collect();
        let mut composites = BTreeMap::new();
        for (f, fs, ft) in &paths {
            for (g, gs, _) in &paths {
                if gs != ft {
                    continue;
                }
                let mut h = f.clone();
                h.extend_from_slice(g);
                let hn = if h.is_empty() { identity_name(fs) } else { by_seq[&h].clone() };
                composites.insert((name(g, gs), name(f, fs)), hn);
            }
        }
        FinCategory::from_table(&objects, &morphisms, &identities, &composites)
    }

    /// Category of a finite poset given by generating relations `a ≤ b`.
    ///
    /// The morphism `a → b` (for `a ≠ b`) is named `a<b`.
    pub fn from_poset(elements: &[&str], relations: &[(&str, &str)]) -> Result<FinCategory> {
        let els: Vec<&str> = elements.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let idx: HashMap<&str, usize> = els.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let n = els.len();
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            leq[i][i] = true;
        }
        for (a, b) in relations {
            let a = *idx.get(a).ok_or_else(|| Error::UnknownObject(a.to_string()))?;
            let b = *idx.get(b).ok_or_else(|| Error::UnknownObject(b.to_string()))?;
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::NotAPoset(els[i].to_string(), els[j].to_string()));
                }
            }
        }
        let name = |i: usize, j: usize| if i == j { identity_name(els[i]) } else { format!("{}<{}", els[i], els[j]) };
        let objects: Vec<String> = els.iter().map(|e| e.to_string()).collect();
        let mut morphisms = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if leq[i][j] {
                    morphisms.push((name(i, j), els[i].to_string(), els[j].to_string()));
                }
            }
        }
        let identities = els.iter().map(|e| (e.to_string(), identity_name(e))).collect();
        let mut composites = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if leq[i][j] && leq[j][k] {
                        composites.insert((name(j, k), name(i, j)), name(i, k));
                    }
                }
            }
        }
        FinCategory::from_table(&objects, &morphisms, &identities, &composites)
    }

    /// One-object category of a finite monoid; `products` lists `(g, f, g∘f)`.
    pub fn from_monoid(object: &str, elements: &[&str], unit: &str, products: &[(&str, &str, &str)]) -> Result<FinCategory> {
        let objects = vec![object.to_string()];
        let morphisms: Vec<(String, String, String)> =
            elements.iter().map(|e| (e.to_string(), object.to_string(), object.to_string())).collect();
        let identities = BTreeMap::from([(object.to_string(), unit.to_string())]);
        let composites = products.iter().map(|(g, f, h)| ((g.to_string(), f.to_string()), h.to_string())).collect();
        FinCategory::from_table(&objects, &morphisms, &identities, &composites)
    }

    /// Cyclic group of order `n` on one object `*`, elements `e, g, g2, ...`.
    pub fn cyclic_group(n: usize) -> FinCategory {
        let name = |k: usize| match k {
            0 => "e".to_string(),
            1 => "g".to_string(),
            k => format!("g{k}"),
        };
        let names: Vec<String> = (0..n).map(name).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let prods: Vec<(String, String, String)> =
            (0..n).flat_map(|a| (0..n).map(move |b| (name(a), name(b), name((a + b) % n)))).collect();
        let prefs: Vec<(&str, &str, &str)> = prods.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())).collect();
        FinCategory::from_monoid("*", &refs, "e", &prefs).expect("cyclic group table is valid")
    }

    /// The category with one object and only its identity.
    pub fn point(object: &str) -> FinCategory {
        FinCategory::from_monoid(object, &[&identity_name(object)], &identity_name(object), &[(
            &identity_name(object),
            &identity_name(object),
            &identity_name(object),
        )])
        .expect("point is a category")
    }

    /// Discrete category on the given objects.
    pub fn discrete(objects: &[&str]) -> Result<FinCategory> {
        FinCategory::from_quiver(objects, &[])
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[MorphismData] {
        &self.morphisms
    }

    pub fn object_name(&self, i: Obj) -> &str {
        &self.objects[i]
    }

    pub fn morphism_name(&self, f: Mor) -> &str {
        &self.morphisms[f].id
    }

    pub fn object(&self, id: &str) -> Result<Obj> {
        self.object_index.get(id).copied().ok_or_else(|| Error::UnknownObject(id.to_string()))
    }

    pub fn morphism(&self, id: &str) -> Result<Mor> {
        self.morphism_index.get(id).copied().ok_or_else(|| Error::UnknownMorphism(id.to_string()))
    }

    pub fn source(&self, f: Mor) -> Obj {
        self.morphisms[f].source
    }

    pub fn target(&self, f: Mor) -> Obj {
        self.morphisms[f].target
    }

    pub fn identity(&self, i: Obj) -> Mor {
        self.identity[i]
    }

    pub fn is_identity(&self, f: Mor) -> bool {
        self.identity[self.source(f)] == f
    }

    /// `g ∘ f`, or `None` when `t(f) != s(g)`.
    pub fn compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        self.compose[g * self.morphisms.len() + f]
    }

    /// `g ∘ f` for a pair known to be composable.
    pub fn comp(&self, g: Mor, f: Mor) -> Mor {
        self.compose(g, f).unwrap_or_else(|| panic!("`{}` and `{}` are not composable", self.morphism_name(g), self.morphism_name(f)))
    }

    /// Morphisms `i → j` in index order.
    pub fn hom(&self, i: Obj, j: Obj) -> Vec<Mor> {
        (0..self.morphisms.len()).filter(|&f| self.source(f) == i && self.target(f) == j).collect()
    }

    pub fn endomorphisms(&self, i: Obj) -> Vec<Mor> {
        self.hom(i, i)
    }

    /// Non-identity morphisms that are not composites of two non-identities.
    pub fn irreducibles(&self) -> Vec<Mor> {
        let n = self.morphisms.len();
        let mut reducible = vec![false; n];
        for (g, f) in self.composable_pairs() {
            if !self.is_identity(g) && !self.is_identity(f) {
                reducible[self.comp(g, f)] = true;
            }
        }
        (0..n).filter(|&f| !self.is_identity(f) && !reducible[f]).collect()
    }

    /// All pairs `(g, f)` with `t(f) = s(g)`.
    pub fn composable_pairs(&self) -> Vec<(Mor, Mor)> {
        let n = self.morphisms.len();
        (0..n).flat_map(|g| (0..n).map(move |f| (g, f))).filter(|&(g, f)| self.compose(g, f).is_some()).collect()
    }

    /// Checks associativity, identity laws and endpoint compatibility exhaustively.
    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new("category");
        let n = self.morphisms.len();
        for (i, &e) in self.identity.iter().enumerate() {
            for f in 0..n {
                if self.target(f) == i {
                    let ok = self.compose(e, f) == Some(f);
                    r.check(ok, "left identity", &[self.object_name(i), self.morphism_name(f)], || {
                        format!("{} ∘ {} != {}", self.morphism_name(e), self.morphism_name(f), self.morphism_name(f))
                    });
                }
                if self.source(f) == i {
                    let ok = self.compose(f, e) == Some(f);
                    r.check(ok, "right identity", &[self.object_name(i), self.morphism_name(f)], || {
                        format!("{} ∘ {} != {}", self.morphism_name(f), self.morphism_name(e), self.morphism_name(f))
                    });
                }
            }
        }
        for (g, f) in self.composable_pairs() {
            let gf = self.comp(g, f);
            let ok = self.source(gf) == self.source(f) && self.target(gf) == self.target(g);
            r.check(ok, "endpoints", &[self.morphism_name(g), self.morphism_name(f)], || "composite has wrong endpoints".into());
        }
        for h in 0..n {
            for g in 0..n {
                let Some(hg) = self.compose(h, g) else { continue };
                for f in 0..n {
                    let Some(gf) = self.compose(g, f) else { continue };
                    let (a, b) = (self.compose(h, gf), self.compose(hg, f));
                    r.check(a == b, "associativity", &[self.morphism_name(h), self.morphism_name(g), self.morphism_name(f)], || {
                        "h∘(g∘f) != (h∘g)∘f".into()
                    });
                }
            }
        }
        r
    }

    /// Overwrites one table entry; used to build mutated fixtures.
    pub fn with_composite(&self, g: Mor, f: Mor, gf: Mor) -> FinCategory {
        let mut c = self.clone();
        let n = c.morphisms.len();
        c.compose[g * n + f] = Some(gf);
        c
    }

    /// Same ids, sources and targets swapped, composition reversed.
    pub fn opposite(&self) -> FinCategory {
        let n = self.morphisms.len();
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| MorphismData { id: m.id.clone(), source: m.target, target: m.source })
            .collect();
        let mut compose = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                compose[g * n + f] = self.compose(f, g);
            }
        }
        FinCategory {
            objects: self.objects.clone(),
            morphisms,
            identity: self.identity.clone(),
            compose,
            object_index: self.object_index.clone(),
            morphism_index: self.morphism_index.clone(),
        }
    }

    /// Subcategory on a set of morphisms closed under composition and identities.
    ///
    /// Objects are those whose identity is kept. The returned functor is the
    /// inclusion.
    pub fn subcategory(&self, keep: &[bool]) -> Result<(FinCategory, CatFunctor)> {
        let objects: Vec<String> =
            (0..self.num_objects()).filter(|&i| keep[self.identity(i)]).map(|i| self.objects[i].clone()).collect();
        let kept_obj: BTreeSet<Obj> = (0..self.num_objects()).filter(|&i| keep[self.identity(i)]).collect();
        let mut morphisms = Vec::new();
        for f in (0..self.num_morphisms()).filter(|&f| keep[f]) {
            if !kept_obj.contains(&self.source(f)) || !kept_obj.contains(&self.target(f)) {
                return Err(Error::Invalid(format!("morphism `{}` kept without its endpoints", self.morphism_name(f))));
            }
            morphisms.push((self.morphism_name(f).to_string(), self.objects[self.source(f)].clone(), self.objects[self.target(f)].clone()));
        }
        let identities = kept_obj.iter().map(|&i| (self.objects[i].clone(), self.morphism_name(self.identity(i)).to_string())).collect();
        let mut composites = BTreeMap::new();
        for (g, f) in self.composable_pairs() {
            if keep[g] && keep[f] {
                let gf = self.comp(g, f);
                if !keep[gf] {
                    return Err(Error::Invalid(format!(
                        "morphism set not closed: {} ∘ {}",
                        self.morphism_name(g),
                        self.morphism_name(f)
                    )));
                }
                composites.insert((self.morphism_name(g).to_string(), self.morphism_name(f).to_string()), self.morphism_name(gf).to_string());
            }
        }
        let sub = FinCategory::from_parts(&objects, &morphisms, &identities, &composites)?;
        let inclusion = CatFunctor::by_names(&sub, self)?;
        Ok((sub, inclusion))
    }

    /// Full subcategory on the given objects, with its inclusion.
    pub fn full_subcategory(&self, objects: &[Obj]) -> (FinCategory, CatFunctor) {
        let set: BTreeSet<Obj> = objects.iter().copied().collect();
        let keep: Vec<bool> =
            (0..self.num_morphisms()).map(|f| set.contains(&self.source(f)) && set.contains(&self.target(f))).collect();
        self.subcategory(&keep).expect("full subcategories are closed")
    }

    /// The inclusion `ι_i` of the one-morphism category on `i`.
    pub fn object_inclusion(&self, i: Obj) -> CatFunctor {
        let mut keep = vec![false; self.num_morphisms()];
        keep[self.identity(i)] = true;
        self.subcategory(&keep).expect("identity is closed").1
    }

    /// The identity functor.
    pub fn identity_functor(&self) -> CatFunctor {
        CatFunctor {
            domain: self.clone(),
            codomain: self.clone(),
            object_map: (0..self.num_objects()).collect(),
            morphism_map: (0..self.num_morphisms()).collect(),
        }
    }

    /// Reachability preorder `i ≼ j` iff `Hom(i, j)` is nonempty.
    pub fn preorder(&self) -> Preorder {
        let n = self.num_objects();
        let mut leq = vec![vec![false; n]; n];
        for m in &self.morphisms {
            leq[m.source][m.target] = true;
        }
        let mut witness = None;
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] && witness.is_none() {
                    witness = Some((self.objects[i].clone(), self.objects[j].clone()));
                }
            }
        }
        Preorder { leq, antisymmetric_witness: witness }
    }

    pub fn is_partially_ordered(&self) -> bool {
        self.preorder().is_partial_order()
    }

    fn require_partial_order(&self) -> Result<Preorder> {
        let p = self.preorder();
        match &p.antisymmetric_witness {
            Some((a, b)) => Err(Error::NotPartiallyOrdered(a.clone(), b.clone())),
            None => Ok(p),
        }
    }

    /// Levels `V_0 = ∅ ⊆ V_1 ⊆ ...`, each adding the minimal remaining objects.
    pub fn stratify(&self) -> Result<Stratification> {
        let p = self.require_partial_order()?;
        let n = self.num_objects();
        let mut levels: Vec<BTreeSet<Obj>> = vec![BTreeSet::new()];
        loop {
            let cur = levels.last().unwrap().clone();
            let minimal: Vec<Obj> = (0..n)
                .filter(|i| !cur.contains(i))
                .filter(|&i| (0..n).all(|j| j == i || cur.contains(&j) || !p.leq[j][i]))
                .collect();
            if minimal.is_empty() {
                break;
            }
            let mut next = cur;
            next.extend(minimal);
            levels.push(next);
        }
        let exhausted = levels.last().unwrap().len() == n;
        let names = levels.iter().map(|l| l.iter().map(|&i| self.objects[i].clone()).collect()).collect();
        Ok(Stratification { levels: names, exhausted })
    }

    pub fn is_locally_trivial(&self) -> bool {
        (0..self.num_objects()).all(|i| self.endomorphisms(i).len() == 1)
    }

    /// Partial order, rootedness, local triviality, directness and inverseness.
    pub fn rootedness(&self) -> Rootedness {
        let partially_ordered = self.is_partially_ordered();
        let left = self.stratify().ok().map(|s| s.exhausted);
        let right = self.opposite().stratify().ok().map(|s| s.exhausted);
        let locally_trivial = self.is_locally_trivial();
        Rootedness {
            partially_ordered,
            left_rooted: left,
            right_rooted: right,
            locally_trivial,
            direct: locally_trivial && left == Some(true),
            inverse: locally_trivial && right == Some(true),
        }
    }

    /// Exhaustive two-sided and prime checks for a morphism set.
    pub fn classify_ideal(&self, carrier: &[Mor]) -> Result<MorphismIdeal> {
        if carrier.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(self.ideal_unchecked(carrier))
    }

    fn ideal_unchecked(&self, carrier: &[Mor]) -> MorphismIdeal {
        let mut member = vec![false; self.num_morphisms()];
        for &f in carrier {
            member[f] = true;
        }
        let pairs = self.composable_pairs();
        let two_sided = pairs.iter().all(|&(g, f)| !(member[g] || member[f]) || member[self.comp(g, f)]);
        let complement_closed = pairs.iter().all(|&(g, f)| member[g] || member[f] || !member[self.comp(g, f)]);
        MorphismIdeal {
            member,
            is_two_sided: two_sided,
            is_prime: two_sided && complement_closed,
            is_empty: carrier.is_empty(),
        }
    }

    /// `P_i = Mor \ End(i)` for a partially ordered category.
    ///
    /// When every morphism is an endomorphism of `i` the carrier is empty; the
    /// value is then flagged by [`MorphismIdeal::is_empty`] and behaves as the
    /// degenerate prime with `I/P = I`.
    pub fn endo_prime_ideal(&self, i: Obj) -> Result<MorphismIdeal> {
        self.require_partial_order()?;
        let carrier: Vec<Mor> = (0..self.num_morphisms()).filter(|&f| !(self.source(f) == i && self.target(f) == i)).collect();
        Ok(self.ideal_unchecked(&carrier))
    }

    /// `I/P` and its inclusion `ι_P` for a prime ideal `P`.
    pub fn quotient_subcategory(&self, p: &MorphismIdeal) -> Result<(FinCategory, CatFunctor)> {
        if !p.is_prime {
            return Err(Error::NotPrime);
        }
        let keep: Vec<bool> = p.member.iter().map(|m| !m).collect();
        self.subcategory(&keep)
    }

    /// Every prime ideal, by exhaustive search over morphism subsets.
    pub fn prime_ideals(&self, max_morphisms: usize) -> Result<Vec<MorphismIdeal>> {
        let n = self.num_morphisms();
        if n > max_morphisms {
            return Err(Error::TooLarge(format!("{n} morphisms exceed the enumeration cap of {max_morphisms}")));
        }
        let mut out = Vec::new();
        for mask in 1u64..(1u64 << n) {
            let carrier: Vec<Mor> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
            let ideal = self.ideal_unchecked(&carrier);
            if ideal.is_prime {
                out.push(ideal);
            }
        }
        Ok(out)
    }

    /// Comma category `G/i`: objects `(j, θ: G(j) → i)`, morphisms `β` with `θ'∘G(β) = θ`.
    pub fn comma(g: &CatFunctor, i: Obj) -> Result<LabelledCategory> {
        let c = &g.codomain;
        if i >= c.num_objects() {
            return Err(Error::UnknownObject(i.to_string()));
        }
        let j_cat = &g.domain;
        let mut objs = Vec::new();
        for j in 0..j_cat.num_objects() {
            for th in c.hom(g.object_map[j], i) {
                objs.push((j, th));
            }
        }
        let mut mors = Vec::new();
        for (a, &(j, th)) in objs.iter().enumerate() {
            for (b, &(j2, th2)) in objs.iter().enumerate() {
                for beta in j_cat.hom(j, j2) {
                    if c.comp(th2, g.morphism_map[beta]) == th {
                        mors.push((a, b, beta));
                    }
                }
            }
        }
        Ok(LabelledCategory::assemble(j_cat, objs, mors, LabelKind::Over))
    }

    /// Under category `i/G`: objects `(j, θ: i → G(j))`, morphisms `β` with `G(β)∘θ = θ'`.
    pub fn under(g: &CatFunctor, i: Obj) -> Result<LabelledCategory> {
        let c = &g.codomain;
        if i >= c.num_objects() {
            return Err(Error::UnknownObject(i.to_string()));
        }
        let j_cat = &g.domain;
        let mut objs = Vec::new();
        for j in 0..j_cat.num_objects() {
            for th in c.hom(i, g.object_map[j]) {
                objs.push((j, th));
            }
        }
        let mut mors = Vec::new();
        for (a, &(j, th)) in objs.iter().enumerate() {
            for (b, &(j2, th2)) in objs.iter().enumerate() {
                for beta in j_cat.hom(j, j2) {
                    if c.comp(g.morphism_map[beta], th) == th2 {
                        mors.push((a, b, beta));
                    }
                }
            }
        }
        Ok(LabelledCategory::assemble(j_cat, objs, mors, LabelKind::Under))
    }

    /// Index category of the colimit defining `φ_i`: objects `θ ∈ P` with
    /// `t(θ) = i`.
    ///
    /// Under [`Convention::Comma`] a morphism `θ → θ'` is any `γ` with
    /// `θ'∘γ = θ`; under [`Convention::Discrete`] only identities.
    pub fn phi_index(&self, p: &MorphismIdeal, i: Obj, convention: Convention) -> Result<LabelledCategory> {
        if !p.is_prime {
            return Err(Error::NotPrime);
        }
        if i >= self.num_objects() {
            return Err(Error::UnknownObject(i.to_string()));
        }
        let objs: Vec<(Obj, Mor)> =
            (0..self.num_morphisms()).filter(|&th| p.member[th] && self.target(th) == i).map(|th| (self.source(th), th)).collect();
        let mut mors = Vec::new();
        for (a, &(s, th)) in objs.iter().enumerate() {
            for (b, &(s2, th2)) in objs.iter().enumerate() {
                for gamma in self.hom(s, s2) {
                    let ok = match convention {
                        Convention::Comma => self.comp(th2, gamma) == th,
                        Convention::Discrete => a == b && self.is_identity(gamma),
                    };
                    if ok {
                        mors.push((a, b, gamma));
                    }
                }
            }
        }
        Ok(LabelledCategory::assemble(self, objs, mors, LabelKind::Over))
    }

    /// Index category of the limit defining `ψ_i`: objects `θ ∈ P` with
    /// `s(θ) = i`, morphisms `γ: θ → θ'` with `γ∘θ = θ'`.
    pub fn psi_index(&self, p: &MorphismIdeal, i: Obj, convention: Convention) -> Result<LabelledCategory> {
        if !p.is_prime {
            return Err(Error::NotPrime);
        }
        if i >= self.num_objects() {
            return Err(Error::UnknownObject(i.to_string()));
        }
        let objs: Vec<(Obj, Mor)> =
            (0..self.num_morphisms()).filter(|&th| p.member[th] && self.source(th) == i).map(|th| (self.target(th), th)).collect();
        let mut mors = Vec::new();
        for (a, &(t, th)) in objs.iter().enumerate() {
            for (b, &(t2, th2)) in objs.iter().enumerate() {
                for gamma in self.hom(t, t2) {
                    let ok = match convention {
                        Convention::Comma => self.comp(gamma, th) == th2,
                        Convention::Discrete => a == b && self.is_identity(gamma),
                    };
                    if ok {
                        mors.push((a, b, gamma));
                    }
                }
            }
        }
        Ok(LabelledCategory::assemble(self, objs, mors, LabelKind::Under))
    }
}

/// Which index category is used for the colimit (limit) defining `φ_i` (`ψ_i`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    #[default]
    Comma,
    Discrete,
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Convention> {
        match s {
            "comma" => Ok(Convention::Comma),
            "discrete" => Ok(Convention::Discrete),
            _ => Err(Error::Invalid(format!("unknown convention `{s}`"))),
        }
    }
}

/// `i ≼ j` iff `Hom(i, j)` is nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preorder {
    pub leq: Vec<Vec<bool>>,
    /// A pair of distinct mutually reachable objects, if any.
    pub antisymmetric_witness: Option<(String, String)>,
}

impl Preorder {
    pub fn is_partial_order(&self) -> bool {
        self.antisymmetric_witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stratification {
    /// Object ids of `V_0, V_1, ...`, each sorted.
    pub levels: Vec<Vec<String>>,
    pub exhausted: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Rootedness {
    pub partially_ordered: bool,
    /// `None` when the category is not partially ordered.
    pub left_rooted: Option<bool>,
    pub right_rooted: Option<bool>,
    pub locally_trivial: bool,
    pub direct: bool,
    pub inverse: bool,
}

/// A set of morphisms with its two-sided and prime flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismIdeal {
    member: Vec<bool>,
    pub is_two_sided: bool,
    pub is_prime: bool,
    /// Set for the empty carrier produced by [`FinCategory::endo_prime_ideal`].
    pub is_empty: bool,
}

impl MorphismIdeal {
    pub fn contains(&self, f: Mor) -> bool {
        self.member[f]
    }

    pub fn carrier(&self) -> Vec<Mor> {
        (0..self.member.len()).filter(|&f| self.member[f]).collect()
    }

    pub fn carrier_names(&self, c: &FinCategory) -> Vec<String> {
        self.carrier().into_iter().map(|f| c.morphism_name(f).to_string()).collect()
    }

    /// Recomputes both flags from the definition.
    pub fn flags_consistent(&self, c: &FinCategory) -> bool {
        let again = c.ideal_unchecked(&self.carrier());
        again.is_two_sided == self.is_two_sided && again.is_prime == self.is_prime
    }
}

/// A functor between finite categories given by index maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatFunctor {
    pub domain: FinCategory,
    pub codomain: FinCategory,
    pub object_map: Vec<Obj>,
    pub morphism_map: Vec<Mor>,
}

impl CatFunctor {
    /// Functor sending each object and morphism to the one with the same id.
    pub fn by_names(domain: &FinCategory, codomain: &FinCategory) -> Result<CatFunctor> {
        let object_map = domain.objects.iter().map(|o| codomain.object(o)).collect::<Result<_>>()?;
        let morphism_map = domain.morphisms.iter().map(|m| codomain.morphism(&m.id)).collect::<Result<_>>()?;
        Ok(CatFunctor { domain: domain.clone(), codomain: codomain.clone(), object_map, morphism_map })
    }

    /// Functor from explicit id maps.
    pub fn from_maps(
        domain: &FinCategory,
        codomain: &FinCategory,
        objects: &BTreeMap<String, String>,
        morphisms: &BTreeMap<String, String>,
    ) -> Result<CatFunctor> {
        let object_map = domain
            .objects
            .iter()
            .map(|o| codomain.object(objects.get(o).ok_or_else(|| Error::UnknownObject(o.clone()))?))
            .collect::<Result<_>>()?;
        let morphism_map = domain
            .morphisms
            .iter()
            .map(|m| codomain.morphism(morphisms.get(&m.id).ok_or_else(|| Error::UnknownMorphism(m.id.clone()))?))
            .collect::<Result<_>>()?;
        Ok(CatFunctor { domain: domain.clone(), codomain: codomain.clone(), object_map, morphism_map })
    }

    pub fn apply_object(&self, j: Obj) -> Obj {
        self.object_map[j]
    }

    pub fn apply_morphism(&self, f: Mor) -> Mor {
        self.morphism_map[f]
    }

    /// Checks preservation of sources, targets, identities and composition.
    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new("functor");
        let (d, c) = (&self.domain, &self.codomain);
        for f in 0..d.num_morphisms() {
            let gf = self.morphism_map[f];
            let ok = c.source(gf) == self.object_map[d.source(f)] && c.target(gf) == self.object_map[d.target(f)];
            r.check(ok, "endpoints", &[d.morphism_name(f)], || "image has the wrong source or target".into());
        }
        for i in 0..d.num_objects() {
            let ok = self.morphism_map[d.identity(i)] == c.identity(self.object_map[i]);
            r.check(ok, "identity", &[d.object_name(i)], || "identity not preserved".into());
        }
        for (g, f) in d.composable_pairs() {
            let lhs = self.morphism_map[d.comp(g, f)];
            let rhs = c.compose(self.morphism_map[g], self.morphism_map[f]);
            r.check(Some(lhs) == rhs, "composition", &[d.morphism_name(g), d.morphism_name(f)], || {
                "F(g∘f) != F(g)∘F(f)".into()
            });
        }
        r
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &CatFunctor) -> CatFunctor {
        assert_eq!(first.codomain, self.domain, "functors are not composable");
        CatFunctor {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            object_map: first.object_map.iter().map(|&j| self.object_map[j]).collect(),
            morphism_map: first.morphism_map.iter().map(|&f| self.morphism_map[f]).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelKind {
    /// Objects `(j, θ)` with `θ` ending at the apex.
    Over,
    /// Objects `(j, θ)` with `θ` starting at the apex.
    Under,
}

/// A finite category whose objects are labelled `(j, θ)` and whose morphisms
/// are labelled by morphisms `β` of an ambient category.
///
/// Comma categories and the index categories of `φ`/`ψ` share this shape.
#[derive(Clone, Debug)]
pub struct LabelledCategory {
    pub category: FinCategory,
    /// `(j, θ)` per object index of `category`.
    pub object_label: Vec<(Obj, Mor)>,
    /// `β` per morphism index of `category`.
    pub morphism_label: Vec<Mor>,
    pub kind: LabelKind,
}

impl LabelledCategory {
    fn assemble(ambient: &FinCategory, objs: Vec<(Obj, Mor)>, mors: Vec<(usize, usize, Mor)>, kind: LabelKind) -> LabelledCategory {
        // Zero-padded position keys keep the sorted order equal to the enumeration order.
        let w = objs.len().max(mors.len()).max(1).to_string().len();
        let oname = |a: usize| format!("o{a:0w$}");
        let mname = |k: usize| format!("m{k:0w$}");
        let objects: Vec<String> = (0..objs.len()).map(oname).collect();
        let morphisms: Vec<(String, String, String)> =
            mors.iter().enumerate().map(|(k, &(a, b, _))| (mname(k), oname(a), oname(b))).collect();
        let mut identities = BTreeMap::new();
        let lookup: HashMap<(usize, usize, Mor), usize> = mors.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        for (a, &(j, _)) in objs.iter().enumerate() {
            let e = lookup[&(a, a, ambient.identity(j))];
            identities.insert(oname(a), mname(e));
        }
        let mut composites = BTreeMap::new();
        for (k1, &(a, b, f)) in mors.iter().enumerate() {
            for (k2, &(b2, c, g)) in mors.iter().enumerate() {
                if b == b2 {
                    let gf = lookup[&(a, c, ambient.comp(g, f))];
                    composites.insert((mname(k2), mname(k1)), mname(gf));
                }
            }
        }
        let category = FinCategory::from_parts(&objects, &morphisms, &identities, &composites)
            .expect("labelled category is closed under composition");
        let morphism_label = mors.iter().map(|m| m.2).collect();
        LabelledCategory { category, object_label: objs, morphism_label, kind }
    }

    pub fn is_discrete(&self) -> bool {
        self.category.num_morphisms() == self.category.num_objects()
    }

    /// Index of a terminal object, if one exists.
    pub fn terminal_object(&self) -> Option<Obj> {
        let c = &self.category;
        (0..c.num_objects()).find(|&t| (0..c.num_objects()).all(|x| c.hom(x, t).len() == 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> FinCategory {
        FinCategory::from_quiver(&["1", "2"], &[("a", "1", "2")]).unwrap()
    }

    #[test]
    fn quiver_with_one_arrow() {
        let c = a2();
        assert_eq!(c.num_morphisms(), 3);
        let names: Vec<&str> = c.morphisms().iter().map(|m| m.id.as_str()).collect();
        assert_eq!(names, ["a", "e_1", "e_2"]);
        assert!(c.validate().passed());
    }

    #[test]
    fn quiver_loops_and_cycles_rejected() {
        assert_eq!(FinCategory::from_quiver(&["v"], &[("l", "v", "v")]), Err(Error::CyclicQuiver("v".into())));
        assert!(matches!(
            FinCategory::from_quiver(&["x", "y"], &[("a", "x", "y"), ("b", "y", "x")]),
            Err(Error::CyclicQuiver(_))
        ));
    }

    #[test]
    fn a3_paths() {
        let c = FinCategory::from_quiver(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap();
        assert_eq!(c.num_morphisms(), 6);
        let ba = c.morphism("b*a").unwrap();
        assert_eq!(c.comp(c.morphism("b").unwrap(), c.morphism("a").unwrap()), ba);
    }

    #[test]
    fn monoid_c2() {
        let c = FinCategory::from_monoid("*", &["e", "g"], "e", &[("e", "e", "e"), ("e", "g", "g"), ("g", "e", "g"), ("g", "g", "e")])
            .unwrap();
        assert_eq!(c.num_objects(), 1);
        assert_eq!(c.num_morphisms(), 2);
        assert_eq!(c, FinCategory::cyclic_group(2));
    }

    #[test]
    fn non_associative_table_rejected() {
        // x∘x = y, y∘x = e, x∘y = x breaks associativity at (x, x, x).
        let r = FinCategory::from_monoid(
            "*",
            &["e", "x", "y"],
            "e",
            &[
                ("e", "e", "e"),
                ("e", "x", "x"),
                ("e", "y", "y"),
                ("x", "e", "x"),
                ("y", "e", "y"),
                ("x", "x", "y"),
                ("x", "y", "x"),
                ("y", "x", "e"),
                ("y", "y", "y"),
            ],
        );
        assert!(matches!(r, Err(Error::NonAssociativeTable(..))));
    }

    #[test]
    fn mutated_table_reports_witness() {
        let c = FinCategory::cyclic_group(3);
        let (e, g) = (c.morphism("e").unwrap(), c.morphism("g").unwrap());
        let bad = c.with_composite(g, g, e);
        let r = bad.validate();
        assert!(!r.passed());
        assert_eq!(r.first().unwrap().axiom, "associativity");
        assert_eq!(r.first().unwrap().witness.len(), 3);
    }

    #[test]
    fn poset_chain_and_cycle() {
        let c = FinCategory::from_poset(&["1", "2", "3"], &[("1", "2"), ("2", "3")]).unwrap();
        assert_eq!(c.num_morphisms(), 6);
        assert!(c.validate().passed());
        assert!(matches!(FinCategory::from_poset(&["1", "2"], &[("1", "2"), ("2", "1")]), Err(Error::NotAPoset(..))));
    }

    #[test]
    fn opposite_is_involution() {
        let c = a2();
        let op = c.opposite();
        let a = op.morphism("a").unwrap();
        assert_eq!(op.object_name(op.source(a)), "2");
        assert_eq!(op.opposite(), c);
        assert!(op.validate().passed());
    }

    #[test]
    fn ideal_classification() {
        let c = a2();
        let a = c.morphism("a").unwrap();
        let p = c.classify_ideal(&[a]).unwrap();
        assert!(p.is_two_sided && p.is_prime);
        let all: Vec<Mor> = (0..3).collect();
        assert!(c.classify_ideal(&all).unwrap().is_prime);
        assert_eq!(c.classify_ideal(&[]), Err(Error::EmptySet));
        let c2 = FinCategory::cyclic_group(2);
        let g = c2.morphism("g").unwrap();
        assert!(!c2.classify_ideal(&[g]).unwrap().is_two_sided);
    }

    #[test]
    fn endo_prime_and_quotient() {
        let c = a2();
        let p = c.endo_prime_ideal(c.object("2").unwrap()).unwrap();
        assert_eq!(p.carrier_names(&c), ["a", "e_1"]);
        assert!(p.is_prime);
        let (q, inc) = c.quotient_subcategory(&p).unwrap();
        assert_eq!(q.objects(), ["2"]);
        assert!(inc.validate().passed());
        let c2 = FinCategory::cyclic_group(2);
        let p = c2.endo_prime_ideal(0).unwrap();
        assert!(p.is_empty && p.is_prime);
        let (q, _) = c2.quotient_subcategory(&p).unwrap();
        assert_eq!(q, c2);
    }

    #[test]
    fn stratify_examples() {
        let chain = FinCategory::from_quiver(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap();
        let s = chain.stratify().unwrap();
        assert_eq!(s.levels, vec![vec![], vec!["1".to_string()], vec!["1".into(), "2".into()], vec!["1".into(), "2".into(), "3".into()]]);
        let square = FinCategory::from_poset(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]).unwrap();
        let s = square.stratify().unwrap();
        assert_eq!(s.levels[1], ["a"]);
        assert_eq!(s.levels[2], ["a", "b", "c"]);
        assert_eq!(s.levels[3], ["a", "b", "c", "d"]);
    }

    #[test]
    fn comma_of_object_inclusion_is_discrete() {
        let c = FinCategory::from_quiver(&["1", "2", "3"], &[("a", "1", "2"), ("b", "1", "2"), ("c", "2", "3")]).unwrap();
        let i = c.object("1").unwrap();
        let j = c.object("3").unwrap();
        let comma = FinCategory::comma(&c.object_inclusion(i), j).unwrap();
        assert!(comma.is_discrete());
        assert_eq!(comma.category.num_objects(), c.hom(i, j).len());
    }

    #[test]
    fn phi_index_on_a2() {
        let c = a2();
        let two = c.object("2").unwrap();
        let p = c.endo_prime_ideal(two).unwrap();
        let idx = c.phi_index(&p, two, Convention::Comma).unwrap();
        assert_eq!(idx.category.num_objects(), 1);
        assert_eq!(idx.category.num_morphisms(), 1);
        assert_eq!(idx.object_label[0].1, c.morphism("a").unwrap());
        let one = c.object("1").unwrap();
        let p1 = c.endo_prime_ideal(one).unwrap();
        assert_eq!(c.phi_index(&p1, one, Convention::Comma).unwrap().category.num_objects(), 0);
    }
}
