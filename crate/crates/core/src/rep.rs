//! Representations of a diagram and their morphisms.
//!
//! A representation stores a module `M_i` over `A_i` per object and a
//! structural map `M_α: D_α(M_{s(α)}) → M_{t(α)}` for every morphism,
//! identities included.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::diagram::{DiagramSpec, RingDiagram};
use crate::error::{Error, Result};
use crate::fincat::{CatFunctor, Mor, Obj};
use crate::linalg::{Field, Matrix, Scalar};
use crate::modcat::{HomModule, LinearSystem, Module, ModuleMorphism, Tensor, Term};
use crate::report::ValidationReport;

#[derive(Clone, Debug)]
pub struct Representation {
    diagram: Arc<DiagramSpec>,
    modules: Vec<Module>,
    tensors: Vec<Tensor>,
    structural: Vec<Matrix>,
}

impl Representation {
    /// Assembles a representation from all structural maps; checks shapes only.
    pub fn from_parts(diagram: &Arc<DiagramSpec>, modules: Vec<Module>, structural: Vec<Matrix>) -> Result<Representation> {
        let c = diagram.index();
        if modules.len() != c.num_objects() || structural.len() != c.num_morphisms() {
            return Err(Error::ShapeMismatch("representation does not cover the index category".into()));
        }
        let tensors = tensors_of(diagram, &modules)?;
        for f in 0..c.num_morphisms() {
            let expected = (modules[c.target(f)].dim(), tensors[f].module.dim());
            if structural[f].shape() != expected {
                return Err(Error::DimensionMismatch(format!(
                    "structural map at `{}` is {:?}, expected {:?}",
                    c.morphism_name(f),
                    structural[f].shape(),
                    expected
                )));
            }
        }
        Ok(Representation { diagram: diagram.clone(), modules, tensors, structural })
    }

    /// Extends structural maps given on some morphisms to all of them.
    ///
    /// Identities are set to `η^{-1}`; a composite `βα` with both factors
    /// known gets `M_β D_β(M_α) τ^{-1}`. Every composite is re-checked.
    pub fn build(diagram: &Arc<DiagramSpec>, modules: Vec<Module>, given: &BTreeMap<Mor, Matrix>) -> Result<Representation> {
        let c = diagram.index();
        if modules.len() != c.num_objects() {
            return Err(Error::ShapeMismatch("one module per object is needed".into()));
        }
        let tensors = tensors_of(diagram, &modules)?;
        let mut known: Vec<Option<Matrix>> = vec![None; c.num_morphisms()];
        for (&f, m) in given {
            if f >= c.num_morphisms() {
                return Err(Error::UnknownMorphism(f.to_string()));
            }
            known[f] = Some(m.clone());
        }
        for i in 0..c.num_objects() {
            let e = c.identity(i);
            if known[e].is_none() {
                let eta = diagram.eta_component(i, &tensors[e]);
                known[e] = Some(eta.inverse().ok_or_else(|| Error::Invalid("unit witness is not invertible".into()))?);
            }
        }
        let pairs = c.composable_pairs();
        loop {
            let mut changed = false;
            for &(g, f) in &pairs {
                let gf = c.comp(g, f);
                if known[gf].is_some() || c.is_identity(g) || c.is_identity(f) {
                    continue;
                }
                if let (Some(mg), Some(mf)) = (&known[g], &known[f]) {
                    let (tau, rhs) = composition_sides(diagram, &tensors, mg, mf, g, f);
                    let inv = tau.inverse().ok_or_else(|| Error::Invalid("coherence witness is not invertible".into()))?;
                    known[gf] = Some(rhs.mul(&inv));
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if let Some(f) = known.iter().position(|k| k.is_none()) {
            return Err(Error::MissingGenerator(c.morphism_name(f).to_string()));
        }
        let structural = known.into_iter().map(|k| k.expect("filled")).collect();
        let rep = Representation::from_parts(diagram, modules, structural)?;
        let report = rep.validate();
        if let Some(v) = report.first() {
            return Err(match v.axiom.as_str() {
                "composition" => Error::InconsistentRelations(v.witness.join(", ")),
                _ => Error::Invalid(format!("{}: {}", v.axiom, v.detail)),
            });
        }
        Ok(rep)
    }

    pub fn zero(diagram: &Arc<DiagramSpec>) -> Representation {
        let c = diagram.index();
        let modules: Vec<Module> = (0..c.num_objects()).map(|i| Module::zero(diagram.algebra(i))).collect();
        let structural = (0..c.num_morphisms()).map(|_| Matrix::zeros(diagram.field(), 0, 0)).collect();
        Representation::from_parts(diagram, modules, structural).expect("zero representation")
    }

    pub fn diagram(&self) -> &Arc<DiagramSpec> {
        &self.diagram
    }

    pub fn field(&self) -> Field {
        self.diagram.field()
    }

    pub fn module(&self, i: Obj) -> &Module {
        &self.modules[i]
    }

    pub fn modules(&self) -> &[Module] {
        &self.modules
    }

    /// `D_α(M_{s(α)})`.
    pub fn tensor(&self, f: Mor) -> &Tensor {
        &self.tensors[f]
    }

    pub fn structural(&self, f: Mor) -> &Matrix {
        &self.structural[f]
    }

    pub fn structural_maps(&self) -> &[Matrix] {
        &self.structural
    }

    pub fn dims(&self) -> Vec<usize> {
        self.modules.iter().map(|m| m.dim()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.modules.iter().map(|m| m.dim()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Replaces one structural map; used for mutation fixtures.
    pub fn with_structural(&self, f: Mor, m: Matrix) -> Representation {
        assert_eq!(m.shape(), self.structural[f].shape());
        let mut r = self.clone();
        r.structural[f] = m;
        r
    }

    /// Module validity, linearity of structural maps, composition and unit axioms.
    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new("representation");
        let d = &self.diagram;
        let c = d.index();
        for (i, m) in self.modules.iter().enumerate() {
            for v in m.validate().violations {
                r.fail(&format!("module {}", v.axiom), &[c.object_name(i)], v.detail);
            }
        }
        for f in 0..c.num_morphisms() {
            let t = &self.tensors[f];
            let target = &self.modules[c.target(f)];
            r.check(t.module.is_linear_map_to(target, &self.structural[f]), "linearity", &[c.morphism_name(f)], || {
                "structural map is not linear over the target algebra".into()
            });
        }
        if !r.passed() {
            return r;
        }
        for (g, f) in c.composable_pairs() {
            let (tau, rhs) = composition_sides(d, &self.tensors, &self.structural[g], &self.structural[f], g, f);
            let lhs = self.structural[c.comp(g, f)].mul(&tau);
            r.check_eq(&lhs, &rhs, "composition", &[c.morphism_name(g), c.morphism_name(f)]);
        }
        for i in 0..c.num_objects() {
            let e = c.identity(i);
            let lhs = self.structural[e].mul(&d.eta_component(i, &self.tensors[e]));
            r.check_eq(&lhs, &Matrix::identity(self.field(), self.modules[i].dim()), "unit", &[c.object_name(i)]);
        }
        r
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }

    pub fn identity(&self) -> RepMorphism {
        let components = self.modules.iter().map(|m| Matrix::identity(self.field(), m.dim())).collect();
        RepMorphism { source: self.clone(), target: self.clone(), components }
    }

    /// Pullback along `G: J → I`, over the already restricted diagram.
    pub fn restrict(&self, g: &CatFunctor, restricted: &Arc<DiagramSpec>) -> Result<Representation> {
        if g.codomain != *self.diagram.index() || g.domain != *restricted.index() {
            return Err(Error::FunctorMismatch("functor does not match the diagrams".into()));
        }
        let j = &g.domain;
        let modules = (0..j.num_objects()).map(|x| self.modules[g.apply_object(x)].clone()).collect();
        let structural = (0..j.num_morphisms()).map(|f| self.structural[g.apply_morphism(f)].clone()).collect();
        Representation::from_parts(restricted, modules, structural)
    }

    /// The dual representation over [`DiagramSpec::dual`].
    pub fn dual(&self, dual_diagram: &Arc<DiagramSpec>) -> Result<Representation> {
        let c = self.diagram.index();
        let field = self.field();
        let modules: Vec<Module> = (0..c.num_objects()).map(|i| self.modules[i].dual_over(dual_diagram.algebra(i))).collect();
        let tensors = tensors_of(dual_diagram, &modules)?;
        let structural = (0..c.num_morphisms())
            .map(|f| {
                // (b_p ⊗ φ_q)(m_r) = φ_q(M_α(b_p ⊗ m_r)).
                let x = self.structural[f].mul(&self.tensors[f].quotient.projection);
                let (ds, dt) = (self.modules[c.source(f)].dim(), self.modules[c.target(f)].dim());
                let b = self.diagram.bimodule(f).dim();
                let plain = Matrix::from_fn(field, ds, b * dt, |r, col| x.get(col % dt, (col / dt) * ds + r));
                plain.mul(&tensors[f].quotient.section)
            })
            .collect();
        Representation::from_parts(dual_diagram, modules, structural)
    }

    /// Transposes `M_α^*: M_i → Hom(B_α, M_j)` of the structural maps.
    pub fn transpose_structural_maps(&self) -> Result<Vec<TransposedMap>> {
        let c = self.diagram.index();
        (0..c.num_morphisms())
            .map(|f| {
                let b = self.diagram.bimodule(f);
                let hom = b.hom(&self.modules[c.target(f)])?;
                let map = b.transpose_to_hom(&self.tensors[f], &hom, &self.structural[f]);
                Ok(TransposedMap { hom, map })
            })
            .collect()
    }

    /// Inverse of [`Representation::transpose_structural_maps`].
    pub fn from_transposes(diagram: &Arc<DiagramSpec>, modules: Vec<Module>, transposes: &[TransposedMap]) -> Result<Representation> {
        let tensors = tensors_of(diagram, &modules)?;
        let structural = transposes.iter().enumerate().map(|(f, t)| diagram.bimodule(f).transpose_from_hom(&tensors[f], &t.hom, &t.map)).collect();
        Representation::from_parts(diagram, modules, structural)
    }

    pub fn summary(&self) -> RepSummary {
        let c = self.diagram.index();
        RepSummary {
            vertices: (0..c.num_objects())
                .map(|i| VertexSummary { object: c.object_name(i).to_string(), dim: self.modules[i].dim(), action: self.modules[i].action().to_vec() })
                .collect(),
            structural: (0..c.num_morphisms()).map(|f| (c.morphism_name(f).to_string(), self.structural[f].clone())).collect(),
        }
    }
}

impl PartialEq for Representation {
    fn eq(&self, other: &Representation) -> bool {
        *self.diagram == *other.diagram && self.modules == other.modules && self.structural == other.structural
    }
}

/// A transposed structural map together with its hom module.
#[derive(Clone, Debug)]
pub struct TransposedMap {
    pub hom: HomModule,
    pub map: Matrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexSummary {
    pub object: String,
    pub dim: usize,
    pub action: Vec<Matrix>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepSummary {
    pub vertices: Vec<VertexSummary>,
    pub structural: BTreeMap<String, Matrix>,
}

fn tensors_of(diagram: &DiagramSpec, modules: &[Module]) -> Result<Vec<Tensor>> {
    let c = diagram.index();
    (0..c.num_morphisms()).map(|f| diagram.apply(f, &modules[c.source(f)])).collect()
}

/// `(τ_{g,f}(M_i), M_g ∘ D_g(M_f))` for a composable pair.
fn composition_sides(d: &DiagramSpec, tensors: &[Tensor], mg: &Matrix, mf: &Matrix, g: Mor, f: Mor) -> (Matrix, Matrix) {
    let c = d.index();
    let inner = &tensors[f];
    let outer = d.bimodule(g).tensor(&inner.module).expect("tensor over matching algebras");
    let tau = d.tau_component(g, f, inner, &outer, &tensors[c.comp(g, f)]);
    let dg_mf = d.apply_on_morphism(g, &outer, &tensors[g], mf);
    (tau, mg.mul(&dg_mf))
}

/// `Σ_p L (u_p ⊗ I_n) X (u_p^T ⊗ I_m) R`, the terms of `L (I_b ⊗ X) R`.
pub(crate) fn kron_identity_terms(field: Field, b: usize, n: usize, m: usize, left: &Matrix, block: usize, right: &Matrix) -> Vec<Term> {
    (0..b)
        .map(|p| {
            let u = Matrix::unit_vector(field, b, p);
            Term::new(left.mul(&u.kron(&Matrix::identity(field, n))), block, u.transpose().kron(&Matrix::identity(field, m)).mul(right))
        })
        .collect()
}

/// A morphism of representations: one module map per object.
#[derive(Clone, Debug, PartialEq)]
pub struct RepMorphism {
    pub source: Representation,
    pub target: Representation,
    pub components: Vec<Matrix>,
}

impl RepMorphism {
    pub fn new(source: &Representation, target: &Representation, components: Vec<Matrix>) -> Result<RepMorphism> {
        if *source.diagram != *target.diagram {
            return Err(Error::DiagramMismatch);
        }
        if components.len() != source.modules.len() {
            return Err(Error::ShapeMismatch("one component per object is needed".into()));
        }
        for (i, m) in components.iter().enumerate() {
            if m.shape() != (target.modules[i].dim(), source.modules[i].dim()) {
                return Err(Error::DimensionMismatch(format!("component {} has shape {:?}", i, m.shape())));
            }
        }
        Ok(RepMorphism { source: source.clone(), target: target.clone(), components })
    }

    pub fn zero(source: &Representation, target: &Representation) -> RepMorphism {
        let components = (0..source.modules.len()).map(|i| Matrix::zeros(source.field(), target.modules[i].dim(), source.modules[i].dim())).collect();
        RepMorphism { source: source.clone(), target: target.clone(), components }
    }

    /// Linearity of each component and every naturality square.
    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new("representation morphism");
        let d = &self.source.diagram;
        let c = d.index();
        for (i, w) in self.components.iter().enumerate() {
            r.check(self.source.modules[i].is_linear_map_to(&self.target.modules[i], w), "linearity", &[c.object_name(i)], || {
                "component is not linear over the vertex algebra".into()
            });
        }
        for f in 0..c.num_morphisms() {
            let (i, j) = (c.source(f), c.target(f));
            let lhs = self.components[j].mul(&self.source.structural[f]);
            let d_w = d.apply_on_morphism(f, &self.source.tensors[f], &self.target.tensors[f], &self.components[i]);
            let rhs = self.target.structural[f].mul(&d_w);
            r.check_eq(&lhs, &rhs, "naturality", &[c.morphism_name(f)]);
        }
        r
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &RepMorphism) -> RepMorphism {
        let components = self.components.iter().zip(&first.components).map(|(a, b)| a.mul(b)).collect();
        RepMorphism { source: first.source.clone(), target: self.target.clone(), components }
    }

    pub fn add(&self, other: &RepMorphism) -> RepMorphism {
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect();
        RepMorphism { source: self.source.clone(), target: self.target.clone(), components }
    }

    pub fn scale(&self, s: &Scalar) -> RepMorphism {
        RepMorphism { source: self.source.clone(), target: self.target.clone(), components: self.components.iter().map(|m| m.scale(s)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|m| m.is_zero())
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(|m| m.is_invertible())
    }

    pub fn inverse(&self) -> Option<RepMorphism> {
        let components = self.components.iter().map(|m| m.inverse()).collect::<Option<Vec<_>>>()?;
        Some(RepMorphism { source: self.target.clone(), target: self.source.clone(), components })
    }

    pub fn is_mono(&self) -> bool {
        self.components.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_epi(&self) -> bool {
        self.components.iter().all(|m| m.rank() == m.rows())
    }

    /// Componentwise kernel, image and cokernel with induced structural maps.
    pub fn factorization(&self) -> RepFactorization {
        let d = &self.source.diagram;
        let c = d.index();
        let field = self.source.field();
        let facts: Vec<_> = (0..c.num_objects())
            .map(|i| ModuleMorphism::new(&self.source.modules[i], &self.target.modules[i], self.components[i].clone()).expect("shapes checked").factorization())
            .collect();

        let kernel_modules: Vec<Module> = facts.iter().map(|f| f.kernel.clone()).collect();
        let k_tensors = tensors_of(d, &kernel_modules).expect("tensor");
        let kernel_structural = (0..c.num_morphisms())
            .map(|f| {
                let (i, j) = (c.source(f), c.target(f));
                let (ki, kj) = (&facts[i].kernel_inclusion, &facts[j].kernel_inclusion);
                let rhs = self.source.structural[f].mul(&d.apply_on_morphism(f, &k_tensors[f], &self.source.tensors[f], ki));
                restrict_codomain(field, kj, &rhs)
            })
            .collect();
        let kernel = Representation::from_parts(d, kernel_modules, kernel_structural).expect("kernel shapes");

        let image_modules: Vec<Module> = facts.iter().map(|f| f.image.clone()).collect();
        let im_tensors = tensors_of(d, &image_modules).expect("tensor");
        let image_structural = (0..c.num_morphisms())
            .map(|f| {
                let (i, j) = (c.source(f), c.target(f));
                let (ii, ij) = (&facts[i].image_inclusion, &facts[j].image_inclusion);
                let rhs = self.target.structural[f].mul(&d.apply_on_morphism(f, &im_tensors[f], &self.target.tensors[f], ii));
                restrict_codomain(field, ij, &rhs)
            })
            .collect();
        let image = Representation::from_parts(d, image_modules, image_structural).expect("image shapes");

        let cok_modules: Vec<Module> = facts.iter().map(|f| f.cokernel.clone()).collect();
        let cok_tensors = tensors_of(d, &cok_modules).expect("tensor");
        let cok_structural = (0..c.num_morphisms())
            .map(|f| {
                let (i, j) = (c.source(f), c.target(f));
                let d_sec = d.apply_on_morphism(f, &cok_tensors[f], &self.target.tensors[f], &facts[i].cokernel_section);
                facts[j].cokernel_projection.mul(&self.target.structural[f]).mul(&d_sec)
            })
            .collect();
        let cokernel = Representation::from_parts(d, cok_modules, cok_structural).expect("cokernel shapes");

        let kernel_inclusion = RepMorphism { source: kernel.clone(), target: self.source.clone(), components: facts.iter().map(|f| f.kernel_inclusion.clone()).collect() };
        let image_inclusion = RepMorphism { source: image.clone(), target: self.target.clone(), components: facts.iter().map(|f| f.image_inclusion.clone()).collect() };
        let coimage_projection = RepMorphism { source: self.source.clone(), target: image.clone(), components: facts.iter().map(|f| f.coimage_projection.clone()).collect() };
        let cokernel_projection = RepMorphism { source: self.target.clone(), target: cokernel.clone(), components: facts.iter().map(|f| f.cokernel_projection.clone()).collect() };
        RepFactorization { kernel, kernel_inclusion, image, image_inclusion, coimage_projection, cokernel, cokernel_projection }
    }
}

/// `X` with `inclusion X = rhs`, for `rhs` with image inside an injective `inclusion`.
fn restrict_codomain(field: Field, inclusion: &Matrix, rhs: &Matrix) -> Matrix {
    if inclusion.cols() == 0 {
        return Matrix::zeros(field, 0, rhs.cols());
    }
    inclusion.left_inverse().expect("inclusion is injective").mul(rhs)
}

#[derive(Clone, Debug)]
pub struct RepFactorization {
    pub kernel: Representation,
    pub kernel_inclusion: RepMorphism,
    pub image: Representation,
    pub image_inclusion: RepMorphism,
    pub coimage_projection: RepMorphism,
    pub cokernel: Representation,
    pub cokernel_projection: RepMorphism,
}

/// A finite biproduct with its injections and projections.
#[derive(Clone, Debug)]
pub struct RepBiproduct {
    pub rep: Representation,
    pub injections: Vec<RepMorphism>,
    pub projections: Vec<RepMorphism>,
}

/// `⊕ parts` with structural maps distributed over the summands.
pub fn biproduct(diagram: &Arc<DiagramSpec>, parts: &[Representation]) -> Result<RepBiproduct> {
    if parts.iter().any(|p| *p.diagram != **diagram) {
        return Err(Error::DiagramMismatch);
    }
    let c = diagram.index();
    let field = diagram.field();
    let mut modules = Vec::new();
    let mut inj = Vec::new();
    let mut proj = Vec::new();
    for i in 0..c.num_objects() {
        let sum = Module::direct_sum(diagram.algebra(i), &parts.iter().map(|p| p.modules[i].clone()).collect::<Vec<_>>())?;
        modules.push(sum.module);
        inj.push(sum.injections);
        proj.push(sum.projections);
    }
    let tensors = tensors_of(diagram, &modules)?;
    let structural = (0..c.num_morphisms())
        .map(|f| {
            let (i, j) = (c.source(f), c.target(f));
            let mut acc = Matrix::zeros(field, modules[j].dim(), tensors[f].module.dim());
            for (k, p) in parts.iter().enumerate() {
                let d_proj = diagram.apply_on_morphism(f, &tensors[f], &p.tensors[f], &proj[i][k]);
                acc.add_assign(&inj[j][k].mul(&p.structural[f]).mul(&d_proj));
            }
            acc
        })
        .collect();
    let rep = Representation::from_parts(diagram, modules, structural)?;
    let injections = parts
        .iter()
        .enumerate()
        .map(|(k, p)| RepMorphism { source: p.clone(), target: rep.clone(), components: (0..c.num_objects()).map(|i| inj[i][k].clone()).collect() })
        .collect();
    let projections = parts
        .iter()
        .enumerate()
        .map(|(k, p)| RepMorphism { source: rep.clone(), target: p.clone(), components: (0..c.num_objects()).map(|i| proj[i][k].clone()).collect() })
        .collect();
    Ok(RepBiproduct { rep, injections, projections })
}

/// Basis of `Hom(M, N)` as solutions of one linear system.
pub fn hom_basis(m: &Representation, n: &Representation) -> Result<Vec<RepMorphism>> {
    if *m.diagram != *n.diagram {
        return Err(Error::DiagramMismatch);
    }
    let d = &m.diagram;
    let c = d.index();
    let field = m.field();
    let mut sys = LinearSystem::new(field);
    let blocks: Vec<usize> = (0..c.num_objects()).map(|i| sys.unknown(n.modules[i].dim(), m.modules[i].dim())).collect();
    for i in 0..c.num_objects() {
        let (mi, ni) = (&m.modules[i], &n.modules[i]);
        if mi.dim() == 0 || ni.dim() == 0 {
            continue;
        }
        for a in 0..d.algebra(i).dim() {
            sys.equation(
                ni.dim(),
                mi.dim(),
                vec![Term::new(Matrix::identity(field, ni.dim()), blocks[i], mi.action()[a].clone()), Term::new(ni.action()[a].neg(), blocks[i], Matrix::identity(field, mi.dim()))],
                None,
            );
        }
    }
    for f in 0..c.num_morphisms() {
        if c.is_identity(f) {
            continue;
        }
        let (i, j) = (c.source(f), c.target(f));
        let (rows, cols) = (n.modules[j].dim(), m.tensors[f].module.dim());
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut terms = vec![Term::new(Matrix::identity(field, rows), blocks[j], m.structural[f].clone())];
        let (mt, nt) = (&m.tensors[f], &n.tensors[f]);
        let left = n.structural[f].mul(&nt.quotient.projection).neg();
        terms.extend(kron_identity_terms(field, d.bimodule(f).dim(), n.modules[i].dim(), m.modules[i].dim(), &left, blocks[i], &mt.quotient.section));
        sys.equation(rows, cols, terms, None);
    }
    Ok(sys.kernel().into_iter().map(|components| RepMorphism { source: m.clone(), target: n.clone(), components }).collect())
}

pub fn hom_dimension(m: &Representation, n: &Representation) -> Result<usize> {
    Ok(hom_basis(m, n)?.len())
}

/// Linear combination of a basis of morphisms.
pub fn combine(source: &Representation, target: &Representation, basis: &[RepMorphism], coeffs: &[Scalar]) -> RepMorphism {
    let mut acc = RepMorphism::zero(source, target);
    for (b, s) in basis.iter().zip(coeffs) {
        if !s.is_zero() {
            acc = acc.add(&b.scale(s));
        }
    }
    acc
}

/// An isomorphism `M → N` if one exists.
///
/// Exhaustive over the hom space when it has at most 4096 elements; otherwise
/// a fixed sequence of pseudo-random combinations is tried, so `None` may be
/// a false negative there.
pub fn find_isomorphism(m: &Representation, n: &Representation) -> Result<Option<RepMorphism>> {
    if m.dims() != n.dims() {
        return Ok(None);
    }
    if m.total_dim() == 0 {
        return Ok(Some(RepMorphism::zero(m, n)));
    }
    let basis = hom_basis(m, n)?;
    if basis.is_empty() {
        return Ok(None);
    }
    let field = m.field();
    if let Some(q) = field.order() {
        if (q as f64).powi(basis.len() as i32) <= 4096.0 {
            let elements = field.elements().expect("finite field");
            let mut idx = vec![0usize; basis.len()];
            loop {
                let coeffs: Vec<Scalar> = idx.iter().map(|&k| elements[k].clone()).collect();
                let cand = combine(m, n, &basis, &coeffs);
                if cand.is_iso() {
                    return Ok(Some(cand));
                }
                let mut p = 0;
                while p < idx.len() {
                    idx[p] += 1;
                    if idx[p] < elements.len() {
                        break;
                    }
                    idx[p] = 0;
                    p += 1;
                }
                if p == idx.len() {
                    return Ok(None);
                }
            }
        }
    }
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..256 {
        let coeffs: Vec<Scalar> = basis.iter().map(|_| field.random(&mut rng)).collect();
        let cand = combine(m, n, &basis, &coeffs);
        if cand.is_iso() {
            return Ok(Some(cand));
        }
    }
    Ok(None)
}

/// Per-object verdict of [`is_exact_sequence`].
#[derive(Clone, Debug, Serialize)]
pub struct ExactnessAtVertex {
    pub object: String,
    pub rank_in: usize,
    pub kernel_dim_out: usize,
    pub exact: bool,
}

/// Whether `M --f--> N --g--> K` is exact at `N`, vertex by vertex.
pub fn is_exact_sequence(f: &RepMorphism, g: &RepMorphism) -> Result<(bool, Vec<ExactnessAtVertex>)> {
    if f.target != g.source {
        return Err(Error::DiagramMismatch);
    }
    let c = f.source.diagram.index();
    let mut out = Vec::new();
    for i in 0..c.num_objects() {
        let comp = g.components[i].mul(&f.components[i]);
        if !comp.is_zero() {
            return Err(Error::NonZeroComposite(c.object_name(i).to_string()));
        }
        let rank_in = f.components[i].rank();
        let kernel_dim_out = g.components[i].cols() - g.components[i].rank();
        out.push(ExactnessAtVertex { object: c.object_name(i).to_string(), rank_in, kernel_dim_out, exact: rank_in == kernel_dim_out });
    }
    Ok((out.iter().all(|v| v.exact), out))
}

/// A module system over a ring diagram: `R_i`-modules with semilinear maps
/// `m_α: M_i → M_j`, the form a representation takes over a ring diagram.
#[derive(Clone, Debug)]
pub struct ModSystem {
    pub ring: RingDiagram,
    pub modules: Vec<Module>,
    pub maps: Vec<Matrix>,
}

impl ModSystem {
    /// Semilinearity, composition and unit axioms.
    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new("module system");
        let c = &self.ring.index;
        for f in 0..c.num_morphisms() {
            let (i, j) = (c.source(f), c.target(f));
            let (mi, mj) = (&self.modules[i], &self.modules[j]);
            let rf = &self.ring.edge_maps[f];
            let ok = (0..self.ring.algebras[i].dim()).all(|a| {
                let image_action = self.ring.algebras[j].combine(&rf.column(a), mj.action());
                self.maps[f].mul(&mi.action()[a]) == image_action.mul(&self.maps[f])
            });
            r.check(ok, "linearity", &[c.morphism_name(f)], || "map is not semilinear along the edge map".into());
        }
        if !r.passed() {
            return r;
        }
        for (g, f) in c.composable_pairs() {
            r.check_eq(&self.maps[c.comp(g, f)], &self.maps[g].mul(&self.maps[f]), "composition", &[c.morphism_name(g), c.morphism_name(f)]);
        }
        for i in 0..c.num_objects() {
            let id = Matrix::identity(self.modules[i].field(), self.modules[i].dim());
            r.check_eq(&self.maps[c.identity(i)], &id, "unit", &[c.object_name(i)]);
        }
        r
    }

    /// The representation `M_α(r ⊗ x) = r · m_α(x)` over `from_ring_diagram`.
    pub fn to_representation(&self, diagram: &Arc<DiagramSpec>) -> Result<Representation> {
        let c = diagram.index();
        let tensors = tensors_of(diagram, &self.modules)?;
        let structural = (0..c.num_morphisms())
            .map(|f| {
                let (i, j) = (c.source(f), c.target(f));
                let mj = &self.modules[j];
                let b = diagram.bimodule(f).dim();
                let mi = self.modules[i].dim();
                let mut plain = Matrix::zeros(diagram.field(), mj.dim(), b * mi);
                for p in 0..b {
                    let rp = mj.action()[p].mul(&self.maps[f]);
                    plain.set_block(0, p * mi, &rp);
                }
                plain.mul(&tensors[f].quotient.section)
            })
            .collect();
        Representation::from_parts(diagram, self.modules.clone(), structural)
    }

    /// `m_α(x) = M_α(1 ⊗ x)`.
    pub fn from_representation(ring: &RingDiagram, rep: &Representation) -> ModSystem {
        let d = rep.diagram();
        let c = d.index();
        let field = d.field();
        let maps = (0..c.num_morphisms())
            .map(|f| {
                let unit = ring.algebras[c.target(f)].unit();
                let mi = rep.module(c.source(f)).dim();
                rep.structural(f).mul(&rep.tensor(f).quotient.projection).mul(&unit.kron(&Matrix::identity(field, mi)))
            })
            .collect();
        ModSystem { ring: ring.clone(), modules: rep.modules().to_vec(), maps }
    }

    /// The structure system `M_i = R_i`, `m_α = R_α`.
    pub fn structure(ring: &RingDiagram) -> ModSystem {
        ModSystem { ring: ring.clone(), modules: ring.algebras.iter().map(|a| a.regular_module()).collect(), maps: ring.edge_maps.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FinCategory;
    use crate::modcat::Algebra;

    const F2: Field = Field::Prime(2);
    const F3: Field = Field::Prime(3);

    fn a2(field: Field) -> Arc<DiagramSpec> {
        let c = FinCategory::from_quiver(&["1", "2"], &[("a", "1", "2")]).unwrap();
        Arc::new(DiagramSpec::trivial(&c, &Algebra::ground(field)))
    }

    fn linear_map(d: &Arc<DiagramSpec>, dims: [usize; 2], m: Matrix) -> Representation {
        let c = d.index();
        let modules = vec![Module::vector_space(d.algebra(0), dims[c.object("1").unwrap()]), Module::vector_space(d.algebra(1), dims[c.object("2").unwrap()])];
        let mut given = BTreeMap::new();
        given.insert(c.morphism("a").unwrap(), m);
        Representation::build(d, modules, &given).unwrap()
    }

    #[test]
    fn build_on_free_quiver_validates() {
        let d = a2(F3);
        let r = linear_map(&d, [2, 1], Matrix::from_i64(F3, &[vec![1, 2]]));
        assert!(r.is_valid());
        assert!(Representation::zero(&d).is_valid());
    }

    #[test]
    fn c2_non_involution_is_inconsistent() {
        let c = FinCategory::cyclic_group(2);
        let d = Arc::new(DiagramSpec::trivial(&c, &Algebra::ground(F2)));
        let g = c.morphism("g").unwrap();
        let mut given = BTreeMap::new();
        given.insert(g, Matrix::from_i64(F2, &[vec![1, 1], vec![1, 0]]));
        let err = Representation::build(&d, vec![Module::vector_space(d.algebra(0), 2)], &given).unwrap_err();
        assert!(matches!(err, Error::InconsistentRelations(_)));
    }

    #[test]
    fn hom_dimensions_on_a2() {
        let d = a2(F3);
        let id = linear_map(&d, [1, 1], Matrix::identity(F3, 1));
        let k0 = linear_map(&d, [1, 0], Matrix::zeros(F3, 0, 1));
        // The projective cover of the simple at 1 maps onto it; nothing maps back.
        assert_eq!(hom_dimension(&id, &k0).unwrap(), 1);
        assert_eq!(hom_dimension(&k0, &id).unwrap(), 0);
        assert_eq!(hom_dimension(&id, &id).unwrap(), 1);
        let s = biproduct(&d, &[id.clone(), k0.clone()]).unwrap();
        assert_eq!(hom_dimension(&s.rep, &s.rep).unwrap(), 2 + hom_dimension(&id, &k0).unwrap() + hom_dimension(&k0, &id).unwrap());
        for m in s.injections.iter().chain(&s.projections) {
            assert!(m.is_valid());
        }
    }

    #[test]
    fn factorization_is_exact() {
        let d = a2(F3);
        let m = linear_map(&d, [2, 2], Matrix::from_i64(F3, &[vec![1, 0], vec![0, 0]]));
        let n = linear_map(&d, [2, 2], Matrix::from_i64(F3, &[vec![1, 1], vec![0, 1]]));
        let basis = hom_basis(&m, &n).unwrap();
        assert!(!basis.is_empty());
        let w = combine(&m, &n, &basis, &basis.iter().enumerate().map(|(k, _)| F3.from_i64(k as i64 + 1)).collect::<Vec<_>>());
        assert!(w.is_valid());
        let fac = w.factorization();
        assert!(fac.kernel.is_valid() && fac.image.is_valid() && fac.cokernel.is_valid());
        assert!(fac.kernel_inclusion.is_valid() && fac.cokernel_projection.is_valid());
        assert!(is_exact_sequence(&fac.kernel_inclusion, &w).unwrap().0);
        assert!(is_exact_sequence(&w, &fac.cokernel_projection).unwrap().0);
    }

    #[test]
    fn find_isomorphism_detects_conjugate() {
        let d = a2(F3);
        let m = linear_map(&d, [2, 2], Matrix::from_i64(F3, &[vec![1, 0], vec![0, 0]]));
        let n = linear_map(&d, [2, 2], Matrix::from_i64(F3, &[vec![0, 0], vec![2, 0]]));
        let iso = find_isomorphism(&m, &n).unwrap().unwrap();
        assert!(iso.is_valid() && iso.is_iso());
        let p = linear_map(&d, [2, 2], Matrix::identity(F3, 2));
        assert!(find_isomorphism(&m, &p).unwrap().is_none());
    }

    #[test]
    fn transposes_round_trip() {
        let alg = Algebra::truncated_polynomial(F3, 2);
        let c = FinCategory::from_quiver(&["1", "2"], &[("a", "1", "2")]).unwrap();
        let d = Arc::new(DiagramSpec::trivial(&c, &alg));
        let ring = RingDiagram::constant(&c, &alg);
        let r = ModSystem::structure(&ring).to_representation(&d).unwrap();
        assert!(r.is_valid());
        let t = r.transpose_structural_maps().unwrap();
        let back = Representation::from_transposes(&d, r.modules().to_vec(), &t).unwrap();
        assert_eq!(back, r);
        let sys = ModSystem::from_representation(&ring, &r);
        assert!(sys.validate().passed());
        assert_eq!(sys.maps, ring.edge_maps);
    }

    #[test]
    fn dual_of_dual_is_original() {
        let d = a2(F3);
        let m = linear_map(&d, [2, 1], Matrix::from_i64(F3, &[vec![1, 2]]));
        let dd = Arc::new(d.dual().unwrap());
        let md = m.dual(&dd).unwrap();
        assert!(md.is_valid());
        let ddd = Arc::new(dd.dual().unwrap());
        assert_eq!(*ddd, *d);
        let back = md.dual(&ddd).unwrap();
        assert_eq!(back.structural_maps(), m.structural_maps());
    }

    #[test]
    fn dual_handles_nontrivial_algebras() {
        let c = FinCategory::from_quiver(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap();
        for alg in [Algebra::truncated_polynomial(F3, 2), Algebra::upper_triangular(F3)] {
            let base = DiagramSpec::trivial(&c, &alg);
            let u = Matrix::from_i64(F3, &[vec![2, 0], vec![1, 2]]);
            let d = if alg.dim() == 2 { Arc::new(base.twisted(&vec![u; c.num_morphisms()]).unwrap()) } else { Arc::new(base) };
            let dd = Arc::new(d.dual().unwrap());
            assert!(dd.validate().passed(), "{:?}", dd.validate().violations);
            let mut r = crate::generate::rng(3);
            for _ in 0..8 {
                let m = crate::generate::representation(&mut r, &d, 3).unwrap();
                let md = m.dual(&dd).unwrap();
                assert!(md.is_valid(), "{:?}", md.validate().violations);
                let ddd = Arc::new(dd.dual().unwrap());
                assert_eq!(*ddd, *d);
                assert_eq!(md.dual(&ddd).unwrap().structural_maps(), m.structural_maps());
            }
        }
    }
}
