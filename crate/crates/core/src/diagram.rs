//! Diagrams of module categories over a finite index category.
//!
//! A diagram assigns an algebra `A_i` to each object, a bimodule `B_α` over
//! `(A_{t(α)}, A_{s(α)})` to each morphism (so `D_α = B_α ⊗ -`), and
//! coherence witnesses:
//! - `t_{β,α}: B_β ⊗ B_α → B_{βα}` for composable pairs;
//! - `n_i: A_i → B_{e_i}` for objects.
//!
//! Witness matrices are written in the quotient basis of the bimodule tensor
//! computed by [`Bimodule::tensor_bimodule`].

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{CatFunctor, FinCategory, Mor, Obj};
use crate::linalg::{Field, Matrix};
use crate::modcat::{same_algebra, Algebra, Bimodule, BimoduleTensor, Module, Tensor};
use crate::report::ValidationReport;

#[derive(Clone, Debug)]
pub struct DiagramSpec {
    index: FinCategory,
    algebras: Vec<Arc<Algebra>>,
    bimodules: Vec<Bimodule>,
    /// `tau[g * n + f]` for composable `(g, f)`.
    tau: Vec<Option<Matrix>>,
    eta: Vec<Matrix>,
    pairs: Vec<Option<BimoduleTensor>>,
}

impl DiagramSpec {
    /// Assembles a diagram; checks shapes and endpoints but not coherence.
    pub fn new(
        index: FinCategory,
        algebras: Vec<Arc<Algebra>>,
        bimodules: Vec<Bimodule>,
        tau: Vec<Option<Matrix>>,
        eta: Vec<Matrix>,
    ) -> Result<DiagramSpec> {
        let n = index.num_morphisms();
        if algebras.len() != index.num_objects() || bimodules.len() != n || eta.len() != index.num_objects() || tau.len() != n * n {
            return Err(Error::ShapeMismatch("diagram data does not cover the index category".into()));
        }
        let field = algebras.first().map(|a| a.field());
        if algebras.iter().any(|a| Some(a.field()) != field) {
            return Err(Error::ShapeMismatch("vertex algebras over different fields".into()));
        }
        for f in 0..n {
            let b = &bimodules[f];
            if !same_algebra(b.left_algebra(), &algebras[index.target(f)]) || !same_algebra(b.right_algebra(), &algebras[index.source(f)]) {
                return Err(Error::AlgebraMismatch(format!("bimodule at `{}`", index.morphism_name(f))));
            }
        }
        let mut pairs = vec![None; n * n];
        for (g, f) in index.composable_pairs() {
            let pt = bimodules[g].tensor_bimodule(&bimodules[f])?;
            let gf = index.comp(g, f);
            let expected = (bimodules[gf].dim(), pt.bimodule.dim());
            match &tau[g * n + f] {
                Some(t) if t.shape() == expected => {}
                _ => {
                    return Err(Error::ShapeMismatch(format!(
                        "witness for ({}, {}) must be {}x{}",
                        index.morphism_name(g),
                        index.morphism_name(f),
                        expected.0,
                        expected.1
                    )))
                }
            }
            pairs[g * n + f] = Some(pt);
        }
        for i in 0..index.num_objects() {
            let e = index.identity(i);
            if eta[i].shape() != (bimodules[e].dim(), algebras[i].dim()) {
                return Err(Error::ShapeMismatch(format!("unit witness at `{}` has the wrong size", index.object_name(i))));
            }
        }
        Ok(DiagramSpec { index, algebras, bimodules, tau, eta, pairs })
    }

    /// Every vertex `A`, every edge the regular bimodule, canonical witnesses.
    pub fn trivial(index: &FinCategory, algebra: &Arc<Algebra>) -> DiagramSpec {
        let no = index.num_objects();
        let n = index.num_morphisms();
        let reg = algebra.regular_bimodule();
        let pt = reg.tensor_bimodule(&reg).expect("regular bimodule tensors");
        let mult = multiplication_map(algebra, &Matrix::identity(algebra.field(), algebra.dim()));
        let t = mult.mul(&pt.quotient.section);
        let mut tau = vec![None; n * n];
        for (g, f) in index.composable_pairs() {
            tau[g * n + f] = Some(t.clone());
        }
        let eta = vec![Matrix::identity(algebra.field(), algebra.dim()); no];
        DiagramSpec::new(index.clone(), vec![algebra.clone(); no], vec![reg; n], tau, eta).expect("trivial diagram is well formed")
    }

    /// `B_α = R_{t(α)}` with right action through `R_α`, canonical witnesses.
    pub fn from_ring_diagram(r: &RingDiagram) -> Result<DiagramSpec> {
        r.ensure_valid()?;
        let c = &r.index;
        let n = c.num_morphisms();
        let bimodules: Vec<Bimodule> = (0..n)
            .map(|f| Bimodule::from_homomorphism(&r.algebras[c.target(f)], &r.algebras[c.source(f)], &r.edge_maps[f]))
            .collect::<Result<_>>()?;
        let mut tau = vec![None; n * n];
        for (g, f) in c.composable_pairs() {
            let pt = bimodules[g].tensor_bimodule(&bimodules[f])?;
            let mult = multiplication_map(&r.algebras[c.target(g)], &r.edge_maps[g]);
            tau[g * n + f] = Some(mult.mul(&pt.quotient.section));
        }
        let eta = (0..c.num_objects()).map(|i| Matrix::identity(r.algebras[i].field(), r.algebras[i].dim())).collect();
        DiagramSpec::new(c.clone(), r.algebras.clone(), bimodules, tau, eta)
    }

    /// Conjugates the witnesses by bimodule automorphisms `φ_α` of each `B_α`.
    ///
    /// The result has `t' = φ_{βα} t (φ_β^{-1} ⊗ φ_α^{-1})` and `n' = φ_{e_i} n`;
    /// representations transport along [`DiagramSpec::transport_structural`].
    pub fn twisted(&self, phi: &[Matrix]) -> Result<DiagramSpec> {
        let n = self.index.num_morphisms();
        if phi.len() != n {
            return Err(Error::ShapeMismatch("one automorphism per morphism is needed".into()));
        }
        let inv: Vec<Matrix> = phi
            .iter()
            .enumerate()
            .map(|(f, p)| {
                if !self.bimodules[f].is_bimodule_map_to(&self.bimodules[f], p) {
                    return Err(Error::Invalid(format!("twist at `{}` is not a bimodule map", self.index.morphism_name(f))));
                }
                p.inverse().ok_or_else(|| Error::Invalid(format!("twist at `{}` is not invertible", self.index.morphism_name(f))))
            })
            .collect::<Result<_>>()?;
        let mut tau = vec![None; n * n];
        for (g, f) in self.index.composable_pairs() {
            let pt = self.pair(g, f);
            let both = pt.quotient.projection.mul(&inv[g].kron(&inv[f])).mul(&pt.quotient.section);
            tau[g * n + f] = Some(phi[self.index.comp(g, f)].mul(self.tau(g, f)).mul(&both));
        }
        let eta = (0..self.index.num_objects()).map(|i| phi[self.index.identity(i)].mul(&self.eta[i])).collect();
        DiagramSpec::new(self.index.clone(), self.algebras.clone(), self.bimodules.clone(), tau, eta)
    }

    /// Structural map of a representation transported along a twist:
    /// `M'_α = M_α ∘ (φ_α^{-1} ⊗ M)`.
    pub fn transport_structural(&self, phi_alpha: &Matrix, tensor: &Tensor, structural: &Matrix) -> Matrix {
        let inv = phi_alpha.inverse().expect("twist is invertible");
        let id = Matrix::identity(self.field(), tensor.right_dim);
        structural.mul(&tensor.quotient.projection.mul(&inv.kron(&id)).mul(&tensor.quotient.section))
    }

    pub fn index(&self) -> &FinCategory {
        &self.index
    }

    pub fn field(&self) -> Field {
        self.algebras.first().map(|a| a.field()).unwrap_or(Field::Rational)
    }

    pub fn algebra(&self, i: Obj) -> &Arc<Algebra> {
        &self.algebras[i]
    }

    pub fn algebras(&self) -> &[Arc<Algebra>] {
        &self.algebras
    }

    pub fn bimodule(&self, f: Mor) -> &Bimodule {
        &self.bimodules[f]
    }

    pub fn bimodules(&self) -> &[Bimodule] {
        &self.bimodules
    }

    /// `t_{g,f}`.
    pub fn tau(&self, g: Mor, f: Mor) -> &Matrix {
        self.tau[g * self.index.num_morphisms() + f].as_ref().expect("composable pair")
    }

    /// `n_i`.
    pub fn eta(&self, i: Obj) -> &Matrix {
        &self.eta[i]
    }

    /// `B_g ⊗ B_f` with its quotient.
    pub fn pair(&self, g: Mor, f: Mor) -> &BimoduleTensor {
        self.pairs[g * self.index.num_morphisms() + f].as_ref().expect("composable pair")
    }

    /// Replaces one pair witness; used for mutation fixtures.
    pub fn with_tau(&self, g: Mor, f: Mor, t: Matrix) -> DiagramSpec {
        let mut d = self.clone();
        let n = d.index.num_morphisms();
        assert_eq!(t.shape(), self.tau(g, f).shape());
        d.tau[g * n + f] = Some(t);
        d
    }

    /// Replaces one unit witness; used for mutation fixtures.
    pub fn with_eta(&self, i: Obj, n: Matrix) -> DiagramSpec {
        let mut d = self.clone();
        assert_eq!(n.shape(), self.eta[i].shape());
        d.eta[i] = n;
        d
    }

    /// Whether every witness is the canonical one of the strict diagram
    /// with the same bimodules.
    pub fn is_strict_trivial(&self) -> bool {
        let a = &self.algebras;
        !a.is_empty() && a.iter().all(|x| same_algebra(x, &a[0])) && *self == DiagramSpec::trivial(&self.index, &a[0])
    }

    /// Checks witness invertibility, bimodule linearity and both coherence axioms.
    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new("diagram");
        let c = &self.index;
        r.absorb(c.validate());
        for a in &self.algebras {
            r.absorb(a.validate());
        }
        for (f, b) in self.bimodules.iter().enumerate() {
            let sub = b.validate();
            for v in sub.violations {
                r.fail(&format!("bimodule {}", v.axiom), &[c.morphism_name(f)], v.detail);
            }
        }
        if !r.passed() {
            return r;
        }
        for (g, f) in c.composable_pairs() {
            let gf = c.comp(g, f);
            let t = self.tau(g, f);
            let w = [c.morphism_name(g), c.morphism_name(f)];
            r.check(t.is_invertible(), "tau invertible", &w, || "witness is not invertible".into());
            r.check(self.pair(g, f).bimodule.is_bimodule_map_to(&self.bimodules[gf], t), "tau bimodule map", &w, || {
                "witness does not commute with the actions".into()
            });
        }
        for i in 0..c.num_objects() {
            let e = c.identity(i);
            let reg = self.algebras[i].regular_bimodule();
            let w = [c.object_name(i)];
            r.check(self.eta[i].is_invertible(), "eta invertible", &w, || "witness is not invertible".into());
            r.check(reg.is_bimodule_map_to(&self.bimodules[e], &self.eta[i]), "eta bimodule map", &w, || {
                "witness does not commute with the actions".into()
            });
        }
        // Associativity coherence on the plain triple tensor.
        for (h, g) in c.composable_pairs() {
            for f in 0..c.num_morphisms() {
                if c.compose(g, f).is_none() {
                    continue;
                }
                let (hg, gf) = (c.comp(h, g), c.comp(g, f));
                let (bh, bf) = (self.bimodules[h].dim(), self.bimodules[f].dim());
                let field = self.field();
                let inner_gf = self.tau(g, f).mul(&self.pair(g, f).quotient.projection);
                let lhs = self.tau(h, gf).mul(&self.pair(h, gf).quotient.projection).mul(&Matrix::identity(field, bh).kron(&inner_gf));
                let inner_hg = self.tau(h, g).mul(&self.pair(h, g).quotient.projection);
                let rhs = self.tau(hg, f).mul(&self.pair(hg, f).quotient.projection).mul(&inner_hg.kron(&Matrix::identity(field, bf)));
                r.check_eq(&lhs, &rhs, "tau coherence", &[c.morphism_name(h), c.morphism_name(g), c.morphism_name(f)]);
            }
        }
        // Unit coherence against the plain unitors.
        for f in 0..c.num_morphisms() {
            let (i, j) = (c.source(f), c.target(f));
            let b = &self.bimodules[f];
            let field = self.field();
            let (ei, ej) = (c.identity(i), c.identity(j));
            let right = self.tau(f, ei).mul(&self.pair(f, ei).quotient.projection).mul(&Matrix::identity(field, b.dim()).kron(&self.eta[i]));
            r.check_eq(&right, &right_unitor(b), "eta coherence (right)", &[c.morphism_name(f), c.object_name(i)]);
            let left = self.tau(ej, f).mul(&self.pair(ej, f).quotient.projection).mul(&self.eta[j].kron(&Matrix::identity(field, b.dim())));
            r.check_eq(&left, &left_unitor(b), "eta coherence (left)", &[c.object_name(j), c.morphism_name(f)]);
        }
        r
    }

    /// `D_α(M) = B_α ⊗ M`.
    pub fn apply(&self, alpha: Mor, m: &Module) -> Result<Tensor> {
        self.bimodules[alpha].tensor(m)
    }

    /// `D_α(f)` between already computed tensors.
    pub fn apply_on_morphism(&self, alpha: Mor, source: &Tensor, target: &Tensor, f: &Matrix) -> Matrix {
        self.bimodules[alpha].tensor_on_morphism(source, target, f)
    }

    /// `τ_{β,α}(M): D_β D_α M → D_{βα} M`, given `inner = D_α M`,
    /// `outer = D_β(inner)` and `target = D_{βα} M`.
    pub fn tau_component(&self, beta: Mor, alpha: Mor, inner: &Tensor, outer: &Tensor, target: &Tensor) -> Matrix {
        let field = self.field();
        let m = inner.right_dim;
        let pt = self.pair(beta, alpha);
        let tp = self.tau(beta, alpha).mul(&pt.quotient.projection);
        let bb = self.bimodules[beta].dim();
        target
            .quotient
            .projection
            .mul(&tp.kron(&Matrix::identity(field, m)))
            .mul(&Matrix::identity(field, bb).kron(&inner.quotient.section))
            .mul(&outer.quotient.section)
    }

    /// `η_i(M): M → D_{e_i} M` given `target = D_{e_i} M`.
    pub fn eta_component(&self, i: Obj, target: &Tensor) -> Matrix {
        let field = self.field();
        let v = self.eta[i].mul(self.algebras[i].unit());
        target.quotient.projection.mul(&v.kron(&Matrix::identity(field, target.right_dim)))
    }

    /// Pulls the diagram back along `G: J → I`.
    pub fn restrict(&self, g: &CatFunctor) -> Result<DiagramSpec> {
        if g.codomain != self.index {
            return Err(Error::FunctorMismatch("functor codomain is not the index category".into()));
        }
        let j = &g.domain;
        let n = j.num_morphisms();
        let algebras = (0..j.num_objects()).map(|x| self.algebras[g.apply_object(x)].clone()).collect();
        let bimodules = (0..n).map(|f| self.bimodules[g.apply_morphism(f)].clone()).collect();
        let mut tau = vec![None; n * n];
        for (a, b) in j.composable_pairs() {
            tau[a * n + b] = Some(self.tau(g.apply_morphism(a), g.apply_morphism(b)).clone());
        }
        let eta = (0..j.num_objects()).map(|x| self.eta[g.apply_object(x)].clone()).collect();
        DiagramSpec::new(j.clone(), algebras, bimodules, tau, eta)
    }

    /// Exactness of every `D_α` (projectivity of `B_α` as a right module).
    pub fn exactness_report(&self) -> ExactnessReport {
        let c = &self.index;
        let edges: Vec<EdgeExactness> = (0..c.num_morphisms())
            .map(|f| EdgeExactness {
                morphism: c.morphism_name(f).to_string(),
                right_exact: true,
                exact: self.bimodules[f].is_right_projective(),
                preserves_coproducts: true,
                endomorphism: c.source(f) == c.target(f),
            })
            .collect();
        let is_exact = edges.iter().all(|e| e.exact);
        let is_locally_exact = edges.iter().filter(|e| e.endomorphism).all(|e| e.exact);
        ExactnessReport { edges, is_exact, is_locally_exact, admits_right_adjoints: true }
    }

    /// The dual diagram on `I^op`: vertex algebras `A_i^op`, each `B_α` read as
    /// an `(A_s^op, A_t^op)`-bimodule, and `τ^∨_{α,β}(b_α ⊗ b_β) = τ_{β,α}(b_β ⊗ b_α)`.
    ///
    /// Representations transport by [`crate::rep::Representation::dual`].
    pub fn dual(&self) -> Result<DiagramSpec> {
        let op = self.index.opposite();
        let mut cache: Vec<(Arc<Algebra>, Arc<Algebra>)> = Vec::new();
        let algebras: Vec<Arc<Algebra>> = self
            .algebras
            .iter()
            .map(|a| {
                if let Some((_, o)) = cache.iter().find(|(x, _)| Arc::ptr_eq(x, a)) {
                    return o.clone();
                }
                let o = Arc::new(a.opposite());
                cache.push((a.clone(), o.clone()));
                o
            })
            .collect();
        let bimodules = (0..op.num_morphisms())
            .map(|f| {
                let b = &self.bimodules[f];
                let (s, t) = (op.source(f), op.target(f));
                Bimodule::new(&algebras[t], &algebras[s], b.dim(), b.right_action().to_vec(), b.left_action().to_vec())
            })
            .collect::<Result<Vec<_>>>()?;
        let field = self.field();
        let n = op.num_morphisms();
        let mut tau = vec![None; n * n];
        for (g, f) in op.composable_pairs() {
            // g ∘_op f = f ∘ g in the original category.
            let pair = bimodules[g].tensor_bimodule(&bimodules[f])?;
            let (bg, bf) = (bimodules[g].dim(), bimodules[f].dim());
            let swap = Matrix::from_fn(field, bf * bg, bg * bf, |row, col| {
                let (p, r) = (col / bf, col % bf);
                if row == r * bg + p {
                    field.one()
                } else {
                    field.zero()
                }
            });
            tau[g * n + f] = Some(self.tau(f, g).mul(&self.pair(f, g).quotient.projection).mul(&swap).mul(&pair.quotient.section));
        }
        DiagramSpec::new(op, algebras, bimodules, tau, self.eta.clone())
    }
}

impl PartialEq for DiagramSpec {
    fn eq(&self, other: &DiagramSpec) -> bool {
        self.index == other.index
            && self.algebras.len() == other.algebras.len()
            && self.algebras.iter().zip(&other.algebras).all(|(a, b)| same_algebra(a, b))
            && self.bimodules == other.bimodules
            && self.tau == other.tau
            && self.eta == other.eta
    }
}

/// Plain map `B ⊗_k C → B''` sending `e_p ⊗ e_r` to `e_p · f(e_r)` in an algebra.
fn multiplication_map(algebra: &Algebra, f: &Matrix) -> Matrix {
    let d = algebra.dim();
    let c = f.cols();
    let mut m = Matrix::zeros(algebra.field(), d, d * c);
    for p in 0..d {
        let lp = algebra.left_multiplication(p);
        for r in 0..c {
            m.set_block(0, p * c + r, &lp.mul(&f.column(r)));
        }
    }
    m
}

/// `B ⊗_k A_i → B`, `e_p ⊗ e_a ↦ e_p · e_a`.
fn right_unitor(b: &Bimodule) -> Matrix {
    let d = b.right_algebra().dim();
    let mut m = Matrix::zeros(b.field(), b.dim(), b.dim() * d);
    for p in 0..b.dim() {
        for a in 0..d {
            m.set_block(0, p * d + a, &b.right_action()[a].column(p));
        }
    }
    m
}

/// `A_j ⊗_k B → B`, `e_a ⊗ e_p ↦ e_a · e_p`.
fn left_unitor(b: &Bimodule) -> Matrix {
    let d = b.left_algebra().dim();
    let mut m = Matrix::zeros(b.field(), b.dim(), d * b.dim());
    for a in 0..d {
        for p in 0..b.dim() {
            m.set_block(0, a * b.dim() + p, &b.left_action()[a].column(p));
        }
    }
    m
}

/// A strict diagram of algebras: a functor from the index category to algebras.
#[derive(Clone, Debug)]
pub struct RingDiagram {
    pub index: FinCategory,
    pub algebras: Vec<Arc<Algebra>>,
    /// `R_α: R_{s(α)} → R_{t(α)}` as a `dim R_t x dim R_s` matrix.
    pub edge_maps: Vec<Matrix>,
}

impl RingDiagram {
    /// The constant diagram with identity edge maps.
    pub fn constant(index: &FinCategory, algebra: &Arc<Algebra>) -> RingDiagram {
        let id = Matrix::identity(algebra.field(), algebra.dim());
        RingDiagram { index: index.clone(), algebras: vec![algebra.clone(); index.num_objects()], edge_maps: vec![id; index.num_morphisms()] }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new("ring diagram");
        let c = &self.index;
        if self.algebras.len() != c.num_objects() || self.edge_maps.len() != c.num_morphisms() {
            r.fail("shape", &[], "data does not cover the index category".into());
            return r;
        }
        for f in 0..c.num_morphisms() {
            let (s, t) = (&self.algebras[c.source(f)], &self.algebras[c.target(f)]);
            r.check(s.is_homomorphism(t, &self.edge_maps[f]), "algebra morphism", &[c.morphism_name(f)], || {
                "edge map is not a unital algebra morphism".into()
            });
        }
        if !r.passed() {
            return r;
        }
        for i in 0..c.num_objects() {
            let id = Matrix::identity(self.algebras[i].field(), self.algebras[i].dim());
            r.check_eq(&self.edge_maps[c.identity(i)], &id, "identity", &[c.object_name(i)]);
        }
        for (g, f) in c.composable_pairs() {
            let lhs = self.edge_maps[c.comp(g, f)].clone();
            r.check_eq(&lhs, &self.edge_maps[g].mul(&self.edge_maps[f]), "composition", &[c.morphism_name(g), c.morphism_name(f)]);
        }
        r
    }

    fn ensure_valid(&self) -> Result<()> {
        match self.validate().first() {
            None => Ok(()),
            Some(v) => Err(Error::NotAFunctor(format!("{} at {:?}", v.axiom, v.witness))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeExactness {
    pub morphism: String,
    pub right_exact: bool,
    pub exact: bool,
    pub preserves_coproducts: bool,
    pub endomorphism: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactnessReport {
    pub edges: Vec<EdgeExactness>,
    pub is_exact: bool,
    pub is_locally_exact: bool,
    pub admits_right_adjoints: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    const F3: Field = Field::Prime(3);

    fn a3() -> FinCategory {
        FinCategory::from_quiver(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap()
    }

    #[test]
    fn trivial_diagrams_validate() {
        for alg in [Algebra::ground(F3), Algebra::truncated_polynomial(F3, 2), Algebra::cyclic_group_algebra(F3, 2)] {
            let d = DiagramSpec::trivial(&a3(), &alg);
            let r = d.validate();
            assert!(r.passed(), "{:?}", r.violations);
            assert!(d.is_strict_trivial());
        }
        let c2 = FinCategory::cyclic_group(2);
        assert!(DiagramSpec::trivial(&c2, &Algebra::ground(Field::Prime(2))).validate().passed());
    }

    #[test]
    fn constant_ring_diagram_is_trivial() {
        let alg = Algebra::truncated_polynomial(F3, 2);
        let d = DiagramSpec::from_ring_diagram(&RingDiagram::constant(&a3(), &alg)).unwrap();
        assert_eq!(d, DiagramSpec::trivial(&a3(), &alg));
    }

    #[test]
    fn ring_diagram_k_to_dual_numbers() {
        let c = FinCategory::from_quiver(&["1", "2"], &[("a", "1", "2")]).unwrap();
        let k = Algebra::ground(F3);
        let dn = Algebra::truncated_polynomial(F3, 2);
        let (two, a) = (c.object("2").unwrap(), c.morphism("a").unwrap());
        let mut algebras = vec![k.clone(); 2];
        algebras[two] = dn.clone();
        let mut edge_maps = vec![Matrix::identity(F3, 1); 3];
        edge_maps[c.identity(two)] = Matrix::identity(F3, 2);
        edge_maps[a] = Matrix::from_i64(F3, &[vec![1], vec![0]]);
        let r = RingDiagram { index: c, algebras, edge_maps };
        let d = DiagramSpec::from_ring_diagram(&r).unwrap();
        assert_eq!(d.bimodule(a).dim(), 2);
        assert!(d.validate().passed());
        let ex = d.exactness_report();
        assert!(ex.is_exact && ex.is_locally_exact);
    }

    #[test]
    fn twisted_diagram_validates_and_scaling_unit_pair_fails() {
        let k = Algebra::ground(F3);
        let d = DiagramSpec::trivial(&a3(), &k);
        let phi: Vec<Matrix> = (0..d.index().num_morphisms()).map(|f| Matrix::identity(F3, 1).scale(&F3.from_i64(1 + (f % 2) as i64))).collect();
        let t = d.twisted(&phi).unwrap();
        assert!(t.validate().passed());
        assert!(!t.is_strict_trivial());
        let c = t.index();
        let (a, e1) = (c.morphism("a").unwrap(), c.morphism("e_1").unwrap());
        let bad = t.with_tau(a, e1, t.tau(a, e1).scale(&F3.from_i64(2)));
        let r = bad.validate();
        assert!(!r.passed());
        assert!(r.violations.iter().all(|v| v.witness.iter().any(|w| w == "a")));
    }

    #[test]
    fn components_are_natural() {
        let alg = Algebra::truncated_polynomial(F3, 2);
        let d = DiagramSpec::trivial(&a3(), &alg);
        let c = d.index();
        let (a, b) = (c.morphism("a").unwrap(), c.morphism("b").unwrap());
        let m = alg.regular_module();
        let inner = d.apply(a, &m).unwrap();
        let outer = d.apply(b, &inner.module).unwrap();
        let target = d.apply(c.comp(b, a), &m).unwrap();
        let tc = d.tau_component(b, a, &inner, &outer, &target);
        assert!(tc.is_invertible());
        // Naturality against multiplication by x.
        let x = alg.left_multiplication(1).clone();
        let dx_inner = d.apply_on_morphism(a, &inner, &inner, &x);
        let dx_outer = d.apply_on_morphism(b, &outer, &outer, &dx_inner);
        let dx_target = d.apply_on_morphism(c.comp(b, a), &target, &target, &x);
        assert_eq!(tc.mul(&dx_outer), dx_target.mul(&tc));
    }

    #[test]
    fn restriction_along_object_inclusion() {
        let d = DiagramSpec::trivial(&a3(), &Algebra::ground(F3));
        let g = d.index().object_inclusion(0);
        let r = d.restrict(&g).unwrap();
        assert_eq!(r.index().num_objects(), 1);
        assert!(r.validate().passed());
    }
}
