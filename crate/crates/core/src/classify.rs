//! Φ/Ψ membership, the projective and injective criteria, and their oracles.

use std::sync::Arc;

use serde::Serialize;

use crate::diagram::DiagramSpec;
use crate::error::{Error, Result};
use crate::fincat::{Convention, Obj};
use crate::functors::{cok_p, coinduce, fre, ker_p, phi_map, psi_map, PrimeQuotient};
use crate::linalg::{Field, Matrix};
use crate::modcat::{Algebra, Module};
use crate::rep::{biproduct, combine, find_isomorphism, hom_basis, RepMorphism, Representation};

fn flatten(field: Field, w: &RepMorphism) -> Matrix {
    let parts: Vec<Matrix> = w.components.iter().map(|c| c.vectorize()).collect();
    Matrix::vstack(field, 1, &parts)
}

/// Solves `Σ c_k v_k = target` over the given candidate morphisms.
fn solve_combination(field: Field, images: &[RepMorphism], target: &RepMorphism) -> Option<Vec<crate::linalg::Scalar>> {
    let rhs = flatten(field, target);
    if images.is_empty() {
        return rhs.is_zero().then(Vec::new);
    }
    let cols: Vec<Matrix> = images.iter().map(|w| flatten(field, w)).collect();
    let x = Matrix::hstack(field, rhs.rows(), &cols).solve(&rhs).ok()?;
    Some((0..x.rows()).map(|r| x.get(r, 0)).collect())
}

/// A section `s` with `g ∘ s = id`, if one exists.
pub fn split_epi(g: &RepMorphism) -> Result<Option<RepMorphism>> {
    let field = g.source.field();
    let basis = hom_basis(&g.target, &g.source)?;
    let images: Vec<RepMorphism> = basis.iter().map(|b| g.after(b)).collect();
    Ok(solve_combination(field, &images, &g.target.identity()).map(|c| combine(&g.target, &g.source, &basis, &c)))
}

/// A retraction `r` with `r ∘ m = id`, if one exists.
pub fn split_mono(m: &RepMorphism) -> Result<Option<RepMorphism>> {
    let field = m.source.field();
    let basis = hom_basis(&m.target, &m.source)?;
    let images: Vec<RepMorphism> = basis.iter().map(|b| b.after(m)).collect();
    Ok(solve_combination(field, &images, &m.source.identity()).map(|c| combine(&m.target, &m.source, &basis, &c)))
}

/// Result of splitting the canonical epi (or mono) of a representation.
#[derive(Clone, Debug)]
pub struct OracleVerdict {
    pub holds: bool,
    /// The canonical epi `⊕ fre_i(A_i^n) → H` or mono `I → ⊕ coinduced`.
    pub canonical: RepMorphism,
    /// Section or retraction when `holds`.
    pub witness: Option<RepMorphism>,
}

/// Projective iff the canonical epi from free representations splits.
pub fn projective_oracle(h: &Representation) -> Result<OracleVerdict> {
    let d = h.diagram();
    let field = d.field();
    let mut frees = Vec::new();
    let mut maps = Vec::new();
    for i in 0..d.index().num_objects() {
        if h.module(i).dim() == 0 {
            continue;
        }
        let (free, cover) = h.module(i).free_cover();
        let fr = fre(d, i, &free)?;
        maps.push(fr.extend(h, &cover));
        frees.push(fr.rep);
    }
    let sum = biproduct(d, &frees)?;
    let mut components: Vec<Matrix> = (0..d.index().num_objects()).map(|j| Matrix::zeros(field, h.module(j).dim(), sum.rep.module(j).dim())).collect();
    for (k, g) in maps.iter().enumerate() {
        for (j, c) in components.iter_mut().enumerate() {
            c.add_assign(&g.components[j].mul(&sum.projections[k].components[j]));
        }
    }
    let canonical = RepMorphism { source: sum.rep, target: h.clone(), components };
    debug_assert!(canonical.is_valid() && canonical.is_epi());
    let witness = split_epi(&canonical)?;
    Ok(OracleVerdict { holds: witness.is_some(), canonical, witness })
}

/// `Hom_k(A, X)` as a left `A`-module via `(c·f)(a) = f(ac)`, with the embedding `x ↦ (a ↦ ax)`.
pub fn cofree_hull(x: &Module) -> (Module, Matrix) {
    let alg: &Arc<Algebra> = x.algebra();
    let field = x.field();
    let ix = Matrix::identity(field, x.dim());
    let action = (0..alg.dim()).map(|c| alg.right_multiplication(c).transpose().kron(&ix)).collect();
    let hull = Module::new(alg, alg.dim() * x.dim(), action).expect("cofree module is well formed");
    let embedding = Matrix::vstack(field, x.dim(), x.action());
    (hull, embedding)
}

/// Injective iff the canonical mono into coinduced cofree representations splits.
pub fn injective_oracle(m: &Representation) -> Result<OracleVerdict> {
    let d = m.diagram();
    let c = d.index();
    let field = d.field();
    let mut targets = Vec::new();
    let mut maps = Vec::new();
    for i in 0..c.num_objects() {
        if m.module(i).dim() == 0 {
            continue;
        }
        let g = c.object_inclusion(i);
        let point = Arc::new(d.restrict(&g)?);
        let (hull, embedding) = cofree_hull(m.module(i));
        let hull_rep = Representation::build(&point, vec![hull], &Default::default())?;
        let mi = m.restrict(&g, &point)?;
        let omega = RepMorphism { source: mi, target: hull_rep.clone(), components: vec![embedding] };
        let co = coinduce(d, &g, &hull_rep)?;
        maps.push(co.extend(m, &omega));
        targets.push(co.rep);
    }
    let prod = biproduct(d, &targets)?;
    let mut components: Vec<Matrix> = (0..c.num_objects()).map(|j| Matrix::zeros(field, prod.rep.module(j).dim(), m.module(j).dim())).collect();
    for (k, e) in maps.iter().enumerate() {
        for (j, comp) in components.iter_mut().enumerate() {
            comp.add_assign(&prod.injections[k].components[j].mul(&e.components[j]));
        }
    }
    let canonical = RepMorphism { source: m.clone(), target: prod.rep, components };
    debug_assert!(canonical.is_valid() && canonical.is_mono());
    let witness = split_mono(&canonical)?;
    Ok(OracleVerdict { holds: witness.is_some(), canonical, witness })
}

/// Per-vertex data of a Φ/Ψ test.
#[derive(Clone, Debug, Serialize)]
pub struct VertexVerdict {
    pub object: String,
    /// `φ_i` mono (projective side) or `ψ_i` epi (injective side).
    pub map_ok: bool,
    /// `cok_i`/`ker_i` lies in the vertex class, or `cok_{P_i}`/`ker_{P_i}` is projective/injective.
    pub class_ok: bool,
    pub local_dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Membership {
    pub vertices: Vec<VertexVerdict>,
    pub member: bool,
}

impl Membership {
    fn from_vertices(vertices: Vec<VertexVerdict>) -> Membership {
        let member = vertices.iter().all(|v| v.map_ok && v.class_ok);
        Membership { vertices, member }
    }
}

/// `M ∈ Φ(X_•)`: every `φ_i` is mono and `cok_i(M)` satisfies `class`.
pub fn phi_membership(m: &Representation, class: &dyn Fn(Obj, &Module) -> bool, convention: Convention) -> Result<Membership> {
    let d = m.diagram();
    let vertices = (0..d.index().num_objects())
        .map(|i| {
            let pq = PrimeQuotient::at_object(d, i)?;
            let cok = cok_p(&pq, m, convention)?;
            let q = pq.object_of(i).expect("object kept");
            let phi = &cok.phi[q];
            let local = cok.rep.module(q);
            Ok(VertexVerdict {
                object: d.index().object_name(i).to_string(),
                map_ok: phi.map.rank() == phi.colimit.object.dim(),
                class_ok: class(i, local),
                local_dim: local.dim(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Membership::from_vertices(vertices))
}

/// `M ∈ Ψ(Y_•)`: every `ψ_i` is epi and `ker_i(M)` satisfies `class`.
pub fn psi_membership(m: &Representation, class: &dyn Fn(Obj, &Module) -> bool, convention: Convention) -> Result<Membership> {
    let d = m.diagram();
    let vertices = (0..d.index().num_objects())
        .map(|i| {
            let pq = PrimeQuotient::at_object(d, i)?;
            let ker = ker_p(&pq, m, convention)?;
            let q = pq.object_of(i).expect("object kept");
            let psi = &ker.psi[q];
            let local = ker.rep.module(q);
            Ok(VertexVerdict {
                object: d.index().object_name(i).to_string(),
                map_ok: psi.map.rank() == psi.limit.object.dim(),
                class_ok: class(i, local),
                local_dim: local.dim(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Membership::from_vertices(vertices))
}

/// `Φ(Proj_•)`: vertexwise projective `cok_i`.
pub fn phi_proj(m: &Representation, convention: Convention) -> Result<Membership> {
    phi_membership(m, &|_, x: &Module| x.is_projective(), convention)
}

/// `Ψ(Inj_•)`: vertexwise injective `ker_i`.
pub fn psi_inj(m: &Representation, convention: Convention) -> Result<Membership> {
    psi_membership(m, &|_, x: &Module| x.is_injective(), convention)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Projective,
    Injective,
}

/// Criterion and oracle side by side.
#[derive(Clone, Debug, Serialize)]
pub struct ClassificationVerdict {
    pub subject: String,
    pub side: Side,
    pub vertices: Vec<VertexVerdict>,
    pub criterion: bool,
    /// The criterion is equivalent to the property (left rooted / right rooted index).
    pub deciding: bool,
    pub oracle: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Matrix>>,
    /// `criterion == oracle` when `deciding`; otherwise `criterion || !oracle`.
    pub agreement: bool,
}

impl ClassificationVerdict {
    fn new(subject: &str, side: Side, membership: Membership, deciding: bool, oracle: OracleVerdict) -> ClassificationVerdict {
        let criterion = membership.member;
        let agreement = if deciding { criterion == oracle.holds } else { criterion || !oracle.holds };
        ClassificationVerdict {
            subject: subject.to_string(),
            side,
            vertices: membership.vertices,
            criterion,
            deciding,
            oracle: oracle.holds,
            witness: oracle.witness.map(|w| w.components),
            agreement,
        }
    }
}

/// `φ_j` mono and `cok_{P_j}(H)` projective over `D∘ι_{P_j}`, for every `j`.
pub fn projective_criterion(h: &Representation, convention: Convention) -> Result<Membership> {
    let d = h.diagram();
    let vertices = (0..d.index().num_objects())
        .map(|j| {
            let pq = PrimeQuotient::at_object(d, j)?;
            let cok = cok_p(&pq, h, convention)?;
            let q = pq.object_of(j).expect("object kept");
            let phi = &cok.phi[q];
            Ok(VertexVerdict {
                object: d.index().object_name(j).to_string(),
                map_ok: phi.map.rank() == phi.colimit.object.dim(),
                class_ok: projective_oracle(&cok.rep)?.holds,
                local_dim: cok.rep.module(q).dim(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Membership::from_vertices(vertices))
}

/// `ψ_j` epi and `ker_{P_j}(I)` injective over `D∘ι_{P_j}`, for every `j`.
pub fn injective_criterion(m: &Representation, convention: Convention) -> Result<Membership> {
    let d = m.diagram();
    let vertices = (0..d.index().num_objects())
        .map(|j| {
            let pq = PrimeQuotient::at_object(d, j)?;
            let ker = ker_p(&pq, m, convention)?;
            let q = pq.object_of(j).expect("object kept");
            let psi = &ker.psi[q];
            Ok(VertexVerdict {
                object: d.index().object_name(j).to_string(),
                map_ok: psi.map.rank() == psi.limit.object.dim(),
                class_ok: injective_oracle(&ker.rep)?.holds,
                local_dim: ker.rep.module(q).dim(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Membership::from_vertices(vertices))
}

pub fn classify_projective(subject: &str, h: &Representation, convention: Convention) -> Result<ClassificationVerdict> {
    let rooted = h.diagram().index().rootedness();
    let membership = projective_criterion(h, convention)?;
    let oracle = projective_oracle(h)?;
    Ok(ClassificationVerdict::new(subject, Side::Projective, membership, rooted.left_rooted == Some(true), oracle))
}

pub fn classify_injective(subject: &str, m: &Representation, convention: Convention) -> Result<ClassificationVerdict> {
    let rooted = m.diagram().index().rootedness();
    let membership = injective_criterion(m, convention)?;
    let oracle = injective_oracle(m)?;
    Ok(ClassificationVerdict::new(subject, Side::Injective, membership, rooted.right_rooted == Some(true), oracle))
}

/// A candidate decomposition and the isomorphism found, if any.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub label: &'static str,
    pub candidate: Representation,
    /// `candidate → subject`.
    pub isomorphism: Option<RepMorphism>,
}

/// `P ≅ ⊕_i fre_i(cok_i P)` for a projective `P` over a direct category.
pub fn decompose_projective(p: &Representation, convention: Convention) -> Result<Decomposition> {
    let d = p.diagram();
    if !d.index().rootedness().direct {
        return Err(Error::NotDirect);
    }
    if !projective_oracle(p)?.holds {
        return Err(Error::NotProjective);
    }
    let parts = local_parts(p, convention, true)?.into_iter().map(|(i, x)| Ok(fre(d, i, &x)?.rep)).collect::<Result<Vec<_>>>()?;
    let candidate = biproduct(d, &parts)?.rep;
    let isomorphism = find_isomorphism(&candidate, p)?;
    Ok(Decomposition { label: "sum of fre_i(cok_i)", candidate, isomorphism })
}

/// Both readings of the injective decomposition over an inverse category:
/// `∏_i fre_i(ker_i I)` and `∏_i coinduce_i(ker_i I)`.
pub fn decompose_injective(m: &Representation, convention: Convention) -> Result<Vec<Decomposition>> {
    let d = m.diagram();
    let c = d.index();
    if !c.rootedness().inverse {
        return Err(Error::NotInverse);
    }
    if !injective_oracle(m)?.holds {
        return Err(Error::NotInjective);
    }
    let locals = local_parts(m, convention, false)?;
    let frees = locals.iter().map(|(i, x)| Ok(fre(d, *i, x)?.rep)).collect::<Result<Vec<_>>>()?;
    let coinduced = locals
        .iter()
        .map(|(i, x)| {
            let g = c.object_inclusion(*i);
            let point = Arc::new(d.restrict(&g)?);
            let xr = Representation::build(&point, vec![x.clone()], &Default::default())?;
            Ok(coinduce(d, &g, &xr)?.rep)
        })
        .collect::<Result<Vec<_>>>()?;
    [("product of fre_i(ker_i)", frees), ("product of coinduced ker_i", coinduced)]
        .into_iter()
        .map(|(label, parts)| {
            let candidate = biproduct(d, &parts)?.rep;
            let isomorphism = find_isomorphism(&candidate, m)?;
            Ok(Decomposition { label, candidate, isomorphism })
        })
        .collect()
}

fn local_parts(m: &Representation, convention: Convention, cokernel: bool) -> Result<Vec<(Obj, Module)>> {
    let d = m.diagram();
    (0..d.index().num_objects())
        .map(|i| {
            let pq = PrimeQuotient::at_object(d, i)?;
            let q = pq.object_of(i).expect("object kept");
            let local = if cokernel { cok_p(&pq, m, convention)?.rep.module(q).clone() } else { ker_p(&pq, m, convention)?.rep.module(q).clone() };
            Ok((i, local.rebase(d.algebra(i))))
        })
        .collect()
}

/// `φ_i` from the ambient ideal, exposed for image-span checks.
pub fn phi_image_matches_span(m: &Representation, i: Obj, convention: Convention) -> Result<bool> {
    let d = m.diagram();
    let pq = PrimeQuotient::at_object(d, i)?;
    let phi = phi_map(&pq.ideal, m, i, convention)?;
    let field = d.field();
    let spans: Vec<Matrix> = phi.index.object_label.iter().map(|&(_, th)| m.structural(th).clone()).collect();
    let sum = Matrix::hstack(field, m.module(i).dim(), &spans);
    Ok(sum.rank() == phi.map.rank() && sum.spans(&phi.map) && phi.map.spans(&sum))
}

/// `ψ_i` kernel dimension, exposed for tests.
pub fn psi_kernel_dim(m: &Representation, i: Obj, convention: Convention) -> Result<usize> {
    let pq = PrimeQuotient::at_object(m.diagram(), i)?;
    let psi = psi_map(&pq.ideal, m, i, convention)?;
    Ok(m.module(i).dim() - psi.map.rank())
}

/// Trivial-diagram convenience: the diagram of `I` with constant algebra `A`.
pub fn constant_diagram(index: &crate::fincat::FinCategory, algebra: &Arc<Algebra>) -> Arc<DiagramSpec> {
    Arc::new(DiagramSpec::trivial(index, algebra))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FinCategory;
    use std::collections::BTreeMap;

    const F2: Field = Field::Prime(2);
    const F3: Field = Field::Prime(3);

    fn c2_trivial() -> Representation {
        let d = constant_diagram(&FinCategory::cyclic_group(2), &Algebra::ground(F2));
        let mut given = BTreeMap::new();
        given.insert(d.index().morphism("g").unwrap(), Matrix::identity(F2, 1));
        Representation::build(&d, vec![Module::vector_space(d.algebra(0), 1)], &given).unwrap()
    }

    #[test]
    fn c2_trivial_rep_is_in_phi_proj_but_not_projective() {
        let h = c2_trivial();
        assert!(phi_proj(&h, Convention::Comma).unwrap().member);
        let v = classify_projective("k", &h, Convention::Comma).unwrap();
        assert!(!v.oracle);
        assert!(v.vertices[0].map_ok);
        assert!(!v.vertices[0].class_ok);
        assert!(!v.criterion && v.agreement);
        let w = classify_injective("k", &h, Convention::Comma).unwrap();
        assert!(!w.oracle && !w.criterion);
        assert!(psi_inj(&h, Convention::Comma).unwrap().member);
    }

    #[test]
    fn regular_rep_of_c2_is_projective_and_injective() {
        let d = constant_diagram(&FinCategory::cyclic_group(2), &Algebra::ground(F2));
        let fr = fre(&d, 0, &Module::vector_space(d.algebra(0), 1)).unwrap();
        assert_eq!(fr.rep.module(0).dim(), 2);
        let v = classify_projective("kC2", &fr.rep, Convention::Comma).unwrap();
        assert!(v.oracle && v.criterion);
        let w = classify_injective("kC2", &fr.rep, Convention::Comma).unwrap();
        assert!(w.oracle && w.criterion);
    }

    #[test]
    fn a2_classification_agrees_and_decomposes() {
        let c = FinCategory::from_quiver(&["1", "2"], &[("a", "1", "2")]).unwrap();
        let d = constant_diagram(&c, &Algebra::ground(F3));
        let a = c.morphism("a").unwrap();
        let rep = |x: usize, y: usize, m: Matrix| {
            let mut given = BTreeMap::new();
            given.insert(a, m);
            Representation::build(&d, vec![Module::vector_space(d.algebra(0), x), Module::vector_space(d.algebra(1), y)], &given).unwrap()
        };
        let cases = [
            (rep(1, 1, Matrix::identity(F3, 1)), true, true),
            (rep(0, 1, Matrix::zeros(F3, 1, 0)), true, false),
            (rep(1, 0, Matrix::zeros(F3, 0, 1)), false, true),
        ];
        for (m, proj, inj) in cases {
            let v = classify_projective("m", &m, Convention::Comma).unwrap();
            assert!(v.deciding && v.agreement && v.oracle == proj, "{v:?}");
            let w = classify_injective("m", &m, Convention::Comma).unwrap();
            assert!(w.deciding && w.agreement && w.oracle == inj, "{w:?}");
            if proj {
                assert!(decompose_projective(&m, Convention::Comma).unwrap().isomorphism.is_some());
            }
            if inj {
                let ds = decompose_injective(&m, Convention::Comma).unwrap();
                assert!(ds[1].isomorphism.is_some());
            }
            assert!(phi_image_matches_span(&m, 1, Convention::Comma).unwrap());
        }
    }

    #[test]
    fn zero_rep_is_projective_and_injective() {
        let d = constant_diagram(&FinCategory::cyclic_group(2), &Algebra::ground(F2));
        let z = Representation::zero(&d);
        assert!(projective_oracle(&z).unwrap().holds);
        assert!(injective_oracle(&z).unwrap().holds);
        assert!(classify_projective("0", &z, Convention::Comma).unwrap().criterion);
    }

    #[test]
    fn cofree_hull_embeds() {
        let alg = Algebra::truncated_polynomial(F3, 2);
        let x = alg.regular_module();
        let (hull, e) = cofree_hull(&x);
        assert!(hull.validate().passed());
        assert!(x.is_linear_map_to(&hull, &e));
        assert_eq!(e.rank(), x.dim());
        assert!(hull.is_injective());
    }
}
