//! Seeded random instances: categories, diagrams, representations,
//! coherence mutations, ring diagrams and module systems.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::{DiagramSpec, RingDiagram};
use crate::error::{Error, Result};
use crate::fincat::{CatFunctor, Convention, FinCategory, Mor, Obj};
use crate::functors::{
    check_cok_lif, check_cok_sta, check_fre_eva, check_induce_restrict, check_lif_ker, check_restrict_coinduce, check_sta_ker, AdjunctionKind,
    AdjunctionSample, PrimeQuotient,
};
use crate::linalg::{Field, Matrix};
use crate::modcat::{Algebra, LinearSystem, Module, Term};
use crate::rep::{hom_basis, RepMorphism, Representation};

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random acyclic quiver on `n` vertices `v0, ...` with arrows `i → j` for `i < j`,
/// whose free category has at most `max_morphisms` morphisms.
pub fn acyclic_quiver(rng: &mut GenRng, n: usize, max_morphisms: usize) -> Result<FinCategory> {
    if n > max_morphisms {
        return Err(Error::SizeBoundExceeded(format!("{n} objects need at least {n} morphisms")));
    }
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut arrows: Vec<(String, String, String)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(0.45) {
                arrows.push((format!("a{i}_{j}"), names[i].clone(), names[j].clone()));
            }
        }
    }
    loop {
        let vs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let arr: Vec<(&str, &str, &str)> = arrows.iter().map(|(a, s, t)| (a.as_str(), s.as_str(), t.as_str())).collect();
        let c = FinCategory::from_quiver(&vs, &arr)?;
        if c.num_morphisms() <= max_morphisms {
            return Ok(c);
        }
        let k = rng.random_range(0..arrows.len());
        arrows.remove(k);
    }
}

/// Random poset on `n` elements `p0, ...` generated by relations `i < j`.
pub fn poset(rng: &mut GenRng, n: usize) -> Result<FinCategory> {
    let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut rel = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(0.35) {
                rel.push((names[i].as_str(), names[j].as_str()));
            }
        }
    }
    let els: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    FinCategory::from_poset(&els, &rel)
}

/// Random element of `A` as a coordinate column.
fn element(rng: &mut GenRng, alg: &Algebra) -> Matrix {
    Matrix::random(alg.field(), alg.dim(), 1, rng)
}

/// Random module of dimension at most `max_dim`: a vector space over the
/// ground field, otherwise a sum of cyclic quotients of `A`.
pub fn module(rng: &mut GenRng, alg: &Arc<Algebra>, max_dim: usize) -> Module {
    if alg.dim() == 1 {
        return Module::vector_space(alg, rng.random_range(0..=max_dim));
    }
    let regular = alg.regular_module();
    let mut parts = Vec::new();
    let mut used = 0;
    for _ in 0..max_dim {
        let v = element(rng, alg);
        let gens: Vec<Matrix> = (0..alg.dim()).map(|a| alg.left_multiplication(a).mul(&v)).collect();
        let span = Matrix::hstack(alg.field(), alg.dim(), &gens).image();
        let (piece, _) = regular.quotient(&span);
        if piece.dim() == 0 || used + piece.dim() > max_dim || rng.random_bool(0.3) {
            continue;
        }
        used += piece.dim();
        parts.push(piece);
    }
    Module::direct_sum(alg, &parts).expect("parts share the algebra").module
}

/// Random element of `Hom_A(m, n)`.
pub fn module_map(rng: &mut GenRng, m: &Module, n: &Module) -> Result<Matrix> {
    let field = m.field();
    let mut acc = Matrix::zeros(field, n.dim(), m.dim());
    for b in m.hom_basis(n)? {
        acc.add_assign(&b.scale(&field.random(rng)));
    }
    Ok(acc)
}

/// Random representation with vertex dimensions at most `max_dim`.
///
/// Irreducible morphisms get random module maps; composites follow. When the
/// index has relations, draws that violate them are redrawn with sparser maps.
pub fn representation(rng: &mut GenRng, d: &Arc<DiagramSpec>, max_dim: usize) -> Result<Representation> {
    let c = d.index();
    let modules: Vec<Module> = (0..c.num_objects()).map(|i| module(rng, d.algebra(i), max_dim)).collect();
    with_modules(rng, d, modules)
}

/// Like [`representation`] but nonzero at some vertex.
pub fn nonzero_representation(rng: &mut GenRng, d: &Arc<DiagramSpec>, max_dim: usize) -> Result<Representation> {
    let c = d.index();
    let max_dim = max_dim.max(1);
    let mut modules: Vec<Module> = (0..c.num_objects()).map(|i| module(rng, d.algebra(i), max_dim)).collect();
    if modules.iter().all(|m| m.dim() == 0) {
        let i = rng.random_range(0..c.num_objects());
        modules[i] = d.algebra(i).regular_module();
    }
    with_modules(rng, d, modules)
}

fn with_modules(rng: &mut GenRng, d: &Arc<DiagramSpec>, modules: Vec<Module>) -> Result<Representation> {
    let c = d.index();
    let irreducible = c.irreducibles();
    for attempt in 0..48 {
        let keep = 1.0 - attempt as f64 / 48.0;
        let mut given = BTreeMap::new();
        for &f in &irreducible {
            let t = d.apply(f, &modules[c.source(f)])?;
            let m = if rng.random_bool(keep) { module_map(rng, &t.module, &modules[c.target(f)])? } else { Matrix::zeros(d.field(), modules[c.target(f)].dim(), t.module.dim()) };
            given.insert(f, m);
        }
        match Representation::build(d, modules.clone(), &given) {
            Ok(r) => return Ok(r),
            Err(Error::InconsistentRelations(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::InconsistentRelations("no consistent draw found".into()))
}

/// Random morphism `m → n`.
pub fn morphism(rng: &mut GenRng, m: &Representation, n: &Representation) -> Result<RepMorphism> {
    let field = m.field();
    let mut acc = RepMorphism::zero(m, n);
    for b in hom_basis(m, n)? {
        acc = acc.add(&b.scale(&field.random(rng)));
    }
    Ok(acc)
}

/// A bimodule automorphism of `B_f` given by a random central unit of the left algebra.
fn central_unit_twist(rng: &mut GenRng, d: &DiagramSpec, f: Mor) -> Matrix {
    let b = d.bimodule(f);
    let alg = b.left_algebra();
    let field = d.field();
    for _ in 0..32 {
        let v = element(rng, alg);
        let phi = alg.combine(&v, b.left_action());
        if phi.is_invertible() && b.is_bimodule_map_to(b, &phi) {
            return phi;
        }
    }
    Matrix::identity(field, b.dim())
}

/// Conjugates `d` by random central-unit twists on every morphism.
pub fn twist(rng: &mut GenRng, d: &DiagramSpec) -> Result<(DiagramSpec, Vec<Matrix>)> {
    let phi: Vec<Matrix> = (0..d.index().num_morphisms()).map(|f| central_unit_twist(rng, d, f)).collect();
    Ok((d.twisted(&phi)?, phi))
}

/// A random strict diagram (constant algebra) on a random quiver or poset.
pub fn strict_diagram(rng: &mut GenRng, field: Field, max_objects: usize) -> Result<DiagramSpec> {
    let n = rng.random_range(2..=max_objects.max(2));
    let c = if rng.random_bool(0.5) { acyclic_quiver(rng, n, 40)? } else { poset(rng, n)? };
    let alg = if rng.random_bool(0.5) { Algebra::ground(field) } else { Algebra::truncated_polynomial(field, 2) };
    Ok(DiagramSpec::trivial(&c, &alg))
}

/// Where a mutation changed a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MutationSite {
    Tau(Mor, Mor),
    Eta(Obj),
}

#[derive(Clone, Debug)]
pub struct Mutation {
    pub diagram: DiagramSpec,
    pub site: MutationSite,
    /// Object and morphism names a localized witness should mention.
    pub names: Vec<String>,
}

/// Changes one coherence witness so that the axioms fail: rescaling by
/// `c ∉ {0, 1}` when the field allows it, zeroing otherwise.
///
/// Sites are pairs involving an identity, unit witnesses, and pairs of
/// non-identities that extend to a composable triple of non-identities.
pub fn mutate(rng: &mut GenRng, d: &DiagramSpec) -> Option<Mutation> {
    let c = d.index();
    let field = d.field();
    let non_id = |f: Mor| !c.is_identity(f);
    let mut sites: Vec<MutationSite> = (0..c.num_objects()).map(MutationSite::Eta).collect();
    for (g, f) in c.composable_pairs() {
        let in_triple = non_id(g)
            && non_id(f)
            && (0..c.num_morphisms()).any(|h| non_id(h) && (c.compose(h, g).is_some() || c.compose(f, h).is_some()));
        if !non_id(g) || !non_id(f) || in_triple {
            sites.push(MutationSite::Tau(g, f));
        }
    }
    if sites.is_empty() {
        return None;
    }
    let site = sites.swap_remove(rng.random_range(0..sites.len()));
    let scale = |m: &Matrix, rng: &mut GenRng| -> Matrix {
        match field.order() {
            Some(2) => Matrix::zeros(field, m.rows(), m.cols()),
            _ => {
                let mut s = field.random_nonzero(rng);
                while s.is_one() {
                    s = field.random_nonzero(rng);
                }
                m.scale(&s)
            }
        }
    };
    let (diagram, names) = match site {
        MutationSite::Tau(g, f) => {
            let t = scale(d.tau(g, f), rng);
            let mut names = vec![c.morphism_name(g).to_string(), c.morphism_name(f).to_string()];
            for x in [g, f] {
                if c.is_identity(x) {
                    names.push(c.object_name(c.source(x)).to_string());
                }
            }
            (d.with_tau(g, f, t), names)
        }
        MutationSite::Eta(i) => {
            let n = scale(d.eta(i), rng);
            (d.with_eta(i, n), vec![c.object_name(i).to_string(), c.morphism_name(c.identity(i)).to_string()])
        }
    };
    Some(Mutation { diagram, site, names })
}

/// Algebra morphisms between `k` and `k[x]/(x²)` used by [`ring_diagram`].
fn edge_map(rng: &mut GenRng, field: Field, s: &Algebra, t: &Algebra) -> Matrix {
    match (s.dim(), t.dim()) {
        (1, 1) => Matrix::identity(field, 1),
        (1, _) => t.unit().clone(),
        (_, 1) => Matrix::from_fn(field, 1, s.dim(), |_, b| if b == 0 { field.one() } else { field.zero() }),
        _ => {
            let c = field.random(rng);
            Matrix::from_fn(field, 2, 2, |r, col| match (r, col) {
                (0, 0) => field.one(),
                (1, 1) => c.clone(),
                _ => field.zero(),
            })
        }
    }
}

/// Random ring diagram on an A2 or A3 quiver with vertex rings `k` or `k[x]/(x²)`.
pub fn ring_diagram(rng: &mut GenRng, field: Field) -> Result<RingDiagram> {
    let index = if rng.random_bool(0.5) {
        FinCategory::from_quiver(&["1", "2"], &[("a", "1", "2")])?
    } else {
        FinCategory::from_quiver(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")])?
    };
    let k = Algebra::ground(field);
    let t = Algebra::truncated_polynomial(field, 2);
    let algebras: Vec<Arc<Algebra>> = (0..index.num_objects()).map(|_| if rng.random_bool(0.5) { k.clone() } else { t.clone() }).collect();
    let mut edge_maps: Vec<Option<Matrix>> = vec![None; index.num_morphisms()];
    for i in 0..index.num_objects() {
        edge_maps[index.identity(i)] = Some(Matrix::identity(field, algebras[i].dim()));
    }
    for f in index.irreducibles() {
        edge_maps[f] = Some(edge_map(rng, field, &algebras[index.source(f)], &algebras[index.target(f)]));
    }
    fill_composites(&index, &mut edge_maps);
    let r = RingDiagram { index, algebras, edge_maps: edge_maps.into_iter().map(|m| m.expect("free category is generated")).collect() };
    Ok(r)
}

fn fill_composites(c: &FinCategory, maps: &mut [Option<Matrix>]) {
    loop {
        let mut changed = false;
        for (g, f) in c.composable_pairs() {
            let gf = c.comp(g, f);
            if maps[gf].is_none() {
                if let (Some(mg), Some(mf)) = (&maps[g], &maps[f]) {
                    maps[gf] = Some(mg.mul(mf));
                    changed = true;
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// Basis of the semilinear maps `M_i → M_j` along `R_f`.
pub fn semilinear_basis(ring: &RingDiagram, f: Mor, mi: &Module, mj: &Module) -> Vec<Matrix> {
    let c = &ring.index;
    let field = mi.field();
    let (ai, aj) = (&ring.algebras[c.source(f)], &ring.algebras[c.target(f)]);
    let mut sys = LinearSystem::new(field);
    let x = sys.unknown(mj.dim(), mi.dim());
    for a in 0..ai.dim() {
        let image = aj.combine(&ring.edge_maps[f].column(a), mj.action());
        sys.equation(
            mj.dim(),
            mi.dim(),
            vec![Term::new(Matrix::identity(field, mj.dim()), x, mi.action()[a].clone()), Term::new(image.neg(), x, Matrix::identity(field, mi.dim()))],
            None,
        );
    }
    sys.kernel().into_iter().map(|mut b| b.remove(0)).collect()
}

fn semilinear_map(rng: &mut GenRng, ring: &RingDiagram, f: Mor, mi: &Module, mj: &Module) -> Matrix {
    let field = mi.field();
    let mut acc = Matrix::zeros(field, mj.dim(), mi.dim());
    for b in semilinear_basis(ring, f, mi, mj) {
        acc.add_assign(&b.scale(&field.random(rng)));
    }
    acc
}

/// Random module system over `ring` with module dimensions at most `max_dim`.
pub fn mod_system(rng: &mut GenRng, ring: &RingDiagram, max_dim: usize) -> crate::rep::ModSystem {
    let c = &ring.index;
    let modules: Vec<Module> = (0..c.num_objects()).map(|i| module(rng, &ring.algebras[i], max_dim)).collect();
    let mut maps: Vec<Option<Matrix>> = vec![None; c.num_morphisms()];
    for i in 0..c.num_objects() {
        maps[c.identity(i)] = Some(Matrix::identity(modules[i].field(), modules[i].dim()));
    }
    for f in c.irreducibles() {
        maps[f] = Some(semilinear_map(rng, ring, f, &modules[c.source(f)], &modules[c.target(f)]));
    }
    fill_composites(c, &mut maps);
    crate::rep::ModSystem { ring: ring.clone(), modules, maps: maps.into_iter().map(|m| m.expect("free category is generated")).collect() }
}

/// Every element of the finite space spanned by `basis`.
fn span_elements(field: Field, rows: usize, cols: usize, basis: &[Matrix]) -> Result<Vec<Matrix>> {
    let scalars = field.elements().ok_or_else(|| Error::Invalid("exhaustive enumeration needs a finite field".into()))?;
    let mut out = vec![Matrix::zeros(field, rows, cols)];
    for b in basis {
        out = out.iter().flat_map(|m| scalars.iter().map(move |s| m.add(&b.scale(s)))).collect();
    }
    Ok(out)
}

/// `[I_r 0; 0 0]` for every rank `r`.
fn rank_normal_forms(field: Field, rows: usize, cols: usize) -> Vec<Matrix> {
    (0..=rows.min(cols)).map(|r| Matrix::from_fn(field, rows, cols, |i, j| if i == j && i < r { field.one() } else { field.zero() })).collect()
}

/// All representations with vertex modules drawn from `choices` (one list per
/// object) and every module map on irreducible morphisms.
///
/// Arrows in `normal` between ground-field vertices only take rank normal
/// forms; when no two of them share an endpoint this keeps at least one
/// member of every isomorphism class.
pub fn enumerate_representations(d: &Arc<DiagramSpec>, choices: &[Vec<Module>], normal: &[Mor]) -> Result<Vec<Representation>> {
    let c = d.index();
    let field = d.field();
    let arrows = c.irreducibles();
    let mut out = Vec::new();
    let mut pick = vec![0usize; c.num_objects()];
    loop {
        let modules: Vec<Module> = pick.iter().enumerate().map(|(i, &k)| choices[i][k].clone()).collect();
        let mut options: Vec<Vec<Matrix>> = Vec::new();
        for &f in &arrows {
            let (s, t) = (c.source(f), c.target(f));
            let src = d.apply(f, &modules[s])?;
            let (rows, cols) = (modules[t].dim(), src.module.dim());
            let ground = d.algebra(s).dim() == 1 && d.algebra(t).dim() == 1;
            options.push(if ground && normal.contains(&f) {
                rank_normal_forms(field, rows, cols)
            } else {
                span_elements(field, rows, cols, &src.module.hom_basis(&modules[t])?)?
            });
        }
        let mut sel = vec![0usize; arrows.len()];
        loop {
            let given: BTreeMap<Mor, Matrix> = arrows.iter().zip(&sel).zip(&options).map(|((&f, &k), o)| (f, o[k].clone())).collect();
            match Representation::build(d, modules.clone(), &given) {
                Ok(r) => out.push(r),
                Err(Error::InconsistentRelations(_)) => {}
                Err(e) => return Err(e),
            }
            if !advance(&mut sel, &options.iter().map(|o| o.len()).collect::<Vec<_>>()) {
                break;
            }
        }
        if !advance(&mut pick, &choices.iter().map(|v| v.len()).collect::<Vec<_>>()) {
            return Ok(out);
        }
    }
}

/// Odometer increment; `false` once every position wrapped.
fn advance(digits: &mut [usize], radices: &[usize]) -> bool {
    for (d, &r) in digits.iter_mut().zip(radices) {
        *d += 1;
        if *d < r {
            return true;
        }
        *d = 0;
    }
    false
}

/// Modules of dimension at most `max_dim` up to isomorphism, for `k` and `k[x]/(x²)`.
pub fn small_modules(alg: &Arc<Algebra>, max_dim: usize) -> Result<Vec<Module>> {
    let field = alg.field();
    match alg.dim() {
        1 => Ok((0..=max_dim).map(|n| Module::vector_space(alg, n)).collect()),
        2 if **alg == *Algebra::truncated_polynomial(field, 2) => {
            let simple = |n: usize| Module::new(alg, n, vec![Matrix::identity(field, n), Matrix::zeros(field, n, n)]).expect("semisimple module");
            let mut out: Vec<Module> = (0..=max_dim).map(simple).collect();
            for free in 1..=max_dim / 2 {
                for s in 0..=max_dim - 2 * free {
                    let parts = [Module::free(alg, free), simple(s)];
                    out.push(Module::direct_sum(alg, &parts)?.module);
                }
            }
            Ok(out)
        }
        _ => Err(Error::Invalid(format!("no module list for `{}`", alg.name()))),
    }
}

/// A random prime ideal with nonempty proper carrier, or the `P_i` of a random object.
pub fn prime_quotient(rng: &mut GenRng, d: &Arc<DiagramSpec>) -> Result<PrimeQuotient> {
    let c = d.index();
    let i = rng.random_range(0..c.num_objects());
    if c.num_morphisms() <= 10 && rng.random_bool(0.5) {
        let primes: Vec<_> =
            c.prime_ideals(10)?.into_iter().filter(|p| !p.carrier().is_empty() && p.carrier().len() < c.num_morphisms()).collect();
        if !primes.is_empty() {
            return PrimeQuotient::new(d, &primes[rng.random_range(0..primes.len())]);
        }
    }
    PrimeQuotient::at_object(d, i)
}

/// An object inclusion or a random full subcategory containing `i`.
fn index_functor(rng: &mut GenRng, c: &FinCategory, i: Obj) -> CatFunctor {
    if rng.random_bool(0.5) {
        c.object_inclusion(i)
    } else {
        let keep: Vec<Obj> = (0..c.num_objects()).filter(|&k| k == i || rng.random_bool(0.5)).collect();
        c.full_subcategory(&keep).1
    }
}

/// One seeded `(X, Y)` pair for an adjunction over `d`, checked.
pub fn adjunction_sample(rng: &mut GenRng, kind: AdjunctionKind, d: &Arc<DiagramSpec>, max_dim: usize, conv: Convention) -> Result<AdjunctionSample> {
    let i = rng.random_range(0..d.index().num_objects());
    match kind {
        AdjunctionKind::InduceRestrict | AdjunctionKind::RestrictCoinduce => {
            let g = index_functor(rng, d.index(), i);
            let sub = Arc::new(d.restrict(&g)?);
            let on_sub = representation(rng, &sub, max_dim)?;
            let on_d = representation(rng, d, max_dim)?;
            if kind == AdjunctionKind::InduceRestrict {
                check_induce_restrict(d, &g, &on_sub, &on_d)
            } else {
                check_restrict_coinduce(d, &g, &on_d, &on_sub)
            }
        }
        AdjunctionKind::FreEva => {
            let x = module(rng, d.algebra(i), max_dim);
            let y = representation(rng, d, max_dim)?;
            check_fre_eva(d, i, &x, &y)
        }
        AdjunctionKind::CokLif | AdjunctionKind::LifKer => {
            let pq = prime_quotient(rng, d)?;
            let on_q = representation(rng, &pq.diagram, max_dim)?;
            let on_d = representation(rng, d, max_dim)?;
            if kind == AdjunctionKind::CokLif {
                check_cok_lif(d, &pq, &on_d, &on_q, conv)
            } else {
                check_lif_ker(d, &pq, &on_q, &on_d, conv)
            }
        }
        AdjunctionKind::CokSta | AdjunctionKind::StaKer => {
            let x = module(rng, d.algebra(i), max_dim);
            let y = representation(rng, d, max_dim)?;
            if kind == AdjunctionKind::CokSta {
                check_cok_sta(d, i, &y, &x, conv)
            } else {
                check_sta_ker(d, i, &x, &y, conv)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const F3: Field = Field::Prime(3);

    #[test]
    fn quivers_respect_bounds_and_are_deterministic() {
        let a = acyclic_quiver(&mut rng(0), 5, 40).unwrap();
        let b = acyclic_quiver(&mut rng(0), 5, 40).unwrap();
        assert_eq!(a, b);
        assert!(a.num_morphisms() <= 40);
        assert!(a.validate().passed());
    }

    #[test]
    fn enumeration_counts_a2_over_f2() {
        let c = FinCategory::from_quiver(&["1", "2"], &[("a", "1", "2")]).unwrap();
        let k = Algebra::ground(Field::Prime(2));
        let d = Arc::new(DiagramSpec::trivial(&c, &k));
        let ms = small_modules(&k, 1).unwrap();
        let all = enumerate_representations(&d, &[ms.clone(), ms.clone()], &[]).unwrap();
        // (0,0), (1,0), (0,1), (1,1) with a = 0 or 1.
        assert_eq!(all.len(), 5);
        let a = c.morphism("a").unwrap();
        let ms2 = small_modules(&k, 2).unwrap();
        let nf = enumerate_representations(&d, &[ms2.clone(), ms2], &[a]).unwrap();
        assert_eq!(nf.len(), 9 + 5);
    }

    #[test]
    fn mutations_break_coherence() {
        let c = FinCategory::from_quiver(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap();
        let d = DiagramSpec::trivial(&c, &Algebra::ground(F3));
        let mut r = rng(7);
        for _ in 0..20 {
            let m = mutate(&mut r, &d).unwrap();
            let report = m.diagram.validate();
            let v = report.first().expect("mutation is detected");
            assert!(v.witness.iter().any(|w| m.names.contains(w)), "{v:?} vs {:?}", m.names);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn generated_instances_validate(seed in 0u64..10_000) {
            let mut r = rng(seed);
            let d = strict_diagram(&mut r, F3, 4).unwrap();
            prop_assert!(d.validate().passed());
            let (t, _) = twist(&mut r, &d).unwrap();
            prop_assert!(t.validate().passed());
            let d = Arc::new(t);
            let m = representation(&mut r, &d, 2).unwrap();
            prop_assert!(m.is_valid());
            let ring = ring_diagram(&mut r, F3).unwrap();
            prop_assert!(ring.validate().passed());
            let s = mod_system(&mut r, &ring, 3);
            prop_assert!(s.validate().passed());
        }
    }
}
