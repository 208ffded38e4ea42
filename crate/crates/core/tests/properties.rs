//! Structural invariants over seeded random instances.

use std::sync::Arc;

use diarep::classify::phi_proj;
use diarep::fincat::{Convention, FinCategory};
use diarep::functors::{cok_i, eva, fre, lif, restrict_rep, sta_lower, sta_upper, PrimeQuotient};
use diarep::generate::{self, GenRng};
use diarep::linalg::Field;
use diarep::modcat::Algebra;
use diarep::rep::{biproduct, find_isomorphism, hom_dimension, is_exact_sequence, Representation};
use diarep::diagram::DiagramSpec;
use proptest::prelude::*;

const F3: Field = Field::Prime(3);
const C: Convention = Convention::Comma;

fn category(r: &mut GenRng, n: usize, quiver: bool) -> FinCategory {
    if quiver {
        generate::acyclic_quiver(r, n, 20).unwrap()
    } else {
        generate::poset(r, n).unwrap()
    }
}

fn diagram(seed: u64) -> (GenRng, Arc<DiagramSpec>) {
    let mut r = generate::rng(seed);
    let d = generate::strict_diagram(&mut r, F3, 3).unwrap();
    let (t, _) = generate::twist(&mut r, &d).unwrap();
    (r, Arc::new(t))
}

fn same_structure(a: &Representation, b: &Representation) -> bool {
    a.modules() == b.modules() && a.structural_maps() == b.structural_maps()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn opposite_is_an_involution(seed in 0u64..5000, n in 1usize..5, quiver: bool) {
        let mut r = generate::rng(seed);
        let c = category(&mut r, n, quiver);
        prop_assert!(c.validate().passed());
        let op = c.opposite();
        prop_assert!(op.validate().passed());
        let back = op.opposite();
        prop_assert_eq!(back.objects(), c.objects());
        prop_assert_eq!(back.num_morphisms(), c.num_morphisms());
        for f in 0..c.num_morphisms() {
            prop_assert_eq!((back.source(f), back.target(f)), (c.source(f), c.target(f)));
        }
        prop_assert_eq!(op.rootedness().inverse, c.rootedness().direct);
    }

    #[test]
    fn direct_means_locally_trivial_and_rooted(seed in 0u64..5000, n in 1usize..5, quiver: bool) {
        let mut r = generate::rng(seed);
        let c = category(&mut r, n, quiver);
        let ro = c.rootedness();
        prop_assert_eq!(ro.direct, ro.locally_trivial && ro.left_rooted == Some(true));
        for k in [2usize, 3] {
            let g = FinCategory::cyclic_group(k);
            let rg = g.rootedness();
            prop_assert_eq!(rg.direct, rg.locally_trivial && rg.left_rooted == Some(true));
        }
    }

    #[test]
    fn strata_form_an_increasing_chain_of_down_sets(seed in 0u64..5000, n in 1usize..6, quiver: bool) {
        let mut r = generate::rng(seed);
        let c = category(&mut r, n, quiver);
        let s = c.stratify().unwrap();
        prop_assert!(s.exhausted);
        prop_assert!(s.levels[0].is_empty());
        prop_assert_eq!(s.levels.last().unwrap().len(), c.num_objects());
        for w in s.levels.windows(2) {
            prop_assert!(w[0].iter().all(|o| w[1].contains(o)));
            prop_assert!(w[1].len() > w[0].len());
        }
        for level in &s.levels {
            for name in level {
                let j = c.object(name).unwrap();
                for f in 0..c.num_morphisms() {
                    if c.target(f) == j {
                        prop_assert!(level.contains(&c.object_name(c.source(f)).to_string()));
                    }
                }
            }
        }
    }

    #[test]
    fn object_inclusion_comma_is_discrete_on_hom(seed in 0u64..5000, n in 1usize..5, quiver: bool) {
        let mut r = generate::rng(seed);
        let c = category(&mut r, n, quiver);
        for i in 0..c.num_objects() {
            let g = c.object_inclusion(i);
            for j in 0..c.num_objects() {
                let comma = FinCategory::comma(&g, j).unwrap();
                prop_assert!(comma.is_discrete());
                prop_assert_eq!(comma.category.num_objects(), c.hom(i, j).len());
            }
        }
    }

    #[test]
    fn kernel_image_cokernel_sequences_are_exact(seed in 0u64..5000) {
        let (mut r, d) = diagram(seed);
        let m = generate::representation(&mut r, &d, 2).unwrap();
        let n = generate::representation(&mut r, &d, 2).unwrap();
        let w = generate::morphism(&mut r, &m, &n).unwrap();
        let fac = w.factorization();
        prop_assert!(is_exact_sequence(&fac.kernel_inclusion, &w).unwrap().0);
        prop_assert!(is_exact_sequence(&w, &fac.cokernel_projection).unwrap().0);
        for i in 0..d.index().num_objects() {
            prop_assert_eq!(fac.kernel.module(i).dim() + fac.image.module(i).dim(), m.module(i).dim());
            prop_assert_eq!(fac.cokernel.module(i).dim() + fac.image.module(i).dim(), n.module(i).dim());
        }
    }

    #[test]
    fn hom_dimension_is_additive_over_biproducts(seed in 0u64..5000) {
        let (mut r, d) = diagram(seed);
        let a = generate::representation(&mut r, &d, 2).unwrap();
        let b = generate::representation(&mut r, &d, 2).unwrap();
        let n = generate::representation(&mut r, &d, 2).unwrap();
        let ab = biproduct(&d, &[a.clone(), b.clone()]).unwrap().rep;
        prop_assert!(ab.is_valid());
        prop_assert_eq!(hom_dimension(&ab, &n).unwrap(), hom_dimension(&a, &n).unwrap() + hom_dimension(&b, &n).unwrap());
        prop_assert_eq!(hom_dimension(&n, &ab).unwrap(), hom_dimension(&n, &a).unwrap() + hom_dimension(&n, &b).unwrap());
    }

    #[test]
    fn transposed_structure_round_trips(seed in 0u64..5000) {
        let (mut r, d) = diagram(seed);
        let m = generate::representation(&mut r, &d, 2).unwrap();
        let t = m.transpose_structural_maps().unwrap();
        let back = Representation::from_transposes(&d, m.modules().to_vec(), &t).unwrap();
        prop_assert!(same_structure(&m, &back));
        for i in 0..d.index().num_objects() {
            prop_assert!(m.structural(d.index().identity(i)).is_invertible());
        }
    }

    #[test]
    fn restriction_preserves_exactness(seed in 0u64..5000) {
        let (mut r, d) = diagram(seed);
        let c = d.index();
        let keep: Vec<_> = (0..c.num_objects()).filter(|i| i % 2 == 0).collect();
        let (_, g) = c.full_subcategory(&keep);
        let m = generate::representation(&mut r, &d, 2).unwrap();
        let n = generate::representation(&mut r, &d, 2).unwrap();
        let w = generate::morphism(&mut r, &m, &n).unwrap();
        let fac = w.factorization();
        let rm = restrict_rep(&g, &m).unwrap();
        let rk = restrict_rep(&g, &fac.kernel).unwrap();
        for (q, &i) in keep.iter().enumerate() {
            prop_assert_eq!(rm.module(q).dim(), m.module(i).dim());
            prop_assert_eq!(rk.module(q).dim(), fac.kernel.module(i).dim());
        }
    }

    #[test]
    fn lifting_preserves_hom_dimensions(seed in 0u64..5000) {
        let (mut r, d) = diagram(seed);
        let pq = generate::prime_quotient(&mut r, &d).unwrap();
        let n1 = generate::representation(&mut r, &pq.diagram, 2).unwrap();
        let n2 = generate::representation(&mut r, &pq.diagram, 2).unwrap();
        let l1 = lif(&d, &pq, &n1).unwrap();
        let l2 = lif(&d, &pq, &n2).unwrap();
        prop_assert!(l1.is_valid() && l2.is_valid());
        prop_assert_eq!(hom_dimension(&l1, &l2).unwrap(), hom_dimension(&n1, &n2).unwrap());
    }

    #[test]
    fn stalks_of_frees_on_direct_indices(seed in 0u64..5000) {
        let (mut r, d) = diagram(seed);
        prop_assume!(d.index().rootedness().direct);
        for i in 0..d.index().num_objects() {
            let x = generate::module(&mut r, d.algebra(i), 2);
            let free = fre(&d, i, &x).unwrap();
            prop_assert_eq!(eva(&free.rep, i).dim(), x.dim());
            prop_assert_eq!(cok_i(&free.rep, i, C).unwrap().dim(), x.dim());
            let up = sta_upper(&d, i, &x).unwrap();
            let low = sta_lower(&d, i, &x).unwrap();
            prop_assert!(find_isomorphism(&up, &low).unwrap().is_some());
        }
    }

    #[test]
    fn phi_is_closed_under_sums_and_summands(seed in 0u64..5000) {
        let (mut r, d) = diagram(seed);
        let a = generate::representation(&mut r, &d, 2).unwrap();
        let b = generate::representation(&mut r, &d, 2).unwrap();
        let ab = biproduct(&d, &[a.clone(), b.clone()]).unwrap().rep;
        let both = phi_proj(&a, C).unwrap().member && phi_proj(&b, C).unwrap().member;
        prop_assert_eq!(phi_proj(&ab, C).unwrap().member, both);
    }
}

#[test]
fn prime_quotient_at_a_vertex_keeps_only_that_vertex() {
    let c = FinCategory::from_quiver(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap();
    let d = DiagramSpec::trivial(&c, &Algebra::ground(F3));
    for i in 0..3 {
        let pq = PrimeQuotient::at_object(&d, i).unwrap();
        assert_eq!(pq.quotient().objects(), &[c.object_name(i).to_string()]);
    }
}
