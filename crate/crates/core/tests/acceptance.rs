//! The eleven acceptance criteria, each at its threshold and time limit.
//! Prints one PASS/FAIL line per criterion and exits non-zero on any failure.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use diarep::classify::{classify_injective, classify_projective, decompose_projective, phi_proj};
use diarep::diagram::{DiagramSpec, RingDiagram};
use diarep::fincat::{Convention, FinCategory};
use diarep::functors::{fre, generator_check, induce, restrict_rep, AdjunctionKind, AdjunctionWitness};
use diarep::generate::{self, GenRng};
use diarep::linalg::{Field, Matrix};
use diarep::modcat::{Algebra, Module};
use diarep::par::par_map;
use diarep::rep::{is_exact_sequence, ModSystem, RepMorphism, Representation};

const C: Convention = Convention::Comma;
const FIELDS: [Field; 4] = [Field::Prime(2), Field::Prime(3), Field::Prime(101), Field::Rational];

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn a2() -> FinCategory {
    FinCategory::from_quiver(&["1", "2"], &[("a", "1", "2")]).unwrap()
}

fn a3() -> FinCategory {
    FinCategory::from_quiver(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap()
}

fn square() -> FinCategory {
    FinCategory::from_poset(&["1", "2", "3", "4"], &[("1", "2"), ("1", "3"), ("2", "4"), ("3", "4")]).unwrap()
}

/// A random diagram, twisted half of the time.
fn random_diagram(r: &mut GenRng, field: Field, max_objects: usize) -> Result<Arc<DiagramSpec>, String> {
    let d = generate::strict_diagram(r, field, max_objects).map_err(err)?;
    if r.random_bool(0.5) {
        Ok(Arc::new(generate::twist(r, &d).map_err(err)?.0))
    } else {
        Ok(Arc::new(d))
    }
}

fn criterion_1() -> Outcome {
    let mut non_strict = 0;
    for seed in 0..100u64 {
        let mut r = generate::rng(seed);
        let field = FIELDS[seed as usize % 4];
        let d = generate::strict_diagram(&mut r, field, 5).map_err(err)?;
        ensure(d.validate().passed(), || format!("seed {seed}: strict diagram rejected"))?;
        let (t, _) = generate::twist(&mut r, &d).map_err(err)?;
        ensure(t.validate().passed(), || format!("seed {seed}: twisted diagram rejected: {:?}", t.validate().first()))?;
        if t != d {
            non_strict += 1;
        }
        let base = if seed % 2 == 0 { &d } else { &t };
        let m = generate::mutate(&mut r, base).ok_or_else(|| format!("seed {seed}: no mutation site"))?;
        let report = m.diagram.validate();
        let v = report.first().ok_or_else(|| format!("seed {seed}: mutation {:?} not detected", m.site))?;
        ensure(v.witness.iter().any(|w| m.names.contains(w)), || format!("seed {seed}: witness {:?} does not locate {:?}", v.witness, m.names))?;
    }
    ensure(non_strict >= 50, || format!("only {non_strict} twisted diagrams are non-strict"))?;
    Ok(format!("100 strict + 100 twisted valid ({non_strict} non-strict), 100 mutations localized"))
}

fn criterion_2() -> Outcome {
    for seed in 0..50u64 {
        let mut r = generate::rng(1000 + seed);
        let d = random_diagram(&mut r, FIELDS[seed as usize % 4], 4)?;
        let m = generate::representation(&mut r, &d, 3).map_err(err)?;
        let n = generate::representation(&mut r, &d, 3).map_err(err)?;
        let f = generate::morphism(&mut r, &m, &n).map_err(err)?;
        let fac = f.factorization();
        let kernel = fac.kernel_inclusion.clone();
        let coker = fac.cokernel_projection.clone();
        ensure(kernel.is_valid() && coker.is_valid(), || format!("seed {seed}: kernel or cokernel map is not a morphism"))?;
        ensure(kernel.is_mono() && coker.is_epi(), || format!("seed {seed}: kernel not mono or cokernel not epi"))?;
        for (a, b) in [(&kernel, &f), (&f, &coker)] {
            let (exact, _) = is_exact_sequence(a, b).map_err(err)?;
            ensure(exact, || format!("seed {seed}: sequence not exact"))?;
        }
        for i in 0..m.modules().len() {
            let rank = f.components[i].rank();
            ensure(fac.kernel.module(i).dim() == m.module(i).dim() - rank, || format!("seed {seed}: kernel dim at {i}"))?;
            ensure(fac.cokernel.module(i).dim() == n.module(i).dim() - rank, || format!("seed {seed}: cokernel dim at {i}"))?;
        }
        // Agreement on a sequence that is exact only when `M` is zero.
        let zero = RepMorphism::zero(&m, &m);
        let (exact, at) = is_exact_sequence(&zero, &zero).map_err(err)?;
        let independent: Vec<bool> = (0..m.modules().len()).map(|i| m.module(i).dim() == 0).collect();
        ensure(exact == m.is_zero() && at.iter().map(|v| v.exact).collect::<Vec<_>>() == independent, || format!("seed {seed}: exactness disagrees"))?;
    }
    Ok("50 morphisms: 0 → ker → M → N → coker → 0 exact at every vertex".into())
}

fn criterion_3() -> Outcome {
    let mut vertices = 0;
    let mut complements = 0;
    for seed in 0..20u64 {
        let mut r = generate::rng(2000 + seed);
        let n = r.random_range(2..=5);
        let c = generate::acyclic_quiver(&mut r, n, 40).map_err(err)?;
        let alg = if seed % 2 == 0 { Algebra::ground(Field::Prime(3)) } else { Algebra::truncated_polynomial(Field::Prime(3), 2) };
        let base = DiagramSpec::trivial(&c, &alg);
        let d = Arc::new(if seed % 3 == 0 { generate::twist(&mut r, &base).map_err(err)?.0 } else { base });
        for i in 0..c.num_objects() {
            let x = generate::module(&mut r, &alg, 2);
            let g = c.object_inclusion(i);
            let point = Arc::new(d.restrict(&g).map_err(err)?);
            let xr = Representation::build(&point, vec![x.clone()], &Default::default()).map_err(err)?;
            let ind = induce(&d, &g, &xr).map_err(err)?;
            let restricted = restrict_rep(&g, &ind.rep).map_err(err)?;
            let unit = ind.unit(&g, &xr, &restricted);
            let fr = fre(&d, i, &x).map_err(err)?;
            let comparison = fr.extend(&ind.rep, &unit.components[0]);
            ensure(comparison.is_valid() && comparison.is_iso(), || format!("seed {seed}: induce and fre differ at {i}"))?;
            vertices += 1;
        }
        let v = r.random_range(0..c.num_objects());
        let keep: Vec<usize> = (0..c.num_objects()).filter(|&k| k != v).collect();
        let (_, g) = c.full_subcategory(&keep);
        let sub = Arc::new(d.restrict(&g).map_err(err)?);
        let nrep = generate::representation(&mut r, &sub, 2).map_err(err)?;
        let ind = induce(&d, &g, &nrep).map_err(err)?;
        let arrows: Vec<usize> = c.irreducibles().into_iter().filter(|&a| c.target(a) == v).collect();
        let legs: Vec<Matrix> = arrows
            .iter()
            .map(|&a| {
                let j = g.domain.object(c.object_name(c.source(a))).unwrap();
                let pos = ind.comma[v].object_label.iter().position(|&l| l == (j, a)).unwrap();
                ind.colimits[v].legs[pos].clone()
            })
            .collect();
        let total = Matrix::hstack(d.field(), ind.rep.module(v).dim(), &legs);
        ensure(total.is_square() && total.is_invertible(), || format!("seed {seed}: colimit at removed vertex is not the coproduct over arrows"))?;
        for (j, &k) in keep.iter().enumerate() {
            ensure(ind.rep.module(k).dim() == nrep.module(j).dim(), || format!("seed {seed}: induced value changed at kept vertex"))?;
        }
        complements += 1;
    }
    Ok(format!("{vertices} vertex inductions iso to fre; {complements} quiver-minus-vertex coproducts"))
}

fn adjunction_instance(kind: AdjunctionKind, seed: u64) -> Result<diarep::functors::AdjunctionSample, String> {
    let mut r = generate::rng(3000 + 97 * seed + kind as u64);
    let field = if seed % 2 == 0 { Field::Prime(3) } else { Field::Prime(2) };
    let d = random_diagram(&mut r, field, 4)?;
    generate::adjunction_sample(&mut r, kind, &d, 2, C).map_err(err)
}

fn criterion_4() -> Outcome {
    let mut lines = Vec::new();
    for kind in AdjunctionKind::ALL {
        let seeds: Vec<u64> = (0..25).collect();
        let samples = par_map(&seeds, |&s| adjunction_instance(kind, s)).into_iter().collect::<Result<Vec<_>, _>>()?;
        let w = AdjunctionWitness::new(kind, samples);
        if !w.passed {
            let bad = w.samples.iter().position(|s| !s.passed()).unwrap();
            return Err(format!("{} ⊣ {}: sample {bad} failed: {:?}", w.left, w.right, w.samples[bad]));
        }
        lines.push(format!("{}⊣{}", w.left, w.right));
    }
    Ok(format!("25 pairs each for {}", lines.join(", ")))
}

fn criterion_5() -> Outcome {
    for seed in 0..50u64 {
        let mut r = generate::rng(5000 + seed);
        let d = random_diagram(&mut r, FIELDS[seed as usize % 4], 4)?;
        let m = generate::nonzero_representation(&mut r, &d, 2).map_err(err)?;
        let w = generator_check(&m).map_err(err)?;
        let expected = fre(&d, w.object, &Module::free(d.algebra(w.object), w.rank)).map_err(err)?;
        ensure(w.morphism.source.dims() == expected.rep.dims(), || format!("seed {seed}: source is not fre_i(A_i^n)"))?;
        ensure(w.morphism.is_valid() && !w.morphism.is_zero(), || format!("seed {seed}: generator morphism is zero or invalid"))?;
    }
    Ok("50 nonzero representations receive nonzero maps from fre_i(A_i^n)".into())
}

fn criterion_6() -> Outcome {
    let levels = |c: &FinCategory| c.stratify().map(|s| s.levels).map_err(err);
    let names = |v: &[&[&str]]| -> Vec<Vec<String>> { v.iter().map(|l| l.iter().map(|s| s.to_string()).collect()).collect() };
    let tree = FinCategory::from_poset(&["r", "a", "b", "c"], &[("r", "a"), ("r", "b"), ("a", "c")]).unwrap();
    let two_sources = FinCategory::from_quiver(&["x", "y", "z"], &[("f", "x", "z"), ("g", "y", "z")]).unwrap();
    let fixed = [
        (a3(), names(&[&[], &["1"], &["1", "2"], &["1", "2", "3"]])),
        (square(), names(&[&[], &["1"], &["1", "2", "3"], &["1", "2", "3", "4"]])),
        (tree, names(&[&[], &["r"], &["a", "b", "r"], &["a", "b", "c", "r"]])),
        (two_sources, names(&[&[], &["x", "y"], &["x", "y", "z"]])),
        (FinCategory::cyclic_group(2), names(&[&[], &["*"]])),
    ];
    for (c, want) in &fixed {
        ensure(levels(c)? == *want, || format!("levels of {:?} differ", c.objects()))?;
    }
    let mut instances: Vec<FinCategory> = fixed.iter().map(|(c, _)| c.clone()).collect();
    for seed in 0..40u64 {
        let mut r = generate::rng(6000 + seed);
        let n = r.random_range(1..=6);
        instances.push(if seed % 2 == 0 { generate::acyclic_quiver(&mut r, n, 40).map_err(err)? } else { generate::poset(&mut r, n).map_err(err)? });
    }
    for c in &instances {
        let rt = c.rootedness();
        ensure(rt.direct == (rt.locally_trivial && rt.left_rooted == Some(true)), || format!("directness formula fails on {:?}", c.objects()))?;
    }
    let c2 = FinCategory::cyclic_group(2).rootedness();
    ensure(!c2.direct && !c2.locally_trivial && c2.left_rooted == Some(true), || "C2 must be left rooted but not direct".into())?;
    Ok(format!("{} fixed stratifications; directness formula on {} instances", fixed.len(), instances.len()))
}

/// One corpus family: a diagram and every representation with vertex dims ≤ 2.
struct Family {
    label: String,
    diagram: Arc<DiagramSpec>,
    reps: Vec<Representation>,
}

fn corpus() -> Result<Vec<Family>, String> {
    let mut out = Vec::new();
    for field in [Field::Prime(2), Field::Prime(3)] {
        for (cname, c) in [("A2", a2()), ("A3", a3()), ("square", square())] {
            let normal: Vec<usize> = match cname {
                "A2" => vec![c.morphism("a").unwrap()],
                "A3" => vec![c.morphism("b").unwrap()],
                _ => vec![c.morphism("1<2").unwrap(), c.morphism("3<4").unwrap()],
            };
            let k = Algebra::ground(field);
            let trivial = Arc::new(DiagramSpec::trivial(&c, &k));
            let (non_strict, alg) = if field == Field::Prime(2) {
                let t = Algebra::truncated_polynomial(field, 2);
                let unit = Matrix::from_i64(field, &[vec![1, 0], vec![1, 1]]);
                (DiagramSpec::trivial(&c, &t).twisted(&vec![unit; c.num_morphisms()]).map_err(err)?, t)
            } else {
                let two = Matrix::from_i64(field, &[vec![2]]);
                (DiagramSpec::trivial(&c, &k).twisted(&vec![two; c.num_morphisms()]).map_err(err)?, k.clone())
            };
            ensure(!non_strict.is_strict_trivial(), || "twisted corpus diagram is strict".into())?;
            let non_strict = Arc::new(non_strict);
            for (kind, d, a) in [("trivial", trivial, k.clone()), ("non-strict", non_strict, alg)] {
                let ms = generate::small_modules(&a, 2).map_err(err)?;
                let choices = vec![ms; c.num_objects()];
                let reps = generate::enumerate_representations(&d, &choices, &normal).map_err(err)?;
                out.push(Family { label: format!("{cname}/{field:?}/{kind}"), diagram: d, reps });
            }
        }
    }
    Ok(out)
}

fn criterion_7(corpus: &[Family], flags: &mut Vec<Vec<bool>>) -> Outcome {
    let mut total = 0;
    let mut projective = 0;
    for fam in corpus {
        let verdicts = par_map(&fam.reps, |m| classify_projective(&fam.label, m, C).map_err(err));
        let mut oracle = Vec::with_capacity(verdicts.len());
        for (k, v) in verdicts.into_iter().enumerate() {
            let v = v?;
            ensure(v.deciding, || format!("{}: index not left rooted", fam.label))?;
            ensure(v.agreement, || format!("{} #{k}: criterion {} vs oracle {}", fam.label, v.criterion, v.oracle))?;
            projective += v.oracle as usize;
            oracle.push(v.oracle);
        }
        flags.push(oracle);
        total += fam.reps.len();
    }
    Ok(format!("{total} representations in {} families, {projective} projective, 0 disagreements", corpus.len()))
}

fn criterion_8() -> Outcome {
    let trivial = |field: Field| {
        let d = Arc::new(DiagramSpec::trivial(&FinCategory::cyclic_group(2), &Algebra::ground(field)));
        let mut given = std::collections::BTreeMap::new();
        given.insert(d.index().morphism("g").unwrap(), Matrix::identity(field, 1));
        Representation::build(&d, vec![Module::vector_space(d.algebra(0), 1)], &given).map_err(err)
    };
    let h2 = trivial(Field::Prime(2))?;
    ensure(phi_proj(&h2, C).map_err(err)?.member, || "F_2: not in Φ(Proj)".into())?;
    let v2 = classify_projective("k", &h2, C).map_err(err)?;
    ensure(!v2.oracle, || "F_2: oracle claims projective".into())?;
    ensure(v2.vertices[0].map_ok && !v2.vertices[0].class_ok, || "F_2: expected (a) to hold and (b) to fail".into())?;
    let h3 = trivial(Field::Prime(3))?;
    let v3 = classify_projective("k", &h3, C).map_err(err)?;
    ensure(v3.oracle, || "F_3: oracle claims not projective".into())?;
    Ok("C2 trivial rep: F_2 in Φ(Proj) but not projective; F_3 projective".into())
}

fn criterion_9(corpus: &[Family]) -> Outcome {
    let mut total = 0;
    let mut injective = 0;
    for fam in corpus {
        let dual = Arc::new(fam.diagram.dual().map_err(err)?);
        let verdicts = par_map(&fam.reps, |m| {
            let md = m.dual(&dual).map_err(err)?;
            classify_injective(&fam.label, &md, C).map_err(err)
        });
        for (k, v) in verdicts.into_iter().enumerate() {
            let v = v?;
            ensure(v.deciding, || format!("{}: opposite index not right rooted", fam.label))?;
            ensure(v.agreement, || format!("{} #{k}: criterion {} vs oracle {}", fam.label, v.criterion, v.oracle))?;
            injective += v.oracle as usize;
        }
        total += fam.reps.len();
    }
    Ok(format!("{total} dual representations on opposite indices, {injective} injective, 0 disagreements"))
}

/// `flags` holds the oracle verdicts from the projective classification.
fn criterion_10(corpus: &[Family], flags: &[Vec<bool>]) -> Outcome {
    ensure(flags.len() == corpus.len(), || "projective classification did not complete".into())?;
    let mut count = 0;
    for (fam, oracle) in corpus.iter().zip(flags) {
        let projectives: Vec<&Representation> = fam.reps.iter().zip(oracle).filter(|(_, &p)| p).map(|(m, _)| m).collect();
        let found = par_map(&projectives, |m| decompose_projective(m, C).map(|d| d.isomorphism.is_some()).map_err(err));
        for (k, f) in found.into_iter().enumerate() {
            ensure(f?, || format!("{} projective #{k}: no isomorphism to the sum of fre_i(cok_i)", fam.label))?;
        }
        count += projectives.len();
    }
    Ok(format!("{count} projectives decomposed as sums of fre_i(cok_i)"))
}

fn violation_sites(r: &diarep::report::ValidationReport) -> BTreeSet<(String, Vec<String>)> {
    r.violations.iter().map(|v| (v.axiom.clone(), v.witness.clone())).collect()
}

fn criterion_11() -> Outcome {
    let mut mutations = 0;
    for seed in 0..25u64 {
        let mut r = generate::rng(11_000 + seed);
        let field = [Field::Prime(2), Field::Prime(3), Field::Prime(101)][seed as usize % 3];
        let ring: RingDiagram = generate::ring_diagram(&mut r, field).map_err(err)?;
        ensure(ring.validate().passed(), || format!("seed {seed}: ring diagram invalid"))?;
        let d = Arc::new(DiagramSpec::from_ring_diagram(&ring).map_err(err)?);
        let sys = generate::mod_system(&mut r, &ring, 3);
        let rep = sys.to_representation(&d).map_err(err)?;
        let (mod_ok, rep_ok) = (sys.validate().passed(), rep.validate().passed());
        ensure(mod_ok && rep_ok, || format!("seed {seed}: module axioms {mod_ok}, representation axioms {rep_ok}"))?;
        let back = ModSystem::from_representation(&ring, &rep);
        ensure(back.maps == sys.maps, || format!("seed {seed}: transposition does not round-trip"))?;
        let transposes = rep.transpose_structural_maps().map_err(err)?;
        let again = Representation::from_transposes(&d, rep.modules().to_vec(), &transposes).map_err(err)?;
        ensure(again.structural_maps() == rep.structural_maps(), || format!("seed {seed}: tensor-hom transpose does not round-trip"))?;

        let c = &ring.index;
        let sites: Vec<(usize, Vec<Matrix>)> = (0..c.num_morphisms())
            .filter(|&f| c.is_identity(f) || !c.irreducibles().contains(&f))
            .map(|f| (f, generate::semilinear_basis(&ring, f, &sys.modules[c.source(f)], &sys.modules[c.target(f)])))
            .filter(|(_, b)| !b.is_empty())
            .collect();
        if sites.is_empty() {
            continue;
        }
        let (f, basis) = &sites[r.random_range(0..sites.len())];
        let mut bad = sys.clone();
        bad.maps[*f] = bad.maps[*f].add(&basis[r.random_range(0..basis.len())]);
        let mod_report = bad.validate();
        let rep_report = bad.to_representation(&d).map_err(err)?.validate();
        ensure(!mod_report.passed() && !rep_report.passed(), || format!("seed {seed}: mutation at {} undetected", c.morphism_name(*f)))?;
        let (a, b) = (violation_sites(&mod_report), violation_sites(&rep_report));
        ensure(a == b, || format!("seed {seed}: module side {a:?} vs representation side {b:?}"))?;
        mutations += 1;
    }
    Ok(format!("25 ring diagrams agree and round-trip; {mutations} mutations fail identically on both sides"))
}

fn main() {
    let mut failures = 0;
    let mut report = |n: usize, limit: u64, what: &str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let out = f();
        let took = start.elapsed();
        let over = took > Duration::from_secs(limit);
        let (status, detail) = match (&out, over) {
            (Ok(msg), false) => ("PASS", msg.clone()),
            (Ok(msg), true) => ("FAIL", format!("{msg}; over the {limit} s limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("criterion {n:>2} {status} [{:>7.2} s < {limit} s] {what}: {detail}", took.as_secs_f64());
    };
    report(1, 60, "coherence suite", &mut criterion_1);
    report(2, 30, "abelian structure", &mut criterion_2);
    report(3, 60, "Kan extension oracle", &mut criterion_3);
    report(4, 120, "adjunctions", &mut criterion_4);
    report(5, 30, "generators", &mut criterion_5);
    report(6, 10, "stratification and directness", &mut criterion_6);
    let build = Instant::now();
    let corpus = corpus();
    let built = build.elapsed();
    match corpus {
        Ok(corpus) => {
            let mut flags = Vec::new();
            report(7, 300, "projective classification", &mut || {
                criterion_7(&corpus, &mut flags).map(|m| format!("{m} (corpus built in {:.1} s)", built.as_secs_f64()))
            });
            report(8, 5, "counterexample pin", &mut criterion_8);
            report(9, 300, "injective duals", &mut || criterion_9(&corpus));
            report(10, 120, "decomposition", &mut || criterion_10(&corpus, &flags));
        }
        Err(e) => {
            for n in [7, 9, 10] {
                report(n, 300, "corpus", &mut || Err(e.clone()));
            }
            report(8, 5, "counterexample pin", &mut criterion_8);
        }
    }
    report(11, 60, "module-system equivalence", &mut criterion_11);
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 11 acceptance criteria passed");
}
