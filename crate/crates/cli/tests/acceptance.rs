use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use locally_lattice::cayley::{build_example_group, commutator_subgroup, enumerate_relators, order_modulo};
use locally_lattice::cover::{
    classify_2d, classify_d, default_radius, extend_cover, extend_cover_with, recover_deck_group, seed_map,
    validate_cover, CoverStatus, ExtensionOrder, PartialCover, QuotientKind,
};
use locally_lattice::families::{build_klein, build_strange, build_torus, procedure_i, procedure_ii};
use locally_lattice::graph::{girth, is_bipartite, isomorphic, write_edge_list};
use locally_lattice::lattice::{
    build_quotient, is_torsion_free, min_displacement, LatticeAut, SignedPerm, SubgroupSpec,
};
use locally_lattice::local::{is_r_locally, is_weakly_r_locally};
use locally_lattice::surface::{find_wheel_family, glue_surface, SurfaceClass, WheelSearch};
use locally_lattice::Graph;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn aut(images: &[i32], trans: &[i64]) -> LatticeAut {
    LatticeAut::new(SignedPerm::new(images.to_vec()).unwrap(), trans.to_vec()).unwrap()
}

struct Member {
    name: String,
    spec: SubgroupSpec,
    d: usize,
    disp: u64,
}

fn suite() -> Vec<Member> {
    let mut raw: Vec<(String, SubgroupSpec)> = Vec::new();
    for p in 3..=12 {
        for q in [3, 5, 8, 12] {
            for delta in [0, 1] {
                raw.push((
                    format!("T<({p},0),({delta},{q})>"),
                    SubgroupSpec::translations(2, &[vec![p, 0], vec![delta, q]]).unwrap(),
                ));
            }
        }
    }
    raw.push(("T<(9,3),(3,6)>".into(), SubgroupSpec::translations(2, &[vec![9, 3], vec![3, 6]]).unwrap()));
    raw.push(("T<(5,5),(5,-5)>".into(), SubgroupSpec::translations(2, &[vec![5, 5], vec![5, -5]]).unwrap()));
    for k in [3, 4, 6, 9, 12] {
        for l in [3, 5, 7, 10] {
            for s in [-1, 0] {
                raw.push((format!("I({k},{l},{s})"), procedure_i(k, l, s).unwrap()));
            }
        }
    }
    for (k, l) in [(5, 5), (7, 5), (9, 6), (12, 8), (6, 4)] {
        raw.push((format!("II({k},{l})"), procedure_ii(k, l, l, false).unwrap()));
        raw.push((format!("IIr({k},{l})"), procedure_ii(k, l, -1, true).unwrap()));
    }
    for (a, b, c) in [
        (3, 3, 3),
        (3, 4, 5),
        (4, 4, 4),
        (5, 5, 5),
        (5, 6, 7),
        (6, 6, 6),
        (7, 7, 7),
        (7, 8, 9),
        (8, 8, 8),
        (9, 9, 9),
    ] {
        raw.push((
            format!("T3<{a},{b},{c}>"),
            SubgroupSpec::translations(3, &[vec![a, 0, 0], vec![0, b, 0], vec![0, 0, c]]).unwrap(),
        ));
    }
    for a in [4, 6, 8] {
        raw.push((
            format!("T3skew<{a}>"),
            SubgroupSpec::translations(3, &[vec![a, 0, 0], vec![1, a, 0], vec![0, 1, a]]).unwrap(),
        ));
    }
    for (k, b, c) in [(3, 4, 4), (4, 6, 6), (5, 8, 8), (4, 8, 10), (7, 7, 8), (8, 8, 8)] {
        raw.push((
            format!("G3refl({k},{b},{c})"),
            SubgroupSpec::new(
                3,
                vec![
                    aut(&[1, 2, -3], &[k, 0, 0]),
                    LatticeAut::translation(&[0, b, 0]),
                    LatticeAut::translation(&[0, 0, c]),
                ],
            )
            .unwrap(),
        ));
    }
    for (k, b) in [(4, 3), (5, 4), (7, 4), (8, 5)] {
        raw.push((
            format!("G3swap({k},{b})"),
            SubgroupSpec::new(
                3,
                vec![
                    aut(&[1, 3, 2], &[k, 0, 0]),
                    LatticeAut::translation(&[0, b, b]),
                    LatticeAut::translation(&[0, b, -b]),
                ],
            )
            .unwrap(),
        ));
    }
    raw.into_iter()
        .filter_map(|(name, spec)| {
            let disp = min_displacement(&spec).unwrap()?;
            (3..=12).contains(&disp).then(|| Member {
                name,
                d: spec.dim(),
                spec,
                disp,
            })
        })
        .collect()
}

fn criterion_1(suite: &[Member]) -> Outcome {
    let start = Instant::now();
    let n2 = suite.iter().filter(|m| m.d == 2).count();
    let n3 = suite.iter().filter(|m| m.d == 3).count();
    ensure(n2 >= 50 && n3 >= 20, || format!("suite too small: {n2} in d=2, {n3} in d=3"))?;
    let mut checks = 0;
    for m in suite {
        let q = build_quotient(&m.spec).map_err(|e| e.to_string())?;
        for r in 1..=3u64 {
            let strong = is_r_locally(&q.graph, m.d, r as usize).unwrap().holds;
            let weak = is_weakly_r_locally(&q.graph, m.d, r as usize).unwrap().holds;
            ensure(strong == (m.disp >= 2 * r + 2), || {
                format!("{}: D={} r={r} strong={strong}", m.name, m.disp)
            })?;
            ensure(weak == (m.disp >= 2 * r + 1), || format!("{}: D={} r={r} weak={weak}", m.name, m.disp))?;
            checks += 2;
        }
    }
    let el = start.elapsed();
    ensure(el < Duration::from_secs(300), || format!("took {el:?}"))?;
    let (lo, hi) = (
        suite.iter().map(|m| m.disp).min().unwrap(),
        suite.iter().map(|m| m.disp).max().unwrap(),
    );
    Ok(format!("{n2}+{n3} groups, D in {lo}..={hi}, {checks} verdicts agree, {el:.1?}"))
}

fn cover_round_trip(g: &Graph, d: usize) -> Result<PartialCover, String> {
    let seed = seed_map(g, 0, d).map_err(|e| e.to_string())?;
    let pc = extend_cover(g, &seed, default_radius(g, 0)).map_err(|e| e.to_string())?;
    ensure(pc.status == CoverStatus::Valid, || format!("{:?}", pc.obstruction))?;
    Ok(pc)
}

fn criterion_2(suite: &[Member]) -> Outcome {
    let mut n = 0;
    let mut slowest = Duration::ZERO;
    for m in suite.iter().filter(|m| (m.d == 2 && m.disp >= 5) || (m.d == 3 && m.disp >= 7)) {
        let start = Instant::now();
        let g = build_quotient(&m.spec).unwrap().graph;
        let pc = cover_round_trip(&g, m.d).map_err(|e| format!("{}: {e}", m.name))?;
        let dg = recover_deck_group(&pc, &g).map_err(|e| format!("{}: {e}", m.name))?;
        ensure(dg.transitive_on_fiber, || format!("{}: not transitive", m.name))?;
        let back = build_quotient(&dg.spec()).unwrap().graph;
        ensure(isomorphic(&back, &g).is_some(), || format!("{}: quotient not isomorphic", m.name))?;
        let el = start.elapsed();
        ensure(el < Duration::from_secs(10), || format!("{}: took {el:?}", m.name))?;
        slowest = slowest.max(el);
        n += 1;
    }
    ensure(n > 0, || "no eligible instances".into())?;
    Ok(format!("{n} instances, slowest {slowest:.1?}"))
}

fn ll(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_ll"))
        .args(args)
        .arg("--json")
        .output()
        .expect("run ll");
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON from ll {args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr))
    });
    (out.status.code().unwrap_or(-1), v)
}

fn criterion_3(dir: &Path) -> Outcome {
    let start = Instant::now();
    let eg = build_example_group();
    let g = &eg.cayley.graph;
    ensure(eg.elements.len() == 112, || format!("order {}", eg.elements.len()))?;
    ensure(g.regular_degree() == Some(6), || "not 6-regular".into())?;
    ensure(is_bipartite(g).is_bipartite(), || "not bipartite".into())?;
    ensure(girth(g) == Some(4), || format!("girth {:?}", girth(g)))?;
    let rel = enumerate_relators(&eg.cayley, 4).unwrap();
    ensure(rel.nontrivial.len() == 24, || format!("{} relators", rel.nontrivial.len()))?;
    let comm = commutator_subgroup(&eg);
    let ab = 112 / comm.len();
    ensure(ab == 14 && order_modulo(&eg.generators[0], &comm) == 14, || {
        format!("abelianization order {ab}")
    })?;
    ensure(is_r_locally(g, 3, 2).unwrap().holds, || "not 2-locally".into())?;
    ensure(!is_weakly_r_locally(g, 3, 3).unwrap().holds, || "weakly 3-locally".into())?;
    let file = dir.join("example3.txt");
    std::fs::write(&file, write_edge_list(g)).unwrap();
    let (code, v) = ll(&["cover", file.to_str().unwrap(), "-d", "3"]);
    ensure(code == 1 && v["status"] == "OBSTRUCTED", || format!("exit {code}, {}", v["status"]))?;
    let tag = &v["results"]["obstruction"]["tag"];
    ensure(tag == "OPPOSITE_VIOLATION", || format!("tag {tag}"))?;
    let el = start.elapsed();
    ensure(el < Duration::from_secs(30), || format!("took {el:?}"))?;
    Ok(format!("112 elements, 24 relators, C14, OBSTRUCTED/{}, {el:.1?}", tag.as_str().unwrap()))
}

fn criterion_4() -> Outcome {
    let mut cases: Vec<(String, Graph, SurfaceClass)> = Vec::new();
    for p in 5..=10 {
        for q in 5..=10 {
            for delta in 0..=p / 2 {
                cases.push((format!("T({p},{q},{delta})"), build_torus(p, q, delta).unwrap(), SurfaceClass::Torus));
            }
            for t in 0..=2u8 {
                if let Ok(g) = build_klein(p, q, t) {
                    cases.push((format!("K{t}({p},{q})"), g, SurfaceClass::KleinBottle));
                }
            }
            cases.push((format!("S({p},{q})"), build_strange(p, q).unwrap(), SurfaceClass::KleinBottle));
        }
    }
    for (name, g, want) in &cases {
        let pc = cover_round_trip(g, 2).map_err(|e| format!("{name}: {e}"))?;
        let dg = recover_deck_group(&pc, g).map_err(|e| format!("{name}: {e}"))?;
        let by_cover = SurfaceClass::from(classify_2d(&dg).map_err(|e| format!("{name}: {e}"))?);
        let WheelSearch::Found(cert) = find_wheel_family(g) else {
            return Err(format!("{name}: no wheel family"));
        };
        let s = glue_surface(&cert).map_err(|e| format!("{name}: {e}"))?;
        ensure(s.euler == 0, || format!("{name}: euler {}", s.euler))?;
        ensure(by_cover == s.classification && by_cover == *want, || {
            format!("{name}: cover {by_cover:?}, wheel {:?}", s.classification)
        })?;
    }
    Ok(format!("{} instances agree, euler 0 throughout", cases.len()))
}

fn criterion_5(dir: &Path) -> Outcome {
    let file = dir.join("strange57.txt");
    let (code, _) = ll(&["build", "strange", "5", "7", "-o", file.to_str().unwrap()]);
    ensure(code == 0, || format!("build exit {code}"))?;
    let (code, v) = ll(&["cover", file.to_str().unwrap(), "-d", "2"]);
    ensure(code == 0 && v["results"]["classification"] == "KLEIN_BOTTLE", || {
        format!("exit {code}, {}", v["results"]["classification"])
    })?;
    let gens: Vec<LatticeAut> = serde_json::from_value(v["results"]["deck_group"]["generators"].clone())
        .map_err(|e| e.to_string())?;
    let recovered = SubgroupSpec::new(2, gens.clone()).unwrap();
    let glide = aut(&[2, 1], &[5, 2]);
    let trans = LatticeAut::translation(&[5, -5]);
    let stated = SubgroupSpec::new(2, vec![glide.clone(), trans.clone()]).unwrap();
    ensure(recovered.contains(&glide) && recovered.contains(&trans), || {
        "recovered group misses the stated generators".into()
    })?;
    ensure(gens.iter().all(|g| stated.contains(g)), || "stated group misses a recovered generator".into())?;
    let a = build_quotient(&recovered).unwrap().graph;
    let b = build_quotient(&stated).unwrap().graph;
    let g = build_strange(5, 7).unwrap();
    ensure(isomorphic(&a, &b).is_some() && isomorphic(&a, &g).is_some(), || "quotients differ".into())?;
    let shown: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
    Ok(format!("deck group [{}] equals <(y+5,x+2), t(5,-5)>", shown.join("; ")))
}

fn criterion_6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let cases: Vec<(String, Graph, usize, usize)> = vec![
        ("T(8,8,0)".into(), build_torus(8, 8, 0).unwrap(), 2, 12),
        ("T(7,9,2)".into(), build_torus(7, 9, 2).unwrap(), 2, 12),
        ("K0(6,8)".into(), build_klein(6, 8, 0).unwrap(), 2, 12),
        ("S(5,7)".into(), build_strange(5, 7).unwrap(), 2, 12),
        (
            "T3<7,7,7>".into(),
            build_quotient(&SubgroupSpec::translations(3, &[vec![7, 0, 0], vec![0, 7, 0], vec![0, 0, 7]]).unwrap())
                .unwrap()
                .graph,
            3,
            6,
        ),
    ];
    let mut orders = 0;
    let mut perturbed = 0;
    for (name, g, d, radius) in &cases {
        let seed = seed_map(g, 0, *d).unwrap();
        let base = extend_cover(g, &seed, *radius).unwrap();
        ensure(base.is_valid(), || format!("{name}: base cover not valid"))?;
        validate_cover(&base, g).map_err(|e| format!("{name}: {e}"))?;
        let points: Vec<Vec<i64>> = base.assignments().map(|(x, _)| x).collect();
        for _ in 0..10 {
            let mut order = points.clone();
            order.shuffle(&mut rng);
            let pc = extend_cover_with(g, &seed, *radius, &ExtensionOrder::Sweeps(order)).unwrap();
            ensure(pc.is_valid() && pc.cells() == base.cells(), || format!("{name}: order changed the map"))?;
            orders += 1;
        }
        for _ in 0..200 {
            let x = &points[rng.gen_range(0..points.len())];
            let old = base.get(x).unwrap();
            let mut v = rng.gen_range(0..g.vertex_count() - 1);
            if v >= old {
                v += 1;
            }
            let mut bad = base.clone();
            bad.set(x, v).unwrap();
            ensure(validate_cover(&bad, g).is_err(), || format!("{name}: perturbing {x:?} to {v} undetected"))?;
            perturbed += 1;
        }
    }
    // every cell of one small cover, each to every other vertex
    let g = build_torus(5, 5, 0).unwrap();
    let base = extend_cover(&g, &seed_map(&g, 0, 2).unwrap(), 3).unwrap();
    let points: Vec<Vec<i64>> = base.assignments().map(|(x, _)| x).collect();
    for x in &points {
        for v in (0..g.vertex_count()).filter(|&v| Some(v) != base.get(x)) {
            let mut bad = base.clone();
            bad.set(x, v).unwrap();
            ensure(validate_cover(&bad, &g).is_err(), || format!("T(5,5,0): {x:?} -> {v} undetected"))?;
            perturbed += 1;
        }
    }
    Ok(format!("{orders} shuffled orders identical, {perturbed} perturbations rejected"))
}

fn antipodal_group(d: usize) -> SubgroupSpec {
    let mut gens: Vec<LatticeAut> = (0..d)
        .map(|i| {
            let mut t = vec![0; d];
            t[i] = 2 * d as i64;
            LatticeAut::translation(&t)
        })
        .collect();
    gens.push(LatticeAut::new(SignedPerm::negation(d), vec![1; d]).unwrap());
    SubgroupSpec::new(d, gens).unwrap()
}

fn criterion_7() -> Outcome {
    for d in [3usize, 7] {
        let start = Instant::now();
        let spec = antipodal_group(d);
        let disp = min_displacement(&spec).unwrap();
        ensure(disp == Some(d as u64), || format!("d={d}: D = {disp:?}"))?;
        let t = is_torsion_free(&spec).unwrap();
        ensure(!t.torsion_free && t.witness.as_ref().map(|w| w.1) == Some(2), || {
            format!("d={d}: {t:?}")
        })?;
        let kind = classify_d(&spec).unwrap();
        ensure(matches!(kind, QuotientKind::OrbifoldQuotient { order: 2, .. }), || format!("d={d}: {kind:?}"))?;
        let el = start.elapsed();
        ensure(el < Duration::from_secs(1), || format!("d={d}: took {el:?}"))?;
    }
    Ok("D = d, order-2 witness, ORBIFOLD_QUOTIENT at d = 3 and 7".into())
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let suite = suite();
    let criteria: Vec<Criterion> = vec![
        ("locality-displacement equivalence", Box::new(|| criterion_1(&suite))),
        ("covering round trip", Box::new(|| criterion_2(&suite))),
        ("112-vertex counterexample", Box::new(|| criterion_3(dir.path()))),
        ("family classification", Box::new(criterion_4)),
        ("strange-graph group recovery", Box::new(|| criterion_5(dir.path()))),
        ("uniqueness and determinism", Box::new(criterion_6)),
        ("torsion and orbifold detection", Box::new(criterion_7)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(msg) => println!("PASS {} {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
