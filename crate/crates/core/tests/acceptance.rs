//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use capoff::cli::{self, parse_problem, read_problem, to_canonical_json, Problem};
use capoff::fat_graph::{self, FatGraph, ThickeningGenus};
use capoff::homology::{self, LinkData, SurfaceClass};
use capoff::norm_ball::{self, NormBall};
use capoff::surgery_verdict::{self as sv, Outcome, Reason};
use capoff::{Q, Slope};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(format!("{}/corpus/{name}", env!("CARGO_MANIFEST_DIR")))
}

fn corpus_problems() -> Vec<Problem> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus(""))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    files.iter().map(|f| read_problem(f).unwrap()).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    ensure(t.elapsed() < limit, || format!("took {:?}, limit {limit:?}", t.elapsed()))
}

fn sc(v: &[i64]) -> SurfaceClass {
    SurfaceClass::new(v.to_vec())
}

fn linking_minus_two() -> Check {
    let t = Instant::now();
    let link = LinkData::two(1, 1, Q::from_integer(-2)).map_err(|e| e.to_string())?;
    let ball = read_problem(&corpus("figure2.json")).map_err(|e| e.to_string())?.ball;
    let s = sc(&[2, 1]);
    let slopes: Vec<Slope> = (0..2).map(|i| homology::boundary_slope_on(&link, &s, i).unwrap()).collect();
    ensure(slopes == ["1".parse().unwrap(), "4".parse().unwrap()], || format!("slopes {slopes:?}"))?;
    let total = homology::total_boundary_components(&link, &s).unwrap();
    ensure(total == 3, || format!("{total} boundary components"))?;
    ensure(ball.norm(&s) == Ok(3), || "x(2,1) != 3".into())?;
    let g = norm_ball::genus_of_class(&link, &ball, &s).map_err(|e| e.to_string())?;
    ensure(g == 1, || format!("genus {g}"))?;
    let v = sv::verdict_full_fill_2comp(&link, &ball, &s).map_err(|e| e.to_string())?;
    ensure(v.outcome == Outcome::PossiblyExceptional && v.reasons == [Reason::GenusAtMostOne], || format!("{v:?}"))?;
    within(t, Duration::from_secs(1))?;
    Ok("slopes 1, 4; 3 boundary components; genus 1; PossiblyExceptional(GenusAtMostOne)".into())
}

fn random_links(rng: &mut ChaCha8Rng, count: usize) -> Vec<(i64, i64, Q)> {
    let mut out = Vec::new();
    while out.len() < count {
        let (m1, m2) = (rng.gen_range(1..=4i64), rng.gen_range(1..=4i64));
        let divisors: Vec<i64> = (1..=m1.gcd(&m2)).filter(|d| m1.gcd(&m2) % d == 0).collect();
        let d = *divisors.choose(rng).unwrap();
        let k = rng.gen_range(-6..=6i64);
        if k != 0 {
            out.push((m1, m2, Q::new(k, d)));
        }
    }
    out
}

fn slope_of(num: Q, den: Q) -> Slope {
    if den.is_zero() {
        Slope::INFINITY
    } else {
        Slope::from_ratio(num / den)
    }
}

fn sweep() -> Vec<(i64, i64)> {
    let mut v = Vec::new();
    for p in -50i64..=50 {
        for q in -50i64..=50 {
            if p.gcd(&q) == 1 {
                v.push((p, q));
            }
        }
    }
    v
}

fn slope_formulas(links: &[(i64, i64, Q)]) -> Check {
    let t = Instant::now();
    let pairs = sweep();
    let mut checked = 0u64;
    for &(m1, m2, lk) in links {
        let link = LinkData::two(m1, m2, lk).map_err(|e| e.to_string())?;
        for &(p, q) in &pairs {
            let s = sc(&[p, q]);
            let (pm1, qm2) = (Q::from_integer(p * m1), Q::from_integer(q * m2));
            let want = [slope_of(-(qm2 * lk), pm1), slope_of(-(pm1 * lk), qm2)];
            let want_counts = [
                pm1.to_integer().gcd(&(qm2 * lk).to_integer()) as u64,
                (pm1 * lk).to_integer().gcd(&qm2.to_integer()) as u64,
            ];
            for i in 0..2 {
                let got = homology::boundary_slope_on(&link, &s, i).map_err(|e| e.to_string())?;
                let n = homology::boundary_component_count_on(&link, &s, i).map_err(|e| e.to_string())?;
                ensure(got == want[i] && n == want_counts[i], || {
                    format!("m=({m1},{m2}) lk={lk} class ({p},{q}) torus {}: slope {got} vs {}, count {n} vs {}", i + 1, want[i], want_counts[i])
                })?;
                checked += 1;
            }
        }
    }
    within(t, Duration::from_secs(10))?;
    Ok(format!("{checked} torus slopes and counts over {} links", links.len()))
}

fn boundary_bound(links: &[(i64, i64, Q)]) -> Check {
    let pairs = sweep();
    let mut worst = 0u64;
    for &(m1, m2, lk) in links {
        let link = LinkData::two(m1, m2, lk).map_err(|e| e.to_string())?;
        let bound = homology::boundary_bound(&link).map_err(|e| e.to_string())?;
        let closed = (Q::from_integer(2 * m1 * m1 * m2 * m2) * lk.abs()).to_integer() as u64;
        ensure(bound == closed, || format!("bound {bound} vs 2|lk|m1²m2² = {closed}"))?;
        for &(p, q) in &pairs {
            let b = homology::total_boundary_components(&link, &sc(&[p, q])).map_err(|e| e.to_string())?;
            ensure(b <= bound, || format!("({p},{q}) has {b} > {bound} boundary components for m=({m1},{m2}) lk={lk}"))?;
            worst = worst.max(b * 1000 / bound);
        }
    }
    Ok(format!("zero violations; tightest ratio {}.{:03}", worst / 1000, worst % 1000))
}

/// Interior points of the open parallelogram, found with rational
/// barycentric coordinates.
fn brute_interior(u: [i64; 2], v: [i64; 2]) -> u64 {
    let d = Q::from_integer(u[0] * v[1] - u[1] * v[0]);
    let lo = |k: usize| 0.min(u[k]).min(v[k]).min(u[k] + v[k]);
    let hi = |k: usize| 0.max(u[k]).max(v[k]).max(u[k] + v[k]);
    let mut n = 0;
    for x in lo(0)..=hi(0) {
        for y in lo(1)..=hi(1) {
            let s = Q::from_integer(x * v[1] - y * v[0]) / d;
            let t = Q::from_integer(u[0] * y - u[1] * x) / d;
            let one = Q::from_integer(1);
            if s > Q::zero() && s < one && t > Q::zero() && t < one {
                n += 1;
            }
        }
    }
    n
}

fn unimodular_balls() -> Vec<NormBall> {
    let b = |f: &[[i64; 2]]| NormBall::new(f.iter().map(|v| v.to_vec()).collect()).unwrap();
    vec![
        b(&[[2, 2], [2, -2], [-2, 2], [-2, -2]]),
        b(&[[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [-1, -1]]),
        b(&[[3, 1], [-3, -1], [1, 1], [-1, -1], [2, 1], [-2, -1], [1, 0], [-1, 0]]),
    ]
}

fn pick_suite(rng: &mut ChaCha8Rng) -> Check {
    let t = Instant::now();
    let prims: Vec<[i64; 2]> = (-10i64..=10).flat_map(|x| (-10i64..=10).map(move |y| [x, y])).filter(|v| v[0].gcd(&v[1]) == 1).collect();
    let mut pairs = 0u64;
    for (i, &u) in prims.iter().enumerate() {
        for &v in &prims[i + 1..] {
            let det = u[0] * v[1] - u[1] * v[0];
            if det == 0 {
                continue;
            }
            let brute = brute_interior(u, v);
            ensure(brute == det.unsigned_abs() - 1, || format!("{u:?},{v:?}: {brute} interior points, det {det}"))?;
            let lib = norm_ball::interior_lattice_count(&SurfaceClass::from(u), &SurfaceClass::from(v)).map_err(|e| e.to_string())?;
            ensure(lib == brute, || format!("{u:?},{v:?}: library {lib} vs brute {brute}"))?;
            pairs += 1;
        }
    }
    let balls = unimodular_balls();
    let mut samples = 0;
    while samples < 10_000 {
        let ball = balls.choose(rng).unwrap();
        let s = sc(&[rng.gen_range(-60..=60), rng.gen_range(-60..=60)]);
        if !s.is_primitive() || ball.is_corner(&s).unwrap() {
            continue;
        }
        let d = norm_ball::decompose_on_face(ball, &s).map_err(|e| e.to_string())?;
        ensure(d.face.determinant() == 1, || "test ball has a non-unimodular face".into())?;
        ensure(d.c == 1, || format!("{s}: c = {} on a unimodular face", d.c))?;
        let back = &d.face.c1.scaled(d.a) + &d.face.c2.scaled(d.b);
        ensure(back == s, || format!("{s}: decomposition gives {back}"))?;
        samples += 1;
    }
    within(t, Duration::from_secs(30))?;
    Ok(format!("{pairs} parallelograms; {samples} unimodular decompositions"))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Q {
    Q::new(rng.gen_range(-40..=40), rng.gen_range(1..=12))
}

fn norm_axioms(rng: &mut ChaCha8Rng) -> Check {
    let mut total = 0;
    for p in corpus_problems() {
        let ball = &p.ball;
        let n = ball.dim();
        let ev = |v: &[Q]| ball.evaluate(v).unwrap();
        for _ in 0..10_000 {
            let u: Vec<Q> = (0..n).map(|_| random_rational(rng)).collect();
            let v: Vec<Q> = (0..n).map(|_| random_rational(rng)).collect();
            let t = random_rational(rng);
            let sum: Vec<Q> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
            let neg: Vec<Q> = u.iter().map(|a| -a).collect();
            let scaled: Vec<Q> = u.iter().map(|a| a * t).collect();
            let (xu, xv) = (ev(&u), ev(&v));
            ensure(ev(&sum) <= xu + xv, || format!("{}: triangle fails at {u:?}, {v:?}", p.name()))?;
            ensure(ev(&neg) == xu, || format!("{}: symmetry fails at {u:?}", p.name()))?;
            ensure(ev(&scaled) == t.abs() * xu, || format!("{}: homogeneity fails at {u:?}", p.name()))?;
            let zero = u.iter().all(Q::is_zero);
            ensure(zero == xu.is_zero() && xu >= Q::zero(), || format!("{}: positivity fails at {u:?}", p.name()))?;
            total += 1;
        }
    }
    Ok(format!("{total} samples over the corpus balls"))
}

/// Faces as orbits of `h ↦ σ(ι(h))`, computed from the raw permutations.
fn orbit_count(pairing: &[usize], rotation: &[usize]) -> usize {
    let mut seen = vec![false; pairing.len()];
    let mut n = 0;
    for h in 0..pairing.len() {
        if seen[h] {
            continue;
        }
        n += 1;
        let mut x = h;
        while !seen[x] {
            seen[x] = true;
            x = rotation[pairing[x]];
        }
    }
    n
}

fn random_connected_graph(rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<usize>, FatGraph) {
    loop {
        let e = rng.gen_range(1..=8);
        let mut hs: Vec<usize> = (0..2 * e).collect();
        hs.shuffle(rng);
        let mut pairing = vec![0; 2 * e];
        for c in hs.chunks(2) {
            pairing[c[0]] = c[1];
            pairing[c[1]] = c[0];
        }
        let mut rotation: Vec<usize> = (0..2 * e).collect();
        rotation.shuffle(rng);
        let g = FatGraph::from_permutations(pairing.clone(), rotation.clone()).unwrap();
        if g.is_connected() {
            return (pairing, rotation, g);
        }
    }
}

fn ribbon_euler(rng: &mut ChaCha8Rng) -> Check {
    for k in 0..1000 {
        let (pairing, rotation, g) = random_connected_graph(rng);
        let f = fat_graph::faces(&g).len();
        ensure(f == orbit_count(&pairing, &rotation), || format!("graph {k}: face count disagrees with orbit count"))?;
        let chi = g.vertex_count() as i64 - g.edge_count() as i64 + f as i64;
        ensure(chi <= 2 && chi % 2 == 0, || format!("graph {k}: V - E + F = {chi}"))?;
        let want = ((2 - chi) / 2) as u64;
        let got = fat_graph::thickening_genus(&g).map_err(|e| e.to_string())?;
        ensure(got == ThickeningGenus::Connected(want), || format!("graph {k}: genus {got:?}, expected {want}"))?;
    }
    let hand = |pairs: &[[usize; 2]], cycles: &[Vec<usize>], faces: usize, genus: u64| -> Result<(), String> {
        let n = 2 * pairs.len();
        let g = FatGraph::new(n, pairs, cycles, Default::default()).map_err(|e| e.to_string())?;
        let f = fat_graph::faces(&g).len();
        let gg = fat_graph::thickening_genus(&g).map_err(|e| e.to_string())?;
        ensure(f == faces && gg == ThickeningGenus::Connected(genus), || format!("{pairs:?} {cycles:?}: {f} faces, {gg:?}"))
    };
    hand(&[[0, 1]], &[vec![0], vec![1]], 1, 0)?;
    hand(&[[0, 2], [1, 3]], &[vec![0, 1], vec![2, 3]], 2, 0)?;
    hand(&[[0, 2], [1, 3]], &[vec![0, 1, 2, 3]], 1, 1)?;
    Ok("1000 random connected graphs; single edge, planar 2-cycle and interleaved loops exact".into())
}

fn exceptional_sets() -> Check {
    let t = Instant::now();
    let mut over = Vec::new();
    let mut notes = Vec::new();
    for p in corpus_problems().iter().filter(|p| p.link().n() == 2) {
        let (link, ball) = (p.link(), &p.ball);
        let corners: BTreeSet<SurfaceClass> = ball.corners().unwrap().into_iter().collect();
        let sets = [
            ("unimodular", sv::exceptional_set_det1(link, ball)),
            ("unit-orders", sv::exceptional_set_nullhomologous(link, ball)),
            ("general", sv::exceptional_set_general(link, ball)),
        ];
        for (tag, e) in sets {
            let Ok(e) = e else { continue };
            let members: BTreeSet<SurfaceClass> = e.classes().into_iter().collect();
            ensure(corners.is_subset(&members), || format!("{} {tag}: a corner is missing", p.name()))?;
            ensure(e.members.len() as u64 <= e.construction_count, || format!("{} {tag}: construction count exceeded", p.name()))?;
            if !e.within_bound() {
                over.push(format!("{} {tag} |E|={} > {}", p.name(), e.members.len(), e.bound));
            }
            notes.push(format!("{} {tag} {}", p.name(), e.members.len()));
            if tag != "general" {
                continue;
            }
            for x in -30i64..=30 {
                for y in -30i64..=30 {
                    let s = sc(&[x, y]);
                    if s.is_primitive() && !members.contains(&s) {
                        let v = sv::verdict_full_fill_2comp(link, ball, &s).map_err(|e| format!("{} {s}: {e}", p.name()))?;
                        ensure(v.is_guaranteed(), || format!("{} {tag}: {s} outside E but {:?}", p.name(), v.reasons))?;
                    }
                }
            }
        }
    }
    within(t, Duration::from_secs(60))?;
    ensure(over.is_empty(), || {
        format!("soundness and corner containment hold, but the closed-form bound is exceeded: {}", over.join("; "))
    })?;
    Ok(format!("sizes {}", notes.join(", ")))
}

fn ncomp_layers() -> Check {
    let p = read_problem(&corpus("three.json")).map_err(|e| e.to_string())?;
    let (link, ball) = (p.link(), &p.ball);
    let opts = sv::LayerOptions::default();
    let s = sc(&[1, 1, -2]);
    let q = homology::boundary_slope_on(link, &s, 2).unwrap();
    ensure(q == "1".parse().unwrap(), || format!("slope {q}"))?;
    let v = sv::exceptional_ray_layers_ncomp(link, ball, &s, None, &opts).map_err(|e| e.to_string())?;
    ensure(v.reasons == [Reason::DegenerateLayer { pair: Some((1, 2)) }], || format!("{:?}", v.reasons))?;
    let filled = homology::surgered_linking(link, 2, q).map_err(|e| e.to_string())?;
    ensure(filled.lk(0, 1) == Q::zero(), || format!("surgered lk12 = {}", filled.lk(0, 1)))?;
    let z = sc(&[1, -1, 1]);
    ensure(homology::boundary_slope_on(link, &z, 2).unwrap() == Slope::ZERO, || "expected slope 0".into())?;
    let v = sv::exceptional_ray_layers_ncomp(link, ball, &z, None, &opts).map_err(|e| e.to_string())?;
    ensure(v.reasons == [Reason::DegenerateLayer { pair: None }], || format!("{:?}", v.reasons))?;
    let v = sv::exceptional_ray_layers_ncomp(link, ball, &sc(&[1, 2, 3]), None, &opts).map_err(|e| e.to_string())?;
    ensure(v.outcome == Outcome::Indeterminate && v.reasons == [Reason::NeedsFilledNormData], || format!("{v:?}"))?;
    Ok("slope 1 fires the pair layer with surgered lk12 = 0; slope 0 fires; no oracle gives Indeterminate".into())
}

fn cli_determinism() -> Check {
    let mut files = 0;
    for p in corpus_problems() {
        let text = to_canonical_json(&p.file);
        let again = parse_problem(&text, "reparse").map_err(|e| e.to_string())?;
        ensure(again == p && to_canonical_json(&again.file) == text, || format!("{} does not round-trip", p.name()))?;
        files += 1;
    }
    let f = |n: &str| corpus(n).to_string_lossy().into_owned();
    let invocations: Vec<Vec<String>> = vec![
        vec!["norm-eval".into(), f("figure2.json"), "--class".into(), "2,1".into()],
        vec!["--json".into(), "exceptional".into(), f("figure2.json")],
        vec!["verdict".into(), f("square.json"), "--class".into(), "3,2".into()],
        vec!["--json".into(), "verdict".into(), f("three.json"), "--class".into(), "1,2,3".into()],
        vec!["fatgraph".into(), f("figure2.json"), "2".into(), "1".into(), "--pairing".into(), "enumerate".into()],
        vec!["plot".into(), f("skew.json"), "--set".into(), "unit-orders".into()],
    ];
    for args in &invocations {
        let run = || cli::run(std::iter::once("capoff".to_string()).chain(args.iter().cloned()));
        let (a, b) = (run(), run());
        ensure(a == b, || format!("{args:?} is not byte-identical across runs"))?;
        ensure(a.code == 0 || a.code == cli::EXIT_INDETERMINATE, || format!("{args:?} exited {}: {}", a.code, a.stderr))?;
    }
    let mut svgs = 0;
    for name in ["figure2.json", "square.json", "skew.json", "torsion.json"] {
        let r = cli::run(["capoff".to_string(), "plot".into(), f(name)]);
        let doc = roxmltree::Document::parse(&r.stdout).map_err(|e| format!("{name}: {e}"))?;
        let closed = doc.descendants().any(|n| n.attribute("id") == Some("ball") && n.attribute("d").is_some_and(|d| d.ends_with('Z')));
        ensure(doc.root_element().tag_name().name() == "svg" && closed, || format!("{name}: malformed plot"))?;
        svgs += 1;
    }
    Ok(format!("{files} corpus files round-trip; {} invocations repeat byte-identically; {svgs} SVGs well-formed", invocations.len()))
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    let links = random_links(&mut rng, 20);
    let criteria: Vec<(&str, Box<dyn FnOnce(&mut ChaCha8Rng) -> Check>)> = vec![
        ("lk = -2 torus reproduction", Box::new(|_| linking_minus_two())),
        ("slope formulas", Box::new(|_| slope_formulas(&links))),
        ("boundary bound", Box::new(|_| boundary_bound(&links))),
        ("lattice points and unimodular faces", Box::new(pick_suite)),
        ("norm axioms", Box::new(norm_axioms)),
        ("ribbon-graph Euler characteristic", Box::new(ribbon_euler)),
        ("exceptional-set bounds and soundness", Box::new(|_| exceptional_sets())),
        ("n-component layers", Box::new(|_| ncomp_layers())),
        ("CLI determinism and round-trip", Box::new(|_| cli_determinism())),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let r = check(&mut rng);
        let ms = t.elapsed().as_millis();
        match r {
            Ok(detail) => println!("PASS {} {name} ({ms} ms): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name} ({ms} ms): {detail}", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
