//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hypercone_cli::commands::{cmd_facets, cmd_verify_basic, BASIC_TABLE};
use hypercone_cli::driver::{classify, Run, RunConfig, VerifyLevel};
use hypercone_cli::published;
use hypercone_core::bits::Bits;
use hypercone_core::delaunay::{annulator, gram_det, gram_from_distance, is_nondegenerate, realize};
use hypercone_core::equiv::{canonical_form, oracle_equivalent, ColoredGraph, PermGroup};
use hypercone_core::exact::{int_rank, rat, Rat, RatMatrix};
use hypercone_core::facelat::incidence;
use hypercone_core::hypercone::{
    all_cuts, cut_ints, cut_vector, facet_catalog, h_eval, h_eval_int, h_form, pair_count, pairs, BVector,
    DistVec,
};
use hypercone_core::schlafli::{affine_bases, is_strongly_regular, ray_inventory, schlafli_model, AUT_ORDER};

fn run_cached(n: usize, max_corank: usize) -> Result<&'static Run> {
    static RUNS: [OnceLock<Run>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let slot = match n {
        2 => &RUNS[0],
        3 => &RUNS[1],
        6 => &RUNS[2],
        _ => bail!("no cached run for n = {n}"),
    };
    if let Some(r) = slot.get() {
        return Ok(r);
    }
    let mut cfg = RunConfig::new(n, max_corank);
    cfg.verify = VerifyLevel::Full;
    let run = classify(&cfg, |_| {})?;
    Ok(slot.get_or_init(|| run))
}

fn by_rank(run: &Run) -> BTreeMap<usize, usize> {
    run.levels.iter().filter(|l| !l.types.is_empty()).map(|l| (l.rank, l.types.len())).collect()
}

fn c1_facet_totals() -> Result<String> {
    let cat = facet_catalog(6)?;
    ensure!(cat.orbit_reps().len() == 14, "{} orbits", cat.orbit_reps().len());
    ensure!(cat.len() == 3773, "{} facets", cat.len());
    let mut report = Vec::new();
    ensure!(cmd_facets(6, None, &mut report)?, "facets command failed:\n{}", String::from_utf8_lossy(&report));
    let text = String::from_utf8(report)?;
    ensure!(text.contains("geometric classes by certificate (9)"), "class count line missing");
    Ok("14 orbits, 3773 inequalities, 9 geometric classes".into())
}

fn c2_facetness() -> Result<String> {
    let inc = incidence(6)?;
    let cat = facet_catalog(6)?;
    for (k, rep) in cat.orbit_reps().iter().enumerate() {
        let id = inc.facet_id(rep).context("representative not in catalog")?;
        ensure!(inc.is_facet_by_rays(id), "b{} rays do not span a hyperplane", k + 1);
    }
    Ok("all 14 representatives have incident rays spanning dimension 20".into())
}

fn c3_ray_inventory() -> Result<String> {
    let inv = ray_inventory(6)?;
    let inc = incidence(6)?;
    let cat = facet_catalog(6)?;
    ensure!(inv.cut_count() == 63 && inv.cut_orbit_count() == 3, "cuts");
    ensure!(inv.basis_classes().len() == 26 && inv.orbit_count() == 29, "orbits");
    let mut cut_orbits = BTreeMap::new();
    for r in inv.rays().iter().filter(|r| r.is_cut()) {
        *cut_orbits.entry(r.orbit).or_insert(0) += 1;
    }
    ensure!(cut_orbits.values().copied().collect::<Vec<_>>() == vec![7, 21, 35], "cut orbit sizes");
    let mut schlafli = 0;
    for (id, ray) in inv.rays().iter().enumerate().filter(|(_, r)| !r.is_cut()) {
        schlafli += 1;
        let mut tight = 0;
        for b in cat.facets() {
            match h_eval_int(b, &ray.dist) {
                0 => tight += 1,
                v if v > 0 => bail!("ray {id} violates {:?}", b.coords()),
                _ => {}
            }
        }
        ensure!(tight == 20, "ray {id} is tight on {tight} facets");
        ensure!(!gram_det(&ray.dist_vec(6)).eq(&rat(0)), "ray {id} is degenerate");
        let face = inc.closure(&Bits::from_indices(inv.len(), [id]))?;
        ensure!(face.rank == 1 && face.ray_bits.count() == 1, "ray {id} face rank {}", face.rank);
    }
    Ok(format!("63 cuts in 3 orbits + {schlafli} Schläfli rays in 26 orbits = 29 orbits; each Schläfli ray non-degenerate, valid, tight on 20, rank 1"))
}

fn c4_schlafli_model() -> Result<String> {
    let m = schlafli_model()?;
    ensure!(is_strongly_regular(m.graph(), 16, 10, 8), "not SRG(27,16,10,8)");
    let order = m.aut_group().order();
    ensure!(order == AUT_ORDER.into(), "automorphism order {order}");
    for b in affine_bases()? {
        let ann = annulator(&b.dist)?;
        ensure!(ann.len() == 27, "|Ann| = {}", ann.len());
    }
    Ok("SRG(27,16,10,8), |Aut| = 51840, |Ann(d_B)| = 27 for all 26 basis classes".into())
}

fn c5_pipeline() -> Result<String> {
    let t = Instant::now();
    let run = run_cached(6, pair_count(6) - 1)?;
    let prefix: Vec<usize> = run.levels.iter().take(4).map(|l| l.types.len()).collect();
    ensure!(prefix == vec![1, 9, 30, 95], "types at coranks 0..3: {prefix:?}");
    ensure!(run.heredity_violations == 0, "heredity violations");
    let found = by_rank(run);
    let expected: BTreeMap<usize, usize> = published::HYP7_TYPES_BY_RANK.iter().copied().collect();
    for (rank, e) in &expected {
        let f = found.get(rank).copied().unwrap_or(0);
        ensure!(f == *e, "rank {rank}: {f} types, reference {e}");
    }
    let total: usize = found.values().sum();
    Ok(format!(
        "coranks 0..3 -> {prefix:?}; all 21 rank rows match, {total} types in total (stated total {}) ({:.0} s)",
        published::HYP7_STATED_TOTAL,
        t.elapsed().as_secs_f64()
    ))
}

/// Faces of the cut cone `CUT_{n+1}` by direct enumeration of ray subsets,
/// classified with the affine-basis test. Returns non-degenerate types by rank.
fn brute_force_cut_types(n: usize) -> Result<BTreeMap<usize, usize>> {
    let cat = facet_catalog(n)?;
    let cuts = all_cuts(n);
    let incident = |b: &BVector, i: usize| matches!(b.subset_sum(cuts[i].mask()), 0 | 1);
    let mut faces: BTreeSet<u64> = BTreeSet::new();
    for subset in 1u64..1 << cuts.len() {
        let tight: Vec<&BVector> =
            cat.facets().filter(|b| (0..cuts.len()).filter(|i| subset >> i & 1 == 1).all(|i| incident(b, i))).collect();
        let face = (0..cuts.len()).filter(|&i| tight.iter().all(|b| incident(b, i))).fold(0u64, |m, i| m | 1 << i);
        faces.insert(face);
    }
    let big_n = pair_count(n);
    let mut reps: Vec<(usize, Vec<BVector>)> = Vec::new();
    for face in faces {
        let members: Vec<Vec<i64>> = (0..cuts.len()).filter(|i| face >> i & 1 == 1).map(|i| cut_ints(&cuts[i])).collect();
        let rank = int_rank(big_n, members.iter().map(Vec::as_slice));
        let mut sum = vec![0i64; big_n];
        for v in &members {
            sum.iter_mut().zip(v).for_each(|(a, b)| *a += b);
        }
        let d = DistVec::from_ints(n, &sum)?;
        if gram_det(&d) == rat(0) {
            continue;
        }
        let ann = annulator(&d)?;
        let mut known = false;
        for (r, a) in &reps {
            if *r == rank && oracle_equivalent(a, &ann)? {
                known = true;
                break;
            }
        }
        if !known {
            reps.push((rank, ann));
        }
    }
    let mut out = BTreeMap::new();
    for (r, _) in reps {
        *out.entry(r).or_insert(0) += 1;
    }
    Ok(out)
}

fn c6_low_dimensions() -> Result<String> {
    let run2 = run_cached(2, 2)?;
    let found2 = by_rank(run2);
    let expected2: BTreeMap<usize, usize> = published::HYP3_TYPES_BY_RANK.iter().copied().collect();
    ensure!(found2 == expected2, "n = 2 types {found2:?}");
    let run3 = run_cached(3, pair_count(3) - 1)?;
    let found3 = by_rank(run3);
    for l in &run3.levels {
        for t in &l.types {
            let d = DistVec::from_ints(3, &l.rep(t).data.interior)?;
            realize(&d).with_context(|| format!("rank {} type fails the empty-sphere check", l.rank))?;
        }
    }
    let brute = brute_force_cut_types(3)?;
    ensure!(found3 == brute, "n = 3 pipeline {found3:?} vs direct enumeration {brute:?}");
    ensure!(run2.heredity_violations + run3.heredity_violations == 0, "heredity violations");
    Ok(format!(
        "n = 2: {found2:?}; n = 3: {} types {found3:?}, equal to direct enumeration of CUT_4 faces, all realizations empty",
        found3.values().sum::<usize>()
    ))
}

fn dist_of_points(points: &[Vec<i64>]) -> Result<DistVec> {
    let n = points.len() - 1;
    let d: Vec<i64> = pairs(n)
        .map(|(i, j)| points[i].iter().zip(&points[j]).map(|(a, b)| (a - b) * (a - b)).sum())
        .collect();
    Ok(DistVec::from_ints(n, &d)?)
}

fn unit(k: usize) -> Vec<i64> {
    let mut v = vec![0; 6];
    v[k] = 1;
    v
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn c7_cubes() -> Result<String> {
    let zero = vec![0; 6];
    let e: Vec<Vec<i64>> = (0..6).map(unit).collect();
    let cube: Vec<Vec<i64>> = std::iter::once(zero.clone()).chain(e.iter().cloned()).collect();
    let half: Vec<Vec<i64>> = std::iter::once(zero.clone())
        .chain((1..6).map(|k| add(&e[0], &e[k])))
        .chain(std::iter::once(add(&e[1], &e[2])))
        .collect();
    let half5_seg: Vec<Vec<i64>> = std::iter::once(zero.clone())
        .chain((1..5).map(|k| add(&e[0], &e[k])))
        .chain([add(&e[1], &e[2]), e[5].clone()])
        .collect();
    let inc = incidence(6)?;
    let mut parts = Vec::new();
    for (name, pts, vertices, lattice_index) in
        [("6-cube", &cube, 64, 1), ("half 6-cube", &half, 32, 2), ("half 5-cube x segment", &half5_seg, 32, 2)]
    {
        let rows: Vec<Vec<i64>> = pts[1..].to_vec();
        let det = RatMatrix::from_int_rows(&rows)?.det()?;
        ensure!(det.clone() * det == rat(lattice_index * lattice_index), "{name}: basis index");
        let d = dist_of_points(pts)?;
        ensure!(is_nondegenerate(&d)?, "{name} degenerate");
        let ann = annulator(&d)?;
        ensure!(ann.len() == vertices, "{name}: {} vertices", ann.len());
        let forms: Vec<Vec<i64>> = ann.iter().map(h_form).collect();
        let rank = 21 - int_rank(21, forms.iter().map(Vec::as_slice));
        let ints: Vec<i64> = d.values().iter().map(|r| r.to_integer().try_into().unwrap()).collect();
        let face = inc.face_of_point(&ints)?;
        ensure!(rank == 6 && face.rank == 6, "{name}: rank {rank} / {}", face.rank);
        parts.push(format!("{name} rank 6 ({vertices} vertices)"));
    }
    let run = run_cached(6, pair_count(6) - 1)?;
    let mut shapes: Vec<(usize, usize)> = run
        .levels
        .iter()
        .flat_map(|l| l.types.iter().filter(|t| t.maximal == Some(true)).map(move |t| (l.rank, l.rep(t).data.ann.len())))
        .collect();
    shapes.sort();
    ensure!(shapes == vec![(1, 27), (6, 32), (6, 32), (6, 64)], "maximal types {shapes:?}");
    parts.push("exactly 4 maximal types: Schläfli (rank 1, 27 vertices) and three of rank 6 (64, 32, 32)".into());
    Ok(parts.join("; "))
}

fn c8_basicness() -> Result<String> {
    let mut out = Vec::new();
    ensure!(cmd_verify_basic(&mut out)?, "verify-basic failed:\n{}", String::from_utf8_lossy(&out));
    let text = String::from_utf8(out)?;
    let found = text.matches("decomposition found").count();
    ensure!(found == BASIC_TABLE.len(), "{found} decompositions");
    Ok("exact nonnegative decompositions for all 10 table vectors".into())
}

fn c9_oracle_agreement() -> Result<String> {
    let run = run_cached(6, pair_count(6) - 1)?;
    let mut checked = 0;
    let mut pairs_checked = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for l in run.levels.iter().take(4) {
        let members: Vec<(usize, usize)> = if l.corank <= 2 {
            l.types.iter().enumerate().flat_map(|(t, ty)| ty.members.iter().map(move |&f| (t, f))).collect()
        } else {
            let all: Vec<(usize, usize)> =
                l.types.iter().enumerate().flat_map(|(t, ty)| ty.members.iter().map(move |&f| (t, f))).collect();
            all.choose_multiple(&mut rng, 100).copied().collect()
        };
        for &(t, f) in &members {
            let rep = &l.rep(&l.types[t]).data.ann;
            ensure!(oracle_equivalent(rep, &l.faces[f].data.ann)?, "corank {}: face {f} not equivalent to its class", l.corank);
            checked += 1;
        }
        // distinct certificates must not be equivalent
        let probes: Vec<usize> = if l.corank <= 2 {
            l.types.iter().map(|t| t.rep).collect()
        } else {
            members.iter().map(|&(_, f)| f).collect()
        };
        for &f in &probes {
            let cert = l.faces[f].cert.as_ref().unwrap();
            for other in &l.types {
                let g = l.rep(other);
                if g.cert.as_ref() == Some(cert) || g.data.ann.len() != l.faces[f].data.ann.len() {
                    continue;
                }
                if l.corank <= 2 && other.rep <= f {
                    continue;
                }
                ensure!(!oracle_equivalent(&g.data.ann, &l.faces[f].data.ann)?, "corank {}: distinct certificates are equivalent", l.corank);
                pairs_checked += 1;
            }
        }
    }
    Ok(format!("{checked} faces equivalent to their class representative, {pairs_checked} cross-class pairs inequivalent"))
}

fn box_scan(g: &RatMatrix, c: &[Rat], r2: &Rat, lo: i64, hi: i64) -> (Vec<Vec<i64>>, usize) {
    let n = g.rows();
    let mut x = vec![lo; n];
    let (mut on, mut inside) = (Vec::new(), 0);
    loop {
        let y: Vec<Rat> = x.iter().zip(c).map(|(&xi, ci)| rat(xi) - ci).collect();
        let gy = g.mul_vec(&y).unwrap();
        let q: Rat = y.iter().zip(&gy).map(|(a, b)| a * b).sum();
        if q == *r2 {
            on.push(x.clone());
        } else if q < *r2 {
            inside += 1;
        }
        let mut k = 0;
        while k < n && x[k] == hi {
            x[k] = lo;
            k += 1;
        }
        if k == n {
            break;
        }
        x[k] += 1;
    }
    on.sort();
    (on, inside)
}

fn c10_properties() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    // sphere enumeration vs box scan
    let mut spheres = 0;
    while spheres < 200 {
        let n = rng.gen_range(2..=3);
        let mut d = vec![0i64; pair_count(n)];
        for s in all_cuts(n) {
            if rng.gen_bool(0.6) {
                let w = rng.gen_range(1..=4);
                d.iter_mut().zip(cut_ints(&s)).for_each(|(a, b)| *a += w * b);
            }
        }
        let d = DistVec::from_ints(n, &d)?;
        if gram_det(&d) == rat(0) {
            continue;
        }
        let r = realize(&d)?;
        let (scan, inside) = box_scan(&gram_from_distance(&d), &r.center, &r.radius_sq, -5, 6);
        ensure!(inside == 0 && scan == r.vertices, "sphere enumeration disagrees with box scan on {:?}", d);
        spheres += 1;
    }
    // canonical form under relabeling
    let sch = schlafli_model()?.graph().clone();
    let mut colored = sch.clone();
    for v in [0, 5, 13, 20] {
        colored.set_color(v, 1);
    }
    let mut relabelings = 0;
    for g in [&sch, &colored] {
        let base = canonical_form(g);
        if std::ptr::eq(g, &sch) {
            ensure!(PermGroup::new(27, &base.generators).order() == AUT_ORDER.into(), "Schläfli automorphisms");
            let comp = canonical_form(&sch.complement());
            ensure!(comp.bytes != base.bytes, "graph and complement share a canonical form");
            ensure!(PermGroup::new(27, &comp.generators).order() == AUT_ORDER.into(), "complement automorphisms");
        }
        for _ in 0..1000 {
            let mut p: Vec<usize> = (0..27).collect();
            p.shuffle(&mut rng);
            ensure!(canonical_form(&g.relabeled(&p)).bytes == base.bytes, "canonical form not invariant");
            relabelings += 1;
        }
    }
    let _: &ColoredGraph = &sch;
    // cut identity H(b) delta_S = b(S)(1 - b(S))
    let mut identities = 0;
    for n in 1..=4usize {
        let width = n + 1;
        let mut b = vec![-2i64; width];
        loop {
            if b.iter().sum::<i64>() == 1 {
                let bv = BVector::new(b.clone())?;
                for mask in 0u64..1 << width {
                    let s = hypercone_core::hypercone::CutSet::from_mask(n, mask);
                    let bs = bv.subset_sum(mask);
                    ensure!(h_eval(&bv, &cut_vector(&s))? == rat(bs * (1 - bs)), "cut identity fails for {b:?}");
                    identities += 1;
                }
            }
            let mut k = 0;
            while k < width && b[k] == 2 {
                b[k] = -2;
                k += 1;
            }
            if k == width {
                break;
            }
            b[k] += 1;
        }
    }
    for _ in 0..10_000 {
        let mut c: Vec<i64> = (0..6).map(|_| rng.gen_range(-5..=5)).collect();
        c.push(1 - c.iter().sum::<i64>());
        let bv = BVector::new(c)?;
        let mask = rng.gen_range(0u64..128);
        let bs = bv.subset_sum(mask);
        let s = hypercone_core::hypercone::CutSet::from_mask(6, mask);
        ensure!(h_eval(&bv, &cut_vector(&s))? == rat(bs * (1 - bs)), "random cut identity fails");
        identities += 1;
    }
    let violations: usize = [run_cached(2, 2)?, run_cached(3, 5)?, run_cached(6, pair_count(6) - 1)?].iter().map(|r| r.heredity_violations).sum();
    ensure!(violations == 0, "{violations} heredity violations");
    Ok(format!(
        "{spheres} sphere/box agreements, {relabelings} relabelings invariant, {identities} cut identities, 0 heredity violations"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Result<String>); 10] = [
        ("facet totals", c1_facet_totals),
        ("facet-ness of representatives", c2_facetness),
        ("ray inventory", c3_ray_inventory),
        ("Schläfli model", c4_schlafli_model),
        ("classification of HYP_7", c5_pipeline),
        ("low-dimension closure", c6_low_dimensions),
        ("cubes, half-cubes and maximal types", c7_cubes),
        ("basicness decompositions", c8_basicness),
        ("oracle agreement", c9_oracle_agreement),
        ("property suites", c10_properties),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1} s]", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {e:#} [{secs:.1} s]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
