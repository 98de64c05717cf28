//! The `hypercone` subcommands. Each writes a human-readable report and
//! returns whether all of its checks passed.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

use hypercone_core::bits::Bits;
use hypercone_core::delaunay::{gram_det, is_nondegenerate, realize};
use hypercone_core::equiv::face_certificate;
use hypercone_core::exact::{fmt_rat, int_rank, lp_feasible, rat, ratio, Rat};
use hypercone_core::facelat::incidence;
use hypercone_core::hypercone::{
    distinct_permutations, facet_catalog, h_eval_int, h_form, pair_count, partner_classes, pairs, BVector,
    FacetCatalog,
};
use hypercone_core::schlafli::{ray_inventory, schlafli_model};

use crate::checkpoint;
use crate::driver::{classify, Run, RunConfig};
use crate::formats::{format_distance, parse_distance_text, ray_records, write_jsonl};
use crate::published;

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISMATCH"
    }
}

/// Vector used by the self-test of `facets`: a valid hypermetric inequality
/// for `n = 6` that is not a facet.
pub const NON_FACET_6: [i64; 7] = [-2, 1, 1, 1, 0, 0, 0];

/// Lists facet orbits, checks each representative against the ray inventory,
/// and reports the geometric classes of facets.
pub fn cmd_facets(n: usize, replace_first_rep: Option<&[i64]>, out: &mut dyn Write) -> Result<bool> {
    let cat = match replace_first_rep {
        None => facet_catalog(n)?.clone(),
        Some(v) => {
            let mut reps = facet_catalog(n)?.orbit_reps().to_vec();
            reps[0] = BVector::new(v.to_vec())?;
            FacetCatalog::with_reps(n, reps)?
        }
    };
    let inv = ray_inventory(n)?;
    let big_n = pair_count(n);
    let mut pass = true;
    writeln!(out, "facet orbits of HYP_{}:", n + 1)?;
    for (k, (rep, orbit)) in cat.orbit_reps().iter().zip(cat.orbits()).enumerate() {
        let valid = inv.rays().iter().all(|r| h_eval_int(rep, &r.dist) <= 0);
        let tight: Vec<&[i64]> =
            inv.rays().iter().filter(|r| h_eval_int(rep, &r.dist) == 0).map(|r| r.dist.as_slice()).collect();
        let span = int_rank(big_n, tight.iter().copied());
        let ok = valid && span == big_n - 1;
        pass &= ok;
        writeln!(
            out,
            "  b{:<2} {:?}  orbit {:>4}  tight rays {:>5}  span {:>2}/{}  {}",
            k + 1,
            rep.coords(),
            orbit.len(),
            tight.len(),
            span,
            big_n - 1,
            if ok { "facet" } else if valid { "NOT A FACET" } else { "NOT VALID" }
        )?;
    }
    writeln!(out, "total: {} inequalities in {} orbits", cat.len(), cat.orbit_reps().len())?;
    if let Some((orbits, total, _)) = published::facet_numbers(n) {
        let ok = orbits == cat.orbit_reps().len() && total == cat.len();
        pass &= ok;
        writeln!(out, "expected {total} in {orbits} orbits: {}", mark(ok))?;
    }
    if !pass {
        writeln!(out, "facet verification failed")?;
        return Ok(false);
    }
    let partner = partner_classes(&cat);
    let inc = incidence(n)?;
    let mut by_cert: BTreeMap<_, Vec<usize>> = BTreeMap::new();
    for (k, rep) in cat.orbit_reps().iter().enumerate() {
        let id = inc.facet_id(rep).context("representative missing from incidence")?;
        let face = inc.face_of_facets(&Bits::from_indices(inc.facets().len(), [id]));
        let data = inc.examine(&face)?;
        by_cert.entry(face_certificate(inc, &face, &data)?).or_default().push(k);
    }
    let mut cert_classes: Vec<Vec<usize>> = by_cert.into_values().collect();
    cert_classes.sort();
    let fmt = |cs: &[Vec<usize>]| {
        cs.iter()
            .map(|c| format!("{{{}}}", c.iter().map(|k| format!("b{}", k + 1)).collect::<Vec<_>>().join(",")))
            .collect::<Vec<_>>()
            .join(" ")
    };
    writeln!(out, "geometric classes by certificate ({}): {}", cert_classes.len(), fmt(&cert_classes))?;
    writeln!(out, "classes by partner switching ({}): {}", partner.len(), fmt(&partner))?;
    let agree = cert_classes == partner;
    pass &= agree;
    writeln!(out, "certificate and switching classes agree: {}", mark(agree))?;
    if let Some((_, _, classes)) = published::facet_numbers(n) {
        let ok = cert_classes.len() == classes;
        pass &= ok;
        writeln!(out, "expected {classes} classes: {}", mark(ok))?;
    }
    Ok(pass)
}

/// Builds the ray inventory of `HYP_7`, optionally writes it as JSON lines,
/// and checks the incidence facts of Schläfli rays.
pub fn cmd_rays(inventory_out: Option<&Path>, out: &mut dyn Write) -> Result<bool> {
    let inv = ray_inventory(6)?;
    let inc = incidence(6)?;
    let cat = facet_catalog(6)?;
    let model = schlafli_model()?;
    let mut pass = true;
    if let Some(p) = inventory_out {
        let f = std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
        write_jsonl(f, &ray_records(inv))?;
        writeln!(out, "wrote {} rays to {}", inv.len(), p.display())?;
    }
    let mut per_orbit: BTreeMap<usize, usize> = BTreeMap::new();
    for r in inv.rays() {
        *per_orbit.entry(r.orbit).or_default() += 1;
    }
    writeln!(out, "cut orbits ({}):", inv.cut_orbit_count())?;
    for o in 0..inv.cut_orbit_count() {
        writeln!(out, "  |S| = {}: {} cuts", o + 1, per_orbit[&o])?;
    }
    let cuts_degenerate = inv
        .rays()
        .iter()
        .filter(|r| r.is_cut())
        .map(|r| is_nondegenerate(&r.dist_vec(6)).map(|nd| !nd))
        .collect::<hypercone_core::Result<Vec<_>>>()?;
    let all_degenerate = cuts_degenerate.iter().all(|&x| x);
    pass &= all_degenerate && inv.cut_count() == 63;
    writeln!(out, "nonzero cuts: {}, all degenerate: {}", inv.cut_count(), all_degenerate)?;
    writeln!(out, "Schläfli orbits ({}):", inv.basis_classes().len())?;
    for (c, class) in inv.basis_classes().iter().enumerate() {
        let o = inv.cut_orbit_count() + c;
        let tight = cat.facets().filter(|b| h_eval_int(b, &inv.ray(first_of_orbit(inv, o)).dist) == 0).count();
        let valid = cat.facets().all(|b| h_eval_int(b, &inv.ray(first_of_orbit(inv, o)).dist) <= 0);
        let nondeg = is_nondegenerate(&class.dist)?;
        let names: Vec<String> =
            class.representative.iter().map(|&v| hypercone_core::schlafli::vertex_name(v)).collect();
        let ok = tight == 20 && valid && nondeg;
        pass &= ok;
        writeln!(
            out,
            "  orbit {:>2}: {:>5} rays  basis {}  d = {}  tight facets {}  {}",
            o,
            per_orbit[&o],
            names.join(","),
            format_distance(&class.dist),
            tight,
            mark(ok)
        )?;
    }
    let on_twenty = (0..inv.len()).filter(|&r| !inv.ray(r).is_cut()).all(|r| inc.ray_facets(r).count() == 20);
    pass &= on_twenty;
    writeln!(out, "every Schläfli ray lies on exactly 20 facets: {on_twenty}")?;
    writeln!(out, "Schläfli skeleton automorphisms: {}", model.aut_group().order())?;
    writeln!(out, "total: {} rays in {} orbits", inv.len(), inv.orbit_count())?;
    pass &= inv.orbit_count() == 29;
    Ok(pass)
}

fn first_of_orbit(inv: &hypercone_core::schlafli::RayInventory, orbit: usize) -> usize {
    inv.rays().iter().position(|r| r.orbit == orbit).expect("orbit is nonempty")
}

/// Runs the classification and compares completed levels with published counts.
pub fn cmd_classify(cfg: &RunConfig, out: &mut dyn Write) -> Result<(Run, bool)> {
    let run = classify(cfg, |msg| eprintln!("{msg}"))?;
    let mut pass = run.heredity_violations == 0;
    writeln!(out, "rank  corank  faces  degenerate  types  expected")?;
    for l in &run.levels {
        let expected = published::expected_types(cfg.n, l.rank);
        let ok = expected.is_none_or(|e| e == l.types.len());
        pass &= ok;
        writeln!(
            out,
            "{:>4}  {:>6}  {:>5}  {:>10}  {:>5}  {}",
            l.rank,
            l.corank,
            l.faces.len(),
            l.degenerate_count(),
            l.types.len(),
            expected.map_or("-".to_string(), |e| format!("{e} {}", mark(ok)))
        )?;
    }
    writeln!(out, "heredity violations: {}", run.heredity_violations)?;
    if let Some(c) = run.budget_stop {
        writeln!(out, "stopped by the time budget while computing corank {c}")?;
    }
    Ok((run, pass))
}

/// The fractional vectors (numerators, denominator) whose forms `H(b)` must
/// decompose over the listed generators.
pub const BASIC_TABLE: [([i64; 7], i64); 10] = [
    ([-1, -1, 1, 1, 1, 1, 0], 2),
    ([-1, -1, -1, 1, 1, 1, 2], 2),
    ([-2, -1, -1, 1, 1, 1, 3], 2),
    ([-2, -1, 1, 1, 1, 1, 1], 2),
    ([-1, -1, -1, -1, 1, 2, 3], 2),
    ([-3, -1, 1, 1, 1, 1, 2], 2),
    ([-1, 1, 1, 0, 0, 0, 0], 1),
    ([-1, -1, -1, 1, 1, 2, 2], 3),
    ([-1, -1, -1, 1, 1, 1, 1], 3),
    ([-2, -1, 1, 1, 1, 1, 2], 3),
];

fn quad_form(num: &[i64], den: i64) -> Vec<Rat> {
    let d2 = den * den;
    pairs(6).map(|(i, j)| ratio(num[i] * num[j], d2)).collect()
}

fn fmt_vec(num: &[i64], den: i64) -> String {
    if den == 1 {
        format!("{num:?}")
    } else {
        format!("(1/{den}){num:?}")
    }
}

/// For each table vector, finds an exact nonnegative decomposition of its form
/// over the forms of all permutations of table vectors.
/// Also reports whether it decomposes without its own permutations.
pub fn cmd_verify_basic(out: &mut dyn Write) -> Result<bool> {
    let mut gens: Vec<Vec<Rat>> = Vec::new();
    let mut gen_origin: Vec<usize> = Vec::new();
    let mut gen_label: Vec<String> = Vec::new();
    for (t, (num, den)) in BASIC_TABLE.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for p in distinct_permutations(num) {
            let form = quad_form(&p, *den);
            if seen.insert(form.clone()) {
                gens.push(form);
                gen_origin.push(t);
                gen_label.push(fmt_vec(&p, *den));
            }
        }
    }
    writeln!(out, "{} generator forms from {} table vectors", gens.len(), BASIC_TABLE.len())?;
    let mut pass = true;
    for (t, (num, den)) in BASIC_TABLE.iter().enumerate() {
        let target = quad_form(num, *den);
        let sum: i64 = num.iter().sum();
        let res = lp_feasible(&gens, &target)?;
        let feasible = res.is_feasible();
        pass &= feasible;
        writeln!(out, "{}: decomposition {}", fmt_vec(num, *den), if feasible { "found" } else { "NOT FOUND" })?;
        if let Some(lambda) = res.lambda() {
            for (g, l) in lambda.iter().enumerate().filter(|(_, l)| **l != rat(0)) {
                writeln!(out, "    {} x H{}", fmt_rat(l), gen_label[g])?;
            }
        }
        if *den > 1 {
            let has_unit = num.iter().any(|&x| x.abs() == 1);
            pass &= has_unit;
            writeln!(out, "    coordinate of absolute value 1/{den}: {}", if has_unit { "yes" } else { "NO" })?;
        }
        if sum != *den {
            writeln!(out, "    note: coordinate sum is {}", fmt_rat(&ratio(sum, *den)))?;
        }
        let others: Vec<Vec<Rat>> =
            gens.iter().zip(&gen_origin).filter(|(_, &o)| o != t).map(|(g, _)| g.clone()).collect();
        let alt = lp_feasible(&others, &target)?;
        writeln!(
            out,
            "    without its own permutations: {}",
            if alt.is_feasible() { "also decomposes" } else { "does not decompose" }
        )?;
    }
    Ok(pass)
}

/// Prints the per-rank type counts of a checkpoint directory next to the published ones.
pub fn cmd_report(dir: &Path, out: &mut dyn Write) -> Result<bool> {
    let manifest = checkpoint::read_manifest(dir)?.with_context(|| format!("no manifest in {}", dir.display()))?;
    let n = manifest.n;
    let big_n = pair_count(n);
    let mut found: BTreeMap<usize, usize> = BTreeMap::new();
    for l in &manifest.levels {
        found.insert(l.rank, l.types);
    }
    let mut pass = manifest.heredity_violations == 0;
    writeln!(out, "HYP_{} types by rank (found vs published):", n + 1)?;
    for rank in (1..=big_n).rev() {
        let expected = published::expected_types(n, rank);
        let line = match (found.get(&rank), expected) {
            (Some(&f), Some(e)) => {
                pass &= f == e;
                format!("{f} vs {e} {}", if f == e { "✓" } else { "✗" })
            }
            (Some(&f), None) => format!("{f}"),
            (None, Some(e)) => format!("- vs {e}"),
            (None, None) => "-".to_string(),
        };
        writeln!(out, "{rank:>4}: {line}")?;
    }
    let total: usize = found.values().sum();
    writeln!(out, "total found: {total} over {} completed level(s)", manifest.levels.len())?;
    if n == 6 {
        let column: usize = published::HYP7_TYPES_BY_RANK.iter().map(|(_, c)| c).sum();
        writeln!(out, "published total: {} (sum of the rank column: {column})", published::HYP7_STATED_TOTAL)?;
    }
    writeln!(out, "heredity violations: {}", manifest.heredity_violations)?;
    let mut maximal = Vec::new();
    for l in &manifest.levels {
        for t in checkpoint::read_types(dir, l.corank)? {
            if t.maximal == Some(true) {
                maximal.push(t);
            }
        }
    }
    writeln!(out, "maximal types found: {}", maximal.len())?;
    for t in &maximal {
        writeln!(out, "  rank {:>2}  {} vertices  scheme {}", t.rank, t.vertex_count, t.scheme)?;
    }
    if n == 6 && manifest.levels.len() == big_n {
        let ok = maximal.len() == published::HYP7_MAXIMAL;
        pass &= ok;
        writeln!(out, "expected {} maximal types: {}", published::HYP7_MAXIMAL, mark(ok))?;
    }
    Ok(pass)
}

/// Reconstructs the Delaunay polytope of a distance vector read from a file.
pub fn cmd_annulator(text: &str, out: &mut dyn Write) -> Result<bool> {
    let d = parse_distance_text(text)?;
    let n = d.n();
    if !is_nondegenerate(&d)? {
        writeln!(out, "degenerate distance vector (Gram determinant 0)")?;
        return Ok(false);
    }
    let real = realize(&d)?;
    writeln!(out, "n = {n}")?;
    writeln!(out, "gram determinant: {}", fmt_rat(&gram_det(&d)))?;
    writeln!(out, "center: {}", real.center.iter().map(fmt_rat).collect::<Vec<_>>().join(" "))?;
    writeln!(out, "radius^2: {}", fmt_rat(&real.radius_sq))?;
    writeln!(out, "vertices: {}", real.ann.len())?;
    for (x, b) in real.vertices.iter().zip(&real.ann) {
        writeln!(out, "  x = {x:?}  b = {:?}", b.coords())?;
    }
    let forms: Vec<Vec<i64>> = real.ann.iter().map(h_form).collect();
    let rank = pair_count(n) - int_rank(pair_count(n), forms.iter().map(Vec::as_slice));
    writeln!(out, "rank: {rank}")?;
    Ok(true)
}
