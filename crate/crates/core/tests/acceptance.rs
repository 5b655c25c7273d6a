//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use sekine_core::algebra::{AlgebraElement, BasisLabel, EtaConvention, TensorElement};
use sekine_core::functionals::{
    convolve, convolve_oracle, fourier, idempotency_report, Functional,
};
use sekine_core::idempotents::{
    enumerate_catalog, Catalog, Family, IdempotentDescriptor, Subgroup, TauVector,
};
use sekine_core::lattice::{
    build_order, build_order_fourier, build_order_theoretic, hasse, HasseDiagram, ORDER_TOL,
};
use sekine_core::selfcheck::{
    algebra_axioms, corepresentation_checks, random_functional, representation_relations,
    CheckResult,
};
use sekine_core::walks::{
    cesaro, cesaro_limit, random_sparse_state, random_state, walk, WALK_MAX_STEPS, WALK_TOL,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn run(id: u32, title: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
        .unwrap_or_else(|_| outcome(false, "panicked"));
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let pass = out.pass && in_time;
    let budget = limit.map_or(String::new(), |l| format!(" / limit {:.0}s", l.as_secs_f64()));
    println!(
        "[{}] {id:>2}. {title}: {}{} ({:.2}s{budget})",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        if in_time { "" } else { " [over time limit]" },
        elapsed.as_secs_f64(),
    );
    pass
}

fn subgroup(k: usize, gens: &[(usize, usize)]) -> IdempotentDescriptor {
    IdempotentDescriptor::HaarSub {
        subgroup: Subgroup::generated_by(k, gens).unwrap(),
    }
}

/// Node names of the reference k=2 diagram with their descriptors.
fn k2_reference_nodes() -> Vec<(&'static str, IdempotentDescriptor)> {
    let tau = |v: Vec<i8>| TauVector::new(2, 1, v).unwrap();
    vec![
        ("eps", subgroup(2, &[])),
        ("h+", subgroup(2, &[(1, 0)])),
        ("h-", subgroup(2, &[(0, 1)])),
        ("h1", subgroup(2, &[(1, 1)])),
        ("h2", subgroup(2, &[(1, 0), (0, 1)])),
        ("h+0", IdempotentDescriptor::TypeII { q: 2, l: 0 }),
        ("h+1", IdempotentDescriptor::TypeII { q: 2, l: 1 }),
        ("h-t", IdempotentDescriptor::TypeIII { p: 2, l: 0, tau: tau(vec![1, 1]) }),
        ("h-t'", IdempotentDescriptor::TypeIII { p: 2, l: 0, tau: tau(vec![1, -1]) }),
        ("h", IdempotentDescriptor::Haar),
    ]
}

const K2_REFERENCE_EDGES: [(&str, &str); 15] = [
    ("eps", "h+"),
    ("eps", "h-"),
    ("eps", "h1"),
    ("h+", "h+0"),
    ("h+", "h+1"),
    ("h+", "h2"),
    ("h-", "h-t"),
    ("h-", "h-t'"),
    ("h-", "h2"),
    ("h1", "h2"),
    ("h+0", "h"),
    ("h+1", "h"),
    ("h-t", "h"),
    ("h-t'", "h"),
    ("h2", "h"),
];

/// Backtracking search for a bijection carrying one directed edge set onto the other.
fn isomorphic(n: usize, a: &[(usize, usize)], b: &[(usize, usize)]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let adj = |edges: &[(usize, usize)]| {
        let mut m = vec![vec![false; n]; n];
        for &(x, y) in edges {
            m[x][y] = true;
        }
        m
    };
    let (ma, mb) = (adj(a), adj(b));
    let degrees = |m: &Vec<Vec<bool>>, v: usize| {
        let out = m[v].iter().filter(|&&e| e).count();
        let inn = (0..n).filter(|&u| m[u][v]).count();
        (out, inn)
    };
    fn extend(
        v: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ma: &[Vec<bool>],
        mb: &[Vec<bool>],
        deg_ok: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        let n = ma.len();
        if v == n {
            return true;
        }
        for w in 0..n {
            if used[w] || !deg_ok(v, w) {
                continue;
            }
            let consistent = (0..v).all(|u| ma[u][v] == mb[map[u]][w] && ma[v][u] == mb[w][map[u]]);
            if !consistent {
                continue;
            }
            map.push(w);
            used[w] = true;
            if extend(v + 1, map, used, ma, mb, deg_ok) {
                return true;
            }
            map.pop();
            used[w] = false;
        }
        false
    }
    let deg_ok = |v: usize, w: usize| degrees(&ma, v) == degrees(&mb, w);
    extend(0, &mut Vec::new(), &mut vec![false; n], &ma, &mb, &deg_ok)
}

fn catalog_index(c: &Catalog, d: &IdempotentDescriptor) -> usize {
    c.position(d).unwrap_or_else(|| panic!("{d} missing from the catalog"))
}

fn criterion1() -> Outcome {
    let c = enumerate_catalog(2).unwrap();
    let expected: BTreeSet<String> = k2_reference_nodes().iter().map(|(_, d)| d.label()).collect();
    let got: BTreeSet<String> = c.descriptors().map(IdempotentDescriptor::label).collect();
    let worst = c
        .entries
        .iter()
        .map(|e| {
            let r = idempotency_report(&e.functional, 1e-9);
            if r.pass { r.residual_a.max(r.residual_b).max(r.residual_c) } else { f64::INFINITY }
        })
        .fold(0.0, f64::max);
    outcome(
        c.len() == 10 && got == expected && worst < 1e-9,
        format!("{} members, node set matches: {}, worst A/B/C residual {worst:.1e}", c.len(), got == expected),
    )
}

fn criterion2() -> Outcome {
    let c = enumerate_catalog(2).unwrap();
    let hd = hasse(&build_order(&c).unwrap()).unwrap();
    let nodes = k2_reference_nodes();
    let name_to_cat = |name: &str| {
        let d = &nodes.iter().find(|(n, _)| *n == name).unwrap().1;
        catalog_index(&c, d)
    };
    let reference: Vec<(usize, usize)> = K2_REFERENCE_EDGES
        .iter()
        .map(|(a, b)| (name_to_cat(a), name_to_cat(b)))
        .collect();
    let labelled: BTreeSet<_> = reference.iter().copied().collect();
    let computed: BTreeSet<_> = hd.edges.iter().copied().collect();
    let iso = isomorphic(10, &hd.edges, &reference);
    outcome(
        hd.edge_count() == 15 && iso && labelled == computed,
        format!(
            "{} cover edges, isomorphic to reference: {iso}, same labelled edges: {}",
            hd.edge_count(),
            labelled == computed
        ),
    )
}

fn three_layers(c: &Catalog, hd: &HasseDiagram) -> bool {
    let k = c.k;
    let layers = hd.layers();
    if layers.len() != 4 {
        return false;
    }
    let names = |idx: &[usize]| -> BTreeSet<usize> { idx.iter().copied().collect() };
    let mut expect = vec![BTreeSet::new(); 4];
    for (i, e) in c.entries.iter().enumerate() {
        let rank = match &e.descriptor {
            IdempotentDescriptor::HaarSub { subgroup } if subgroup.order() == 1 => 0,
            IdempotentDescriptor::HaarSub { subgroup } if subgroup.order() == k => 1,
            IdempotentDescriptor::Haar => 3,
            _ => 2,
        };
        expect[rank].insert(i);
    }
    let ranks = hd.ranks();
    (0..4).all(|r| names(&layers[r]) == expect[r])
        && hd.edges.iter().all(|&(a, b)| ranks[b] == ranks[a] + 1)
}

fn criterion3(k: usize) -> Outcome {
    let c = enumerate_catalog(k).unwrap();
    let subs = c.count(Family::Subgroup);
    let type2 = c.count(Family::Diagonal);
    let type3_ok = c.descriptors().all(|d| match d {
        IdempotentDescriptor::TypeIII { p, l, .. } => (*p, *l) == (k, 0),
        _ => true,
    }) && c.count(Family::Circulant) >= 1;
    let hd = hasse(&build_order(&c).unwrap()).unwrap();
    let layered = three_layers(&c, &hd);
    outcome(
        subs == k + 3 && type2 == k && type3_ok && layered,
        format!(
            "k={k}: {subs} subgroup states, {type2} diagonal, circulant only at Z_k-shift: {type3_ok}, layered: {layered}"
        ),
    )
}

fn criterion4() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for k in 2..=8 {
        let c = enumerate_catalog(k).unwrap();
        let by_conv = build_order(&c).unwrap();
        let by_fourier = build_order_fourier(&c, ORDER_TOL);
        let by_cases = build_order_theoretic(&c);
        let m1 = by_conv.mismatches(&by_fourier).len();
        let m2 = by_conv.mismatches(&by_cases).len();
        pass &= m1 == 0 && m2 == 0;
        details.push(format!("k={k}:{}x{} {m1}/{m2}", c.len(), c.len()));
    }
    outcome(pass, format!("mismatches (fourier/cases) {}", details.join(", ")))
}

fn criterion5() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 2..=4 {
        let mut rng = ChaCha8Rng::seed_from_u64(500 + k as u64);
        for _ in 0..100 {
            let mu = random_functional(&mut rng, k).unwrap();
            let nu = random_functional(&mut rng, k).unwrap();
            let d = convolve(&mu, &nu).unwrap().distance(&convolve_oracle(&mu, &nu).unwrap());
            worst = worst.max(d);
        }
    }
    outcome(worst < 1e-10, format!("300 pairs, worst L-inf {worst:.1e} (< 1e-10)"))
}

fn criterion6() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failing = Vec::new();
    for k in 2..=4 {
        let mut checks = algebra_axioms(k, EtaConvention::Standard, 600 + k as u64).unwrap();
        // Multiplicativity and adjoints on every pair of basis vectors.
        let basis: Vec<AlgebraElement> = BasisLabel::all(k)
            .map(|l| AlgebraElement::basis(k, l).unwrap())
            .collect();
        let deltas: Vec<TensorElement> = basis.iter().map(AlgebraElement::comultiply).collect();
        let mult = (0..basis.len())
            .into_par_iter()
            .map(|i| {
                (0..basis.len())
                    .map(|j| {
                        let lhs = basis[i].multiply(&basis[j]).unwrap().comultiply();
                        lhs.distance(&deltas[i].multiply(&deltas[j]).unwrap())
                    })
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max);
        checks.push(CheckResult::new("comultiplication multiplicative on basis pairs", mult, 1e-12));
        for r in &checks {
            if r.name == "comultiplication is multiplicative" {
                continue;
            }
            worst = worst.max(r.residual);
            if !r.pass || r.residual >= 1e-12 {
                failing.push(format!("k={k} {}", r.name));
            }
        }
    }
    outcome(
        failing.is_empty(),
        format!("worst residual {worst:.1e} (< 1e-12){}", if failing.is_empty() { String::new() } else { format!(", failing: {failing:?}") }),
    )
}

fn criterion7() -> Outcome {
    let results: Vec<(usize, Vec<CheckResult>)> = (2..=12usize)
        .into_par_iter()
        .map(|k| {
            let mut r = representation_relations(k).unwrap();
            if k <= 6 {
                r.extend(corepresentation_checks(k, EtaConvention::Standard).unwrap());
            }
            (k, r)
        })
        .collect();
    let mut failing = Vec::new();
    let mut worst: f64 = 0.0;
    for (k, rs) in &results {
        for r in rs {
            if r.name != "irrep dimension count" {
                worst = worst.max(r.residual);
            }
            if !r.pass {
                failing.push(format!("k={k} {}", r.name));
            }
        }
    }
    outcome(
        failing.is_empty(),
        format!("k=2..12, worst residual {worst:.1e}, dimension identity holds{}", if failing.is_empty() { String::new() } else { format!(", failing: {failing:?}") }),
    )
}

fn criterion8() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 2..=6 {
        let mut rng = ChaCha8Rng::seed_from_u64(800 + k as u64);
        for _ in 0..100 {
            let mu = random_functional(&mut rng, k).unwrap();
            let nu = random_functional(&mut rng, k).unwrap();
            let prod = convolve(&mu, &nu).unwrap();
            for p in 0..k {
                for q in 0..k {
                    let rhs = fourier(&mu, p, q).matrix * fourier(&nu, p, q).matrix;
                    worst = worst.max(fourier(&prod, p, q).distance(&rhs));
                }
            }
        }
    }
    outcome(worst < 1e-10, format!("500 pairs, worst residual {worst:.1e} (< 1e-10)"))
}

fn criterion9() -> Outcome {
    let mut failures = 0usize;
    for k in 2..=6 {
        let bad: Vec<u64> = (0..200u64)
            .into_par_iter()
            .filter_map(|seed| {
                let mu = random_state(k, 9000 + seed, true).unwrap();
                let r = walk(&mu, WALK_MAX_STEPS, WALK_TOL).unwrap();
                let ok = r.converged
                    && idempotency_report(r.limit.as_ref().unwrap(), 1e-7).pass;
                (!ok).then_some(seed)
            })
            .collect();
        failures += bad.len();
    }
    let d10 = Functional::point_mass(2, 1, 0).unwrap();
    let r = walk(&d10, WALK_MAX_STEPS, WALK_TOL).unwrap();
    let oscillates = !r.converged && r.spectral.has_minus_one;
    let c2 = enumerate_catalog(2).unwrap();
    let avg = cesaro(&d10, 10_000).unwrap();
    let target = subgroup(2, &[(1, 0)]);
    let classified = c2.classify(&avg) == Some(&target);
    outcome(
        failures == 0 && oscillates && classified,
        format!(
            "1000 states, {failures} failed to converge; point mass non-convergent with eigenvalue -1: {oscillates}; its Cesaro average is {}",
            c2.classify(&avg).map_or("unclassified".to_string(), |d| d.label())
        ),
    )
}

fn criterion10() -> Outcome {
    let mut unmatched = Vec::new();
    let mut hit = BTreeSet::new();
    for k in 2..=6 {
        let c = enumerate_catalog(k).unwrap();
        let misses: Vec<(u64, Option<String>)> = (0..50u64)
            .into_par_iter()
            .map(|seed| {
                let mu = if seed % 2 == 0 {
                    random_state(k, 10_000 + seed, false).unwrap()
                } else {
                    random_sparse_state(k, 10_000 + seed).unwrap()
                };
                let limit = cesaro_limit(&mu).unwrap();
                let label = c.classify(&limit).and_then(|d| {
                    let exact = d.build(k).unwrap();
                    idempotency_report(&exact, 1e-9).pass.then(|| d.label())
                });
                (seed, label)
            })
            .collect();
        for (seed, label) in misses {
            match label {
                Some(l) => {
                    hit.insert(format!("{k}:{l}"));
                }
                None => unmatched.push(format!("k={k} seed={seed}")),
            }
        }
    }
    outcome(
        unmatched.is_empty(),
        format!(
            "250 limits, {} unmatched, {} distinct members reached{}",
            unmatched.len(),
            hit.len(),
            if unmatched.is_empty() { String::new() } else { format!(": {unmatched:?}") }
        ),
    )
}

fn criterion11() -> Outcome {
    let mut bad = Vec::new();
    let mut total = 0;
    for k in 2..=12 {
        let c = enumerate_catalog(k).unwrap();
        for e in &c.entries {
            total += 1;
            let (sa, tk) = (e.functional.sum_alpha(), e.functional.trace_kappa());
            let near = |x: f64, y: f64| (sa.re - x).abs() < 1e-9 && (tk.re - y).abs() < 1e-9 && sa.im.abs() < 1e-9 && tk.im.abs() < 1e-9;
            let case1 = near(1.0, 0.0);
            let case2 = near(0.5, 0.5);
            if case1 == case2 {
                bad.push(format!("k={k} {}", e.descriptor));
            }
        }
    }
    outcome(bad.is_empty(), format!("{total} members over k=2..12, {} violations", bad.len()))
}

fn main() -> ExitCode {
    // Warm the thread pool so the first timed criterion does not pay for it.
    rayon::broadcast(|_| ());
    let s = Duration::from_secs;
    let mut ok = true;
    ok &= run(1, "k=2 catalog", Some(s(1)), criterion1);
    ok &= run(2, "k=2 Hasse diagram", Some(s(1)), criterion2);
    for k in [3, 5, 7] {
        ok &= run(3, "prime-k structure", Some(s(5)), || criterion3(k));
    }
    ok &= run(4, "three orders agree, k=2..8", Some(s(60)), criterion4);
    ok &= run(5, "closed-form convolution vs definition", None, criterion5);
    ok &= run(6, "algebra axioms, k=2..4", None, criterion6);
    ok &= run(7, "representation suite, k=2..12", None, criterion7);
    ok &= run(8, "fourier multiplicativity, k=2..6", None, criterion8);
    ok &= run(9, "walk convergence", None, criterion9);
    ok &= run(10, "completeness probe", None, criterion10);
    ok &= run(11, "dichotomy", None, criterion11);
    println!("acceptance: {}", if ok { "all criteria pass" } else { "FAILURES" });
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
