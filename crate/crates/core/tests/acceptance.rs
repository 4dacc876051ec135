// Acceptance criteria 1-8. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

use std::collections::HashSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rbcm_core::cayley::{is_arc_regular, is_rbcm, trace_faces, MapType};
use rbcm_core::classify::{cross_check, p_groups, theorem_family, ReconciliationReport};
use rbcm_core::factorlift::{
    component_contexts, factor_radical_sum, factor_xn_minus1, factor_xn_plus1, hensel_lift_factor, product, radical_sum_for,
};
use rbcm_core::ideals::{closed_form_ideals, compose_across_primes, enumerate_ideals_containing, CrtSplit, IdealPresentation, PrimeComponent};
use rbcm_core::poly::Poly;
use rbcm_core::structure::AbelianType;
use rbcm_core::zring::Modulus;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn factorization_identities() -> Outcome {
    let mut checked = 0;
    for p in [2u64, 3, 5] {
        for k in 1..=3u32 {
            let md = Modulus::prime_power(p, k).map_err(err)?;
            for n in 2..=12u64 {
                let minus = factor_xn_minus1(p, k, n).map_err(err)?;
                ensure(product(&minus, md) == Poly::x_pow_minus_one(n as usize, md), || format!("x^{n}-1 over Z_{}", md.value()))?;
                let plus = factor_xn_plus1(p, k, n).map_err(err)?;
                ensure(product(&plus, md) == Poly::x_pow_plus_one(n as usize, md), || format!("x^{n}+1 over Z_{}", md.value()))?;
                checked += 2;
                if n % p == 0 {
                    let rad = factor_radical_sum(p, k, n).map_err(err)?;
                    ensure(product(&rad, md) == radical_sum_for(p, k, n).map_err(err)?, || format!("radical sum n={n} over Z_{}", md.value()))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} products exact"))
}

fn lift_uniqueness() -> Outcome {
    let md = Modulus::prime_power(3, 2).map_err(err)?;
    let target = Poly::x_pow_minus_one(8, md);
    let base = Poly::from_i64(&[2, 1, 1], Modulus::prime_power(3, 1).map_err(err)?);
    // all 81 monic quadratics over Z_9
    let divisors: Vec<Poly> = (0..81u64)
        .map(|i| Poly::new(vec![i % 9, i / 9, 1], md))
        .filter(|f| f.reduce_to(base.modulus()) == base)
        .filter(|f| target.rem(f).map(|r| r.is_zero()).unwrap_or(false))
        .collect();
    let lifted = hensel_lift_factor(&base, 3, 2, &target).map_err(err)?;
    ensure(divisors.len() == 1, || format!("{} divisors among the lifts", divisors.len()))?;
    ensure(divisors[0] == lifted && lifted == Poly::from_i64(&[8, 4, 1], md), || format!("lift {lifted}"))?;
    Ok(format!("unique divisor {lifted}"))
}

fn ideal_lattices() -> Outcome {
    let mut seen = HashSet::new();
    let mut compared = 0;
    for p in [2u64, 3, 5] {
        for k in 1..=2u32 {
            for n in 1..=12u64 {
                for (lab, ctx) in component_contexts(p, k, n).map_err(err)? {
                    let size = (p.pow(k) as u128).pow(ctx.degree().unwrap() as u32);
                    if size > 1 << 12 || !seen.insert((p, k, ctx.clone())) {
                        continue;
                    }
                    let Some((c, closed)) = closed_form_ideals(p, k, n, lab.d, lab.l).map_err(err)? else { continue };
                    let exhaustive = enumerate_ideals_containing(&c, p, k).map_err(err)?;
                    let a: HashSet<_> = closed.iter().cloned().collect();
                    let b: HashSet<_> = exhaustive.iter().cloned().collect();
                    ensure(a == b && closed.len() == a.len(), || {
                        format!("p={p} k={k} n={n} λ=({},{}): closed {} vs exhaustive {}", lab.d, lab.l, closed.len(), exhaustive.len())
                    })?;
                    compared += 1;
                }
            }
        }
    }
    Ok(format!("{compared} component rings, zero discrepancies"))
}

fn crt_correctness() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let mut exhaustive = 0;
    let mut sampled = 0;
    for p in [2u64, 3, 5] {
        for k in 1..=4u32 {
            for n in 1..=8u64 {
                let Some(size) = p.checked_pow(k * n as u32) else { continue };
                if size > 6561 {
                    continue;
                }
                let split = CrtSplit::new(p, k, n).map_err(err)?;
                let md = split.modulus();
                let ctx = split.context().clone();
                let comps: Vec<Poly> = split.components().iter().map(|c| c.1.clone()).collect();
                let check = |f: &Poly, g: &Poly| -> Result<(), String> {
                    let (ff, fg) = (split.forward(f).map_err(err)?, split.forward(g).map_err(err)?);
                    ensure(split.backward(&ff).map_err(err)? == *f, || format!("round trip of {f} mod p={p} k={k} n={n}"))?;
                    let prod = split.forward(&f.mul(g).rem(&ctx).map_err(err)?).map_err(err)?;
                    let sum = split.forward(&f.add(g)).map_err(err)?;
                    for i in 0..comps.len() {
                        ensure(prod[i] == ff[i].mul(&fg[i]).rem(&comps[i]).map_err(err)?, || "product not preserved".into())?;
                        ensure(sum[i] == ff[i].add(&fg[i]).rem(&comps[i]).map_err(err)?, || "sum not preserved".into())?;
                    }
                    Ok(())
                };
                let random = |rng: &mut rand::rngs::StdRng| Poly::new((0..n).map(|_| rng.gen_range(0..md.value())).collect(), md);
                if size <= 625 {
                    let all = IdealPresentation::zero(&ctx).map_err(err)?.residues().map_err(err)?;
                    for v in &all {
                        let f = Poly::new(v.clone(), md);
                        let g = random(&mut rng);
                        check(&f, &g)?;
                    }
                    exhaustive += all.len();
                } else {
                    for _ in 0..10_000 {
                        let (f, g) = (random(&mut rng), random(&mut rng));
                        check(&f, &g)?;
                    }
                    sampled += 10_000;
                }
            }
        }
    }
    Ok(format!("{exhaustive} residues exhaustively, {sampled} sampled pairs"))
}

fn sweep_instances() -> Vec<(AbelianType, usize, MapType)> {
    let mut out = Vec::new();
    for g in p_groups(&[2, 3, 5], 81) {
        // the oracle needs valence <= 2|G|
        let cap = 2 * g.order() as usize;
        for n in (1..=8).filter(|n| 2 * n <= cap) {
            out.push((g.clone(), 2 * n, MapType::I));
        }
        if g.prime() == Some(2) && g.is_elementary() {
            for v in (1..=16).filter(|&v| v <= cap) {
                out.push((g.clone(), v, MapType::II));
            }
        }
    }
    out
}

fn classification(reports: &[ReconciliationReport]) -> Outcome {
    let spot = [("Z5", 4, 2), ("Z8", 4, 0), ("Z3xZ3", 4, 1), ("Z4xZ2", 4, 1)];
    for (g, v, want) in spot {
        let t = AbelianType::parse(g).map_err(err)?;
        let r = reports
            .iter()
            .find(|r| r.group == t.to_string() && r.valence == v && r.map_type == MapType::I)
            .ok_or_else(|| format!("missing {g}"))?;
        ensure(r.oracle_count == want, || format!("{g} valence {v}: oracle {} != {want}", r.oracle_count))?;
    }
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| r.family_count != r.oracle_count || !r.unmatched_family.is_empty() || !r.unmatched_oracle.is_empty())
        .map(|r| format!("{} v={} type {}: family {} oracle {}", r.group, r.valence, r.map_type, r.family_count, r.oracle_count))
        .collect();
    ensure(bad.is_empty(), || bad.join("; "))?;
    let total: usize = reports.iter().map(|r| r.oracle_count).sum();
    Ok(format!("{} instances, {total} classes matched one-to-one", reports.len()))
}

fn map_validity() -> Outcome {
    let mut checked = 0;
    for (g, v, ty) in sweep_instances() {
        let (_, fam) = theorem_family(&g, v, ty).map_err(err)?;
        for fm in fam {
            let m = &fm.map;
            ensure(is_rbcm(m).0, || format!("{} not balanced-regular", fm.ideal))?;
            if m.group().order() <= 32 {
                ensure(is_arc_regular(m), || format!("{} not arc-regular", fm.ideal))?;
            }
            let s = trace_faces(m);
            let chi = s.vertices as i64 - s.edges as i64 + s.faces as i64;
            ensure(2 * s.edges == s.vertices * m.valence() && chi == 2 - 2 * s.genus && s.genus >= 0, || format!("Euler fails for {}", fm.ideal))?;
            checked += 1;
        }
    }
    let (_, z5) = theorem_family(&AbelianType::parse("Z5").map_err(err)?, 4, MapType::I).map_err(err)?;
    let m = z5.iter().find(|f| f.params.mu == Some(2)).ok_or("no μ=2 map")?;
    let s = trace_faces(&m.map);
    ensure(s.genus == 1 && s.faces == 5 && s.face_lengths.get(&4) == Some(&5), || format!("Z5 μ=2: {s:?}"))?;
    Ok(format!("{checked} maps valid; Z5 μ=2 has genus 1 with 5 quadrilaterals"))
}

fn composition() -> Outcome {
    let ideal = |c: &[i64], n: u64| {
        let md = Modulus::new(n).unwrap();
        IdealPresentation::canonical_form(&[Poly::from_i64(c, md)], &Poly::x_pow_plus_one(2, md)).unwrap()
    };
    let (q5, q13) = (ideal(&[-2, 1], 5), ideal(&[-5, 1], 13));
    let comps = [PrimeComponent { p: 5, k: 1, ideal: q5.clone(), n: 2 }, PrimeComponent { p: 13, k: 1, ideal: q13.clone(), n: 2 }];
    let (big_n, n, q) = compose_across_primes(&comps).map_err(err)?;
    ensure((big_n, n) == (65, 2), || format!("got N={big_n}, n={n}"))?;
    ensure(q == ideal(&[-57, 1], 65), || format!("got {q}"))?;
    let md = q.modulus();
    ensure(q.contains(&Poly::x_pow_plus_one(2, md)).map_err(err)?, || "x^2+1 not in Q".into())?;
    for (pr, part) in [(5u64, &q5), (13, &q13)] {
        let pm = Modulus::new(pr).unwrap();
        let proj = IdealPresentation::canonical_form(&q.row_polys().iter().map(|r| r.reduce_to(pm)).collect::<Vec<_>>(), &Poly::x_pow_plus_one(2, pm))
            .map_err(err)?;
        ensure(proj == *part, || format!("projection mod {pr} is {proj}"))?;
    }
    Ok("Q = (x - 57) over Z_65 with correct projections".into())
}

fn ledger(reports: &[ReconciliationReport]) -> Outcome {
    let with = |topic: &str| reports.iter().filter(|r| r.discrepancies.iter().any(|d| d.topic.starts_with(topic))).count();
    let elementary = with("elementary exponent range");
    let quadratic = with("rank-two quadratic");
    ensure(elementary > 0 && quadratic > 0, || format!("ledger entries missing: {elementary} elementary, {quadratic} quadratic"))?;
    let bad: Vec<String> = reports
        .iter()
        .flat_map(|r| r.discrepancies.iter().filter(|d| d.implemented && !d.agrees).map(move |d| format!("{} v={}: {} ({} vs {})", r.group, r.valence, d.reading, d.count, d.oracle_count)))
        .collect();
    ensure(bad.is_empty(), || bad.join("; "))?;
    let printed_off = reports
        .iter()
        .flat_map(|r| &r.discrepancies)
        .filter(|d| !d.implemented && d.reading.starts_with("K ≤ r with lcm of d(λ) equal to n'") && !d.agrees)
        .count();
    let theta_off = reports
        .iter()
        .flat_map(|r| &r.discrepancies)
        .filter(|d| !d.implemented && d.reading.starts_with("d ∈ Θ") && !d.agrees)
        .count();
    let shifts: usize = reports.iter().flat_map(|r| &r.discrepancies).filter(|d| d.reading.starts_with("new ideals from ν")).map(|d| d.count).sum();
    Ok(format!(
        "implemented readings agree on {elementary} elementary and {quadratic} rank-two instances; literal lcm reading off on {printed_off}, Θ reading off on {theta_off}, ν-shifts adding new ideals: {shifts}"
    ))
}

fn main() {
    let mut failed = 0;
    let mut report = |id: u32, name: &str, start: Instant, out: Outcome| {
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("criterion {id} PASS {name} ({secs:.2}s): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {id} FAIL {name} ({secs:.2}s): {msg}");
            }
        }
    };
    let t = Instant::now();
    report(1, "factorization identities", t, factorization_identities());
    let t = Instant::now();
    report(2, "lift uniqueness", t, lift_uniqueness());
    let t = Instant::now();
    report(3, "ideal lattices", t, ideal_lattices());
    let t = Instant::now();
    report(4, "CRT correctness", t, crt_correctness());

    let t = Instant::now();
    let reports: Result<Vec<ReconciliationReport>, String> = sweep_instances().into_iter().map(|(g, v, ty)| cross_check(&g, v, ty).map_err(err)).collect();
    let sweep_time = t;
    match &reports {
        Ok(r) => report(5, "classification reconciliation", sweep_time, classification(r)),
        Err(e) => report(5, "classification reconciliation", sweep_time, Err(e.clone())),
    }
    let t = Instant::now();
    report(6, "map validity", t, map_validity());
    let t = Instant::now();
    report(7, "cross-prime composition", t, composition());
    let t = Instant::now();
    match &reports {
        Ok(r) => report(8, "discrepancy ledger", t, ledger(r)),
        Err(e) => report(8, "discrepancy ledger", t, Err(e.clone())),
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
