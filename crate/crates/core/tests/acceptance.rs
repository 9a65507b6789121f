//! Acceptance gate. Runs every criterion in sequence, prints one PASS/FAIL
//! line each, and exits nonzero if any fails or exceeds its time limit.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cantor_union::admissibility::{decide_self_similar, is_admissible, CheckMode, Decision, Regime};
use cantor_union::blocks::{block_sets, omega, omega_hat};
use cantor_union::construct::{construct_admissible, corollary_m1};
use cantor_union::covering::{covering_holds, DEFAULT_SEARCH_BUDGET};
use cantor_union::digits::{Conjugate, DigitString, TranslationVector};
use cantor_union::enumerate::{enumerate_candidates, DEFAULT_ENUMERATION_BUDGET};
use cantor_union::graph::{build_graph, is_nilpotent};
use cantor_union::ifs::{extract_ifs, verify_symbolic};
use cantor_union::laurent::Beta;
use cantor_union::numeric::{verify_numeric, NumericOptions};
use cantor_union::words::WordSet;
use common::rat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn names(set: &WordSet) -> BTreeSet<String> {
    set.words().map(|w| w.to_string()).collect()
}

fn strs(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn digits_of(t: &TranslationVector) -> Vec<Vec<u8>> {
    t.entries().iter().map(|e| e.digits().to_vec()).collect()
}

fn vector(cap: u8, rest: &[Vec<u8>]) -> TranslationVector {
    let rest = rest.iter().map(|d| DigitString::new(cap, d.clone()).unwrap()).collect();
    TranslationVector::from_nonzero(cap, rest).unwrap()
}

fn ones_family(cap: u8, m: usize) -> TranslationVector {
    vector(cap, &(1..=m).map(|j| vec![1; j]).collect::<Vec<_>>())
}

/// Admissible vectors collected along the way, for the numeric and gap criteria.
#[derive(Default)]
struct Accepted {
    from_corollary: Vec<TranslationVector>,
    from_oracles: Vec<TranslationVector>,
    from_constructor: Vec<TranslationVector>,
}

fn criterion1() -> Outcome {
    let t = vector(1, &[vec![1, 1], vec![1, 0, 1], vec![1, 0, 0, 1]]);
    ensure(t.tau() == 4, || format!("tau = {}", t.tau()))?;
    let om = names(&omega(&t, 4).map_err(|e| e.to_string())?);
    let om_hat = names(&omega_hat(&t, 4).map_err(|e| e.to_string())?);
    ensure(om == strs(&["0000"]), || format!("Omega = {om:?}"))?;
    ensure(om_hat == strs(&["1111"]), || format!("Omega-hat = {om_hat:?}"))?;
    let b = block_sets(&t, 4).map_err(|e| e.to_string())?;
    ensure(names(&b.added) == strs(&["0000", "0011", "0101", "1001"]), || "A differs".into())?;
    ensure(names(&b.subtracted) == strs(&["1111", "1100", "1010", "0110"]), || "A-hat differs".into())?;
    let g = build_graph(&t).map_err(|e| e.to_string())?;
    let v = strs(&["0001", "0010", "0100", "0111", "1000", "1011", "1101", "1110"]);
    ensure(names(g.vertices()) == v, || format!("V = {:?}", names(g.vertices())))?;
    for ring in [["0001", "0010", "0100", "1000"], ["0111", "1110", "1101", "1011"]] {
        for i in 0..4 {
            let from = u64::from_str_radix(ring[i], 2).unwrap();
            let to = u64::from_str_radix(ring[(i + 1) % 4], 2).unwrap();
            ensure(g.has_edge(from, to), || format!("missing edge {} -> {}", ring[i], ring[(i + 1) % 4]))?;
        }
    }
    ensure(g.has_cycle(), || "no cycle".into())?;
    ensure(matches!(t.conjugate(), Conjugate::NotInT { .. }), || "conjugate should leave T".into())?;
    let verdict = decide_self_similar(&t, Regime::Below, CheckMode::CrossCheck).map_err(|e| e.to_string())?;
    ensure(verdict.decision == Decision::NotSelfSimilar, || format!("{:?}", verdict.decision))?;
    Ok("tau=4, #V=8, two 4-cycles, conjugate not in T, NotSelfSimilar".into())
}

fn criterion2() -> Outcome {
    let mut checked = 0;
    for cap in 1..=3u8 {
        for m in 1..=6 {
            let t = ones_family(cap, m);
            let v = decide_self_similar(&t, Regime::Below, CheckMode::CrossCheck).map_err(|e| e.to_string())?;
            let expect = if m <= 2 { Decision::SelfSimilar } else { Decision::NotSelfSimilar };
            ensure(v.decision == expect, || format!("N={cap} m={m}: {:?}", v.decision))?;
            if m >= 3 {
                let g = build_graph(&t).map_err(|e| e.to_string())?;
                let alt = |start: u8, len: usize| -> Vec<u8> {
                    (0..len).map(|i| if (i % 2 == 0) == (start == 0) { 0 } else { cap }).collect()
                };
                let code = |w: &[u8]| w.iter().fold(0u64, |acc, &l| acc * (cap as u64 + 1) + l as u64);
                let (a, b) = (alt(0, m), alt(cap, m));
                ensure(g.contains(code(&a)) && g.contains(code(&b)), || format!("N={cap} m={m}: (0N) words not vertices"))?;
                ensure(g.has_edge(code(&a), code(&b)) && g.has_edge(code(&b), code(&a)), || {
                    format!("N={cap} m={m}: (0N) cycle missing")
                })?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} vectors, (0N)-alternating cycles present for m>=3"))
}

fn criterion3(acc: &mut Accepted) -> Outcome {
    let mut count = 0;
    for cap in 1..=4u8 {
        for digits in common::nonzero_strings(cap, 4) {
            let t1 = DigitString::new(cap, digits.clone()).unwrap();
            let t = TranslationVector::from_nonzero(cap, vec![t1.clone()]).unwrap();
            let verdict = decide_self_similar(&t, Regime::Below, CheckMode::CrossCheck).map_err(|e| e.to_string())?;
            let self_similar = verdict.decision == Decision::SelfSimilar;
            let closed = corollary_m1(&t1).map_err(|e| e.to_string())?;
            let rule = common::single_digit_rule(cap, &digits);
            let (_, oracle) = common::graph_acyclic(cap, &[digits.clone()]);
            ensure(self_similar == closed && closed == rule && rule == oracle, || {
                format!("N={cap} t1={t1}: decide={self_similar} corollary={closed} rule={rule} oracle={oracle}")
            })?;
            if self_similar {
                acc.from_corollary.push(t);
            }
            count += 1;
        }
    }
    Ok(format!("{count} vectors, {} self-similar, zero disagreements", acc.from_corollary.len()))
}

fn criterion4(acc: &mut Accepted) -> Outcome {
    let mut count = 0;
    for (cap, tau_max) in [(1u8, 4usize), (2, 3)] {
        for m in 1..=2 {
            for t in enumerate_candidates(m, cap, tau_max, DEFAULT_ENUMERATION_BUDGET).map_err(|e| e.to_string())? {
                let g = build_graph(&t).map_err(|e| e.to_string())?;
                let acyclic = !g.has_cycle();
                let nilpotent = is_nilpotent(&g.adjacency());
                let bound = t.tau() + g.vertex_count();
                let covering = covering_holds(&t, bound, DEFAULT_SEARCH_BUDGET).map_err(|e| e.to_string())?.holds;
                let (v, kahn) = common::graph_acyclic(cap, &digits_of(&t));
                ensure(acyclic == nilpotent && nilpotent == covering && covering == kahn && v == g.vertex_count(), || {
                    format!("{}: dfs={acyclic} nilpotent={nilpotent} covering={covering} kahn={kahn}", t.describe())
                })?;
                if (cap as u64 + 1).checked_pow(bound as u32).is_some_and(|u| u <= 100_000) {
                    let brute = common::covering_brute(cap, &digits_of(&t), bound);
                    ensure(brute == covering, || format!("{}: brute-force covering={brute}", t.describe()))?;
                }
                if acyclic {
                    acc.from_oracles.push(t);
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} vectors, {} admissible, zero disagreements", acc.from_oracles.len()))
}

fn criterion5(acc: &mut Accepted) -> Outcome {
    for cap in 1..=3u8 {
        for m in 1..=16 {
            let t = construct_admissible(m, cap).map_err(|e| e.to_string())?;
            ensure(t.m() == m, || format!("N={cap} m={m}: {} entries", t.m() + 1))?;
            let a = is_admissible(&t, CheckMode::CrossCheck).map_err(|e| e.to_string())?;
            ensure(a.admissible, || format!("N={cap} m={m}: not admissible"))?;
            ensure(common::graph_acyclic(cap, &digits_of(&t)).1, || format!("N={cap} m={m}: oracle finds a cycle"))?;
            let ifs = extract_ifs(&t).map_err(|e| e.to_string())?;
            ensure(verify_symbolic(&t, &ifs), || format!("N={cap} m={m}: symbolic check failed"))?;
            acc.from_constructor.push(t);
        }
    }
    Ok("48 constructed vectors admissible, IFS verified symbolically".into())
}

fn random_vector(rng: &mut ChaCha8Rng) -> TranslationVector {
    loop {
        let cap = rng.gen_range(1..=3u8);
        let m = rng.gen_range(1..=3usize);
        let tau = rng.gen_range(1..=4usize);
        let mut entries: Vec<DigitString> = (0..m)
            .map(|_| {
                let d: Vec<u8> = (0..tau).map(|_| rng.gen_range(0..=cap)).collect();
                DigitString::new(cap, d).unwrap()
            })
            .filter(|d| !d.is_zero())
            .collect();
        entries.sort_by(|a, b| a.partial_cmp(b).unwrap());
        entries.dedup();
        if entries.len() == m {
            return TranslationVector::from_nonzero(cap, entries).unwrap();
        }
    }
}

fn criterion6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let (mut scalings, mut conjugations) = (0, 0);
    for _ in 0..500 {
        let t = random_vector(&mut rng);
        let base = is_admissible(&t, CheckMode::Fast).map_err(|e| e.to_string())?.admissible;
        for q in -3..=3 {
            let Some(s) = t.scale(q) else { continue };
            let scaled = is_admissible(&s, CheckMode::Fast).map_err(|e| e.to_string())?.admissible;
            ensure(scaled == base, || format!("{} scaled by {q}: {base} vs {scaled}", t.describe()))?;
            scalings += 1;
        }
        if let Conjugate::InT(hat) = t.conjugate() {
            let a = decide_self_similar(&t, Regime::Below, CheckMode::Fast).map_err(|e| e.to_string())?.decision;
            let b = decide_self_similar(&hat, Regime::Below, CheckMode::Fast).map_err(|e| e.to_string())?.decision;
            ensure(a == b, || format!("{}: {a:?} vs conjugate {b:?}", t.describe()))?;
            conjugations += 1;
        }
    }
    Ok(format!("500 vectors, {scalings} scalings, {conjugations} conjugations, zero violations"))
}

fn criterion7(acc: &Accepted) -> Outcome {
    let mut total_checks = 0u64;
    let vectors: Vec<&TranslationVector> = acc.from_corollary.iter().chain(&acc.from_constructor).collect();
    for t in &vectors {
        let beta = Beta::standard(t.cap());
        let ifs = extract_ifs(t).map_err(|e| e.to_string())?;
        for float in [false, true] {
            let opts = NumericOptions {
                samples: 1000,
                depth: 12,
                float,
                ..NumericOptions::default()
            };
            let r = verify_numeric(t, &ifs, &beta, &opts).map_err(|e| e.to_string())?;
            ensure(r.passed && r.failures == 0 && r.uncovered_cylinders == 0, || {
                format!("{} ({}): {r:?}", t.describe(), r.mode)
            })?;
            if float {
                ensure(r.max_residual_f64 < 1e-9, || format!("{}: float residual {}", t.describe(), r.max_residual))?;
            } else {
                ensure(r.max_residual == "0", || format!("{}: exact residual {}", t.describe(), r.max_residual))?;
            }
            total_checks += r.checks;
        }
    }
    Ok(format!("{} vectors, {total_checks} map/sample checks, exact residual 0, float < 1e-9", vectors.len()))
}

fn criterion8(acc: &Accepted) -> Outcome {
    let mut count = 0;
    for t in acc.from_corollary.iter().chain(&acc.from_oracles).chain(&acc.from_constructor) {
        let cap = t.cap();
        let beta = rat(1, 2 * cap as i64 + 2);
        let values: Vec<_> = t.entries().iter().map(|e| common::t_value(cap, e.digits(), &beta)).collect();
        for w in values.windows(2) {
            ensure(&w[1] - &w[0] > rat(1, 1), || format!("{}: gap {} <= 1", t.describe(), &w[1] - &w[0]))?;
        }
        count += 1;
    }
    Ok(format!("{count} accepted vectors, every gap > 1"))
}

fn main() -> ExitCode {
    let mut acc = Accepted::default();
    let mut all_ok = true;
    let mut run = |id: usize, title: &str, limit: Option<Duration>, f: &mut dyn FnMut(&mut Accepted) -> Outcome| {
        let start = Instant::now();
        let outcome = f(&mut acc);
        let elapsed = start.elapsed();
        let late = limit.is_some_and(|l| elapsed > l);
        let ok = outcome.is_ok() && !late;
        all_ok &= ok;
        let limit_text = limit.map(|l| format!(" (limit {:.0}s)", l.as_secs_f64())).unwrap_or_default();
        let detail = match outcome {
            Ok(d) if late => format!("{d}; exceeded time limit"),
            Ok(d) => d,
            Err(e) => e,
        };
        println!(
            "criterion {id} [{title}]: {} in {:.2}s{limit_text}: {detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    };
    let secs = |s| Some(Duration::from_secs(s));
    run(1, "four-translate regression", secs(1), &mut |_| criterion1());
    run(2, "ones family sweep", secs(5), &mut |_| criterion2());
    run(3, "m=1 closed form", secs(60), &mut criterion3);
    run(4, "three-way oracle equivalence", secs(600), &mut criterion4);
    run(5, "constructor", secs(60), &mut criterion5);
    run(6, "scaling and conjugation", None, &mut |_| criterion6());
    run(7, "numeric IFS verification", secs(300), &mut |a| criterion7(a));
    run(8, "gap invariant", None, &mut |a| criterion8(a));
    if all_ok {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
