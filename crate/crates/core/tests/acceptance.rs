//! Exit-gate checks. Each criterion prints one `[PASS]` or `[FAIL]` line; the
//! test fails if any criterion does.

#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;

use h1vanish::lattice::{DivisorClass, Lattice};
use h1vanish::oracle::{brute_roots_box, cross_validate, enumerate_effective_bundles, quasi_nef_by_definition, root_box_bound};
use h1vanish::surface::{validate_ample, Effectivity, EnriquesMode, LineBundleClass, SurfaceContext};
use h1vanish::vanishing::{check_lemma_alignment, classify_h1, is_quasi_nef, H1Case, H1Classification, LemmaAlignment};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn c(v: &[i64]) -> DivisorClass {
    DivisorClass::from(v.to_vec())
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn u() -> Lattice {
    Lattice::from_rows([[0, 1], [1, 0]]).unwrap()
}

fn l3() -> Lattice {
    Lattice::from_rows([[4, 0, 0], [0, -2, 1], [0, 1, -2]]).unwrap()
}

fn k3_u() -> SurfaceContext {
    SurfaceContext::k3(u(), c(&[1, 2])).unwrap()
}

fn k3_l3() -> SurfaceContext {
    SurfaceContext::k3(l3(), c(&[3, -1, -1])).unwrap()
}

fn enriques_u() -> SurfaceContext {
    SurfaceContext::enriques(u(), c(&[1, 2]), EnriquesMode::Unnodal).unwrap()
}

/// Everything classified along the way, for the chain and Riemann-Roch checks.
#[derive(Default)]
struct Ledger {
    analyzed: Vec<(String, H1Classification)>,
}

impl Ledger {
    fn record(&mut self, ctx_name: &str, c: H1Classification) {
        self.analyzed.push((ctx_name.to_string(), c));
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1(ledger: &mut Ledger) -> Outcome {
    let ctx = k3_l3();
    let l = LineBundleClass::untwisted(c(&[1, 1, 1]));
    let cl = classify_h1(&ctx, &l).map_err(|e| e.to_string())?;
    let expected = H1Case::CaseIII {
        witness: c(&[0, 1, 1]),
        pairing: big(-2),
    };
    ensure(cl.case == expected, || format!("case {:?}", cl.case))?;
    ensure(cl.h1 == big(1) && cl.h0 == big(4), || format!("h0 {} h1 {}", cl.h0, cl.h1))?;
    ensure(&cl.h0 - &cl.h1 == big(3) && cl.euler_char == big(3), || "chi mismatch".into())?;
    ledger.record("K3 L3", cl);
    Ok("CaseIII, witness (0,1,1) pairing -2, h0 = 4, h1 = 1".into())
}

fn criterion_2(ledger: &mut Ledger) -> Outcome {
    let ctx = k3_u();
    for n in 1..=10i64 {
        let cl = classify_h1(&ctx, &LineBundleClass::untwisted(c(&[0, n]))).map_err(|e| e.to_string())?;
        let want = if n == 1 { 0 } else { n - 1 };
        ensure(cl.h1 == big(want), || format!("h1(n E) for n = {n} is {}, want {want}", cl.h1))?;
        if n >= 2 {
            ensure(matches!(&cl.case, H1Case::CaseI { n: m, .. } if *m == big(n)), || {
                format!("n = {n}: case {:?}", cl.case)
            })?;
        }
        ledger.record("K3 U", cl);
    }
    Ok("h1(n (0,1)) = n - 1 for n = 2..10, h1((0,1)) = 0".into())
}

fn criterion_3(ledger: &mut Ledger) -> Outcome {
    let ctx = enriques_u();
    for n in 2..=10i64 {
        for bit in [false, true] {
            let cl = classify_h1(&ctx, &LineBundleClass::new(c(&[0, n]), bit)).map_err(|e| e.to_string())?;
            let want = if bit { (n - 1) / 2 } else { n / 2 };
            ensure(cl.h1 == big(want), || {
                format!("h1({n} E, bit {}) = {}, want {want}", bit as u8, cl.h1)
            })?;
            ledger.record("Enriques U", cl);
        }
    }
    Ok("h1(nE) = floor(n/2); h1(nE + K) = floor((n-1)/2), 0 at n = 2".into())
}

fn criterion_4(ledger: &mut Ledger) -> Outcome {
    let mut summary = Vec::new();
    for (name, ctx, cap) in [("K3 U", k3_u(), 6), ("K3 L3", k3_l3(), 14)] {
        let cv = cross_validate(&ctx, cap);
        ensure(cv.mismatches.is_empty(), || format!("{name}: {:?}", cv.mismatches))?;
        ensure(cv.checked > 0, || format!("{name}: nothing checked"))?;
        if name == "K3 L3" {
            ensure(cv.counts.get("CaseIII").copied().unwrap_or(0) >= 1, || "no CaseIII on L3".into())?;
        }
        summary.push(format!("{name} cap {cap}: {} bundles", cv.checked));
        for cl in cv.classifications {
            ledger.record(name, cl);
        }
    }
    Ok(format!("0 mismatches ({})", summary.join(", ")))
}

fn random_hyperbolic(rng: &mut ChaCha8Rng) -> Option<(Lattice, DivisorClass)> {
    let rank = rng.gen_range(2..=4usize);
    let mut g = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        g[i][i] = 2 * rng.gen_range(-3..=3i64);
        for j in i + 1..rank {
            let x = rng.gen_range(-6..=6i64);
            g[i][j] = x;
            g[j][i] = x;
        }
    }
    let lat = Lattice::new(g.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect()).ok()?;
    if !lat.signature().is_hyperbolic() {
        return None;
    }
    let mut candidates = Vec::new();
    let mut v = vec![-3i64; rank];
    loop {
        candidates.push(c(&v));
        let mut i = 0;
        while i < rank && v[i] == 3 {
            v[i] = -3;
            i += 1;
        }
        if i == rank {
            break;
        }
        v[i] += 1;
    }
    candidates.shuffle(rng);
    // Small H^2 keeps more roots at low degree.
    let ample = candidates
        .into_iter()
        .filter(|h| lat.norm(h).unwrap() > BigInt::zero() && validate_ample(&lat, h, &[]).is_ok())
        .min_by_key(|h| lat.norm(h).unwrap())?;
    Some((lat, ample))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut tested = 0;
    let mut roots_seen = 0;
    let mut with_roots = 0;
    let mut attempts = 0;
    while tested < 50 {
        attempts += 1;
        ensure(attempts < 100_000, || "could not sample enough lattices".into())?;
        let Some((lat, ample)) = random_hyperbolic(&mut rng) else {
            continue;
        };
        let max_degree: u32 = rng.gen_range(1..=10);
        let bound = root_box_bound(&lat, &ample, max_degree);
        let points = (2 * bound.get() as u64 + 1).pow(lat.rank() as u32);
        if points > 2_000_000 {
            continue;
        }
        let ctx = SurfaceContext::k3(lat.clone(), ample.clone()).map_err(|e| e.to_string())?;
        let mut fast = BTreeSet::new();
        for d in 1..=max_degree {
            for r in ctx.root_query().roots_of_degree(&BigInt::from(d)).map_err(|e| e.to_string())? {
                let fresh = fast.insert(r.clone());
                ensure(fresh, || format!("{r} listed twice"))?;
            }
        }
        let brute: BTreeSet<DivisorClass> = brute_roots_box(&lat, bound)
            .into_iter()
            .filter(|r| {
                let d = ctx.degree(r);
                d >= BigInt::from(1) && d <= BigInt::from(max_degree)
            })
            .collect();
        ensure(fast == brute, || {
            format!(
                "gram {:?} ample {ample} D {max_degree}: fast {:?} brute {:?}",
                lat.gram(),
                fast,
                brute
            )
        })?;
        roots_seen += fast.len();
        with_roots += usize::from(!fast.is_empty());
        tested += 1;
    }
    Ok(format!(
        "50 lattices ({with_roots} with roots), {roots_seen} roots, 0 discrepancies"
    ))
}

fn criterion_6(ledger: &mut Ledger) -> Outcome {
    let mut checked = 0;
    for (name, ctx, cap) in [("K3 U", k3_u(), 6), ("K3 L3", k3_l3(), 14)] {
        for l in enumerate_effective_bundles(&ctx, cap) {
            let q = is_quasi_nef(&ctx, &l).map_err(|e| e.to_string())?;
            let direct = quasi_nef_by_definition(&ctx, &l.cls);
            ensure(q.quasi_nef == direct, || {
                format!("{name} {l}: quasi_nef {} but definition says {direct}", q.quasi_nef)
            })?;
            checked += 1;
            ledger.record(name, q.classification);
        }
    }
    Ok(format!("{checked} bundles agree with the direct definition"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut summary = Vec::new();
    for (name, ctx, cap) in [("K3 U", k3_u(), 24), ("K3 L3", k3_l3(), 30)] {
        let pool = enumerate_effective_bundles(&ctx, cap);
        ensure(pool.len() >= 2, || format!("{name}: pool too small"))?;
        let mut zero = 0;
        for _ in 0..1000 {
            let a = &pool.choose(&mut rng).unwrap().cls;
            let b = &pool.choose(&mut rng).unwrap().cls;
            let lat = ctx.lattice();
            match check_lemma_alignment(&ctx, a, b).map_err(|e| format!("{name} {a} {b}: {e}"))? {
                LemmaAlignment::PositivePairing(p) => {
                    ensure(p > BigInt::zero() && lat.pair(a, b).unwrap() == p, || format!("{a} {b}: bad pairing"))?
                }
                LemmaAlignment::CommonIsotropic { f, a: ma, b: mb } => {
                    zero += 1;
                    ensure(
                        lat.pair(a, b).unwrap().is_zero()
                            && lat.norm(&f).unwrap().is_zero()
                            && f.divisibility() == BigInt::from(1)
                            && &f.scaled(&ma) == a
                            && &f.scaled(&mb) == b
                            && ma > BigInt::zero()
                            && mb > BigInt::zero(),
                        || format!("{a} {b}: bad isotropic certificate {f}"),
                    )?
                }
            }
        }
        summary.push(format!("{name}: 1000 pairs, {zero} zero-pairing"));
    }
    Ok(summary.join("; "))
}

fn criterion_8(ledger: &Ledger) -> Outcome {
    let mut chains = 0;
    let mut witnesses = 0;
    for (name, cl) in &ledger.analyzed {
        let ctx = context_named(name);
        cl.reduction
            .check_invariants(&ctx)
            .map_err(|e| format!("{name} {}: {e}", cl.bundle))?;
        let lat = ctx.lattice();
        for w in cl.reduction.steps.windows(2) {
            ensure(w[0].after == w[1].before, || "chain is not contiguous".into())?;
        }
        for s in &cl.reduction.steps {
            let before = lat.norm(&s.before.cls).unwrap();
            let after = lat.norm(&s.after.cls).unwrap();
            ensure(after >= before, || format!("norm decreased at {}", s.gamma))?;
            ensure(ctx.degree(&s.after.cls) < ctx.degree(&s.before.cls), || "degree not decreasing".into())?;
            if s.pairing == BigInt::from(-1) {
                ensure(ctx.euler_char(&s.after) == ctx.euler_char(&s.before), || "chi changed".into())?;
            }
        }
        if let H1Case::CaseIII { witness, pairing } = &cl.case {
            ensure(
                lat.norm(witness).unwrap() == BigInt::from(-2)
                    && ctx.is_effective(&LineBundleClass::untwisted(witness.clone())) == Effectivity::Effective
                    && &lat.pair(witness, &cl.bundle.cls).unwrap() == pairing
                    && pairing <= &BigInt::from(-2),
                || format!("{name} {}: witness {witness} does not verify", cl.bundle),
            )?;
            witnesses += 1;
        }
        chains += 1;
    }
    Ok(format!("{chains} chains, {witnesses} verified witnesses"))
}

fn context_named(name: &str) -> SurfaceContext {
    match name {
        "K3 U" => k3_u(),
        "K3 L3" => k3_l3(),
        "Enriques U" => enriques_u(),
        other => panic!("unknown context {other}"),
    }
}

fn criterion_9(ledger: &mut Ledger) -> Outcome {
    for (name, bit) in [("K3 U", false), ("K3 L3", false), ("Enriques U", false), ("Enriques U", true)] {
        let ctx = context_named(name);
        let zero = LineBundleClass::new(DivisorClass::zero(ctx.lattice().rank()), bit);
        let cl = classify_h1(&ctx, &zero).map_err(|e| format!("{name} zero: {e}"))?;
        ledger.record(name, cl);
    }
    for (name, cl) in &ledger.analyzed {
        let ctx = context_named(name);
        let norm = ctx.lattice().norm(&cl.bundle.cls).unwrap();
        let rhs = &norm / 2 + ctx.chi_o();
        let lhs = &cl.h0 - &cl.h1 + &cl.h2;
        ensure(lhs == rhs && cl.euler_char == rhs, || {
            format!("{name} {}: h0 - h1 + h2 = {lhs}, L^2/2 + chi(O) = {rhs}", cl.bundle)
        })?;
        ensure(
            cl.h0 >= BigInt::zero() && cl.h1 >= BigInt::zero() && cl.h2 >= BigInt::zero(),
            || format!("{name} {}: negative cohomology", cl.bundle),
        )?;
    }
    Ok(format!("{} bundles, including L = 0 on both kinds", ledger.analyzed.len()))
}

#[test]
fn acceptance() {
    let mut ledger = Ledger::default();
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "L3 counterexample fixture", criterion_1(&mut ledger)),
        (2, "K3 case (i) formula", criterion_2(&mut ledger)),
        (3, "Enriques formulas", criterion_3(&mut ledger)),
        (4, "oracle equivalence", criterion_4(&mut ledger)),
        (5, "root enumeration completeness", criterion_5()),
        (6, "quasi-nef consistency", criterion_6(&mut ledger)),
        (7, "pairing alignment property suite", criterion_7()),
        (8, "reduction invariants", criterion_8(&ledger)),
        (9, "Riemann-Roch identity", criterion_9(&mut ledger)),
    ];
    let mut failed = Vec::new();
    for (n, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("[PASS] criterion {n}: {name}: {detail}"),
            Err(detail) => {
                println!("[FAIL] criterion {n}: {name}: {detail}");
                failed.push(*n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
