//! The property suites behind `verify-all`.

use std::time::Instant;

use badseq::hierarchy::{cichon, fast_growing, hardy, Budget, ControlFunction};
use badseq::ideal::comp_up;
use badseq::length::{brute_force_length, check_sandwich, length_function, m_upper, max_bad_sequence, LengthQuery, Status};
use badseq::nwqo::NwqoTerm;
use badseq::ordinal::{enumerate_below, Ordinal};
use badseq::par;
use badseq::reflect::{
    bstar_is_full, canonical_nwqo, fix_is_full, in_range, index_subsequences, order_type, partial_derivative,
    residual_reflection, transport, verify_reflection, Reflection,
};
use clap::ValueEnum;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{Failure, Out};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    Desk,
    Quick,
}

struct Sizes {
    ordinals: usize,
    n_max: u64,
    reflect_n: u64,
    steps: u64,
}

impl Profile {
    fn sizes(self) -> Sizes {
        match self {
            Profile::Desk => Sizes { ordinals: 120, n_max: 3, reflect_n: 3, steps: 200_000 },
            Profile::Quick => Sizes { ordinals: 30, n_max: 2, reflect_n: 2, steps: 20_000 },
        }
    }
}

#[derive(Default)]
struct Tally {
    checked: u64,
    skipped: u64,
    failure: Option<Value>,
}

impl Tally {
    fn fail(&mut self, v: Value) {
        if self.failure.is_none() {
            self.failure = Some(v);
        }
    }

    // counts budget errors as skips; anything else is a failure
    fn skip_or_fail(&mut self, what: &str, e: &badseq::Error) {
        if e.is_budget() {
            self.skipped += 1;
        } else {
            self.fail(json!({"case": what, "error": e.to_string()}));
        }
    }
}

struct Ctx {
    sizes: Sizes,
    pool: Vec<Ordinal>,
    small: Vec<Ordinal>,
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

/// A random ordinal below `ω^(ω^ω)` with every coefficient at most `c`.
fn random_ordinal(rng: &mut ChaCha8Rng, depth: u32, c: u64) -> Ordinal {
    if depth == 0 {
        return Ordinal::from_u64(rng.gen_range(0..=c));
    }
    let k = rng.gen_range(0..=3);
    let mut exps: Vec<Ordinal> = (0..k).map(|_| random_ordinal(rng, depth - 1, c)).collect();
    exps.sort_by(|a, b| b.cmp(a));
    exps.dedup();
    exps.into_iter().fold(Ordinal::zero(), |acc, e| acc.add(&Ordinal::monomial(e, big(rng.gen_range(1..=c)))))
}

fn suite_arith(x: &Ctx) -> Tally {
    let mut t = Tally::default();
    let p = &x.small;
    for a in p {
        if a.to_string().parse::<Ordinal>().ok().as_ref() != Some(a) {
            t.fail(json!({"round_trip": a.to_string()}));
        }
        for b in p.iter().take(12) {
            for c in p.iter().take(6) {
                t.checked += 1;
                let ok = a.nat_sum(b) == b.nat_sum(a)
                    && a.nat_sum(&b.nat_sum(c)) == a.nat_sum(b).nat_sum(c)
                    && a.nat_product(b) == b.nat_product(a)
                    && a.nat_product(&b.nat_product(c)) == a.nat_product(b).nat_product(c)
                    && a.nat_product(&b.nat_sum(c)) == a.nat_product(b).nat_sum(&a.nat_product(c));
                if !ok {
                    t.fail(json!({"a": a.to_string(), "b": b.to_string(), "c": c.to_string()}));
                }
            }
        }
    }
    t
}

fn suite_fundamental(x: &Ctx) -> Tally {
    let mut t = Tally::default();
    for a in &x.pool {
        for i in 0..=3u64 {
            if a.is_limit() {
                t.checked += 1;
                match a.fundamental(i) {
                    Ok(f) if f < *a => {}
                    r => t.fail(json!({"fundamental": a.to_string(), "x": i, "got": format!("{r:?}")})),
                }
            }
            if !a.is_zero() {
                t.checked += 1;
                match a.predecessor(i) {
                    Ok(f) if f < *a => {}
                    r => t.fail(json!({"predecessor": a.to_string(), "x": i, "got": format!("{r:?}")})),
                }
            }
        }
    }
    t
}

fn suite_hierarchy(x: &Ctx) -> Tally {
    let mut t = Tally::default();
    let s = ControlFunction::Successor;
    let steps = x.sizes.steps / 100;
    for a in &x.small {
        for v in 0..=6u64 {
            match (cichon(&s, a, &big(v), &mut Budget::new(steps)), hardy(&s, a, &big(v), &mut Budget::new(steps))) {
                (Ok(c), Ok(h)) if h >= big(v) && c == &h - big(v) => t.checked += 1,
                (Ok(c), Ok(h)) => t.fail(json!({"ordinal": a.to_string(), "x": v, "cichon": c.to_string(), "hardy": h.to_string()})),
                _ => t.skipped += 1,
            }
            for r in 1..=2u64 {
                let mut f = Ok(big(v));
                for _ in 0..r {
                    f = f.and_then(|y| fast_growing(&s, a, &y, &mut Budget::new(steps)));
                }
                let h = f.and_then(|f| Ok((f, hardy(&s, &Ordinal::monomial(a.clone(), big(r)), &big(v), &mut Budget::new(steps))?)));
                match h {
                    Ok((f, h)) if f == h => t.checked += 1,
                    Ok((f, h)) => t.fail(json!({"ordinal": a.to_string(), "r": r, "x": v, "fast": f.to_string(), "hardy": h.to_string()})),
                    Err(_) => t.skipped += 1,
                }
            }
        }
    }
    t
}

fn suite_order(_: &Ctx) -> Tally {
    let mut t = Tally::default();
    for s in ["G(3)", "N", "G(2) + G(2)", "G(2) * N", "PMaj(N)", "PMin(1)", "PMin(2)", "CNF(w^2)"] {
        let a: NwqoTerm = s.parse().unwrap();
        let es = match a.enumerate_up_to(1) {
            Ok(v) => v,
            Err(e) => {
                t.skip_or_fail(s, &e);
                continue;
            }
        };
        for x in &es {
            t.checked += 1;
            if !a.le(x, x) {
                t.fail(json!({"term": s, "not_reflexive": a.element_to_json(x)}));
            }
            for y in es.iter().filter(|y| a.le(x, y)) {
                for z in es.iter().filter(|z| a.le(y, z)) {
                    t.checked += 1;
                    if !a.le(x, z) {
                        t.fail(json!({"term": s, "x": a.element_to_json(x), "y": a.element_to_json(y), "z": a.element_to_json(z)}));
                    }
                }
            }
        }
    }
    t
}

fn suite_oracle(x: &Ctx) -> Tally {
    let mut t = Tally::default();
    let terms = ["G(1)", "G(4)", "N", "G(2) + G(2)", "G(2) * N", "CNF(w)", "CNF(w^2)", "CNF(w*2+1)", "PMaj(N)", "PMin(1)"];
    for s in terms {
        for n in 0..=x.sizes.n_max.min(2) {
            let q = || LengthQuery::new(s.parse().unwrap(), ControlFunction::Successor, n).with_budget(x.sizes.steps);
            match (length_function(&mut q()), brute_force_length(&mut q())) {
                (Ok(a), Ok(b)) if a == b => t.checked += 1,
                (Ok(a), Ok(b)) => t.fail(json!({"term": s, "n": n, "descent": a.to_string(), "brute_force": b.to_string()})),
                (Err(e), _) | (_, Err(e)) => t.skip_or_fail(s, &e),
            }
        }
    }
    t
}

fn suite_ordlft(x: &Ctx) -> Tally {
    let mut t = Tally::default();
    for g in ["succ", "x+2"] {
        let g: ControlFunction = g.parse().unwrap();
        for a in x.small.iter().filter(|a| **a < "w^3".parse().unwrap()) {
            for n in a.norm_u64()..=x.sizes.n_max {
                let mut q = LengthQuery::new(NwqoTerm::Ord(a.clone()), g.clone(), n).with_budget(x.sizes.steps);
                match (length_function(&mut q), cichon(&g, a, &big(n), &mut Budget::new(x.sizes.steps))) {
                    (Ok(l), Ok(c)) if l == c => t.checked += 1,
                    (Ok(l), Ok(c)) => t.fail(json!({"ordinal": a.to_string(), "control": g.to_string(), "n": n, "length": l.to_string(), "cichon": c.to_string()})),
                    (Err(e), _) | (_, Err(e)) => t.skip_or_fail(&a.to_string(), &e),
                }
            }
        }
    }
    t
}

fn suite_mupper(x: &Ctx) -> Tally {
    let mut t = Tally::default();
    let g = ControlFunction::Successor;
    let h = ControlFunction::FourXTimes(Box::new(g.clone()));
    // C(α) for α < ω² is a sum of copies of P_f(ℕ) and Γ_k; products of two
    // P_f(ℕ) factors already explode at n = 1
    let pool = enumerate_below(&Ordinal::omega_pow(Ordinal::from_u64(2)), 3, 1 << 10).unwrap_or_default();
    for a in pool.iter().filter(|a| in_range(a)) {
        let term = match canonical_nwqo(a) {
            Ok(v) => v,
            Err(e) => {
                t.skip_or_fail(&a.to_string(), &e);
                continue;
            }
        };
        for n in 1..=2u64 {
            let l = length_function(&mut LengthQuery::new(term.clone(), g.clone(), n).with_budget(x.sizes.steps / 10));
            let m = m_upper(a, &g, n, &mut Budget::new(x.sizes.steps));
            let k = a.norm_u64().max(1);
            let c = cichon(&h, a, &big(4 * k * n), &mut Budget::new(x.sizes.steps));
            match (m, c) {
                (Ok(m), Ok(c)) => {
                    if m > c {
                        t.fail(json!({"ordinal": a.to_string(), "n": n, "m_upper": m.to_string(), "h_bound": c.to_string()}));
                    }
                    match l {
                        Ok(l) if l <= m => t.checked += 1,
                        Ok(l) => t.fail(json!({"ordinal": a.to_string(), "n": n, "length": l.to_string(), "m_upper": m.to_string()})),
                        Err(e) => t.skip_or_fail(&a.to_string(), &e),
                    }
                }
                (Err(e), _) | (_, Err(e)) => t.skip_or_fail(&a.to_string(), &e),
            }
        }
    }
    t
}

fn suite_derivative(x: &Ctx) -> Tally {
    let mut t = Tally::default();
    for a in &x.pool {
        let k = a.norm_u64();
        for n in 0..=3u64 {
            match partial_derivative(a, n) {
                Ok(kids) => {
                    for b in kids {
                        t.checked += 1;
                        let lean = k == 0 || n == 0 || b.is_k_lean(2 * k + (k + 1) * n);
                        if b >= *a || !lean {
                            t.fail(json!({"ordinal": a.to_string(), "n": n, "member": b.to_string()}));
                        }
                    }
                }
                Err(e) => t.skip_or_fail(&a.to_string(), &e),
            }
        }
    }
    t
}

fn suite_order_type(x: &Ctx) -> Tally {
    let mut t = Tally::default();
    for a in x.pool.iter().filter(|a| in_range(a)) {
        match canonical_nwqo(a).and_then(|c| order_type(&c)) {
            Ok(b) if b == *a => t.checked += 1,
            Ok(b) => t.fail(json!({"ordinal": a.to_string(), "round_trip": b.to_string()})),
            Err(e) => t.skip_or_fail(&a.to_string(), &e),
        }
    }
    t
}

fn record(t: &mut Tally, r: &Reflection, n: u64) {
    let rep = verify_reflection(r, n);
    match &rep.error {
        Some(e) if e.contains("budget") || e.contains("enumeration exceeded") => t.skipped += 1,
        Some(_) => t.fail(serde_json::to_value(&rep).unwrap()),
        None if rep.passed => t.checked += 1,
        None => t.fail(serde_json::to_value(&rep).unwrap()),
    }
}

fn suite_named(x: &Ctx) -> Tally {
    let mut t = Tally::default();
    let n = x.sizes.reflect_n;
    record(&mut t, &Reflection::ord_to_maj(2).unwrap(), n);
    record(&mut t, &Reflection::ord_to_maj(3).unwrap(), n.min(2));
    for d in 1..=2 {
        record(&mut t, &Reflection::maj_to_min(d).unwrap(), n);
    }
    for d in 2..=3 {
        record(&mut t, &Reflection::min_to_prod_maj(d).unwrap(), n.min(2));
    }
    t
}

fn suite_residual(x: &Ctx) -> Tally {
    let mut t = Tally::default();
    for s in ["PMaj(N)", "PMaj(N^2)", "PMaj(N) * PMaj(N)", "G(2) + PMaj(N)"] {
        let a: NwqoTerm = s.parse().unwrap();
        for n in 1..=x.sizes.n_max.min(2) {
            for e in a.enumerate_up_to(n).unwrap() {
                match residual_reflection(&a, &e, n) {
                    Ok(r) => record(&mut t, &r, 2),
                    Err(err) => t.fail(json!({"term": s, "x": a.element_to_json(&e), "n": n, "error": err.to_string()})),
                }
            }
        }
    }
    t
}

fn suite_s_sets(_: &Ctx) -> Tally {
    let mut t = Tally::default();
    for (d, nm) in [(2usize, 2u64), (3, 1)] {
        for e in NwqoTerm::MinPow(d).enumerate_up_to(nm).unwrap() {
            let xs = e.as_vector_set().unwrap();
            if xs.is_empty() {
                continue;
            }
            let comp = comp_up(d, &xs).unwrap();
            let range = NwqoTerm::MinPow(d).norm(&e) + 2;
            for idx in index_subsequences(d) {
                let k = idx.len() as u32;
                for code in 0..(range + 1).pow(k) {
                    let pt: Vec<u64> = (0..k).map(|j| code / (range + 1).pow(j) % (range + 1)).collect();
                    t.checked += 1;
                    if fix_is_full(&comp, &idx, &pt).unwrap() != bstar_is_full(&xs, &idx, &pt) {
                        t.fail(json!({"x": xs, "index": idx, "t": pt}));
                    }
                }
            }
        }
    }
    t
}

fn suite_sandwich(x: &Ctx) -> Tally {
    let mut t = Tally::default();
    let mut cases: Vec<(usize, u64)> = (1..=x.sizes.n_max).map(|n| (1, n)).collect();
    cases.push((2, 1));
    for (d, n) in cases {
        match check_sandwich(d, &ControlFunction::Successor, n, x.sizes.steps) {
            Ok(rep) => {
                for c in &rep.checks {
                    match c.status {
                        Status::Verified => t.checked += 1,
                        Status::Violated => t.fail(rep.to_json()),
                        _ => t.skipped += 1,
                    }
                }
            }
            Err(e) => t.skip_or_fail(&format!("d={d} n={n}"), &e),
        }
    }
    t
}

fn suite_transport(x: &Ctx) -> Tally {
    let mut t = Tally::default();
    let g = ControlFunction::Successor;
    for s in ["CNF(w)", "CNF(w^2)", "CNF(w*2+1)"] {
        for n in 0..=2u64 {
            let w = match max_bad_sequence(&mut LengthQuery::new(s.parse().unwrap(), g.clone(), n).with_budget(x.sizes.steps)) {
                Ok(w) => w,
                Err(e) => {
                    t.skip_or_fail(s, &e);
                    continue;
                }
            };
            for d in 2..=3 {
                match transport(&Reflection::ord_to_maj(d).unwrap(), &w.sequence, &g, n) {
                    Ok(r) if r.holds() => t.checked += 1,
                    Ok(r) => t.fail(serde_json::to_value(&r).unwrap()),
                    Err(e) => t.skip_or_fail(s, &e),
                }
            }
        }
    }
    t
}

type Suite = (&'static str, fn(&Ctx) -> Tally);

const SUITES: &[Suite] = &[
    ("ordinal.arithmetic", suite_arith),
    ("ordinal.fundamental", suite_fundamental),
    ("hierarchy.identities", suite_hierarchy),
    ("nwqo.order", suite_order),
    ("length.oracle", suite_oracle),
    ("length.ordinal", suite_ordlft),
    ("length.m_upper", suite_mupper),
    ("length.sandwich", suite_sandwich),
    ("reflect.derivative", suite_derivative),
    ("reflect.order_type", suite_order_type),
    ("reflect.named", suite_named),
    ("reflect.residual", suite_residual),
    ("reflect.s_sets", suite_s_sets),
    ("reflect.transport", suite_transport),
];

pub fn run(profile: Profile, seed: u64, budget: u64, as_json: bool) -> Out {
    let started = Instant::now();
    let mut sizes = profile.sizes();
    sizes.steps = sizes.steps.min(budget);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<Ordinal> = (0..sizes.ordinals).map(|_| random_ordinal(&mut rng, 2, 4)).collect();
    let small: Vec<Ordinal> = (0..sizes.ordinals / 3).map(|_| random_ordinal(&mut rng, 2, 2)).collect();
    let ctx = Ctx { sizes, pool, small };
    eprintln!("verify-all: profile {profile:?}, seed {seed}, {} pool ordinals", ctx.pool.len());

    let results: Vec<(&str, Tally)> = par::map_slice(SUITES, |(name, f)| {
        let t = Instant::now();
        let r = f(&ctx);
        eprintln!("  {name}: {:.1}s", t.elapsed().as_secs_f64());
        (*name, r)
    });
    let status = |t: &Tally| {
        if t.failure.is_some() {
            "fail"
        } else if t.checked == 0 && t.skipped > 0 {
            "budget"
        } else {
            "pass"
        }
    };
    let rows: Vec<Value> = results
        .iter()
        .map(|(n, t)| json!({"suite": n, "status": status(t), "checked": t.checked, "skipped": t.skipped, "counterexample": t.failure}))
        .collect();
    let failed = results.iter().any(|(_, t)| t.failure.is_some());
    let exhausted = results.iter().any(|(_, t)| status(t) == "budget");
    let report = json!({
        "profile": format!("{profile:?}").to_lowercase(),
        "seed": seed,
        "budget": ctx.sizes.steps,
        "passed": !failed && !exhausted,
        "suites": rows,
    });
    if as_json {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        for (n, t) in &results {
            println!("{:<6} {n:<22} checked {:>7}  skipped {:>5}", status(t).to_uppercase(), t.checked, t.skipped);
        }
    }
    eprintln!("verify-all: {:.1}s", started.elapsed().as_secs_f64());
    if failed {
        let bad: Vec<&Value> = report["suites"].as_array().unwrap().iter().filter(|r| r["status"] == "fail").collect();
        Err(Failure::Property(json!({"failed": bad})))
    } else if exhausted {
        Err(Failure::Budget(json!({"status": "budget_exceeded", "report": report})))
    } else {
        Ok(())
    }
}
