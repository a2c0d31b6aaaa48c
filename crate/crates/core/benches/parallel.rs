//! Exhaustive reflection checks and S-set construction. Run once with the
//! default features and once with `--no-default-features` to compare the
//! rayon and sequential paths; the group name records which one ran.

use badseq::nwqo::NwqoTerm;
use badseq::par;
use badseq::reflect::{s_sets, verify_reflection, Reflection};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn mode() -> &'static str {
    if par::is_parallel() {
        "parallel"
    } else {
        "sequential"
    }
}

fn reflections(c: &mut Criterion) {
    let mut g = c.benchmark_group(format!("verify_reflection/{}", mode()));
    g.sample_size(10);
    let cases = [
        (Reflection::ord_to_maj(2).unwrap(), 3),
        (Reflection::maj_to_min(2).unwrap(), 3),
        (Reflection::min_to_prod_maj(3).unwrap(), 2),
    ];
    for (r, n) in &cases {
        g.bench_function(format!("{} n<={n}", r.label), |b| b.iter(|| assert!(verify_reflection(black_box(r), *n).passed)));
    }
    g.finish();
}

fn sets(c: &mut Criterion) {
    let pool: Vec<Vec<Vec<u64>>> = NwqoTerm::MinPow(2)
        .enumerate_up_to(2)
        .unwrap()
        .iter()
        .filter_map(|e| e.as_vector_set())
        .filter(|s| !s.is_empty())
        .collect();
    c.bench_function(&format!("s_sets/{}/d=2 n<=2", mode()), |b| {
        b.iter(|| par::map_slice(&pool, |x| s_sets(x, 2, 10).unwrap().len()))
    });
}

criterion_group!(benches, reflections, sets);
criterion_main!(benches);
