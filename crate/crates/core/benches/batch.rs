//! Parallel against sequential batch verification: dual norms of random
//! functionals and norms of random vectors.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treespace::batch;
use treespace::dual::dual_norm;
use treespace::norm::{norm, SpaceId};
use treespace::tree::TreeKind;
use treespace::gen;

fn batches(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let fs: Vec<_> = (0..512).map(|_| gen::functional(&mut rng, TreeKind::Binary, 5, 12, 3)).collect();
    let xs: Vec<_> = (0..512).map(|_| gen::vector(&mut rng, TreeKind::Binary, 8, 40)).collect();

    let mut g = c.benchmark_group("dual_norm");
    g.bench_function(BenchmarkId::new("map", fs.len()), |b| b.iter(|| batch::map(&fs, |f| dual_norm(f).0)));
    g.bench_function(BenchmarkId::new("map_seq", fs.len()), |b| b.iter(|| batch::map_seq(&fs, |f| dual_norm(f).0)));
    g.finish();

    let mut g = c.benchmark_group("norm");
    let t = SpaceId::XT;
    g.bench_function(BenchmarkId::new("map", xs.len()), |b| b.iter(|| batch::map(&xs, |x| norm(&t, x).unwrap().0)));
    g.bench_function(BenchmarkId::new("map_seq", xs.len()), |b| {
        b.iter(|| batch::map_seq(&xs, |x| norm(&t, x).unwrap().0))
    });
    g.finish();
}

criterion_group!(benches, batches);
criterion_main!(benches);
