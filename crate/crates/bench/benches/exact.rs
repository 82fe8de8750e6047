use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use orbhull::lattice_cone::{cone_is_pointed, integer_kernel, semigroup_enumerate, WeightSemigroup};
use orbhull::torus_orbit::{analyze, OrbitPoint, TorusAction};
use orbhull_bench::weight_systems;

fn pointedness(c: &mut Criterion) {
    let mut group = c.benchmark_group("cone_is_pointed");
    for (n, gens) in [(2, 4), (4, 6), (6, 10)] {
        let systems: Vec<WeightSemigroup> = weight_systems(32, n, gens, 5, 1)
            .into_iter()
            .map(|g| WeightSemigroup::new(n, g).unwrap())
            .collect();
        group.bench_with_input(BenchmarkId::from_parameter(format!("{n}x{gens}")), &systems, |b, s| {
            b.iter(|| s.iter().filter(|sg| cone_is_pointed(sg).is_pointed()).count())
        });
    }
    group.finish();
}

fn kernel(c: &mut Criterion) {
    let systems = weight_systems(32, 3, 8, 5, 2);
    c.bench_function("integer_kernel 3x8", |b| b.iter(|| systems.iter().map(|g| integer_kernel(g).unwrap().rank()).sum::<usize>()));
}

fn enumeration(c: &mut Criterion) {
    let systems = weight_systems(8, 2, 4, 3, 3);
    c.bench_function("semigroup_enumerate 2x4 bound 12", |b| {
        b.iter(|| systems.iter().map(|g| semigroup_enumerate(2, g, 12, 1 << 20).unwrap().elements().len()).sum::<usize>())
    });
}

fn torus_analysis(c: &mut Criterion) {
    let cases: Vec<(TorusAction, OrbitPoint)> = weight_systems(32, 3, 6, 3, 4)
        .into_iter()
        .map(|w| (TorusAction::new(3, w).unwrap(), OrbitPoint::exact_integers(&[1, 1, 1, 1, 1, 1])))
        .collect();
    c.bench_function("analyze 3x6", |b| b.iter(|| cases.iter().filter(|(a, v)| analyze(a, v).unwrap().antisymmetric).count()));
}

criterion_group!(benches, pointedness, kernel, enumeration, torus_analysis);
criterion_main!(benches);
