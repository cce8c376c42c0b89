use criterion::{criterion_group, criterion_main, Criterion};
use levque::{
    mc_lst_estimate, scale_w, Horizon, LevyModel, PhaseVector, SimConfig,
};

fn bench_scale_inversion(c: &mut Criterion) {
    let model = LevyModel::cpexp(1.0, 1.0, 0.5).unwrap();
    c.bench_function("scale_w_inversion_point", |b| {
        b.iter(|| scale_w(&model, 0.8, 1.7).unwrap())
    });
}

fn bench_mc_paths(c: &mut Criterion) {
    let model = LevyModel::bm_pos(-1.0, 1.0).unwrap();
    let horizon = Horizon::Phases(PhaseVector::single(1.0).unwrap());
    let cfg = SimConfig {
        paths: 2000,
        ..SimConfig::default()
    };
    c.bench_function("mc_lst_2000_paths", |b| {
        b.iter(|| mc_lst_estimate(&model, 0.0, &horizon, 1.0, &cfg).unwrap().value)
    });
}

criterion_group!(benches, bench_scale_inversion, bench_mc_paths);
criterion_main!(benches);
