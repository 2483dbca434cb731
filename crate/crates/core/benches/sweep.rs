use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use dmm_core::channel::ChannelParams;
use dmm_core::ldpc::decode_bp;
use dmm_core::simkit::{CodeSource, Execution, OuterCodeConfig, StopRule, System, SystemConfig};

const FRAMES: u64 = 64;

fn small_system() -> System {
    System::build(SystemConfig {
        inner_code: CodeSource::Generated {
            n: 960,
            m: 480,
            col_degree: 3,
            seed: 1,
        },
        outer_code: OuterCodeConfig {
            base: CodeSource::Generated {
                n: 240,
                m: 160,
                col_degree: 3,
                seed: 2,
            },
            rep_factor: 4,
        },
        esn0_grid_db: vec![-1.0],
        // never stop early: every run decodes exactly FRAMES frames
        stop: StopRule {
            min_frame_errors: u64::MAX,
            max_frames: FRAMES,
        },
        ..SystemConfig::default()
    })
    .expect("bench system")
}

fn sweep_modes(c: &mut Criterion) {
    let sys = small_system();
    let mut group = c.benchmark_group("sweep");
    group.throughput(Throughput::Elements(FRAMES));
    group.sample_size(10);
    for (name, exec) in [
        ("sequential", Execution::Sequential),
        ("parallel", Execution::Parallel),
    ] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| black_box(sys.run_sweep(exec).unwrap()))
        });
    }
    group.finish();
}

fn decoder(c: &mut Criterion) {
    let sys = System::build(SystemConfig::default()).expect("desk system");
    let p = ChannelParams::from_esn0_db(1.0, -1.0).unwrap();
    let tx = sys.transmit(0, &p);
    let outer_llr = sys.outer_llrs(&tx.received, &p);
    let inner_llr = sys.inner_llrs(&tx.received, &tx.beta, &p);
    let mut group = c.benchmark_group("decode");
    group.sample_size(20);
    group.bench_function("inner_4032", |b| {
        b.iter(|| black_box(decode_bp(sys.inner(), &inner_llr, 50)))
    });
    group.bench_function("outer_1008x4", |b| {
        b.iter(|| black_box(sys.decode_outer(&outer_llr)))
    });
    group.finish();
}

criterion_group!(benches, sweep_modes, decoder);
criterion_main!(benches);
