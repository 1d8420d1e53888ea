use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gevrey_core::borel::{laplace_sum, AntiESpec, Direction};
use gevrey_core::oracles::{euler_gamma_at, gamma_at};
use gevrey_core::pslq::{context_for_digits, probe_conjecture3};
use gevrey_core::series::{eval_e, EFunctionSpec};
use gevrey_core::{ComplexBall, Integer, PrecisionContext, Rational};

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn e_functions(c: &mut Criterion) {
    let spec = EFunctionSpec::eas(&q(1, 3), 2).unwrap();
    let mut g = c.benchmark_group("eval_e");
    for bits in [128u32, 256, 1024] {
        let ctx = PrecisionContext::at(bits);
        let z = ComplexBall::from_rationals(&q(3, 2), &q(-1, 2), bits);
        g.bench_with_input(BenchmarkId::from_parameter(bits), &bits, |b, _| b.iter(|| eval_e(&spec, &z, &ctx).unwrap()));
    }
    g.finish();
}

fn borel_laplace(c: &mut Criterion) {
    let spec = AntiESpec::new(q(1, 2), 1);
    let mut g = c.benchmark_group("laplace_sum");
    g.sample_size(10);
    for bits in [128u32, 256] {
        let ctx = PrecisionContext::at(bits);
        let z = ComplexBall::from_rational(&q(1, 1), bits);
        g.bench_with_input(BenchmarkId::from_parameter(bits), &bits, |b, _| {
            b.iter(|| laplace_sum(&spec, &z, &Direction::zero(), &ctx).unwrap())
        });
    }
    g.finish();
}

fn oracles(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracles");
    g.sample_size(20);
    g.bench_function("gamma(1/3) 256", |b| b.iter(|| gamma_at(&q(1, 3), 256).unwrap()));
    g.bench_function("euler_gamma 512", |b| b.iter(|| euler_gamma_at(512)));
    g.finish();
}

fn relation_probe(c: &mut Criterion) {
    let ctx = context_for_digits(150);
    let h = Integer::from(10u64.pow(12));
    let mut g = c.benchmark_group("pslq");
    g.sample_size(10);
    g.bench_function("conjecture3 a=1/2 s=1", |b| b.iter(|| probe_conjecture3(&q(1, 2), 1, 150, &h, &ctx).unwrap()));
    g.finish();
}

criterion_group!(benches, e_functions, borel_laplace, oracles, relation_probe);
criterion_main!(benches);
