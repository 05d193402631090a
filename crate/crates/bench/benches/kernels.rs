use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pmelab_core::bounds::optimize_eps1;
use pmelab_core::geometry::{build_grid, compute_geometry};
use pmelab_core::pde::{prepare_datum, spatial_rhs};
use pmelab_core::verify::check_inequality;
use pmelab_core::{
    BoundVariant, DomainShape, Field, InequalityCase, InequalityKind, InitialDatum, ProblemParams,
    TestFunction,
};

fn rhs(c: &mut Criterion) {
    let params = ProblemParams::new(1.0, 1.0, 1.0, 1.0, 2.5, 3.0, 2.0);
    let beta = params.beta_blowup();
    let datum = InitialDatum::GaussianBump { offset: 1.0, amplitude: 2.0, width: 0.5 };
    let mut group = c.benchmark_group("spatial_rhs");
    for (name, shape, res) in [
        ("ball", DomainShape::Ball { radius: 1.0 }, 256),
        ("ball", DomainShape::Ball { radius: 1.0 }, 1024),
        ("rectangle", DomainShape::Rectangle { half_x: 1.0, half_y: 2.0 }, 64),
    ] {
        let geom = compute_geometry(shape).unwrap();
        let grid = build_grid(&geom, res).unwrap();
        // the rectangle takes k = 0 data, which need no projection
        let p = if name == "rectangle" { ProblemParams { k: 0.0, ..params } } else { params };
        let values = match name {
            "rectangle" => vec![1.5; grid.len()],
            _ => prepare_datum(&datum, &p, beta, &grid).unwrap(),
        };
        let field = Field::new(&grid, values, 0.0).unwrap();
        group.bench_with_input(BenchmarkId::new(name, res), &field, |b, f| {
            b.iter(|| spatial_rhs(black_box(f), &p, beta).unwrap())
        });
    }
    group.finish();
}

fn eps1(c: &mut Criterion) {
    let params = ProblemParams::new(1.0, 1.0, 1.0, 1.0, 2.5, 2.0, 1.6);
    let ball = compute_geometry(DomainShape::Ball { radius: 1.0 }).unwrap();
    let disk = compute_geometry(DomainShape::Disk { radius: 1.0 }).unwrap();
    c.bench_function("optimize_eps1/3d", |b| {
        b.iter(|| optimize_eps1(&params, &ball, black_box(4.0), BoundVariant::BlowUp3d).unwrap())
    });
    c.bench_function("optimize_eps1/2d", |b| {
        b.iter(|| optimize_eps1(&params, &disk, black_box(3.0), BoundVariant::BlowUp2d).unwrap())
    });
}

fn inequality(c: &mut Criterion) {
    let ball = compute_geometry(DomainShape::Ball { radius: 1.0 }).unwrap();
    let case = InequalityCase {
        kind: InequalityKind::Interp3d,
        lambda: 2.0,
        epsilon: Some(1.0),
        test_function: TestFunction::trig_mix(1, 3),
        resolution: 128,
    };
    c.bench_function("check_inequality/interp-3d/128", |b| {
        b.iter(|| check_inequality(black_box(&case), &ball).unwrap())
    });
}

criterion_group!(benches, rhs, eps1, inequality);
criterion_main!(benches);
