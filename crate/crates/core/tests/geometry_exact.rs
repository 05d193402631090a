use std::f64::consts::PI;

use approx::assert_relative_eq;
use pmelab_core::geometry::{build_grid, compute_geometry};
use pmelab_core::DomainShape;

fn check(shape: DomainShape, rho0: f64, d: f64, volume: f64, surface: f64) {
    let g = compute_geometry(shape).unwrap();
    assert_relative_eq!(g.rho0, rho0, max_relative = 1e-12);
    assert_relative_eq!(g.d, d, max_relative = 1e-12);
    assert_relative_eq!(g.volume, volume, max_relative = 1e-12);
    assert_relative_eq!(g.surface, surface, max_relative = 1e-12);
}

#[test]
fn closed_form_scalars_of_the_reference_domains() {
    check(DomainShape::Ball { radius: 1.0 }, 1.0, 1.0, 4.0 * PI / 3.0, 4.0 * PI);
    check(DomainShape::Interval { half_length: 2.0 }, 2.0, 2.0, 4.0, 2.0);
    check(DomainShape::Rectangle { half_x: 1.0, half_y: 2.0 }, 1.0, 5f64.sqrt(), 8.0, 12.0);
    check(DomainShape::Disk { radius: 1.0 }, 1.0, 1.0, PI, 2.0 * PI);
}

#[test]
fn scaled_ball_scalars() {
    let r = 2.5;
    check(DomainShape::Ball { radius: r }, r, r, 4.0 * PI * r.powi(3) / 3.0, 4.0 * PI * r * r);
}

#[test]
fn grids_integrate_constants_exactly() {
    for shape in [
        DomainShape::Ball { radius: 1.0 },
        DomainShape::Disk { radius: 1.5 },
        DomainShape::Interval { half_length: 2.0 },
        DomainShape::Rectangle { half_x: 1.0, half_y: 2.0 },
    ] {
        let g = compute_geometry(shape).unwrap();
        for res in [8, 33, 128] {
            let grid = build_grid(&g, res).unwrap();
            let ones = vec![1.0; grid.len()];
            assert_relative_eq!(grid.integrate(&ones, 1.0).unwrap(), g.volume, max_relative = 1e-12);
            assert_relative_eq!(grid.integrate_boundary(&ones, 1.0).unwrap(), g.surface, max_relative = 1e-12);
        }
    }
}
