//! Helpers shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use yamabe_lab::geom::{scalar_curvature_radial, ConformalFactor, RadialMetric, RadialTerm};
use yamabe_lab::numerics::linspace;

/// Samples where `R ≥ 0` is verified, log-spaced from the boundary out.
fn curvature_radii(rb: f64) -> Vec<f64> {
    linspace(rb.ln(), 400f64.ln(), 300)
        .into_iter()
        .map(f64::exp)
        .collect()
}

/// Whether the end has `R ≥ −1e-10` on the sample radii and a boundary
/// sphere with non-negative mean curvature.
pub fn admissible(end: &RadialMetric) -> bool {
    let rb = end.r_min();
    if end.areal_growth(rb) < 0.0 {
        return false;
    }
    curvature_radii(rb)
        .into_iter()
        .all(|r| scalar_curvature_radial(end, r).is_ok_and(|v| v >= -1e-10))
}

/// Random radial end `1 + a/r + b/√(r²+c²) + w e^{−r/L}` outside `r_b`,
/// redrawn until [`admissible`].
pub fn random_end(seed: u64) -> RadialMetric {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let terms = vec![
            RadialTerm::Constant { value: 1.0 },
            RadialTerm::InverseR {
                weight: rng.random_range(0.0..2.0),
            },
            RadialTerm::Plummer {
                weight: rng.random_range(0.0..1.0),
                core: rng.random_range(0.2..3.0),
            },
            RadialTerm::Exponential {
                weight: rng.random_range(-0.05..0.05),
                length: rng.random_range(0.3..2.0),
            },
        ];
        let rb = rng.random_range(0.3..3.0);
        let end = RadialMetric::new(ConformalFactor::Terms(terms), rb).expect("positive radius");
        if admissible(&end) {
            return end;
        }
    }
}
