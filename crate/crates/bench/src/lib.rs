//! Parameter sets shared by the benchmarks.

use rigid_core::{build_hopf_example, RigidParams};

/// One unstable Hopf cycle at `r ≈ 0.103`.
pub fn hopf() -> RigidParams {
    build_hopf_example(-0.05, 0.0)
}

/// Two cusps at infinity and a symmetric orbit through the equator.
pub fn two_cusps() -> RigidParams {
    RigidParams::new(-0.5625425243648303, -1.6677618927862214, 1.3971594304364174, -0.5421435140449429, 1.9598898556952253)
        .expect("finite")
}

/// Six cusps at infinity.
pub fn six_cusps() -> RigidParams {
    RigidParams::new(0.0, 1.0, 1.0, 0.0, -1.0).expect("finite")
}
