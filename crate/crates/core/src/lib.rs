//! Analysis of the rigid planar family
//! `x' = -y + x F(x, y)`, `y' = x + y F(x, y)` with a cubic `F` built from a
//! linear and a homogeneous cubic part.
//!
//! * [`family`]: parameters, frame rotations and normal forms.
//! * [`centers`]: Lyapunov constants and the center conditions.
//! * [`abel`] and [`dynamics`]: the polar Abel equation, its return map and
//!   the search for limit cycles.
//! * [`sphere`]: the Poincaré compactification, points at infinity, periodic
//!   orbits crossing the equator and invariant lines.

pub mod abel;
pub mod centers;
pub mod dynamics;
pub mod error;
pub mod family;
pub mod ode;
pub mod poly;
pub mod sphere;

pub use abel::{abel_coeffs, eval_abel_rhs, AbelCoeffs};
pub use centers::{
    build_hopf_example, center_condition, check_no_limit_cycles, first_integral_planar, lyapunov_l2, lyapunov_l3,
    CenterClass,
};
pub use dynamics::{
    find_limit_cycles, integrate_abel, integrate_abel_with_derivative, planar_orbit, return_map, AbelOutcome,
    LimitCycle, LimitCycleSet, PlanarSample, PlanarTrajectory, ReturnMapResult,
};
pub use error::{Result, RigidError};
pub use family::{eval_f, eval_planar_field, normalize_a4, normalize_b1, rotate_frame, RawParams, RigidParams, RotationAngle};
pub use ode::IntegratorSettings;
pub use sphere::{
    classify_infinity, discriminant, equator_crossing_map, equator_normal_speed, eval_sphere_field,
    find_symmetric_periodic_orbit, global_center_check, integrate_sphere, invariant_line, sphere_first_integral,
    InfinityKind, InfinityPoint, LineResult, SphereOrbitOutcome, SpherePeriodicOrbit, SphereState,
};
