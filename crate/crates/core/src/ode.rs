//! Embedded Dormand–Prince 5(4) integrator with PI step control and
//! continuous (dense) output.
//!
//! The integrator is fixed-dimension (`[f64; N]`) and forward in time. Callers
//! observe every accepted step through a [`DenseStep`], which can be evaluated
//! anywhere inside the step; this is what the escape, equator-crossing and
//! sampling logic in the other modules is built on.

use serde::{Deserialize, Serialize};

use crate::error::{Result, RigidError};

/// Tolerances and limits shared by the Abel and sphere integrators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// Radius above which an Abel solution is declared escaping.
    pub r_escape: f64,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: std::f64::consts::PI / 100.0,
            r_escape: 1e6,
        }
    }
}

impl IntegratorSettings {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("max_step", self.max_step),
            ("r_escape", self.r_escape),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(RigidError::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if self.rel_tol < 1e-14 {
            return Err(RigidError::InvalidInput(format!(
                "rel_tol must be at least 1e-14, got {}",
                self.rel_tol
            )));
        }
        Ok(())
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// dense output
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;
const MAX_STEPS: usize = 2_000_000;

/// One accepted step with its continuous extension.
#[derive(Debug, Clone)]
pub struct DenseStep<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    /// State at `t0` (as carried into the step, i.e. after projection).
    pub y0: [f64; N],
    /// State at `t1` before projection.
    pub y1: [f64; N],
    rcont: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    /// Fourth-order interpolant, valid for `t` in `[t0, t1]`.
    pub fn eval(&self, t: f64) -> [f64; N] {
        let h = self.t1 - self.t0;
        let s = if h == 0.0 { 0.0 } else { (t - self.t0) / h };
        let s1 = 1.0 - s;
        let r = &self.rcont;
        std::array::from_fn(|i| r[0][i] + s * (r[1][i] + s1 * (r[2][i] + s * (r[3][i] + s1 * r[4][i]))))
    }

    /// Bisects on the interpolant for the first zero of `g` in the step,
    /// assuming `g(t0)` and `g(t1)` differ in sign. Stops once `|g|` falls
    /// below `tol` or the bracket collapses.
    pub fn locate(&self, mut g: impl FnMut(&[f64; N]) -> f64, tol: f64) -> (f64, [f64; N]) {
        let (mut lo, mut hi) = (self.t0, self.t1);
        let mut glo = g(&self.eval(lo));
        let mut best = (hi, self.eval(hi));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let y = self.eval(mid);
            let gm = g(&y);
            best = (mid, y);
            if gm.abs() <= tol {
                break;
            }
            if (gm > 0.0) == (glo > 0.0) {
                lo = mid;
                glo = gm;
            } else {
                hi = mid;
            }
        }
        best
    }
}

/// Decision returned by step observers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

/// Where an integration ended.
#[derive(Debug, Clone, Copy)]
pub struct Finish<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    /// `true` if an observer requested the stop before `t_end`.
    pub stopped: bool,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
}

impl From<&IntegratorSettings> for StepControl {
    fn from(s: &IntegratorSettings) -> Self {
        Self {
            rel_tol: s.rel_tol,
            abs_tol: s.abs_tol,
            max_step: s.max_step,
        }
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

fn scaled_max<const N: usize>(v: &[f64; N], y0: &[f64; N], y1: &[f64; N], ctl: &StepControl) -> f64 {
    let mut m = 0.0f64;
    for i in 0..N {
        let sc = ctl.abs_tol + ctl.rel_tol * y0[i].abs().max(y1[i].abs());
        let e = (v[i] / sc).abs();
        if e.is_nan() {
            return f64::INFINITY;
        }
        m = m.max(e);
    }
    m
}

fn initial_step<const N: usize, F>(rhs: &F, t0: f64, y0: &[f64; N], f0: &[f64; N], ctl: &StepControl, span: f64) -> f64
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let d0 = scaled_max(y0, y0, y0, ctl);
    let d1 = scaled_max(f0, y0, y0, ctl);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(span).min(ctl.max_step);
    let y1 = axpy(y0, h0, &[(1.0, f0)]);
    let f1 = rhs(t0 + h0, &y1);
    let df: [f64; N] = std::array::from_fn(|i| f1[i] - f0[i]);
    let d2 = scaled_max(&df, y0, y0, ctl) / h0;
    let dm = d1.max(d2);
    let h1 = if dm <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / dm).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span).min(ctl.max_step)
}

/// Integrates `y' = rhs(t, y)` from `t0` to `t_end`.
///
/// After every accepted step `project` may modify the new state (used to stay
/// on the sphere), then `observe` sees the step and may stop the run.
pub fn integrate<const N: usize, F, P, O>(
    rhs: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    ctl: &StepControl,
    mut project: P,
    mut observe: O,
) -> Result<Finish<N>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    P: FnMut(&mut [f64; N]) -> bool,
    O: FnMut(&DenseStep<N>) -> Flow,
{
    if !(t_end > t0) {
        return Ok(Finish { t: t0, y: y0, stopped: false, steps: 0 });
    }
    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    let mut h = initial_step(&rhs, t, &y, &k1, ctl, t_end - t0);
    let mut err_old: f64 = 1e-4;
    let mut rejected_last = false;
    let mut steps = 0usize;
    loop {
        if steps >= MAX_STEPS {
            return Err(RigidError::TooManySteps { steps, t });
        }
        let remaining = t_end - t;
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        let h_min = 16.0 * f64::EPSILON * t.abs().max(1.0);
        if h < h_min && !last {
            return Err(RigidError::StepSizeUnderflow { t });
        }

        let k2 = rhs(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(
            t + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            t + h,
            &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let t_new = if last { t_end } else { t + h };
        let k7 = rhs(t_new, &y_new);
        let err_vec: [f64; N] = std::array::from_fn(|i| {
            h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
        });
        let err = scaled_max(&err_vec, &y, &y_new, ctl);
        let finite = y_new.iter().all(|v| v.is_finite());

        let fac11 = err.powf(0.2 - BETA * 0.75);
        if err <= 1.0 && finite {
            steps += 1;
            let rcont = {
                let dy: [f64; N] = std::array::from_fn(|i| y_new[i] - y[i]);
                let r3: [f64; N] = std::array::from_fn(|i| h * k1[i] - dy[i]);
                let r4: [f64; N] = std::array::from_fn(|i| dy[i] - h * k7[i] - r3[i]);
                let r5: [f64; N] = std::array::from_fn(|i| {
                    h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
                });
                [y, dy, r3, r4, r5]
            };
            let step = DenseStep { t0: t, t1: t_new, y0: y, y1: y_new, rcont };
            let mut next = y_new;
            let changed = project(&mut next);
            t = t_new;
            y = next;
            k1 = if changed { rhs(t, &y) } else { k7 };

            if observe(&step) == Flow::Stop {
                return Ok(Finish { t, y, stopped: true, steps });
            }
            if last {
                return Ok(Finish { t, y, stopped: false, steps });
            }
            let mut fac = fac11 / err_old.powf(BETA);
            fac = (fac / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            let mut h_new = h / fac;
            if rejected_last {
                h_new = h_new.min(h);
            }
            h = h_new.min(ctl.max_step);
            err_old = err.max(1e-4);
            rejected_last = false;
        } else {
            let shrink = if finite && err.is_finite() {
                (fac11 / SAFETY).min(1.0 / FAC_MIN)
            } else {
                1.0 / FAC_MIN
            };
            h /= shrink;
            rejected_last = true;
        }
    }
}

/// [`integrate`] without projection.
pub fn integrate_plain<const N: usize, F, O>(
    rhs: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    ctl: &StepControl,
    observe: O,
) -> Result<Finish<N>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    O: FnMut(&DenseStep<N>) -> Flow,
{
    integrate(rhs, t0, y0, t_end, ctl, |_| false, observe)
}
