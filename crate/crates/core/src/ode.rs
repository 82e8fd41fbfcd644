//! Dormand–Prince 5(4) with step-size control and continuous output.

use crate::error::SimError;

/// Step-size control settings.
#[derive(Clone, Debug)]
pub struct OdeOptions {
    pub rtol: f64,
    /// Absolute tolerance per component.
    pub atol: Vec<f64>,
    /// Components excluded from the error norm (pure quadratures).
    pub unchecked: Vec<bool>,
    pub initial_step: Option<f64>,
    pub max_step: f64,
    pub max_steps: usize,
}

impl OdeOptions {
    pub fn new(rtol: f64, atol: Vec<f64>) -> Self {
        let n = atol.len();
        OdeOptions {
            rtol,
            atol,
            unchecked: vec![false; n],
            initial_step: None,
            max_step: f64::INFINITY,
            max_steps: 5_000_000,
        }
    }
}

/// Coefficients for the continuous extension of one accepted step.
#[derive(Clone, Debug)]
struct DenseSegment {
    t0: f64,
    h: f64,
    r: [Vec<f64>; 5],
}

impl DenseSegment {
    fn eval(&self, t: f64, out: &mut [f64]) {
        let theta = (t - self.t0) / self.h;
        let theta1 = 1.0 - theta;
        let [r1, r2, r3, r4, r5] = &self.r;
        for i in 0..out.len() {
            out[i] = r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
        }
    }
}

/// Accepted steps plus a continuous interpolant.
#[derive(Clone, Debug)]
pub struct OdeSolution {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub derivatives: Vec<Vec<f64>>,
    segments: Vec<DenseSegment>,
}

impl OdeSolution {
    pub fn t_start(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn last_state(&self) -> &[f64] {
        self.states.last().unwrap()
    }

    /// Continuous solution at `t` (clamped to the integrated span).
    pub fn interpolate(&self, t: f64) -> Vec<f64> {
        let n = self.states[0].len();
        let mut out = vec![0.0; n];
        if self.segments.is_empty() || t <= self.t_start() {
            out.copy_from_slice(&self.states[0]);
            return out;
        }
        if t >= self.t_end() {
            out.copy_from_slice(self.last_state());
            return out;
        }
        let idx = self
            .segments
            .partition_point(|s| s.t0 + s.h <= t)
            .min(self.segments.len() - 1);
        self.segments[idx].eval(t, &mut out);
        out
    }

    /// Index of the first recorded time `>= t`.
    pub fn index_at_or_after(&self, t: f64) -> usize {
        self.times.partition_point(|&x| x < t).min(self.times.len() - 1)
    }
}

// Dormand–Prince tableau.
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
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

/// Integrate `y' = f(t, y)` from `t0` to `t_end`, landing exactly on every
/// time in `stops` that lies inside the span.
pub fn integrate<F>(
    mut rhs: F,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    stops: &[f64],
    opts: &OdeOptions,
) -> Result<OdeSolution, SimError>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = y0.len();
    assert_eq!(opts.atol.len(), n, "one absolute tolerance per component");
    assert!(t_end > t0, "integration span must be forward");

    let mut stops: Vec<f64> = stops.iter().copied().filter(|&s| s > t0 && s < t_end).collect();
    stops.push(t_end);
    stops.sort_by(|a, b| a.partial_cmp(b).unwrap());
    stops.dedup();

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k1 = vec![0.0; n];
    rhs(t, &y, &mut k1);

    let mut sol = OdeSolution {
        times: vec![t],
        states: vec![y.clone()],
        derivatives: vec![k1.clone()],
        segments: Vec::new(),
    };

    let span = t_end - t0;
    let mut h = opts
        .initial_step
        .unwrap_or_else(|| initial_step(&y, &k1, opts, span))
        .min(opts.max_step);

    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut ytmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    let mut err_prev: f64 = 1e-4;
    let mut next_stop = 0;
    let mut steps = 0usize;

    while t < t_end {
        steps += 1;
        if steps > opts.max_steps {
            return Err(SimError::Integrator {
                time: t,
                reason: format!("exceeded {} steps", opts.max_steps),
            });
        }
        let target = stops[next_stop];
        let mut hit_stop = false;
        if t + h >= target || (target - t - h) < 1e-12 * span {
            h = target - t;
            hit_stop = true;
        }
        if h <= f64::EPSILON * t.abs().max(span) * 4.0 {
            return Err(SimError::Integrator {
                time: t,
                reason: format!("step size underflow (h = {h:e})"),
            });
        }

        for i in 0..n {
            ytmp[i] = y[i] + h * A21 * k1[i];
        }
        rhs(t + C2 * h, &ytmp, &mut k2);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        rhs(t + C3 * h, &ytmp, &mut k3);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        rhs(t + C4 * h, &ytmp, &mut k4);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        rhs(t + C5 * h, &ytmp, &mut k5);
        for i in 0..n {
            ytmp[i] = y[i]
                + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        rhs(t + h, &ytmp, &mut k6);
        for i in 0..n {
            ynew[i] = y[i]
                + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        let t_new = if hit_stop { target } else { t + h };
        rhs(t_new, &ynew, &mut k7);

        let mut err = 0.0;
        let mut counted = 0usize;
        for i in 0..n {
            if opts.unchecked[i] {
                continue;
            }
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = opts.atol[i] + opts.rtol * y[i].abs().max(ynew[i].abs());
            err += (e / scale).powi(2);
            counted += 1;
        }
        let err = if counted == 0 { 0.0 } else { (err / counted as f64).sqrt() };
        if !err.is_finite() {
            h *= FAC_MIN;
            continue;
        }

        if err <= 1.0 {
            let mut r5 = vec![0.0; n];
            let mut r1 = vec![0.0; n];
            let mut r2 = vec![0.0; n];
            let mut r3 = vec![0.0; n];
            let mut r4 = vec![0.0; n];
            for i in 0..n {
                let dy = ynew[i] - y[i];
                let bspl = h * k1[i] - dy;
                r1[i] = y[i];
                r2[i] = dy;
                r3[i] = bspl;
                r4[i] = dy - h * k7[i] - bspl;
                r5[i] = h
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            sol.segments.push(DenseSegment {
                t0: t,
                h: t_new - t,
                r: [r1, r2, r3, r4, r5],
            });
            t = t_new;
            y.copy_from_slice(&ynew);
            k1.copy_from_slice(&k7);
            sol.times.push(t);
            sol.states.push(y.clone());
            sol.derivatives.push(k1.clone());
            if hit_stop {
                next_stop += 1;
            }

            // PI controller (Gustafsson)
            let fac = if err == 0.0 {
                FAC_MAX
            } else {
                (SAFETY * err.powf(-0.7 / 5.0) * err_prev.powf(0.4 / 5.0)).clamp(FAC_MIN, FAC_MAX)
            };
            err_prev = err.max(1e-4);
            h = (h * fac).min(opts.max_step);
        } else {
            let fac = (SAFETY * err.powf(-1.0 / 5.0)).clamp(FAC_MIN, 1.0);
            h *= fac;
        }
    }
    Ok(sol)
}

fn initial_step(y: &[f64], f: &[f64], opts: &OdeOptions, span: f64) -> f64 {
    let mut d0: f64 = 0.0;
    let mut d1: f64 = 0.0;
    for i in 0..y.len() {
        if opts.unchecked[i] {
            continue;
        }
        let sc = opts.atol[i] + opts.rtol * y[i].abs();
        d0 = d0.max((y[i] / sc).abs());
        d1 = d1.max((f[i] / sc).abs());
    }
    let h = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6 * span
    } else {
        0.01 * d0 / d1
    };
    h.min(span).max(1e-12 * span)
}
