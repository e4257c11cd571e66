use super::PhaseState;
use crate::algebra::ParaComplex;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Rk4,
    Rkf45,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Step size for RK4.
    pub dt: f64,
    /// Error tolerance for RKF45.
    pub tol: f64,
    pub t0: f64,
    pub t1: f64,
    pub max_steps: usize,
}

impl IntegratorConfig {
    pub const DEFAULT_MAX_STEPS: usize = 10_000_000;

    pub fn rk4(t0: f64, t1: f64, dt: f64) -> Self {
        Self { method: Method::Rk4, dt, tol: 0.0, t0, t1, max_steps: Self::DEFAULT_MAX_STEPS }
    }

    pub fn rkf45(t0: f64, t1: f64, tol: f64) -> Self {
        Self { method: Method::Rkf45, dt: 0.0, tol, t0, t1, max_steps: Self::DEFAULT_MAX_STEPS }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.t0.is_finite() && self.t1.is_finite() && self.t1 > self.t0) {
            return Err(format!("need finite t1 > t0, got [{}, {}]", self.t0, self.t1));
        }
        if self.max_steps == 0 {
            return Err("max_steps must be positive".into());
        }
        match self.method {
            Method::Rk4 if !(self.dt > 0.0 && self.dt.is_finite()) => Err(format!("rk4 needs dt > 0, got {}", self.dt)),
            Method::Rkf45 if !(self.tol > 0.0 && self.tol.is_finite()) => {
                Err(format!("rkf45 needs tol > 0, got {}", self.tol))
            }
            _ => Ok(()),
        }
    }
}

/// Optional per-sample quantities.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub energy: Option<ParaComplex>,
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<PhaseState>,
    pub diagnostics: Vec<Diagnostics>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Option<&PhaseState> {
        self.samples.last()
    }

    fn push(&mut self, s: PhaseState) {
        self.samples.push(s);
        self.diagnostics.push(Diagnostics::default());
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IntegrationError<E: std::error::Error + 'static> {
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepFailure { t: f64, h: f64 },
    #[error("step limit of {steps} reached at t = {t}")]
    MaxSteps { t: f64, steps: usize },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
    #[error("at t = {t}: {source}")]
    Rhs { t: f64, state: PhaseState, #[source] source: E },
}

impl<E: std::error::Error + 'static> IntegrationError<E> {
    /// Time at which integration stopped, if it started.
    pub fn time(&self) -> Option<f64> {
        match self {
            IntegrationError::InvalidConfig(_) => None,
            IntegrationError::StepFailure { t, .. }
            | IntegrationError::MaxSteps { t, .. }
            | IntegrationError::NonFinite { t }
            | IntegrationError::Rhs { t, .. } => Some(*t),
        }
    }
}

/// Wraps the para-complex right-hand side as a function of flat real vectors.
struct Flat<'a, F> {
    rhs: &'a mut F,
    n: usize,
}

impl<F, E> Flat<'_, F>
where
    F: FnMut(&PhaseState) -> Result<(Vec<ParaComplex>, Vec<ParaComplex>), E>,
    E: std::error::Error + 'static,
{
    fn eval(&mut self, t: f64, y: &[f64]) -> Result<Vec<f64>, IntegrationError<E>> {
        let s = PhaseState::from_flat(t, self.n, y);
        match (self.rhs)(&s) {
            Ok((dz, dzb)) => Ok(PhaseState { t, z: dz, zb: dzb }.to_flat()),
            Err(source) => Err(IntegrationError::Rhs { t, state: s, source }),
        }
    }
}

fn axpy(y: &[f64], h: f64, terms: &[(f64, &[f64])]) -> Vec<f64> {
    let mut out = y.to_vec();
    for (c, k) in terms {
        if *c != 0.0 {
            for (o, x) in out.iter_mut().zip(k.iter()) {
                *o += h * c * x;
            }
        }
    }
    out
}

/// Integrates `ż = f(s)` from `s0.t = cfg.t0` to `cfg.t1`.
///
/// Each para-complex component is advanced as two real components.
pub fn integrate<F, E>(mut rhs: F, s0: &PhaseState, cfg: &IntegratorConfig) -> Result<Trajectory, IntegrationError<E>>
where
    F: FnMut(&PhaseState) -> Result<(Vec<ParaComplex>, Vec<ParaComplex>), E>,
    E: std::error::Error + 'static,
{
    cfg.validate().map_err(IntegrationError::InvalidConfig)?;
    let mut f = Flat { rhs: &mut rhs, n: s0.n() };
    let mut s = s0.clone();
    s.t = cfg.t0;
    match cfg.method {
        Method::Rk4 => rk4(&mut f, s, cfg),
        Method::Rkf45 => rkf45(&mut f, s, cfg),
    }
}

fn rk4<F, E>(f: &mut Flat<'_, F>, s0: PhaseState, cfg: &IntegratorConfig) -> Result<Trajectory, IntegrationError<E>>
where
    F: FnMut(&PhaseState) -> Result<(Vec<ParaComplex>, Vec<ParaComplex>), E>,
    E: std::error::Error + 'static,
{
    let span = cfg.t1 - cfg.t0;
    let steps = ((span / cfg.dt) - 1e-9).ceil().max(1.0) as usize;
    if steps > cfg.max_steps {
        return Err(IntegrationError::MaxSteps { t: cfg.t0, steps: cfg.max_steps });
    }
    let n = s0.n();
    let mut tr = Trajectory::default();
    let mut y = s0.to_flat();
    tr.push(s0);
    for k in 0..steps {
        let t = cfg.t0 + k as f64 * cfg.dt;
        let t_next = if k + 1 == steps { cfg.t1 } else { cfg.t0 + (k + 1) as f64 * cfg.dt };
        let h = t_next - t;
        let k1 = f.eval(t, &y)?;
        let k2 = f.eval(t + h / 2.0, &axpy(&y, h / 2.0, &[(1.0, &k1)]))?;
        let k3 = f.eval(t + h / 2.0, &axpy(&y, h / 2.0, &[(1.0, &k2)]))?;
        let k4 = f.eval(t + h, &axpy(&y, h, &[(1.0, &k3)]))?;
        y = axpy(&y, h / 6.0, &[(1.0, &k1), (2.0, &k2), (2.0, &k3), (1.0, &k4)]);
        if y.iter().any(|x| !x.is_finite()) {
            return Err(IntegrationError::NonFinite { t: t_next });
        }
        tr.push(PhaseState::from_flat(t_next, n, &y));
    }
    Ok(tr)
}

// Fehlberg 4(5) tableau.
const C: [f64; 6] = [0.0, 0.25, 0.375, 12.0 / 13.0, 1.0, 0.5];
const A: [[f64; 5]; 6] = [
    [0.0; 5],
    [0.25, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 32.0, 9.0 / 32.0, 0.0, 0.0, 0.0],
    [1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0, 0.0, 0.0],
    [439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0, 0.0],
    [-8.0 / 27.0, 2.0, -3544.0 / 2565.0, 1859.0 / 4104.0, -11.0 / 40.0],
];
const B5: [f64; 6] = [16.0 / 135.0, 0.0, 6656.0 / 12825.0, 28561.0 / 56430.0, -9.0 / 50.0, 2.0 / 55.0];
const B4: [f64; 6] = [25.0 / 216.0, 0.0, 1408.0 / 2565.0, 2197.0 / 4104.0, -0.2, 0.0];

fn rkf45<F, E>(f: &mut Flat<'_, F>, s0: PhaseState, cfg: &IntegratorConfig) -> Result<Trajectory, IntegrationError<E>>
where
    F: FnMut(&PhaseState) -> Result<(Vec<ParaComplex>, Vec<ParaComplex>), E>,
    E: std::error::Error + 'static,
{
    let span = cfg.t1 - cfg.t0;
    let h_min = 1e-12 * span;
    let n = s0.n();
    let mut tr = Trajectory::default();
    let mut y = s0.to_flat();
    let mut t = cfg.t0;
    let mut h = span / 100.0;
    tr.push(s0);
    let mut steps = 0;
    while t < cfg.t1 {
        if steps >= cfg.max_steps {
            return Err(IntegrationError::MaxSteps { t, steps });
        }
        steps += 1;
        let last = t + h >= cfg.t1;
        let h_try = if last { cfg.t1 - t } else { h };
        let mut k: Vec<Vec<f64>> = Vec::with_capacity(6);
        for stage in 0..6 {
            let terms: Vec<(f64, &[f64])> = (0..stage).map(|i| (A[stage][i], k[i].as_slice())).collect();
            let ys = axpy(&y, h_try, &terms);
            k.push(f.eval(t + C[stage] * h_try, &ys)?);
        }
        let y5 = axpy(&y, h_try, &(0..6).map(|i| (B5[i], k[i].as_slice())).collect::<Vec<_>>());
        let y4 = axpy(&y, h_try, &(0..6).map(|i| (B4[i], k[i].as_slice())).collect::<Vec<_>>());
        let err = y5
            .iter()
            .zip(&y4)
            .zip(&y)
            .map(|((a, b), y0)| (a - b).abs() / (cfg.tol * (1.0 + y0.abs().max(a.abs()))))
            .fold(0.0f64, f64::max);
        if !err.is_finite() {
            h = h_try * 0.2;
        } else if err <= 1.0 {
            t = if last { cfg.t1 } else { t + h_try };
            y = y5;
            if y.iter().any(|x| !x.is_finite()) {
                return Err(IntegrationError::NonFinite { t });
            }
            tr.push(PhaseState::from_flat(t, n, &y));
            let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            // a clamped final step says nothing about the natural step size
            h = if last { h } else { h_try * grow };
            continue;
        } else {
            h = h_try * (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        }
        if h < h_min {
            return Err(IntegrationError::StepFailure { t, h });
        }
    }
    Ok(tr)
}
