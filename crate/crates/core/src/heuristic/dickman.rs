//! Dickman's function `rho`: `rho = 1` on `[0, 1]` and `u rho'(u) = -rho(u - 1)`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest argument accepted by [`dickman_rho`].
pub const RHO_MAX_ARG: f64 = 20.0;
/// Default grid step.
pub const DEFAULT_STEP: f64 = 1e-4;

/// Values of `rho` on the grid `0, h, 2h, ..., u_max`.
#[derive(Clone, Debug)]
pub struct DickmanTable {
    step: f64,
    per_unit: usize,
    values: Vec<f64>,
    log_values: Vec<f64>,
}

impl DickmanTable {
    /// The step is `1 / per_unit` so that `u - 1` stays on the grid. Uses
    /// the integrated form `u rho(u) = int_{u-1}^{u} rho(t) dt` with the
    /// trapezoid rule, so every value is a positive combination of earlier
    /// ones. The window sum is refreshed in full every eighth of a unit to
    /// keep cancellation from the running update out of the tiny values.
    pub fn new(per_unit: usize, u_max: f64) -> Result<Self> {
        if per_unit < 1000 {
            return Err(Error::OutOfRange(format!("grid of {per_unit} steps per unit")));
        }
        if !(0.0..=RHO_MAX_ARG).contains(&u_max) {
            return Err(Error::OutOfRange(format!("u_max = {u_max}")));
        }
        let h = 1.0 / per_unit as f64;
        let n = libm::ceil(u_max * per_unit as f64) as usize + 1;
        let refresh = per_unit / 8;
        let mut values: Vec<f64> = Vec::with_capacity(n + 1);
        values.resize(per_unit + 1, 1.0);
        let mut window = 0.0;
        for i in per_unit + 1..=n {
            // window = sum of values[i - per_unit + 1 .. i]
            if (i - per_unit - 1).is_multiple_of(refresh) {
                window = values[i - per_unit + 1..i].iter().sum();
            } else {
                window += values[i - 1] - values[i - per_unit];
            }
            let u = i as f64 * h;
            let c = h / u;
            values.push(c * (0.5 * values[i - per_unit] + window) / (1.0 - 0.5 * c));
        }
        Ok(DickmanTable {
            step: h,
            per_unit,
            log_values: values.iter().map(|&x| libm::log(x)).collect(),
            values,
        })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn u_max(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.step
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Linear interpolation of `ln rho` between grid points.
    pub fn value(&self, u: f64) -> Result<f64> {
        if !(0.0..=self.u_max()).contains(&u) {
            return Err(Error::OutOfRange(format!("rho({u})")));
        }
        if u <= 1.0 {
            return Ok(1.0);
        }
        let x = u * self.per_unit as f64;
        let i = (libm::floor(x) as usize).min(self.values.len() - 2);
        let t = x - i as f64;
        Ok(libm::exp(self.log_values[i] * (1.0 - t) + self.log_values[i + 1] * t))
    }
}

/// `rho(u)` for `0 <= u <= 20` at the default step.
pub fn dickman_rho(u: f64) -> Result<f64> {
    if !(0.0..=RHO_MAX_ARG).contains(&u) {
        return Err(Error::OutOfRange(format!("rho({u})")));
    }
    if u <= 1.0 {
        return Ok(1.0);
    }
    let per_unit = (1.0 / DEFAULT_STEP) as usize;
    DickmanTable::new(per_unit, u)?.value(u)
}
