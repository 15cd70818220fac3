//! Burgers variants: `f_t + (f + c(t)) f_x - nu f_xx = g` on `[-1, 1] x [0, T]`.

use serde::{Deserialize, Serialize};

use super::quadrature::Composite;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Advection coefficient `c(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Advection<T> {
    Constant { c0: T },
    Sinusoidal { tau: T },
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BurgersSpec<T> {
    pub nu: T,
    pub advection: Advection<T>,
    pub x0: T,
}

/// Closed-form value and the derivatives appearing in the equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactPoint<T> {
    pub f: T,
    pub ft: T,
    pub fx: T,
    pub fxx: T,
}

impl<T: Real> BurgersSpec<T> {
    pub fn walking(nu: T, c0: T, x0: T) -> Self {
        Self { nu, advection: Advection::Constant { c0 }, x0 }
    }

    pub fn manufactured(nu: T, tau: T, x0: T) -> Self {
        Self { nu, advection: Advection::Sinusoidal { tau }, x0 }
    }

    pub fn steepening(nu: T) -> Self {
        Self { nu, advection: Advection::Zero, x0: T::zero() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu > T::zero()) {
            return Err(Error::InvalidParameter(format!("nu must be positive, got {}", self.nu)));
        }
        if let Advection::Sinusoidal { tau } = self.advection {
            if !(tau > T::zero()) {
                return Err(Error::InvalidParameter(format!("tau must be positive, got {tau}")));
            }
        }
        Ok(())
    }

    pub fn c(&self, t: T) -> T {
        match self.advection {
            Advection::Constant { c0 } => c0,
            Advection::Sinusoidal { tau } => (t / tau).sin(),
            Advection::Zero => T::zero(),
        }
    }

    fn c_prime(&self, t: T) -> T {
        match self.advection {
            Advection::Sinusoidal { tau } => (t / tau).cos() / tau,
            _ => T::zero(),
        }
    }

    /// Whether the tanh travelling profile is the exact solution.
    pub fn has_closed_form(&self) -> bool {
        !matches!(self.advection, Advection::Zero)
    }

    /// `-tanh((x - x0 - t c(t)) / 2nu)` with its derivatives.
    fn tanh_profile(&self, x: T, t: T) -> ExactPoint<T> {
        let two_nu = T::lit(2.0) * self.nu;
        let th = ((x - self.x0 - t * self.c(t)) / two_nu).tanh();
        let sech2 = T::one() - th * th;
        let shift_rate = self.c(t) + t * self.c_prime(t);
        ExactPoint {
            f: -th,
            ft: sech2 * shift_rate / two_nu,
            fx: -sech2 / two_nu,
            fxx: th * sech2 / (T::lit(2.0) * self.nu * self.nu),
        }
    }

    /// Closed form with derivatives; `None` for the steepening variant.
    pub fn exact_point(&self, x: T, t: T) -> Option<ExactPoint<T>> {
        self.has_closed_form().then(|| self.tanh_profile(x, t))
    }

    /// Exact solution for every variant.
    pub fn exact(&self, x: T, t: T) -> Result<T> {
        match self.advection {
            Advection::Zero => steepening_exact(x, t, self.nu),
            _ => Ok(self.tanh_profile(x, t).f),
        }
    }

    /// Manufactured source; zero unless the advection is sinusoidal.
    pub fn forcing(&self, x: T, t: T) -> T {
        match self.advection {
            Advection::Sinusoidal { .. } => mms_forcing(x, t, self),
            _ => T::zero(),
        }
    }
}

/// Travelling-wave solution for constant advection.
pub fn burgers_exact<T: Real>(x: T, t: T, spec: &BurgersSpec<T>) -> Result<T> {
    match spec.advection {
        Advection::Constant { .. } => Ok(spec.tanh_profile(x, t).f),
        _ => Err(Error::InvalidParameter("burgers_exact needs constant advection".into())),
    }
}

/// `g = f*_t + (f* + c) f*_x - nu f*_xx` for the manufactured profile.
pub fn mms_forcing<T: Real>(x: T, t: T, spec: &BurgersSpec<T>) -> T {
    let e = spec.tanh_profile(x, t);
    e.ft + (e.f + spec.c(t)) * e.fx - spec.nu * e.fxx
}

/// Cole–Hopf solution for `f(x, 0) = -sin(pi x)` with zero advection.
pub fn steepening_exact<T: Real>(x: T, t: T, nu: T) -> Result<T> {
    steepening_with(x, t, nu, T::lit(10.0), T::lit(1e-10).max(T::eps() * T::lit(100.0)))
}

/// Same quotient with explicit truncation radius (in units of
/// `sqrt(4 nu t)`) and tolerance, exposed for refinement checks.
pub fn steepening_with<T: Real>(x: T, t: T, nu: T, radius: T, rel_tol: T) -> Result<T> {
    let pi = T::lit(std::f64::consts::PI);
    if t < T::zero() {
        return Err(Error::InvalidParameter(format!("time must be non-negative, got {t}")));
    }
    if t == T::zero() {
        return Ok(-(pi * x).sin());
    }
    let s = (T::lit(4.0) * nu * t).sqrt();
    let inv = T::one() / (T::lit(2.0) * pi * nu);
    let q = Composite::new(16, rel_tol);
    let [num, den] = q.integrate(-radius, radius, |u| {
        let arg = pi * (x - s * u);
        // shifted by exp(-1/(2 pi nu)) in both integrals
        let w = ((-arg.cos() - T::one()) * inv - u * u).exp();
        [arg.sin() * w, w]
    })?;
    Ok(-num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn walking() -> BurgersSpec<f64> {
        BurgersSpec::walking(0.01, 1.0, -0.5)
    }

    #[test]
    fn travelling_profile() {
        let s = walking();
        assert_eq!(burgers_exact(-0.5 + 0.3, 0.3, &s).unwrap(), 0.0);
        let v = burgers_exact(-1.0, 0.0, &s).unwrap();
        assert!((v - 25f64.tanh()).abs() < 1e-16);
        assert!(1.0 - v < 1e-15, "tanh(25) rounds to 1 in double precision");
        let a = burgers_exact(0.2, 0.5, &s).unwrap();
        let b = burgers_exact(-0.3, 0.0, &s).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn constant_advection_has_zero_forcing() {
        let s = walking();
        for &(x, t) in &[(-0.51, 0.0), (-0.2, 0.31), (0.4, 0.5)] {
            let e = s.exact_point(x, t).unwrap();
            let r = e.ft + (e.f + s.c(t)) * e.fx - s.nu * e.fxx;
            assert!(r.abs() < 1e-9 * e.fx.abs().max(1.0), "{r}");
        }
    }

    #[test]
    fn steepening_boundaries_and_odd_symmetry() {
        for t in [0.05, 0.25, 0.5] {
            assert!(steepening_exact(0.0, t, 0.01f64).unwrap().abs() < 1e-12);
            assert!(steepening_exact(1.0, t, 0.01f64).unwrap().abs() < 1e-12);
            let a = steepening_exact(0.3, t, 0.01f64).unwrap();
            let b = steepening_exact(-0.3, t, 0.01f64).unwrap();
            assert!((a + b).abs() < 1e-12);
        }
        assert_eq!(steepening_exact(0.5, 0.0, 0.01).unwrap(), -1.0);
    }
}
