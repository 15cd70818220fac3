//! Viscous, heat-conducting shock tube in `(rho, v, e)` variables.

use serde::{Deserialize, Serialize};

use super::riemann::{Primitive, RiemannSolution};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SodSpec<T> {
    pub gamma: T,
    pub kappa: T,
    pub cv: T,
    pub mu: T,
    /// Target initial steepness.
    pub delta: T,
    pub x0: T,
    pub left: Primitive<T>,
    pub right: Primitive<T>,
}

/// Conserved-ish working variables of the discrete system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SodPoint<T> {
    pub rho: T,
    pub v: T,
    pub e: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl<T: Real> Default for SodSpec<T> {
    fn default() -> Self {
        Self {
            gamma: T::lit(1.4),
            kappa: T::lit(2.55e-2),
            cv: T::lit(718.0),
            mu: T::lit(1.9e-5),
            delta: T::lit(0.01),
            x0: T::lit(0.5),
            left: Primitive::new(T::one(), T::zero(), T::one()),
            right: Primitive::new(T::lit(0.125), T::zero(), T::lit(0.1)),
        }
    }
}

impl<T: Real> SodSpec<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > T::one()) {
            return Err(Error::InvalidParameter(format!("gamma must exceed 1, got {}", self.gamma)));
        }
        if !(self.delta > T::zero()) {
            return Err(Error::InvalidParameter(format!("delta must be positive, got {}", self.delta)));
        }
        for (name, s) in [("left", &self.left), ("right", &self.right)] {
            if !(s.rho > T::zero() && s.p > T::zero()) {
                return Err(Error::InvalidParameter(format!("{name} state needs positive density and pressure")));
            }
        }
        if self.kappa < T::zero() || self.mu < T::zero() || !(self.cv > T::zero()) {
            return Err(Error::InvalidParameter("transport coefficients must be non-negative".into()));
        }
        Ok(())
    }

    /// Mean and half-jump of the density profile, `(A, B)`.
    pub fn density_constants(&self) -> (T, T) {
        let half = T::lit(0.5);
        ((self.left.rho + self.right.rho) * half, (self.right.rho - self.left.rho) * half)
    }

    pub fn pressure_constants(&self) -> (T, T) {
        let half = T::lit(0.5);
        ((self.left.p + self.right.p) * half, (self.right.p - self.left.p) * half)
    }

    pub fn energy(&self, rho: T, p: T) -> T {
        p / ((self.gamma - T::one()) * rho)
    }

    pub fn pressure(&self, rho: T, e: T) -> T {
        (self.gamma - T::one()) * rho * e
    }

    fn boundary_state(&self, side: Side) -> SodPoint<T> {
        let s = match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        };
        SodPoint { rho: s.rho, v: s.v, e: self.energy(s.rho, s.p) }
    }

    /// Initial profile with steepness `delta_g`.
    pub fn initial(&self, x: T, delta_g: T) -> SodPoint<T> {
        let th = ((x - self.x0) / delta_g).tanh();
        let (a, b) = self.density_constants();
        let (ap, bp) = self.pressure_constants();
        let rho = a + b * th;
        let p = ap + bp * th;
        SodPoint { rho, v: T::zero(), e: self.energy(rho, p) }
    }

    /// Boundary value at `x_b`: `chi` blends the relaxed initial profile at
    /// the boundary (`chi = 0`) toward the true Dirichlet state (`chi = 1`).
    pub fn boundary(&self, side: Side, x_b: T, chi: T, delta_g: T) -> SodPoint<T> {
        let truth = self.boundary_state(side);
        let relaxed = self.initial(x_b, delta_g);
        let blend = |a: T, b: T| chi * a + (T::one() - chi) * b;
        SodPoint {
            rho: blend(truth.rho, relaxed.rho),
            v: blend(truth.v, relaxed.v),
            e: blend(truth.e, relaxed.e),
        }
    }

    pub fn riemann(&self) -> Result<RiemannSolution<T>> {
        RiemannSolution::new(self.left, self.right, self.gamma, self.x0)
    }
}

/// Initial or boundary values for schedule entry `(delta_g, chi_g)`.
pub fn sod_conditions<T: Real>(spec: &SodSpec<T>, x: T, boundary: Option<Side>, delta_g: T, chi_g: T) -> SodPoint<T> {
    match boundary {
        Some(side) => spec.boundary(side, x, chi_g, delta_g),
        None => spec.initial(x, delta_g),
    }
}

/// Relaxation weights `delta`, `chi` for the levels of a recursive solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionSchedule<T> {
    pub delta: Vec<T>,
    pub chi: Vec<T>,
}

impl<T: Real> ConditionSchedule<T> {
    /// A length-one schedule holding the true conditions.
    pub fn single(delta: T) -> Self {
        Self { delta: vec![delta], chi: vec![T::one()] }
    }

    /// `delta` multiples of a base steepness with full boundary weight.
    pub fn steepening(base: T, multiples: &[T]) -> Self {
        Self { delta: multiples.iter().map(|m| *m * base).collect(), chi: vec![T::one(); multiples.len()] }
    }

    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.delta.is_empty() || self.delta.len() != self.chi.len() {
            return Err(Error::InvalidParameter(format!(
                "schedule needs equal non-zero lengths, got delta {} and chi {}",
                self.delta.len(),
                self.chi.len()
            )));
        }
        if self.delta.iter().chain(&self.chi).any(|v| !(*v > T::zero())) {
            return Err(Error::InvalidParameter("schedule weights must be positive".into()));
        }
        Ok(())
    }

    pub fn entry(&self, g: usize) -> (T, T) {
        (self.delta[g], self.chi[g])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_limits() {
        let s = SodSpec::<f64>::default();
        let l = s.initial(-10.0, s.delta);
        assert!((l.rho - 1.0).abs() < 1e-14 && (l.e - 2.5).abs() < 1e-12);
        let r = s.initial(10.0, s.delta);
        assert!((r.rho - 0.125).abs() < 1e-14 && (r.e - 2.0).abs() < 1e-12);
        assert_eq!(s.initial(0.5, s.delta).rho, 9.0 / 16.0);
        assert_eq!(s.density_constants(), (9.0 / 16.0, -7.0 / 16.0));
        assert_eq!(s.pressure_constants(), (0.55, -0.45));
    }

    #[test]
    fn boundary_blend() {
        let s = SodSpec::<f64>::default();
        let b = s.boundary(Side::Right, 1.0, 1.0, 0.05);
        assert_eq!((b.rho, b.v), (0.125, 0.0));
        assert!((b.e - 2.0).abs() < 1e-14);
        let half = s.boundary(Side::Left, 0.0, 0.5, 0.5);
        let ic = s.initial(0.0, 0.5);
        assert!((half.rho - 0.5 * (1.0 + ic.rho)).abs() < 1e-14);
    }

    #[test]
    fn schedule_validation() {
        assert!(ConditionSchedule::steepening(0.01, &[5.0, 3.0, 1.0]).validate().is_ok());
        let bad = ConditionSchedule { delta: vec![0.05, 0.01], chi: vec![1.0] };
        assert!(bad.validate().is_err());
    }
}
