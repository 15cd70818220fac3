//! Exact solution of the ideal-gas Riemann problem.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Primitive state `(rho, v, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Primitive<T> {
    pub rho: T,
    pub v: T,
    pub p: T,
}

impl<T: Real> Primitive<T> {
    pub fn new(rho: T, v: T, p: T) -> Self {
        Self { rho, v, p }
    }

    fn sound_speed(&self, gamma: T) -> T {
        (gamma * self.p / self.rho).sqrt()
    }
}

/// Star region of the self-similar solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarState<T> {
    pub p: T,
    pub v: T,
    pub rho_left: T,
    pub rho_right: T,
    pub iterations: usize,
}

/// Pressure jump function of one side and its derivative.
fn side_function<T: Real>(p: T, s: &Primitive<T>, gamma: T) -> (T, T) {
    let one = T::one();
    let two = T::lit(2.0);
    let a = s.sound_speed(gamma);
    if p > s.p {
        let ak = two / ((gamma + one) * s.rho);
        let bk = (gamma - one) / (gamma + one) * s.p;
        let q = (ak / (p + bk)).sqrt();
        (
            (p - s.p) * q,
            q * (one - (p - s.p) / (two * (p + bk))),
        )
    } else {
        let ex = (gamma - one) / (two * gamma);
        let ratio = p / s.p;
        (
            two * a / (gamma - one) * (ratio.powf(ex) - one),
            one / (s.rho * a) * ratio.powf(-(gamma + one) / (two * gamma)),
        )
    }
}

fn side_density<T: Real>(p: T, s: &Primitive<T>, gamma: T) -> T {
    let one = T::one();
    let ratio = p / s.p;
    if p > s.p {
        let g = (gamma - one) / (gamma + one);
        s.rho * (ratio + g) / (g * ratio + one)
    } else {
        s.rho * ratio.powf(one / gamma)
    }
}

/// Star pressure by Newton iteration on the pressure function.
pub fn star_state<T: Real>(left: &Primitive<T>, right: &Primitive<T>, gamma: T) -> Result<StarState<T>> {
    for s in [left, right] {
        if !(s.rho > T::zero() && s.p > T::zero()) {
            return Err(Error::InvalidParameter("Riemann states need positive density and pressure".into()));
        }
    }
    let one = T::one();
    let two = T::lit(2.0);
    let (al, ar) = (left.sound_speed(gamma), right.sound_speed(gamma));
    let du = right.v - left.v;
    if two / (gamma - one) * (al + ar) <= du {
        return Err(Error::Vacuum);
    }
    // two-rarefaction guess, always positive
    let ex = (gamma - one) / (two * gamma);
    let num = al + ar - (gamma - one) / two * du;
    let den = al / left.p.powf(ex) + ar / right.p.powf(ex);
    let mut p = (num / den).powf(one / ex).max(T::eps());
    let tol = T::lit(1e-12).max(T::eps() * T::lit(8.0));
    let mut iterations = 0;
    loop {
        iterations += 1;
        let (fl, dl) = side_function(p, left, gamma);
        let (fr, dr) = side_function(p, right, gamma);
        let mut next = p - (fl + fr + du) / (dl + dr);
        if next <= T::zero() {
            next = p * T::lit(0.1);
        }
        let change = two * (next - p).abs() / (next + p);
        p = next;
        if change < tol {
            break;
        }
        if iterations > 100 {
            return Err(Error::InvalidParameter("star pressure iteration did not converge".into()));
        }
    }
    let (fl, _) = side_function(p, left, gamma);
    let (fr, _) = side_function(p, right, gamma);
    Ok(StarState {
        p,
        v: (left.v + right.v + fr - fl) / two,
        rho_left: side_density(p, left, gamma),
        rho_right: side_density(p, right, gamma),
        iterations,
    })
}

/// Exact inviscid solution for an initial jump at `x0`.
#[derive(Debug, Clone, Copy)]
pub struct RiemannSolution<T> {
    pub left: Primitive<T>,
    pub right: Primitive<T>,
    pub gamma: T,
    pub x0: T,
    pub star: StarState<T>,
}

impl<T: Real> RiemannSolution<T> {
    pub fn new(left: Primitive<T>, right: Primitive<T>, gamma: T, x0: T) -> Result<Self> {
        let star = star_state(&left, &right, gamma)?;
        Ok(Self { left, right, gamma, x0, star })
    }

    /// Sample at `xi = (x - x0) / t`.
    pub fn sample_xi(&self, xi: T) -> Primitive<T> {
        let g = self.gamma;
        let one = T::one();
        let two = T::lit(2.0);
        let st = &self.star;
        if xi <= st.v {
            let s = &self.left;
            let a = s.sound_speed(g);
            if st.p > s.p {
                let shock = s.v - a * ((g + one) / (two * g) * st.p / s.p + (g - one) / (two * g)).sqrt();
                if xi <= shock { *s } else { Primitive::new(st.rho_left, st.v, st.p) }
            } else {
                let a_star = a * (st.p / s.p).powf((g - one) / (two * g));
                if xi <= s.v - a {
                    *s
                } else if xi >= st.v - a_star {
                    Primitive::new(st.rho_left, st.v, st.p)
                } else {
                    let c = two / (g + one) + (g - one) / ((g + one) * a) * (s.v - xi);
                    Primitive::new(
                        s.rho * c.powf(two / (g - one)),
                        two / (g + one) * (a + (g - one) / two * s.v + xi),
                        s.p * c.powf(two * g / (g - one)),
                    )
                }
            }
        } else {
            let s = &self.right;
            let a = s.sound_speed(g);
            if st.p > s.p {
                let shock = s.v + a * ((g + one) / (two * g) * st.p / s.p + (g - one) / (two * g)).sqrt();
                if xi >= shock { *s } else { Primitive::new(st.rho_right, st.v, st.p) }
            } else {
                let a_star = a * (st.p / s.p).powf((g - one) / (two * g));
                if xi >= s.v + a {
                    *s
                } else if xi <= st.v + a_star {
                    Primitive::new(st.rho_right, st.v, st.p)
                } else {
                    let c = two / (g + one) - (g - one) / ((g + one) * a) * (s.v - xi);
                    Primitive::new(
                        s.rho * c.powf(two / (g - one)),
                        two / (g + one) * (-a + (g - one) / two * s.v + xi),
                        s.p * c.powf(two * g / (g - one)),
                    )
                }
            }
        }
    }

    pub fn sample(&self, x: T, t: T) -> Primitive<T> {
        if t <= T::zero() {
            return if x < self.x0 { self.left } else { self.right };
        }
        self.sample_xi((x - self.x0) / t)
    }

    /// Wave-edge speeds: left fan head/tail (or left shock twice), contact,
    /// right fan tail/head (or right shock twice).
    pub fn wave_speeds(&self) -> [T; 5] {
        let g = self.gamma;
        let one = T::one();
        let two = T::lit(2.0);
        let st = &self.star;
        let (l, r) = (&self.left, &self.right);
        let (al, ar) = (l.sound_speed(g), r.sound_speed(g));
        let (lh, lt) = if st.p > l.p {
            let s = l.v - al * ((g + one) / (two * g) * st.p / l.p + (g - one) / (two * g)).sqrt();
            (s, s)
        } else {
            (l.v - al, st.v - al * (st.p / l.p).powf((g - one) / (two * g)))
        };
        let (rt, rh) = if st.p > r.p {
            let s = r.v + ar * ((g + one) / (two * g) * st.p / r.p + (g - one) / (two * g)).sqrt();
            (s, s)
        } else {
            (st.v + ar * (st.p / r.p).powf((g - one) / (two * g)), r.v + ar)
        };
        [lh, lt, st.v, rt, rh]
    }
}

/// Exact solution at `(x, t)` for states separated at `x0`.
pub fn riemann_exact<T: Real>(x: T, t: T, x0: T, left: &Primitive<T>, right: &Primitive<T>, gamma: T) -> Result<Primitive<T>> {
    Ok(RiemannSolution::new(*left, *right, gamma, x0)?.sample(x, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sod() -> (Primitive<f64>, Primitive<f64>) {
        (Primitive::new(1.0, 0.0, 1.0), Primitive::new(0.125, 0.0, 0.1))
    }

    #[test]
    fn sod_star_state() {
        let (l, r) = sod();
        let s = star_state(&l, &r, 1.4).unwrap();
        assert!((s.p - 0.30313).abs() < 1e-5, "{}", s.p);
        assert!((s.v - 0.92745).abs() < 1e-5, "{}", s.v);
        assert!((s.rho_right - 0.26557).abs() < 1e-5);
        assert!((s.rho_left - 0.42632).abs() < 1e-5);
    }

    #[test]
    fn bisection_agrees() {
        let (l, r) = sod();
        let f = |p: f64| side_function(p, &l, 1.4).0 + side_function(p, &r, 1.4).0;
        let (mut lo, mut hi) = (1e-6, 10.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 { hi = mid } else { lo = mid }
        }
        let s = star_state(&l, &r, 1.4).unwrap();
        assert!((s.p - 0.5 * (lo + hi)).abs() < 1e-11);
    }

    #[test]
    fn uniform_state_is_preserved() {
        let s = Primitive::new(0.7f64, 0.2, 0.4);
        for x in [0.1, 0.5, 0.9] {
            let v = riemann_exact(x, 0.2, 0.5, &s, &s, 1.4).unwrap();
            assert!((v.rho - 0.7).abs() < 1e-12 && (v.v - 0.2).abs() < 1e-12 && (v.p - 0.4).abs() < 1e-12);
        }
    }

    #[test]
    fn vacuum_rejected() {
        let l = Primitive::new(1.0, -10.0, 0.1);
        let r = Primitive::new(1.0, 10.0, 0.1);
        assert_eq!(star_state(&l, &r, 1.4).unwrap_err(), Error::Vacuum);
    }
}
