use serde::{Deserialize, Serialize};

use super::{BurgersDiscrete, Discrete, SodDiscrete};
use crate::error::Result;
use crate::grid::build_grid;
use crate::problems::{BurgersSpec, SodSpec};
use crate::scalar::Real;

/// Builds the discrete problem on any level of a fixed domain.
pub trait LevelFactory<T: Real>: Sync {
    type Level: Discrete<T>;
    fn at_level(&self, level: usize) -> Result<Self::Level>;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain<T> {
    pub x_lo: T,
    pub x_hi: T,
    pub t_end: T,
    pub px: usize,
    pub pt: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgersSetup<T> {
    pub spec: BurgersSpec<T>,
    pub domain: Domain<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SodSetup<T> {
    pub spec: SodSpec<T>,
    pub domain: Domain<T>,
}

impl<T: Real> LevelFactory<T> for BurgersSetup<T> {
    type Level = BurgersDiscrete<T>;
    fn at_level(&self, level: usize) -> Result<BurgersDiscrete<T>> {
        let d = &self.domain;
        let grid = build_grid((d.x_lo, d.x_hi), d.t_end, level, d.px, d.pt)?;
        BurgersDiscrete::new(self.spec, grid)
    }
}

impl<T: Real> LevelFactory<T> for SodSetup<T> {
    type Level = SodDiscrete<T>;
    fn at_level(&self, level: usize) -> Result<SodDiscrete<T>> {
        let d = &self.domain;
        let grid = build_grid((d.x_lo, d.x_hi), d.t_end, level, d.px, d.pt)?;
        SodDiscrete::new(self.spec, grid)
    }
}
