//! Interpolating forward/backward wavelet transforms.
//!
//! Analysis keeps the even samples as scaling coefficients and stores the
//! prediction error of every odd sample as its detail coefficient.
//! Synthesis inverts this exactly.

use super::field::{DetailField, FieldGrid2D, Subband};
use super::filter::FilterBank;
use crate::error::{Error, Result};
use crate::scalar::Real;

fn check_fine_len<T: Real>(len: usize, bank: &FilterBank<T>) -> Result<()> {
    if len.is_multiple_of(2) {
        return Err(Error::InvalidLength { len, reason: "length must be odd" });
    }
    if len < bank.min_len() {
        return Err(Error::InvalidLength { len, reason: "shorter than p + 1" });
    }
    Ok(())
}

/// One analysis step on a sequence of length `2m + 1`.
pub fn fwt_1d<T: Real>(samples: &[T], bank: &FilterBank<T>) -> Result<(Vec<T>, Vec<T>)> {
    check_fine_len(samples.len(), bank)?;
    let coarse: Vec<T> = samples.iter().step_by(2).copied().collect();
    let mut detail = vec![T::zero(); coarse.len() - 1];
    bank.predict(&coarse, &mut detail);
    for (d, s) in detail.iter_mut().zip(samples.iter().skip(1).step_by(2)) {
        *d = *s - *d;
    }
    Ok((coarse, detail))
}

/// One synthesis step; inverse of [`fwt_1d`].
pub fn bwt_1d<T: Real>(coarse: &[T], details: &[T], bank: &FilterBank<T>) -> Result<Vec<T>> {
    if coarse.len() != details.len() + 1 {
        return Err(Error::DimensionMismatch { expected: details.len() + 1, got: coarse.len() });
    }
    let n = 2 * coarse.len() - 1;
    check_fine_len(n, bank)?;
    let mut odd = vec![T::zero(); details.len()];
    bank.predict(coarse, &mut odd);
    let mut out = Vec::with_capacity(n);
    for i in 0..details.len() {
        out.push(coarse[i]);
        out.push(odd[i] + details[i]);
    }
    out.push(coarse[coarse.len() - 1]);
    Ok(out)
}

/// Tensor-product transforms for a fixed pair of basis orders.
#[derive(Debug, Clone)]
pub struct Transform2D<T> {
    bank_x: FilterBank<T>,
    bank_t: FilterBank<T>,
}

impl<T: Real> Transform2D<T> {
    pub fn new(px: usize, pt: usize) -> Result<Self> {
        Ok(Self { bank_x: FilterBank::new(px)?, bank_t: FilterBank::new(pt)? })
    }

    pub fn for_field(field: &FieldGrid2D<T>) -> Result<Self> {
        Self::new(field.px(), field.pt())
    }

    fn check(&self, field: &FieldGrid2D<T>) -> Result<()> {
        if field.px() != self.bank_x.order() {
            return Err(Error::DimensionMismatch { expected: self.bank_x.order(), got: field.px() });
        }
        if field.pt() != self.bank_t.order() {
            return Err(Error::DimensionMismatch { expected: self.bank_t.order(), got: field.pt() });
        }
        Ok(())
    }

    /// Analysis of a level-`j` field into a level-`j-1` coarse field and
    /// three detail subbands. Rows (x) first, then columns (t).
    pub fn fwt_2d(&self, field: &FieldGrid2D<T>) -> Result<DetailField<T>> {
        self.check(field)?;
        if field.level() < 2 {
            return Err(Error::LevelTooLow(field.level()));
        }
        let (nx, nt) = (field.nx(), field.nt());
        let (cx, ct) = (nx.div_ceil(2), nt.div_ceil(2));
        // x pass: per time index
        let mut cx_rows = vec![T::zero(); cx * nt];
        let mut dx_rows = vec![T::zero(); (cx - 1) * nt];
        for kt in 0..nt {
            let (c, d) = fwt_1d(field.time_slice(kt), &self.bank_x)?;
            cx_rows[kt * cx..(kt + 1) * cx].copy_from_slice(&c);
            dx_rows[kt * (cx - 1)..(kt + 1) * (cx - 1)].copy_from_slice(&d);
        }
        // t pass on both halves
        let mut coarse = vec![T::zero(); cx * ct];
        let mut det_t = vec![T::zero(); cx * (ct - 1)];
        let mut det_x = vec![T::zero(); (cx - 1) * ct];
        let mut det_xt = vec![T::zero(); (cx - 1) * (ct - 1)];
        let mut line = vec![T::zero(); nt];
        for kx in 0..cx {
            for kt in 0..nt {
                line[kt] = cx_rows[kx + cx * kt];
            }
            let (c, d) = fwt_1d(&line, &self.bank_t)?;
            for (kt, v) in c.into_iter().enumerate() {
                coarse[kx + cx * kt] = v;
            }
            for (kt, v) in d.into_iter().enumerate() {
                det_t[kx + cx * kt] = v;
            }
        }
        for kx in 0..cx - 1 {
            for kt in 0..nt {
                line[kt] = dx_rows[kx + (cx - 1) * kt];
            }
            let (c, d) = fwt_1d(&line, &self.bank_t)?;
            for (kt, v) in c.into_iter().enumerate() {
                det_x[kx + (cx - 1) * kt] = v;
            }
            for (kt, v) in d.into_iter().enumerate() {
                det_xt[kx + (cx - 1) * kt] = v;
            }
        }
        let coarse = FieldGrid2D::from_values(field.level() - 1, field.px(), field.pt(), coarse)?;
        Ok(DetailField::new(
            coarse,
            Subband { nx: cx - 1, nt: ct, values: det_x },
            Subband { nx: cx, nt: ct - 1, values: det_t },
            Subband { nx: cx - 1, nt: ct - 1, values: det_xt },
        ))
    }

    /// Synthesis; exact inverse of [`Transform2D::fwt_2d`].
    pub fn bwt_2d(&self, d: &DetailField<T>) -> Result<FieldGrid2D<T>> {
        self.check(&d.coarse)?;
        let (cx, ct) = (d.coarse.nx(), d.coarse.nt());
        let expect = |sb: &Subband<T>, nx: usize, nt: usize| {
            if sb.nx != nx || sb.nt != nt {
                Err(Error::DimensionMismatch { expected: nx * nt, got: sb.nx * sb.nt })
            } else {
                Ok(())
            }
        };
        expect(&d.detail_x, cx - 1, ct)?;
        expect(&d.detail_t, cx, ct - 1)?;
        expect(&d.detail_xt, cx - 1, ct - 1)?;
        let (nx, nt) = (2 * cx - 1, 2 * ct - 1);
        // inverse t pass
        let mut cx_rows = vec![T::zero(); cx * nt];
        let mut dx_rows = vec![T::zero(); (cx - 1) * nt];
        let mut c_line = vec![T::zero(); ct];
        let mut d_line = vec![T::zero(); ct - 1];
        for kx in 0..cx {
            for kt in 0..ct {
                c_line[kt] = d.coarse.get(kx, kt);
            }
            for kt in 0..ct - 1 {
                d_line[kt] = d.detail_t.get(kx, kt);
            }
            for (kt, v) in bwt_1d(&c_line, &d_line, &self.bank_t)?.into_iter().enumerate() {
                cx_rows[kx + cx * kt] = v;
            }
        }
        for kx in 0..cx - 1 {
            for kt in 0..ct {
                c_line[kt] = d.detail_x.get(kx, kt);
            }
            for kt in 0..ct - 1 {
                d_line[kt] = d.detail_xt.get(kx, kt);
            }
            for (kt, v) in bwt_1d(&c_line, &d_line, &self.bank_t)?.into_iter().enumerate() {
                dx_rows[kx + (cx - 1) * kt] = v;
            }
        }
        // inverse x pass
        let mut values = Vec::with_capacity(nx * nt);
        for kt in 0..nt {
            let row = bwt_1d(
                &cx_rows[kt * cx..(kt + 1) * cx],
                &dx_rows[kt * (cx - 1)..(kt + 1) * (cx - 1)],
                &self.bank_x,
            )?;
            values.extend(row);
        }
        FieldGrid2D::from_values(d.coarse.level() + 1, d.coarse.px(), d.coarse.pt(), values)
    }

    /// Lift a level-`j` field to level `j + 1` by synthesis with zero details.
    pub fn prolongate(&self, field: &FieldGrid2D<T>) -> Result<FieldGrid2D<T>> {
        self.bwt_2d(&DetailField::zero_details(field.clone()))
    }

    /// Largest detail coefficient of one analysis step, unnormalized.
    pub fn max_detail(&self, field: &FieldGrid2D<T>) -> Result<T> {
        Ok(self.fwt_2d(field)?.max_detail())
    }

    /// Largest detail coefficient relative to `max |field|`; zero for an
    /// all-zero field.
    pub fn estimate_error(&self, field: &FieldGrid2D<T>) -> Result<T> {
        let scale = field.max_abs();
        if scale == T::zero() {
            return Ok(T::zero());
        }
        Ok(self.max_detail(field)? / scale)
    }
}

pub fn fwt_2d<T: Real>(field: &FieldGrid2D<T>) -> Result<DetailField<T>> {
    Transform2D::for_field(field)?.fwt_2d(field)
}

pub fn bwt_2d<T: Real>(d: &DetailField<T>) -> Result<FieldGrid2D<T>> {
    Transform2D::for_field(&d.coarse)?.bwt_2d(d)
}

pub fn prolongate<T: Real>(field: &FieldGrid2D<T>) -> Result<FieldGrid2D<T>> {
    Transform2D::for_field(field)?.prolongate(field)
}

pub fn estimate_error<T: Real>(field: &FieldGrid2D<T>) -> Result<T> {
    Transform2D::for_field(field)?.estimate_error(field)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bank(p: usize) -> FilterBank<f64> {
        FilterBank::new(p).unwrap()
    }

    #[test]
    fn constant_has_zero_details() {
        let (_, d) = fwt_1d(&[2.5; 17], &bank(4)).unwrap();
        assert!(d.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn cubic_annihilated_quartic_not() {
        let xs: Vec<f64> = (0..17).map(|k| -1.0 + k as f64 / 8.0).collect();
        let cubic: Vec<f64> = xs.iter().map(|x| x * x * x).collect();
        let (_, d) = fwt_1d(&cubic, &bank(4)).unwrap();
        assert!(d.iter().all(|v| v.abs() <= 1e-12));

        let quartic: Vec<f64> = xs.iter().map(|x| x.powi(4)).collect();
        let (_, d) = fwt_1d(&quartic, &bank(4)).unwrap();
        // odd sample 3 (x = -1 + 7/16 * 2... index 7) sits at the interior
        let i = 3;
        let c = |k: usize| quartic[2 * k];
        let pred = (-c(i - 1) + 9.0 * c(i) + 9.0 * c(i + 1) - c(i + 2)) / 16.0;
        let expect = quartic[2 * i + 1] - pred;
        assert!(expect.abs() > 1e-6);
        assert!((d[i] - expect).abs() <= 1e-15);
    }

    #[test]
    fn short_coarse_uses_reduced_stencil() {
        let out = bwt_1d(&[0.0, 1.0, 0.0], &[0.25, -0.25], &bank(4)).unwrap();
        // quadratic through (0,0),(1,1),(2,0) is 0.75 at both midpoints
        assert_eq!(out, vec![0.0, 1.0, 1.0, 0.5, 0.0]);
    }

    #[test]
    fn length_errors() {
        assert!(matches!(fwt_1d(&[0.0; 16], &bank(4)), Err(Error::InvalidLength { .. })));
        assert!(matches!(fwt_1d(&[0.0; 3], &bank(4)), Err(Error::InvalidLength { .. })));
        assert!(bwt_1d(&[0.0; 4], &[0.0; 4], &bank(4)).is_err());
    }

    #[test]
    fn level_one_analysis_rejected() {
        let f = FieldGrid2D::<f64>::zeros(1, 4, 4);
        assert_eq!(fwt_2d(&f).unwrap_err(), Error::LevelTooLow(1));
    }

    #[test]
    fn prolongation_preserves_even_nodes() {
        let f = FieldGrid2D::<f64>::from_index_fn(2, 4, 6, |kx, kt| ((kx * 7 + kt * 3) % 5) as f64);
        let g = prolongate(&f).unwrap();
        assert_eq!(g.level(), 3);
        assert_eq!(g.restrict().unwrap(), f);
    }
}
