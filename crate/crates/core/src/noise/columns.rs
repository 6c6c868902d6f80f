use num_complex::Complex64;

use super::model::NoiseModel;
use crate::error::Result;
use crate::spectral::{Space, SpectralField, VectorModes};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone)]
enum ChannelOp {
    Zero,
    /// Per-mode multiplier `i b . kappa + c` (constant coefficients).
    Diagonal(Vec<Complex64>),
    /// Coefficients sampled on the dealiased grid.
    Physical { b1: Vec<f64>, b2: Vec<f64>, c: Vec<f64> },
}

/// Columns `g_i(u) = P_n[(b_i . grad) u + c_i u]`, one per channel.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseColumns(pub Vec<SpectralField>);

impl NoiseColumns {
    /// `sum_i |g_i|_H^2`.
    pub fn hs_norm_sq(&self) -> f64 {
        self.0.iter().map(|g| g.h_norm_sq()).sum()
    }

    /// `sum_i g_i dW_i`.
    pub fn combine(&self, n: usize, dw: &[f64]) -> SpectralField {
        let mut out = SpectralField::zeros(n);
        for (g, w) in self.0.iter().zip(dw) {
            out.axpy(*w, g);
        }
        out
    }
}

/// A [`NoiseModel`] bound to a discretisation.
///
/// Constant-coefficient channels act diagonally in Fourier space; others are
/// evaluated pseudo-spectrally on the dealiased grid (coefficient bandwidth
/// must not exceed the cutoff, so products are alias-free on the band).
#[derive(Debug, Clone)]
pub struct NoiseOperator {
    ops: Vec<ChannelOp>,
}

impl NoiseOperator {
    pub fn new(model: &NoiseModel, space: &Space) -> Result<Self> {
        model.validate_for(space.domain())?;
        let d = space.domain();
        let ops = model
            .channels
            .iter()
            .map(|ch| {
                if ch.is_zero() {
                    ChannelOp::Zero
                } else if ch.is_constant() {
                    let (bx, by, c) = (ch.bx.constant, ch.by.constant, ch.c.constant);
                    let side = space.side();
                    ChannelOp::Diagonal(
                        (0..side * side)
                            .map(|idx| {
                                let [kx, ky] = space.kappa(idx);
                                I * (bx * kx + by * ky) + c
                            })
                            .collect(),
                    )
                } else {
                    let mm = space.grid_size() * space.grid_size();
                    let mut b1 = Vec::with_capacity(mm);
                    let mut b2 = Vec::with_capacity(mm);
                    let mut c = Vec::with_capacity(mm);
                    for j in 0..mm {
                        let [x, y] = space.grid_point(j);
                        let b = ch.b_at(d, x, y);
                        b1.push(b[0]);
                        b2.push(b[1]);
                        c.push(ch.c.eval(d, x, y));
                    }
                    ChannelOp::Physical { b1, b2, c }
                }
            })
            .collect();
        Ok(Self { ops })
    }

    pub fn m(&self) -> usize {
        self.ops.len()
    }

    pub fn is_zero(&self) -> bool {
        self.ops.iter().all(|o| matches!(o, ChannelOp::Zero))
    }

    pub fn columns(&self, space: &Space, u: &SpectralField) -> NoiseColumns {
        let n = space.cutoff();
        let needs_physical = self
            .ops
            .iter()
            .any(|o| matches!(o, ChannelOp::Physical { .. }));
        let phys = needs_physical.then(|| {
            let (u1, u2) = space.physical(u.modes());
            let (dx, dy) = space.physical_gradient(u.modes());
            (u1, u2, dx, dy)
        });
        let cols = self
            .ops
            .iter()
            .map(|op| match op {
                ChannelOp::Zero => SpectralField::zeros(n),
                ChannelOp::Diagonal(mult) => {
                    let mut m = u.modes().clone();
                    for (v, a) in m.data_mut().iter_mut().zip(mult) {
                        v[0] *= a;
                        v[1] *= a;
                    }
                    space.leray_project(&m)
                }
                ChannelOp::Physical { b1, b2, c } => {
                    let (u1, u2, dx, dy) = phys.as_ref().expect("physical samples");
                    let g1: Vec<f64> = (0..u1.len())
                        .map(|j| b1[j] * dx[0][j] + b2[j] * dy[0][j] + c[j] * u1[j])
                        .collect();
                    let g2: Vec<f64> = (0..u1.len())
                        .map(|j| b1[j] * dx[1][j] + b2[j] * dy[1][j] + c[j] * u2[j])
                        .collect();
                    space.leray_project(&space.analyze(&g1, &g2))
                }
            })
            .collect();
        NoiseColumns(cols)
    }

    pub fn hs_norm_sq(&self, space: &Space, u: &SpectralField) -> f64 {
        self.columns(space, u).hs_norm_sq()
    }

    /// `sum_i |g_i(u)|_{V'}^2`, the Hilbert-Schmidt norm into `V'`.
    pub fn hs_vprime_sq(&self, space: &Space, u: &SpectralField) -> f64 {
        self.columns(space, u)
            .0
            .iter()
            .map(|g| space.vprime_norm(g.modes()).powi(2))
            .sum()
    }
}

/// Coefficients of `(b . grad) u + c u` projected on the band, computed by
/// brute-force exponential sums on a fine grid. Test oracle, independent of
/// the FFT path.
#[doc(hidden)]
pub fn direct_column(
    space: &Space,
    ch: &super::model::NoiseChannel,
    u: &SpectralField,
    grid: usize,
) -> VectorModes {
    let d = space.domain();
    let norm = 1.0 / d.area().sqrt();
    let modes: Vec<_> = u.iter_modes().filter(|(_, _, v)| v[0].norm() + v[1].norm() > 0.0).collect();
    let mut vals = Vec::with_capacity(grid * grid);
    for j1 in 0..grid {
        let x = j1 as f64 * d.lx / grid as f64;
        for j2 in 0..grid {
            let y = j2 as f64 * d.ly / grid as f64;
            let (mut u1, mut u2) = (0.0, 0.0);
            let (mut ux, mut uy) = ([0.0; 2], [0.0; 2]);
            for &(k1, k2, v) in &modes {
                let [kx, ky] = d.wavevector(k1, k2);
                let e = Complex64::new(0.0, kx * x + ky * y).exp() * norm;
                u1 += (v[0] * e).re;
                u2 += (v[1] * e).re;
                for c in 0..2 {
                    ux[c] += (I * kx * v[c] * e).re;
                    uy[c] += (I * ky * v[c] * e).re;
                }
            }
            let b = ch.b_at(d, x, y);
            let c = ch.c.eval(d, x, y);
            vals.push([
                b[0] * ux[0] + b[1] * uy[0] + c * u1,
                b[0] * ux[1] + b[1] * uy[1] + c * u2,
            ]);
        }
    }
    let cell = d.area() / (grid * grid) as f64;
    let mut out = VectorModes::zeros(space.cutoff());
    for idx in 0..out.data().len() {
        let (k1, k2) = out.mode_at(idx);
        let [kx, ky] = d.wavevector(k1, k2);
        let mut acc = [Complex64::new(0.0, 0.0); 2];
        for j1 in 0..grid {
            let x = j1 as f64 * d.lx / grid as f64;
            for j2 in 0..grid {
                let y = j2 as f64 * d.ly / grid as f64;
                let e = Complex64::new(0.0, -(kx * x + ky * y)).exp() * norm * cell;
                let v = vals[j1 * grid + j2];
                acc[0] += e * v[0];
                acc[1] += e * v[1];
            }
        }
        out.data_mut()[idx] = acc;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::model::{CoefField, NoiseChannel};
    use crate::spectral::Domain;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_multiplier_channel() {
        let s = Space::new(Domain::periodic_2pi(5)).unwrap();
        let mut model = NoiseModel::zero(3);
        model.channels[0] = NoiseChannel::multiplicative(0.7);
        let op = NoiseOperator::new(&model, &s).unwrap();
        let u = s.random_field(&mut ChaCha8Rng::seed_from_u64(1), 1.0, 1.3);
        let cols = op.columns(&s, &u);
        assert!(cols.0[0].sub(&u.scaled(0.7)).max_abs() < 1e-15);
        assert_eq!(cols.0[1].max_abs(), 0.0);
        assert_eq!(cols.0[2].max_abs(), 0.0);
        assert!((cols.hs_norm_sq() - 0.49 * u.h_norm_sq()).abs() < 1e-14);
        assert_eq!(op.hs_norm_sq(&s, &SpectralField::zeros(5)), 0.0);
    }

    #[test]
    fn constant_advection_on_single_mode() {
        let s = Space::new(Domain::new(3.0, 2.0, 4, vec![]).unwrap()).unwrap();
        let beta = 0.6;
        let op = NoiseOperator::new(&NoiseModel::advective_x(beta), &s).unwrap();
        let u = s.single_mode(2, 1, 1.0, 0.4);
        let g = &op.columns(&s, &u).0[0];
        let kx = s.domain().wavevector(2, 1)[0];
        let want = u.get(2, 1);
        let got = g.get(2, 1);
        for c in 0..2 {
            assert!((got[c] - I * beta * kx * want[c]).norm() < 1e-14);
        }
    }

    #[test]
    fn variable_coefficients_match_direct_quadrature() {
        let s = Space::new(Domain::new(2.0 * std::f64::consts::PI, 4.0, 4, vec![]).unwrap()).unwrap();
        let ch = NoiseChannel {
            bx: CoefField::constant(0.3).with_mode([1, 0], 0.2, 0.0),
            by: CoefField::default().with_mode([0, 1], 0.0, 0.25),
            c: CoefField::constant(0.1).with_mode([1, -1], 0.05, 0.05),
        };
        let model = NoiseModel::new(vec![ch.clone()]);
        let op = NoiseOperator::new(&model, &s).unwrap();
        let u = s.random_field(&mut ChaCha8Rng::seed_from_u64(9), 0.5, 1.0);
        let g = &op.columns(&s, &u).0[0];
        let oracle = s.leray_project(&direct_column(&s, &ch, &u, 32));
        assert!(g.sub(&oracle).max_abs() < 1e-8, "{}", g.sub(&oracle).max_abs());
        assert!(s.divergence_defect(g.modes()) < 1e-12);
    }

    #[test]
    fn rejects_coefficients_beyond_cutoff() {
        let s = Space::new(Domain::periodic_2pi(2)).unwrap();
        let ch = NoiseChannel {
            c: CoefField::default().with_mode([3, 0], 1.0, 0.0),
            ..Default::default()
        };
        assert!(NoiseOperator::new(&NoiseModel::new(vec![ch]), &s).is_err());
    }
}
