//! Function-space arithmetic on a [`Space`]: Leray projection, the Stokes
//! operator, the trilinear form and the norms used by the energy estimates.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::field::{DualField, SpectralField, VectorModes};
use super::grid::{smooth_size, Space};
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

impl Space {
    pub(crate) fn check(&self, m: &VectorModes) -> Result<()> {
        if m.cutoff() != self.cutoff() {
            return Err(Error::CutoffMismatch {
                expected: self.cutoff(),
                found: m.cutoff(),
            });
        }
        Ok(())
    }

    /// Orthogonal projection onto divergence-free fields, per mode
    /// `v - kappa (kappa . v) / |kappa|^2`. The `(0, 0)` mode is dropped.
    pub fn leray_project(&self, raw: &VectorModes) -> SpectralField {
        assert_eq!(raw.cutoff(), self.cutoff(), "cutoff mismatch");
        let mut out = raw.clone();
        for (idx, v) in out.data_mut().iter_mut().enumerate() {
            let k2 = self.kappa2(idx);
            if k2 == 0.0 {
                *v = [ZERO; 2];
                continue;
            }
            let [kx, ky] = self.kappa(idx);
            let dot = v[0] * kx + v[1] * ky;
            v[0] -= dot * (kx / k2);
            v[1] -= dot * (ky / k2);
        }
        SpectralField::from_projected(out)
    }

    /// `max_k |kappa(k) . u_k| / max_k |u_k|` (zero for the zero field).
    pub fn divergence_defect(&self, m: &VectorModes) -> f64 {
        let scale = m.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let worst = m
            .data()
            .iter()
            .enumerate()
            .map(|(idx, v)| {
                let [kx, ky] = self.kappa(idx);
                (v[0] * kx + v[1] * ky).norm()
            })
            .fold(0.0, f64::max);
        worst / scale
    }

    /// Accepts externally supplied coefficients as a velocity field after
    /// checking incompressibility, reality and the absent mean.
    pub fn validate_field(&self, m: VectorModes, tol: f64) -> Result<SpectralField> {
        self.check(&m)?;
        let scale = m.max_abs().max(f64::MIN_POSITIVE);
        let mean = m.get(0, 0);
        if mean[0].norm() > tol * scale || mean[1].norm() > tol * scale {
            return Err(Error::Format("field has a nonzero mean mode".into()));
        }
        if m.reality_defect() > tol * scale {
            return Err(Error::Format("coefficients are not Hermitian-symmetric".into()));
        }
        if self.divergence_defect(&m) > tol {
            return Err(Error::Format("field is not divergence-free".into()));
        }
        let mut m = m;
        let z = m.index(0, 0);
        m.data_mut()[z] = [ZERO; 2];
        Ok(SpectralField::from_projected(m))
    }

    /// Stokes operator: multiplication by `|kappa|^2` per mode.
    pub fn stokes_apply(&self, u: &SpectralField) -> DualField {
        let mut m = u.modes().clone();
        for (idx, v) in m.data_mut().iter_mut().enumerate() {
            let k2 = self.kappa2(idx);
            v[0] *= k2;
            v[1] *= k2;
        }
        DualField::from_modes(m)
    }

    /// `||u||` = `|grad u|_{L^2}`.
    pub fn v_seminorm(&self, u: &SpectralField) -> f64 {
        self.v_seminorm_sq(u).sqrt()
    }

    pub fn v_seminorm_sq(&self, u: &SpectralField) -> f64 {
        u.data()
            .iter()
            .enumerate()
            .map(|(idx, v)| self.kappa2(idx) * (v[0].norm_sqr() + v[1].norm_sqr()))
            .sum()
    }

    /// Dual norm of the `||.||` seminorm: `(sum |f_k|^2 / |kappa|^2)^(1/2)`.
    pub fn vprime_norm(&self, f: &VectorModes) -> f64 {
        self.vs_prime_norm(f, 1.0)
    }

    /// `(sum |f_k|^2 |kappa|^(-2s))^(1/2)`, the `V_s'` norm.
    pub fn vs_prime_norm(&self, f: &VectorModes, s: f64) -> f64 {
        f.data()
            .iter()
            .enumerate()
            .filter(|(idx, _)| self.kappa2(*idx) > 0.0)
            .map(|(idx, v)| (v[0].norm_sqr() + v[1].norm_sqr()) / self.kappa2(idx).powf(s))
            .sum::<f64>()
            .sqrt()
    }

    /// Component spectra `(u1, u2)` of a vector table.
    fn components(&self, m: &VectorModes) -> (Vec<Complex64>, Vec<Complex64>) {
        (
            m.data().iter().map(|v| v[0]).collect(),
            m.data().iter().map(|v| v[1]).collect(),
        )
    }

    /// Spectra of `d/dx (w1, w2)` and `d/dy (w1, w2)`.
    fn gradient_spectra(
        &self,
        w: &VectorModes,
    ) -> ([Vec<Complex64>; 2], [Vec<Complex64>; 2]) {
        let len = w.data().len();
        let mut dx = [vec![ZERO; len], vec![ZERO; len]];
        let mut dy = [vec![ZERO; len], vec![ZERO; len]];
        for (idx, v) in w.data().iter().enumerate() {
            let [kx, ky] = self.kappa(idx);
            for c in 0..2 {
                dx[c][idx] = I * kx * v[c];
                dy[c][idx] = I * ky * v[c];
            }
        }
        (dx, dy)
    }

    /// Physical samples `(u1, u2)` on the dealiased grid.
    pub fn physical(&self, u: &VectorModes) -> (Vec<f64>, Vec<f64>) {
        let (a, b) = self.components(u);
        self.to_physical_pair(&a, &b)
    }

    /// Physical samples of `grad u`: `([du1/dx, du2/dx], [du1/dy, du2/dy])`.
    pub fn physical_gradient(&self, u: &VectorModes) -> ([Vec<f64>; 2], [Vec<f64>; 2]) {
        let (dx, dy) = self.gradient_spectra(u);
        let (dx1, dx2) = self.to_physical_pair(&dx[0], &dx[1]);
        let (dy1, dy2) = self.to_physical_pair(&dy[0], &dy[1]);
        ([dx1, dx2], [dy1, dy2])
    }

    /// Band coefficients of a physical vector field sampled on the dealiased grid.
    pub fn analyze(&self, p1: &[f64], p2: &[f64]) -> VectorModes {
        let (a, b) = self.from_physical_pair(p1, p2);
        let mut m = VectorModes::zeros(self.cutoff());
        for (idx, v) in m.data_mut().iter_mut().enumerate() {
            *v = [a[idx], b[idx]];
        }
        m
    }

    /// Band coefficients of `(u . grad) w`, without projection.
    pub fn advection_raw(&self, u: &SpectralField, w: &SpectralField) -> VectorModes {
        let (u1, u2) = self.physical(u.modes());
        let ([wx1, wx2], [wy1, wy2]) = self.physical_gradient(w.modes());
        let p1: Vec<f64> = (0..u1.len()).map(|j| u1[j] * wx1[j] + u2[j] * wy1[j]).collect();
        let p2: Vec<f64> = (0..u1.len()).map(|j| u1[j] * wx2[j] + u2[j] * wy2[j]).collect();
        self.analyze(&p1, &p2)
    }

    /// `b(u, w, v) = int (u . grad w) . v dx`, exact on the band.
    pub fn trilinear_b(&self, u: &SpectralField, w: &SpectralField, v: &SpectralField) -> f64 {
        self.advection_raw(u, w).inner(v.modes())
    }

    /// Galerkin-projected `B_n(u, w) = P_n B(u, w)`.
    pub fn nonlinear_term(&self, u: &SpectralField, w: &SpectralField) -> DualField {
        let p = self.leray_project(&self.advection_raw(u, w));
        DualField::from_projected(p.into_modes())
    }

    /// `B_n(u, u)` through the rotational form `omega (-u2, u1)`, which differs
    /// from `(u . grad) u` by a gradient and needs one fewer transform.
    pub fn nonlinear_self(&self, u: &SpectralField) -> DualField {
        let (a, b) = self.components(u.modes());
        let (u1, u2) = self.to_physical_pair(&a, &b);
        let vort: Vec<Complex64> = u
            .data()
            .iter()
            .enumerate()
            .map(|(idx, v)| {
                let [kx, ky] = self.kappa(idx);
                I * (v[1] * kx - v[0] * ky)
            })
            .collect();
        let zero = vec![ZERO; vort.len()];
        let (w, _) = self.to_physical_pair(&vort, &zero);
        let p1: Vec<f64> = (0..w.len()).map(|j| -w[j] * u2[j]).collect();
        let p2: Vec<f64> = (0..w.len()).map(|j| w[j] * u1[j]).collect();
        let p = self.leray_project(&self.analyze(&p1, &p2));
        DualField::from_projected(p.into_modes())
    }

    /// `|u|_{L^4}`, by quadrature on a grid fine enough to integrate `|u|^4` exactly.
    pub fn l4_norm(&self, u: &SpectralField) -> f64 {
        let m = smooth_size(4 * self.cutoff() + 1);
        let (a, b) = self.components(u.modes());
        let (u1, u2) = self.to_physical_pair_on(m, &a, &b);
        let cell = self.domain().area() / (m * m) as f64;
        let s: f64 = u1
            .iter()
            .zip(&u2)
            .map(|(x, y)| {
                let q = x * x + y * y;
                q * q
            })
            .sum();
        (s * cell).powf(0.25)
    }

    /// Local seminorm `p_R(u) = (int_{O_R} |u|^2 dx)^(1/2)`.
    ///
    /// Quadrature on a refined periodic grid, each node weighted by the overlap
    /// of its cell with `O_R`; weights grow with `R`, so the result is monotone
    /// in the region index and equals `|u|_H` (Parseval) on the full box.
    pub fn local_seminorm(&self, u: &SpectralField, region: usize) -> Result<f64> {
        let (xr, yr) = self.domain().region(region)?;
        let n = self.cutoff();
        let m = smooth_size((8 * (2 * n + 1)).max(64));
        let (a, b) = self.components(u.modes());
        let (u1, u2) = self.to_physical_pair_on(m, &a, &b);
        let wx = cell_weights(m, self.domain().lx, xr);
        let wy = cell_weights(m, self.domain().ly, yr);
        let mut s = 0.0;
        for j1 in 0..m {
            if wx[j1] == 0.0 {
                continue;
            }
            for j2 in 0..m {
                let j = j1 * m + j2;
                s += wx[j1] * wy[j2] * (u1[j] * u1[j] + u2[j] * u2[j]);
            }
        }
        Ok(s.sqrt())
    }

    /// Divergence-free single Fourier mode `amplitude * e_k` with
    /// polarisation `kappa^perp / |kappa|`; `|.|_H` equals `|amplitude|`.
    pub fn single_mode(&self, k1: i64, k2: i64, amplitude: f64, phase: f64) -> SpectralField {
        let mut m = VectorModes::zeros(self.cutoff());
        if k1 == 0 && k2 == 0 {
            return SpectralField::from_projected(m);
        }
        let idx = self.index(k1, k2);
        let [kx, ky] = self.kappa(idx);
        let kn = self.kappa2(idx).sqrt();
        let c = Complex64::from_polar(amplitude / 2f64.sqrt(), phase);
        m.set_symmetric(k1, k2, [c * (-ky / kn), c * (kx / kn)]);
        SpectralField::from_projected(m)
    }

    /// Velocity `(d psi/dy, -d psi/dx)` of a scalar stream function spectrum
    /// given as a closure over modes (made Hermitian here).
    pub fn from_stream_function(
        &self,
        psi: impl Fn(i64, i64) -> Complex64,
    ) -> SpectralField {
        let mut m = VectorModes::zeros(self.cutoff());
        for idx in 0..m.data().len() {
            let (k1, k2) = self.mode_at(idx);
            if k1 == 0 && k2 == 0 {
                continue;
            }
            let [kx, ky] = self.kappa(idx);
            let p = psi(k1, k2);
            m.data_mut()[idx] = [I * ky * p, -I * kx * p];
        }
        m.symmetrize();
        self.leray_project(&m)
    }

    /// Samples a physical vector field on the dealiased grid and returns its
    /// Leray-projected band part.
    pub fn project_physical(&self, f: impl Fn(f64, f64) -> [f64; 2]) -> SpectralField {
        let mm = self.grid_size() * self.grid_size();
        let mut p1 = vec![0.0; mm];
        let mut p2 = vec![0.0; mm];
        for j in 0..mm {
            let [x, y] = self.grid_point(j);
            let v = f(x, y);
            p1[j] = v[0];
            p2[j] = v[1];
        }
        self.leray_project(&self.analyze(&p1, &p2))
    }

    /// Random divergence-free field with spectral weight
    /// `(1 + |kappa|^2)^(-slope/2)`, rescaled to `|u|_H = norm`.
    pub fn random_field<R: Rng + ?Sized>(&self, rng: &mut R, slope: f64, norm: f64) -> SpectralField {
        let mut m = VectorModes::zeros(self.cutoff());
        for idx in 0..m.data().len() {
            let (k1, k2) = self.mode_at(idx);
            if !(k1 > 0 || (k1 == 0 && k2 > 0)) {
                continue;
            }
            let w = (1.0 + self.kappa2(idx)).powf(-0.5 * slope);
            let mut g = || -> f64 { rng.sample::<f64, _>(StandardNormal) * w };
            let v = [Complex64::new(g(), g()), Complex64::new(g(), g())];
            m.set_symmetric(k1, k2, v);
        }
        let u = self.leray_project(&m);
        let h = u.h_norm();
        if h == 0.0 {
            u
        } else {
            u.scaled(norm / h)
        }
    }
}

/// Per-node quadrature weights for the interval `[a, b]` on a periodic grid
/// of `m` points over `[0, len)`.
fn cell_weights(m: usize, len: f64, [a, b]: [f64; 2]) -> Vec<f64> {
    let h = len / m as f64;
    (0..m)
        .map(|j| {
            let x = j as f64 * h;
            [-len, 0.0, len]
                .iter()
                .map(|s| {
                    let lo = (x + s - 0.5 * h).max(a);
                    let hi = (x + s + 0.5 * h).min(b);
                    (hi - lo).max(0.0)
                })
                .sum()
        })
        .collect()
}
