use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::domain::Domain;
use super::field::mode_index;
use crate::error::Result;

/// Square 2D complex FFT on a row-major `m x m` buffer.
#[derive(Clone)]
pub struct Fft2 {
    m: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Fft2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft2").field("m", &self.m).finish()
    }
}

impl Fft2 {
    pub fn new(m: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            m,
            fwd: planner.plan_fft_forward(m),
            inv: planner.plan_fft_inverse(m),
        }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    fn run(&self, fft: &Arc<dyn Fft<f64>>, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.m * self.m);
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(buf, &mut scratch);
        transpose(buf, self.m);
        fft.process_with_scratch(buf, &mut scratch);
        transpose(buf, self.m);
    }

    /// Unnormalised transform with kernel `exp(+2 pi i k.j / m)`.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.run(&self.inv, buf);
    }

    /// Unnormalised transform with kernel `exp(-2 pi i k.j / m)`.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.run(&self.fwd, buf);
    }
}

fn transpose(buf: &mut [Complex64], m: usize) {
    for i in 0..m {
        for j in (i + 1)..m {
            buf.swap(i * m + j, j * m + i);
        }
    }
}

/// Smallest 5-smooth integer `>= min`.
pub fn smooth_size(min: usize) -> usize {
    let mut m = min.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r.is_multiple_of(p) {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

#[inline]
fn wrap(k: i64, m: usize) -> usize {
    k.rem_euclid(m as i64) as usize
}

/// Discretisation context for one domain: mode tables and the dealiased
/// physical grid.
///
/// The physical grid has `m >= 3n + 1` points per direction, so quadratic
/// products of band-limited fields (and the cubic integrand of the trilinear
/// form) are computed without aliasing on the retained band.
#[derive(Debug, Clone)]
pub struct Space {
    domain: Domain,
    n: usize,
    fft: Fft2,
    kappa: Vec<[f64; 2]>,
    kappa2: Vec<f64>,
}

impl Space {
    pub fn new(domain: Domain) -> Result<Self> {
        domain.validate()?;
        let n = domain.cutoff;
        let m = smooth_size(3 * n + 1);
        let side = 2 * n + 1;
        let mut kappa = Vec::with_capacity(side * side);
        let mut kappa2 = Vec::with_capacity(side * side);
        let ni = n as i64;
        for k1 in -ni..=ni {
            for k2 in -ni..=ni {
                let k = domain.wavevector(k1, k2);
                kappa.push(k);
                kappa2.push(k[0] * k[0] + k[1] * k[1]);
            }
        }
        Ok(Self {
            domain,
            n,
            fft: Fft2::new(m),
            kappa,
            kappa2,
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn cutoff(&self) -> usize {
        self.n
    }

    pub fn side(&self) -> usize {
        2 * self.n + 1
    }

    pub fn grid_size(&self) -> usize {
        self.fft.size()
    }

    pub fn poincare_constant(&self) -> f64 {
        self.domain.poincare_constant()
    }

    pub fn index(&self, k1: i64, k2: i64) -> usize {
        mode_index(self.n, k1, k2)
    }

    pub fn mode_at(&self, idx: usize) -> (i64, i64) {
        let side = self.side();
        let n = self.n as i64;
        ((idx / side) as i64 - n, (idx % side) as i64 - n)
    }

    /// Physical wavevector at flat mode index.
    pub fn kappa(&self, idx: usize) -> [f64; 2] {
        self.kappa[idx]
    }

    pub fn kappa2(&self, idx: usize) -> f64 {
        self.kappa2[idx]
    }

    /// Largest `|kappa|^2` in the band.
    pub fn max_kappa2(&self) -> f64 {
        self.kappa2.iter().cloned().fold(0.0, f64::max)
    }

    /// Grid coordinates `(x_j1, y_j2)` for flat physical index `j1 * m + j2`.
    pub fn grid_point(&self, flat: usize) -> [f64; 2] {
        let m = self.grid_size();
        let (j1, j2) = (flat / m, flat % m);
        [
            j1 as f64 * self.domain.lx / m as f64,
            j2 as f64 * self.domain.ly / m as f64,
        ]
    }

    /// Synthesises two real physical fields from Hermitian band spectra.
    pub fn to_physical_pair(&self, a: &[Complex64], b: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
        synth_pair(&self.fft, self.n, self.domain.area(), a, b)
    }

    /// Band spectra (cutoff `n`) of two real physical fields on the dealiased grid.
    pub fn from_physical_pair(&self, pa: &[f64], pb: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
        analyze_pair(&self.fft, self.n, self.domain.area(), pa, pb)
    }

    /// Synthesis on an arbitrary grid of `m >= 2n + 1` points per direction.
    pub fn to_physical_pair_on(
        &self,
        m: usize,
        a: &[Complex64],
        b: &[Complex64],
    ) -> (Vec<f64>, Vec<f64>) {
        assert!(m > 2 * self.n, "grid too coarse for the band");
        if m == self.grid_size() {
            return self.to_physical_pair(a, b);
        }
        synth_pair(&Fft2::new(m), self.n, self.domain.area(), a, b)
    }
}

fn synth_pair(
    fft: &Fft2,
    n: usize,
    area: f64,
    a: &[Complex64],
    b: &[Complex64],
) -> (Vec<f64>, Vec<f64>) {
    let m = fft.size();
    let mut buf = vec![Complex64::new(0.0, 0.0); m * m];
    let ni = n as i64;
    let side = 2 * n + 1;
    let i = Complex64::new(0.0, 1.0);
    for k1 in -ni..=ni {
        let row = wrap(k1, m) * m;
        let base = (k1 + ni) as usize * side;
        for k2 in -ni..=ni {
            let s = base + (k2 + ni) as usize;
            buf[row + wrap(k2, m)] = a[s] + i * b[s];
        }
    }
    fft.inverse(&mut buf);
    let scale = 1.0 / area.sqrt();
    let pa = buf.iter().map(|z| z.re * scale).collect();
    let pb = buf.iter().map(|z| z.im * scale).collect();
    (pa, pb)
}

fn analyze_pair(
    fft: &Fft2,
    n: usize,
    area: f64,
    pa: &[f64],
    pb: &[f64],
) -> (Vec<Complex64>, Vec<Complex64>) {
    let m = fft.size();
    let mut buf: Vec<Complex64> = pa
        .iter()
        .zip(pb)
        .map(|(&x, &y)| Complex64::new(x, y))
        .collect();
    fft.forward(&mut buf);
    let scale = area.sqrt() / (m * m) as f64;
    let side = 2 * n + 1;
    let ni = n as i64;
    let mut a = vec![Complex64::new(0.0, 0.0); side * side];
    let mut b = vec![Complex64::new(0.0, 0.0); side * side];
    let half_i = Complex64::new(0.0, -0.5);
    for k1 in -ni..=ni {
        for k2 in -ni..=ni {
            let z = buf[wrap(k1, m) * m + wrap(k2, m)] * scale;
            let zc = buf[wrap(-k1, m) * m + wrap(-k2, m)].conj() * scale;
            let s = (k1 + ni) as usize * side + (k2 + ni) as usize;
            a[s] = (z + zc) * 0.5;
            b[s] = (z - zc) * half_i;
        }
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn smooth_sizes() {
        assert_eq!(smooth_size(97), 100);
        assert_eq!(smooth_size(25), 25);
        assert_eq!(smooth_size(13), 15);
        assert_eq!(smooth_size(7), 8);
    }

    #[test]
    fn pair_transform_round_trip_on_band() {
        let space = Space::new(Domain::new(2.0, 3.0, 3, vec![]).unwrap()).unwrap();
        let side = space.side();
        let mut a = vec![Complex64::new(0.0, 0.0); side * side];
        let mut b = a.clone();
        let set = |v: &mut Vec<Complex64>, k1: i64, k2: i64, z: Complex64| {
            v[space.index(k1, k2)] = z;
            v[space.index(-k1, -k2)] = z.conj();
        };
        set(&mut a, 1, 2, Complex64::new(0.3, -0.7));
        set(&mut a, 3, -3, Complex64::new(1.1, 0.2));
        set(&mut b, 0, 1, Complex64::new(-0.4, 0.9));
        let (pa, pb) = space.to_physical_pair(&a, &b);
        let (ra, rb) = space.from_physical_pair(&pa, &pb);
        for i in 0..side * side {
            assert!((ra[i] - a[i]).norm() < 1e-13);
            assert!((rb[i] - b[i]).norm() < 1e-13);
        }
    }

    #[test]
    fn synthesis_matches_direct_sum() {
        let space = Space::new(Domain::periodic_2pi(2)).unwrap();
        let side = space.side();
        let mut a = vec![Complex64::new(0.0, 0.0); side * side];
        let c = Complex64::new(0.25, 0.5);
        a[space.index(1, -2)] = c;
        a[space.index(-1, 2)] = c.conj();
        let zero = vec![Complex64::new(0.0, 0.0); side * side];
        let (pa, _) = space.to_physical_pair(&a, &zero);
        let norm = 1.0 / (4.0 * PI * PI).sqrt();
        for (j, &v) in pa.iter().enumerate() {
            let [x, y] = space.grid_point(j);
            let expect = 2.0 * (c * Complex64::new(0.0, x - 2.0 * y).exp()).re * norm;
            assert!((v - expect).abs() < 1e-13);
        }
    }
}
