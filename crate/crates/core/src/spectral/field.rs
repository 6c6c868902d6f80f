use std::ops::Deref;

use num_complex::Complex64;

/// Dense table of complex 2-vectors indexed by integer modes
/// `max(|k1|, |k2|) <= n`. No structural invariants beyond the layout.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorModes {
    n: usize,
    data: Vec<[Complex64; 2]>,
}

#[inline]
pub(crate) fn mode_index(n: usize, k1: i64, k2: i64) -> usize {
    let side = 2 * n as i64 + 1;
    ((k1 + n as i64) * side + (k2 + n as i64)) as usize
}

impl VectorModes {
    pub fn zeros(n: usize) -> Self {
        let side = 2 * n + 1;
        Self {
            n,
            data: vec![[Complex64::new(0.0, 0.0); 2]; side * side],
        }
    }

    pub fn cutoff(&self) -> usize {
        self.n
    }

    pub fn side(&self) -> usize {
        2 * self.n + 1
    }

    pub fn contains(&self, k1: i64, k2: i64) -> bool {
        let n = self.n as i64;
        k1.abs() <= n && k2.abs() <= n
    }

    pub fn index(&self, k1: i64, k2: i64) -> usize {
        debug_assert!(self.contains(k1, k2));
        mode_index(self.n, k1, k2)
    }

    /// Mode pair stored at flat position `idx`.
    pub fn mode_at(&self, idx: usize) -> (i64, i64) {
        let side = self.side();
        let n = self.n as i64;
        ((idx / side) as i64 - n, (idx % side) as i64 - n)
    }

    pub fn get(&self, k1: i64, k2: i64) -> [Complex64; 2] {
        self.data[self.index(k1, k2)]
    }

    pub fn set(&mut self, k1: i64, k2: i64, v: [Complex64; 2]) {
        let i = self.index(k1, k2);
        self.data[i] = v;
    }

    /// Sets mode `k` and its conjugate partner `-k`.
    pub fn set_symmetric(&mut self, k1: i64, k2: i64, v: [Complex64; 2]) {
        self.set(k1, k2, v);
        self.set(-k1, -k2, [v[0].conj(), v[1].conj()]);
    }

    pub fn data(&self) -> &[[Complex64; 2]] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [[Complex64; 2]] {
        &mut self.data
    }

    /// Iterates over `(k1, k2, coefficient)` for every stored mode except `(0, 0)`.
    pub fn iter_modes(&self) -> impl Iterator<Item = (i64, i64, [Complex64; 2])> + '_ {
        self.data.iter().enumerate().filter_map(move |(i, v)| {
            let (k1, k2) = self.mode_at(i);
            if k1 == 0 && k2 == 0 {
                None
            } else {
                Some((k1, k2, *v))
            }
        })
    }

    /// `Re sum_k a_k . conj(b_k)`.
    pub fn inner(&self, other: &VectorModes) -> f64 {
        debug_assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a[0] * b[0].conj() + a[1] * b[1].conj()).re)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.data
            .iter()
            .map(|a| a[0].norm_sqr() + a[1].norm_sqr())
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|a| a[0].norm().max(a[1].norm()))
            .fold(0.0, f64::max)
    }

    /// Largest deviation from `a_{-k} = conj(a_k)`.
    pub fn reality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (k1, k2, v) in self.iter_modes() {
            let w = self.get(-k1, -k2);
            worst = worst
                .max((v[0] - w[0].conj()).norm())
                .max((v[1] - w[1].conj()).norm());
        }
        worst
    }

    /// Replaces each pair `(a_k, a_{-k})` by its Hermitian part.
    pub fn symmetrize(&mut self) {
        for idx in 0..self.data.len() {
            let (k1, k2) = self.mode_at(idx);
            if k1 > 0 || (k1 == 0 && k2 > 0) {
                let j = self.index(-k1, -k2);
                let a = self.data[idx];
                let b = self.data[j];
                let s = [
                    (a[0] + b[0].conj()) * 0.5,
                    (a[1] + b[1].conj()) * 0.5,
                ];
                self.data[idx] = s;
                self.data[j] = [s[0].conj(), s[1].conj()];
            }
        }
        let z = self.index(0, 0);
        self.data[z] = [Complex64::new(self.data[z][0].re, 0.0), Complex64::new(self.data[z][1].re, 0.0)];
    }

    /// Copies into a table with cutoff `n`, zero-padding or truncating.
    pub fn resampled(&self, n: usize) -> VectorModes {
        let mut out = VectorModes::zeros(n);
        let m = self.n.min(n) as i64;
        for k1 in -m..=m {
            for k2 in -m..=m {
                out.set(k1, k2, self.get(k1, k2));
            }
        }
        out
    }

    pub fn axpy(&mut self, a: f64, x: &VectorModes) {
        debug_assert_eq!(self.n, x.n);
        for (y, x) in self.data.iter_mut().zip(&x.data) {
            y[0] += x[0] * a;
            y[1] += x[1] * a;
        }
    }

    pub fn scale(&mut self, a: f64) {
        for y in &mut self.data {
            y[0] *= a;
            y[1] *= a;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|v| v[0].re.is_finite() && v[0].im.is_finite() && v[1].re.is_finite() && v[1].im.is_finite())
    }
}

/// Divergence-free, real, mean-zero velocity field in `H_n`.
///
/// Coefficients are with respect to the orthonormal basis
/// `e_k(x) = exp(i kappa(k) . x) / sqrt(|O|)`, so `|u|_H` is the plain
/// coefficient l2 norm. Values are only produced by the Leray projection or by
/// linear combinations of valid fields.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField(VectorModes);

impl SpectralField {
    pub fn zeros(n: usize) -> Self {
        Self(VectorModes::zeros(n))
    }

    /// Wraps coefficients the caller guarantees are already projected.
    pub(crate) fn from_projected(modes: VectorModes) -> Self {
        Self(modes)
    }

    pub fn modes(&self) -> &VectorModes {
        &self.0
    }

    pub fn into_modes(self) -> VectorModes {
        self.0
    }

    pub fn h_norm(&self) -> f64 {
        self.0.norm_sq().sqrt()
    }

    pub fn h_norm_sq(&self) -> f64 {
        self.0.norm_sq()
    }

    /// `(u, v)_H`.
    pub fn inner(&self, other: &SpectralField) -> f64 {
        self.0.inner(&other.0)
    }

    pub fn add(&self, other: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out.0.axpy(1.0, &other.0);
        out
    }

    pub fn sub(&self, other: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out.0.axpy(-1.0, &other.0);
        out
    }

    pub fn scaled(&self, a: f64) -> SpectralField {
        let mut out = self.clone();
        out.0.scale(a);
        out
    }

    pub fn axpy(&mut self, a: f64, x: &SpectralField) {
        self.0.axpy(a, &x.0);
    }

    /// The same function represented with cutoff `n` (padding or truncating;
    /// truncation is the orthogonal projection `P_n`).
    pub fn resampled(&self, n: usize) -> SpectralField {
        let mut m = self.0.resampled(n);
        let z = m.index(0, 0);
        m.data_mut()[z] = [Complex64::new(0.0, 0.0); 2];
        SpectralField(m)
    }
}

impl Deref for SpectralField {
    type Target = VectorModes;
    fn deref(&self) -> &VectorModes {
        &self.0
    }
}

/// Element of `V'` sharing the mode layout of [`SpectralField`]; paired with
/// velocity fields by `<f, v> = Re sum f_k . conj(v_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualField(VectorModes);

impl DualField {
    pub fn zeros(n: usize) -> Self {
        Self(VectorModes::zeros(n))
    }

    pub fn from_modes(mut modes: VectorModes) -> Self {
        let z = modes.index(0, 0);
        modes.data_mut()[z] = [Complex64::new(0.0, 0.0); 2];
        modes.symmetrize();
        Self(modes)
    }

    pub(crate) fn from_projected(modes: VectorModes) -> Self {
        Self(modes)
    }

    pub fn modes(&self) -> &VectorModes {
        &self.0
    }

    pub fn into_modes(self) -> VectorModes {
        self.0
    }

    pub fn pair(&self, v: &SpectralField) -> f64 {
        self.0.inner(v.modes())
    }

    pub fn resampled(&self, n: usize) -> DualField {
        DualField(self.0.resampled(n))
    }

    pub fn scaled(&self, a: f64) -> DualField {
        let mut m = self.0.clone();
        m.scale(a);
        DualField(m)
    }
}

impl Deref for DualField {
    type Target = VectorModes;
    fn deref(&self) -> &VectorModes {
        &self.0
    }
}
