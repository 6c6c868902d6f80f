use crate::spectral::{Space, SpectralField};

#[derive(Debug, Clone, PartialEq)]
pub enum ObservableKind {
    /// `tanh(<u, h> / scale)`.
    Tanh { probe: SpectralField, scale: f64 },
    /// Product of cylindrical observables; the empty product is 1.
    Product(Vec<Observable>),
    /// Smoothed indicator `s(r) = (1 - tanh((r - radius) / width)) / 2` of
    /// `r = (sum_j <u, h_j>^2)^(1/2)`.
    Radial {
        probes: Vec<SpectralField>,
        radius: f64,
        width: f64,
    },
    /// `|u|_H^2`.
    HNormSq,
    /// `||u||^2`.
    VNormSq,
}

/// A real function of the state. Cylindrical kinds depend on finitely many
/// inner products and are bounded, hence sequentially weakly continuous.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    pub name: String,
    pub kind: ObservableKind,
}

impl Observable {
    pub fn tanh(name: &str, probe: SpectralField, scale: f64) -> Self {
        Self {
            name: name.into(),
            kind: ObservableKind::Tanh { probe, scale },
        }
    }

    pub fn product(name: &str, factors: Vec<Observable>) -> Self {
        Self {
            name: name.into(),
            kind: ObservableKind::Product(factors),
        }
    }

    pub fn radial(name: &str, probes: Vec<SpectralField>, radius: f64, width: f64) -> Self {
        Self {
            name: name.into(),
            kind: ObservableKind::Radial { probes, radius, width },
        }
    }

    pub fn h_norm_sq() -> Self {
        Self {
            name: "h_norm_sq".into(),
            kind: ObservableKind::HNormSq,
        }
    }

    pub fn v_norm_sq() -> Self {
        Self {
            name: "v_norm_sq".into(),
            kind: ObservableKind::VNormSq,
        }
    }

    pub fn is_cylindrical(&self) -> bool {
        match &self.kind {
            ObservableKind::Tanh { .. } | ObservableKind::Radial { .. } => true,
            ObservableKind::Product(f) => f.iter().all(|o| o.is_cylindrical()),
            ObservableKind::HNormSq | ObservableKind::VNormSq => false,
        }
    }

    /// `sup |phi|`, or `None` for norm functionals.
    pub fn bound(&self) -> Option<f64> {
        match &self.kind {
            ObservableKind::Tanh { .. } | ObservableKind::Radial { .. } => Some(1.0),
            ObservableKind::Product(f) => f.iter().map(|o| o.bound()).product(),
            ObservableKind::HNormSq | ObservableKind::VNormSq => None,
        }
    }

    pub fn eval(&self, space: &Space, u: &SpectralField) -> f64 {
        match &self.kind {
            ObservableKind::Tanh { probe, scale } => (u.inner(probe) / scale).tanh(),
            ObservableKind::Product(f) => f.iter().map(|o| o.eval(space, u)).product(),
            ObservableKind::Radial { probes, radius, width } => {
                let r = probes.iter().map(|h| u.inner(h).powi(2)).sum::<f64>().sqrt();
                0.5 * (1.0 - ((r - radius) / width).tanh())
            }
            ObservableKind::HNormSq => u.h_norm_sq(),
            ObservableKind::VNormSq => space.v_seminorm_sq(u),
        }
    }

    /// Six bounded cylindrical observables on the lowest modes, with
    /// arguments scaled by `scale` (a typical coefficient size).
    pub fn catalog(space: &Space, scale: f64) -> Vec<Observable> {
        let e = |k1, k2, ph| space.single_mode(k1, k2, 1.0, ph);
        let t10 = Observable::tanh("tanh_10", e(1, 0, 0.0), scale);
        let t01 = Observable::tanh("tanh_01", e(0, 1, 0.0), scale);
        let mut broad = e(1, 1, 0.0).add(&e(1, -1, 0.3));
        broad.axpy(0.5, &e(2, 1, 1.1));
        vec![
            t10.clone(),
            t01.clone(),
            Observable::tanh("tanh_11", e(1, 1, 0.7), scale),
            Observable::product("tanh_10_x_tanh_01", vec![t10, t01]),
            Observable::radial(
                "radial_low",
                vec![e(1, 0, 0.0), e(1, 0, 0.5 * std::f64::consts::PI), e(0, 1, 0.0), e(0, 1, 0.5 * std::f64::consts::PI)],
                scale,
                0.5 * scale,
            ),
            Observable::tanh("tanh_broad", broad, 2.0 * scale),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Domain;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    proptest! {
        #[test]
        fn catalog_is_bounded(seed in any::<u64>(), norm in 0.0f64..100.0) {
            let s = Space::new(Domain::periodic_2pi(4)).unwrap();
            let u = s.random_field(&mut ChaCha8Rng::seed_from_u64(seed), 1.0, norm);
            for o in Observable::catalog(&s, 0.7) {
                prop_assert!(o.is_cylindrical());
                prop_assert!(o.eval(&s, &u).abs() <= o.bound().unwrap());
            }
        }
    }

    #[test]
    fn empty_product_and_norms() {
        let s = Space::new(Domain::periodic_2pi(3)).unwrap();
        let u = s.single_mode(1, 2, 2.0, 0.0);
        assert_eq!(Observable::product("one", vec![]).eval(&s, &u), 1.0);
        assert!((Observable::h_norm_sq().eval(&s, &u) - 4.0).abs() < 1e-14);
        assert!((Observable::v_norm_sq().eval(&s, &u) - 20.0).abs() < 1e-13);
        assert_eq!(Observable::h_norm_sq().bound(), None);
        let h = s.single_mode(1, 2, 1.0, 0.0);
        let t = Observable::tanh("t", h, 4.0);
        assert!((t.eval(&s, &u) - 0.5f64.tanh()).abs() < 1e-15);
    }
}
