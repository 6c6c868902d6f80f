//! Numerical certification of the noise conditions (linear growth into V',
//! Lipschitz into Hilbert-Schmidt, dissipativity budget, local continuity)
//! and of the ellipticity bound for the `b_i`.
//!
//! Everything here is sample-based: the inequalities are checked on probe
//! fields (all single Fourier modes of a half-plane plus random fields), and
//! constants are the tightest values consistent with those probes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::columns::NoiseOperator;
use super::model::{Budget, Certificate, NoiseModel};
use crate::error::{Error, Result};
use crate::spectral::{Domain, Space, SpectralField};

/// Relative round-off allowance when comparing both sides of the budget.
const G3_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct G1Report {
    /// Smallest `C` with `|G(u)|^2_{HS(K,V')} <= C (1 + |u|_H^2)` on all samples.
    pub c_hat: f64,
    /// Same fit on the first half of the samples.
    pub c_hat_half: f64,
    pub pass: bool,
}

/// Linear growth into `V'`. Passes when the fitted constant is finite and
/// moves by at most 10% between half and full sample sets.
pub fn verify_g1(space: &Space, op: &NoiseOperator, samples: &[SpectralField]) -> Result<G1Report> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let ratios: Vec<f64> = samples
        .iter()
        .map(|u| op.hs_vprime_sq(space, u) / (1.0 + u.h_norm_sq()))
        .collect();
    let half = (ratios.len() / 2).max(1);
    let c_hat = ratios.iter().cloned().fold(0.0, f64::max);
    let c_hat_half = ratios[..half].iter().cloned().fold(0.0, f64::max);
    let stable = c_hat == 0.0 || (c_hat - c_hat_half) <= 0.1 * c_hat;
    Ok(G1Report {
        c_hat,
        c_hat_half,
        pass: c_hat.is_finite() && stable,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct G3Report {
    pub violations: usize,
    /// `min over samples of (budget - hs)`; negative when violated.
    pub margin: f64,
    pub samples: usize,
}

impl G3Report {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// Checks `|G(u)|^2_{HS} <= (2 - eta) ||u||^2 + lambda0 |u|^2 + rho` samplewise.
pub fn verify_g3(
    space: &Space,
    op: &NoiseOperator,
    budget: Budget,
    samples: &[SpectralField],
) -> Result<G3Report> {
    budget.validate()?;
    let mut violations = 0;
    let mut margin = f64::INFINITY;
    for u in samples {
        let hs = op.hs_norm_sq(space, u);
        let rhs = budget.bound(space.v_seminorm_sq(u), u.h_norm_sq());
        let gap = rhs - hs;
        if gap < -G3_RTOL * rhs.abs().max(hs).max(1.0) {
            violations += 1;
        }
        margin = margin.min(gap);
    }
    Ok(G3Report {
        violations,
        margin: if samples.is_empty() { 0.0 } else { margin },
        samples: samples.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticityReport {
    /// `2 - max_x lambda_max(sum_i b_i b_i^T)`.
    pub a_hat: f64,
    pub grid: usize,
    pub pass: bool,
}

pub fn verify_ellipticity(model: &NoiseModel, d: &Domain) -> EllipticityReport {
    verify_ellipticity_on(model, d, model.eval_grid_size())
}

pub fn verify_ellipticity_on(model: &NoiseModel, d: &Domain, grid: usize) -> EllipticityReport {
    let mut worst: f64 = 0.0;
    for j1 in 0..grid {
        let x = j1 as f64 * d.lx / grid as f64;
        for j2 in 0..grid {
            let y = j2 as f64 * d.ly / grid as f64;
            let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
            for ch in &model.channels {
                let [b1, b2] = ch.b_at(d, x, y);
                a += b1 * b1;
                b += b1 * b2;
                c += b2 * b2;
            }
            let tr = a + c;
            let disc = ((a - c) * (a - c) + 4.0 * b * b).sqrt();
            worst = worst.max(0.5 * (tr + disc));
        }
    }
    let a_hat = 2.0 - worst;
    EllipticityReport {
        a_hat,
        grid,
        pass: a_hat > 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    /// `sup |G(u) - G(v)|_{HS(K,H)} / ||u - v||` over the sampled pairs.
    pub l_hat: f64,
    /// Pathwise-uniqueness regime `L < sqrt(2)`.
    pub below_sqrt2: bool,
}

pub fn estimate_lipschitz(
    space: &Space,
    op: &NoiseOperator,
    pairs: &[(SpectralField, SpectralField)],
) -> Result<LipschitzReport> {
    if pairs.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut l_hat: f64 = 0.0;
    for (u, v) in pairs {
        let w = u.sub(v);
        let vn = space.v_seminorm(&w);
        if vn > 0.0 {
            l_hat = l_hat.max(op.hs_norm_sq(space, &w).sqrt() / vn);
        }
    }
    Ok(LipschitzReport {
        l_hat,
        below_sqrt2: l_hat < 2f64.sqrt(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct G4Report {
    /// `max_psi |psi**G(u_j) - psi**G(u)|_{K'}` per perturbation.
    pub deviations: Vec<f64>,
    /// `p_R(u_j - u)` per perturbation.
    pub local_distances: Vec<f64>,
    pub monotone: bool,
    pub pass: bool,
}

/// Continuity of the tested noise `u -> (<g_i(u), psi>)_i` along a sequence
/// `u_j = u + w_j`.
///
/// Passes when the deviations are nonincreasing and the last one is at most
/// half the first (or all vanish).
pub fn verify_g4_continuity(
    space: &Space,
    op: &NoiseOperator,
    u: &SpectralField,
    perturbations: &[SpectralField],
    psis: &[SpectralField],
    region: usize,
) -> Result<G4Report> {
    let base = op.columns(space, u);
    let mut deviations = Vec::with_capacity(perturbations.len());
    let mut local_distances = Vec::with_capacity(perturbations.len());
    for w in perturbations {
        let uj = u.add(w);
        let cols = op.columns(space, &uj);
        let mut dev: f64 = 0.0;
        for psi in psis {
            let s: f64 = cols
                .0
                .iter()
                .zip(&base.0)
                .map(|(a, b)| (a.inner(psi) - b.inner(psi)).powi(2))
                .sum();
            dev = dev.max(s.sqrt());
        }
        deviations.push(dev);
        local_distances.push(space.local_seminorm(w, region)?);
    }
    let monotone = deviations
        .windows(2)
        .all(|p| p[1] <= p[0] * (1.0 + 1e-12) + 1e-300);
    let decays = match (deviations.first(), deviations.last()) {
        (Some(&f), Some(&l)) => f == 0.0 || l <= 0.5 * f,
        _ => true,
    };
    Ok(G4Report {
        deviations,
        local_distances,
        monotone,
        pass: monotone && decays,
    })
}

/// Probe fields: every single mode of the upper half-plane with amplitude
/// `amplitude`, plus `random` random fields with the same H norm.
pub fn probe_fields(space: &Space, seed: u64, random: usize, amplitude: f64) -> Vec<SpectralField> {
    let n = space.cutoff() as i64;
    let mut out = Vec::new();
    for k1 in 0..=n {
        for k2 in -n..=n {
            if k1 > 0 || k2 > 0 {
                out.push(space.single_mode(k1, k2, amplitude, 0.0));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for j in 0..random {
        let slope = [0.0, 1.0, 2.0][j % 3];
        out.push(space.random_field(&mut rng, slope, amplitude));
    }
    out
}

/// Least `lambda0 >= 0` making the budget hold with `rho = 0` on the probes.
fn least_lambda0(space: &Space, op: &NoiseOperator, eta: f64, probes: &[(f64, f64, f64)]) -> f64 {
    let _ = (space, op);
    let mut need: f64 = 0.0;
    for &(hs, v2, h2) in probes {
        if h2 > 0.0 {
            let excess = hs - (2.0 - eta) * v2;
            if excess > G3_RTOL * hs.max(v2).max(1.0) {
                need = need.max(excess / h2);
            }
        }
    }
    need
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub m: usize,
    pub c1: f64,
    pub ellipticity: EllipticityReport,
    pub budget: Budget,
    /// `declared` when taken from the model file, `search` otherwise.
    pub budget_source: String,
    pub g1: G1Report,
    pub g3: G3Report,
    pub lipschitz: LipschitzReport,
    pub probes: usize,
    pub pass: bool,
}

impl CertificationReport {
    pub fn certificate(&self) -> Certificate {
        Certificate {
            c1: self.c1,
            a_hat: self.ellipticity.a_hat,
            eta: self.budget.eta,
            lambda0: self.budget.lambda0,
            rho: self.budget.rho,
            l_hat: self.lipschitz.l_hat,
        }
    }
}

/// Budget search grid over `eta`, largest first.
pub fn eta_grid() -> Vec<f64> {
    (0..40).map(|j| 2.0 - 0.05 * j as f64).collect()
}

/// Certifies a model on `domain`.
///
/// A declared budget is verified on the probes. Otherwise the search walks
/// `eta` down from 2 and, for each value, computes the least `lambda0` (with
/// `rho = 0`, sufficient for the linear class) on probes at cutoff `n` and
/// `2n`; the first `eta` whose `lambda0` does not grow under mode doubling
/// (within 10%) is kept. A `lambda0` that grows with the cutoff cannot hold on
/// all of `V`.
pub fn certify(model: &NoiseModel, domain: &Domain, seed: u64) -> Result<CertificationReport> {
    let space = Space::new(domain.clone())?;
    let op = NoiseOperator::new(model, &space)?;
    let probes = probe_fields(&space, seed, 24, 1.0);
    let stats = |s: &Space, o: &NoiseOperator, p: &[SpectralField]| -> Vec<(f64, f64, f64)> {
        p.iter()
            .map(|u| (o.hs_norm_sq(s, u), s.v_seminorm_sq(u), u.h_norm_sq()))
            .collect()
    };

    let (budget, source) = match model.budget {
        Some(b) => {
            b.validate()?;
            (b, "declared")
        }
        None => {
            let mut doubled = domain.clone();
            doubled.cutoff *= 2;
            let space2 = Space::new(doubled)?;
            let op2 = NoiseOperator::new(model, &space2)?;
            let probes2 = probe_fields(&space2, seed ^ 0x9e37_79b9, 24, 1.0);
            let s1 = stats(&space, &op, &probes);
            let s2 = stats(&space2, &op2, &probes2);
            let mut found = None;
            for eta in eta_grid() {
                let l1 = least_lambda0(&space, &op, eta, &s1);
                let l2 = least_lambda0(&space2, &op2, eta, &s2);
                if l2 <= 1.1 * l1 + 1e-12 {
                    found = Some(Budget {
                        eta,
                        lambda0: l1,
                        rho: 0.0,
                    });
                    break;
                }
            }
            let b = found.ok_or_else(|| {
                Error::Precondition(
                    "no eta in (0, 2] admits a cutoff-independent lambda0".into(),
                )
            })?;
            (b, "search")
        }
    };

    let g3 = verify_g3(&space, &op, budget, &probes)?;
    let big: Vec<SpectralField> = probes.iter().map(|u| u.scaled(10.0)).collect();
    let g1 = verify_g1(&space, &op, &big)?;
    let zero = SpectralField::zeros(space.cutoff());
    let pairs: Vec<_> = probes.iter().map(|u| (u.clone(), zero.clone())).collect();
    let lipschitz = estimate_lipschitz(&space, &op, &pairs)?;
    let ellipticity = verify_ellipticity(model, domain);
    let pass = g3.pass() && g1.pass && (ellipticity.pass || model.is_gradient_free());
    Ok(CertificationReport {
        m: model.m(),
        c1: model.c1(domain),
        ellipticity,
        budget,
        budget_source: source.into(),
        g1,
        g3,
        lipschitz,
        probes: probes.len(),
        pass,
    })
}

/// Certifies `model` and returns it with the certificate attached.
pub fn certified(model: &NoiseModel, domain: &Domain, seed: u64) -> Result<NoiseModel> {
    let r = certify(model, domain, seed)?;
    if !r.pass {
        return Err(Error::Precondition(format!(
            "noise certification failed: budget violations = {}, linear growth pass = {}, a_hat = {}",
            r.g3.violations, r.g1.pass, r.ellipticity.a_hat
        )));
    }
    let mut m = model.clone();
    m.certified = Some(r.certificate());
    Ok(m)
}

/// Relative change of `sum_i |g_i(u)|^2` when the channel count is doubled
/// from `m`, maximised over samples.
pub fn truncation_change(
    space: &Space,
    model: &NoiseModel,
    m: usize,
    samples: &[SpectralField],
) -> Result<f64> {
    let small = NoiseOperator::new(&model.truncated(m), space)?;
    let large = NoiseOperator::new(&model.truncated(2 * m), space)?;
    let mut worst: f64 = 0.0;
    for u in samples {
        let a = small.hs_norm_sq(space, u);
        let b = large.hs_norm_sq(space, u);
        if b > 0.0 {
            worst = worst.max((b - a).abs() / b);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::model::{CoefField, NoiseChannel};

    fn space(n: usize) -> Space {
        Space::new(Domain::periodic_2pi(n)).unwrap()
    }

    #[test]
    fn g3_multiplicative_equality() {
        let s = space(6);
        let c = 0.8;
        let op = NoiseOperator::new(&NoiseModel::multiplicative(c), &s).unwrap();
        let probes = probe_fields(&s, 3, 10, 1.7);
        let b = Budget { eta: 2.0, lambda0: c * c, rho: 0.0 };
        let r = verify_g3(&s, &op, b, &probes).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.margin.abs() < 1e-12, "{}", r.margin);
    }

    #[test]
    fn g3_advective_and_underbudgeted() {
        let s = space(6);
        let beta: f64 = 0.9;
        let op = NoiseOperator::new(&NoiseModel::advective_x(beta), &s).unwrap();
        let probes = probe_fields(&s, 4, 10, 1.0);
        let ok = Budget { eta: 2.0 - beta * beta, lambda0: 0.0, rho: 0.0 };
        assert_eq!(verify_g3(&s, &op, ok, &probes).unwrap().violations, 0);
        // Mode (1, 0) has hs = beta^2 ||u||^2, above (2 - eta) ||u||^2.
        let bad = Budget { eta: 2.0 - 0.5 * beta * beta, lambda0: 0.0, rho: 0.0 };
        let r = verify_g3(&s, &op, bad, &[s.single_mode(1, 0, 1.0, 0.0)]).unwrap();
        assert_eq!(r.violations, 1);
        assert!(r.margin < 0.0);
        assert!(verify_g3(&s, &op, Budget { eta: 2.5, lambda0: 0.0, rho: 0.0 }, &probes).is_err());
    }

    #[test]
    fn g1_multiplicative_matches_poincare_chain() {
        let d = Domain::new(3.0, 4.0, 5, vec![]).unwrap();
        let s = Space::new(d.clone()).unwrap();
        let c = 0.6;
        let op = NoiseOperator::new(&NoiseModel::multiplicative(c), &s).unwrap();
        let samples: Vec<_> = probe_fields(&s, 5, 8, 10.0);
        let r = verify_g1(&s, &op, &samples).unwrap();
        let want = c * c / d.poincare_constant();
        assert!((r.c_hat - want).abs() <= 0.2 * want, "{} vs {}", r.c_hat, want);
        assert!(r.pass);
        let z = NoiseOperator::new(&NoiseModel::zero(2), &s).unwrap();
        assert_eq!(verify_g1(&s, &z, &samples).unwrap().c_hat, 0.0);
        assert!(verify_g1(&s, &z, &[]).is_err());
    }

    #[test]
    fn g1_advective_is_finite_and_stable() {
        let s = space(6);
        let op = NoiseOperator::new(&NoiseModel::advective_x(0.7), &s).unwrap();
        let mut samples = probe_fields(&s, 6, 0, 10.0);
        samples.extend(probe_fields(&s, 6, 0, 10.0));
        let r = verify_g1(&s, &op, &samples).unwrap();
        assert!(r.pass && r.c_hat.is_finite() && r.c_hat > 0.0);
    }

    #[test]
    fn ellipticity_cases() {
        let d = Domain::periodic_2pi(4);
        assert_eq!(verify_ellipticity(&NoiseModel::zero(3), &d).a_hat, 2.0);
        let beta: f64 = 0.8;
        let r = verify_ellipticity(&NoiseModel::advective_x(beta), &d);
        assert!((r.a_hat - (2.0 - beta * beta)).abs() < 1e-10);
        assert!(r.pass);
    }

    #[test]
    fn ellipticity_variable_channels_match_dense_grid() {
        let d = Domain::periodic_2pi(4);
        let m = NoiseModel::new(vec![
            NoiseChannel {
                bx: CoefField::constant(0.3).with_mode([1, 0], 0.4, 0.0),
                by: CoefField::default().with_mode([0, 1], 0.0, 0.3),
                ..Default::default()
            },
            NoiseChannel {
                by: CoefField::constant(0.2).with_mode([1, 1], 0.2, 0.1),
                ..Default::default()
            },
        ]);
        let coarse = verify_ellipticity(&m, &d);
        let dense = verify_ellipticity_on(&m, &d, 512);
        assert!((coarse.a_hat - dense.a_hat).abs() < 1e-3);
    }

    #[test]
    fn lipschitz_per_mode_formulas() {
        let d = Domain::new(2.0, 3.0, 5, vec![]).unwrap();
        let s = Space::new(d.clone()).unwrap();
        let zero = SpectralField::zeros(5);
        let pairs: Vec<_> = probe_fields(&s, 1, 0, 1.0)
            .into_iter()
            .map(|u| (u, zero.clone()))
            .collect();
        let c = 0.5;
        let op = NoiseOperator::new(&NoiseModel::multiplicative(c), &s).unwrap();
        let l = estimate_lipschitz(&s, &op, &pairs).unwrap();
        assert!((l.l_hat - c / d.poincare_constant().sqrt()).abs() < 1e-12);
        let op = NoiseOperator::new(&NoiseModel::advective_x(1.2), &s).unwrap();
        let l = estimate_lipschitz(&s, &op, &pairs).unwrap();
        assert!((l.l_hat - 1.2).abs() < 1e-12 && l.below_sqrt2);
        let op = NoiseOperator::new(&NoiseModel::zero(1), &s).unwrap();
        assert_eq!(estimate_lipschitz(&s, &op, &pairs).unwrap().l_hat, 0.0);
        assert!(estimate_lipschitz(&s, &op, &[]).is_err());
    }

    #[test]
    fn certify_multiplicative_and_advective() {
        let d = Domain::periodic_2pi(6);
        let c = 0.7;
        let r = certify(&NoiseModel::multiplicative(c), &d, 1).unwrap();
        assert_eq!(r.budget.eta, 2.0);
        assert!((r.budget.lambda0 - c * c).abs() < 1e-12);
        assert_eq!(r.budget.rho, 0.0);
        assert!(r.pass);
        let beta: f64 = 0.5f64.sqrt();
        let r = certify(&NoiseModel::advective_x(beta), &d, 1).unwrap();
        assert!((r.budget.eta - 1.5).abs() < 1e-12, "{:?}", r.budget);
        assert_eq!(r.budget.lambda0, 0.0);
        assert!((r.ellipticity.a_hat - 1.5).abs() < 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn certify_checks_declared_budget() {
        let d = Domain::periodic_2pi(4);
        let m = NoiseModel::advective_x(1.0).with_budget(Budget { eta: 1.9, lambda0: 0.0, rho: 0.0 });
        let r = certify(&m, &d, 2).unwrap();
        assert_eq!(r.budget_source, "declared");
        assert!(!r.pass && r.g3.violations > 0);
    }

    #[test]
    fn g4_high_frequency_perturbations() {
        let d = Domain::periodic_2pi(8).with_local_radii(vec![1.0, 2.0]).unwrap();
        let s = Space::new(d).unwrap();
        let model = NoiseModel::new(vec![
            NoiseChannel::advective(0.6, 0.2),
            NoiseChannel::multiplicative(0.3),
        ]);
        let op = NoiseOperator::new(&model, &s).unwrap();
        let u = s.single_mode(1, 1, 1.0, 0.2);
        // psi with a slowly decaying spectrum couples to every mode.
        let psi = s.from_stream_function(|k1, k2| {
            let k2n = (k1 * k1 + k2 * k2) as f64;
            num_complex::Complex64::new(1.0 / k2n.powf(1.5), 0.0)
        });
        let eps = 0.3;
        let ks: Vec<i64> = (1..=8).collect();
        let perts: Vec<_> = ks.iter().map(|&k| s.single_mode(k, 0, eps, 0.0)).collect();
        let r = verify_g4_continuity(&s, &op, &u, &perts, std::slice::from_ref(&psi), 0).unwrap();
        // Explicit pairing: <g_i(w), psi> = Re sum (i b.kappa + c) w_k conj(psi_k).
        for (j, &k) in ks.iter().enumerate() {
            let w = &perts[j];
            let mut s2 = 0.0;
            for (bx, by, c) in [(0.6, 0.2, 0.0), (0.0, 0.0, 0.3)] {
                let mut acc = 0.0;
                for kk in [k, -k] {
                    let [kx, ky] = s.domain().wavevector(kk, 0);
                    let mult = num_complex::Complex64::new(c, bx * kx + by * ky);
                    let a = w.get(kk, 0);
                    let p = psi.get(kk, 0);
                    acc += (mult * a[0] * p[0].conj() + mult * a[1] * p[1].conj()).re;
                }
                s2 += acc * acc;
            }
            assert!((r.deviations[j] - s2.sqrt()).abs() < 1e-12 * (1.0 + s2.sqrt()));
        }
        assert!(r.monotone && r.pass, "{:?}", r.deviations);

        // Constant sequence: zero deviation.
        let zero = vec![SpectralField::zeros(8); 3];
        let r0 = verify_g4_continuity(&s, &op, &u, &zero, &[psi], 0).unwrap();
        assert!(r0.deviations.iter().all(|&x| x == 0.0) && r0.pass);
    }

    #[test]
    fn g4_detects_localised_perturbation() {
        let d = Domain::periodic_2pi(10).with_local_radii(vec![1.5]).unwrap();
        let s = Space::new(d).unwrap();
        let op = NoiseOperator::new(&NoiseModel::multiplicative(0.5), &s).unwrap();
        let centre = std::f64::consts::PI;
        let bump = |amp: f64| {
            s.from_stream_function(move |k1, k2| {
                let r2 = (k1 * k1 + k2 * k2) as f64;
                let phase = -(k1 as f64 + k2 as f64) * centre;
                num_complex::Complex64::from_polar(amp * (-0.15 * r2).exp(), phase)
            })
        };
        let w = bump(1.0);
        let psi = w.clone();
        let u = SpectralField::zeros(10);
        let perts = vec![w.clone(), w.clone(), w.clone()];
        let r = verify_g4_continuity(&s, &op, &u, &perts, &[psi], 0).unwrap();
        assert!(r.deviations.iter().all(|&x| x > 0.1 * w.h_norm_sq()));
        assert!(r.local_distances.iter().all(|&p| p > 0.5 * w.h_norm()));
        assert!(!r.pass);
    }

    #[test]
    fn truncation_change_is_zero_for_finite_models() {
        let s = space(4);
        let model = NoiseModel::new(vec![NoiseChannel::multiplicative(0.2), NoiseChannel::advective(0.1, 0.0)]);
        let samples = probe_fields(&s, 1, 4, 1.0);
        assert_eq!(truncation_change(&s, &model, 2, &samples).unwrap(), 0.0);
        assert!(truncation_change(&s, &model, 1, &samples).unwrap() > 0.0);
    }
}
