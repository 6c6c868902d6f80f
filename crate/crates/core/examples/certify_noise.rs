//! Certifies three noise models and prints the verified budget constants.
//!
//! `cargo run --example certify_noise`

use snsim::noise::{certify, CoefField, NoiseChannel, NoiseModel};
use snsim::spectral::Domain;

pub fn run_example() -> snsim::Result<()> {
    let d = Domain::periodic_2pi(8);
    let models = [
        ("multiplicative c = 0.8", NoiseModel::multiplicative(0.8)),
        ("transport b = (0.6, 0)", NoiseModel::advective_x(0.6)),
        (
            "variable transport",
            NoiseModel::new(vec![NoiseChannel {
                bx: CoefField::constant(0.5).with_mode([1, 0], 0.3, 0.0),
                by: CoefField::default().with_mode([0, 1], 0.0, 0.4),
                c: CoefField::constant(0.1),
            }]),
        ),
    ];
    println!("{:<24} {:>6} {:>10} {:>6} {:>8} {:>8} {:>8}", "model", "eta", "lambda0", "rho", "a_hat", "L_hat", "p <");
    for (name, m) in models {
        let r = certify(&m, &d, 1)?;
        let b = r.budget;
        println!(
            "{name:<24} {:>6.2} {:>10.4} {:>6.2} {:>8.4} {:>8.4} {:>8.3}  pass={}",
            b.eta,
            b.lambda0,
            b.rho,
            r.ellipticity.a_hat,
            r.lipschitz.l_hat,
            b.p_upper(),
            r.pass
        );
    }
    Ok(())
}

fn main() -> snsim::Result<()> {
    run_example()
}
