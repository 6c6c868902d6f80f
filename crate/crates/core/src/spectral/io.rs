//! Field serialisation: CSV rows `k1,k2,re_u1,im_u1,re_u2,im_u2` or the same
//! row layout as flat little-endian binary (two `i64` then four `f64`).

use std::io::{BufRead, Read, Write};

use num_complex::Complex64;

use super::field::VectorModes;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "k1,k2,re_u1,im_u1,re_u2,im_u2";
const ROW_BYTES: usize = 2 * 8 + 4 * 8;

pub fn write_csv<W: Write>(m: &VectorModes, mut w: W) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for (k1, k2, v) in m.iter_modes() {
        writeln!(
            w,
            "{},{},{:e},{:e},{:e},{:e}",
            k1, k2, v[0].re, v[0].im, v[1].re, v[1].im
        )?;
    }
    Ok(())
}

fn assemble(rows: Vec<(i64, i64, [Complex64; 2])>) -> Result<VectorModes> {
    let n = rows
        .iter()
        .map(|(a, b, _)| a.abs().max(b.abs()))
        .max()
        .ok_or_else(|| Error::Format("no modes".into()))? as usize;
    let mut m = VectorModes::zeros(n);
    for (k1, k2, v) in rows {
        m.set(k1, k2, v);
    }
    Ok(m)
}

/// Reads CSV rows; the cutoff is the largest `max(|k1|, |k2|)` present and
/// absent modes are zero.
pub fn read_csv<R: BufRead>(r: R) -> Result<VectorModes> {
    let mut rows = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with("k1")) {
            continue;
        }
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(Error::Format(format!(
                "line {}: expected 6 columns, got {}",
                lineno + 1,
                parts.len()
            )));
        }
        let bad = |what: &str| Error::Format(format!("line {}: bad {what}", lineno + 1));
        let k1: i64 = parts[0].parse().map_err(|_| bad("k1"))?;
        let k2: i64 = parts[1].parse().map_err(|_| bad("k2"))?;
        let mut f = [0.0; 4];
        for (i, slot) in f.iter_mut().enumerate() {
            *slot = parts[2 + i].parse().map_err(|_| bad("coefficient"))?;
        }
        rows.push((
            k1,
            k2,
            [Complex64::new(f[0], f[1]), Complex64::new(f[2], f[3])],
        ));
    }
    assemble(rows)
}

pub fn write_binary<W: Write>(m: &VectorModes, mut w: W) -> Result<()> {
    for (k1, k2, v) in m.iter_modes() {
        w.write_all(&k1.to_le_bytes())?;
        w.write_all(&k2.to_le_bytes())?;
        for x in [v[0].re, v[0].im, v[1].re, v[1].im] {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R) -> Result<VectorModes> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() % ROW_BYTES != 0 {
        return Err(Error::Format(format!(
            "binary length {} is not a multiple of {ROW_BYTES}",
            bytes.len()
        )));
    }
    let rows = bytes
        .chunks_exact(ROW_BYTES)
        .map(|c| {
            let i = |o: usize| i64::from_le_bytes(c[o..o + 8].try_into().unwrap());
            let f = |o: usize| f64::from_le_bytes(c[o..o + 8].try_into().unwrap());
            (
                i(0),
                i(8),
                [Complex64::new(f(16), f(24)), Complex64::new(f(32), f(40))],
            )
        })
        .collect();
    assemble(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Domain, Space};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    proptest! {
        #[test]
        fn csv_and_binary_round_trip(seed in any::<u64>(), n in 1usize..6) {
            let space = Space::new(Domain::periodic_2pi(n)).unwrap();
            let u = space.random_field(&mut ChaCha8Rng::seed_from_u64(seed), 0.5, 1.0);
            let mut buf = Vec::new();
            write_binary(u.modes(), &mut buf).unwrap();
            prop_assert_eq!(&read_binary(&buf[..]).unwrap(), u.modes());
            let mut text = Vec::new();
            write_csv(u.modes(), &mut text).unwrap();
            let back = read_csv(&text[..]).unwrap();
            prop_assert_eq!(&back, u.modes());
            prop_assert!(space.validate_field(back, 1e-10).is_ok());
        }
    }

    #[test]
    fn rejects_malformed_rows() {
        assert!(read_csv("k1,k2\n1,2,3\n".as_bytes()).is_err());
        assert!(read_csv("".as_bytes()).is_err());
        assert!(read_binary(&[0u8; 13][..]).is_err());
    }
}
