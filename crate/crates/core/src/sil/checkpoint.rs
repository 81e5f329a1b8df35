//! Binary checkpoints of a state vector.
//!
//! Layout (little endian): magic `WTWSTATE`, u64 basis fingerprint, f64 time,
//! u64 dimension, then `dimension` pairs of f64 (real, imaginary).

use std::io::{Read, Write};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{StateVector, TruncatedBasis};

const MAGIC: &[u8; 8] = b"WTWSTATE";

pub fn write_checkpoint<W: Write>(
    mut w: W,
    basis: &TruncatedBasis,
    psi: &StateVector,
) -> Result<()> {
    if psi.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: psi.dim(),
        });
    }
    w.write_all(MAGIC)?;
    w.write_all(&basis.fingerprint().to_le_bytes())?;
    w.write_all(&psi.t.to_le_bytes())?;
    w.write_all(&(psi.dim() as u64).to_le_bytes())?;
    let mut buf = Vec::with_capacity(16 * psi.dim());
    for z in &psi.amplitudes {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

fn read8<R: Read>(r: &mut R) -> Result<[u8; 8]> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(b)
}

/// Reads a checkpoint, refusing one written for a different basis.
pub fn read_checkpoint<R: Read>(mut r: R, basis: &TruncatedBasis) -> Result<StateVector> {
    if &read8(&mut r)? != MAGIC {
        return Err(Error::Checkpoint("not a state checkpoint".into()));
    }
    let hash = u64::from_le_bytes(read8(&mut r)?);
    if hash != basis.fingerprint() {
        return Err(Error::Checkpoint(format!(
            "basis fingerprint {hash:016x} does not match {:016x}",
            basis.fingerprint()
        )));
    }
    let t = f64::from_le_bytes(read8(&mut r)?);
    let dim = u64::from_le_bytes(read8(&mut r)?) as usize;
    if dim != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: dim,
        });
    }
    let mut buf = vec![0u8; 16 * dim];
    r.read_exact(&mut buf)?;
    let amplitudes = buf
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            C64::new(re, im)
        })
        .collect();
    Ok(StateVector::new(amplitudes, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{build_model, build_model_around, BathSpec, Beta, DEFAULT_STATE_BUDGET};

    #[test]
    fn round_trip_and_mismatch() {
        let spec = BathSpec::ohmic(0.1, 10.0, 3, 2, Beta::Infinite);
        let (_, h) = build_model(&spec, 1.0).unwrap();
        let mut psi = StateVector::y_state(h.dim(), true);
        psi.amplitudes[5] = C64::new(0.25, -1e-300);
        psi.t = 12.5;
        let mut bytes = Vec::new();
        write_checkpoint(&mut bytes, h.basis(), &psi).unwrap();
        assert_eq!(bytes.len(), 32 + 16 * h.dim());
        let back = read_checkpoint(bytes.as_slice(), h.basis()).unwrap();
        assert_eq!(back, psi);

        let (_, other) = build_model_around(&spec, 1.0, &[1, 0, 0], DEFAULT_STATE_BUDGET).unwrap();
        assert!(matches!(
            read_checkpoint(bytes.as_slice(), other.basis()),
            Err(Error::Checkpoint(_))
        ));
        assert!(read_checkpoint(&b"garbage!"[..], h.basis()).is_err());
    }
}
