//! Binary grid function files.
//!
//! Layout, all little endian: magic `HTGF`, version `u32`, `n` and `m` as
//! `u32`, then per axis the count (`u64`), spacing and origin (`f64`), then
//! the samples as interleaved real and imaginary `f64` in row-major order.

use std::io::{self, Read, Write};

use htype_core::{Complex64, GridFunction, GridSpec};

pub const MAGIC: &[u8; 4] = b"HTGF";
pub const VERSION: u32 = 1;

pub fn write_grid(w: &mut impl Write, g: &GridFunction) -> io::Result<()> {
    let sp = g.spec();
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(sp.n() as u32).to_le_bytes())?;
    w.write_all(&(sp.m() as u32).to_le_bytes())?;
    for a in 0..sp.dims() {
        w.write_all(&(sp.counts()[a] as u64).to_le_bytes())?;
        w.write_all(&sp.spacings()[a].to_le_bytes())?;
        w.write_all(&sp.origins()[a].to_le_bytes())?;
    }
    for v in g.data() {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

fn invalid(msg: impl Into<String>) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.into())
}

fn read_u32(r: &mut impl Read) -> io::Result<u32> {
    let mut b = [0; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> io::Result<u64> {
    let mut b = [0; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> io::Result<f64> {
    Ok(f64::from_bits(read_u64(r)?))
}

pub fn read_grid(r: &mut impl Read) -> io::Result<GridFunction> {
    let mut magic = [0; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(invalid("not a grid function file"));
    }
    let version = read_u32(r)?;
    if version != VERSION {
        return Err(invalid(format!("unsupported version {version}")));
    }
    let n = read_u32(r)? as usize;
    let m = read_u32(r)? as usize;
    let dims = 2 * n + m;
    if dims == 0 || dims > 64 {
        return Err(invalid(format!("implausible dimensions n={n} m={m}")));
    }
    let (mut counts, mut spacings, mut origins) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..dims {
        counts.push(read_u64(r)? as usize);
        spacings.push(read_f64(r)?);
        origins.push(read_f64(r)?);
    }
    let spec = GridSpec::new(n, m, counts, spacings, origins).map_err(|e| invalid(e.to_string()))?;
    let mut data = Vec::with_capacity(spec.len());
    for _ in 0..spec.len() {
        let re = read_f64(r)?;
        data.push(Complex64::new(re, read_f64(r)?));
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(invalid("trailing bytes after samples"));
    }
    GridFunction::new(spec, data).map_err(|e| invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_magic() {
        let err = read_grid(&mut &b"NOPE\x01\0\0\0"[..]).unwrap_err();
        assert_eq!(err.kind(), io::ErrorKind::InvalidData);
    }
}
