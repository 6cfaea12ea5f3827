//! Reading and writing `RGN1` region files.
//!
//! Layout: the magic `RGN1`, a header line `nx ny h ox oy\n`, then `ceil(nx*ny/8)` bytes of
//! row-major mask bits, least significant bit first.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{GridRegion, GridSpec};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"RGN1";
const MAX_HEADER: usize = 512;

pub fn write_region<W: Write>(region: &GridRegion, mut out: W) -> Result<()> {
    let s = region.spec();
    out.write_all(MAGIC)?;
    writeln!(out, "{} {} {} {} {}", s.nx, s.ny, s.h, s.origin[0], s.origin[1])?;
    let mut bytes = vec![0u8; s.len().div_ceil(8)];
    for (k, _) in region.mask().iter().enumerate().filter(|(_, &b)| b) {
        bytes[k / 8] |= 1 << (k % 8);
    }
    out.write_all(&bytes)?;
    out.flush()?;
    Ok(())
}

pub fn read_region<R: Read>(mut input: R) -> Result<GridRegion> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic).map_err(|_| Error::MalformedHeader("file shorter than the magic".into()))?;
    if &magic != MAGIC {
        return Err(Error::MalformedHeader(format!("bad magic {:?}", String::from_utf8_lossy(&magic))));
    }
    let mut header = Vec::new();
    let mut byte = [0u8; 1];
    loop {
        if input.read(&mut byte)? == 0 {
            return Err(Error::MalformedHeader("header line is not terminated".into()));
        }
        if byte[0] == b'\n' {
            break;
        }
        header.push(byte[0]);
        if header.len() > MAX_HEADER {
            return Err(Error::MalformedHeader("header line too long".into()));
        }
    }
    let text = std::str::from_utf8(&header).map_err(|_| Error::MalformedHeader("header is not UTF-8".into()))?;
    let fields: Vec<&str> = text.split_ascii_whitespace().collect();
    if fields.len() != 5 {
        return Err(Error::MalformedHeader(format!("expected 5 header fields, found {}", fields.len())));
    }
    let bad = |name: &str| Error::MalformedHeader(format!("cannot parse {name}"));
    let nx: usize = fields[0].parse().map_err(|_| bad("nx"))?;
    let ny: usize = fields[1].parse().map_err(|_| bad("ny"))?;
    let h: f64 = fields[2].parse().map_err(|_| bad("h"))?;
    let ox: f64 = fields[3].parse().map_err(|_| bad("ox"))?;
    let oy: f64 = fields[4].parse().map_err(|_| bad("oy"))?;
    let spec = GridSpec::new([ox, oy], h, nx, ny).map_err(|e| Error::MalformedHeader(e.to_string()))?;

    let expected = spec.len().div_ceil(8);
    let mut payload = Vec::with_capacity(expected);
    input.read_to_end(&mut payload)?;
    if payload.len() < expected {
        return Err(Error::TruncatedPayload { expected, found: payload.len() });
    }
    if payload.len() > expected {
        return Err(Error::DimensionMismatch { expected, found: payload.len() });
    }
    let mask = (0..spec.len()).map(|k| payload[k / 8] >> (k % 8) & 1 == 1).collect();
    GridRegion::new(spec, mask)
}

pub fn save_region(region: &GridRegion, path: impl AsRef<Path>) -> Result<()> {
    write_region(region, BufWriter::new(File::create(path)?))
}

pub fn load_region(path: impl AsRef<Path>) -> Result<GridRegion> {
    read_region(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> GridRegion {
        let spec = GridSpec::new([-0.1234567890123, 3.0e-7], 0.0123456789, 13, 7).unwrap();
        GridRegion::from_fn(spec, |p| (p[0] * 37.0 + p[1] * 11.0).sin() > 0.2)
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let r = sample();
        let mut buf = Vec::new();
        write_region(&r, &mut buf).unwrap();
        let back = read_region(buf.as_slice()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.spec().h.to_bits(), r.spec().h.to_bits());
        assert_eq!(back.spec().origin[0].to_bits(), r.spec().origin[0].to_bits());
    }

    #[test]
    fn bits_are_lsb_first() {
        let spec = GridSpec::new([0.0, 0.0], 1.0, 3, 3).unwrap();
        let mut mask = vec![false; 9];
        mask[0] = true;
        mask[8] = true;
        let mut buf = Vec::new();
        write_region(&GridRegion::new(spec, mask).unwrap(), &mut buf).unwrap();
        assert_eq!(&buf[buf.len() - 2..], &[0b0000_0001, 0b0000_0001]);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(read_region(&b"RGN2 1 1 1 0 0\n\x01"[..]), Err(Error::MalformedHeader(_))));
        assert!(matches!(read_region(&b"RGN1 1 1 x 0 0\n\x01"[..]), Err(Error::MalformedHeader(_))));
        assert!(matches!(read_region(&b"RGN14 4 1 0 0\n\x01"[..]), Err(Error::TruncatedPayload { .. })));
        assert!(matches!(read_region(&b"RGN11 1 1 0 0\n\x01\x00"[..]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(read_region(&b"RGN1"[..]), Err(Error::MalformedHeader(_))));
    }
}
