//! `NSRH1` binary snapshots.
//!
//! Layout (little-endian): 8-byte magic `NSRH1\0\0\0`, u32 n, f64 time,
//! f64 nu, u32 field count, one 16-byte NUL-padded ASCII name per field, then
//! for each field its three components (3·n³ f64) in x-fastest physical order.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{Grid, SpectralVectorField};
use crate::{Error, Result};

pub const MAGIC: [u8; 8] = *b"NSRH1\0\0\0";
const NAME_LEN: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct SnapshotHeader {
    pub n: u32,
    pub time: f64,
    pub nu: f64,
    pub names: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Snapshot {
    pub header: SnapshotHeader,
    /// Physical samples per field, component-major.
    pub fields: Vec<[Vec<f64>; 3]>,
}

fn bad(path: &Path, reason: impl Into<String>) -> Error {
    Error::Snapshot { path: path.to_path_buf(), reason: reason.into() }
}

impl Snapshot {
    pub fn from_fields(time: f64, nu: f64, fields: &[(&str, &SpectralVectorField)]) -> Result<Self> {
        let n = fields.first().map(|(_, f)| f.grid().n()).unwrap_or(0);
        let mut names = Vec::new();
        let mut data = Vec::new();
        for (name, f) in fields {
            if f.grid().n() != n {
                return Err(Error::GridMismatch { left: n, right: f.grid().n() });
            }
            if !name.is_ascii() || name.len() > NAME_LEN {
                return Err(Error::param("field name", format!("{name:?} must be ASCII, at most 16 bytes")));
            }
            names.push(name.to_string());
            data.push(f.to_physical());
        }
        Ok(Snapshot { header: SnapshotHeader { n: n as u32, time, nu, names }, fields: data })
    }

    pub fn field(&self, name: &str) -> Option<&[Vec<f64>; 3]> {
        self.header.names.iter().position(|s| s == name).map(|i| &self.fields[i])
    }

    /// Spectral form of the named field.
    pub fn spectral(&self, name: &str) -> Result<SpectralVectorField> {
        let grid = Grid::new(self.header.n as usize)?;
        let f = self.field(name).ok_or_else(|| Error::param("field", format!("no field named {name:?}")))?;
        SpectralVectorField::from_physical(grid, [&f[0], &f[1], &f[2]])
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(&MAGIC)?;
        w.write_all(&self.header.n.to_le_bytes())?;
        w.write_all(&self.header.time.to_le_bytes())?;
        w.write_all(&self.header.nu.to_le_bytes())?;
        w.write_all(&(self.header.names.len() as u32).to_le_bytes())?;
        for name in &self.header.names {
            let mut buf = [0u8; NAME_LEN];
            buf[..name.len()].copy_from_slice(name.as_bytes());
            w.write_all(&buf)?;
        }
        for field in &self.fields {
            for comp in field {
                for v in comp {
                    w.write_all(&v.to_le_bytes())?;
                }
            }
        }
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        let header = read_header_from(path, &mut r)?;
        let len = (header.n as usize).pow(3);
        let mut fields = Vec::with_capacity(header.names.len());
        let mut buf = vec![0u8; 8 * len];
        for _ in &header.names {
            let mut comps: [Vec<f64>; 3] = Default::default();
            for comp in comps.iter_mut() {
                r.read_exact(&mut buf).map_err(|_| bad(path, "truncated field data"))?;
                *comp = buf.chunks_exact(8).map(|b| f64::from_le_bytes(b.try_into().unwrap())).collect();
            }
            fields.push(comps);
        }
        Ok(Snapshot { header, fields })
    }
}

pub fn read_header(path: &Path) -> Result<SnapshotHeader> {
    let mut r = BufReader::new(File::open(path)?);
    read_header_from(path, &mut r)
}

fn read_header_from(path: &Path, r: &mut impl Read) -> Result<SnapshotHeader> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic).map_err(|_| bad(path, "file shorter than magic"))?;
    if magic != MAGIC {
        return Err(bad(path, "bad magic"));
    }
    let mut b4 = [0u8; 4];
    let mut b8 = [0u8; 8];
    let mut read4 = |r: &mut dyn Read| -> Result<u32> {
        r.read_exact(&mut b4).map_err(|_| bad(path, "truncated header"))?;
        Ok(u32::from_le_bytes(b4))
    };
    let n = read4(r)?;
    let mut read8 = |r: &mut dyn Read| -> Result<f64> {
        r.read_exact(&mut b8).map_err(|_| bad(path, "truncated header"))?;
        Ok(f64::from_le_bytes(b8))
    };
    let time = read8(r)?;
    let nu = read8(r)?;
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4).map_err(|_| bad(path, "truncated header"))?;
    let count = u32::from_le_bytes(b4);
    if n < 4 || n % 2 != 0 || n > 1024 {
        return Err(bad(path, format!("implausible grid size {n}")));
    }
    let mut names = Vec::new();
    for _ in 0..count {
        let mut buf = [0u8; NAME_LEN];
        r.read_exact(&mut buf).map_err(|_| bad(path, "truncated field names"))?;
        let end = buf.iter().position(|&b| b == 0).unwrap_or(NAME_LEN);
        let name = std::str::from_utf8(&buf[..end])
            .ok()
            .filter(|s| s.is_ascii())
            .ok_or_else(|| bad(path, "field name is not ASCII"))?;
        names.push(name.to_string());
    }
    Ok(SnapshotHeader { n, time, nu, names })
}
