//! Binary checkpoints of a relaxing state.
//!
//! Layout, all little-endian: magic `RLXC`, `u32` version (1), `u32` dim,
//! `u32` n_per_dim, `f64` length, `f64` tau, `f64` t, then the grid values of
//! `xi`, each velocity component and `phi`, row-major.

use std::path::Path;

use crate::error::{Error, Result};
use crate::params::RelaxationParameter;
use crate::relaxing::PerturbationState;
use crate::spectral::{SpectralField, TorusGrid};

pub const MAGIC: [u8; 4] = *b"RLXC";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub tau: RelaxationParameter,
    pub state: PerturbationState,
}

pub fn encode_checkpoint(state: &PerturbationState, tau: RelaxationParameter) -> Vec<u8> {
    let g = state.grid();
    let blocks = 2 + state.vel.len();
    let mut out = Vec::with_capacity(40 + 8 * blocks * g.len());
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(g.dim() as u32).to_le_bytes());
    out.extend_from_slice(&(g.n_per_dim() as u32).to_le_bytes());
    for x in [g.length(), tau.value(), state.t] {
        out.extend_from_slice(&x.to_le_bytes());
    }
    for f in std::iter::once(&state.xi).chain(&state.vel).chain(std::iter::once(&state.phi)) {
        for v in f.values() {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, block: &str) -> Result<&'a [u8]> {
        let available = self.bytes.len() - self.pos;
        if n > available {
            return Err(Error::Truncated {
                block: block.to_string(),
                needed: n,
                available,
            });
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self, block: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, block)?.try_into().expect("4 bytes")))
    }

    fn f64(&mut self, block: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8, block)?.try_into().expect("8 bytes")))
    }
}

pub fn decode_checkpoint(bytes: &[u8]) -> Result<Checkpoint> {
    let mut c = Cursor { bytes, pos: 0 };
    let magic: [u8; 4] = c.take(4, "magic")?.try_into().expect("4 bytes");
    if magic != MAGIC {
        return Err(Error::BadMagic(magic));
    }
    let version = c.u32("version")?;
    if version != VERSION {
        return Err(Error::BadVersion(version));
    }
    let dim = c.u32("dim")? as usize;
    let n = c.u32("n_per_dim")? as usize;
    let length = c.f64("length")?;
    let tau = RelaxationParameter::new(c.f64("tau")?)?;
    let t = c.f64("t")?;
    if !t.is_finite() {
        return Err(Error::param("t", format!("{t} is not finite")));
    }
    let grid = TorusGrid::new(dim, n, length)?;
    let block_bytes = grid.len() * 8;

    let mut read_block = |name: String| -> Result<SpectralField> {
        let raw = c.take(block_bytes, &name)?;
        let values = raw
            .chunks_exact(8)
            .map(|b| f64::from_le_bytes(b.try_into().expect("8 bytes")))
            .collect();
        SpectralField::from_values(&grid, values)
    };
    let xi = read_block("xi".into())?;
    let vel = (0..dim).map(|i| read_block(format!("v{i}"))).collect::<Result<Vec<_>>>()?;
    let phi = read_block("phi".into())?;
    let rest = bytes.len() - c.pos;
    if rest != 0 {
        return Err(Error::TrailingBytes(rest));
    }
    Ok(Checkpoint {
        tau,
        state: PerturbationState { t, xi, vel, phi },
    })
}

pub fn write_checkpoint(state: &PerturbationState, tau: RelaxationParameter, path: &Path) -> Result<()> {
    std::fs::write(path, encode_checkpoint(state, tau)).map_err(|e| Error::io(path, e))
}

/// Reads a checkpoint; with `expected`, its grid must match.
pub fn read_checkpoint(path: &Path, expected: Option<&TorusGrid>) -> Result<Checkpoint> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let ck = decode_checkpoint(&bytes)?;
    if let Some(g) = expected {
        if ck.state.grid() != g {
            return Err(Error::GridMismatch(format!(
                "checkpoint grid {:?} differs from {:?}",
                ck.state.grid(),
                g
            )));
        }
    }
    Ok(ck)
}
