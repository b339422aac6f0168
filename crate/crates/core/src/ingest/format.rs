//! On-disk formats: the binary field grid and the text mode list.
//!
//! Binary grid, little-endian throughout:
//!
//! | bytes | content |
//! |-------|---------|
//! | 4 | magic `CWF1` |
//! | 3 × u32 | `nx, ny, nz` |
//! | 3 × f64 | periods `b_x, b_y, b_z` |
//! | 2 × f64 | medium `mu, eps` |
//! | N × 6 × f64 | samples `Hx Hy Hz Ex Ey Ez`, z fastest |
//!
//! Text mode list: one mode per line as `j k l Re(ax) Im(ax) Re(ay) Im(ay) Re(az) Im(az)`,
//! optional header lines `periods bx by bz` and `medium mu eps`, and `#`
//! comments (whole-line or trailing).

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ingest::{FieldGrid, LatticeMode};
use crate::propagator::Medium;
use crate::vec3::Real3;

pub const GRID_MAGIC: &[u8; 4] = b"CWF1";
const HEADER_LEN: usize = 4 + 3 * 4 + 5 * 8;

pub fn write_grid<W: Write>(mut out: W, grid: &FieldGrid, medium: &Medium) -> Result<()> {
    let mut buf = Vec::with_capacity(HEADER_LEN + grid.len() * 48);
    buf.extend_from_slice(GRID_MAGIC);
    for n in grid.shape() {
        let n = u32::try_from(n).map_err(|_| Error::Binary {
            offset: 4,
            message: format!("grid dimension {n} does not fit in u32"),
        })?;
        buf.extend_from_slice(&n.to_le_bytes());
    }
    for x in grid
        .periods()
        .into_iter()
        .chain([medium.mu(), medium.eps()])
    {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    for (h, e) in grid.h().iter().zip(grid.e()) {
        for x in h.iter().chain(e) {
            buf.extend_from_slice(&x.to_le_bytes());
        }
    }
    out.write_all(&buf)?;
    Ok(())
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn take<const N: usize>(&mut self, what: &str) -> Result<[u8; N]> {
        let end = self.pos + N;
        let chunk = self.bytes.get(self.pos..end).ok_or_else(|| Error::Binary {
            offset: self.pos,
            message: format!("truncated input while reading {what}"),
        })?;
        self.pos = end;
        Ok(chunk.try_into().expect("slice length checked"))
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(what)?))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(what)?))
    }
}

pub fn read_grid<R: Read>(mut input: R) -> Result<(FieldGrid, Medium)> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    parse_grid(&bytes)
}

pub fn parse_grid(bytes: &[u8]) -> Result<(FieldGrid, Medium)> {
    let mut cur = Cursor { bytes, pos: 0 };
    let magic: [u8; 4] = cur.take("magic")?;
    if &magic != GRID_MAGIC {
        return Err(Error::Binary {
            offset: 0,
            message: format!("bad magic {magic:?}, expected \"CWF1\""),
        });
    }
    let shape = [cur.u32("nx")?, cur.u32("ny")?, cur.u32("nz")?].map(|n| n as usize);
    let periods = [cur.f64("bx")?, cur.f64("by")?, cur.f64("bz")?];
    let (mu, eps) = (cur.f64("mu")?, cur.f64("eps")?);
    let medium = Medium::new(mu, eps).map_err(|e| Error::Binary {
        offset: HEADER_LEN - 16,
        message: e.to_string(),
    })?;
    let n = shape
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .filter(|n| n.checked_mul(48).is_some())
        .ok_or_else(|| Error::Binary {
            offset: 4,
            message: format!("grid shape {shape:?} overflows"),
        })?;
    let expected = HEADER_LEN + n * 48;
    if bytes.len() != expected {
        return Err(Error::Binary {
            offset: bytes.len().min(expected),
            message: format!(
                "expected {expected} bytes for shape {shape:?}, found {}",
                bytes.len()
            ),
        });
    }
    let mut h = Vec::with_capacity(n);
    let mut e = Vec::with_capacity(n);
    for _ in 0..n {
        let mut s = [0.0; 6];
        for x in s.iter_mut() {
            *x = cur.f64("sample")?;
        }
        h.push([s[0], s[1], s[2]]);
        e.push([s[3], s[4], s[5]]);
    }
    Ok((FieldGrid::new(shape, periods, h, e)?, medium))
}

/// Contents of a text mode-list file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModeList {
    pub periods: Option<Real3>,
    pub medium: Option<Medium>,
    pub modes: Vec<LatticeMode>,
}

/// Writes the mode list. When `alphas` is given, each mode line gets a
/// trailing `# alpha` comment with the eigen-coordinates of that mode.
pub fn write_mode_list<W: Write>(
    mut out: W,
    list: &ModeList,
    alphas: Option<&[[Complex64; 3]]>,
) -> Result<()> {
    if let Some([bx, by, bz]) = list.periods {
        writeln!(out, "periods {bx} {by} {bz}")?;
    }
    if let Some(m) = list.medium {
        writeln!(out, "medium {} {}", m.mu(), m.eps())?;
    }
    for (i, m) in list.modes.iter().enumerate() {
        let [j, k, l] = m.index;
        write!(out, "{j} {k} {l}")?;
        for z in &m.a {
            write!(out, " {} {}", z.re, z.im)?;
        }
        if let Some(al) = alphas.and_then(|a| a.get(i)) {
            write!(out, " # alpha")?;
            for z in al {
                write!(out, " {} {}", z.re, z.im)?;
            }
        }
        writeln!(out)?;
    }
    Ok(())
}

fn parse_floats<const N: usize>(fields: &[&str], line: usize) -> Result<[f64; N]> {
    if fields.len() != N {
        return Err(Error::Format {
            line,
            message: format!("expected {N} numbers, found {}", fields.len()),
        });
    }
    let mut out = [0.0f64; N];
    for (o, f) in out.iter_mut().zip(fields) {
        *o = f.parse().map_err(|_| Error::Format {
            line,
            message: format!("'{f}' is not a number"),
        })?;
        if !o.is_finite() {
            return Err(Error::Format {
                line,
                message: format!("'{f}' is not finite"),
            });
        }
    }
    Ok(out)
}

pub fn parse_mode_list(text: &str) -> Result<ModeList> {
    let mut list = ModeList::default();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        match fields[0] {
            "periods" => {
                if list.periods.is_some() {
                    return Err(Error::Format {
                        line,
                        message: "duplicate 'periods' header".into(),
                    });
                }
                let p: [f64; 3] = parse_floats(&fields[1..], line)?;
                if p.iter().any(|b| *b <= 0.0) {
                    return Err(Error::Format {
                        line,
                        message: "periods must be positive".into(),
                    });
                }
                list.periods = Some(p);
            }
            "medium" => {
                if list.medium.is_some() {
                    return Err(Error::Format {
                        line,
                        message: "duplicate 'medium' header".into(),
                    });
                }
                let [mu, eps] = parse_floats(&fields[1..], line)?;
                list.medium = Some(Medium::new(mu, eps).map_err(|e| Error::Format {
                    line,
                    message: e.to_string(),
                })?);
            }
            _ => {
                if fields.len() != 9 {
                    return Err(Error::Format {
                        line,
                        message: format!("mode line needs 9 fields, found {}", fields.len()),
                    });
                }
                let mut index = [0i64; 3];
                for (o, f) in index.iter_mut().zip(&fields[..3]) {
                    *o = f.parse().map_err(|_| Error::Format {
                        line,
                        message: format!("'{f}' is not an integer lattice index"),
                    })?;
                }
                let v: [f64; 6] = parse_floats(&fields[3..], line)?;
                let a = std::array::from_fn(|i| Complex64::new(v[2 * i], v[2 * i + 1]));
                list.modes.push(LatticeMode { index, a });
            }
        }
    }
    Ok(list)
}
