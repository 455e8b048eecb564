//! Snapshot format for interruptible champion sweeps.
//!
//! Layout, all little endian:
//!
//! ```text
//! byte  0        format version, currently 1
//! bytes 1..9     x, the last prime fully folded into the counts
//! bytes 9..17    n, the number of primes consumed
//! bytes 17..25   counts length, which equals the sweep bound plus one
//! remainder      counts as u32 values
//! ```
//!
//! The argmax state is rebuilt on load and revalidated by the sweep
//! resume path, so a truncated or edited file is rejected rather than
//! silently continued. Writes go to a sibling temp file first and are
//! published by rename.

use anyhow::{bail, Context, Result};
use primediff::DiffHistogram;
use std::fs;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

const VERSION: u8 = 1;
const HEADER_LEN: usize = 25;
// counts are u32 per difference; this caps snapshots at the sieve's
// supported sweep range rather than trusting the length field
const MAX_COUNTS: u64 = 1 << 33;

pub fn save(path: &Path, hist: &DiffHistogram) -> Result<()> {
    let tmp = path.with_extension("ckpt.tmp");
    {
        let file = fs::File::create(&tmp)
            .with_context(|| format!("cannot create checkpoint {}", tmp.display()))?;
        let mut w = BufWriter::new(file);
        w.write_all(&[VERSION])?;
        w.write_all(&hist.x().to_le_bytes())?;
        w.write_all(&hist.n().to_le_bytes())?;
        w.write_all(&(hist.counts().len() as u64).to_le_bytes())?;
        for &c in hist.counts() {
            w.write_all(&c.to_le_bytes())?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, path)
        .with_context(|| format!("cannot publish checkpoint {}", path.display()))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<DiffHistogram> {
    let file = fs::File::open(path)
        .with_context(|| format!("cannot open checkpoint {}", path.display()))?;
    let mut r = BufReader::new(file);
    let mut head = [0u8; HEADER_LEN];
    r.read_exact(&mut head)
        .with_context(|| format!("checkpoint {} is truncated", path.display()))?;
    if head[0] != VERSION {
        bail!(
            "checkpoint {} has unsupported format version {}",
            path.display(),
            head[0]
        );
    }
    let x = u64::from_le_bytes(head[1..9].try_into().unwrap());
    let n = u64::from_le_bytes(head[9..17].try_into().unwrap());
    let len = u64::from_le_bytes(head[17..25].try_into().unwrap());
    if len == 0 || len > MAX_COUNTS {
        bail!("checkpoint {} declares {len} counts", path.display());
    }
    let mut buf = vec![0u8; len as usize * 4];
    r.read_exact(&mut buf)
        .with_context(|| format!("checkpoint {} is truncated", path.display()))?;
    if r.read(&mut [0u8; 1])? != 0 {
        bail!("checkpoint {} has trailing bytes", path.display());
    }
    let counts = buf
        .chunks_exact(4)
        .map(|b| u32::from_le_bytes(b.try_into().unwrap()))
        .collect();
    DiffHistogram::from_parts(x, n, counts).map_err(Into::into)
}
