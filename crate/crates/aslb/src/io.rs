//! Serialization of sampled functions: a CSV form (t,value columns, meta in
//! comment headers) and a little-endian binary form with magic "ASLB1". Both
//! read back losslessly; floats are written with the shortest representation
//! that round-trips.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::funcspace::{FunctionMeta, SampledFunction};

pub const BINARY_MAGIC: &[u8; 5] = b"ASLB1";

/// Shortest round-trip decimal for a double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn write_csv<W: Write>(f: &SampledFunction, mut w: W) -> Result<()> {
    writeln!(w, "# aslb sampled-function v1")?;
    let meta = serde_json::to_string(&f.meta).map_err(|e| Error::Format(e.to_string()))?;
    writeln!(w, "# meta={meta}")?;
    writeln!(
        w,
        "# domain_lo={} step={} n={}",
        fmt_f64(f.domain_lo),
        fmt_f64(f.step),
        f.len()
    )?;
    writeln!(w, "t,value")?;
    for i in 0..f.len() {
        writeln!(w, "{},{}", fmt_f64(f.t(i)), fmt_f64(f.values[i]))?;
    }
    Ok(())
}

pub fn read_csv<R: Read>(r: R) -> Result<SampledFunction> {
    let reader = BufReader::new(r);
    let mut meta: Option<FunctionMeta> = None;
    let mut domain_lo = f64::NAN;
    let mut step = f64::NAN;
    let mut n = 0usize;
    let mut values: Vec<f64> = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if let Some(rest) = line.strip_prefix("# meta=") {
            meta = Some(serde_json::from_str(rest).map_err(|e| Error::Format(e.to_string()))?);
        } else if let Some(rest) = line.strip_prefix("# domain_lo=") {
            // "domain_lo=<x> step=<s> n=<n>"
            let mut parts = rest.split_whitespace();
            domain_lo = parse_f64(parts.next().unwrap_or(""))?;
            step = parse_f64(
                parts
                    .next()
                    .and_then(|p| p.strip_prefix("step="))
                    .unwrap_or(""),
            )?;
            n = parts
                .next()
                .and_then(|p| p.strip_prefix("n="))
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| Error::Format("missing n in csv header".into()))?;
            values.reserve(n);
        } else if line.starts_with('#') || line == "t,value" || line.is_empty() {
            continue;
        } else {
            let (_, v) = line
                .split_once(',')
                .ok_or_else(|| Error::Format(format!("bad csv row: {line}")))?;
            values.push(parse_f64(v)?);
        }
    }
    if values.len() != n {
        return Err(Error::Format(format!(
            "csv declared {n} rows but carried {}",
            values.len()
        )));
    }
    SampledFunction::new(
        domain_lo,
        step,
        values,
        meta.ok_or_else(|| Error::Format("csv missing meta header".into()))?,
    )
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Format(format!("bad float: {s:?}")))
}

pub fn write_binary<W: Write>(f: &SampledFunction, mut w: W) -> Result<()> {
    w.write_all(BINARY_MAGIC)?;
    let meta = serde_json::to_vec(&f.meta).map_err(|e| Error::Format(e.to_string()))?;
    w.write_all(&(meta.len() as u32).to_le_bytes())?;
    w.write_all(&meta)?;
    w.write_all(&f.domain_lo.to_le_bytes())?;
    w.write_all(&f.step.to_le_bytes())?;
    w.write_all(&(f.len() as u64).to_le_bytes())?;
    for v in &f.values {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R) -> Result<SampledFunction> {
    let mut magic = [0u8; 5];
    r.read_exact(&mut magic)?;
    if &magic != BINARY_MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let mut len4 = [0u8; 4];
    r.read_exact(&mut len4)?;
    let meta_len = u32::from_le_bytes(len4) as usize;
    let mut meta_buf = vec![0u8; meta_len];
    r.read_exact(&mut meta_buf)?;
    let meta: FunctionMeta =
        serde_json::from_slice(&meta_buf).map_err(|e| Error::Format(e.to_string()))?;
    let mut f8 = [0u8; 8];
    r.read_exact(&mut f8)?;
    let domain_lo = f64::from_le_bytes(f8);
    r.read_exact(&mut f8)?;
    let step = f64::from_le_bytes(f8);
    r.read_exact(&mut f8)?;
    let n = u64::from_le_bytes(f8) as usize;
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        r.read_exact(&mut f8)?;
        values.push(f64::from_le_bytes(f8));
    }
    SampledFunction::new(domain_lo, step, values, meta)
}

pub fn save_csv(f: &SampledFunction, path: &Path) -> Result<()> {
    write_csv(f, std::fs::File::create(path)?)
}

pub fn load_csv(path: &Path) -> Result<SampledFunction> {
    read_csv(std::fs::File::open(path)?)
}

pub fn save_binary(f: &SampledFunction, path: &Path) -> Result<()> {
    write_binary(f, std::fs::File::create(path)?)
}

pub fn load_binary(path: &Path) -> Result<SampledFunction> {
    read_binary(std::fs::File::open(path)?)
}
