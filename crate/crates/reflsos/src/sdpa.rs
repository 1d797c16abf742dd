//! SDPA sparse format (`.dat-s`).

use std::path::Path;

use reflsos_core::sos::{sdpa_string, SosProgram};
use reflsos_core::Q;

use crate::error::{CliError, Result};

pub fn write_sdpa(path: &Path, prog: &SosProgram) -> Result<()> {
    std::fs::write(path, sdpa_string(prog))?;
    Ok(())
}

/// Parsed `.dat-s` data: `F_j · Y = c_j` with entries `(j, block, i, k, value)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpaData {
    pub m: usize,
    pub block_sizes: Vec<i64>,
    pub c: Vec<Q>,
    pub entries: Vec<(usize, usize, usize, usize, Q)>,
}

fn bad(line: usize, msg: &str) -> CliError {
    CliError::Parse { pos: line, msg: msg.to_string() }
}

pub fn parse_sdpa(text: &str) -> Result<SdpaData> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('"') && !l.starts_with('*'));
    let mut next = |what: &str| lines.next().ok_or_else(|| bad(0, &format!("missing {}", what)));
    let (ln, l) = next("constraint count")?;
    let m: usize = l.trim().parse().map_err(|_| bad(ln, "bad constraint count"))?;
    let (ln, l) = next("block count")?;
    let nb: usize = l.trim().parse().map_err(|_| bad(ln, "bad block count"))?;
    let (ln, l) = next("block sizes")?;
    let block_sizes: Vec<i64> = l
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| bad(ln, "bad block size")))
        .collect::<Result<_>>()?;
    if block_sizes.len() != nb {
        return Err(bad(ln, "block size count differs from block count"));
    }
    let (ln, l) = next("objective")?;
    let c: Vec<Q> = l
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| bad(ln, "bad objective entry")))
        .collect::<Result<_>>()?;
    if c.len() != m {
        return Err(bad(ln, "objective length differs from constraint count"));
    }
    let mut entries = Vec::new();
    for (ln, l) in lines {
        let t: Vec<&str> = l.split_whitespace().collect();
        if t.len() != 5 {
            return Err(bad(ln, "entry lines need five fields"));
        }
        let idx: Vec<usize> = t[..4]
            .iter()
            .map(|x| x.parse().map_err(|_| bad(ln, "bad index")))
            .collect::<Result<_>>()?;
        let v: Q = t[4].parse().map_err(|_| bad(ln, "bad value"))?;
        entries.push((idx[0], idx[1], idx[2], idx[3], v));
    }
    Ok(SdpaData { m, block_sizes, c, entries })
}
