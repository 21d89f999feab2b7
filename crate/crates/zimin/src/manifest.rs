//! Run manifests: a tab-separated record of every CLI invocation
//! (arguments, seed, version, input/output digests, wall time) from which
//! the run can be replayed bit-for-bit.

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunManifest {
    pub subcommand: String,
    /// The full argument vector after the binary name.
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub version: String,
    /// `(path, sha256)` of files read.
    pub inputs: Vec<(String, String)>,
    /// `(path, sha256)` of files written.
    pub outputs: Vec<(String, String)>,
    pub wall_ms: u128,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

pub fn file_digest(path: &Path) -> Result<String> {
    Ok(sha256_hex(&std::fs::read(path)?))
}

impl RunManifest {
    pub fn new(subcommand: &str, args: &[String]) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            args: args.to_vec(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            ..Default::default()
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "subcommand\t{}", self.subcommand);
        let _ = writeln!(out, "version\t{}", self.version);
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed\t{seed}");
        }
        for (i, a) in self.args.iter().enumerate() {
            let _ = writeln!(out, "arg.{i}\t{a}");
        }
        for (p, d) in &self.inputs {
            let _ = writeln!(out, "input\t{p}\t{d}");
        }
        for (p, d) in &self.outputs {
            let _ = writeln!(out, "output\t{p}\t{d}");
        }
        let _ = writeln!(out, "wall_ms\t{}", self.wall_ms);
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut m = RunManifest::default();
        let mut args: Vec<(usize, String)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.splitn(3, '\t');
            let key = parts.next().unwrap_or_default();
            let val = parts.next().ok_or(Error::Parse {
                line: lineno + 1,
                msg: "missing tab-separated value".to_string(),
            })?;
            match key {
                "subcommand" => m.subcommand = val.to_string(),
                "version" => m.version = val.to_string(),
                "seed" => {
                    m.seed = Some(val.parse().map_err(|_| Error::Parse {
                        line: lineno + 1,
                        msg: format!("bad seed {val:?}"),
                    })?)
                }
                "wall_ms" => {
                    m.wall_ms = val.parse().map_err(|_| Error::Parse {
                        line: lineno + 1,
                        msg: format!("bad wall_ms {val:?}"),
                    })?
                }
                "input" | "output" => {
                    let digest = parts.next().unwrap_or_default().to_string();
                    let entry = (val.to_string(), digest);
                    if key == "input" {
                        m.inputs.push(entry);
                    } else {
                        m.outputs.push(entry);
                    }
                }
                k if k.starts_with("arg.") => {
                    let idx: usize = k[4..].parse().map_err(|_| Error::Parse {
                        line: lineno + 1,
                        msg: format!("bad argument index {k:?}"),
                    })?;
                    args.push((idx, val.to_string()));
                }
                other => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("unknown manifest key {other:?}"),
                    })
                }
            }
        }
        args.sort_by_key(|&(i, _)| i);
        m.args = args.into_iter().map(|(_, a)| a).collect();
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_parse_round_trip() {
        let mut m = RunManifest::new("construct", &[
            "construct".to_string(),
            "--method".to_string(),
            "euler".to_string(),
            "--q".to_string(),
            "4".to_string(),
        ]);
        m.seed = Some(7);
        m.outputs.push(("out.txt".to_string(), "ab".repeat(32)));
        m.wall_ms = 12;
        let back = RunManifest::parse(&m.render()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(
            sha256_hex(b"abacaba"),
            "510a1c5d1c0f51fe1bca026934f9dd6e4f8c3e0833705a81859b00cca2a35d31"
        );
    }
}
