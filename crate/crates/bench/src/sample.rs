use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub const MIB: usize = 1024 * 1024;

/// Size grid in MiB.
pub const DEFAULT_SIZES_MIB: [usize; 7] = [1, 2, 4, 8, 12, 16, 20];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Impl {
    KernelNative,
    KernelPortable,
    ScriptBaseline,
}

impl Impl {
    pub fn as_str(self) -> &'static str {
        match self {
            Impl::KernelNative => "kernel_native",
            Impl::KernelPortable => "kernel_portable",
            Impl::ScriptBaseline => "script_baseline",
        }
    }
}

impl fmt::Display for Impl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Impl {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "kernel_native" => Ok(Impl::KernelNative),
            "kernel_portable" => Ok(Impl::KernelPortable),
            "script_baseline" => Ok(Impl::ScriptBaseline),
            other => Err(format!("unknown implementation `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Op {
    Encrypt,
    Decrypt,
}

impl Op {
    pub fn as_str(self) -> &'static str {
        match self {
            Op::Encrypt => "encrypt",
            Op::Decrypt => "decrypt",
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Op {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "encrypt" => Ok(Op::Encrypt),
            "decrypt" => Ok(Op::Decrypt),
            other => Err(format!("unknown operation `{other}`")),
        }
    }
}

/// One timed repetition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchSample {
    #[serde(rename = "impl")]
    pub implementation: Impl,
    pub op: Op,
    pub size_bytes: usize,
    pub duration_ms: f64,
    pub repetition: usize,
}
