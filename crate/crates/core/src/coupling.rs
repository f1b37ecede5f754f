use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::parity::MAX_WIDTH;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CouplingKind {
    /// Nearest neighbours `(i, i+1)`.
    Path,
    /// Path plus the closing edge `(N, 1)`.
    Ring,
    /// All pairs.
    Full,
}

impl fmt::Display for CouplingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CouplingKind::Path => "path",
            CouplingKind::Ring => "ring",
            CouplingKind::Full => "full",
        })
    }
}

impl FromStr for CouplingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path" => Ok(CouplingKind::Path),
            "ring" => Ok(CouplingKind::Ring),
            "full" => Ok(CouplingKind::Full),
            other => Err(Error::Incompatible(format!("unknown coupling '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CouplingGraph {
    kind: CouplingKind,
    width: usize,
}

impl CouplingGraph {
    pub fn new(kind: CouplingKind, width: usize) -> Result<Self> {
        if width == 0 || width > MAX_WIDTH {
            return Err(Error::InvalidWidth { width, max: MAX_WIDTH });
        }
        Ok(Self { kind, width })
    }

    pub fn kind(&self) -> CouplingKind {
        self.kind
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Undirected adjacency on 1-based qubits.
    pub fn are_coupled(&self, a: usize, b: usize) -> bool {
        let n = self.width;
        if a == b || a == 0 || b == 0 || a > n || b > n {
            return false;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        match self.kind {
            CouplingKind::Path => hi - lo == 1,
            CouplingKind::Ring => hi - lo == 1 || (lo == 1 && hi == n && n > 2),
            CouplingKind::Full => true,
        }
    }

    /// Edges as `(lo, hi)` pairs in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.width;
        let mut out = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                if self.are_coupled(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Wire permutations (0-based, `perm[j]` is the image of wire `j`) that
    /// map the edge set onto itself.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let n = self.width;
        let identity: Vec<usize> = (0..n).collect();
        let reversal: Vec<usize> = (0..n).rev().collect();
        match self.kind {
            CouplingKind::Path if n >= 2 => vec![identity, reversal],
            CouplingKind::Ring if n >= 3 => {
                let mut out = Vec::with_capacity(2 * n);
                for shift in 0..n {
                    out.push((0..n).map(|j| (j + shift) % n).collect());
                    out.push((0..n).map(|j| (n - j + shift) % n).collect());
                }
                out
            }
            CouplingKind::Ring if n == 2 => vec![identity, reversal],
            CouplingKind::Full => permutations(n),
            _ => vec![identity],
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}
