use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use crate::coupling::{CouplingGraph, CouplingKind};
use crate::error::{Error, Result};
use crate::optimize::{optimize_template, Budget, GateSet};
use crate::synth::{synth_graycode, synth_recursive, NetworkTemplate, RecursiveFlavor};

/// Template families the drivers can program.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    RecursiveCnot,
    RecursiveCns,
    Gray,
    /// Searched template with `{Cns, Swap}` gates, ring coupling by default.
    Optimized,
}

impl Backend {
    pub const ALL: [Backend; 4] = [Backend::RecursiveCnot, Backend::RecursiveCns, Backend::Gray, Backend::Optimized];

    pub fn default_coupling(self) -> CouplingKind {
        match self {
            Backend::RecursiveCnot | Backend::RecursiveCns => CouplingKind::Path,
            Backend::Gray => CouplingKind::Full,
            Backend::Optimized => CouplingKind::Ring,
        }
    }

    pub fn supports(self, coupling: CouplingKind) -> bool {
        match self {
            Backend::RecursiveCnot | Backend::RecursiveCns => coupling != CouplingKind::Full,
            Backend::Gray => coupling == CouplingKind::Full,
            Backend::Optimized => true,
        }
    }

    pub fn template(self, n: usize) -> Result<NetworkTemplate> {
        self.template_on(n, self.default_coupling())
    }

    /// Template for `n` qubits declared against `coupling`.
    ///
    /// Optimized templates are searched with the default budget and cached
    /// per process.
    pub fn template_on(self, n: usize, coupling: CouplingKind) -> Result<NetworkTemplate> {
        if !self.supports(coupling) {
            return Err(Error::Incompatible(format!("backend {self} does not support {coupling} coupling")));
        }
        let graph = CouplingGraph::new(coupling, n)?;
        let mut t = match self {
            Backend::RecursiveCnot => synth_recursive(n, RecursiveFlavor::Cnot)?,
            Backend::RecursiveCns => synth_recursive(n, RecursiveFlavor::Cns)?,
            Backend::Gray => synth_graycode(n)?,
            Backend::Optimized => return optimized(n, graph),
        };
        *t.coupling_mut() = graph;
        Ok(t)
    }
}

fn optimized(n: usize, graph: CouplingGraph) -> Result<NetworkTemplate> {
    static CACHE: OnceLock<Mutex<HashMap<CouplingGraph, NetworkTemplate>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("cache lock").get(&graph) {
        return Ok(t.clone());
    }
    let t = optimize_template(n, &graph, GateSet::Cns, Budget::default())?.template;
    cache.lock().expect("cache lock").insert(graph, t.clone());
    Ok(t)
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::RecursiveCnot => "recursive-cnot",
            Backend::RecursiveCns => "recursive-cns",
            Backend::Gray => "gray",
            Backend::Optimized => "optimized",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Backend::ALL
            .into_iter()
            .find(|b| b.to_string() == s)
            .ok_or_else(|| Error::Incompatible(format!("unknown backend '{s}'")))
    }
}
