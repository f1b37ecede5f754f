use std::fmt::Display;
use std::io::{self, Write};

/// Probability with 12 significant digits: positional from `1e-4` up,
/// scientific below.
pub fn format_prob(p: f64) -> String {
    let sci = format!("{p:.11e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if p == 0.0 || exp < -4 {
        sci
    } else {
        format!("{p:.*}", (11 - exp).max(0) as usize)
    }
}

/// Shortest round-tripping scientific form, always with a decimal point
/// (`4.0e-3`).
pub fn format_radians(x: f64) -> String {
    let s = format!("{x:e}");
    match s.split_once('e') {
        Some((mantissa, exp)) if !mantissa.contains('.') => format!("{mantissa}.0e{exp}"),
        _ => s,
    }
}

/// `key: value` lines.
pub struct Report<'a> {
    out: &'a mut dyn Write,
}

impl<'a> Report<'a> {
    pub fn new(out: &'a mut dyn Write) -> Self {
        Self { out }
    }

    pub fn line(&mut self, key: &str, value: impl Display) -> io::Result<()> {
        writeln!(self.out, "{key}: {value}")
    }
}
