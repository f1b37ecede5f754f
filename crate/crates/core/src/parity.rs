//! GF(2) bit strings over N wires and the classical label algebra.
//!
//! Both [`ParityMask`] and [`BasisIndex`] store an N-bit integer in which
//! qubit 1 is the most significant bit, so qubit `q` lives at bit position
//! `N - q`. A wire label is a `ParityMask` naming the XOR of input bits that
//! the wire currently carries.

use std::fmt;
use std::ops::BitXor;

use crate::circuit::Gate;
use crate::error::{Error, Result};

/// Largest register width representable by the bit-string types.
pub const MAX_WIDTH: usize = 30;

fn check(bits: u32, width: usize) -> Result<()> {
    if width == 0 || width > MAX_WIDTH {
        return Err(Error::InvalidWidth { width, max: MAX_WIDTH });
    }
    if bits >> width != 0 {
        return Err(Error::BitsOutOfRange { bits, width });
    }
    Ok(())
}

/// Bit value of qubit `q` (1-based) in a `width`-qubit register.
#[inline]
pub fn qubit_bit(q: usize, width: usize) -> u32 {
    debug_assert!(q >= 1 && q <= width);
    1 << (width - q)
}

/// An N-bit control condition `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParityMask {
    bits: u32,
    width: usize,
}

impl ParityMask {
    pub fn new(bits: u32, width: usize) -> Result<Self> {
        check(bits, width)?;
        Ok(Self { bits, width })
    }

    pub(crate) fn new_unchecked(bits: u32, width: usize) -> Self {
        debug_assert!(check(bits, width).is_ok());
        Self { bits, width }
    }

    pub fn zero(width: usize) -> Result<Self> {
        Self::new(0, width)
    }

    /// The unit mask `e_q`: the label wire `q` carries before any gate.
    pub fn unit(q: usize, width: usize) -> Result<Self> {
        if q == 0 || q > width {
            return Err(Error::QubitOutOfRange { qubit: q, width });
        }
        Self::new(qubit_bit(q, width), width)
    }

    /// Identity labelling `(e_1, ..., e_N)`.
    pub fn identity_labels(width: usize) -> Result<Vec<Self>> {
        (1..=width).map(|q| Self::unit(q, width)).collect()
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn width(self) -> usize {
        self.width
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    /// `y_q`, the membership of qubit `q` in the condition.
    pub fn contains(self, q: usize) -> bool {
        q >= 1 && q <= self.width && self.bits & qubit_bit(q, self.width) != 0
    }

    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }
}

impl BitXor for ParityMask {
    type Output = ParityMask;

    fn bitxor(self, rhs: Self) -> Self {
        assert_eq!(self.width, rhs.width, "xor of masks with different widths");
        Self { bits: self.bits ^ rhs.bits, width: self.width }
    }
}

impl fmt::Display for ParityMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.bits, width = self.width)
    }
}

/// A computational basis state `|x_1 ... x_N>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    bits: u32,
    width: usize,
}

impl BasisIndex {
    pub fn new(bits: u32, width: usize) -> Result<Self> {
        check(bits, width)?;
        Ok(Self { bits, width })
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn width(self) -> usize {
        self.width
    }

    /// Value of `x_q`.
    pub fn bit(self, q: usize) -> bool {
        q >= 1 && q <= self.width && self.bits & qubit_bit(q, self.width) != 0
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.bits, width = self.width)
    }
}

/// `x . y = x_1 y_1 ^ ... ^ x_N y_N`.
pub fn inner_product_mod2(x: BasisIndex, y: ParityMask) -> Result<bool> {
    if x.width != y.width {
        return Err(Error::WidthMismatch { expected: x.width, found: y.width });
    }
    Ok(parity(x.bits & y.bits))
}

#[inline]
pub(crate) fn parity(v: u32) -> bool {
    v.count_ones() & 1 == 1
}

/// Update raw wire labels in place. Index `q - 1` holds the label of qubit `q`.
pub(crate) fn apply_label_action_raw(gate: &Gate, labels: &mut [u32]) -> Result<()> {
    match *gate {
        Gate::Cnot(c, t) => labels[t - 1] ^= labels[c - 1],
        Gate::Swap(a, b) => labels.swap(a - 1, b - 1),
        Gate::Cns(c, t) => {
            let (lc, lt) = (labels[c - 1], labels[t - 1]);
            labels[c - 1] = lc ^ lt;
            labels[t - 1] = lc;
        }
        _ => return Err(Error::NotClassical(gate.to_string())),
    }
    Ok(())
}

/// Action of a classical two-qubit gate on the wire labels.
///
/// `Cnot(a, b)` sets `L_b <- L_a ^ L_b`, `Swap` exchanges, and
/// `Cns(a, b)` sets `(L_a, L_b) <- (L_a ^ L_b, L_a)`.
pub fn classical_label_action(gate: &Gate, labels: &[ParityMask]) -> Result<Vec<ParityMask>> {
    let width = labels.len();
    let Some(first) = labels.first() else {
        return Err(Error::InvalidWidth { width: 0, max: MAX_WIDTH });
    };
    if let Some(bad) = labels.iter().find(|l| l.width != first.width) {
        return Err(Error::WidthMismatch { expected: first.width, found: bad.width });
    }
    if !gate.is_classical() {
        return Err(Error::NotClassical(gate.to_string()));
    }
    gate.check_bounds(width)?;
    let mut raw: Vec<u32> = labels.iter().map(|l| l.bits).collect();
    apply_label_action_raw(gate, &mut raw)?;
    Ok(raw.into_iter().map(|bits| ParityMask::new_unchecked(bits, first.width)).collect())
}
