use crate::error::{Error, Result};
use crate::parity::{BasisIndex, MAX_WIDTH};

/// Truth table of `f: {0,1}^N -> {0,1}`, entry `x` holding `f(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    width: usize,
    table: Vec<bool>,
}

impl BooleanFunction {
    pub fn new(width: usize, table: Vec<bool>) -> Result<Self> {
        if width == 0 || width > MAX_WIDTH {
            return Err(Error::InvalidWidth { width, max: MAX_WIDTH });
        }
        let expected = 1usize << width;
        if table.len() != expected {
            return Err(Error::LengthMismatch { expected, found: table.len() });
        }
        Ok(Self { width, table })
    }

    pub fn from_fn(width: usize, f: impl Fn(u32) -> bool) -> Result<Self> {
        if width == 0 || width > MAX_WIDTH {
            return Err(Error::InvalidWidth { width, max: MAX_WIDTH });
        }
        Self::new(width, (0..1u32 << width).map(f).collect())
    }

    pub fn constant(width: usize, value: bool) -> Result<Self> {
        Self::from_fn(width, |_| value)
    }

    /// Indicator of a set of marked basis states.
    pub fn indicator(width: usize, marked: &[BasisIndex]) -> Result<Self> {
        let mut table = vec![false; 1usize << width.min(MAX_WIDTH)];
        for m in marked {
            if m.width() != width {
                return Err(Error::WidthMismatch { expected: width, found: m.width() });
            }
            table[m.bits() as usize] = true;
        }
        Self::new(width, table)
    }

    /// AND of all `width` inputs.
    pub fn and_all(width: usize) -> Result<Self> {
        Self::from_fn(width, |x| x.count_ones() as usize == width)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn eval(&self, x: u32) -> bool {
        self.table[x as usize]
    }

    pub fn ones(&self) -> usize {
        self.table.iter().filter(|&&b| b).count()
    }
}
