//! Unnormalized Walsh-Hadamard transform relating target phases to
//! rotation angles.
//!
//! With `H[x][y] = (-1)^{x.y}` the network realizes
//! `theta_x = 1/2 * sum_y H[x][y] phi_y`, and since `H * H = 2^N * I` the
//! angles that program a given phase vector are `phi = H theta / 2^{N-1}`.

use std::f64::consts::PI;

use crate::boolean::BooleanFunction;
use crate::error::{Error, Result};
use crate::parity::MAX_WIDTH;

/// In-place butterfly computing `v'_x = sum_y (-1)^{x.y} v_y`.
///
/// Passes run from stride 1 upward with a fixed summation order, so the
/// output is bit-identical across runs.
pub fn wht_inplace(v: &mut [f64]) -> Result<()> {
    let n = v.len();
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let mut h = 1;
    while h < n {
        for block in v.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
    Ok(())
}

fn check_vector(width: usize, values: &[f64]) -> Result<()> {
    if width == 0 || width > MAX_WIDTH {
        return Err(Error::InvalidWidth { width, max: MAX_WIDTH });
    }
    let expected = 1usize << width;
    if values.len() != expected {
        return Err(Error::LengthMismatch { expected, found: values.len() });
    }
    if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFiniteAngle(bad));
    }
    Ok(())
}

/// Target phases `theta_x`, indexed by basis state.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSpec {
    width: usize,
    theta: Vec<f64>,
}

impl PhaseSpec {
    pub fn new(width: usize, theta: Vec<f64>) -> Result<Self> {
        check_vector(width, &theta)?;
        Ok(Self { width, theta })
    }

    pub fn zeros(width: usize) -> Result<Self> {
        Self::new(width, vec![0.0; 1usize << width.min(MAX_WIDTH)])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.theta
    }
}

/// Rotation angles `phi_y`, indexed by condition mask; `phi_0` is the
/// global-phase knob.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleSpec {
    width: usize,
    phi: Vec<f64>,
}

impl AngleSpec {
    pub fn new(width: usize, phi: Vec<f64>) -> Result<Self> {
        check_vector(width, &phi)?;
        Ok(Self { width, phi })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn global_knob(&self) -> f64 {
        self.phi[0]
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.phi
    }
}

/// `phi = H theta / 2^{N-1}`. Angles are left unreduced.
pub fn angles_from_phases(t: &PhaseSpec) -> AngleSpec {
    let mut phi = t.theta.clone();
    wht_inplace(&mut phi).expect("length is a power of two");
    let scale = 0.5f64.powi(t.width as i32 - 1);
    for v in &mut phi {
        *v *= scale;
    }
    AngleSpec { width: t.width, phi }
}

/// `theta_x = 1/2 sum_y (-1)^{x.y} phi_y`.
pub fn phases_from_angles(a: &AngleSpec) -> PhaseSpec {
    let mut theta = a.phi.clone();
    wht_inplace(&mut theta).expect("length is a power of two");
    for v in &mut theta {
        *v *= 0.5;
    }
    PhaseSpec { width: a.width, theta }
}

/// `theta_x = scale * f(x)`; `scale = pi` gives the oracle `U_f`.
pub fn phase_spec_from_boolean(f: &BooleanFunction, scale: f64) -> PhaseSpec {
    let theta = f.table().iter().map(|&b| if b { scale } else { 0.0 }).collect();
    PhaseSpec { width: f.width(), theta }
}

/// Reduce an angle into `(-pi, pi]`, returning the reduced value and the
/// number of whole turns removed. Values already in range come back
/// unchanged, bit for bit.
pub fn normalize_angle(a: f64) -> (f64, i64) {
    if a > -PI && a <= PI {
        return (a, 0);
    }
    let turns = ((a - PI) / (2.0 * PI)).ceil();
    let mut r = a - turns * 2.0 * PI;
    let mut k = turns as i64;
    // rounding at the interval ends
    if r <= -PI {
        r += 2.0 * PI;
        k -= 1;
    } else if r > PI {
        r -= 2.0 * PI;
        k += 1;
    }
    (r, k)
}
