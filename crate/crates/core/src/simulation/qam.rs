use num_complex::Complex64;

use crate::error::{Error, Result};

/// Square Gray-coded QAM with unit average symbol energy.
///
/// A label's upper half of bits selects the in-phase level and the lower
/// half the quadrature level, each through a binary reflected Gray code, so
/// horizontally or vertically adjacent points differ in exactly one bit.
/// Bits are read most significant first.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    order: usize,
    bits_per_axis: u32,
    scale: f64,
    points: Vec<Complex64>,
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

fn gray_inverse(mut g: usize) -> usize {
    let mut i = g;
    while g > 1 {
        g >>= 1;
        i ^= g;
    }
    i
}

impl Constellation {
    pub fn qam(order: usize) -> Result<Self> {
        if order < 4 || !order.is_power_of_two() || order.trailing_zeros() % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "QAM order {order} must be an even power of two (4, 16, 64, ...)"
            )));
        }
        let bits_per_axis = order.trailing_zeros() / 2;
        let side = 1usize << bits_per_axis;
        // mean energy of the unscaled grid {±1, ±3, ...}² is 2(M−1)/3
        let scale = (3.0 / (2.0 * (order as f64 - 1.0))).sqrt();
        let level = |g: usize| (2.0 * gray_inverse(g) as f64 - (side as f64 - 1.0)) * scale;
        let points = (0..order)
            .map(|label| Complex64::new(level(label >> bits_per_axis), level(label & (side - 1))))
            .collect();
        Ok(Self {
            order,
            bits_per_axis,
            scale,
            points,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits_per_symbol(&self) -> usize {
        2 * self.bits_per_axis as usize
    }

    /// Constellation points indexed by their integer label.
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Smallest distance between two points.
    pub fn min_distance(&self) -> f64 {
        2.0 * self.scale
    }

    /// Largest-magnitude point on the positive diagonal.
    pub fn corner(&self) -> Complex64 {
        let a = ((1usize << self.bits_per_axis) as f64 - 1.0) * self.scale;
        Complex64::new(a, a)
    }

    pub fn label_bits(&self, label: usize) -> Vec<u8> {
        let n = self.bits_per_symbol();
        (0..n).map(|i| ((label >> (n - 1 - i)) & 1) as u8).collect()
    }

    /// Maps groups of `bits_per_symbol` bits to symbols.
    pub fn modulate(&self, bits: &[u8]) -> Result<Vec<Complex64>> {
        let n = self.bits_per_symbol();
        if bits.len() % n != 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} bits is not a multiple of {n} bits per symbol",
                bits.len()
            )));
        }
        Ok(bits
            .chunks_exact(n)
            .map(|chunk| {
                let label = chunk
                    .iter()
                    .fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize);
                self.points[label]
            })
            .collect())
    }

    /// Label of the nearest point.
    pub fn detect(&self, z: Complex64) -> usize {
        let side = 1usize << self.bits_per_axis;
        let axis = |v: f64| {
            let i = ((v / self.scale + side as f64 - 1.0) / 2.0).round();
            gray(i.clamp(0.0, side as f64 - 1.0) as usize)
        };
        (axis(z.re) << self.bits_per_axis) | axis(z.im)
    }

    /// Nearest-point hard decisions, returned as bits.
    pub fn demodulate_hard(&self, symbols: &[Complex64]) -> Vec<u8> {
        symbols
            .iter()
            .flat_map(|&z| self.label_bits(self.detect(z)))
            .collect()
    }
}
