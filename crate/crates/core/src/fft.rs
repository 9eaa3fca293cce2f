//! In-place iterative radix-2 Cooley–Tukey transform.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `X_k = Σ_j x_j e^{−2πijk/n}`
    Forward,
    /// `x_j = (1/n) Σ_k X_k e^{+2πijk/n}`
    Inverse,
}

/// Precomputed twiddles and bit-reversal table for one power-of-two length.
#[derive(Debug, Clone)]
pub struct FftPlan {
    len: usize,
    twiddles: Vec<Complex64>,
    rev: Vec<u32>,
}

impl FftPlan {
    pub fn new(len: usize) -> Result<Self> {
        if !len.is_power_of_two() {
            return Err(Error::FftLength(len));
        }
        let twiddles = (0..len / 2)
            .map(|k| {
                let angle = -2.0 * core::f64::consts::PI * k as f64 / len as f64;
                Complex64::new(libm::cos(angle), libm::sin(angle))
            })
            .collect();
        let bits = len.trailing_zeros();
        let rev = (0..len as u32)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (32 - bits) })
            .collect();
        Ok(Self { len, twiddles, rev })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn process(&self, buf: &mut [Complex64], direction: Direction) -> Result<()> {
        let n = self.len;
        if buf.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: buf.len(),
            });
        }
        for i in 0..n {
            let j = self.rev[i] as usize;
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut half = 1;
        while half < n {
            let stride = n / (2 * half);
            for start in (0..n).step_by(2 * half) {
                for k in 0..half {
                    let w = self.twiddles[k * stride];
                    let w = match direction {
                        Direction::Forward => w,
                        Direction::Inverse => w.conj(),
                    };
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            half *= 2;
        }
        if direction == Direction::Inverse {
            let scale = 1.0 / n as f64;
            buf.iter_mut().for_each(|v| *v *= scale);
        }
        Ok(())
    }

    pub fn forward(&self, buf: &mut [Complex64]) -> Result<()> {
        self.process(buf, Direction::Forward)
    }

    pub fn inverse(&self, buf: &mut [Complex64]) -> Result<()> {
        self.process(buf, Direction::Inverse)
    }
}

/// One-shot transform of a power-of-two length sequence.
pub fn fft(x: &[Complex64], direction: Direction) -> Result<Vec<Complex64>> {
    let plan = FftPlan::new(x.len())?;
    let mut buf = x.to_vec();
    plan.process(&mut buf, direction)?;
    Ok(buf)
}
