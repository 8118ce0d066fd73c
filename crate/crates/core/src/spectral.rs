//! Fourier collocation on a uniform periodic grid.
//!
//! All functions of the boundary arc length live as samples on
//! `s_m = m ℓ / n`, `m = 0..n`.  Differentiation goes through the FFT with
//! the Nyquist mode dropped, so odd derivatives of real data stay real.
//! Modes below [`NOISE_FLOOR`] of the largest one are zeroed first: the layer
//! recurrences differentiate repeatedly, and amplified rounding noise would
//! otherwise grow with the grid size.

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Relative magnitude below which a Fourier mode counts as rounding noise.
pub const NOISE_FLOOR: f64 = 1e-14;

#[derive(Clone)]
pub struct PeriodicGrid {
    n: usize,
    length: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for PeriodicGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PeriodicGrid")
            .field("n", &self.n)
            .field("length", &self.length)
            .finish()
    }
}

impl PeriodicGrid {
    /// `n` must be even and at least 4.
    pub fn new(n: usize, length: f64) -> Self {
        assert!(n >= 4 && n % 2 == 0, "periodic grid size must be even and >= 4");
        assert!(length > 0.0 && length.is_finite());
        let mut planner = FftPlanner::new();
        PeriodicGrid {
            n,
            length,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn node(&self, m: usize) -> f64 {
        m as f64 * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|m| self.node(m)).collect()
    }

    /// Signed wavenumber of FFT bin `k`, zero at Nyquist.
    fn wavenumber(&self, k: usize) -> f64 {
        let n = self.n;
        if k < n / 2 {
            k as f64
        } else if k == n / 2 {
            0.0
        } else {
            k as f64 - n as f64
        }
    }

    fn spectrum(&self, f: &[f64]) -> Vec<Complex64> {
        assert_eq!(f.len(), self.n, "sample count does not match grid");
        let mut buf: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward.process(&mut buf);
        buf
    }

    /// `d^order f / ds^order` sampled on the grid.
    pub fn derivative_n(&self, f: &[f64], order: u32) -> Vec<f64> {
        if order == 0 {
            return f.to_vec();
        }
        let mut buf = self.spectrum(f);
        let floor = NOISE_FLOOR * buf.iter().map(|c| c.norm()).fold(0.0, f64::max);
        buf.iter_mut().filter(|c| c.norm() < floor).for_each(|c| *c = Complex64::new(0.0, 0.0));
        let nyquist = buf[self.n / 2];
        let scale = 2.0 * PI / self.length;
        for (k, c) in buf.iter_mut().enumerate() {
            let w = self.wavenumber(k) * scale;
            let ik = Complex64::new(0.0, w).powu(order);
            *c *= ik;
        }
        if order % 2 == 0 {
            // Even derivatives keep the Nyquist mode with factor (iπn/ℓ)^order.
            let w = PI * self.n as f64 / self.length;
            buf[self.n / 2] = nyquist * Complex64::new(0.0, w).powu(order).re;
        }
        self.inverse.process(&mut buf);
        let inv = 1.0 / self.n as f64;
        buf.iter().map(|c| c.re * inv).collect()
    }

    pub fn derivative(&self, f: &[f64]) -> Vec<f64> {
        self.derivative_n(f, 1)
    }

    /// Trapezoid rule, spectrally accurate for smooth periodic data.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        assert_eq!(f.len(), self.n);
        f.iter().sum::<f64>() * self.spacing()
    }

    /// Cardinal weights `w_m` with `f(s) = Σ w_m f_m` for the trigonometric
    /// interpolant (Nyquist mode split symmetrically).
    pub fn interp_weights(&self, s: f64) -> Vec<f64> {
        let n = self.n;
        let h = 2.0 * PI / n as f64;
        let x = (s / self.length).rem_euclid(1.0) * 2.0 * PI;
        (0..n)
            .map(|m| {
                let d = x - m as f64 * h;
                let half = 0.5 * d;
                let sn = (0.5 * n as f64 * d).sin();
                let t = half.tan();
                // tan(d/2) only vanishes when s sits on node m itself.
                if t.abs() < 1e-14 {
                    1.0
                } else {
                    sn / (n as f64 * t)
                }
            })
            .collect()
    }

    pub fn interpolate(&self, f: &[f64], s: f64) -> f64 {
        let w = self.interp_weights(s);
        dot(&w, f)
    }

    /// Trigonometric interpolant resampled on a grid `factor` times finer.
    pub fn upsample(&self, f: &[f64], factor: usize) -> Vec<f64> {
        assert!(factor >= 1);
        if factor == 1 {
            return f.to_vec();
        }
        let n = self.n;
        let big = n * factor;
        let spec = self.spectrum(f);
        let mut padded = vec![Complex64::new(0.0, 0.0); big];
        for k in 0..n / 2 {
            padded[k] = spec[k];
        }
        for k in n / 2 + 1..n {
            padded[big - n + k] = spec[k];
        }
        padded[n / 2] = spec[n / 2] * 0.5;
        padded[big - n / 2] = spec[n / 2] * 0.5;
        let mut planner = FftPlanner::new();
        planner.plan_fft_inverse(big).process(&mut padded);
        let inv = 1.0 / n as f64;
        padded.iter().map(|c| c.re * inv).collect()
    }

    /// Magnitudes of the Fourier coefficients `|f̂_k|/n` for `k = 0..=n/2`.
    pub fn spectrum_magnitudes(&self, f: &[f64]) -> Vec<f64> {
        let spec = self.spectrum(f);
        let inv = 1.0 / self.n as f64;
        (0..=self.n / 2).map(|k| spec[k].norm() * inv).collect()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
