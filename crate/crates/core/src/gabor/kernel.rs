use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{GaborError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaborParams {
    /// Pixels per cycle.
    pub wavelength: f64,
    /// Radians.
    pub orientation: f64,
    /// Radians.
    pub phase: f64,
    /// Gaussian envelope standard deviation, pixels.
    pub sigma: f64,
    /// Spatial aspect ratio.
    pub gamma: f64,
    /// Odd side length of the square kernel.
    pub kernel_size: usize,
}

impl GaborParams {
    pub fn validate(&self) -> Result<()> {
        if self.kernel_size.is_multiple_of(2) {
            return Err(GaborError::InvalidParams(format!("kernel size must be odd, got {}", self.kernel_size)));
        }
        for (name, v) in [("wavelength", self.wavelength), ("sigma", self.sigma), ("gamma", self.gamma)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(GaborError::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.orientation.is_finite() || !self.phase.is_finite() {
            return Err(GaborError::InvalidParams("orientation and phase must be finite".into()));
        }
        Ok(())
    }
}

/// Square grid of coefficients, row-major with `y` growing downward.
/// The centre tap sits at `((size - 1) / 2, (size - 1) / 2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    size: usize,
    coeffs: Vec<f64>,
}

impl Kernel {
    pub fn from_coeffs(size: usize, coeffs: Vec<f64>) -> Result<Self> {
        if size.is_multiple_of(2) || coeffs.len() != size * size {
            return Err(GaborError::InvalidParams(format!(
                "kernel needs odd size and size^2 coefficients (size {size}, {} given)",
                coeffs.len()
            )));
        }
        Ok(Self { size, coeffs })
    }

    pub fn identity(size: usize) -> Result<Self> {
        let mut coeffs = vec![0.0; size * size];
        let c = size / 2;
        coeffs[c * size + c] = 1.0;
        Self::from_coeffs(size, coeffs)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn radius(&self) -> usize {
        self.size / 2
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient at row `y`, column `x` (grid indices, not offsets).
    #[inline]
    pub fn at(&self, x: usize, y: usize) -> f64 {
        self.coeffs[y * self.size + x]
    }

    pub fn sum(&self) -> f64 {
        self.coeffs.iter().sum()
    }

    pub fn transpose(&self) -> Kernel {
        let n = self.size;
        let coeffs = (0..n * n).map(|i| self.at(i / n, i % n)).collect();
        Kernel { size: n, coeffs }
    }
}

/// Samples `g(x, y) = exp(-(x'^2 + gamma^2 y'^2) / (2 sigma^2)) * cos(2 pi x' / lambda + psi)`
/// at integer offsets, with `x' = x cos(theta) + y sin(theta)` and
/// `y' = -x sin(theta) + y cos(theta)`. No normalization is applied.
pub fn make_gabor_kernel(p: &GaborParams) -> Result<Kernel> {
    p.validate()?;
    let r = (p.kernel_size / 2) as i64;
    let (sin_t, cos_t) = p.orientation.sin_cos();
    let two_sigma_sq = 2.0 * p.sigma * p.sigma;
    let gamma_sq = p.gamma * p.gamma;
    let mut coeffs = Vec::with_capacity(p.kernel_size * p.kernel_size);
    for y in -r..=r {
        for x in -r..=r {
            let (x, y) = (x as f64, y as f64);
            let xr = x * cos_t + y * sin_t;
            let yr = -x * sin_t + y * cos_t;
            let envelope = (-(xr * xr + gamma_sq * yr * yr) / two_sigma_sq).exp();
            let carrier = (2.0 * PI * xr / p.wavelength + p.phase).cos();
            coeffs.push(envelope * carrier);
        }
    }
    Ok(Kernel { size: p.kernel_size, coeffs })
}

/// Frequencies x orientations sharing one envelope configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GaborBank {
    /// Cycles per pixel; wavelength is `1 / f`.
    pub frequencies: Vec<f64>,
    /// Radians.
    pub orientations: Vec<f64>,
    pub phase: f64,
    pub sigma: f64,
    pub gamma: f64,
    pub kernel_size: usize,
}

impl Default for GaborBank {
    fn default() -> Self {
        Self {
            frequencies: vec![0.1, 0.2, 0.3],
            orientations: vec![0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0],
            phase: 0.0,
            sigma: 3.0,
            gamma: 0.5,
            kernel_size: 9,
        }
    }
}

impl GaborBank {
    /// Length of the jet: two statistics per (frequency, orientation) pair.
    pub fn feature_len(&self) -> usize {
        self.frequencies.len() * self.orientations.len() * 2
    }

    pub fn params(&self, frequency: f64, orientation: f64) -> GaborParams {
        GaborParams {
            wavelength: 1.0 / frequency,
            orientation,
            phase: self.phase,
            sigma: self.sigma,
            gamma: self.gamma,
            kernel_size: self.kernel_size,
        }
    }

    /// Kernels in jet order: frequency-major, then orientation.
    pub fn kernels(&self) -> Result<Vec<Kernel>> {
        if self.frequencies.is_empty() || self.orientations.is_empty() {
            return Err(GaborError::InvalidParams("bank needs at least one frequency and one orientation".into()));
        }
        if let Some(f) = self.frequencies.iter().find(|f| !(**f > 0.0 && f.is_finite())) {
            return Err(GaborError::InvalidParams(format!("frequency must be positive, got {f}")));
        }
        self.frequencies
            .iter()
            .flat_map(|&f| self.orientations.iter().map(move |&o| (f, o)))
            .map(|(f, o)| make_gabor_kernel(&self.params(f, o)))
            .collect()
    }

    /// CSV column names, `g_f{fi}_o{oi}_mean` / `g_f{fi}_o{oi}_var` in jet order.
    pub fn feature_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.feature_len());
        for fi in 0..self.frequencies.len() {
            for oi in 0..self.orientations.len() {
                names.push(format!("g_f{fi}_o{oi}_mean"));
                names.push(format!("g_f{fi}_o{oi}_var"));
            }
        }
        names
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> GaborParams {
        GaborParams { wavelength: 10.0, orientation: 0.0, phase: 0.0, sigma: 3.0, gamma: 0.5, kernel_size: 9 }
    }

    #[test]
    fn centre_is_one() {
        for &o in &[0.0, 0.3, PI / 2.0, 2.0] {
            for &w in &[10.0, 5.0, 10.0 / 3.0] {
                let k = make_gabor_kernel(&GaborParams { wavelength: w, orientation: o, ..base() }).unwrap();
                assert_eq!(k.at(4, 4), 1.0);
            }
        }
    }

    #[test]
    fn golden_offset_coefficient() {
        // exp(-4/18) * cos(0.4 pi), evaluated independently:
        // exp(-0.2222222222) = 0.8007374029168081, cos(1.2566370614) = 0.30901699437494745
        let golden = 0.247_441_465_532_953_32;
        let k = make_gabor_kernel(&base()).unwrap();
        // offset (x=2, y=0) -> column 6, row 4
        assert!((k.at(6, 4) - golden).abs() < 1e-15, "{}", k.at(6, 4));
        assert!((k.at(2, 4) - golden).abs() < 1e-15);
    }

    #[test]
    fn quarter_turn_is_transpose() {
        for &w in &[10.0, 5.0, 10.0 / 3.0] {
            let k0 = make_gabor_kernel(&GaborParams { wavelength: w, ..base() }).unwrap();
            let k90 = make_gabor_kernel(&GaborParams { wavelength: w, orientation: PI / 2.0, ..base() }).unwrap();
            let t = k0.transpose();
            for (a, b) in k90.coeffs().iter().zip(t.coeffs()) {
                assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn invalid_params() {
        assert!(make_gabor_kernel(&GaborParams { kernel_size: 8, ..base() }).is_err());
        assert!(make_gabor_kernel(&GaborParams { sigma: 0.0, ..base() }).is_err());
        assert!(make_gabor_kernel(&GaborParams { wavelength: -1.0, ..base() }).is_err());
        assert!(make_gabor_kernel(&GaborParams { gamma: 0.0, ..base() }).is_err());
    }

    #[test]
    fn default_bank_shape() {
        let bank = GaborBank::default();
        assert_eq!(bank.feature_len(), 24);
        assert_eq!(bank.kernels().unwrap().len(), 12);
        let names = bank.feature_names();
        assert_eq!(names[0], "g_f0_o0_mean");
        assert_eq!(names[1], "g_f0_o0_var");
        assert_eq!(names[23], "g_f2_o3_var");
    }

    #[test]
    fn empty_bank_rejected() {
        let bank = GaborBank { orientations: vec![], ..GaborBank::default() };
        assert!(bank.kernels().is_err());
    }
}
