use super::Kernel;
use crate::byteplot::ByteImage;

/// Real-valued filter output with the same dimensions as its input image.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseMap {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
}

impl ResponseMap {
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    /// Population mean and variance (divide by N).
    ///
    /// Values are shifted by the first sample before accumulating, so a
    /// constant field yields a variance of exactly zero.
    pub fn mean_variance(&self) -> (f64, f64) {
        let n = self.values.len() as f64;
        let shift = self.values[0];
        let mean_shifted = self.values.iter().map(|v| v - shift).sum::<f64>() / n;
        let var = self
            .values
            .iter()
            .map(|v| {
                let d = v - shift - mean_shifted;
                d * d
            })
            .sum::<f64>()
            / n;
        (shift + mean_shifted, var)
    }
}

/// 2-D convolution (kernel flipped, not correlation) with clamp-to-edge
/// borders. The output has the input's dimensions.
pub fn convolve2d(img: &ByteImage, kernel: &Kernel) -> ResponseMap {
    let plane: Vec<f64> = img.pixels().iter().map(|&p| p as f64).collect();
    convolve_plane(img.width(), img.height(), &plane, kernel)
}

/// [`convolve2d`] over a real-valued row-major plane.
pub fn convolve_plane(w: usize, h: usize, plane: &[f64], kernel: &Kernel) -> ResponseMap {
    assert!(w > 0 && h > 0 && plane.len() == w * h, "plane must be non-empty and w*h long");
    let r = kernel.radius();
    let size = kernel.size();
    let pw = w + 2 * r;

    let mut padded = Vec::with_capacity(pw * (h + 2 * r));
    for py in 0..h + 2 * r {
        let y = py.saturating_sub(r).min(h - 1);
        let row = &plane[y * w..(y + 1) * w];
        for px in 0..pw {
            padded.push(row[px.saturating_sub(r).min(w - 1)]);
        }
    }

    let flipped: Vec<f64> = kernel.coeffs().iter().rev().copied().collect();

    let mut values = vec![0.0; w * h];
    for y in 0..h {
        let out_row = &mut values[y * w..(y + 1) * w];
        for ky in 0..size {
            let krow = &flipped[ky * size..(ky + 1) * size];
            let prow = &padded[(y + ky) * pw..(y + ky + 1) * pw];
            for (kx, &c) in krow.iter().enumerate() {
                if c == 0.0 {
                    continue;
                }
                for (o, &p) in out_row.iter_mut().zip(&prow[kx..kx + w]) {
                    *o += c * p;
                }
            }
        }
    }
    ResponseMap { width: w, height: h, values }
}
