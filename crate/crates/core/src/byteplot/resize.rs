use super::{ByteImage, ByteplotError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResizeMethod {
    Nearest,
    #[default]
    Bilinear,
}

/// Source coordinate sampled for target index `t`:
/// `s = (t + 0.5) * src / dst - 0.5`, clamped to `[0, src - 1]`.
#[inline]
fn sample_point(t: usize, src: usize, dst: usize) -> f64 {
    let s = (t as f64 + 0.5) * (src as f64 / dst as f64) - 0.5;
    s.clamp(0.0, (src - 1) as f64)
}

/// Nearest index; an exact .5 tie resolves to the lower index.
#[inline]
fn nearest_index(s: f64) -> usize {
    (s - 0.5).ceil().max(0.0) as usize
}

/// Resizes to `target_w` x `target_h`. Resizing to the current dimensions
/// returns identical pixels for both methods.
pub fn resize_image(img: &ByteImage, target_w: usize, target_h: usize, method: ResizeMethod) -> Result<ByteImage> {
    if target_w == 0 || target_h == 0 {
        return Err(ByteplotError::InvalidDimensions { width: target_w, height: target_h });
    }
    let (sw, sh) = (img.width(), img.height());
    if (sw, sh) == (target_w, target_h) {
        return ByteImage::from_raw(sw, sh, img.pixels().to_vec());
    }

    let xs: Vec<f64> = (0..target_w).map(|t| sample_point(t, sw, target_w)).collect();
    let ys: Vec<f64> = (0..target_h).map(|t| sample_point(t, sh, target_h)).collect();
    let mut out = Vec::with_capacity(target_w * target_h);

    match method {
        ResizeMethod::Nearest => {
            let xi: Vec<usize> = xs.iter().map(|&s| nearest_index(s)).collect();
            for &sy in &ys {
                let y = nearest_index(sy);
                out.extend(xi.iter().map(|&x| img.get(x, y)));
            }
        }
        ResizeMethod::Bilinear => {
            for &sy in &ys {
                let y0 = sy.floor() as usize;
                let y1 = (y0 + 1).min(sh - 1);
                let fy = sy - y0 as f64;
                for &sx in &xs {
                    let x0 = sx.floor() as usize;
                    let x1 = (x0 + 1).min(sw - 1);
                    let fx = sx - x0 as f64;
                    let top = (1.0 - fx) * img.get(x0, y0) as f64 + fx * img.get(x1, y0) as f64;
                    let bottom = (1.0 - fx) * img.get(x0, y1) as f64 + fx * img.get(x1, y1) as f64;
                    let v = (1.0 - fy) * top + fy * bottom;
                    out.push((v + 0.5).floor().clamp(0.0, 255.0) as u8);
                }
            }
        }
    }
    ByteImage::from_raw(target_w, target_h, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Scalar bilinear evaluation written out per target pixel.
    fn bilinear_oracle(src: &[[f64; 4]; 4], tx: usize, ty: usize) -> u8 {
        let scale = 4.0 / 2.0;
        let sx = ((tx as f64 + 0.5) * scale - 0.5).clamp(0.0, 3.0);
        let sy = ((ty as f64 + 0.5) * scale - 0.5).clamp(0.0, 3.0);
        let (x0, y0) = (sx.floor(), sy.floor());
        let (x1, y1) = ((x0 + 1.0).min(3.0), (y0 + 1.0).min(3.0));
        let (ax, ay) = (sx - x0, sy - y0);
        let p = |x: f64, y: f64| src[y as usize][x as usize];
        let v = p(x0, y0) * (1.0 - ax) * (1.0 - ay)
            + p(x1, y0) * ax * (1.0 - ay)
            + p(x0, y1) * (1.0 - ax) * ay
            + p(x1, y1) * ax * ay;
        (v + 0.5).floor() as u8
    }

    #[test]
    fn nearest_2x2_to_1x1() {
        let img = ByteImage::from_raw(2, 2, vec![0, 0, 255, 255]).unwrap();
        let out = resize_image(&img, 1, 1, ResizeMethod::Nearest).unwrap();
        assert_eq!(out.pixels(), &[0]);
    }

    #[test]
    fn bilinear_ramp_4x4_to_2x2() {
        let mut src = [[0.0; 4]; 4];
        let mut px = Vec::new();
        for (y, row) in src.iter_mut().enumerate() {
            for (x, v) in row.iter_mut().enumerate() {
                let p = (x * 20 + y * 60) as u8;
                *v = p as f64;
                px.push(p);
            }
        }
        let img = ByteImage::from_raw(4, 4, px).unwrap();
        let out = resize_image(&img, 2, 2, ResizeMethod::Bilinear).unwrap();
        let expected: Vec<u8> =
            (0..2).flat_map(|y| (0..2).map(move |x| (x, y))).map(|(x, y)| bilinear_oracle(&src, x, y)).collect();
        // frozen from the oracle: sample points 0.5 and 2.5 on both axes
        assert_eq!(expected, vec![40, 80, 160, 200]);
        assert_eq!(out.pixels(), &expected[..]);
    }

    #[test]
    fn upscale_nearest_replicates() {
        let img = ByteImage::from_raw(2, 1, vec![10, 200]).unwrap();
        let out = resize_image(&img, 4, 1, ResizeMethod::Nearest).unwrap();
        assert_eq!(out.pixels(), &[10, 10, 200, 200]);
    }

    #[test]
    fn zero_target_rejected() {
        let img = ByteImage::filled(2, 2, 1).unwrap();
        assert!(resize_image(&img, 0, 3, ResizeMethod::Bilinear).is_err());
    }

    fn image() -> impl Strategy<Value = ByteImage> {
        (1usize..20, 1usize..20).prop_flat_map(|(w, h)| {
            prop::collection::vec(any::<u8>(), w * h).prop_map(move |px| ByteImage::from_raw(w, h, px).unwrap())
        })
    }

    proptest! {
        #[test]
        fn identity_resize(img in image()) {
            for m in [ResizeMethod::Nearest, ResizeMethod::Bilinear] {
                let out = resize_image(&img, img.width(), img.height(), m).unwrap();
                prop_assert_eq!(out.pixels(), img.pixels());
            }
        }

        #[test]
        fn output_within_source_range(img in image(), tw in 1usize..40, th in 1usize..40) {
            let lo = *img.pixels().iter().min().unwrap();
            let hi = *img.pixels().iter().max().unwrap();
            for m in [ResizeMethod::Nearest, ResizeMethod::Bilinear] {
                let out = resize_image(&img, tw, th, m).unwrap();
                prop_assert_eq!((out.width(), out.height()), (tw, th));
                prop_assert!(out.pixels().iter().all(|&p| p >= lo && p <= hi));
            }
        }
    }
}
