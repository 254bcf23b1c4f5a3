//! Local-similarity map generators.
//!
//! Each generator turns a (reference, distorted) pair of luminance images into
//! a per-pixel [`ScalarField`] that the pooling strategies consume: squared
//! error, gradient-magnitude similarity and local SSIM.

use crate::error::{Error, Result};
use crate::raster::{gradient_magnitude_prewitt, GrayImage, ScalarField};

/// Parameters of the gradient-magnitude similarity map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmsParams {
    /// Stability constant on the squared-gradient scale; must be positive.
    ///
    /// The default of 170 suits gradients of `[0, 255]` luminance computed
    /// with the 1/3-normalized Prewitt kernels after one 2x downsampling.
    pub c: f64,
}

impl Default for GmsParams {
    fn default() -> Self {
        GmsParams { c: 170.0 }
    }
}

impl GmsParams {
    pub fn new(c: f64) -> Result<Self> {
        let p = GmsParams { c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.c.is_finite() || self.c <= 0.0 {
            return Err(Error::invalid(format!("gms constant c must be positive, got {}", self.c)));
        }
        Ok(())
    }
}

/// Parameters of the local SSIM map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimParams {
    pub k1: f64,
    pub k2: f64,
    /// Dynamic range `L` of the samples (255 for 8-bit luminance).
    pub dynamic_range: f64,
    /// Gaussian window size; odd and >= 3.
    pub window_size: usize,
    pub sigma: f64,
}

impl Default for SsimParams {
    fn default() -> Self {
        SsimParams {
            k1: 0.01,
            k2: 0.03,
            dynamic_range: 255.0,
            window_size: 11,
            sigma: 1.5,
        }
    }
}

impl SsimParams {
    pub fn validate(&self) -> Result<()> {
        if !self.k1.is_finite() || self.k1 <= 0.0 || self.k1 >= 1.0 {
            return Err(Error::invalid(format!("k1 must be in (0, 1), got {}", self.k1)));
        }
        if !self.k2.is_finite() || self.k2 <= 0.0 || self.k2 >= 1.0 {
            return Err(Error::invalid(format!("k2 must be in (0, 1), got {}", self.k2)));
        }
        if !self.dynamic_range.is_finite() || self.dynamic_range <= 0.0 {
            return Err(Error::invalid("dynamic range must be positive"));
        }
        if self.window_size < 3 || self.window_size.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "window size must be odd and >= 3, got {}",
                self.window_size
            )));
        }
        if !self.sigma.is_finite() || self.sigma <= 0.0 {
            return Err(Error::invalid("sigma must be positive"));
        }
        Ok(())
    }
}

fn check_same_dims(a: &GrayImage, b: &GrayImage) -> Result<()> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(Error::dims((a.width(), a.height()), (b.width(), b.height())));
    }
    Ok(())
}

/// Gradient-magnitude similarity:
/// `(2 * G_r * G_d + c) / (G_r^2 + G_d^2 + c)` per pixel, where the gradient
/// magnitudes come from the 1/3-normalized Prewitt operator.
///
/// Every value lies in `(0, 1]`, with 1 exactly where the magnitudes coincide.
/// Inputs are used as given; any grayscale conversion or downsampling is the
/// caller's (or the index registry's) concern.
pub fn gms_map(reference: &GrayImage, distorted: &GrayImage, params: &GmsParams) -> Result<ScalarField> {
    check_same_dims(reference, distorted)?;
    params.validate()?;
    let gr = gradient_magnitude_prewitt(reference);
    let gd = gradient_magnitude_prewitt(distorted);
    let c = params.c;
    let data = gr
        .data()
        .iter()
        .zip(gd.data())
        .map(|(&a, &b)| (2.0 * a * b + c) / (a * a + b * b + c))
        .collect();
    ScalarField::new(reference.width(), reference.height(), data)
}

/// Per-pixel squared error `(r - d)^2`. Its mean pooling is the global MSE.
pub fn mse_map(reference: &GrayImage, distorted: &GrayImage) -> Result<ScalarField> {
    check_same_dims(reference, distorted)?;
    let data = reference
        .data()
        .iter()
        .zip(distorted.data())
        .map(|(&r, &d)| {
            let e = r - d;
            e * e
        })
        .collect();
    ScalarField::new(reference.width(), reference.height(), data)
}

/// Local SSIM map from Gaussian-weighted means, variances and covariance:
///
/// ```text
/// ssim = (2 mu_r mu_d + C1)(2 cov + C2) / ((mu_r^2 + mu_d^2 + C1)(var_r + var_d + C2))
/// ```
///
/// with `C1 = (k1 L)^2`, `C2 = (k2 L)^2`. The output has the same size as the
/// inputs (the window reads past borders through replicate padding) and each
/// value is clamped to `[-1, 1]` against last-ulp spill from the windowed
/// moments. Identical inputs produce a map that is exactly 1 everywhere.
pub fn ssim_map(reference: &GrayImage, distorted: &GrayImage, params: &SsimParams) -> Result<ScalarField> {
    check_same_dims(reference, distorted)?;
    params.validate()?;
    let (w, h) = (reference.width(), reference.height());
    if w < params.window_size || h < params.window_size {
        return Err(Error::invalid(format!(
            "image {}x{} is smaller than the {} pixel window",
            w, h, params.window_size
        )));
    }

    let window = gaussian_window(params.window_size, params.sigma);
    let x = reference.data();
    let y = distorted.data();
    let xx: Vec<f64> = x.iter().map(|&v| v * v).collect();
    let yy: Vec<f64> = y.iter().map(|&v| v * v).collect();
    let xy: Vec<f64> = x.iter().zip(y).map(|(&a, &b)| a * b).collect();

    let mu_x = gaussian_filter(x, w, h, &window);
    let mu_y = gaussian_filter(y, w, h, &window);
    let m_xx = gaussian_filter(&xx, w, h, &window);
    let m_yy = gaussian_filter(&yy, w, h, &window);
    let m_xy = gaussian_filter(&xy, w, h, &window);

    let c1 = (params.k1 * params.dynamic_range).powi(2);
    let c2 = (params.k2 * params.dynamic_range).powi(2);

    let mut data = Vec::with_capacity(w * h);
    for i in 0..w * h {
        let mx = mu_x[i];
        let my = mu_y[i];
        let var_x = m_xx[i] - mx * mx;
        let var_y = m_yy[i] - my * my;
        let cov = m_xy[i] - mx * my;
        let v = ((2.0 * mx * my + c1) * (2.0 * cov + c2))
            / ((mx * mx + my * my + c1) * (var_x + var_y + c2));
        data.push(v.clamp(-1.0, 1.0));
    }
    ScalarField::new(w, h, data)
}

/// Normalized 1-D Gaussian window of odd length.
fn gaussian_window(size: usize, sigma: f64) -> Vec<f64> {
    let half = (size / 2) as isize;
    let mut w: Vec<f64> = (-half..=half)
        .map(|i| (-(i as f64 * i as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = w.iter().sum();
    for v in &mut w {
        *v /= total;
    }
    w
}

/// Separable windowed correlation with replicate padding; same-size output.
fn gaussian_filter(data: &[f64], width: usize, height: usize, window: &[f64]) -> Vec<f64> {
    let half = (window.len() / 2) as isize;
    let clamp = |i: isize, len: usize| i.clamp(0, len as isize - 1) as usize;

    let mut tmp = vec![0.0; data.len()];
    for y in 0..height {
        let row = &data[y * width..(y + 1) * width];
        for x in 0..width {
            let mut acc = 0.0;
            for (k, &wk) in window.iter().enumerate() {
                let sx = clamp(x as isize + k as isize - half, width);
                acc += wk * row[sx];
            }
            tmp[y * width + x] = acc;
        }
    }
    let mut out = vec![0.0; data.len()];
    for y in 0..height {
        for x in 0..width {
            let mut acc = 0.0;
            for (k, &wk) in window.iter().enumerate() {
                let sy = clamp(y as isize + k as isize - half, height);
                acc += wk * tmp[sy * width + x];
            }
            out[y * width + x] = acc;
        }
    }
    out
}
