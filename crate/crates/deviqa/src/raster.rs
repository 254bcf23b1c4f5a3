//! Raster types and the small image operations every local-similarity map
//! builds on: luminance conversion, 2x downsampling, 3x3 convolution and
//! Prewitt gradient magnitudes.

use std::path::Path;

use crate::error::{Error, Result};

/// BT.601 luma weights, the convention of the common metric implementations.
const LUMA_R: f64 = 0.299;
const LUMA_G: f64 = 0.587;
const LUMA_B: f64 = 0.114;

/// Single-channel luminance raster, row-major `f64` samples nominally in `[0, 255]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayImage {
    /// Builds an image from row-major samples. Dimensions must be positive,
    /// `data.len()` must equal `width * height` and every sample must be finite.
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        validate_grid(width, height, &data)?;
        Ok(GrayImage { width, height, data })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(width.saturating_mul(height));
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        GrayImage::new(width, height, data)
    }

    pub fn constant(width: usize, height: usize, value: f64) -> Result<Self> {
        GrayImage::new(width, height, vec![value; width.saturating_mul(height)])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Applies `f` to every sample; the result must still be finite everywhere.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Result<Self> {
        GrayImage::new(self.width, self.height, self.data.iter().map(|&v| f(v)).collect())
    }
}

/// Real-valued 2-D field: gradient maps and local-similarity maps.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl ScalarField {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        validate_grid(width, height, &data)?;
        Ok(ScalarField { width, height, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }
}

fn validate_grid(width: usize, height: usize, data: &[f64]) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::invalid("raster dimensions must be positive"));
    }
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| Error::invalid("raster dimensions overflow"))?;
    if data.len() != expected {
        return Err(Error::invalid(format!(
            "data length {} does not match {}x{}",
            data.len(),
            width,
            height
        )));
    }
    if !data.iter().all(|v| v.is_finite()) {
        return Err(Error::invalid("raster samples must all be finite"));
    }
    Ok(())
}

/// Interleaved 8-bit RGB raster as decoded from a file.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbRaster {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RgbRaster {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("raster dimensions must be positive"));
        }
        let expected = width
            .checked_mul(height)
            .and_then(|n| n.checked_mul(3))
            .ok_or_else(|| Error::invalid("raster dimensions overflow"))?;
        if data.len() != expected {
            return Err(Error::invalid(format!(
                "data length {} does not match {}x{}x3",
                data.len(),
                width,
                height
            )));
        }
        Ok(RgbRaster { width, height, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }
}

/// A decoded input image: either already luminance, or 8-bit color.
#[derive(Debug, Clone, PartialEq)]
pub enum DecodedImage {
    Gray(GrayImage),
    Rgb(RgbRaster),
}

impl DecodedImage {
    pub fn width(&self) -> usize {
        match self {
            DecodedImage::Gray(g) => g.width(),
            DecodedImage::Rgb(r) => r.width(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            DecodedImage::Gray(g) => g.height(),
            DecodedImage::Rgb(r) => r.height(),
        }
    }
}

/// BT.601 luminance conversion: `0.299 R + 0.587 G + 0.114 B` per pixel.
///
/// The weighted sum is clamped to `[0, 255]`; the weights sum to 1 only up to
/// rounding, so the clamp keeps the output inside the nominal sample range.
pub fn to_grayscale(rgb: &RgbRaster) -> GrayImage {
    let data = rgb
        .data
        .chunks_exact(3)
        .map(|px| {
            let v = LUMA_R * px[0] as f64 + LUMA_G * px[1] as f64 + LUMA_B * px[2] as f64;
            v.clamp(0.0, 255.0)
        })
        .collect();
    GrayImage {
        width: rgb.width,
        height: rgb.height,
        data,
    }
}

/// Halves each dimension by averaging non-overlapping 2x2 blocks.
///
/// A trailing odd row or column is dropped. The block mean is computed as
/// `((a + b) + (c + d)) / 4`, which is exact for constant blocks.
pub fn downsample2(img: &GrayImage) -> Result<GrayImage> {
    if img.width < 2 || img.height < 2 {
        return Err(Error::invalid("downsample2 requires both dimensions >= 2"));
    }
    let ow = img.width / 2;
    let oh = img.height / 2;
    let mut data = Vec::with_capacity(ow * oh);
    for y in 0..oh {
        for x in 0..ow {
            let a = img.get(2 * x, 2 * y);
            let b = img.get(2 * x + 1, 2 * y);
            let c = img.get(2 * x, 2 * y + 1);
            let d = img.get(2 * x + 1, 2 * y + 1);
            data.push(((a + b) + (c + d)) / 4.0);
        }
    }
    Ok(GrayImage {
        width: ow,
        height: oh,
        data,
    })
}

/// Same-size 3x3 correlation (the kernel is not flipped) with replicate
/// border padding: `out(x, y) = sum k[dy+1][dx+1] * img(x+dx, y+dy)`.
pub fn convolve3x3(img: &GrayImage, kernel: &[[f64; 3]; 3]) -> Result<ScalarField> {
    if kernel.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::invalid("kernel entries must be finite"));
    }
    let (w, h) = (img.width, img.height);
    let mut data = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (ky, row) in kernel.iter().enumerate() {
                let sy = clamp_index(y as isize + ky as isize - 1, h);
                for (kx, &k) in row.iter().enumerate() {
                    let sx = clamp_index(x as isize + kx as isize - 1, w);
                    acc += k * img.get(sx, sy);
                }
            }
            data.push(acc);
        }
    }
    ScalarField::new(w, h, data)
}

#[inline]
fn clamp_index(i: isize, len: usize) -> usize {
    i.clamp(0, len as isize - 1) as usize
}

/// Prewitt gradient magnitude `sqrt(gx^2 + gy^2)` with 1/3-normalized kernels
/// and replicate padding.
///
/// `gx` is computed as `(left column sum - right column sum) / 3` (and `gy`
/// with rows), which matches the +-1/3 kernel taps while keeping the column
/// sums exact for exactly representable samples.
pub fn gradient_magnitude_prewitt(img: &GrayImage) -> ScalarField {
    let (w, h) = (img.width, img.height);
    let third = 1.0 / 3.0;
    let mut data = Vec::with_capacity(w * h);
    for y in 0..h {
        let ym = clamp_index(y as isize - 1, h);
        let yp = clamp_index(y as isize + 1, h);
        for x in 0..w {
            let xm = clamp_index(x as isize - 1, w);
            let xp = clamp_index(x as isize + 1, w);
            let left = img.get(xm, ym) + img.get(xm, y) + img.get(xm, yp);
            let right = img.get(xp, ym) + img.get(xp, y) + img.get(xp, yp);
            let top = img.get(xm, ym) + img.get(x, ym) + img.get(xp, ym);
            let bottom = img.get(xm, yp) + img.get(x, yp) + img.get(xp, yp);
            let gx = (left - right) * third;
            let gy = (top - bottom) * third;
            data.push((gx * gx + gy * gy).sqrt());
        }
    }
    ScalarField {
        width: w,
        height: h,
        data,
    }
}

/// Decodes an 8-bit PNG or BMP file. Color images come back as [`DecodedImage::Rgb`]
/// (alpha is dropped), grayscale ones as [`DecodedImage::Gray`]. Anything that is
/// not 8 bits per channel is rejected.
pub fn load_image(path: &Path) -> Result<DecodedImage> {
    let reader = image::ImageReader::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let decoded = reader.decode().map_err(|e| Error::Decode {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    match decoded {
        image::DynamicImage::ImageLuma8(buf) => {
            let (w, h) = (buf.width() as usize, buf.height() as usize);
            GrayImage::new(w, h, buf.into_raw().into_iter().map(f64::from).collect())
                .map(DecodedImage::Gray)
        }
        image::DynamicImage::ImageLumaA8(buf) => {
            let (w, h) = (buf.width() as usize, buf.height() as usize);
            let data = buf.into_raw().chunks_exact(2).map(|px| f64::from(px[0])).collect();
            GrayImage::new(w, h, data).map(DecodedImage::Gray)
        }
        image::DynamicImage::ImageRgb8(buf) => {
            let (w, h) = (buf.width() as usize, buf.height() as usize);
            RgbRaster::new(w, h, buf.into_raw()).map(DecodedImage::Rgb)
        }
        image::DynamicImage::ImageRgba8(buf) => {
            let (w, h) = (buf.width() as usize, buf.height() as usize);
            let data = buf
                .into_raw()
                .chunks_exact(4)
                .flat_map(|px| [px[0], px[1], px[2]])
                .collect();
            RgbRaster::new(w, h, data).map(DecodedImage::Rgb)
        }
        other => Err(Error::Decode {
            path: path.to_path_buf(),
            message: format!("unsupported sample format {other:?}; only 8-bit images are supported"),
        }),
    }
}

/// Writes a luminance image as an 8-bit PNG or BMP (chosen by extension),
/// rounding samples to the nearest integer in `[0, 255]`.
pub fn save_gray(img: &GrayImage, path: &Path) -> Result<()> {
    let buf: image::ImageBuffer<image::Luma<u8>, Vec<u8>> = image::ImageBuffer::from_raw(
        img.width as u32,
        img.height as u32,
        img.data.iter().map(|&v| v.round().clamp(0.0, 255.0) as u8).collect(),
    )
    .expect("buffer length matches dimensions");
    buf.save(path).map_err(|e| Error::Decode {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// The 3x3 Prewitt kernels with the 1/3 normalization used by
/// [`gradient_magnitude_prewitt`], exposed for use with [`convolve3x3`].
pub fn prewitt_kernels() -> ([[f64; 3]; 3], [[f64; 3]; 3]) {
    let t = 1.0 / 3.0;
    let kx = [[t, 0.0, -t], [t, 0.0, -t], [t, 0.0, -t]];
    let ky = [[t, t, t], [0.0, 0.0, 0.0], [-t, -t, -t]];
    (kx, ky)
}
