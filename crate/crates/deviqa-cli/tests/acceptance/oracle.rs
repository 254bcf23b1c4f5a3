//! Independent, deliberately unoptimized reference implementations written
//! straight from the defining formulas. Everything here recomputes from
//! scratch with plain loops and running sums so it shares no code path with
//! the library it checks.

/// Replicate-padded sample read.
fn at(data: &[f64], width: usize, height: usize, x: isize, y: isize) -> f64 {
    let xi = x.clamp(0, width as isize - 1) as usize;
    let yi = y.clamp(0, height as isize - 1) as usize;
    data[yi * width + xi]
}

/// Non-overlapping 2x2 block means, trailing odd line dropped.
pub fn downsample2(data: &[f64], width: usize, height: usize) -> (Vec<f64>, usize, usize) {
    let (ow, oh) = (width / 2, height / 2);
    let mut out = Vec::with_capacity(ow * oh);
    for y in 0..oh {
        for x in 0..ow {
            let s = data[2 * y * width + 2 * x]
                + data[2 * y * width + 2 * x + 1]
                + data[(2 * y + 1) * width + 2 * x]
                + data[(2 * y + 1) * width + 2 * x + 1];
            out.push(s / 4.0);
        }
    }
    (out, ow, oh)
}

/// Prewitt gradient magnitude via the literal 3x3 correlation taps.
pub fn prewitt_magnitude(data: &[f64], width: usize, height: usize) -> Vec<f64> {
    let t = 1.0 / 3.0;
    let kx = [[t, 0.0, -t], [t, 0.0, -t], [t, 0.0, -t]];
    let ky = [[t, t, t], [0.0, 0.0, 0.0], [-t, -t, -t]];
    let mut out = Vec::with_capacity(width * height);
    for y in 0..height as isize {
        for x in 0..width as isize {
            let mut gx = 0.0;
            let mut gy = 0.0;
            for dy in -1..=1isize {
                for dx in -1..=1isize {
                    let v = at(data, width, height, x + dx, y + dy);
                    gx += kx[(dy + 1) as usize][(dx + 1) as usize] * v;
                    gy += ky[(dy + 1) as usize][(dx + 1) as usize] * v;
                }
            }
            out.push((gx * gx + gy * gy).sqrt());
        }
    }
    out
}

/// `(2 G_r G_d + c) / (G_r^2 + G_d^2 + c)` from the Prewitt magnitudes.
pub fn gms(reference: &[f64], distorted: &[f64], width: usize, height: usize, c: f64) -> Vec<f64> {
    let gr = prewitt_magnitude(reference, width, height);
    let gd = prewitt_magnitude(distorted, width, height);
    gr.iter()
        .zip(&gd)
        .map(|(&a, &b)| (2.0 * a * b + c) / (a * a + b * b + c))
        .collect()
}

/// Local SSIM by direct per-pixel window sums in the centered form
/// `sum w (x - mx)(y - my)`, replicate padding, same-size output.
#[allow(clippy::too_many_arguments)]
pub fn ssim(
    reference: &[f64],
    distorted: &[f64],
    width: usize,
    height: usize,
    k1: f64,
    k2: f64,
    dynamic_range: f64,
    window_size: usize,
    sigma: f64,
) -> Vec<f64> {
    let half = (window_size / 2) as isize;
    // 2-D Gaussian weights, normalized over the full window
    let mut weights = vec![0.0; window_size * window_size];
    let mut wsum = 0.0;
    for wy in -half..=half {
        for wx in -half..=half {
            let w = (-((wx * wx + wy * wy) as f64) / (2.0 * sigma * sigma)).exp();
            weights[((wy + half) * window_size as isize + (wx + half)) as usize] = w;
            wsum += w;
        }
    }
    for w in &mut weights {
        *w /= wsum;
    }

    let c1 = (k1 * dynamic_range) * (k1 * dynamic_range);
    let c2 = (k2 * dynamic_range) * (k2 * dynamic_range);
    let mut out = Vec::with_capacity(width * height);
    for y in 0..height as isize {
        for x in 0..width as isize {
            let mut mx = 0.0;
            let mut my = 0.0;
            for wy in -half..=half {
                for wx in -half..=half {
                    let w = weights[((wy + half) * window_size as isize + (wx + half)) as usize];
                    mx += w * at(reference, width, height, x + wx, y + wy);
                    my += w * at(distorted, width, height, x + wx, y + wy);
                }
            }
            let mut vx = 0.0;
            let mut vy = 0.0;
            let mut cov = 0.0;
            for wy in -half..=half {
                for wx in -half..=half {
                    let w = weights[((wy + half) * window_size as isize + (wx + half)) as usize];
                    let dx = at(reference, width, height, x + wx, y + wy) - mx;
                    let dy = at(distorted, width, height, x + wx, y + wy) - my;
                    vx += w * dx * dx;
                    vy += w * dy * dy;
                    cov += w * dx * dy;
                }
            }
            out.push(
                ((2.0 * mx * my + c1) * (2.0 * cov + c2))
                    / ((mx * mx + my * my + c1) * (vx + vy + c2)),
            );
        }
    }
    out
}

pub fn mean(values: &[f64]) -> f64 {
    let mut s = 0.0;
    for &v in values {
        s += v;
    }
    s / values.len() as f64
}

pub fn sd(values: &[f64]) -> f64 {
    let m = mean(values);
    let mut s = 0.0;
    for &v in values {
        s += (v - m) * (v - m);
    }
    (s / values.len() as f64).sqrt()
}

pub fn mad(values: &[f64]) -> f64 {
    let m = mean(values);
    let mut s = 0.0;
    for &v in values {
        s += (v - m).abs();
    }
    s / values.len() as f64
}

pub fn dd(values: &[f64], alpha: f64) -> f64 {
    alpha * sd(values) + (1.0 - alpha) * mad(values)
}

pub fn minkowski(values: &[f64], rho: f64, median_center: bool) -> f64 {
    let center = if median_center {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        if n % 2 == 1 {
            sorted[n / 2]
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
        }
    } else {
        mean(values)
    };
    let mut s = 0.0;
    for &v in values {
        s += (v - center).abs().powf(rho);
    }
    (s / values.len() as f64).powf(1.0 / rho)
}

/// The full reduced-resolution gradient-similarity SD pipeline on luminance
/// input: downsample both images, build the similarity map, pool its SD.
pub fn gmsd_pipeline(reference: &[f64], distorted: &[f64], width: usize, height: usize, c: f64) -> f64 {
    let (r, w2, h2) = downsample2(reference, width, height);
    let (d, _, _) = downsample2(distorted, width, height);
    let map = gms(&r, &d, w2, h2, c);
    sd(&map)
}
