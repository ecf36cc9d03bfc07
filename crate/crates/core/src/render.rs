//! Domain-coloring renderer for the characteristic function.
//!
//! Each pixel center z maps to f(z) = z² + z + (1 − β²)(1 − e^z); the color
//! encodes arg f as hue and |f| as lightness bands that step at every power
//! of two, so zeros sit at the centers of full hue wheels and the band
//! density shows the modulus gradient. The palette is frozen: golden tests
//! depend on exact bytes.

use rayon::prelude::*;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectrum::{char_fn, SearchBox};

/// Largest edge, in pixels, the renderer accepts.
pub const MAX_RESOLUTION: usize = 8192;

const SATURATION: f64 = 0.85;
const LIGHTNESS_BASE: f64 = 0.30;
const LIGHTNESS_SPAN: f64 = 0.35;

/// A rendered RGB8 image, rows top to bottom.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainColorImage {
    pub width: usize,
    pub height: usize,
    /// The complex rectangle the pixels cover.
    pub region: SearchBox,
    /// Row-major RGB triples, `3 * width * height` bytes.
    pub pixels: Vec<u8>,
}

fn hsl_to_rgb(h: f64, s: f64, l: f64) -> [u8; 3] {
    let c = (1.0 - (2.0 * l - 1.0).abs()) * s;
    let hp = h * 6.0;
    let x = c * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r, g, b) = match hp as usize {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - 0.5 * c;
    [
        ((r + m) * 255.0).round() as u8,
        ((g + m) * 255.0).round() as u8,
        ((b + m) * 255.0).round() as u8,
    ]
}

fn color_of(f: Complex64) -> [u8; 3] {
    if !f.re.is_finite() || !f.im.is_finite() {
        return [255, 255, 255];
    }
    let norm = f.norm();
    if norm == 0.0 {
        return [0, 0, 0];
    }
    let hue = f.arg().rem_euclid(std::f64::consts::TAU) / std::f64::consts::TAU;
    let l2 = norm.log2();
    let band = l2 - l2.floor();
    hsl_to_rgb(hue, SATURATION, LIGHTNESS_BASE + LIGHTNESS_SPAN * band)
}

/// Render f over `region` at `resolution` pixels along the real axis.
///
/// The pixel grid samples cell centers; rows run from im_max down to
/// im_min. Supplied markers are overdrawn as white five-pixel crosses.
/// Rows render in parallel and are assembled in order, so identical inputs
/// give identical bytes.
pub fn render_domain_coloring(
    beta: f64,
    region: &SearchBox,
    resolution: usize,
    markers: &[(f64, f64)],
) -> Result<DomainColorImage> {
    if resolution == 0 || resolution > MAX_RESOLUTION {
        return Err(Error::InvalidImage {
            width: resolution,
            height: 0,
            reason: "resolution must be between 1 and 8192 pixels",
        });
    }
    let re_span = region.re_max - region.re_min;
    let im_span = region.im_max - region.im_min;
    if re_span <= 0.0 || im_span <= 0.0 || re_span.is_nan() || im_span.is_nan() {
        return Err(Error::InvalidImage {
            width: resolution,
            height: 0,
            reason: "render region must have positive extent on both axes",
        });
    }
    let width = resolution;
    let height = ((resolution as f64 * im_span / re_span).round() as usize).max(1);
    if height > MAX_RESOLUTION {
        return Err(Error::InvalidImage {
            width,
            height,
            reason: "aspect ratio pushes image height past 8192 pixels",
        });
    }
    let dre = re_span / width as f64;
    let dim = im_span / height as f64;

    let rows: Vec<Vec<u8>> = (0..height)
        .into_par_iter()
        .map(|j| {
            let im = region.im_max - (j as f64 + 0.5) * dim;
            let mut row = Vec::with_capacity(3 * width);
            for i in 0..width {
                let re = region.re_min + (i as f64 + 0.5) * dre;
                let rgb = color_of(char_fn(Complex64::new(re, im), beta));
                row.extend_from_slice(&rgb);
            }
            row
        })
        .collect();
    let mut pixels = Vec::with_capacity(3 * width * height);
    for row in rows {
        pixels.extend_from_slice(&row);
    }

    let mut image = DomainColorImage {
        width,
        height,
        region: *region,
        pixels,
    };
    for &(re, im) in markers {
        let i = ((re - region.re_min) / dre).floor();
        let j = ((region.im_max - im) / dim).floor();
        if !(0.0..(width as f64)).contains(&i) || !(0.0..(height as f64)).contains(&j) {
            continue;
        }
        let (i, j) = (i as isize, j as isize);
        for (di, dj) in [(0, 0), (-1, 0), (1, 0), (-2, 0), (2, 0), (0, -1), (0, 1), (0, -2), (0, 2)]
        {
            let (pi, pj) = (i + di, j + dj);
            if pi >= 0 && pi < width as isize && pj >= 0 && pj < height as isize {
                let at = 3 * (pj as usize * width + pi as usize);
                image.pixels[at..at + 3].copy_from_slice(&[255, 255, 255]);
            }
        }
    }
    Ok(image)
}

/// Write the image as binary PPM (P6, 8-bit).
pub fn write_ppm<W: Write>(image: &DomainColorImage, out: &mut W) -> Result<()> {
    let wrap = |e: std::io::Error| Error::Io {
        path: "<writer>".into(),
        source: e,
    };
    write!(out, "P6\n{} {}\n255\n", image.width, image.height).map_err(wrap)?;
    out.write_all(&image.pixels).map_err(wrap)?;
    out.flush().map_err(wrap)
}

/// [`write_ppm`] to a file path.
pub fn write_ppm_path<P: AsRef<Path>>(image: &DomainColorImage, path: P) -> Result<()> {
    let path = path.as_ref();
    let wrap = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        source: e,
    };
    let mut out = BufWriter::new(File::create(path).map_err(wrap)?);
    write_ppm(image, &mut out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_box(cx: f64, cy: f64, half: f64) -> SearchBox {
        SearchBox::new(cx - half, cx + half, cy - half, cy + half).unwrap()
    }

    #[test]
    fn origin_pixel_of_centered_grid_is_black() {
        // the middle cell of a 3x3 grid over a box centered on the origin
        // samples z = 0 exactly, a zero of f at every beta
        let img = render_domain_coloring(0.0, &small_box(0.0, 0.0, 0.01), 3, &[]).unwrap();
        assert_eq!(img.height, 3);
        let center = 3 * (3 + 1); // row 1, column 1
        assert_eq!(&img.pixels[center..center + 3], &[0, 0, 0]);
        // neighbors are off the zero and colored
        assert_ne!(&img.pixels[0..3], &[0, 0, 0]);
    }

    #[test]
    fn hue_winds_twice_around_the_origin() {
        // the border pixel centers of a tiny grid circle the double zero;
        // accumulated argument of f along them is 4 pi
        let half = 0.01;
        let region = small_box(0.0, 0.0, half);
        let n = 5;
        let d = 2.0 * half / n as f64;
        let center = |k: usize| region.re_min + (k as f64 + 0.5) * d;
        let border: Vec<(usize, usize)> = (0..n)
            .map(|i| (i, 0))
            .chain((1..n).map(|j| (n - 1, j)))
            .chain((0..n - 1).rev().map(|i| (i, n - 1)))
            .chain((1..n - 1).rev().map(|j| (0, j)))
            .collect();
        let mut total = 0.0;
        let mut prev: Option<Complex64> = None;
        for &(i, j) in border.iter().chain(border.first()) {
            let z = Complex64::new(center(i), center(j));
            let f = char_fn(z, 0.0);
            if let Some(p) = prev {
                total += (f * p.conj()).arg();
            }
            prev = Some(f);
        }
        assert!(
            (total - 2.0 * std::f64::consts::TAU).abs() < 0.1,
            "winding {total}"
        );
    }

    #[test]
    fn exponential_zeros_match_across_speeds() {
        // at z = 2 pi i the factor 1 - e^z vanishes, so f is independent of
        // beta there and the pixel bytes agree between speeds
        let region = small_box(0.0, std::f64::consts::TAU, 1e-9);
        let a = render_domain_coloring(0.0, &region, 1, &[]).unwrap();
        let b = render_domain_coloring(0.9, &region, 1, &[]).unwrap();
        assert_eq!(a.pixels, b.pixels);
    }

    #[test]
    fn identical_config_renders_identical_bytes() {
        let region = SearchBox::new(-15.0, 15.0, -15.0, 15.0).unwrap();
        let a = render_domain_coloring(0.3, &region, 64, &[(4.65, 8.31)]).unwrap();
        let b = render_domain_coloring(0.3, &region, 64, &[(4.65, 8.31)]).unwrap();
        assert_eq!(a.pixels, b.pixels);
        // the marker paints a white cross
        let i = (((4.65 - region.re_min) / 30.0) * 64.0).floor() as usize;
        let j = (((region.im_max - 8.31) / 30.0) * 64.0).floor() as usize;
        let at = 3 * (j * 64 + i);
        assert_eq!(&a.pixels[at..at + 3], &[255, 255, 255]);
    }

    #[test]
    fn ppm_bytes_carry_magic_and_payload() {
        let img = render_domain_coloring(0.0, &small_box(1.0, 1.0, 0.5), 4, &[]).unwrap();
        let mut buf = Vec::new();
        write_ppm(&img, &mut buf).unwrap();
        assert!(buf.starts_with(b"P6\n4 4\n255\n"));
        assert_eq!(buf.len(), b"P6\n4 4\n255\n".len() + 48);
    }

    #[test]
    fn rejects_degenerate_requests() {
        let region = small_box(0.0, 0.0, 1.0);
        assert!(render_domain_coloring(0.0, &region, 0, &[]).is_err());
        assert!(render_domain_coloring(0.0, &region, 9000, &[]).is_err());
        let flat = SearchBox::new(0.0, 1.0, 2.0, 2.0);
        // a zero-height request dies either at box construction or render
        if let Ok(flat) = flat {
            assert!(render_domain_coloring(0.0, &flat, 10, &[]).is_err());
        }
    }
}
