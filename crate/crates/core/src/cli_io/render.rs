use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::complex_poly::{RationalMap, SpherePoint};
use crate::dynamics::{BasinClassifier, BasinVerdict};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Viewport {
    /// `re_min,re_max,im_min,im_max`
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| Error::Input(format!("bad viewport component \"{p}\""))))
            .collect::<Result<_>>()?;
        let [re_min, re_max, im_min, im_max] = parts[..] else {
            return Err(Error::Input(format!("viewport needs four numbers, got \"{s}\"")));
        };
        Ok(Viewport { re_min, re_max, im_min, im_max })
    }
}

impl Default for Viewport {
    fn default() -> Self {
        Viewport { re_min: -2.0, re_max: 2.0, im_min: -2.0, im_max: 2.0 }
    }
}

#[derive(Clone, Debug)]
pub struct RenderSpec {
    pub width: usize,
    pub height: usize,
    pub viewport: Viewport,
    pub max_iterations: usize,
    /// Colors indexed by fixed-point record; generated when empty.
    pub palette: Vec<[u8; 3]>,
    pub overlay: Vec<Vec<Complex64>>,
}

impl RenderSpec {
    pub fn new(width: usize, height: usize, viewport: Viewport) -> Self {
        RenderSpec { width, height, viewport, max_iterations: 200, palette: Vec::new(), overlay: Vec::new() }
    }

    fn check(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::Input(format!("image size {}x{} must be positive", self.width, self.height)));
        }
        let v = &self.viewport;
        if !(v.re_min < v.re_max && v.im_min < v.im_max) || ![v.re_min, v.re_max, v.im_min, v.im_max].iter().all(|x| x.is_finite()) {
            return Err(Error::Input(format!("degenerate viewport {v:?}")));
        }
        if self.max_iterations == 0 {
            return Err(Error::Input("max iterations must be positive".into()));
        }
        Ok(())
    }

    /// Center of pixel `(x, y)`, with `y` growing downward.
    pub fn point(&self, x: usize, y: usize) -> Complex64 {
        let v = &self.viewport;
        Complex64::new(
            v.re_min + (x as f64 + 0.5) * (v.re_max - v.re_min) / self.width as f64,
            v.im_max - (y as f64 + 0.5) * (v.im_max - v.im_min) / self.height as f64,
        )
    }

    /// Continuous pixel coordinates of `z`.
    fn pixel_coords(&self, z: Complex64) -> (f64, f64) {
        let v = &self.viewport;
        (
            (z.re - v.re_min) / (v.re_max - v.re_min) * self.width as f64,
            (v.im_max - z.im) / (v.im_max - v.im_min) * self.height as f64,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<[u8; 3]>,
}

impl Image {
    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * self.width + x]
    }

    fn set(&mut self, x: i64, y: i64, c: [u8; 3]) {
        if x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height {
            self.pixels[y as usize * self.width + x as usize] = c;
        }
    }

    pub fn write_ppm(&self, mut w: impl Write) -> std::io::Result<()> {
        write!(w, "P6\n{} {}\n255\n", self.width, self.height)?;
        let bytes: Vec<u8> = self.pixels.iter().flatten().copied().collect();
        w.write_all(&bytes)
    }
}

pub const UNDECIDED: [u8; 3] = [0, 0, 0];
pub const ESCAPED: [u8; 3] = [48, 48, 48];
pub const OVERLAY: [u8; 3] = [255, 255, 255];

/// Evenly spaced hues at full saturation.
pub fn default_palette(n: usize) -> Vec<[u8; 3]> {
    (0..n)
        .map(|i| {
            let h = 6.0 * i as f64 / n.max(1) as f64;
            let x = 1.0 - ((h % 2.0) - 1.0).abs();
            let (r, g, b) = match h as usize {
                0 => (1.0, x, 0.0),
                1 => (x, 1.0, 0.0),
                2 => (0.0, 1.0, x),
                3 => (0.0, x, 1.0),
                4 => (x, 0.0, 1.0),
                _ => (1.0, 0.0, x),
            };
            [(r * 220.0) as u8, (g * 220.0) as u8, (b * 220.0) as u8]
        })
        .collect()
}

fn shade(c: [u8; 3], iterations: usize, cap: usize) -> [u8; 3] {
    let t = 1.0 - 0.6 * (iterations as f64 / cap as f64).sqrt();
    c.map(|x| (x as f64 * t).round() as u8)
}

/// Colors each pixel by the basin its center converges to, darker with
/// more iterations, then draws the overlay polylines.
pub fn render_basins(f: &RationalMap, spec: &RenderSpec, tol: &Tolerances) -> Result<Image> {
    spec.check()?;
    let classifier = BasinClassifier::new(f, tol)?;
    let palette = if spec.palette.is_empty() { default_palette(f.degree() + 1) } else { spec.palette.clone() };
    let mut img = Image { width: spec.width, height: spec.height, pixels: vec![UNDECIDED; spec.width * spec.height] };
    img.pixels.par_chunks_mut(spec.width).enumerate().for_each(|(y, row)| {
        for (x, px) in row.iter_mut().enumerate() {
            *px = match classifier.classify_with_cap(SpherePoint::Finite(spec.point(x, y)), spec.max_iterations) {
                BasinVerdict::Converges { root, iterations } => {
                    shade(palette[root % palette.len()], iterations, spec.max_iterations)
                }
                BasinVerdict::Escapes { .. } => ESCAPED,
                BasinVerdict::Undecided => UNDECIDED,
            };
        }
    });
    for line in &spec.overlay {
        for w in line.windows(2) {
            draw_segment(&mut img, spec, w[0], w[1]);
        }
    }
    Ok(img)
}

/// Clips the segment to the viewport, then marks every pixel it crosses.
fn draw_segment(img: &mut Image, spec: &RenderSpec, a: Complex64, b: Complex64) {
    let v = &spec.viewport;
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    let d = b - a;
    for (p, q) in [(-d.re, a.re - v.re_min), (d.re, v.re_max - a.re), (-d.im, a.im - v.im_min), (d.im, v.im_max - a.im)] {
        if p == 0.0 {
            if q < 0.0 {
                return;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    if t0 > t1 {
        return;
    }
    let (x0, y0) = spec.pixel_coords(a + d * t0);
    let (x1, y1) = spec.pixel_coords(a + d * t1);
    let steps = ((x1 - x0).abs().max((y1 - y0).abs()) * 2.0).ceil().max(1.0) as usize;
    for i in 0..=steps {
        let s = i as f64 / steps as f64;
        let x = (x0 + s * (x1 - x0)).floor().min(img.width as f64 - 1.0);
        let y = (y0 + s * (y1 - y0)).floor().min(img.height as f64 - 1.0);
        img.set(x as i64, y as i64, OVERLAY);
    }
}
