//! Binary PPM heatmaps of imaging results.

use roughscat::imaging::ImagingResult;
use roughscat::surface::SurfaceProfile;

/// Pixels per grid cell along each axis.
pub const CELL: usize = 4;

const PALETTE: [[f64; 3]; 5] = [
    [13.0, 8.0, 135.0],
    [126.0, 3.0, 168.0],
    [204.0, 71.0, 120.0],
    [248.0, 149.0, 64.0],
    [240.0, 249.0, 33.0],
];
const TRUE_CURVE: [u8; 3] = [255, 255, 255];
const ARGMAX_CURVE: [u8; 3] = [0, 220, 0];

/// Linear map of `t` in `[0, 1]` onto the palette.
pub fn color(t: f64) -> [u8; 3] {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let x = t * (PALETTE.len() - 1) as f64;
    let i = (x.floor() as usize).min(PALETTE.len() - 2);
    let f = x - i as f64;
    let (a, b) = (PALETTE[i], PALETTE[i + 1]);
    [0, 1, 2].map(|c| (a[c] + f * (b[c] - a[c])).round() as u8)
}

pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub rgb: Vec<u8>,
}

impl Raster {
    fn put(&mut self, x: usize, y: usize, c: [u8; 3]) {
        if x < self.width && y < self.height {
            let o = 3 * (y * self.width + x);
            self.rgb[o..o + 3].copy_from_slice(&c);
        }
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.rgb);
        out
    }
}

/// Heatmap with the colour scale running from 0 to the grid maximum;
/// `z2` increases upwards. The true profile and the column argmax are
/// drawn on top when `truth` is given.
pub fn render(result: &ImagingResult, truth: Option<&SurfaceProfile>) -> Raster {
    let g = &result.grid;
    let (width, height) = (g.g1 * CELL, g.g2 * CELL);
    let mut r = Raster {
        width,
        height,
        rgb: vec![0; 3 * width * height],
    };
    let max = result.values.iter().cloned().fold(0.0, f64::max);
    for p in 0..g.g1 {
        for q in 0..g.g2 {
            let t = if max > 0.0 { result.value(p, q) / max } else { 0.0 };
            let c = color(t);
            let y0 = (g.g2 - 1 - q) * CELL;
            for dy in 0..CELL {
                for dx in 0..CELL {
                    r.put(p * CELL + dx, y0 + dy, c);
                }
            }
        }
    }
    if let Some(f) = truth {
        for (p, &q) in result.argmax_indices().iter().enumerate() {
            let y = (g.g2 - 1 - q) * CELL + CELL / 2;
            for dx in 0..CELL {
                r.put(p * CELL + dx, y, ARGMAX_CURVE);
            }
        }
        let span = g.z2[1] - g.z2[0];
        for x in 0..width {
            let z1 = g.z1[0] + (x as f64 + 0.5 - CELL as f64 / 2.0) / CELL as f64 * g.dz1();
            // Pixel row whose centre is closest to f(z1).
            let s = (f.eval(z1) - g.z2[0]) / span * (g.g2 - 1) as f64;
            let yf = (g.g2 - 1) as f64 - s;
            if yf < -0.5 || yf > (g.g2 as f64 - 0.5) {
                continue;
            }
            let y = (yf * CELL as f64 + CELL as f64 / 2.0).round();
            if y >= 0.0 {
                r.put(x, y as usize, TRUE_CURVE);
            }
        }
    }
    r
}
