use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{LimitError, LimitPointCloud};

/// Axis-aligned rectangle of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self, LimitError> {
        let w = Window { re_min, re_max, im_min, im_max };
        if !(re_max > re_min && im_max > im_min) || [re_min, re_max, im_min, im_max].iter().any(|x| !x.is_finite()) {
            return Err(LimitError::DegenerateWindow);
        }
        Ok(w)
    }
}

impl Default for Window {
    fn default() -> Self {
        Window { re_min: -1.5, re_max: 1.5, im_min: -1.5, im_max: 1.5 }
    }
}

impl FromStr for Window {
    type Err = LimitError;

    /// `re_min,re_max,im_min,im_max`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v = s
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| LimitError::DegenerateWindow)?;
        match v[..] {
            [a, b, c, d] => Window::new(a, b, c, d),
            _ => Err(LimitError::DegenerateWindow),
        }
    }
}

/// Binary PPM (P6): white background, one black pixel per point inside the
/// window. Imaginary part grows upward.
pub fn render(cloud: &LimitPointCloud, width: usize, height: usize, window: &Window) -> Result<Vec<u8>, LimitError> {
    if width == 0 || height == 0 {
        return Err(LimitError::DegenerateWindow);
    }
    let window = Window::new(window.re_min, window.re_max, window.im_min, window.im_max)?;
    let header = format!("P6\n{width} {height}\n255\n");
    let mut out = Vec::with_capacity(header.len() + 3 * width * height);
    out.extend_from_slice(header.as_bytes());
    let start = out.len();
    out.resize(start + 3 * width * height, 255);
    let sx = width as f64 / (window.re_max - window.re_min);
    let sy = height as f64 / (window.im_max - window.im_min);
    for z in cloud.plane_points() {
        let x = ((z.re - window.re_min) * sx).floor();
        let y = ((window.im_max - z.im) * sy).floor();
        if x >= 0.0 && y >= 0.0 && (x as usize) < width && (y as usize) < height {
            let at = start + 3 * (y as usize * width + x as usize);
            out[at..at + 3].fill(0);
        }
    }
    Ok(out)
}
