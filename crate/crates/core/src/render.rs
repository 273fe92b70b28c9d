//! Raster output: nodal maps as binary PPM and label matrices as binary PGM.
//!
//! Images cover one fundamental domain with `x₁` to the right and `x₂` up.
//! A pixel is drawn black when it is a boundary sample or its sign differs
//! from the pixel to its right or above it, which traces the nodal set.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::nodal::{
    label_components, sign_grid_relative, NodalDecomposition, NodalError, Sign, NO_DOMAIN,
};
use crate::spectra::Eigenfunction;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RenderError {
    #[error("image size {0}×{1} is below the minimum of 64×64")]
    TooSmall(usize, usize),
    #[error("{0} domains do not fit a 16-bit graymap")]
    TooManyLabels(usize),
    #[error(transparent)]
    Nodal(#[from] NodalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Palette {
    /// Positive, negative and nodal colors.
    #[default]
    Sign,
    /// One color per domain.
    Domains,
}

impl std::str::FromStr for Palette {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sign" => Ok(Palette::Sign),
            "domains" => Ok(Palette::Domains),
            other => Err(format!(
                "unknown palette {other:?} (expected sign or domains)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RenderSpec {
    pub width: usize,
    pub height: usize,
    pub palette: Palette,
}

impl RenderSpec {
    pub fn new(width: usize, height: usize, palette: Palette) -> Result<Self, RenderError> {
        if width < 64 || height < 64 {
            return Err(RenderError::TooSmall(width, height));
        }
        Ok(Self {
            width,
            height,
            palette,
        })
    }
}

const POSITIVE: [u8; 3] = [238, 196, 120];
const NEGATIVE: [u8; 3] = [96, 138, 200];
const NODAL: [u8; 3] = [0, 0, 0];

fn domain_color(label: u32) -> [u8; 3] {
    // golden-angle hue walk
    let hue = (label as f64 * 0.618_033_988_749_895).fract() * 6.0;
    let (s, v) = (0.55, 0.92);
    let sector = hue.floor() as u32 % 6;
    let f = hue - hue.floor();
    let (p, q, t) = (v * (1.0 - s), v * (1.0 - s * f), v * (1.0 - s * (1.0 - f)));
    let (r, g, b) = match sector {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    [(r * 255.0) as u8, (g * 255.0) as u8, (b * 255.0) as u8]
}

/// Binary PPM (P6) of a decomposition; one pixel per cell.
pub fn render_ppm(d: &NodalDecomposition, palette: Palette) -> Vec<u8> {
    let (width, height) = (d.n1, d.n2);
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.reserve(width * height * 3);
    let sign_of = |i: usize, j: usize| -> Sign {
        match d.label(i, j) {
            NO_DOMAIN => Sign::Boundary,
            l => d.domain_signs[l as usize],
        }
    };
    for py in 0..height {
        let j = height - 1 - py;
        for i in 0..width {
            let s = sign_of(i, j);
            let on_edge = s == Sign::Boundary
                || sign_of((i + 1) % width, j) != s
                || sign_of(i, (j + 1) % height) != s;
            let rgb = if on_edge {
                NODAL
            } else {
                match palette {
                    Palette::Sign if s == Sign::Positive => POSITIVE,
                    Palette::Sign => NEGATIVE,
                    Palette::Domains => domain_color(d.label(i, j)),
                }
            };
            out.extend_from_slice(&rgb);
        }
    }
    out
}

/// Samples `u` at the image size and renders its nodal map.
pub fn render_eigenfunction(u: &Eigenfunction, spec: &RenderSpec) -> Result<Vec<u8>, RenderError> {
    let g = sign_grid_relative(u, spec.width, spec.height, 1e-9)?;
    Ok(render_ppm(&label_components(&g), spec.palette))
}

/// Binary PGM (P5) of the label matrix: `0` on boundary cells and `label + 1`
/// elsewhere. Rows are `x₁` indices, columns `x₂` indices. Uses 16-bit
/// big-endian samples when there are more than 255 domains.
pub fn labels_pgm(d: &NodalDecomposition) -> Result<Vec<u8>, RenderError> {
    let maxval = d.domain_count().max(1);
    if maxval > u16::MAX as usize {
        return Err(RenderError::TooManyLabels(d.domain_count()));
    }
    let mut out = format!("P5\n{} {}\n{}\n", d.n2, d.n1, maxval).into_bytes();
    let wide = maxval > 255;
    for &l in &d.labels {
        let v = if l == NO_DOMAIN { 0 } else { l as u16 + 1 };
        if wide {
            out.extend_from_slice(&v.to_be_bytes());
        } else {
            out.push(v as u8);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{BasisFunction, TorusShape};

    fn checker() -> Eigenfunction {
        Eigenfunction::from_terms(
            TorusShape::rational(1, 3).unwrap(),
            &[(BasisFunction::cc(1, 1), 1.0)],
        )
        .unwrap()
    }

    fn pixel(img: &[u8], header: usize, width: usize, x: usize, y: usize) -> [u8; 3] {
        let o = header + (y * width + x) * 3;
        [img[o], img[o + 1], img[o + 2]]
    }

    #[test]
    fn four_rectangles() {
        let spec = RenderSpec::new(128, 128, Palette::Sign).unwrap();
        let img = render_eigenfunction(&checker(), &spec).unwrap();
        let header = b"P6\n128 128\n255\n".len();
        assert!(img.starts_with(b"P6\n128 128\n255\n"));
        assert_eq!(img.len(), header + 128 * 128 * 3);
        // bottom-left quarter of the lower half is positive, the next negative
        assert_eq!(pixel(&img, header, 128, 10, 120), POSITIVE);
        assert_eq!(pixel(&img, header, 128, 64, 120), NEGATIVE);
        assert_eq!(pixel(&img, header, 128, 64, 64), POSITIVE);
        assert_eq!(pixel(&img, header, 128, 32, 120), NODAL);
    }

    #[test]
    fn vertical_stripes() {
        let u = Eigenfunction::from_terms(
            TorusShape::rational(1, 3).unwrap(),
            &[(BasisFunction::cc(2, 0), 1.0)],
        )
        .unwrap();
        let spec = RenderSpec::new(64, 64, Palette::Sign).unwrap();
        let img = render_eigenfunction(&u, &spec).unwrap();
        let header = b"P6\n64 64\n255\n".len();
        for x in 0..64 {
            let top = pixel(&img, header, 64, x, 0);
            assert!((0..64).all(|y| pixel(&img, header, 64, x, y) == top));
        }
    }

    #[test]
    fn rendering_is_deterministic() {
        let spec = RenderSpec::new(96, 80, Palette::Domains).unwrap();
        let a = render_eigenfunction(&checker(), &spec).unwrap();
        let b = render_eigenfunction(&checker(), &spec).unwrap();
        assert_eq!(a, b);
        assert!(RenderSpec::new(32, 64, Palette::Sign).is_err());
    }

    #[test]
    fn pgm_labels() {
        let g = sign_grid_relative(&checker(), 16, 8, 1e-9).unwrap();
        let d = label_components(&g);
        let pgm = labels_pgm(&d).unwrap();
        let header = b"P5\n8 16\n4\n";
        assert!(pgm.starts_with(header));
        assert_eq!(pgm.len(), header.len() + 16 * 8);
        assert_eq!(pgm[header.len()], 1);
        assert!(pgm[header.len()..].iter().all(|&v| v <= 4));
    }
}
