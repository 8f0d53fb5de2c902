//! Planar image tensor with explicit value-range metadata.

use std::path::Path;

use image::RgbImage;

use crate::error::{Error, Result};

/// Inclusive value range the pixel data is expected to live in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PixelRange {
    pub lo: f64,
    pub hi: f64,
}

impl PixelRange {
    /// The 8-bit raster range `[0, 255]` used throughout ingestion.
    pub const U8: PixelRange = PixelRange { lo: 0.0, hi: 255.0 };

    pub fn contains(&self, v: f64) -> bool {
        v.is_finite() && v >= self.lo && v <= self.hi
    }
}

/// A `C x H x W` image stored row-major as real values.
///
/// Pixels stay in raster units (`[0, 255]` by default); normalization to
/// model ranges is a separate, explicit step.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageTensor {
    channels: usize,
    height: usize,
    width: usize,
    data: Vec<f64>,
    range: PixelRange,
}

impl ImageTensor {
    pub fn zeros(channels: usize, height: usize, width: usize) -> Self {
        ImageTensor {
            channels,
            height,
            width,
            data: vec![0.0; channels * height * width],
            range: PixelRange::U8,
        }
    }

    /// Build from row-major `C x H x W` data.
    pub fn from_vec(channels: usize, height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != channels * height * width {
            return Err(Error::invalid(format!(
                "image data length {} does not match {}x{}x{}",
                data.len(),
                channels,
                height,
                width
            )));
        }
        Ok(ImageTensor {
            channels,
            height,
            width,
            data,
            range: PixelRange::U8,
        })
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn range(&self) -> PixelRange {
        self.range
    }

    /// `(channels, height, width)`
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.channels, self.height, self.width)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, c: usize, y: usize, x: usize) -> f64 {
        self.data[(c * self.height + y) * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, c: usize, y: usize, x: usize, v: f64) {
        self.data[(c * self.height + y) * self.width + x] = v;
    }

    /// Check that every value lies in the declared range.
    pub fn validate_range(&self) -> Result<()> {
        for (i, &v) in self.data.iter().enumerate() {
            if !self.range.contains(v) {
                return Err(Error::invalid(format!(
                    "pixel {} = {} outside [{}, {}]",
                    i, v, self.range.lo, self.range.hi
                )));
            }
        }
        Ok(())
    }

    /// Clamp all values into the declared range.
    pub fn clamp_to_range(&mut self) {
        let (lo, hi) = (self.range.lo, self.range.hi);
        for v in &mut self.data {
            *v = v.clamp(lo, hi);
        }
    }

    pub fn from_rgb8(img: &RgbImage) -> Self {
        let (w, h) = (img.width() as usize, img.height() as usize);
        let mut out = ImageTensor::zeros(3, h, w);
        for (x, y, p) in img.enumerate_pixels() {
            for c in 0..3 {
                out.set(c, y as usize, x as usize, f64::from(p.0[c]));
            }
        }
        out
    }

    /// Round-and-clamp into 8-bit RGB. Requires exactly 3 channels.
    pub fn to_rgb8(&self) -> Result<RgbImage> {
        if self.channels != 3 {
            return Err(Error::invalid(format!(
                "to_rgb8 requires 3 channels, got {}",
                self.channels
            )));
        }
        let mut img = RgbImage::new(self.width as u32, self.height as u32);
        for y in 0..self.height {
            for x in 0..self.width {
                let px = [
                    self.get(0, y, x).round().clamp(0.0, 255.0) as u8,
                    self.get(1, y, x).round().clamp(0.0, 255.0) as u8,
                    self.get(2, y, x).round().clamp(0.0, 255.0) as u8,
                ];
                img.put_pixel(x as u32, y as u32, image::Rgb(px));
            }
        }
        Ok(img)
    }

    /// Decode an 8-bit RGB raster file (PNG/JPEG).
    pub fn open(path: &Path) -> Result<Self> {
        let img = image::open(path)
            .map_err(|e| Error::Image {
                path: path.to_path_buf(),
                source: e,
            })?
            .to_rgb8();
        Ok(Self::from_rgb8(&img))
    }

    /// Encode as PNG. Encoder settings are fixed, so identical pixels produce
    /// identical bytes.
    pub fn save_png(&self, path: &Path) -> Result<()> {
        self.to_rgb8()?
            .save_with_format(path, image::ImageFormat::Png)
            .map_err(|e| Error::Image {
                path: path.to_path_buf(),
                source: e,
            })
    }
}

/// Compose rows of equally-sized images into one grid image.
///
/// `rows` is indexed `[row][column]`; every image must share one shape.
/// A 2-pixel white gutter separates cells.
pub fn compose_grid(rows: &[Vec<&ImageTensor>]) -> Result<ImageTensor> {
    const GUTTER: usize = 2;
    let first = rows
        .first()
        .and_then(|r| r.first())
        .ok_or_else(|| Error::invalid("empty grid"))?;
    let (c, h, w) = first.shape();
    let n_cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let n_rows = rows.len();
    let grid_h = n_rows * h + (n_rows + 1) * GUTTER;
    let grid_w = n_cols * w + (n_cols + 1) * GUTTER;
    let mut out = ImageTensor::zeros(c, grid_h, grid_w);
    out.data_mut().fill(255.0);
    for (ri, row) in rows.iter().enumerate() {
        for (ci, img) in row.iter().enumerate() {
            if img.shape() != (c, h, w) {
                return Err(Error::invalid(format!(
                    "grid cell ({ri},{ci}) has shape {:?}, expected {:?}",
                    img.shape(),
                    (c, h, w)
                )));
            }
            let oy = GUTTER + ri * (h + GUTTER);
            let ox = GUTTER + ci * (w + GUTTER);
            for ch in 0..c {
                for y in 0..h {
                    for x in 0..w {
                        out.set(ch, oy + y, ox + x, img.get(ch, y, x));
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rgb8_round_trip() {
        let mut img = RgbImage::new(4, 3);
        for (i, p) in img.pixels_mut().enumerate() {
            *p = image::Rgb([(i * 7 % 256) as u8, (i * 13 % 256) as u8, (i * 29 % 256) as u8]);
        }
        let t = ImageTensor::from_rgb8(&img);
        assert_eq!(t.shape(), (3, 3, 4));
        let back = t.to_rgb8().unwrap();
        assert_eq!(img, back);
    }

    #[test]
    fn from_vec_length_checked() {
        assert!(ImageTensor::from_vec(3, 2, 2, vec![0.0; 11]).is_err());
        assert!(ImageTensor::from_vec(3, 2, 2, vec![0.0; 12]).is_ok());
    }

    #[test]
    fn grid_layout_dimensions() {
        let a = ImageTensor::zeros(3, 4, 6);
        let b = ImageTensor::zeros(3, 4, 6);
        let grid = compose_grid(&[vec![&a, &b], vec![&a, &b]]).unwrap();
        // 2 rows, 2 cols, 2px gutters: H = 2*4 + 3*2 = 14, W = 2*6 + 3*2 = 18.
        assert_eq!(grid.shape(), (3, 14, 18));
    }
}
