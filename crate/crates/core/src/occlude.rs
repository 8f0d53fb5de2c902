//! Random rectangular occlusion with mean-pixel fill.
//!
//! A rectangle is sampled under area-ratio and aspect-ratio constraints and
//! painted with a constant fill (dataset channel means by default, black or
//! white as variants). The occluded image is returned together with the
//! untouched original and the rectangle that produced it.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::data::{ChannelStats, Dataset, ImageTensor};
use crate::error::{Error, Result};
use crate::rng::{substream, STREAM_OCCLUDE};

/// Axis-aligned occlusion rectangle plus its per-channel fill values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OcclusionRect {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
    pub fill: [f64; 3],
}

impl OcclusionRect {
    /// Bounds check against an image of the given size.
    pub fn validate(&self, img_h: usize, img_w: usize) -> Result<()> {
        if self.w < 1 || self.h < 1 {
            return Err(Error::invalid(format!(
                "occlusion rect must be at least 1x1, got {}x{}",
                self.w, self.h
            )));
        }
        if self.x + self.w > img_w || self.y + self.h > img_h {
            return Err(Error::invalid(format!(
                "occlusion rect ({},{} {}x{}) exceeds image bounds {}x{}",
                self.x, self.y, self.w, self.h, img_w, img_h
            )));
        }
        for f in self.fill {
            if !(0.0..=255.0).contains(&f) {
                return Err(Error::invalid(format!("fill value {f} outside [0,255]")));
            }
        }
        Ok(())
    }

    pub fn area(&self) -> usize {
        self.w * self.h
    }

    pub fn contains(&self, y: usize, x: usize) -> bool {
        x >= self.x && x < self.x + self.w && y >= self.y && y < self.y + self.h
    }
}

/// An occluded image, its untouched original, and the rectangle applied.
#[derive(Debug, Clone)]
pub struct OccludedPair {
    pub occluded: ImageTensor,
    pub original: ImageTensor,
    pub rect: OcclusionRect,
}

/// Fill-color policy for the occlusion rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FillStyle {
    /// Dataset per-channel means (the default variant).
    DatasetMean,
    /// All-zero pixels.
    Black,
    /// All-255 pixels.
    White,
}

impl FillStyle {
    pub fn values(self, stats: &ChannelStats) -> [f64; 3] {
        match self {
            FillStyle::DatasetMean => [stats.mean_r, stats.mean_g, stats.mean_b],
            FillStyle::Black => [0.0; 3],
            FillStyle::White => [255.0; 3],
        }
    }
}

/// Occlusion sampling parameters.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OcclusionConfig {
    /// Rectangle area as a fraction of image area, inclusive bounds.
    pub area_ratio_min: f64,
    pub area_ratio_max: f64,
    /// Width/height bounds, inclusive.
    pub aspect_min: f64,
    pub aspect_max: f64,
    pub fill: FillStyle,
    pub seed: u64,
    /// Whether training resamples rectangles every epoch (the default) or
    /// fixes them once per image.
    pub resample_per_epoch: bool,
}

impl Default for OcclusionConfig {
    fn default() -> Self {
        OcclusionConfig {
            area_ratio_min: 0.1,
            area_ratio_max: 0.4,
            aspect_min: 0.3,
            aspect_max: 3.3,
            fill: FillStyle::DatasetMean,
            seed: 0,
            resample_per_epoch: true,
        }
    }
}

impl OcclusionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.area_ratio_min > 0.0
            && self.area_ratio_min <= self.area_ratio_max
            && self.area_ratio_max <= 1.0)
        {
            return Err(Error::invalid(format!(
                "area ratio bounds ({}, {}) must satisfy 0 < min <= max <= 1",
                self.area_ratio_min, self.area_ratio_max
            )));
        }
        if !(self.aspect_min > 0.0 && self.aspect_min <= self.aspect_max) {
            return Err(Error::invalid(format!(
                "aspect bounds ({}, {}) must satisfy 0 < min <= max",
                self.aspect_min, self.aspect_max
            )));
        }
        Ok(())
    }

    fn admits(&self, w: usize, h: usize, img_h: usize, img_w: usize) -> bool {
        if w < 1 || h < 1 || w > img_w || h > img_h {
            return false;
        }
        let ratio = (w * h) as f64 / (img_h * img_w) as f64;
        let aspect = w as f64 / h as f64;
        ratio >= self.area_ratio_min
            && ratio <= self.area_ratio_max
            && aspect >= self.aspect_min
            && aspect <= self.aspect_max
    }
}

const SAMPLE_ATTEMPTS: usize = 64;

/// Sample an occlusion rectangle satisfying the config constraints.
///
/// After 64 failed attempts this falls back to the largest admissible
/// centered rectangle (logged at warn level).
pub fn sample_rect(
    cfg: &OcclusionConfig,
    img_h: usize,
    img_w: usize,
    fill: [f64; 3],
    rng: &mut ChaCha8Rng,
) -> Result<OcclusionRect> {
    if img_h < 4 || img_w < 4 {
        return Err(Error::invalid(format!(
            "sample_rect: image must be at least 4x4, got {img_h}x{img_w}"
        )));
    }
    cfg.validate()?;
    let img_area = (img_h * img_w) as f64;

    for _ in 0..SAMPLE_ATTEMPTS {
        let area = rng.gen_range(cfg.area_ratio_min..=cfg.area_ratio_max) * img_area;
        let aspect = rng.gen_range(cfg.aspect_min..=cfg.aspect_max);
        let w = (area * aspect).sqrt().round().max(1.0) as usize;
        let h = (area / aspect).sqrt().round().max(1.0) as usize;
        if !cfg.admits(w, h, img_h, img_w) {
            continue;
        }
        let x = rng.gen_range(0..=img_w - w);
        let y = rng.gen_range(0..=img_h - h);
        return Ok(OcclusionRect { x, y, w, h, fill });
    }

    // No admissible sample found: take the largest admissible centered rect.
    let mut best: Option<(usize, usize)> = None;
    for w in 1..=img_w {
        for h in 1..=img_h {
            if cfg.admits(w, h, img_h, img_w)
                && best.map(|(bw, bh)| w * h > bw * bh).unwrap_or(true)
            {
                best = Some((w, h));
            }
        }
    }
    // If the integer grid admits nothing at all, relax the minimum-area bound
    // and keep the aspect and maximum-area constraints.
    let (w, h) = best.unwrap_or_else(|| {
        let mut fallback = (1, 1);
        for w in 1..=img_w {
            for h in 1..=img_h {
                let ratio = (w * h) as f64 / img_area;
                let aspect = w as f64 / h as f64;
                if ratio <= cfg.area_ratio_max
                    && aspect >= cfg.aspect_min
                    && aspect <= cfg.aspect_max
                    && w * h > fallback.0 * fallback.1
                {
                    fallback = (w, h);
                }
            }
        }
        fallback
    });
    log::warn!(
        "sample_rect: no admissible rect after {SAMPLE_ATTEMPTS} attempts on {img_h}x{img_w}; \
         falling back to centered {w}x{h}"
    );
    Ok(OcclusionRect {
        x: (img_w - w) / 2,
        y: (img_h - h) / 2,
        w,
        h,
        fill,
    })
}

/// Paint `rect` onto a copy of `img`, returning the pair.
///
/// The rectangle must lie fully inside the image; no clipping is performed.
pub fn apply_occlusion(img: &ImageTensor, rect: OcclusionRect) -> Result<OccludedPair> {
    let (c, h, w) = img.shape();
    if c != 3 {
        return Err(Error::invalid(format!(
            "apply_occlusion expects 3 channels, got {c}"
        )));
    }
    rect.validate(h, w)?;
    let mut occluded = img.clone();
    for ch in 0..3 {
        for y in rect.y..rect.y + rect.h {
            for x in rect.x..rect.x + rect.w {
                occluded.set(ch, y, x, rect.fill[ch]);
            }
        }
    }
    Ok(OccludedPair {
        occluded,
        original: img.clone(),
        rect,
    })
}

/// Occlude every image of a dataset, one rectangle per image.
///
/// Pair order matches dataset order. Rectangles are drawn from per-image
/// substreams of `cfg.seed`, so the result does not depend on traversal order.
pub fn occlude_dataset(
    ds: &Dataset,
    cfg: &OcclusionConfig,
    stats: &ChannelStats,
) -> Result<Vec<OccludedPair>> {
    occlude_dataset_stream(ds, cfg, stats, 0)
}

/// Like [`occlude_dataset`] but namespaced by `stream` (e.g. an epoch index)
/// so repeated passes draw fresh rectangles.
pub fn occlude_dataset_stream(
    ds: &Dataset,
    cfg: &OcclusionConfig,
    stats: &ChannelStats,
    stream: u64,
) -> Result<Vec<OccludedPair>> {
    if ds.is_empty() {
        return Err(Error::invalid("occlude_dataset: empty dataset"));
    }
    let fill = cfg.fill.values(stats);
    ds.samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let (_, h, w) = s.pixels.shape();
            let mut rng = substream(cfg.seed, &[STREAM_OCCLUDE, stream, i as u64]);
            let rect = sample_rect(cfg, h, w, fill, &mut rng)?;
            apply_occlusion(&s.pixels, rect)
        })
        .collect()
}
