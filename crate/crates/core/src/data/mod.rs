//! Dataset ingestion, synthetic corpora, and channel statistics.
//!
//! Two ingestion paths exist: a tab-separated sidecar manifest (the canonical
//! format) and benchmark-style filename parsing (`{id:04}_c{cam}...`), which
//! produces the same in-memory structure. Sample order always follows the
//! manifest.

mod image;
mod synth;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

pub use image::{compose_grid, ImageTensor, PixelRange};
pub use synth::synth_corpus;

use crate::error::{Error, Result};

/// Identity sentinel for junk/distractor samples. Junk samples are excluded
/// from training and from gallery ranking.
pub const JUNK_IDENTITY: i64 = -1;

/// Provenance of a sample: captured or synthesized by the generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Real,
    Generated,
}

/// Dataset role.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Query,
    Gallery,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Split::Train => write!(f, "train"),
            Split::Query => write!(f, "query"),
            Split::Gallery => write!(f, "gallery"),
        }
    }
}

/// A labeled pedestrian image.
#[derive(Debug, Clone)]
pub struct PersonImage {
    pub pixels: ImageTensor,
    /// Person identity; [`JUNK_IDENTITY`] marks junk samples.
    pub identity: i64,
    pub camera: u32,
    pub source: Source,
    /// For files loaded from disk, the path relative to the dataset root.
    /// For generated samples, the assigned output filename (which encodes the
    /// source image stem).
    pub origin_path: Option<PathBuf>,
}

impl PersonImage {
    /// Relative file name this sample materializes to, synthesizing one from
    /// `(identity, camera, index)` when no origin path exists.
    pub fn file_name(&self, index: usize) -> PathBuf {
        match &self.origin_path {
            Some(p) => p.clone(),
            None => PathBuf::from(format!(
                "{:04}_c{}_s{:05}.png",
                self.identity, self.camera, index
            )),
        }
    }
}

/// An ordered collection of samples with a split role.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub samples: Vec<PersonImage>,
    pub split: Split,
    pub name: String,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Samples usable for training: junk identities are filtered out.
    pub fn trainable(&self) -> impl Iterator<Item = &PersonImage> {
        self.samples.iter().filter(|s| s.identity != JUNK_IDENTITY)
    }

    /// Sorted deduplicated identities, junk excluded.
    pub fn identities(&self) -> Vec<i64> {
        let mut ids: Vec<i64> = self.trainable().map(|s| s.identity).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

/// Per-channel pixel means over a dataset.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ChannelStats {
    pub mean_r: f64,
    pub mean_g: f64,
    pub mean_b: f64,
    /// Pixels aggregated per channel.
    pub count: u64,
}

/// Arithmetic per-channel mean over all pixels of all images.
pub fn channel_means(ds: &Dataset) -> Result<ChannelStats> {
    if ds.is_empty() {
        return Err(Error::invalid("channel_means: empty dataset"));
    }
    let mut sums = [0.0f64; 3];
    let mut count: u64 = 0;
    for s in &ds.samples {
        let (c, h, w) = s.pixels.shape();
        if c != 3 {
            return Err(Error::invalid(format!(
                "channel_means: expected 3 channels, got {c}"
            )));
        }
        let plane = h * w;
        let data = s.pixels.data();
        for ch in 0..3 {
            sums[ch] += data[ch * plane..(ch + 1) * plane].iter().sum::<f64>();
        }
        count += plane as u64;
    }
    Ok(ChannelStats {
        mean_r: sums[0] / count as f64,
        mean_g: sums[1] / count as f64,
        mean_b: sums[2] / count as f64,
        count,
    })
}

/// Outcome of a directory load: per-file problems are collected, not hidden.
#[derive(Debug, Default)]
pub struct LoadReport {
    pub loaded: usize,
    /// `(path, reason)` for every file that failed pattern matching or decoding.
    pub failures: Vec<(PathBuf, String)>,
}

/// Parse `{id}_c{cam}...` from a benchmark-style file stem.
///
/// `0002_c1s1_000451_01` parses to `(2, 1)`; junk files use identity `-1`.
pub fn parse_benchmark_stem(stem: &str) -> Option<(i64, u32)> {
    let (id_part, rest) = stem.split_once('_')?;
    let identity: i64 = id_part.parse().ok()?;
    if identity < JUNK_IDENTITY {
        return None;
    }
    let rest = rest.strip_prefix('c')?;
    let cam_digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
    if cam_digits.is_empty() {
        return None;
    }
    let camera: u32 = cam_digits.parse().ok()?;
    Some((identity, camera))
}

const MANIFEST_NAME: &str = "manifest.tsv";
const IMAGE_EXTENSIONS: [&str; 4] = ["png", "jpg", "jpeg", "bmp"];

/// One manifest record: `relative_path<TAB>identity<TAB>camera`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub identity: i64,
    pub camera: u32,
}

/// Read a tab-separated manifest. Order of entries is preserved.
pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let (rel, id, cam) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(r), Some(i), Some(c), None) => (r, i, c),
            _ => {
                return Err(Error::Manifest {
                    path: path.to_path_buf(),
                    line: i + 1,
                    msg: "expected 3 tab-separated fields".into(),
                })
            }
        };
        let identity: i64 = id.parse().map_err(|_| Error::Manifest {
            path: path.to_path_buf(),
            line: i + 1,
            msg: format!("bad identity `{id}`"),
        })?;
        let camera: u32 = cam.parse().map_err(|_| Error::Manifest {
            path: path.to_path_buf(),
            line: i + 1,
            msg: format!("bad camera `{cam}`"),
        })?;
        entries.push(ManifestEntry {
            path: PathBuf::from(rel),
            identity,
            camera,
        });
    }
    Ok(entries)
}

/// Write manifest entries in order, one record per line.
pub fn write_manifest(path: &Path, entries: &[ManifestEntry]) -> Result<()> {
    let mut out = String::new();
    for e in entries {
        out.push_str(&format!(
            "{}\t{}\t{}\n",
            e.path.to_string_lossy(),
            e.identity,
            e.camera
        ));
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Load a labeled image directory into a dataset.
///
/// If `manifest.tsv` is present it is authoritative; otherwise filenames are
/// parsed with the benchmark convention. Files that fail to parse or decode go
/// into the [`LoadReport`]; zero usable images is a fatal error.
pub fn load_directory(path: &Path, split: Split) -> Result<(Dataset, LoadReport)> {
    if !path.is_dir() {
        return Err(Error::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "directory not found"),
        ));
    }
    let manifest_path = path.join(MANIFEST_NAME);
    let mut report = LoadReport::default();
    let mut samples = Vec::new();

    if manifest_path.is_file() {
        for entry in read_manifest(&manifest_path)? {
            let abs = path.join(&entry.path);
            match ImageTensor::open(&abs) {
                Ok(pixels) => {
                    samples.push(PersonImage {
                        pixels,
                        identity: entry.identity,
                        camera: entry.camera,
                        source: Source::Real,
                        origin_path: Some(entry.path),
                    });
                    report.loaded += 1;
                }
                Err(e) => report.failures.push((abs, e.to_string())),
            }
        }
    } else {
        let mut files: Vec<PathBuf> = fs::read_dir(path)
            .map_err(|e| Error::io(path, e))?
            .filter_map(|r| r.ok())
            .map(|e| e.path())
            .filter(|p| {
                p.extension()
                    .and_then(|e| e.to_str())
                    .map(|e| IMAGE_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
                    .unwrap_or(false)
            })
            .collect();
        files.sort();
        for file in files {
            let stem = file
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or_default();
            let Some((identity, camera)) = parse_benchmark_stem(stem) else {
                report
                    .failures
                    .push((file.clone(), "filename does not match {id}_c{cam} pattern".into()));
                continue;
            };
            match ImageTensor::open(&file) {
                Ok(pixels) => {
                    let rel = file.strip_prefix(path).unwrap_or(&file).to_path_buf();
                    samples.push(PersonImage {
                        pixels,
                        identity,
                        camera,
                        source: Source::Real,
                        origin_path: Some(rel),
                    });
                    report.loaded += 1;
                }
                Err(e) => report.failures.push((file, e.to_string())),
            }
        }
    }

    if samples.is_empty() {
        return Err(Error::EmptyDataset {
            path: path.to_path_buf(),
        });
    }
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    Ok((
        Dataset {
            samples,
            split,
            name,
        },
        report,
    ))
}

/// Write a dataset to `dir` as image files plus `manifest.tsv`.
///
/// Samples with no origin file are encoded as PNG; samples whose origin file
/// exists under `src_root` are copied verbatim. The input directory is never
/// modified.
pub fn materialize(ds: &Dataset, dir: &Path, src_root: Option<&Path>) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut entries = Vec::with_capacity(ds.len());
    for (i, s) in ds.samples.iter().enumerate() {
        let rel = s.file_name(i);
        let dst = dir.join(&rel);
        if let Some(parent) = dst.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        let copied = match (&s.origin_path, src_root) {
            (Some(orig), Some(root)) => {
                let src = root.join(orig);
                if src.is_file() && s.source == Source::Real {
                    fs::copy(&src, &dst).map_err(|e| Error::io(&src, e))?;
                    true
                } else {
                    false
                }
            }
            _ => false,
        };
        if !copied {
            s.pixels.save_png(&dst)?;
        }
        entries.push(ManifestEntry {
            path: rel,
            identity: s.identity,
            camera: s.camera,
        });
    }
    write_manifest(&dir.join(MANIFEST_NAME), &entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_dataset(values: &[(f64, f64, f64)]) -> Dataset {
        let samples = values
            .iter()
            .enumerate()
            .map(|(i, &(r, g, b))| PersonImage {
                pixels: ImageTensor::from_vec(3, 1, 1, vec![r, g, b]).unwrap(),
                identity: i as i64,
                camera: 0,
                source: Source::Real,
                origin_path: None,
            })
            .collect();
        Dataset {
            samples,
            split: Split::Train,
            name: "tiny".into(),
        }
    }

    #[test]
    fn parse_benchmark_examples() {
        assert_eq!(parse_benchmark_stem("0002_c1s1_000451_01"), Some((2, 1)));
        assert_eq!(parse_benchmark_stem("-1_c3s2_000000_00"), Some((-1, 3)));
        assert_eq!(parse_benchmark_stem("no_pattern_here"), None);
        assert_eq!(parse_benchmark_stem("12_d3"), None);
    }

    #[test]
    fn channel_means_hand_case() {
        // Two 1x1 images with R values 10 and 30 average to 20.
        let ds = tiny_dataset(&[(10.0, 0.0, 0.0), (30.0, 0.0, 0.0)]);
        let stats = channel_means(&ds).unwrap();
        assert_eq!(stats.mean_r, 20.0);
        assert_eq!(stats.mean_g, 0.0);
        assert_eq!(stats.count, 2);
    }

    #[test]
    fn channel_means_zero_images() {
        let ds = tiny_dataset(&[(0.0, 0.0, 0.0)]);
        let stats = channel_means(&ds).unwrap();
        assert_eq!((stats.mean_r, stats.mean_g, stats.mean_b), (0.0, 0.0, 0.0));
    }

    #[test]
    fn channel_means_rejects_empty() {
        let ds = Dataset {
            samples: vec![],
            split: Split::Train,
            name: "empty".into(),
        };
        assert!(channel_means(&ds).is_err());
    }

    #[test]
    fn manifest_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let entries = vec![
            ManifestEntry {
                path: PathBuf::from("0002_c1s1_000451_01.jpg"),
                identity: 2,
                camera: 1,
            },
            ManifestEntry {
                path: PathBuf::from("-1_c3s2_000000_00.jpg"),
                identity: -1,
                camera: 3,
            },
        ];
        let path = dir.path().join("manifest.tsv");
        write_manifest(&path, &entries).unwrap();
        let back = read_manifest(&path).unwrap();
        assert_eq!(entries, back);
    }

    #[test]
    fn load_directory_empty_is_fatal() {
        let dir = tempfile::tempdir().unwrap();
        let err = load_directory(dir.path(), Split::Train).unwrap_err();
        assert!(matches!(err, Error::EmptyDataset { .. }));
    }

    #[test]
    fn load_directory_parses_and_reports() {
        let dir = tempfile::tempdir().unwrap();
        let img = ImageTensor::zeros(3, 4, 4);
        img.save_png(&dir.path().join("0002_c1s1_000451_01.png")).unwrap();
        img.save_png(&dir.path().join("-1_c3s2_000000_00.png")).unwrap();
        img.save_png(&dir.path().join("badname.png")).unwrap();
        let (ds, report) = load_directory(dir.path(), Split::Gallery).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(report.loaded, 2);
        assert_eq!(report.failures.len(), 1);
        // Sorted filename order: "-1_..." sorts before "0002_...".
        assert_eq!(ds.samples[0].identity, -1);
        assert_eq!(ds.samples[0].camera, 3);
        assert_eq!(ds.samples[1].identity, 2);
        assert_eq!(ds.samples[1].camera, 1);
    }

    #[test]
    fn materialize_then_load_round_trips_labels() {
        let dir = tempfile::tempdir().unwrap();
        let ds = tiny_dataset(&[(10.0, 20.0, 30.0), (40.0, 50.0, 60.0)]);
        materialize(&ds, dir.path(), None).unwrap();
        let (back, report) = load_directory(dir.path(), Split::Train).unwrap();
        assert_eq!(report.failures.len(), 0);
        assert_eq!(back.len(), 2);
        for (a, b) in ds.samples.iter().zip(&back.samples) {
            assert_eq!(a.identity, b.identity);
            assert_eq!(a.camera, b.camera);
            assert_eq!(a.pixels, b.pixels);
        }
    }
}
