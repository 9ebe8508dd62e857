//! Square raster images in and out of pixel fields.
//!
//! Two on-disk formats: binary PGM for grayscale at either depth, and 8-bit
//! PNG for grayscale or RGB. Color images become three independent fields;
//! nothing couples the channels downstream. Intensities are kept as raw
//! reals, never rescaled to [0, 1].

use crate::io::pgm::{read_pgm, write_pgm, PgmError, PgmImage};
use crate::spectral::{LatticeSize, PixelField};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("{path}: image is {width}x{height}, the lattice model needs a square")]
    NonSquare { path: String, width: usize, height: usize },
    #[error("{path}: only .pgm and .png files are handled")]
    UnsupportedFormat { path: String },
    #[error("{path}: {what}")]
    UnsupportedContent { path: String, what: String },
    #[error(transparent)]
    Pgm(#[from] PgmError),
    #[error("{path}: {message}")]
    Png { path: String, message: String },
}

pub const GRAY_CHANNEL: &str = "gray";
pub const COLOR_CHANNELS: [&str; 3] = ["r", "g", "b"];

/// One square image as per-channel fields, plus what the file stored.
#[derive(Debug, Clone)]
pub struct LoadedImage {
    pub size: LatticeSize,
    pub bit_depth: u8,
    pub channels: Vec<(String, PixelField)>,
}

/// Quantization applied when writing fields to integer samples: values are
/// shifted by `offset`, rounded, and clamped to the sample range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExportSettings {
    pub offset: f64,
    pub bit_depth: u8,
}

fn square_size(path: &str, width: usize, height: usize) -> Result<LatticeSize, RasterError> {
    if width != height {
        return Err(RasterError::NonSquare { path: path.to_string(), width, height });
    }
    LatticeSize::new(width).map_err(|_| RasterError::UnsupportedContent {
        path: path.to_string(),
        what: "empty image".to_string(),
    })
}

enum Format {
    Pgm,
    Png,
}

fn format_of(path: &Path) -> Result<Format, RasterError> {
    match path.extension().and_then(|e| e.to_str()).map(|e| e.to_ascii_lowercase()) {
        Some(ext) if ext == "pgm" => Ok(Format::Pgm),
        Some(ext) if ext == "png" => Ok(Format::Png),
        _ => Err(RasterError::UnsupportedFormat { path: path.display().to_string() }),
    }
}

pub fn load_image(path: &Path) -> Result<LoadedImage, RasterError> {
    let shown = path.display().to_string();
    match format_of(path)? {
        Format::Pgm => {
            let img = read_pgm(path)?;
            let size = square_size(&shown, img.width, img.height)?;
            let values = img.samples.iter().map(|&v| v as f64).collect();
            let field = PixelField::from_values(size, values).expect("length checked by reader");
            Ok(LoadedImage {
                size,
                bit_depth: if img.max_value > 255 { 16 } else { 8 },
                channels: vec![(GRAY_CHANNEL.to_string(), field)],
            })
        }
        Format::Png => {
            let decoded = image::open(path)
                .map_err(|e| RasterError::Png { path: shown.clone(), message: e.to_string() })?;
            match decoded {
                image::DynamicImage::ImageLuma8(img) => {
                    let (w, h) = img.dimensions();
                    let size = square_size(&shown, w as usize, h as usize)?;
                    let values = img.as_raw().iter().map(|&v| v as f64).collect();
                    let field = PixelField::from_values(size, values).expect("w*h samples");
                    Ok(LoadedImage {
                        size,
                        bit_depth: 8,
                        channels: vec![(GRAY_CHANNEL.to_string(), field)],
                    })
                }
                image::DynamicImage::ImageRgb8(img) => {
                    let (w, h) = img.dimensions();
                    let size = square_size(&shown, w as usize, h as usize)?;
                    let pixels = img.as_raw();
                    let channels = COLOR_CHANNELS
                        .iter()
                        .enumerate()
                        .map(|(c, label)| {
                            let values =
                                pixels.iter().skip(c).step_by(3).map(|&v| v as f64).collect();
                            let field =
                                PixelField::from_values(size, values).expect("w*h samples");
                            (label.to_string(), field)
                        })
                        .collect();
                    Ok(LoadedImage { size, bit_depth: 8, channels })
                }
                _ => Err(RasterError::UnsupportedContent {
                    path: shown,
                    what: "only 8-bit grayscale or rgb png is handled".to_string(),
                }),
            }
        }
    }
}

fn quantize(field: &PixelField, offset: f64, max: u16) -> Vec<u16> {
    field
        .values()
        .iter()
        .map(|v| (v + offset).round().clamp(0.0, max as f64) as u16)
        .collect()
}

/// Writes one (grayscale) or three (RGB, PNG only) channels.
pub fn save_image(
    path: &Path,
    channels: &[(&str, &PixelField)],
    export: ExportSettings,
) -> Result<(), RasterError> {
    let shown = path.display().to_string();
    assert!(!channels.is_empty());
    let size = channels[0].1.size();
    let n = size.get();
    match format_of(path)? {
        Format::Pgm => {
            if channels.len() != 1 {
                return Err(RasterError::UnsupportedContent {
                    path: shown,
                    what: "pgm holds a single channel".to_string(),
                });
            }
            let max_value = if export.bit_depth > 8 { 65535 } else { 255 };
            let samples = quantize(channels[0].1, export.offset, max_value);
            write_pgm(path, &PgmImage { width: n, height: n, max_value, samples })?;
            Ok(())
        }
        Format::Png => {
            if export.bit_depth != 8 {
                return Err(RasterError::UnsupportedContent {
                    path: shown,
                    what: "png export is 8-bit only".to_string(),
                });
            }
            let to_bytes = |f: &PixelField| -> Vec<u8> {
                quantize(f, export.offset, 255).into_iter().map(|v| v as u8).collect()
            };
            let result = match channels {
                [(_, only)] => image::GrayImage::from_raw(n as u32, n as u32, to_bytes(only))
                    .expect("n*n samples")
                    .save(path),
                [(_, r), (_, g), (_, b)] => {
                    let planes = [to_bytes(r), to_bytes(g), to_bytes(b)];
                    let mut interleaved = Vec::with_capacity(3 * n * n);
                    for i in 0..n * n {
                        for plane in &planes {
                            interleaved.push(plane[i]);
                        }
                    }
                    image::RgbImage::from_raw(n as u32, n as u32, interleaved)
                        .expect("3*n*n samples")
                        .save(path)
                }
                _ => {
                    return Err(RasterError::UnsupportedContent {
                        path: shown,
                        what: format!("{} channels, png holds one or three", channels.len()),
                    })
                }
            };
            result.map_err(|e| RasterError::Png { path: shown, message: e.to_string() })
        }
    }
}
