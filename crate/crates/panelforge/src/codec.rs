//! PNG in and out, and `data:` URIs for embedding.

use std::io::Cursor;

use base64::Engine;
use image::codecs::png::{CompressionType, FilterType, PngEncoder};
use image::{ColorType, ImageEncoder, ImageFormat};
use panelforge_core::raster::{RasterError, RasterImage};

#[derive(Debug, thiserror::Error)]
pub enum CodecError {
    #[error("not a decodable PNG: {0}")]
    Decode(String),
    #[error("{0}")]
    Raster(String),
    #[error("PNG encoding failed: {0}")]
    Encode(String),
}

impl From<RasterError> for CodecError {
    fn from(e: RasterError) -> Self {
        CodecError::Raster(e.to_string())
    }
}

/// Decodes a PNG that carries an alpha channel. Grey+alpha and 16-bit inputs
/// are widened or narrowed to 8-bit RGBA; inputs without alpha are rejected.
pub fn decode_png(bytes: &[u8]) -> Result<RasterImage, CodecError> {
    let img = image::load_from_memory_with_format(bytes, ImageFormat::Png)
        .map_err(|e| CodecError::Decode(e.to_string()))?;
    let color = img.color();
    if !color.has_alpha() {
        return Err(RasterError::NotRgba { channels: color.channel_count() as usize }.into());
    }
    let rgba = img.to_rgba8();
    let (w, h) = rgba.dimensions();
    Ok(RasterImage::from_rgba(w, h, rgba.into_raw())?)
}

/// 8-bit RGBA, non-interlaced, fixed encoder settings.
pub fn encode_png(image: &RasterImage) -> Result<Vec<u8>, CodecError> {
    let mut out = Cursor::new(Vec::new());
    PngEncoder::new_with_quality(&mut out, CompressionType::Default, FilterType::Adaptive)
        .write_image(image.as_bytes(), image.width(), image.height(), ColorType::Rgba8.into())
        .map_err(|e| CodecError::Encode(e.to_string()))?;
    Ok(out.into_inner())
}

pub fn png_data_uri(png: &[u8]) -> String {
    format!("data:image/png;base64,{}", base64::engine::general_purpose::STANDARD.encode(png))
}
