//! RGBA8 raster images and the tight-packing check for character artwork.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rgba(pub [u8; 4]);

impl Rgba {
    pub const TRANSPARENT: Rgba = Rgba([0, 0, 0, 0]);
    pub const WHITE: Rgba = Rgba([255, 255, 255, 255]);
    pub const BLACK: Rgba = Rgba([0, 0, 0, 255]);

    pub const fn rgb(r: u8, g: u8, b: u8) -> Rgba {
        Rgba([r, g, b, 255])
    }

    pub fn alpha(self) -> u8 {
        self.0[3]
    }

    /// `#rrggbb` without alpha, as used in SVG attributes.
    pub fn hex(self) -> alloc::string::String {
        let [r, g, b, _] = self.0;
        alloc::format!("#{r:02x}{g:02x}{b:02x}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RasterError {
    ZeroArea,
    NotRgba { channels: usize },
    LengthMismatch { expected: usize, found: usize },
}

impl fmt::Display for RasterError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ZeroArea => f.write_str("image has zero area"),
            Self::NotRgba { channels } => write!(f, "expected 4 RGBA channels, got {channels}"),
            Self::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} sample bytes, found {found}")
            }
        }
    }
}

/// Row-major, non-premultiplied RGBA8 pixels.
#[derive(Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl fmt::Debug for RasterImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RasterImage")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish_non_exhaustive()
    }
}

impl RasterImage {
    pub fn filled(width: u32, height: u32, color: Rgba) -> Result<Self, RasterError> {
        if width == 0 || height == 0 {
            return Err(RasterError::ZeroArea);
        }
        let mut data = Vec::with_capacity(width as usize * height as usize * 4);
        for _ in 0..(width as usize * height as usize) {
            data.extend_from_slice(&color.0);
        }
        Ok(Self { width, height, data })
    }

    /// Wraps interleaved samples; `channels` must be 4.
    pub fn from_samples(
        width: u32,
        height: u32,
        channels: usize,
        data: Vec<u8>,
    ) -> Result<Self, RasterError> {
        if width == 0 || height == 0 {
            return Err(RasterError::ZeroArea);
        }
        if channels != 4 {
            return Err(RasterError::NotRgba { channels });
        }
        let expected = width as usize * height as usize * 4;
        if data.len() != expected {
            return Err(RasterError::LengthMismatch { expected, found: data.len() });
        }
        Ok(Self { width, height, data })
    }

    pub fn from_rgba(width: u32, height: u32, data: Vec<u8>) -> Result<Self, RasterError> {
        Self::from_samples(width, height, 4, data)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.data
    }

    fn offset(&self, x: u32, y: u32) -> usize {
        (y as usize * self.width as usize + x as usize) * 4
    }

    pub fn pixel(&self, x: u32, y: u32) -> Rgba {
        let o = self.offset(x, y);
        Rgba([self.data[o], self.data[o + 1], self.data[o + 2], self.data[o + 3]])
    }

    pub fn set_pixel(&mut self, x: u32, y: u32, color: Rgba) {
        let o = self.offset(x, y);
        self.data[o..o + 4].copy_from_slice(&color.0);
    }

    fn row_has_ink(&self, y: u32) -> bool {
        (0..self.width).any(|x| self.pixel(x, y).alpha() > 0)
    }

    fn column_has_ink(&self, x: u32) -> bool {
        (0..self.height).any(|y| self.pixel(x, y).alpha() > 0)
    }

    /// Bounding box of pixels with non-zero alpha, as `(x, y, w, h)`.
    pub fn alpha_bounds(&self) -> Option<PixelRect> {
        let mut min_x = u32::MAX;
        let mut min_y = u32::MAX;
        let mut max_x = 0;
        let mut max_y = 0;
        let mut any = false;
        for y in 0..self.height {
            for x in 0..self.width {
                if self.pixel(x, y).alpha() > 0 {
                    any = true;
                    min_x = min_x.min(x);
                    max_x = max_x.max(x);
                    min_y = min_y.min(y);
                    max_y = max_y.max(y);
                }
            }
        }
        any.then(|| PixelRect { x: min_x, y: min_y, w: max_x - min_x + 1, h: max_y - min_y + 1 })
    }

    pub fn crop(&self, r: PixelRect) -> Result<RasterImage, RasterError> {
        if r.w == 0 || r.h == 0 {
            return Err(RasterError::ZeroArea);
        }
        let mut data = Vec::with_capacity(r.w as usize * r.h as usize * 4);
        for y in r.y..r.y + r.h {
            let start = self.offset(r.x, y);
            data.extend_from_slice(&self.data[start..start + r.w as usize * 4]);
        }
        Ok(RasterImage { width: r.w, height: r.h, data })
    }

    /// Horizontal mirror.
    pub fn flipped(&self) -> RasterImage {
        let mut out = self.clone();
        for y in 0..self.height {
            for x in 0..self.width {
                out.set_pixel(self.width - 1 - x, y, self.pixel(x, y));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PixelRect {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    Top,
    Bottom,
    Left,
    Right,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::Top, Edge::Bottom, Edge::Left, Edge::Right];

    pub fn name(self) -> &'static str {
        match self {
            Edge::Top => "top",
            Edge::Bottom => "bottom",
            Edge::Left => "left",
            Edge::Right => "right",
        }
    }
}

/// Per-edge outcome of [`validate_asset`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub top: bool,
    pub bottom: bool,
    pub left: bool,
    pub right: bool,
    /// Bottom row is empty but the asset is allowed to be cut there.
    pub bottom_cut: bool,
    /// Tight sub-rectangle for auto-trim; `None` for a fully transparent image.
    pub trim: Option<PixelRect>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.top && self.bottom && self.left && self.right
    }

    pub fn failed_edges(&self) -> Vec<Edge> {
        Edge::ALL
            .into_iter()
            .filter(|e| match e {
                Edge::Top => !self.top,
                Edge::Bottom => !self.bottom,
                Edge::Left => !self.left,
                Edge::Right => !self.right,
            })
            .collect()
    }
}

/// Tight-packing check: the first and last columns and the first row must
/// hold ink. The last row must too, unless the asset may be cut at the
/// bottom.
pub fn validate_asset(image: &RasterImage, bottom_cut_allowed: bool) -> ValidationReport {
    let top = image.row_has_ink(0);
    let last_row_ink = image.row_has_ink(image.height - 1);
    let left = image.column_has_ink(0);
    let right = image.column_has_ink(image.width - 1);
    let bottom_cut = !last_row_ink && bottom_cut_allowed;
    let bottom = last_row_ink || bottom_cut;

    let trim = image.alpha_bounds().map(|mut r| {
        if bottom_cut {
            r.h = image.height - r.y;
        }
        r
    });
    ValidationReport { top, bottom, left, right, bottom_cut, trim }
}

/// Crops an image to its tight bounds, keeping empty bottom rows when the
/// bottom may be cut.
pub fn auto_trim(image: &RasterImage, bottom_cut_allowed: bool) -> Result<RasterImage, RasterError> {
    match validate_asset(image, bottom_cut_allowed).trim {
        Some(r) => image.crop(r),
        None => Err(RasterError::ZeroArea),
    }
}

/// Convenience for tests and fixtures: a solid block with an optional
/// transparent border of `pad` pixels on the chosen edges.
pub fn padded_block(w: u32, h: u32, color: Rgba, pad: [u32; 4]) -> RasterImage {
    let [top, right, bottom, left] = pad;
    let mut img = RasterImage::filled(w, h, Rgba::TRANSPARENT).expect("non-zero size");
    for y in top..h.saturating_sub(bottom) {
        for x in left..w.saturating_sub(right) {
            img.set_pixel(x, y, color);
        }
    }
    img
}

pub(crate) fn blank(w: u32, h: u32) -> Vec<u8> {
    vec![0; w as usize * h as usize * 4]
}
