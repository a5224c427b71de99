//! Panel documents: an ordered draw list that both the SVG writer and the
//! rasterizer consume.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::balloon::{place_balloons, Balloon, BalloonError, BalloonRequest, BalloonStyle};
use crate::geometry::Rect;
use crate::raster::{RasterImage, Rgba};
use crate::tree::PanelScene;

/// A character image as the document references it. `href` is what the SVG
/// writer emits (typically a `data:` URI); `raster` is what the rasterizer
/// samples.
#[derive(Debug, Clone, PartialEq)]
pub struct DocImage {
    pub asset_id: String,
    pub href: String,
    pub raster: RasterImage,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Credit {
    pub asset_id: String,
    pub name: String,
    pub creator: String,
    pub url: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DocMetadata {
    pub view_param: Option<f64>,
    pub credits: Vec<Credit>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImageItem {
    pub image_index: usize,
    pub image: Arc<DocImage>,
    pub rect: Rect,
    pub clip: Rect,
    pub flip: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DrawItem {
    Image(ImageItem),
    Balloon(Balloon),
    /// Stroke drawn just inside `rect`.
    Outline { rect: Rect, width: f64 },
    /// Another document scaled uniformly into `rect`.
    Inset { rect: Rect, doc: Arc<PanelDocument> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PanelDocument {
    pub width: f64,
    pub height: f64,
    pub background: Option<Rgba>,
    /// Where the character frame sits inside the document.
    pub frame: Rect,
    pub items: Vec<DrawItem>,
    pub metadata: DocMetadata,
}

impl PanelDocument {
    pub fn empty(width: f64, height: f64) -> Self {
        Self {
            width,
            height,
            background: Some(Rgba::WHITE),
            frame: Rect::new(0.0, 0.0, width, height),
            items: Vec::new(),
            metadata: DocMetadata::default(),
        }
    }

    pub fn aspect(&self) -> f64 {
        self.width / self.height
    }

    pub fn images(&self) -> impl Iterator<Item = &ImageItem> {
        self.items.iter().filter_map(|item| match item {
            DrawItem::Image(im) => Some(im),
            _ => None,
        })
    }

    pub fn balloons(&self) -> impl Iterator<Item = &Balloon> {
        self.items.iter().filter_map(|item| match item {
            DrawItem::Balloon(b) => Some(b),
            _ => None,
        })
    }

    /// Same document with every image flip toggled where `which[i]` is set.
    pub fn with_flips_toggled(&self, which: &[bool]) -> Self {
        let mut out = self.clone();
        for item in &mut out.items {
            if let DrawItem::Image(im) = item {
                if which.get(im.image_index).copied().unwrap_or(false) {
                    im.flip = !im.flip;
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub background: Option<Rgba>,
    /// Frame border width; `None` draws no border.
    pub border: Option<f64>,
    pub balloon_style: BalloonStyle,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self { background: Some(Rgba::WHITE), border: Some(1.0), balloon_style: BalloonStyle::default() }
    }
}

impl RenderOptions {
    pub fn without_border(mut self) -> Self {
        self.border = None;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RenderError {
    ImageCountMismatch { placements: usize, images: usize },
    FlipCountMismatch { placements: usize, flips: usize },
    Balloon(BalloonError),
    InvalidScale(f64),
    TooLarge { width: u64, height: u64 },
}

impl fmt::Display for RenderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ImageCountMismatch { placements, images } => {
                write!(f, "{placements} placements but {images} images")
            }
            Self::FlipCountMismatch { placements, flips } => {
                write!(f, "{placements} placements but {flips} flip flags")
            }
            Self::Balloon(e) => write!(f, "balloon layout failed: {e}"),
            Self::InvalidScale(s) => write!(f, "raster scale must be positive and finite, got {s}"),
            Self::TooLarge { width, height } => {
                write!(f, "raster of {width}x{height} pixels is too large")
            }
        }
    }
}

impl From<BalloonError> for RenderError {
    fn from(e: BalloonError) -> Self {
        RenderError::Balloon(e)
    }
}

/// Builds the panel document: background, images in z order (each clipped to
/// its crop rectangle), balloons in anchor order, then the frame border.
///
/// `images[i]` and `flips[i]` belong to scene image `i`.
pub fn render_panel(
    scene: &PanelScene,
    images: &[Arc<DocImage>],
    flips: &[bool],
    balloons: &[BalloonRequest],
    options: &RenderOptions,
) -> Result<PanelDocument, RenderError> {
    let placements = scene.images.len();
    if images.len() != placements {
        return Err(RenderError::ImageCountMismatch { placements, images: images.len() });
    }
    if flips.len() != placements {
        return Err(RenderError::FlipCountMismatch { placements, flips: flips.len() });
    }
    let layout = place_balloons(scene, balloons, &options.balloon_style)?;
    let band = layout.band_height;
    let frame = Rect::new(0.0, band, scene.frame.w, scene.frame.h);

    let mut order: Vec<usize> = (0..placements).collect();
    order.sort_by_key(|&i| (scene.images[i].z, i));

    let mut items = Vec::with_capacity(placements + layout.balloons.len() + 1);
    for i in order {
        let s = &scene.images[i];
        items.push(DrawItem::Image(ImageItem {
            image_index: s.image_index,
            image: images[i].clone(),
            rect: s.rect.translate(0.0, band),
            clip: s.clip.translate(0.0, band),
            flip: flips[i],
        }));
    }
    items.extend(layout.balloons.into_iter().map(DrawItem::Balloon));
    if let Some(width) = options.border {
        items.push(DrawItem::Outline { rect: frame, width });
    }

    Ok(PanelDocument {
        width: scene.frame.w,
        height: scene.frame.h + band,
        background: options.background,
        frame,
        items,
        metadata: DocMetadata::default(),
    })
}
