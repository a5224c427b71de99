//! Software rasterizer for panel documents.
//!
//! Pixels are sampled at their centers, images use nearest-neighbour lookup
//! and compositing is integer source-over, so output is identical on every
//! platform. Balloon text uses an 8x8 bitmap font stretched to the fixed
//! glyph cell (`advance x font_size`).

use alloc::vec;
use alloc::vec::Vec;

use font8x8::legacy::BASIC_LEGACY;

use crate::balloon::Balloon;
use crate::document::{DrawItem, ImageItem, PanelDocument, RenderError};
use crate::geometry::Rect;
use crate::raster::{RasterImage, Rgba};

/// Largest raster either side may reach.
pub const MAX_RASTER_SIDE: u64 = 16_384;

/// Per-pixel index of the top-level draw item that last left ink there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HitMap {
    pub width: u32,
    pub height: u32,
    hits: Vec<u32>,
}

impl HitMap {
    const NONE: u32 = u32::MAX;

    pub fn at(&self, x: u32, y: u32) -> Option<usize> {
        match self.hits[y as usize * self.width as usize + x as usize] {
            Self::NONE => None,
            i => Some(i as usize),
        }
    }

    /// Number of pixels owned by `item` and their bounding box.
    pub fn coverage(&self, item: usize) -> (usize, Option<crate::raster::PixelRect>) {
        let mut count = 0;
        let (mut x0, mut y0, mut x1, mut y1) = (u32::MAX, u32::MAX, 0, 0);
        for y in 0..self.height {
            for x in 0..self.width {
                if self.at(x, y) == Some(item) {
                    count += 1;
                    x0 = x0.min(x);
                    y0 = y0.min(y);
                    x1 = x1.max(x);
                    y1 = y1.max(y);
                }
            }
        }
        let bounds = (count > 0).then(|| crate::raster::PixelRect { x: x0, y: y0, w: x1 - x0 + 1, h: y1 - y0 + 1 });
        (count, bounds)
    }
}

pub fn raster_size(doc: &PanelDocument, scale: f64) -> Result<(u32, u32), RenderError> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(RenderError::InvalidScale(scale));
    }
    let w = libm::ceil(doc.width * scale).max(1.0) as u64;
    let h = libm::ceil(doc.height * scale).max(1.0) as u64;
    if w > MAX_RASTER_SIDE || h > MAX_RASTER_SIDE {
        return Err(RenderError::TooLarge { width: w, height: h });
    }
    Ok((w as u32, h as u32))
}

pub fn rasterize(doc: &PanelDocument, scale: f64) -> Result<RasterImage, RenderError> {
    rasterize_with_hits(doc, scale).map(|(img, _)| img)
}

pub fn rasterize_with_hits(
    doc: &PanelDocument,
    scale: f64,
) -> Result<(RasterImage, HitMap), RenderError> {
    let (w, h) = raster_size(doc, scale)?;
    let mut canvas = Canvas {
        width: w,
        data: crate::raster::blank(w, h),
        hits: vec![HitMap::NONE; w as usize * h as usize],
    };
    let view = View { ox: 0.0, oy: 0.0, k: scale, clip: PixelBox { x0: 0, y0: 0, x1: w, y1: h } };
    canvas.draw_doc(doc, &view, None);
    let Canvas { data, hits, .. } = canvas;
    let image = RasterImage::from_rgba(w, h, data).expect("canvas has the right size");
    Ok((image, HitMap { width: w, height: h, hits }))
}

#[derive(Debug, Clone, Copy)]
struct PixelBox {
    x0: u32,
    y0: u32,
    x1: u32,
    y1: u32,
}

impl PixelBox {
    fn intersect(self, o: PixelBox) -> PixelBox {
        let x0 = self.x0.max(o.x0);
        let y0 = self.y0.max(o.y0);
        PixelBox { x0, y0, x1: self.x1.min(o.x1).max(x0), y1: self.y1.min(o.y1).max(y0) }
    }
}

/// Document-to-pixel mapping `p = o + k * d` plus the pixel clip.
#[derive(Debug, Clone, Copy)]
struct View {
    ox: f64,
    oy: f64,
    k: f64,
    clip: PixelBox,
}

impl View {
    fn to_doc(self, px: u32, py: u32) -> (f64, f64) {
        ((px as f64 + 0.5 - self.ox) / self.k, (py as f64 + 0.5 - self.oy) / self.k)
    }

    /// Pixels whose centers fall inside `r` (half-open), within the clip.
    fn pixels_of(&self, r: &Rect) -> PixelBox {
        let edge = |v: f64| libm::ceil(v - 0.5).max(0.0).min(u32::MAX as f64) as u32;
        PixelBox {
            x0: edge(self.ox + self.k * r.x),
            y0: edge(self.oy + self.k * r.y),
            x1: edge(self.ox + self.k * r.right()),
            y1: edge(self.oy + self.k * r.bottom()),
        }
        .intersect(self.clip)
    }
}

struct Canvas {
    width: u32,
    data: Vec<u8>,
    hits: Vec<u32>,
}

fn inside(r: &Rect, x: f64, y: f64) -> bool {
    x >= r.x && x < r.right() && y >= r.y && y < r.bottom()
}

fn in_rounded(r: &Rect, radius: f64, x: f64, y: f64) -> bool {
    if !inside(r, x, y) {
        return false;
    }
    let radius = radius.min(r.w / 2.0).min(r.h / 2.0).max(0.0);
    let dx = (r.x + radius - x).max(x - (r.right() - radius)).max(0.0);
    let dy = (r.y + radius - y).max(y - (r.bottom() - radius)).max(0.0);
    dx * dx + dy * dy <= radius * radius
}

fn grow(r: &Rect, by: f64) -> Rect {
    Rect::new(r.x - by, r.y - by, r.w + 2.0 * by, r.h + 2.0 * by)
}

fn edge_fn(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> f64 {
    (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0)
}

fn segment_distance(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> f64 {
    let (vx, vy) = (b.0 - a.0, b.1 - a.1);
    let len2 = vx * vx + vy * vy;
    let t = if len2 > 0.0 { (((p.0 - a.0) * vx + (p.1 - a.1) * vy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    libm::hypot(p.0 - (a.0 + t * vx), p.1 - (a.1 + t * vy))
}

impl Canvas {
    fn blend(&mut self, x: u32, y: u32, src: Rgba, item: Option<u32>) {
        let sa = src.alpha() as u32;
        if sa == 0 {
            return;
        }
        let idx = y as usize * self.width as usize + x as usize;
        if let Some(item) = item {
            self.hits[idx] = item;
        }
        let o = idx * 4;
        let dst = &mut self.data[o..o + 4];
        if sa == 255 {
            dst.copy_from_slice(&src.0);
            return;
        }
        let da = dst[3] as u32;
        let inv = 255 - sa;
        // Alpha scaled by 255 to keep everything in integers.
        let out_a255 = sa * 255 + da * inv;
        if out_a255 == 0 {
            return;
        }
        for c in 0..3 {
            let num = src.0[c] as u32 * sa * 255 + dst[c] as u32 * da * inv;
            dst[c] = ((num + out_a255 / 2) / out_a255) as u8;
        }
        dst[3] = ((out_a255 + 127) / 255) as u8;
    }

    fn fill_where(
        &mut self,
        view: &View,
        bounds: &Rect,
        color: Rgba,
        item: Option<u32>,
        pred: impl Fn(f64, f64) -> bool,
    ) {
        let b = view.pixels_of(bounds);
        for py in b.y0..b.y1 {
            for px in b.x0..b.x1 {
                let (x, y) = view.to_doc(px, py);
                if pred(x, y) {
                    self.blend(px, py, color, item);
                }
            }
        }
    }

    fn draw_doc(&mut self, doc: &PanelDocument, view: &View, owner: Option<u32>) {
        let page = Rect::new(0.0, 0.0, doc.width, doc.height);
        if let Some(bg) = doc.background {
            self.fill_where(view, &page, bg, None, |_, _| true);
        }
        for (i, item) in doc.items.iter().enumerate() {
            let id = Some(owner.unwrap_or(i as u32));
            match item {
                DrawItem::Image(im) => self.draw_image(view, im, id),
                DrawItem::Balloon(b) => self.draw_balloon(view, b, id),
                DrawItem::Outline { rect, width } => {
                    let inner = grow(rect, -*width);
                    self.fill_where(view, rect, Rgba::BLACK, id, |x, y| !inside(&inner, x, y));
                }
                DrawItem::Inset { rect, doc: inner } => {
                    if inner.width <= 0.0 || inner.height <= 0.0 {
                        continue;
                    }
                    let k = view.k * rect.w / inner.width;
                    let sub = View {
                        ox: view.ox + view.k * rect.x,
                        oy: view.oy + view.k * rect.y,
                        k,
                        clip: view.pixels_of(rect),
                    };
                    self.draw_doc(inner, &sub, id);
                }
            }
        }
    }

    fn draw_image(&mut self, view: &View, im: &ImageItem, item: Option<u32>) {
        let r = im.rect;
        if r.is_empty() {
            return;
        }
        let src = &im.image.raster;
        let (sw, sh) = (src.width(), src.height());
        let area = r.intersect(&im.clip);
        let b = view.pixels_of(&area);
        for py in b.y0..b.y1 {
            for px in b.x0..b.x1 {
                let (x, y) = view.to_doc(px, py);
                if !inside(&r, x, y) || !inside(&im.clip, x, y) {
                    continue;
                }
                let mut col = (libm::floor((x - r.x) / r.w * sw as f64) as i64).clamp(0, sw as i64 - 1) as u32;
                let row = (libm::floor((y - r.y) / r.h * sh as f64) as i64).clamp(0, sh as i64 - 1) as u32;
                if im.flip {
                    col = sw - 1 - col;
                }
                self.blend(px, py, src.pixel(col, row), item);
            }
        }
    }

    fn draw_balloon(&mut self, view: &View, b: &Balloon, item: Option<u32>) {
        let sw = b.style.stroke_width;
        let [p0, p1, tip] = b.tail;
        let tri_bounds = {
            let x0 = p0.0.min(p1.0).min(tip.0) - sw;
            let y0 = p0.1.min(p1.1).min(tip.1) - sw;
            let x1 = p0.0.max(p1.0).max(tip.0) + sw;
            let y1 = p0.1.max(p1.1).max(tip.1) + sw;
            Rect::new(x0, y0, x1 - x0, y1 - y0)
        };
        let orient = edge_fn(p0, tip, p1);
        let in_tri = |x: f64, y: f64| {
            let p = (x, y);
            let e0 = edge_fn(p0, tip, p) * orient;
            let e1 = edge_fn(tip, p1, p) * orient;
            let e2 = edge_fn(p1, p0, p) * orient;
            e0 >= 0.0 && e1 >= 0.0 && e2 >= 0.0
        };
        let near_sides = |x: f64, y: f64| {
            segment_distance(p0, tip, (x, y)) <= sw / 2.0 || segment_distance(tip, p1, (x, y)) <= sw / 2.0
        };
        self.fill_where(view, &tri_bounds, Rgba::WHITE, item, in_tri);
        self.fill_where(view, &tri_bounds, Rgba::BLACK, item, near_sides);

        let rad = b.style.corner_radius;
        let outer = grow(&b.rect, sw / 2.0);
        let inner = grow(&b.rect, -sw / 2.0);
        self.fill_where(view, &outer, Rgba::BLACK, item, |x, y| in_rounded(&outer, rad + sw / 2.0, x, y));
        self.fill_where(view, &inner, Rgba::WHITE, item, |x, y| in_rounded(&inner, rad - sw / 2.0, x, y));

        let advance = b.style.advance * b.font_size;
        for (x0, y0, line) in b.line_origins() {
            for (j, c) in line.chars().enumerate() {
                let glyph = BASIC_LEGACY[if (c as u32) < 128 { c as usize } else { b'?' as usize }];
                let cell = Rect::new(x0 + j as f64 * advance, y0, advance, b.font_size);
                self.fill_where(view, &cell, Rgba::BLACK, item, |x, y| {
                    let gx = libm::floor((x - cell.x) / cell.w * 8.0).clamp(0.0, 7.0) as u32;
                    let gy = libm::floor((y - cell.y) / cell.h * 8.0).clamp(0.0, 7.0) as usize;
                    glyph[gy] >> gx & 1 == 1
                });
            }
        }
    }
}
