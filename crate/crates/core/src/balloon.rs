//! Conservative word balloons.
//!
//! Balloons never cover characters: the panel grows upward by a band that
//! holds every balloon, and each balloon sends a tail down to the top-center
//! of the visible part of its character. Text is measured with a fixed
//! per-glyph advance so layouts are identical on every platform.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::Rect;
use crate::tree::PanelScene;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalloonStyle {
    pub padding: f64,
    pub tail_height: f64,
    pub min_gap: f64,
    /// Wrap width as a multiple of the anchor's visible width.
    pub wrap_factor: f64,
    /// Glyph advance as a multiple of the font size.
    pub advance: f64,
    pub corner_radius: f64,
    pub tail_base: f64,
    pub stroke_width: f64,
}

impl Default for BalloonStyle {
    fn default() -> Self {
        Self {
            padding: 6.0,
            tail_height: 16.0,
            min_gap: 8.0,
            wrap_factor: 1.2,
            advance: 0.6,
            corner_radius: 6.0,
            tail_base: 10.0,
            stroke_width: 1.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalloonRequest {
    pub anchor: usize,
    pub text: String,
    pub font_size: f64,
}

impl BalloonRequest {
    pub fn new(anchor: usize, text: impl Into<String>, font_size: f64) -> Self {
        Self { anchor, text: text.into(), font_size }
    }
}

/// A placed balloon in document coordinates (the band starts at `y = 0`,
/// the character frame starts at `y = band_height`).
#[derive(Debug, Clone, PartialEq)]
pub struct Balloon {
    pub anchor_index: usize,
    pub text: String,
    pub lines: Vec<String>,
    pub font_size: f64,
    pub rect: Rect,
    /// Base left, base right, tip.
    pub tail: [(f64, f64); 3],
    pub style: BalloonStyle,
}

impl Balloon {
    pub fn tip(&self) -> (f64, f64) {
        self.tail[2]
    }

    /// Top-left corner of each text line's cell.
    pub fn line_origins(&self) -> impl Iterator<Item = (f64, f64, &str)> + '_ {
        let x = self.rect.x + self.style.padding;
        let y0 = self.rect.y + self.style.padding;
        self.lines
            .iter()
            .enumerate()
            .map(move |(i, line)| (x, y0 + i as f64 * self.font_size, line.as_str()))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BalloonLayout {
    pub band_height: f64,
    pub balloons: Vec<Balloon>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BalloonError {
    AnchorOutOfRange { anchor: usize, images: usize },
    EmptyText { anchor: usize },
    InvalidFontSize { anchor: usize, font_size: f64 },
    TooWide { anchor: usize, width: f64, panel_width: f64 },
    DoesNotFit { needed: f64, panel_width: f64 },
}

impl fmt::Display for BalloonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::AnchorOutOfRange { anchor, images } => {
                write!(f, "balloon anchor {anchor} is out of range for {images} characters")
            }
            Self::EmptyText { anchor } => write!(f, "balloon for anchor {anchor} has no text"),
            Self::InvalidFontSize { anchor, font_size } => {
                write!(f, "balloon for anchor {anchor} has invalid font size {font_size}")
            }
            Self::TooWide { anchor, width, panel_width } => write!(
                f,
                "balloon for anchor {anchor} needs width {width:.3} but the panel is {panel_width:.3} wide"
            ),
            Self::DoesNotFit { needed, panel_width } => write!(
                f,
                "balloons need {needed:.3} units side by side but the panel is {panel_width:.3} wide"
            ),
        }
    }
}

/// Greedy word wrap where every glyph is `advance` wide. Words wider than the
/// limit get a line of their own.
pub fn wrap_text(text: &str, max_width: f64, advance: f64) -> Vec<String> {
    let mut lines: Vec<String> = Vec::new();
    let mut current = String::new();
    let mut current_len = 0usize;
    for word in text.split_whitespace() {
        let len = word.chars().count();
        if current_len == 0 {
            current.push_str(word);
            current_len = len;
        } else if (current_len + 1 + len) as f64 * advance <= max_width {
            current.push(' ');
            current.push_str(word);
            current_len += 1 + len;
        } else {
            lines.push(core::mem::take(&mut current));
            current.push_str(word);
            current_len = len;
        }
    }
    if current_len > 0 {
        lines.push(current);
    }
    lines
}

fn line_width(line: &str, advance: f64) -> f64 {
    line.chars().count() as f64 * advance
}

pub fn place_balloons(
    scene: &PanelScene,
    requests: &[BalloonRequest],
    style: &BalloonStyle,
) -> Result<BalloonLayout, BalloonError> {
    if requests.is_empty() {
        return Ok(BalloonLayout::default());
    }
    let panel_width = scene.frame.w;
    let images = scene.images.len();

    let mut order: Vec<usize> = (0..requests.len()).collect();
    order.sort_by_key(|&i| requests[i].anchor);

    struct Draft {
        request: usize,
        lines: Vec<String>,
        width: f64,
        height: f64,
        visible: Rect,
    }

    let mut drafts = Vec::with_capacity(requests.len());
    for &i in &order {
        let req = &requests[i];
        let anchor = req.anchor;
        if anchor >= images {
            return Err(BalloonError::AnchorOutOfRange { anchor, images });
        }
        if req.text.trim().is_empty() {
            return Err(BalloonError::EmptyText { anchor });
        }
        if !(req.font_size.is_finite() && req.font_size > 0.0) {
            return Err(BalloonError::InvalidFontSize { anchor, font_size: req.font_size });
        }
        let visible = scene.images[anchor].visible();
        let advance = style.advance * req.font_size;
        let lines = wrap_text(&req.text, style.wrap_factor * visible.w, advance);
        let text_w = lines.iter().map(|l| line_width(l, advance)).fold(0.0, f64::max);
        let width = text_w + 2.0 * style.padding;
        if width > panel_width {
            return Err(BalloonError::TooWide { anchor, width, panel_width });
        }
        let height = lines.len() as f64 * req.font_size + 2.0 * style.padding;
        drafts.push(Draft { request: i, lines, width, height, visible });
    }

    let tallest = drafts.iter().map(|d| d.height).fold(0.0, f64::max);
    let band = tallest + style.tail_height;
    let box_bottom = band - style.tail_height;

    // Centered, then pushed right to respect the gap, then pulled back left
    // if the row ran off the panel.
    let mut xs: Vec<f64> = Vec::with_capacity(drafts.len());
    for (k, d) in drafts.iter().enumerate() {
        let centered = (d.visible.center_x() - d.width / 2.0).clamp(0.0, panel_width - d.width);
        let x = match k {
            0 => centered,
            _ => centered.max(xs[k - 1] + drafts[k - 1].width + style.min_gap),
        };
        xs.push(x);
    }
    for k in (0..drafts.len()).rev() {
        let limit = match k + 1 < drafts.len() {
            true => xs[k + 1] - style.min_gap - drafts[k].width,
            false => panel_width - drafts[k].width,
        };
        xs[k] = xs[k].min(limit);
    }
    if xs[0] < 0.0 {
        let needed = drafts.iter().map(|d| d.width).sum::<f64>()
            + style.min_gap * (drafts.len() - 1) as f64;
        return Err(BalloonError::DoesNotFit { needed, panel_width });
    }

    let balloons = drafts
        .into_iter()
        .zip(xs)
        .map(|(d, x)| {
            let req = &requests[d.request];
            let rect = Rect::new(x, box_bottom - d.height, d.width, d.height);
            let tip = (d.visible.center_x(), band + d.visible.y);
            let half = style.tail_base / 2.0;
            let lo = rect.x + style.corner_radius + half;
            let hi = rect.right() - style.corner_radius - half;
            let base_x = if lo <= hi { tip.0.clamp(lo, hi) } else { rect.center_x() };
            Balloon {
                anchor_index: req.anchor,
                text: req.text.clone(),
                lines: d.lines,
                font_size: req.font_size,
                rect,
                tail: [(base_x - half, rect.bottom()), (base_x + half, rect.bottom()), tip],
                style: *style,
            }
        })
        .collect();
    Ok(BalloonLayout { band_height: band, balloons })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_apex, ApexParams, ImageDims};
    use alloc::vec;

    fn pair_scene(w1: f64, w2: f64) -> PanelScene {
        let layout = make_apex(
            &[ImageDims { width: w1, height: 100.0 }, ImageDims { width: w2, height: 100.0 }],
            &ApexParams::new(100.0),
        )
        .unwrap();
        PanelScene::from(&layout)
    }

    #[test]
    fn single_short_balloon_metrics() {
        let scene = pair_scene(100.0, 100.0);
        let out = place_balloons(&scene, &[BalloonRequest::new(0, "HI", 12.0)], &BalloonStyle::default()).unwrap();
        let b = &out.balloons[0];
        assert_eq!(b.lines, vec![String::from("HI")]);
        assert!((b.rect.w - 26.4).abs() < 1e-12);
        assert!((b.rect.h - 24.0).abs() < 1e-12);
        assert!((out.band_height - 40.0).abs() < 1e-12);
        assert!((b.rect.center_x() - 50.0).abs() < 1e-12);
        assert_eq!(b.tip(), (50.0, 40.0));
    }

    #[test]
    fn no_requests_no_band() {
        let out = place_balloons(&pair_scene(100.0, 100.0), &[], &BalloonStyle::default()).unwrap();
        assert_eq!(out, BalloonLayout::default());
    }

    #[test]
    fn overlapping_boxes_keep_min_gap() {
        // Narrow characters side by side: both wide balloons want the middle.
        let scene = pair_scene(40.0, 40.0);
        let text = "ABCDEFGH";
        let reqs = [BalloonRequest::new(1, text, 10.0), BalloonRequest::new(0, text, 10.0)];
        let scene = PanelScene { frame: crate::geometry::FrameSize { w: 400.0, h: 100.0 }, ..scene };
        let out = place_balloons(&scene, &reqs, &BalloonStyle::default()).unwrap();
        let (a, b) = (&out.balloons[0], &out.balloons[1]);
        assert_eq!((a.anchor_index, b.anchor_index), (0, 1));
        assert!((b.rect.x - a.rect.right() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn wrapping_respects_anchor_width() {
        let lines = wrap_text("the quick brown fox jumps", 60.0, 6.0);
        assert_eq!(lines, vec!["the quick", "brown fox", "jumps"]);
        for l in &lines {
            assert!(line_width(l, 6.0) <= 60.0);
        }
        assert_eq!(wrap_text("unbreakableword", 10.0, 6.0), vec!["unbreakableword"]);
        assert!(wrap_text("   ", 10.0, 6.0).is_empty());
    }

    #[test]
    fn errors() {
        let scene = pair_scene(100.0, 100.0);
        let style = BalloonStyle::default();
        assert_eq!(
            place_balloons(&scene, &[BalloonRequest::new(2, "x", 12.0)], &style),
            Err(BalloonError::AnchorOutOfRange { anchor: 2, images: 2 })
        );
        assert_eq!(
            place_balloons(&scene, &[BalloonRequest::new(0, "  ", 12.0)], &style),
            Err(BalloonError::EmptyText { anchor: 0 })
        );
        let long = "Supercalifragilisticexpialidocious";
        assert!(matches!(
            place_balloons(&scene, &[BalloonRequest::new(0, long, 12.0)], &style),
            Err(BalloonError::TooWide { .. })
        ));
        let many: Vec<_> = (0..2).map(|i| BalloonRequest::new(i, "aaaaaaaaaaaaaaaaaaaa", 12.0)).collect();
        assert!(matches!(
            place_balloons(&scene, &many, &style),
            Err(BalloonError::DoesNotFit { .. })
        ));
    }

    #[test]
    fn tails_land_inside_visible_anchor() {
        let scene = pair_scene(100.0, 100.0);
        let reqs = [BalloonRequest::new(0, "Hello there", 10.0), BalloonRequest::new(1, "Hi", 10.0)];
        let out = place_balloons(&scene, &reqs, &BalloonStyle::default()).unwrap();
        for b in &out.balloons {
            let vis = scene.images[b.anchor_index].visible().translate(0.0, out.band_height);
            let (x, y) = b.tip();
            assert!(vis.contains_point(x, y));
            assert!(b.rect.y >= 0.0 && b.rect.bottom() <= out.band_height);
        }
    }
}
