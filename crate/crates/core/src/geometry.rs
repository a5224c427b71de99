//! One-parameter view family for character panels.
//!
//! A layout starts from an apex arrangement: every image scaled to a common
//! frame height, bottoms on the frame bottom, placed side by side. External
//! views are produced by shrinking the image on one end of the row (anchored
//! to the frame bottom and the outer frame edge), sliding the remaining chain
//! over to close the created gap, and enlarging the image on the opposite end
//! about its top outer corner so that it overflows the frame to the side and
//! bottom. Internal views are the limits where the shrunk image vanishes.
//!
//! Coordinates are panel coordinates: origin at the top-left of the frame,
//! `y` grows downward.

use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

/// Absolute tolerance (relative to the frame width) for seams between
/// neighbouring placements.
pub const SEAM_TOLERANCE: f64 = 1e-9;

/// Default crop factor: the enlarged image overflows the frame by exactly the
/// gap created by the shrunk one.
pub const DEFAULT_CROP_FACTOR: f64 = 2.0;

/// Relative slack allowed when checking a scale against its `H / h` cap.
const SCALE_CAP_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum GeometryError {
    EmptyImages,
    InvalidDims { index: usize },
    InvalidHeight(f64),
    ScaleCountMismatch { expected: usize, found: usize },
    GapCountMismatch { expected: usize, found: usize },
    InvalidScale { index: usize, scale: f64 },
    ScaleExceedsFrame { index: usize, scale: f64, max: f64 },
    NegativeGap { index: usize, gap: f64 },
    ViewParamOutOfRange(f64),
    ShrinkOutOfRange(f64),
    CropFactorTooSmall(f64),
    NotAPair { found: usize },
    TooFewImages { found: usize },
    GappedExtrapolation,
    MalformedTree(&'static str),
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyImages => f.write_str("at least one image is required"),
            Self::InvalidDims { index } => {
                write!(f, "image {index} must have a positive finite width and height")
            }
            Self::InvalidHeight(h) => write!(f, "frame height must be positive and finite, got {h}"),
            Self::ScaleCountMismatch { expected, found } => {
                write!(f, "expected {expected} scale caps, found {found}")
            }
            Self::GapCountMismatch { expected, found } => {
                write!(f, "expected {expected} gaps, found {found}")
            }
            Self::InvalidScale { index, scale } => {
                write!(f, "scale {scale} for image {index} must be positive and finite")
            }
            Self::ScaleExceedsFrame { index, scale, max } => write!(
                f,
                "scale {scale} for image {index} exceeds the frame height (maximum {max})"
            ),
            Self::NegativeGap { index, gap } => write!(f, "gap {index} is negative ({gap})"),
            Self::ViewParamOutOfRange(u) => write!(f, "view parameter {u} is outside [-1, 1]"),
            Self::ShrinkOutOfRange(t) => write!(f, "shrink factor {t} is outside [0, 1]"),
            Self::CropFactorTooSmall(a) => write!(f, "crop factor {a} must be at least 1"),
            Self::NotAPair { found } => write!(f, "expected exactly two placements, found {found}"),
            Self::TooFewImages { found } => {
                write!(f, "multi-image layouts need at least three images, found {found}")
            }
            Self::GappedExtrapolation => {
                f.write_str("apex gaps are only supported at the apex view (u = 0)")
            }
            Self::MalformedTree(why) => write!(f, "malformed layout tree: {why}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImageDims {
    pub width: f64,
    pub height: f64,
}

impl ImageDims {
    pub fn new(width: f64, height: f64) -> Result<Self, GeometryError> {
        let dims = Self { width, height };
        if dims.is_valid() {
            Ok(dims)
        } else {
            Err(GeometryError::InvalidDims { index: 0 })
        }
    }

    pub fn is_valid(&self) -> bool {
        self.width.is_finite() && self.height.is_finite() && self.width > 0.0 && self.height > 0.0
    }

    pub fn aspect(&self) -> f64 {
        self.width / self.height
    }
}

/// Parameters of the apex arrangement.
///
/// `scales[i] = None` means the default `height / h_i`; an explicit scale must
/// not exceed that cap. `gaps` holds the spacing between consecutive images
/// and may be left empty for a gap-free row.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ApexParams {
    pub height: f64,
    #[serde(default)]
    pub scales: Vec<Option<f64>>,
    #[serde(default)]
    pub gaps: Vec<f64>,
}

impl ApexParams {
    pub fn new(height: f64) -> Self {
        Self { height, scales: Vec::new(), gaps: Vec::new() }
    }

    pub fn with_scales(mut self, scales: Vec<Option<f64>>) -> Self {
        self.scales = scales;
        self
    }

    pub fn with_gaps(mut self, gaps: Vec<f64>) -> Self {
        self.gaps = gaps;
        self
    }

    /// Resolved per-image scales and gaps, validated against `dims`.
    pub fn resolve(&self, dims: &[ImageDims]) -> Result<(Vec<f64>, Vec<f64>), GeometryError> {
        if dims.is_empty() {
            return Err(GeometryError::EmptyImages);
        }
        if !(self.height.is_finite() && self.height > 0.0) {
            return Err(GeometryError::InvalidHeight(self.height));
        }
        if let Some(index) = dims.iter().position(|d| !d.is_valid()) {
            return Err(GeometryError::InvalidDims { index });
        }
        if !self.scales.is_empty() && self.scales.len() != dims.len() {
            return Err(GeometryError::ScaleCountMismatch {
                expected: dims.len(),
                found: self.scales.len(),
            });
        }
        let gap_count = dims.len() - 1;
        if !self.gaps.is_empty() && self.gaps.len() != gap_count {
            return Err(GeometryError::GapCountMismatch {
                expected: gap_count,
                found: self.gaps.len(),
            });
        }

        let mut scales = Vec::with_capacity(dims.len());
        for (index, d) in dims.iter().enumerate() {
            let max = self.height / d.height;
            let scale = match self.scales.get(index).copied().flatten() {
                None => max,
                Some(s) if !(s.is_finite() && s > 0.0) => {
                    return Err(GeometryError::InvalidScale { index, scale: s })
                }
                Some(s) if s > max * (1.0 + SCALE_CAP_SLACK) => {
                    return Err(GeometryError::ScaleExceedsFrame { index, scale: s, max })
                }
                Some(s) => s.min(max),
            };
            scales.push(scale);
        }

        let mut gaps = Vec::with_capacity(gap_count);
        for index in 0..gap_count {
            let gap = self.gaps.get(index).copied().unwrap_or(0.0);
            if !(gap.is_finite() && gap >= 0.0) {
                return Err(GeometryError::NegativeGap { index, gap });
            }
            gaps.push(gap);
        }
        Ok((scales, gaps))
    }

    fn has_gaps(&self) -> bool {
        self.gaps.iter().any(|&g| g != 0.0)
    }
}

/// The single view slider: `-1` internal left, `0` apex, `+1` internal right.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ViewParam(f64);

impl ViewParam {
    pub const APEX: Self = Self(0.0);

    pub fn new(u: f64) -> Result<Self, GeometryError> {
        if u.is_finite() && (-1.0..=1.0).contains(&u) {
            Ok(Self(u))
        } else {
            Err(GeometryError::ViewParamOutOfRange(u))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Shrink factor of the de-emphasized image: 1 at the apex, 0 at the
    /// internal limits.
    pub fn shrink(self) -> f64 {
        1.0 - libm::fabs(self.0)
    }
}

impl TryFrom<f64> for ViewParam {
    type Error = GeometryError;

    fn try_from(u: f64) -> Result<Self, Self::Error> {
        Self::new(u)
    }
}

impl From<ViewParam> for f64 {
    fn from(u: ViewParam) -> f64 {
        u.0
    }
}

/// Axis-aligned rectangle, top-left corner plus size.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    pub const fn new(x: f64, y: f64, w: f64, h: f64) -> Self {
        Self { x, y, w, h }
    }

    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.h
    }

    pub fn center_x(&self) -> f64 {
        self.x + self.w / 2.0
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn is_empty(&self) -> bool {
        !(self.w > 0.0 && self.h > 0.0)
    }

    /// Intersection; an empty overlap collapses to a zero-size rectangle at
    /// the clamped corner so it still carries a meaningful position.
    pub fn intersect(&self, other: &Rect) -> Rect {
        let x0 = self.x.max(other.x);
        let y0 = self.y.max(other.y);
        let x1 = self.right().min(other.right()).max(x0);
        let y1 = self.bottom().min(other.bottom()).max(y0);
        Rect::new(x0, y0, x1 - x0, y1 - y0)
    }

    pub fn translate(&self, dx: f64, dy: f64) -> Rect {
        Rect::new(self.x + dx, self.y + dy, self.w, self.h)
    }

    pub fn contains_point(&self, x: f64, y: f64) -> bool {
        x >= self.x && x <= self.right() && y >= self.y && y <= self.bottom()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlacedImage {
    #[serde(rename = "index")]
    pub image_index: usize,
    pub x: f64,
    pub y: f64,
    #[serde(rename = "w")]
    pub drawn_width: f64,
    #[serde(rename = "h")]
    pub drawn_height: f64,
    #[serde(rename = "flip")]
    pub flip_horizontal: bool,
    pub z: usize,
}

impl PlacedImage {
    pub fn rect(&self) -> Rect {
        Rect::new(self.x, self.y, self.drawn_width, self.drawn_height)
    }

    pub fn right(&self) -> f64 {
        self.x + self.drawn_width
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.drawn_height
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameSize {
    pub w: f64,
    pub h: f64,
}

/// Resolved panel geometry: the frame plus the placed images.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewLayout {
    pub frame: FrameSize,
    pub placements: Vec<PlacedImage>,
}

impl ViewLayout {
    pub fn frame_width(&self) -> f64 {
        self.frame.w
    }

    pub fn frame_height(&self) -> f64 {
        self.frame.h
    }

    pub fn frame_rect(&self) -> Rect {
        Rect::new(0.0, 0.0, self.frame.w, self.frame.h)
    }

    /// The part of placement `i` that falls inside the frame.
    pub fn visible_rect(&self, i: usize) -> Rect {
        self.placements[i].rect().intersect(&self.frame_rect())
    }

    /// Mirror about the vertical line `x = W / 2`, keeping image indices.
    pub fn mirrored(&self) -> ViewLayout {
        let w = self.frame.w;
        let placements = self
            .placements
            .iter()
            .map(|p| PlacedImage {
                x: w - p.x - p.drawn_width,
                flip_horizontal: !p.flip_horizontal,
                ..*p
            })
            .collect();
        ViewLayout { frame: self.frame, placements }
    }
}

/// Which end of the row gets emphasized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Emphasis {
    /// Leftmost image shrinks, rightmost image grows (u > 0).
    Right,
    /// Rightmost image shrinks, leftmost image grows (u < 0).
    Left,
}

/// Apex arrangement: images side by side, bottoms on the frame bottom.
pub fn make_apex(dims: &[ImageDims], params: &ApexParams) -> Result<ViewLayout, GeometryError> {
    let (scales, gaps) = params.resolve(dims)?;
    let height = params.height;
    let mut x = 0.0;
    let mut placements = Vec::with_capacity(dims.len());
    for (i, (d, s)) in dims.iter().zip(&scales).enumerate() {
        let w = s * d.width;
        let h = s * d.height;
        placements.push(PlacedImage {
            image_index: i,
            x,
            y: height - h,
            drawn_width: w,
            drawn_height: h,
            flip_horizontal: false,
            z: i,
        });
        x += w;
        if let Some(gap) = gaps.get(i) {
            x += gap;
        }
    }
    Ok(ViewLayout { frame: FrameSize { w: x, h: height }, placements })
}

fn check_shrink(t: f64) -> Result<(), GeometryError> {
    if t.is_finite() && (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(GeometryError::ShrinkOutOfRange(t))
    }
}

fn check_crop_factor(a: f64) -> Result<(), GeometryError> {
    if a.is_finite() && a >= 1.0 {
        Ok(())
    } else {
        Err(GeometryError::CropFactorTooSmall(a))
    }
}

fn check_abutting(apex: &ViewLayout) -> Result<(), GeometryError> {
    let tol = SEAM_TOLERANCE * apex.frame.w;
    let abut = apex
        .placements
        .windows(2)
        .all(|pair| libm::fabs(pair[1].x - pair[0].right()) <= tol);
    if abut {
        Ok(())
    } else {
        Err(GeometryError::GappedExtrapolation)
    }
}

/// Shared extrapolation for two or more images.
///
/// `t` is the shrink factor of the image at the de-emphasized end; the image
/// at the emphasized end is scaled by `1 + a (1 - t) w_shrunk / w_grown`
/// about its top outer corner.
fn extrapolate_chain(
    apex: &ViewLayout,
    t: f64,
    a: f64,
    emphasis: Emphasis,
) -> Result<ViewLayout, GeometryError> {
    check_shrink(t)?;
    check_crop_factor(a)?;
    check_abutting(apex)?;
    let n = apex.placements.len();
    debug_assert!(n >= 2);
    let frame_h = apex.frame.h;
    let mut out = apex.placements.clone();

    let (shrunk_i, grown_i) = match emphasis {
        Emphasis::Right => (0, n - 1),
        Emphasis::Left => (n - 1, 0),
    };
    let shrunk = apex.placements[shrunk_i];
    let grown = apex.placements[grown_i];
    let gap = (1.0 - t) * shrunk.drawn_width;
    let grow = 1.0 + a * gap / grown.drawn_width;

    // Shrunk image keeps its bottom on the frame bottom and its outer edge on
    // the frame edge.
    let sw = t * shrunk.drawn_width;
    let sh = t * shrunk.drawn_height;
    out[shrunk_i].drawn_width = sw;
    out[shrunk_i].drawn_height = sh;
    out[shrunk_i].y = frame_h - sh;
    if emphasis == Emphasis::Left {
        out[shrunk_i].x = shrunk.right() - sw;
    }

    let shift = match emphasis {
        Emphasis::Right => -gap,
        Emphasis::Left => gap,
    };
    for p in out.iter_mut().take(n - 1).skip(1) {
        p.x += shift;
    }

    // Grown image keeps its top; the outer corner stays glued to the chain.
    let gw = grow * grown.drawn_width;
    let gh = grow * grown.drawn_height;
    out[grown_i].drawn_width = gw;
    out[grown_i].drawn_height = gh;
    out[grown_i].y = grown.y;
    out[grown_i].x = match emphasis {
        Emphasis::Right => {
            if n == 2 {
                out[0].right()
            } else {
                out[n - 2].right()
            }
        }
        Emphasis::Left => out[1].x - gw,
    };

    Ok(ViewLayout { frame: apex.frame, placements: out })
}

fn require_pair(apex: &ViewLayout) -> Result<(), GeometryError> {
    match apex.placements.len() {
        2 => Ok(()),
        found => Err(GeometryError::NotAPair { found }),
    }
}

/// Apex → external right → internal right, driven by the shrink factor of
/// image 1.
pub fn extrapolate_right(apex: &ViewLayout, t1: f64, a: f64) -> Result<ViewLayout, GeometryError> {
    require_pair(apex)?;
    extrapolate_chain(apex, t1, a, Emphasis::Right)
}

/// Mirror of [`extrapolate_right`]: image 2 shrinks toward the bottom-right
/// corner, image 1 grows about its upper-right corner.
pub fn extrapolate_left(apex: &ViewLayout, t2: f64, a: f64) -> Result<ViewLayout, GeometryError> {
    require_pair(apex)?;
    extrapolate_chain(apex, t2, a, Emphasis::Left)
}

/// Full slider mapping: `u = 0` apex, `u > 0` external/internal right with
/// `t1 = 1 - u`, `u < 0` external/internal left with `t2 = 1 + u`.
pub fn layout_from_slider(
    dims: &[ImageDims],
    params: &ApexParams,
    u: ViewParam,
    a: f64,
) -> Result<ViewLayout, GeometryError> {
    if dims.len() >= 3 {
        return layout_multi(dims, params, u, a);
    }
    check_crop_factor(a)?;
    let apex = make_apex(dims, params)?;
    if dims.len() == 1 || u.value() == 0.0 {
        return Ok(apex);
    }
    if params.has_gaps() {
        return Err(GeometryError::GappedExtrapolation);
    }
    if u.value() > 0.0 {
        extrapolate_right(&apex, u.shrink(), a)
    } else {
        extrapolate_left(&apex, u.shrink(), a)
    }
}

/// Three or more images: only the two extreme images are scaled; the middle
/// ones keep their apex size and slide to close the gap.
pub fn layout_multi(
    dims: &[ImageDims],
    params: &ApexParams,
    u: ViewParam,
    a: f64,
) -> Result<ViewLayout, GeometryError> {
    if dims.len() < 3 {
        return Err(GeometryError::TooFewImages { found: dims.len() });
    }
    check_crop_factor(a)?;
    let apex = make_apex(dims, params)?;
    if u.value() == 0.0 {
        return Ok(apex);
    }
    if params.has_gaps() {
        return Err(GeometryError::GappedExtrapolation);
    }
    let emphasis = if u.value() > 0.0 { Emphasis::Right } else { Emphasis::Left };
    extrapolate_chain(&apex, u.shrink(), a, emphasis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn dims(list: &[(f64, f64)]) -> Vec<ImageDims> {
        list.iter().map(|&(w, h)| ImageDims { width: w, height: h }).collect()
    }

    fn rect_of(p: &PlacedImage) -> (f64, f64, f64, f64) {
        (p.x, p.y, p.drawn_width, p.drawn_height)
    }

    fn assert_rect(p: &PlacedImage, expected: (f64, f64, f64, f64)) {
        let got = rect_of(p);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9;
        assert!(
            close(got.0, expected.0)
                && close(got.1, expected.1)
                && close(got.2, expected.2)
                && close(got.3, expected.3),
            "got {got:?}, expected {expected:?}"
        );
    }

    #[test]
    fn apex_default_scales() {
        let layout = make_apex(&dims(&[(100.0, 200.0), (150.0, 200.0)]), &ApexParams::new(200.0)).unwrap();
        assert_eq!(layout.frame_width(), 250.0);
        assert_rect(&layout.placements[0], (0.0, 0.0, 100.0, 200.0));
        assert_rect(&layout.placements[1], (100.0, 0.0, 150.0, 200.0));
    }

    #[test]
    fn apex_rescales_to_common_height() {
        let layout = make_apex(&dims(&[(80.0, 160.0), (120.0, 240.0)]), &ApexParams::new(240.0)).unwrap();
        assert_eq!(layout.frame_width(), 240.0);
        assert_rect(&layout.placements[0], (0.0, 0.0, 120.0, 240.0));
        assert_rect(&layout.placements[1], (120.0, 0.0, 120.0, 240.0));
    }

    #[test]
    fn flexible_apex_with_gap_and_cap() {
        let params = ApexParams::new(200.0)
            .with_scales(vec![Some(0.9), None])
            .with_gaps(vec![20.0]);
        let layout = make_apex(&dims(&[(100.0, 200.0), (100.0, 200.0)]), &params).unwrap();
        assert_eq!(layout.frame_width(), 210.0);
        assert_rect(&layout.placements[0], (0.0, 20.0, 90.0, 180.0));
        assert_rect(&layout.placements[1], (110.0, 0.0, 100.0, 200.0));
        for p in &layout.placements {
            assert!((p.bottom() - 200.0).abs() < 1e-12);
        }
    }

    #[test]
    fn apex_rejects_bad_input() {
        assert_eq!(make_apex(&[], &ApexParams::new(10.0)), Err(GeometryError::EmptyImages));
        let params = ApexParams::new(200.0).with_scales(vec![Some(1.5), None]);
        assert!(matches!(
            make_apex(&dims(&[(100.0, 200.0), (100.0, 200.0)]), &params),
            Err(GeometryError::ScaleExceedsFrame { index: 0, .. })
        ));
        let params = ApexParams::new(200.0).with_gaps(vec![-1.0]);
        assert!(matches!(
            make_apex(&dims(&[(100.0, 200.0), (100.0, 200.0)]), &params),
            Err(GeometryError::NegativeGap { index: 0, .. })
        ));
    }

    fn square_pair() -> ViewLayout {
        make_apex(&dims(&[(100.0, 100.0), (100.0, 100.0)]), &ApexParams::new(100.0)).unwrap()
    }

    #[test]
    fn extrapolate_right_half() {
        let out = extrapolate_right(&square_pair(), 0.5, 2.0).unwrap();
        assert_eq!(out.frame, FrameSize { w: 200.0, h: 100.0 });
        assert_rect(&out.placements[0], (0.0, 50.0, 50.0, 50.0));
        assert_rect(&out.placements[1], (50.0, 0.0, 200.0, 200.0));
        assert!((out.placements[1].right() - 200.0 - 50.0).abs() < 1e-12);
        assert!((out.placements[1].bottom() - 100.0 - 100.0).abs() < 1e-12);
    }

    #[test]
    fn extrapolate_identity_and_limit() {
        let apex = square_pair();
        for a in [1.0, 2.0, 3.7] {
            assert_eq!(extrapolate_right(&apex, 1.0, a).unwrap(), apex);
            assert_eq!(extrapolate_left(&apex, 1.0, a).unwrap(), apex);
        }
        let right = extrapolate_right(&apex, 0.0, 2.0).unwrap();
        assert_rect(&right.placements[0], (0.0, 100.0, 0.0, 0.0));
        assert_rect(&right.placements[1], (0.0, 0.0, 300.0, 300.0));
        let left = extrapolate_left(&apex, 0.0, 2.0).unwrap();
        assert_rect(&left.placements[0], (-100.0, 0.0, 300.0, 300.0));
        assert_rect(&left.placements[1], (200.0, 100.0, 0.0, 0.0));
    }

    #[test]
    fn extrapolate_left_half() {
        let out = extrapolate_left(&square_pair(), 0.5, 2.0).unwrap();
        assert_rect(&out.placements[1], (150.0, 50.0, 50.0, 50.0));
        assert_rect(&out.placements[0], (-50.0, 0.0, 200.0, 200.0));
    }

    #[test]
    fn extrapolate_rejects_bad_params() {
        let apex = square_pair();
        assert_eq!(extrapolate_right(&apex, 1.5, 2.0), Err(GeometryError::ShrinkOutOfRange(1.5)));
        assert_eq!(extrapolate_right(&apex, -0.1, 2.0), Err(GeometryError::ShrinkOutOfRange(-0.1)));
        assert_eq!(extrapolate_left(&apex, 0.5, 0.5), Err(GeometryError::CropFactorTooSmall(0.5)));
        let gapped = make_apex(
            &dims(&[(100.0, 100.0), (100.0, 100.0)]),
            &ApexParams::new(100.0).with_gaps(vec![10.0]),
        )
        .unwrap();
        assert_eq!(extrapolate_right(&gapped, 0.5, 2.0), Err(GeometryError::GappedExtrapolation));
        let triple = make_apex(&dims(&[(1.0, 1.0); 3]), &ApexParams::new(1.0)).unwrap();
        assert_eq!(extrapolate_right(&triple, 0.5, 2.0), Err(GeometryError::NotAPair { found: 3 }));
    }

    #[test]
    fn slider_maps_to_branches() {
        let d = dims(&[(100.0, 100.0), (100.0, 100.0)]);
        let p = ApexParams::new(100.0);
        let at = |u: f64| layout_from_slider(&d, &p, ViewParam::new(u).unwrap(), 2.0).unwrap();
        assert_eq!(at(0.0), make_apex(&d, &p).unwrap());
        assert_eq!(at(0.5), extrapolate_right(&square_pair(), 0.5, 2.0).unwrap());
        assert_eq!(at(-1.0), extrapolate_left(&square_pair(), 0.0, 2.0).unwrap());
        assert!(ViewParam::new(1.01).is_err());
        assert!(ViewParam::new(f64::NAN).is_err());
    }

    #[test]
    fn slider_single_image_is_the_image() {
        let d = dims(&[(100.0, 200.0)]);
        let out = layout_from_slider(&d, &ApexParams::new(200.0), ViewParam::new(0.7).unwrap(), 2.0).unwrap();
        assert_eq!(out.frame, FrameSize { w: 100.0, h: 200.0 });
        assert_rect(&out.placements[0], (0.0, 0.0, 100.0, 200.0));
    }

    #[test]
    fn multi_examples() {
        let d = dims(&[(100.0, 100.0); 3]);
        let p = ApexParams::new(100.0);
        let apex = layout_multi(&d, &p, ViewParam::APEX, 2.0).unwrap();
        assert_eq!(apex.frame_width(), 300.0);
        for (i, pl) in apex.placements.iter().enumerate() {
            assert_rect(pl, (100.0 * i as f64, 0.0, 100.0, 100.0));
        }
        let right = layout_multi(&d, &p, ViewParam::new(0.5).unwrap(), 2.0).unwrap();
        assert_rect(&right.placements[0], (0.0, 50.0, 50.0, 50.0));
        assert_rect(&right.placements[1], (50.0, 0.0, 100.0, 100.0));
        assert_rect(&right.placements[2], (150.0, 0.0, 200.0, 200.0));
        let left = layout_multi(&d, &p, ViewParam::new(-0.5).unwrap(), 2.0).unwrap();
        let mirrored = right.mirrored();
        for i in 0..3 {
            let (l, m) = (&left.placements[i], &mirrored.placements[2 - i]);
            assert!((l.x - m.x).abs() < 1e-9 && (l.y - m.y).abs() < 1e-9);
            assert!((l.drawn_width - m.drawn_width).abs() < 1e-9);
        }
    }

    #[test]
    fn multi_rejects_pairs_and_gaps() {
        let p = ApexParams::new(100.0);
        assert_eq!(
            layout_multi(&dims(&[(1.0, 1.0); 2]), &p, ViewParam::APEX, 2.0),
            Err(GeometryError::TooFewImages { found: 2 })
        );
        let gapped = ApexParams::new(100.0).with_gaps(vec![5.0, 0.0]);
        let d = dims(&[(100.0, 100.0); 3]);
        assert!(layout_multi(&d, &gapped, ViewParam::APEX, 2.0).is_ok());
        assert_eq!(
            layout_multi(&d, &gapped, ViewParam::new(0.2).unwrap(), 2.0),
            Err(GeometryError::GappedExtrapolation)
        );
    }

    #[test]
    fn capped_image_keeps_bottom_on_frame() {
        let params = ApexParams::new(200.0).with_scales(vec![None, Some(0.5)]);
        let d = dims(&[(100.0, 200.0), (100.0, 200.0)]);
        for u in [-0.9, -0.3, 0.3, 0.9] {
            let out = layout_from_slider(&d, &params, ViewParam::new(u).unwrap(), 2.0).unwrap();
            for p in &out.placements {
                assert!(p.y >= -1e-9);
                assert!((p.bottom().min(200.0) - 200.0).abs() < 1e-9);
            }
        }
    }
}
