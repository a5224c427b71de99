//! Row-based packing of panels onto a physical page.
//!
//! Panels are grouped into rows (pairs by default). Every row is scaled to
//! span the full content width, so panels in a row share a height and keep
//! their aspect ratios. If the stacked rows are taller than the content box,
//! all rows shrink by one common factor and are re-centered horizontally.
//!
//! Lengths are in inches; documents use 72 units per inch.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::document::{DrawItem, PanelDocument};
use crate::geometry::Rect;
use crate::raster::Rgba;

pub const UNITS_PER_INCH: f64 = 72.0;
pub const DEFAULT_MARGIN_IN: f64 = 0.5;
pub const DEFAULT_GUTTER_IN: f64 = 0.125;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PageFormat {
    Letter,
    A4,
}

impl PageFormat {
    /// Width and height in inches.
    pub fn size_in(self) -> (f64, f64) {
        match self {
            PageFormat::Letter => (8.5, 11.0),
            PageFormat::A4 => (210.0 / 25.4, 297.0 / 25.4),
        }
    }
}

/// Top, right, bottom, left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margins(pub [f64; 4]);

impl Default for Margins {
    fn default() -> Self {
        Margins([DEFAULT_MARGIN_IN; 4])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageSpec {
    pub format: PageFormat,
    pub margins: Margins,
    pub gutter: f64,
    /// Aspect ratio of an empty title block reserved as its own first row.
    pub title_aspect: Option<f64>,
    pub panels: Vec<f64>,
    pub row_plan: Option<Vec<Vec<usize>>>,
}

impl PageSpec {
    pub fn new(format: PageFormat, panels: Vec<f64>) -> Self {
        Self {
            format,
            margins: Margins::default(),
            gutter: DEFAULT_GUTTER_IN,
            title_aspect: None,
            panels,
            row_plan: None,
        }
    }

    /// Content box in inches.
    pub fn content_box(&self) -> Rect {
        let (w, h) = self.format.size_in();
        let [t, r, b, l] = self.margins.0;
        Rect::new(l, t, w - l - r, h - t - b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Title,
    Panel(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacedPanel {
    pub slot: Slot,
    pub rect: Rect,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageRow {
    pub panels: Vec<PlacedPanel>,
}

impl PageRow {
    pub fn height(&self) -> f64 {
        self.panels.first().map_or(0.0, |p| p.rect.h)
    }

    pub fn span(&self) -> (f64, f64) {
        let left = self.panels.first().map_or(0.0, |p| p.rect.x);
        let right = self.panels.last().map_or(0.0, |p| p.rect.right());
        (left, right)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageLayout {
    pub format: PageFormat,
    pub content: Rect,
    pub gutter: f64,
    pub rows: Vec<PageRow>,
    pub global_scale: f64,
}

impl PageLayout {
    pub fn page_size_in(&self) -> (f64, f64) {
        self.format.size_in()
    }

    pub fn placed(&self) -> impl Iterator<Item = &PlacedPanel> {
        self.rows.iter().flat_map(|r| r.panels.iter())
    }

    pub fn panel_rect(&self, index: usize) -> Option<Rect> {
        self.placed().find(|p| p.slot == Slot::Panel(index)).map(|p| p.rect)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PageError {
    NoPanels,
    InvalidAspect { index: usize, aspect: f64 },
    InvalidTitleAspect(f64),
    InvalidGutter(f64),
    EmptyContentBox,
    InvalidRowPlan(&'static str),
    RowDoesNotFit { row: usize },
    NoVerticalRoom,
    DocumentCountMismatch { panels: usize, documents: usize },
}

impl fmt::Display for PageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NoPanels => f.write_str("a page needs at least one panel"),
            Self::InvalidAspect { index, aspect } => {
                write!(f, "panel {index} has invalid aspect ratio {aspect}")
            }
            Self::InvalidTitleAspect(a) => write!(f, "title block has invalid aspect ratio {a}"),
            Self::InvalidGutter(g) => write!(f, "gutter {g} must be non-negative"),
            Self::EmptyContentBox => f.write_str("margins leave no content area"),
            Self::InvalidRowPlan(why) => write!(f, "row plan is invalid: {why}"),
            Self::RowDoesNotFit { row } => write!(f, "row {row} has no width left after gutters"),
            Self::NoVerticalRoom => f.write_str("gutters leave no vertical room for the rows"),
            Self::DocumentCountMismatch { panels, documents } => {
                write!(f, "{panels} packed panels but {documents} documents")
            }
        }
    }
}

fn default_rows(n: usize) -> Vec<Vec<usize>> {
    (0..n).collect::<Vec<_>>().chunks(2).map(|c| c.to_vec()).collect()
}

fn check_plan(plan: &[Vec<usize>], n: usize) -> Result<(), PageError> {
    if plan.iter().any(|r| r.is_empty()) {
        return Err(PageError::InvalidRowPlan("rows must not be empty"));
    }
    let flat: Vec<usize> = plan.iter().flatten().copied().collect();
    if flat.len() != n || flat.iter().enumerate().any(|(i, &p)| i != p) {
        return Err(PageError::InvalidRowPlan("rows must list every panel exactly once, in order"));
    }
    Ok(())
}

pub fn pack_page(spec: &PageSpec) -> Result<PageLayout, PageError> {
    let n = spec.panels.len();
    if n == 0 {
        return Err(PageError::NoPanels);
    }
    for (index, &aspect) in spec.panels.iter().enumerate() {
        if !(aspect.is_finite() && aspect > 0.0) {
            return Err(PageError::InvalidAspect { index, aspect });
        }
    }
    if let Some(a) = spec.title_aspect {
        if !(a.is_finite() && a > 0.0) {
            return Err(PageError::InvalidTitleAspect(a));
        }
    }
    let g = spec.gutter;
    if !(g.is_finite() && g >= 0.0) {
        return Err(PageError::InvalidGutter(g));
    }
    let content = spec.content_box();
    if !(content.w > 0.0 && content.h > 0.0) {
        return Err(PageError::EmptyContentBox);
    }
    let plan = match &spec.row_plan {
        Some(plan) => {
            check_plan(plan, n)?;
            plan.clone()
        }
        None => default_rows(n),
    };

    let mut rows: Vec<Vec<(Slot, f64)>> = Vec::with_capacity(plan.len() + 1);
    if let Some(a) = spec.title_aspect {
        rows.push(alloc::vec![(Slot::Title, a)]);
    }
    for r in &plan {
        rows.push(r.iter().map(|&i| (Slot::Panel(i), spec.panels[i])).collect());
    }

    // Full-width row heights.
    let mut heights = Vec::with_capacity(rows.len());
    for (k, row) in rows.iter().enumerate() {
        let gutters = (row.len() - 1) as f64 * g;
        let aspect_sum: f64 = row.iter().map(|(_, a)| a).sum();
        let h = (content.w - gutters) / aspect_sum;
        if !(h > 0.0) {
            return Err(PageError::RowDoesNotFit { row: k });
        }
        heights.push(h);
    }

    let total: f64 = heights.iter().sum();
    let available = content.h - (rows.len() - 1) as f64 * g;
    if !(available > 0.0) {
        return Err(PageError::NoVerticalRoom);
    }
    let global_scale = if total > available { available / total } else { 1.0 };

    let mut placed_rows = Vec::with_capacity(rows.len());
    let mut y = content.y;
    for (row, h) in rows.iter().zip(&heights) {
        let h = h * global_scale;
        let gutters = (row.len() - 1) as f64 * g;
        let width: f64 = row.iter().map(|(_, a)| a * h).sum::<f64>() + gutters;
        let mut x = content.x + (content.w - width) / 2.0;
        let mut panels = Vec::with_capacity(row.len());
        for &(slot, aspect) in row {
            let w = aspect * h;
            panels.push(PlacedPanel { slot, rect: Rect::new(x, y, w, h) });
            x += w + g;
        }
        placed_rows.push(PageRow { panels });
        y += h + g;
    }

    Ok(PageLayout { format: spec.format, content, gutter: g, rows: placed_rows, global_scale })
}

/// Places each panel document (in panel order) into its packed rectangle.
/// The title block, when present, is drawn as an empty outlined box.
pub fn render_page(
    layout: &PageLayout,
    panels: &[Arc<PanelDocument>],
) -> Result<PanelDocument, PageError> {
    let count = layout.placed().filter(|p| matches!(p.slot, Slot::Panel(_))).count();
    if count == 0 {
        return Err(PageError::NoPanels);
    }
    if panels.len() != count {
        return Err(PageError::DocumentCountMismatch { panels: count, documents: panels.len() });
    }
    let (w_in, h_in) = layout.page_size_in();
    let to_units = |r: &Rect| {
        Rect::new(r.x * UNITS_PER_INCH, r.y * UNITS_PER_INCH, r.w * UNITS_PER_INCH, r.h * UNITS_PER_INCH)
    };
    let mut page = PanelDocument::empty(w_in * UNITS_PER_INCH, h_in * UNITS_PER_INCH);
    page.background = Some(Rgba::WHITE);
    for placed in layout.placed() {
        let rect = to_units(&placed.rect);
        match placed.slot {
            Slot::Title => page.items.push(DrawItem::Outline { rect, width: 1.0 }),
            Slot::Panel(i) => page.items.push(DrawItem::Inset { rect, doc: panels[i].clone() }),
        }
    }
    Ok(page)
}
