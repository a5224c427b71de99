//! Spec in, document out. The CLI and the HTTP service both go through
//! [`Engine`], which is what keeps their outputs byte-identical.

use std::sync::Arc;

use panelforge_core::balloon::{BalloonError, BalloonRequest};
use panelforge_core::document::{render_panel, Credit, DocImage, DrawItem, PanelDocument, RenderError, RenderOptions};
use panelforge_core::geometry::{layout_from_slider, GeometryError, ImageDims, ViewParam};
use panelforge_core::markov::markov_sequence;
use panelforge_core::page::{pack_page, render_page, Margins, PageError, PageSpec};
use panelforge_core::rasterize::rasterize;
use panelforge_core::sentiment::{score_sentiment, select_expression, ExpressionTag, SentimentLexicon};
use panelforge_core::svg::to_svg;
use panelforge_core::tree::{compose_tree, PanelScene, ViewTree};
use serde::Serialize;

use crate::assets::Library;
use crate::codec::encode_png;
use crate::error::{Error, FieldError, Result};
use crate::spec::{ExpressionChoice, PageEntry, PageSpecJson, PanelSpec, TreeSpec};

pub const MAX_RASTER_SCALE: f64 = 16.0;
/// Height given to blank page slots; only their aspect matters.
const BLANK_SLOT_HEIGHT: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Suggestion {
    pub valence: f64,
    pub tag: ExpressionTag,
}

/// A panel spec after validation and asset resolution.
#[derive(Debug, Clone)]
pub struct ResolvedPanel {
    pub scene: PanelScene,
    pub expressions: Vec<ExpressionTag>,
    pub images: Vec<Arc<DocImage>>,
    pub flips: Vec<bool>,
    pub balloons: Vec<BalloonRequest>,
    pub credits: Vec<Credit>,
}

#[derive(Debug, Clone)]
pub struct Engine {
    library: Arc<Library>,
    lexicon: Arc<SentimentLexicon>,
    options: RenderOptions,
}

impl Engine {
    pub fn new(library: Arc<Library>, lexicon: Arc<SentimentLexicon>) -> Self {
        Self { library, lexicon, options: RenderOptions::default() }
    }

    pub fn library(&self) -> &Arc<Library> {
        &self.library
    }

    pub fn lexicon(&self) -> &SentimentLexicon {
        &self.lexicon
    }

    pub fn suggest(&self, text: &str) -> Suggestion {
        suggest(&self.lexicon, text)
    }

    /// The tag each character asks for, before any library fallback.
    pub fn choose_expressions(&self, spec: &PanelSpec) -> Result<Vec<ExpressionTag>> {
        let needs_chain = spec.characters.iter().any(|c| c.expression == ExpressionChoice::Markov);
        let sequence = if needs_chain {
            markov_sequence(&spec.chain(), ExpressionTag::Neutral, spec.characters.len())
                .map_err(|e| Error::invalid("chain", e.to_string()))?
        } else {
            Vec::new()
        };
        Ok(spec
            .characters
            .iter()
            .enumerate()
            .map(|(i, c)| match c.expression {
                ExpressionChoice::Tag(t) => t,
                ExpressionChoice::Default => ExpressionTag::Neutral,
                ExpressionChoice::Markov => sequence[i],
                ExpressionChoice::Auto => {
                    let text: Vec<&str> =
                        spec.balloons.iter().filter(|b| b.anchor == i).map(|b| b.text.as_str()).collect();
                    self.suggest(&text.join(" ")).tag
                }
            })
            .collect())
    }

    /// Validates the spec against the library and lays it out.
    pub fn resolve(&self, spec: &PanelSpec) -> Result<ResolvedPanel> {
        let mut errors = spec.check();
        for (i, c) in spec.characters.iter().enumerate() {
            if !c.id.is_empty() && self.library.get(&c.id).is_none() {
                errors.push(FieldError::new(format!("characters[{i}].id"), format!("unknown character {:?}", c.id)));
            }
        }
        if !errors.is_empty() {
            return Err(Error::Invalid(errors));
        }
        let expressions = self.choose_expressions(spec)?;
        let mut images = Vec::with_capacity(spec.characters.len());
        let mut dims = Vec::with_capacity(spec.characters.len());
        let mut credits: Vec<Credit> = Vec::new();
        for (c, tag) in spec.characters.iter().zip(&expressions) {
            let r = self.library.resolve(&c.id, *tag).map_err(|e| Error::Internal(e.to_string()))?;
            images.push(r.image.doc_image.clone());
            dims.push(r.image.dims);
            if !credits.iter().any(|k| k.asset_id == c.id) {
                credits.push(Credit {
                    asset_id: c.id.clone(),
                    name: r.character.display_name.clone(),
                    creator: r.character.creator.clone(),
                    url: r.character.wikipedia_url.clone(),
                });
            }
        }
        let scene = match &spec.tree {
            Some(tree) => {
                let view_tree = build_tree(tree, &dims)?;
                compose_tree(&view_tree).map_err(|e| geometry_error("tree", e))?.flatten()
            }
            None => {
                let max_h = dims.iter().map(|d| d.height).fold(0.0, f64::max);
                let params = spec.apex.clone().unwrap_or_default().params(max_h);
                let u = ViewParam::new(spec.u).map_err(|e| Error::invalid("u", e.to_string()))?;
                let layout = layout_from_slider(&dims, &params, u, spec.a).map_err(|e| geometry_error("apex", e))?;
                PanelScene::from(&layout)
            }
        };
        Ok(ResolvedPanel {
            scene,
            expressions,
            images,
            flips: spec.characters.iter().map(|c| c.flip).collect(),
            balloons: spec.balloons.iter().map(BalloonRequest::from).collect(),
            credits,
        })
    }

    pub fn render_panel(&self, spec: &PanelSpec) -> Result<PanelDocument> {
        let r = self.resolve(spec)?;
        let mut doc = render_panel(&r.scene, &r.images, &r.flips, &r.balloons, &self.options)
            .map_err(|e| render_error(spec, e))?;
        doc.metadata.view_param = Some(spec.u);
        doc.metadata.credits = r.credits;
        Ok(doc)
    }

    pub fn panel_svg(&self, spec: &PanelSpec) -> Result<String> {
        Ok(to_svg(&self.render_panel(spec)?))
    }

    pub fn panel_png(&self, spec: &PanelSpec, scale: f64) -> Result<Vec<u8>> {
        png_of(&self.render_panel(spec)?, scale)
    }

    /// The panel-layout JSON object: frame, placements and balloon requests.
    pub fn panel_layout(&self, spec: &PanelSpec) -> Result<serde_json::Value> {
        let r = self.resolve(spec)?;
        let placements: Vec<_> = r
            .scene
            .images
            .iter()
            .map(|im| {
                serde_json::json!({
                    "index": im.image_index,
                    "x": im.rect.x,
                    "y": im.rect.y,
                    "w": im.rect.w,
                    "h": im.rect.h,
                    "flip": r.flips[im.image_index],
                    "z": im.z,
                })
            })
            .collect();
        Ok(serde_json::json!({
            "frame": { "w": r.scene.frame.w, "h": r.scene.frame.h },
            "placements": placements,
            "balloons": r.balloons,
            "expressions": r.expressions,
        }))
    }

    /// `steps` documents with `u` evenly spaced over `[-1, 1]`.
    pub fn sweep(&self, spec: &PanelSpec, steps: usize) -> Result<Vec<(f64, PanelDocument)>> {
        if steps < 2 {
            return Err(Error::invalid("steps", "need at least 2 steps"));
        }
        let last = (steps - 1) as f64;
        (0..steps)
            .map(|k| {
                let u = (2.0 * k as f64 - last) / last;
                let mut s = spec.clone();
                s.u = u;
                self.render_panel(&s).map(|d| (u, d))
            })
            .collect()
    }

    /// Packs and renders a page. `load_panel` resolves `panel_id` entries.
    pub fn render_page(
        &self,
        page: &PageSpecJson,
        mut load_panel: impl FnMut(&str) -> Result<PanelSpec>,
    ) -> Result<PanelDocument> {
        let errors = page.check();
        if !errors.is_empty() {
            return Err(Error::Invalid(errors));
        }
        let mut docs = Vec::with_capacity(page.panels.len());
        for (i, entry) in page.panels.iter().enumerate() {
            let doc = match entry {
                PageEntry::Panel { panel_id } => {
                    let spec = load_panel(panel_id)?;
                    self.render_panel(&spec).map_err(|e| match e {
                        Error::Invalid(fields) => Error::Invalid(
                            fields
                                .into_iter()
                                .map(|f| FieldError::new(format!("panels[{i}].{}", f.field), f.message))
                                .collect(),
                        ),
                        other => other,
                    })?
                }
                PageEntry::Blank { aspect } => blank_slot(*aspect),
            };
            docs.push(Arc::new(doc));
        }
        let spec = PageSpec {
            format: page.format,
            margins: Margins(page.margins_in),
            gutter: page.gutter_in,
            title_aspect: page.title_aspect,
            panels: docs.iter().map(|d| d.aspect()).collect(),
            row_plan: page.row_plan.clone(),
        };
        let layout = pack_page(&spec).map_err(page_error)?;
        render_page(&layout, &docs).map_err(page_error)
    }
}

pub fn suggest(lexicon: &SentimentLexicon, text: &str) -> Suggestion {
    let valence = score_sentiment(lexicon, text);
    Suggestion { valence, tag: select_expression(valence) }
}

pub fn png_of(doc: &PanelDocument, scale: f64) -> Result<Vec<u8>> {
    if !(scale.is_finite() && scale > 0.0 && scale <= MAX_RASTER_SCALE) {
        return Err(Error::invalid("scale", format!("must lie in (0, {MAX_RASTER_SCALE}]")));
    }
    let img = rasterize(doc, scale).map_err(|e| Error::invalid("scale", e.to_string()))?;
    encode_png(&img).map_err(|e| Error::Internal(e.to_string()))
}

fn blank_slot(aspect: f64) -> PanelDocument {
    let w = aspect * BLANK_SLOT_HEIGHT;
    let mut doc = PanelDocument::empty(w, BLANK_SLOT_HEIGHT);
    doc.items.push(DrawItem::Outline { rect: doc.frame, width: 1.0 });
    doc
}

fn tree_height(tree: &TreeSpec, dims: &[ImageDims]) -> f64 {
    match tree {
        TreeSpec::Leaf(i) => dims[*i].height,
        TreeSpec::Node(n) => match n.apex.as_ref().and_then(|a| a.height) {
            Some(h) => h,
            None => tree_height(&n.left, dims).max(tree_height(&n.right, dims)),
        },
    }
}

fn build_tree(tree: &TreeSpec, dims: &[ImageDims]) -> Result<ViewTree> {
    Ok(match tree {
        TreeSpec::Leaf(i) => ViewTree::Leaf(dims[*i]),
        TreeSpec::Node(n) => {
            let h = tree_height(tree, dims);
            let params = n.apex.clone().unwrap_or_default().params(h);
            let u = ViewParam::new(n.u).map_err(|e| Error::invalid("tree", e.to_string()))?;
            ViewTree::node(u, n.a, params, build_tree(&n.left, dims)?, build_tree(&n.right, dims)?)
        }
    })
}

fn geometry_error(base: &str, e: GeometryError) -> Error {
    let field = match e {
        GeometryError::ScaleExceedsFrame { index, .. } | GeometryError::InvalidScale { index, .. } => {
            format!("{base}.scales[{index}]")
        }
        GeometryError::NegativeGap { index, .. } => format!("{base}.gaps[{index}]"),
        GeometryError::GappedExtrapolation => format!("{base}.gaps"),
        GeometryError::ViewParamOutOfRange(_) => "u".into(),
        GeometryError::CropFactorTooSmall(_) => "a".into(),
        _ => base.into(),
    };
    Error::invalid(field, e.to_string())
}

fn render_error(spec: &PanelSpec, e: RenderError) -> Error {
    let balloon_field = |anchor: usize| match spec.balloons.iter().position(|b| b.anchor == anchor) {
        Some(j) => format!("balloons[{j}]"),
        None => "balloons".into(),
    };
    match e {
        RenderError::Balloon(b) => {
            let field = match &b {
                BalloonError::AnchorOutOfRange { anchor, .. }
                | BalloonError::EmptyText { anchor }
                | BalloonError::InvalidFontSize { anchor, .. }
                | BalloonError::TooWide { anchor, .. } => balloon_field(*anchor),
                BalloonError::DoesNotFit { .. } => "balloons".into(),
            };
            Error::invalid(field, b.to_string())
        }
        other => Error::Internal(other.to_string()),
    }
}

fn page_error(e: PageError) -> Error {
    let field = match e {
        PageError::NoPanels => "panels".to_string(),
        PageError::InvalidAspect { index, .. } => format!("panels[{index}]"),
        PageError::InvalidTitleAspect(_) => "title_aspect".into(),
        PageError::InvalidGutter(_) | PageError::NoVerticalRoom => "gutter_in".into(),
        PageError::EmptyContentBox => "margins_in".into(),
        PageError::InvalidRowPlan(_) => "row_plan".into(),
        PageError::RowDoesNotFit { .. } => "panels".into(),
        PageError::DocumentCountMismatch { .. } => return Error::Internal(e.to_string()),
    };
    Error::invalid(field, e.to_string())
}
