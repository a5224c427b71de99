//! Panel layout core: view-parameter geometry, tree composition, camera
//! classification, balloons, documents (SVG and raster), page packing and
//! expression selection. `no_std` with `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod balloon;
pub mod camera;
pub mod document;
pub mod geometry;
pub mod markov;
pub mod page;
pub mod raster;
pub mod rasterize;
pub mod sentiment;
pub mod svg;
pub mod tree;

pub use balloon::{place_balloons, Balloon, BalloonError, BalloonLayout, BalloonRequest, BalloonStyle};
pub use camera::{classify_camera_view, CameraError, CameraScene, Point2, ViewClass};
pub use document::{render_panel, Credit, DocImage, DocMetadata, DrawItem, PanelDocument, RenderError, RenderOptions};
pub use geometry::{
    extrapolate_left, extrapolate_right, layout_from_slider, layout_multi, make_apex, ApexParams, GeometryError,
    ImageDims, PlacedImage, Rect, ViewLayout, ViewParam, DEFAULT_CROP_FACTOR,
};
pub use markov::{markov_next, markov_sequence, ChainError, ExpressionChain};
pub use page::{pack_page, render_page, Margins, PageError, PageFormat, PageLayout, PageSpec, Slot};
pub use raster::{auto_trim, validate_asset, RasterError, RasterImage, Rgba, ValidationReport};
pub use rasterize::{rasterize, rasterize_with_hits, HitMap};
pub use sentiment::{score_sentiment, select_expression, ExpressionTag, SentimentLexicon};
pub use svg::to_svg;
pub use tree::{compose_tree, PanelScene, SceneImage, TreeLayout, ViewTree};
