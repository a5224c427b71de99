//! Binary-tree composition of more than two images.
//!
//! Each internal node lays out its two children with the slider and then
//! behaves, towards its parent, like a single image the size of its frame
//! with everything outside that frame cropped away.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::geometry::{
    layout_from_slider, ApexParams, FrameSize, GeometryError, ImageDims, Rect, ViewLayout,
    ViewParam,
};

#[derive(Debug, Clone, PartialEq)]
pub enum ViewTree {
    Leaf(ImageDims),
    Node(Box<TreeNode>),
}

/// Internal node. `params.height` is the frame height of this node's own
/// apex arrangement.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub u: ViewParam,
    pub a: f64,
    pub params: ApexParams,
    pub left: ViewTree,
    pub right: ViewTree,
}

impl ViewTree {
    pub fn leaf(width: f64, height: f64) -> Self {
        ViewTree::Leaf(ImageDims { width, height })
    }

    pub fn node(u: ViewParam, a: f64, params: ApexParams, left: ViewTree, right: ViewTree) -> Self {
        ViewTree::Node(Box::new(TreeNode { u, a, params, left, right }))
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            ViewTree::Leaf(_) => 1,
            ViewTree::Node(n) => n.left.leaf_count() + n.right.leaf_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeChild {
    /// In-order leaf number.
    Leaf(usize),
    Node(Box<TreeLayout>),
}

/// Result of [`compose_tree`]: the root layout plus, per root placement, what
/// sits inside it.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeLayout {
    pub layout: ViewLayout,
    pub children: Vec<TreeChild>,
}

impl TreeLayout {
    pub fn frame(&self) -> FrameSize {
        self.layout.frame
    }

    /// Every leaf mapped into root panel coordinates with its accumulated
    /// crop rectangle.
    pub fn flatten(&self) -> PanelScene {
        let frame = self.layout.frame;
        let mut images = Vec::new();
        let root_clip = Rect::new(0.0, 0.0, frame.w, frame.h);
        self.flatten_into(Transform::IDENTITY, root_clip, &mut images);
        for (z, image) in images.iter_mut().enumerate() {
            image.z = z;
        }
        images.sort_by_key(|im| im.image_index);
        PanelScene { frame, images }
    }

    fn flatten_into(&self, t: Transform, clip: Rect, out: &mut Vec<SceneImage>) {
        let frame = self.layout.frame_rect();
        let clip = clip.intersect(&t.apply(&frame));
        for (placement, child) in self.layout.placements.iter().zip(&self.children) {
            let rect = t.apply(&placement.rect());
            match child {
                TreeChild::Leaf(index) => out.push(SceneImage {
                    image_index: *index,
                    rect,
                    clip,
                    flip: placement.flip_horizontal,
                    z: 0,
                }),
                TreeChild::Node(sub) => {
                    let sub_frame = sub.layout.frame;
                    let k = if sub_frame.w > 0.0 { placement.drawn_width / sub_frame.w } else { 0.0 };
                    let inner = Transform { scale: t.scale * k, dx: rect.x, dy: rect.y };
                    sub.flatten_into(inner, clip.intersect(&rect), out);
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Transform {
    scale: f64,
    dx: f64,
    dy: f64,
}

impl Transform {
    const IDENTITY: Transform = Transform { scale: 1.0, dx: 0.0, dy: 0.0 };

    fn apply(&self, r: &Rect) -> Rect {
        Rect::new(
            self.dx + self.scale * r.x,
            self.dy + self.scale * r.y,
            self.scale * r.w,
            self.scale * r.h,
        )
    }
}

pub fn compose_tree(tree: &ViewTree) -> Result<TreeLayout, GeometryError> {
    let mut next_leaf = 0;
    compose_node(tree, &mut next_leaf)
}

fn compose_node(tree: &ViewTree, next_leaf: &mut usize) -> Result<TreeLayout, GeometryError> {
    match tree {
        ViewTree::Leaf(dims) => {
            if !dims.is_valid() {
                return Err(GeometryError::InvalidDims { index: *next_leaf });
            }
            let index = *next_leaf;
            *next_leaf += 1;
            let layout = layout_from_slider(
                &[*dims],
                &ApexParams::new(dims.height),
                ViewParam::APEX,
                crate::geometry::DEFAULT_CROP_FACTOR,
            )?;
            Ok(TreeLayout { layout, children: alloc::vec![TreeChild::Leaf(index)] })
        }
        ViewTree::Node(node) => {
            let left = compose_child(&node.left, next_leaf)?;
            let right = compose_child(&node.right, next_leaf)?;
            let dims = [left.0, right.0];
            let layout = layout_from_slider(&dims, &node.params, node.u, node.a)?;
            Ok(TreeLayout { layout, children: alloc::vec![left.1, right.1] })
        }
    }
}

/// A child as seen from its parent: its outer dimensions and its contents.
fn compose_child(
    tree: &ViewTree,
    next_leaf: &mut usize,
) -> Result<(ImageDims, TreeChild), GeometryError> {
    match tree {
        ViewTree::Leaf(dims) => {
            if !dims.is_valid() {
                return Err(GeometryError::InvalidDims { index: *next_leaf });
            }
            let index = *next_leaf;
            *next_leaf += 1;
            Ok((*dims, TreeChild::Leaf(index)))
        }
        ViewTree::Node(_) => {
            let sub = compose_node(tree, next_leaf)?;
            let frame = sub.layout.frame;
            let dims = ImageDims { width: frame.w, height: frame.h };
            if !dims.is_valid() {
                return Err(GeometryError::MalformedTree("subtree collapsed to an empty frame"));
            }
            Ok((dims, TreeChild::Node(Box::new(sub))))
        }
    }
}

/// One image ready to draw: where it goes and which part of the panel may
/// show it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneImage {
    pub image_index: usize,
    pub rect: Rect,
    pub clip: Rect,
    pub flip: bool,
    pub z: usize,
}

impl SceneImage {
    /// Portion of the image that actually shows up in the panel.
    pub fn visible(&self) -> Rect {
        self.rect.intersect(&self.clip)
    }
}

/// Renderer input: a frame plus images sorted by `image_index`.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelScene {
    pub frame: FrameSize,
    pub images: Vec<SceneImage>,
}

impl From<&ViewLayout> for PanelScene {
    fn from(layout: &ViewLayout) -> Self {
        let clip = layout.frame_rect();
        let mut images: Vec<SceneImage> = layout
            .placements
            .iter()
            .map(|p| SceneImage {
                image_index: p.image_index,
                rect: p.rect(),
                clip,
                flip: p.flip_horizontal,
                z: p.z,
            })
            .collect();
        images.sort_by_key(|im| im.image_index);
        PanelScene { frame: layout.frame, images }
    }
}
