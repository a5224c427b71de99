//! Panel and page spec JSON, with field-level validation.

use std::fmt;

use panelforge_core::balloon::BalloonRequest;
use panelforge_core::geometry::{ApexParams, DEFAULT_CROP_FACTOR};
use panelforge_core::markov::ExpressionChain;
use panelforge_core::page::{PageFormat, DEFAULT_GUTTER_IN, DEFAULT_MARGIN_IN};
use panelforge_core::sentiment::ExpressionTag;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{FieldError, Result};

pub const MIN_CROP_FACTOR: f64 = 1.0;
pub const MAX_CROP_FACTOR: f64 = 4.0;
pub const DEFAULT_FONT_SIZE: f64 = 14.0;
pub const MAX_FONT_SIZE: f64 = 200.0;

/// How a character's expression is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExpressionChoice {
    Tag(ExpressionTag),
    /// From the sentiment of the character's balloon text.
    Auto,
    /// From the seeded expression chain; character `k` takes step `k`.
    Markov,
    #[default]
    Default,
}

impl ExpressionChoice {
    fn as_str(&self) -> &'static str {
        match self {
            ExpressionChoice::Tag(t) => t.as_str(),
            ExpressionChoice::Auto => "auto",
            ExpressionChoice::Markov => "markov",
            ExpressionChoice::Default => "neutral",
        }
    }
}

impl Serialize for ExpressionChoice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for ExpressionChoice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExpressionChoice;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an expression tag, \"auto\" or \"markov\"")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                match v {
                    "auto" => Ok(ExpressionChoice::Auto),
                    "markov" => Ok(ExpressionChoice::Markov),
                    tag => tag.parse().map(ExpressionChoice::Tag).map_err(|_| {
                        E::invalid_value(
                            de::Unexpected::Str(tag),
                            &"one of neutral, happy, sad, angry, surprised, auto, markov",
                        )
                    }),
                }
            }
        }
        d.deserialize_str(V)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterRef {
    pub id: String,
    #[serde(default, skip_serializing_if = "is_default_choice")]
    pub expression: ExpressionChoice,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub flip: bool,
}

fn is_default_choice(c: &ExpressionChoice) -> bool {
    *c == ExpressionChoice::Default
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BalloonSpec {
    pub anchor: usize,
    pub text: String,
    #[serde(default = "default_font_size")]
    pub font_size: f64,
}

fn default_font_size() -> f64 {
    DEFAULT_FONT_SIZE
}

impl From<&BalloonSpec> for BalloonRequest {
    fn from(b: &BalloonSpec) -> Self {
        BalloonRequest::new(b.anchor, b.text.clone(), b.font_size)
    }
}

/// Optional overrides of the apex arrangement. `height` defaults to the
/// tallest image; `scales` entries may be `null` for the default `H / h`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApexSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scales: Option<Vec<Option<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gaps: Option<Vec<f64>>,
}

impl ApexSpec {
    pub fn has_gaps(&self) -> bool {
        self.gaps.as_ref().is_some_and(|g| g.iter().any(|&x| x != 0.0))
    }

    pub fn params(&self, default_height: f64) -> ApexParams {
        let mut p = ApexParams::new(self.height.unwrap_or(default_height));
        if let Some(s) = &self.scales {
            p = p.with_scales(s.clone());
        }
        if let Some(g) = &self.gaps {
            p = p.with_gaps(g.clone());
        }
        p
    }

    fn check(&self, path: &str, n: usize, u: f64, errors: &mut Vec<FieldError>) {
        if let Some(h) = self.height {
            if !(h.is_finite() && h > 0.0) {
                errors.push(FieldError::new(format!("{path}.height"), "must be a positive number"));
            }
        }
        if let Some(scales) = &self.scales {
            if scales.len() != n {
                errors.push(FieldError::new(format!("{path}.scales"), format!("expected {n} entries")));
            }
            for (i, s) in scales.iter().enumerate() {
                if let Some(s) = s {
                    if !(s.is_finite() && *s > 0.0) {
                        errors.push(FieldError::new(format!("{path}.scales[{i}]"), "must be a positive number"));
                    }
                }
            }
        }
        if let Some(gaps) = &self.gaps {
            if gaps.len() != n.saturating_sub(1) {
                errors.push(FieldError::new(
                    format!("{path}.gaps"),
                    format!("expected {} entries", n.saturating_sub(1)),
                ));
            }
            for (i, g) in gaps.iter().enumerate() {
                if !(g.is_finite() && *g >= 0.0) {
                    errors.push(FieldError::new(format!("{path}.gaps[{i}]"), "must be a non-negative number"));
                }
            }
            if u != 0.0 && self.has_gaps() {
                errors.push(FieldError::new(format!("{path}.gaps"), "gaps are only supported at u = 0"));
            }
        }
    }
}

/// Binary composition tree. Leaves name characters by index and must list
/// `0..n` in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum TreeSpec {
    Leaf(usize),
    Node(Box<TreeNodeSpec>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeNodeSpec {
    #[serde(default)]
    pub u: f64,
    #[serde(default = "default_crop")]
    pub a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub apex: Option<ApexSpec>,
    pub left: TreeSpec,
    pub right: TreeSpec,
}

fn default_crop() -> f64 {
    DEFAULT_CROP_FACTOR
}

impl TreeSpec {
    fn check(&self, path: &str, next_leaf: &mut usize, errors: &mut Vec<FieldError>) {
        match self {
            TreeSpec::Leaf(i) => {
                if *i != *next_leaf {
                    errors.push(FieldError::new(
                        format!("{path}.leaf"),
                        format!("leaves must list characters in order; expected {next_leaf}"),
                    ));
                }
                *next_leaf += 1;
            }
            TreeSpec::Node(node) => {
                let p = format!("{path}.node");
                check_u(&format!("{p}.u"), node.u, errors);
                check_a(&format!("{p}.a"), node.a, errors);
                if let Some(apex) = &node.apex {
                    apex.check(&format!("{p}.apex"), 2, node.u, errors);
                }
                node.left.check(&format!("{p}.left"), next_leaf, errors);
                node.right.check(&format!("{p}.right"), next_leaf, errors);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelSpec {
    pub characters: Vec<CharacterRef>,
    #[serde(default)]
    pub u: f64,
    #[serde(default = "default_crop")]
    pub a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub apex: Option<ApexSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub balloons: Vec<BalloonSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<TreeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ExpressionChain>,
}

fn check_u(field: &str, u: f64, errors: &mut Vec<FieldError>) {
    if !(u.is_finite() && (-1.0..=1.0).contains(&u)) {
        errors.push(FieldError::new(field, "must lie in [-1, 1]"));
    }
}

fn check_a(field: &str, a: f64, errors: &mut Vec<FieldError>) {
    if !(a.is_finite() && (MIN_CROP_FACTOR..=MAX_CROP_FACTOR).contains(&a)) {
        errors.push(FieldError::new(field, format!("must lie in [{MIN_CROP_FACTOR}, {MAX_CROP_FACTOR}]")));
    }
}

impl PanelSpec {
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        crate::error::parse_json(bytes)
    }

    /// Checks that need no asset library. Returns every problem found.
    pub fn check(&self) -> Vec<FieldError> {
        let mut errors = Vec::new();
        let n = self.characters.len();
        if n == 0 {
            errors.push(FieldError::new("characters", "at least one character is required"));
        }
        check_u("u", self.u, &mut errors);
        check_a("a", self.a, &mut errors);
        for (i, c) in self.characters.iter().enumerate() {
            if c.id.is_empty() {
                errors.push(FieldError::new(format!("characters[{i}].id"), "must not be empty"));
            }
            if c.expression == ExpressionChoice::Auto && !self.balloons.iter().any(|b| b.anchor == i) {
                errors.push(FieldError::new(
                    format!("characters[{i}].expression"),
                    "\"auto\" needs a balloon anchored to this character",
                ));
            }
        }
        for (j, b) in self.balloons.iter().enumerate() {
            if b.anchor >= n {
                errors.push(FieldError::new(format!("balloons[{j}].anchor"), format!("no character {}", b.anchor)));
            }
            if b.text.trim().is_empty() {
                errors.push(FieldError::new(format!("balloons[{j}].text"), "must not be empty"));
            }
            if !(b.font_size.is_finite() && b.font_size > 0.0 && b.font_size <= MAX_FONT_SIZE) {
                errors.push(FieldError::new(
                    format!("balloons[{j}].font_size"),
                    format!("must lie in (0, {MAX_FONT_SIZE}]"),
                ));
            }
        }
        match &self.tree {
            Some(tree) => {
                if self.apex.is_some() {
                    errors.push(FieldError::new("apex", "give apex overrides on tree nodes instead"));
                }
                let mut next = 0;
                tree.check("tree", &mut next, &mut errors);
                if next != n {
                    errors.push(FieldError::new("tree", format!("tree has {next} leaves for {n} characters")));
                }
            }
            None => {
                if let Some(apex) = &self.apex {
                    apex.check("apex", n, self.u, &mut errors);
                }
            }
        }
        if let Some(chain) = &self.chain {
            if let Err(e) = chain.validate() {
                errors.push(FieldError::new("chain", e.to_string()));
            }
        }
        errors
    }

    pub fn chain(&self) -> ExpressionChain {
        self.chain.clone().unwrap_or_else(|| ExpressionChain::uniform(self.seed.unwrap_or(0)))
    }
}

/// A page slot: a stored (or on-disk) panel, or a blank box of some aspect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PageEntry {
    Panel { panel_id: String },
    Blank { aspect: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PageSpecJson {
    #[serde(default = "default_format")]
    pub format: PageFormat,
    #[serde(default = "default_margins")]
    pub margins_in: [f64; 4],
    #[serde(default = "default_gutter")]
    pub gutter_in: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title_aspect: Option<f64>,
    pub panels: Vec<PageEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_plan: Option<Vec<Vec<usize>>>,
}

fn default_format() -> PageFormat {
    PageFormat::Letter
}

fn default_margins() -> [f64; 4] {
    [DEFAULT_MARGIN_IN; 4]
}

fn default_gutter() -> f64 {
    DEFAULT_GUTTER_IN
}

impl PageSpecJson {
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        crate::error::parse_json(bytes)
    }

    pub fn check(&self) -> Vec<FieldError> {
        let mut errors = Vec::new();
        if self.panels.is_empty() {
            errors.push(FieldError::new("panels", "at least one panel is required"));
        }
        for (i, p) in self.panels.iter().enumerate() {
            match p {
                PageEntry::Panel { panel_id } if panel_id.is_empty() => {
                    errors.push(FieldError::new(format!("panels[{i}].panel_id"), "must not be empty"))
                }
                PageEntry::Blank { aspect } if !(aspect.is_finite() && *aspect > 0.0) => {
                    errors.push(FieldError::new(format!("panels[{i}].aspect"), "must be a positive number"))
                }
                _ => {}
            }
        }
        for (i, m) in self.margins_in.iter().enumerate() {
            if !(m.is_finite() && *m >= 0.0) {
                errors.push(FieldError::new(format!("margins_in[{i}]"), "must be a non-negative number"));
            }
        }
        let (w, h) = self.format.size_in();
        let [t, r, b, l] = self.margins_in;
        if !(w - l - r > 0.0 && h - t - b > 0.0) {
            errors.push(FieldError::new("margins_in", "margins leave no content area"));
        }
        if !(self.gutter_in.is_finite() && self.gutter_in >= 0.0) {
            errors.push(FieldError::new("gutter_in", "must be a non-negative number"));
        }
        if let Some(a) = self.title_aspect {
            if !(a.is_finite() && a > 0.0) {
                errors.push(FieldError::new("title_aspect", "must be a positive number"));
            }
        }
        if let Some(plan) = &self.row_plan {
            let flat: Vec<usize> = plan.iter().flatten().copied().collect();
            if plan.iter().any(Vec::is_empty)
                || flat.len() != self.panels.len()
                || flat.iter().enumerate().any(|(i, &p)| i != p)
            {
                errors.push(FieldError::new("row_plan", "rows must list every panel exactly once, in order"));
            }
        }
        errors
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn fields(spec: &PanelSpec) -> Vec<String> {
        spec.check().into_iter().map(|e| e.field).collect()
    }

    #[test]
    fn minimal_panel_spec_uses_defaults() {
        let spec = PanelSpec::parse(br#"{"characters": [{"id": "ada"}]}"#).unwrap();
        assert_eq!(spec.u, 0.0);
        assert_eq!(spec.a, 2.0);
        assert_eq!(spec.characters[0].expression, ExpressionChoice::Default);
        assert!(spec.check().is_empty());
        let round = serde_json::to_vec(&spec).unwrap();
        assert_eq!(PanelSpec::parse(&round).unwrap(), spec);
    }

    #[test]
    fn expression_choices() {
        let spec = PanelSpec::parse(
            br#"{"characters": [{"id": "a", "expression": "happy"}, {"id": "b", "expression": "markov"},
                {"id": "c", "expression": "auto"}], "balloons": [{"anchor": 2, "text": "hi"}]}"#,
        )
        .unwrap();
        assert_eq!(spec.characters[0].expression, ExpressionChoice::Tag(ExpressionTag::Happy));
        assert_eq!(spec.characters[1].expression, ExpressionChoice::Markov);
        assert_eq!(spec.balloons[0].font_size, DEFAULT_FONT_SIZE);
        assert!(spec.check().is_empty());
        match PanelSpec::parse(br#"{"characters": [{"id": "a", "expression": "grumpy"}]}"#) {
            Err(Error::Invalid(f)) => assert_eq!(f[0].field, "characters[0].expression"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn field_errors() {
        let spec = PanelSpec::parse(
            br#"{"characters": [{"id": "a", "expression": "auto"}, {"id": ""}], "u": 1.5, "a": 0.5,
                "balloons": [{"anchor": 3, "text": " ", "font_size": -1}], "apex": {"gaps": [5], "scales": [1]}}"#,
        )
        .unwrap();
        assert_eq!(
            fields(&spec),
            [
                "u",
                "a",
                "characters[0].expression",
                "characters[1].id",
                "balloons[0].anchor",
                "balloons[0].text",
                "balloons[0].font_size",
                "apex.scales",
                "apex.gaps"
            ]
        );
        let empty = PanelSpec::parse(br#"{"characters": []}"#).unwrap();
        assert_eq!(fields(&empty), ["characters"]);
        assert!(matches!(PanelSpec::parse(br#"{"characters": [], "bogus": 1}"#), Err(Error::Invalid(_))));
        assert!(matches!(PanelSpec::parse(b"{\"characters\": "), Err(Error::Syntax(_))));
    }

    #[test]
    fn tree_leaves_must_be_in_order() {
        let ok = PanelSpec::parse(
            br#"{"characters": [{"id": "a"}, {"id": "b"}, {"id": "c"}],
                "tree": {"node": {"u": 0, "left": {"node": {"u": 0.5, "left": {"leaf": 0}, "right": {"leaf": 1}}},
                                  "right": {"leaf": 2}}}}"#,
        )
        .unwrap();
        assert!(ok.check().is_empty());
        let bad = PanelSpec::parse(
            br#"{"characters": [{"id": "a"}, {"id": "b"}],
                "tree": {"node": {"u": 2, "left": {"leaf": 1}, "right": {"leaf": 0}}}}"#,
        )
        .unwrap();
        assert_eq!(fields(&bad), ["tree.node.u", "tree.node.left.leaf", "tree.node.right.leaf"]);
    }

    #[test]
    fn page_spec_defaults_and_errors() {
        let spec = PageSpecJson::parse(br#"{"panels": [{"panel_id": "x"}, {"aspect": 1.5}]}"#).unwrap();
        assert_eq!(spec.format, PageFormat::Letter);
        assert_eq!(spec.margins_in, [0.5; 4]);
        assert_eq!(spec.gutter_in, 0.125);
        assert!(spec.check().is_empty());
        let bad = PageSpecJson::parse(
            br#"{"format": "a4", "panels": [{"aspect": -1}], "margins_in": [6, 0, 6, 0], "row_plan": [[0], [1]]}"#,
        )
        .unwrap();
        let f: Vec<String> = bad.check().into_iter().map(|e| e.field).collect();
        assert_eq!(f, ["panels[0].aspect", "margins_in", "row_plan"]);
    }
}
