//! Character image library: `library.json` plus PNG files under one root.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Component, Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use panelforge_core::document::DocImage;
use panelforge_core::geometry::ImageDims;
use panelforge_core::raster::{auto_trim, validate_asset, RasterImage, ValidationReport};
use panelforge_core::sentiment::ExpressionTag;
use serde::{Deserialize, Serialize};

use crate::codec::{decode_png, encode_png, png_data_uri};

pub const MANIFEST_FILE: &str = "library.json";
pub const MANIFEST_VERSION: u32 = 1;
pub const ASSETS_ENV: &str = "PANELFORGE_ASSETS";
pub const DEFAULT_ASSETS_DIR: &str = "assets";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Science,
    Mathematics,
    Animal,
    Political,
    Other,
}

impl Category {
    pub const ALL: [Category; 5] =
        [Category::Science, Category::Mathematics, Category::Animal, Category::Political, Category::Other];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Science => "science",
            Category::Mathematics => "mathematics",
            Category::Animal => "animal",
            Category::Political => "political",
            Category::Other => "other",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = LibraryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| LibraryError::UnknownCategory(s.to_string()))
    }
}

/// An expression image reference as written in the manifest. The short
/// form is a bare path; the long form also carries the bottom-cut flag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum ExpressionEntry {
    Path(String),
    Detailed {
        path: String,
        #[serde(default)]
        bottom_cut: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpressionRef {
    pub path: String,
    pub bottom_cut: bool,
}

impl From<ExpressionEntry> for ExpressionRef {
    fn from(e: ExpressionEntry) -> Self {
        match e {
            ExpressionEntry::Path(path) => ExpressionRef { path, bottom_cut: false },
            ExpressionEntry::Detailed { path, bottom_cut } => ExpressionRef { path, bottom_cut },
        }
    }
}

impl From<&ExpressionRef> for ExpressionEntry {
    fn from(r: &ExpressionRef) -> Self {
        if r.bottom_cut {
            ExpressionEntry::Detailed { path: r.path.clone(), bottom_cut: true }
        } else {
            ExpressionEntry::Path(r.path.clone())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RawCharacter {
    id: String,
    display_name: String,
    creator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    wikipedia_url: Option<String>,
    category: Category,
    expressions: BTreeMap<ExpressionTag, ExpressionEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RawManifest {
    version: u32,
    characters: Vec<RawCharacter>,
}

/// The semantic content of `library.json`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub version: u32,
    pub characters: Vec<ManifestCharacter>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestCharacter {
    pub id: String,
    pub display_name: String,
    pub creator: String,
    pub wikipedia_url: Option<String>,
    pub category: Category,
    pub expressions: BTreeMap<ExpressionTag, ExpressionRef>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self, LibraryError> {
        let raw: RawManifest = serde_json::from_str(text).map_err(|e| LibraryError::Parse(e.to_string()))?;
        if raw.version != MANIFEST_VERSION {
            return Err(LibraryError::UnsupportedVersion(raw.version));
        }
        let characters = raw
            .characters
            .into_iter()
            .map(|c| ManifestCharacter {
                id: c.id,
                display_name: c.display_name,
                creator: c.creator,
                wikipedia_url: c.wikipedia_url,
                category: c.category,
                expressions: c.expressions.into_iter().map(|(t, e)| (t, e.into())).collect(),
            })
            .collect();
        Ok(Manifest { version: raw.version, characters })
    }

    pub fn to_json(&self) -> String {
        let raw = RawManifest {
            version: self.version,
            characters: self
                .characters
                .iter()
                .map(|c| RawCharacter {
                    id: c.id.clone(),
                    display_name: c.display_name.clone(),
                    creator: c.creator.clone(),
                    wikipedia_url: c.wikipedia_url.clone(),
                    category: c.category,
                    expressions: c.expressions.iter().map(|(t, r)| (*t, r.into())).collect(),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&raw).expect("manifest serializes");
        s.push('\n');
        s
    }

    /// Structural checks that need no image files.
    pub fn check(&self) -> Result<(), LibraryError> {
        let mut seen = std::collections::BTreeSet::new();
        for c in &self.characters {
            if !is_slug(&c.id) {
                return Err(LibraryError::BadId(c.id.clone()));
            }
            if !seen.insert(c.id.as_str()) {
                return Err(LibraryError::DuplicateId(c.id.clone()));
            }
            if !c.expressions.contains_key(&ExpressionTag::Neutral) {
                return Err(LibraryError::MissingNeutral(c.id.clone()));
            }
            for (tag, r) in &c.expressions {
                if !is_safe_relative(&r.path) {
                    return Err(LibraryError::BadPath { id: c.id.clone(), tag: *tag, path: r.path.clone() });
                }
            }
        }
        Ok(())
    }
}

fn is_slug(s: &str) -> bool {
    !s.is_empty()
        && s.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-' || b == b'_')
}

fn is_safe_relative(p: &str) -> bool {
    let path = Path::new(p);
    !p.is_empty() && path.components().all(|c| matches!(c, Component::Normal(_)))
}

#[derive(Debug, thiserror::Error)]
pub enum LibraryError {
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("manifest does not parse: {0}")]
    Parse(String),
    #[error("unsupported manifest version {0}")]
    UnsupportedVersion(u32),
    #[error("character id {0:?} is not a lowercase slug")]
    BadId(String),
    #[error("duplicate character id {0:?}")]
    DuplicateId(String),
    #[error("character {0:?} has no neutral expression")]
    MissingNeutral(String),
    #[error("character {id:?} expression {tag}: path {path:?} must be relative to the library root")]
    BadPath { id: String, tag: ExpressionTag, path: String },
    #[error("character {id:?} expression {tag}: {path}: {message}")]
    Image { id: String, tag: ExpressionTag, path: String, message: String },
    #[error("character {id:?} expression {tag}: {path} is not tightly packed (empty edges: {})", .edges.join(", "))]
    NotTight { id: String, tag: ExpressionTag, path: String, edges: Vec<&'static str> },
    #[error("unknown category {0:?}")]
    UnknownCategory(String),
    #[error("unknown character {0:?}")]
    UnknownCharacter(String),
}

/// One decoded, validated expression image.
#[derive(Debug, Clone)]
pub struct ExpressionImage {
    pub path: String,
    pub dims: ImageDims,
    pub bottom_cut: bool,
    pub png: Arc<Vec<u8>>,
    pub doc_image: Arc<DocImage>,
}

#[derive(Debug, Clone)]
pub struct CharacterAsset {
    pub id: String,
    pub display_name: String,
    pub creator: String,
    pub wikipedia_url: Option<String>,
    pub category: Category,
    pub expressions: BTreeMap<ExpressionTag, ExpressionImage>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacterSummary {
    pub id: String,
    pub display_name: String,
    pub creator: String,
    pub wikipedia_url: Option<String>,
    pub category: Category,
    pub expressions: Vec<ExpressionTag>,
}

impl CharacterAsset {
    pub fn summary(&self) -> CharacterSummary {
        CharacterSummary {
            id: self.id.clone(),
            display_name: self.display_name.clone(),
            creator: self.creator.clone(),
            wikipedia_url: self.wikipedia_url.clone(),
            category: self.category,
            expressions: self.expressions.keys().copied().collect(),
        }
    }
}

/// Result of [`Library::resolve`].
#[derive(Debug, Clone, Copy)]
pub struct Resolved<'a> {
    pub character: &'a CharacterAsset,
    pub requested: ExpressionTag,
    /// The tag actually served; differs from `requested` on fallback.
    pub tag: ExpressionTag,
    pub fallback: bool,
    pub image: &'a ExpressionImage,
}

#[derive(Debug, Clone)]
pub struct Library {
    root: PathBuf,
    version: u32,
    characters: BTreeMap<String, CharacterAsset>,
}

/// The manifest file for `path`, which may name the file or its directory.
pub fn manifest_path(path: &Path) -> PathBuf {
    if path.is_dir() {
        path.join(MANIFEST_FILE)
    } else {
        path.to_path_buf()
    }
}

fn read_manifest(path: &Path) -> Result<(PathBuf, Manifest), LibraryError> {
    let file = manifest_path(path);
    let text = std::fs::read_to_string(&file)
        .map_err(|e| LibraryError::Io { path: file.clone(), message: e.to_string() })?;
    let root = file.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((root, Manifest::parse(&text)?))
}

fn read_image(root: &Path, id: &str, tag: ExpressionTag, r: &ExpressionRef) -> Result<(Vec<u8>, RasterImage), LibraryError> {
    let image_err = |message: String| LibraryError::Image { id: id.to_string(), tag, path: r.path.clone(), message };
    let bytes = std::fs::read(root.join(&r.path)).map_err(|e| image_err(e.to_string()))?;
    let raster = decode_png(&bytes).map_err(|e| image_err(e.to_string()))?;
    Ok((bytes, raster))
}

/// Loads and fully validates a library: every image is opened, decoded and
/// checked for tight packing.
pub fn load_manifest(path: &Path) -> Result<Library, LibraryError> {
    let (root, manifest) = read_manifest(path)?;
    manifest.check()?;
    let mut characters = BTreeMap::new();
    for c in manifest.characters {
        let mut expressions = BTreeMap::new();
        for (tag, r) in &c.expressions {
            let (bytes, raster) = read_image(&root, &c.id, *tag, r)?;
            let report = validate_asset(&raster, r.bottom_cut);
            if !report.passed() {
                return Err(LibraryError::NotTight {
                    id: c.id.clone(),
                    tag: *tag,
                    path: r.path.clone(),
                    edges: report.failed_edges().into_iter().map(|e| e.name()).collect(),
                });
            }
            let dims = ImageDims { width: raster.width() as f64, height: raster.height() as f64 };
            let doc_image = Arc::new(DocImage {
                asset_id: format!("{}/{}", c.id, tag),
                href: png_data_uri(&bytes),
                raster,
            });
            expressions.insert(
                *tag,
                ExpressionImage { path: r.path.clone(), dims, bottom_cut: r.bottom_cut, png: Arc::new(bytes), doc_image },
            );
        }
        characters.insert(
            c.id.clone(),
            CharacterAsset {
                id: c.id,
                display_name: c.display_name,
                creator: c.creator,
                wikipedia_url: c.wikipedia_url,
                category: c.category,
                expressions,
            },
        );
    }
    Ok(Library { root, version: manifest.version, characters })
}

/// Writes `library.json` under `root`.
pub fn save_manifest(root: &Path, manifest: &Manifest) -> Result<(), LibraryError> {
    let file = root.join(MANIFEST_FILE);
    std::fs::write(&file, manifest.to_json()).map_err(|e| LibraryError::Io { path: file, message: e.to_string() })
}

impl Library {
    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn version(&self) -> u32 {
        self.version
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&CharacterAsset> {
        self.characters.get(id)
    }

    pub fn manifest(&self) -> Manifest {
        Manifest {
            version: self.version,
            characters: self
                .characters
                .values()
                .map(|c| ManifestCharacter {
                    id: c.id.clone(),
                    display_name: c.display_name.clone(),
                    creator: c.creator.clone(),
                    wikipedia_url: c.wikipedia_url.clone(),
                    category: c.category,
                    expressions: c
                        .expressions
                        .iter()
                        .map(|(t, e)| (*t, ExpressionRef { path: e.path.clone(), bottom_cut: e.bottom_cut }))
                        .collect(),
                })
                .collect(),
        }
    }

    /// Id-sorted summaries, optionally restricted to one category.
    pub fn list_characters(&self, category: Option<Category>) -> Vec<CharacterSummary> {
        self.characters
            .values()
            .filter(|c| category.is_none_or(|cat| c.category == cat))
            .map(CharacterAsset::summary)
            .collect()
    }

    /// The requested expression, or neutral with `fallback` set when the
    /// character lacks it.
    pub fn resolve(&self, id: &str, tag: ExpressionTag) -> Result<Resolved<'_>, LibraryError> {
        let character = self.get(id).ok_or_else(|| LibraryError::UnknownCharacter(id.to_string()))?;
        let (served, image) = match character.expressions.get(&tag) {
            Some(img) => (tag, img),
            None => (ExpressionTag::Neutral, &character.expressions[&ExpressionTag::Neutral]),
        };
        Ok(Resolved { character, requested: tag, tag: served, fallback: served != tag, image })
    }
}

/// Per-image outcome of an audit.
#[derive(Debug, Clone)]
pub struct AuditEntry {
    pub id: String,
    pub tag: ExpressionTag,
    pub path: String,
    pub outcome: AuditOutcome,
}

#[derive(Debug, Clone)]
pub enum AuditOutcome {
    Passed(ValidationReport),
    Failed(ValidationReport),
    /// Failed, then rewritten to its tight bounds.
    Trimmed { before: ValidationReport, width: u32, height: u32 },
    Unreadable(String),
}

impl AuditEntry {
    pub fn ok(&self) -> bool {
        matches!(self.outcome, AuditOutcome::Passed(_) | AuditOutcome::Trimmed { .. })
    }
}

/// Checks every image in the manifest without stopping at the first
/// failure. With `fix_trim`, images that fail only because of empty borders
/// are cropped in place.
pub fn audit(path: &Path, fix_trim: bool) -> Result<Vec<AuditEntry>, LibraryError> {
    let (root, manifest) = read_manifest(path)?;
    manifest.check()?;
    let mut entries = Vec::new();
    for c in &manifest.characters {
        for (tag, r) in &c.expressions {
            let outcome = match read_image(&root, &c.id, *tag, r) {
                Err(e) => AuditOutcome::Unreadable(e.to_string()),
                Ok((_, raster)) => {
                    let report = validate_asset(&raster, r.bottom_cut);
                    if report.passed() {
                        AuditOutcome::Passed(report)
                    } else if fix_trim {
                        match trim_in_place(&root.join(&r.path), &raster, r.bottom_cut) {
                            Ok((width, height)) => AuditOutcome::Trimmed { before: report, width, height },
                            Err(msg) => AuditOutcome::Unreadable(msg),
                        }
                    } else {
                        AuditOutcome::Failed(report)
                    }
                }
            };
            entries.push(AuditEntry { id: c.id.clone(), tag: *tag, path: r.path.clone(), outcome });
        }
    }
    Ok(entries)
}

fn trim_in_place(file: &Path, raster: &RasterImage, bottom_cut: bool) -> Result<(u32, u32), String> {
    let trimmed = auto_trim(raster, bottom_cut).map_err(|e| e.to_string())?;
    let png = encode_png(&trimmed).map_err(|e| e.to_string())?;
    std::fs::write(file, png).map_err(|e| format!("{}: {e}", file.display()))?;
    Ok((trimmed.width(), trimmed.height()))
}

/// `PANELFORGE_ASSETS`, else `./assets`.
pub fn default_root() -> PathBuf {
    std::env::var_os(ASSETS_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_ASSETS_DIR))
}

#[cfg(test)]
mod tests {
    use super::*;
    use panelforge_core::raster::{padded_block, Rgba};

    const INK: Rgba = Rgba::rgb(40, 90, 200);

    fn write_png(dir: &Path, name: &str, img: &RasterImage) {
        std::fs::write(dir.join(name), encode_png(img).unwrap()).unwrap();
    }

    fn one_character(dir: &Path, expressions: &str) {
        std::fs::write(
            dir.join(MANIFEST_FILE),
            format!(
                r#"{{"version": 1, "characters": [{{"id": "ada", "display_name": "Ada", "creator": "Sam",
                "wikipedia_url": "https://en.wikipedia.org/wiki/Ada", "category": "science",
                "expressions": {expressions}}}]}}"#
            ),
        )
        .unwrap();
    }

    #[test]
    fn single_character_library() {
        let dir = tempfile::tempdir().unwrap();
        write_png(dir.path(), "ada.png", &RasterImage::filled(10, 20, INK).unwrap());
        one_character(dir.path(), r#"{"neutral": "ada.png"}"#);
        let lib = load_manifest(dir.path()).unwrap();
        assert_eq!(lib.len(), 1);
        let r = lib.resolve("ada", ExpressionTag::Neutral).unwrap();
        assert_eq!(r.image.dims, ImageDims { width: 10.0, height: 20.0 });
        assert!(!r.fallback);
        assert!(r.image.doc_image.href.starts_with("data:image/png;base64,"));
    }

    #[test]
    fn fallback_and_unknown_id() {
        let dir = tempfile::tempdir().unwrap();
        write_png(dir.path(), "n.png", &RasterImage::filled(4, 4, INK).unwrap());
        write_png(dir.path(), "h.png", &RasterImage::filled(5, 4, INK).unwrap());
        one_character(dir.path(), r#"{"neutral": "n.png", "happy": "h.png"}"#);
        let lib = load_manifest(dir.path()).unwrap();
        let happy = lib.resolve("ada", ExpressionTag::Happy).unwrap();
        assert_eq!((happy.tag, happy.fallback, happy.image.path.as_str()), (ExpressionTag::Happy, false, "h.png"));
        let surprised = lib.resolve("ada", ExpressionTag::Surprised).unwrap();
        assert_eq!((surprised.tag, surprised.fallback), (ExpressionTag::Neutral, true));
        assert!(matches!(lib.resolve("bob", ExpressionTag::Neutral), Err(LibraryError::UnknownCharacter(_))));
    }

    #[test]
    fn structural_errors_name_the_character() {
        let text = |chars: &str| format!(r#"{{"version": 1, "characters": [{chars}]}}"#);
        let ch = |id: &str, ex: &str| {
            format!(r#"{{"id": "{id}", "display_name": "X", "creator": "Y", "category": "animal", "expressions": {ex}}}"#)
        };
        let dup = text(&format!("{},{}", ch("cat", r#"{"neutral": "c.png"}"#), ch("cat", r#"{"neutral": "d.png"}"#)));
        assert!(matches!(Manifest::parse(&dup).unwrap().check(), Err(LibraryError::DuplicateId(id)) if id == "cat"));
        let no_neutral = text(&ch("dog", r#"{"happy": "d.png"}"#));
        assert!(matches!(Manifest::parse(&no_neutral).unwrap().check(), Err(LibraryError::MissingNeutral(id)) if id == "dog"));
        let escape = text(&ch("dog", r#"{"neutral": "../d.png"}"#));
        assert!(matches!(Manifest::parse(&escape).unwrap().check(), Err(LibraryError::BadPath { .. })));
        assert!(matches!(Manifest::parse("{"), Err(LibraryError::Parse(_))));
        assert!(matches!(Manifest::parse(r#"{"version": 2, "characters": []}"#), Err(LibraryError::UnsupportedVersion(2))));
        let bad_cat = text(&ch("dog", r#"{"neutral": "d.png"}"#)).replace("animal", "robots");
        assert!(matches!(Manifest::parse(&bad_cat), Err(LibraryError::Parse(_))));
    }

    #[test]
    fn loose_image_fails_with_edge_detail_and_audit_can_trim_it() {
        let dir = tempfile::tempdir().unwrap();
        write_png(dir.path(), "ada.png", &padded_block(10, 10, INK, [0, 0, 0, 2]));
        one_character(dir.path(), r#"{"neutral": "ada.png"}"#);
        match load_manifest(dir.path()) {
            Err(LibraryError::NotTight { edges, .. }) => assert_eq!(edges, ["left"]),
            other => panic!("{other:?}"),
        }
        let report = audit(dir.path(), false).unwrap();
        assert!(!report[0].ok());
        let fixed = audit(dir.path(), true).unwrap();
        assert!(matches!(fixed[0].outcome, AuditOutcome::Trimmed { width: 8, height: 10, .. }));
        assert!(load_manifest(dir.path()).is_ok());
    }

    #[test]
    fn bottom_cut_flag_allows_empty_last_row() {
        let dir = tempfile::tempdir().unwrap();
        write_png(dir.path(), "ada.png", &padded_block(10, 10, INK, [0, 0, 1, 0]));
        one_character(dir.path(), r#"{"neutral": {"path": "ada.png", "bottom_cut": true}}"#);
        let lib = load_manifest(dir.path()).unwrap();
        assert!(lib.resolve("ada", ExpressionTag::Neutral).unwrap().image.bottom_cut);
    }

    #[test]
    fn save_then_load_keeps_content() {
        let dir = tempfile::tempdir().unwrap();
        write_png(dir.path(), "a.png", &RasterImage::filled(3, 3, INK).unwrap());
        write_png(dir.path(), "b.png", &padded_block(3, 3, INK, [0, 0, 1, 0]));
        one_character(dir.path(), r#"{"neutral": "a.png", "sad": {"path": "b.png", "bottom_cut": true}}"#);
        let lib = load_manifest(dir.path()).unwrap();
        let manifest = lib.manifest();
        save_manifest(dir.path(), &manifest).unwrap();
        assert_eq!(load_manifest(dir.path()).unwrap().manifest(), manifest);
    }

    #[test]
    fn listing_filters_by_category() {
        let dir = tempfile::tempdir().unwrap();
        write_png(dir.path(), "a.png", &RasterImage::filled(3, 3, INK).unwrap());
        let entry = |id: &str, cat: &str| {
            format!(r#"{{"id": "{id}", "display_name": "{id}", "creator": "c", "category": "{cat}", "expressions": {{"neutral": "a.png"}}}}"#)
        };
        std::fs::write(
            dir.path().join(MANIFEST_FILE),
            format!(
                r#"{{"version": 1, "characters": [{}, {}, {}]}}"#,
                entry("zed", "science"),
                entry("amy", "animal"),
                entry("bea", "science")
            ),
        )
        .unwrap();
        let lib = load_manifest(dir.path()).unwrap();
        let ids = |v: Vec<CharacterSummary>| v.into_iter().map(|s| s.id).collect::<Vec<_>>();
        assert_eq!(ids(lib.list_characters(None)), ["amy", "bea", "zed"]);
        assert_eq!(ids(lib.list_characters(Some(Category::Science))), ["bea", "zed"]);
        assert!(lib.list_characters(Some(Category::Political)).is_empty());
        assert!("robots".parse::<Category>().is_err());
    }
}
