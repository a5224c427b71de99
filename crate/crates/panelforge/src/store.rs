//! Saved panel and page specs, one JSON file per object.
//!
//! Layout: `{root}/panels/{id}.json` and `{root}/pages/{id}.json`, where `id`
//! is a ULID. Writes go to a temporary file in the same directory and are
//! renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spec::{PageSpecJson, PanelSpec};

pub const DATA_ENV: &str = "PANELFORGE_DATA";
pub const DEFAULT_DATA_DIR: &str = "data";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectKind {
    Panel,
    Page,
}

impl ObjectKind {
    fn dir(self) -> &'static str {
        match self {
            ObjectKind::Panel => "panels",
            ObjectKind::Page => "pages",
        }
    }

    fn name(self) -> &'static str {
        match self {
            ObjectKind::Panel => "panel",
            ObjectKind::Page => "page",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredObject {
    pub id: String,
    pub kind: ObjectKind,
    pub created_at: String,
    pub spec: serde_json::Value,
}

#[derive(Debug, Clone)]
pub struct Store {
    root: PathBuf,
}

pub fn default_data_dir() -> PathBuf {
    std::env::var_os(DATA_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_DATA_DIR))
}

/// Anything that is not a ULID cannot name a stored object.
fn check_id(kind: ObjectKind, id: &str) -> Result<()> {
    match ulid::Ulid::from_string(id) {
        Ok(u) if u.to_string() == id => Ok(()),
        _ => Err(Error::NotFound { kind: kind.name(), id: id.to_string() }),
    }
}

impl Store {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn path(&self, kind: ObjectKind, id: &str) -> PathBuf {
        self.root.join(kind.dir()).join(format!("{id}.json"))
    }

    fn save(&self, kind: ObjectKind, spec: serde_json::Value) -> Result<String> {
        let dir = self.root.join(kind.dir());
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let id = ulid::Ulid::new().to_string();
        let obj = StoredObject {
            id: id.clone(),
            kind,
            created_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            spec,
        };
        let body = serde_json::to_vec_pretty(&obj).map_err(|e| Error::Internal(e.to_string()))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| Error::io(&dir, e))?;
        tmp.write_all(&body).map_err(|e| Error::io(tmp.path(), e))?;
        let path = self.path(kind, &id);
        tmp.persist(&path).map_err(|e| Error::io(&path, e.error))?;
        Ok(id)
    }

    pub fn load(&self, kind: ObjectKind, id: &str) -> Result<StoredObject> {
        check_id(kind, id)?;
        let path = self.path(kind, id);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(Error::NotFound { kind: kind.name(), id: id.to_string() })
            }
            Err(e) => return Err(Error::io(&path, e)),
        };
        let obj: StoredObject =
            serde_json::from_slice(&bytes).map_err(|e| Error::Internal(format!("{}: {e}", path.display())))?;
        if obj.kind != kind || obj.id != id {
            return Err(Error::Internal(format!("{}: id or kind does not match its file name", path.display())));
        }
        Ok(obj)
    }

    pub fn save_panel(&self, spec: &PanelSpec) -> Result<String> {
        self.save(ObjectKind::Panel, serde_json::to_value(spec).map_err(|e| Error::Internal(e.to_string()))?)
    }

    pub fn save_page(&self, spec: &PageSpecJson) -> Result<String> {
        self.save(ObjectKind::Page, serde_json::to_value(spec).map_err(|e| Error::Internal(e.to_string()))?)
    }

    pub fn load_panel(&self, id: &str) -> Result<PanelSpec> {
        let obj = self.load(ObjectKind::Panel, id)?;
        let spec: PanelSpec =
            serde_json::from_value(obj.spec).map_err(|e| Error::Internal(format!("stored panel {id}: {e}")))?;
        revalidate("panel", id, spec.check())?;
        Ok(spec)
    }

    pub fn load_page(&self, id: &str) -> Result<PageSpecJson> {
        let obj = self.load(ObjectKind::Page, id)?;
        let spec: PageSpecJson =
            serde_json::from_value(obj.spec).map_err(|e| Error::Internal(format!("stored page {id}: {e}")))?;
        revalidate("page", id, spec.check())?;
        Ok(spec)
    }
}

fn revalidate(kind: &str, id: &str, errors: Vec<crate::error::FieldError>) -> Result<()> {
    if errors.is_empty() {
        return Ok(());
    }
    let list: Vec<String> = errors.iter().map(|e| e.to_string()).collect();
    Err(Error::Internal(format!("stored {kind} {id} no longer validates: {}", list.join("; "))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> PanelSpec {
        PanelSpec::parse(br#"{"characters":[{"id":"a"},{"id":"b","flip":true}],"u":0.25}"#).unwrap()
    }

    #[test]
    fn save_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::new(dir.path());
        let id = store.save_panel(&spec()).unwrap();
        assert_eq!(id.len(), 26);
        assert!(dir.path().join("panels").join(format!("{id}.json")).is_file());
        assert_eq!(store.load_panel(&id).unwrap(), spec());
        let obj = store.load(ObjectKind::Panel, &id).unwrap();
        assert_eq!(obj.kind, ObjectKind::Panel);
        assert!(obj.created_at.ends_with('Z'));
    }

    #[test]
    fn floats_survive_storage_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::new(dir.path());
        let mut s = spec();
        s.a = 3.1666023746134226;
        s.u = -0.1 - 0.2;
        let id = store.save_panel(&s).unwrap();
        let back = store.load_panel(&id).unwrap();
        assert_eq!(back.a.to_bits(), s.a.to_bits());
        assert_eq!(back.u.to_bits(), s.u.to_bits());
    }

    #[test]
    fn ids_are_distinct() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::new(dir.path());
        let a = store.save_panel(&spec()).unwrap();
        let b = store.save_panel(&spec()).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn missing_and_malformed_ids() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::new(dir.path());
        for id in ["01ARZ3NDEKTSV4RRFFQ69G5FAV", "../etc/passwd", "", "nope"] {
            assert!(matches!(store.load_panel(id), Err(Error::NotFound { kind: "panel", .. })), "{id}");
        }
        let id = store.save_panel(&spec()).unwrap();
        assert!(matches!(store.load_page(&id), Err(Error::NotFound { kind: "page", .. })));
    }
}
