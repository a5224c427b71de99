use std::fmt;
use std::path::PathBuf;

use serde::Serialize;

/// One problem with one field of a request, addressed by a JSON-ish path
/// such as `characters[1].id`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_empty() {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.field, self.message)
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input that is not JSON (or TOML) at all.
    #[error("malformed input: {0}")]
    Syntax(String),
    #[error("invalid request: {}", join(.0))]
    Invalid(Vec<FieldError>),
    #[error("{kind} {id:?} not found")]
    NotFound { kind: &'static str, id: String },
    #[error("asset library: {0}")]
    Library(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Internal(String),
}

fn join(errors: &[FieldError]) -> String {
    errors.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; ")
}

impl Error {
    pub fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid(vec![FieldError::new(field, message)])
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax(_) => "syntax",
            Error::Invalid(_) => "validation",
            Error::NotFound { .. } => "not_found",
            Error::Library(_) => "library",
            Error::Io { .. } => "io",
            Error::Internal(_) => "internal",
        }
    }

    pub fn fields(&self) -> &[FieldError] {
        match self {
            Error::Invalid(f) => f,
            _ => &[],
        }
    }

    /// Exit status used by the command line.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax(_) | Error::Invalid(_) => 3,
            Error::NotFound { .. } => 4,
            Error::Library(_) => 5,
            Error::Io { .. } | Error::Internal(_) => 1,
        }
    }

    /// `{"error": {"kind", "message", "fields"}}`
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
                "fields": self.fields(),
            }
        })
    }

    /// Classifies a serde_json failure: broken syntax versus well-formed JSON
    /// of the wrong shape.
    pub fn from_json(err: serde_path_to_error::Error<serde_json::Error>) -> Self {
        use serde_json::error::Category;
        let path = err.path().to_string();
        let inner = err.into_inner();
        match inner.classify() {
            Category::Syntax | Category::Eof | Category::Io => Error::Syntax(inner.to_string()),
            Category::Data => {
                let field = if path == "." { String::new() } else { path };
                Error::invalid(field, strip_position(&inner.to_string()))
            }
        }
    }
}

fn strip_position(msg: &str) -> String {
    match msg.find(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Parses JSON, keeping the path of the offending field on shape errors.
pub fn parse_json<T: serde::de::DeserializeOwned>(bytes: &[u8]) -> Result<T> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let value = serde_path_to_error::deserialize(&mut de).map_err(Error::from_json)?;
    de.end().map_err(|e| Error::Syntax(e.to_string()))?;
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, serde::Deserialize)]
    #[allow(dead_code)]
    struct Probe {
        items: Vec<Item>,
    }

    #[derive(Debug, serde::Deserialize)]
    #[allow(dead_code)]
    struct Item {
        n: u32,
    }

    #[test]
    fn syntax_versus_shape() {
        assert!(matches!(parse_json::<Probe>(b"{\"items\": ["), Err(Error::Syntax(_))));
        assert!(matches!(parse_json::<Probe>(br#"{"items": []} x"#), Err(Error::Syntax(_))));
        match parse_json::<Probe>(br#"{"items": [{"n": 1}, {"n": "two"}]}"#) {
            Err(Error::Invalid(f)) => {
                assert_eq!(f[0].field, "items[1].n");
                assert!(!f[0].message.contains("line"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_envelope() {
        let e = Error::invalid("u", "must lie in [-1, 1]");
        let v = e.to_json();
        assert_eq!(v["error"]["kind"], "validation");
        assert_eq!(v["error"]["fields"][0]["field"], "u");
        assert_eq!(e.exit_code(), 3);
    }
}
