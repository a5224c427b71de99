//! Asset library, spec formats, file store, rendering pipeline, HTTP service
//! and command line for panelforge.

pub mod assets;
pub mod cli;
pub mod codec;
pub mod config;
pub mod error;
pub mod lexicon;
pub mod pipeline;
pub mod service;
pub mod spec;
pub mod store;

pub use error::{Error, FieldError, Result};
pub use pipeline::Engine;
