//! JSON documents, command line and HTTP service over `qmut-core`.

#![allow(clippy::result_large_err)]

pub mod doc;
pub mod error;
pub mod ops;
pub mod service;

pub use doc::Document;
pub use error::ApiError;
