//! Shared pieces of the JSON document schemas.

pub const SCHEMA: &str = "osp-toda/1";
