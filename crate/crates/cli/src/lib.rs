pub mod expr;
pub mod json;
pub mod suites;
