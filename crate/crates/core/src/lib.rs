pub mod cli;
pub mod corpus;
pub mod embedding;
pub mod henkin;
pub mod kernel;
pub mod semantics;
pub mod sweep;
pub mod syntax;
pub mod thf;
mod util;
