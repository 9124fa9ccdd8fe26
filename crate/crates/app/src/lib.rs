//! Command line and HTTP front end for `logiclab-core`. Both surfaces share
//! the request types and handlers in [`api`], so `logiclab --json <cmd>`
//! prints exactly the `result` field of the matching `POST /api/<endpoint>`.

pub mod api;
mod cli;
mod error;
mod render;
pub mod server;

pub use api::dispatch;
pub use cli::{run_cli, CliOutput};
pub use error::{ApiError, ErrorCode};
