//! File formats and shared helpers behind the `moment` binary.

pub mod format;
