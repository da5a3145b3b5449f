//! Command implementations behind the `qkit` binary.

pub mod carrier;
pub mod compress;
pub mod metrics;
pub mod morph;
pub mod pgm;
pub mod suites;
