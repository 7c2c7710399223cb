//! Caps for the exponential brute-force routines.
//!
//! Every cap is multiplied by the integer in `HCTK_SCALE_OVERRIDE` when that
//! variable is set (for example `HCTK_SCALE_OVERRIDE=4`).

use crate::error::{Error, Result};
use std::sync::OnceLock;

pub const MINOR_CLASSES: usize = 16;
pub const BALL_HELLY_VERTICES: usize = 60;
pub const AUTOMORPHISM_VERTICES: usize = 30;
pub const CONVEXITY_NUMBER_VERTICES: usize = 12;
pub const CATALOG_LAMBDA: usize = 4;
pub const CANONICAL_CLASSES: usize = 16;
pub const APICULATE_VERTICES: usize = 200;
pub const AXIOM_VERTICES: usize = 60;

fn factor() -> usize {
    static F: OnceLock<usize> = OnceLock::new();
    *F.get_or_init(|| {
        std::env::var("HCTK_SCALE_OVERRIDE")
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&f| f >= 1)
            .unwrap_or(1)
    })
}

/// The effective cap for a base limit.
pub fn cap(base: usize) -> usize {
    base.saturating_mul(factor())
}

pub fn check(what: &'static str, actual: usize, base: usize) -> Result<()> {
    let limit = cap(base);
    if actual > limit {
        Err(Error::ScaleExceeded {
            what,
            actual,
            limit,
        })
    } else {
        Ok(())
    }
}
