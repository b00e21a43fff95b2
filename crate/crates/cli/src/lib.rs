pub mod commands;
pub mod report;
pub mod suites;

/// Size the global rayon pool from `ALEVOL_THREADS`; unset or invalid values keep the default.
pub fn configure_threads() -> Option<usize> {
    let n: usize = std::env::var("ALEVOL_THREADS").ok()?.trim().parse().ok()?;
    if n == 0 {
        return None;
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .ok()?;
    Some(n)
}
