//! Floating-point work counter, active in debug builds only.
//!
//! Used to check that one solver iteration costs `O(nnz(W) + n²)`.

#[cfg(debug_assertions)]
thread_local! {
    static OPS: std::cell::Cell<u64> = const { std::cell::Cell::new(0) };
}

#[inline]
pub(crate) fn record(_count: u64) {
    #[cfg(debug_assertions)]
    OPS.with(|c| c.set(c.get() + _count));
}

/// Returns the count accumulated on this thread and resets it.
/// Always zero in release builds.
pub fn take() -> u64 {
    #[cfg(debug_assertions)]
    {
        OPS.with(|c| c.replace(0))
    }
    #[cfg(not(debug_assertions))]
    {
        0
    }
}
