//! Size caps that keep instances within memory.
//!
//! The active limits are fixed for the life of the process. They are read
//! from the environment on first use unless [`install`] is called earlier.

use std::sync::OnceLock;

/// Environment variable overriding [`Limits::dim_cap`].
pub const CAP_ENV: &str = "ORACLE_INFOLAB_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest density-matrix dimension any operation may produce.
    pub dim_cap: usize,
    /// Largest number of terms in a streamed multi-query spectrum.
    pub spectrum_cap: usize,
    /// Largest state dimension for the pre-query state search.
    pub search_cap: usize,
    /// Largest group order for which subgroup lattices are enumerated.
    pub subgroup_enumeration_cap: usize,
    pub dj_max_k: usize,
    pub bv_max_n: usize,
    pub simon_max_n: usize,
    pub phase_max_t: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            dim_cap: 1 << 12,
            spectrum_cap: 1 << 24,
            search_cap: 1 << 5,
            subgroup_enumeration_cap: 64,
            dj_max_k: 4,
            bv_max_n: 6,
            simon_max_n: 4,
            phase_max_t: 10,
        }
    }
}

impl Limits {
    /// Defaults with the dimension cap taken from `ORACLE_INFOLAB_CAP` when set.
    pub fn from_env() -> Self {
        let mut limits = Self::default();
        if let Some(cap) = std::env::var(CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&cap| cap > 0)
        {
            limits.dim_cap = cap;
        }
        limits
    }
}

static ACTIVE: OnceLock<Limits> = OnceLock::new();

/// The limits in force for this process.
pub fn current() -> Limits {
    *ACTIVE.get_or_init(Limits::from_env)
}

/// Fix the process-wide limits. Fails with the already-active value if
/// limits were installed or read before.
pub fn install(limits: Limits) -> Result<(), Limits> {
    ACTIVE.set(limits).map_err(|_| current())
}

pub(crate) fn check_dim(requested: usize) -> crate::Result<()> {
    let cap = current().dim_cap;
    if requested > cap {
        return Err(crate::Error::DimensionCap { requested, cap });
    }
    Ok(())
}
