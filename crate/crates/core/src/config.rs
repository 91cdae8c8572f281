//! Size limits shared by the enumeration-based computations.

/// Environment variable overriding the enumeration cap.
pub const CAP_ENV: &str = "HERMPIC_CAP";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest finite ring (in elements) that may be enumerated.
    pub cap: u64,
    /// Largest `|D|` accepted by the class group routines.
    pub disc_bound: i64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            cap: 1 << 20,
            disc_bound: 1_000_000,
        }
    }
}

impl Limits {
    /// Defaults, with the cap taken from `HERMPIC_CAP` when it parses.
    pub fn from_env() -> Self {
        let mut limits = Self::default();
        if let Some(cap) = std::env::var(CAP_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            limits.cap = cap;
        }
        limits
    }
}
