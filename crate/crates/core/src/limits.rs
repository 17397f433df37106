use serde::{Deserialize, Serialize};

/// Bounds for the exponential code paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Limits {
    /// Largest number of non-sink vertices for the ≺ subset scan behind ψ and φ.
    pub general_vertex_cap: usize,
    /// Largest `m + n` accepted by polyomino and pattern enumeration.
    pub enumeration_sum_cap: usize,
    /// Largest `m + n` accepted by the exhaustive cyclic-lemma check.
    pub cyclic_sum_cap: usize,
    /// Worker threads for enumeration; `None` means the rayon default.
    pub threads: Option<usize>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            general_vertex_cap: 20,
            enumeration_sum_cap: 14,
            cyclic_sum_cap: 10,
            threads: None,
        }
    }
}
