/// Numerical thresholds shared by the dynamics and graph pipeline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Distance at which an orbit counts as having reached a fixed point.
    pub eps_fix: f64,
    /// Modulus beyond which an orbit counts as having escaped to infinity.
    pub escape_radius: f64,
    pub max_iterations: usize,
    /// Lifted vertices closer than this are the same vertex.
    pub merge: f64,
    /// Multiplier-law tolerance `|f'(x) - (m-1)/m|`.
    pub multiplier: f64,
    /// Distance from a critical orbit point to a non-trivial preimage of a
    /// fixed point that certifies an exact landing on the next step.
    pub landing: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_fix: 1e-9,
            escape_radius: 1e6,
            max_iterations: 10_000,
            merge: 1e-7,
            multiplier: 1e-9,
            landing: 1e-6,
        }
    }
}
