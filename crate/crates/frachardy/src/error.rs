use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter is outside the admissible range of the requested formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// Gamma has poles at 0, -1, -2, ...
    #[error("gamma pole at non-positive integer x = {0}")]
    GammaPole(f64),

    /// Declared endpoint exponent at or below -1: the integral diverges.
    #[error("non-integrable endpoint exponent {exponent} (need > -1)")]
    NonIntegrable { exponent: f64 },

    /// Tail integrals need strictly super-linear decay.
    #[error("tail decay power {0} must be > 1")]
    TailDecay(f64),

    /// Rayleigh quotients are undefined for the zero profile.
    #[error("profile is identically zero")]
    ZeroProfile,

    #[error("invalid profile spec: {0}")]
    ProfileSpec(String),

    /// Derivative-free search found no admissible candidate.
    #[error("no feasible candidate in search")]
    Infeasible,
}

pub type Result<T> = std::result::Result<T, Error>;
