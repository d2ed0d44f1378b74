//! Exact equivariant L-values for abelian fields over Q: generalized
//! Bernoulli numbers, Θ_S, δ_T and Θ_{S,T} at negative integers, the
//! cyclotomic tower and the truncated equivariant p-adic L-function.

pub mod bernoulli;
pub mod field;
pub mod theta;
pub mod tower;

pub use bernoulli::{bernoulli_numbers, bernoulli_polynomial, generalized_bernoulli, l_value_s, DirichletCharacter};
pub use field::{enumerate_fields, AbelianField};
pub use theta::{
    delta_t, e_n, integrality_check, partial_zeta_values, theta_s, theta_st, IntegralityReport, LValueElement,
};
pub use tower::{
    coherence_check, delta_series, delta_twist_identity, gamma_exponent, stickelberger_series, t_prime_data, tower_theta_st,
    CoherenceReport, StickelbergerSeries, TPrimeData, TwistIdentityReport,
};
