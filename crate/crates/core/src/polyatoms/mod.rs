//! Power means, moment equations, the `V`/`M`/`U` construction, atom
//! polynomials with their certificates, and bounded preimage search.

mod certificate;
mod matrices;
mod moments;
mod powermean;
mod search;

pub use certificate::{atom_certificate, default_schedule, verify_certificate, Certificate, CheckResult, VerifyReport};
pub use matrices::{atom_polynomial, m_mat, u_vec, v_vec};
pub use moments::{moment_check, MomentInstance, MomentVerdict};
pub use powermean::{compare_power_means, power_mean, power_mean_exact};
pub use search::{search_weighted_preimage, SearchBounds, SearchOutcome};
