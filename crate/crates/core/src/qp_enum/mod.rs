//! Quasi-particle monomials, difference conditions and basis enumeration.

pub mod census;
pub mod conditions;
pub mod configs;
pub mod dual;
pub mod monomial;
pub mod uvjet;
pub mod weight;

pub use census::{
    census_to_series, config_energy_profile, enumerate_census, enumerate_census_with, for_each_monomial,
    list_monomials, sort_monomials, Census, Listing, DEFAULT_LIST_GUARD,
};
pub use conditions::{c1_satisfied, c2_bound, c3_satisfied, satisfies_all};
pub use configs::{ConfigView, EnergyForm};
pub use dual::{charge_to_dual, dual_to_charge, DualChargeCounts};
pub use monomial::{compare_monomials, ChargeType, QPMonomial, QuasiParticle};
pub use uvjet::check_uvjet;
pub use weight::{Partner, WeightSpec};
