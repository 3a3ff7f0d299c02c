//! Distances between empirical laws, rate sequences and hypothesis checks.

mod assumptions;
mod distance;
mod empirical;
mod rates;

pub use assumptions::{check_assumptions, AssumptionReport, Reduction};
pub use distance::{
    dkw_band, ks_distance, ky_fan_quantile, levy_distance, levy_feasible, prokhorov_bounds,
};
pub use empirical::{DistMeta, EmpiricalDist};
pub use rates::{
    fit_rate, reference_a, theoretical_rates, RateFit, RateRow, RateSchedule, ScheduleDescriptor,
    Term,
};
