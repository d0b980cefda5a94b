//! Everything around the model that needs an operating system.
//!
//! * [`io`]: trajectory files with a checksummed sidecar manifest.
//! * [`runconfig`]: run and campaign configuration files with `key=value` overrides.
//! * [`ensemble`]: seeded Monte Carlo campaigns on a worker pool, resumable,
//!   and the hold-wind / hold-wave counterfactual harness.
//! * [`analysis`]: densities, extremes, percentile bands, spectra, binned
//!   scatter, anomaly events and extreme collocation.
//! * [`tuning`]: closed-loop experiments for the gain-tuning procedures.
//!
//! The `fowt` binary wires these together.

pub mod analysis;
pub mod ensemble;
pub mod io;
pub mod runconfig;
pub mod tuning;

mod error;

pub use error::{ExitClass, LabError};

/// Shipped parameters and rotor tables, parsed.
pub fn reference_model() -> Result<ensemble::Model, LabError> {
    use fowt_core::data;
    use fowt_core::params::{load_parameters, load_surface, SurfaceKind};
    Ok(ensemble::Model {
        params: load_parameters(data::NREL_5MW_TLP)?,
        power: load_surface(data::CP_5MW_LIKE, SurfaceKind::Power)?,
        thrust: load_surface(data::CT_5MW_LIKE, SurfaceKind::Thrust)?,
    })
}
