//! Champion trees, bootstrap resampling and selection of the BIC constant.

mod bootstrap;
mod champions;
mod renewal;
mod smc;

pub use bootstrap::{
    bootstrap_bivariate, bootstrap_blocks, bootstrap_parametric_ctm, BootstrapStrategy,
    StimulusResampler, STIMULUS_MODEL_C,
};
pub use champions::{champion_trees, ChampionChain, ChampionConfig};
pub use renewal::{renewal_blocks, renewal_point};
pub use smc::{smc_select, SmcConfig, SmcOutcome, LOG_FLOOR};
