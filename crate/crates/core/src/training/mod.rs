//! Evolution-strategies training of the branching policy.

mod adam;
mod episode;
mod es;
mod trainer;

pub use adam::{AdamState, ADAM_BETA1, ADAM_BETA2, ADAM_EPS};
pub use episode::{fitness, run_episode, EpisodeTrace};
pub use es::{es_gradient, rank_normalize};
pub use trainer::{EsConfig, IterationLog, Trainer};
