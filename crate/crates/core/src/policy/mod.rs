//! The learned branching policy: incidence graph construction, GIN message
//! passing, literal scoring, and parameter (de)serialization.

mod gnn;
mod lig;
mod mlp;
mod paramfile;
mod params;

pub use gnn::{build_features, gnn_forward, select_literal, GnnPolicy, LigFeatures};
pub use lig::{build_lig, Lig};
pub use mlp::{gin_aggregate, Layer, Mlp};
pub use paramfile::{
    load_params, read_params, save_params, write_params, ParamFileError, PARAM_MAGIC,
    PARAM_VERSION,
};
pub use params::{
    PolicyConfig, PolicyError, PolicyParams, RoundParams, DECISION_HIDDEN1, DECISION_HIDDEN2,
    EMBED_DIM, MSG_HIDDEN, SCORE_HIDDEN,
};
