//! Fox–Li style cavity modes with a dielectric membrane at the centre.

pub mod field;
pub mod optics;
pub mod qdht;
pub mod recoil;
pub mod solver;

pub use field::{fresnel, propagate, qdht, Direction, Domain, FieldProfile};
pub use optics::{mirror_reflect, sheet_scatter, slab_amplitudes, Mirror};
pub use qdht::{HankelGrid, DEFAULT_HANKEL_POINTS};
pub use recoil::{coherence_budget, n_osc_total, recoil_n_osc, recoil_n_osc_momentum, CoherenceBudget, RecoilInput};
pub use solver::{
    build_pass_operator, mode_volume, solve_cavity_mode, solve_default, CavityModeResult, CavitySetup, Membrane,
    ModeVolume, SolverOptions,
};
