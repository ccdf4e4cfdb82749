//! Exact state-vector simulation of the quantum Game of Life spin chain.
//!
//! The chain evolves under the F12-rule Hamiltonian: a bulk site flips
//! coherently whenever two or three of its nearest and next-nearest
//! neighbours are alive. The crate builds that Hamiltonian, integrates the
//! Schrödinger equation from Fock states, runs the classical automaton side
//! by side, and measures local patterns, entanglement and mutual-information
//! networks along the way.
//!
//! ```
//! use qgol::{build_hamiltonian, evolve_rk4, make_fock_state, local_population, SpinConfig};
//!
//! let blinker: SpinConfig = "00001010000".parse()?;
//! let h = build_hamiltonian(blinker.len())?;
//! let traj = evolve_rk4(&h, &make_fock_state(&blinker)?, 1.0, 0.01, 50)?;
//! let n = local_population(traj.snapshots[2].amplitudes())?;
//! assert!(n.values()[5] > 0.0);
//! # Ok::<(), qgol::Error>(())
//! ```

pub mod circulant;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod hamiltonian;
pub mod lattice;
pub mod network;
pub mod observables;
pub mod quantum_info;

pub use circulant::{
    commensurability_check, find_classical_cycle, ring_eigensystem, ring_evolution, ClassicalCycle,
    CommensurabilityReport, RingModel,
};
pub use dynamics::{
    classical_f12_step, classical_trajectory, evolve_exact, evolve_fock_rk4_with, evolve_rk4,
    evolve_rk4_with, stroboscopic_quantum, ClassicalTrajectory, Rk4Options, Trajectory,
};
pub use error::{Error, Result};
pub use hamiltonian::{
    alive_neighbors, apply_hamiltonian, build_hamiltonian, Operator, SectorHamiltonian,
    SparseHamiltonian,
};
pub use lattice::{fock_index, make_fock_state, norm, overlap, SpinConfig, StateVector};
pub use network::{disparity, network_clustering, network_density};
pub use observables::{
    alive_cluster_function, dead_cluster_function, density, discretize, diversity,
    improved_diversity, local_population, DiscretizedProfile, PopulationProfile,
};
pub use quantum_info::{
    average_concurrence, bond_entropy, concurrence, mutual_information_matrix,
    reduced_density_matrix, single_site_entropies, two_site_entropy, von_neumann_entropy,
    DensityMatrix, MIMatrix,
};
