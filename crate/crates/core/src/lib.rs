pub mod graph;
pub mod kgroup;
pub mod perm;
pub mod symmetry;
pub mod voltage;
