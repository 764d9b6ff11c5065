pub mod exact;
pub mod freelie;
pub mod geometry;
pub mod connection;
pub mod liealg;
pub mod envelope;
pub mod forge;
pub mod cli;
