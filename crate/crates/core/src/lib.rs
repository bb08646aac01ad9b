pub mod cli;
pub mod error;
pub mod format;
pub mod fourier;
pub mod index_set;
pub mod lattice;
pub mod oracles;
pub mod quantum;
pub mod randomized;
pub mod selftest;
pub mod space;
pub mod special;
pub mod stats;
pub mod tractability;
