pub mod ccm;
pub mod geometry;
pub mod io;
pub mod query;
pub mod stratification;
pub mod synth;
pub mod topology;
