pub mod coeff_file;
pub mod commands;
pub mod curve;
pub mod error;
