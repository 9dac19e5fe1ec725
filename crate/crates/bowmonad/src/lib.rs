#![doc = include_str!("../README.md")]

pub mod caloron;
pub mod cli;
pub mod commands;
pub mod diraclattice;
pub mod io;
pub mod monadcore;
pub mod nahmbow;
pub mod numkit;
pub mod report;
pub mod taubnut;
