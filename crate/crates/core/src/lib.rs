//! Optimal lockdown planning for an SIR epidemic, population-ethics welfare
//! orders, and the sensitivity of the planner to the welfare criterion that
//! prices a death.

pub mod commands;
pub mod config;
pub mod epidemic;
pub mod error;
pub mod ethics;
pub mod output;
pub mod planner;
pub mod sensitivity;

pub use error::{Error, Result};
