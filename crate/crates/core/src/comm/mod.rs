//! Quantum communication protocols.

mod bb84;
mod cloning;
mod repeater;
mod teleport;

pub use bb84::{bb84_run, Bb84Config, ChannelModel, Eavesdropper, KeyStats};
pub use cloning::{clone_attempt, CloneResult};
pub use repeater::{expected_slots_per_success, repeater_rate, RepeaterConfig, RepeaterReport};
pub use teleport::{teleport, teleport_branches, Pauli, TeleportOutcome};
