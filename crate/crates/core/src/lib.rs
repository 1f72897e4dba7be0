// SPDX-License-Identifier: Apache-2.0

pub mod cli;
pub mod cnf;
pub mod encode;
pub mod gates;
pub mod reversible;
pub mod ring;
pub mod search;
pub mod solve;
pub mod target;
pub mod verify;
