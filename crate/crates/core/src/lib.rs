// SPDX-License-Identifier: Apache-2.0

//! Exact fiber analysis for Cayley-Hamilton Hopf algebras over prime fields.

pub mod algebra;
pub mod analysis;
pub mod chtrace;
pub mod families;
pub mod field;
pub mod hopfsym;
pub mod matrix;
pub mod par;
pub mod poly;
pub mod presentation;
pub mod repmod;
