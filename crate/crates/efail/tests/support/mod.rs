#![allow(dead_code)]
pub mod cbc;
