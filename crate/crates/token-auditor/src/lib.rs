pub mod classify;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod detect;
pub mod evm;
pub mod sim;
pub mod solidity;
