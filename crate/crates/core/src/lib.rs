pub mod arith;
pub mod character;
pub mod cli;
pub mod config;
pub mod engine;
pub mod fixtures;
pub mod group;
pub mod levels;
pub mod report;
pub mod root;
pub mod schema;
pub mod twists;
