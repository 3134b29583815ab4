pub mod complex;
pub mod elliptic;
pub mod equations;
pub mod mobius;
pub mod poly;
pub mod taylor;
pub mod schwarzian;
pub mod solution;
pub mod verify;
pub mod solver;
pub mod cli;
pub mod acceptance;
