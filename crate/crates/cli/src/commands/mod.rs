pub mod bench;
pub mod export;
pub mod gen;
pub mod solve;
pub mod verify;
