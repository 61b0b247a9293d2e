pub mod element;
pub mod error;
pub mod operator;
pub mod projection;
pub mod pwl;
pub mod random;
pub mod rational;
pub mod report;
pub mod calculus;
pub mod band;
pub mod lateral;
pub mod scenario;
pub mod suite;
