pub mod candidates;
pub mod pgm;
