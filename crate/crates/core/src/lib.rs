pub mod complex;
pub mod covering;
pub mod format;
pub mod frobenius;
pub mod gcover;
pub mod group;
pub mod lab;
pub mod linalg;
pub mod perm;
