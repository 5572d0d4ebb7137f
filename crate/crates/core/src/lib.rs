pub mod balls;
pub mod complex;
pub mod exactnum;
pub mod expansion;
pub mod generators;
pub mod geodesics;
pub mod planar;
