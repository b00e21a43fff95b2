pub mod ehnum;
pub mod exactla;
pub mod gaugeclassify;
pub mod mckay;
pub mod ratpoly;
pub mod tensorcalc;
