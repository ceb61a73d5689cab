pub mod checker;
pub mod context;
pub mod interp;
pub mod opm;
pub mod regex;
pub mod surface;
pub mod term;
