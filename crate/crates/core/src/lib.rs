pub mod bessel;
pub mod cli;
pub mod combinat;
pub mod families;
pub mod gauss;
pub mod operational;
pub mod polycore;
pub mod series;
pub mod verify;
