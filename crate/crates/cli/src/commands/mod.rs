pub mod bounds;
pub mod construct;
pub mod exact;
pub mod mcvol;
pub mod verify;
