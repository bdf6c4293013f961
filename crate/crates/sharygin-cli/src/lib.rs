pub mod commands;
pub mod num;
pub mod scenario_file;
pub mod svg;
