pub mod growth;
pub mod ratio;
pub mod table;

pub use growth::{fit_slope, growth_estimates, Estimate, GrowthEstimate};
pub use ratio::{ratio_checks, RatioReport, RatioRow};
pub use table::{characteristic_table, default_grid, log_grid, proximity, Counts, Inventory, NevRow, NevTable, QuadOptions};
