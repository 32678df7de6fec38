pub mod algebra;
pub mod clone;
pub mod corpus;
pub mod fincat;
pub mod format;
pub mod report;
pub mod term;
pub mod tuples;
pub mod varcat;
