pub mod estimate;
pub mod ingest;
pub mod report;
pub mod simulate;
pub mod synthesize;
