//! Curve tables: parsing, caching and filtering by bad primes.

pub mod dataset;
pub mod fetch;
pub mod record;

pub use dataset::{corollary_bound, curves_good_outside, gamma1_index, shafarevich_js, Dataset, SourceFile, SourceInfo};
pub use fetch::{bundled_dataset, fetch_tables, load_cache_prefix, TableSource, BUNDLED_MAX_CONDUCTOR, DATA_DIR_ENV, DEFAULT_BASE_URL};
pub use record::{parse_allcurves, parse_allcurves_str, serialize_allcurves, CurveRecord};
