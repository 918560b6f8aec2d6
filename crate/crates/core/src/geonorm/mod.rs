//! Location normalization against a shipped gazetteer, Census regions and
//! author-local time.

mod gazetteer;
mod normalize;
mod time;

pub use gazetteer::{CityEntry, Gazetteer, NormalizedLocation, Region};
pub use normalize::normalize_location;
pub use time::{local_time, local_time_at_offset, LocalTime};

/// Census region of a USPS state code.
pub fn region_of(state: &str, gaz: &Gazetteer) -> crate::Result<Region> {
    gaz.region_of(state)
}
