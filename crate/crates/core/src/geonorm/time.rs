use chrono::{DateTime, Datelike, Timelike, Weekday};

use super::gazetteer::Gazetteer;

/// Author-local wall-clock fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalTime {
    /// 0-23
    pub hour: u32,
    pub weekday: Weekday,
    /// 1-12
    pub month: u32,
}

/// UTC seconds shifted by a fixed offset in minutes. No DST.
pub fn local_time_at_offset(created_at: i64, offset_minutes: i32) -> Option<LocalTime> {
    let shifted = created_at.checked_add(i64::from(offset_minutes) * 60)?;
    let dt = DateTime::from_timestamp(shifted, 0)?;
    Some(LocalTime {
        hour: dt.hour(),
        weekday: dt.weekday(),
        month: dt.month(),
    })
}

/// Local time for a timezone name from the gazetteer's offset table; `None`
/// when the name is unknown.
pub fn local_time(created_at: i64, timezone: &str, gaz: &Gazetteer) -> Option<LocalTime> {
    local_time_at_offset(created_at, gaz.tz_offset(timezone)?)
}
