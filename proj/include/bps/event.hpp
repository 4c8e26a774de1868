#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace bps {

/// Epoch seconds, UTC. Sub-second precision is truncated on ingestion.
using TimePoint = std::int64_t;

constexpr TimePoint kSecondsPerHour = 3600;
constexpr TimePoint kSecondsPerDay = 86400;
constexpr TimePoint kSecondsPerWeek = 604800;

/// Attribute values are either categorical strings or finite reals.
using AttrValue = std::variant<std::string, double>;

struct Event {
  std::string case_id;
  std::string activity;
  std::string resource;  // may be empty
  TimePoint timestamp = 0;  // completion time
  TimePoint start_ts = -1;  // optional activity start; -1 = unknown
  std::vector<std::pair<std::string, AttrValue>> attributes;

  bool has_start() const { return start_ts >= 0; }
};

/// Timestamp-ordered flat sequence of events, possibly many cases interleaved.
using EventLog = std::vector<Event>;

struct Trace {
  std::string case_id;
  std::vector<Event> events;  // time-ordered

  TimePoint start_time() const {
    if (events.empty()) return 0;
    return events.front().has_start() ? events.front().start_ts : events.front().timestamp;
  }
  TimePoint end_time() const { return events.empty() ? 0 : events.back().timestamp; }
};

using TraceLog = std::vector<Trace>;

// ---- calendar arithmetic -------------------------------------------------

/// Days since 1970-01-01 for a proleptic Gregorian date (Hinnant's algorithm).
std::int64_t days_from_civil(int year, unsigned month, unsigned day);
void civil_from_days(std::int64_t days, int& year, unsigned& month, unsigned& day);

/// Parses ISO-8601 timestamps ("2024-01-01T09:00:00Z", offsets, optional
/// fractional seconds) into epoch seconds. Throws UnparseableTimestamp.
TimePoint parse_iso8601(const std::string& text);

std::string format_iso8601(TimePoint t);

/// Day of week with Monday = 0.
int day_of_week(TimePoint t);

/// Hour-of-week slot in [0, 168), Monday 00:00 = slot 0.
int hour_of_week(TimePoint t);

// ---- log helpers ---------------------------------------------------------

/// Groups a time-ordered event log into per-case traces, ordered by first
/// event (ties by case id). Events within a trace keep their time order.
TraceLog group_by_case(const EventLog& log);

/// Stable sort by (timestamp, case_id), keeping ingestion order within ties.
void sort_log(EventLog& log);

std::vector<std::vector<std::string>> activity_sequences(const TraceLog& traces);

}  // namespace bps
