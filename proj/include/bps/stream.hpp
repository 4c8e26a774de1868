#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bps/event.hpp"

namespace bps {

// ---- ingestion -------------------------------------------------------------

/// Column mapping for delimited logs. Columns are named; indices are resolved
/// against the header row. Unmapped columns become event attributes.
struct CsvSchema {
  char delimiter = ',';
  std::string case_column = "case_id";
  std::string activity_column = "activity";
  std::string timestamp_column = "end_ts";
  std::string resource_column = "resource";  // optional, may be absent from file
  std::string start_column = "start_ts";     // optional
  bool allow_unsorted = false;  // sort on load instead of rejecting disorder
};

/// Resolved positional mapping (indices into a split row).
struct ColumnIndex {
  int case_idx = -1;
  int activity_idx = -1;
  int timestamp_idx = -1;
  int resource_idx = -1;  // -1 = absent
  int start_idx = -1;
  std::vector<std::pair<int, std::string>> attribute_columns;  // (index, name)
};

std::vector<std::string> split_row(const std::string& line, char delimiter);

/// Resolves schema column names against a header row. Throws MissingColumn
/// when a required column is not present.
ColumnIndex resolve_columns(const std::vector<std::string>& header, const CsvSchema& schema);

/// Parses one delimited row into an Event. Timestamps are ISO-8601 or
/// integer epoch seconds. `line_no` is used in error messages only.
Event parse_event_record(const std::vector<std::string>& fields, const ColumnIndex& cols,
                         std::size_t line_no);

/// Reads a whole delimited log. Row order is treated as stream order and
/// must be timestamp-monotone (within `slack` seconds) unless the schema
/// opts into sorting on load.
EventLog read_csv_log(const std::string& path, const CsvSchema& schema, TimePoint slack = 0);

/// Minimal XES reader: string/date attributes on events, traces grouped by
/// concept:name. Events are merged into one time-ordered stream.
EventLog read_xes_log(const std::string& path);

void write_csv_log(const std::string& path, const EventLog& log);

// ---- sliding windows -------------------------------------------------------

struct StreamWindow {
  TimePoint start = 0;  // t - w
  TimePoint end = 0;    // t
  EventLog events;      // time-ordered, within [start, end]
};

/// All events with timestamp in [t-w, t], both ends inclusive. The source
/// must be timestamp-ordered; a regression beyond `slack` raises
/// OutOfOrderEvent.
StreamWindow collect_window(const EventLog& stream, TimePoint w, TimePoint t, TimePoint slack = 0);

/// k+1 boundaries splitting [min_ts, max_ts] into k windows of whole weeks.
/// The week count is split into k near-equal runs, remainder weeks going to
/// the earliest windows; the last boundary is clamped to max_ts.
std::vector<TimePoint> partition_into_windows(TimePoint min_ts, TimePoint max_ts, int k);

/// Assigns every event to exactly one window: the first window is closed on
/// both ends, later ones are (prev, bound]; an event on a shared boundary
/// belongs to the earlier window.
std::vector<EventLog> tile_events(const EventLog& log, const std::vector<TimePoint>& boundaries);

StreamWindow window_slice(const EventLog& events, TimePoint start, TimePoint end);

// ---- trace fragments -------------------------------------------------------

enum class FragmentKind { Complete, Prefix, Infix, Postfix };

const char* to_string(FragmentKind k);

struct TraceFragment {
  std::string case_id;
  std::vector<Event> events;  // time-ordered, same case
  FragmentKind kind = FragmentKind::Complete;

  std::vector<std::string> activities() const {
    std::vector<std::string> seq;
    seq.reserve(events.size());
    for (const Event& e : events) seq.push_back(e.activity);
    return seq;
  }
};

/// Domain knowledge for deciding case completion: a set of final activities
/// and/or an inactivity timeout. At least one must be set.
struct CompletionPolicy {
  std::set<std::string> end_activities;
  std::optional<TimePoint> timeout;

  bool valid() const { return !end_activities.empty() || timeout.has_value(); }
  static CompletionPolicy defaults() { return {{}, TimePoint{30} * kSecondsPerDay}; }
};

/// Carryover state for cases that span window boundaries. Entries are pruned
/// as soon as a case is classified complete.
struct CaseLedger {
  struct CaseState {
    TimePoint first_seen = 0;
    TimePoint last_seen = 0;
  };
  std::map<std::string, CaseState> open_cases;
  std::int64_t expired_cases = 0;  // timed out without reappearing
};

/// One fragment per case appearing in the window, classified against the
/// ledger and completion policy; the ledger is updated in place.
std::vector<TraceFragment> assemble_fragments(const StreamWindow& window,
                                              const CompletionPolicy& policy, CaseLedger& ledger);

// ---- whole-log trace extraction (batch paths) -------------------------------

/// Complete traces among `events`, judged at observation horizon `up_to`:
/// a case is complete when its last activity is an end activity or when the
/// timeout has elapsed by `up_to`.
TraceLog extract_complete_traces(const EventLog& events, const CompletionPolicy& policy,
                                 TimePoint up_to);

/// Complete traces (w.r.t. the whole log) whose first event falls in
/// (from, to]; `first_window` widens the interval to [from, to].
TraceLog complete_traces_starting_in(const EventLog& whole_log, const CompletionPolicy& policy,
                                     TimePoint from, TimePoint to, bool first_window = false);

}  // namespace bps
