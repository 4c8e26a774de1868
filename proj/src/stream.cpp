#include "bps/stream.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bps/error.hpp"

namespace bps {

std::vector<std::string> split_row(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == delimiter) {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

ColumnIndex resolve_columns(const std::vector<std::string>& header, const CsvSchema& schema) {
  ColumnIndex cols;
  auto find = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  };
  cols.case_idx = find(schema.case_column);
  cols.activity_idx = find(schema.activity_column);
  cols.timestamp_idx = find(schema.timestamp_column);
  cols.resource_idx = find(schema.resource_column);
  cols.start_idx = find(schema.start_column);
  if (cols.case_idx < 0) fail(ErrorCode::MissingColumn, "case column '" + schema.case_column + "'");
  if (cols.activity_idx < 0)
    fail(ErrorCode::MissingColumn, "activity column '" + schema.activity_column + "'");
  if (cols.timestamp_idx < 0)
    fail(ErrorCode::MissingColumn, "timestamp column '" + schema.timestamp_column + "'");
  for (std::size_t i = 0; i < header.size(); ++i) {
    int idx = static_cast<int>(i);
    if (idx == cols.case_idx || idx == cols.activity_idx || idx == cols.timestamp_idx ||
        idx == cols.resource_idx || idx == cols.start_idx) {
      continue;
    }
    cols.attribute_columns.emplace_back(idx, header[i]);
  }
  return cols;
}

namespace {

TimePoint parse_timestamp_field(const std::string& text, std::size_t line_no) {
  if (text.empty()) fail(ErrorCode::UnparseableTimestamp, "empty timestamp at line " + std::to_string(line_no));
  bool numeric = true;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (!(std::isdigit(static_cast<unsigned char>(c)) || (i == 0 && c == '-'))) {
      numeric = false;
      break;
    }
  }
  if (numeric) return std::stoll(text);
  try {
    return parse_iso8601(text);
  } catch (const BpsError&) {
    fail(ErrorCode::UnparseableTimestamp, "line " + std::to_string(line_no) + ": '" + text + "'");
  }
}

AttrValue parse_attr_value(const std::string& text) {
  if (text.empty()) return std::string{};
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end && *end == '\0' && end != text.c_str() && std::isfinite(v)) return v;
  return text;
}

}  // namespace

Event parse_event_record(const std::vector<std::string>& fields, const ColumnIndex& cols,
                         std::size_t line_no) {
  auto get = [&](int idx) -> const std::string& {
    static const std::string empty;
    if (idx < 0 || idx >= static_cast<int>(fields.size())) return empty;
    return fields[idx];
  };
  Event e;
  e.case_id = get(cols.case_idx);
  e.activity = get(cols.activity_idx);
  if (e.activity.empty())
    fail(ErrorCode::MissingColumn, "empty activity at line " + std::to_string(line_no));
  e.resource = get(cols.resource_idx);
  e.timestamp = parse_timestamp_field(get(cols.timestamp_idx), line_no);
  if (cols.start_idx >= 0 && !get(cols.start_idx).empty()) {
    e.start_ts = parse_timestamp_field(get(cols.start_idx), line_no);
  }
  for (const auto& [idx, name] : cols.attribute_columns) {
    const std::string& raw = get(idx);
    if (!raw.empty()) e.attributes.emplace_back(name, parse_attr_value(raw));
  }
  return e;
}

EventLog read_csv_log(const std::string& path, const CsvSchema& schema, TimePoint slack) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::EmptyInput, "no header row in '" + path + "'");
  ColumnIndex cols = resolve_columns(split_row(line, schema.delimiter), schema);
  EventLog log;
  std::size_t line_no = 1;
  TimePoint prev = std::numeric_limits<TimePoint>::min();
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Event e = parse_event_record(split_row(line, schema.delimiter), cols, line_no);
    if (!schema.allow_unsorted && e.timestamp + slack < prev) {
      fail(ErrorCode::OutOfOrderEvent,
           "line " + std::to_string(line_no) + " regresses by " + std::to_string(prev - e.timestamp) + "s");
    }
    prev = std::max(prev, e.timestamp);
    log.push_back(std::move(e));
  }
  if (schema.allow_unsorted) sort_log(log);
  return log;
}

namespace {

std::string xml_unescape(std::string s) {
  const std::pair<const char*, char> ents[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}};
  for (auto [ent, ch] : ents) {
    std::size_t pos = 0;
    std::string e(ent);
    while ((pos = s.find(e, pos)) != std::string::npos) {
      s.replace(pos, e.size(), 1, ch);
      ++pos;
    }
  }
  return s;
}

/// Pulls key="..." value="..." out of a single XES attribute tag.
bool tag_key_value(const std::string& tag, std::string& key, std::string& value) {
  auto grab = [&](const char* name, std::string& out) {
    std::string needle = std::string(name) + "=\"";
    std::size_t p = tag.find(needle);
    if (p == std::string::npos) return false;
    p += needle.size();
    std::size_t q = tag.find('"', p);
    if (q == std::string::npos) return false;
    out = xml_unescape(tag.substr(p, q - p));
    return true;
  };
  return grab("key", key) && grab("value", value);
}

}  // namespace

EventLog read_xes_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  EventLog log;
  std::size_t pos = 0;
  while (true) {
    std::size_t tstart = text.find("<trace", pos);
    if (tstart == std::string::npos) break;
    std::size_t tend = text.find("</trace>", tstart);
    if (tend == std::string::npos) break;
    pos = tend + 8;
    std::string trace_xml = text.substr(tstart, tend - tstart);

    std::string case_id;
    std::vector<Event> events;
    std::size_t ep = 0;
    std::size_t first_event = trace_xml.find("<event");
    // trace-level attributes come before the first event
    std::size_t scan = 0;
    while (true) {
      std::size_t a = trace_xml.find('<', scan);
      if (a == std::string::npos || (first_event != std::string::npos && a >= first_event)) break;
      std::size_t b = trace_xml.find('>', a);
      if (b == std::string::npos) break;
      std::string tag = trace_xml.substr(a, b - a + 1);
      scan = b + 1;
      std::string key, value;
      if (tag.rfind("<string", 0) == 0 && tag_key_value(tag, key, value) && key == "concept:name") {
        case_id = value;
      }
    }
    ep = first_event;
    while (ep != std::string::npos) {
      std::size_t eclose = trace_xml.find("</event>", ep);
      if (eclose == std::string::npos) break;
      std::string event_xml = trace_xml.substr(ep, eclose - ep);
      Event e;
      e.case_id = case_id;
      std::size_t sp = 0;
      while (true) {
        std::size_t a = event_xml.find('<', sp);
        if (a == std::string::npos) break;
        std::size_t b = event_xml.find('>', a);
        if (b == std::string::npos) break;
        std::string tag = event_xml.substr(a, b - a + 1);
        sp = b + 1;
        std::string key, value;
        if (!tag_key_value(tag, key, value)) continue;
        if (tag.rfind("<date", 0) == 0) {
          if (key == "time:timestamp") e.timestamp = parse_iso8601(value);
          else e.attributes.emplace_back(key, value);
        } else if (tag.rfind("<string", 0) == 0) {
          if (key == "concept:name") e.activity = value;
          else if (key == "org:resource") e.resource = value;
          else e.attributes.emplace_back(key, value);
        } else if (tag.rfind("<float", 0) == 0 || tag.rfind("<int", 0) == 0) {
          e.attributes.emplace_back(key, parse_attr_value(value));
        }
      }
      if (!e.activity.empty()) log.push_back(std::move(e));
      ep = trace_xml.find("<event", eclose);
    }
  }
  sort_log(log);
  return log;
}

void write_csv_log(const std::string& path, const EventLog& log) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  // union of attribute names, sorted for a stable header
  std::set<std::string> attr_names;
  for (const Event& e : log)
    for (const auto& [name, _] : e.attributes) attr_names.insert(name);
  out << "case_id,activity,resource,start_ts,end_ts";
  for (const auto& name : attr_names) out << ',' << name;
  out << '\n';
  for (const Event& e : log) {
    out << e.case_id << ',' << e.activity << ',' << e.resource << ',';
    if (e.has_start()) out << e.start_ts;
    out << ',' << e.timestamp;
    for (const auto& name : attr_names) {
      out << ',';
      for (const auto& [an, av] : e.attributes) {
        if (an != name) continue;
        if (std::holds_alternative<double>(av)) {
          char buf[32];
          std::snprintf(buf, sizeof(buf), "%.6g", std::get<double>(av));
          out << buf;
        } else {
          out << std::get<std::string>(av);
        }
        break;
      }
    }
    out << '\n';
  }
}

StreamWindow collect_window(const EventLog& stream, TimePoint w, TimePoint t, TimePoint slack) {
  if (w <= 0) fail(ErrorCode::EmptyInput, "window size must be positive");
  StreamWindow win;
  win.start = t - w;
  win.end = t;
  TimePoint prev = std::numeric_limits<TimePoint>::min();
  for (const Event& e : stream) {
    if (prev != std::numeric_limits<TimePoint>::min() && e.timestamp + slack < prev) {
      fail(ErrorCode::OutOfOrderEvent, "timestamp regressed from " + std::to_string(prev) + " to " +
                                           std::to_string(e.timestamp));
    }
    prev = std::max(prev, e.timestamp);
    if (e.timestamp >= win.start && e.timestamp <= win.end) win.events.push_back(e);
  }
  std::stable_sort(win.events.begin(), win.events.end(), [](const Event& a, const Event& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.case_id < b.case_id;
  });
  return win;
}

std::vector<TimePoint> partition_into_windows(TimePoint min_ts, TimePoint max_ts, int k) {
  if (k < 1) fail(ErrorCode::EmptyInput, "k must be >= 1");
  if (max_ts <= min_ts) fail(ErrorCode::SpanTooShort, "empty span");
  std::int64_t span = max_ts - min_ts;
  std::int64_t weeks = (span + kSecondsPerWeek - 1) / kSecondsPerWeek;
  if (weeks < k) {
    fail(ErrorCode::SpanTooShort,
         std::to_string(weeks) + " whole weeks < " + std::to_string(k) + " windows");
  }
  std::int64_t q = weeks / k;
  std::int64_t r = weeks % k;  // remainder weeks go to the earliest windows
  std::vector<TimePoint> bounds;
  bounds.reserve(k + 1);
  bounds.push_back(min_ts);
  std::int64_t cum = 0;
  for (int i = 0; i < k; ++i) {
    cum += q + (i < r ? 1 : 0);
    bounds.push_back(std::min<TimePoint>(min_ts + cum * kSecondsPerWeek, max_ts));
  }
  bounds.back() = max_ts;
  return bounds;
}

std::vector<EventLog> tile_events(const EventLog& log, const std::vector<TimePoint>& boundaries) {
  std::vector<EventLog> windows(boundaries.size() - 1);
  for (const Event& e : log) {
    for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
      bool in = i == 0 ? (e.timestamp >= boundaries[0] && e.timestamp <= boundaries[1])
                       : (e.timestamp > boundaries[i] && e.timestamp <= boundaries[i + 1]);
      if (in) {
        windows[i].push_back(e);
        break;
      }
    }
  }
  return windows;
}

StreamWindow window_slice(const EventLog& events, TimePoint start, TimePoint end) {
  StreamWindow win;
  win.start = start;
  win.end = end;
  win.events = events;
  return win;
}

const char* to_string(FragmentKind k) {
  switch (k) {
    case FragmentKind::Complete: return "complete";
    case FragmentKind::Prefix: return "prefix";
    case FragmentKind::Infix: return "infix";
    case FragmentKind::Postfix: return "postfix";
  }
  return "?";
}

std::vector<TraceFragment> assemble_fragments(const StreamWindow& window,
                                              const CompletionPolicy& policy, CaseLedger& ledger) {
  if (!policy.valid()) fail(ErrorCode::EmptyInput, "completion policy needs end activities or timeout");

  std::map<std::string, std::vector<Event>> by_case;
  for (const Event& e : window.events) by_case[e.case_id].push_back(e);

  std::vector<TraceFragment> fragments;
  fragments.reserve(by_case.size());
  for (auto& [case_id, events] : by_case) {
    std::stable_sort(events.begin(), events.end(),
                     [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
    bool started_earlier = ledger.open_cases.count(case_id) > 0;
    TimePoint last_ts = events.back().timestamp;
    bool ended = policy.end_activities.count(events.back().activity) > 0;
    if (!ended && policy.timeout && window.end - last_ts >= *policy.timeout) ended = true;

    TraceFragment frag;
    frag.case_id = case_id;
    frag.events = events;
    frag.kind = started_earlier ? (ended ? FragmentKind::Postfix : FragmentKind::Infix)
                                : (ended ? FragmentKind::Complete : FragmentKind::Prefix);
    fragments.push_back(std::move(frag));

    if (ended) {
      ledger.open_cases.erase(case_id);
    } else {
      auto& state = ledger.open_cases[case_id];
      if (!started_earlier) state.first_seen = events.front().timestamp;
      state.last_seen = last_ts;
    }
  }

  // Cases absent from this window whose timeout has elapsed are done; drop
  // them so the ledger stays bounded. Classification is never retracted.
  if (policy.timeout) {
    for (auto it = ledger.open_cases.begin(); it != ledger.open_cases.end();) {
      if (by_case.count(it->first) == 0 && window.end - it->second.last_seen >= *policy.timeout) {
        ++ledger.expired_cases;
        it = ledger.open_cases.erase(it);
      } else {
        ++it;
      }
    }
  }
  return fragments;
}

TraceLog extract_complete_traces(const EventLog& events, const CompletionPolicy& policy,
                                 TimePoint up_to) {
  TraceLog all = group_by_case(events);
  TraceLog complete;
  for (Trace& tr : all) {
    bool ended = policy.end_activities.count(tr.events.back().activity) > 0;
    if (!ended && policy.timeout && up_to - tr.events.back().timestamp >= *policy.timeout)
      ended = true;
    if (ended) complete.push_back(std::move(tr));
  }
  return complete;
}

TraceLog complete_traces_starting_in(const EventLog& whole_log, const CompletionPolicy& policy,
                                     TimePoint from, TimePoint to, bool first_window) {
  TimePoint log_end = 0;
  for (const Event& e : whole_log) log_end = std::max(log_end, e.timestamp);
  TraceLog complete = extract_complete_traces(whole_log, policy, log_end);
  TraceLog out;
  for (Trace& tr : complete) {
    TimePoint t0 = tr.events.front().timestamp;
    bool in = first_window ? (t0 >= from && t0 <= to) : (t0 > from && t0 <= to);
    if (in) out.push_back(std::move(tr));
  }
  return out;
}

}  // namespace bps
