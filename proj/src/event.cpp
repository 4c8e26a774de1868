#include "bps/event.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>

#include "bps/error.hpp"

namespace bps {

std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, unsigned& month, unsigned& day) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  day = doy - (153 * mp + 2) / 5 + 1;
  month = mp + (mp < 10 ? 3 : -9);
  year = static_cast<int>(y + (month <= 2));
}

namespace {

bool parse_int(const std::string& s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (std::size_t i = 0; i < len; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

}  // namespace

TimePoint parse_iso8601(const std::string& text) {
  // YYYY-MM-DD[T ]HH:MM[:SS[.frac]][Z|+HH:MM|-HH:MM|+HHMM|-HHMM]
  int year, month, day, hour, minute, second = 0;
  if (!parse_int(text, 0, 4, year) || text.size() < 10 || text[4] != '-' || text[7] != '-' ||
      !parse_int(text, 5, 2, month) || !parse_int(text, 8, 2, day)) {
    fail(ErrorCode::UnparseableTimestamp, "bad date in '" + text + "'");
  }
  std::size_t pos = 10;
  hour = minute = 0;
  if (pos < text.size() && (text[pos] == 'T' || text[pos] == ' ')) {
    ++pos;
    if (!parse_int(text, pos, 2, hour) || pos + 4 >= text.size() + 1 || text[pos + 2] != ':' ||
        !parse_int(text, pos + 3, 2, minute)) {
      fail(ErrorCode::UnparseableTimestamp, "bad time in '" + text + "'");
    }
    pos += 5;
    if (pos < text.size() && text[pos] == ':') {
      if (!parse_int(text, pos + 1, 2, second)) {
        fail(ErrorCode::UnparseableTimestamp, "bad seconds in '" + text + "'");
      }
      pos += 3;
    }
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;  // truncated
    }
  }
  std::int64_t offset = 0;
  if (pos < text.size()) {
    char sign = text[pos];
    if (sign == 'Z') {
      ++pos;
    } else if (sign == '+' || sign == '-') {
      int oh = 0, om = 0;
      ++pos;
      if (!parse_int(text, pos, 2, oh)) fail(ErrorCode::UnparseableTimestamp, "bad zone in '" + text + "'");
      pos += 2;
      if (pos < text.size() && text[pos] == ':') ++pos;
      if (pos + 2 <= text.size() && parse_int(text, pos, 2, om)) pos += 2;
      offset = static_cast<std::int64_t>(oh) * 3600 + om * 60;
      if (sign == '-') offset = -offset;
    }
  }
  if (pos != text.size()) fail(ErrorCode::UnparseableTimestamp, "trailing junk in '" + text + "'");
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60) {
    fail(ErrorCode::UnparseableTimestamp, "field out of range in '" + text + "'");
  }
  std::int64_t days = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
  return days * kSecondsPerDay + hour * 3600 + minute * 60 + second - offset;
}

std::string format_iso8601(TimePoint t) {
  std::int64_t days = t / kSecondsPerDay;
  std::int64_t rem = t % kSecondsPerDay;
  if (rem < 0) {
    rem += kSecondsPerDay;
    --days;
  }
  int year;
  unsigned month, day;
  civil_from_days(days, year, month, day);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", year, month, day,
                static_cast<int>(rem / 3600), static_cast<int>((rem % 3600) / 60),
                static_cast<int>(rem % 60));
  return buf;
}

int day_of_week(TimePoint t) {
  std::int64_t days = t / kSecondsPerDay;
  if (t % kSecondsPerDay < 0) --days;
  // 1970-01-01 was a Thursday; Monday = 0.
  return static_cast<int>(((days + 3) % 7 + 7) % 7);
}

int hour_of_week(TimePoint t) {
  std::int64_t sec = t % kSecondsPerDay;
  if (sec < 0) sec += kSecondsPerDay;
  return day_of_week(t) * 24 + static_cast<int>(sec / kSecondsPerHour);
}

TraceLog group_by_case(const EventLog& log) {
  std::map<std::string, Trace> by_case;
  for (const Event& e : log) {
    Trace& tr = by_case[e.case_id];
    tr.case_id = e.case_id;
    tr.events.push_back(e);
  }
  TraceLog traces;
  traces.reserve(by_case.size());
  for (auto& [_, tr] : by_case) {
    std::stable_sort(tr.events.begin(), tr.events.end(),
                     [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
    traces.push_back(std::move(tr));
  }
  std::stable_sort(traces.begin(), traces.end(), [](const Trace& a, const Trace& b) {
    if (a.events.front().timestamp != b.events.front().timestamp)
      return a.events.front().timestamp < b.events.front().timestamp;
    return a.case_id < b.case_id;
  });
  return traces;
}

void sort_log(EventLog& log) {
  std::stable_sort(log.begin(), log.end(), [](const Event& a, const Event& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.case_id < b.case_id;
  });
}

std::vector<std::vector<std::string>> activity_sequences(const TraceLog& traces) {
  std::vector<std::vector<std::string>> out;
  out.reserve(traces.size());
  for (const Trace& tr : traces) {
    std::vector<std::string> seq;
    seq.reserve(tr.events.size());
    for (const Event& e : tr.events) seq.push_back(e.activity);
    out.push_back(std::move(seq));
  }
  return out;
}

}  // namespace bps
