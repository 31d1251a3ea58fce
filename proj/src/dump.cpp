#include "blsm/dump.hpp"

#include <charconv>
#include <sstream>
#include <vector>

#include "blsm/error.hpp"

namespace blsm {

namespace {

void write_level(std::ostringstream& out, std::size_t index, std::span<const Record> level) {
  out << "level " << index << ':';
  for (const Record& r : level) {
    out << ' ' << r.original_key() << ':' << (r.is_regular() ? 'R' : 'T') << ':' << r.value;
  }
  out << '\n';
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": " + what);
}

template <typename T>
T parse_number(std::string_view token, std::size_t line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    parse_fail(line_no, "bad number '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t at = s.find(sep, start);
    if (at == std::string_view::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, at - start));
    start = at + 1;
  }
  return parts;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  for (std::string_view part : split(s, ' ')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

struct ParsedDump {
  std::size_t b = 0;
  std::uint64_t r = 0;
  std::vector<std::vector<Record>> levels;
};

ParsedDump parse_text(std::string_view text, std::string_view kind) {
  std::vector<std::string_view> lines;
  for (std::string_view line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) parse_fail(1, "missing header");

  ParsedDump parsed;
  const auto header = tokens(lines[0]);
  if (header.size() != 3 || header[0] != kind || !header[1].starts_with("b=") || !header[2].starts_with("r=")) {
    parse_fail(1, "expected '" + std::string(kind) + " b=<b> r=<r>'");
  }
  parsed.b = parse_number<std::size_t>(header[1].substr(2), 1);
  parsed.r = parse_number<std::uint64_t>(header[2].substr(2), 1);

  std::size_t previous = 0;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    const auto words = tokens(lines[n]);
    if (words.size() < 2 || words[0] != "level" || !words[1].ends_with(':')) {
      parse_fail(line_no, "expected 'level <i>: ...'");
    }
    const auto index = parse_number<std::size_t>(words[1].substr(0, words[1].size() - 1), line_no);
    if (n > 1 && index <= previous) parse_fail(line_no, "levels must be listed in ascending order");
    if (index >= 64) parse_fail(line_no, "level index out of range");
    previous = index;

    std::vector<Record> level;
    level.reserve(words.size() - 2);
    for (std::size_t w = 2; w < words.size(); ++w) {
      const auto fields = split(words[w], ':');
      if (fields.size() != 3 || (fields[1] != "R" && fields[1] != "T")) {
        parse_fail(line_no, "bad record '" + std::string(words[w]) + "'");
      }
      const auto key = parse_number<std::uint32_t>(fields[0], line_no);
      const auto value = parse_number<std::uint32_t>(fields[2], line_no);
      if (key > kPlaceboKey) parse_fail(line_no, "key " + std::to_string(key) + " exceeds 31 bits");
      level.push_back(fields[1] == "R" ? Record::regular(key, value) : Record{KeyVariable::tombstone(key), value});
    }
    if (parsed.levels.size() <= index) parsed.levels.resize(index + 1);
    parsed.levels[index] = std::move(level);
  }
  return parsed;
}

}  // namespace

std::string dump(const Lsm& lsm) {
  std::ostringstream out;
  out << "lsm b=" << lsm.batch_size() << " r=" << lsm.resident_batches() << '\n';
  for (std::size_t i = 0; i < lsm.level_slots(); ++i) {
    if (lsm.is_full(i)) write_level(out, i, lsm.level(i));
  }
  return out.str();
}

std::string dump(const SortedArray& sa) {
  std::ostringstream out;
  out << "sa b=" << sa.batch_size() << " r=" << sa.resident_batches() << '\n';
  if (!sa.records().empty()) write_level(out, 0, sa.records());
  return out.str();
}

Lsm parse_lsm(std::string_view text) {
  ParsedDump parsed = parse_text(text, "lsm");
  return Lsm::from_levels(LsmConfig{parsed.b}, parsed.r, std::move(parsed.levels));
}

SortedArray parse_sorted_array(std::string_view text) {
  ParsedDump parsed = parse_text(text, "sa");
  if (parsed.levels.size() > 1) throw Error(Errc::ParseError, "sorted array dump has more than one level");
  std::vector<Record> records = parsed.levels.empty() ? std::vector<Record>{} : std::move(parsed.levels[0]);
  SortedArray sa = SortedArray::from_records(LsmConfig{parsed.b}, std::move(records));
  if (sa.resident_batches() != parsed.r) {
    throw Error(Errc::InvariantViolation, "header r = " + std::to_string(parsed.r) + " but array holds " +
                                              std::to_string(sa.resident_batches()) + " batches");
  }
  return sa;
}

}  // namespace blsm
