#include "pkco/trace_io.hpp"

#include <charconv>
#include <string_view>

#include "pkco/scenario_file.hpp"

namespace pkco {

namespace {

constexpr std::size_t kColumns = 11;

template <typename T>
T parse_field(std::string_view text, std::size_t row, const char* column) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw TraceError(row, std::string("bad value '") + std::string(text) +
                              "' in column " + column);
  }
  return v;
}

}  // namespace

TraceError::TraceError(std::size_t row, const std::string& message)
    : std::runtime_error("line " + std::to_string(row) + ": " + message), row_(row) {}

void write_trace(std::ostream& out, const std::vector<CycleRecord>& records) {
  out << kTraceHeader << '\n';
  for (const CycleRecord& r : records) {
    out << r.cycle << ',' << r.node_id << ',' << format_double(r.kappa_sample) << ','
        << format_double(r.eta_sample) << ',' << format_double(r.timestamp) << ','
        << format_double(r.offset_estimate) << ',' << format_double(r.correction) << ','
        << format_double(r.offset_after) << ',' << format_double(r.fire_time_rel)
        << ',' << format_double(r.delta) << ',' << (r.collided ? 1 : 0) << '\n';
  }
}

std::vector<CycleRecord> read_trace(std::istream& in) {
  std::string line;
  std::size_t row = 1;
  if (!std::getline(in, line)) throw TraceError(row, "empty trace");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw TraceError(row, "unexpected header");

  std::vector<CycleRecord> records;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != kColumns) {
      throw TraceError(row, "expected " + std::to_string(kColumns) + " columns, got " +
                                std::to_string(f.size()));
    }
    CycleRecord r;
    r.cycle = parse_field<std::uint64_t>(f[0], row, "cycle");
    r.node_id = parse_field<std::uint32_t>(f[1], row, "node_id");
    r.kappa_sample = parse_field<double>(f[2], row, "kappa_s");
    r.eta_sample = parse_field<double>(f[3], row, "eta_s");
    r.timestamp = parse_field<double>(f[4], row, "timestamp_s");
    r.offset_estimate = parse_field<double>(f[5], row, "offset_est_s");
    r.correction = parse_field<double>(f[6], row, "u_s");
    r.offset_after = parse_field<double>(f[7], row, "offset_after_s");
    r.fire_time_rel = parse_field<double>(f[8], row, "fire_rel_s");
    r.delta = parse_field<double>(f[9], row, "delta_s");
    const auto collided = parse_field<int>(f[10], row, "collided");
    if (collided != 0 && collided != 1) throw TraceError(row, "collided must be 0 or 1");
    r.collided = collided == 1;
    records.push_back(r);
  }
  return records;
}

}  // namespace pkco
