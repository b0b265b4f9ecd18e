#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pkco/netsim.hpp"

namespace pkco {

inline constexpr const char* kTraceHeader =
    "cycle,node_id,kappa_s,eta_s,timestamp_s,offset_est_s,u_s,offset_after_s,"
    "fire_rel_s,delta_s,collided";

class TraceError : public std::runtime_error {
 public:
  TraceError(std::size_t row, const std::string& message);
  std::size_t row() const { return row_; }  ///< 1-based line number

 private:
  std::size_t row_;
};

/// Header plus one row per record. Reals use the shortest round-trip form, so
/// read_trace() restores every value exactly.
void write_trace(std::ostream& out, const std::vector<CycleRecord>& records);

std::vector<CycleRecord> read_trace(std::istream& in);

}  // namespace pkco
