#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "proxvr/diagnostics.hpp"
#include "proxvr/optimizer.hpp"

namespace proxvr {

// Column order is the external contract; never reorder.
inline constexpr const char* kTraceHeader =
    "algo,seed,n,d,B,b,m,eta,epoch,iter,sfo,po,diag_sfo,objective,grad_map_sq,elapsed_ms";

inline constexpr const char* kReportHeader =
    "suite,check,trials,violations,worst_residual,slack,asserted";

// Run identity repeated on every trace row.
struct RunMeta {
  std::string algo;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t batch = 0;
  std::size_t minibatch = 0;
  std::size_t epoch_length = 0;
  double eta = 0.0;
};

// Shortest round-trip decimal form; infinities print as "inf"/"-inf" and are
// locale independent.
std::string format_double(double v);

void write_trace_csv(std::ostream& out, const RunMeta& meta,
                     const std::vector<TraceRecord>& rows);

void write_report_csv(std::ostream& out, const std::vector<InequalityReport>& rows);

}  // namespace proxvr
