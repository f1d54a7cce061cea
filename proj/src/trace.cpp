#include "proxvr/trace.hpp"

#include <cstdio>

namespace proxvr {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const RunMeta& meta,
                     const std::vector<TraceRecord>& rows) {
  out << kTraceHeader << '\n';
  const std::string prefix = meta.algo + ',' + std::to_string(meta.seed) + ',' +
                             std::to_string(meta.n) + ',' + std::to_string(meta.d) + ',' +
                             std::to_string(meta.batch) + ',' + std::to_string(meta.minibatch) +
                             ',' + std::to_string(meta.epoch_length) + ',' +
                             format_double(meta.eta) + ',';
  for (const TraceRecord& r : rows) {
    out << prefix << r.epoch << ',' << r.iter << ',' << r.sfo << ',' << r.po << ','
        << r.diag_sfo << ',' << format_double(r.objective) << ','
        << format_double(r.grad_map_sq) << ',' << format_double(r.elapsed_ms) << '\n';
  }
}

void write_report_csv(std::ostream& out, const std::vector<InequalityReport>& rows) {
  out << kReportHeader << '\n';
  for (const InequalityReport& r : rows) {
    out << r.suite << ',' << r.check << ',' << r.trials << ',' << r.violations << ','
        << format_double(r.worst_residual) << ',' << format_double(r.slack) << ','
        << (r.asserted ? 1 : 0) << '\n';
  }
}

}  // namespace proxvr
