#include "proxvr/parallel.hpp"

namespace proxvr {

namespace {
ExecMode g_mode = ExecMode::Parallel;
}

ExecMode exec_mode() { return g_mode; }
void set_exec_mode(ExecMode m) { g_mode = m; }

}  // namespace proxvr
