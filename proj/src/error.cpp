#include "bellproc/error.hpp"

#include <cstdio>

namespace bellproc {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::domain: return "domain";
    case Errc::out_of_range: return "out_of_range";
    case Errc::cap_exceeded: return "cap_exceeded";
    case Errc::non_convergence: return "non_convergence";
    case Errc::invalid_params: return "invalid_params";
    case Errc::negative_mass: return "negative_mass";
    case Errc::not_strict: return "not_strict";
    case Errc::theta_mismatch: return "theta_mismatch";
    case Errc::lambda_mismatch: return "lambda_mismatch";
    case Errc::horizon_mismatch: return "horizon_mismatch";
    case Errc::tail_sliver: return "tail_sliver";
    case Errc::overflow: return "overflow";
    case Errc::parse: return "parse";
  }
  return "unknown";
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace bellproc
