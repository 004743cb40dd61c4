#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bellproc {

enum class Errc {
  domain,            // argument outside the function's real domain
  out_of_range,      // index beyond a table or cap
  cap_exceeded,      // a size cap was hit before the result was certified
  non_convergence,   // a series did not meet its tolerance within the iteration cap
  invalid_params,    // alpha/theta/lambda violate positivity or range
  negative_mass,     // a computed probability is below -1e-12
  not_strict,        // the operation needs a reciprocal-integer lambda
  theta_mismatch,    // sum of laws/processes with different theta
  lambda_mismatch,
  horizon_mismatch,
  tail_sliver,       // a uniform fell in the uncertified tail of a table
  overflow,
  parse,
};

std::string_view to_string(Errc code) noexcept;

/// Short form of a real for diagnostics (%g).
std::string num(double v);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace bellproc
