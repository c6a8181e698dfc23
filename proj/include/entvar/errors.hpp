#pragma once

#include <stdexcept>
#include <string>

namespace entvar {

// Error categories, aligned with the CLI exit codes.
enum class errc {
  config = 2,           // bad keys, paths, indices, unusable sampling grids
  non_convergence = 3,  // iterative eigensolver failed to meet tolerance
  invalid_spec = 4,     // extension spec violates its structural hypotheses
  domain_escape = 5,    // a constructed map leaves its stated domain
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

}  // namespace entvar
