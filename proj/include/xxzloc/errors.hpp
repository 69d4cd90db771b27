#pragma once

#include <stdexcept>
#include <string>

namespace xxzloc {

/// A precondition on the inputs was violated (bad region, wrong sector, hypothesis not met).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The computation could not certify its own result (unconverged sum, singular shift, refused fit).
class NumericalRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace xxzloc
