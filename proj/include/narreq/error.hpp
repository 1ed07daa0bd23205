#pragma once

#include <stdexcept>
#include <string>

namespace narreq {

enum class Err {
  kMalformedConfig,
  kGroupSupportsNothing,
  kPolicyUnsupported,
  kEmptyCategory,
  kTwoGroupOrderingViolated,
  kInvalidQ,
  kNarrativeOutsideCategories,
  kMalformedTaxonomy,
  kPlatformSpaceTooLarge,
  kNotFullSupport,
  kGroupNotInCoalition,
  kNotTwoGroups,
  kAssumptionViolated,
  kOracleBoundExceeded,
  kNoSolutionFound,
  kMultipleSolutions,
  kEmptyTail,
};

const char* err_name(Err kind);

// Process exit code for a failed run: resource guards map to 4,
// everything else is a validation failure (2).
int exit_code_for(Err kind);

class Error : public std::runtime_error {
 public:
  Error(Err kind, const std::string& message);
  Err kind() const { return kind_; }

 private:
  Err kind_;
};

[[noreturn]] void fail(Err kind, const std::string& message);

}  // namespace narreq
