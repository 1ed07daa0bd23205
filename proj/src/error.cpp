#include "narreq/error.hpp"

namespace narreq {

const char* err_name(Err kind) {
  switch (kind) {
    case Err::kMalformedConfig: return "MalformedConfig";
    case Err::kGroupSupportsNothing: return "GroupSupportsNothing";
    case Err::kPolicyUnsupported: return "PolicyUnsupported";
    case Err::kEmptyCategory: return "EmptyCategory";
    case Err::kTwoGroupOrderingViolated: return "TwoGroupOrderingViolated";
    case Err::kInvalidQ: return "InvalidQ";
    case Err::kNarrativeOutsideCategories: return "NarrativeOutsideCategories";
    case Err::kMalformedTaxonomy: return "MalformedTaxonomy";
    case Err::kPlatformSpaceTooLarge: return "PlatformSpaceTooLarge";
    case Err::kNotFullSupport: return "NotFullSupport";
    case Err::kGroupNotInCoalition: return "GroupNotInCoalition";
    case Err::kNotTwoGroups: return "NotTwoGroups";
    case Err::kAssumptionViolated: return "AssumptionViolated";
    case Err::kOracleBoundExceeded: return "OracleBoundExceeded";
    case Err::kNoSolutionFound: return "NoSolutionFound";
    case Err::kMultipleSolutions: return "MultipleSolutions";
    case Err::kEmptyTail: return "EmptyTail";
  }
  return "UnknownError";
}

int exit_code_for(Err kind) {
  switch (kind) {
    case Err::kPlatformSpaceTooLarge:
    case Err::kOracleBoundExceeded:
      return 4;
    default:
      return 2;
  }
}

Error::Error(Err kind, const std::string& message)
    : std::runtime_error(std::string(err_name(kind)) + ": " + message), kind_(kind) {}

void fail(Err kind, const std::string& message) { throw Error(kind, message); }

}  // namespace narreq
