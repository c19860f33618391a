#pragma once

#include "forge/verify.hpp"

#include <iosfwd>

namespace forge {

struct SuiteOptions {
  bool quick = false;  // reduced draw counts for development
  std::uint64_t seed = 7;
};

struct SuiteResult {
  std::vector<VerificationReport> reports;
  bool all_pass = true;
};

/// The acceptance battery: one pass/fail line per criterion on `progress`.
SuiteResult verify_suite(const SuiteOptions& opt, std::ostream* progress = nullptr);

/// Stage counts used for the shared base traces; free-amalgamation theories
/// square their width per witness pass, so their schedules stay short.
long base_stages_for(const std::string& catalog_name);

}  // namespace forge
