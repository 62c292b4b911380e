// Named verification suites with tolerance overrides, shared by the
// command-line front end and usable programmatically.  Each check returns a
// record carrying the measured metric, the tolerance in effect, and enough
// context to locate a failure.
#pragma once

#include <map>
#include <string>
#include <vector>

namespace sl2rep {

inline constexpr const char* kVersionString = "0.1.0";

struct CheckRecord {
  std::string name;
  std::string status;    // PASS, FAIL, CAVEAT, DISCREPANCY
  double metric = 0;     // measured value the status was decided on
  double tolerance = 0;  // threshold in effect after overrides
  std::string detail;    // offending inputs and measured values when not PASS
};

// name -> replacement tolerance, keyed by CheckRecord::name.
using TolOverrides = std::map<std::string, double>;

// The named suites in declaration order ("all" is not listed; it
// concatenates these).
const std::vector<std::string>& suite_names();

// Runs one suite ("all" runs every suite in order).  Throws
// std::invalid_argument for an unknown name.
std::vector<CheckRecord> run_suite(const std::string& suite, const TolOverrides& tol = {});

// The tdreduce suite restricted to one preset in {zero, harmonic, linear};
// an empty preset runs all three.  Throws std::invalid_argument otherwise.
std::vector<CheckRecord> run_tdreduce_suite(const std::string& preset,
                                            const TolOverrides& tol = {});

// Convention decisions in effect for a suite (or "all"), echoed verbatim
// into report documents.
std::vector<std::string> ledger_notes(const std::string& suite);

bool any_fail(const std::vector<CheckRecord>& results);

}  // namespace sl2rep
