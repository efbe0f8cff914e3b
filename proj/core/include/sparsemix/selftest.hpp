#ifndef SPARSEMIX_SELFTEST_HPP_
#define SPARSEMIX_SELFTEST_HPP_

#include <string>
#include <vector>

namespace sparsemix {

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

/// Fast checks of the library against independent references (known values,
/// brute-force statistics, exact enumeration). Runs in a few seconds.
std::vector<CheckResult> run_selftest(unsigned threads = 1);

}  // namespace sparsemix

#endif  // SPARSEMIX_SELFTEST_HPP_
