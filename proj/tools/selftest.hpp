#pragma once

#include <ostream>

namespace blochdf::tools {

/// Quick end-to-end sanity checks. Returns the number of failed checks.
int run_selftest(std::ostream& out);

}  // namespace blochdf::tools
