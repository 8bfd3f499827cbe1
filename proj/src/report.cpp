#include "pca/report.hpp"

#include <sstream>

namespace pca {

std::string render_report(const CheckReport& r) {
  std::ostringstream os;
  os << r.property << ": cases=" << r.cases << " failures=" << r.failures.size()
     << " inconclusive=" << r.inconclusive;
  if (r.skipped != 0) os << " skipped=" << r.skipped;
  os << (r.pass() ? "  [ok]" : "  [FAIL]");
  std::size_t shown = 0;
  for (const auto& f : r.failures) {
    if (shown++ == 5) {
      os << "\n  ... " << (r.failures.size() - 5) << " more";
      break;
    }
    os << "\n  - " << f;
  }
  return os.str();
}

}  // namespace pca
