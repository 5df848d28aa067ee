#include "vmphase/error.hpp"

#include <sstream>

namespace vmphase::detail {

void throw_shape(const std::string& what, long long expected_rows,
                 long long expected_cols, long long rows, long long cols)
{
  std::ostringstream msg;
  msg << what << ": expected " << expected_rows << "x" << expected_cols
      << ", got " << rows << "x" << cols;
  throw ShapeError(msg.str());
}

} // namespace vmphase::detail
