#include "imdpp/common.hpp"

#include <cstdio>

namespace imdpp {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace imdpp
