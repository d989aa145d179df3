#include "boltzsyn/error.hpp"

namespace boltzsyn {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Argument: return "argument error";
    case ErrorKind::Dimension: return "dimension error";
    case ErrorKind::Size: return "size error";
    case ErrorKind::Degenerate: return "degenerate input";
    case ErrorKind::Calibration: return "calibration error";
    case ErrorKind::Schema: return "schema error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace boltzsyn
