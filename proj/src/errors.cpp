#include "matryoshka/errors.hpp"

namespace mk {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::config: return "config";
    case ErrorKind::structure: return "structure";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::integrator: return "integrator";
    case ErrorKind::protocol: return "protocol";
    case ErrorKind::domain: return "domain";
    case ErrorKind::missing_edge_state: return "missing_edge_state";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace mk
