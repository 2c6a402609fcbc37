#include "airdrop/error.hpp"

namespace airdrop {

const char* category_name(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::parse: return "parse";
    case ErrorCategory::schema: return "schema";
    case ErrorCategory::invalid_config: return "invalid_config";
    case ErrorCategory::unsupported: return "unsupported";
    case ErrorCategory::resource: return "resource";
    case ErrorCategory::io: return "io";
  }
  return "unknown";
}

}  // namespace airdrop
