#ifndef AIRDROP_ERROR_HPP
#define AIRDROP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace airdrop {

// Error categories map one-to-one onto CLI exit codes.
enum class ErrorCategory {
  parse = 2,
  schema = 3,
  invalid_config = 4,
  unsupported = 5,
  resource = 6,
  io = 7,
};

const char* category_name(ErrorCategory c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }
  int exit_code() const noexcept { return static_cast<int>(category_); }

 private:
  ErrorCategory category_;
};

// A value violates a documented invariant. `field` is the dotted path of the
// offending field, e.g. "technology.params.tau".
class InvalidConfig : public Error {
 public:
  InvalidConfig(std::string field, const std::string& constraint)
      : Error(ErrorCategory::invalid_config, field + ": " + constraint),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class Unsupported : public Error {
 public:
  explicit Unsupported(const std::string& what)
      : Error(ErrorCategory::unsupported, what) {}
};

class ResourceLimit : public Error {
 public:
  explicit ResourceLimit(const std::string& what)
      : Error(ErrorCategory::resource, what) {}
};

}  // namespace airdrop

#endif  // AIRDROP_ERROR_HPP
