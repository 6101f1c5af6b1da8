#ifndef NEOBURST_ERROR_HPP_
#define NEOBURST_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace neoburst {

// Invalid input: malformed files, violated preconditions, inconsistent data.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A serialized model whose format tag or version this build cannot read.
class VersionMismatchError : public Error {
 public:
  explicit VersionMismatchError(const std::string& what) : Error(what) {}
};

}  // namespace neoburst

#endif  // NEOBURST_ERROR_HPP_
