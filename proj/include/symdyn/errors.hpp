#pragma once

#include <stdexcept>
#include <string>

namespace symdyn {

// Malformed input: unknown generator labels, bad weights, unparsable specs.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured resource cap (ball size, path budget, resample count) was hit.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A search finished without being able to certify its answer.
class InconclusiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A bounded scan found nothing.
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace symdyn
