#pragma once

#include <stdexcept>
#include <string>

namespace spdc {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spdc
