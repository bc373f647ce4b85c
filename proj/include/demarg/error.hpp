#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace demarg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: non-Hermitian matrices, unnormalized data, bad files.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Fock truncation too small for the requested state or output.
class CutoffError : public Error {
 public:
  using Error::Error;
};

// Measured data does not reach the points an analysis needs.
class CoverageError : public Error {
 public:
  using Error::Error;
};

using WarningHandler = std::function<void(const std::string&)>;

// Installs a process-wide sink for numerical warnings and returns the
// previous one. The default writes to stderr.
WarningHandler set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

// Drops warnings while alive. Used around resampling loops, whose draws
// would repeat the point estimate's warnings many times over.
class QuietWarnings {
 public:
  QuietWarnings();
  ~QuietWarnings();
  QuietWarnings(const QuietWarnings&) = delete;
  QuietWarnings& operator=(const QuietWarnings&) = delete;
};

}  // namespace demarg
