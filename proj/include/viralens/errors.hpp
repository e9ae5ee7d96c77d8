#ifndef VIRALENS_ERRORS_HPP
#define VIRALENS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace viralens {

// Base class for all library errors. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Ingestion failures: unreadable files, schema violations in strict mode.
class LoadError : public Error {
public:
  using Error::Error;
};

// Feature extraction on an item with neither raw text nor provided features.
class FeatureError : public Error {
public:
  using Error::Error;
};

// Malformed diffusion structure (cyclic parent references).
class StructureError : public Error {
public:
  using Error::Error;
};

// Invalid configuration values.
class ConfigError : public Error {
public:
  using Error::Error;
};

// Model assembly or fitting failures.
class ModelError : public Error {
public:
  using Error::Error;
};

// Logit fit diverged on linearly separable data.
class SeparationError : public ModelError {
public:
  using ModelError::ModelError;
};

} // namespace viralens

#endif
