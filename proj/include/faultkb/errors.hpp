#pragma once

#include <stdexcept>
#include <string>

namespace faultkb {

// Base class for everything the pipeline can throw on purpose.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad on-disk data: wrong arity, unknown tag, truncated file, ...
class FormatError : public Error {
public:
  explicit FormatError(const std::string& msg) : Error(msg) {}
  FormatError(const std::string& path, std::size_t line, const std::string& msg)
      : Error(path + ":" + std::to_string(line) + ": " + msg) {}
};

// Bad configuration (missing path, out-of-range value, unknown key).
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

class EmptyUtterance : public Error {
public:
  EmptyUtterance() : Error("utterance is empty after trimming") {}
};

class EmptyChunk : public Error {
public:
  EmptyChunk() : Error("chunk is empty after stripping function words") {}
};

class RuleCompileError : public Error {
public:
  explicit RuleCompileError(const std::string& msg) : Error(msg) {}
};

class EmptyVocabulary : public Error {
public:
  explicit EmptyVocabulary(const std::string& msg) : Error(msg) {}
};

class ZeroVector : public Error {
public:
  ZeroVector() : Error("cannot normalize a zero vector") {}
};

class LexiconMissing : public Error {
public:
  explicit LexiconMissing(const std::string& msg) : Error(msg) {}
};

class EmptyTrainingSet : public Error {
public:
  EmptyTrainingSet() : Error("training set is empty") {}
};

class VersionMismatch : public Error {
public:
  explicit VersionMismatch(const std::string& msg) : Error(msg) {}
};

class InvariantViolation : public Error {
public:
  explicit InvariantViolation(const std::string& msg) : Error(msg) {}
};

}  // namespace faultkb
