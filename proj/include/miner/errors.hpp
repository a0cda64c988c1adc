#ifndef MINER_ERRORS_HPP
#define MINER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace miner {

/// Input-side failures: unreadable files, unparseable or invalid records.
/// The CLI maps these to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

/// Violations of corpus/gazetteer/lexicon invariants (duplicates, dangling
/// references, alias collisions).
class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

/// Failures of an analysis precondition (empty corpus, edgeless graph, ...).
/// The CLI maps these to exit code 2.
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Remote tone-service failures, kept distinct so callers can tell a dead
/// endpoint from a garbage response.
class RemoteError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class RemoteNetworkError : public RemoteError {
 public:
  using RemoteError::RemoteError;
};

class RemoteHttpError : public RemoteError {
 public:
  RemoteHttpError(int status, const std::string& what)
      : RemoteError(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

class RemoteAuthError : public RemoteHttpError {
 public:
  using RemoteHttpError::RemoteHttpError;
};

class RemoteParseError : public RemoteError {
 public:
  using RemoteError::RemoteError;
};

}  // namespace miner

#endif  // MINER_ERRORS_HPP
