#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rptopic {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class EmptyVocabularyError : public Error {
 public:
  using Error::Error;
};

class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

class PartitionError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class DegenerateModelError : public Error {
 public:
  using Error::Error;
};

// Fewer ζ-distinct words with positive solid angle than topics requested.
class InsufficientExtremesError : public Error {
 public:
  InsufficientExtremesError(std::size_t found, std::size_t requested)
      : Error("found " + std::to_string(found) + " distinct extreme words, " +
              std::to_string(requested) + " requested"),
        found_(found) {}
  std::size_t found() const { return found_; }

 private:
  std::size_t found_;
};

class DegenerateTopicError : public Error {
 public:
  explicit DegenerateTopicError(std::size_t topic)
      : Error("topic " + std::to_string(topic) + " has zero mass after rescaling"),
        topic_(topic) {}
  std::size_t topic() const { return topic_; }

 private:
  std::size_t topic_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(std::vector<double> last_iterate, std::size_t iterations)
      : Error("simplex least squares did not converge in " +
              std::to_string(iterations) + " iterations"),
        last_(std::move(last_iterate)) {}
  const std::vector<double>& last_iterate() const { return last_; }

 private:
  std::vector<double> last_;
};

}  // namespace rptopic
