#ifndef LEXADAPT_ERROR_HPP_
#define LEXADAPT_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lexadapt {

// Process exit codes used by the command-line front end. Every exception
// thrown by the library maps onto exactly one of these.
enum class ExitCode : int {
  kSuccess = 0,
  kConfig = 2,
  kParse = 3,
  kCalibration = 4,
  kContract = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ExitCode::kConfig, what) {}
};

// Malformed input file. `line` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(ExitCode::kParse,
              source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        source_(source),
        line_(line) {}
  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

class DecodeError : public Error {
 public:
  explicit DecodeError(std::size_t byte_offset)
      : Error(ExitCode::kParse, "invalid UTF-8 at byte offset " + std::to_string(byte_offset)),
        offset_(byte_offset) {}
  std::size_t byte_offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Violated precondition: missing label, missing profile, length mismatch...
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what) : Error(ExitCode::kContract, what) {}
};

class OovError : public ContractError {
 public:
  OovError(const std::string& word, const std::string& domain)
      : ContractError("word '" + word + "' is not in the " + domain + " embedding space"),
        word_(word) {}
  const std::string& word() const noexcept { return word_; }

 private:
  std::string word_;
};

class DegenerateVectorError : public ContractError {
 public:
  DegenerateVectorError(const std::string& word, const std::string& domain)
      : ContractError("word '" + word + "' has a zero-norm vector in the " + domain + " space") {}
};

}  // namespace lexadapt

#endif  // LEXADAPT_ERROR_HPP_
