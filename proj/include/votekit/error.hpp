#pragma once

#include <stdexcept>
#include <string>

namespace votekit {

enum class Errc {
  kParse,
  kInvalidArgument,
  kNotSimple,
  kTooLarge,
  kUnsupported,
  kCorrupt,
};

// Every failure raised by the library carries one of the codes above so the
// C layer can map it onto a status value without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error(Errc::kParse, what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace votekit
