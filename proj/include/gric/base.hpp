#pragma once

#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace gric {

// Exact integer type used throughout. Fox derivatives of long words,
// mu_m powers and Smith normal form intermediates all overflow fixed width.
using Int = boost::multiprecision::cpp_int;

enum class ErrorKind {
  input,            // malformed input data (bad index, bad token, ...)
  class_mismatch,   // operands live over different group classes
  shape_mismatch,   // matrix / vector extents disagree
  formal_mode,      // operation needs a solved word problem, class is formal
  not_aspherical,   // operation needs the aspherical flag on a presentation
  not_normalized,   // operation needs a normalized presentation
  not_hermitian,    // pairing fails the hermitean symmetry check
  unsupported,      // outside the supported class set
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::input: return "input";
    case ErrorKind::class_mismatch: return "class-mismatch";
    case ErrorKind::shape_mismatch: return "shape-mismatch";
    case ErrorKind::formal_mode: return "undecidable-in-formal-mode";
    case ErrorKind::not_aspherical: return "not-aspherical";
    case ErrorKind::not_normalized: return "not-normalized";
    case ErrorKind::not_hermitian: return "not-hermitian";
    case ErrorKind::unsupported: return "unsupported";
  }
  return "unknown";
}

}  // namespace gric
