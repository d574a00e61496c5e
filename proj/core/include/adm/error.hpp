#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adm {

// Why an operation refused its input. The CLI maps `parse` and `dimension`
// to exit code 2 and everything else to exit code 1.
enum class Reason {
  precondition,
  out_of_range,
  kadison,
  majorization,
  trace_mismatch,
  dimension,
  not_hermitian,
  not_psd,
  not_isometry,
  unclassifiable,
  assertion,
  parse,
};

constexpr std::string_view reason_name(Reason r) {
  switch (r) {
    case Reason::precondition: return "precondition";
    case Reason::out_of_range: return "out-of-range";
    case Reason::kadison: return "kadison";
    case Reason::majorization: return "majorization";
    case Reason::trace_mismatch: return "trace-mismatch";
    case Reason::dimension: return "dimension";
    case Reason::not_hermitian: return "not-hermitian";
    case Reason::not_psd: return "not-psd";
    case Reason::not_isometry: return "not-isometry";
    case Reason::unclassifiable: return "unclassifiable";
    case Reason::assertion: return "assertion";
    case Reason::parse: return "parse";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Reason reason, const std::string& what)
      : std::runtime_error(std::string(reason_name(reason)) + ": " + what), reason_(reason) {}

  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

[[noreturn]] inline void fail(Reason reason, const std::string& what) { throw Error(reason, what); }

inline void require(bool cond, Reason reason, const std::string& what) {
  if (!cond) fail(reason, what);
}

}  // namespace adm
