#pragma once

#include <stdexcept>
#include <string>

namespace kgx {

enum class Errc {
  Parse,            // malformed input file
  Usage,            // bad CLI usage / configuration
  Io,               // file system failure
  NotMaterialized,  // reasoning op on an unmaterialized ontology
  UnboundRole,      // template grounding hit a role with no binding
  ZeroVariance,     // constant indicator or scores in correlate
  TooFewSamples,    // n < 3 in correlate
  BadInput,         // semantic problem in otherwise well-formed input
  Infeasible,       // scenario config cannot be satisfied
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace kgx
