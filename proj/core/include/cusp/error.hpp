// Error taxonomy shared by the whole pipeline.
//
// Construction-time failures (a surgery that does not fit, a cut collision)
// are distinct from input errors (a cycle that is not toric) and from
// verification failures; the CLI maps these classes to distinct exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace cusp {

enum class Err {
  BadInput,          // malformed cycle/recipe/JSON
  NotToric,          // cycle does not close up into a fan of winding 1
  NonClosing,        // edge lengths do not close the moment polygon
  NoSolution,        // no positive edge lengths exist on the requested support
  Degenerate,        // region with empty interior / too few positive lengths
  EdgeTooShort,      // surgery base exceeds the remaining edge length
  DoesNotFit,        // no admissible apex placement for a blow-up triangle
  CutCollision,      // surgery geometry collides with existing cuts
  EmptyBoundary,     // geometric boundary query on an all-zero-length boundary
  NotHyperbolic,     // fixed point requested for a trace-2 monodromy
  AnchorInvalid,     // cone anchor selection invalid / cone polygon not simple
  ChainMismatch,     // base boundary chain and cone chain disagree
  NonIntegralInput,  // triangulation input has non-integral marked points
  IndexOutOfRange,   // index past the end of a cycle or list
  Unsupported,       // construction requires a relaxation that is switched off
  VerifyFailed,      // a verification check did not hold
  Internal,          // broken invariant (always a bug)
};

const char* err_name(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg)
      : std::runtime_error(std::string(err_name(code)) + ": " + msg),
        code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) {
  throw Error(code, msg);
}

// Invariant check that survives NDEBUG: exactness bugs must never pass silently.
inline void ensure(bool cond, Err code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace cusp
