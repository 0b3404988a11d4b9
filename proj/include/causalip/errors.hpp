#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace causalip {

// Base for every library error. code() is the machine-readable name used on
// the service wire and in CLI diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string_view code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define CAUSALIP_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

// graph-core
CAUSALIP_DEFINE_ERROR(CycleError);
CAUSALIP_DEFINE_ERROR(DuplicateEdgeError);
CAUSALIP_DEFINE_ERROR(SelfLoopError);
CAUSALIP_DEFINE_ERROR(IndexError);
CAUSALIP_DEFINE_ERROR(InconsistentPkgError);
CAUSALIP_DEFINE_ERROR(InvalidTestError);
CAUSALIP_DEFINE_ERROR(ConflictError);
CAUSALIP_DEFINE_ERROR(TooLargeError);

// oracle
CAUSALIP_DEFINE_ERROR(TestContextError);
CAUSALIP_DEFINE_ERROR(UnknownTestError);
CAUSALIP_DEFINE_ERROR(DuplicateSubmissionError);

// ip-model
CAUSALIP_DEFINE_ERROR(ConfigError);
CAUSALIP_DEFINE_ERROR(InfeasibleError);

// planner
CAUSALIP_DEFINE_ERROR(NothingToDoError);

// generators-io
CAUSALIP_DEFINE_ERROR(ParseError);

// bench
CAUSALIP_DEFINE_ERROR(UnpairedError);

// service
CAUSALIP_DEFINE_ERROR(ValidationError);
CAUSALIP_DEFINE_ERROR(NotFoundError);
CAUSALIP_DEFINE_ERROR(SessionDoneError);
CAUSALIP_DEFINE_ERROR(NotViableError);
CAUSALIP_DEFINE_ERROR(ContradictionError);

#undef CAUSALIP_DEFINE_ERROR

}  // namespace causalip
