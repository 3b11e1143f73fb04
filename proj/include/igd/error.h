#ifndef IGD_ERROR_H_
#define IGD_ERROR_H_

#include <stdexcept>
#include <string>

namespace igd {

enum class ErrorCode {
  kInvalidInput,
  kInvalidAnchor,
  kInfeasibleEquality,
  kContractViolation,
  kConfiguration,
  kNumerical,
  kGenerationFailure,
  kOracleUnreliable,
  kDegenerateInstance,
  kIo,
};

const char* error_code_name(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// command-line layer can map it onto a stable exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace igd

#endif  // IGD_ERROR_H_
