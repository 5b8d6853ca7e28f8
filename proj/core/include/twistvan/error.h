#ifndef TWISTVAN_ERROR_H_
#define TWISTVAN_ERROR_H_

#include <stdexcept>
#include <string>

namespace twistvan {

// Failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
  kConfig,     // bad curve/suite configuration or inconsistent input data
  kNumerical,  // a runtime-checked numerical contract failed (gap, stability)
  kIo,         // filesystem or file-format failure
  kDomain,     // argument outside an operation's domain
  kCapacity,   // request exceeds a configured memory budget
  kInternal,   // bookkeeping invariant broken; indicates a bug
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kDomain:
      return 2;
    case ErrorKind::kNumerical:
    case ErrorKind::kCapacity:
    case ErrorKind::kInternal:
      return 3;
    case ErrorKind::kIo:
      return 4;
  }
  return 1;
}

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace twistvan

#endif  // TWISTVAN_ERROR_H_
