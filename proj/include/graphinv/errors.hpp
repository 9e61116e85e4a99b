#ifndef GRAPHINV_ERRORS_HPP
#define GRAPHINV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace graphinv {

/// Base class for all graphinv domain errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DuplicateEdgeError : Error {
  using Error::Error;
};
struct SelfLoopError : Error {
  using Error::Error;
};
struct IdOutOfRangeError : Error {
  using Error::Error;
};
struct EmptyBoundaryError : Error {
  using Error::Error;
};
struct LengthMismatchError : Error {
  using Error::Error;
};
struct NotAdmissibleError : Error {
  using Error::Error;
};
struct DisconnectedGraphError : Error {
  using Error::Error;
};
struct SingularInteriorOperatorError : Error {
  using Error::Error;
};
struct TooLargeError : Error {
  using Error::Error;
};
struct TooManyEdgesError : Error {
  using Error::Error;
};

}  // namespace graphinv

#endif
