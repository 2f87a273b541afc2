#pragma once

#include <stdexcept>
#include <string>

namespace rtc {

// Base class for all recoverable pipeline errors. Precondition violations
// (programming bugs) use std::invalid_argument / std::logic_error instead.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- ingest / dataset ---
struct MalformedRow : Error {
  using Error::Error;
};
struct NonMonotonicTime : Error {
  using Error::Error;
};
struct EmptyTask : Error {
  using Error::Error;
};
struct UnknownLabel : Error {
  using Error::Error;
};
struct DuplicateSubject : Error {
  using Error::Error;
};
struct EmptyResult : Error {
  using Error::Error;
};
struct ClassAbsent : Error {
  using Error::Error;
};
struct DegenerateFeature : Error {
  using Error::Error;
};

// --- svm ---
struct DimensionMismatch : Error {
  using Error::Error;
};
struct SingleClass : Error {
  using Error::Error;
};
struct SolverNonConvergence : Error {
  using Error::Error;
};

// --- model selection ---
struct EmptyGrid : Error {
  using Error::Error;
};
struct BadFoldCount : Error {
  using Error::Error;
};
struct UndefinedMetric : Error {
  using Error::Error;
};

// --- region mixtures / synthesis ---
struct UnusableCell : Error {
  using Error::Error;
};
struct OutOfDomain : Error {
  using Error::Error;
};
struct UnsampleableCell : Error {
  using Error::Error;
};

}  // namespace rtc
