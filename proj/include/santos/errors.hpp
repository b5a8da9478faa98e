#pragma once

#include <stdexcept>
#include <string>

namespace santos {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BadColumnError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct CycleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MultiRootError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DanglingRefError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownTypeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VersionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Query table problems surfaced to the CLI as exit code 3.
struct IntentNotTextualError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyIntentSemanticsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace santos
