#pragma once

#include <stdexcept>
#include <string>

namespace mars {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input documents.
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

// Resource addressing.
struct UnknownResource : Error { using Error::Error; };
struct UnsupportedKind : Error { using Error::Error; };

// Sensing.
struct InvalidPeriod : Error { using Error::Error; };
struct NonContiguousSample : Error { using Error::Error; };
struct NoCompletedWindow : Error { using Error::Error; };

// Actuation.
struct OutOfRange : Error { using Error::Error; };
struct ModelMayNotActuate : Error { using Error::Error; };

// Reflection.
struct NoForecast : Error { using Error::Error; };
struct DuplicateModel : Error { using Error::Error; };

// Policy management.
struct DuplicateName : Error { using Error::Error; };
struct UnknownScenario : Error { using Error::Error; };

// Traces.
struct DegenerateSample : Error { using Error::Error; };

// Synthetic trace generation.
struct SpecError : Error { using Error::Error; };

}  // namespace mars
