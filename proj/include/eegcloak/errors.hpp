#pragma once

#include <stdexcept>
#include <string>

namespace eegcloak {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// dataset
struct MalformedTrial : Error { using Error::Error; };
struct UnknownSensor : Error { using Error::Error; };
struct MissingConditionHeader : Error { using Error::Error; };
struct EmptyCorpus : Error { using Error::Error; };
struct VocabSizeMismatch : Error { using Error::Error; };
struct TooFewTrials : Error { using Error::Error; };

// spectral
struct NonFiniteInput : Error { using Error::Error; };

// topomap
struct NonUnitVector : Error { using Error::Error; };
struct DegenerateSites : Error { using Error::Error; };
struct EmptyTrainingSet : Error { using Error::Error; };
struct DegenerateRange : Error { using Error::Error; };

// dummyid
struct InsufficientSubjects : Error { using Error::Error; };

// classifier / disguiser
struct InvalidConfig : Error { using Error::Error; };
struct JointIdentityUnsupported : Error { using Error::Error; };
struct Diverged : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct MissingLabel : Error { using Error::Error; };
struct EmptyDomain : Error { using Error::Error; };
struct WrongProvenance : Error { using Error::Error; };

// evalreport
struct LengthMismatch : Error { using Error::Error; };
struct LabelOutOfRange : Error { using Error::Error; };
struct EmptyMatrix : Error { using Error::Error; };
struct MissingRegime : Error { using Error::Error; };

// cli / config
struct ConfigInvalid : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace eegcloak
