#pragma once

#include <stdexcept>
#include <string>

namespace trustlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define TRUSTLAB_ERROR(Name)                       \
    class Name : public Error {                    \
    public:                                        \
        using Error::Error;                        \
    }

TRUSTLAB_ERROR(NonUnitSumError);
TRUSTLAB_ERROR(OutOfRangeError);
TRUSTLAB_ERROR(MissingSymbolError);
TRUSTLAB_ERROR(UnknownSymbolError);
TRUSTLAB_ERROR(EmptyObservationError);
TRUSTLAB_ERROR(AlphabetMismatchError);
TRUSTLAB_ERROR(AlphaOutOfRangeError);
TRUSTLAB_ERROR(BothZeroError);
TRUSTLAB_ERROR(MissingSeedError);
TRUSTLAB_ERROR(MissingPriorsError);
TRUSTLAB_ERROR(ZeroEvidenceError);
TRUSTLAB_ERROR(NotInFamilyError);
TRUSTLAB_ERROR(FamilyTooLargeError);
TRUSTLAB_ERROR(AlphabetTooLargeError);
TRUSTLAB_ERROR(UnknownMethodError);
TRUSTLAB_ERROR(SerializationMismatchError);
TRUSTLAB_ERROR(ParseError);

#undef TRUSTLAB_ERROR

} // namespace trustlab
