#pragma once

#include <stdexcept>
#include <string>

namespace pcbfeat {

// Every failure the library reports derives from Error so callers can catch
// one type at batch boundaries and still distinguish the kinds below.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define PCBFEAT_ERROR(Name)                      \
    class Name : public Error {                  \
    public:                                      \
        using Error::Error;                      \
    }

PCBFEAT_ERROR(IoError);
PCBFEAT_ERROR(FormatError);
PCBFEAT_ERROR(DimensionMismatch);
PCBFEAT_ERROR(InvalidKsize);
PCBFEAT_ERROR(UnsupportedSpace);
PCBFEAT_ERROR(InvalidParams);
PCBFEAT_ERROR(DegenerateRegion);
PCBFEAT_ERROR(InvalidDistribution);
PCBFEAT_ERROR(InvalidWeights);
PCBFEAT_ERROR(DegenerateTarget);
PCBFEAT_ERROR(EmptyMatrix);
PCBFEAT_ERROR(EmptyGroup);
PCBFEAT_ERROR(PlacementFailure);
PCBFEAT_ERROR(ConfigError);

#undef PCBFEAT_ERROR

}  // namespace pcbfeat
