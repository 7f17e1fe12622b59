#pragma once

#include <stdexcept>
#include <string>

namespace sdde {

/// Base class for all numerical/domain errors thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define SDDE_DEFINE_ERROR(NAME)                                  \
    class NAME : public Error {                                  \
    public:                                                      \
        explicit NAME(const std::string& msg) : Error(msg) {}    \
    }

// model
SDDE_DEFINE_ERROR(DelayAdvanced);
SDDE_DEFINE_ERROR(HistoryOutOfRange);
SDDE_DEFINE_ERROR(WellPosednessViolated);
SDDE_DEFINE_ERROR(DegenerateStateDependence);

// spectral
SDDE_DEFINE_ERROR(NoConvergence);
SDDE_DEFINE_ERROR(JacobianSingular);
SDDE_DEFINE_ERROR(SeedNotOnBranch);
SDDE_DEFINE_ERROR(StepCollapse);
SDDE_DEFINE_ERROR(CharacteristicDegenerate);
SDDE_DEFINE_ERROR(RegularityViolated);
SDDE_DEFINE_ERROR(StrongResonance);

// normal form
SDDE_DEFINE_ERROR(NormalizationDegenerate);
SDDE_DEFINE_ERROR(ResonantDenominator);
SDDE_DEFINE_ERROR(DegenerateCubic);
SDDE_DEFINE_ERROR(WrongCase);

// integrator / dynamics
SDDE_DEFINE_ERROR(BoundViolated);
SDDE_DEFINE_ERROR(HistoryTooShort);
SDDE_DEFINE_ERROR(OutOfRange);
SDDE_DEFINE_ERROR(TooFewEvents);

#undef SDDE_DEFINE_ERROR

}  // namespace sdde
