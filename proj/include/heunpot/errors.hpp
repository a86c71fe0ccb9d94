#pragma once

#include <stdexcept>
#include <string>

namespace heunpot {

// Two failure classes, mapped to process exit codes by the CLI:
// input/parameter domain violations exit 1, runtime numerical failures exit 2.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual const char* name() const noexcept = 0;
    virtual int exit_code() const noexcept = 0;
};

struct ValidationError : Error {
    using Error::Error;
    int exit_code() const noexcept override { return 1; }
};

struct NumericalError : Error {
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

#define HEUNPOT_DEFINE_ERROR(NAME, BASE)                                     \
    struct NAME : BASE {                                                     \
        explicit NAME(const std::string& msg = #NAME) : BASE(msg) {}         \
        const char* name() const noexcept override { return #NAME; }         \
    }

// -- domain violations ------------------------------------------------------
HEUNPOT_DEFINE_ERROR(CoincidentSingularities, ValidationError);
HEUNPOT_DEFINE_ERROR(ParameterOutOfRange, ValidationError);
HEUNPOT_DEFINE_ERROR(NonIntegerExponent, ValidationError);
HEUNPOT_DEFINE_ERROR(UnsupportedTriad, ValidationError);
HEUNPOT_DEFINE_ERROR(UnknownCommand, ValidationError);
HEUNPOT_DEFINE_ERROR(GridTooCoarse, ValidationError);
HEUNPOT_DEFINE_ERROR(PreconditionPNnonzero, ValidationError);
HEUNPOT_DEFINE_ERROR(PreconditionEq32, ValidationError);
HEUNPOT_DEFINE_ERROR(OutOfBranch, ValidationError);
HEUNPOT_DEFINE_ERROR(OutsideDisk, ValidationError);
HEUNPOT_DEFINE_ERROR(PoleAtZ, ValidationError);
HEUNPOT_DEFINE_ERROR(ArgumentOnCut, ValidationError);
HEUNPOT_DEFINE_ERROR(PoleAtGamma, ValidationError);
HEUNPOT_DEFINE_ERROR(GammaDegenerate, ValidationError);
HEUNPOT_DEFINE_ERROR(BranchViolation, ValidationError);

// -- numerical failures ------------------------------------------------------
HEUNPOT_DEFINE_ERROR(NoConvergence, NumericalError);
HEUNPOT_DEFINE_ERROR(IndicialDegenerate, NumericalError);
HEUNPOT_DEFINE_ERROR(RecurrenceBreakdown, NumericalError);
HEUNPOT_DEFINE_ERROR(QuadratureFailure, NumericalError);
HEUNPOT_DEFINE_ERROR(InversionFailure, NumericalError);
HEUNPOT_DEFINE_ERROR(StepUnderflow, NumericalError);
HEUNPOT_DEFINE_ERROR(DerivativeBreakdown, NumericalError);
HEUNPOT_DEFINE_ERROR(BadSpecFile, NumericalError);

#undef HEUNPOT_DEFINE_ERROR

} // namespace heunpot
