#ifndef VVLAB_ERRORS_HPP
#define VVLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vvlab {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define VVLAB_DEFINE_ERROR(NAME)                                 \
  struct NAME : Error {                                          \
    explicit NAME(const std::string& what) : Error(#NAME ": " + what) {} \
  }

VVLAB_DEFINE_ERROR(NonRealSpectrum);
VVLAB_DEFINE_ERROR(EvaluationOutsideBox);
VVLAB_DEFINE_ERROR(UnknownSystem);
VVLAB_DEFINE_ERROR(ComplexEigenvalues);
VVLAB_DEFINE_ERROR(DegenerateSpectrum);
VVLAB_DEFINE_ERROR(ResonantDenominator);
VVLAB_DEFINE_ERROR(NewtonDivergence);
VVLAB_DEFINE_ERROR(DataTooLarge);
VVLAB_DEFINE_ERROR(StateLeftBox);
VVLAB_DEFINE_ERROR(NonFiniteState);
VVLAB_DEFINE_ERROR(GapViolated);
VVLAB_DEFINE_ERROR(ViscosityFloorViolated);
VVLAB_DEFINE_ERROR(NoConnection);
VVLAB_DEFINE_ERROR(NoFlux);
VVLAB_DEFINE_ERROR(InsufficientWindow);
VVLAB_DEFINE_ERROR(GridTooCoarse);
VVLAB_DEFINE_ERROR(HypothesisFailed);
VVLAB_DEFINE_ERROR(ConfigError);

#undef VVLAB_DEFINE_ERROR

}  // namespace vvlab

#endif
